import pytest

from friendsim import kernels
from friendsim.graph import GraphGenConfig, generate_graph

DATA_DIR = __file__.rsplit("/", 1)[0] + "/data"


@pytest.fixture(scope="session", autouse=True)
def warm_kernels():
    # pay the jit compile cost once, before any timed test
    kernels.warmup()


@pytest.fixture(params=["numba", "numpy"])
def backend(request, monkeypatch):
    if request.param == "numba" and not kernels.HAVE_NUMBA:
        pytest.skip("numba unavailable")
    monkeypatch.setenv(kernels.ENV_BACKEND, request.param)
    return request.param


@pytest.fixture(scope="session")
def small_graph():
    return generate_graph(GraphGenConfig(member_count=40, target_mean_degree=5.0, seed=101))


@pytest.fixture(scope="session")
def medium_graph():
    return generate_graph(
        GraphGenConfig(member_count=300, target_mean_degree=10.0, interaction_rate=5.0, seed=3)
    )
