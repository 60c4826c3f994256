"""Command-line entry point: gen-graph, simulate, ingest, analyze, validate.

Every command is a batch job: read inputs, write artifacts under --out,
exit 0 on success or 1 with a diagnostic naming the failing stage. The
effective configuration (profile, overrides, seed) is embedded in every
output artifact header, and seeds are always explicit - there is no hidden
entropy anywhere.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import sys
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from . import analysis, forms, graphio, profiles
from .errors import FriendsimError
from .graph import GraphGenConfig, generate_graph
from .pipeline import SimState, next_visit

log = logging.getLogger(__name__)


class Command(Enum):
    GEN_GRAPH = "gen-graph"
    SIMULATE = "simulate"
    INGEST = "ingest"
    ANALYZE = "analyze"
    VALIDATE = "validate"


@dataclass
class RunConfig:
    """Everything one invocation needs; unused fields stay at defaults."""

    command: Command
    seed: int = 0
    profile_name: str = "linkedin-like"
    profiles_file: Path | None = None
    overrides: dict[str, str] = field(default_factory=dict)
    graph_path: Path | None = None
    input_path: Path | None = None
    observed_path: Path | None = None
    out_path: Path | None = None
    visits: int = 1
    receiver: int | None = None
    parallel_seeds: int = 1
    # gen-graph parameters
    members: int = 500
    mean_degree: float = 8.0
    degree_skew: float = 0.0
    offline_prob: float = 0.5
    interaction_rate: float = 4.0
    # analyze parameters
    ratio_threshold: float = 3.0


def _resolve_profile(config: RunConfig) -> profiles.NetworkProfile:
    if config.profiles_file is not None:
        table = profiles.load_profiles(config.profiles_file)
        if config.profile_name not in table:
            raise FriendsimError(
                f"profile {config.profile_name!r} not found in {config.profiles_file}"
            )
        profile = table[config.profile_name]
    else:
        profile = profiles.get_profile(config.profile_name)
    return profiles.apply_overrides(profile, config.overrides)


def _provenance(config: RunConfig, profile: profiles.NetworkProfile | None = None) -> list[str]:
    lines = [f"friendsim {config.command.value} v1"]
    lines.append(f"seed = {config.seed}")
    if config.command is Command.SIMULATE:
        lines.append(f"visits = {config.visits}")
        lines.append(f"receiver = {config.receiver}")
    for key in sorted(config.overrides):
        lines.append(f"override {key} = {config.overrides[key]}")
    if profile is not None:
        lines.extend(f"profile.{line}" for line in profiles.format_profile(profile))
    return lines


def _load_forms(path: Path) -> list[forms.SampleForm]:
    if path.is_dir():
        return forms.ingest_directory(path)
    return forms.load_bundle(path)


# ---------------------------------------------------------------------------
# commands


def _cmd_gen_graph(config: RunConfig) -> None:
    gen = GraphGenConfig(
        member_count=config.members,
        target_mean_degree=config.mean_degree,
        degree_skew=config.degree_skew,
        offline_acquaintance_prob=config.offline_prob,
        interaction_rate=config.interaction_rate,
        seed=config.seed,
    )
    graph = generate_graph(gen)
    provenance = _provenance(config) + [
        f"members = {config.members}",
        f"mean_degree = {config.mean_degree}",
        f"degree_skew = {config.degree_skew}",
        f"offline_prob = {config.offline_prob}",
        f"interaction_rate = {config.interaction_rate}",
    ]
    graphio.save_graph(graph, config.out_path, provenance)
    log.info(
        "wrote graph with %d members, %d edges to %s",
        graph.member_count,
        graph.edge_count,
        config.out_path,
    )


def _simulate_one_seed(
    graph_path: str, config: RunConfig, seed: int, out_dir: Path
) -> int:
    graph = graphio.load_graph(graph_path)
    profile = _resolve_profile(config)
    receiver = config.receiver if config.receiver is not None else graph.member_ids[0]
    seed_config = dataclasses.replace(config, seed=seed, receiver=receiver)
    provenance = _provenance(seed_config, profile)
    state = SimState.create(graph, receiver, profile, seed)
    out_dir.mkdir(parents=True, exist_ok=True)
    for _ in range(config.visits):
        rec = next_visit(state)
        form = forms.export_simulated(rec, graph, profile.name)
        path = out_dir / forms.form_filename(profile.name, rec.timestamp)
        forms.write_form_file(path, form, provenance)
    return config.visits


def _cmd_simulate(config: RunConfig) -> None:
    if config.graph_path is None:
        raise FriendsimError("simulate requires --graph")
    profile = _resolve_profile(config)  # fail fast on bad profile or overrides
    log.info("effective profile: %s", "; ".join(profiles.format_profile(profile)))
    out = config.out_path
    if config.parallel_seeds > 1:
        seeds = [config.seed + i for i in range(config.parallel_seeds)]
        with ProcessPoolExecutor(max_workers=min(len(seeds), 8)) as pool:
            futures = [
                pool.submit(
                    _simulate_one_seed,
                    str(config.graph_path),
                    config,
                    s,
                    out / f"seed-{s}",
                )
                for s in seeds
            ]
            for f in futures:
                f.result()
        log.info("wrote %d visits for each of %d seeds under %s", config.visits, len(seeds), out)
    else:
        _simulate_one_seed(str(config.graph_path), config, config.seed, out)
        log.info("wrote %d visit forms under %s", config.visits, out)


def _cmd_ingest(config: RunConfig) -> None:
    if config.input_path is None or not config.input_path.is_dir():
        raise FriendsimError("ingest requires --input pointing at a directory of forms")
    collected = forms.ingest_directory(config.input_path)
    if not collected:
        raise FriendsimError(f"no .tsv forms found under {config.input_path}")
    forms.write_bundle(collected, config.out_path, _provenance(config))
    rows = sum(len(f.rows) for f in collected)
    log.info("ingested %d forms (%d rows) into %s", len(collected), rows, config.out_path)


def _cmd_analyze(config: RunConfig) -> None:
    collected = _load_forms(config.input_path)
    if not collected:
        raise FriendsimError("no forms to analyze")
    out = config.out_path
    out.mkdir(parents=True, exist_ok=True)
    provenance = _provenance(config)
    networks = sorted({f.network_name for f in collected})

    comment_head = "".join(f"# {note}\n" for note in provenance)
    trends: dict[str, analysis.TrendClass | None] = {}
    for variable in analysis.FORM_VARIABLES:
        values, positions = analysis.variable_column(collected, variable)
        hist = analysis.histogram(values)
        (out / f"histogram_{variable}.csv").write_text(
            comment_head + hist.to_csv(), encoding="utf-8"
        )
        try:
            trends[variable] = analysis.classify_trend(values, positions)
        except FriendsimError:
            trends[variable] = None

    churn = analysis.mean_visit_churn(collected)
    lines = [f"# {note}" for note in provenance]
    lines.append(f"Trend report - networks: {', '.join(networks)}")
    lines.append(f"forms: {len(collected)}, rows: {sum(len(f.rows) for f in collected)}")
    lines.append("")
    for variable, trend in trends.items():
        desc = trend.describe() if trend else "(insufficient data)"
        ev = ""
        if trend:
            ev = ", ".join(f"{k}={v:.4g}" for k, v in sorted(trend.evidence.items()))
        lines.append(f"{variable:<20} {desc:<36} {ev}")
    lines.append("")
    lines.append(
        "mean per-visit churn: "
        + ("n/a (fewer than 2 forms)" if churn is None else f"{churn:.4f}")
    )
    (out / "trend_report.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")

    report_doc = {
        "format": "friendsim-trend-report",
        "version": 1,
        "provenance": provenance,
        "networks": networks,
        "forms": len(collected),
        "variables": {
            variable: (
                None
                if trend is None
                else {
                    "tag": trend.tag.value,
                    "kind": trend.kind.value if trend.kind else None,
                    "evidence": dict(trend.evidence),
                }
            )
            for variable, trend in trends.items()
        },
        "mean_visit_churn": churn,
    }
    (out / "trend_report.json").write_text(
        json.dumps(report_doc, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )

    if config.graph_path is not None and config.receiver is not None:
        _write_location_report(config, collected, out, provenance)
    else:
        log.info("location report skipped (needs --graph and --receiver)")
    log.info("wrote analysis reports under %s", out)


def _write_location_report(config, collected, out: Path, provenance: list[str]) -> None:
    graph = graphio.load_graph(config.graph_path)
    receiver = config.receiver
    friends = sorted(graph.neighbors(receiver))
    if not friends:
        raise FriendsimError(f"receiver {receiver} has no friends to compare against")

    by_name: dict[str, list[int]] = {}
    for m in graph.members():
        by_name.setdefault(m.display_name, []).append(m.id)
    candidate_ids = []
    unresolved = 0
    for form in collected:
        for row in form.rows:
            matches = by_name.get(row.name, [])
            if len(matches) == 1:
                candidate_ids.append(matches[0])
            else:
                unresolved += 1
    if not candidate_ids:
        raise FriendsimError("no candidate names resolved against the graph")
    if unresolved:
        log.warning("%d candidate rows did not resolve to a unique member", unresolved)

    reference = analysis.location_shares(graph, friends)
    observed = analysis.location_shares(graph, candidate_ids)
    comparison = analysis.location_interestingness(reference, observed, config.ratio_threshold)

    lines = [f"# {note}" for note in provenance]
    lines.append(f"Location report - receiver {receiver}, threshold {config.ratio_threshold}")
    lines.append("")
    header = f"{'location':<20} {'friends':<10} {'candidates':<12} {'ratio':<10} flagged"
    lines.append(header)
    lines.append("-" * len(header))
    for i, cat in enumerate(comparison.categories):
        lines.append(
            f"{cat:<20} {comparison.reference_shares[i]:<10.4f} "
            f"{comparison.observed_shares[i]:<12.4f} {comparison.ratios[i]:<10.3f} "
            f"{'yes' if comparison.flagged[i] else 'no'}"
        )
    (out / "location_report.txt").write_text("\n".join(lines) + "\n", encoding="utf-8")

    doc = {
        "format": "friendsim-location-report",
        "version": 1,
        "provenance": provenance,
        "receiver": receiver,
        "ratio_threshold": config.ratio_threshold,
        "categories": comparison.categories,
        "reference_shares": comparison.reference_shares,
        "observed_shares": comparison.observed_shares,
        "ratios": comparison.ratios,
        "flagged": comparison.flagged,
    }
    (out / "location_report.json").write_text(
        json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )


def _cmd_validate(config: RunConfig) -> None:
    simulated = _load_forms(config.input_path)
    observed = _load_forms(config.observed_path)
    report = analysis.compare_lists(simulated, observed)
    out = config.out_path
    out.mkdir(parents=True, exist_ok=True)
    head = "".join(f"# {note}\n" for note in _provenance(config))
    (out / "similarity_report.txt").write_text(head + report.to_text(), encoding="utf-8")
    doc = report.to_dict()
    doc["provenance"] = _provenance(config)
    (out / "similarity_report.json").write_text(
        json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8"
    )
    log.info("wrote similarity report under %s", out)


_HANDLERS = {
    Command.GEN_GRAPH: _cmd_gen_graph,
    Command.SIMULATE: _cmd_simulate,
    Command.INGEST: _cmd_ingest,
    Command.ANALYZE: _cmd_analyze,
    Command.VALIDATE: _cmd_validate,
}


def run(config: RunConfig) -> int:
    """Execute one command; returns the process exit status."""
    log.info(
        "running %s (seed=%d, profile=%s, overrides=%s)",
        config.command.value,
        config.seed,
        config.profile_name,
        config.overrides or "{}",
    )
    try:
        _HANDLERS[config.command](config)
    except FriendsimError as exc:
        print(f"error [{config.command.value}]: {exc}", file=sys.stderr)
        return 1
    except FileNotFoundError as exc:
        print(f"error [{config.command.value}]: {exc}", file=sys.stderr)
        return 1
    return 0


# ---------------------------------------------------------------------------
# argument parsing


def _parse_overrides(pairs: list[str]) -> dict[str, str]:
    overrides = {}
    for pair in pairs:
        if "=" not in pair:
            raise argparse.ArgumentTypeError(f"--set expects key=value, got {pair!r}")
        key, value = pair.split("=", 1)
        overrides[key.strip()] = value.strip()
    return overrides


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="friendsim",
        description="Simulate and analyze social-network friend-recommendation lists.",
    )
    parser.add_argument("-v", "--verbose", action="store_true", help="debug logging")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen-graph", help="generate a synthetic social graph file")
    p.add_argument("--members", type=int, default=500)
    p.add_argument("--mean-degree", type=float, default=8.0)
    p.add_argument("--degree-skew", type=float, default=0.0,
                   help="lognormal sigma of member popularity (0 = uniform wiring)")
    p.add_argument("--offline-prob", type=float, default=0.5)
    p.add_argument("--interaction-rate", type=float, default=4.0)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out", type=Path, required=True, help="graph file to write")

    p = sub.add_parser("simulate", help="run visits and export one form per visit")
    p.add_argument("--graph", type=Path, required=True)
    p.add_argument("--profile", default="linkedin-like")
    p.add_argument("--profiles-file", type=Path, default=None,
                   help="profiles config file (else built-in presets)")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--visits", type=int, default=1)
    p.add_argument("--receiver", type=int, default=None,
                   help="receiver member id (default: lowest id in the graph)")
    p.add_argument("--set", dest="overrides", action="append", default=[],
                   metavar="KEY=VALUE", help="profile override, repeatable")
    p.add_argument("--parallel-seeds", type=int, default=1,
                   help="fan out N independent seeds, one output dir each")
    p.add_argument("--out", type=Path, required=True, help="output directory")

    p = sub.add_parser("ingest", help="parse a directory of forms into a bundle")
    p.add_argument("--input", type=Path, required=True)
    p.add_argument("--out", type=Path, required=True, help="bundle JSON to write")

    p = sub.add_parser("analyze", help="histogram/trend/location reports for a form set")
    p.add_argument("--input", type=Path, required=True, help="bundle file or form directory")
    p.add_argument("--graph", type=Path, default=None,
                   help="graph file for the location comparison")
    p.add_argument("--receiver", type=int, default=None)
    p.add_argument("--ratio-threshold", type=float, default=3.0)
    p.add_argument("--out", type=Path, required=True, help="output directory")

    p = sub.add_parser("validate", help="compare simulated forms against observed ones")
    p.add_argument("--simulated", type=Path, required=True, help="bundle file or directory")
    p.add_argument("--observed", type=Path, required=True, help="bundle file or directory")
    p.add_argument("--out", type=Path, required=True, help="output directory")

    return parser


def config_from_args(args: argparse.Namespace) -> RunConfig:
    command = Command(args.command)
    config = RunConfig(command=command)
    if command is Command.GEN_GRAPH:
        config.members = args.members
        config.mean_degree = args.mean_degree
        config.degree_skew = args.degree_skew
        config.offline_prob = args.offline_prob
        config.interaction_rate = args.interaction_rate
        config.seed = args.seed
        config.out_path = args.out
    elif command is Command.SIMULATE:
        config.graph_path = args.graph
        config.profile_name = args.profile
        config.profiles_file = args.profiles_file
        config.seed = args.seed
        config.visits = args.visits
        config.receiver = args.receiver
        config.overrides = _parse_overrides(args.overrides)
        config.parallel_seeds = args.parallel_seeds
        config.out_path = args.out
    elif command is Command.INGEST:
        config.input_path = args.input
        config.out_path = args.out
    elif command is Command.ANALYZE:
        config.input_path = args.input
        config.graph_path = args.graph
        config.receiver = args.receiver
        config.ratio_threshold = args.ratio_threshold
        config.out_path = args.out
    elif command is Command.VALIDATE:
        config.input_path = args.simulated
        config.observed_path = args.observed
        config.out_path = args.out
    return config


def main(argv: list[str] | None = None) -> None:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.INFO,
        format="%(levelname)s %(name)s: %(message)s",
        stream=sys.stderr,
    )
    sys.exit(run(config_from_args(args)))


if __name__ == "__main__":
    main()
