"""Reading and writing sample forms: one observed recommendation list.

Canonical layout (tab-separated, UTF-8, one row per candidate):

    <network name> - Friend Candidates - FORM
    Date: 12/07/2013
    Time: 22:00
    #	Name	Degree	Shared connections	Known from	Position	Comments
    1	John Doe	2	21	studies	Computer Software Professional
    2	Richard Roe	2	2		College Student

Dates are DD/MM/YYYY (documented explicitly to rule out MM/DD readings).
Missing numeric cells are written ``-``; missing text cells are written
empty. Degree accepts ``2``, ``2nd``/``3rd``-style spellings and ``3+``
(canonicalized to 4, one past the traversal cap) and is always written as
the plain integer. Provenance comment lines starting with ``# `` may
precede the title line; the writer never emits them, so
``write(parse(write(f)))`` is byte-identical to ``write(f)``.

A directory of forms holds one file per time stamp, named
``<network>_<YYYYMMDD>_<HHMM>.tsv`` (spaces in the network name become
hyphens).
"""

from __future__ import annotations

import datetime as dt
import json
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Sequence

from .errors import FormParseError, ValidationError
from .features import extract_features
from .graph import SocialGraph
from .pipeline import RecommendationList

TITLE_SUFFIX = " - Friend Candidates - FORM"
HEADER_ROW = "#\tName\tDegree\tShared connections\tKnown from\tPosition\tComments"
MAX_ROWS = 50

BUNDLE_FORMAT = "friendsim-bundle"
BUNDLE_VERSION = 1

_DEGREE_RE = re.compile(r"^(\d+)(?:st|nd|rd|th)?$")


@dataclass
class SampleRow:
    """One candidate row of a collected or exported form."""

    rank: int
    name: str
    degree: int | None = None
    shared_connections: int | None = None
    known_from: str | None = None
    position_title: str = ""
    comments: str | None = None


@dataclass
class SampleForm:
    """A time-stamped observation of one recommendation list (<= 50 rows)."""

    network_name: str
    date: dt.date
    time: dt.time
    rows: list[SampleRow] = field(default_factory=list)

    @property
    def timestamp(self) -> dt.datetime:
        return dt.datetime.combine(self.date, self.time)

    def validate(self) -> None:
        if len(self.rows) > MAX_ROWS:
            raise ValidationError(f"form has {len(self.rows)} rows, maximum is {MAX_ROWS}")
        for i, row in enumerate(self.rows, start=1):
            if row.rank != i:
                raise ValidationError(f"rank {row.rank} at row {i}: ranks must run 1..n")


def _parse_degree(cell: str, line_no: int) -> int | None:
    cell = cell.strip()
    if cell in ("", "-"):
        return None
    if cell == "3+":
        return 4
    m = _DEGREE_RE.match(cell)
    if not m or int(m.group(1)) < 1:
        raise FormParseError(f"unparseable degree {cell!r}", line_no)
    return int(m.group(1))


def _parse_count(cell: str, line_no: int, what: str) -> int | None:
    cell = cell.strip()
    if cell in ("", "-"):
        return None
    try:
        value = int(cell)
    except ValueError:
        raise FormParseError(f"unparseable {what} {cell!r}", line_no) from None
    if value < 0:
        raise FormParseError(f"negative {what}: {value}", line_no)
    return value


def _parse_text(cell: str) -> str | None:
    cell = cell.strip()
    return None if cell in ("", "-") else cell


def parse_form(data: str | bytes) -> SampleForm:
    """Parse one form document. Errors name the offending line number."""
    text = data.decode("utf-8") if isinstance(data, bytes) else data
    lines = text.splitlines()

    idx = 0
    # provenance comments may precede the title line
    while idx < len(lines) and lines[idx].startswith("# "):
        idx += 1

    def take(what: str) -> tuple[str, int]:
        nonlocal idx
        if idx >= len(lines):
            raise FormParseError(f"unexpected end of document, expected {what}", len(lines))
        line, no = lines[idx].rstrip("\t\r "), idx + 1
        idx += 1
        return line, no

    title, no = take("title line")
    if not title.endswith(TITLE_SUFFIX):
        raise FormParseError(f"title line must end with {TITLE_SUFFIX!r}", no)
    network_name = title[: -len(TITLE_SUFFIX)].strip()

    date_line, no = take("Date line")
    m = re.match(r"^Date:\s*(\d{2})/(\d{2})/(\d{4})$", date_line)
    if not m:
        raise FormParseError(f"malformed Date line {date_line!r} (expected DD/MM/YYYY)", no)
    day, month, year = (int(g) for g in m.groups())
    try:
        date = dt.date(year, month, day)
    except ValueError as exc:
        raise FormParseError(f"invalid date: {exc}", no) from None

    time_line, no = take("Time line")
    m = re.match(r"^Time:\s*(\d{2}):(\d{2})$", time_line)
    if not m:
        raise FormParseError(f"malformed Time line {time_line!r} (expected HH:MM)", no)
    try:
        time = dt.time(int(m.group(1)), int(m.group(2)))
    except ValueError as exc:
        raise FormParseError(f"invalid time: {exc}", no) from None

    header, no = take("header row")
    if header != HEADER_ROW.rstrip():
        raise FormParseError("unexpected header row", no)

    rows: list[SampleRow] = []
    while idx < len(lines):
        raw = lines[idx].rstrip("\r")
        no = idx + 1
        idx += 1
        if not raw.strip():
            continue
        fields = raw.split("\t")
        if len(fields) < 6 or len(fields) > 7:
            raise FormParseError(f"data row has {len(fields)} fields, expected 7", no)
        while len(fields) < 7:
            fields.append("")
        rank_cell, name, degree, shared, known, position, comments = fields
        try:
            rank = int(rank_cell)
        except ValueError:
            raise FormParseError(f"unparseable rank {rank_cell!r}", no) from None
        if rank != len(rows) + 1:
            raise FormParseError(f"rank {rank} out of order, expected {len(rows) + 1}", no)
        if len(rows) == MAX_ROWS:
            raise FormParseError(f"more than {MAX_ROWS} data rows", no)
        rows.append(
            SampleRow(
                rank=rank,
                name=name.strip(),
                degree=_parse_degree(degree, no),
                shared_connections=_parse_count(shared, no, "shared connections"),
                known_from=_parse_text(known),
                position_title=position.strip(),
                comments=_parse_text(comments),
            )
        )

    return SampleForm(network_name=network_name, date=date, time=time, rows=rows)


def _check_cell(text: str, what: str) -> str:
    if "\t" in text or "\n" in text or "\r" in text:
        raise ValueError(f"{what} contains a tab or newline: {text!r}")
    return text


def write_form(form: SampleForm) -> str:
    """Canonical serialization; re-parsing yields a structurally equal form."""
    form.validate()
    out = [
        f"{_check_cell(form.network_name, 'network name')}{TITLE_SUFFIX}",
        f"Date: {form.date.day:02d}/{form.date.month:02d}/{form.date.year:04d}",
        f"Time: {form.time.hour:02d}:{form.time.minute:02d}",
        HEADER_ROW,
    ]
    for row in form.rows:
        cells = [
            str(row.rank),
            _check_cell(row.name, "name"),
            "-" if row.degree is None else str(row.degree),
            "-" if row.shared_connections is None else str(row.shared_connections),
            "" if row.known_from is None else _check_cell(row.known_from, "known_from"),
            _check_cell(row.position_title, "position"),
            "" if row.comments is None else _check_cell(row.comments, "comments"),
        ]
        out.append("\t".join(cells))
    return "\n".join(out) + "\n"


def export_simulated(rec: RecommendationList, graph: SocialGraph, network_name: str) -> SampleForm:
    """Turn a simulated list into a form, recomputing degree and shared
    connections from the graph so exported rows match feature extraction."""
    rows = []
    for entry in rec.entries:
        f = extract_features(graph, rec.receiver_id, entry.candidate_id)
        known_from = None
        if f.known:
            known_from = f.known_from if f.known_from is not None else "acquaintance"
        rows.append(
            SampleRow(
                rank=entry.position,
                name=entry.display_name,
                degree=f.degree,
                shared_connections=f.shared_connections,
                known_from=known_from,
                position_title=entry.occupation_line,
                comments=None,
            )
        )
    return SampleForm(
        network_name=network_name,
        date=rec.timestamp.date(),
        time=rec.timestamp.time().replace(second=0, microsecond=0),
        rows=rows,
    )


# ---------------------------------------------------------------------------
# files, directories, bundles


def form_filename(network_name: str, timestamp: dt.datetime) -> str:
    safe = network_name.replace(" ", "-")
    return f"{safe}_{timestamp:%Y%m%d}_{timestamp:%H%M}.tsv"


def read_form(path: str | Path) -> SampleForm:
    try:
        return parse_form(Path(path).read_text(encoding="utf-8"))
    except FormParseError as exc:
        raise FormParseError(f"{path}: {exc}") from None


def write_form_file(
    path: str | Path, form: SampleForm, provenance: Iterable[str] = ()
) -> None:
    head = "".join(f"# {note}\n" for note in provenance)
    Path(path).write_text(head + write_form(form), encoding="utf-8")


def ingest_directory(path: str | Path) -> list[SampleForm]:
    """Read every ``*.tsv`` form under `path`, ordered by time stamp."""
    root = Path(path)
    forms = [read_form(p) for p in sorted(root.glob("*.tsv"))]
    forms.sort(key=lambda f: f.timestamp)
    return forms


def _row_to_dict(row: SampleRow) -> dict:
    return {
        "rank": row.rank,
        "name": row.name,
        "degree": row.degree,
        "shared_connections": row.shared_connections,
        "known_from": row.known_from,
        "position": row.position_title,
        "comments": row.comments,
    }


def _row_from_dict(d: dict) -> SampleRow:
    return SampleRow(
        rank=d["rank"],
        name=d["name"],
        degree=d["degree"],
        shared_connections=d["shared_connections"],
        known_from=d["known_from"],
        position_title=d["position"],
        comments=d["comments"],
    )


def write_bundle(forms: Sequence[SampleForm], path: str | Path, provenance: Sequence[str] = ()) -> None:
    """Write forms as one normalized JSON bundle (schema documented here).

    Top level: ``format``, ``version``, ``provenance`` (list of strings) and
    ``forms``; each form carries ``network``, ``date`` (ISO), ``time``
    (HH:MM) and its ``rows`` with missing values as null.
    """
    doc = {
        "format": BUNDLE_FORMAT,
        "version": BUNDLE_VERSION,
        "provenance": list(provenance),
        "forms": [
            {
                "network": f.network_name,
                "date": f.date.isoformat(),
                "time": f.time.strftime("%H:%M"),
                "rows": [_row_to_dict(r) for r in f.rows],
            }
            for f in forms
        ],
    }
    Path(path).write_text(json.dumps(doc, indent=2, sort_keys=True) + "\n", encoding="utf-8")


def load_bundle(path: str | Path) -> list[SampleForm]:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    if doc.get("format") != BUNDLE_FORMAT:
        raise ValidationError(f"{path}: not a {BUNDLE_FORMAT} file")
    forms = []
    for fd in doc["forms"]:
        forms.append(
            SampleForm(
                network_name=fd["network"],
                date=dt.date.fromisoformat(fd["date"]),
                time=dt.datetime.strptime(fd["time"], "%H:%M").time(),
                rows=[_row_from_dict(rd) for rd in fd["rows"]],
            )
        )
    return forms
