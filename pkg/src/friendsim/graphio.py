"""Line-oriented text serialization of a :class:`SocialGraph`.

Layout (tab-separated, UTF-8, one trailing newline):

    # friendsim-graph v1
    # <optional provenance lines>
    [members]
    id <TAB> display_name <TAB> picture_id <TAB> key=v1|v2;key2=v3
    [edges]
    a <TAB> b
    [interactions]
    a <TAB> b <TAB> joint_publications <TAB> exchanged_messages
      <TAB> common_search_topics <TAB> offline(0|1) <TAB> known_from(or -)

Member attribute keys appear in declaration order, values sorted; empty
value sets are omitted. Edges are written ``a < b`` in ascending order.
The round trip ``load(save(g)) == g`` is lossless; field values may not
contain tabs or newlines (attribute values additionally not ``= | ;``).
"""

from __future__ import annotations

from pathlib import Path
from typing import Iterable

from .errors import ParseError
from .graph import AttributeKey, InteractionRecord, Member, SocialGraph

FORMAT_HEADER = "# friendsim-graph v1"

_RESERVED_FIELD = ("\t", "\n")
_RESERVED_ATTR = ("\t", "\n", "=", "|", ";")


def _check_field(text: str, what: str, reserved=_RESERVED_FIELD) -> str:
    for ch in reserved:
        if ch in text:
            raise ValueError(f"{what} contains reserved character {ch!r}: {text!r}")
    return text


def _format_attributes(member: Member) -> str:
    parts = []
    for key in AttributeKey:
        values = sorted(member.values(key))
        if not values:
            continue
        for v in values:
            _check_field(v, f"attribute value under {key.value}", _RESERVED_ATTR)
        parts.append(f"{key.value}={'|'.join(values)}")
    return ";".join(parts)


def _parse_attributes(text: str, line_no: int) -> dict:
    attrs: dict[AttributeKey, frozenset] = {}
    if not text:
        return attrs
    for part in text.split(";"):
        if "=" not in part:
            raise ParseError(f"malformed attribute entry {part!r}", line_no)
        key_text, values_text = part.split("=", 1)
        try:
            key = AttributeKey(key_text)
        except ValueError:
            raise ParseError(f"unknown attribute key {key_text!r}", line_no) from None
        attrs[key] = frozenset(v for v in values_text.split("|") if v)
    return attrs


def dumps_graph(graph: SocialGraph, provenance: Iterable[str] = ()) -> str:
    lines = [FORMAT_HEADER]
    for note in provenance:
        lines.append(f"# {note}")
    lines.append("[members]")
    for m in graph.members():
        name = _check_field(m.display_name, "display_name")
        pic = _check_field(m.picture_id, "picture_id")
        lines.append(f"{m.id}\t{name}\t{pic}\t{_format_attributes(m)}")
    lines.append("[edges]")
    for a, b in graph.edges():
        lines.append(f"{a}\t{b}")
    lines.append("[interactions]")
    for rec in graph.interactions():
        label = rec.known_from if rec.known_from is not None else "-"
        _check_field(label, "known_from")
        lines.append(
            f"{rec.a}\t{rec.b}\t{rec.joint_publications}\t{rec.exchanged_messages}"
            f"\t{rec.common_search_topics}\t{int(rec.offline_acquaintance)}\t{label}"
        )
    return "\n".join(lines) + "\n"


def loads_graph(text: str) -> SocialGraph:
    members: list[Member] = []
    edges: list[tuple[int, int]] = []
    interactions: list[InteractionRecord] = []
    section = None
    saw_header = False

    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.rstrip("\r")
        if not line:
            continue
        if line.startswith("#"):
            if line == FORMAT_HEADER:
                saw_header = True
            continue
        if line in ("[members]", "[edges]", "[interactions]"):
            section = line[1:-1]
            continue
        if section == "members":
            fields = line.split("\t")
            if len(fields) != 4:
                raise ParseError(f"member row needs 4 fields, got {len(fields)}", line_no)
            mid, name, pic, attrs_text = fields
            members.append(
                Member(
                    id=int(mid),
                    display_name=name,
                    picture_id=pic,
                    attributes=_parse_attributes(attrs_text, line_no),
                )
            )
        elif section == "edges":
            fields = line.split("\t")
            if len(fields) != 2:
                raise ParseError(f"edge row needs 2 fields, got {len(fields)}", line_no)
            edges.append((int(fields[0]), int(fields[1])))
        elif section == "interactions":
            fields = line.split("\t")
            if len(fields) != 7:
                raise ParseError(f"interaction row needs 7 fields, got {len(fields)}", line_no)
            a, b, joint, msgs, topics, offline, label = fields
            interactions.append(
                InteractionRecord(
                    a=int(a),
                    b=int(b),
                    joint_publications=int(joint),
                    exchanged_messages=int(msgs),
                    common_search_topics=int(topics),
                    offline_acquaintance=bool(int(offline)),
                    known_from=None if label == "-" else label,
                )
            )
        else:
            raise ParseError("content before any section header", line_no)

    if not saw_header:
        raise ParseError(f"missing format header {FORMAT_HEADER!r}", 1)
    return SocialGraph(members, edges, interactions)


def save_graph(graph: SocialGraph, path: str | Path, provenance: Iterable[str] = ()) -> None:
    Path(path).write_text(dumps_graph(graph, provenance), encoding="utf-8")


def load_graph(path: str | Path) -> SocialGraph:
    return loads_graph(Path(path).read_text(encoding="utf-8"))
