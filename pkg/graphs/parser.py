"""Graph file parser.

This module reads the line-oriented graph text format:

    # comment
    vertex v
    vertex w
    set both {v,w}
    edge a v -> {w}
    edge b w -> {v,w}
    edge c w -> {both}

A file whose edge ranges are all single vertices yields a FiniteGraph;
otherwise an explicit finite ultragraph. `set` lines name vertex sets that
ranges may refer to.
"""

import logging
import re
from typing import Dict, List, Tuple

from graphs.model import ExplicitUltragraph, FiniteGraph, Ultragraph
from utils.errors import GraphParseError

# Set up logging
logger = logging.getLogger(__name__)

NAME = r"[A-Za-z_][A-Za-z0-9_.']*"
VERTEX_LINE = re.compile(rf"vertex\s+(?P<name>{NAME})\s*$")
SET_LINE = re.compile(rf"set\s+(?P<name>{NAME})\s+(?P<range>\{{.*)$")
EDGE_LINE = re.compile(rf"edge\s+(?P<name>{NAME})\s+(?P<src>{NAME})\s*->\s*(?P<range>\{{.*)$")
RANGE_BODY = re.compile(r"\{(?P<body>[^{}]*)\}\s*$")


def _parse_range(raw: str, start: int, line_no: int, vertices: Dict[str, int],
                 sets: Dict[str, List[str]]) -> List[str]:
    match = RANGE_BODY.match(raw, start)
    if not match:
        raise GraphParseError("range must be a brace-enclosed list", line_no, start + 1)
    members = []
    cursor = match.start("body")
    for token in match.group("body").split(","):
        stripped = token.strip()
        column = cursor + (len(token) - len(token.lstrip())) + 1
        cursor += len(token) + 1
        if not stripped:
            raise GraphParseError("empty range member", line_no, column)
        if stripped in sets:
            members.extend(v for v in sets[stripped] if v not in members)
        elif stripped in vertices:
            if stripped not in members:
                members.append(stripped)
        else:
            raise GraphParseError(f"undeclared vertex {stripped!r}", line_no, column)
    return members


def parse_graph(text: str, name: str = "graph") -> Ultragraph:
    """Parse a graph document.

    Args:
        text: The document text
        name: Name given to the resulting presentation

    Returns:
        FiniteGraph when every range is a single vertex, ExplicitUltragraph otherwise

    Raises:
        GraphParseError: With the 1-based line and column of the first problem
    """
    vertices: Dict[str, int] = {}
    sets: Dict[str, List[str]] = {}
    edges: List[Tuple[str, str, List[str]]] = []
    edge_names = set()
    for line_no, raw in enumerate(text.splitlines(), start=1):
        content = raw.split("#", 1)[0].rstrip()
        stripped = content.lstrip()
        if not stripped:
            continue
        indent = len(content) - len(stripped)
        keyword = stripped.split()[0]
        if keyword == "vertex":
            match = VERTEX_LINE.match(content, indent)
            if not match:
                raise GraphParseError("expected 'vertex NAME'", line_no, indent + 1)
            vname = match.group("name")
            if vname in vertices or vname in sets:
                raise GraphParseError(f"duplicate vertex {vname!r}", line_no, match.start("name") + 1)
            vertices[vname] = line_no
        elif keyword == "set":
            match = SET_LINE.match(content, indent)
            if not match:
                raise GraphParseError("expected 'set NAME {V1,...}'", line_no, indent + 1)
            sname = match.group("name")
            if sname in vertices or sname in sets:
                raise GraphParseError(f"duplicate name {sname!r}", line_no, match.start("name") + 1)
            sets[sname] = _parse_range(content, match.start("range"), line_no, vertices, sets)
        elif keyword == "edge":
            match = EDGE_LINE.match(content, indent)
            if not match:
                raise GraphParseError("expected 'edge NAME SRC -> {V1,...}'", line_no, indent + 1)
            ename, src = match.group("name"), match.group("src")
            if ename in edge_names:
                raise GraphParseError(f"duplicate edge {ename!r}", line_no, match.start("name") + 1)
            if src not in vertices:
                raise GraphParseError(f"undeclared vertex {src!r}", line_no, match.start("src") + 1)
            rng = _parse_range(content, match.start("range"), line_no, vertices, sets)
            edges.append((ename, src, rng))
            edge_names.add(ename)
        else:
            raise GraphParseError(f"unknown statement {keyword!r}", line_no, indent + 1)
    if not edges:
        raise GraphParseError("no edges declared", max(1, len(text.splitlines())), 1)
    logger.info(f"Parsed {name}: {len(vertices)} vertices, {len(edges)} edges")
    if all(len(rng) == 1 for _, _, rng in edges):
        return FiniteGraph(name, list(vertices), [(n, s, r[0]) for n, s, r in edges])
    return ExplicitUltragraph(name, list(vertices), edges)


def load_graph(path: str) -> Ultragraph:
    """Read and parse a graph file; the presentation is named after the file."""
    with open(path, encoding="utf-8") as handle:
        text = handle.read()
    stem = re.sub(r"\.[^./]*$", "", path.replace("\\", "/").rsplit("/", 1)[-1])
    return parse_graph(text, stem or "graph")
