"""Planar-diagram (PD) text codes.

Grammar: whitespace-separated terms ``X[a,b,c,d]`` of positive edge labels,
listed counterclockwise from the incoming under-strand, plus optional header
terms ``components=<n>``, ``color <comp>=<c>`` and ``orient <comp>=±1``
(components are numbered from 1 in order of their smallest edge label; extra
components declared by ``components=`` are crossing-free circles appended
last). A component's orientation is read off its under-passes; a component
that only passes over is oriented so that its smallest edge enters the first
slot where it appears. ``orient <comp>=-1`` reverses the inferred orientation.
"""

import logging
import re
from collections import defaultdict

from ..errors import DiagramSyntaxError, DiagramValidationError
from .core import LinkDiagram, Port, build_diagram
from .faces import check_planar

logger = logging.getLogger(__name__)

_TOKENS = [
    ("crossing", re.compile(r"X\[\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\]")),
    ("components", re.compile(r"components\s*=\s*(\d+)")),
    ("color", re.compile(r"color\s+(\d+)\s*=\s*(-?\d+)")),
    ("orient", re.compile(r"orient\s+(\d+)\s*=\s*([+-]?1)\b")),
]
_SEPARATOR = re.compile(r"[\s,;]*")


def _tokenize(text: str) -> list[tuple[str, tuple[int, ...], int]]:
    tokens: list[tuple[str, tuple[int, ...], int]] = []
    pos = _SEPARATOR.match(text, 0).end()  # type: ignore[union-attr]
    while pos < len(text):
        for kind, pattern in _TOKENS:
            m = pattern.match(text, pos)
            if m:
                tokens.append((kind, tuple(int(g) for g in m.groups()), pos))
                pos = m.end()
                break
        else:
            raise DiagramSyntaxError(f"unexpected input {text[pos : pos + 12]!r}", pos)
        pos = _SEPARATOR.match(text, pos).end()  # type: ignore[union-attr]
    return tokens


def _trace(raw: list[tuple[int, ...]], occurrences: dict[int, list[Port]], start: Port) -> list[Port]:
    """Incoming ports along a component, starting from an incoming port."""
    visited: list[Port] = []
    state = start
    while True:
        visited.append(state)
        c, s = state
        out = (s + 2) % 4
        e = raw[c][out]
        a, b = occurrences[e]
        state = b if a == (c, out) else a
        if state == start:
            return visited
        if len(visited) > 4 * len(raw):
            raise DiagramValidationError("edge cycle does not close")


def parse_pd(text: str) -> LinkDiagram:
    raw: list[tuple[int, ...]] = []
    declared: int | None = None
    colors: dict[int, int] = {}
    orients: dict[int, int] = {}
    for kind, values, pos in _tokenize(text):
        if kind == "crossing":
            if 0 in values:
                raise DiagramSyntaxError(f"edge labels must be positive, got X[{','.join(map(str, values))}]", pos)
            raw.append(values)
        elif kind == "components":
            if declared is not None:
                raise DiagramSyntaxError("duplicate components= header", pos)
            declared = values[0]
        elif kind == "color":
            colors[values[0]] = values[1]
        else:
            orients[values[0]] = values[1]

    occurrences: dict[int, list[Port]] = defaultdict(list)
    for c, slots in enumerate(raw):
        for s, e in enumerate(slots):
            occurrences[e].append((c, s))
    for e, occ in sorted(occurrences.items()):
        if len(occ) != 2:
            raise DiagramValidationError(f"edge {e} is used {len(occ)} times, expected 2")

    # Group edges into components via the straight-through strands.
    parent = {e: e for e in occurrences}

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for slots in raw:
        for a, b in ((slots[0], slots[2]), (slots[1], slots[3])):
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, list[int]] = defaultdict(list)
    for e in occurrences:
        groups[find(e)].append(e)
    ordered = sorted(groups.values(), key=min)

    n_components = len(ordered) if declared is None else declared
    if n_components < len(ordered):
        raise DiagramValidationError(f"components={declared} but the crossings carry {len(ordered)} components")
    if n_components == 0:
        raise DiagramValidationError("a link needs at least one component")
    for k in list(colors) + list(orients):
        if not 1 <= k <= n_components:
            raise DiagramValidationError(f"component {k} out of range 1..{n_components}")

    incoming: set[Port] = set()
    cycles: list[list[int]] = []
    for k, edges in enumerate(ordered, start=1):
        unders = sorted(p for e in edges for p in occurrences[e] if p[1] in (0, 2))
        if unders:
            c, _ = unders[0]
            start: Port = (c, 0)
        else:
            start = min(occurrences[min(edges)])
        states = _trace(raw, occurrences, start)
        if unders and any(s == 2 for _, s in states):
            raise DiagramValidationError(f"component {k}: under-strands are not consistently oriented")
        if orients.get(k, 1) == -1:
            states = _trace(raw, occurrences, _reverse_start(raw, occurrences, start))
        incoming.update(states)
        cycle = [raw[c][s] for c, s in states]
        first = cycle.index(min(cycle))
        cycles.append(cycle[first:] + cycle[:first])

    crossings: list[tuple[tuple[int, ...], int]] = []
    for c, slots in enumerate(raw):
        rot = 0 if (c, 0) in incoming else 2
        rotated = tuple(slots[(rot + i) % 4] for i in range(4))
        over_in = 3 if (c, (rot + 3) % 4) in incoming else 1
        crossings.append((rotated, 1 if over_in == 3 else -1))

    components: list[list[int]] = cycles + [[] for _ in range(n_components - len(cycles))]
    d = build_diagram(crossings, components, [colors.get(k, k) for k in range(1, n_components + 1)])
    check_planar(d)
    logger.debug("parsed %d crossings, %d components", d.n_crossings, d.n_components)
    return d


def _reverse_start(raw: list[tuple[int, ...]], occurrences: dict[int, list[Port]], start: Port) -> Port:
    """The incoming port of the same strand traversed backwards."""
    c, s = start
    e = raw[c][s]
    a, b = occurrences[e]
    return b if a == (c, s) else a


def to_pd(d: LinkDiagram) -> str:
    """Canonical text: headers, then the crossing terms on one line."""
    order = [k for k, comp in enumerate(d.components) if comp] + [k for k, comp in enumerate(d.components) if not comp]
    lines: list[str] = []
    if len(order) != sum(1 for comp in d.components if comp):
        lines.append(f"components={d.n_components}")
    for pos, k in enumerate(order, start=1):
        if d.colors[k] != pos:
            lines.append(f"color {pos}={d.colors[k]}")
    for pos, k in enumerate(order, start=1):
        comp = d.components[k]
        if not comp or any(p[1] in (0, 2) for e in comp for p in (d.heads[e], d.tails[e])):
            continue
        first = comp[0]
        default_head = min(d.heads[first], d.tails[first])
        if default_head != d.heads[first]:
            lines.append(f"orient {pos}=-1")
    lines.append(" ".join(f"X[{a},{b},{c},{e}]" for a, b, c, e in (x.slots for x in d.crossings)))
    return "\n".join(lines).strip("\n") + "\n"
