"""Diagram moves: smoothing, sublinks, generalized positive crossings and fusion bands.

Strands are referred to either by an edge label (int) or, for a
crossing-free component, by ``"c<k>"`` with k its 1-based component number.
"""

import logging
import re
from collections import defaultdict
from collections.abc import Sequence
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

from ..errors import PreconditionError
from .core import LinkDiagram, Port, switch_crossing
from .faces import FaceStructure, check_planar
from .planar import Key, PlanarGraph, Thread, braid_box, full_twist

logger = logging.getLogger(__name__)

StrandRef = int | str
Side = Literal["left", "right"]

_LOOP_REF = re.compile(r"c(\d+)")

__all__ = [
    "BandCrossing",
    "BandFoot",
    "BandSpec",
    "attach_fusion_band",
    "insert_generalized_positive_crossing",
    "insert_twist",
    "smooth_crossing",
    "sublink",
    "switch_crossing",
]


def _resolve(d: LinkDiagram, ref: StrandRef) -> tuple[str, int]:
    """('edge', label) or ('loop', 0-based component)."""
    if isinstance(ref, int):
        if not 1 <= ref <= 2 * d.n_crossings:
            raise PreconditionError(f"edge {ref} is not in the diagram")
        return "edge", ref
    m = _LOOP_REF.fullmatch(ref.strip())
    if not m:
        raise PreconditionError(f"strand reference {ref!r} is neither an edge label nor c<component>")
    k = int(m.group(1)) - 1
    if not 0 <= k < d.n_components or d.components[k]:
        raise PreconditionError(f"{ref!r} is not a crossing-free component")
    return "loop", k


def _take_loop(g: PlanarGraph, k: int) -> tuple[Key, int]:
    for i, (key, color) in enumerate(g.free_loops):
        if key == (k,):
            del g.free_loops[i]
            return key, color
    raise PreconditionError(f"component {k + 1} is used more than once")


def _check_chords(fs: FaceStructure, chords: list[tuple[int, int, int]]) -> None:
    """Chords (face, edge, edge) inside one face must not interleave."""
    by_face: dict[int, list[tuple[int, int]]] = defaultdict(list)
    for face, e1, e2 in chords:
        a, b = sorted((fs.boundary_position(face, e1), fs.boundary_position(face, e2)))
        for c, dd in by_face[face]:
            if (a < c < b) != (a < dd < b):
                raise PreconditionError(f"the arc through face {face} would cross itself")
        by_face[face].append((a, b))


def smooth_crossing(d: LinkDiagram, index: int) -> LinkDiagram:
    """Oriented smoothing of crossing `index` (0-based)."""
    if not 0 <= index < d.n_crossings:
        raise PreconditionError(f"crossing {index + 1} out of range")
    g = PlanarGraph.from_diagram(d)
    g.smooth(index)
    return g.assemble()


def sublink(d: LinkDiagram, indices: Sequence[int]) -> LinkDiagram:
    """Keep only the given components (0-based), in their original order."""
    keep = set(indices)
    if not keep or len(keep) != len(indices) or not keep <= set(range(d.n_components)):
        raise PreconditionError(f"invalid component selection {list(indices)} for {d.n_components} components")
    g = PlanarGraph.from_diagram(d)
    for k in range(d.n_components):
        if k not in keep:
            g.drop_component(k)
    out = g.assemble()
    return LinkDiagram(
        crossings=out.crossings, components=out.components, colors=tuple(d.colors[k] for k in sorted(keep))
    )


def insert_generalized_positive_crossing(d: LinkDiagram, strands: Sequence[tuple[StrandRef, int]]) -> LinkDiagram:
    """Add a full twist on the listed strands, which must cancel color by color.

    ``strands`` lists (strand, direction) in the order an arc γ meets them;
    direction +1 means the strand crosses γ from its right to its left. Two
    passing strands i, j gain linking direction_i * direction_j.
    """
    counts: dict[int, int] = defaultdict(int)
    for ref, direction in strands:
        kind, value = _resolve(d, ref)
        k = d.component_of_edge[value] if kind == "edge" else value
        counts[d.colors[k]] += direction
    unbalanced = {c: n for c, n in counts.items() if n}
    if unbalanced:
        raise PreconditionError(f"signed pass count per color must vanish, got {unbalanced}")
    return insert_twist(d, strands, 1)


def insert_twist(d: LinkDiagram, strands: Sequence[tuple[StrandRef, int]], times: int) -> LinkDiagram:
    """Insert `times` full twists (negative for the other handedness) across the strands."""
    if not strands:
        raise PreconditionError("no strands to twist")
    fs = check_planar(d)
    resolved = [(*_resolve(d, ref), direction) for ref, direction in strands]
    for _, _, direction in resolved:
        if direction not in (1, -1):
            raise PreconditionError(f"direction must be +1 or -1, got {direction}")
    edges = [v for kind, v, _ in resolved if kind == "edge"]
    if len(set(edges)) != len(edges):
        raise PreconditionError("an edge may pass through the twist only once")

    # Faces visited by the arc: it crosses each edge from the side its direction dictates.
    loops_seen: dict[int, list[int]] = defaultdict(list)
    chords: list[tuple[int, int, int]] = []
    prev: tuple[int, int] | None = None
    for i, (kind, v, direction) in enumerate(resolved):
        if kind == "loop":
            loops_seen[v].append(i)
            continue
        left, right = fs.left_face(v), fs.right_face(v)
        if left == right:
            raise PreconditionError(f"edge {v} has the same face on both sides")
        pre, post = (left, right) if direction == 1 else (right, left)
        if prev is not None:
            if prev[1] != pre:
                raise PreconditionError(f"edges {prev[0]} and {v} do not share a face")
            chords.append((pre, prev[0], v))
        prev = (v, post)
    _check_chords(fs, chords)
    first_edge = next((i for i, (kind, _, _) in enumerate(resolved) if kind == "edge"), len(resolved))
    for k, positions in loops_seen.items():
        ok_single = len(positions) == 1 and positions[0] < first_edge
        ok_pair = (
            len(positions) == 2
            and positions[1] == positions[0] + 1
            and resolved[positions[0]][2] == -resolved[positions[1]][2]
        )
        if not (ok_single or ok_pair):
            raise PreconditionError(
                f"crossing-free component {k + 1} must pass once before any edge, or twice in a row with opposite signs"
            )

    g = PlanarGraph.from_diagram(d)
    threads: list[Thread] = []
    tops: list[Port | None] = []
    loop_keys: dict[int, tuple[Key, int]] = {}
    for kind, v, direction in resolved:
        up = direction == 1
        if kind == "edge":
            tail = d.tails[v]
            edge = g.remove_edge(tail)
            bottom, top = (tail, edge.head) if up else (edge.head, tail)
            threads.append(Thread(bottom, up, edge.key, edge.color))
            tops.append(top)
        else:
            if v not in loop_keys:
                loop_keys[v] = _take_loop(g, v)
                key = loop_keys[v][0]
            else:
                key = (*loop_keys[v][0], 1 << 20)
            threads.append(Thread(None, up, key, loop_keys[v][1]))
            tops.append(None)

    box = list(threads)
    braid_box(g, box, full_twist(len(threads), times))

    done: set[int] = set()
    for i, (kind, v, _) in enumerate(resolved):
        th = threads[i]
        if kind == "edge":
            top = tops[i]
            assert top is not None
            th.attach(g, top)
        elif len(loops_seen[v]) == 1:
            if th.pending_start is None:
                g.free_loops.append(loop_keys[v])
            else:
                th.attach(g, th.pending_start)
        elif v not in done:
            done.add(v)
            other = threads[loops_seen[v][1]]
            rising, falling = (th, other) if th.up else (other, th)
            if rising.port is None or falling.port is None or rising.pending_start is None:
                g.free_loops.append(loop_keys[v])
                continue
            rising.attach(g, falling.port)
            assert falling.pending_start is not None
            g.connect(falling.pending_start, rising.pending_start, (*falling.key, 1 << 21), falling.color)
    out = g.assemble()
    logger.debug("twist on %d strands added %d crossings", len(threads), out.n_crossings - d.n_crossings)
    return out


class BandFoot(BaseModel):
    model_config = ConfigDict(frozen=True)

    edge: StrandRef = Field(description="Edge label, or c<k> for a crossing-free component")
    side: Side = Field(default="left", description="Side of the edge, relative to its orientation, the band leaves")
    position: float = Field(
        default=0.5, ge=0.0, le=1.0, description="Where along the edge the foot sits; any value gives the same diagram"
    )


class BandCrossing(BaseModel):
    model_config = ConfigDict(frozen=True)

    edge: int = Field(description="Edge crossed by the band core")
    over: bool = Field(description="Whether the band passes over the edge")


class BandSpec(BaseModel):
    """An oriented band from one component to another."""

    model_config = ConfigDict(frozen=True)

    start: BandFoot
    end: BandFoot
    path: tuple[BandCrossing, ...] = Field(default=(), description="Edges crossed by the band core, in order")
    twists: int = Field(default=0, description="Half twists added just before the end foot")


def _side_face(fs: FaceStructure, e: int, side: Side) -> int:
    return fs.left_face(e) if side == "left" else fs.right_face(e)


def attach_fusion_band(d: LinkDiagram, b: BandSpec) -> LinkDiagram:
    """Fuse two components along a band; the result has one component fewer."""
    fs = check_planar(d)
    start_kind, start_v = _resolve(d, b.start.edge)
    end_kind, end_v = _resolve(d, b.end.edge)
    start_comp = d.component_of_edge[start_v] if start_kind == "edge" else start_v
    end_comp = d.component_of_edge[end_v] if end_kind == "edge" else end_v
    if start_comp == end_comp:
        raise PreconditionError("a fusion band must connect two different components")
    path_edges = [step.edge for step in b.path]
    for e in path_edges:
        _resolve(d, e)
    if len(set(path_edges)) != len(path_edges):
        raise PreconditionError("the band core may cross an edge only once")
    if {start_v if start_kind == "edge" else -1, end_v if end_kind == "edge" else -1} & set(path_edges):
        raise PreconditionError("the band core may not cross its own feet")
    odd = b.twists % 2 == 1

    # Trace the core through faces.
    face: int | None = _side_face(fs, start_v, b.start.side) if start_kind == "edge" else None
    prev_edge = start_v if start_kind == "edge" else None
    chords: list[tuple[int, int, int]] = []
    crossing_flow: list[bool] = []  # True when the crossed edge runs from the band's right to its left
    for step in b.path:
        left, right = fs.left_face(step.edge), fs.right_face(step.edge)
        if left == right:
            raise PreconditionError(f"edge {step.edge} has the same face on both sides")
        if face is None:
            face = left
        if face not in (left, right):
            raise PreconditionError(f"edge {step.edge} does not border the band's current face")
        if prev_edge is not None:
            chords.append((face, prev_edge, step.edge))
        crossing_flow.append(face == left)
        face = right if face == left else left
        prev_edge = step.edge
    if end_kind == "edge":
        target = _side_face(fs, end_v, b.end.side)
        if face is not None and face != target:
            raise PreconditionError(f"the band reaches face {face} but the end foot lies in face {target}")
        if prev_edge is not None:
            chords.append((target, prev_edge, end_v))
    _check_chords(fs, chords)

    if start_kind == "edge" and end_kind == "edge" and (b.start.side == b.end.side) == odd:
        raise PreconditionError("band orientation is incompatible with the components it joins")

    g = PlanarGraph.from_diagram(d)
    # Which long side of the band carries flow forward along the core at the start.
    if start_kind == "edge":
        left_forward = b.start.side == "left"
    elif end_kind == "edge":
        left_forward = (b.end.side == "left") != odd
    else:
        left_forward = True

    start_loop: tuple[Key, int] | None = None
    if start_kind == "edge":
        tail = d.tails[start_v]
        edge = g.remove_edge(tail)
        fwd = Thread(tail, True, edge.key, edge.color)
        back = Thread(edge.head, False, (*edge.key, 1 << 20), edge.color)
    else:
        start_loop = _take_loop(g, start_v)
        fwd = Thread(None, True, start_loop[0], start_loop[1])
        back = Thread(None, False, (*start_loop[0], 1 << 20), start_loop[1])
    row = [fwd, back] if left_forward else [back, fwd]

    for step, runs_leftward in zip(b.path, crossing_flow, strict=True):
        tail = d.tails[step.edge]
        edge = g.remove_edge(tail)
        v_left = g.add_vertex(0 if step.over else 1)
        v_right = g.add_vertex(0 if step.over else 1)
        for th, v in ((row[0], v_left), (row[1], v_right)):
            th.attach(g, (v, 0))
            th.port = (v, 2)
        order = [(v_right, 1, 3), (v_left, 1, 3)] if runs_leftward else [(v_left, 3, 1), (v_right, 3, 1)]
        cur = tail
        for j, (v, enter, leave) in enumerate(order):
            g.connect(cur, (v, enter), edge.key if j == 0 else (*edge.key, j), edge.color)
            cur = (v, leave)
        g.connect(cur, edge.head, (*edge.key, len(order)), edge.color)

    if b.twists:
        braid_box(g, row, [1 if b.twists > 0 else -1] * abs(b.twists))

    if end_kind == "edge":
        tail = d.tails[end_v]
        edge = g.remove_edge(tail)
        left_th, right_th = row
        if b.end.side == "left":
            left_th.attach(g, edge.head)
            right_th.attach(g, tail)
        else:
            left_th.attach(g, tail)
            right_th.attach(g, edge.head)
    else:
        end_loop = _take_loop(g, end_v)
        if fwd.port is None or back.port is None:
            g.free_loops.append(min(end_loop, start_loop or end_loop))
        else:
            g.connect(fwd.port, back.port, (*end_loop[0], 1 << 20), end_loop[1])

    if start_loop is not None and fwd.pending_start is not None and back.pending_start is not None:
        g.connect(back.pending_start, fwd.pending_start, (*start_loop[0], 1 << 21), start_loop[1])

    out = g.assemble()
    if out.n_components != d.n_components - 1:
        raise PreconditionError("the band does not join two components")
    return out
