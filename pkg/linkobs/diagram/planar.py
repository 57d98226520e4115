"""Mutable planar graphs used to build and rewire diagrams.

Crossings are vertices with four ends numbered counterclockwise. One pair
of opposite ends carries the over-strand (``over_pair`` 0 means ends 0 and
2, 1 means ends 1 and 3). Edges are directed and tagged with a sort key and
a color; ``assemble`` orders components by their smallest key, starts each
component at that edge and relabels everything into a ``LinkDiagram``.
"""

import logging
from dataclasses import dataclass

from ..errors import InternalAssertionError
from .core import LinkDiagram, Port, build_diagram
from .faces import check_planar

logger = logging.getLogger(__name__)

Key = tuple[int, ...]


@dataclass
class Edge:
    head: Port
    key: Key
    color: int


class PlanarGraph:
    def __init__(self) -> None:
        self.over_pair: dict[int, int] = {}
        self.edges: dict[Port, Edge] = {}
        self.into: dict[Port, Port] = {}
        self.free_loops: list[tuple[Key, int]] = []
        self._next_vertex = 0

    @classmethod
    def from_diagram(cls, d: LinkDiagram) -> "PlanarGraph":
        g = cls()
        for _ in d.crossings:
            g.add_vertex(1)
        for k, comp in enumerate(d.components):
            if not comp:
                g.free_loops.append(((k,), d.colors[k]))
            for pos, e in enumerate(comp):
                g.connect(d.tails[e], d.heads[e], (k, pos), d.colors[k])
        return g

    # Construction
    def add_vertex(self, over_pair: int) -> int:
        v = self._next_vertex
        self._next_vertex += 1
        self.over_pair[v] = over_pair
        return v

    def connect(self, tail: Port, head: Port, key: Key, color: int) -> None:
        if tail in self.edges or head in self.into:
            raise InternalAssertionError(f"port already in use: {tail} -> {head}")
        self.edges[tail] = Edge(head, key, color)
        self.into[head] = tail

    def remove_edge(self, tail: Port) -> Edge:
        edge = self.edges.pop(tail)
        del self.into[edge.head]
        return edge

    def vertex_ports(self, v: int) -> list[Port]:
        return [(v, a) for a in range(4)]

    def incoming_end(self, v: int, pair: int) -> int:
        """End of the given opposite pair (0: ends 0/2, 1: ends 1/3) where the strand enters."""
        for a in (pair, pair + 2):
            if (v, a) in self.into:
                return a
        raise InternalAssertionError(f"no incoming strand on pair {pair} of vertex {v}")

    # Rewiring
    def splice(self, v: int, pass_through: dict[Port, Port]) -> None:
        """Delete vertex v, joining each incoming port to its paired outgoing port."""
        touching = {t: e for t, e in self.edges.items() if t[0] == v or e.head[0] == v}
        for t in touching:
            self.remove_edge(t)
        visited: set[Port] = set()
        for tail, edge in touching.items():
            if tail[0] == v:
                continue
            chain = [edge]
            while chain[-1].head[0] == v:
                nxt = pass_through[chain[-1].head]
                visited.add(nxt)
                chain.append(touching[nxt])
            best = min(chain, key=lambda e: e.key)
            self.connect(tail, chain[-1].head, best.key, best.color)
        for tail in touching:
            if tail[0] != v or tail in visited:
                continue
            cycle = []
            cur = tail
            while cur not in visited:
                visited.add(cur)
                cycle.append(touching[cur])
                cur = pass_through[touching[cur].head]
            best = min(cycle, key=lambda e: e.key)
            self.free_loops.append((best.key, best.color))
        del self.over_pair[v]

    def smooth(self, v: int) -> None:
        """Oriented resolution of the crossing at v."""
        o = self.over_pair[v]
        under_in = self.incoming_end(v, 1 - o)
        over_in = self.incoming_end(v, o)
        self.splice(v, {(v, under_in): (v, (over_in + 2) % 4), (v, over_in): (v, (under_in + 2) % 4)})

    def switch(self, v: int) -> None:
        self.over_pair[v] ^= 1

    def drop_component(self, k: int) -> None:
        """Remove every edge and free loop tagged with component k, straightening what it crossed."""
        for t in [t for t, e in self.edges.items() if e.key[0] == k]:
            self.remove_edge(t)
        self.free_loops = [(key, c) for key, c in self.free_loops if key[0] != k]
        for v in list(self.over_pair):
            live = [p for p in self.vertex_ports(v) if p in self.edges or p in self.into]
            if len(live) == 4:
                continue
            if not live:
                del self.over_pair[v]
                continue
            inp = next(p for p in live if p in self.into)
            self.splice(v, {inp: (v, (inp[1] + 2) % 4)})

    # Output
    def assemble(self) -> LinkDiagram:
        cycles: list[list[Port]] = []
        seen: set[Port] = set()
        for start in sorted(self.edges, key=lambda t: self.edges[t].key):
            if start in seen:
                continue
            cycle: list[Port] = []
            cur = start
            while cur not in seen:
                seen.add(cur)
                cycle.append(cur)
                h = self.edges[cur].head
                cur = (h[0], (h[1] + 2) % 4)
                if cur not in self.edges:
                    raise InternalAssertionError(f"strand breaks at vertex {h[0]}")
            first = min(range(len(cycle)), key=lambda i: self.edges[cycle[i]].key)
            cycles.append(cycle[first:] + cycle[:first])

        items: list[tuple[Key, list[Port], int]] = [
            (self.edges[c[0]].key, c, self.edges[c[0]].color) for c in cycles
        ] + [(key, [], color) for key, color in self.free_loops]
        items.sort(key=lambda item: item[0])

        label: dict[Port, int] = {}
        for _, cycle, _ in items:
            for t in cycle:
                label[t] = len(label) + 1

        def label_at(p: Port) -> int:
            return label[p] if p in label else label[self.into[p]]

        crossings: list[tuple[tuple[int, ...], int]] = []
        for v in sorted(self.over_pair):
            o = self.over_pair[v]
            rot = self.incoming_end(v, 1 - o)
            over_in = self.incoming_end(v, o)
            slots = tuple(label_at((v, (rot + i) % 4)) for i in range(4))
            crossings.append((slots, 1 if (over_in - rot) % 4 == 3 else -1))

        d = build_diagram(
            crossings,
            [[label[t] for t in cycle] for _, cycle, _ in items],
            [color for _, _, color in items],
        )
        check_planar(d)
        return d


@dataclass
class Thread:
    """Loose end of a strand being routed through new crossings."""

    port: Port | None
    up: bool
    key: Key
    color: int
    pieces: int = 0
    pending_start: Port | None = None

    def attach(self, g: PlanarGraph, q: Port) -> None:
        """Run the strand from its current port to q, respecting its flow direction."""
        if self.port is None:
            self.pending_start = q
        else:
            key = self.key if self.pieces == 0 else (*self.key, self.pieces)
            if self.up:
                g.connect(self.port, q, key, self.color)
            else:
                g.connect(q, self.port, key, self.color)
            self.pieces += 1


def braid_box(g: PlanarGraph, threads: list[Thread], word: list[int]) -> None:
    """Route threads upward through a braid word.

    Letter +i crosses positions i and i+1 (1-based) with the strand rising
    from bottom-left to top-right on top; -i puts the other strand on top.
    Threads are updated in place to their top ports.
    """
    for letter in word:
        i = abs(letter) - 1
        v = g.add_vertex(0 if letter > 0 else 1)
        left, right = threads[i], threads[i + 1]
        left.attach(g, (v, 0))
        right.attach(g, (v, 1))
        left.port, right.port = (v, 2), (v, 3)
        threads[i], threads[i + 1] = right, left


def full_twist(t: int, times: int = 1) -> list[int]:
    """Braid word of `times` full twists on t strands; negative times twist the other way."""
    one = [i for _ in range(t) for i in range(1, t)]
    if times >= 0:
        return one * times
    return [-i for i in one] * -times


class _Arc:
    """A strand piece whose ends are either fixed ports or still open in the sweep row."""

    def __init__(self, key: Key, color: int) -> None:
        self.key = key
        self.color = color
        self.ends: dict[str, Port | None] = {"tail": None, "head": None}


class MorseBuilder:
    """Sweep a diagram bottom to top from cups, crossings and caps.

    Positions are numbered from 0 at the left. A cup with ``right_up`` runs
    down its left leg and up its right leg. ``cross(i)`` crosses positions i
    and i+1; with ``rising_over`` the strand going from bottom-left to
    top-right is on top.
    """

    def __init__(self, colors: dict[int, int] | None = None) -> None:
        self.g = PlanarGraph()
        self.colors = colors or {}
        self.row: list[tuple[_Arc, str]] = []
        self._serial = 0

    def _arc(self, tag: int) -> _Arc:
        self._serial += 1
        return _Arc((tag, self._serial), self.colors.get(tag, tag + 1))

    def _close(self, arc: _Arc, end: str, port: Port) -> None:
        arc.ends[end] = port
        tail, head = arc.ends["tail"], arc.ends["head"]
        if tail is not None and head is not None:
            self.g.connect(tail, head, arc.key, arc.color)

    def cup(self, i: int, tag: int, right_up: bool = True) -> "MorseBuilder":
        arc = self._arc(tag)
        self.row[i:i] = [(arc, "tail"), (arc, "head")] if right_up else [(arc, "head"), (arc, "tail")]
        return self

    def cross(self, i: int, rising_over: bool = True) -> "MorseBuilder":
        v = self.g.add_vertex(0 if rising_over else 1)
        (a, ea), (b, eb) = self.row[i], self.row[i + 1]
        self._close(a, ea, (v, 0))
        self._close(b, eb, (v, 1))
        continued = []
        for arc, end, port in ((b, eb, (v, 3)), (a, ea, (v, 2))):
            tag = arc.key[0]
            nxt = self._arc(tag)
            # Flow entering from below leaves through the opposite end, and vice versa.
            if end == "head":
                nxt.ends["tail"] = port
                continued.append((nxt, "head"))
            else:
                nxt.ends["head"] = port
                continued.append((nxt, "tail"))
        self.row[i], self.row[i + 1] = continued
        return self

    def cap(self, i: int) -> "MorseBuilder":
        (a, ea), (b, eb) = self.row[i], self.row[i + 1]
        if ea == eb:
            raise InternalAssertionError(f"cap at position {i} joins two strands flowing the same way")
        del self.row[i : i + 2]
        if a is b:
            self.g.free_loops.append((a.key, a.color))
            return self
        arriving, leaving = (a, b) if ea == "head" else (b, a)
        arriving.key = min(arriving.key, leaving.key)
        if arriving.key == leaving.key:
            arriving.color = leaving.color
        far = leaving.ends["head"]
        if far is None:
            j = self.row.index((leaving, "head"))
            self.row[j] = (arriving, "head")
        else:
            self._close(arriving, "head", far)
        return self

    def finish(self) -> PlanarGraph:
        if self.row:
            raise InternalAssertionError(f"{len(self.row)} strand ends left open")
        return self.g


def braid_closure(n_strands: int, word: list[int]) -> LinkDiagram:
    """Closure of a braid word in the standard generators (+i / -i, 1-based).

    All strands rise through the braid; positive letters give positive crossings.
    """
    if n_strands < 1:
        raise InternalAssertionError("a braid needs at least one strand")
    m = MorseBuilder()
    for k in range(n_strands):
        m.cup(k, 0, right_up=True)
    for letter in word:
        m.cross(n_strands + abs(letter) - 1, rising_over=letter > 0)
    for k in reversed(range(n_strands)):
        m.cap(k)
    d = m.finish().assemble()
    return LinkDiagram(
        crossings=d.crossings, components=d.components, colors=tuple(range(1, d.n_components + 1))
    )
