from functools import cached_property

from ..errors import DiagramValidationError
from .core import LinkDiagram, Port


class FaceStructure:
    """Faces of the diagram's rotation system.

    A dart (c, s) leaves crossing c along slot s. Following the edge to its
    other end and turning to the next slot counterclockwise traces a face
    kept on the right of the direction of travel.
    """

    def __init__(self, d: LinkDiagram) -> None:
        self.d = d
        self.face_of_dart: dict[Port, int] = {}
        self.faces: list[list[Port]] = []
        for c in range(d.n_crossings):
            for s in range(4):
                if (c, s) in self.face_of_dart:
                    continue
                orbit: list[Port] = []
                dart: Port = (c, s)
                while dart not in self.face_of_dart:
                    self.face_of_dart[dart] = len(self.faces)
                    orbit.append(dart)
                    dart = self.next_dart(dart)
                self.faces.append(orbit)

    def other_end(self, dart: Port) -> Port:
        c, s = dart
        e = self.d.crossings[c].slots[s]
        head, tail = self.d.heads[e], self.d.tails[e]
        return tail if dart == head else head

    def next_dart(self, dart: Port) -> Port:
        c, s = self.other_end(dart)
        return (c, (s + 1) % 4)

    def edge_of(self, dart: Port) -> int:
        c, s = dart
        return self.d.crossings[c].slots[s]

    def quadrant_face(self, c: int, k: int) -> int:
        """Face occupying the corner between slots k and k+1 of crossing c."""
        return self.face_of_dart[(c, (k + 1) % 4)]

    def right_face(self, e: int) -> int:
        return self.face_of_dart[self.d.tails[e]]

    def left_face(self, e: int) -> int:
        return self.face_of_dart[self.d.heads[e]]

    def boundary_position(self, face: int, e: int) -> int:
        """Index of the edge's dart along the face boundary."""
        for i, dart in enumerate(self.faces[face]):
            if self.edge_of(dart) == e:
                return i
        raise KeyError(f"edge {e} does not border face {face}")

    @cached_property
    def piece_of_crossing(self) -> list[int]:
        """Connected piece index for each crossing, numbered by first crossing."""
        n = self.d.n_crossings
        parent = list(range(n))

        def find(a: int) -> int:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for e in self.d.heads:
            a, b = find(self.d.heads[e][0]), find(self.d.tails[e][0])
            if a != b:
                parent[max(a, b)] = min(a, b)
        roots: dict[int, int] = {}
        return [roots.setdefault(find(c), len(roots)) for c in range(n)]

    @property
    def n_pieces(self) -> int:
        return len(set(self.piece_of_crossing))

    @property
    def n_faces(self) -> int:
        return len(self.faces)


def check_planar(d: LinkDiagram) -> FaceStructure:
    """Raise unless every connected piece satisfies V - E + F = 2."""
    fs = FaceStructure(d)
    expected = d.n_crossings + 2 * fs.n_pieces
    if fs.n_faces != expected:
        raise DiagramValidationError(
            f"rotation system is not planar: {fs.n_faces} faces, expected {expected} "
            f"for {d.n_crossings} crossings in {fs.n_pieces} piece(s)"
        )
    return fs


def smoothing_successor(d: LinkDiagram, e: int) -> int:
    """The edge following e after the oriented smoothing of its head crossing."""
    c, s = d.heads[e]
    x = d.crossings[c]
    t = (s + 1) % 4 if (s + 1) % 4 not in x.incoming_slots else (s - 1) % 4
    return x.slots[t]


def seifert_circles(d: LinkDiagram) -> list[list[int]]:
    """Edges of each Seifert circle in orientation order, each circle starting at its smallest edge."""
    seen: set[int] = set()
    circles: list[list[int]] = []
    for start in sorted(d.heads):
        if start in seen:
            continue
        circle = []
        e = start
        while e not in seen:
            seen.add(e)
            circle.append(e)
            e = smoothing_successor(d, e)
        circles.append(circle)
    return circles


def seifert_regions(d: LinkDiagram, fs: FaceStructure) -> list[int]:
    """Region of the complement of the Seifert circles containing each face."""
    parent = list(range(fs.n_faces))

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for c, x in enumerate(d.crossings):
        # The smoothing opens a channel between the two corners not cut off by its arcs.
        k = 1 if x.sign == 1 else 0
        a, b = find(fs.quadrant_face(c, k)), find(fs.quadrant_face(c, k + 2))
        if a != b:
            parent[max(a, b)] = min(a, b)
    roots: dict[int, int] = {}
    return [roots.setdefault(find(f), len(roots)) for f in range(fs.n_faces)]
