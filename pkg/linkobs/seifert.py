"""Seifert matrices from link diagrams.

Each connected piece of the diagram is first braided by Reidemeister II
moves across faces where two Seifert circles meet incoherently, until the
Seifert circles are nested and coherently oriented. The matrix of the
resulting braid-like surface is then read off crossing by crossing. Pieces
are joined by tubes, each adding a zero row and column.
"""

import logging
from collections import defaultdict

from pydantic import BaseModel, ConfigDict, Field, model_validator
from sympy import Matrix

from .diagram import LinkDiagram, check_planar, sublink
from .diagram.faces import FaceStructure, seifert_circles, seifert_regions
from .diagram.planar import PlanarGraph
from .errors import ConventionError, InternalAssertionError

logger = logging.getLogger(__name__)

MAX_BRAIDING_MOVES = 500


class SeifertMatrix(BaseModel):
    model_config = ConfigDict(frozen=True)

    V: tuple[tuple[int, ...], ...] = Field(description="Seifert form on a basis of the surface's first homology")
    m: int = Field(ge=1, description="Number of link components")
    genus: int = Field(ge=0, description="Genus of the connected Seifert surface")

    @model_validator(mode="after")
    def _size_matches_genus(self) -> "SeifertMatrix":
        n = len(self.V)
        if any(len(row) != n for row in self.V):
            raise InternalAssertionError("Seifert matrix is not square")
        if n != 2 * self.genus + self.m - 1:
            raise InternalAssertionError(f"size {n} does not match genus {self.genus} with {self.m} components")
        return self

    @property
    def size(self) -> int:
        return len(self.V)


def _circle_sides(fs: FaceStructure, circles: list[list[int]], regions: list[int]) -> list[tuple[int, int]]:
    """(region on the right, region on the left) of each circle."""
    return [(regions[fs.right_face(c[0])], regions[fs.left_face(c[0])]) for c in circles]


def _is_braided(sides: list[tuple[int, int]]) -> bool:
    rights = [r for r, _ in sides]
    lefts = [left for _, left in sides]
    return len(set(rights)) == len(rights) and len(set(lefts)) == len(lefts)


def _incoherent_face(
    fs: FaceStructure, circles: list[list[int]], sides: list[tuple[int, int]]
) -> tuple[int, int, int, int] | None:
    """(edge, edge, face, side) for two circles bordering one face from the same side."""
    for side in (0, 1):
        face_of = fs.right_face if side == 0 else fs.left_face
        by_region: dict[int, list[int]] = defaultdict(list)
        for i, s in enumerate(sides):
            by_region[s[side]].append(i)
        for group in by_region.values():
            if len(group) < 2:
                continue
            found: dict[int, dict[int, int]] = defaultdict(dict)
            for i in group:
                for e in circles[i]:
                    found[face_of(e)].setdefault(i, e)
            for face in sorted(found):
                if len(found[face]) >= 2:
                    (_, e1), (_, e2) = sorted(found[face].items())[:2]
                    return e1, e2, face, side
    return None


def _push_over(d: LinkDiagram, e1: int, e2: int, side: int) -> LinkDiagram:
    """Reidemeister II move pushing a finger of e1 across their common face and over e2.

    The new crossings have ends (south, east, north, west); e1 runs
    south-north, e2 west-east. side 0: the face is right of both edges.
    """
    g = PlanarGraph.from_diagram(d)
    first, second = g.remove_edge(d.tails[e1]), g.remove_edge(d.tails[e2])
    p, q = g.add_vertex(0), g.add_vertex(0)
    if side == 0:
        route1 = [d.tails[e1], (p, 2), (p, 0), (q, 0), (q, 2), d.heads[e1]]
        route2 = [d.tails[e2], (q, 1), (q, 3), (p, 1), (p, 3), d.heads[e2]]
    else:
        route1 = [d.tails[e1], (q, 2), (q, 0), (p, 0), (p, 2), d.heads[e1]]
        route2 = [d.tails[e2], (p, 3), (p, 1), (q, 3), (q, 1), d.heads[e2]]
    for edge, route in ((first, route1), (second, route2)):
        for i in range(3):
            g.connect(route[2 * i], route[2 * i + 1], edge.key if i == 0 else (*edge.key, i), edge.color)
    return g.assemble()


def braid_diagram(d: LinkDiagram) -> LinkDiagram:
    """An isotopic diagram of a connected piece whose Seifert circles are coherently nested."""
    for moves in range(MAX_BRAIDING_MOVES + 1):
        fs = check_planar(d)
        circles = seifert_circles(d)
        sides = _circle_sides(fs, circles, seifert_regions(d, fs))
        if _is_braided(sides):
            logger.debug("braided after %d moves: %d circles, %d crossings", moves, len(circles), d.n_crossings)
            return d
        move = _incoherent_face(fs, circles, sides)
        if move is None:
            raise InternalAssertionError("Seifert circles are not braided but no face allows a move")
        e1, e2, _, side = move
        d = _push_over(d, e1, e2, side)
    raise InternalAssertionError(f"braiding did not finish within {MAX_BRAIDING_MOVES} moves")


def _braided_seifert_form(d: LinkDiagram) -> list[list[int]]:
    fs = check_planar(d)
    circles = seifert_circles(d)
    sides = _circle_sides(fs, circles, seifert_regions(d, fs))
    by_right = {r: i for i, (r, _) in enumerate(sides)}
    lefts = {left for _, left in sides}
    order = [next(i for i, (r, _) in enumerate(sides) if r not in lefts)]
    while sides[order[-1]][1] in by_right:
        order.append(by_right[sides[order[-1]][1]])
    if len(order) != len(circles):
        raise InternalAssertionError("Seifert circles do not form a chain")

    # Cut every circle along one ray; the crossing just past the cut comes first.
    position: list[dict[int, int]] = []
    face = -1
    for n, i in enumerate(order):
        circle = circles[i]
        cut = 0 if n == 0 else next((j for j, e in enumerate(circle) if fs.right_face(e) == face), -1)
        if cut < 0:
            raise InternalAssertionError(f"no edge of circle {n} borders the cut face")
        face = fs.left_face(circle[cut])
        seq = circle[cut:] + circle[:cut]
        position.append({d.heads[e][0]: j for j, e in enumerate(seq)})

    level = {i: n for n, i in enumerate(order)}
    circle_of = {e: i for i, c in enumerate(circles) for e in c}
    columns: list[list[int]] = [[] for _ in range(len(order) - 1)]
    for c, x in enumerate(d.crossings):
        a, b = sorted(level[circle_of[x.slots[s]]] for s in x.incoming_slots)
        if b != a + 1:
            raise InternalAssertionError(f"crossing {c + 1} joins circles that are not adjacent")
        columns[a].append(c)
    for n, col in enumerate(columns):
        col.sort(key=lambda c, n=n: position[n + 1][c])

    gens = [(n, col[k], col[k + 1]) for n, col in enumerate(columns) for k in range(len(col) - 1)]
    index = {g: i for i, g in enumerate(gens)}
    v = [[0] * len(gens) for _ in gens]
    sign = [x.sign for x in d.crossings]
    for n, a, b in gens:
        if sign[a] == sign[b]:
            v[index[(n, a, b)]][index[(n, a, b)]] = -sign[a]
    for n, col in enumerate(columns):
        for k in range(len(col) - 2):
            first, second = index[(n, col[k], col[k + 1])], index[(n, col[k + 1], col[k + 2])]
            if sign[col[k + 1]] == 1:
                v[second][first] = 1
            else:
                v[first][second] = -1
    for g in gens:
        n, a, b = g
        pa, pb = position[n + 1][a], position[n + 1][b]
        for h in gens:
            if h[0] != n + 1:
                continue
            qa, qb = position[n + 1][h[1]], position[n + 1][h[2]]
            if qa < pa < qb < pb:
                v[index[h]][index[g]] = 1
            elif pa < qa < pb < qb:
                v[index[h]][index[g]] = -1
    return v


def seifert_matrix(d: LinkDiagram) -> SeifertMatrix:
    fs = check_planar(d)
    blocks: list[list[list[int]]] = []
    pieces: dict[int, list[int]] = defaultdict(list)
    for k, comp in enumerate(d.components):
        if comp:
            pieces[fs.piece_of_crossing[d.heads[comp[0]][0]]].append(k)
        else:
            blocks.append([])
    for piece in sorted(pieces):
        comps = pieces[piece]
        part = d if len(comps) == d.n_components else sublink(d, comps)
        blocks.append(_braided_seifert_form(braid_diagram(part)))

    # Tubes joining the pieces contribute one null generator each.
    size = sum(len(b) for b in blocks) + len(blocks) - 1
    v = [[0] * size for _ in range(size)]
    offset = 0
    for block in blocks:
        for i, row in enumerate(block):
            v[offset + i][offset : offset + len(row)] = row
        offset += len(block) + 1

    genus, odd = divmod(size - d.n_components + 1, 2)
    if odd or genus < 0:
        raise InternalAssertionError(f"a {size}x{size} Seifert matrix cannot bound {d.n_components} components")
    if d.n_components == 1 and size:
        det = (Matrix(v) - Matrix(v).T).det()
        if abs(det) != 1:
            raise ConventionError(f"det(V - V^T) = {det} for a knot")
    logger.debug("Seifert matrix %dx%d, genus %d", size, size, genus)
    return SeifertMatrix(V=tuple(tuple(row) for row in v), m=d.n_components, genus=genus)
