"""Diagrams built from templates: unlinks, Hopf links, null generalized Hopf links,
the twist family M(n, m), Whitehead doubles and a small named corpus."""

import logging
from collections.abc import Callable, Sequence

from ..errors import PreconditionError
from .core import LinkDiagram, Port, mirror
from .pd import parse_pd
from .planar import MorseBuilder, PlanarGraph, Thread, braid_box, braid_closure, full_twist
from .surgery import insert_generalized_positive_crossing

logger = logging.getLogger(__name__)

FIGURE_EIGHT_PD = "X[4,2,5,1] X[8,6,1,5] X[6,3,7,4] X[2,7,3,8]"
WHITEHEAD_PD = "X[6,1,7,2] X[10,7,5,8] X[4,5,1,6] X[2,10,3,9] X[8,4,9,3]"


def generate_unlink(n: int, colors: Sequence[int] | None = None) -> LinkDiagram:
    if n < 1:
        raise PreconditionError("an unlink needs at least one component")
    if colors is not None and len(colors) != n:
        raise PreconditionError(f"expected {n} colors, got {len(colors)}")
    return LinkDiagram(
        crossings=(), components=tuple(() for _ in range(n)), colors=tuple(colors or range(1, n + 1))
    )


def generate_hopf(sign: int = 1) -> LinkDiagram:
    if sign not in (1, -1):
        raise PreconditionError(f"sign must be +1 or -1, got {sign}")
    return braid_closure(2, [sign, sign])


def generate_nghl(orient_colors: Sequence[tuple[int, int]]) -> LinkDiagram:
    """Parallel Hopf fibers with the given orientations and colors.

    Built as one generalized positive crossing through an unlink, each
    component passing once, so components i and j link ε_i·ε_j times.
    """
    if not orient_colors:
        raise PreconditionError("at least one fiber is required")
    d = generate_unlink(len(orient_colors), [color for _, color in orient_colors])
    strands = [(f"c{k}", eps) for k, (eps, _) in enumerate(orient_colors, start=1)]
    return insert_generalized_positive_crossing(d, strands)


def _twist_region(m: MorseBuilder, i: int, full_twists: int) -> None:
    for _ in range(2 * abs(full_twists)):
        m.cross(i, rising_over=full_twists > 0)


def generate_twist_family(n: int, m: int) -> LinkDiagram:
    """The two-component link M(n, m) with linking number zero.

    Component 1 is a meridian of one band of component 2, which carries a
    box of m full twists between its bands and n further Bing-type stages.
    The box crossings are positive for m > 0, which makes the first
    non-vanishing beta invariant, of order n + 1, equal to m.
    """
    if n < 0:
        raise PreconditionError(f"n must be non-negative, got {n}")
    if m == 0:
        raise PreconditionError("m must be nonzero")
    sweep = MorseBuilder()
    sweep.cup(0, 1).cup(2, 1)
    _twist_region(sweep, 1, m)
    for _ in range(n):
        _twist_region(sweep, 0, -1)
        _twist_region(sweep, 1, 1)
    # The meridian, drawn in the mirror: out over both strands of the band, back under them.
    sweep.cup(1, 0)
    sweep.cross(0, rising_over=False).cross(2, rising_over=True)
    sweep.cross(0, rising_over=False).cross(2, rising_over=True)
    sweep.cap(1)
    sweep.cap(1).cap(0)
    d = mirror(sweep.finish().assemble())
    logger.debug("M(%d,%d): %d crossings", n, m, d.n_crossings)
    return d


def whitehead_double(d: LinkDiagram, component: int, clasp_sign: int = -1, twists: int = 0) -> LinkDiagram:
    """Replace a component without self-crossings by its Whitehead double.

    The double runs along the component as an antiparallel pair with
    `twists` full twists and closes with a clasp of two crossings of sign
    `clasp_sign`.
    """
    if not 0 <= component < d.n_components:
        raise PreconditionError(f"component {component + 1} out of range")
    comp = d.components[component]
    if not comp:
        raise PreconditionError("a crossing-free component has no diagram to double")
    if any(d.under_component(c) == d.over_component(c) == component for c in range(d.n_crossings)):
        raise PreconditionError("doubling is only supported for components without self-crossings")
    if clasp_sign not in (1, -1):
        raise PreconditionError(f"clasp sign must be +1 or -1, got {clasp_sign}")

    g = PlanarGraph.from_diagram(d)
    color = d.colors[component]
    on_k = {d.heads[e][0]: d.heads[e][1] for e in comp}
    west: dict[int, int] = {}
    east: dict[int, int] = {}
    portmap: dict[Port, Port] = {}
    for c, a in on_k.items():
        op = 0 if a % 2 == 1 else 1
        west[c], east[c] = g.add_vertex(op), g.add_vertex(op)
        portmap[(c, (a + 3) % 4)] = (west[c], 3)
        portmap[(c, (a + 1) % 4)] = (east[c], 1)

    for e in comp:
        g.remove_edge(d.tails[e])
    moved = [(t, g.remove_edge(t)) for t in [t for t, edge in g.edges.items() if t in portmap or edge.head in portmap]]
    for tail, edge in moved:
        g.connect(portmap.get(tail, tail), portmap.get(edge.head, edge.head), edge.key, edge.color)
    for c, a in on_k.items():
        other_in = (c, (a + 3) % 4) if (c, (a + 3) % 4) in {edge.head for _, edge in moved} else (c, (a + 1) % 4)
        entering = next(edge for _, edge in moved if edge.head == other_in)
        if other_in[1] == (a + 3) % 4:
            g.connect((west[c], 1), (east[c], 3), (*entering.key, 1), entering.color)
        else:
            g.connect((east[c], 3), (west[c], 1), (*entering.key, 1), entering.color)
        del g.over_pair[c]

    for pos, e in enumerate(comp[1:], start=1):
        c1, c2 = d.tails[e][0], d.heads[e][0]
        g.connect((west[c1], 2), (west[c2], 0), (component, pos), color)
        g.connect((east[c2], 0), (east[c1], 2), (component, pos, 1), color)

    c1, c2 = d.tails[comp[0]][0], d.heads[comp[0]][0]
    rising = Thread((west[c1], 2), True, (component, 0), color)
    falling = Thread((east[c1], 2), False, (component, 0, 1), color)
    braid_box(g, [rising, falling], full_twist(2, twists))
    op = 0 if clasp_sign == -1 else 1
    upper, lower = g.add_vertex(op), g.add_vertex(op)
    rising.attach(g, (upper, 3))
    g.connect((upper, 1), (lower, 2), (component, 0, 2), color)
    falling.attach(g, (lower, 0))
    g.connect((east[c2], 0), (lower, 1), (component, 0, 3), color)
    g.connect((lower, 3), (upper, 0), (component, 0, 4), color)
    g.connect((upper, 2), (west[c2], 0), (component, 0, 5), color)
    return g.assemble()


def generate_whitehead_doubled_hopf(sign: int = 1) -> LinkDiagram:
    """Untwisted Whitehead doubles of both components of the Hopf link.

    Sign +1 is the double whose σ(−1) is positive.
    """
    if sign not in (1, -1):
        raise PreconditionError(f"sign must be +1 or -1, got {sign}")
    d = whitehead_double(generate_hopf(1), 0, clasp_sign=-sign)
    return whitehead_double(d, 1, clasp_sign=-sign)


def _bing_clasps(m: MorseBuilder, i: int, band: int, ring: int) -> None:
    """Hook a ring of tag `ring` onto the band ending at positions i (down) and i+1 (up).

    The two clasps have opposite signs, so band and ring do not link.
    """
    m.cup(i + 1, ring)
    m.cross(i, rising_over=True).cross(i + 2, rising_over=True).cap(i + 1)
    m.cup(i + 1, band)
    m.cross(i, rising_over=False).cross(i + 2, rising_over=False).cap(i + 1)


def generate_bing_pairs_gpc(full_twists: int = 1) -> LinkDiagram:
    """The 4-component unlink as two Bing pairs, plus generalized positive crossings.

    Components 1, 2 and 3, 4 are the pairs, colored 1 to 4. Components 1 and
    3 run along a band that passes the twist region down and back up; the
    twist is the braid a generalized positive crossing inserts on those four
    strands. With one twist the result is the Bing double of the Hopf link:
    every linking number vanishes and μ̄(1234) = ±1. With none it is the
    unlink.
    """
    sweep = MorseBuilder()
    sweep.cup(0, 0).cup(1, 0, right_up=False)
    sweep.cup(4, 2).cup(5, 2, right_up=False)
    for letter in full_twist(4, full_twists):
        sweep.cross(1 + abs(letter), rising_over=letter > 0)
    _bing_clasps(sweep, 0, band=0, ring=1)
    _bing_clasps(sweep, 6, band=2, ring=3)
    sweep.cap(5).cap(4)
    sweep.cap(1).cap(0)
    d = sweep.finish().assemble()
    logger.debug("Bing pairs with %d twist(s): %d crossings", full_twists, d.n_crossings)
    return d


CORPUS: dict[str, Callable[[], LinkDiagram]] = {
    "unknot": lambda: generate_unlink(1),
    "unlink2": lambda: generate_unlink(2),
    "unlink3": lambda: generate_unlink(3),
    "hopf+": lambda: generate_hopf(1),
    "hopf-": lambda: generate_hopf(-1),
    "trefoil_right": lambda: braid_closure(2, [1, 1, 1]),
    "trefoil_left": lambda: braid_closure(2, [-1, -1, -1]),
    "figure_eight": lambda: parse_pd(FIGURE_EIGHT_PD),
    "whitehead+": lambda: parse_pd(WHITEHEAD_PD),
    "whitehead-": lambda: mirror(parse_pd(WHITEHEAD_PD)),
    "borromean": lambda: braid_closure(3, [1, -2, 1, -2, 1, -2]),
    "nghl2": lambda: generate_nghl([(1, 1), (-1, 1)]),
    "nghl4": generate_bing_pairs_gpc,
    "wh_hopf+": lambda: generate_whitehead_doubled_hopf(1),
    "wh_hopf-": lambda: generate_whitehead_doubled_hopf(-1),
    "m_0_1": lambda: generate_twist_family(0, 1),
    "m_0_-1": lambda: generate_twist_family(0, -1),
    "m_1_1": lambda: generate_twist_family(1, 1),
}


def corpus(name: str) -> LinkDiagram:
    try:
        factory = CORPUS[name]
    except KeyError as e:
        raise PreconditionError(f"unknown corpus diagram {name!r}; known: {', '.join(CORPUS)}") from e
    return factory()
