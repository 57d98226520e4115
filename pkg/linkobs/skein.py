"""Conway polynomial by the skein relation, used to check the Seifert route."""

import logging

from .config import DEFAULT_SKEIN_BOUND
from .diagram import LinkDiagram, smooth_crossing, switch_crossing
from .errors import CrossingBoundError
from .polyring import ConwayForm, ZPoly

logger = logging.getLogger(__name__)

ONE = ZPoly.of([1], "z")
Z = ZPoly.of([0, 1], "z")


def first_ascending_crossing(d: LinkDiagram) -> int | None:
    """First crossing reached along an under-strand when walking the components in order.

    None means the diagram is descending: an unlink.
    """
    seen: set[int] = set()
    for comp in d.components:
        for e in comp:
            c, slot = d.heads[e]
            if c in seen:
                continue
            seen.add(c)
            if slot == 0:
                return c
    return None


def _nabla(d: LinkDiagram) -> ZPoly:
    c = first_ascending_crossing(d)
    if c is None:
        return ONE if d.n_components == 1 else ZPoly(var="z")
    switched = _nabla(switch_crossing(d, c))
    smoothed = Z * _nabla(smooth_crossing(d, c))
    # ∇(L+) - ∇(L-) = z ∇(L0)
    return switched + smoothed if d.crossings[c].sign == 1 else switched - smoothed


def skein_conway_oracle(d: LinkDiagram, bound: int = DEFAULT_SKEIN_BOUND) -> ConwayForm:
    if d.n_crossings > bound:
        raise CrossingBoundError(f"skein oracle is limited to {bound} crossings, diagram has {d.n_crossings}")
    form = ConwayForm.from_z(d.n_components, _nabla(d))
    logger.debug("skein ∇ for %d crossings: %s", d.n_crossings, form)
    return form
