from collections.abc import Iterable, Sequence
from functools import cached_property
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from ..errors import DiagramValidationError, PreconditionError

Port = tuple[int, int]
"""A crossing slot as (crossing index, slot index)."""

Sign = Literal[1, -1]


class Crossing(BaseModel):
    model_config = ConfigDict(frozen=True)

    slots: tuple[int, int, int, int] = Field(
        description="Edge labels in counterclockwise order, starting at the incoming under-strand"
    )
    sign: Sign = Field(description="Right-hand-rule sign: +1 when the over-strand enters at slot 3")

    @field_validator("slots")
    @classmethod
    def _positive_labels(cls, v: tuple[int, int, int, int]) -> tuple[int, int, int, int]:
        if any(label <= 0 for label in v):
            raise ValueError(f"edge labels must be positive, got {v}")
        return v

    @property
    def incoming_slots(self) -> tuple[int, int]:
        return (0, 3) if self.sign == 1 else (0, 1)

    def switched(self) -> "Crossing":
        """The same crossing with over and under exchanged."""
        s = self.slots
        if self.sign == 1:
            return Crossing(slots=(s[3], s[0], s[1], s[2]), sign=-1)
        return Crossing(slots=(s[1], s[2], s[3], s[0]), sign=1)


class LinkDiagram(BaseModel):
    """Oriented, colored planar diagram of a link.

    Edges carry consecutive labels 1..2c, assigned component by component
    along the orientation. A component with no crossings is stored as an
    empty edge cycle.
    """

    model_config = ConfigDict(frozen=True)

    crossings: tuple[Crossing, ...] = Field(default=(), description="Crossings in a fixed order")
    components: tuple[tuple[int, ...], ...] = Field(
        description="Per component, its edge labels in orientation order; empty for a crossing-free circle"
    )
    colors: tuple[int, ...] = Field(description="Color of each component")

    @model_validator(mode="after")
    def _check_combinatorics(self) -> "LinkDiagram":
        if not self.components:
            raise DiagramValidationError("a link needs at least one component")
        if len(self.colors) != len(self.components):
            raise DiagramValidationError("color map must cover every component")
        labels = [e for comp in self.components for e in comp]
        if sorted(labels) != list(range(1, 2 * len(self.crossings) + 1)):
            raise DiagramValidationError("edge labels must be exactly 1..2c, each on one component")
        heads: dict[int, Port] = {}
        tails: dict[int, Port] = {}
        for ci, x in enumerate(self.crossings):
            for s, e in enumerate(x.slots):
                target = heads if s in x.incoming_slots else tails
                if e in target:
                    raise DiagramValidationError(f"edge {e} is used twice in the same direction")
                target[e] = (ci, s)
        for comp in self.components:
            for i, e in enumerate(comp):
                if e not in heads or e not in tails:
                    raise DiagramValidationError(f"edge {e} must appear in exactly two slots")
                c, s = heads[e]
                nxt = self.crossings[c].slots[(s + 2) % 4]
                if nxt != comp[(i + 1) % len(comp)]:
                    raise DiagramValidationError(
                        f"orientation of edge {e} disagrees with the crossing signs at crossing {c + 1}"
                    )
        return self

    @property
    def n_components(self) -> int:
        return len(self.components)

    @property
    def n_crossings(self) -> int:
        return len(self.crossings)

    @cached_property
    def heads(self) -> dict[int, Port]:
        """Edge label -> the slot it enters."""
        out: dict[int, Port] = {}
        for ci, x in enumerate(self.crossings):
            for s in x.incoming_slots:
                out[x.slots[s]] = (ci, s)
        return out

    @cached_property
    def tails(self) -> dict[int, Port]:
        """Edge label -> the slot it leaves."""
        out: dict[int, Port] = {}
        for ci, x in enumerate(self.crossings):
            for s in range(4):
                if s not in x.incoming_slots:
                    out[x.slots[s]] = (ci, s)
        return out

    @cached_property
    def component_of_edge(self) -> dict[int, int]:
        return {e: k for k, comp in enumerate(self.components) for e in comp}

    def under_component(self, ci: int) -> int:
        return self.component_of_edge[self.crossings[ci].slots[0]]

    def over_component(self, ci: int) -> int:
        return self.component_of_edge[self.crossings[ci].slots[1]]

    def writhe(self) -> int:
        return sum(x.sign for x in self.crossings)


def build_diagram(
    crossings: Sequence[tuple[Sequence[int], int]],
    components: Sequence[Sequence[int]],
    colors: Sequence[int],
) -> LinkDiagram:
    """Relabel edges consecutively along each component and build the diagram.

    Component order and each component's starting edge are kept as given.
    """
    relabel: dict[int, int] = {}
    for comp in components:
        for e in comp:
            relabel[e] = len(relabel) + 1
    try:
        new_crossings = tuple(
            Crossing(slots=tuple(relabel[e] for e in slots), sign=sign)  # type: ignore[arg-type]
            for slots, sign in crossings
        )
    except KeyError as e:
        raise DiagramValidationError(f"edge {e.args[0]} does not belong to any component") from e
    return LinkDiagram(
        crossings=new_crossings,
        components=tuple(tuple(relabel[e] for e in comp) for comp in components),
        colors=tuple(colors),
    )


def linking_matrix(d: LinkDiagram) -> tuple[tuple[int, ...], ...]:
    n = d.n_components
    twice = [[0] * n for _ in range(n)]
    for ci, x in enumerate(d.crossings):
        i, j = d.under_component(ci), d.over_component(ci)
        if i != j:
            twice[i][j] += x.sign
            twice[j][i] += x.sign
    return tuple(tuple(v // 2 for v in row) for row in twice)


def mirror(d: LinkDiagram) -> LinkDiagram:
    return LinkDiagram(crossings=tuple(x.switched() for x in d.crossings), components=d.components, colors=d.colors)


def reverse(d: LinkDiagram, component: int) -> LinkDiagram:
    """Reverse the orientation of one component (0-based index)."""
    if not 0 <= component < d.n_components:
        raise PreconditionError(f"component {component + 1} out of range")
    comp_of = d.component_of_edge
    crossings: list[tuple[Sequence[int], int]] = []
    for x in d.crossings:
        s = x.slots
        under_flips = comp_of[s[0]] == component
        over_flips = comp_of[s[1]] == component
        slots = (s[2], s[3], s[0], s[1]) if under_flips else s
        sign = x.sign if under_flips == over_flips else -x.sign
        crossings.append((slots, sign))
    components = [
        (comp[:1] + tuple(reversed(comp[1:]))) if k == component else comp for k, comp in enumerate(d.components)
    ]
    return build_diagram(crossings, components, d.colors)


def reverse_all(d: LinkDiagram) -> LinkDiagram:
    out = d
    for k in range(d.n_components):
        out = reverse(out, k)
    return out


def concordance_inverse(d: LinkDiagram) -> LinkDiagram:
    """The reverse of the mirror image, the inverse under concordance."""
    return reverse_all(mirror(d))


def switch_crossing(d: LinkDiagram, index: int) -> LinkDiagram:
    crossings = list(d.crossings)
    crossings[index] = crossings[index].switched()
    return LinkDiagram(crossings=tuple(crossings), components=d.components, colors=d.colors)


def pairs(n: int) -> Iterable[tuple[int, int]]:
    return ((i, j) for i in range(n) for j in range(i + 1, n))
