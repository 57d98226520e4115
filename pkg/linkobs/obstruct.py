"""Obstruction battery for 0-positivity and related relations.

Every test is one-sided: it can show a link is not in the target class,
never that it is. The aggregate is NOT_MEMBER when some test fires and
INCONCLUSIVE otherwise.
"""

import logging
from collections.abc import Callable
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, JsonValue

from .config import Settings
from .diagram import LinkDiagram, linking_matrix, mirror, sublink
from .diagram.core import pairs
from .errors import LinkObsError, PreconditionError
from .milnor import MilnorInvariants, beta_first_nonvanishing, sato_levine
from .polyring import ConwayForm, conway_from_seifert
from .seifert import SeifertMatrix, seifert_matrix
from .signature import signature_function

logger = logging.getLogger(__name__)

Verdict = Literal["OBSTRUCTED", "PASS", "INAPPLICABLE", "UNKNOWN"]
Target = Literal["P0", "P0_of_mirror", "CP2_single", "split_geq0"]

BETA_LEVEL_CAP = 3

TEST_NAMES = {
    "T1": "pairwise linking numbers vanish",
    "T2": "triple Milnor invariants vanish",
    "T3": "Sato-Levine invariants are non-positive",
    "T4": "first nonvanishing generalized Sato-Levine invariants are non-positive",
    "T5": "Levine-Tristram signature function is non-positive",
    "T6": "Conway coefficient sign rule for a single CP(2)",
    "T7": "Conway polynomial vanishes",
}


class CheckResult(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: str = Field(description="Stable test id, T1 to T7")
    name: str = Field(description="What the test checks")
    verdict: Verdict
    evidence: dict[str, JsonValue] = Field(default_factory=dict, description="Invariant values behind the verdict")
    caveat: str | None = Field(default=None, description="Limits of the evidence, e.g. grid-located jumps")
    diagnostic: str | None = Field(default=None, description="Why a test could not be decided")


class ObstructionReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    target: Target
    n_components: int = Field(ge=1)
    tests: tuple[CheckResult, ...] = Field(description="Results in test-id order")
    aggregate: Literal["NOT_MEMBER", "INCONCLUSIVE"] = Field(
        description="NOT_MEMBER if any test is OBSTRUCTED; membership is never claimed"
    )

    @property
    def obstructed(self) -> list[str]:
        return [t.id for t in self.tests if t.verdict == "OBSTRUCTED"]


def _first_nonzero(c: ConwayForm) -> tuple[int, int] | None:
    return next(((k, a) for k, a in enumerate(c.coeffs) if a), None)


def check_conway_sign(c: ConwayForm) -> Verdict:
    """(-1)^k a_k <= 0 for the first nonzero a_k of a 2-component link slice in a punctured CP(2)."""
    if c.m != 2:
        raise PreconditionError(f"the Conway sign rule is for 2-component links, got {c.m}")
    first = _first_nonzero(c)
    if first is None:
        return "PASS"
    k, a = first
    if k == 0:
        # a0 is the linking number, which T1 handles.
        return "INAPPLICABLE"
    return "OBSTRUCTED" if (-1) ** k * a > 0 else "PASS"


class _Battery:
    def __init__(self, d: LinkDiagram, settings: Settings) -> None:
        self.d = d
        self.settings = settings
        self.lk = linking_matrix(d)
        self._seifert: SeifertMatrix | None = None

    @property
    def seifert(self) -> SeifertMatrix:
        if self._seifert is None:
            self._seifert = seifert_matrix(self.d)
        return self._seifert

    @property
    def conway(self) -> ConwayForm:
        return conway_from_seifert(self.seifert)

    def _lk_zero_pairs(self) -> list[tuple[int, int]]:
        return [(i, j) for i, j in pairs(self.d.n_components) if self.lk[i][j] == 0]

    def t1(self) -> CheckResult:
        if self.d.n_components < 2:
            return _result("T1", "INAPPLICABLE")
        bad: list[JsonValue] = [
            [i + 1, j + 1, self.lk[i][j]] for i, j in pairs(self.d.n_components) if self.lk[i][j]
        ]
        evidence: dict[str, JsonValue] = {"linking_matrix": [list(row) for row in self.lk]}
        if bad:
            evidence["nonzero"] = bad
        return _result("T1", "OBSTRUCTED" if bad else "PASS", evidence)

    def t2(self) -> CheckResult:
        m = self.d.n_components
        if m < 3:
            return _result("T2", "INAPPLICABLE")
        milnor = MilnorInvariants(self.d, self.settings.q_max)
        values: list[JsonValue] = []
        verdict: Verdict = "PASS"
        for i in range(1, m + 1):
            for j in range(i + 1, m + 1):
                for k in range(j + 1, m + 1):
                    mv = milnor.mu((i, j, k))
                    values.append({"index": [i, j, k], "value": mv.value, "indeterminacy": mv.indeterminacy})
                    if mv.indeterminacy:
                        verdict = "UNKNOWN" if verdict == "PASS" else verdict
                    elif mv.value:
                        verdict = "OBSTRUCTED"
        return _result("T2", verdict, {"mu_ijk": values})

    def t3(self) -> CheckResult:
        if self.d.n_components < 2:
            return _result("T3", "INAPPLICABLE")
        values: list[JsonValue] = []
        verdict: Verdict = "PASS"
        for i, j in self._lk_zero_pairs():
            beta = sato_levine(sublink(self.d, [i, j]))
            values.append({"pair": [i + 1, j + 1], "beta": beta})
            if beta > 0:
                verdict = "OBSTRUCTED"
        if not values:
            return _result("T3", "INAPPLICABLE", diagnostic="no 2-component sublink has linking number 0")
        return _result("T3", verdict, {"sato_levine": values})

    def t4(self) -> CheckResult:
        if self.d.n_components < 2:
            return _result("T4", "INAPPLICABLE")
        n_max = min(BETA_LEVEL_CAP, self.settings.q_max // 2 - 1)
        values: list[JsonValue] = []
        verdict: Verdict = "PASS"
        for i, j in self._lk_zero_pairs():
            beta = beta_first_nonvanishing(sublink(self.d, [i, j]), n_max, self.settings.q_max)
            if beta is None:
                values.append({"pair": [i + 1, j + 1], "all_zero_up_to": n_max})
                continue
            values.append(
                {
                    "pair": [i + 1, j + 1],
                    "n": beta.n,
                    "value": beta.value,
                    "pattern": list(beta.pattern),
                    "indeterminacy": beta.indeterminacy,
                }
            )
            if beta.indeterminacy:
                verdict = "UNKNOWN" if verdict == "PASS" else verdict
            elif beta.value > 0:
                verdict = "OBSTRUCTED"
        if not values:
            return _result("T4", "INAPPLICABLE", diagnostic="no 2-component sublink has linking number 0")
        caveat = f"levels above {n_max} are not examined"
        return _result("T4", verdict, {"beta_n": values}, caveat=caveat)

    def t5(self) -> CheckResult:
        sf = signature_function(self.seifert, self.d.n_components, self.settings.grid_depth)
        highest = max(sf.arc_values + sf.point_values)
        evidence: dict[str, JsonValue] = {
            "max_signature": highest,
            "arc_values": list(sf.full_arc_values()),
            "max_nullity": sf.max_nullity,
            "nullity_bound": self.d.n_components - 1,
            "certification": sf.certification,
        }
        if highest > 0:
            return _result("T5", "OBSTRUCTED", evidence)
        caveat = "jumps were located on a grid and some may be missed" if sf.certification == "grid-certified" else None
        return _result("T5", "PASS", evidence, caveat=caveat)

    def t6(self, target: Target) -> CheckResult:
        if target != "CP2_single" or self.d.n_components != 2:
            return _result("T6", "INAPPLICABLE")
        conway = self.conway
        first = _first_nonzero(conway)
        evidence: dict[str, JsonValue] = {"conway": str(conway)}
        if first is not None:
            evidence["k"], evidence["a_k"] = first
        return _result("T6", check_conway_sign(conway), evidence)

    def t7(self, target: Target) -> CheckResult:
        if target != "split_geq0":
            return _result("T7", "INAPPLICABLE")
        conway = self.conway
        return _result("T7", "PASS" if conway.is_zero else "OBSTRUCTED", {"conway": str(conway)})


def _result(
    test_id: str,
    verdict: Verdict,
    evidence: dict[str, JsonValue] | None = None,
    caveat: str | None = None,
    diagnostic: str | None = None,
) -> CheckResult:
    return CheckResult(
        id=test_id,
        name=TEST_NAMES[test_id],
        verdict=verdict,
        evidence=evidence or {},
        caveat=caveat,
        diagnostic=diagnostic,
    )


def _guarded(test_id: str, fn: Callable[[], CheckResult]) -> CheckResult:
    try:
        return fn()
    except LinkObsError as e:
        logger.warning("%s could not be decided: %s", test_id, e)
        return _result(test_id, "UNKNOWN", diagnostic=f"{type(e).__name__}: {e}")


def run_battery(d: LinkDiagram, target: Target = "P0", settings: Settings | None = None) -> ObstructionReport:
    settings = settings or Settings()
    battery = _Battery(mirror(d) if target == "P0_of_mirror" else d, settings)
    definite = target != "split_geq0"
    plan: list[tuple[str, Callable[[], CheckResult]]] = [
        ("T1", battery.t1),
        ("T2", battery.t2 if definite else lambda: _result("T2", "INAPPLICABLE")),
        ("T3", battery.t3 if definite else lambda: _result("T3", "INAPPLICABLE")),
        ("T4", battery.t4 if definite else lambda: _result("T4", "INAPPLICABLE")),
        ("T5", battery.t5 if definite else lambda: _result("T5", "INAPPLICABLE")),
        ("T6", lambda: battery.t6(target)),
        ("T7", lambda: battery.t7(target)),
    ]
    tests = tuple(_guarded(test_id, fn) for test_id, fn in plan)
    aggregate: Literal["NOT_MEMBER", "INCONCLUSIVE"] = (
        "NOT_MEMBER" if any(t.verdict == "OBSTRUCTED" for t in tests) else "INCONCLUSIVE"
    )
    report = ObstructionReport(target=target, n_components=d.n_components, tests=tests, aggregate=aggregate)
    logger.info("battery %s: %s %s", target, aggregate, report.obstructed or "")
    return report
