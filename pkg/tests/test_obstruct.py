import pytest

from linkobs.config import Settings
from linkobs.diagram import corpus, generate_twist_family, generate_unlink
from linkobs.errors import PreconditionError
from linkobs.obstruct import TEST_NAMES, ObstructionReport, check_conway_sign, run_battery
from linkobs.polyring import ConwayForm

FAST = Settings(q_max=6, grid_depth=4)


def _verdicts(report: ObstructionReport) -> dict[str, str]:
    return {t.id: t.verdict for t in report.tests}


def test_unknot_is_inconclusive() -> None:
    report = run_battery(corpus("unknot"), settings=FAST)
    assert report.aggregate == "INCONCLUSIVE"
    assert [t.id for t in report.tests] == list(TEST_NAMES)
    assert all(t.verdict in ("PASS", "INAPPLICABLE") for t in report.tests)
    assert report.obstructed == []


def test_twist_family_fails_sato_levine() -> None:
    report = run_battery(generate_twist_family(0, 1), settings=FAST)
    verdicts = _verdicts(report)
    assert verdicts["T1"] == "PASS"
    assert verdicts["T3"] == "OBSTRUCTED"
    assert verdicts["T4"] == "OBSTRUCTED"
    assert report.aggregate == "NOT_MEMBER"
    t3 = next(t for t in report.tests if t.id == "T3")
    assert t3.evidence["sato_levine"] == [{"pair": [1, 2], "beta": 1}]


def test_negative_twist_passes_sato_levine() -> None:
    verdicts = _verdicts(run_battery(generate_twist_family(0, -1), settings=FAST))
    assert verdicts["T3"] == "PASS"
    assert verdicts["T4"] == "PASS"


def test_second_level_beta_obstructs_m_1_1() -> None:
    report = run_battery(generate_twist_family(1, 1), settings=FAST)
    verdicts = _verdicts(report)
    assert verdicts["T3"] == "PASS"
    assert verdicts["T4"] == "OBSTRUCTED"
    t4 = next(t for t in report.tests if t.id == "T4")
    assert t4.evidence["beta_n"][0]["n"] == 2


def test_hopf_link_fails_linking() -> None:
    report = run_battery(corpus("hopf+"), settings=FAST)
    t1 = report.tests[0]
    assert t1.verdict == "OBSTRUCTED"
    assert t1.evidence["nonzero"] == [[1, 2, 1]]
    assert _verdicts(report)["T3"] == "INAPPLICABLE"


def test_right_trefoil_passes_and_its_mirror_fails() -> None:
    assert _verdicts(run_battery(corpus("trefoil_right"), settings=FAST))["T5"] == "PASS"
    assert _verdicts(run_battery(corpus("trefoil_right"), "P0_of_mirror", settings=FAST))["T5"] == "OBSTRUCTED"


def test_borromean_rings_fail_triple_linking() -> None:
    verdicts = _verdicts(run_battery(corpus("borromean"), settings=FAST))
    assert verdicts["T1"] == "PASS"
    assert verdicts["T2"] == "OBSTRUCTED"


def test_whitehead_doubled_hopf_fails_the_signature_test() -> None:
    verdicts = _verdicts(run_battery(corpus("wh_hopf+"), settings=FAST))
    assert verdicts["T5"] == "OBSTRUCTED"


@pytest.mark.slow
def test_gpc_on_bing_pairs_is_not_obstructed() -> None:
    report = run_battery(corpus("nghl4"), settings=FAST)
    verdicts = _verdicts(report)
    assert verdicts["T1"] == "PASS"
    assert verdicts["T2"] == "PASS"
    assert verdicts["T3"] == "PASS"
    assert report.obstructed == []


def test_split_target_checks_the_conway_polynomial() -> None:
    verdicts = _verdicts(run_battery(generate_unlink(2), "split_geq0", settings=FAST))
    assert verdicts["T7"] == "PASS"
    assert verdicts["T5"] == "INAPPLICABLE"
    verdicts = _verdicts(run_battery(corpus("whitehead+"), "split_geq0", settings=FAST))
    assert verdicts["T7"] == "OBSTRUCTED"


def test_single_cp2_target_uses_the_conway_sign_rule() -> None:
    report = run_battery(generate_twist_family(0, 1), "CP2_single", settings=FAST)
    t6 = next(t for t in report.tests if t.id == "T6")
    assert t6.verdict == "OBSTRUCTED"
    assert t6.evidence["k"] == 1
    assert t6.evidence["a_k"] == -1
    assert _verdicts(run_battery(generate_twist_family(0, 1), settings=FAST))["T6"] == "INAPPLICABLE"


@pytest.mark.parametrize(
    ("coeffs", "verdict"),
    [((0, -1), "OBSTRUCTED"), ((0, 1), "PASS"), ((), "PASS"), ((1,), "INAPPLICABLE"), ((0, 0, 1), "OBSTRUCTED")],
)
def test_conway_sign_rule(coeffs: tuple[int, ...], verdict: str) -> None:
    assert check_conway_sign(ConwayForm(m=2, coeffs=coeffs)) == verdict


def test_conway_sign_rule_is_for_two_components() -> None:
    with pytest.raises(PreconditionError):
        check_conway_sign(ConwayForm(m=1, coeffs=(1,)))


def test_failed_tests_are_reported_as_unknown() -> None:
    # A truncation cap of 2 cannot reach length-3 invariants.
    report = run_battery(corpus("borromean"), settings=Settings(q_max=2, grid_depth=4))
    t2 = next(t for t in report.tests if t.id == "T2")
    assert t2.verdict == "UNKNOWN"
    assert t2.diagnostic is not None


TWIST_GRID = [
    pytest.param(n, m, marks=pytest.mark.slow) if n == 2 else (n, m) for n in (0, 1, 2) for m in (1, 2, 3, -1, -2, -3)
]


@pytest.mark.parametrize(("n", "m"), TWIST_GRID)
def test_twist_family_verdicts_follow_the_sign_of_m(n: int, m: int) -> None:
    settings = Settings(q_max=2 * n + 4, grid_depth=4)
    report = run_battery(generate_twist_family(n, m), settings=settings)
    verdicts = _verdicts(report)
    assert verdicts["T1"] == "PASS"
    assert verdicts["T2"] == "INAPPLICABLE"
    assert verdicts["T3"] == ("OBSTRUCTED" if n == 0 and m > 0 else "PASS")
    assert verdicts["T4"] == ("OBSTRUCTED" if m > 0 else "PASS")
    (beta,) = report.tests[3].evidence["beta_n"]
    assert isinstance(beta, dict)
    assert (beta["n"], beta["value"], beta["indeterminacy"]) == (n + 1, m, 0)
    if m > 0:
        assert report.aggregate == "NOT_MEMBER"


@pytest.mark.parametrize("m", [1, 2, 3, -1, -2, -3])
def test_single_cp2_rule_on_the_first_twist_family(m: int) -> None:
    report = run_battery(generate_twist_family(0, m), "CP2_single", settings=FAST)
    t6 = next(t for t in report.tests if t.id == "T6")
    assert t6.verdict == ("OBSTRUCTED" if m > 0 else "PASS")
    assert (t6.evidence["k"], t6.evidence["a_k"]) == (1, -m)
