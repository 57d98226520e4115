from fractions import Fraction

import pytest
from mpmath import mp, mpc, mpf

from linkobs.diagram import CORPUS, braid_closure, corpus, generate_unlink, mirror
from linkobs.errors import PreconditionError
from linkobs.seifert import SeifertMatrix, seifert_matrix
from linkobs.signature import (
    HermitianPencil,
    _grid_signature_function,
    as_theta,
    prime_power_signatures,
    signature_at,
    signature_function,
)


def _numeric_signature(s: SeifertMatrix, theta: Fraction) -> int:
    """Signature from the eigenvalues of the real symmetric doubling of the Hermitian form."""
    n = s.size
    if n == 0:
        return 0
    omega = mp.exp(2j * mp.pi * mpf(theta.numerator) / theta.denominator)
    h = [[(1 - omega) * s.V[i][j] + (1 - omega.conjugate()) * s.V[j][i] for j in range(n)] for i in range(n)]
    real = mp.matrix(2 * n, 2 * n)
    for i in range(n):
        for j in range(n):
            a, b = mpc(h[i][j]).real, mpc(h[i][j]).imag
            real[i, j], real[i + n, j + n] = a, a
            real[i, j + n], real[i + n, j] = -b, b
    eigenvalues = mp.eigsy(real, eigvals_only=True)
    values = [eigenvalues[i] for i in range(2 * n)]
    return (sum(1 for e in values if e > 1e-8) - sum(1 for e in values if e < -1e-8)) // 2


def test_unknot_has_zero_signature() -> None:
    s = seifert_matrix(corpus("unknot"))
    assert signature_at(s, "1/2") == (0, 0)


def test_right_trefoil_at_minus_one(trefoil_seifert: SeifertMatrix) -> None:
    assert signature_at(trefoil_seifert, "1/2") == (-2, 0)


def test_mirror_flips_the_signature() -> None:
    s = seifert_matrix(mirror(corpus("trefoil_right")))
    assert signature_at(s, "1/2") == (2, 0)


def test_trefoil_nullity_at_its_root(trefoil_seifert: SeifertMatrix) -> None:
    # ∇ = 1 + z² vanishes at z² = -1, θ = 1/6.
    assert signature_at(trefoil_seifert, "1/6") == (-1, 1)


def test_trefoil_signature_function(trefoil_seifert: SeifertMatrix) -> None:
    sf = signature_function(trefoil_seifert)
    assert sf.certification == "certified"
    assert sf.arc_values == (0, -2)
    assert sf.full_arc_values() == (0, -2, 0)
    assert sf.point_values == (-1,)
    assert sf.breakpoints[0].poly == (1, 1)
    assert sf.breakpoints[0].theta == pytest.approx(1 / 6)
    assert sf.breakpoints[0].nullity == 1
    assert sf.max_nullity == 1
    assert sf.value("1/12") == 0
    assert sf.value("1/6") == -1
    assert sf.value("1/3") == -2
    assert sf.value("11/12") == 0


def test_hopf_link_is_constant() -> None:
    sf = signature_function(seifert_matrix(corpus("hopf+")))
    assert sf.breakpoints == ()
    assert sf.arc_values == (-1,)
    assert sf.value("1/2") == -1
    assert sf.max_nullity == 0


def test_split_link_falls_back_to_a_grid() -> None:
    sf = signature_function(seifert_matrix(generate_unlink(2)), grid_depth=3)
    assert sf.certification == "grid-certified"
    assert sf.breakpoints == ()
    assert sf.arc_values == (0,)
    assert sf.nullity == 1


@pytest.mark.parametrize(("p", "r", "expected"), [(3, 1, [(1, -2), (2, -2)]), (2, 1, [(1, -2)])])
def test_prime_power_signatures_of_trefoil(
    trefoil_seifert: SeifertMatrix, p: int, r: int, expected: list[tuple[int, int]]
) -> None:
    assert prime_power_signatures(trefoil_seifert, p, r) == expected


def test_prime_power_signatures_need_a_prime(trefoil_seifert: SeifertMatrix) -> None:
    with pytest.raises(PreconditionError):
        prime_power_signatures(trefoil_seifert, 4)


@pytest.mark.parametrize("raw", ["0", "1", "3/2", "-1/3"])
def test_theta_must_lie_in_the_open_interval(raw: str) -> None:
    with pytest.raises(PreconditionError):
        as_theta(raw)


def test_pencil_of_empty_matrix() -> None:
    pencil = HermitianPencil(SeifertMatrix(V=(), m=1, genus=0))
    assert pencil.n == 0
    assert pencil.inertia(Fraction(1, 3)) == (0, 0)


@pytest.mark.parametrize("name", ["trefoil_right", "figure_eight", "whitehead+", "borromean", "m_0_1"])
@pytest.mark.parametrize("theta", [Fraction(1, 2), Fraction(1, 3), Fraction(2, 5), Fraction(1, 7)])
def test_exact_signature_matches_eigenvalues(name: str, theta: Fraction) -> None:
    s = seifert_matrix(corpus(name))
    sig, nullity = signature_at(s, theta)
    if nullity == 0:
        assert sig == _numeric_signature(s, theta)


def test_whitehead_doubled_hopf_is_positive_at_minus_one() -> None:
    s = seifert_matrix(corpus("wh_hopf+"))
    assert signature_at(s, "1/2")[0] > 0


SAMPLES = [Fraction(j, 16) for j in range(1, 9)]


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_mirror_negates_the_signature_function(name: str) -> None:
    d = corpus(name)
    sf = signature_function(seifert_matrix(d), grid_depth=4)
    flipped = signature_function(seifert_matrix(mirror(d)), grid_depth=4)
    assert flipped.arc_values == tuple(-v for v in sf.arc_values)
    assert flipped.point_values == tuple(-v for v in sf.point_values)
    assert flipped.nullity == sf.nullity
    for theta in SAMPLES:
        sig, nullity = signature_at(seifert_matrix(d), theta)
        assert signature_at(seifert_matrix(mirror(d)), theta) == (-sig, nullity)


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_signature_is_symmetric_under_conjugation(name: str) -> None:
    s = seifert_matrix(corpus(name))
    for theta in SAMPLES[:-1]:
        assert signature_at(s, theta) == signature_at(s, 1 - theta)


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_generic_nullity_is_below_the_component_count(name: str) -> None:
    d = corpus(name)
    sf = signature_function(seifert_matrix(d), grid_depth=4)
    assert sf.m == d.n_components
    assert sf.nullity <= d.n_components - 1


@pytest.mark.parametrize("name", sorted(CORPUS))
def test_signature_function_agrees_with_the_pointwise_signature(name: str) -> None:
    s = seifert_matrix(corpus(name))
    sf = signature_function(s, grid_depth=4)
    for theta in SAMPLES:
        sig, nullity = signature_at(s, theta)
        if nullity == sf.nullity or sf.certification == "grid-certified":
            assert sf.value(theta) == sig
            assert sf.value(1 - theta) == sig


def test_grid_jump_on_a_grid_point_takes_the_exact_value() -> None:
    # ∇ = 2z + z³ vanishes at z² = -2, which is θ = 1/4.
    s = seifert_matrix(braid_closure(2, [1, 1, 1, 1]))
    certified = signature_function(s)
    grid = _grid_signature_function(HermitianPencil(s), 2, depth=3)
    exact, nullity = signature_at(s, "1/4")
    assert nullity > 0
    assert grid.arc_values == certified.arc_values
    assert len(grid.breakpoints) == 1
    assert grid.breakpoints[0].interval == ("1/4", "1/4")
    assert grid.breakpoints[0].nullity == nullity
    assert grid.point_values == (exact,)
    assert grid.value("1/4") == exact
    assert grid.value("1/8") == certified.value("1/8")
    assert grid.value("3/8") == certified.value("3/8")
