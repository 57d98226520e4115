import random

import pytest

from linkobs.errors import InternalAssertionError, PreconditionError
from linkobs.polyring import (
    X,
    X_INV,
    Z,
    ConwayForm,
    LaurentPoly,
    ZPoly,
    bar,
    cofactor_det,
    conway_from_seifert,
    decompose_ffbar,
    ffbar,
    laurent_det,
    laurent_to_z,
    partial_sum_poly,
    poly_from_alpha,
    power_sum_z2,
)
from linkobs.seifert import SeifertMatrix


def _random_laurent(rng: random.Random, spread: int) -> LaurentPoly:
    return LaurentPoly.from_dict({e: rng.randint(-3, 3) for e in range(-spread, spread + 1)})


def test_laurent_arithmetic() -> None:
    assert Z * Z == X * X - LaurentPoly.constant(2) + X_INV * X_INV
    assert (X * X_INV) == LaurentPoly.constant(1)
    assert (Z**0) == LaurentPoly.constant(1)
    with pytest.raises(PreconditionError):
        _ = X**-1


def test_bar_fixes_z() -> None:
    assert bar(Z) == Z
    assert bar(X) == -X_INV


def test_laurent_to_z_rejects_asymmetric_input() -> None:
    assert laurent_to_z(Z * Z * Z) == ZPoly.of([0, 0, 0, 1])
    with pytest.raises(InternalAssertionError):
        laurent_to_z(X)


def test_empty_determinant_is_one() -> None:
    assert laurent_det([]) == LaurentPoly.constant(1)


def test_determinant_rejects_non_square() -> None:
    with pytest.raises(PreconditionError):
        laurent_det([[X, X]])


@pytest.mark.parametrize("seed", range(5))
def test_determinant_matches_cofactor_expansion(seed: int) -> None:
    rng = random.Random(seed)
    m = [[_random_laurent(rng, 2) for _ in range(4)] for _ in range(4)]
    assert laurent_det(m) == cofactor_det(m)


@pytest.mark.slow
@pytest.mark.parametrize("seed", range(200))
def test_determinant_matches_cofactor_expansion_many(seed: int) -> None:
    rng = random.Random(1000 + seed)
    n = rng.randint(1, 5)
    m = [[_random_laurent(rng, rng.randint(0, 2)) for _ in range(n)] for _ in range(n)]
    assert laurent_det(m) == cofactor_det(m)


def test_conway_of_empty_seifert_matrix_is_one() -> None:
    form = conway_from_seifert(SeifertMatrix(V=(), m=1, genus=0))
    assert form == ConwayForm(m=1, coeffs=(1,))


def test_conway_of_positive_hopf_seifert_matrix() -> None:
    form = conway_from_seifert(SeifertMatrix(V=((-1,),), m=2, genus=0))
    assert form.coeffs == (1,)
    assert str(form) == "1*z^1"


def test_conway_form_normalizes() -> None:
    form = ConwayForm.from_z(2, ZPoly.of([0, 1, 0, -2]))
    assert form.coeffs == (1, -2)
    assert form.z_coefficient(3) == -2
    assert form.a(5) == 0


def test_conway_form_rejects_wrong_parity() -> None:
    with pytest.raises(InternalAssertionError):
        ConwayForm.from_z(1, ZPoly.of([0, 1]))


@pytest.mark.parametrize(("k", "expected"), [(0, (2,)), (1, (2, 1)), (2, (2, 4, 1)), (3, (2, 9, 6, 1))])
def test_power_sum(k: int, expected: tuple[int, ...]) -> None:
    assert power_sum_z2(k).coeffs == expected


def test_power_sum_rejects_negative_k() -> None:
    with pytest.raises(PreconditionError):
        power_sum_z2(-1)


@pytest.mark.parametrize(
    ("coeffs", "expected"),
    [
        ((3,), (0, 3, ())),
        ((-1, 1), (1, 1, ())),
        ((1, 1), (0, 2, (1,))),
    ],
)
def test_decompose_small_polynomials(coeffs: tuple[int, ...], expected: tuple[int, int, tuple[int, ...]]) -> None:
    k, a, g = decompose_ffbar(ZPoly.of(coeffs, "t"))
    assert (k, a, g.coeffs) == expected


def test_decompose_rejects_zero() -> None:
    with pytest.raises(PreconditionError):
        decompose_ffbar(ZPoly(var="t"))


@pytest.mark.parametrize("seed", range(10))
def test_partial_sums_peel_off_a_z_squared(seed: int) -> None:
    rng = random.Random(seed)
    alpha = [rng.randint(-4, 4) for _ in range(rng.randint(2, 6))]
    alpha[-1] -= sum(alpha)
    f, g = poly_from_alpha(alpha), partial_sum_poly(alpha)
    assert ffbar(f) == ZPoly.of([0, *(-c for c in ffbar(g).coeffs)], "w")


def _random_t_poly(rng: random.Random) -> ZPoly:
    coeffs = [rng.randint(-20, 20) for _ in range(rng.randint(1, 9))]
    if not any(coeffs):
        coeffs[rng.randrange(len(coeffs))] = rng.choice([-1, 1])
    return ZPoly.of(coeffs, "t")


def _random_alpha(rng: random.Random, sums_to_zero: bool) -> list[int]:
    alpha = [rng.randint(-20, 20) for _ in range(rng.randint(2, 9))]
    if sums_to_zero:
        alpha[-1] -= sum(alpha)
    return alpha


@pytest.mark.parametrize("seed", range(500))
def test_decomposition_recomposes_to_the_direct_expansion(seed: int) -> None:
    f = _random_t_poly(random.Random(seed))
    k, a, g = decompose_ffbar(f)
    full = ffbar(f)
    lowest = ZPoly.of([0] * k + [(-1) ** k * a * a], "w")
    rest = ZPoly.of([0] * (k + 1) + list(g.coeffs), "w")
    assert a > 0
    assert lowest + rest == full
    assert not any(full.coeffs[:k])


@pytest.mark.parametrize("seed", range(500))
def test_constant_coefficient_of_ffbar_is_the_squared_coefficient_sum(seed: int) -> None:
    alpha = _random_alpha(random.Random(10_000 + seed), sums_to_zero=False)
    assert ffbar(poly_from_alpha(alpha)).coeff(0) == sum(alpha) ** 2


@pytest.mark.parametrize("seed", range(500))
def test_zero_coefficient_sum_factors_out_minus_z_squared(seed: int) -> None:
    alpha = _random_alpha(random.Random(20_000 + seed), sums_to_zero=True)
    f, g = poly_from_alpha(alpha), partial_sum_poly(alpha)
    w = ZPoly.of([0, 1], "w")
    assert ffbar(f) == -(w * ffbar(g))
    assert ffbar(f).coeff(0) == 0
