import math
import random
from fractions import Fraction

import pytest

from conftest import PARAMS, random_tiling_family
from lfwsets.catalog import shannon_multiwavelet
from lfwsets.errors import DomainError, PreconditionError
from lfwsets.field import Cyclotomic, FieldElement, chi, default_params, u_map
from lfwsets.oracle import (
    TestFunction,
    affine_element,
    analysis_coefficient,
    analysis_integral,
    calderon_sum_at,
    character_orthonormality,
    fourier_step,
    frame_sum,
    inner_product,
    random_point,
    random_test_function,
    shift_sum_at,
)
from lfwsets.sets import ClopenSet, StepFunction, dilation_partition_check
from lfwsets.verifiers import check_parseval_multiframelet_set

P2 = default_params(2)
P3 = default_params(3)
TOL = 1e-9


def E(params, d):
    return FieldElement.from_dict(params, d)


def freq(S, value=1):
    return TestFunction("frequency", StepFunction.indicator(S, value))


def close(f: StepFunction, g: StepFunction, tol=1e-12) -> bool:
    d = f - g
    return all(abs(v) <= tol for _, v in d.pieces)


# -- transform ---------------------------------------------------------------


def test_integers_are_self_dual(params):
    D = ClopenSet.ideal(params, 0)
    out = fourier_step(TestFunction("time", StepFunction.indicator(D)))
    assert out.side == "frequency"
    assert close(out.f, StepFunction.indicator(D).as_complex())


def test_prime_ideal_transform(params):
    f = TestFunction("time", StepFunction.indicator(ClopenSet.ideal(params, 1)))
    out = fourier_step(f)
    want = StepFunction.indicator(ClopenSet.ideal(params, -1), 1 / params.q).as_complex()
    assert close(out.f, want)


def test_translated_ball_transform_matches_formula():
    # 1_{c + P D}  ->  chi(-xi c) q^-1 1_{|xi| <= q}
    c = E(P3, {-1: 1, 0: 2})
    f = TestFunction("time", StepFunction.indicator(ClopenSet.ball(c, 1)))
    out = fourier_step(f)
    rng = random.Random(5)
    for _ in range(30):
        xi = random_point(P3, rng, -1, 2, 3)
        want = complex(chi(-(xi * c))) / 3
        assert abs(out.f(xi) - want) < 1e-12


@pytest.mark.parametrize("P", PARAMS, ids=lambda P: f"q{P.q}")
def test_round_trip_and_plancherel(P):
    rng = random.Random(11)
    for _ in range(25):
        f = random_test_function(P, rng, side="time", vmin=-2, vmax=2, max_scale=2)
        F = fourier_step(f)
        back = fourier_step(F, "inverse")
        assert close(back.f, f.f)
        assert abs(F.norm2() - f.norm2()) <= TOL * f.norm2()


def test_parseval_inner_products():
    rng = random.Random(3)
    for _ in range(50):
        P = rng.choice(PARAMS)
        f = random_test_function(P, rng, side="time", vmin=-2, vmax=2, max_scale=2)
        g = random_test_function(P, rng, side="time", vmin=-2, vmax=2, max_scale=2)
        lhs = inner_product(f, g)
        rhs = inner_product(fourier_step(f), fourier_step(g))
        assert abs(lhs - rhs) <= 1e-9


def test_inner_product_examples():
    D = TestFunction("time", StepFunction.indicator(ClopenSet.ideal(P2, 0)))
    B = TestFunction("time", StepFunction.indicator(ClopenSet.ideal(P2, 1)))
    assert inner_product(D, B) == pytest.approx(0.5)
    assert inner_product(D, D) == pytest.approx(1)
    with pytest.raises(DomainError):
        inner_product(D, freq(ClopenSet.ideal(P2, 0)))


# -- analysis coefficients ---------------------------------------------------


def test_analysis_coefficient_worked_example():
    W = ClopenSet.sphere(P2, 1)
    g = freq(ClopenSet.ideal(P2, 0))
    assert analysis_coefficient(W, -1, 0, g) == pytest.approx(1 / math.sqrt(2))


def test_analysis_coefficient_trivial_character():
    W = ClopenSet.ideal(P3, -2) - ClopenSet.ideal(P3, 2)
    g = freq(ClopenSet.sphere(P3, 0), 2)
    j = 1
    assert analysis_coefficient(W, j, 0, g) == pytest.approx(3 ** (-j / 2) * 2 * float(ClopenSet.sphere(P3, 0).measure()))


def test_analysis_integral_exact_and_disjoint():
    W = shannon_multiwavelet(P3)[0]
    ghat = StepFunction.indicator(ClopenSet.ideal(P3, 0))
    val = analysis_integral(W, 0, 1, ghat)
    assert isinstance(val, Cyclotomic) and val.is_zero()
    far = StepFunction.indicator(ClopenSet.ball(E(P3, {-5: 1}), -4))
    assert analysis_integral(W, 0, 0, far).is_zero()


@pytest.mark.parametrize("P", PARAMS, ids=lambda P: f"q{P.q}")
def test_affine_system_is_orthonormal(P):
    fam = shannon_multiwavelet(P)
    idx = [(m, j, t) for m in range(len(fam)) for j in range(-2, 3) for t in range(P.q ** 2)]
    rng = random.Random(P.q)
    for a in rng.sample(idx, 12):
        psi = affine_element(fam[a[0]], a[1], a[2])
        assert abs(psi.norm2() - 1) < TOL
        for b in rng.sample(idx, 12):
            got = analysis_coefficient(fam[b[0]], b[1], b[2], psi)
            assert abs(got - (1 if a == b else 0)) < TOL


# -- frame sums --------------------------------------------------------------


@pytest.mark.parametrize("P", PARAMS, ids=lambda P: f"q{P.q}")
def test_frame_sum_on_parseval_families(P):
    rng = random.Random(7)
    fam = shannon_multiwavelet(P)
    for _ in range(10):
        g = random_test_function(P, rng)
        fs = frame_sum(fam, g)
        assert fs.relative_error <= TOL


def test_frame_sum_examples():
    assert frame_sum(shannon_multiwavelet(P2), freq(ClopenSet.ideal(P2, 0))).value == pytest.approx(1)
    assert frame_sum([], freq(ClopenSet.ideal(P2, 0))).value == 0
    with pytest.raises(PreconditionError):
        frame_sum([ClopenSet.ideal(P2, 1)], freq(ClopenSet.ideal(P2, 0)))


def test_frame_sum_refinement_invariant():
    rng = random.Random(9)
    fam = shannon_multiwavelet(P3)
    for _ in range(5):
        g = random_test_function(P3, rng)
        fine = TestFunction("frequency", StepFunction.from_disjoint(
            [(sub, v) for b, v in g.f.pieces for sub in b.refine(b.scale + 1)], P3, "complex"))
        a, b = frame_sum(fam, g).value, frame_sum(fam, fine).value
        assert abs(a - b) <= TOL * a


@pytest.mark.parametrize("seed", range(6))
def test_frame_sum_matches_norm_on_random_tilings(seed):
    rng = random.Random(seed)
    P = PARAMS[seed % 3]
    fam = random_tiling_family(P, rng, moves=2)
    v = check_parseval_multiframelet_set(fam)
    for _ in range(4):
        g = random_test_function(P, rng, vmin=-2, vmax=1, max_scale=2, max_pieces=4)
        fs = frame_sum(fam, g)
        if v.passed:
            assert fs.relative_error <= TOL


def test_tiling_alone_does_not_bound_frame_sums():
    # sphere |xi| = 4 tiles under dilation, but its translates overlap
    fam = [ClopenSet.ball(E(P2, {-2: 1}), -1)]
    assert dilation_partition_check(fam).passed
    fs = frame_sum(fam, freq(fam[0]))
    # the t = 0, j = 0 coefficient alone is |W|^2 = 4 against |g|^2 = 2
    assert fs.value >= 2 * fs.norm2


def test_frame_sum_detects_sphere4():
    fam = [ClopenSet.ball(E(P2, {-2: 1}), -1)]
    rng = random.Random(1)
    errs = [frame_sum(fam, random_test_function(P2, rng)).relative_error for _ in range(10)]
    assert max(errs) > 0.1


# -- Calderon and shift sums -------------------------------------------------


@pytest.mark.parametrize("P", PARAMS, ids=lambda P: f"q{P.q}")
def test_calderon_on_parseval_families(P):
    rng = random.Random(2)
    fam = shannon_multiwavelet(P)
    for _ in range(100):
        xi = random_point(P, rng)
        assert calderon_sum_at(fam, xi) == 1
        for t in (1, P.q + 1):
            assert shift_sum_at(fam, xi, t) == 0


def test_sphere4_calderon_and_shift():
    fam = [ClopenSet.ball(E(P2, {-2: 1}), -1)]
    xi = u_map(1, P2)
    assert calderon_sum_at(fam, xi) == 1
    sphere = [E(P2, {-2: 1}), E(P2, {-2: 1, -1: 1})]
    assert any(shift_sum_at(fam, x, 1) != 0 for x in sphere)
    with pytest.raises(DomainError):
        calderon_sum_at(fam, FieldElement.zero(P2))
    with pytest.raises(DomainError):
        shift_sum_at(fam, xi, 2)


@pytest.mark.parametrize("seed", range(10))
def test_calderon_agrees_with_tiling(seed):
    rng = random.Random(seed)
    P = PARAMS[seed % len(PARAMS)]
    fam = random_tiling_family(P, rng, moves=2)
    if seed % 2:
        m = rng.randrange(len(fam))
        b = fam[m].balls[0]
        fam[m] = ClopenSet.from_balls(list(fam[m].balls[1:]) + b.children()[1:], P)
    tiles = dilation_partition_check(fam).passed
    values = [calderon_sum_at(fam, random_point(P, rng, -3, 3, 5)) for _ in range(60)]
    if tiles:
        assert set(values) == {1}
    else:
        # the uncovered piece has normalized measure >= q^-3 of the sphere
        hole = dilation_partition_check(fam).witnesses[0]["ball"]
        xi = hole.center + FieldElement.monomial(P, 1, hole.scale + 2)
        assert calderon_sum_at(fam, xi) == 0


# -- characters --------------------------------------------------------------


def test_character_orthonormality_examples():
    assert character_orthonormality(0, 0, 0, P2) == pytest.approx(1)
    assert character_orthonormality(7, 7, 3, P2) == pytest.approx(1)
    assert abs(character_orthonormality(1, 2, 2, P2)) < 1e-12
    with pytest.raises(PreconditionError, match="depth 1"):
        character_orthonormality(1, 2, 1, P2)


@pytest.mark.parametrize("P", PARAMS, ids=lambda P: f"q{P.q}")
def test_character_orthonormality_grid(P):
    for n in range(P.q + 2):
        for m in range(P.q + 2):
            val = character_orthonormality(n, m, 2, P)
            assert abs(val - (n == m)) < 1e-12


def test_test_function_side_check():
    with pytest.raises(DomainError):
        TestFunction("space", StepFunction.zero(P2))
    g = TestFunction("frequency", StepFunction.indicator(ClopenSet.ball(u_map(1, P2), 0), Fraction(1, 2)))
    assert g.support_bounds() == (-1, 1)
    assert g.norm2() == pytest.approx(0.25)
