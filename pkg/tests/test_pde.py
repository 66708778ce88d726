import cmath
import itertools
import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy import integrate, special

from groupdet.cyclotomic import CyclotomicNumber
from groupdet.errors import DomainViolation, InvalidArgument, NotOnVariety, SeriesDomain, SizeTooLarge
from groupdet.group import bundled
from groupdet.pde import (
    admissible_john_parameters,
    cayley_identity_defect,
    cayley_omega_apply,
    gauss_hypergeometric,
    john_hypergeometric_closed,
    john_transform_numeric,
    matrix_det_poly,
    matrix_substitute,
    matrix_var,
    omega9_kernel_residual,
    operator_spec,
    plane_wave_check,
    polarization_commutator_check,
    separated_solution_residual,
    separation_chart,
)
from groupdet.poly import SparsePoly

W = cmath.exp(2j * cmath.pi / 3)


def z(f, j, l):
    return SparsePoly.variable(f * f, matrix_var(f, j, l))


def omega_by_hand(q, f):
    """Sum over permutations of signed mixed partials, one diff at a time."""
    out = SparsePoly.zero(f * f)
    for perm in itertools.permutations(range(f)):
        sign = (-1) ** sum(perm[i] > perm[k] for i in range(f) for k in range(i + 1, f))
        d = q
        for j, l in enumerate(perm):
            d = d.diff(j * f + l)
        out = out + d * sign
    return out


# -- operators and charts --------------------------------------------------------------

@pytest.mark.parametrize("name", ["z2", "z3", "z4", "z6", "klein"])
def test_operator_spec_factors(name):
    G = bundled(name)
    spec = operator_spec(G)
    assert spec.order == G.n and spec.factors_consistent()


@pytest.mark.parametrize("name", ["z2", "z3", "z4", "klein"])
def test_separation_chart(name):
    chart = separation_chart(bundled(name))
    assert chart.identity_defect() < 1e-12 and chart.exact


# -- plane waves -----------------------------------------------------------------------

def test_plane_wave_z2_exact():
    r = plane_wave_check(bundled("z2"), (1, 1), "pow3")
    assert r.exact and r.residual == 0


def test_plane_wave_z3_exp():
    r = plane_wave_check(bundled("z3"), (1, W, W * W), "exp")
    assert not r.exact and r.residual < 1e-5


def test_plane_wave_z3_exact_cyclotomic():
    a = tuple(CyclotomicNumber.zeta(3, k) for k in range(3))
    assert plane_wave_check(bundled("z3"), a, "pow5").residual == 0


def test_plane_wave_s3_phi2_zero():
    r = plane_wave_check(bundled("s3"), (1,) * 6, "pow4")
    assert r.exact and r.residual == 0


@pytest.mark.parametrize("fname", ["sin", "cos", "gauss"])
def test_plane_wave_s3_transcendental(fname):
    # Phi_2 vanishes on (2, 1, 0, 1, 1, 1)
    r = plane_wave_check(bundled("s3"), (2, 1, 0, 1, 1, 1), fname)
    assert r.residual < 1e-5


def test_plane_wave_off_variety():
    with pytest.raises(NotOnVariety):
        plane_wave_check(bundled("z2"), (1, 2), "exp")


def test_plane_wave_off_variety_is_detected_numerically():
    # a wave off the variety is not annihilated: sanity check for the FD route
    G = bundled("z2")
    from groupdet.pde import fd_apply_symbol
    from groupdet.detfact import expand_group_det

    val, scale = fd_apply_symbol(lambda X: np.exp(X @ np.array([1.0, 0.5])), [0.1, 0.2], expand_group_det(G), 0.05)
    assert abs(val - 0.75 * math.exp(0.2)) < 1e-6


# -- separated solutions ---------------------------------------------------------------

def test_separated_z2_dalembert():
    assert separated_solution_residual(bundled("z2"), ["pow2", "sin"]).residual < 1e-5


def test_separated_z3_polynomial_exact():
    r = separated_solution_residual(bundled("z3"), ["pow2", "pow3", "pow1"])
    assert r.exact and r.residual == 0


def test_separated_z4_mixed():
    assert separated_solution_residual(bundled("z4"), ["exp", "pow3", "sin", "cos"]).residual < 1e-5


def test_separated_wrong_count():
    with pytest.raises(InvalidArgument):
        separated_solution_residual(bundled("z2"), ["sin"])


# -- Cayley operator -------------------------------------------------------------------

def test_omega_on_diagonal_monomial():
    assert cayley_omega_apply(z(2, 1, 1) * z(2, 2, 2), 2) == SparsePoly.constant(4, 1)


@pytest.mark.parametrize("f, k", [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2)])
def test_capelli_constant(f, k):
    D = matrix_det_poly(f)
    want = D ** (k - 1) * math.prod(range(k, k + f))
    assert cayley_omega_apply(D**k, f) == want


def test_omega_det_squared():
    D = matrix_det_poly(2)
    assert cayley_omega_apply(D * D, 2) == D * 6


def test_omega_matches_hand_expansion():
    rng = np.random.default_rng(3)
    for f in (2, 3):
        for _ in range(5):
            terms = {tuple(int(v) for v in rng.integers(0, 3, f * f)): int(rng.integers(-5, 6)) for _ in range(4)}
            q = SparsePoly(f * f, terms)
            assert cayley_omega_apply(q, f) == omega_by_hand(q, f)


def test_rank_deficient_substitution_killed():
    A = [[1, 2, 3], [2, 4, 6], [0, 1, 1]]
    q = matrix_det_poly(3) ** 3
    assert not cayley_omega_apply(matrix_substitute(q, A, 3), 3)


def test_cayley_intertwining_identity():
    rng = np.random.default_rng(11)
    for f in (2, 3):
        A = [[int(v) for v in row] for row in rng.integers(-3, 4, (f, f))]
        q = matrix_det_poly(f) ** 2 + z(f, 1, 2) ** 3 * z(f, 2, 1)
        assert not cayley_identity_defect(q, A, f)


def test_omega_size_limit():
    with pytest.raises(SizeTooLarge):
        cayley_omega_apply(SparsePoly.constant(25, 1), 5)


# -- polarization ------------------------------------------------------------------------

def test_polarization_commutes_f2():
    q = z(2, 2, 1) ** 2 * z(2, 2, 2)
    assert polarization_commutator_check(2, 1, 2, 1, q).ok


def test_polarization_needs_distinct_indices():
    with pytest.raises(InvalidArgument):
        polarization_commutator_check(2, 1, 1, 1, z(2, 1, 1))


def test_polarization_commutes_f3_random():
    rng = np.random.default_rng(5)
    terms = {}
    while len(terms) < 6:
        e = [0] * 9
        for i in rng.choice(9, 4):
            e[int(i)] += 1
        terms[tuple(e)] = int(rng.integers(-4, 5)) or 1
    q = SparsePoly(9, terms)
    for j, l in ((1, 2), (3, 1), (2, 3)):
        assert polarization_commutator_check(3, j, l, 2, q).ok


# -- John transform --------------------------------------------------------------------

def test_john_polynomial_case():
    # every exponent is 0, so the integrand is the indicator of [0, 1]; the sum 3 needs the check off
    with pytest.raises(DomainViolation):
        john_transform_numeric((1, 1, 1), (-1, -1), (1, 1))
    r = john_transform_numeric((1, 1, 1), (-1, -1), (1, 1), enforce_domain=False)
    assert abs(r.value - 1.0) < 1e-12


def test_john_closed_trivial_series():
    assert abs(john_hypergeometric_closed((1, 1, 1), (-1, -1), (1, 1)) - 1.0) < 1e-14


def test_john_half_parameters():
    lam, a, b = (0.5, 0.5, 0.5), (-1, -2), (3, 4)
    q = john_transform_numeric(lam, a, b)
    c = john_hypergeometric_closed(lam, a, b)
    assert abs(q.value - c) < 1e-6 and q.error_estimate < 1e-8
    ref, _ = integrate.quad(lambda t: (3 - t) ** -0.5 * (4 - 2 * t) ** -0.5 * t**-0.5, 0, 2, limit=200)
    assert abs(ref - c) < 1e-6


def test_john_domain_violation():
    with pytest.raises(DomainViolation):
        john_transform_numeric((2, 1, 1), (-1, -1), (1, 1))


def test_john_series_domain():
    with pytest.raises(SeriesDomain):
        john_hypergeometric_closed((0.5, 0.5, 0.5), (-2, -1), (1, 1))


@pytest.mark.parametrize("params", admissible_john_parameters(10, seed=9))
def test_john_closed_form_agrees(params):
    lam, a, b = params
    assert abs(john_transform_numeric(lam, a, b).value - john_hypergeometric_closed(lam, a, b)) < 1e-6


@given(
    st.floats(-3, 3),
    st.floats(-3, 3),
    st.floats(0.2, 4),
    st.floats(-0.95, 0.9),
)
def test_gauss_series_matches_scipy(a, b, c, x):
    assert abs(gauss_hypergeometric(a, b, c, x) - special.hyp2f1(a, b, c, x)) <= 1e-9 * max(1.0, abs(special.hyp2f1(a, b, c, x)))


# -- Omega_9 ---------------------------------------------------------------------------

def test_omega9_gauss_kernel():
    assert omega9_kernel_residual("gauss").residual < 1e-3
