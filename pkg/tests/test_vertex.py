from __future__ import annotations

import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conformal_ladder.algebra_core import ExactComplex, Poly4
from conformal_ladder.fock_ladder import FockVector, GuardBandError, build_basis, commutator, conformal_hamiltonian
from conformal_ladder.vertex import (
    ConvergenceError,
    QuaternionSlash,
    _q,
    eigenspace_dimension,
    format_zonal,
    harmonic_dimension,
    harmonic_h,
    harmonic_h_zonal,
    laplacian,
    quaternion_identity_check,
    translation_checks,
    translation_generators,
    two_point_conjugation_check,
    two_point_conjugation_residual,
    two_point_vev,
    vertex_factors,
    vertex_norm_sq,
    zonal_to_poly,
)

E4 = (0, 0, 0, 1)


def test_quaternion_identity():
    assert quaternion_identity_check().passed
    lhs = sum((_q(a, 0, 1) * _q(a, 1, 0) for a in range(4)), ExactComplex(0))
    assert lhs == ExactComplex(-2)
    assert sum((_q(a, 0, 0) * _q(a, 0, 0) for a in range(4)), ExactComplex(0)) == ExactComplex(0)


def test_quaternion_slash_det():
    z = (ExactComplex(1, 2), Fraction(1, 3), ExactComplex(0, -1), 2)
    assert QuaternionSlash(z).det() == sum((ExactComplex.coerce(c) * c for c in z), ExactComplex(0))


def test_translation_generators(basis5):
    assert translation_checks(basis5).passed
    T = translation_generators(basis5)
    vac = FockVector.vacuum(basis5)
    t_sq = T[1] @ T[1] + T[2] @ T[2] + T[3] @ T[3] + T[4] @ T[4]
    assert t_sq.apply(vac).is_zero()
    assert commutator(T[1], T[2]).apply(vac).is_zero()
    H = conformal_hamiltonian(basis5)
    assert commutator(H, T[4]).apply(vac) == T[4].apply(vac)


# harmonic polynomials


def test_h_examples():
    assert harmonic_h_zonal(2) == {(2, 0): 3, (0, 1): -1}
    assert harmonic_h_zonal(3) == {(3, 0): 4, (1, 1): -4}
    assert format_zonal(harmonic_h_zonal(1)) == "2 z4"
    assert format_zonal(harmonic_h_zonal(2)) == "3 z4^2 - zv^2"


@pytest.mark.parametrize("k", range(0, 9))
def test_h_three_routes(k):
    closed = harmonic_h(k, "closed_form")
    assert closed == harmonic_h(k, "recurrence")
    assert closed == harmonic_h(k, "fock")
    assert laplacian(closed).is_zero()
    assert k == 0 or closed.degree() == k


def test_h_fock_needs_cutoff():
    with pytest.raises(GuardBandError):
        harmonic_h(5, "fock", build_basis(5))


def test_printed_general_term_not_harmonic():
    # coefficients (k+1), -C(k+1,3), 2C(k+1,5), -2C(k+1,7), ... fail from k = 4 on
    k = 4
    printed = {(4, 0): Fraction(5), (2, 1): -Fraction(math.comb(5, 3)), (0, 2): 2 * Fraction(math.comb(5, 5))}
    assert not laplacian(zonal_to_poly(printed)).is_zero()
    assert harmonic_h_zonal(k) == {(4, 0): 5, (2, 1): -10, (0, 2): 1}


def test_laplacian_examples():
    z4 = Poly4.variable(4)
    assert laplacian(z4 * z4) == Poly4.constant(2)


_ZONAL = [harmonic_h_zonal(k) for k in range(40)]


@given(st.lists(st.floats(-0.3, 0.3), min_size=4, max_size=4))
def test_generating_function(z):
    # sum_k h_k = 1/(1 - 2 z4 + z^2) for small z
    z = np.array(z)
    z4, zv2 = z[3], np.sum(z[:3] ** 2)
    total = sum(float(c) * z4**i * zv2**j for zonal in _ZONAL for (i, j), c in zonal.items())
    assert abs(total - 1 / (1 - 2 * z[3] + np.sum(z**2))) < 1e-9


# eigenspace dimensions


@pytest.mark.parametrize("n", range(1, 9))
def test_eigenspace_dimension_two_routes(basis8, n):
    assert eigenspace_dimension(n, basis8) == harmonic_dimension(n - 1) == n * n


def test_harmonic_dimension_example():
    assert harmonic_dimension(5) == math.comb(8, 3) - math.comb(6, 3) == 36


def test_eigenspace_out_of_range(basis4):
    with pytest.raises(ValueError):
        eigenspace_dimension(5, basis4)


# norm


def test_norm_examples():
    assert vertex_norm_sq([0, 0, 0, 0], 6).series == 1
    t = 0.4
    r = vertex_norm_sq([0, 0, 0, t], 20)
    assert abs(r.closed - 1 / (1 - t * t) ** 2) < 1e-14
    assert r.relative_residual < 1e-8


def test_norm_first_order_term():
    z = np.array([0.1, 0.2j, -0.05, 0.15])
    r = vertex_norm_sq(z, 4, tol=None)
    assert abs(r.terms[1] - 2 * np.sum(np.abs(z) ** 2)) < 1e-15


def test_norm_rejects_outside_tube():
    with pytest.raises(ValueError):
        vertex_norm_sq([0, 0, 0, 2], 10)


def test_norm_convergence_error():
    with pytest.raises(ConvergenceError):
        vertex_norm_sq([0, 0, 0, 0.7], 8)


# two-point function


def test_two_point_examples():
    assert two_point_vev(E4, [0, 0, 0, 0], 4).series == 1
    t = 0.3
    r = two_point_vev(E4, [0, 0, 0, t], 20)
    assert abs(r.closed - 1 / (1 - t) ** 2) < 1e-14
    assert r.relative_residual < 1e-8
    s, t = 0.1, 0.2
    r = two_point_vev(E4, [s, 0, 0, t], 20)
    assert abs(r.closed - 1 / (1 - 2 * t + s * s + t * t)) < 1e-14
    assert r.relative_residual < 1e-8


def test_two_point_monotone_in_cutoff():
    t = 0.45
    r = two_point_vev(E4, [0, 0, 0, t], 20, tol=None)
    errs = [abs(p - r.closed) for p in r.partial_sums()]
    assert all(a > b for a, b in zip(errs, errs[1:]))


def test_two_point_requires_unit_quadric():
    with pytest.raises(ValueError):
        two_point_vev([0, 0, 0, 2], [0, 0, 0, 0.1], 6)


def test_two_point_rotated_unit_quadric():
    z1 = np.array([0.6, 0, 0.8j, 0])
    z1 = z1 / np.sqrt(np.sum(z1**2))
    r = two_point_vev(z1, [0.1, 0.05, 0, 0.1], 20)
    assert r.relative_residual < 1e-8


def test_two_point_off_quadric_normalization():
    # off the unit quadric: 1/z1^2 as an overall factor reproduces 1/z12^2,
    # no factor gives z1^2/z12^2, and the factor inside the exponent gives neither
    z1 = np.array([0.3, 0.2j, 0.1, 0.0])
    z1 = 1.3 * z1 / np.sqrt(np.sum(z1**2))
    z2 = np.array([0.1, 0.05, 0.02j, 0.1])
    s1 = np.sum(z1**2)
    kw = dict(tol=None, quadric_tol=None)
    overall = two_point_vev(z1, z2, 20, prefactor="overall", **kw)
    none = two_point_vev(z1, z2, 20, prefactor="none", **kw)
    inside = two_point_vev(z1, z2, 20, prefactor="exponent", **kw)
    assert overall.relative_residual < 1e-10
    assert abs(none.series - s1 * none.closed) < 1e-10
    assert abs(inside.series - inside.closed) > 0.1
    assert abs(inside.series - s1 * inside.closed) > 0.1


def test_conjugation_law():
    assert two_point_conjugation_residual(E4, [0, 0, 0, 0.5j]) < 1e-12
    rep = two_point_conjugation_check([0.3, 0.1, 0.2, 0.4], [1.1, -0.2, 0.5, 0.3])
    assert rep.passed
    lhs = 1 / np.sum((np.array([0.3, 0.1, 0.2, 0.4]) - np.array([1.1, -0.2, 0.5, 0.3])) ** 2)
    assert np.isreal(lhs)


# exact vertex factors


def test_vertex_factors_vacuum():
    basis = build_basis(4)
    vf = vertex_factors((Fraction(1, 2), ExactComplex(0, Fraction(1, 3)), 0, Fraction(1, 4)), basis)
    vac = FockVector.vacuum(basis)
    assert vf.B.apply(vac, check_guard=False) == vac
    assert vf.A.entry(0, 0) == ExactComplex(1)
    assert all(vf.A.entry(0, j) == ExactComplex(0) for j in range(1, len(basis)))


def test_vertex_factors_match_numeric_two_point():
    # exact <0|B(z1) A(z2)|0> at a rational unit-quadric point agrees with the float route
    basis = build_basis(5)
    z1 = (Fraction(3, 5), 0, 0, Fraction(4, 5))
    z2 = (Fraction(1, 4), 0, 0, Fraction(1, 2))
    f1, f2 = vertex_factors(z1, basis), vertex_factors(z2, basis)
    vac = FockVector.vacuum(basis)
    exact = vac.inner(f1.B.apply(f2.A.apply(vac, check_guard=False), check_guard=False))
    numeric = two_point_vev([float(c) for c in z1], [float(c) for c in z2], 5, tol=None)
    assert abs(exact.to_complex() - numeric.series) < 1e-12
