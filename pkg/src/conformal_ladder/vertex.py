"""Vertex-operator realization of the free massless scalar on the truncated Fock space.

Exact routes (quaternion identity, translation generators, harmonic polynomials,
eigenspace dimensions) use :mod:`algebra_core` arithmetic. The two-point function
and the norm formula are summed in floating point over occupation dictionaries,
so they work at cutoffs where a full operator matrix would be wasteful.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Sequence

import numpy as np

from .algebra_core import ExactComplex, Poly4, rank
from .checks import Report
from .clifford import QUATERNIONS
from .conformal_geometry import Tube, star_involution, tube_classify, zsq, zzbar
from .fock_ladder import (
    FockBasis,
    FockOp,
    FockVector,
    GuardBandError,
    build_basis,
    commutator,
    conformal_hamiltonian,
    spectrum,
)


class ConvergenceError(RuntimeError):
    """The last kept term of a truncated series is above tolerance."""


EPS2 = ((0, 1), (-1, 0))  # eps^{12} = 1

# modes: a_A -> (A - 1), b_B -> (B + 1) for A, B in 0..1
_A = (0, 1)
_B = (2, 3)


def _q(alpha: int, A: int, B: int) -> ExactComplex:
    return ExactComplex.coerce(QUATERNIONS[alpha][A][B])


def quaternion_slash(z: Sequence) -> list[list]:
    """qz = sum q_a z_a as a 2x2 nested list (exact if z is exact)."""
    return [[sum((_q(a, A, B) * z[a] for a in range(4)), ExactComplex(0)) for B in range(2)] for A in range(2)]


def quaternion_slash_conj(w: Sequence) -> list[list]:
    """q*w = sum q_a^dagger w_a."""
    return [
        [sum((_q(a, B, A).conjugate() * w[a] for a in range(4)), ExactComplex(0)) for B in range(2)]
        for A in range(2)
    ]


def _slash_numeric(z, conj: bool = False) -> np.ndarray:
    q = np.array([[[_q(a, A, B).to_complex() for B in range(2)] for A in range(2)] for a in range(4)])
    if conj:
        q = np.conj(np.transpose(q, (0, 2, 1)))
    return np.einsum("aij,a->ij", q, np.asarray(z, dtype=complex))


@dataclass(frozen=True)
class QuaternionSlash:
    z: tuple

    @property
    def matrix(self):
        return quaternion_slash(self.z)

    @property
    def conj_matrix(self):
        return quaternion_slash_conj(self.z)

    def det(self) -> ExactComplex:
        m = self.matrix
        return m[0][0] * m[1][1] - m[0][1] * m[1][0]


def quaternion_identity_check() -> Report:
    rep = Report()
    bad = []
    for a1, b1, a2, b2 in itertools.product(range(2), repeat=4):
        lhs = sum((_q(al, a1, b1) * _q(al, a2, b2) for al in range(4)), ExactComplex(0))
        if lhs != ExactComplex(2 * EPS2[a1][a2] * EPS2[b1][b2]):
            bad.append((a1 + 1, b1 + 1, a2 + 1, b2 + 1))
    rep.exact("quaternion.epsilon", "sum_a q_a^{A1B1} q_a^{A2B2} = 2 eps^{A1A2} eps^{B1B2}", not bad, bad or None)
    ok = True
    for al, be in itertools.product(range(4), repeat=2):
        tr = sum((_q(al, B, A).conjugate() * _q(be, B, A) for A in range(2) for B in range(2)), ExactComplex(0))
        ok &= tr == ExactComplex(2 if al == be else 0)
    rep.exact("quaternion.trace", "tr(q_a^dagger q_b) = 2 delta_ab", ok)
    x = [Poly4.variable(a) for a in range(1, 5)]
    m = [[sum((x[a] * _q(a, A, B) for a in range(4)), Poly4()) for B in range(2)] for A in range(2)]
    det = m[0][0] * m[1][1] - m[0][1] * m[1][0]
    rep.exact("quaternion.det", "det(qz) = z^2", det == sum((v * v for v in x), Poly4()))
    return rep


# translation generators and exact vertex factors


def _bilinear(basis: FockBasis, m, creation: bool) -> FockOp:
    """sum_AB m_AB a*_A b*_B  (creation) or  sum_AB m_AB b_A a_B  (annihilation)."""
    terms = []
    for A in range(2):
        for B in range(2):
            c = ExactComplex.coerce(m[A][B])
            if not c:
                continue
            if creation:
                word = ((_A[A], True), (_B[B], True))
            else:
                word = ((_B[A], False), (_A[B], False))
            terms.append((c, FockOp.from_word(basis, word)))
    op = FockOp.combination(basis, terms)
    op.shift = 2 if creation else 0
    return op


def translation_generators(basis: FockBasis) -> dict[int, FockOp]:
    """T_a = a* q_a b*, a = 1..4."""
    key = ("T",)
    if key not in basis.cache:
        basis.cache[key] = {a + 1: _bilinear(basis, QUATERNIONS[a], True) for a in range(4)}
    return basis.cache[key]


def translation_checks(basis: FockBasis) -> Report:
    rep = Report()
    T = translation_generators(basis)
    t_sq = FockOp.combination(basis, [(1, T[a] @ T[a]) for a in range(1, 5)])
    rep.exact("translation.T_squared", "sum_a T_a^2 = 0", t_sq.is_zero_on(4))
    rep.exact(
        "translation.commute",
        "[T_a, T_b] = 0",
        all(commutator(T[a], T[b]).is_zero_on(4) for a in range(1, 5) for b in range(a + 1, 5)),
    )
    H = conformal_hamiltonian(basis)
    rep.exact("translation.ladder", "[H, T_a] = T_a", all(commutator(H, T[a]).equals_on(T[a], 2) for a in range(1, 5)))
    return rep


def raising_operator(z: Sequence, basis: FockBasis) -> FockOp:
    """Tz = a* (qz) b*."""
    return _bilinear(basis, quaternion_slash(z), True)


def lowering_operator(w: Sequence, basis: FockBasis) -> FockOp:
    """b (q*w) a."""
    return _bilinear(basis, quaternion_slash_conj(w), False)


@dataclass(frozen=True)
class VertexFactors:
    A: FockOp
    B: FockOp
    z: tuple


def _exp_nilpotent(x: FockOp, basis: FockBasis) -> FockOp:
    out = FockOp.identity(basis)
    term = FockOp.identity(basis)
    k = 0
    while True:
        k += 1
        term = (x @ term) * Fraction(1, k)
        if term.is_zero_on(None):
            break
        out = out + term
    return out


def vertex_factors(z: Sequence, basis: FockBasis) -> VertexFactors:
    """A(z) = exp(a*(qz)b*), B(z) = exp((1/z^2) b (q* z_check) a), z_check = z/z^2, exact."""
    z = tuple(ExactComplex.coerce(c) for c in z)
    z2 = sum((c * c for c in z), ExactComplex(0))
    if not z2:
        raise ValueError("z^2 = 0: B(z) undefined")
    zc = tuple(c / z2 for c in z)
    a_op = _exp_nilpotent(raising_operator(z, basis), basis)
    b_op = _exp_nilpotent(lowering_operator(zc, basis) * (ExactComplex(1) / z2), basis)
    a_op.shift = basis.max_level
    return VertexFactors(a_op, b_op, z)


# harmonic polynomials

Zonal = dict  # {(i, j): Fraction} for z4^i (z_vec^2)^j


def _zonal_closed(k: int) -> Zonal:
    return {(k - 2 * j, j): Fraction((-1) ** j * math.comb(k + 1, 2 * j + 1)) for j in range(k // 2 + 1)}


def _zonal_mul(a: Zonal, b: Zonal) -> Zonal:
    out: Zonal = {}
    for (i1, j1), c1 in a.items():
        for (i2, j2), c2 in b.items():
            key = (i1 + i2, j1 + j2)
            out[key] = out.get(key, Fraction(0)) + c1 * c2
    return {k: v for k, v in out.items() if v}


def _zonal_add(a: Zonal, b: Zonal) -> Zonal:
    out = dict(a)
    for k, v in b.items():
        out[k] = out.get(k, Fraction(0)) + v
    return {k: v for k, v in out.items() if v}


@lru_cache(maxsize=None)
def _zonal_recurrence(k: int) -> tuple:
    """h_{k+1} = 2 z4 h_k - z^2 h_{k-1}, z^2 = z_vec^2 + z4^2."""
    if k == 0:
        return (((0, 0), Fraction(1)),)
    if k == 1:
        return (((1, 0), Fraction(2)),)
    h1, h2 = dict(_zonal_recurrence(k - 1)), dict(_zonal_recurrence(k - 2))
    z2 = {(0, 1): Fraction(1), (2, 0): Fraction(1)}
    out = _zonal_add(_zonal_mul({(1, 0): Fraction(2)}, h1), _zonal_mul({(0, 0): Fraction(-1)}, _zonal_mul(z2, h2)))
    return tuple(sorted(out.items()))


def harmonic_h_zonal(k: int, mode: str = "closed_form") -> Zonal:
    """Coefficients of h_k in the (z4, z_vec^2) form."""
    if k < 0:
        raise ValueError("k must be >= 0")
    if mode == "closed_form":
        return _zonal_closed(k)
    if mode == "recurrence":
        return dict(_zonal_recurrence(k))
    raise ValueError(f"zonal form not available for mode {mode!r}")


def zonal_to_poly(coeffs: Zonal) -> Poly4:
    z4 = Poly4.variable(4)
    zv2 = sum((Poly4.variable(a) * Poly4.variable(a) for a in (1, 2, 3)), Poly4())
    return sum((z4**i * zv2**j * c for (i, j), c in coeffs.items()), Poly4())


def format_zonal(coeffs: Zonal) -> str:
    """Render as e.g. "3 z4^2 - zv^2" (zv^2 stands for z1^2 + z2^2 + z3^2)."""
    if not coeffs:
        return "0"
    parts = []
    for (i, j), c in sorted(coeffs.items(), key=lambda t: (-t[0][0], t[0][1])):
        mono = " ".join(s for s in (
            "z4" + (f"^{i}" if i > 1 else "") if i else "",
            (f"(zv^2)^{j}" if j > 1 else "zv^2") if j else "",
        ) if s)
        mag = abs(c)
        coef = "" if mag == 1 and mono else str(mag)
        term = " ".join(s for s in (coef, mono) if s)
        parts.append(("- " if c < 0 else "+ ") + term)
    out = " ".join(parts)
    return out[2:] if out.startswith("+ ") else "-" + out[1:]


def _fock_h(k: int, basis: FockBasis) -> Poly4:
    """(1/k!^2) <0| (ba)^k (Tz)^k |0> with polynomial coefficients."""
    if basis.e_max < k + 1:
        raise GuardBandError(f"fock route for h_{k} needs e_max >= {k + 1}, got {basis.e_max}")
    lin = {}
    for A in range(2):
        for B in range(2):
            p = sum((Poly4.variable(a + 1) * _q(a, A, B) for a in range(4)), Poly4())
            if not p.is_zero():
                lin[(A, B)] = p
    vec = {(0, 0, 0, 0): Poly4.constant(1)}
    for _ in range(k):
        new: dict = {}
        for occ, c in vec.items():
            for (A, B), p in lin.items():
                n = list(occ)
                n[_A[A]] += 1
                n[_B[B]] += 1
                t = tuple(n)
                if t not in basis.index:
                    raise GuardBandError(f"state {t} beyond cutoff")
                new[t] = new.get(t, Poly4()) + c * p
        vec = new
    for _ in range(k):
        new = {}
        for occ, c in vec.items():
            for A in range(2):
                na, nb = occ[_A[A]], occ[_B[A]]
                if na and nb:
                    n = list(occ)
                    n[_A[A]] -= 1
                    n[_B[A]] -= 1
                    t = tuple(n)
                    new[t] = new.get(t, Poly4()) + c * (na * nb)
        vec = new
    return vec.get((0, 0, 0, 0), Poly4()) * Fraction(1, math.factorial(k) ** 2)


def harmonic_h(k: int, mode: str = "closed_form", basis: FockBasis | None = None) -> Poly4:
    if mode == "fock":
        return _fock_h(k, basis if basis is not None else build_basis(k + 1))
    return zonal_to_poly(harmonic_h_zonal(k, mode))


def laplacian(p: Poly4) -> Poly4:
    return sum((p.derivative(a).derivative(a) for a in range(1, 5)), Poly4())


def _monomials(deg: int) -> list[tuple[int, int, int, int]]:
    return [e for e in itertools.product(range(deg + 1), repeat=4) if sum(e) == deg]


def harmonic_dimension(deg: int) -> int:
    """Monomials of degree ``deg`` minus the rank of the Laplacian on them."""
    if deg < 0:
        return 0
    src, dst = _monomials(deg), _monomials(deg - 2)
    if not dst:
        return len(src)
    pos = {e: i for i, e in enumerate(dst)}
    cols = []
    for e in src:
        col = [Fraction(0)] * len(dst)
        for t, c in laplacian(Poly4({e: 1})).terms.items():
            col[pos[t]] += c.re
        cols.append(col)
    return len(src) - rank(cols)


def eigenspace_dimension(n: int, basis: FockBasis) -> int:
    """Dimension of the H = n eigenspace in the zero-helicity sector."""
    if not 1 <= n <= basis.e_max:
        raise ValueError(f"n must lie in 1..{basis.e_max}")
    return spectrum(basis).get(0, {}).get(Fraction(n), 0)


# numeric routes: two-point function and norm


def _numeric_raise(vec: dict, m: np.ndarray) -> dict:
    new: dict = {}
    for occ, c in vec.items():
        for A in range(2):
            for B in range(2):
                if m[A, B] == 0:
                    continue
                n = list(occ)
                n[_A[A]] += 1
                n[_B[B]] += 1
                t = tuple(n)
                new[t] = new.get(t, 0j) + c * m[A, B]
    return new


def _numeric_lower(vec: dict, m: np.ndarray) -> dict:
    """Apply sum m_AB b_A a_B."""
    new: dict = {}
    for occ, c in vec.items():
        for A in range(2):
            for B in range(2):
                nb, na = occ[_B[A]], occ[_A[B]]
                if m[A, B] == 0 or not nb or not na:
                    continue
                n = list(occ)
                n[_B[A]] -= 1
                n[_A[B]] -= 1
                t = tuple(n)
                new[t] = new.get(t, 0j) + c * m[A, B] * nb * na
    return new


def _gram(occ) -> float:
    return float(math.prod(math.factorial(k) for k in occ))


def _kmax(basis: FockBasis | int) -> int:
    e_max = basis if isinstance(basis, int) else basis.e_max
    return e_max - 1


@dataclass
class SeriesResult:
    series: complex
    closed: complex
    last_term: float
    terms: list

    @property
    def residual(self) -> float:
        return abs(self.series - self.closed)

    @property
    def relative_residual(self) -> float:
        return self.residual / abs(self.closed)

    def partial_sums(self) -> list[complex]:
        return list(itertools.accumulate(self.terms))


def vertex_norm_sq(z, basis: FockBasis | int, tol: float | None = 1e-8) -> SeriesResult:
    """||A(z)|0>||^2 summed over the cutoff, with the closed form 1/(1 - 2 z.zbar + z^2 zbar^2)."""
    z = np.asarray(z, dtype=complex)
    if tube_classify(z) is not Tube.FORWARD:
        raise ValueError("vertex_norm_sq needs z in the forward tube")
    m = _slash_numeric(z)
    vec = {(0, 0, 0, 0): 1 + 0j}
    terms = [1.0 + 0j]
    for k in range(1, _kmax(basis) + 1):
        vec = _numeric_raise(vec, m)
        terms.append(sum(abs(c) ** 2 * _gram(o) for o, c in vec.items()) / math.factorial(k) ** 2 + 0j)
    zz, z2 = float(zzbar(z)), complex(zsq(z))
    closed = 1 / (1 - 2 * zz + abs(z2) ** 2)
    res = SeriesResult(sum(terms), closed + 0j, abs(terms[-1]), terms)
    if tol is not None and len(terms) > 1 and res.last_term > tol * abs(res.series):
        raise ConvergenceError(f"last norm term {res.last_term:.3e} above tolerance {tol:g}")
    return res


PREFACTORS = ("exponent", "overall", "none")


def two_point_vev(
    z1,
    z2,
    basis: FockBasis | int,
    tol: float | None = 1e-8,
    prefactor: str = "exponent",
    quadric_tol: float = 1e-12,
) -> SeriesResult:
    """<0| B(z1) A(z2) |0> summed over the cutoff, compared with 1/(z1 - z2)^2.

    ``prefactor`` places the 1/z1^2 factor: "exponent" (inside the exponent of
    B, as written there), "overall" (multiplying the whole matrix element) or
    "none". All three agree on the unit quadric z1^2 = 1, which is required
    unless ``quadric_tol`` is None.
    """
    if prefactor not in PREFACTORS:
        raise ValueError(f"prefactor must be one of {PREFACTORS}")
    z1, z2 = np.asarray(z1, dtype=complex), np.asarray(z2, dtype=complex)
    s1 = complex(zsq(z1))
    if quadric_tol is not None and abs(s1 - 1) > quadric_tol:
        raise ValueError("z1 must lie on the unit quadric z1^2 = 1")
    lower = _slash_numeric(z1 / s1, conj=True)
    if prefactor == "exponent":
        lower = lower / s1
    raise_m = _slash_numeric(z2)
    vec = {(0, 0, 0, 0): 1 + 0j}
    terms = [1 + 0j]
    for k in range(1, _kmax(basis) + 1):
        vec = _numeric_raise(vec, raise_m)
        low = vec
        for _ in range(k):
            low = _numeric_lower(low, lower)
        terms.append(low.get((0, 0, 0, 0), 0j) / math.factorial(k) ** 2)
    if prefactor == "overall":
        terms = [t / s1 for t in terms]
    closed = 1 / complex(zsq(z1 - z2))
    res = SeriesResult(complex(sum(terms)), closed, abs(terms[-1]), terms)
    if tol is not None and res.last_term > tol * abs(res.series):
        raise ConvergenceError(f"last two-point term {res.last_term:.3e} above tolerance {tol:g}")
    return res


def two_point_closed(z1, z2) -> complex:
    return 1 / complex(zsq(np.asarray(z1, dtype=complex) - np.asarray(z2, dtype=complex)))


def two_point_conjugation_residual(z1, z2) -> float:
    """|conj(w(z1, z2)) - w(z2*, z1*) / (conj(z1)^2 conj(z2)^2)|, relative to |w(z1, z2)|."""
    z1, z2 = np.asarray(z1, dtype=complex), np.asarray(z2, dtype=complex)
    lhs = np.conj(two_point_closed(z1, z2))
    rhs = two_point_closed(star_involution(z2), star_involution(z1)) / (
        complex(zsq(z1.conj())) * complex(zsq(z2.conj()))
    )
    return float(abs(lhs - rhs) / abs(lhs))


def two_point_conjugation_check(z1, z2, tol: float = 1e-10) -> Report:
    rep = Report()
    rep.numeric("two_point.conjugation", "conj(w(z1,z2)) = w(z2*, z1*) / (zbar1^2 zbar2^2)",
                two_point_conjugation_residual(z1, z2), tol)
    return rep


# sample grids

TWO_POINT_Z1 = (0.0, 0.0, 0.0, 1.0)
TWO_POINT_GRID = (
    (0.0, 0.0, 0.0, 0.0),
    (0.0, 0.0, 0.0, 0.3),
    (0.2, 0.0, 0.0, 0.2),
    (0.1, -0.15, 0.05, 0.2j),
    (0.12j, 0.1, 0.0, -0.2),
)
NORM_GRID = (
    (0.0, 0.0, 0.0, 0.0),
    (0.0, 0.0, 0.0, 0.3),
    (0.2, 0.1, 0.0, 0.1j),
    (0.1j, 0.15, -0.1, 0.05),
    (0.05, 0.1j, 0.2, 0.1),
)


def verify_vertex(
    basis: FockBasis, numeric_e_max: int = 20, seed: int = 0, k_max: int = 8, aux_tol: float = 1e-10
) -> Report:
    rep = Report()
    rep.extend(quaternion_identity_check())
    rep.extend(translation_checks(basis))

    fock_basis = build_basis(k_max + 1)
    bad, nonharm = [], []
    for k in range(k_max + 1):
        closed = harmonic_h(k, "closed_form")
        if not (closed == harmonic_h(k, "recurrence") == harmonic_h(k, "fock", fock_basis)):
            bad.append(k)
        if not laplacian(closed).is_zero():
            nonharm.append(k)
    rep.exact("harmonic.three_routes", f"h_k closed form = recurrence = Fock element, k <= {k_max}", not bad, bad or None)
    rep.exact("harmonic.laplacian", f"laplacian(h_k) = 0, k <= {k_max}", not nonharm, nonharm or None)
    rep.exact(
        "harmonic.printed_low",
        "h_0..h_3 = 1, 2 z4, 3 z4^2 - zv^2, 4 z4^3 - 4 z4 zv^2",
        [harmonic_h_zonal(k) for k in range(4)]
        == [{(0, 0): 1}, {(1, 0): 2}, {(2, 0): 3, (0, 1): -1}, {(3, 0): 4, (1, 1): -4}],
    )

    dims = [(n, eigenspace_dimension(n, basis), harmonic_dimension(n - 1)) for n in range(1, basis.e_max + 1)]
    rep.exact(
        "eigenspace.dimension",
        f"dim H=n eigenspace = n^2 by spectrum and harmonic count, n <= {basis.e_max}",
        all(a == b == n * n for n, a, b in dims),
        [list(d) for d in dims],
    )

    worst = 0.0
    for z2 in TWO_POINT_GRID:
        worst = max(worst, two_point_vev(TWO_POINT_Z1, z2, numeric_e_max, tol=None).relative_residual)
    rep.numeric("two_point.grid", f"<0|B(z1)A(z2)|0> = 1/z12^2 at e_max {numeric_e_max}", worst, 1e-8)

    worst = 0.0
    for z in NORM_GRID:
        worst = max(worst, vertex_norm_sq(z, numeric_e_max, tol=None).relative_residual)
    rep.numeric("norm.grid", f"||A(z)|0>||^2 = 1/(1 - 2 z.zbar + z^2 zbar^2) at e_max {numeric_e_max}", worst, 1e-8)

    rng = np.random.default_rng(seed)
    worst = 0.0
    count = 0
    while count < 100:
        z1 = rng.normal(size=4) + 1j * rng.normal(size=4)
        z2 = rng.normal(size=4) + 1j * rng.normal(size=4)
        if min(abs(zsq(z1.conj())), abs(zsq(z2.conj())), abs(zsq(z1 - z2))) < 1e-3:
            continue
        worst = max(worst, two_point_conjugation_residual(z1, z2))
        count += 1
    rep.numeric("two_point.conjugation", "conjugation law on 100 random pairs", worst, aux_tol)

    small = build_basis(4)
    zq = (Fraction(1, 2), ExactComplex(0, Fraction(1, 3)), 0, Fraction(1, 4))
    vf = vertex_factors(zq, small)
    vac = FockVector.vacuum(small)
    row0 = vf.A.re.tocsr()[0], vf.A.im.tocsr()[0]
    rep.exact(
        "vertex_factors.vacuum",
        "B(z)|0> = |0> and <0|A(z) = <0|",
        vf.B.apply(vac, check_guard=False) == vac
        and row0[1].nnz == 0
        and list(row0[0].indices) == [0]
        and vf.A.entry(0, 0) == ExactComplex(1),
    )
    return rep
