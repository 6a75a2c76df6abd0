"""Gamma matrices of Cl(4,1) in the Dirac and chiral pictures and the u(2,2) subalgebra.

Conventions: metric diag(-1, 1, 1, 1); ``gamma[mu]`` carries a lower index, the
Dirac-picture form is beta-diagonal, the chiral one gamma5-diagonal, and
``gamma[0] = i*beta`` in both pictures (so ``beta = i*gamma^0``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from functools import lru_cache

from .algebra_core import (
    I,
    ExactComplex,
    Mat4,
    anticommutator,
    commutator,
    inverse_exact,
    pivot_columns,
    rank,
)
from .checks import Report

METRIC = (-1, 1, 1, 1)

SIGMA0 = ((1, 0), (0, 1))
SIGMA1 = ((0, 1), (1, 0))
SIGMA2 = ((0, ExactComplex(0, -1)), (ExactComplex(0, 1), 0))
SIGMA3 = ((1, 0), (0, -1))
PAULI = (SIGMA1, SIGMA2, SIGMA3)
# c = i sigma_2
C_MAT = ((0, 1), (-1, 0))


def _scale2(m, c):
    c = ExactComplex.coerce(c)
    return tuple(tuple(c * ExactComplex.coerce(x) for x in row) for row in m)


def _add2(a, b):
    return tuple(
        tuple(ExactComplex.coerce(x) + ExactComplex.coerce(y) for x, y in zip(r, s))
        for r, s in zip(a, b)
    )


# q_j = -i sigma_j, q_4 = 1
QUATERNIONS = tuple(_scale2(s, ExactComplex(0, -1)) for s in PAULI) + (_scale2(SIGMA0, 1),)


class Picture(str, Enum):
    DIRAC = "dirac"
    CHIRAL = "chiral"


@dataclass(frozen=True)
class GammaSet:
    picture: Picture
    gamma: tuple[Mat4, Mat4, Mat4, Mat4]
    gamma5: Mat4
    beta: Mat4
    metric: tuple[int, int, int, int] = METRIC

    def gamma_mn(self, mu: int, nu: int) -> Mat4:
        return commutator(self.gamma[mu], self.gamma[nu]).scale(Fraction(1, 2))

    @property
    def pi_plus(self) -> Mat4:
        return (Mat4.identity() + self.gamma5).scale(Fraction(1, 2))

    @property
    def pi_minus(self) -> Mat4:
        return (Mat4.identity() - self.gamma5).scale(Fraction(1, 2))

    def generators(self) -> dict[str, Mat4]:
        """The five Cl(4,1) generators keyed by index label ('0'..'3', '5')."""
        out = {str(mu): g for mu, g in enumerate(self.gamma)}
        out["5"] = self.gamma5
        return out


@lru_cache(maxsize=None)
def build_gammas(picture: Picture | str) -> GammaSet:
    picture = Picture(picture)
    one = SIGMA0
    if picture is Picture.DIRAC:
        beta = Mat4.kron(SIGMA3, one)
        gamma5 = Mat4.kron(SIGMA1, one)
        spatial = [-Mat4.kron(C_MAT, q) for q in QUATERNIONS[:3]]
    else:
        beta = Mat4.kron(SIGMA1, one)
        gamma5 = Mat4.kron(SIGMA3, one)
        spatial = [Mat4.kron(C_MAT, q) for q in QUATERNIONS[:3]]
    gamma0 = beta.scale(I)
    return GammaSet(picture, (gamma0, *spatial), gamma5, beta)


@lru_cache(maxsize=None)
def similarity_V() -> Mat4:
    """sqrt(2) * V = (sigma_1 + sigma_3) (x) 1.

    V itself has a 1/sqrt(2); every use below goes through ``v_conjugate`` where
    the two factors combine to 1/2.
    """
    return Mat4.kron(_add2(SIGMA1, SIGMA3), SIGMA0)


def v_conjugate(x: Mat4) -> Mat4:
    """V x V, exactly."""
    w = similarity_V()
    return (w @ x @ w).scale(Fraction(1, 2))


# u(2,2)


def _is_u22(x: Mat4, beta: Mat4) -> bool:
    return (x.adjoint() @ beta + beta @ x).is_zero()


class U22Error(ValueError):
    pass


@dataclass(frozen=True)
class U22Basis:
    labels: tuple[str, ...]
    elements: tuple[Mat4, ...]
    beta: Mat4

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(zip(self.labels, self.elements))

    def __getitem__(self, label: str) -> Mat4:
        return self.elements[self.labels.index(label)]

    @property
    def _solver(self):
        return _span_solver(self.elements)

    def coordinates(self, x: Mat4) -> list[Fraction] | None:
        """Real coordinates of ``x`` in this basis, or ``None`` if ``x`` is outside the span."""
        pivots, inv, cols = self._solver
        b = x.real_coordinates()
        coords = [sum(inv[i][k] * b[p] for k, p in enumerate(pivots) if b[p]) for i in range(len(inv))]
        for r in range(32):
            if sum(cols[j][r] * coords[j] for j in range(len(coords)) if cols[j][r]) != b[r]:
                return None
        return coords

    def closure_failures(self) -> list[tuple[str, str]]:
        bad = []
        for (la, a), (lb, b) in itertools.combinations(self, 2):
            if self.coordinates(commutator(a, b)) is None:
                bad.append((la, lb))
        return bad


@lru_cache(maxsize=None)
def _span_solver(elements: tuple[Mat4, ...]):
    cols = [e.real_coordinates() for e in elements]
    n = len(cols)
    # n independent coordinate rows; invert that square block once
    pivots = pivot_columns(cols)
    if len(pivots) != n:
        raise U22Error("basis elements are linearly dependent over the reals")
    inv = inverse_exact([[cols[j][p] for j in range(n)] for p in pivots])
    return tuple(pivots), inv, cols


def u22_basis(g: GammaSet) -> U22Basis:
    labels, elems = [], []
    for mu in range(4):
        labels.append(f"g{mu}")
        elems.append(g.gamma[mu])
    for mu, nu in itertools.combinations(range(4), 2):
        labels.append(f"g{mu}{nu}")
        elems.append(g.gamma_mn(mu, nu))
    for mu in range(4):
        labels.append(f"g5g{mu}")
        elems.append(g.gamma5 @ g.gamma[mu])
    labels.append("g5")
    elems.append(g.gamma5)
    labels.append("i1")
    elems.append(Mat4.identity().scale(I))
    bad = [lab for lab, x in zip(labels, elems) if not _is_u22(x, g.beta)]
    if bad:
        raise U22Error(f"elements violate X*beta + beta X = 0: {bad}")
    return U22Basis(tuple(labels), tuple(elems), g.beta)


def _unit_matrices():
    for i in range(4):
        for j in range(4):
            for c in (ExactComplex(1), I):
                rows = [[0] * 4 for _ in range(4)]
                rows[i][j] = c
                yield Mat4(rows)


def u22_real_dimension(beta: Mat4) -> int:
    """Dimension over R of {X : X* beta + beta X = 0}, by exact rank-nullity."""
    columns = [(x.adjoint() @ beta + beta @ x).real_coordinates() for x in _unit_matrices()]
    rows = [list(r) for r in zip(*columns)]
    return 32 - rank(rows)


# Clifford conjugation


def clifford_monomials(g: GammaSet) -> list[tuple[tuple[str, ...], Mat4]]:
    """1, the five generators and their ten ordered pairwise products."""
    gens = list(g.generators().items())
    out = [((), Mat4.identity())]
    out += [((k,), m) for k, m in gens]
    for (ka, a), (kb, b) in itertools.combinations(gens, 2):
        out.append(((ka, kb), a @ b))
    return out


class ExpansionError(ArithmeticError):
    pass


def clifford_expand(x: Mat4, g: GammaSet) -> list[tuple[tuple[str, ...], ExactComplex, Mat4]]:
    out = []
    recon = Mat4.zeros()
    for word, m in clifford_monomials(g):
        sq = m @ m
        sign = sq[0, 0]
        if sq != Mat4.identity().scale(sign):
            raise ExpansionError(f"monomial {word} does not square to +-1")
        inv = m.scale(sign)
        c = (inv @ x).trace() / 4
        out.append((word, c, m))
        recon = recon + m.scale(c)
    if recon != x:
        raise ExpansionError("expansion residual is nonzero")
    return out


def clifford_conjugate(x: Mat4, g: GammaSet) -> Mat4:
    """Anti-homomorphism with gamma_a -> -gamma_a on every generator.

    Over the real algebra Cl(4,1) the complex unit is the (odd) pseudoscalar,
    so the map is antilinear on complex coefficients.
    """
    out = Mat4.zeros()
    for word, c, m in clifford_expand(x, g):
        # reversing k anticommuting generators gives (-1)^(k(k-1)/2), each flips sign
        k = len(word)
        sign = (-1) ** k * (-1) ** (k * (k - 1) // 2)
        out = out + m.scale(c.conjugate() * sign)
    return out


# identity suites


def gamma_invariants(g: GammaSet) -> Report:
    rep = Report()
    one = Mat4.identity()
    p = g.picture.value
    ok = all(
        anticommutator(g.gamma[m], g.gamma[n]) == one.scale(2 * METRIC[m] * (m == n))
        for m in range(4)
        for n in range(4)
    )
    rep.exact(f"{p}.anticommutator", "gamma anticommutator = 2 eta", ok)
    rep.exact(
        f"{p}.hermiticity",
        "gamma_mu* = eta_mumu gamma_mu",
        all(g.gamma[m].adjoint() == g.gamma[m].scale(METRIC[m]) for m in range(4)),
    )
    b = g.beta
    rep.exact(
        f"{p}.beta_form",
        "beta hermitian, involutive, traceless",
        b.adjoint() == b and b @ b == one and b.trace() == 0,
    )
    rep.exact(
        f"{p}.gamma_preserves_form",
        "gamma_mu* beta + beta gamma_mu = 0",
        all(_is_u22(g.gamma[m], b) for m in range(4)),
    )
    rep.exact(
        f"{p}.gamma_mn_preserves_form",
        "gamma_munu* beta + beta gamma_munu = 0",
        all(_is_u22(g.gamma_mn(m, n), b) for m, n in itertools.combinations(range(4), 2)),
    )
    g5 = g.gamma5
    rep.exact(
        f"{p}.gamma5",
        "gamma5 hermitian, squares to 1, anticommutes with gamma_mu",
        g5.adjoint() == g5
        and g5 @ g5 == one
        and all(anticommutator(g5, g.gamma[m]).is_zero() for m in range(4)),
    )
    return rep


def projector_identities(g: GammaSet) -> Report:
    rep = Report()
    one = Mat4.identity()
    pp, pm = g.pi_plus, g.pi_minus
    p = g.picture.value
    gp = [g.gamma[m] @ pp for m in range(4)]
    rep.exact(f"{p}.pi_sum", "Pi+ + Pi- = 1", pp + pm == one)
    rep.exact(f"{p}.pi_orthogonal", "Pi+ Pi- = 0", (pp @ pm).is_zero())
    rep.exact(
        f"{p}.translations_square_zero",
        "gamma_mu Pi+ gamma_nu Pi+ = 0",
        all((a @ b).is_zero() for a in gp for b in gp),
    )
    rep.exact(
        f"{p}.translations_commute",
        "[gamma_mu Pi+, gamma_nu Pi+] = 0",
        all(commutator(a, b).is_zero() for a in gp for b in gp),
    )
    rep.exact(
        f"{p}.translations_chirality",
        "gamma5 gamma_mu Pi+ = -gamma_mu Pi+",
        all(g.gamma5 @ a == -a for a in gp),
    )
    rep.exact(
        f"{p}.pi_intertwine",
        "gamma_mu Pi+ = Pi- gamma_mu",
        all(gp[m] == pm @ g.gamma[m] for m in range(4)),
    )
    return rep


def poincare_dilation_matrices(g: GammaSet) -> list[Mat4]:
    """gamma_munu (6), gamma5, gamma_mu Pi+ (4)."""
    out = [g.gamma_mn(m, n) for m, n in itertools.combinations(range(4), 2)]
    out.append(g.gamma5)
    out += [g.gamma[m] @ g.pi_plus for m in range(4)]
    return out


def verify_clifford() -> Report:
    """Every exact matrix identity for both pictures."""
    rep = Report()
    one = Mat4.identity()
    d, ch = build_gammas(Picture.DIRAC), build_gammas(Picture.CHIRAL)
    c_mat = Mat4.kron(C_MAT, SIGMA0)
    for g in (d, ch):
        rep.extend(gamma_invariants(g))
        rep.extend(projector_identities(g))
    rep.exact("dirac.explicit", "beta^D = s3 x 1, gamma5^D = s1 x 1",
              d.beta == Mat4.kron(SIGMA3, SIGMA0) and d.gamma5 == Mat4.kron(SIGMA1, SIGMA0))
    triple_d = d.gamma[1] @ d.gamma[2] @ d.gamma[3]
    rep.exact("dirac.triple", "gamma5 beta = gamma1 gamma2 gamma3 = c* x 1",
              d.gamma5 @ d.beta == triple_d == c_mat.adjoint())
    rep.exact("chiral.explicit", "beta^Ch = s1 x 1, gamma5^Ch = s3 x 1",
              ch.beta == Mat4.kron(SIGMA1, SIGMA0) and ch.gamma5 == Mat4.kron(SIGMA3, SIGMA0))
    triple_ch = ch.gamma[1] @ ch.gamma[2] @ ch.gamma[3]
    rep.exact("chiral.triple", "gamma5 beta = gamma1 gamma2 gamma3 = c x 1",
              ch.gamma5 @ ch.beta == triple_ch == c_mat)
    w = similarity_V()
    rep.exact("V.involution", "V^2 = 1, tr V = 0", w @ w == one.scale(2) and w.trace() == 0)
    rep.exact(
        "V.intertwines",
        "V gamma^Ch V = gamma^D (all five generators)",
        all(v_conjugate(ch.gamma[m]) == d.gamma[m] for m in range(4))
        and v_conjugate(ch.gamma5) == d.gamma5
        and v_conjugate(ch.beta) == d.beta
        and all(v_conjugate(d.gamma[m]) == ch.gamma[m] for m in range(4)),
    )
    rep.exact("V.triple_sign", "gamma1 gamma2 gamma3 flips sign between pictures", triple_ch == -triple_d)
    rep.exact(
        "chiral.quaternion_form",
        "gamma_j^Ch = c x q_j, gamma_j^D = -gamma_j^Ch",
        all(ch.gamma[j + 1] == Mat4.kron(C_MAT, QUATERNIONS[j]) for j in range(3))
        and all(d.gamma[j] == -ch.gamma[j] for j in (1, 2, 3)),
    )
    for g in (d, ch):
        p = g.picture.value
        rep.exact(f"{p}.u22_dimension", "dim_R {X : X* beta + beta X = 0} = 16",
                  u22_real_dimension(g.beta) == 16)
        basis = u22_basis(g)
        rep.exact(f"{p}.u22_basis_independent", "16 basis elements independent over R",
                  rank([e.real_coordinates() for e in basis.elements]) == 16)
        bad = basis.closure_failures()
        rep.exact(f"{p}.u22_closure", "commutators stay in the real span", not bad, bad or None)
        rep.exact(
            f"{p}.clifford_conjugation",
            "X+ = -X on all of u(2,2)",
            all(clifford_conjugate(x, g) == -x for _, x in basis),
        )
        rep.exact(
            f"{p}.poincare_dilation_span",
            "the eleven Poincare+dilation matrices lie in u(2,2)",
            all(basis.coordinates(x) is not None for x in poincare_dilation_matrices(g)),
        )
    return rep
