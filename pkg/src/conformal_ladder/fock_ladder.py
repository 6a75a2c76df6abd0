"""Truncated Fock space of two a- and two b-oscillators and the ladder representation of u(2,2).

States are occupation tuples ``(n_a1, n_a2, n_b1, n_b2)``. Vectors are written in
the unnormalized monomial basis ``(a1*)^n1 (a2*)^n2 (b1*)^n3 (b2*)^n4 |0>`` so that
every matrix element is an integer: ``a* |n> = |n+1>`` and ``a |n> = n |n-1>``.
The (diagonal) Gram matrix ``<n|n> = n1! n2! n3! n4!`` is carried separately.

Operators built from a single oscillator word are exact on every basis state.
Products of operators lose whatever was pushed past the cutoff, so identities are
only asserted on states with enough headroom; each :class:`FockOp` carries the
number of occupation units (``shift``) it may raise by.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

import numpy as np
import scipy.sparse as sp

from .algebra_core import ExactComplex, Mat4, Rational
from .algebra_core import commutator as mat_comm
from .checks import Report
from .clifford import Picture, build_gammas, u22_basis, v_conjugate

MODES = ("a1", "a2", "b1", "b2")
_INT_LIMIT = 2**62


class GuardBandError(ValueError):
    """An operator was applied where truncation would corrupt the result."""


@dataclass(frozen=True, eq=False)
class FockBasis:
    e_max: int
    states: tuple[tuple[int, int, int, int], ...]
    index: dict = field(repr=False)
    levels: np.ndarray = field(repr=False)
    gram: tuple[int, ...] = field(repr=False)
    cache: dict = field(default_factory=dict, repr=False)

    @property
    def max_level(self) -> int:
        """Largest total occupation N_a + N_b kept."""
        return 2 * (self.e_max - 1)

    def __len__(self) -> int:
        return len(self.states)

    def energy(self, i: int) -> Fraction:
        return Fraction(int(self.levels[i]), 2) + 1

    def guarded(self, shift: int) -> np.ndarray:
        """Indices of states with ``level + shift <= max_level``."""
        return np.flatnonzero(self.levels + shift <= self.max_level)

    def helicity_of(self, i: int) -> int:
        n = self.states[i]
        return n[0] + n[1] - n[2] - n[3]

    def __eq__(self, other):
        return isinstance(other, FockBasis) and other.e_max == self.e_max

    def __hash__(self):
        return hash(("FockBasis", self.e_max))


def build_basis(e_max: int) -> FockBasis:
    if e_max < 1:
        raise ValueError("e_max must be >= 1")
    return _build_basis(int(e_max))


@lru_cache(maxsize=8)
def _build_basis(e_max: int) -> FockBasis:
    top = 2 * (e_max - 1)
    states = []
    for m in range(top + 1):
        for n1 in range(m, -1, -1):
            for n2 in range(m - n1, -1, -1):
                for n3 in range(m - n1 - n2, -1, -1):
                    states.append((n1, n2, n3, m - n1 - n2 - n3))
    states = tuple(states)
    index = {s: i for i, s in enumerate(states)}
    levels = np.array([sum(s) for s in states], dtype=np.int64)
    gram = tuple(math.prod(math.factorial(k) for k in s) for s in states)
    return FockBasis(e_max, states, index, levels, gram)


def basis_size(e_max: int) -> int:
    return sum(math.comb(m + 3, 3) for m in range(2 * (e_max - 1) + 1))


# oscillator words

Letter = tuple[int, bool]  # (mode index, dagger)


def _letter(name: str) -> Letter:
    dagger = name.endswith("*")
    return MODES.index(name.rstrip("*")), dagger


def parse_word(word: str | Sequence) -> tuple[Letter, ...]:
    """``"a1* b2*"`` -> ((0, True), (3, True)); letters act right to left."""
    if isinstance(word, str):
        return tuple(_letter(w) for w in word.split())
    return tuple(word)


def word_action(word: Sequence[Letter], state: Sequence[int]) -> tuple[int, tuple[int, ...]]:
    """Apply an oscillator word to a monomial state, without truncation."""
    n = list(state)
    c = 1
    for mode, dagger in reversed(word):
        if dagger:
            n[mode] += 1
        else:
            if n[mode] == 0:
                return 0, tuple(n)
            c *= n[mode]
            n[mode] -= 1
    return c, tuple(n)


def _word_shift(word: Sequence[Letter]) -> int:
    return max(0, sum(1 if d else -1 for _, d in word))


# exact sparse operators


def _gcd_array(a: np.ndarray) -> int:
    return int(np.gcd.reduce(np.abs(a))) if a.size else 0


class FockOp:
    """Exact linear operator on a truncated Fock space.

    The matrix is ``scale * (re + i*im)`` with integer sparse ``re``/``im`` (CSC,
    columns are input states).
    """

    __slots__ = ("basis", "re", "im", "scale", "shift")

    def __init__(self, basis: FockBasis, re, im, scale: Rational = 1, shift: int = 0):
        self.basis = basis
        re = sp.csc_matrix(re, dtype=np.int64)
        im = sp.csc_matrix(im, dtype=np.int64)
        re.eliminate_zeros()
        im.eliminate_zeros()
        scale = Fraction(scale)
        g = math.gcd(_gcd_array(re.data), _gcd_array(im.data))
        if g > 1:
            re = re.copy()
            im = im.copy()
            re.data //= g
            im.data //= g
            scale *= g
        if re.nnz == 0 and im.nnz == 0:
            scale = Fraction(1)
        self.re, self.im, self.scale, self.shift = re, im, scale, int(shift)

    # construction

    @classmethod
    def zero(cls, basis: FockBasis) -> "FockOp":
        n = len(basis)
        return cls(basis, sp.csc_matrix((n, n), dtype=np.int64), sp.csc_matrix((n, n), dtype=np.int64))

    @classmethod
    def identity(cls, basis: FockBasis) -> "FockOp":
        n = len(basis)
        return cls(basis, sp.identity(n, dtype=np.int64, format="csc"), sp.csc_matrix((n, n), dtype=np.int64))

    @classmethod
    def diagonal(cls, basis: FockBasis, values: Sequence[Rational]) -> "FockOp":
        vals = [Fraction(v) for v in values]
        den = math.lcm(*(v.denominator for v in vals)) if vals else 1
        ints = np.array([int(v * den) for v in vals], dtype=np.int64)
        n = len(basis)
        return cls(basis, sp.diags(ints, format="csc"), sp.csc_matrix((n, n), dtype=np.int64), Fraction(1, den))

    @classmethod
    def from_word(cls, basis: FockBasis, word, coeff: Rational = 1) -> "FockOp":
        word = parse_word(word)
        rows, cols, vals = [], [], []
        for j, s in enumerate(basis.states):
            c, t = word_action(word, s)
            if c:
                i = basis.index.get(t)
                if i is not None:
                    rows.append(i)
                    cols.append(j)
                    vals.append(c)
        n = len(basis)
        re = sp.csc_matrix((np.array(vals, dtype=np.int64), (rows, cols)), shape=(n, n))
        return cls(basis, re, sp.csc_matrix((n, n), dtype=np.int64), coeff, _word_shift(word))

    @classmethod
    def combination(cls, basis: FockBasis, terms: Iterable[tuple[object, "FockOp"]]) -> "FockOp":
        """Sum of ``coeff * op`` over ``terms``."""
        out = cls.zero(basis)
        for c, op in terms:
            c = ExactComplex.coerce(c)
            if c:
                out = out + op * c
        return out

    # arithmetic

    def _same(self, other: "FockOp"):
        if other.basis != self.basis:
            raise ValueError("operators live on different bases")

    def _aligned(self, other: "FockOp"):
        s1, s2 = self.scale, other.scale
        s = Fraction(
            math.gcd(s1.numerator * s2.denominator, s2.numerator * s1.denominator),
            s1.denominator * s2.denominator,
        )
        return s, int(s1 / s), int(s2 / s)

    def __add__(self, other: "FockOp") -> "FockOp":
        self._same(other)
        s, k1, k2 = self._aligned(other)
        _check_bound(max(_maxabs(self), 1) * k1 + max(_maxabs(other), 1) * k2)
        return FockOp(
            self.basis,
            self.re * k1 + other.re * k2,
            self.im * k1 + other.im * k2,
            s,
            max(self.shift, other.shift),
        )

    def __neg__(self) -> "FockOp":
        return FockOp(self.basis, -self.re, -self.im, self.scale, self.shift)

    def __sub__(self, other: "FockOp") -> "FockOp":
        return self + (-other)

    def __mul__(self, c) -> "FockOp":
        if isinstance(c, FockOp):
            return NotImplemented
        c = ExactComplex.coerce(c)
        a, b = c.re, c.im
        den = math.lcm(a.denominator, b.denominator)
        ai, bi = int(a * den), int(b * den)
        _check_bound(max(_maxabs(self), 1) * (abs(ai) + abs(bi)))
        return FockOp(
            self.basis,
            self.re * ai - self.im * bi,
            self.im * ai + self.re * bi,
            self.scale / den,
            self.shift,
        )

    __rmul__ = __mul__

    def __matmul__(self, other: "FockOp") -> "FockOp":
        """Composition ``self . other``."""
        self._same(other)
        row_nnz = int(np.diff(self.re.tocsr().indptr).max(initial=0) + np.diff(self.im.tocsr().indptr).max(initial=0))
        _check_bound(max(_maxabs(self), 1) * max(_maxabs(other), 1) * max(row_nnz, 1) * 2)
        re = self.re @ other.re - self.im @ other.im
        im = self.re @ other.im + self.im @ other.re
        return FockOp(self.basis, re, im, self.scale * other.scale, self.shift + other.shift)

    def __pow__(self, k: int) -> "FockOp":
        out = FockOp.identity(self.basis)
        for _ in range(k):
            out = self @ out
        return out

    # queries

    def columns(self, idx) -> "FockOp":
        return FockOp(self.basis, self.re[:, idx], self.im[:, idx], self.scale, self.shift)

    def is_zero_on(self, guard: int | None = None) -> bool:
        """True iff the operator annihilates every state with ``level + guard <= max_level``.

        ``guard=None`` means all states.
        """
        if guard is None:
            return self.re.nnz == 0 and self.im.nnz == 0
        idx = self.basis.guarded(guard)
        return self.re[:, idx].nnz == 0 and self.im[:, idx].nnz == 0

    def equals_on(self, other: "FockOp", guard: int | None = None) -> bool:
        return (self - other).is_zero_on(guard)

    def entry(self, i: int, j: int) -> ExactComplex:
        return ExactComplex(int(self.re[i, j]), int(self.im[i, j])) * self.scale

    def diagonal_values(self) -> list[ExactComplex]:
        re, im = self.re.diagonal(), self.im.diagonal()
        return [ExactComplex(int(x), int(y)) * self.scale for x, y in zip(re, im)]

    def is_diagonal(self) -> bool:
        off_re = self.re - sp.diags(self.re.diagonal())
        off_im = self.im - sp.diags(self.im.diagonal())
        return sp.csc_matrix(off_re).count_nonzero() == 0 and sp.csc_matrix(off_im).count_nonzero() == 0

    def is_hermitian(self) -> bool:
        """Hermitian with respect to the Gram inner product (exact on word-built operators)."""
        g = sp.diags(np.array(self.basis.gram, dtype=np.int64), format="csc")
        _check_bound(max(_maxabs(self), 1) * max(self.basis.gram))
        gre, gim = g @ self.re, g @ self.im
        return (gre - gre.T).count_nonzero() == 0 and (gim + gim.T).count_nonzero() == 0

    def to_complex(self) -> sp.csc_matrix:
        """Floating-point copy for numerics."""
        return (self.re.astype(complex) + 1j * self.im.astype(complex)) * float(self.scale)

    # action on vectors

    def apply(self, v: "FockVector", check_guard: bool = True) -> "FockVector":
        if check_guard:
            top = max((int(self.basis.levels[j]) for j in v.components), default=0)
            if top + self.shift > self.basis.max_level:
                raise GuardBandError(
                    f"state at level {top} raised by up to {self.shift} exceeds cutoff {self.basis.max_level}"
                )
        out: dict[int, ExactComplex] = {}
        for src, mats in ((0, self.re), (1, self.im)):
            for j, c in v.components.items():
                lo, hi = mats.indptr[j], mats.indptr[j + 1]
                for i, val in zip(mats.indices[lo:hi], mats.data[lo:hi]):
                    x = ExactComplex(0, int(val)) if src else ExactComplex(int(val))
                    i = int(i)
                    out[i] = out.get(i, ExactComplex(0)) + x * c
        return FockVector(self.basis, {i: c * self.scale for i, c in out.items()})

    def __call__(self, v: "FockVector") -> "FockVector":
        return self.apply(v)

    def __repr__(self):
        return f"FockOp(e_max={self.basis.e_max}, nnz={self.re.nnz + self.im.nnz}, shift={self.shift})"


def _maxabs(op: FockOp) -> int:
    m = 0
    for a in (op.re.data, op.im.data):
        if a.size:
            m = max(m, int(np.abs(a).max()))
    return m


def _check_bound(bound: int) -> None:
    if bound >= _INT_LIMIT:
        raise OverflowError("exact sparse arithmetic would overflow int64")


def commutator(x: FockOp, y: FockOp) -> FockOp:
    return x @ y - y @ x


class FockVector:
    """Sparse vector over a :class:`FockBasis` with exact coefficients."""

    __slots__ = ("basis", "components")

    def __init__(self, basis: FockBasis, components: dict | None = None):
        self.basis = basis
        comps = {}
        for i, c in (components or {}).items():
            c = ExactComplex.coerce(c)
            if c:
                comps[int(i)] = c
        self.components = comps

    @classmethod
    def state(cls, basis: FockBasis, occupation: Sequence[int], coeff: Rational = 1) -> "FockVector":
        i = basis.index.get(tuple(occupation))
        if i is None:
            raise GuardBandError(f"state {tuple(occupation)} is beyond the cutoff")
        return cls(basis, {i: coeff})

    @classmethod
    def vacuum(cls, basis: FockBasis) -> "FockVector":
        return cls.state(basis, (0, 0, 0, 0))

    def __add__(self, other: "FockVector") -> "FockVector":
        out = dict(self.components)
        for i, c in other.components.items():
            out[i] = out.get(i, ExactComplex(0)) + c
        return FockVector(self.basis, out)

    def __neg__(self):
        return FockVector(self.basis, {i: -c for i, c in self.components.items()})

    def __sub__(self, other: "FockVector") -> "FockVector":
        return self + (-other)

    def __mul__(self, c) -> "FockVector":
        c = ExactComplex.coerce(c)
        return FockVector(self.basis, {i: c * v for i, v in self.components.items()})

    __rmul__ = __mul__

    def is_zero(self) -> bool:
        return not self.components

    def __eq__(self, other):
        if not isinstance(other, FockVector):
            return NotImplemented
        return self.components == other.components

    def inner(self, other: "FockVector") -> ExactComplex:
        """<self|other>, antilinear in ``self``."""
        total = ExactComplex(0)
        for i, c in self.components.items():
            d = other.components.get(i)
            if d is not None:
                total = total + c.conjugate() * d * self.basis.gram[i]
        return total

    def norm_sq(self) -> Fraction:
        return sum((c.abs_sq() * self.basis.gram[i] for i, c in self.components.items()), Fraction(0))

    def occupations(self) -> dict[tuple[int, ...], ExactComplex]:
        return {self.basis.states[i]: c for i, c in self.components.items()}

    def __repr__(self):
        return f"FockVector({self.occupations()})"


# oscillators and second quantization


def oscillator(kind: str, dagger: bool, basis: FockBasis) -> FockOp:
    if kind not in MODES:
        raise ValueError(f"unknown oscillator {kind!r}")
    return FockOp.from_word(basis, ((MODES.index(kind), bool(dagger)),))


def number_operator(kind: str, basis: FockBasis) -> FockOp:
    return FockOp.diagonal(basis, [s[MODES.index(kind)] for s in basis.states])


# phi = (a1, a2, b1*, b2*), phi~ = (a1*, a2*, -b1, -b2) in the beta-diagonal picture
_PHI = ((0, False), (1, False), (2, True), (3, True))
_PHI_TILDE = ((0, True), (1, True), (2, False), (3, False))
_PHI_TILDE_SIGN = (1, 1, -1, -1)


def elementary(alpha: int, beta: int, basis: FockBasis) -> FockOp:
    """phi~_alpha phi^beta (0-based indices), Dirac picture."""
    key = ("elem", alpha, beta)
    op = basis.cache.get(key)
    if op is None:
        op = FockOp.from_word(basis, (_PHI_TILDE[alpha], _PHI[beta]), _PHI_TILDE_SIGN[alpha])
        basis.cache[key] = op
    return op


def vacuum_expectation_bilinear(x: Mat4) -> ExactComplex:
    """<0| phi~ X phi |0>: only -b_A b_A* survives, giving minus the lower-right trace."""
    return -(x[2, 2] + x[3, 3])


def second_quantize(
    x: Mat4, picture: Picture | str = Picture.DIRAC, normal_order: bool = False, basis: FockBasis | None = None
) -> FockOp:
    if basis is None:
        raise ValueError("a FockBasis is required")
    picture = Picture(picture)
    if picture is Picture.CHIRAL:
        # phi^Ch = V phi^D, phi~^Ch = phi~^D V
        x = v_conjugate(x)
    pairs = [(a, b) for a in range(4) for b in range(4) if x[a, b]]
    op = FockOp.combination(basis, [(x[a, b], elementary(a, b, basis)) for a, b in pairs])
    if normal_order:
        c = vacuum_expectation_bilinear(x)
        if c:
            op = op - FockOp.identity(basis) * c
    op.shift = max((elementary(a, b, basis).shift for a, b in pairs), default=0)
    return op


def chevalley_generators(basis: FockBasis) -> dict[str, FockOp]:
    """E_i, F_i, H_i (i = 1, 2, 3) and the derived H_c, H_theta."""
    out = {}
    for i in (1, 2, 3):
        out[f"E{i}"] = elementary(i - 1, i, basis)
        out[f"F{i}"] = elementary(i, i - 1, basis)
        out[f"H{i}"] = elementary(i - 1, i - 1, basis) - elementary(i, i, basis)
    out["Hc"] = out["H1"] + out["H2"] * 2 + out["H3"]
    out["Htheta"] = out["H1"] + out["H2"] + out["H3"]
    return out


def conformal_hamiltonian(basis: FockBasis) -> FockOp:
    """H = (a*a + b b*)/2, i.e. half the second-quantized beta of the Dirac picture."""
    beta = build_gammas(Picture.DIRAC).beta
    return second_quantize(beta, Picture.DIRAC, basis=basis) * Fraction(1, 2)


def helicity(basis: FockBasis) -> FockOp:
    return second_quantize(Mat4.identity(), Picture.DIRAC, normal_order=True, basis=basis)


def _raw_momentum(mu: int, basis: FockBasis) -> FockOp:
    g = build_gammas(Picture.DIRAC)
    return second_quantize(g.gamma[mu] @ g.pi_plus, Picture.DIRAC, basis=basis) * ExactComplex(0, -1)


@lru_cache(maxsize=None)
def momentum_sign() -> int:
    """Overall sign of p_mu fixed by requiring a hermitian, positive p_0.

    Both candidates are tried on a small basis; exactly one must pass.
    """
    basis = build_basis(3)
    vac = FockVector.vacuum(basis)
    passing = []
    for sign in (1, -1):
        p0 = _raw_momentum(0, basis) * sign
        if p0.is_hermitian() and vac.inner(p0.apply(vac)).re > 0:
            passing.append(sign)
    if len(passing) != 1:
        raise RuntimeError(f"momentum sign not uniquely determined: {passing}")
    return passing[0]


def momentum(mu: int, basis: FockBasis) -> FockOp:
    """Hermitian translation generator p_mu (lower index), with -i p_mu-type sign frozen by ``momentum_sign``."""
    if mu not in (0, 1, 2, 3):
        raise ValueError("mu must be 0..3")
    key = ("p", mu)
    op = basis.cache.get(key)
    if op is None:
        op = _raw_momentum(mu, basis) * momentum_sign()
        basis.cache[key] = op
    return op


def lowest_weight_vector(h: int, basis: FockBasis) -> FockVector:
    """Unnormalized lowest-weight vector (a2*)^h|0> or (b1*)^|h||0>.

    Its Gram norm is |h|!, so the normalized vector is this times (|h|!)^(-1/2).
    """
    if abs(h) > basis.max_level:
        raise ValueError(f"|h| = {abs(h)} does not fit below the cutoff {basis.max_level}")
    occ = (0, h, 0, 0) if h >= 0 else (0, 0, -h, 0)
    return FockVector.state(basis, occ)


def spectrum(basis: FockBasis) -> dict[int, dict[Fraction, int]]:
    """{helicity: {H eigenvalue: multiplicity}} read off the diagonal of H."""
    h_op = conformal_hamiltonian(basis)
    if not h_op.is_diagonal():
        raise RuntimeError("conformal Hamiltonian is not diagonal in the occupation basis")
    out: dict[int, dict[Fraction, int]] = {}
    for i, e in enumerate(h_op.diagonal_values()):
        sector = out.setdefault(basis.helicity_of(i), {})
        sector[e.re] = sector.get(e.re, 0) + 1
    return {h: dict(sorted(v.items())) for h, v in sorted(out.items())}


def spectrum_rows(basis: FockBasis, helicity_value: int | None = None) -> list[dict]:
    rows = []
    for h, sector in spectrum(basis).items():
        if helicity_value is not None and h != helicity_value:
            continue
        for e, mult in sector.items():
            rows.append({"helicity": h, "eigenvalue": e, "multiplicity": mult})
    return rows


def random_rational_vector(basis: FockBasis, rng: random.Random, guard: int, support: int = 6) -> FockVector:
    idx = basis.guarded(guard)
    picks = rng.sample(list(idx), min(support, len(idx)))
    comps = {}
    for i in picks:
        comps[int(i)] = ExactComplex(
            Fraction(rng.randint(-5, 5), rng.randint(1, 4)), Fraction(rng.randint(-5, 5), rng.randint(1, 4))
        )
    return FockVector(basis, comps)


# identity suites


def ccr_checks(basis: FockBasis) -> Report:
    rep = Report()
    ops = {(k, d): oscillator(k, d, basis) for k in MODES for d in (False, True)}
    one = FockOp.identity(basis)
    bad = []
    for (k1, d1), x in ops.items():
        for (k2, d2), y in ops.items():
            expected = 0
            if k1 == k2 and d1 != d2:
                expected = 1 if not d1 else -1
            if not commutator(x, y).equals_on(one * expected, guard=1):
                bad.append(f"[{k1}{'*' if d1 else ''},{k2}{'*' if d2 else ''}]")
    rep.exact("ccr", "canonical commutation relations of a, b", not bad, bad or None)
    vac = FockVector.vacuum(basis)
    rep.exact(
        "vacuum_annihilated",
        "a|0> = 0 = b|0>",
        all(ops[(k, False)].apply(vac).is_zero() for k in MODES),
    )
    return rep


def homomorphism_failures(basis: FockBasis, picture: Picture = Picture.DIRAC) -> list[tuple[str, str]]:
    u = u22_basis(build_gammas(picture))
    hats = {lab: second_quantize(x, picture, basis=basis) for lab, x in u}
    bad = []
    for (la, xa), (lb, xb) in itertools.combinations(list(u), 2):
        lhs = commutator(hats[la], hats[lb])
        rhs = second_quantize(mat_comm(xa, xb), picture, basis=basis)
        if not lhs.equals_on(rhs, guard=hats[la].shift + hats[lb].shift):
            bad.append((la, lb))
    return bad


def nilpotent_orbit_identities(basis: FockBasis) -> Report:
    rep = Report()
    ch = chevalley_generators(basis)
    e1, e2, e3 = ch["E1"], ch["E2"], ch["E3"]
    e12 = commutator(e1, e2)
    e_theta = commutator(e12, e3)
    g = e1.shift + e2.shift + e3.shift
    w = lambda s, c=1: FockOp.from_word(basis, s, c)  # noqa: E731
    rep.exact("orbit.E_theta", "[[E1,E2],E3] = a1* b2*", e_theta.equals_on(w("a1* b2*"), g))
    rep.exact("orbit.E12", "[E1,E2] = a1* b1*", e12.equals_on(w("a1* b1*"), g))
    rep.exact("orbit.E23", "[E2,E3] = a2* b2*", commutator(e2, e3).equals_on(w("a2* b2*"), g))
    rep.exact("orbit.E1", "E1 = a1* a2", e1.equals_on(w("a1* a2")))
    rep.exact("orbit.E3", "E3 = -b1 b2*", e3.equals_on(w("b1 b2*", -1)))
    top = FockVector.state(basis, (0, 0, 0, basis.max_level))
    try:
        (e_theta @ e_theta).apply(top)
        flagged = False
    except GuardBandError:
        flagged = True
    rep.exact("orbit.guard_band", "E_theta^2 past the cutoff is flagged", flagged)
    return rep


def verify_ladder(basis: FockBasis, seed: int = 0, lw_range: int = 4, samples: int = 100) -> Report:
    rep = Report()
    rep.extend(ccr_checks(basis))
    bad = homomorphism_failures(basis)
    rep.exact("homomorphism", "[X^, Y^] = [X,Y]^ on all 120 basis pairs", not bad, bad or None)

    # picture independence
    ud, uc = u22_basis(build_gammas(Picture.DIRAC)), u22_basis(build_gammas(Picture.CHIRAL))
    rep.exact(
        "picture_independence",
        "X^ independent of Dirac/chiral picture",
        all(
            second_quantize(xd, Picture.DIRAC, basis=basis).equals_on(
                second_quantize(uc[lab], Picture.CHIRAL, basis=basis)
            )
            for lab, xd in ud
        ),
    )

    ch = chevalley_generators(basis)
    vac = FockVector.vacuum(basis)
    rep.exact(
        "chevalley.EF",
        "[E_i, F_i] = H_i",
        all(commutator(ch[f"E{i}"], ch[f"F{i}"]).equals_on(ch[f"H{i}"], 4) for i in (1, 2, 3)),
    )
    rep.exact("vacuum.lowering", "F_i|0> = 0", all(ch[f"F{i}"].apply(vac).is_zero() for i in (1, 2, 3)))
    rep.exact("vacuum.compact", "E1|0> = 0 = E3|0>", ch["E1"].apply(vac).is_zero() and ch["E3"].apply(vac).is_zero())
    rep.exact("vacuum.Hc", "(H_c - 2)|0> = 0", (ch["Hc"].apply(vac) - vac * 2).is_zero())
    h_op = conformal_hamiltonian(basis)
    rep.exact("vacuum.H", "H|0> = |0>", h_op.apply(vac) == vac)
    rep.exact("hamiltonian.half_Hc", "H = H_c / 2", h_op.equals_on(ch["Hc"] * Fraction(1, 2)))
    rep.exact(
        "hamiltonian.diagonal",
        "H diagonal with eigenvalue (N_a + N_b)/2 + 1",
        h_op.is_diagonal() and all(e == basis.energy(i) for i, e in enumerate(h_op.diagonal_values())),
    )

    # spectrum
    spectra = spectrum(basis)
    zero = spectra.get(0, {})
    expected_zero = {Fraction(n): n * n for n in range(1, basis.e_max + 1)}
    rep.exact("spectrum.zero_helicity", "zero helicity: eigenvalue n has multiplicity n^2",
              zero == expected_zero, [[str(e), m] for e, m in zero.items()])
    all_eigs = sorted({e for s in spectra.values() for e in s})
    rep.exact("spectrum.full", "full spectrum {1, 3/2, 2, ...}",
              all_eigs == [Fraction(k, 2) for k in range(2, 2 * basis.e_max + 1)])
    rep.exact(
        "spectrum.sectors",
        "helicity h sector starts at |h|/2 + 1 in integer steps",
        all(
            sorted(s) == [Fraction(abs(h), 2) + k for k in range(1, len(s) + 1)]
            for h, s in spectra.items()
        ),
    )
    rep.exact("Hc.positive", "H_c >= 2 on every state",
              all(e.re >= 2 and not e.im for e in ch["Hc"].diagonal_values()))

    # helicity
    hel = helicity(basis)
    rep.exact("helicity.form", "h = a*a - b*b",
              hel.equals_on(FockOp.diagonal(basis, [basis.helicity_of(i) for i in range(len(basis))])))
    rep.exact(
        "helicity.central",
        "[h, X^] = 0 for all of u(2,2)",
        all(commutator(hel, second_quantize(x, basis=basis)).is_zero_on(2) for _, x in ud),
    )

    # momentum
    ps = [momentum(mu, basis) for mu in range(4)]
    guard = 8  # H <= E_max - 4
    rep.exact("momentum.hermitian", "p_mu hermitian", all(p.is_hermitian() for p in ps))
    rep.exact(
        "momentum.commute",
        "[p_mu, p_nu] = 0",
        all(commutator(ps[m], ps[n]).is_zero_on(guard) for m in range(4) for n in range(m + 1, 4)),
    )
    p_sq = (ps[1] @ ps[1] + ps[2] @ ps[2] + ps[3] @ ps[3]) - ps[0] @ ps[0]
    rep.exact("momentum.mass_shell", "p^2 = 0", p_sq.is_zero_on(guard))
    rng = random.Random(seed)
    values = []
    for _ in range(samples):
        psi = random_rational_vector(basis, rng, guard=2)
        values.append(psi.inner(ps[0].apply(psi)))
    rep.exact(
        "momentum.positive_energy",
        f"<psi|p0|psi> >= 0 on {samples} random rational states",
        all(v.im == 0 and v.re >= 0 for v in values),
        {"min": str(min(v.re for v in values))},
    )

    # lowest weight vectors
    bad_lw = []
    for h in range(-lw_range, lw_range + 1):
        v = lowest_weight_vector(h, basis)
        ok = (
            all(ch[f"F{i}"].apply(v).is_zero() for i in (1, 2, 3))
            and (ch["Htheta"].apply(v) - v).is_zero()
            and (ch["Hc"].apply(v) - v * (abs(h) + 2)).is_zero()
            and hel.apply(v) == v * h
            and v.norm_sq() * Fraction(1, math.factorial(abs(h))) == 1
        )
        if not ok:
            bad_lw.append(h)
    rep.exact("lowest_weight", f"lowest weight conditions for |h| <= {lw_range}", not bad_lw, bad_lw or None)
    rep.extend(nilpotent_orbit_identities(basis))
    return rep
