"""Partition function of the conformal Hamiltonian, Eisenstein series and black-body numerics.

All q-series identities are exact (integer or rational coefficients). Floating
point enters only through :func:`eval_series` and the thermodynamic sums.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import numpy as np

from .algebra_core import DEFAULT_SERIES_ORDER, QSeries, bernoulli, divisor_power_sum, qseries_log_derivative
from .checks import Report

E0 = Fraction(1, 240)


class ConvergenceError(RuntimeError):
    """A truncated sum has not converged to the requested tolerance."""


@lru_cache(maxsize=8)
def _z_coeffs(order: int) -> tuple[int, ...]:
    c = [0] * (order + 1)
    c[0] = 1
    for n in range(1, order + 1):
        # multiply by (1 - q^n)^(-n^2) = sum_j C(n^2 + j - 1, j) q^(nj)
        d = n * n
        binom = [math.comb(d + j - 1, j) for j in range(order // n + 1)]
        new = [0] * (order + 1)
        for i, ci in enumerate(c):
            if ci:
                for j in range((order - i) // n + 1):
                    new[i + n * j] += ci * binom[j]
        c = new
    return tuple(c)


def partition_Z(order: int = DEFAULT_SERIES_ORDER) -> QSeries:
    """Z = prod_n (1 - q^n)^(-n^2) to order ``order``."""
    if order < 1:
        raise ValueError("order must be >= 1")
    return QSeries(_z_coeffs(order), order)


def brute_force_Z(order: int) -> list[int]:
    """Count multiparticle states by enumerating partitions of each energy.

    A partition with m_j parts equal to j contributes prod_j C(j^2 + m_j - 1, m_j)
    (bosons in the j^2 single-particle states of energy j).
    """

    def parts(n: int, largest: int):
        if n == 0:
            yield {}
            return
        for j in range(min(n, largest), 0, -1):
            for m in range(1, n // j + 1):
                for rest in parts(n - m * j, j - 1):
                    yield {j: m, **rest}

    out = []
    for n in range(order + 1):
        out.append(sum(math.prod(math.comb(j * j + m - 1, m) for j, m in p.items()) for p in parts(n, n)))
    return out


def mean_energy_series(order: int = DEFAULT_SERIES_ORDER) -> QSeries:
    """<H>_q = q d/dq log Z."""
    return qseries_log_derivative(partition_Z(order))


@dataclass(frozen=True)
class EisensteinSeries:
    weight: int
    coeffs: QSeries

    @property
    def order(self) -> int:
        return self.coeffs.order

    @property
    def constant_term(self) -> Fraction:
        return self.coeffs[0]


def eisenstein(weight: int, order: int = DEFAULT_SERIES_ORDER) -> EisensteinSeries:
    """G_{2k} = -B_{2k}/4k + sum sigma_{2k-1}(n) q^n."""
    if weight < 4 or weight % 2:
        raise ValueError("weight must be an even integer >= 4")
    c = [-bernoulli(weight) / (2 * weight)] + [Fraction(divisor_power_sum(n, weight - 1)) for n in range(1, order + 1)]
    return EisensteinSeries(weight, QSeries(c, order))


def identity_mean_energy_equals_G4(order: int = DEFAULT_SERIES_ORDER) -> Report:
    rep = Report()
    lhs = mean_energy_series(order) + QSeries.monomial(0, order, E0)
    rhs = eisenstein(4, order).coeffs
    bad = [n for n in range(order + 1) if lhs[n] != rhs[n]]
    rep.exact(
        "modular.mean_energy_G4",
        f"q d/dq log Z + 1/240 = G_4 coefficientwise through q^{order}",
        not bad,
        bad[:10] or None,
    )
    rep.exact("modular.E0", "zero-point energy -B_4/8 = 1/240", -bernoulli(4) / 8 == E0 == rhs[0])
    return rep


# numerics


@lru_cache(maxsize=32)
def _float_coeffs(s: QSeries) -> np.ndarray:
    return np.array([float(c) for c in s], dtype=float)


@dataclass(frozen=True)
class SeriesValue:
    value: complex
    last_term: float


def eval_series(s: QSeries | EisensteinSeries, tau: complex) -> SeriesValue:
    """sum c_n q^n at q = exp(2 pi i tau)."""
    if isinstance(s, EisensteinSeries):
        s = s.coeffs
    tau = complex(tau)
    if tau.imag <= 0:
        raise ValueError("Im tau must be positive")
    c = _float_coeffs(s)
    n = np.arange(len(c))
    terms = c * np.exp(2j * np.pi * tau * n)
    return SeriesValue(complex(terms.sum()), float(abs(terms[-1])))


def mobius(gamma, tau: complex) -> complex:
    a, b, c, d = gamma
    return (a * tau + b) / (c * tau + d)


def modular_covariance_residual(weight: int, tau: complex, gamma, order: int = 600) -> float:
    """|(c tau + d)^(-2k) G_2k(gamma tau) - G_2k(tau)|."""
    a, b, c, d = (int(v) for v in gamma)
    if a * d - b * c != 1:
        raise ValueError("gamma must have determinant 1")
    g = eisenstein(weight, order)
    tau = complex(tau)
    lhs = (c * tau + d) ** (-weight) * eval_series(g, mobius((a, b, c, d), tau)).value
    return float(abs(lhs - eval_series(g, tau).value))


@dataclass(frozen=True)
class ThermoParams:
    """R sphere radius, beta = 1/kT. Constants default to 1 (dimensionless mode)."""

    R: float
    beta: float
    h: float = 1.0
    c: float = 1.0
    k: float = 1.0

    def __post_init__(self):
        if self.R <= 0 or self.beta <= 0:
            raise ValueError("R and beta must be positive")

    @property
    def y(self) -> float:
        """Exponent per unit mode number, h c beta / R."""
        return self.h * self.c * self.beta / self.R

    @property
    def tau(self) -> complex:
        return 1j * self.y / (2 * math.pi)

    @classmethod
    def si(cls, R: float, temperature: float) -> "ThermoParams":
        from scipy.constants import c, h, k

        return cls(R=R, beta=1 / (k * temperature), h=h, c=c, k=k)


def planck_term(n, params: ThermoParams):
    """(hc/R) n^3 x/(1 - x) with x = exp(-n h c beta / R)."""
    n = np.asarray(n, dtype=float)
    with np.errstate(over="ignore"):  # expm1 -> inf gives the correct limit 0
        return params.h * params.c / params.R * n**3 / np.expm1(n * params.y)


def planck_spectral(n, params: ThermoParams):
    """n^2 h nu / (exp(h nu beta) - 1) with nu = n c / R."""
    n = np.asarray(n, dtype=float)
    nu = n * params.c / params.R
    with np.errstate(over="ignore"):
        return n**2 * params.h * nu / np.expm1(params.h * nu * params.beta)


@dataclass(frozen=True)
class StefanBoltzmann:
    value: float
    ratio: float
    tail_bound: float
    n_max: int


SB_LIMIT = math.pi**2 / 30


def stefan_boltzmann(params: ThermoParams, n_max: int | None = None, tol: float = 1e-12) -> StefanBoltzmann:
    """s(R, beta) = y^4/(2 pi^2) sum n^3/(exp(n y) - 1) with y = h c beta / R (beta/R when h = c = 1)."""
    y = params.y
    if n_max is None:
        n_max = int(math.ceil(60 / y)) + 1
    n = np.arange(1, n_max + 1, dtype=float)
    total = float(np.sum(n**3 / np.expm1(n * y)))
    pref = y**4 / (2 * math.pi**2)
    # tail <= int_{n_max}^inf n^3 e^{-ny} dn / (1 - e^{-y n_max}) = Gamma(4, y n_max)/y^4 / (...)
    u = y * n_max
    tail = math.exp(-u) * (u**3 + 3 * u**2 + 6 * u + 6) / y**4 / -math.expm1(-u)
    value = pref * total
    bound = pref * tail
    if bound > tol * value:
        raise ConvergenceError(f"tail bound {bound:.3e} above tolerance; raise n_max")
    return StefanBoltzmann(value, value / SB_LIMIT, bound, n_max)


def planck_rows(params: ThermoParams, n_max: int) -> list[dict]:
    rows = []
    for n in range(1, n_max + 1):
        rows.append({"n": n, "nu": n * params.c / params.R, "term": float(planck_term(n, params))})
    return rows


# suites

COVARIANCE_TAUS = (2j, 0.3 + 1.1j)
S_MATRIX = (0, -1, 1, 0)
T_MATRIX = (1, 1, 0, 1)
SB_MONOTONE_RADII = (2.0, 5.0, 10.0, 20.0)


def verify_modular(order: int = DEFAULT_SERIES_ORDER, covariance_order: int = 600, tol: float = 1e-6) -> Report:
    rep = Report()
    rep.extend(identity_mean_energy_equals_G4(order))
    z = partition_Z(max(order, 12))
    brute = brute_force_Z(12)
    rep.exact("modular.Z_brute_force", "Z coefficients through q^12 = multiset enumeration",
              [int(z[n]) for n in range(13)] == brute, brute)
    worst = 0.0
    for w in (4, 6):
        for tau in COVARIANCE_TAUS:
            for g in (S_MATRIX, T_MATRIX):
                worst = max(worst, modular_covariance_residual(w, tau, g, covariance_order))
    rep.numeric("modular.covariance", f"G_4, G_6 covariant under S and T, N = {covariance_order}", worst, tol)
    try:
        eisenstein(2, 10)
        rejected = False
    except ValueError:
        rejected = True
    rep.exact("modular.weight2_rejected", "weight 2 rejected", rejected)
    return rep


def verify_planck(seed: int = 0, samples: int = 100, aux_tol: float = 1e-12) -> Report:
    rep = Report()
    rng = np.random.default_rng(seed)
    worst = 0.0
    for _ in range(samples):
        n = int(rng.integers(1, 200))
        p = ThermoParams(R=float(rng.uniform(0.5, 100)), beta=float(rng.uniform(0.01, 5)))
        a, b = float(planck_term(n, p)), float(planck_spectral(n, p))
        worst = max(worst, abs(a - b) / max(abs(b), 1e-300))
    rep.numeric("planck.identity", f"term_n = n^2 h nu/(e^(h nu beta) - 1), {samples} samples", worst, 1e-12)
    p = ThermoParams(R=1.0, beta=math.log(2))
    rep.numeric("planck.ln2", "n = 1, hc beta/R = ln 2 gives hc/R", abs(float(planck_term(1, p)) - 1), aux_tol)
    for rb, tol in ((1e3, 1e-2), (1e5, 1e-4)):
        sb = stefan_boltzmann(ThermoParams(R=rb, beta=1.0))
        rep.numeric(f"planck.stefan_boltzmann_{int(rb)}", f"s/(pi^2/30) - 1 at R/beta = {rb:g}", abs(sb.ratio - 1), tol)
    # the error is O((beta/R)^4), below roundoff from R/beta ~ 10^3 on
    errs = [abs(stefan_boltzmann(ThermoParams(R=r, beta=1.0)).ratio - 1) for r in SB_MONOTONE_RADII]
    rep.exact(
        "planck.sb_monotone",
        "larger R/beta is closer to pi^2/30",
        all(a > b for a, b in zip(errs, errs[1:])),
        errs,
    )
    return rep
