"""Compactified Minkowski space: quadric embedding, the complex chart g_c, tubes and the star involution.

Minkowski points are arrays ``(x0, x1, x2, x3)`` with ``x^2 = |x_vec|^2 - x0^2``.
Compact-picture points are arrays ``(z1, z2, z3, z4)``. Every function accepts a
single point (shape ``(4,)``) or a stack of points (shape ``(..., 4)``).
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

import numpy as np

from .checks import Report

MBAR_BAND = 1e-9
SINGULAR_EPS = 1e-14


class SingularMapError(ValueError):
    """The denominator of a rational map vanished (point sent to infinity)."""


class Tube(str, enum.Enum):
    FORWARD = "ForwardTube"
    BACKWARD = "BackwardTube"
    COMPACT = "CompactMinkowski"
    OUTSIDE = "Outside"


def _c(a) -> np.ndarray:
    a = np.asarray(a, dtype=complex)
    if a.shape[-1] != 4:
        raise ValueError(f"expected 4 components, got shape {a.shape}")
    return a


def msq(x) -> np.ndarray:
    """Minkowski square |x_vec|^2 - x0^2 (complex bilinear)."""
    x = _c(x)
    return np.sum(x[..., 1:] ** 2, axis=-1) - x[..., 0] ** 2


def zsq(z) -> np.ndarray:
    """Euclidean complex bilinear square z^2 = sum z_a^2."""
    z = _c(z)
    return np.sum(z**2, axis=-1)


def zzbar(z) -> np.ndarray:
    """Hermitian square z . conj(z)."""
    z = _c(z)
    return np.sum((z * z.conj()).real, axis=-1)


@dataclass(frozen=True)
class CPoint4:
    z: np.ndarray

    def __post_init__(self):
        z = _c(self.z)
        if z.shape != (4,) or not np.all(np.isfinite(z)):
            raise ValueError("CPoint4 needs 4 finite components")
        object.__setattr__(self, "z", z)

    @property
    def sq(self) -> complex:
        return complex(zsq(self.z))

    @property
    def herm(self) -> float:
        return float(zzbar(self.z))


def omega(x) -> np.ndarray:
    """(1 + x^2)/2 - i x0 for a Minkowski point."""
    x = _c(x)
    return (1 + msq(x)) / 2 - 1j * x[..., 0]


def omega_compact(z) -> np.ndarray:
    """(1 + z^2)/2 + z4, the same expression in euclidean variables."""
    z = _c(z)
    return (1 + zsq(z)) / 2 + z[..., 3]


def _check_denominator(w) -> None:
    if np.any(np.abs(w) < SINGULAR_EPS):
        raise SingularMapError("omega vanishes: the point lies on the cone at infinity")


def gc_map(x) -> np.ndarray:
    """Minkowski point -> compact-picture point z."""
    x = _c(x)
    w = omega(x)
    _check_denominator(w)
    z = np.empty(x.shape, dtype=complex)
    z[..., :3] = x[..., 1:] / w[..., None]
    z[..., 3] = (1 - msq(x)) / (2 * w)
    return z


def gc_inverse(z) -> np.ndarray:
    """Compact-picture point -> Minkowski point, through x4 = -i x0."""
    z = _c(z)
    w = omega_compact(z)
    _check_denominator(w)
    x = np.empty(z.shape, dtype=complex)
    x[..., 1:] = z[..., :3] / w[..., None]
    x4 = (1 - zsq(z)) / (2 * w)
    x[..., 0] = 1j * x4
    return x


@dataclass(frozen=True)
class QuadricPoint:
    """Point of the projective quadric in six-space.

    ``xi = (xi0, xi1, xi2, xi3, xi_plus, xi_minus)`` with upper indices.
    """

    xi: np.ndarray

    @property
    def xi_plus(self):
        return self.xi[4]

    @property
    def xi_minus(self):
        return self.xi[5]

    @property
    def xi_m1(self):
        return (self.xi[4] + self.xi[5]) / 2

    @property
    def xi_4(self):
        return (self.xi[4] - self.xi[5]) / 2

    def pairing(self, other: "QuadricPoint") -> complex:
        return pairing(self.xi, other.xi)

    def on_quadric_residual(self) -> float:
        a, b = self.xi, self.xi
        r1 = abs(np.dot(a[1:4], b[1:4]) - a[0] ** 2 - a[4] * a[5])
        r2 = abs(self.xi_m1**2 - self.xi_4**2 - a[4] * a[5])
        return float(max(r1, r2))

    def z_chart(self) -> np.ndarray:
        """z_a = xi^a / (xi^{-1} - i xi^0), a = 1..4."""
        den = self.xi_m1 - 1j * self.xi[0]
        if abs(den) < SINGULAR_EPS:
            raise SingularMapError("point at infinity in the z chart")
        return np.array([self.xi[1], self.xi[2], self.xi[3], self.xi_4], dtype=complex) / den


def pairing(xi, eta) -> complex:
    """<xi, eta> = xi_vec.eta_vec - xi0 eta0 - (xi+ eta- + xi- eta+)/2."""
    xi, eta = np.asarray(xi, dtype=complex), np.asarray(eta, dtype=complex)
    return complex(np.dot(xi[1:4], eta[1:4]) - xi[0] * eta[0] - (xi[4] * eta[5] + xi[5] * eta[4]) / 2)


def embed_quadric(x, xi_plus: float = 1.0) -> QuadricPoint:
    if xi_plus == 0:
        raise ValueError("xi_plus must be nonzero")
    x = _c(x)
    if x.shape != (4,):
        raise ValueError("embed_quadric takes a single point")
    xi = np.empty(6, dtype=complex)
    xi[:4] = xi_plus * x
    xi[4] = xi_plus
    xi[5] = xi_plus * msq(x)
    return QuadricPoint(xi)


def star_involution(z) -> np.ndarray:
    """z* = conj(z) / conj(z)^2."""
    zb = _c(z).conj()
    d = zsq(zb)
    if np.any(np.abs(d) < SINGULAR_EPS):
        raise SingularMapError("conj(z)^2 vanishes: star involution undefined")
    return zb / np.asarray(d)[..., None]


def _in_forward(z) -> bool:
    s = abs(complex(zsq(z)))
    return s < 1 and 2 * float(zzbar(z)) < 1 + s * s


def tube_classify(z, band: float = MBAR_BAND) -> Tube:
    z = _c(z)
    if z.shape != (4,):
        raise ValueError("tube_classify takes a single point")
    s, h = abs(complex(zsq(z))), float(zzbar(z))
    if abs(s - 1) <= band and abs(h - 1) <= band:
        return Tube.COMPACT
    if _in_forward(z):
        return Tube.FORWARD
    if abs(complex(zsq(z.conj()))) > SINGULAR_EPS and _in_forward(star_involution(z)):
        return Tube.BACKWARD
    return Tube.OUTSIDE


def scaled_map(x, R: float) -> np.ndarray:
    """z(x, R) for the sphere of radius R, from the explicit component formulas."""
    if R <= 0:
        raise ValueError("R must be positive")
    x = _c(x)
    w2 = 1 + msq(x) / (4 * R * R) - 1j * x[..., 0] / R
    _check_denominator(w2)
    z = np.empty(x.shape, dtype=complex)
    z[..., :3] = x[..., 1:] / w2[..., None]
    z[..., 3] = R + (1j * x[..., 0] - msq(x) / (2 * R)) / w2
    return z


def scaled_map_via_gc(x, R: float) -> np.ndarray:
    """Second route: R * gc_map(x / 2R)."""
    return R * gc_map(_c(x) / (2 * R))


def interval_ratio(x, y) -> complex:
    """(z(x) - z(y))^2 omega(x) omega(y) / (x - y)^2; constant for all pairs."""
    x, y = _c(x), _c(y)
    d = msq(x - y)
    if abs(d) < SINGULAR_EPS:
        raise SingularMapError("light-like separation")
    return complex(zsq(gc_map(x) - gc_map(y)) * omega(x) * omega(y) / d)


INTERVAL_CONSTANT = 1.0


# samplers


def random_real_points(rng: np.random.Generator, n: int, scale: float = 2.0) -> np.ndarray:
    return rng.normal(scale=scale, size=(n, 4)).astype(complex)


def random_forward_points(rng: np.random.Generator, n: int) -> np.ndarray:
    """x + iy with y0 > |y_vec|."""
    x = rng.normal(size=(n, 4))
    yv = rng.normal(size=(n, 3))
    y0 = np.linalg.norm(yv, axis=1) + rng.uniform(0.05, 2.0, size=n)
    y = np.column_stack([y0, yv])
    return x + 1j * y


def random_compact_points(rng: np.random.Generator, n: int) -> np.ndarray:
    """e^{2 pi i t} u with u a real unit 4-vector."""
    u = rng.normal(size=(n, 4))
    u /= np.linalg.norm(u, axis=1, keepdims=True)
    t = rng.uniform(0, 1, size=n)
    return np.exp(2j * np.pi * t)[:, None] * u


def _omega_bounded(points: np.ndarray, lo: float = 1e-3) -> np.ndarray:
    return points[np.abs(omega(points)) > lo]


def verify_geometry(
    seed: int = 0, n_round: int = 1000, n_tube: int = 100, tol: float = 1e-12, aux_tol: float = 1e-10
) -> Report:
    """``tol`` covers the acceptance identities; ``aux_tol`` the remaining roundoff checks."""
    rng = np.random.default_rng(seed)
    rep = Report()

    real = random_real_points(rng, n_round // 2)
    cplx = rng.normal(size=(n_round - n_round // 2, 4)) + 1j * rng.normal(size=(n_round - n_round // 2, 4))
    pts = _omega_bounded(np.concatenate([real, cplx]), 0.05)
    rt = np.max(np.abs(gc_inverse(gc_map(pts)) - pts) / (1 + np.abs(pts)))
    rep.numeric("geometry.round_trip", f"gc_inverse(gc_map(x)) = x on {len(pts)} points", rt, tol)

    recip = np.max(np.abs(omega_compact(gc_map(pts)) * omega(pts) - 1))
    rep.numeric("geometry.omega_reciprocal", "omega(z(x)) omega(x) = 1", recip, tol)

    zr = gc_map(real)
    on_mbar = max(
        np.max(np.abs(np.abs(zsq(zr)) ** 2 - 1)),
        np.max(np.abs(zzbar(zr) ** 2 - 1)),
    )
    rep.numeric("geometry.real_on_mbar", "real x: z^2 conj(z)^2 = (z.conj(z))^2 = 1", on_mbar, tol)

    fw = gc_map(random_forward_points(rng, n_tube))
    cls = [tube_classify(z) for z in fw]
    rep.exact("geometry.forward_tube", f"{n_tube} forward-tube samples land in T+", all(c is Tube.FORWARD for c in cls))

    comp = random_compact_points(rng, n_tube)
    fix = float(np.max(np.abs(star_involution(comp) - comp)))
    rep.numeric("geometry.star_fixes_mbar", "z* = z on compactified Minkowski space", fix, aux_tol)
    rep.exact(
        "geometry.compact_classified",
        "e^{2 pi i t} u classified as compact Minkowski",
        all(tube_classify(z) is Tube.COMPACT for z in comp),
    )
    rep.exact(
        "geometry.star_swaps_tubes",
        "star maps T+ to T- and back",
        all(tube_classify(star_involution(z)) is Tube.BACKWARD for z in fw),
    )
    inv = float(np.max(np.abs(star_involution(star_involution(fw)) - fw)))
    rep.numeric("geometry.star_involutive", "(z*)* = z", inv, aux_tol)

    xs, ys = random_real_points(rng, 50, 1.0), random_real_points(rng, 50, 1.0)
    pair_res = 0.0
    null_res = 0.0
    chart_res = 0.0
    for x, y in zip(xs, ys):
        ex, ey = embed_quadric(x), embed_quadric(y)
        null_res = max(null_res, abs(ex.pairing(ex)))
        d = QuadricPoint(ex.xi - ey.xi)
        pair_res = max(pair_res, abs(d.pairing(d) - complex(msq(x - y))))
        if abs(complex(omega(x))) > 1e-3:
            chart_res = max(chart_res, float(np.max(np.abs(ex.z_chart() - gc_map(x)))))
    rep.numeric("geometry.quadric_null", "<xi_x, xi_x> = 0", null_res, tol)
    rep.numeric("geometry.quadric_pairing", "(xi_x - eta_y)^2 = (x - y)^2 at xi+ = eta+ = 1", pair_res, tol)
    rep.numeric("geometry.z_chart", "quadric z chart agrees with gc_map", chart_res, aux_tol)

    ratios = [interval_ratio(x, y) for x, y in zip(xs, ys) if abs(complex(msq(x - y))) > 1e-3]
    rep.numeric(
        "geometry.interval_constant",
        "dz^2 omega(x) omega(y) / dx^2 is constant",
        max(abs(r - INTERVAL_CONSTANT) for r in ratios),
        aux_tol,
    )

    sx = random_real_points(rng, 50)
    Rs = rng.uniform(0.5, 50, size=50)
    sres = max(float(np.max(np.abs(scaled_map(x, R) - scaled_map_via_gc(x, R)) / R)) for x, R in zip(sx, Rs))
    rep.numeric("geometry.scaled_routes", "z(x, R) = R gc_map(x / 2R)", sres, aux_tol)
    return rep
