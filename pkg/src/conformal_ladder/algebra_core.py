"""Exact scalar, matrix, series and polynomial substrate.

Everything here is immutable and uses :class:`fractions.Fraction`; floats only
appear through the explicit ``to_float``/``to_complex`` conversions.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Iterator, Sequence, Union

Rational = Union[int, Fraction]
DEFAULT_SERIES_ORDER = 200


class ExactComplex:
    """Complex number with exact rational real and imaginary parts.

    Stored as Gaussian integer over a positive denominator, ``(a + b i) / d``,
    kept in lowest terms.
    """

    __slots__ = ("_a", "_b", "_d")

    def __init__(self, re: Rational = 0, im: Rational = 0):
        re = Fraction(re)
        im = Fraction(im)
        d = re.denominator * im.denominator // math.gcd(re.denominator, im.denominator)
        self._set(re.numerator * (d // re.denominator), im.numerator * (d // im.denominator), d)

    def _set(self, a: int, b: int, d: int) -> None:
        g = math.gcd(a, b, d)
        if g > 1:
            a //= g
            b //= g
            d //= g
        self._a, self._b, self._d = a, b, d

    @classmethod
    def _raw(cls, a: int, b: int, d: int) -> "ExactComplex":
        out = object.__new__(cls)
        out._set(a, b, d)
        return out

    @classmethod
    def coerce(cls, value) -> "ExactComplex":
        if isinstance(value, ExactComplex):
            return value
        if isinstance(value, int):
            return cls._raw(value, 0, 1)
        if isinstance(value, Fraction):
            return cls._raw(value.numerator, 0, value.denominator)
        raise TypeError(f"cannot use {type(value).__name__} as an exact scalar")

    @property
    def re(self) -> Fraction:
        return Fraction(self._a, self._d)

    @property
    def im(self) -> Fraction:
        return Fraction(self._b, self._d)

    def __add__(self, other):
        try:
            o = ExactComplex.coerce(other)
        except TypeError:
            return NotImplemented
        if self._d == o._d:
            return ExactComplex._raw(self._a + o._a, self._b + o._b, self._d)
        return ExactComplex._raw(
            self._a * o._d + o._a * self._d, self._b * o._d + o._b * self._d, self._d * o._d
        )

    __radd__ = __add__

    def __sub__(self, other):
        try:
            o = ExactComplex.coerce(other)
        except TypeError:
            return NotImplemented
        return self + (-o)

    def __rsub__(self, other):
        try:
            other = ExactComplex.coerce(other)
        except TypeError:
            return NotImplemented
        return other - self

    def __neg__(self):
        return ExactComplex._raw(-self._a, -self._b, self._d)

    def __mul__(self, other):
        try:
            o = ExactComplex.coerce(other)
        except TypeError:
            return NotImplemented
        a, b, c, e = self._a, self._b, o._a, o._b
        return ExactComplex._raw(a * c - b * e, a * e + b * c, self._d * o._d)

    __rmul__ = __mul__

    def __truediv__(self, other):
        try:
            o = ExactComplex.coerce(other)
        except TypeError:
            return NotImplemented
        den = o._a * o._a + o._b * o._b
        if den == 0:
            raise ZeroDivisionError("division by exact zero")
        # (a+bi)/d / ((c+ei)/f) = (a+bi)(c-ei) f / (d (c^2+e^2))
        a, b, c, e = self._a, self._b, o._a, o._b
        return ExactComplex._raw((a * c + b * e) * o._d, (b * c - a * e) * o._d, self._d * den)

    def __rtruediv__(self, other):
        return ExactComplex.coerce(other) / self

    def conjugate(self) -> "ExactComplex":
        return ExactComplex._raw(self._a, -self._b, self._d)

    def abs_sq(self) -> Fraction:
        return Fraction(self._a * self._a + self._b * self._b, self._d * self._d)

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            other = ExactComplex.coerce(other)
        if isinstance(other, ExactComplex):
            return self._a == other._a and self._b == other._b and self._d == other._d
        return NotImplemented

    def __hash__(self):
        return hash(self.re) if not self._b else hash((self.re, self.im))

    def __bool__(self):
        return bool(self._a) or bool(self._b)

    def to_complex(self) -> complex:
        return complex(self._a / self._d, self._b / self._d)

    def __repr__(self):
        return f"ExactComplex({self.re}, {self.im})"

    def __str__(self):
        re, im = self.re, self.im
        if not im:
            return str(re)
        if not re:
            return f"{im}i"
        sign = "+" if im > 0 else "-"
        return f"{re}{sign}{abs(im)}i"


ZERO = ExactComplex(0)
ONE = ExactComplex(1)
I = ExactComplex(0, 1)


class Mat4:
    """Dense 4x4 matrix with exact complex rational entries.

    Internally a pair of integer 4x4 arrays over one common positive denominator.
    """

    __slots__ = ("_re", "_im", "_d")
    n = 4

    def __init__(self, rows: Sequence[Sequence]):
        entries = [ExactComplex.coerce(x) for row in rows for x in row]
        if len(rows) != 4 or any(len(r) != 4 for r in rows):
            raise ValueError("Mat4 needs 4x4 entries")
        d = 1
        for e in entries:
            d = d * e._d // math.gcd(d, e._d)
        self._set(
            [e._a * (d // e._d) for e in entries], [e._b * (d // e._d) for e in entries], d
        )

    def _set(self, re: list[int], im: list[int], d: int) -> None:
        g = math.gcd(d, *re, *im)
        if g > 1:
            re = [x // g for x in re]
            im = [x // g for x in im]
            d //= g
        self._re, self._im, self._d = tuple(re), tuple(im), d

    @classmethod
    def _raw(cls, re, im, d) -> "Mat4":
        out = object.__new__(cls)
        out._set(list(re), list(im), d)
        return out

    @classmethod
    def identity(cls) -> "Mat4":
        return cls._raw([int(i % 5 == 0) for i in range(16)], [0] * 16, 1)

    @classmethod
    def zeros(cls) -> "Mat4":
        return cls._raw([0] * 16, [0] * 16, 1)

    @classmethod
    def kron(cls, a: Sequence[Sequence], b: Sequence[Sequence]) -> "Mat4":
        """Kronecker product of two 2x2 matrices, ``a`` acting on the outer index."""
        a = [[ExactComplex.coerce(x) for x in row] for row in a]
        b = [[ExactComplex.coerce(x) for x in row] for row in b]
        return cls(
            [
                [a[i // 2][j // 2] * b[i % 2][j % 2] for j in range(4)]
                for i in range(4)
            ]
        )

    def __getitem__(self, ij) -> ExactComplex:
        i, j = ij
        k = 4 * i + j
        return ExactComplex._raw(self._re[k], self._im[k], self._d)

    @property
    def rows(self) -> tuple[tuple[ExactComplex, ...], ...]:
        return tuple(tuple(self[i, j] for j in range(4)) for i in range(4))

    def _aligned(self, other: "Mat4"):
        d = self._d * other._d // math.gcd(self._d, other._d)
        f, g = d // self._d, d // other._d
        return d, f, g

    def __add__(self, other: "Mat4") -> "Mat4":
        d, f, g = self._aligned(other)
        return Mat4._raw(
            [x * f + y * g for x, y in zip(self._re, other._re)],
            [x * f + y * g for x, y in zip(self._im, other._im)],
            d,
        )

    def __sub__(self, other: "Mat4") -> "Mat4":
        return self + (-other)

    def __neg__(self) -> "Mat4":
        return Mat4._raw([-x for x in self._re], [-x for x in self._im], self._d)

    def __matmul__(self, other: "Mat4") -> "Mat4":
        ar, ai, br, bi = self._re, self._im, other._re, other._im
        re, im = [0] * 16, [0] * 16
        for i in range(4):
            for k in range(4):
                xr, xi = ar[4 * i + k], ai[4 * i + k]
                if not (xr or xi):
                    continue
                for j in range(4):
                    yr, yi = br[4 * k + j], bi[4 * k + j]
                    if yr or yi:
                        re[4 * i + j] += xr * yr - xi * yi
                        im[4 * i + j] += xr * yi + xi * yr
        return Mat4._raw(re, im, self._d * other._d)

    def scale(self, c) -> "Mat4":
        c = ExactComplex.coerce(c)
        return Mat4._raw(
            [c._a * x - c._b * y for x, y in zip(self._re, self._im)],
            [c._a * y + c._b * x for x, y in zip(self._re, self._im)],
            self._d * c._d,
        )

    def __mul__(self, c):
        if isinstance(c, Mat4):
            return NotImplemented
        return self.scale(c)

    __rmul__ = __mul__

    def adjoint(self) -> "Mat4":
        idx = [4 * j + i for i in range(4) for j in range(4)]
        return Mat4._raw([self._re[k] for k in idx], [-self._im[k] for k in idx], self._d)

    def trace(self) -> ExactComplex:
        return ExactComplex._raw(
            sum(self._re[k] for k in (0, 5, 10, 15)), sum(self._im[k] for k in (0, 5, 10, 15)), self._d
        )

    def is_zero(self) -> bool:
        return not any(self._re) and not any(self._im)

    def __eq__(self, other):
        if not isinstance(other, Mat4):
            return NotImplemented
        return self._re == other._re and self._im == other._im and self._d == other._d

    def __hash__(self):
        return hash((self._re, self._im, self._d))

    def real_coordinates(self) -> list[Fraction]:
        """The 32 real parameters (re, im per entry, row major)."""
        out = []
        for x, y in zip(self._re, self._im):
            out.extend((Fraction(x, self._d), Fraction(y, self._d)))
        return out

    def to_numpy(self):
        import numpy as np

        return (np.array(self._re, dtype=float) + 1j * np.array(self._im, dtype=float)).reshape(4, 4) / self._d

    def __repr__(self):
        body = "; ".join(" ".join(str(x) for x in r) for r in self.rows)
        return f"Mat4[{body}]"


def commutator(x: Mat4, y: Mat4) -> Mat4:
    return x @ y - y @ x


def anticommutator(x: Mat4, y: Mat4) -> Mat4:
    return x @ y + y @ x


def rank(rows: Sequence[Sequence[Rational]]) -> int:
    """Exact rank of a rational matrix (Gaussian elimination over Q)."""
    return len(pivot_columns(rows))


def pivot_columns(rows: Sequence[Sequence[Rational]]) -> list[int]:
    """Pivot column indices of the row echelon form; they index an independent column set."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return []
    ncols = len(m[0])
    pivots = []
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, len(m)) if m[i][col] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        pv = m[r][col]
        prow = m[r]
        for i in range(r + 1, len(m)):
            f = m[i][col]
            if f:
                f = f / pv
                row = m[i]
                for j in range(col, ncols):
                    if prow[j]:
                        row[j] -= f * prow[j]
        pivots.append(col)
        r += 1
        if r == len(m):
            break
    return pivots


def inverse_exact(a: Sequence[Sequence[Rational]]) -> list[list[Fraction]]:
    """Inverse of a square rational matrix by Gauss-Jordan elimination."""
    n = len(a)
    m = [[Fraction(x) for x in row] + [Fraction(int(i == j)) for j in range(n)] for i, row in enumerate(a)]
    for col in range(n):
        pivot = next((i for i in range(col, n) if m[i][col] != 0), None)
        if pivot is None:
            raise ZeroDivisionError("matrix is singular")
        m[col], m[pivot] = m[pivot], m[col]
        pv = m[col][col]
        m[col] = [x / pv for x in m[col]]
        for i in range(n):
            if i != col and m[i][col]:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[col])]
    return [row[n:] for row in m]


def solve_exact(a: Sequence[Sequence[Rational]], b: Sequence[Rational]) -> list[Fraction] | None:
    """Solve ``a x = b`` exactly for a full-column-rank system.

    Returns ``None`` when the system is inconsistent.
    """
    nrows = len(a)
    ncols = len(a[0])
    m = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(a, b)]
    pivots = []
    r = 0
    for col in range(ncols):
        pivot = next((i for i in range(r, nrows) if m[i][col] != 0), None)
        if pivot is None:
            continue
        m[r], m[pivot] = m[pivot], m[r]
        pv = m[r][col]
        m[r] = [x / pv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][col]:
                f = m[i][col]
                m[i] = [x - f * y for x, y in zip(m[i], m[r])]
        pivots.append(col)
        r += 1
    if any(row[-1] != 0 for row in m[r:]):
        return None
    x = [Fraction(0)] * ncols
    for i, col in enumerate(pivots):
        x[col] = m[i][-1]
    return x


class QSeries:
    """Truncated power series in q with exact rational coefficients.

    ``coeffs[n]`` is the coefficient of q**n for 0 <= n <= order.
    """

    __slots__ = ("coeffs",)

    def __init__(self, coeffs: Iterable[Rational], order: int | None = None):
        c = [Fraction(x) for x in coeffs]
        if order is None:
            order = len(c) - 1
        if order < 0:
            raise ValueError("order must be nonnegative")
        c = c[: order + 1] + [Fraction(0)] * (order + 1 - len(c))
        self.coeffs = tuple(c)

    @property
    def order(self) -> int:
        return len(self.coeffs) - 1

    @classmethod
    def one(cls, order: int = DEFAULT_SERIES_ORDER) -> "QSeries":
        return cls([1], order)

    @classmethod
    def monomial(cls, n: int, order: int = DEFAULT_SERIES_ORDER, coeff: Rational = 1) -> "QSeries":
        c = [0] * (order + 1)
        if n <= order:
            c[n] = coeff
        return cls(c, order)

    def _check(self, other: "QSeries"):
        if not isinstance(other, QSeries):
            raise TypeError("expected QSeries")
        if other.order != self.order:
            raise ValueError(f"order mismatch: {self.order} vs {other.order}")

    def __add__(self, other):
        if isinstance(other, (int, Fraction)):
            return QSeries((self.coeffs[0] + other,) + self.coeffs[1:])
        self._check(other)
        return QSeries(a + b for a, b in zip(self.coeffs, other.coeffs))

    __radd__ = __add__

    def __sub__(self, other):
        if isinstance(other, (int, Fraction)):
            return self + (-other)
        self._check(other)
        return QSeries(a - b for a, b in zip(self.coeffs, other.coeffs))

    def __neg__(self):
        return QSeries(-a for a in self.coeffs)

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return QSeries(a * other for a in self.coeffs)
        return qseries_mul(self, other)

    __rmul__ = __mul__

    def inverse(self) -> "QSeries":
        a = self.coeffs
        if a[0] == 0:
            raise ZeroDivisionError("series with zero constant term is not invertible")
        n = self.order
        inv0 = 1 / a[0]
        b = [Fraction(0)] * (n + 1)
        b[0] = inv0
        for k in range(1, n + 1):
            s = sum(a[j] * b[k - j] for j in range(1, k + 1) if a[j])
            b[k] = -s * inv0
        return QSeries(b)

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return QSeries(a / other for a in self.coeffs)
        return self * other.inverse()

    def q_derivative(self) -> "QSeries":
        """q d/dq, coefficient-wise multiplication by n."""
        return QSeries(n * a for n, a in enumerate(self.coeffs))

    def __eq__(self, other):
        if not isinstance(other, QSeries):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(self.coeffs)

    def __getitem__(self, n):
        return self.coeffs[n]

    def __iter__(self) -> Iterator[Fraction]:
        return iter(self.coeffs)

    def __repr__(self):
        shown = ", ".join(str(c) for c in self.coeffs[:6])
        more = ", ..." if self.order >= 6 else ""
        return f"QSeries([{shown}{more}], order={self.order})"


def qseries_mul(a: QSeries, b: QSeries) -> QSeries:
    a._check(b)
    n = a.order
    ac, bc = a.coeffs, b.coeffs
    nz = [(i, x) for i, x in enumerate(ac) if x]
    out = [Fraction(0)] * (n + 1)
    for j, y in enumerate(bc):
        if not y:
            continue
        for i, x in nz:
            if i + j > n:
                break
            out[i + j] += x * y
    return QSeries(out)


def qseries_log_derivative(a: QSeries) -> QSeries:
    """q * d/dq log(a) as an exact series, i.e. q a'(q) / a(q)."""
    if a.coeffs[0] == 0:
        raise ZeroDivisionError("log-derivative needs a nonzero constant term")
    return a.q_derivative() * a.inverse()


def bernoulli(m: int) -> Fraction:
    """Bernoulli number B_m for even m >= 2 (B_2 = 1/6)."""
    if not isinstance(m, int) or m < 2 or m % 2:
        raise ValueError(f"bernoulli needs an even integer m >= 2, got {m!r}")
    return _bernoulli_table(m)[m]


@lru_cache(maxsize=None)
def _bernoulli_table(m: int) -> tuple[Fraction, ...]:
    # sum_{j=0}^{n} C(n+1, j) B_j = 0 for n >= 1
    b = [Fraction(1)]
    for n in range(1, m + 1):
        s = sum(math.comb(n + 1, j) * b[j] for j in range(n))
        b.append(-s / (n + 1))
    return tuple(b)


def divisor_power_sum(n: int, power: int) -> int:
    """sigma_power(n) = sum of d**power over the positive divisors d of n."""
    if n < 1:
        raise ValueError("n must be positive")
    total = 0
    d = 1
    while d * d <= n:
        if n % d == 0:
            total += d**power
            e = n // d
            if e != d:
                total += e**power
        d += 1
    return total


Exponent = tuple[int, int, int, int]


class Poly4:
    """Polynomial in z1..z4 with exact complex coefficients, stored sparsely."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        clean = {}
        for exp, c in (terms or {}).items():
            c = ExactComplex.coerce(c)
            if c:
                clean[tuple(exp)] = c
        self.terms = clean

    @classmethod
    def constant(cls, c) -> "Poly4":
        return cls({(0, 0, 0, 0): c})

    @classmethod
    def variable(cls, alpha: int) -> "Poly4":
        """z_alpha for alpha in 1..4."""
        e = [0, 0, 0, 0]
        e[alpha - 1] = 1
        return cls({tuple(e): 1})

    def __add__(self, other):
        if not isinstance(other, Poly4):
            other = Poly4.constant(other)
        out = dict(self.terms)
        for e, c in other.terms.items():
            out[e] = out.get(e, ZERO) + c
        return Poly4(out)

    __radd__ = __add__

    def __neg__(self):
        return Poly4({e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        if not isinstance(other, Poly4):
            other = Poly4.constant(other)
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Poly4):
            c = ExactComplex.coerce(other)
            return Poly4({e: c * v for e, v in self.terms.items()})
        out: dict = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in other.terms.items():
                e = (e1[0] + e2[0], e1[1] + e2[1], e1[2] + e2[2], e1[3] + e2[3])
                out[e] = out.get(e, ZERO) + c1 * c2
        return Poly4(out)

    __rmul__ = __mul__

    def __pow__(self, k: int) -> "Poly4":
        out = Poly4.constant(1)
        for _ in range(k):
            out = out * self
        return out

    def __eq__(self, other):
        if not isinstance(other, Poly4):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int | None:
        """Common total degree, or ``None`` for an inhomogeneous (or zero) polynomial."""
        degs = {sum(e) for e in self.terms}
        if len(degs) != 1:
            return None
        return degs.pop()

    def sorted_terms(self) -> list[tuple[Exponent, ExactComplex]]:
        # graded lexicographic, highest first
        return sorted(self.terms.items(), key=lambda t: (sum(t[0]), t[0]), reverse=True)

    def derivative(self, alpha: int) -> "Poly4":
        i = alpha - 1
        out = {}
        for e, c in self.terms.items():
            if e[i]:
                e2 = list(e)
                e2[i] -= 1
                out[tuple(e2)] = c * e[i]
        return Poly4(out)

    def evaluate(self, z: Sequence[complex]) -> complex:
        total = 0j
        for e, c in self.terms.items():
            total += c.to_complex() * z[0] ** e[0] * z[1] ** e[1] * z[2] ** e[2] * z[3] ** e[3]
        return total

    def __repr__(self):
        if not self.terms:
            return "0"
        parts = []
        for e, c in self.sorted_terms():
            mono = "*".join(
                f"z{i + 1}" + (f"^{p}" if p > 1 else "") for i, p in enumerate(e) if p
            )
            parts.append(f"({c})" + (f"*{mono}" if mono else ""))
        return " + ".join(parts)


def to_float(x: Rational) -> float:
    return float(x)


def format_rational(x: Rational) -> str:
    """Render as "p/q" (or "p" for integers)."""
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"
