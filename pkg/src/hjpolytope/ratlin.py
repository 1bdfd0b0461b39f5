"""Exact scalars and linear algebra over the rationals.

Rationals are :class:`fractions.Fraction`.  Everything heavier than a dot
product is done on integer matrices with fraction-free elimination so that
intermediate values never carry denominators.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd, isqrt, lcm
from typing import Iterable, Sequence

from . import kernels

Rat = Fraction
RVec = tuple  # tuple[Fraction, ...]


class AffinelyDependent(ValueError):
    """The given points do not determine a unique hyperplane."""


def rat(value) -> Fraction:
    """Coerce ints, Fractions and "p/q" strings to a Fraction."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, (int, str)):
        return Fraction(value)
    raise TypeError(f"cannot interpret {value!r} as an exact rational")


def rat_str(value: Fraction) -> str:
    """Canonical "p/q" text, with q omitted when it is 1."""
    value = rat(value)
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


def rvec(values: Iterable) -> RVec:
    return tuple(rat(v) for v in values)


class RMat:
    """Immutable rational matrix with fixed shape."""

    __slots__ = ("_rows", "nrows", "ncols")

    def __init__(self, rows: Iterable[Iterable], ncols: int | None = None):
        rows = tuple(rvec(r) for r in rows)
        if ncols is None:
            if not rows:
                raise ValueError("column count required for a matrix with no rows")
            ncols = len(rows[0])
        for r in rows:
            if len(r) != ncols:
                raise ValueError("ragged matrix rows")
        self._rows = rows
        self.nrows = len(rows)
        self.ncols = ncols

    @property
    def shape(self) -> tuple[int, int]:
        return self.nrows, self.ncols

    @property
    def rows(self) -> tuple[RVec, ...]:
        return self._rows

    def __getitem__(self, idx: tuple[int, int]) -> Fraction:
        i, j = idx
        if not (0 <= i < self.nrows and 0 <= j < self.ncols):
            raise IndexError(f"index {idx} out of range for shape {self.shape}")
        return self._rows[i][j]

    def transpose(self) -> "RMat":
        return RMat(zip(*self._rows), ncols=self.nrows) if self.nrows else RMat((), 0)

    def __eq__(self, other) -> bool:
        return isinstance(other, RMat) and self.shape == other.shape and self._rows == other._rows

    def __hash__(self) -> int:
        return hash((self.shape, self._rows))

    def __repr__(self) -> str:
        return f"RMat({[[rat_str(x) for x in r] for r in self._rows]})"


def _as_rows(m) -> tuple[tuple[Fraction, ...], ...]:
    if isinstance(m, RMat):
        return m.rows
    return tuple(rvec(r) for r in m)


def integer_rows(rows: Sequence[Sequence[Fraction]]) -> list[list[int]]:
    """Scale each row by the lcm of its denominators.

    Row scaling by a positive integer leaves rank and the sign of the
    determinant unchanged.
    """
    out = []
    for r in rows:
        den = 1
        for x in r:
            den = lcm(den, x.denominator)
        out.append([x.numerator * (den // x.denominator) for x in r])
    return out


def det(m) -> Fraction:
    rows = _as_rows(m)
    n = len(rows)
    if any(len(r) != n for r in rows):
        raise ValueError("determinant of a non-square matrix")
    if n == 0:
        return Fraction(1)
    scale = 1
    for r in rows:
        for x in r:
            scale = lcm(scale, x.denominator)
    ints = [[(x * scale).numerator for x in r] for r in rows]
    return Fraction(kernels.bareiss_det(ints), scale**n)


def rank(m) -> int:
    rows = _as_rows(m)
    if not rows:
        return 0
    return kernels.bareiss_rank(integer_rows(rows))


def affinely_independent(points: Sequence[Sequence]) -> bool:
    pts = [rvec(p) for p in points]
    if not pts:
        return True
    dim = len(pts[0])
    if len(pts) > dim + 1:
        return False
    return rank([(Fraction(1),) + p for p in pts]) == len(pts)


def _content_normalize(coeffs: Sequence[Fraction]) -> tuple[int, ...]:
    ints = integer_rows([coeffs])[0]
    g = 0
    for v in ints:
        g = gcd(g, v)
    return tuple(v // g for v in ints) if g else tuple(ints)


@dataclass(frozen=True)
class Hyperplane:
    """Affine functional ``x -> c . x + c0``.

    Coefficients are integers of content 1.  :meth:`through` and
    :meth:`from_coefficients` return the canonical orientation (first nonzero
    normal coefficient positive); :meth:`flipped` gives the opposite one, which
    is how facet certificates store an outward-negative orientation.
    """

    c0: Fraction
    c: RVec

    def __post_init__(self):
        if not any(self.c):
            raise ValueError("hyperplane normal must be nonzero")

    @classmethod
    def from_coefficients(cls, c0, c, canonical: bool = True) -> "Hyperplane":
        ints = _content_normalize([rat(c0)] + [rat(x) for x in c])
        if canonical:
            lead = next(v for v in ints[1:] if v)
            if lead < 0:
                ints = tuple(-v for v in ints)
        return cls(Fraction(ints[0]), tuple(Fraction(v) for v in ints[1:]))

    @classmethod
    def through(cls, points: Sequence[Sequence]) -> "Hyperplane":
        return hyperplane_through(points)

    @property
    def dim(self) -> int:
        return len(self.c)

    def eval(self, p: Sequence) -> Fraction:
        if len(p) != len(self.c):
            raise ValueError(f"point of length {len(p)} for a hyperplane in R^{len(self.c)}")
        return sum((ci * pi for ci, pi in zip(self.c, p) if ci), self.c0)

    def flipped(self) -> "Hyperplane":
        return Hyperplane(-self.c0, tuple(-x for x in self.c))

    def canonical(self) -> "Hyperplane":
        return Hyperplane.from_coefficients(self.c0, self.c)

    def to_json(self) -> dict:
        return {"c0": rat_str(self.c0), "c": [rat_str(x) for x in self.c]}

    @classmethod
    def from_json(cls, payload: dict) -> "Hyperplane":
        return cls(rat(payload["c0"]), rvec(payload["c"]))


def hyperplane_through(points: Sequence[Sequence]) -> Hyperplane:
    """Unique hyperplane through ``d`` affinely independent points of R^d."""
    pts = [rvec(p) for p in points]
    if not pts:
        raise ValueError("need at least one point")
    dim = len(pts[0])
    if dim < 2 or len(pts) != dim or any(len(p) != dim for p in pts):
        raise ValueError(f"need exactly d points in R^d (d >= 2), got {len(pts)} in R^{dim}")
    # columns: c_1..c_d, c0
    rows = integer_rows([p + (Fraction(1),) for p in pts])
    normal = kernels.nullspace_vector(rows)
    if normal is None:
        raise AffinelyDependent(f"{dim} points span less than a hyperplane")
    return Hyperplane.from_coefficients(normal[-1], normal[:-1])


def gram_functional(center: Sequence) -> Hyperplane:
    """Functional on Veronese coordinates equal to ``|(x, y) - center|^2``.

    Coefficients act on (x^2, xy, y^2, x, y); its value at nu(q) is the squared
    distance from q to ``center``, so it is zero only at ``center``.
    """
    px, py = rat(center[0]), rat(center[1])
    return Hyperplane(
        px * px + py * py,
        (Fraction(1), Fraction(0), Fraction(1), -2 * px, -2 * py),
    )


# -- quadratic surds ---------------------------------------------------------


def rational_sqrt(r: Fraction) -> Fraction | None:
    """Exact square root of a nonnegative rational, or None if irrational."""
    if r < 0:
        raise ValueError("negative radicand")
    p, q = r.numerator, r.denominator
    sp, sq = isqrt(p), isqrt(q)
    if sp * sp == p and sq * sq == q:
        return Fraction(sp, sq)
    return None


@dataclass(frozen=True)
class Surd:
    """The real number ``a + b*sqrt(r)`` with rational a, b and r >= 0."""

    a: Fraction
    b: Fraction = Fraction(0)
    r: Fraction = Fraction(0)

    def __init__(self, a, b=0, r=0):
        a, b, r = rat(a), rat(b), rat(r)
        if r < 0:
            raise ValueError("surd radicand must be nonnegative")
        if b and r:
            root = rational_sqrt(r)
            if root is not None:
                a, b, r = a + b * root, Fraction(0), Fraction(0)
        else:
            b, r = Fraction(0), Fraction(0)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "b", b)
        object.__setattr__(self, "r", r)

    @property
    def is_rational(self) -> bool:
        return self.b == 0

    def _radicand_with(self, other: "Surd") -> Fraction:
        if self.b and other.b and self.r != other.r:
            raise ValueError("surds with different radicands do not combine")
        return self.r if self.b else other.r

    def __add__(self, other):
        other = _surd(other)
        r = self._radicand_with(other)
        return Surd(self.a + other.a, self.b + other.b, r)

    __radd__ = __add__

    def __neg__(self):
        return Surd(-self.a, -self.b, self.r)

    def __sub__(self, other):
        return self + (-_surd(other))

    def __rsub__(self, other):
        return _surd(other) - self

    def __mul__(self, other):
        other = _surd(other)
        r = self._radicand_with(other)
        return Surd(
            self.a * other.a + self.b * other.b * r,
            self.a * other.b + self.b * other.a,
            r,
        )

    __rmul__ = __mul__

    def sign(self) -> int:
        return surd_sign(self)

    def __str__(self) -> str:
        if self.is_rational:
            return rat_str(self.a)
        return f"{rat_str(self.a)} + {rat_str(self.b)}*sqrt({rat_str(self.r)})"


def _surd(x) -> Surd:
    return x if isinstance(x, Surd) else Surd(rat(x))


def _sgn(x) -> int:
    return (x > 0) - (x < 0)


def surd_sign(s: Surd) -> int:
    """Sign of ``a + b*sqrt(r)`` using rational comparisons only."""
    sa = _sgn(s.a)
    sb = _sgn(s.b) if s.r else 0
    if sb == 0:
        return sa
    if sa == 0 or sa == sb:
        return sb
    lhs, rhs = s.a * s.a, s.b * s.b * s.r
    if lhs > rhs:
        return sa
    if lhs < rhs:
        return sb
    return 0
