"""Complete binary Edwards curves: classical group law and toy-curve search.

A curve is ``d1(x+y) + d2(x^2+y^2) = xy + xy(x+y) + x^2 y^2`` over GF(2^n)
with ``d1 != 0`` and ``Tr(d2) = 1``.  The neutral element is ``(0, 0)``.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property, lru_cache

from .field import FieldElement, FieldSpec


class CompletenessViolation(ArithmeticError):
    """A denominator of the addition law vanished on a supposedly complete curve."""


class CurveSearchError(LookupError):
    pass


@dataclass(frozen=True)
class CurveSpec:
    field: FieldSpec
    d1: FieldElement
    d2: FieldElement

    def __post_init__(self):
        for d in (self.d1, self.d2):
            if d.spec != self.field:
                raise ValueError("curve constants must live in the curve's field")
        if self.d1.value == 0:
            raise ValueError("d1 must be nonzero")
        if self.field.tr(self.d2.value) != 1:
            raise ValueError("d2 must have trace 1")

    @classmethod
    def from_ints(cls, spec: FieldSpec, d1: int, d2: int) -> CurveSpec:
        return cls(spec, spec(d1), spec(d2))

    @classmethod
    def parse(cls, text: str) -> CurveSpec:
        m = re.fullmatch(
            r"\s*edwards\s+n=(\d+)\s+poly=0x([0-9a-fA-F]+)\s+d1=0x([0-9a-fA-F]+)\s+d2=0x([0-9a-fA-F]+)\s*",
            text,
        )
        if not m:
            raise ValueError(f"malformed curve description: {text!r}")
        spec = FieldSpec(int(m.group(1)), int(m.group(2), 16))
        return cls.from_ints(spec, int(m.group(3), 16), int(m.group(4), 16))

    def __str__(self):
        return (f"edwards n={self.field.n} poly={self.field.modulus:#x} "
                f"d1={self.d1.value:#x} d2={self.d2.value:#x}")

    @property
    def identity(self) -> AffinePoint:
        return AffinePoint(self.field.zero, self.field.zero)

    @cached_property
    def _quad(self) -> _ArtinSchreier:
        return _ArtinSchreier(self.field)


@dataclass(frozen=True)
class AffinePoint:
    x: FieldElement
    y: FieldElement

    @classmethod
    def from_ints(cls, spec: FieldSpec, x: int, y: int) -> AffinePoint:
        return cls(spec(x), spec(y))

    @property
    def xy(self) -> tuple[int, int]:
        return self.x.value, self.y.value

    def is_identity(self) -> bool:
        return self.x.value == 0 and self.y.value == 0

    def to_projective(self, scale: FieldElement | None = None) -> ProjectivePoint:
        lam = scale if scale is not None else self.x.spec.one
        return ProjectivePoint(self.x * lam, self.y * lam, lam)


@dataclass(frozen=True)
class ProjectivePoint:
    X: FieldElement
    Y: FieldElement
    Z: FieldElement

    def __post_init__(self):
        if self.Z.value == 0:
            raise ValueError("projective point with Z = 0")

    @classmethod
    def from_ints(cls, spec: FieldSpec, X: int, Y: int, Z: int) -> ProjectivePoint:
        return cls(spec(X), spec(Y), spec(Z))

    def to_affine(self) -> AffinePoint:
        return AffinePoint(self.X / self.Z, self.Y / self.Z)

    def equivalent(self, other: ProjectivePoint) -> bool:
        """Equality as points of the projective plane."""
        return (self.X * other.Z == other.X * self.Z) and (self.Y * other.Z == other.Y * self.Z)


# ---------------------------------------------------------------------------
# integer-level group law
# ---------------------------------------------------------------------------

def _on_curve(f: FieldSpec, d1: int, d2: int, x: int, y: int) -> bool:
    lhs = f.mul(d1, x ^ y) ^ f.mul(d2, f.sq(x) ^ f.sq(y))
    xy = f.mul(x, y)
    rhs = xy ^ f.mul(xy, x ^ y) ^ f.sq(xy)
    return lhs == rhs


def _affine_add(f: FieldSpec, d1: int, d2: int, x1: int, y1: int, x2: int, y2: int) -> tuple[int, int]:
    mul, sq = f.mul, f.sq
    sx = x1 ^ sq(x1)
    sy = y1 ^ sq(y1)
    w = x2 ^ y2
    den_x = d1 ^ mul(sx, w)
    den_y = d1 ^ mul(sy, w)
    if den_x == 0 or den_y == 0:
        raise CompletenessViolation(f"vanishing denominator adding ({x1:#x},{y1:#x}) + ({x2:#x},{y2:#x})")
    num_x = mul(d1, x1 ^ x2) ^ mul(d2, mul(x1 ^ y1, x2 ^ y2)) ^ mul(sx, mul(x2, y1 ^ y2 ^ 1) ^ mul(y1, y2))
    num_y = mul(d1, y1 ^ y2) ^ mul(d2, mul(x1 ^ y1, x2 ^ y2)) ^ mul(sy, mul(y2, x1 ^ x2 ^ 1) ^ mul(x1, x2))
    return f.div(num_x, den_x), f.div(num_y, den_y)


@dataclass
class OpCount:
    """Field-operation tally for one projective addition."""

    mul: int = 0
    const_mul: int = 0
    square: int = 0
    add: int = 0

    def as_tuple(self) -> tuple[int, int, int, int]:
        return self.mul, self.const_mul, self.square, self.add


class _Tally:
    def __init__(self, f: FieldSpec, count: OpCount):
        self.f, self.c = f, count

    def mul(self, a, b):
        self.c.mul += 1
        return self.f.mul(a, b)

    def cmul(self, const, a):
        self.c.const_mul += 1
        return self.f.mul(const, a)

    def sq(self, a):
        self.c.square += 1
        return self.f.sq(a)

    def add(self, a, b):
        self.c.add += 1
        return a ^ b


def _projective_add(t, d1, d2, X1, Y1, Z1, X2, Y2, Z2):
    """The 21M + 4D + 1S + 15A addition schedule; ``t`` supplies the field ops."""
    W1 = t.add(X1, Y1)
    W2 = t.add(X2, Y2)
    A = t.mul(X1, t.add(X1, Z1))
    B = t.mul(Y1, t.add(Y1, Z1))
    C = t.mul(Z1, Z2)
    D = t.mul(W2, Z2)
    E = t.cmul(d1, t.sq(C))
    H = t.mul(t.mul(t.add(t.cmul(d1, Z2), t.cmul(d2, W2)), W1), C)
    I = t.mul(t.cmul(d1, Z1), C)
    U = t.add(E, t.mul(A, D))
    V = t.add(E, t.mul(B, D))
    S = t.mul(U, V)
    X3 = t.add(t.mul(S, Y1), t.mul(t.mul(t.add(H, t.mul(X2, t.add(I, t.mul(A, t.add(Y2, Z2))))), V), Z1))
    Y3 = t.add(t.mul(S, X1), t.mul(t.mul(t.add(H, t.mul(Y2, t.add(I, t.mul(B, t.add(X2, Z2))))), U), Z1))
    Z3 = t.mul(S, Z1)
    return X3, Y3, Z3


# ---------------------------------------------------------------------------
# public operations
# ---------------------------------------------------------------------------

def on_curve(c: CurveSpec, p: AffinePoint) -> bool:
    return _on_curve(c.field, c.d1.value, c.d2.value, p.x.value, p.y.value)


def affine_add(c: CurveSpec, p1: AffinePoint, p2: AffinePoint) -> AffinePoint:
    """Unified affine addition; raises :class:`CompletenessViolation` if a denominator vanishes."""
    f = c.field
    x3, y3 = _affine_add(f, c.d1.value, c.d2.value, p1.x.value, p1.y.value, p2.x.value, p2.y.value)
    return AffinePoint(f(x3), f(y3))


def projective_add(c: CurveSpec, p1: ProjectivePoint, p2: ProjectivePoint,
                   count: OpCount | None = None) -> ProjectivePoint:
    """Projective addition; if ``count`` is given it receives the operation tally."""
    f = c.field
    count = count if count is not None else OpCount()
    X3, Y3, Z3 = _projective_add(_Tally(f, count), c.d1.value, c.d2.value,
                                 p1.X.value, p1.Y.value, p1.Z.value,
                                 p2.X.value, p2.Y.value, p2.Z.value)
    if Z3 == 0:
        raise CompletenessViolation("projective sum has Z = 0")
    return ProjectivePoint(f(X3), f(Y3), f(Z3))


def scalar_mul(c: CurveSpec, k: int, p: AffinePoint) -> AffinePoint:
    if k < 0:
        raise ValueError("scalar must be non-negative")
    f, d1, d2 = c.field, c.d1.value, c.d2.value
    rx, ry = 0, 0
    bx, by = p.xy
    while k:
        if k & 1:
            rx, ry = _affine_add(f, d1, d2, rx, ry, bx, by)
        bx, by = _affine_add(f, d1, d2, bx, by, bx, by)
        k >>= 1
    return AffinePoint(f(rx), f(ry))


def double_scalar(c: CurveSpec, k: int, l: int, p: AffinePoint, q: AffinePoint) -> AffinePoint:
    """``k*p + l*q``."""
    return affine_add(c, scalar_mul(c, k, p), scalar_mul(c, l, q))


def multiples(c: CurveSpec, p: AffinePoint, count: int) -> list[tuple[int, int]]:
    """``[0*p, 1*p, ..., (count-1)*p]`` as coordinate pairs."""
    f, d1, d2 = c.field, c.d1.value, c.d2.value
    out = [(0, 0)]
    for _ in range(count - 1):
        out.append(_affine_add(f, d1, d2, *out[-1], *p.xy))
    return out[:count]


def powers_of_two(c: CurveSpec, p: AffinePoint, count: int) -> list[AffinePoint]:
    """``[p, 2p, 4p, ..., 2^(count-1) p]``."""
    out = [p]
    for _ in range(count - 1):
        out.append(affine_add(c, out[-1], out[-1]))
    return out


class _ArtinSchreier:
    """Solver for ``z^2 + z = w`` (solvable iff ``Tr(w) = 0``)."""

    def __init__(self, f: FieldSpec):
        self.f = f
        # reduced echelon basis of the image of z -> z^2 + z with preimages
        pivots: dict[int, tuple[int, int]] = {}
        for j in range(f.n):
            v, pre = f.sq(1 << j) ^ (1 << j), 1 << j
            for bit in sorted(pivots, reverse=True):
                if v >> bit & 1:
                    pv, pp = pivots[bit]
                    v ^= pv
                    pre ^= pp
            if v:
                pivots[v.bit_length() - 1] = (v, pre)
        self.pivots = sorted(pivots.items(), reverse=True)

    def solve(self, w: int) -> int | None:
        z = 0
        for bit, (pv, pp) in self.pivots:
            if w >> bit & 1:
                w ^= pv
                z ^= pp
        return z if w == 0 else None


def points_with_x(c: CurveSpec, x: int) -> list[int]:
    """All ``y`` with ``(x, y)`` on the curve.

    For fixed ``x`` the curve equation is ``a y^2 + b y + k = 0`` with
    ``a = d2 + x + x^2`` (never zero since ``Tr(d2) = 1``),
    ``b = d1 + x + x^2`` and ``k = d1 x + d2 x^2``.
    """
    f, d1, d2 = c.field, c.d1.value, c.d2.value
    s = x ^ f.sq(x)
    a, b = d2 ^ s, d1 ^ s
    k = f.mul(d1, x) ^ f.mul(d2, f.sq(x))
    if b == 0:
        # unique square root of k/a
        return [f.frob(f.div(k, a), f.n - 1)]
    z = c._quad.solve(f.div(f.mul(a, k), f.sq(b)))
    if z is None:
        return []
    scale = f.div(b, a)
    return sorted({f.mul(scale, z), f.mul(scale, z ^ 1)})


def enumerate_points(c: CurveSpec) -> list[AffinePoint]:
    """Every affine point, sorted by ``(x, y)``; refuses ``n > 16``."""
    f = c.field
    if f.n > 16:
        raise ValueError(f"refusing to enumerate a curve over GF(2^{f.n}); limit is n <= 16")
    return [AffinePoint(f(x), f(y)) for x in range(f.size) for y in points_with_x(c, x)]


def order_of(c: CurveSpec, p: AffinePoint, limit: int | None = None) -> int:
    f, d1, d2 = c.field, c.d1.value, c.d2.value
    limit = limit if limit is not None else 2 * f.size + 4 * (1 << (f.n // 2 + 1))
    rx, ry = p.xy
    m = 1
    while (rx, ry) != (0, 0):
        rx, ry = _affine_add(f, d1, d2, rx, ry, *p.xy)
        m += 1
        if m > limit:
            raise ValueError("order exceeds the Hasse bound; point is not on the curve?")
    return m


def negate(c: CurveSpec, p: AffinePoint) -> AffinePoint:
    """Inverse by exhaustive search (toy curves only)."""
    for q in enumerate_points(c):
        if affine_add(c, p, q).is_identity():
            return q
    raise CurveSearchError(f"no inverse for {p}")


@lru_cache(maxsize=None)
def find_toy_curve(spec: FieldSpec) -> tuple[CurveSpec, AffinePoint, int]:
    """First curve (lexicographic in ``(d1, d2)``) with a point of order >= 4.

    Returns the curve, the first point of maximal order and that order.
    """
    if spec.n > 8:
        raise ValueError("toy-curve search is limited to n <= 8")
    for d1 in range(1, spec.size):
        for d2 in range(spec.size):
            if spec.tr(d2) != 1:
                continue
            curve = CurveSpec.from_ints(spec, d1, d2)
            best, best_order = None, 0
            for pt in enumerate_points(curve):
                o = order_of(curve, pt)
                if o > best_order:
                    best, best_order = pt, o
            if best_order >= 4:
                return curve, best, best_order
    raise CurveSearchError(f"no complete curve with a point of order >= 4 over {spec}")


@lru_cache(maxsize=None)
def find_structural_curve(spec: FieldSpec, curve: CurveSpec | None = None) -> tuple[CurveSpec, AffinePoint, AffinePoint]:
    """A valid curve and two points for any ``n``, for resource builds.

    Unless ``curve`` is given, uses ``d1 = 1`` and the least ``d2`` of
    trace 1; the points are the first two non-identity points found
    scanning ``x = 2, 3, ...``.
    """
    if curve is None:
        d2 = next(v for v in range(spec.size) if spec.tr(v) == 1)
        curve = CurveSpec.from_ints(spec, 1, d2)
    pts = []
    x = 2
    while len(pts) < 2 and x < spec.size:
        ys = points_with_x(curve, x)
        if ys:
            pts.append(AffinePoint(spec(x), spec(ys[0])))
        x += 1
    if len(pts) < 2:
        raise CurveSearchError(f"fewer than two points with x >= 2 on {curve}")
    return curve, pts[0], pts[1]
