"""Closed-form geometry of the upper half-plane and upper half-space.

Boundary points are plain numbers (int, Fraction, float, complex) or the
``INFINITY`` sentinel.  Boundary dimension 1 uses real coordinates and
boundary dimension 2 uses complex ones.
"""

from __future__ import annotations

import cmath
import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction
from numbers import Number, Rational


class _Infinity:
    _instance = None

    def __new__(cls):
        if cls._instance is None:
            cls._instance = super().__new__(cls)
        return cls._instance

    def __repr__(self):
        return "INFINITY"

    def __eq__(self, other):
        return other is self

    def __hash__(self):
        return hash("INFINITY")

    def __reduce__(self):
        return (_Infinity, ())


INFINITY = _Infinity()


class NoMax(ValueError):
    """The ray ends at the horoball's base, so its height is unbounded."""


class Unbounded(ValueError):
    """The geodesic shares an endpoint with the target line."""


class ConvergenceError(RuntimeError):
    pass


def is_infinity(x) -> bool:
    return x is INFINITY


def sq_abs(z):
    """|z|^2, exact for rationals."""
    if isinstance(z, complex):
        return z.real * z.real + z.imag * z.imag
    return z * z


def _conj(z):
    return z.conjugate() if hasattr(z, "conjugate") else z


def _div(num, den):
    if isinstance(num, Rational) and isinstance(den, Rational):
        return Fraction(num) / Fraction(den)
    return num / den


def same_boundary_point(x, y) -> bool:
    if x is INFINITY or y is INFINITY:
        return x is y
    return x == y


@dataclass(frozen=True)
class HPoint:
    horizontal: Number
    height: float

    def __post_init__(self):
        if not (self.height > 0) or math.isinf(float(self.height)):
            raise ValueError(f"height must be a positive finite number, got {self.height!r}")


@dataclass(frozen=True, eq=False)
class GeodesicLine:
    a: object
    b: object

    def __post_init__(self):
        if same_boundary_point(self.a, self.b):
            raise ValueError("geodesic endpoints must be distinct")

    @property
    def endpoints(self):
        return (self.a, self.b)

    def _key(self):
        return frozenset((("inf", 0) if e is INFINITY else ("pt", e)) for e in self.endpoints)

    def __eq__(self, other):
        return isinstance(other, GeodesicLine) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())


@dataclass(frozen=True)
class Horoball:
    """Horoball at a finite base with size s (Euclidean radius e^{-s}/2), or at INFINITY with a height."""

    base: object
    size: float = 0.0
    height: float | None = None

    def __post_init__(self):
        if self.base is INFINITY:
            if self.height is None or not self.height > 0:
                raise ValueError("a horoball at INFINITY needs a positive height")
        elif not math.isfinite(self.size):
            raise ValueError("size must be finite")

    @classmethod
    def at_infinity(cls, height=1.0):
        return cls(INFINITY, 0.0, height)

    @classmethod
    def from_radius(cls, base, radius):
        return cls(base, -math.log(2 * float(radius)))

    @property
    def radius(self) -> float:
        if self.base is INFINITY:
            return math.inf
        return math.exp(-self.size) / 2


@dataclass(frozen=True)
class VerticalRay:
    foot: object
    start_height: float = 1.0

    def __post_init__(self):
        if self.foot is INFINITY:
            raise ValueError("a vertical ray needs a finite foot")
        if not self.start_height > 0:
            raise ValueError("start_height must be positive")


@dataclass(frozen=True)
class GeodesicRay:
    """Ray from an interior point towards a boundary point."""

    origin: HPoint
    end: object


class Flavor(Enum):
    HAMENSTADT_AT_INFINITY = "hamenstadt"
    INTERIOR = "interior"


@dataclass(frozen=True)
class VisualContext:
    flavor: Flavor
    basepoint: HPoint | None = None
    reference_height: float = 1.0

    def __post_init__(self):
        if self.flavor is Flavor.HAMENSTADT_AT_INFINITY and self.reference_height != 1:
            raise ValueError("the Hamenstadt flavor needs the reference horoball at INFINITY with height 1")
        if self.flavor is Flavor.INTERIOR and self.basepoint is None:
            raise ValueError("the interior flavor needs a basepoint")


# Mobius action

def det2(g):
    return g[0][0] * g[1][1] - g[0][1] * g[1][0]


def _check_unimodular(g):
    d = det2(g)
    if isinstance(d, Rational):
        ok = d == 1
    else:
        scale = max(abs(complex(e)) for row in g for e in row)
        ok = abs(complex(d) - 1) <= 1e-9 * max(1.0, scale * scale)
    if not ok:
        raise ValueError(f"matrix is not unimodular (det = {d})")


def _act_boundary(g, z):
    (a, b), (c, d) = g
    if z is INFINITY:
        return INFINITY if c == 0 else _div(a, c)
    den = c * z + d
    if den == 0:
        return INFINITY
    return _div(a * z + b, den)


def _act_point(g, p: HPoint) -> HPoint:
    (a, b), (c, d) = g
    z, h = p.horizontal, p.height
    czd = c * z + d
    h2 = h * h
    den = sq_abs(czd) + sq_abs(c) * h2
    num = (a * z + b) * _conj(czd) + a * _conj(c) * h2
    horizontal = _div(num, den)
    if isinstance(horizontal, complex) and not isinstance(z, complex) and horizontal.imag == 0:
        horizontal = horizontal.real
    return HPoint(horizontal, _div(h, den))


def _act_horoball(g, C: Horoball) -> Horoball:
    (a, b), (c, d) = g
    if C.base is INFINITY:
        if c == 0:
            return Horoball.at_infinity(float(C.height) * float(sq_abs(a)))
        # image diameter 1/(|c|^2 H)
        return Horoball(_div(a, c), math.log(float(sq_abs(c)) * float(C.height)))
    eta = C.base
    ced = c * eta + d
    if ced == 0:
        return Horoball.at_infinity(float(sq_abs(a * eta + b)) * math.exp(C.size))
    # diameter scales by 1/|c eta + d|^2
    return Horoball(_act_boundary(g, eta), C.size + math.log(float(sq_abs(ced))))


def mobius_apply(g, x):
    """Act by a determinant-one 2x2 matrix on a boundary point, HPoint, Horoball or GeodesicLine."""
    _check_unimodular(g)
    if isinstance(x, HPoint):
        return _act_point(g, x)
    if isinstance(x, Horoball):
        return _act_horoball(g, x)
    if isinstance(x, GeodesicLine):
        return GeodesicLine(_act_boundary(g, x.a), _act_boundary(g, x.b))
    return _act_boundary(g, x)


def mat_mul(g, h):
    return ((g[0][0] * h[0][0] + g[0][1] * h[1][0], g[0][0] * h[0][1] + g[0][1] * h[1][1]),
            (g[1][0] * h[0][0] + g[1][1] * h[1][0], g[1][0] * h[0][1] + g[1][1] * h[1][1]))


def mat_inv(g):
    (a, b), (c, d) = g
    return ((d, -b), (-c, a))


def to_vertical(a, b):
    """A determinant-one matrix sending a to 0 and b to INFINITY."""
    if b is INFINITY:
        return ((1, -a), (0, 1))
    if a is INFINITY:
        return ((0, -1), (1, -b))
    delta = a - b
    if isinstance(delta, complex):
        s = cmath.sqrt(delta)
        return ((1 / s, -a / s), (1 / s, -b / s))
    if delta > 0:
        s = math.sqrt(delta)
        return ((1 / s, -a / s), (1 / s, -b / s))
    # orientation kept real: (z - a)/(b - z)
    s = math.sqrt(-delta)
    return ((1 / s, -a / s), (-1 / s, b / s))


# Distances and Busemann functions

def hyp_dist(p: HPoint, q: HPoint) -> float:
    dx2 = sq_abs(p.horizontal - q.horizontal)
    dh = p.height - q.height
    num = float(dx2 + dh * dh)
    if num == 0:
        return 0.0
    return 2 * math.asinh(math.sqrt(num) / (2 * math.sqrt(float(p.height) * float(q.height))))


def dist_to_line(p: HPoint, L: GeodesicLine) -> float:
    q = _act_point(to_vertical(L.a, L.b), p)
    return math.asinh(math.sqrt(float(sq_abs(q.horizontal))) / float(q.height))


def busemann(C: Horoball, p: HPoint) -> float:
    """Busemann function of C, nonnegative exactly on C."""
    if C.base is INFINITY:
        return math.log(float(p.height) / float(C.height))
    d2 = float(sq_abs(p.horizontal - C.base) + p.height * p.height)
    return math.log(2 * C.radius * float(p.height) / d2)


def max_height(ray: VerticalRay, C: Horoball) -> float:
    """Supremum of busemann(C, .) along the full vertical geodesic through the ray."""
    if C.base is INFINITY:
        raise ValueError("max_height needs a horoball with a finite base")
    delta = abs(ray.foot - C.base)
    if delta == 0:
        raise NoMax("ray converges into the horoball")
    return -math.log(2 * float(delta)) - C.size


def geodesic_point(o: HPoint, xi, t: float) -> HPoint:
    """The point at distance t from o on the ray towards xi."""
    if xi is INFINITY:
        return HPoint(o.horizontal, o.height * math.exp(t))
    g = ((0, -1), (1, -xi))
    q = _act_point(g, o)
    return _act_point(((-xi, 1), (-1, 0)), HPoint(q.horizontal, q.height * math.exp(t)))


# Frames for rays and lines: a matrix sending the geodesic to the vertical axis,
# backward end to 0, forward end to INFINITY, plus the reference height of t = 0.

def _frame(geodesic):
    if isinstance(geodesic, VerticalRay):
        return ((0, -1), (1, -geodesic.foot)), 1.0 / geodesic.start_height, True
    if isinstance(geodesic, GeodesicRay):
        o, xi = geodesic.origin, geodesic.end
        if xi is INFINITY:
            back = o.horizontal
        else:
            w = _act_point(((0, -1), (1, -xi)), o).horizontal
            back = INFINITY if w == 0 else xi - 1 / w
        g = to_vertical(back, xi)
        return g, float(_act_point(g, o).height), True
    if isinstance(geodesic, GeodesicLine):
        return to_vertical(geodesic.a, geodesic.b), 1.0, False
    raise TypeError(f"unsupported geodesic {geodesic!r}")


def geodesic_frame(geodesic):
    """(matrix, reference height, is_ray) normalizing a ray or line to the vertical axis."""
    return _frame(geodesic)


def point_at_time(geodesic, t: float) -> HPoint:
    g, y0, _ = _frame(geodesic)
    return _act_point(_inverse_unimodular(g), HPoint(0, y0 * math.exp(t)))


def _inverse_unimodular(g):
    (a, b), (c, d) = g
    dt = det2(g)
    if isinstance(dt, Rational) and dt == 1:
        return ((d, -b), (-c, a))
    # real frames with det -1 never occur; normalize anyway
    s = cmath.sqrt(dt) if isinstance(dt, complex) else math.sqrt(dt)
    return ((d / s, -b / s), (-c / s, a / s))


def penetration_interval(geodesic, L: GeodesicLine, eps0: float):
    """(length, entry, exit) of the time the geodesic spends within eps0 of L.

    Misses and tangencies give (0.0, None, None).  Rays are clipped to t >= 0.
    """
    if not eps0 > 0:
        raise ValueError("eps0 must be positive")
    g, y0, is_ray = _frame(geodesic)
    a, b = _act_boundary(g, L.a), _act_boundary(g, L.b)
    for e in (a, b):
        if e is INFINITY or e == 0:
            raise Unbounded("geodesic shares an endpoint with the line")
    a, b = complex(a), complex(b)
    K2 = math.sinh(eps0) ** 2 * sq_abs(a - b)
    B = 2 * (a * b.conjugate()).real - K2
    C = sq_abs(a * b)
    disc = B * B - 4 * C
    if B >= 0 or disc <= 1e-12 * B * B:
        return 0.0, None, None
    q = (-B + math.sqrt(disc)) / 2
    y_hi, y_lo = q, C / q
    t_in = 0.5 * math.log(y_lo) - math.log(y0)
    t_out = 0.5 * math.log(y_hi) - math.log(y0)
    if is_ray:
        t_in = max(t_in, 0.0)
    if t_out <= t_in:
        return 0.0, None, None
    return t_out - t_in, t_in, t_out


def closest_approach(ray, p: HPoint):
    """(t_min, d_min) for t -> hyp_dist(ray(t), p) over the full geodesic carrying the ray."""
    g, y0, _ = _frame(ray)
    q = _act_point(g, p)
    w2 = float(sq_abs(q.horizontal))
    h = float(q.height)
    rho = math.sqrt(w2 + h * h)
    return math.log(rho / y0), math.asinh(math.sqrt(w2) / h)


# Visual metrics

def _gromov_at(o: HPoint, xi, eta, t: float) -> float:
    x = geodesic_point(o, xi, t)
    y = geodesic_point(o, eta, t)
    return (2 * t - hyp_dist(x, y)) / 2


def gromov_product(o: HPoint, xi, eta, cutoff=30.0, tol=1e-8, step=5.0, max_cutoff=400.0) -> float:
    """Gromov product (xi|eta)_o by its limit definition, pushing the cutoff until it settles."""
    t = cutoff
    prev = _gromov_at(o, xi, eta, t - step)
    while True:
        cur = _gromov_at(o, xi, eta, t)
        if abs(cur - prev) < tol:
            return cur
        t += step
        if t > max_cutoff:
            raise ConvergenceError(f"Gromov product did not settle by cutoff {max_cutoff}")
        prev = cur


def visual_dist_chordal(o: HPoint, xi, eta) -> float:
    """Closed-form candidate for e^{-(xi|eta)_o}; used only as a cross-check."""
    h = float(o.height)

    def spread(z):
        return math.sqrt(float(sq_abs(z - o.horizontal)) + h * h)

    if xi is INFINITY and eta is INFINITY:
        return 0.0
    if xi is INFINITY:
        return h / spread(eta)
    if eta is INFINITY:
        return h / spread(xi)
    return abs(complex(xi - eta)) * h / (spread(xi) * spread(eta))


def visual_dist(ctx: VisualContext, xi, eta, cutoff=30.0, tol=1e-8) -> float:
    if same_boundary_point(xi, eta):
        return 0.0
    if ctx.flavor is Flavor.HAMENSTADT_AT_INFINITY:
        if xi is INFINITY or eta is INFINITY:
            raise ValueError("the Hamenstadt metric is defined on finite points only")
        return float(abs(xi - eta))
    return math.exp(-gromov_product(ctx.basepoint, xi, eta, cutoff, tol))
