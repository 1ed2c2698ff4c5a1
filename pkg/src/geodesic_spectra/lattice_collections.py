"""Rings, quadratic surds and the three resonant collections (horoballs, lines, orbit points)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from itertools import product

import mpmath
import numpy as np

from .hyperbolic_core import (
    INFINITY, GeodesicLine, HPoint, VisualContext, Flavor, dist_to_line, hyp_dist,
    mobius_apply, visual_dist, sq_abs,
)

CLASS_NUMBER_ONE = (1, 2, 3, 7, 11, 19, 43, 67, 163)
EUCLIDEAN = (1, 2, 3, 7, 11)


class UnsupportedExact(ValueError):
    """Exact gcd requested in a ring where the Euclidean algorithm is not available."""


class SeparationViolation(AssertionError):
    def __init__(self, pair, ratio):
        super().__init__(f"separation violated by {pair} (ratio {ratio})")
        self.pair = pair
        self.ratio = ratio


# Rings of integers

@dataclass(frozen=True)
class Ring:
    """Rational integers (d is None) or the ring of integers of Q(sqrt(-d))."""

    d: int | None = None

    def __post_init__(self):
        if self.d is not None and self.d not in CLASS_NUMBER_ONE:
            raise ValueError(f"d must be one of {CLASS_NUMBER_ONE}")

    @property
    def is_integers(self) -> bool:
        return self.d is None

    @property
    def half(self) -> bool:
        return self.d is not None and self.d % 4 == 3

    @property
    def euclidean(self) -> bool:
        return self.d is None or self.d in EUCLIDEAN

    @property
    def omega(self) -> complex:
        if self.d is None:
            return 0j
        if self.half:
            return complex(0.5, math.sqrt(self.d) / 2)
        return complex(0.0, math.sqrt(self.d))

    @property
    def name(self) -> str:
        return "Z" if self.d is None else f"O{self.d}"

    def elem(self, a, b=0) -> "RingElement":
        if self.d is None:
            if b:
                raise ValueError("rational integers have no omega part")
        return RingElement(int(a), int(b), self.d)

    def zero(self):
        return self.elem(0)

    def one(self):
        return self.elem(1)

    def units(self) -> list:
        if self.d is None:
            return [self.elem(1), self.elem(-1)]
        if self.d == 1:
            return [self.elem(1), self.elem(-1), self.elem(0, 1), self.elem(0, -1)]
        if self.d == 3:
            # +-1, +-w, +-(w - 1)
            return [self.elem(1), self.elem(-1), self.elem(0, 1), self.elem(0, -1),
                    self.elem(-1, 1), self.elem(1, -1)]
        return [self.elem(1), self.elem(-1)]

    def coords(self, z) -> tuple:
        """Real coordinates (x, y) with z = x + y*omega."""
        z = complex(z)
        if self.d is None:
            return z.real, 0.0
        w = self.omega
        y = z.imag / w.imag
        return z.real - y * w.real, y

    def elements_in_disk(self, center, radius) -> list:
        """All ring elements e with |e - center| <= radius (padded against rounding; callers filter)."""
        out = []
        c = complex(center)
        radius = radius * (1 + 1e-9) + 1e-12
        if self.d is None:
            for a in range(math.ceil(c.real - radius), math.floor(c.real + radius) + 1):
                out.append(self.elem(a))
            return out
        w = self.omega
        ylo = math.ceil((c.imag - radius) / w.imag)
        yhi = math.floor((c.imag + radius) / w.imag)
        for y in range(ylo, yhi + 1):
            dy = y * w.imag - c.imag
            rem = radius * radius - dy * dy
            if rem < 0:
                continue
            span = math.sqrt(rem)
            shift = c.real - y * w.real
            for x in range(math.ceil(shift - span), math.floor(shift + span) + 1):
                out.append(self.elem(x, y))
        return out

    def nearest(self, z, k=4) -> list:
        """The k ring elements nearest to z, closest first (ties by coordinates)."""
        x, y = self.coords(z)
        fx, fy = math.floor(x), math.floor(y)
        cands = set()
        for dx in range(-1, 3):
            for dy in (range(-1, 3) if self.d is not None else (0,)):
                cands.add(self.elem(fx + dx, fy + dy))
        zc = complex(z)
        ranked = sorted(cands, key=lambda e: (abs(complex(e) - zc), e.a, e.b))
        return ranked[:k]


ZZ = Ring(None)
GAUSSIAN = Ring(1)


@dataclass(frozen=True)
class RingElement:
    """a + b*omega_d, or the plain integer a when d is None."""

    a: int
    b: int = 0
    d: int | None = None

    @property
    def ring(self) -> Ring:
        return Ring(self.d)

    def _coerce(self, other):
        if isinstance(other, RingElement):
            if other.d != self.d:
                raise ValueError("elements of different rings")
            return other
        if isinstance(other, int):
            return RingElement(other, 0, self.d)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RingElement(self.a + o.a, self.b + o.b, self.d)

    __radd__ = __add__

    def __neg__(self):
        return RingElement(-self.a, -self.b, self.d)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return RingElement(self.a - o.a, self.b - o.b, self.d)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b, c, e = self.a, self.b, o.a, o.b
        if self.d is None:
            return RingElement(a * c, 0, None)
        if self.d % 4 == 3:
            m = (1 + self.d) // 4
            return RingElement(a * c - m * b * e, a * e + b * c + b * e, self.d)
        return RingElement(a * c - self.d * b * e, a * e + b * c, self.d)

    __rmul__ = __mul__

    def norm(self) -> int:
        a, b = self.a, self.b
        if self.d is None:
            return a * a
        if self.d % 4 == 3:
            return a * a + a * b + ((1 + self.d) // 4) * b * b
        return a * a + self.d * b * b

    def conj(self):
        if self.d is None:
            return self
        if self.d % 4 == 3:
            return RingElement(self.a + self.b, -self.b, self.d)
        return RingElement(self.a, -self.b, self.d)

    def __complex__(self):
        return self.a + self.b * Ring(self.d).omega

    def __bool__(self):
        return bool(self.a or self.b)

    def is_unit(self) -> bool:
        return self.norm() == 1

    def exact_div(self, other):
        """self / other when it lies in the ring, else None."""
        o = self._coerce(other)
        n = o.norm()
        if n == 0:
            raise ZeroDivisionError
        t = self * o.conj()
        if t.a % n or t.b % n:
            return None
        return RingElement(t.a // n, t.b // n, self.d)

    def __str__(self):
        if self.d is None or self.b == 0:
            return str(self.a)
        return f"{self.a}{'+' if self.b >= 0 else '-'}{abs(self.b)}*w"


def _quotient_coords(x: RingElement, y: RingElement):
    n = y.norm()
    t = x * y.conj()
    return Fraction(t.a, n), Fraction(t.b, n)


def nearest_quotient(x: RingElement, y: RingElement) -> RingElement:
    """A ring element q minimizing norm(x - q*y), exact."""
    fx, fy = _quotient_coords(x, y)
    best = None
    for dx, dy in product((0, 1), (0, 1) if x.d is not None else (0,)):
        q = RingElement(math.floor(fx) + dx, math.floor(fy) + dy, x.d)
        r = (x - q * y).norm()
        if best is None or r < best[0]:
            best = (r, q)
    return best[1]


def canonical_associate(x: RingElement) -> RingElement:
    if not x:
        return x
    return max((u * x for u in x.ring.units()), key=lambda e: (e.a, e.b))


def ring_gcd(x: RingElement, y: RingElement) -> RingElement:
    if x.d is not None and x.d not in EUCLIDEAN:
        raise UnsupportedExact(f"no Euclidean algorithm in O_{x.d}")
    while y:
        x, y = y, x - nearest_quotient(x, y) * y
    return canonical_associate(x)


def _as_elem(ring: Ring, x) -> RingElement:
    if isinstance(x, RingElement):
        return x
    if isinstance(x, tuple):
        return ring.elem(*x)
    return ring.elem(x)


def ring_arith(ring: Ring, x, y) -> dict:
    """Sum, product, norms, gcd (None when unsupported) and the 4 elements nearest x/y."""
    x, y = _as_elem(ring, x), _as_elem(ring, y)
    try:
        g = ring_gcd(x, y)
    except UnsupportedExact:
        g = None
    out = {"sum": x + y, "product": x * y, "norm": (x.norm(), y.norm()), "gcd": g}
    if y:
        out["nearest"] = ring.nearest(complex(x) / complex(y))
    return out


def coprime(p: RingElement, q: RingElement) -> tuple:
    """(is_coprime, validated).  Non-Euclidean rings use a common-divisor scan by norm."""
    if p.d is None:
        return math.gcd(p.a, q.a) == 1, True
    if p.d in EUCLIDEAN:
        return ring_gcd(p, q).is_unit(), True
    # heuristic: look for a common divisor of small norm dividing both norms
    g = math.gcd(p.norm(), q.norm())
    if g == 1:
        return True, False
    bound = math.isqrt(g) + 1
    for e in q.ring.elements_in_disk(0, math.sqrt(g)):
        n = e.norm()
        if n <= 1 or g % n:
            continue
        if p.exact_div(e) is not None and q.exact_div(e) is not None:
            return False, False
    del bound
    return True, False


# Exact real quadratic arithmetic

def squarefree_split(n: int) -> tuple:
    """n = f^2 * core with core square-free."""
    f, core, k = 1, 1, 2
    m = n
    while k * k <= m:
        while m % (k * k) == 0:
            m //= k * k
            f *= k
        k += 1
    core = m
    return f, core


@dataclass(frozen=True)
class QuadNumber:
    """a + b*sqrt(D) with rational a, b and square-free D > 1."""

    a: Fraction
    b: Fraction
    D: int

    @classmethod
    def rational(cls, a, D):
        return cls(Fraction(a), Fraction(0), D)

    def _lift(self, other):
        if isinstance(other, QuadNumber):
            if other.D != self.D and other.b != 0 and self.b != 0:
                raise ValueError("different quadratic fields")
            return other
        return QuadNumber(Fraction(other), Fraction(0), self.D)

    def __add__(self, other):
        o = self._lift(other)
        D = self.D if self.b else o.D
        return QuadNumber(self.a + o.a, self.b + o.b, D)

    __radd__ = __add__

    def __neg__(self):
        return QuadNumber(-self.a, -self.b, self.D)

    def __sub__(self, other):
        return self + (-self._lift(other))

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._lift(other)
        D = self.D if self.b else o.D
        return QuadNumber(self.a * o.a + self.b * o.b * D, self.a * o.b + self.b * o.a, D)

    __rmul__ = __mul__

    def conjugate(self):
        return QuadNumber(self.a, -self.b, self.D)

    def field_norm(self) -> Fraction:
        return self.a * self.a - self.b * self.b * self.D

    def inverse(self):
        n = self.field_norm()
        if n == 0:
            raise ZeroDivisionError
        c = self.conjugate()
        return QuadNumber(c.a / n, c.b / n, self.D)

    def __truediv__(self, other):
        return self * self._lift(other).inverse()

    def __rtruediv__(self, other):
        return self._lift(other) * self.inverse()

    def sign(self) -> int:
        a, b = self.a, self.b
        sa = (a > 0) - (a < 0)
        sb = (b > 0) - (b < 0)
        if sb == 0:
            return sa
        if sa == 0 or sa == sb:
            return sb
        # opposite signs: compare a^2 with b^2 D
        lhs, rhs = a * a, b * b * self.D
        if lhs == rhs:
            return 0
        return sa if lhs > rhs else sb

    def __eq__(self, other):
        if not isinstance(other, (QuadNumber, int, Fraction)):
            return NotImplemented
        return (self - other).sign() == 0

    def __hash__(self):
        return hash((self.a, self.b if self.b else 0, self.D if self.b else 0))

    def __lt__(self, other):
        return (self - other).sign() < 0

    def __le__(self, other):
        return (self - other).sign() <= 0

    def __gt__(self, other):
        return (self - other).sign() > 0

    def __ge__(self, other):
        return (self - other).sign() >= 0

    def to_mpf(self, dps=50):
        with mpmath.workdps(dps):
            return (mpmath.mpf(self.a.numerator) / self.a.denominator
                    + mpmath.mpf(self.b.numerator) / self.b.denominator * mpmath.sqrt(self.D))

    def __float__(self):
        return float(self.to_mpf())

    def __str__(self):
        return f"{self.a}+{self.b}*sqrt({self.D})"


@dataclass(frozen=True)
class QuadraticSurd:
    """x = (P + sqrt(D))/Q in canonical form with Q | (D - P^2)."""

    P: int
    Q: int
    D: int

    def __post_init__(self):
        if self.Q == 0:
            raise ValueError("Q must be nonzero")
        if self.D <= 0 or math.isqrt(self.D) ** 2 == self.D:
            raise ValueError("D must be a positive non-square")
        if (self.D - self.P * self.P) % self.Q:
            raise ValueError("Q must divide D - P^2; use QuadraticSurd.make")

    @classmethod
    def make(cls, P: int, Q: int, D: int) -> "QuadraticSurd":
        if Q == 0:
            raise ValueError("Q must be nonzero")
        if (D - P * P) % Q:
            P, Q, D = P * abs(Q), Q * abs(Q), D * Q * Q
        return cls._reduce(P, Q, D)

    @classmethod
    def _reduce(cls, P, Q, D):
        R = (D - P * P) // Q
        g = math.gcd(math.gcd(abs(P), abs(Q)), abs(R))
        best = 1
        for k in range(2, g + 1):
            if g % k == 0 and D % (k * k) == 0:
                Pk, Qk, Dk = P // k, Q // k, D // (k * k)
                if (Dk - Pk * Pk) % Qk == 0:
                    best = k
        return cls(P // best, Q // best, D // (best * best))

    @classmethod
    def from_quad(cls, x: QuadNumber) -> "QuadraticSurd":
        if x.b == 0:
            raise ValueError("rational number is not a surd")
        k = math.lcm(x.a.denominator, x.b.denominator)
        coef = x.b * k
        D = int(coef * coef) * x.D
        # negative b: (-a k + |b| k sqrt(D0)) / (-k)
        sgn = 1 if coef > 0 else -1
        return cls.make(int(sgn * x.a * k), sgn * k, D)

    def quad(self) -> QuadNumber:
        f, core = squarefree_split(self.D)
        return QuadNumber(Fraction(self.P, self.Q), Fraction(f, self.Q), core)

    def conjugate(self) -> "QuadraticSurd":
        return QuadraticSurd.make(-self.P, -self.Q, self.D)

    def floor(self) -> int:
        r = math.isqrt(self.D)
        if self.Q > 0:
            return (self.P + r) // self.Q
        return (-self.P - r - 1) // (-self.Q)

    def to_mpf(self, dps=50):
        with mpmath.workdps(dps):
            return (self.P + mpmath.sqrt(self.D)) / self.Q

    def __float__(self):
        return float(self.to_mpf())

    def __str__(self):
        return f"({self.P}+sqrt({self.D}))/{self.Q}"

    def key(self) -> tuple:
        return (self.P, self.Q, self.D)


NAMED_SURDS = {
    "golden": QuadraticSurd(1, 2, 5),
    "sqrt2": QuadraticSurd(0, 1, 2),
    "silver": QuadraticSurd(1, 1, 2),
    "sqrt3": QuadraticSurd(0, 1, 3),
    "sqrt5": QuadraticSurd(0, 1, 5),
    "sqrt7": QuadraticSurd(0, 1, 7),
}


def parse_surd(text: str) -> QuadraticSurd:
    text = text.strip()
    if text in NAMED_SURDS:
        return NAMED_SURDS[text]
    parts = [int(p) for p in text.split(",")]
    if len(parts) != 3:
        raise ValueError(f"surd must be a name or P,Q,D: {text!r}")
    return QuadraticSurd.make(*parts)


def surd_mobius(g, x: QuadraticSurd) -> QuadraticSurd:
    """Exact integer Mobius action on a surd."""
    (a, b), (c, d) = g
    v = x.quad()
    return QuadraticSurd.from_quad((v * a + b) / (v * c + d))


# Resonant collections

class FamilyKind(Enum):
    CUSP = "cusp"
    GEODESIC = "geodesic"
    POINT_ORBIT = "point_orbit"


@dataclass(frozen=True)
class ResonantPoint:
    location: object
    size: float
    provenance: object = None


def _loc_key(loc):
    if loc is INFINITY:
        return (1, 0.0, 0.0)
    if isinstance(loc, GeodesicLine):
        return (2, float(loc.a), float(loc.b))
    z = complex(loc)
    return (0, z.real, z.imag)


@dataclass
class ResonantFamily:
    kind: FamilyKind
    ring: Ring
    points: list
    s_max: float
    window: tuple = (0, 1)
    validated: bool = True
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        self.points = sorted(self.points, key=lambda r: (r.size, _loc_key(r.location)))
        self._sizes = np.array([r.size for r in self.points], dtype=float)

    def __len__(self):
        return len(self.points)

    def sizes(self):
        return self._sizes

    def resonant(self, t: float) -> list:
        """R(t): members with size <= t."""
        k = int(np.searchsorted(self._sizes, t + 1e-12, side="right"))
        return self.points[:k]

    def resonant_window(self, s: float, c: float) -> list:
        """R(s, c): members with size in (s - c, s]."""
        lo = int(np.searchsorted(self._sizes, s - c + 1e-12, side="right"))
        hi = int(np.searchsorted(self._sizes, s + 1e-12, side="right"))
        return self.points[lo:hi]

    def near(self, center, radius: float, s_lo: float, s_hi: float) -> list:
        """Members with size in (s_lo, s_hi] within Euclidean distance radius of center.

        CUSP families answer through the lattice search, so the query is complete for
        any location and size; other kinds filter the cached enumeration.
        """
        if self.kind is FamilyKind.CUSP:
            return search_fractions(self.ring, center, radius, s_lo, s_hi)
        if s_hi > self.s_max + 1e-9:
            raise ValueError("query beyond the enumerated horizon")
        c = complex(center)
        out = []
        for r in self.points:
            if s_lo < r.size <= s_hi and r.location is not INFINITY and abs(complex(r.location) - c) <= radius:
                out.append(r)
        return out


def _norm_cap(s: float) -> int:
    if s < 0:
        return 0
    return int(math.floor(math.exp(s) * (1 + 1e-12)))


def ford_location(p: RingElement, q: RingElement):
    """Exact location p/q: a Fraction over Z, else (x, y) Fractions in the (1, omega) basis."""
    if p.d is None:
        return Fraction(p.a, q.a)
    return _quotient_coords(p, q)


def location_value(ring: Ring, loc):
    if ring.d is None:
        return loc
    x, y = loc
    return float(x) + float(y) * ring.omega


def location_string(ring: Ring, p: RingElement, q: RingElement) -> str:
    if ring.d is None:
        f = Fraction(p.a, q.a)
        return f"{f.numerator}/{f.denominator}"
    x, y = _quotient_coords(p, q)
    den = math.lcm(x.denominator, y.denominator)
    return f"({int(x * den)}+{int(y * den)}*w)/{den}"


def _associate_classes(ring: Ring, nmax: int) -> list:
    """Denominators up to units with 1 <= norm <= nmax."""
    seen, out = set(), []
    for q in ring.elements_in_disk(0, math.sqrt(nmax)):
        n = q.norm()
        if n == 0 or n > nmax:
            continue
        cq = canonical_associate(q)
        if cq not in seen:
            seen.add(cq)
            out.append(cq)
    return sorted(out, key=lambda e: (e.norm(), e.a, e.b))


def enumerate_ford(ring: Ring, window=None, s_max: float = 0.0, closed: bool = False) -> ResonantFamily:
    """All coprime p/q in the window with s = log norm(q) <= s_max, by a denominator scan."""
    nmax = _norm_cap(s_max)
    pts = []
    validated = True
    if ring.d is None:
        lo, hi = window if window is not None else (0, 1)
        lo, hi = Fraction(lo), Fraction(hi)
        q = 1
        while q * q <= nmax:
            for p in range(math.ceil(lo * q), math.floor(hi * q) + 1):
                f = Fraction(p, q)
                if f < lo or f > hi or (f == hi and not closed):
                    continue
                if math.gcd(p, q) == 1:
                    pts.append(ResonantPoint(f, math.log(q * q), (p, q)))
            q += 1
        return ResonantFamily(FamilyKind.CUSP, ring, pts, s_max, (lo, hi), True, {"closed": closed})
    for q in _associate_classes(ring, nmax):
        n = q.norm()
        # p ranges over the image of the unit parallelogram under multiplication by q
        corners = [complex(q) * z for z in (0, 1, ring.omega, 1 + ring.omega)]
        cs = [ring.coords(z) for z in corners]
        xs = [c[0] for c in cs]
        ys = [c[1] for c in cs]
        for x in range(math.floor(min(xs)) - 1, math.ceil(max(xs)) + 2):
            for y in range(math.floor(min(ys)) - 1, math.ceil(max(ys)) + 2):
                p = ring.elem(x, y)
                t = p * q.conj()
                ok_x = 0 <= t.a <= n if closed else 0 <= t.a < n
                ok_y = 0 <= t.b <= n if closed else 0 <= t.b < n
                if not (ok_x and ok_y):
                    continue
                cop, val = coprime(p, q)
                validated = validated and val
                if cop:
                    loc = ford_location(p, q)
                    pts.append(ResonantPoint(location_value(ring, loc), math.log(n), (p, q)))
    return ResonantFamily(FamilyKind.CUSP, ring, pts, s_max, ("parallelogram",), validated, {"closed": closed})


# Lattice search for fractions near a point

def _mp(x):
    if isinstance(x, Fraction):
        return mpmath.mpf(x.numerator) / x.denominator
    if isinstance(x, complex):
        return mpmath.mpc(x.real, x.imag)
    if isinstance(x, (mpmath.mpf, mpmath.mpc)):
        return x
    return mpmath.mpf(x)


def _ring_mp(ring: Ring, e: RingElement):
    if ring.d is None:
        return mpmath.mpf(e.a)
    w = mpmath.mpc(mpmath.mpf(1) / 2, mpmath.sqrt(ring.d) / 2) if ring.half else mpmath.mpc(0, mpmath.sqrt(ring.d))
    return e.a + e.b * w


def _normalize_pair(p: RingElement, q: RingElement):
    """Scale (p, q) by the unit that makes q its canonical associate."""
    for u in q.ring.units():
        if u * q == canonical_associate(q):
            return u * p, u * q
    return p, q


def _nearest_mp(ring: Ring, z) -> RingElement:
    return ring.nearest(complex(z), 1)[0]


def search_fractions(ring: Ring, center, radius: float, s_lo: float, s_hi: float) -> list:
    """All coprime p/q with log norm(q) in (s_lo, s_hi] and |p/q - center| <= radius.

    Gauss-reduces the rank-two lattice {(q, q*center - p)} over the ring and
    enumerates the ellipsoid that contains every solution; complete for any center.
    """
    nhi = _norm_cap(s_hi)
    if nhi < 1 or radius <= 0:
        return []
    nlo = math.exp(s_lo) if s_lo > -700 else 0.0
    dps = int(20 + max(0.0, s_hi) / math.log(10) + max(0.0, -math.log10(radius)))
    with mpmath.workdps(dps):
        xi = _mp(center)
        if ring.d is None and isinstance(xi, mpmath.mpc):
            xi = xi.real
        A = mpmath.mpf(1) / nhi
        B = 1 / (mpmath.mpf(radius) ** 2 * nhi)
        one, zero = ring.one(), ring.zero()

        def emb(q, p):
            return _ring_mp(ring, q), _ring_mp(ring, q) * xi - _ring_mp(ring, p)

        def herm(x, y):
            return A * x[0] * mpmath.conj(y[0]) + B * x[1] * mpmath.conj(y[1])

        b1, b2 = (one, zero), (zero, one)
        e1, e2 = emb(*b1), emb(*b2)
        H1, H2 = mpmath.re(herm(e1, e1)), mpmath.re(herm(e2, e2))
        for _ in range(10000):
            if H1 > H2:
                b1, b2, e1, e2, H1, H2 = b2, b1, e2, e1, H2, H1
            mu = herm(e2, e1) / H1
            m = _nearest_mp(ring, mu)
            if not m:
                break
            b2 = (b2[0] - m * b1[0], b2[1] - m * b1[1])
            e2 = emb(*b2)
            H2 = mpmath.re(herm(e2, e2))
        mu_mp = herm(e2, e1) / H1
        mu = complex(mu_mp)
        H1f = float(H1)
        # Gram-Schmidt in full precision: the float difference cancels for deep queries
        H2s = float(H2 - abs(mu_mp) ** 2 * H1)
        bound = 2.0 * (1 + 1e-9)
        found = {}
        xi_f = complex(xi) if isinstance(xi, mpmath.mpc) else float(xi)
        scale = max(1.0, abs(xi_f))
        # float test is decisive when the radius is far above double rounding
        use_float = radius > 1e-6 * scale
        slack = 1e-11 * scale
        omega = ring.omega
        for c in ring.elements_in_disk(0, math.sqrt(max(bound / H2s, 0.0))):
            rest = bound - H2s * abs(complex(c)) ** 2
            if rest < 0:
                continue
            for a in ring.elements_in_disk(-mu * complex(c), math.sqrt(rest / H1f)):
                q = a * b1[0] + c * b2[0]
                p = a * b1[1] + c * b2[1]
                n = q.norm()
                if n == 0 or n > nhi or n <= nlo * (1 + 1e-12):
                    continue
                if use_float:
                    gap = abs((p.a + p.b * omega) / (q.a + q.b * omega) - xi_f)
                    if gap > radius + slack:
                        continue
                    if gap >= radius - slack and abs(_ring_mp(ring, p) / _ring_mp(ring, q) - xi) > radius:
                        continue
                elif abs(_ring_mp(ring, p) / _ring_mp(ring, q) - xi) > radius:
                    continue
                p, q = _normalize_pair(p, q)
                loc = ford_location(p, q)
                if loc in found:
                    continue
                cop, _ = coprime(p, q)
                if not cop:
                    continue
                found[loc] = ResonantPoint(location_value(ring, loc), math.log(n), (p, q))
    return sorted(found.values(), key=lambda r: (r.size, _loc_key(r.location)))


# Quadratic-irrational lines

PSL2Z_GENERATORS = (((1, 1), (0, 1)), ((1, -1), (0, 1)), ((0, -1), (1, 0)))


def _pair_key(beta: QuadraticSurd):
    a, b = beta, beta.conjugate()
    return min(a.key(), b.key(), key=lambda k: (float(QuadraticSurd(*k)), k))


def enumerate_quadratic_orbit(ring: Ring, beta0: QuadraticSurd, s_max: float,
                              basepoint: HPoint = HPoint(0, 1.0), generators=PSL2Z_GENERATORS,
                              margin: float = 4.0) -> ResonantFamily:
    """Breadth-first closure of the line (beta0, beta0^sigma) under the generators."""
    if not ring.is_integers:
        raise ValueError("quadratic-surd orbits are implemented over the rational integers")
    start = beta0
    seen = {_pair_key(start): start}
    frontier = [start]
    kept = []
    while frontier:
        nxt = []
        for beta in frontier:
            line = GeodesicLine(float(beta), float(beta.conjugate()))
            dist = dist_to_line(basepoint, line)
            if dist <= s_max:
                kept.append(ResonantPoint(line, dist, (beta, beta.conjugate())))
            if dist > s_max + margin:
                continue
            for g in generators:
                img = surd_mobius(g, beta)
                k = _pair_key(img)
                if k not in seen:
                    seen[k] = img
                    nxt.append(img)
        frontier = nxt
    fam = ResonantFamily(FamilyKind.GEODESIC, ring, kept, s_max, ("all",), True,
                         {"beta0": beta0, "basepoint": basepoint})
    return fam


def line_boundary_points(line: GeodesicLine):
    return [line.a, line.b]


# Orbit points

def _point_key(p: HPoint, digits=9):
    z = complex(p.horizontal)
    return (round(z.real, digits), round(z.imag, digits), round(math.log(float(p.height)), digits))


def ray_endpoint(o: HPoint, y: HPoint):
    """Forward boundary endpoint of the geodesic ray from o through y."""
    h = float(o.height)
    s = math.sqrt(h)
    g = ((1 / s, -o.horizontal / s), (0, s))
    yp = mobius_apply(g, y)
    w = complex(yp.horizontal)
    k = float(yp.height)
    if abs(w) < 1e-300:
        end = INFINITY if k > 1 else 0.0
    else:
        xc = (abs(w) ** 2 + k * k - 1) / (2 * abs(w))
        end = w / abs(w) * (xc + math.sqrt(xc * xc + 1))
        if not isinstance(o.horizontal, complex) and not isinstance(y.horizontal, complex):
            end = end.real
    if end is INFINITY:
        return INFINITY
    return mobius_apply(((s, o.horizontal / s), (0, 1 / s)), end)


def orbit_ball(generators, x0: HPoint, center: HPoint, radius: float, margin: float = 4.0) -> list:
    """Orbit points of x0 within hyperbolic distance radius of center, by pruned BFS.

    Nodes farther than radius + margin from center are kept out of the frontier.
    """
    seen = {_point_key(x0)}
    frontier = [x0]
    kept = []
    while frontier:
        nxt = []
        for y in frontier:
            dist = hyp_dist(center, y)
            if dist <= radius:
                kept.append(y)
            if dist > radius + margin:
                continue
            for g in generators:
                img = mobius_apply(g, y)
                k = _point_key(img)
                if k not in seen:
                    seen.add(k)
                    nxt.append(img)
        frontier = nxt
    return kept


def enumerate_point_orbit(generators, x0: HPoint, s_max: float, basepoint: HPoint = HPoint(0, 1.0),
                          margin: float = 4.0, ring: Ring = ZZ) -> ResonantFamily:
    """Breadth-first orbit of x0 with d(basepoint, y) <= s_max; records the empirical separation."""
    if hyp_dist(basepoint, x0) < 1e-12:
        raise ValueError("the orbit point must be disjoint from the basepoint")
    pts = orbit_ball(generators, x0, basepoint, s_max, margin)
    return point_family(pts, basepoint, s_max, ring, {"x0": x0, "generators": generators})


def point_family(pts, basepoint: HPoint, s_max: float, ring: Ring = ZZ, params=None) -> ResonantFamily:
    kept = [ResonantPoint(ray_endpoint(basepoint, y), hyp_dist(basepoint, y), y) for y in pts]
    fam = ResonantFamily(FamilyKind.POINT_ORBIT, ring, kept, s_max, ("all",), True,
                         dict(params or {}, basepoint=basepoint))
    fam.params["tau0"] = min_pairwise_distance(pts)
    return fam


def min_pairwise_distance(pts) -> float:
    if len(pts) < 2:
        return math.inf
    x = np.array([complex(p.horizontal) for p in pts])
    h = np.array([float(p.height) for p in pts])
    best = math.inf
    for i in range(len(pts) - 1):
        dx2 = np.abs(x[i + 1:] - x[i]) ** 2 + (h[i + 1:] - h[i]) ** 2
        arg = np.sqrt(dx2) / (2 * np.sqrt(h[i + 1:] * h[i]))
        best = min(best, float(np.min(2 * np.arcsinh(arg))))
    return best


# Separation and counting checks

@dataclass
class SeparationReport:
    min_ratio: float
    worst_pair: tuple | None
    pairs_checked: int
    halved_bound_failures: int
    halved_bound_example: tuple | None


def separation_check(family: ResonantFamily, ctx: VisualContext | None = None) -> SeparationReport:
    """Check d(loc, loc') >= e^{-max(s, s')} on all pairs; raise SeparationViolation if not.

    Also counts pairs failing the doubled bound 2 e^{-max(s, s')}.
    """
    pts = family.points
    if len(pts) < 2:
        return SeparationReport(math.inf, None, 0, 0, None)
    if family.kind is FamilyKind.CUSP and family.ring.is_integers:
        return _separation_exact_z(pts)
    if family.kind is FamilyKind.CUSP:
        return _separation_float(pts, lambda r: [complex(r.location)], None)
    if family.kind is FamilyKind.GEODESIC:
        ctx = ctx or VisualContext(Flavor.INTERIOR, family.params.get("basepoint", HPoint(0, 1.0)))
        return _separation_float(pts, lambda r: [r.location.a, r.location.b], ctx)
    raise ValueError("separation_check needs a CUSP or GEODESIC family")


def _separation_exact_z(pts) -> SeparationReport:
    p = np.array([r.provenance[0] for r in pts], dtype=np.int64)
    q = np.array([r.provenance[1] for r in pts], dtype=np.int64)
    best = None
    halved_fail, halved_ex, checked = 0, None, 0
    for i in range(len(pts) - 1):
        pj, qj = p[i + 1:], q[i + 1:]
        cross = np.abs(p[i] * qj - pj * q[i])
        m2 = np.maximum(qj, q[i]) ** 2
        num = cross * m2                      # ratio = num / den exactly
        den = q[i] * qj
        checked += len(pj)
        bad = num < den
        if bad.any():
            j = int(np.argmax(bad)) + i + 1
            raise SeparationViolation((pts[i].location, pts[j].location), Fraction(int(num[j - i - 1]), int(den[j - i - 1])))
        halved = num < 2 * den
        if halved.any():
            halved_fail += int(halved.sum())
            if halved_ex is None:
                j = int(np.argmax(halved)) + i + 1
                halved_ex = (pts[i].location, pts[j].location)
        k = int(np.argmin(num.astype(float) / den))
        cand = Fraction(int(num[k]), int(den[k]))
        if best is None or cand < best[0]:
            best = (cand, (pts[i].location, pts[i + 1 + k].location))
    return SeparationReport(best[0], best[1], checked, halved_fail, halved_ex)


def _separation_float(pts, boundary, ctx) -> SeparationReport:
    best = (math.inf, None)
    halved_fail, halved_ex, checked = 0, None, 0
    for i in range(len(pts)):
        for j in range(i + 1, len(pts)):
            checked += 1
            if ctx is None:
                dist = min(abs(a - b) for a in boundary(pts[i]) for b in boundary(pts[j]))
            else:
                dist = min(visual_dist(ctx, a, b) for a in boundary(pts[i]) for b in boundary(pts[j]))
            bound = math.exp(-max(pts[i].size, pts[j].size))
            ratio = dist / bound
            if ratio < 1 - 1e-9:
                raise SeparationViolation((pts[i].location, pts[j].location), ratio)
            if ratio < 2:
                halved_fail += 1
                halved_ex = halved_ex or (pts[i].location, pts[j].location)
            if ratio < best[0]:
                best = (ratio, (pts[i].location, pts[j].location))
    return SeparationReport(best[0], best[1], checked, halved_fail, halved_ex)


def counting_check(family: ResonantFamily, samples) -> tuple:
    """Max over samples (eta, t, c) of |B(eta, 2e^{-t}) n R(t, c)| / c, with the raw counts."""
    counts = []
    best = 0.0
    for eta, t, c in samples:
        found = family.near(eta, 2 * math.exp(-t), t - c, t)
        counts.append(len(found))
        best = max(best, len(found) / c)
    return best, counts
