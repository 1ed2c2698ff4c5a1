"""Approximation constants, continued fractions and penetration sequences of geodesic rays."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction
from numbers import Rational

import mpmath
import numpy as np

from .hyperbolic_core import (
    GeodesicLine, GeodesicRay, HPoint, Unbounded, VerticalRay, closest_approach,
    dist_to_line, geodesic_frame, hyp_dist, mat_inv, mobius_apply, penetration_interval, point_at_time, to_vertical,
    _act_point,
)
from .lattice_collections import (
    ZZ, FamilyKind, PSL2Z_GENERATORS, QuadNumber, QuadraticSurd, ResonantFamily, Ring,
    orbit_ball, point_family, search_fractions, squarefree_split, _ring_mp,
)


class ApproxStatus(Enum):
    EXACT = "exact"
    HEURISTIC = "heuristic"


@dataclass
class ApproxBracket:
    lower: float
    upper: float
    status: ApproxStatus
    exact: object = None
    diagnostics: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError("bracket lower end exceeds upper end")
        if self.status is ApproxStatus.EXACT and self.lower != self.upper:
            raise ValueError("exact brackets must be degenerate")


class DivergesIntoObstacle(ValueError):
    """The ray ends at a boundary point of the obstacle family."""


# Continued fractions

@dataclass(frozen=True)
class ContinuedFraction:
    """[a0; a1, ...]: head holds the non-repeating terms (a0 first), period the repeating block."""

    head: tuple
    period: tuple = ()
    exact: bool = True

    def quotient(self, n: int) -> int:
        if n < len(self.head):
            return self.head[n]
        if not self.period:
            raise IndexError("terminating expansion")
        return self.period[(n - len(self.head)) % len(self.period)]

    def terms(self, count: int) -> list:
        if not self.period:
            return list(self.head[:count])
        return [self.quotient(n) for n in range(count)]

    def convergents(self, count: int) -> list:
        """First count convergents (p_n, q_n)."""
        out = []
        p0, q0, p1, q1 = 1, 0, 0, 1  # p_{-1}, q_{-1}, p_{-2}, q_{-2}
        for a in self.terms(count):
            p, q = a * p0 + p1, a * q0 + q1
            out.append((p, q))
            p1, q1, p0, q0 = p0, q0, p, q
        return out

    def __str__(self):
        parts = [",".join(map(str, self.head))]
        if self.period:
            parts.append("(" + ",".join(map(str, self.period)) + ")")
        return "[" + " ".join(p for p in parts if p) + "]"


def _surd_orbit(x: QuadraticSurd, limit=100000):
    """Complete quotients x_0, x_1, ... until the (P, Q) state repeats; returns (states, start)."""
    seen = {}
    states = []
    cur = x
    while cur.key() not in seen:
        seen[cur.key()] = len(states)
        states.append(cur)
        a = cur.floor()
        P = a * cur.Q - cur.P
        Q = (cur.D - P * P) // cur.Q
        cur = QuadraticSurd(P, Q, cur.D)
        if len(states) > limit:
            raise RuntimeError("period detection exceeded the state limit")
    return states, seen[cur.key()]


def cf_expand(x, max_terms: int = 64) -> ContinuedFraction:
    """Continued fraction of a rational (terminating), a surd (periodic) or a real (heuristic)."""
    if max_terms < 1:
        raise ValueError("max_terms must be at least 1")
    if isinstance(x, QuadraticSurd):
        states, start = _surd_orbit(x)
        quotients = [s.floor() for s in states]
        return ContinuedFraction(tuple(quotients[:start]), tuple(quotients[start:]), True)
    if isinstance(x, Rational):
        f = Fraction(x)
        terms = []
        num, den = f.numerator, f.denominator
        while den and len(terms) < max_terms:
            a = num // den
            terms.append(a)
            num, den = den, num - a * den
        return ContinuedFraction(tuple(terms), (), den == 0)
    # floating input: stop once the convergent denominators exhaust the working precision
    with mpmath.workdps(max(30, mpmath.mp.dps)):
        v = mpmath.mpf(x)
        bits = mpmath.mp.prec if isinstance(x, mpmath.mpf) else 53
        terms, q0, q1 = [], 1, 0
        while len(terms) < max_terms:
            a = int(mpmath.floor(v))
            terms.append(a)
            q0, q1 = a * q0 + q1, q0
            frac = v - a
            if frac == 0 or 2 * math.log2(max(q0, 1)) > bits - 8:
                break
            v = 1 / frac
    return ContinuedFraction(tuple(terms), (), False)


def cf_value(head, period=()) -> QuadNumber | Fraction:
    """Exact value of [head; (period)]."""
    if period:
        tail = periodic_value(period)
    else:
        tail = None
    for a in reversed(head):
        tail = Fraction(a) if tail is None else a + 1 / tail
    return tail


def _block_matrix(block):
    m = ((1, 0), (0, 1))
    for a in block:
        (p, q), (r, s) = m
        m = ((p * a + q, p), (r * a + s, r))
    return m


def periodic_value(block) -> QuadNumber:
    """The purely periodic continued fraction [(block)] as an exact quadratic number."""
    (m00, m01), (m10, m11) = _block_matrix(block)
    disc = (m11 - m00) ** 2 + 4 * m10 * m01
    f, core = squarefree_split(disc)
    return QuadNumber(Fraction(m00 - m11, 2 * m10), Fraction(f, 2 * m10), core)


def surd_from_cf(head, period) -> QuadraticSurd:
    return QuadraticSurd.from_quad(cf_value(head, period))


def c_plus(x: QuadraticSurd) -> QuadNumber:
    """liminf q^2 |x - p/q| as an exact quadratic number."""
    if not isinstance(x, QuadraticSurd):
        raise ValueError("c_plus is defined for quadratic surds only")
    w = cf_expand(x).period
    L = len(w)
    best = None
    for j in range(L):
        fwd = w[j:] + w[:j]
        back = tuple(w[(j - 1 - i) % L] for i in range(L))
        total = periodic_value(fwd) + periodic_value(back).inverse()
        if best is None or total > best:
            best = total
    return best.inverse()


def _convergent_values(x: QuadraticSurd, count: int):
    """Yield (n, p_n, q_n, exact q_n^2 |x - p_n/q_n|) for the first count convergents."""
    states, start = _surd_orbit(x)
    L = len(states) - start
    p0, q0, p1, q1 = 1, 0, 0, 1
    for n in range(count):
        idx = n if n < len(states) else start + (n - start) % L
        nxt = n + 1 if n + 1 < len(states) else start + (n + 1 - start) % L
        a = states[idx].floor()
        p, q = a * p0 + p1, a * q0 + q1
        alpha = states[nxt].quad()
        beta = Fraction(q0, q)
        yield n, p, q, (alpha + beta).inverse()
        p1, q1, p0, q0 = p0, q0, p, q


def c_inf(x) -> ApproxBracket:
    """inf over p/q of q^2 |x - p/q|."""
    if isinstance(x, Rational):
        return ApproxBracket(0.0, 0.0, ApproxStatus.EXACT, Fraction(0))
    if isinstance(x, QuadraticSurd):
        states, start = _surd_orbit(x)
        L = len(states) - start
        # past the preperiod the reversed tails contract towards their limits, so two
        # periods plus the limit cover every candidate
        best = c_plus(x)
        where = None
        for n, p, q, val in _convergent_values(x, start + 2 * L + 2):
            if val < best:
                best, where = val, (p, q)
        v = float(best)
        return ApproxBracket(v, v, ApproxStatus.EXACT, best, {"attained_at": where})
    cf = cf_expand(x, 400)
    vals = []
    xm = mpmath.mpf(x)
    for p, q in cf.convergents(len(cf.head)):
        vals.append(float(q * q * abs(xm - mpmath.mpf(p) / q)))
    if not vals or min(vals) == 0:
        # the expansion terminated: the input is (numerically) a rational
        return ApproxBracket(0.0, 0.0, ApproxStatus.EXACT, Fraction(0))
    running = np.minimum.accumulate(vals)
    upper = float(running[-1])
    stable = len(running) > 20 and running[-21] == upper
    lower = upper if stable else 0.0
    return ApproxBracket(lower, upper, ApproxStatus.HEURISTIC, None,
                         {"convergents": len(vals), "stable": stable})


def c_d(z, ring: Ring, norm_max: int) -> ApproxBracket:
    """Truncated inf of norm(q) |z - p/q| over q with norm(q) <= norm_max.

    z is a complex number, or a pair of Fractions giving the coordinates of a
    field element in the (1, omega) basis (then the answer is exactly 0).
    """
    if ring.is_integers:
        raise ValueError("c_d needs an imaginary quadratic ring")
    if norm_max < 1:
        raise ValueError("norm_max must be at least 1")
    if isinstance(z, tuple):
        return ApproxBracket(0.0, 0.0, ApproxStatus.EXACT, Fraction(0))
    z = complex(z)
    w = ring.omega
    R = math.isqrt(norm_max) + 2
    ys = np.arange(-int(R / w.imag) - 1, int(R / w.imag) + 2)
    xs = np.arange(-R - 2, R + 3)
    A, B = np.meshgrid(xs, ys)
    A, B = A.ravel(), B.ravel()
    q = A + B * w
    n = np.abs(q) ** 2
    keep = (n >= 0.5) & (n <= norm_max + 0.5)
    q, n = q[keep], np.rint(n[keep])
    target = q * z
    ty = target.imag / w.imag
    tx = target.real - ty * w.real
    best = np.full(len(q), np.inf)
    for dx in (-1, 0, 1, 2):
        for dy in (-1, 0, 1, 2):
            cand = (np.floor(tx) + dx) + (np.floor(ty) + dy) * w
            best = np.minimum(best, np.abs(target - cand))
    vals = np.sqrt(n) * best          # norm(q) |z - p/q| = |q| |qz - p|
    order = np.argsort(n, kind="stable")
    running = np.minimum.accumulate(vals[order])
    ns = n[order]
    curve = []
    k = 1
    while k <= norm_max:
        idx = np.searchsorted(ns, k, side="right") - 1
        if idx >= 0:
            curve.append((k, float(running[idx])))
        k *= 2
    upper = float(running[-1])
    if upper == 0.0:
        return ApproxBracket(0.0, 0.0, ApproxStatus.EXACT, Fraction(0), {"curve": curve})
    return ApproxBracket(0.0, upper, ApproxStatus.HEURISTIC, None, {"curve": curve})


def c_beta0(x, family: ResonantFamily) -> ApproxBracket:
    """Truncated inf over orbit pairs of |x - beta| / |beta - beta^sigma|."""
    if family.kind is not FamilyKind.GEODESIC:
        raise ValueError("c_beta0 needs a GEODESIC family")
    xf = float(x)
    best, curve = math.inf, []
    for r in family.points:
        a, b = float(r.location.a), float(r.location.b)
        gap = abs(a - b)
        best = min(best, abs(xf - a) / gap, abs(xf - b) / gap)
        curve.append((r.size, best))
    if best == 0.0:
        return ApproxBracket(0.0, 0.0, ApproxStatus.EXACT, Fraction(0), {"curve": curve})
    return ApproxBracket(0.0, best, ApproxStatus.HEURISTIC, None, {"curve": curve})


# Penetration records

class EventKind(Enum):
    CUSP = "cusp"
    SPIRAL = "spiral"
    DISTANCE = "distance"


@dataclass
class PenetrationRecord:
    kind: EventKind
    cutoff: float
    events: list                      # (time, value, label)
    periodic: bool = False
    period: dict = field(default_factory=dict)

    def times(self):
        return [e[0] for e in self.events]

    def values(self):
        return [e[1] for e in self.events]


def _as_exact_endpoint(target):
    if isinstance(target, VerticalRay):
        return target.foot, float(target.start_height)
    return target, 1.0


def penetration_sequence(target, family: ResonantFamily, eps0: float = 0.1, t0: float = 0.0,
                         horizon: float = 60.0) -> PenetrationRecord:
    """Events of a ray against a family, ordered by time.

    target is a ray, or an exact endpoint (Fraction, QuadraticSurd, real or complex)
    meaning the vertical ray from height 1.  CUSP events are (entry time, max height),
    SPIRAL events (entry time, time spent eps0-close to a line), DISTANCE events
    (time of closest approach, distance) for approaches below 1 after t0.
    """
    if family.kind is FamilyKind.CUSP:
        foot, h0 = _as_exact_endpoint(target)
        if isinstance(foot, Rational):
            raise DivergesIntoObstacle(f"{foot} is a tangency point")
        if family.ring.is_integers and not isinstance(foot, complex):
            return _cusp_events_convergents(foot, h0, horizon)
        return _cusp_events_lattice(family.ring, foot, h0, horizon)
    ray = target if isinstance(target, (VerticalRay, GeodesicRay)) else VerticalRay(_float_foot(target), 1.0)
    if family.kind is FamilyKind.GEODESIC:
        events = []
        for r in family.points:
            try:
                length, t_in, _ = penetration_interval(ray, r.location, eps0)
            except Unbounded as exc:
                raise DivergesIntoObstacle(str(exc)) from exc
            if length > 0:
                events.append((t_in, length, r.provenance))
        events.sort(key=lambda e: e[0])
        return PenetrationRecord(EventKind.SPIRAL, eps0, events)
    events = []
    for r in family.points:
        t, d = closest_approach(ray, r.provenance)
        if d < 1 and t >= t0:
            events.append((t, d, r.provenance))
    events.sort(key=lambda e: e[0])
    return PenetrationRecord(EventKind.DISTANCE, t0, events)


def _float_foot(x):
    if isinstance(x, complex):
        return x
    return float(x)


def _entry(r, delta, h0):
    y_in = r + mpmath.sqrt(r * r - delta * delta)
    return max(0.0, float(mpmath.log(h0 / y_in)))


def _cusp_events_convergents(x, h0: float, horizon: float) -> PenetrationRecord:
    """CUSP events over Z: only convergents can reach positive height (Legendre)."""
    dps = int(30 + horizon / math.log(10))
    events = []
    with mpmath.workdps(dps):
        if isinstance(x, QuadraticSurd):
            xm = x.to_mpf(dps)
            gen = ((p, q, val) for _, p, q, val in _convergent_values(x, 10 ** 6))
        else:
            xm = mpmath.mpf(x)
            cf = cf_expand(xm if isinstance(x, mpmath.mpf) else x, 400)
            gen = ((p, q, None) for p, q in cf.convergents(len(cf.head)))
        for p, q, val in gen:
            s = 2 * math.log(q)
            if s > horizon:
                break
            delta = abs(xm - mpmath.mpf(p) / q)
            quality = val.to_mpf(dps) if val is not None else q * q * delta
            if quality >= 0.5:
                continue
            r = mpmath.mpf(1) / (2 * q * q)
            height = float(-mpmath.log(2 * quality))
            events.append((_entry(r, delta, h0), height, Fraction(p, q)))
    events.sort(key=lambda e: e[0])
    rec = PenetrationRecord(EventKind.CUSP, horizon, events)
    if isinstance(x, QuadraticSurd):
        cp = c_plus(x)
        rec.periodic = True
        rec.period = {"cf": cf_expand(x), "asymptotic": float(-mpmath.log(2 * cp.to_mpf(dps))),
                      "asymptotic_exact": cp}
    return rec


def _cusp_events_lattice(ring: Ring, z, h0: float, horizon: float, band: float = 1.0) -> PenetrationRecord:
    """CUSP events for any ring: band-by-band lattice search for p/q with norm(q)|z - p/q| < 1/2."""
    events = []
    dps = int(30 + horizon / math.log(10))
    k = 0
    while k * band < horizon:
        s_lo = k * band if k else -1.0
        s_hi = min((k + 1) * band, horizon)
        for r in search_fractions(ring, z, math.exp(-k * band) / 2, s_lo, s_hi):
            p, q = r.provenance
            with mpmath.workdps(dps):
                zm = mpmath.mpc(complex(z)) if ring.d else mpmath.mpf(complex(z).real)
                delta = abs(_ring_mp(ring, p) / _ring_mp(ring, q) - zm)
                rad = mpmath.mpf(1) / (2 * q.norm())
                if delta >= rad:
                    continue
                height = float(-mpmath.log(2 * delta * q.norm()))
                events.append((_entry(rad, delta, h0), height, r.location))
        k += 1
    events.sort(key=lambda e: e[0])
    return PenetrationRecord(EventKind.CUSP, horizon, events)


def event_score(rec: PenetrationRecord, value: float) -> float:
    """Event value on the constant's scale (DISTANCE uses -log d)."""
    return _neg_log(value) if rec.kind is EventKind.DISTANCE else value


def constants_from_record(rec: PenetrationRecord) -> dict:
    """Sup constant and asymptotic (limsup) constant of a record."""
    if not rec.events:
        return {"sup": None, "asymptotic": None, "status": "empty"}
    scores = [event_score(rec, e[1]) for e in rec.events]
    sup = max(scores)
    if rec.periodic and "asymptotic" in rec.period:
        return {"sup": max(sup, rec.period["asymptotic"]), "asymptotic": rec.period["asymptotic"],
                "status": ApproxStatus.EXACT.value}
    tail = scores[len(scores) // 2:]
    return {"sup": sup, "asymptotic": max(tail), "status": ApproxStatus.HEURISTIC.value}


def detect_period(values, tol=1e-9, min_repeats=3):
    """Smallest k such that the last k + min_repeats values repeat with period k."""
    n = len(values)
    for k in range(1, n // 2 + 1):
        if n < k + min_repeats:
            break
        if all(abs(values[i] - values[i - k]) <= tol for i in range(n - min_repeats, n)):
            return k
    return None


# Closed geodesics and the distance spectrum

def hyperbolic_stabilizer(beta: QuadraticSurd):
    """An element of PSL(2, Z) translating along the axis of beta (orientation preserving)."""
    cf = cf_expand(beta)
    M = _block_matrix(cf.period)
    if len(cf.period) % 2:
        M = _mat_mul_int(M, M)
    # conjugate by the preperiod: beta = G(tail), G from the head terms
    G = _block_matrix(cf.head)
    Gi = _int_inverse(G)
    return _mat_mul_int(_mat_mul_int(G, M), Gi)


def _mat_mul_int(g, h):
    (a, b), (c, d) = g
    (e, f), (k, l) = h
    return ((a * e + b * k, a * f + b * l), (c * e + d * k, c * f + d * l))


def _int_inverse(g):
    (a, b), (c, d) = g
    det = a * d - b * c
    return ((d * det, -b * det), (-c * det, a * det))


def translation_length(beta: QuadraticSurd) -> float:
    (a, _), (_, d) = hyperbolic_stabilizer(beta)
    return 2 * math.acosh(abs(a + d) / 2)


def _axis(beta: QuadraticSurd) -> GeodesicLine:
    return GeodesicLine(float(beta.conjugate()), float(beta))


def axis_foot(beta: QuadraticSurd, p: HPoint) -> HPoint:
    """The point of the axis nearest to p."""
    line = _axis(beta)
    g = to_vertical(line.a, line.b)
    q = _act_point(g, p)
    rho = math.sqrt(float(abs(complex(q.horizontal)) ** 2) + float(q.height) ** 2)
    return point_at_time(line, math.log(rho))


def _frame_time(g, p: HPoint) -> float:
    q = mobius_apply(g, p)
    return math.log(abs(complex(q.horizontal)) ** 2 + float(q.height) ** 2) / 2


def _reduced_pieces(beta: QuadraticSurd):
    """One period of the axis of beta, cut into pieces near the apexes of reduced axes.

    Piece j lies on the axis of the purely periodic shift beta_j = [a_j; a_{j+1}, ...]
    and runs from its apex to the preimage of the next apex under z -> 1/(conj(z) - a_j).
    That map is in PGL(2, Z) and fixes i R, so it preserves the orbit of any x0 on the
    imaginary axis.  Yields (line, frame, t_start, length).
    """
    period = cf_expand(beta).period
    if not period:
        raise ValueError("beta must be a quadratic irrational")
    if len(period) % 2:
        period = period + period
    k = len(period)
    red = [surd_from_cf((), period[j:] + period[:j]) for j in range(k)]
    ends = [(float(r.conjugate()), float(r)) for r in red]
    apex = [HPoint((hi + lo) / 2, (hi - lo) / 2) for lo, hi in ends]
    for j in range(k):
        line = GeodesicLine(*ends[j])
        g = to_vertical(*ends[j])
        nxt = apex[(j + 1) % k]
        pre = period[j] + 1 / complex(nxt.horizontal, -nxt.height)
        t0 = _frame_time(g, apex[j])
        yield line, g, t0, _frame_time(g, HPoint(pre.real, pre.imag)) - t0


def _piece_points(generators, x0: HPoint, g, t0: float, length: float, width: float, margin: float):
    mid = _act_point(mat_inv(g), HPoint(0, math.exp(t0 + length / 2)))
    return orbit_ball(generators, x0, mid, length / 2 + width + 1e-9, margin)


def _approach(g, y: HPoint):
    """(time, distance) of the closest approach of the vertical-normalized line to y."""
    q = mobius_apply(g, y)
    w, h = abs(complex(q.horizontal)), float(q.height)
    return math.log(math.hypot(w, h)), math.asinh(w / h)


def closed_geodesic_distance(beta: QuadraticSurd, x0: HPoint, generators=PSL2Z_GENERATORS,
                             margin: float = 4.0) -> float:
    """-log of the distance from the orbit of x0 to the axis of beta (+inf on the axis).

    Works piecewise along one period of reduced axes (see _reduced_pieces), so x0
    must lie on the imaginary axis and generators must generate PSL(2, Z).
    """
    if complex(x0.horizontal) != 0:
        raise ValueError("x0 must lie on the imaginary axis")
    pieces = list(_reduced_pieces(beta))
    width = min(dist_to_line(x0, line) for line, *_ in pieces)
    if width < 1e-12:
        return math.inf
    best = width
    for line, g, t0, length in pieces:
        for y in _piece_points(generators, x0, g, t0, length, width, margin):
            best = min(best, dist_to_line(y, line))
    if best < 1e-12:
        return math.inf
    return -math.log(best)


def periodic_distance_record(beta: QuadraticSurd, x0: HPoint, generators=PSL2Z_GENERATORS,
                             periods: int = 2, margin: float = 4.0) -> PenetrationRecord:
    """DISTANCE record of the periodic ray along the axis of beta, over periods periods.

    Time 0 is the apex of the first reduced axis; events are closest approaches below 1.
    Distance zero (the axis meets the orbit) is reported as an event with d = 0.
    """
    if complex(x0.horizontal) != 0:
        raise ValueError("x0 must lie on the imaginary axis")
    pieces = list(_reduced_pieces(beta))
    ell = sum(p[3] for p in pieces)
    width = max(1.0, min(dist_to_line(x0, line) for line, *_ in pieces))
    one = []
    offset = 0.0
    for line, g, t0, length in pieces:
        for y in _piece_points(generators, x0, g, t0, length, width, margin):
            t, d = _approach(g, y)
            if d < 1 and t0 <= t < t0 + length:
                one.append((offset + t - t0, d, y))
        offset += length
    events = sorted(((t + k * ell, d, y) for k in range(periods) for t, d, y in one), key=lambda e: e[:2])
    rec = PenetrationRecord(EventKind.DISTANCE, 0.0, events)
    rec.periodic = True
    rec.period = {"length": ell, "periods": periods}
    last = [e for e in events if e[0] >= (periods - 1) * ell]
    if last:
        rec.period["asymptotic"] = max(_neg_log(e[1]) for e in last)
    return rec


def _neg_log(d: float) -> float:
    return math.inf if d <= 1e-12 else -math.log(d)


def spectrum_sample(kind: EventKind, surds=(), seeds=(), x0: HPoint = HPoint(0, 2.0)) -> list:
    """Rows (input, kind, constant, log_constant, asymptotic_constant, status)."""
    rows = []
    for x in surds:
        if kind is EventKind.CUSP:
            c = c_inf(x)
            cp = c_plus(x)
            rows.append({"input": str(x), "kind": kind.value, "constant": c.upper,
                         "log_constant": -math.log(c.upper), "asymptotic_constant": float(cp),
                         "height": -math.log(2 * c.upper), "status": c.status.value})
        elif kind is EventKind.DISTANCE:
            rec = periodic_distance_record(x, x0)
            cons = constants_from_record(rec)
            rows.append({"input": str(x), "kind": kind.value, "constant": cons["sup"],
                         "log_constant": cons["sup"], "asymptotic_constant": cons["asymptotic"],
                         "closed_geodesic": closed_geodesic_distance(x, x0), "status": "periodic"})
        else:
            raise ValueError("spectrum_sample supports CUSP and DISTANCE kinds")
    for seed in seeds:
        xr = random.Random(seed).random()
        c = c_inf(xr)
        rows.append({"input": repr(xr), "kind": kind.value, "constant": c.upper,
                     "log_constant": -math.log(c.upper), "asymptotic_constant": None,
                     "status": c.status.value})
    return rows


def random_surds(count: int, seed: int, max_period: int = 6, max_quotient: int = 4,
                 max_head: int = 2) -> list:
    """Seeded surds [a0; head, (period)] with bounded period and quotients."""
    rng = random.Random(seed)
    out = []
    while len(out) < count:
        L = rng.randint(1, max_period)
        block = tuple(rng.randint(1, max_quotient) for _ in range(L))
        head = (rng.randint(0, 3),) + tuple(rng.randint(1, max_quotient) for _ in range(rng.randint(0, max_head)))
        try:
            out.append(surd_from_cf(head, block))
        except ValueError:
            continue
    return out
