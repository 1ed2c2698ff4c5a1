"""Formal-ball parameter spaces, decay measurements, Cantor survivor trees and dimension estimates."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from enum import Enum
from fractions import Fraction

import mpmath
import numpy as np

from .lattice_collections import (
    GAUSSIAN, ZZ, FamilyKind, ResonantFamily, Ring, enumerate_ford, search_fractions, _ring_mp,
)

D_STAR = math.log(3)
# arc length on a circle of radius r: 2 rho <= mu(B(xi, rho)) <= pi rho for rho <= 2r
CIRCLE_CALIBRATION = math.pi / 2
KAPPA_U_CUSP = 0.5            # cusp case: -log(2 delta) - s is the exact max height


class SpaceKind(Enum):
    INTERVAL = "interval"
    CIRCLE = "circle"
    FULL_BOUNDARY = "full_boundary"


class HorizonError(ValueError):
    pass


class InsufficientScales(ValueError):
    pass


class Unsupported(ValueError):
    pass


@dataclass(frozen=True)
class ParamSpaceX:
    kind: SpaceKind
    window: tuple = (0.0, 1.0)
    center: complex = 0j
    base_size: float = 0.0        # size s_C of the horoball the circle surrounds
    c0: float = 0.0
    dim: int = 1
    t_star: float = 0.0

    @classmethod
    def interval(cls, lo=0.0, hi=1.0, t_star=0.0):
        if not lo < hi:
            raise ValueError("empty interval")
        return cls(SpaceKind.INTERVAL, (lo, hi), t_star=t_star)

    @classmethod
    def circle(cls, center, base_size, c0, t_star=None):
        if t_star is None:
            t_star = base_size + c0 + math.log(CIRCLE_CALIBRATION) + math.log(6)
        return cls(SpaceKind.CIRCLE, center=complex(center), base_size=base_size, c0=c0, dim=2,
                   t_star=t_star)

    @classmethod
    def full_boundary(cls, n, t_star=0.0):
        return cls(SpaceKind.FULL_BOUNDARY, dim=n, t_star=t_star)

    @property
    def radius(self) -> float:
        if self.kind is not SpaceKind.CIRCLE:
            raise AttributeError("only circle spaces have a radius")
        return math.exp(-(self.base_size + self.c0)) / 2

    @property
    def measure_dim(self) -> int:
        """Exponent of the natural measure (arc length on circles)."""
        if self.kind is SpaceKind.FULL_BOUNDARY:
            return self.dim
        return 1


@dataclass(frozen=True)
class PowerLawParams:
    tau: float
    c_l: float
    c_u: float
    calibration: float | None = None

    def __post_init__(self):
        if self.tau <= 0 or not 0 < self.c_l <= self.c_u:
            raise ValueError("need tau > 0 and 0 < c_l <= c_u")


@dataclass
class FrameworkConstants:
    l_star: float
    d_star: float = D_STAR
    d_c: float | None = None
    k0: float | None = None
    k_l: float | None = None
    k_u: float | None = None
    u_star: float | None = None


def ford_constants() -> FrameworkConstants:
    # separation holds with l_1 = 0, hence l_* = l_1 + log 3
    return FrameworkConstants(l_star=math.log(3))


def power_law_params(space: ParamSpaceX) -> PowerLawParams:
    if space.kind is SpaceKind.INTERVAL:
        # B(xi, rho) n [lo, hi] has length in [rho, 2 rho] for xi in the window, rho <= width
        return PowerLawParams(1.0, 1.0, 2.0)
    if space.kind is SpaceKind.FULL_BOUNDARY:
        vol = math.pi ** (space.dim / 2) / math.gamma(space.dim / 2 + 1)
        return PowerLawParams(float(space.dim), vol, vol)
    return PowerLawParams(1.0, 2.0, math.pi, CIRCLE_CALIBRATION)


# Exact measures on intervals and circles

def _merge_length(segs) -> float:
    total, cur_lo, cur_hi = 0.0, None, None
    for lo, hi in sorted(segs):
        if hi <= lo:
            continue
        if cur_hi is None or lo > cur_hi:
            if cur_hi is not None:
                total += cur_hi - cur_lo
            cur_lo, cur_hi = lo, hi
        else:
            cur_hi = max(cur_hi, hi)
    if cur_hi is not None:
        total += cur_hi - cur_lo
    return total


def _circle_arc(space: ParamSpaceX, theta0: float, eta_rel: complex, rho: float):
    """Angular interval, relative to theta0, of circle points within rho of eta.

    eta_rel is eta minus the circle point at angle theta0.
    """
    r = space.radius
    w = eta_rel + r * complex(math.cos(theta0), math.sin(theta0))   # eta - circle center
    aw = abs(w)
    if aw == 0:
        return (-math.pi, math.pi) if rho >= r else None
    # half-angle form: acos loses everything for arcs much shorter than the circle
    s2 = (rho * rho - (r - aw) ** 2) / (4 * r * aw)
    if s2 <= 0:
        return None
    if s2 >= 1:
        return (-math.pi, math.pi)
    half = 2 * math.asin(math.sqrt(s2))
    mid = math.atan2(w.imag, w.real) - theta0
    mid = (mid + math.pi) % (2 * math.pi) - math.pi
    return (mid - half, mid + half)


def ball_measure(space: ParamSpaceX, center, radius: float, theta=None) -> float:
    """mu(B(center, radius) n X); circle points are given by their angle theta."""
    if space.kind is SpaceKind.INTERVAL:
        lo, hi = space.window
        x = float(center)
        return max(0.0, min(hi, x + radius) - max(lo, x - radius))
    if space.kind is SpaceKind.CIRCLE:
        arc = _circle_arc(space, theta, 0j, radius)
        return 0.0 if arc is None else space.radius * (arc[1] - arc[0])
    raise Unsupported("exact measures are implemented for intervals and circles")


def covered_fraction(space: ParamSpaceX, center, radius: float, obstacles, theta=None) -> float:
    """mu(B(center, radius) n X n union of balls) / mu(B(center, radius) n X).

    obstacles: iterable of (offset from center, ball radius); offsets are floats or complex.
    """
    if space.kind is SpaceKind.INTERVAL:
        lo, hi = space.window
        x = float(center)
        a, b = max(lo - x, -radius), min(hi - x, radius)
        segs = [(max(a, float(o) - rr), min(b, float(o) + rr)) for o, rr in obstacles]
        base = b - a
        return _merge_length(segs) / base if base > 0 else 0.0
    if space.kind is SpaceKind.CIRCLE:
        base = _circle_arc(space, theta, 0j, radius)
        if base is None:
            return 0.0
        a, b = base
        segs = []
        for o, rr in obstacles:
            arc = _circle_arc(space, theta, complex(o), rr)
            if arc is None:
                continue
            for shift in (-2 * math.pi, 0.0, 2 * math.pi):
                segs.append((max(a, arc[0] + shift), min(b, arc[1] + shift)))
        return _merge_length(segs) / (b - a)
    raise Unsupported("exact measures are implemented for intervals and circles")


def _query(family: ResonantFamily, center, radius, s_lo, s_hi, exclude=()):
    if family.kind is not FamilyKind.CUSP and s_hi > family.s_max + 1e-9:
        raise HorizonError(f"family enumerated to {family.s_max}, query needs {s_hi}")
    return [r for r in family.near(center, radius, s_lo, s_hi) if r.location not in exclude]


def _sample_centers(space: ParamSpaceX, family, t, window_lo, window_hi, n_random, rng, exclude=()):
    """Random points plus obstacle points from the relevant size window."""
    if space.kind is SpaceKind.INTERVAL:
        lo, hi = space.window
        pts = [lo + (hi - lo) * rng.random() for _ in range(n_random)]
        for r in _query(family, (lo + hi) / 2, (hi - lo) / 2, window_lo, window_hi, exclude)[:n_random]:
            pts.append(float(r.location))
        return [(p, None) for p in pts]
    thetas = [2 * math.pi * rng.random() for _ in range(n_random)]
    return [(space.center + space.radius * complex(math.cos(th), math.sin(th)), th) for th in thetas]


def tau_l_empirical(space: ParamSpaceX, family: ResonantFamily, c: float, t_values, n_random: int = 100,
                    seed: int = 0, l_star: float = math.log(3), exclude=()) -> float:
    """Largest sampled fraction of psi(xi, t + d_*) covered by N(R(t - l_*, c), e^{-(t + c - d_*)})."""
    rng = random.Random(seed)
    worst = 0.0
    for t in t_values:
        s_hi = t - l_star
        s_lo = s_hi - c
        base_r = math.exp(-(t + D_STAR))
        nb_r = math.exp(-(t + c - D_STAR))
        for xi, theta in _sample_centers(space, family, t, s_lo, s_hi, n_random, rng, exclude):
            near = _query(family, xi, base_r + nb_r, s_lo, s_hi, exclude)
            if not near:
                continue
            obs = [(complex(r.location) - complex(xi) if space.kind is SpaceKind.CIRCLE
                    else float(r.location) - float(xi), nb_r) for r in near]
            worst = max(worst, covered_fraction(space, xi, base_r, obs, theta))
    return worst


def tau_u_empirical(space: ParamSpaceX, family: ResonantFamily, c: float, u: float, t_values,
                    n_random: int = 100, seed: int = 0) -> float:
    """Smallest sampled fraction of B(eta, e^{-(t-u-d_*)}) covered by B(x, e^{-(s_x+c+d_*)}), s_x <= t."""
    if space.kind is not SpaceKind.INTERVAL:
        raise Unsupported("tau_u is measured on intervals (the one-dimensional stand-in)")
    rng = random.Random(seed)
    best = 1.0
    for t in t_values:
        R = math.exp(-(t - u - D_STAR))
        for eta, _ in _sample_centers(space, family, t, -1.0, -1.0, n_random, rng):
            obs = []
            k = -1.0
            while k < t:
                hi = min(k + 1.0, t)
                rr = math.exp(-(max(k, 0.0) + c + D_STAR))
                for r in _query(family, eta, R + rr, k, hi):
                    obs.append((float(r.location) - eta, math.exp(-(r.size + c + D_STAR))))
                k = hi
            best = min(best, covered_fraction(space, eta, R, obs))
    return best


def band_has_resonant(family: ResonantFamily, center, t: float, u: float) -> bool:
    """Does B(center, e^{-(t-u)}) contain a member with size in [t - u, t]?"""
    return bool(_query(family, center, math.exp(-(t - u)), t - u - 1e-12, t))


def prop23_lower_bound(tau: float, c_l: float, c_u: float, d_star: float, tau_l: float, c: float) -> float:
    """tau - (log(2 c_u^2 c_l^-2 e^{2 tau d_*}) + |log(1 - tau_l)|) / c."""
    if not 0 <= tau_l < 1:
        raise ValueError("tau_l must lie in [0, 1)")
    if c <= 0:
        raise ValueError("c must be positive")
    return tau - (math.log(2 * c_u ** 2 / c_l ** 2) + 2 * tau * d_star + abs(math.log1p(-tau_l))) / c


# Cantor survivor trees

@dataclass
class LevelStats:
    t: float
    expanded: int
    children: int
    survivors: int
    estimated_count: float


@dataclass
class DimEstimate:
    value: float
    stderr: float
    scales: list = field(default_factory=list)
    counts: list = field(default_factory=list)


@dataclass
class CantorTree:
    space: ParamSpaceX
    c: float
    depth: int
    l_star: float
    levels: list
    leaves: list                 # high-precision centers
    status: str = "ok"
    empty_level: int | None = None
    sampled: bool = False
    horizon: float = 0.0
    root: object = None

    def dimension_estimate(self) -> DimEstimate:
        """log(mean branching)/c averaged over levels."""
        logs = [math.log(lv.survivors / lv.expanded) for lv in self.levels[1:] if lv.expanded and lv.survivors]
        if not logs:
            return DimEstimate(0.0, math.inf)
        vals = np.array(logs) / self.c
        err = float(np.std(vals, ddof=1) / math.sqrt(len(vals))) if len(vals) > 1 else math.inf
        return DimEstimate(float(np.mean(vals)), err, [lv.t for lv in self.levels],
                           [lv.estimated_count for lv in self.levels])


class _IntervalGeom:
    def __init__(self, space):
        self.lo, self.hi = space.window

    def position(self, param):
        return param

    def offsets(self, param, r, r_child):
        a = max(float(self.lo - param), -r / 3)
        b = min(float(self.hi - param), r / 3)
        if b < a:
            return np.empty(0)
        n = int(math.floor((b - a) / r_child + 1e-12)) + 1
        return a + r_child * np.arange(n)

    def relative(self, param, offsets):
        return offsets.astype(complex)

    def child(self, param, off):
        return param + mpmath.mpf(float(off))


class _CircleGeom:
    def __init__(self, space):
        self.center = mpmath.mpc(space.center)
        self.rho = space.radius

    def position(self, theta):
        return self.center + self.rho * mpmath.expj(theta)

    def offsets(self, theta, r, r_child):
        step = 2 * math.asin(min(1.0, r_child / (2 * self.rho)))
        if r / 3 >= 2 * self.rho:
            n = int(math.floor(2 * math.pi / step))
            return step * np.arange(n)
        half = 2 * math.asin(r / (6 * self.rho))
        n = int(math.floor(2 * half / step + 1e-12)) + 1
        return -half + step * np.arange(n)

    def relative(self, theta, offsets):
        base = complex(mpmath.expj(theta))
        return self.rho * base * (np.exp(1j * offsets) - 1)

    def child(self, theta, off):
        return theta + mpmath.mpf(float(off))


def _geometry(space: ParamSpaceX):
    if space.kind is SpaceKind.INTERVAL:
        return _IntervalGeom(space)
    if space.kind is SpaceKind.CIRCLE:
        return _CircleGeom(space)
    raise Unsupported("Cantor trees are built on intervals and circles")


def _find(family: ResonantFamily, centre, reach, s_lo, s_hi, exclude=()):
    """Complete lattice query for CUSP families, cached enumeration otherwise."""
    if family.kind is FamilyKind.CUSP:
        found = search_fractions(family.ring, centre, reach, s_lo, s_hi)
    elif not family.points:
        return []
    else:
        if s_hi > family.s_max + 1e-9:
            raise HorizonError(f"family enumerated to {family.s_max}, query needs {s_hi}")
        found = family.near(complex(centre), reach, s_lo, s_hi)
    return [f for f in found if f.location not in exclude]


def _location_mp(family: ResonantFamily, r):
    if family.kind is FamilyKind.CUSP:
        p, q = r.provenance
        return _ring_mp(family.ring, p) / _ring_mp(family.ring, q)
    z = complex(r.location)
    return mpmath.mpc(z) if z.imag else mpmath.mpf(z.real)


def _obstacle_offsets(family: ResonantFamily, found, origin):
    return np.array([complex(_location_mp(family, r) - origin) for r in found], dtype=complex)


def build_cantor(space: ParamSpaceX, family: ResonantFamily, c: float, depth: int,
                 l_star: float = math.log(3), max_nodes: int | None = 256, exclude=(),
                 root_param=None) -> CantorTree:
    """Survivor tree of formal balls of radius e^{-(t_* + k c)}.

    A child survives when its d_*-shrunk ball misses the e^{-(t' + c - d_*)}-neighborhoods
    of members with size in (t' - l_* - c, t' - l_*].  Levels larger than max_nodes are
    expanded on an evenly spaced subsample and counted by mean branching.
    """
    geom = _geometry(space)
    t_star = space.t_star
    dps = int(30 + (t_star + (depth + 1) * c) / math.log(10))
    ring = family.ring
    with mpmath.workdps(dps):
        if root_param is None:
            root_param = mpmath.mpf(sum(space.window)) / 2 if space.kind is SpaceKind.INTERVAL else mpmath.mpf(0)
        root_param = mpmath.mpf(root_param)
        horizon = t_star + depth * c - l_star
        tree = CantorTree(space, c, depth, l_star, [], [], horizon=horizon, root=root_param)

        # the root must avoid its own window and, via (S0), every smaller size
        r0 = math.exp(-t_star)
        if not _survives_root(geom, ring, family, root_param, r0, t_star, c, l_star, exclude):
            tree.status, tree.empty_level = "pruned_empty", 0
            tree.levels.append(LevelStats(t_star, 0, 1, 0, 0.0))
            return tree
        tree.levels.append(LevelStats(t_star, 0, 1, 1, 1.0))
        nodes = [root_param]
        est = 1.0
        for k in range(1, depth + 1):
            t_par = t_star + (k - 1) * c
            t_ch = t_par + c
            r, rc = math.exp(-t_par), math.exp(-t_ch)
            expand = nodes
            if max_nodes is not None and len(nodes) > max_nodes:
                idx = np.linspace(0, len(nodes) - 1, max_nodes).round().astype(int)
                expand = [nodes[i] for i in idx]
                tree.sampled = True
            clearance = rc / 3 + 3 * rc * math.exp(-c)
            s_hi = t_ch - l_star
            s_lo = s_hi - c
            survivors, children = [], 0
            for param in expand:
                offs = geom.offsets(param, r, rc)
                children += len(offs)
                if not len(offs):
                    continue
                origin = geom.position(param)
                rel = geom.relative(param, offs)
                keep = np.ones(len(offs), dtype=bool)
                # in a two-dimensional boundary only obstacles near the arc matter, so query
                # short runs of children instead of the whole disk
                if ring.is_integers:
                    runs = [np.arange(len(offs))]
                else:
                    per = max(1, int(4 * math.exp(-s_hi) / rc))
                    runs = [np.arange(i, min(i + per, len(offs))) for i in range(0, len(offs), per)]
                for run in runs:
                    mid = run[len(run) // 2]
                    centre = origin if len(runs) == 1 else geom.position(geom.child(param, offs[mid]))
                    shift = 0j if len(runs) == 1 else rel[mid]
                    reach = float(np.max(np.abs(rel[run] - shift))) + clearance
                    if len(runs) == 1:
                        reach = max(reach, r / 3 + clearance)
                    found = _find(family, centre, reach, s_lo, s_hi, exclude)
                    if found:
                        obs = _obstacle_offsets(family, found, origin)
                        dist = np.abs(rel[run][:, None] - obs[None, :])
                        keep[run] = np.all(dist > clearance, axis=1)
                survivors.extend(geom.child(param, o) for o in offs[keep])
            est *= len(survivors) / len(expand) if expand else 0.0
            tree.levels.append(LevelStats(t_ch, len(expand), children, len(survivors), est))
            if not survivors:
                tree.status, tree.empty_level = "pruned_empty", k
                return tree
            nodes = survivors
        tree.leaves = nodes
    return tree


def _survives_root(geom, ring, family, param, r0, t_star, c, l_star, exclude):
    origin = geom.position(param)
    s_hi = t_star - l_star
    clearance = r0 / 3 + 3 * r0 * math.exp(-c)
    if _find(family, origin, clearance, s_hi - c, s_hi, exclude):
        return False
    # (S0): sizes up to t_* - l_* - c, neighborhoods of radius e^{-(s + 2c + l_*)}
    top = t_star - l_star - c
    k = -1.0
    while k < top:
        hi = min(k + 1.0, top)
        rad = r0 / 3 + math.exp(-(max(k, 0.0) + 2 * c + l_star))
        for f in _find(family, origin, rad, k, hi, exclude):
            gap = abs(_location_mp(family, f) - origin)
            if gap < r0 / 3 + math.exp(-(f.size + 2 * c + l_star)):
                return False
        k = hi
    return True


def leaf_points(tree: CantorTree) -> list:
    geom = _geometry(tree.space)
    return [geom.position(p) for p in tree.leaves]


def certify_leaf_z(xi, kappa: float, horizon: float) -> tuple:
    """Exact check that q^2 |xi - p/q| >= kappa for all q with 2 log q <= horizon (kappa < 1/2).

    Returns (passed, smallest value found, attaining fraction).  Below 1/2 only
    convergents matter, so the continued fraction of the exact binary value suffices.
    """
    if not kappa < 0.5:
        raise ValueError("the convergent shortcut needs kappa < 1/2")
    x = _mpf_to_fraction(mpmath.mpf(xi))
    qmax = math.isqrt(int(math.floor(math.exp(horizon))))
    best, where = None, None
    num, den = x.numerator, x.denominator
    p0, q0, p1, q1 = 1, 0, 0, 1
    while den:
        a = num // den
        num, den = den, num - a * den
        p, q = a * p0 + p1, a * q0 + q1
        if q > qmax:
            break
        val = q * q * abs(x - Fraction(p, q))
        if best is None or val < best:
            best, where = val, Fraction(p, q)
        p1, q1, p0, q0 = p0, q0, p, q
    with mpmath.workdps(50):
        ok = best is None or mpmath.mpf(best.numerator) / best.denominator >= kappa
    return ok, best, where


def _mpf_to_fraction(x) -> Fraction:
    man, exp = x.man_exp
    man, exp = int(man), int(exp)
    return Fraction(man) * Fraction(2) ** exp if exp >= 0 else Fraction(man, 2 ** -exp)


def certify_leaf_lattice(ring: Ring, xi, kappa: float, horizon: float, exclude=(), band: float = 2.0) -> tuple:
    """Check |xi - p/q| >= kappa e^{-s} for members with size <= horizon by banded lattice queries."""
    k = -1.0
    while k < horizon:
        hi = min(k + band, horizon)
        rad = kappa * math.exp(-max(k, 0.0))
        for f in search_fractions(ring, xi, rad, k, hi):
            if f.location in exclude:
                continue
            p, q = f.provenance
            gap = abs(_ring_mp(ring, p) / _ring_mp(ring, q) - xi)
            if gap < kappa * mpmath.exp(-mpmath.mpf(f.size)):
                return False, f
        k = hi
    return True, None


def certify_tree(tree: CantorTree, family: ResonantFamily, exclude=(), limit: int | None = None) -> dict:
    """Direct truncated membership check of every leaf in Bad(2c + l_*)."""
    kappa = math.exp(-(2 * tree.c + tree.l_star))
    pts = leaf_points(tree)
    if limit is not None and len(pts) > limit:
        idx = np.linspace(0, len(pts) - 1, limit).round().astype(int)
        pts = [pts[i] for i in idx]
    failures = []
    for xi in pts:
        if family.ring.is_integers and not exclude:
            ok, _, where = certify_leaf_z(xi, kappa, tree.horizon)
        else:
            ok, where = certify_leaf_lattice(family.ring, xi, kappa, tree.horizon, exclude)
        if not ok:
            failures.append((xi, where))
    return {"checked": len(pts), "failures": failures, "kappa": kappa, "horizon": tree.horizon}


# Box counting

class Membership:
    """Vectorized test: does the set meet the cells [lo, hi)?"""

    def __call__(self, lo: np.ndarray, hi: np.ndarray) -> np.ndarray:
        raise NotImplementedError


class FullSet(Membership):
    def __call__(self, lo, hi):
        return np.ones(len(lo), dtype=bool)


class IntervalUnion(Membership):
    """A finite union of closed intervals given by sorted, disjoint endpoints."""

    def __init__(self, starts, ends):
        self.starts = np.asarray(starts, dtype=float)
        self.ends = np.asarray(ends, dtype=float)

    def __call__(self, lo, hi):
        if not len(self.ends):
            return np.zeros(len(lo), dtype=bool)
        # first interval whose end reaches the cell, then does it start before the cell ends
        k = np.searchsorted(self.ends, lo, side="left")
        ok = k < len(self.ends)
        kk = np.minimum(k, len(self.ends) - 1)
        return ok & (self.starts[kk] < hi)


def middle_thirds(depth: int) -> IntervalUnion:
    starts = np.array([0.0])
    width = 1.0
    for _ in range(depth):
        width /= 3
        starts = np.concatenate([starts, starts + 2 * width])
    starts.sort()
    return IntervalUnion(starts, starts + width)


def cf_cylinders(max_quotient: int, depth: int) -> IntervalUnion:
    """Union of the depth-level cylinders of [0; a1, a2, ...] with all a_i <= max_quotient."""
    # cylinder of (a1..an) has endpoints p_n/q_n and (p_n + p_{n-1})/(q_n + q_{n-1})
    p0, q0 = np.array([0]), np.array([1])         # p_0/q_0 for x = [0; ...]
    pm, qm = np.array([1]), np.array([0])         # p_{-1}, q_{-1}
    for _ in range(depth):
        a = np.arange(1, max_quotient + 1)
        p_new = (a[None, :] * p0[:, None] + pm[:, None]).ravel()
        q_new = (a[None, :] * q0[:, None] + qm[:, None]).ravel()
        pm, qm = np.repeat(p0, max_quotient), np.repeat(q0, max_quotient)
        p0, q0 = p_new, q_new
    e1 = p0 / q0
    e2 = (p0 + pm) / (q0 + qm)
    lo, hi = np.minimum(e1, e2), np.maximum(e1, e2)
    order = np.argsort(lo)
    return IntervalUnion(lo[order], hi[order])


def cf_cylinder_dimension(max_quotient: int, depth: int = 12) -> float:
    """Dimension of E_M from cylinder lengths: root of P_{n+1}(s) - P_n(s), P_n(s) = log sum |I_w|^s."""
    def lengths(n):
        u = cf_cylinders(max_quotient, n)
        return u.ends - u.starts

    L1, L2 = lengths(depth), lengths(depth + 1)

    def gap(s):
        return math.log(np.sum(L2 ** s)) - math.log(np.sum(L1 ** s))

    lo, hi = 0.0, 1.0
    for _ in range(80):
        mid = (lo + hi) / 2
        if gap(mid) > 0:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


def ford_bad_set(c: float, q_max: int, window=(0.0, 1.0), chunk: int = 400) -> IntervalUnion:
    """[0,1] minus the open intervals (p/q - e^{-c}/q^2, p/q + e^{-c}/q^2), q <= q_max."""
    lo_w, hi_w = window
    eps = math.exp(-c)
    starts, ends = [], []
    for q0 in range(1, q_max + 1, chunk):
        qs = np.arange(q0, min(q0 + chunk, q_max + 1))
        for q in qs:
            p = np.arange(math.floor(lo_w * q) - 1, math.ceil(hi_w * q) + 2)
            centers = p / q
            rad = eps / (q * q)
            starts.append(centers - rad)
            ends.append(centers + rad)
    s = np.concatenate(starts)
    e = np.concatenate(ends)
    order = np.argsort(s, kind="stable")
    s, e = s[order], e[order]
    run_end = np.maximum.accumulate(e)
    # removed components start where a start exceeds every earlier end
    new = np.empty(len(s), dtype=bool)
    new[0] = True
    new[1:] = s[1:] >= run_end[:-1]
    comp_start = s[new]
    idx = np.flatnonzero(new)
    comp_end = np.maximum.reduceat(e, idx)
    # kept set = complement inside the window (closed gaps)
    g_lo = np.concatenate([[lo_w], comp_end])
    g_hi = np.concatenate([comp_start, [hi_w]])
    g_lo = np.clip(g_lo, lo_w, hi_w)
    g_hi = np.clip(g_hi, lo_w, hi_w)
    keep = g_hi >= g_lo
    # closed gaps: a removed open interval leaves its endpoints
    return IntervalUnion(g_lo[keep], g_hi[keep] + 0.0)


def ford_bad_qmax(c: float, finest_exponent: int, extra: float = 10.0) -> int:
    """Denominator bound: neighborhoods down to radius 2^-finest * e^-extra, i.e. s <= log(2^finest) + extra - c."""
    s_max = finest_exponent * math.log(2) + extra - c
    return max(1, math.isqrt(int(math.exp(s_max))))


def box_dim(space: ParamSpaceX, membership: Membership, scales) -> DimEstimate:
    """Least-squares slope of log N(delta) against log(1/delta) over dyadic scales 2^-k."""
    scales = sorted(set(int(k) for k in scales))
    if len(scales) < 5:
        raise InsufficientScales(f"need at least 5 scales, got {len(scales)}")
    if space.kind is not SpaceKind.INTERVAL:
        raise Unsupported("box counting is implemented on intervals")
    lo_w, hi_w = space.window
    width = hi_w - lo_w
    counts = []
    # refine from the coarsest level: only children of occupied cells can be occupied
    k = 0
    idx = np.array([0], dtype=np.int64)
    for target in scales:
        while k < target:
            idx = np.concatenate([2 * idx, 2 * idx + 1])
            k += 1
            delta = width / 2 ** k
            lo = lo_w + idx * delta
            idx = idx[membership(lo, lo + delta)]
        counts.append(len(idx))
    if min(counts) == 0:
        raise InsufficientScales("empty set at some scale")
    x = np.array(scales) * math.log(2)
    y = np.log(np.array(counts, dtype=float))
    A = np.vstack([x, np.ones_like(x)]).T
    coef, res, *_ = np.linalg.lstsq(A, y, rcond=None)
    resid = y - A @ coef
    dof = len(x) - 2
    s2 = float(resid @ resid) / dof if dof > 0 else 0.0
    stderr = math.sqrt(s2 / float(np.sum((x - x.mean()) ** 2)))
    return DimEstimate(float(coef[0]), stderr, [2.0 ** -k for k in scales], counts)


def jarnik_eval(t: float, n: int, k_l: float, k_u: float, c: float | None = None, u_star: float = 0.0) -> dict:
    """Jarnik-type bounds: cusp form at height t and point form at parameter c (default t)."""
    c = t if c is None else c
    cusp = (n - k_l / (t * math.exp(n / 2 * t)), n - k_u / (t * math.exp(2 * n * t)))
    lo_arg = 1 - k_l * c * math.exp(-n * c)
    hi_arg = 1 - k_u * math.exp(-n * c)
    point = (n - abs(math.log(lo_arg)) / c if lo_arg > 0 else -math.inf,
             n - abs(math.log(hi_arg)) / (c + u_star + math.log(2)) if hi_arg > 0 else -math.inf)
    return {"cusp": cusp, "point": point}


# Hall-ray experiments

def circle_gate(s0: float, c: float, l1: float = 0.0, kappa_u: float = KAPPA_U_CUSP,
                 calibration: float = CIRCLE_CALIBRATION) -> bool:
    return math.exp(s0) * math.exp(-l1) * (1 - math.exp(-c) * kappa_u * 6 * calibration) >= kappa_u


@dataclass
class HallReport:
    status: str
    c0: float
    s0: float
    c: float
    depth: int
    t_star: float
    horizon: float
    levels: list
    dim_estimate: DimEstimate | None
    witnesses_checked: int = 0
    witness_failures: list = field(default_factory=list)
    first_heights: list = field(default_factory=list)
    max_other_height: float = -math.inf
    shape_k: float | None = None
    reason: str = ""


def _height_events(ring, xi, s0, horizon, exclude_loc):
    """(first event height, max height among others above s0 - 1) along the vertical ray at xi."""
    # first event: the horoball entered first is among the unit-norm ones or C0 itself
    first = None
    best_entry = None
    for f in search_fractions(ring, xi, 0.5, -1.0, 1.0):
        p, q = f.provenance
        delta = abs(_ring_mp(ring, p) / _ring_mp(ring, q) - xi)
        rad = mpmath.mpf(1) / (2 * q.norm())
        if delta < rad:
            y_in = rad + mpmath.sqrt(rad * rad - delta * delta)
            if best_entry is None or y_in > best_entry:
                best_entry = y_in
                first = (f.location, float(-mpmath.log(2 * delta * q.norm())))
    worst = -math.inf
    k = -1.0
    band = 2.0
    while k < horizon:
        hi = min(k + band, horizon)
        rad = math.exp(-(s0 - 1)) * math.exp(-max(k, 0.0)) / 2
        for f in search_fractions(ring, xi, rad, k, hi):
            if f.location == exclude_loc:
                continue
            p, q = f.provenance
            delta = abs(_ring_mp(ring, p) / _ring_mp(ring, q) - xi)
            worst = max(worst, float(-mpmath.log(2 * delta * q.norm())))
        k = hi
    return first, worst


def hall_ray_experiment(kind: str, c0: float, s0: float, depth: int, ring: Ring = GAUSSIAN,
                        max_nodes: int = 64, witness_limit: int = 64) -> HallReport:
    """Cantor construction on the circle around the horoball at 0 with direct height checks of sampled leaves."""
    if kind != "cusp":
        raise Unsupported("only the cusp Hall-ray experiment is implemented")
    if ring.is_integers:
        raise Unsupported("Hall-ray experiments need boundary dimension 2")
    l_star = math.log(3)
    c = (s0 - math.log(KAPPA_U_CUSP) - l_star) / 2
    space = ParamSpaceX.circle(0j, 0.0, c0)
    report = HallReport("empty", c0, s0, c, depth, space.t_star, space.t_star + depth * c - l_star,
                        [], None)
    if c <= 0 or not circle_gate(s0, c):
        report.reason = "gate_failed"       # reported as empty at these parameters
        return report
    family = enumerate_ford(ring, None, 0.0)
    zero = family.points[0].location
    exclude = (zero,)
    tree = build_cantor(space, family, c, depth, l_star, max_nodes, exclude)
    report.levels = tree.levels
    if tree.status != "ok":
        report.reason = f"pruned_empty at level {tree.empty_level}"
        return report
    report.status = "nonempty"
    report.dim_estimate = tree.dimension_estimate()
    report.shape_k = s0 * (1 - report.dim_estimate.value)
    pts = leaf_points(tree)
    if len(pts) > witness_limit:
        idx = np.linspace(0, len(pts) - 1, witness_limit).round().astype(int)
        pts = [pts[i] for i in idx]
    dps = int(30 + (report.horizon + c) / math.log(10))
    with mpmath.workdps(dps):
        for xi in pts:
            first, worst = _height_events(ring, xi, s0, report.horizon, zero)
            report.witnesses_checked += 1
            report.first_heights.append(first[1] if first else None)
            report.max_other_height = max(report.max_other_height, worst)
            if first is None or first[0] != zero or abs(first[1] - c0) > 1e-6 or worst > s0 + 1e-6:
                report.witness_failures.append((complex(xi), first, worst))
    return report
