"""The absolute game on intervals and horosphere circles, with Alice's blocking strategy and an auditor."""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field
from enum import Enum

import mpmath

from .dimension_lab import ParamSpaceX, SpaceKind
from .lattice_collections import FamilyKind, ResonantFamily, GAUSSIAN, ZZ, Ring, enumerate_ford, _ring_mp

LOG3 = math.log(3)


class DiffuseThresholdError(ValueError):
    pass


class InvariantBroken(RuntimeError):
    pass


class BobPolicy(Enum):
    ADVERSARIAL = "adversarial"
    RANDOM = "random"
    REPLAY = "replay"


@dataclass
class Ball:
    center: object              # mpf on intervals, mpc on circles
    radius: object
    param: object = None        # position (interval) or angle (circle) for balls centered in X


def n_of_b(b: float) -> int:
    return math.ceil(8 * math.exp(b)) + 1


def _fmt(x) -> str:
    """Round-trippable decimal for an mpf."""
    return mpmath.libmp.to_str(mpmath.mpf(x)._mpf_, mpmath.libmp.repr_dps(mpmath.mp.prec))


def _f17(x) -> str:
    return f"{float(x):.17g}"


# Geometry of X: positions are parametrized by a real number

class _Geom:
    def __init__(self, space: ParamSpaceX):
        self.space = space
        self.circle = space.kind is SpaceKind.CIRCLE
        if space.kind is SpaceKind.INTERVAL:
            self.lo, self.hi = (mpmath.mpf(v) for v in space.window)
        elif self.circle:
            self.c = mpmath.mpc(space.center)
            self.rho = mpmath.exp(-(mpmath.mpf(space.base_size) + space.c0)) / 2
        else:
            raise DiffuseThresholdError("games are played on intervals and circles")

    def point(self, param):
        return self.c + self.rho * mpmath.expj(param) if self.circle else param

    def project(self, z):
        """(parameter of the nearest point of X, distance to X)."""
        if self.circle:
            w = mpmath.mpc(z) - self.c
            return mpmath.arg(w), abs(abs(w) - self.rho)
        x = mpmath.mpf(mpmath.re(z))
        return min(max(x, self.lo), self.hi), abs(mpmath.im(z)) if isinstance(z, mpmath.mpc) else mpmath.mpf(0)

    def threshold(self) -> float:
        if self.circle:
            return self.space.base_size + self.space.c0 + 2 * math.log(2)
        return math.log(2 / float(self.hi - self.lo))

    def host_interval(self, host: Ball, reach):
        """Parameters whose point lies within reach of the host center."""
        if reach < 0:
            return None
        if self.circle:
            if reach >= 2 * self.rho:
                return (host.param - mpmath.pi, host.param + mpmath.pi)
            h = 2 * mpmath.asin(reach / (2 * self.rho))
            return (host.param - h, host.param + h)
        return (max(self.lo, host.param - reach), min(self.hi, host.param + reach))

    def removed_interval(self, center, reach, around):
        """Open parameter interval of points within reach of an ambient center, near parameter around."""
        if self.circle:
            w = mpmath.mpc(center) - self.c
            aw = abs(w)
            if aw == 0:
                return (around - 4, around + 4) if reach > self.rho else None
            # sin^2(half/2) = (reach^2 - (|w| - rho)^2) / (4 rho |w|); acos of a cosine near 1 loses digits
            s2 = (reach ** 2 - (aw - self.rho) ** 2) / (4 * self.rho * aw)
            if s2 <= 0:
                return None
            if s2 >= 1:
                return (around - 4, around + 4)
            half = 2 * mpmath.asin(mpmath.sqrt(s2))
            mid = mpmath.arg(w)
            # shift the arc to the branch nearest to around
            mid += 2 * mpmath.pi * mpmath.nint((around - mid) / (2 * mpmath.pi))
            return (mid - half, mid + half)
        x = mpmath.mpf(mpmath.re(center))
        return (x - reach, x + reach)


def _subtract(iv, hole):
    lo, hi = iv
    if hole is None or hole[1] <= lo or hole[0] >= hi:
        return [iv] if lo <= hi else []
    out = []
    if hole[0] > lo:
        out.append((lo, hole[0]))
    if hole[1] < hi:
        out.append((hole[1], hi))
    return out


def legal_params(geom: _Geom, host: Ball, r_new, block: Ball | None) -> list:
    """Closed parameter intervals for centers y in X with B(y, r_new) inside host minus block."""
    eps = host.radius * mpmath.mpf(10) ** (-(mpmath.mp.dps // 3))
    iv = geom.host_interval(host, host.radius - r_new - eps)
    if iv is None or iv[0] > iv[1]:
        return []
    if block is None:
        return [iv]
    hole = geom.removed_interval(block.center, r_new + block.radius + eps, host.param)
    return _subtract(iv, hole)


def _closest(intervals, target):
    best = None
    for lo, hi in intervals:
        y = min(max(target, lo), hi)
        if best is None or abs(y - target) < abs(best - target):
            best = y
    return best


def diffuse_witness(space: ParamSpaceX, host: Ball, blocked: Ball | None, b_star: float = LOG3) -> Ball:
    """A ball of radius e^{-(t + b_*)} centered in X inside host minus blocked, closest to the host center."""
    geom = _Geom(space)
    t = float(-mpmath.log(host.radius))
    if t < geom.threshold() - 1e-12:
        raise DiffuseThresholdError(f"host radius e^-{t:.4g} above the diffuseness threshold")
    r_new = host.radius * mpmath.exp(-b_star)
    ivs = legal_params(geom, host, r_new, blocked)
    if not ivs:
        raise InvariantBroken("no diffuse witness")
    # prefer the + side on ties
    y = _closest(ivs, host.param + mpmath.mpf(10) ** (-mpmath.mp.dps))
    return Ball(geom.point(y), r_new, y)


def cover_balls(space: ParamSpaceX, ball: Ball, b: float) -> list:
    """N(b) balls of radius r e^{-b} centered in X whose half-radius balls cover 2B n X."""
    if b <= 0:
        raise ValueError("b must be positive")
    geom = _Geom(space)
    n = n_of_b(b)
    rad = ball.radius * mpmath.exp(-b)
    lo, hi = _cover_span(geom, ball, rad)
    step = (hi - lo) / (n - 1)
    return [Ball(geom.point(lo + i * step), rad, lo + i * step) for i in range(n)]


def _cover_span(geom, ball, rad):
    if geom.circle:
        # projections of relevant points land within 2r + rad/4 of the center
        reach = 2 * ball.radius + rad / 4
        if reach >= 2 * geom.rho:
            return ball.param - mpmath.pi, ball.param + mpmath.pi
        h = 2 * mpmath.asin(reach / (2 * geom.rho))
        return ball.param - h, ball.param + h
    return ball.param - 2 * ball.radius, ball.param + 2 * ball.radius


def cover_margin(space: ParamSpaceX, ball: Ball, b: float):
    """Half-radius minus the largest distance from a point of the span to its nearest center (> 0 means covered)."""
    geom = _Geom(space)
    n = n_of_b(b)
    rad = ball.radius * mpmath.exp(-b)
    lo, hi = _cover_span(geom, ball, rad)
    half_step = (hi - lo) / (2 * (n - 1))
    gap = 2 * geom.rho * mpmath.sin(half_step / 2) if geom.circle else half_step
    return rad / 2 - gap


# Resonant points

def _family_query(family: ResonantFamily, center, radius, s_lo, s_hi, exclude=()):
    if family is None or (family.kind is not FamilyKind.CUSP and not family.points):
        return []
    if family.kind is not FamilyKind.CUSP and s_hi > family.s_max + 1e-9:
        raise ValueError("query beyond the enumerated horizon")
    return [r for r in family.near(center, float(radius), s_lo, s_hi) if r.location not in exclude]


def _exact_location(family, r):
    if family.kind is FamilyKind.CUSP and r.provenance is not None:
        p, q = r.provenance
        if family.ring.is_integers:
            return mpmath.mpf(int(p.a if hasattr(p, "a") else p)) / int(q.a if hasattr(q, "a") else q)
        return _ring_mp(family.ring, p) / _ring_mp(family.ring, q)
    return mpmath.mpmathify(complex(r.location))


def phi_of_b(family: ResonantFamily, b: float, sample, exclude=()) -> int:
    """max over sampled (center, t) of |2B n R(t, b)| with B = B(center, e^{-t})."""
    best = 0
    for center, t in sample:
        best = max(best, len(_family_query(family, center, 2 * math.exp(-t), t - b, t, exclude)))
    return best


def phi_analytic(family: ResonantFamily) -> int:
    """Separation bound: distinct members in the window are >= e^{-t} apart, so 2B holds at most this many."""
    if family is None or family.kind is not FamilyKind.CUSP:
        return 0
    return 5 if family.ring.is_integers else 25


def block_length(n_cover: int, phi_hat: int, b: float, t0: float, s0: float, safety: float = 2.0) -> int:
    """Least m such that m - 1 pigeonhole steps bring ceil(safety * phi_hat) points down to one and mb >= t0 - s0."""
    z = math.ceil(safety * phi_hat)
    steps = 0
    while z > 1:
        z -= math.ceil(z / n_cover)
        steps += 1
    m = max(2, steps + 1)
    while m * b < t0 - s0:
        m += 1
    return m


def block_length_real(n_cover: int, phi_hat: int, b: float, t0: float, s0: float, safety: float = 2.0) -> int:
    """Least m with (N/(N-1))^{m-1} >= safety * phi_hat and mb >= t0 - s0."""
    target = max(1.0, safety * phi_hat)
    m = 1 + math.ceil(math.log(target) / math.log(n_cover / (n_cover - 1)))
    m = max(m, 2)
    while m * b < t0 - s0:
        m += 1
    return m


@dataclass
class GameConfig:
    space: ParamSpaceX
    family: ResonantFamily | None
    beta: float = 0.25
    beta_star: float = 1 / 3
    bob_policy: BobPolicy = BobPolicy.ADVERSARIAL
    seed: int = 0
    script: list | None = None
    max_rounds: int = 60
    m: int | None = None
    exclude: tuple = ()
    phi_hat: int | None = None
    phi_samples: int = 200

    def __post_init__(self):
        if not 0 < self.beta < self.beta_star:
            raise ValueError("beta must lie in (0, beta_star)")
        self.b = -math.log(self.beta / 2)
        self.n_cover = n_of_b(self.b)
        if self.phi_hat is None:
            self.phi_hat = _sampled_phi(self)
        if self.m is None:
            s0 = min((r.size for r in self.family.points), default=0.0) if self.family else 0.0
            self.m = block_length(self.n_cover, self.phi_hat, self.b, self.t0, s0)

    @property
    def t0(self) -> float:
        with mpmath.workdps(30):
            return float(-mpmath.log(initial_ball(self).radius))

    def to_dict(self) -> dict:
        sp = self.space
        d = {"space": sp.kind.value, "beta": _f17(self.beta), "beta_star": _f17(self.beta_star),
             "b": _f17(self.b), "N": self.n_cover, "m": self.m, "phi_hat": self.phi_hat,
             "bob_policy": self.bob_policy.value, "seed": self.seed, "max_rounds": self.max_rounds}
        if sp.kind is SpaceKind.INTERVAL:
            d["window"] = [_f17(v) for v in sp.window]
        else:
            d.update(center=[_f17(sp.center.real), _f17(sp.center.imag)], base_size=_f17(sp.base_size),
                     c0=_f17(sp.c0))
        d["ring"] = self.family.ring.name if self.family is not None else None
        d["family_kind"] = self.family.kind.value if self.family is not None else None
        d["exclude"] = [str(e) for e in self.exclude]
        return d


_PHI_CACHE: dict = {}


def _sampled_phi(cfg: GameConfig) -> int:
    if cfg.family is None or (cfg.family.kind is not FamilyKind.CUSP and not cfg.family.points):
        return 0
    key = (id(cfg.family), cfg.space, round(cfg.b, 12), cfg.phi_samples, cfg.exclude)
    if key in _PHI_CACHE:
        return _PHI_CACHE[key]
    rng = random.Random(12345)
    geom = _Geom(cfg.space)
    sample = []
    t0 = cfg.t0
    for i in range(cfg.phi_samples):
        t = t0 + 8 * rng.random()
        if geom.circle:
            sample.append((complex(geom.point(mpmath.mpf(2 * math.pi * rng.random()))), t))
        else:
            lo, hi = cfg.space.window
            sample.append((lo + (hi - lo) * rng.random(), t))
    # the window of a phase is mb wide; the separation bound does not depend on it
    val = max(phi_of_b(cfg.family, 8 * cfg.b, sample, cfg.exclude), 1)
    _PHI_CACHE[key] = val
    return val


@dataclass
class GameState:
    config: GameConfig
    geom: _Geom
    bob: list = field(default_factory=list)
    alice: list = field(default_factory=list)
    z_before: list = field(default_factory=list)
    z_after: list = field(default_factory=list)
    phase_points: list = field(default_factory=list)     # (location, size, param, distance to X)
    rng: random.Random | None = None


def _blocked(point_param, geom, blocks) -> bool:
    p = geom.point(point_param)
    return any(blk is not None and abs(p - blk.center) <= blk.radius / 2 for blk in blocks)


def _relevant(state_points, geom, ball: Ball, b: float, blocks):
    """Phase points in 2B, within e^{-(t+b)}/4 of X, and not yet blocked."""
    tol = ball.radius * mpmath.exp(-b) / 4
    out = []
    for loc, size, param, dist in state_points:
        if abs(loc - ball.center) > 2 * ball.radius:
            continue
        if geom.circle and dist > tol:
            continue
        if _blocked(param, geom, blocks):
            continue
        out.append((loc, size, param, dist))
    return out


def _phase_points(cfg: GameConfig, geom: _Geom, ball: Ball):
    t = float(-mpmath.log(ball.radius))
    mb = cfg.m * cfg.b
    pts = []
    for r in _family_query(cfg.family, ball.center, 2 * ball.radius, t - mb, t, cfg.exclude):
        loc = _exact_location(cfg.family, r)
        param, dist = geom.project(loc)
        pts.append((loc, r.size, param, dist))
    return pts


def _assign(geom, ball: Ball, b: float, relevant):
    """Cover index of each relevant point: nearest grid center to its projection."""
    n = n_of_b(b)
    rad = ball.radius * mpmath.exp(-b)
    lo, hi = _cover_span(geom, ball, rad)
    step = (hi - lo) / (n - 1)
    idx = []
    for _, _, param, _ in relevant:
        p = param
        if geom.circle:
            p += 2 * mpmath.pi * mpmath.nint((ball.param - p) / (2 * mpmath.pi))
        idx.append(int(min(max(mpmath.nint((p - lo) / step), 0), n - 1)))
    return idx


def alice_move(state: GameState) -> Ball | None:
    """Block the cover ball whose half-radius cell holds the most relevant points (ties: lowest index)."""
    cfg, geom = state.config, state.geom
    k = len(state.alice)
    ball = state.bob[k]
    if k % cfg.m == 0:
        state.phase_points = _phase_points(cfg, geom, ball)
    rel = _relevant(state.phase_points, geom, ball, cfg.b, state.alice)
    state.z_before.append(len(rel))
    if not rel:
        state.alice.append(None)
        state.z_after.append(0)
        return None
    idx = _assign(geom, ball, cfg.b, rel)
    counts = {}
    for i in idx:
        counts[i] = counts.get(i, 0) + 1
    best = min(counts, key=lambda i: (-counts[i], i))
    cover = cover_balls(cfg.space, ball, cfg.b)[best]
    state.alice.append(cover)
    state.z_after.append(len(_relevant(state.phase_points, geom, ball, cfg.b, state.alice)))
    return cover


def bob_move(state: GameState) -> Ball:
    cfg, geom = state.config, state.geom
    host = state.bob[-1]
    block = state.alice[-1]
    policy = cfg.bob_policy
    if policy is BobPolicy.REPLAY:
        k = len(state.bob)
        if cfg.script is None or k >= len(cfg.script):
            raise InvariantBroken(f"replay script exhausted at move {k}")
        param, radius = (mpmath.mpf(v) for v in cfg.script[k])
        ball = Ball(geom.point(param), radius, param)
        if not move_is_legal(geom, cfg.beta, host, block, ball):
            raise InvariantBroken(f"replayed move {k} is illegal")
        return ball
    if policy is BobPolicy.RANDOM:
        r_new = host.radius * (cfg.beta + (1 - cfg.beta) * mpmath.mpf(state.rng.random()))
        ivs = legal_params(geom, host, r_new, block)
        if not ivs:
            r_new = host.radius * cfg.beta
            ivs = legal_params(geom, host, r_new, block)
        if ivs:
            total = sum(hi - lo for lo, hi in ivs)
            u = mpmath.mpf(state.rng.random()) * total
            for lo, hi in ivs:
                if u <= hi - lo:
                    y = lo + u
                    break
                u -= hi - lo
            else:
                y = ivs[-1][1]
            return Ball(geom.point(y), r_new, y)
    else:
        r_new = host.radius * cfg.beta
        target = host.param
        cands = _relevant(state.phase_points, geom, host, cfg.b, state.alice) or \
            [p for p in state.phase_points if abs(p[0] - host.center) <= 2 * host.radius]
        if cands:
            loc, _, param, _ = min(cands, key=lambda p: (abs(p[0] - host.center), p[1]))
            if geom.circle:
                param += 2 * mpmath.pi * mpmath.nint((host.param - param) / (2 * mpmath.pi))
            target = param
        ivs = legal_params(geom, host, r_new, block)
        if ivs:
            y = _closest(ivs, target)
            return Ball(geom.point(y), r_new, y)
    # preferred move illegal: retreat to a diffuse witness and shrink to beta r
    w = diffuse_witness(cfg.space, host, block)
    return Ball(w.center, host.radius * cfg.beta, w.param)


def move_is_legal(geom: _Geom, beta: float, host: Ball, block: Ball | None, ball: Ball) -> bool:
    if not beta * host.radius <= ball.radius <= host.radius:
        return False
    if abs(ball.center - geom.point(ball.param)) > ball.radius * mpmath.mpf(10) ** (-(mpmath.mp.dps // 2)):
        return False
    if not geom.circle and not geom.lo <= ball.param <= geom.hi:
        return False
    if abs(ball.center - host.center) + ball.radius > host.radius:
        return False
    if block is not None and abs(ball.center - block.center) < ball.radius + block.radius:
        return False
    return True


@dataclass
class GameTranscript:
    config: GameConfig
    bob: list
    alice: list
    z_before: list
    z_after: list
    dps: int
    audit: dict | None = None

    def t(self, k) -> float:
        return float(-mpmath.log(self.bob[k].radius))

    def final_ball(self) -> Ball:
        return self.bob[-1]

    def to_json(self) -> str:
        with mpmath.workdps(self.dps):
            moves = []
            for k, bob in enumerate(self.bob):
                mv = {"bob": _ball_json(bob), "alice": None, "t": _f17(self.t(k)), "Z": None}
                if k < len(self.alice):
                    mv["alice"] = _ball_json(self.alice[k]) if self.alice[k] is not None else None
                    mv["Z"] = [self.z_before[k], self.z_after[k]]
                moves.append(mv)
        doc = {"config": self.config.to_dict(), "dps": self.dps, "moves": moves, "audit": self.audit}
        return json.dumps(doc, indent=1, sort_keys=True)

    def script(self) -> list:
        with mpmath.workdps(self.dps):
            return [(_fmt(b.param), _fmt(b.radius)) for b in self.bob]


def _ball_json(ball: Ball) -> dict:
    c = mpmath.mpc(ball.center)
    d = {"center": [_f17(c.real), _f17(c.imag)] if c.imag != 0 else _f17(c.real),
         "radius": _f17(ball.radius), "radius_exact": _fmt(ball.radius), "center_exact": [_fmt(c.real), _fmt(c.imag)]}
    if ball.param is not None:
        d["param"] = _fmt(ball.param)
    return d


def _game_dps(cfg: GameConfig) -> int:
    return int(40 + cfg.max_rounds * math.log10(1 / cfg.beta) + cfg.space.c0 / math.log(10))


def initial_ball(cfg: GameConfig) -> Ball:
    """Seed 0 starts at the middle; other seeds start at a seeded position."""
    geom = _Geom(cfg.space)
    u = mpmath.mpf(random.Random(cfg.seed).random()) if cfg.seed else mpmath.mpf(0.5)
    if geom.circle:
        theta = 2 * mpmath.pi * (u - mpmath.mpf(0.5))
        return Ball(geom.point(theta), geom.rho / 2, theta)
    r = (geom.hi - geom.lo) / 4
    x = geom.lo + r + 2 * r * u
    return Ball(x, r, x)


def play(config: GameConfig) -> GameTranscript:
    dps = _game_dps(config)
    with mpmath.workdps(dps):
        geom = _Geom(config.space)
        state = GameState(config, geom, rng=random.Random(config.seed + 1))
        if config.bob_policy is BobPolicy.REPLAY and config.script:
            p, r = (mpmath.mpf(v) for v in config.script[0])
            state.bob.append(Ball(geom.point(p), r, p))
        else:
            state.bob.append(initial_ball(config))
        for _ in range(config.max_rounds):
            alice_move(state)
            state.bob.append(bob_move(state))
        return GameTranscript(config, state.bob, state.alice, state.z_before, state.z_after, dps)


@dataclass
class AuditReport:
    passed: bool
    failures: list
    phases_checked: int = 0
    points_checked: int = 0
    final_horizon: float = 0.0

    def to_dict(self) -> dict:
        return {"pass": self.passed, "failures": [[k, msg] for k, msg in self.failures],
                "phases_checked": self.phases_checked, "points_checked": self.points_checked,
                "final_horizon": _f17(self.final_horizon)}


def verify_transcript(tr: GameTranscript, family: ResonantFamily | None) -> AuditReport:
    """Recheck legality, per-phase Z decay and the final distance bound from scratch."""
    cfg = tr.config
    failures = []
    phases = 0
    checked = 0
    with mpmath.workdps(tr.dps):
        geom = _Geom(cfg.space)
        beta = mpmath.mpf(cfg.beta)
        for k in range(1, len(tr.bob)):
            if not move_is_legal(geom, cfg.beta, tr.bob[k - 1], tr.alice[k - 1], tr.bob[k]):
                failures.append((k, "illegal Bob move"))
        for k, blk in enumerate(tr.alice):
            if blk is not None and not blk.radius < beta * tr.bob[k].radius:
                failures.append((k, "Alice block radius not below beta r_k"))
        # independent Z bookkeeping
        m, n = cfg.m, cfg.n_cover
        audit_cfg = _AuditCfg(cfg, family)
        pts = []
        for k, blk in enumerate(tr.alice):
            ball = tr.bob[k]
            if k % m == 0:
                pts = _phase_points(audit_cfg, geom, ball)
            before = len(_relevant(pts, geom, ball, cfg.b, tr.alice[:k]))
            after = len(_relevant(pts, geom, ball, cfg.b, tr.alice[:k + 1]))
            if before >= 1 and after > before * (1 - 1 / n):
                failures.append((k, f"Z did not contract: {before} -> {after}"))
            if k % m == m - 1:
                phases += 1
                if after != 0:
                    failures.append((k, f"phase ended with {after} unblocked points"))
        # final invariant
        mb = m * cfg.b
        fin = tr.bob[-1]
        t_end = float(-mpmath.log(fin.radius))
        horizon = t_end - 2 * mb
        lo = -1.0
        while lo < horizon:
            hi = min(lo + 4.0, horizon)
            rad = math.exp(-2 * mb - max(lo, 0.0)) / 2 + float(fin.radius)
            for r in _family_query(family, fin.center, rad, lo, hi, cfg.exclude):
                z = _exact_location(family, r)
                checked += 1
                bound = mpmath.exp(-mpmath.mpf(r.size) - 2 * mb) / 2 - fin.radius
                if abs(fin.center - z) < bound:
                    failures.append((len(tr.bob) - 1, f"final ball too close to {r.location} (size {r.size:.6g})"))
            lo = hi
    report = AuditReport(not failures, failures, phases, checked, horizon)
    tr.audit = report.to_dict()
    return report


class _AuditCfg:
    def __init__(self, cfg: GameConfig, family):
        self.family, self.m, self.b, self.exclude = family, cfg.m, cfg.b, cfg.exclude


def ford_circle_space(c0: float = 2.0) -> tuple:
    """The circle S_C^{c0} around the Gaussian horoball at 0, with the family that excludes it."""
    family = enumerate_ford(GAUSSIAN, None, 0.0)
    zero = family.points[0].location
    return ParamSpaceX.circle(0j, 0.0, c0), family, (zero,)


def run_matches(space: ParamSpaceX, family, betas, count: int, rounds: int = 60, exclude=(),
                policy: BobPolicy = BobPolicy.ADVERSARIAL) -> list:
    """count matches spread over betas (seeds 0..count-1); returns (config, transcript, report)."""
    out = []
    for i in range(count):
        beta = betas[i % len(betas)]
        cfg = GameConfig(space, family, beta=beta, bob_policy=policy, seed=i, max_rounds=rounds,
                         exclude=tuple(exclude))
        tr = play(cfg)
        out.append((cfg, tr, verify_transcript(tr, family)))
    return out
