"""Command-line entry point: deterministic batch commands emitting CSV or JSON."""

from __future__ import annotations

import argparse
import csv
import io
import json
import math
import os
import sys
from fractions import Fraction

from . import absolute_game as game
from .approx_constants import (
    EventKind, c_beta0, c_d, c_inf, c_plus, constants_from_record, event_score, penetration_sequence,
    periodic_distance_record, random_surds, spectrum_sample,
)
from .dimension_lab import (
    ParamSpaceX, box_dim, build_cantor, ford_bad_qmax, ford_bad_set, hall_ray_experiment,
    power_law_params, prop23_lower_bound, D_STAR,
)
from .hyperbolic_core import HPoint
from .lattice_collections import (
    QuadNumber, QuadraticSurd, Ring, ZZ, enumerate_ford, enumerate_quadratic_orbit, parse_surd,
)
from .suites import SUITES, run_suite

DEFAULTS = {
    "ring": "Z", "surd": None, "x": None, "z": None, "kind": "cusp", "smax": 20.0, "c": 3.0,
    "c0": 5.0, "s0": 12.0, "depth": 6, "beta": 0.25, "rounds": 60, "seed": 0, "out": None,
    "format": "csv", "precision": 17, "count": 10, "mode": "box", "tau_l": None, "space": "interval",
    "max_nodes": 16,
}


class UsageError(Exception):
    pass


def parse_ring(name: str) -> Ring:
    name = name.strip()
    if name in ("Z", "ZZ"):
        return ZZ
    if name.startswith("O") and name[1:].isdigit():
        return Ring(int(name[1:]))
    raise UsageError(f"unknown ring {name!r}")


def fmt_value(v, digits: int = 17) -> str:
    """Decimals at the given significant digits; exact values as strings."""
    if v is None:
        return ""
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, int):
        return str(v)
    if isinstance(v, Fraction):
        return f"{v.numerator}/{v.denominator}"
    if isinstance(v, QuadraticSurd):
        return str(v)
    if isinstance(v, QuadNumber):
        return str(v)
    if isinstance(v, float):
        if math.isinf(v) or math.isnan(v):
            return str(v)
        return f"{v:.{digits}g}"
    if isinstance(v, complex):
        return f"{v.real:.{digits}g}{v.imag:+.{digits}g}j"
    return str(v)


def emit_csv(header, rows, digits: int = 17) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([fmt_value(row.get(h), digits) for h in header])
    return buf.getvalue()


def emit_json(obj, digits: int = 17) -> str:
    def conv(v):
        if isinstance(v, dict):
            return {str(k): conv(x) for k, x in v.items()}
        if isinstance(v, (list, tuple)):
            return [conv(x) for x in v]
        if isinstance(v, (str, int)) or v is None:
            return v
        return fmt_value(v, digits)
    return json.dumps(conv(obj), indent=1, sort_keys=True) + "\n"


def load_config(path: str | None) -> dict:
    """Plain key=value lines; '#' starts a comment."""
    if not path:
        return {}
    out = {}
    with open(path) as fh:
        for line in fh:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"bad config line {line!r}")
            k, v = line.split("=", 1)
            out[k.strip().replace("-", "_")] = v.strip()
    return out


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ring")
    common.add_argument("--surd", action="append")
    common.add_argument("--x", action="append", help="rational p/q or decimal")
    common.add_argument("--z", action="append", help="complex point as re,im")
    common.add_argument("--kind", choices=["cusp", "distance", "geodesic"])
    common.add_argument("--smax", type=float)
    common.add_argument("--c", type=float)
    common.add_argument("--c0", type=float)
    common.add_argument("--s0", type=float)
    common.add_argument("--depth", type=int)
    common.add_argument("--beta", type=float)
    common.add_argument("--rounds", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--count", type=int)
    common.add_argument("--out")
    common.add_argument("--format", choices=["csv", "json"])
    common.add_argument("--precision", type=int)
    p = argparse.ArgumentParser(prog="geodesic-spectra", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)
    sub.add_parser("const", parents=[common], help="approximation constants")
    sub.add_parser("penetrate", parents=[common], help="event sequences of a ray")
    sub.add_parser("spectrum", parents=[common], help="sampled spectrum tables")
    d = sub.add_parser("dim", parents=[common], help="box, cantor and prop23 reports")
    d.add_argument("--mode", choices=["box", "cantor", "prop23"])
    d.add_argument("--tau-l", dest="tau_l", type=float)
    d.add_argument("--max-nodes", dest="max_nodes", type=int)
    h = sub.add_parser("hall", parents=[common], help="Hall-ray experiment")
    h.add_argument("--max-nodes", dest="max_nodes", type=int)
    g = sub.add_parser("game", parents=[common], help="absolute game matches with audits")
    g.add_argument("--space", choices=["interval", "circle"])
    c = sub.add_parser("check", parents=[common], help="invariant and acceptance suites")
    c.add_argument("suites", nargs="*", choices=sorted(SUITES) + ["all"], default=[])
    return p


def resolve(ns: argparse.Namespace, env=None) -> dict:
    """Flags over config file over defaults."""
    env = os.environ if env is None else env
    cfg = load_config(env.get("GSL_CONFIG"))
    out = dict(DEFAULTS)
    for k, v in cfg.items():
        if k in out:
            out[k] = _coerce(k, v)
    for k, v in vars(ns).items():
        if v is not None:
            out[k] = v
    return out


def _coerce(key, text):
    default = DEFAULTS[key]
    if key in ("surd", "x", "z"):
        return [t for t in text.split(";") if t]
    if isinstance(default, bool):
        return text.lower() in ("1", "true", "yes")
    if isinstance(default, int):
        return int(text)
    if isinstance(default, float):
        return float(text)
    return text


def _parse_real(text: str):
    text = text.strip()
    if "/" in text:
        return Fraction(text)
    return float(text)


def _parse_complex(text: str) -> complex:
    re_, im = text.split(",")
    return complex(float(re_), float(im))


def cmd_const(o) -> str:
    ring = parse_ring(o["ring"])
    rows = []
    if o["kind"] == "geodesic":
        beta0 = parse_surd((o["surd"] or ["golden"])[0])
        fam = enumerate_quadratic_orbit(ZZ, beta0, o["smax"])
        for x in o["x"] or []:
            br = c_beta0(_parse_real(x), fam)
            rows.append({"input": x, "kind": "geodesic", "c": br.upper, "status": br.status.value})
        return _out(o, ["input", "kind", "c", "status"], rows)
    if not ring.is_integers:
        for z in o["z"] or []:
            br = c_d(_parse_complex(z), ring, int(math.exp(o["smax"])))
            H = -math.log(2 * br.upper) if br.upper > 0 else math.inf
            rows.append({"input": z, "kind": "cusp", "ring": ring.name, "c": br.upper, "H": H,
                         "status": br.status.value})
        return _out(o, ["input", "kind", "ring", "c", "H", "status"], rows)
    inputs = [parse_surd(s) for s in o["surd"] or []] + [_parse_real(x) for x in o["x"] or []]
    for x in inputs:
        br = c_inf(x)
        cp = c_plus(x) if isinstance(x, QuadraticSurd) else None
        H = -math.log(2 * br.upper) if br.upper > 0 else math.inf
        rows.append({"input": x, "kind": "cusp", "ring": "Z", "c": br.upper,
                     "c_plus": float(cp) if cp is not None else None, "H": H, "status": br.status.value})
    return _out(o, ["input", "kind", "ring", "c", "c_plus", "H", "status"], rows)


def cmd_penetrate(o) -> str:
    ring = parse_ring(o["ring"])
    rows = []
    if o["kind"] == "distance":
        for s in o["surd"] or []:
            rec = periodic_distance_record(parse_surd(s), HPoint(0, 2.0))
            for t, v, _ in rec.events:
                rows.append({"input": s, "time": t, "value": v, "score": event_score(rec, v)})
        return _out(o, ["input", "time", "value", "score"], rows)
    fam = enumerate_ford(ring, (0, 1) if ring.is_integers else None, 0.0)
    targets = [(s, parse_surd(s)) for s in o["surd"] or []]
    targets += [(x, _parse_real(x)) for x in o["x"] or []]
    targets += [(z, _parse_complex(z)) for z in o["z"] or []]
    for label, x in targets:
        rec = penetration_sequence(x, fam, horizon=o["smax"])
        for t, v, where in rec.events:
            rows.append({"input": label, "time": t, "value": v, "label": where})
    return _out(o, ["input", "time", "value", "label"], rows)


def cmd_spectrum(o) -> str:
    kind = EventKind(o["kind"] if o["kind"] != "geodesic" else "cusp")
    surds = random_surds(o["count"], o["seed"])
    rows = spectrum_sample(kind, surds)
    header = ["input", "kind", "constant", "log_constant", "asymptotic_constant", "status"]
    return _out(o, header, rows)


def cmd_dim(o) -> str:
    space = ParamSpaceX.interval()
    mode = o["mode"]
    if mode == "box":
        kept = ford_bad_set(o["c"], ford_bad_qmax(o["c"], 12))
        est = box_dim(space, kept, range(5, 13))
        rows = [{"delta": d, "count": n} for d, n in zip(est.scales, est.counts)]
        rows.append({"delta": "slope", "count": est.value})
        return _out(o, ["delta", "count"], rows)
    if mode == "cantor":
        fam = enumerate_ford(ZZ, (0, 1), 0.0)
        tree = build_cantor(space, fam, o["c"], o["depth"], max_nodes=o["max_nodes"])
        rows = [{"level": i, "t": lv.t, "expanded": lv.expanded, "children": lv.children,
                 "survivors": lv.survivors, "estimated_count": lv.estimated_count}
                for i, lv in enumerate(tree.levels)]
        return _out(o, ["level", "t", "expanded", "children", "survivors", "estimated_count"], rows)
    pl = power_law_params(space)
    if o["tau_l"] is None:
        raise UsageError("--tau-l is required for prop23")
    bound = prop23_lower_bound(pl.tau, pl.c_l, pl.c_u, D_STAR, o["tau_l"], o["c"])
    return _out(o, ["c", "tau_l", "bound"], [{"c": o["c"], "tau_l": o["tau_l"], "bound": bound}])


def cmd_hall(o) -> str:
    ring = parse_ring(o["ring"] if o["ring"] != "Z" else "O1")
    rep = hall_ray_experiment("cusp", o["c0"], o["s0"], o["depth"], ring, max_nodes=o["max_nodes"])
    rows = [{"level": i, "t": lv.t, "expanded": lv.expanded, "children": lv.children,
             "survivors": lv.survivors} for i, lv in enumerate(rep.levels)]
    summary = {"status": rep.status, "reason": rep.reason, "c": rep.c, "t_star": rep.t_star, "horizon": rep.horizon,
               "dim_estimate": rep.dim_estimate.value if rep.dim_estimate else None,
               "witnesses": rep.witnesses_checked, "witness_failures": len(rep.witness_failures)}
    if o["format"] == "json":
        return emit_json({"summary": summary, "levels": rows}, o["precision"])
    return emit_csv(["level", "t", "expanded", "children", "survivors"], rows, o["precision"]) + \
        emit_csv(list(summary), [summary], o["precision"])


def cmd_game(o) -> str:
    if o["space"] == "circle":
        space, fam, excl = game.ford_circle_space(o["c0"] if o["c0"] != DEFAULTS["c0"] else 2.0)
    else:
        space, fam, excl = ParamSpaceX.interval(), enumerate_ford(ZZ, (0, 1), 0.0), ()
    cfg = game.GameConfig(space, fam, beta=o["beta"], seed=o["seed"], max_rounds=o["rounds"], exclude=excl)
    tr = game.play(cfg)
    rep = game.verify_transcript(tr, fam)
    if o["format"] == "json":
        return tr.to_json() + "\n"
    rows = [{"t": tr.t(k), "bob_radius": float(b.radius),
             "alice": tr.alice[k] is not None if k < len(tr.alice) else None,
             "z_before": tr.z_before[k] if k < len(tr.z_before) else None,
             "z_after": tr.z_after[k] if k < len(tr.z_after) else None} for k, b in enumerate(tr.bob)]
    return emit_csv(["t", "bob_radius", "alice", "z_before", "z_after"], rows, o["precision"]) + \
        emit_csv(["audit_pass", "failures"], [{"audit_pass": rep.passed, "failures": len(rep.failures)}])


def cmd_check(o, names) -> tuple:
    if not names or "all" in names:
        names = list(SUITES)
    lines, ok = [], True
    rows = []
    for n in names:
        res = run_suite(n)
        ok &= res.passed
        lines.append(res.line())
        rows.append({"suite": n, "pass": res.passed, "seconds": round(res.seconds, 1)})
    text = emit_csv(["suite", "pass"], rows, o["precision"])
    return text, lines, ok


def _out(o, header, rows) -> str:
    if o["format"] == "json":
        return emit_json(rows, o["precision"])
    return emit_csv(header, rows, o["precision"])


COMMANDS = {"const": cmd_const, "penetrate": cmd_penetrate, "spectrum": cmd_spectrum, "dim": cmd_dim,
            "hall": cmd_hall, "game": cmd_game}


def dispatch(argv=None, stdout=None, stderr=None) -> int:
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    parser = _parser()
    try:
        ns = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        o = resolve(ns)
        if ns.command == "check":
            text, lines, ok = cmd_check(o, ns.suites)
            for ln in lines:
                print(ln, file=stderr)
        else:
            text, ok = COMMANDS[ns.command](o), True
    except UsageError as exc:
        print(f"usage error: {exc}", file=stderr)
        return 2
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        print(f"error: {exc}", file=stderr)
        return 1
    if o["out"]:
        with open(o["out"], "w") as fh:
            fh.write(text)
    else:
        stdout.write(text)
    return 0 if ok else 1


def main():
    sys.exit(dispatch())


if __name__ == "__main__":
    main()
