"""``toric-ccc`` command line.

Every command prints a report to stdout: a command echo, human-readable
lines, per-check PASS/FAIL lines, and a JSON results block between
delimiters.  Reports carry no timings, so identical inputs give identical
bytes; timings go to the log on stderr.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys
import time
from dataclasses import dataclass, field
from fractions import Fraction
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__
from .catalog import CATALOG
from .ccc import (COSTANDARD, convolve, dictionary, hom_dim, lambda_sigma_contains,
                  skeleton_containment)
from .cohomology import cohomology_table
from .fan import Fan, is_complete, is_smooth, orbit_data
from .fanfile import FanFileError, load_fan, serialize_fan
from .ktheory import (ample_basis, class_of, fingerprint, fixed_point_weights, in_window,
                      relation_class, rewrite_to_window, KClass)
from .linebundle import (TDivisor, cartier_data, is_ample, is_nef, lattice_points, minkowski_sum,
                         polytope_of)
from .tduality import (asymptotic_distance, metric_default, nohom_scan, tdual_sample)

log = logging.getLogger("toric_ccc")

RESULTS_BEGIN = "--- results ---"
RESULTS_END = "--- end ---"

VALUE_FLAGS = ("--fan", "--c", "--radius", "--grid", "--delta", "--svg", "--scan-radius", "--x", "--y")


class UsageError(Exception):
    pass


def fmt(v) -> str:
    """12 significant digits for floats, p/q for rationals."""
    if isinstance(v, bool):
        return str(v).lower()
    if isinstance(v, Fraction):
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"
    if isinstance(v, (int, np.integer)):
        return str(int(v))
    if isinstance(v, (float, np.floating)):
        return f"{float(v):.12g}"
    if isinstance(v, (tuple, list, np.ndarray)):
        return "(" + ", ".join(fmt(x) for x in v) + ")"
    return str(v)


def _jsonable(v):
    if isinstance(v, bool) or v is None or isinstance(v, str):
        return v
    if isinstance(v, Fraction):
        return fmt(v) if v.denominator != 1 else int(v)
    if isinstance(v, (int, np.integer)):
        return int(v)
    if isinstance(v, (float, np.floating)):
        return float(f"{float(v):.12g}")
    if isinstance(v, dict):
        return {str(k): _jsonable(x) for k, x in v.items()}
    if isinstance(v, (tuple, list, np.ndarray)):
        return [_jsonable(x) for x in v]
    return str(v)


@dataclass
class RunReport:
    command: str
    lines: list[str] = field(default_factory=list)
    checks: list[tuple[str, bool]] = field(default_factory=list)
    results: dict = field(default_factory=dict)
    artifacts: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(ok for _, ok in self.checks)

    def say(self, line: str = ""):
        self.lines.append(line)

    def check(self, name: str, ok: bool):
        self.checks.append((name, bool(ok)))

    def render(self) -> str:
        out = [f"# toric-ccc {self.command}", *self.lines]
        for name, ok in self.checks:
            out.append(f"{'PASS' if ok else 'FAIL'} {name}")
        for a in self.artifacts:
            out.append(f"wrote {a}")
        out.append(RESULTS_BEGIN)
        data = _jsonable(self.results)
        body = ",\n".join(f"  {json.dumps(k)}: {json.dumps(data[k], sort_keys=True)}" for k in sorted(data))
        out.append("{\n" + body + "\n}" if body else "{}")
        out.append(RESULTS_END)
        out.append(f"status: {'PASS' if self.passed else 'FAIL'}")
        return "\n".join(out) + "\n"


# --- argument helpers ---------------------------------------------------

def resolve_fan(name: str | None) -> Fan:
    if name is None:
        raise UsageError("--fan is required")
    path = Path(name)
    if path.is_file():
        return load_fan(path)
    by_name = {k.lower(): f for k, f in CATALOG.items()}
    key = path.stem.lower() if path.suffix == ".json" else name.lower()
    if key in by_name:
        return by_name[key]
    raise UsageError(f"{name}: no such fan file or catalog name (catalog: {', '.join(CATALOG)})")


def parse_ints(text: str) -> tuple[int, ...]:
    try:
        return tuple(int(t) for t in text.split(",") if t.strip())
    except ValueError:
        raise UsageError(f"--c expects comma-separated integers, got {text!r}") from None


def parse_rationals(text: str) -> tuple[Fraction, ...]:
    try:
        return tuple(Fraction(t.strip()) for t in text.split(",") if t.strip())
    except ValueError:
        raise UsageError(f"expected comma-separated rationals, got {text!r}") from None


def divisors(args, f: Fan, count: int | None = None) -> list[TDivisor]:
    cs = args.c or []
    if count is not None and len(cs) != count:
        raise UsageError(f"this command needs exactly {count} --c value(s), got {len(cs)}")
    out = []
    for text in cs:
        c = parse_ints(text)
        if len(c) != f.n_rays:
            raise UsageError(f"--c {text}: {len(c)} coefficients for a fan with {f.n_rays} rays")
        out.append(TDivisor(f, c))
    return out


def _desc(d: TDivisor) -> str:
    return "c = " + fmt(d.coeffs)


# --- commands -------------------------------------------------------------

def cmd_fan_check(args, rep: RunReport):
    f = resolve_fan(args.fan)
    complete, smooth = is_complete(f), is_smooth(f)
    rep.say(f"dimension {f.dim}, {f.n_rays} rays, {len(f.max_cones)} maximal cones, "
            f"{len(f.cone_index_sets)} cones")
    for i, r in enumerate(f.rays):
        label = f" ({f.labels[i]})" if f.labels else ""
        rep.say(f"ray {i}{label}: {fmt(r)}")
    rep.say(f"complete: {fmt(complete)}")
    rep.say(f"smooth: {fmt(smooth)}")
    orbits = {}
    for idx in f.cone_index_sets:
        orbits[",".join(map(str, idx)) or "0"] = orbit_data(f, f.cone(idx)).orbit_dim
    rep.results = {"dim": f.dim, "rays": f.rays, "max_cones": f.max_cones, "complete": complete,
                   "smooth": smooth, "orbit_dims": orbits, "serialized": serialize_fan(f)}


def cmd_bundle_polytope(args, rep: RunReport):
    f = resolve_fan(args.fan)
    (d,) = divisors(args, f, 1)
    p = polytope_of(d)
    pts = lattice_points(p)
    amp, nef = is_ample(d), is_nef(d)
    rep.say(_desc(d))
    rep.say(f"ample: {fmt(amp)}, nef: {fmt(nef)}")
    rep.say(f"Delta_c vertices: {', '.join(fmt(v) for v in p.vertices) or 'empty'}")
    rep.say(f"lattice points: {len(pts)}")
    res = {"c": d.coeffs, "ample": amp, "nef": nef, "vertices": p.vertices, "lattice_points": pts,
           "dim": p.dim}
    if is_smooth(f):
        m = cartier_data(d).m
        for k, mk in enumerate(m):
            rep.say(f"m_sigma for cone {fmt(f.max_cones[k])}: {fmt(mk)}")
        res["m_sigma"] = m
    rep.results = res


def cmd_bundle_cohomology(args, rep: RunReport):
    f = resolve_fan(args.fan)
    (d,) = divisors(args, f, 1)
    table = cohomology_table(d, scan_radius=args.scan_radius)
    rep.say(_desc(d))
    rep.say("h = " + fmt(table.totals))
    rep.say(f"chi = {table.euler}")
    for m in sorted(table.weights):
        rep.say(f"  weight {fmt(m)}: {fmt(table.weights[m].dims)}")
    rep.results = {"c": d.coeffs, "h": table.totals, "chi": table.euler, "scan_radius": table.radius,
                   "weights": {fmt(m): table.weights[m].dims for m in sorted(table.weights)}}


def cmd_ccc_dict(args, rep: RunReport):
    f = resolve_fan(args.fan)
    (d,) = divisors(args, f, 1)
    e = dictionary(d)
    rep.say(_desc(d))
    rep.say(e.sheaf.describe())
    strata = []
    for s in e.skeleton:
        face = ", ".join(fmt(v) for v in s.base.vertices)
        cone = "cone[" + ", ".join(fmt(g) for g in s.cone_part) + "]" if s.cone_part else "{0}"
        rep.say(f"  stratum conv[{face}] x {cone}")
        strata.append({"face": s.base.vertices, "cone": s.cone_part})
    rep.results = {"c": d.coeffs, "kind": e.sheaf.kind, "support": e.sheaf.support.vertices,
                   "description": e.sheaf.describe(), "strata": strata}


def cmd_ccc_hom(args, rep: RunReport):
    f = resolve_fan(args.fan)
    a, b = divisors(args, f, 2)
    ea, eb = dictionary(a), dictionary(b)
    h = hom_dim(ea, eb)
    rep.say(f"from {ea.sheaf.describe()} to {eb.sheaf.describe()}")
    rep.say("dim Hom^i = " + fmt(h))
    rep.results = {"from": a.coeffs, "to": b.coeffs, "hom": h}


def cmd_ccc_convolve(args, rep: RunReport):
    f = resolve_fan(args.fan)
    a, b = divisors(args, f, 2)
    ea, eb = dictionary(a), dictionary(b)
    if ea.sheaf.kind != COSTANDARD or eb.sheaf.kind != COSTANDARD:
        raise UsageError("convolve needs two ample divisors")
    e = convolve(ea, eb)
    rep.say(e.sheaf.describe())
    rep.check("Minkowski sum equals Delta of the sum",
              minkowski_sum(ea.sheaf.support, eb.sheaf.support) == polytope_of(a + b))
    rep.check("convolution matches dictionary of the sum", e.sheaf == dictionary(a + b).sheaf)
    rep.results = {"c": (a + b).coeffs, "support": e.sheaf.support.vertices}


def cmd_ccc_contains(args, rep: RunReport):
    f = resolve_fan(args.fan)
    res = {}
    if args.x is not None or args.y is not None:
        if args.x is None or args.y is None:
            raise UsageError("--x and --y go together")
        x, y = parse_rationals(args.x), parse_rationals(args.y)
        ok, w = lambda_sigma_contains(f, x, y)
        rep.say(f"(x, y) = ({fmt(x)}, {fmt(y)}) in Lambda_Sigma: {fmt(ok)}")
        res["point"] = {"x": x, "y": y, "member": ok}
        if w is not None:
            rep.say(f"  witness cone {fmt(w.cone.ray_indices)}, chi = {fmt(w.chi)}")
            res["point"]["witness"] = {"cone": w.cone.ray_indices, "chi": w.chi}
    for d in divisors(args, f):
        ok = skeleton_containment(d)
        rep.check(f"Lambda_{{+-c}} in Lambda_Sigma for {_desc(d)}", ok)
        res.setdefault("containment", {})[fmt(d.coeffs)] = ok
    if not res:
        raise UsageError("give --c or --x/--y")
    rep.results = res


def _sample_summary(s) -> dict:
    return {"points": len(s), "x_min": s.x.min(axis=0) if len(s) else [], "x_max": s.x.max(axis=0) if len(s) else []}


def cmd_tdual_sample(args, rep: RunReport):
    from .plotting import render_svg

    f = resolve_fan(args.fan)
    (d,) = divisors(args, f, 1)
    s = tdual_sample(d, args.radius, args.grid)
    rep.say(_desc(d) + f", radius {fmt(args.radius)}, grid {args.grid}")
    summ = _sample_summary(s)
    rep.say(f"{len(s)} points, x range {fmt(summ['x_min'])} .. {fmt(summ['x_max'])}")
    res = {"c": d.coeffs, **summ}
    if f.dim == 1:
        res["y"] = s.y[:, 0]
        res["x"] = s.x[:, 0]
    if args.svg:
        rep.artifacts.append(str(render_svg(s, args.svg, title=_desc(d))))
    rep.results = res


def cmd_tdual_plot(args, rep: RunReport):
    from .plotting import render_svg

    f = resolve_fan(args.fan)
    ds = divisors(args, f)
    if not ds:
        raise UsageError("give at least one --c")
    samples = [tdual_sample(d, args.radius, args.grid) for d in ds]
    path = args.svg or "tdual.svg"
    for d, s in zip(ds, samples):
        rep.say(f"{_desc(d)}: {dictionary(d).sheaf.describe()}")
        if f.dim == 2:
            from .tduality import facet_margins
            inside = bool(len(s) == 0 or (facet_margins(dictionary(d).sheaf.support, s.x) > -1e-12).all())
            rep.check(f"moment image inside the polytope for {_desc(d)}", inside)
    rep.artifacts.append(str(render_svg(samples, path)))
    rep.results = {"svg": path, "bundles": [d.coeffs for d in ds]}


def cmd_tdual_asym(args, rep: RunReport):
    f = resolve_fan(args.fan)
    (d,) = divisors(args, f, 1)
    model = metric_default(d)
    t = args.radius
    rows = {}
    rep.say(_desc(d) + f", t = {fmt(t)}")
    for idx in f.cone_index_sets:
        if not idx:
            continue
        dist = asymptotic_distance(d, model, f.cone(idx), t)
        rows[",".join(map(str, idx))] = dist
        rep.say(f"  tau = cone{fmt(idx)}: distance {fmt(dist)}")
    rep.results = {"c": d.coeffs, "t": t, "distances": rows}


def cmd_tdual_nohom(args, rep: RunReport):
    f = resolve_fan(args.fan)
    (d,) = divisors(args, f, 1)
    model = metric_default(d)
    rows = {}
    for q in (-polytope_of(d)).vertices:
        k = nohom_scan(d, model, q, args.delta, args.grid)
        rows[fmt(q)] = k
        rep.say(f"vertex q = {fmt(q)} of -Delta_c: {k} grid solutions with s < {fmt(args.delta)}")
    rep.results = {"c": d.coeffs, "delta": args.delta, "grid": args.grid, "counts": rows}


def _kclass_rows(k: KClass) -> list[dict]:
    return [{"exponents": e, "character": {fmt(m): c for m, c in sorted(ch.terms.items())}}
            for e, ch in sorted(k.terms.items())]


def cmd_ktheory_basis(args, rep: RunReport):
    f = resolve_fan(args.fan)
    b = ample_basis(f)
    w = fixed_point_weights(b)
    for i, (L, n) in enumerate(zip(b, b.shifts)):
        rep.say(f"L_{i + 1} = {fmt(L.coeffs)} (shift {n})")
    for i in range(w.r):
        rep.say(f"  u_{i + 1}: " + " ".join(fmt(u) for u in w.u[i]))
    rep.results = {"basis": [L.coeffs for L in b], "shifts": b.shifts, "weights": w.u}


def cmd_ktheory_relations(args, rep: RunReport):
    f = resolve_fan(args.fan)
    w = fixed_point_weights(ample_basis(f))
    rels = []
    for i in range(w.r):
        k = relation_class(i, w)
        zero = all(ch.is_zero() for ch in fingerprint(k, w))
        rep.say(f"relation {i + 1}: {len(k.terms)} exponent terms")
        rep.check(f"relation {i + 1} has zero fingerprint", zero)
        rels.append(_kclass_rows(k))
    rep.results = {"relations": rels}


def cmd_ktheory_rewrite(args, rep: RunReport):
    f = resolve_fan(args.fan)
    b = ample_basis(f)
    w = fixed_point_weights(b)
    ds = divisors(args, f)
    k = class_of(ds[0], b) if ds else KClass.one(f.dim, w.r)
    out = rewrite_to_window(k, w)
    rep.say(("class of " + _desc(ds[0])) if ds else "class of the structure sheaf")
    for e, ch in sorted(out.terms.items()):
        rep.say(f"  L^{fmt(e)}: {ch}")
    rep.check("exponents in the window", in_window(out, w.v))
    rep.check("fingerprint preserved", fingerprint(out, w) == fingerprint(k, w))
    rep.results = {"input": _kclass_rows(k), "window": _kclass_rows(out), "v": w.v}


def cmd_verify_all(args, rep: RunReport):
    from .verify import run_checks

    results = run_checks()
    for r in results:
        rep.say(r.line())
        rep.check(f"criterion {r.criterion.number} ({r.criterion.key})", r.passed)
    rep.results = {str(r.criterion.number): {"key": r.criterion.key, "passed": r.passed, "detail": r.detail}
                   for r in results}
    if args.svg:
        from .catalog import P1
        from .plotting import render_svg

        samples = [tdual_sample(TDivisor(P1, c), 6.0, 400) for c in ((1, 0), (0, 1), (-2, 0))]
        rep.artifacts.append(str(render_svg(samples, args.svg)))


COMMANDS = {
    ("fan", "check"): cmd_fan_check,
    ("bundle", "polytope"): cmd_bundle_polytope,
    ("bundle", "cohomology"): cmd_bundle_cohomology,
    ("ccc", "dict"): cmd_ccc_dict,
    ("ccc", "hom"): cmd_ccc_hom,
    ("ccc", "convolve"): cmd_ccc_convolve,
    ("ccc", "contains"): cmd_ccc_contains,
    ("tdual", "sample"): cmd_tdual_sample,
    ("tdual", "plot"): cmd_tdual_plot,
    ("tdual", "asym"): cmd_tdual_asym,
    ("tdual", "nohom"): cmd_tdual_nohom,
    ("ktheory", "basis"): cmd_ktheory_basis,
    ("ktheory", "relations"): cmd_ktheory_relations,
    ("ktheory", "rewrite"): cmd_ktheory_rewrite,
    ("verify", "all"): cmd_verify_all,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="toric-ccc", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    p.add_argument("-q", "--quiet", action="store_true", help="suppress timing log on stderr")
    groups = p.add_subparsers(dest="group", required=True)
    by_group: dict[str, list[str]] = {}
    for g, a in COMMANDS:
        by_group.setdefault(g, []).append(a)
    for g, actions in by_group.items():
        gp = groups.add_parser(g)
        sub = gp.add_subparsers(dest="action", required=True)
        for a in actions:
            sp = sub.add_parser(a)
            sp.add_argument("--fan", help="fan JSON file or catalog name")
            sp.add_argument("--c", action="append", help="divisor coefficients, comma separated")
            sp.add_argument("--radius", type=float, default=6.0)
            sp.add_argument("--grid", type=int, default=201)
            sp.add_argument("--delta", type=float, default=0.4)
            sp.add_argument("--svg", help="write an SVG figure here")
            sp.add_argument("--scan-radius", type=int, default=None)
            sp.add_argument("--x", help="point of M_R, comma separated rationals")
            sp.add_argument("--y", help="point of N_R, comma separated rationals")
    return p


def _join_negative_values(argv: Sequence[str]) -> list[str]:
    # "--c -2,0" would otherwise be read as an unknown option
    out, it = [], iter(argv)
    for a in it:
        if a in VALUE_FLAGS:
            nxt = next(it, None)
            if nxt is not None and nxt.startswith("-") and nxt[1:2].isdigit():
                out.append(f"{a}={nxt}")
                continue
            out.append(a)
            if nxt is not None:
                out.append(nxt)
        else:
            out.append(a)
    return out


def run(argv: Sequence[str]) -> RunReport:
    echo = " ".join(a for a in argv if a not in ("-q", "--quiet"))
    args = build_parser().parse_args(_join_negative_values(argv))
    rep = RunReport(echo)
    t0 = time.perf_counter()
    COMMANDS[(args.group, args.action)](args, rep)
    log.info("%s %s finished in %.3f s", args.group, args.action, time.perf_counter() - t0)
    return rep


def main(argv: Sequence[str] | None = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    logging.basicConfig(level=logging.WARNING if "-q" in argv or "--quiet" in argv else logging.INFO,
                        format="%(levelname)s %(name)s: %(message)s", stream=sys.stderr)
    try:
        rep = run(argv)
    except UsageError as exc:
        print(f"toric-ccc: usage error: {exc}", file=sys.stderr)
        return 2
    except FanFileError as exc:
        print(f"toric-ccc: bad fan file: {exc}", file=sys.stderr)
        return 1
    except (ValueError, ArithmeticError, RuntimeError) as exc:
        print(f"toric-ccc: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    sys.stdout.write(rep.render())
    return 0 if rep.passed else 1


if __name__ == "__main__":
    sys.exit(main())
