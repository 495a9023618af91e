"""Batch front door: subcommands and the ``run`` experiment runner.

Every subcommand is a one-task experiment spec built from its flags, so the
subcommands and ``run`` share one execution path.  Reports are JSON with sorted
keys and no timestamps; re-runs are byte-identical.

Exit codes: 0 ok, 1 a task failed or missed its ``expect`` value, 2 usage or
spec errors.

Spec files are YAML::

    grid: "4:23"            # any Settings key, e.g. q_max, precision
    objects:
      k: {kind: net, expr: "rho"}
      geo: {kind: series, family: geometric, k: "@k"}
      d1: {kind: gsf, family: delta1, h: log}
    tasks:
      - {name: geo_sum, op: sum, series: "@geo", out: geo.json, expect: converges}
      - {op: pw, f: "@d1", out: pw.json, needs: [geo_sum]}

Strings starting with ``@`` reference objects; other strings are expressions
in ``eps``, ``rho``, ``k`` and ``K``.
"""

from __future__ import annotations

import argparse
import graphlib
import io
import json
import os
import sys
import tempfile
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any, Callable

import yaml

from . import ghf_analytic, hft, hps, hyperseries
from .config import ConfigError, Settings, load_settings
from .expr import ExprError, compile_expr
from .gauge_net import Gauge, GenComplex, Unavailable, valuation
from .hyperseq import HyperSequence, hyperlimit
from .report import SCHEMA_VERSION, dumps, to_jsonable

EXIT_OK, EXIT_CONTRACT, EXIT_USAGE = 0, 1, 2


class SpecError(ValueError):
    """Malformed experiment spec; carries the source line when known."""

    def __init__(self, msg: str, line: int | None = None):
        self.line = line
        super().__init__(f"line {line}: {msg}" if line else msg)


# -- spec loading ----------------------------------------------------------------


class _LineLoader(yaml.SafeLoader):
    """Records the 1-based line of every mapping under ``__line__``."""

    def construct_mapping(self, node, deep=False):
        out = super().construct_mapping(node, deep=deep)
        out["__line__"] = node.start_mark.line + 1
        return out


def _strip(obj: Any) -> Any:
    if isinstance(obj, dict):
        return {k: _strip(v) for k, v in obj.items() if k != "__line__"}
    if isinstance(obj, list):
        return [_strip(v) for v in obj]
    return obj


def parse_spec(text: str) -> dict[str, Any]:
    try:
        raw = yaml.load(text, Loader=_LineLoader)
    except yaml.MarkedYAMLError as exc:
        mark = exc.problem_mark or exc.context_mark
        raise SpecError(exc.problem or str(exc), mark.line + 1 if mark else None) from None
    if not isinstance(raw, dict):
        raise SpecError("spec must be a mapping with 'objects' and 'tasks'", 1)
    validate_spec(raw)
    return raw


SETTINGS_KEYS = {f for f in Settings.__dataclass_fields__} | {"grid"}
TOP_KEYS = {"objects", "tasks", "K", "__line__"}


def _refs(value: Any) -> list[str]:
    if isinstance(value, str) and value.startswith("@"):
        return [value[1:]]
    if isinstance(value, dict):
        return [r for k, v in value.items() if k != "__line__" for r in _refs(v)]
    if isinstance(value, list):
        return [r for v in value for r in _refs(v)]
    return []


def validate_spec(raw: dict[str, Any]) -> None:
    line = raw.get("__line__")
    for key in raw:
        if key not in TOP_KEYS and key not in SETTINGS_KEYS:
            raise SpecError(f"unknown top-level key {key!r}", line)
    try:
        settings_of(raw)
    except (ConfigError, TypeError, ValueError) as exc:
        raise SpecError(f"bad settings: {exc}", line) from None
    objects = raw.get("objects") or {}
    if not isinstance(objects, dict):
        raise SpecError("'objects' must be a mapping", line)
    deps = {}
    for name, decl in objects.items():
        if name == "__line__":
            continue
        if not isinstance(decl, dict) or decl.get("kind") not in KINDS:
            where = decl.get("__line__") if isinstance(decl, dict) else objects.get("__line__")
            raise SpecError(f"object {name!r} needs kind in {sorted(KINDS)}", where)
        deps[name] = _refs(decl)
        for ref in deps[name]:
            if ref not in objects:
                raise SpecError(f"object {name!r} references unknown @{ref}", decl["__line__"])
    try:
        tuple(graphlib.TopologicalSorter(deps).static_order())
    except graphlib.CycleError as exc:
        raise SpecError(f"object references form a cycle: {' -> '.join(exc.args[1])}", objects.get("__line__")) from None

    tasks = raw.get("tasks")
    if not isinstance(tasks, list) or not tasks:
        raise SpecError("'tasks' must be a non-empty list", line)
    names = set()
    for i, task in enumerate(tasks):
        if not isinstance(task, dict):
            raise SpecError(f"task {i + 1} must be a mapping", line)
        tl = task.get("__line__")
        if task.get("op") not in OPS:
            raise SpecError(f"task {i + 1}: unknown op {task.get('op')!r}; known: {sorted(OPS)}", tl)
        name = task.setdefault("name", f"task{i + 1}")
        if name in names:
            raise SpecError(f"duplicate task name {name!r}", tl)
        names.add(name)
        for ref in _refs(task):
            if ref not in objects:
                raise SpecError(f"task {name!r} references unknown @{ref}", tl)
        allowed = set(OPS[task["op"]].params) | {"op", "name", "out", "expect", "needs", "__line__"}
        extra = sorted(set(task) - allowed)
        if extra:
            raise SpecError(f"task {name!r}: unknown arguments {extra} for op {task['op']!r}", tl)
    order = {t["name"]: list(t.get("needs") or []) for t in tasks}
    for t in tasks:
        for dep in order[t["name"]]:
            if dep not in order:
                raise SpecError(f"task {t['name']!r} needs unknown task {dep!r}", t["__line__"])
    try:
        tuple(graphlib.TopologicalSorter(order).static_order())
    except graphlib.CycleError as exc:
        raise SpecError(f"task dependencies form a cycle: {' -> '.join(exc.args[1])}", line) from None


def settings_of(raw: dict[str, Any]) -> Settings:
    overrides = {k: v for k, v in raw.items() if k in SETTINGS_KEYS}
    return load_settings(None, **overrides)


# -- objects ------------------------------------------------------------------------


class Context:
    """A gauge plus lazily built objects of one spec."""

    def __init__(self, raw: dict[str, Any]):
        self.raw = _strip(raw)
        self.gauge = Gauge(settings_of(self.raw))
        self.K = self.raw.get("K", 1)
        self._objects: dict[str, Any] = {}

    def value(self, v: Any) -> Any:
        """Resolve an argument: @ref, expression string, number or list."""
        if isinstance(v, str) and v.startswith("@"):
            return self.obj(v[1:])
        if isinstance(v, str):
            return self.gauge.from_expr(v, K=self.K)
        if isinstance(v, list):
            return [self.value(x) for x in v]
        return v

    def obj(self, name: str) -> Any:
        if name not in self._objects:
            decl = dict(self.raw["objects"][name])
            self._objects[name] = KINDS[decl.pop("kind")](self, decl)
        return self._objects[name]


def _net_obj(ctx: Context, d: dict) -> GenComplex:
    return ctx.value(d["expr"])


def _series_obj(ctx: Context, d: dict) -> hyperseries.SeriesSequence:
    g = ctx.gauge
    if "term" in d:
        return hyperseries.series_from_expr(g, d["term"], K=ctx.K)
    family = d.get("family", "geometric")
    if family not in hyperseries.FAMILIES:
        raise SpecError(f"unknown series family {family!r}; known: {sorted(hyperseries.FAMILIES)}")
    params = {k: ctx.value(v) for k, v in d.items() if k != "family"}
    return hyperseries.FAMILIES[family](g, **params)


def _sequence_obj(ctx: Context, d: dict) -> HyperSequence:
    expr = compile_expr(d["term"], ("n", "eps", "rho", "k", "K"))
    K = ctx.K
    return HyperSequence(ctx.gauge, lambda n, p: expr(p.m, n=n, eps=p.eps, rho=p.rho, k=p.k, K=K), d["term"])


def _hps_obj(ctx: Context, d: dict) -> hps.HpsCoefficients:
    if "coeff" in d:
        return hps.HpsCoefficients.from_expr(ctx.gauge, d["coeff"])
    params = {k: v for k, v in d.items() if k != "family"}
    return hps.builtin(d.get("family", "geometric"), ctx.gauge, **params)


def _ghf_obj(ctx: Context, d: dict) -> ghf_analytic.GhfNet:
    if "expr" in d:
        return ghf_analytic.GhfNet.from_expr(ctx.gauge, d["expr"])
    params = {k: v for k, v in d.items() if k != "family"}
    return ghf_analytic.builtin(d.get("family", "exp"), ctx.gauge, **params)


def _halfwidth(ctx: Context, h: Any) -> GenComplex:
    if h in (None, "log", "power"):
        return hft.default_halfwidth(ctx.gauge, h or "log")
    return ctx.value(h)


def _gsf_obj(ctx: Context, d: dict) -> hft.GsfNet:
    h = _halfwidth(ctx, d.get("h"))
    if "expr" in d:
        return hft.GsfNet.from_expr(ctx.gauge, d["expr"], halfwidth=h)
    params = {k: v for k, v in d.items() if k not in ("family", "h")}
    return hft.builtin(d.get("family", "delta1"), ctx.gauge, halfwidth=h, **params)


def _chain_obj(ctx: Context, d: dict) -> ghf_analytic.ContinuationChain:
    return ghf_analytic.chain(ctx.gauge, ctx.value(d["centers"]), ctx.value(d["radii"]))


KINDS: dict[str, Callable[[Context, dict], Any]] = {
    "net": _net_obj, "series": _series_obj, "sequence": _sequence_obj, "hps": _hps_obj,
    "ghf": _ghf_obj, "gsf": _gsf_obj, "chain": _chain_obj,
}


# -- operations ---------------------------------------------------------------------


@dataclass
class Outcome:
    status: str
    result: Any
    extra: dict[str, Any] = field(default_factory=dict)


@dataclass
class Op:
    fn: Callable[[Context, dict], Outcome]
    params: tuple[str, ...]


def _sum(ctx: Context, a: dict) -> Outcome:
    res = hyperseries.sum_hyperseries(ctx.value(a["series"]))
    return Outcome(res.status, res)


def _classify(ctx: Context, a: dict) -> Outcome:
    test = a.get("test", "ratio")
    fn = {"ratio": hyperseries.ratio_test, "root": hyperseries.root_test,
          "sum": hyperseries.sum_hyperseries}.get(test)
    if fn is None:
        raise SpecError(f"unknown test {test!r}; use ratio, root or sum")
    res = fn(ctx.value(a["series"]))
    return Outcome(res.status, res, {"test": test})


def _hyperlim(ctx: Context, a: dict) -> Outcome:
    res = hyperlimit(ctx.value(a["sequence"]))
    return Outcome(res.status, res)


def _constant_value(net: GenComplex) -> Any:
    """The common value of a net when every grid point agrees, else None."""
    vals = net.values()
    return vals[0] if all(v == vals[0] for v in vals) else None


def _radius(ctx: Context, a: dict) -> Outcome:
    res = hps.radius(ctx.value(a["hps"]))
    return Outcome(res.cls, res, {"value": _constant_value(res.net)})


def _setconv(ctx: Context, a: dict) -> Outcome:
    res = hps.setconv_membership(ctx.value(a["hps"]), ctx.value(a.get("c", 0)), ctx.value(a["z"]))
    return Outcome("member" if res.member else "not_member", res)


def _goursat(ctx: Context, a: dict) -> Outcome:
    f = ctx.value(a["f"])
    n_max = int(a.get("n_max", 32))
    res = ghf_analytic.goursat_coefficients(f, ctx.value(a.get("z0", 0)), ctx.value(a.get("R")), n_max)
    table = [{"n": n, "class": valuation(c).label, "tail": {str(ctx.gauge.points[i].k): c.value(i) for i in ctx.gauge.tail}}
             for n, c in enumerate(res.table(min(n_max, 8)))]
    return Outcome("certified" if res.certificate else "uncertified", res, {"coefficients": table})


def _liouville(ctx: Context, a: dict) -> Outcome:
    res = ghf_analytic.liouville_check(ctx.value(a["f"]), ctx.value(a["bound"]))
    return Outcome(res.verdict, res)


def _continuation(ctx: Context, a: dict) -> Outcome:
    res = ghf_analytic.identity_continuation(ctx.value(a["f"]), ctx.value(a["chain"]), ctx.value(a["zeros"]))
    return Outcome(res.to_dict()["status"], res)


def parse_omegas(spec: Any) -> list[float]:
    """``"a..b"`` (unit step), ``"a..b:step"``, a comma list or a YAML list."""
    if isinstance(spec, (int, float)):
        return [float(spec)]
    if isinstance(spec, list):
        return [float(x) for x in spec]
    text = str(spec).strip()
    if ".." in text:
        lo, rest = text.split("..", 1)
        hi, _, step = rest.partition(":")
        lo_f, hi_f, step_f = float(lo), float(hi), float(step or 1)
        if step_f <= 0 or hi_f < lo_f:
            raise SpecError(f"bad omega range {text!r}")
        count = int(round((hi_f - lo_f) / step_f)) + 1
        return [lo_f + j * step_f for j in range(count)]
    return [float(x) for x in text.split(",") if x.strip()]


def _hft(ctx: Context, a: dict) -> Outcome:
    f = ctx.value(a["f"])
    omegas = parse_omegas(a.get("omega", "0..10"))
    buf = io.StringIO()
    rows = hft.write_csv(f, omegas, buf)
    extra: dict[str, Any] = {"rows": rows, "omegas": omegas}
    if a.get("csv"):
        atomic_write(Path(a["csv"]), buf.getvalue())
        extra["csv"] = str(a["csv"])
    else:
        extra["table"] = buf.getvalue().splitlines()
    return Outcome("ok", None, extra)


def _pw(ctx: Context, a: dict) -> Outcome:
    res = hft.paley_wiener_suite(ctx.value(a["f"]))
    checks = {"holomorphic": res.is_ghf, "entire": res.entire_if_log_h,
              "plancherel": res.plancherel_ok, "exponential_type": res.exp_type_ok}
    status = "pass" if all(v is not False for v in checks.values()) else "fail"
    return Outcome(status, res, {"checks": checks})


def _support(ctx: Context, a: dict) -> Outcome:
    f = ctx.value(a["f"])
    r = ctx.value(a["r"]) if "r" in a else f.halfwidth
    res = hft.support_report(f, r)
    return Outcome(res.verdict, res)


def _rl(ctx: Context, a: dict) -> Outcome:
    f = ctx.value(a["f"])
    res = hft.riemann_lebesgue(f, int(a.get("N", 1)), ctx.value(a["omega"]))
    extra = {}
    if res.Q is not None and a.get("transform_support", True):
        extra["transform_support"] = hft.transform_support(f, res.Q)
    return Outcome("holds" if res.holds else "fails", res, extra)


OPS: dict[str, Op] = {
    "sum": Op(_sum, ("series",)),
    "classify": Op(_classify, ("series", "test")),
    "hyperlim": Op(_hyperlim, ("sequence",)),
    "radius": Op(_radius, ("hps",)),
    "setconv": Op(_setconv, ("hps", "c", "z")),
    "goursat": Op(_goursat, ("f", "z0", "R", "n_max")),
    "liouville": Op(_liouville, ("f", "bound")),
    "continuation": Op(_continuation, ("f", "chain", "zeros")),
    "hft": Op(_hft, ("f", "omega", "csv")),
    "pw": Op(_pw, ("f",)),
    "support": Op(_support, ("f", "r")),
    "riemann_lebesgue": Op(_rl, ("f", "N", "omega", "transform_support")),
}

# errors a task may raise on legitimate input; they fail the task, not the run
TASK_ERRORS = (ArithmeticError, ValueError, Unavailable, ExprError, KeyError)


def execute(ctx: Context, task: dict[str, Any]) -> dict[str, Any]:
    """Run one task; returns the report body with its contract verdict."""
    args = {k: v for k, v in task.items() if k not in ("op", "name", "out", "expect", "needs", "__line__")}
    try:
        out = OPS[task["op"]].fn(ctx, args)
        body = {"status": out.status, "result": to_jsonable(out.result), **to_jsonable(out.extra)}
        ok = True
    except SpecError:
        raise
    except TASK_ERRORS as exc:
        body = {"status": "error", "error": f"{type(exc).__name__}: {exc}", "result": None}
        ok = False
    expect = task.get("expect")
    if expect is not None:
        wanted = expect if isinstance(expect, list) else [expect]
        ok = ok and body["status"] in [str(w) for w in wanted]
        body["expect"] = wanted
    body["contract_ok"] = ok
    return {
        "schema_version": SCHEMA_VERSION,
        "command": task["op"],
        "task": task["name"],
        "args": to_jsonable(args),
        "horizon": ctx.gauge.horizon(),
        **body,
    }


def atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _run_task(raw: dict[str, Any], index: int, out_dir: str) -> dict[str, Any]:
    """Worker entry: rebuilds the context, since nets hold unpicklable closures."""
    ctx = Context(raw)
    task = dict(ctx.raw["tasks"][index])
    cwd = os.getcwd()
    os.chdir(out_dir)
    try:
        report = execute(ctx, task)
        if task.get("out"):
            atomic_write(Path(task["out"]), dumps(report) + "\n")
    finally:
        os.chdir(cwd)
    return report


def run_spec(raw: dict[str, Any], out_dir: Path, jobs: int = 1) -> tuple[int, dict[str, Any]]:
    tasks = raw["tasks"]
    index = {t["name"]: i for i, t in enumerate(tasks)}
    sorter = graphlib.TopologicalSorter({t["name"]: list(t.get("needs") or []) for t in tasks})
    sorter.prepare()
    reports: dict[str, dict[str, Any]] = {}
    out_dir.mkdir(parents=True, exist_ok=True)
    plain = _strip(raw)
    pool = ProcessPoolExecutor(max_workers=jobs) if jobs > 1 else None
    try:
        while sorter.is_active():
            ready = sorted(sorter.get_ready(), key=index.get)
            if pool is None:
                done = [(n, _run_task(plain, index[n], str(out_dir))) for n in ready]
            else:
                futures = [(n, pool.submit(_run_task, plain, index[n], str(out_dir))) for n in ready]
                done = [(n, fut.result()) for n, fut in futures]
            for name, rep in done:
                reports[name] = rep
                sorter.done(name)
    finally:
        if pool is not None:
            pool.shutdown()
    summary = {
        "schema_version": SCHEMA_VERSION,
        "command": "run",
        "horizon": Gauge(settings_of(plain)).horizon(),
        "tasks": [{"name": t["name"], "op": t["op"], "status": reports[t["name"]]["status"],
                   "contract_ok": reports[t["name"]]["contract_ok"], "out": t.get("out")} for t in tasks],
    }
    failed = any(not r["contract_ok"] for r in reports.values())
    return (EXIT_CONTRACT if failed else EXIT_OK), {"summary": summary, "reports": [reports[t["name"]] for t in tasks]}


# -- command line -------------------------------------------------------------------


def _settings_flags(args: argparse.Namespace) -> dict[str, Any]:
    out: dict[str, Any] = {}
    if args.config:
        from .config import parse_config_text
        out.update(parse_config_text(Path(args.config).read_text()))
    for flag, key in (("grid", "grid"), ("q_max", "q_max"), ("Q_max", "Q_max"), ("precision", "precision"),
                      ("rho", "rho"), ("seed", "seed")):
        val = getattr(args, flag, None)
        if val is not None:
            out[key] = val
    return out


def _family_series(args) -> dict[str, Any]:
    if args.term:
        return {"kind": "series", "term": args.term}
    decl = {"kind": "series", "family": args.family}
    if args.family == "geometric":
        decl["k"] = args.k if args.k is not None else "1/2"
    elif args.family in ("exp", "exponential"):
        decl["z"] = args.z if args.z is not None else "1"
    elif args.family == "constant":
        decl["c"] = args.c if args.c is not None else "1"
    return decl


def spec_from_args(args: argparse.Namespace) -> dict[str, Any]:
    """The one-task spec a subcommand stands for."""
    cmd = args.command
    objects: dict[str, Any] = {}
    task: dict[str, Any] = {"op": cmd, "name": cmd}
    if cmd in ("sum", "classify"):
        objects["s"] = _family_series(args)
        task["series"] = "@s"
        if cmd == "classify":
            task["test"] = args.test
    elif cmd == "hyperlim":
        objects["a"] = {"kind": "sequence", "term": args.term}
        task["sequence"] = "@a"
    elif cmd in ("radius", "setconv"):
        objects["a"] = {"kind": "hps", "coeff": args.coeff} if args.coeff else {"kind": "hps", "family": args.family}
        task["hps"] = "@a"
        if cmd == "setconv":
            task["c"], task["z"] = args.c, args.z
    elif cmd == "goursat":
        objects["f"] = {"kind": "ghf", "family": args.f} if args.f in ghf_analytic.BUILTINS else {"kind": "ghf", "expr": args.f}
        task.update({"f": "@f", "z0": args.z0, "n_max": args.n_max})
        if args.R is not None:
            task["R"] = args.R
    elif cmd in ("hft", "pw"):
        decl = {"kind": "gsf", "h": args.h}
        decl.update({"family": args.f} if args.f in hft.BUILTINS else {"expr": args.f})
        objects["f"] = decl
        task["f"] = "@f"
        if cmd == "hft":
            task["omega"] = args.omega
            if args.csv:
                task["csv"] = args.csv
    if getattr(args, "expect", None):
        task["expect"] = args.expect
    spec = {"objects": objects, "tasks": [task], **_settings_flags(args)}
    if getattr(args, "K", None) is not None:
        spec["K"] = args.K
    return spec


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="settings file (YAML or key = value)")
    common.add_argument("--grid", help="kmin:kmax, grid eps = 2^-k")
    common.add_argument("--q-max", dest="q_max", type=int)
    common.add_argument("--Q-max", dest="Q_max", type=int)
    common.add_argument("--precision", help="bits or 'auto'")
    common.add_argument("--rho", help="gauge expression in eps")
    common.add_argument("--seed", type=int)
    common.add_argument("--out", help="write the JSON report here instead of stdout")
    common.add_argument("--expect", help="required status; a mismatch exits 1")

    parser = argparse.ArgumentParser(prog="rcgen", description="Generalized power series and transforms on a gauge grid.")
    sub = parser.add_subparsers(dest="command", required=True)

    def series_flags(p):
        p.add_argument("--family", choices=sorted(hyperseries.FAMILIES), default="geometric")
        p.add_argument("--k", help="ratio of the geometric family")
        p.add_argument("--z", help="argument of the exponential family")
        p.add_argument("--c", help="value of the constant family")
        p.add_argument("--K", type=float, help="value of K in expressions")
        p.add_argument("--term", help="a_n as an expression in n, eps, rho, k, K")

    p = sub.add_parser("sum", parents=[common], help="hyperseries sum")
    series_flags(p)
    p = sub.add_parser("classify", parents=[common], help="ratio, root or sum test")
    series_flags(p)
    p.add_argument("--test", choices=("ratio", "root", "sum"), default="ratio")
    p = sub.add_parser("hyperlim", parents=[common], help="hyperlimit of a sequence")
    p.add_argument("--term", required=True)
    p.add_argument("--K", type=float)
    for name in ("radius", "setconv"):
        p = sub.add_parser(name, parents=[common], help="radius of convergence" if name == "radius" else "set-of-convergence membership")
        p.add_argument("--family", choices=sorted(hps.BUILTINS), default="geometric")
        p.add_argument("--coeff", help="a_n as an expression in n, eps, rho, k")
        if name == "setconv":
            p.add_argument("--c", default="0", help="center")
            p.add_argument("--z", required=True)
            p.add_argument("--K", type=float)
    p = sub.add_parser("goursat", parents=[common], help="Taylor coefficients by contour quadrature")
    p.add_argument("--f", default="exp", help=f"one of {sorted(ghf_analytic.BUILTINS)} or an expression in w")
    p.add_argument("--z0", default="0")
    p.add_argument("--R")
    p.add_argument("--n-max", dest="n_max", type=int, default=32)
    for name in ("hft", "pw"):
        p = sub.add_parser(name, parents=[common], help="transform table" if name == "hft" else "Paley-Wiener suite")
        p.add_argument("--f", default="delta", help=f"one of {sorted(hft.BUILTINS)} or an expression in x")
        p.add_argument("--h", default="log", help="halfwidth: log, power or an expression")
        if name == "hft":
            p.add_argument("--omega", default="0..10", help="a..b, a..b:step or a comma list")
            p.add_argument("--csv", help="write the table as CSV")
    p = sub.add_parser("report", help="summarize JSON reports")
    p.add_argument("files", nargs="+")
    p.add_argument("--out")
    p = sub.add_parser("run", parents=[common], help="run an experiment spec")
    p.add_argument("spec")
    p.add_argument("--out-dir", help="directory for task outputs (default: the spec's directory)")
    p.add_argument("--jobs", type=int, default=1)
    return parser


def _emit(text: str, out: str | None) -> None:
    if out:
        atomic_write(Path(out), text + "\n")
    else:
        sys.stdout.write(text + "\n")


def _report(files: list[str]) -> tuple[int, dict[str, Any]]:
    rows = []
    code = EXIT_OK
    for name in files:
        data = json.loads(Path(name).read_text())
        if "summary" in data:
            data = data["summary"]
        entries = data["tasks"] if data.get("command") == "run" else [data]
        for e in entries:
            ok = e.get("contract_ok", True)
            code = code if ok else EXIT_CONTRACT
            rows.append({"file": name, "task": e.get("task", e.get("name")), "command": e.get("command", e.get("op")),
                         "status": e.get("status"), "contract_ok": ok})
    return code, {"schema_version": SCHEMA_VERSION, "command": "report", "entries": rows}


EXPRESSION_FLAGS = {"--z", "--k", "--c", "--term", "--coeff", "--z0", "--R", "--omega", "--f", "--h", "--rho"}


def _glue_expressions(argv: list[str]) -> list[str]:
    """``--z -K*log(rho)`` -> ``--z=-K*log(rho)``; argparse would read the value as a flag."""
    out, i = [], 0
    while i < len(argv):
        tok = argv[i]
        if tok in EXPRESSION_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-") and not argv[i + 1].startswith("--"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    argv = _glue_expressions(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        if args.command == "report":
            code, body = _report(args.files)
            _emit(dumps(body), args.out)
            return code
        if args.command == "run":
            path = Path(args.spec)
            raw = parse_spec(path.read_text())
            raw.update(_settings_flags(args))
            validate_spec(raw)
            code, body = run_spec(raw, Path(args.out_dir) if args.out_dir else path.parent, args.jobs)
            _emit(dumps(body["summary"]), args.out)
            return code
        raw = spec_from_args(args)
        raw = parse_spec(yaml.safe_dump(raw, sort_keys=False))
        code, body = run_spec(raw, Path.cwd())
        _emit(dumps(body["reports"][0]), args.out)
        return code
    except (SpecError, ConfigError, ExprError, OSError, json.JSONDecodeError) as exc:
        print(f"rcgen: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
