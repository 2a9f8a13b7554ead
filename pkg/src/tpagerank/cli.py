"""Command-line front end.

Subcommands: rank, classic, sweep, critical, check, cdf, topk.  Rank
artifacts are JSON (programmatic consumers); trajectories and CDFs are CSV
(plotting tools).  Every output starts with the fully resolved run
configuration and the seed, so runs are replayable.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import __version__
from .critical import homotopy_critical_estimate, temperature_sweep, tstar_complete
from .errors import InvalidConfigError, TPageRankError
from .graph import (analyze_structure, load_edge_list, load_matrix_market,
                    normalize_dangling, random_irreducible_graph)
from .kernel import (KernelConfig, classical_pagerank, default_tol, iterate_f,
                     iterate_u, uniform, vertex)
from .metrics import hilbert_distance
from .oracle import h_vector, mtt_invariant
from .weights import WeightFunction
from . import kernel as _kernel


def _parse_temperature(text):
    if text.lower() in ("inf", "infinity"):
        return math.inf
    return float(text)


_EXPR_CHARS = set("0123456789.eE+-*/() ")


def _parse_number(text):
    """Small arithmetic expressions like '1/3+1e-3' (x0 literals)."""
    if not set(text) <= _EXPR_CHARS:
        raise InvalidConfigError(f"bad numeric expression {text!r}")
    return float(eval(text, {"__builtins__": {}}))  # noqa: S307 - charset-checked


def _load_graph(args):
    fmt = args.format
    if fmt == "auto":
        fmt = "mtx" if args.graph.endswith((".mtx", ".mm")) else "edgelist"
    with open(args.graph, "rb") as fh:
        g = load_matrix_market(fh) if fmt == "mtx" else load_edge_list(fh)
    return normalize_dangling(g)


def _load_weight(spec):
    if spec == "identity":
        return WeightFunction.identity()
    if spec.startswith("custom-table:"):
        return WeightFunction.from_table(spec.split(":", 1)[1])
    raise InvalidConfigError(f"unknown energy spec {spec!r}")


def _load_d(spec, n):
    if spec == "uniform":
        return None
    d = np.loadtxt(spec)
    if d.shape != (n,):
        raise InvalidConfigError(f"personalization vector length {d.shape} != {n}")
    return d


def _parse_x0(spec, n, rng):
    if spec == "uniform":
        return uniform(n)
    if spec == "random":
        return rng.dirichlet(np.ones(n))
    if spec.startswith("vertex:"):
        return vertex(n, int(spec.split(":", 1)[1]), 1.0 - 1e-3)
    if "," in spec:
        x = np.array([_parse_number(f) for f in spec.split(",")])
        if len(x) != n:
            raise InvalidConfigError(f"x0 has {len(x)} entries, graph has {n}")
        return x / x.sum()
    with open(spec) as fh:  # a prior rank artifact
        art = json.load(fh)
    return np.array(art["rank"])


def _resolved_config(args):
    keys = ("command", "graph", "format", "T", "T2", "gamma", "d", "energy",
            "scheme", "x0", "tol", "seed", "schedule", "restarts", "out",
            "threads", "topk")
    return {k: getattr(args, k) for k in keys if hasattr(args, k)}


def _artifact(args, **payload):
    return {"tpagerank": __version__, "config": _resolved_config(args), **payload}


def _emit_json(args, obj):
    text = json.dumps(obj, indent=2, default=_json_default)
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def _json_default(o):
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    raise TypeError(type(o))


def _emit_csv(args, header_obj, rows, columns):
    lines = ["# " + json.dumps(header_obj, default=_json_default),
             ",".join(columns)]
    lines += [",".join(str(v) for v in row) for row in rows]
    text = "\n".join(lines) + "\n"
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cfg_from_args(args, n):
    return KernelConfig(t1=args.T, t2=args.T2, gamma=args.gamma,
                        d=_load_d(args.d, n))


def cmd_rank(args):
    g = _load_graph(args)
    w = _load_weight(args.energy)
    cfg = _cfg_from_args(args, g.n)
    rng = np.random.default_rng(args.seed)
    x0 = _parse_x0(args.x0, g.n, rng)
    tol = args.tol if args.tol else default_tol(g.n)
    run = iterate_u if args.scheme == "u" else iterate_f
    converged = True
    try:
        x, rep = run(g, w, cfg, x0, tol)
    except TPageRankError as err:
        rep = getattr(err, "report", None)
        x = getattr(err, "iterate", x0)
        converged = False
    converged = converged and rep is not None and rep.converged
    _emit_json(args, _artifact(
        args, rank=x, converged=converged,
        report=None if rep is None else {
            "scheme": rep.scheme,
            "outer_iterations": rep.outer_iterations,
            "inner_iterations_total": rep.inner_iterations_total,
            "residual_trace": rep.residual_trace[-20:],
            "oscillating": rep.oscillating,
        }))
    return 0 if converged else 1


def cmd_classic(args):
    g = _load_graph(args)
    x = classical_pagerank(g, gamma=args.gamma, d=_load_d(args.d, g.n),
                           tol=args.tol or None)
    _emit_json(args, _artifact(args, rank=x, converged=True))
    return 0


def _parse_schedule(spec):
    try:
        lo, hi, ratio = (float(f) for f in spec.split(":"))
    except ValueError:
        raise InvalidConfigError(f"bad schedule {spec!r}; expected lo:hi:ratio")
    if lo <= 0 or hi <= 0 or ratio <= 1:
        raise InvalidConfigError("schedule needs positive bounds and ratio > 1")
    temps = []
    if lo <= hi:
        t = lo
        while t <= hi * (1 + 1e-12):
            temps.append(t)
            t *= ratio
    else:
        t = lo
        while t >= hi * (1 - 1e-12):
            temps.append(t)
            t /= ratio
    return temps


def cmd_sweep(args):
    g = _load_graph(args)
    w = _load_weight(args.energy)
    cfg = _cfg_from_args(args, g.n)
    rng = np.random.default_rng(args.seed)
    x0 = _parse_x0(args.x0, g.n, rng)
    schedule = _parse_schedule(args.schedule)
    traj = temperature_sweep(g, w, cfg, schedule, x0, tol=args.tol or None)
    if args.topk:
        columns = ["T", "converged"] + [f"top{j+1}" for j in range(args.topk)]
        rows = [[T, int(ok)] + list(_topk_indices(r, args.topk))
                for T, r, ok in zip(traj.temperatures, traj.ranks, traj.converged)]
    else:
        columns = ["T", "converged"] + [f"x{j}" for j in range(g.n)]
        rows = [[T, int(ok)] + [repr(float(v)) for v in r]
                for T, r, ok in zip(traj.temperatures, traj.ranks, traj.converged)]
    _emit_csv(args, _resolved_config(args), rows, columns)
    return 0 if all(traj.converged) else 1


def cmd_critical(args):
    if args.restarts < 1:
        raise InvalidConfigError("need --restarts >= 1")
    g = _load_graph(args)
    report = analyze_structure(g)
    if not report.strongly_connected and args.gamma >= 1.0:
        raise InvalidConfigError(
            "graph is not strongly connected; use a damping factor < 1")
    w = _load_weight(args.energy)
    cfg = _cfg_from_args(args, g.n)
    lo, hi, ratio = (float(f) for f in args.schedule.split(":"))
    est = homotopy_critical_estimate(g, w, cfg, args.seed, lo, hi, ratio,
                                     restarts=args.restarts)
    _emit_json(args, _artifact(
        args, estimate=est.estimate, flagged=est.flagged,
        per_restart=est.per_restart,
        tstar_complete_reference=tstar_complete(g.n)))
    return 1 if est.flagged else 0


def _topk_indices(rank, k):
    order = np.lexsort((np.arange(len(rank)), -rank))
    return order[:k]


def cmd_topk(args):
    arts = []
    for path in args.artifacts:
        with open(path) as fh:
            arts.append(json.load(fh))
    k = args.topk or 5
    for art in arts:
        if k > len(art["rank"]):
            raise InvalidConfigError(f"k={k} exceeds n={len(art['rank'])}")
    columns = ["pos"] + [f"artifact{j}" for j in range(len(arts))]
    tops = [_topk_indices(np.array(a["rank"]), k) for a in arts]
    rows = [[i + 1] + [int(t[i]) for t in tops] for i in range(k)]
    _emit_csv(args, _resolved_config(args) | {"artifacts": args.artifacts},
              rows, columns)
    return 0


def cmd_cdf(args):
    with open(args.artifact) as fh:
        art = json.load(fh)
    rank = np.asarray(art["rank"], dtype=float)
    if rank.size == 0:
        raise InvalidConfigError("empty rank artifact")
    pos = rank[rank > 0]
    lo = pos.min() if pos.size else 1.0 / len(rank)
    values = np.geomspace(lo * 0.5, rank.max() * 1.05, args.points)
    fractions = [(rank >= v).mean() for v in values]
    rows = [[repr(float(v)), repr(float(f))] for v, f in zip(values, fractions)]
    _emit_csv(args, _resolved_config(args) | {"artifact": args.artifact},
              rows, ["value", "fraction_ge"])
    return 0


def cmd_check(args):
    """Seeded self-validation: oracle equivalence, certificate-regime
    uniqueness, and contraction inequalities on random instances."""
    rng = np.random.default_rng(args.seed)
    w = WeightFunction.identity()
    failures = []

    def record(name, ok, detail=""):
        if not ok:
            failures.append({"invariant": name, "detail": detail})

    for case in range(args.cases):
        n = int(rng.integers(2, args.n_max + 1))
        g = random_irreducible_graph(n, rng)
        x = rng.dirichlet(np.ones(n))
        T = float(rng.choice([0.1, 1.0, 10.0]))
        cfg = KernelConfig(t1=T)
        u, _ = _kernel.invariant_measure(g, w, cfg, x, tol=1e-12)
        if args.break_normalization:
            u = u + 1e-3  # negative-control fault injection
        M = _kernel.dense_transition(g, w, cfg, x)
        ue = mtt_invariant(M)
        record("mtt_vs_power", np.abs(u - ue).sum() <= 1e-8,
               f"case {case} gap {np.abs(u - ue).sum():.3g}")
        h = h_vector(g, w, T, x)
        record("h_vector_normalization",
               np.abs(h / h.sum() - ue).sum() <= 1e-8, f"case {case}")
        if n * (1.0 / T) <= 1.0:
            x2, rep = iterate_u(g, w, cfg, rng.dirichlet(np.ones(n)),
                                outer_tol=1e-10)
            record("certified_uniqueness",
                   rep.converged and np.abs(x2 - _kernel.iterate_u(
                       g, w, cfg, rng.dirichlet(np.ones(n)),
                       outer_tol=1e-10)[0]).sum() < 1e-6, f"case {case}")
    # contraction inequality on one positive instance per run
    n = 5
    C = np.exp(rng.uniform(-0.5, 0.5, (n, n)))
    from .graph import Graph
    from .metrics import birkhoff_coefficient
    gpos = Graph.from_dense(C)
    tau = birkhoff_coefficient(C)
    T = 2.5 / (1.0 - tau)
    cfg = KernelConfig(t1=T)
    for _ in range(50):
        a = rng.dirichlet(np.ones(n))
        b = rng.dirichlet(np.ones(n))
        fa = _kernel.apply_kernel(gpos, w, cfg, a, a)
        fb = _kernel.apply_kernel(gpos, w, cfg, b, b)
        lhs = hilbert_distance(fa / fa.sum(), fb / fb.sum())
        rhs = (tau + 2.0 / T) * hilbert_distance(a, b) + 1e-9
        record("map_contraction", lhs <= rhs, f"{lhs:.3g} > {rhs:.3g}")
    result = {"seed": args.seed, "cases": args.cases, "failures": failures}
    _emit_json(args, _artifact(args, **result))
    return 0 if not failures else 1


def build_parser():
    ap = argparse.ArgumentParser(prog="tpagerank", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p, graph=True):
        if graph:
            p.add_argument("--graph", required=True)
            p.add_argument("--format", choices=["edgelist", "mtx", "auto"],
                           default="auto")
        p.add_argument("--tol", type=float, default=0.0,
                       help="0 selects the size-based default")
        p.add_argument("--seed", type=int, default=0)
        p.add_argument("--out", default=None)
        p.add_argument("--threads", type=int, default=1,
                       help="1 guarantees bit-reproducible output")

    def kernel_flags(p):
        p.add_argument("--T", type=_parse_temperature, default=math.inf)
        p.add_argument("--T2", type=_parse_temperature, default=math.inf)
        p.add_argument("--gamma", type=float, default=1.0)
        p.add_argument("--d", default="uniform")
        p.add_argument("--energy", default="identity")

    p = sub.add_parser("rank", help="compute a T-PageRank")
    common(p)
    kernel_flags(p)
    p.add_argument("--scheme", choices=["u", "f"], default="f")
    p.add_argument("--x0", default="uniform")
    p.set_defaults(func=cmd_rank)

    p = sub.add_parser("classic", help="classical damped PageRank (T = inf)")
    common(p)
    p.add_argument("--gamma", type=float, default=0.85)
    p.add_argument("--d", default="uniform")
    p.set_defaults(func=cmd_classic)

    p = sub.add_parser("sweep", help="warm-started temperature sweep")
    common(p)
    kernel_flags(p)
    p.add_argument("--schedule", required=True, metavar="lo:hi:ratio")
    p.add_argument("--x0", default="uniform")
    p.add_argument("--topk", type=int, default=0)
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("critical", help="homotopy critical-temperature estimate")
    common(p)
    kernel_flags(p)
    p.add_argument("--schedule", required=True, metavar="lo:hi:ratio")
    p.add_argument("--restarts", type=int, default=20)
    p.set_defaults(func=cmd_critical)

    p = sub.add_parser("check", help="seeded oracle cross-validation suite")
    common(p, graph=False)
    p.add_argument("--n-max", type=int, default=6)
    p.add_argument("--cases", type=int, default=50)
    p.add_argument("--break-normalization", action="store_true",
                   help=argparse.SUPPRESS)  # negative-control test hook
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("cdf", help="rank cumulative distribution as CSV")
    common(p, graph=False)
    p.add_argument("artifact")
    p.add_argument("--points", type=int, default=100)
    p.set_defaults(func=cmd_cdf)

    p = sub.add_parser("topk", help="top-k table for one or more rank artifacts")
    common(p, graph=False)
    p.add_argument("artifacts", nargs="+")
    p.add_argument("--topk", type=int, default=5)
    p.set_defaults(func=cmd_topk)
    return ap


def main(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.func(args)
    except (TPageRankError, OSError) as err:
        print(f"error: {err}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
