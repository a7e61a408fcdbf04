"""Command-line front end.

Exit codes: 0 verified (probe), 1 mathematical finding, 2 usage or config error.
"""

from __future__ import annotations

import argparse
import sys
import time
from pathlib import Path
from typing import Any, Callable

from . import __version__
from .axioms import DEFAULT_LAMBDA_GRID, check_axioms, find_counterexample
from .config import (
    SCHEMA_VERSION,
    build_family,
    build_function,
    build_sequence,
    build_space,
    load_json,
    resolve_space,
    validate_run,
)
from .errors import Finding, UsageError
from .norms import (
    TNORM,
    NormPair,
    diagonal_witness,
    get_kernel,
    tconorm_residual,
    tnorm_residual,
    verify_norm_axioms,
)
from .report import dumps, fmt
from .sequences import (
    completeness_probe,
    converges_to,
    has_ndz,
    is_cauchy,
    limit_continuity_probe,
    uniform_convergence_check,
)
from .space import FiniteUniverse
from .topology import (
    OpenBall,
    baire_probe,
    ball_contains,
    closure_containment_check,
    countable_base_prefix,
    generate_finite_topology,
    hausdorff_witness,
    interior_ball_witness,
    is_neutro_bounded,
    is_nowhere_dense,
    nb_certificate_via_cover,
)

EXIT_OK, EXIT_FINDING, EXIT_USAGE = 0, 1, 2


class Outcome:
    """What a command handler hands back: exit code, JSON result, text lines."""

    def __init__(self, code: int, result: dict, lines: list[str]):
        self.code, self.result, self.lines = code, result, lines


def _pt(space, x):
    return str(x) if isinstance(space.universe, FiniteUniverse) else x


def _need(cfg: dict, *keys: str) -> None:
    missing = [k for k in keys if k not in cfg]
    if missing:
        raise UsageError(f"{cfg.get('task', 'command')} needs key(s): {', '.join(missing)}")


def _grid(cfg, key="lambda_grid", default=DEFAULT_LAMBDA_GRID):
    return [float(x) for x in cfg.get(key, default)]


# ------------------------------------------------------------ check-axioms


def cmd_check_axioms(cfg: dict) -> Outcome:
    space = build_space(cfg["space"])
    rep = check_axioms(
        space,
        samples=cfg.get("samples", 10_000),
        seed=cfg.get("seed", 0),
        lambda_grid=_grid(cfg),
        tol=cfg.get("tol"),
        slope_bound=cfg.get("slope_bound"),
        limit_tol=cfg.get("limit_tol"),
        lambda_max=cfg.get("lambda_max"),
        max_witnesses=cfg.get("max_witnesses", 10),
        axioms=cfg.get("axioms"),
    )
    result: dict[str, Any] = {"axioms": rep.to_dict()}
    lines = [f"{'axiom':<7}{'status':<15}{'checked':>9}{'skipped':>9}{'violations':>12}  first witness"]
    for name, e in rep.entries.items():
        w = e.witnesses[0].inequality if e.witnesses else ""
        status = e.status if e.status in ("pass", "fail") else f"{e.status}"
        lines.append(f"{name:<7}{status:<15}{e.checked:>9}{e.skipped:>9}{e.violations:>12}  {w}")
    lines += [f"note: {n}" for n in rep.notes]
    found = False
    if "search" in cfg:
        s = cfg["search"]
        sr = find_counterexample(space, s.get("axioms"), s.get("budget", 100_000), cfg.get("seed", 0),
                                 s.get("strategy", "random"), _grid(cfg), tol=cfg.get("tol"))
        result["search"] = sr.to_dict()
        found = sr.found
        lines.append(f"counterexample search ({sr.strategy}, {sr.evaluations} evaluations): "
                     + (sr.witness.inequality if sr.found else sr.note))
    return Outcome(EXIT_FINDING if (not rep.ok or found) else EXIT_OK, result, lines)


# --------------------------------------------------------------- topology


def _task_ball(space, cfg):
    _need(cfg, "center", "epsilon", "lambda", "point")
    ball = OpenBall(space.canon(_pt(space, cfg["center"])), cfg["epsilon"], cfg["lambda"])
    b = _pt(space, cfg["point"])
    inside = ball_contains(space, ball, b)
    res = {"ball": ball.to_dict(), "contains": inside, "point": b}
    if not inside:
        return EXIT_OK, res, [f"{b} is not in O({ball.center}, {fmt(ball.epsilon)}, {fmt(ball.lam)})"]
    inner = interior_ball_witness(space, ball, b, cfg.get("samples", 1000), cfg.get("seed", 0))
    res["interior_ball"] = inner.to_dict() if inner else None
    if inner is None:
        return EXIT_FINDING, res, ["constructed interior ball escapes the original ball on a probe point"]
    return EXIT_OK, res, [f"interior ball O({inner.center}, {fmt(inner.epsilon)}, {fmt(inner.lam)}) verified on "
                          f"{inner.trace['probes']} probe points"]


def _task_hausdorff(space, cfg):
    _need(cfg, "a", "b", "lambda")
    ba, bb = hausdorff_witness(space, _pt(space, cfg["a"]), _pt(space, cfg["b"]), cfg["lambda"],
                               cfg.get("samples", 1000), cfg.get("seed", 0))
    return EXIT_OK, {"balls": [ba.to_dict(), bb.to_dict()], "disjoint": True}, [
        f"O({ba.center}, {fmt(ba.epsilon)}, {fmt(ba.lam)}) and O({bb.center}, {fmt(bb.epsilon)}, {fmt(bb.lam)}) "
        f"are disjoint on {ba.trace['probes']} probe points"]


def _task_nb(space, cfg):
    _need(cfg, "subset")
    subset = [_pt(space, p) for p in cfg["subset"]]
    res: dict[str, Any] = {}
    lines = []
    code = EXIT_OK
    if "epsilon_grid" in cfg or "lambda_grid" in cfg:
        pair = is_neutro_bounded(space, subset, _grid(cfg), cfg.get("epsilon_grid", [0.1, 0.5, 0.9]))
        res["bounded_at"] = list(pair) if pair else None
        lines.append(f"smallest grid pair (lambda, eps): {pair}")
        code = EXIT_OK if pair else EXIT_FINDING
    if "centers" in cfg:
        _need(cfg, "epsilon", "lambda")
        cert = nb_certificate_via_cover(space, subset, [_pt(space, c) for c in cfg["centers"]],
                                        cfg["epsilon"], cfg["lambda"])
        res["certificate"] = cert.to_dict() if cert else None
        lines.append(f"cover certificate: {cert.to_dict() if cert else 'none (no zeta < 1 satisfies the bounds)'}")
        code = max(code, EXIT_OK if cert else EXIT_FINDING)
    if not res:
        raise UsageError("nb needs centers (cover certificate) or lambda_grid/epsilon_grid (grid search)")
    return code, res, lines


def _task_closure(space, cfg):
    _need(cfg, "center", "epsilon1", "epsilon2", "lambda")
    chk = closure_containment_check(space, _pt(space, cfg["center"]), cfg["epsilon1"], cfg["epsilon2"],
                                    cfg["lambda"], cfg.get("samples", 1000), cfg.get("seed", 0))
    return (EXIT_OK if chk.holds else EXIT_FINDING), chk.to_dict(), [
        f"closure of O(a, eps2, lam/2) inside O(a, eps1, lam): {chk.holds} ({chk.regime}, {chk.checked} points)"]


def _topology_for(space, cfg):
    eps = None if cfg.get("exact", "epsilon_grid" not in cfg) else cfg["epsilon_grid"]
    return generate_finite_topology(space, eps, _grid(cfg))


def _task_finite(space, cfg):
    top = _topology_for(space, cfg)
    disagree = []
    for m in range(1 << top.n):
        nd = is_nowhere_dense(top, m)
        if not nd.agree:
            disagree.append({"subset": [str(p) for p in top.labels(m)], **nd.to_dict()})
    res = {"topology": top.to_dict(), "nowhere_dense_disagreements": disagree,
           "open_set_count": len(top.opens), "discrete": top.is_discrete()}
    lines = [f"{len(top.opens)} open sets on {top.n} points ({'exact radii' if top.exact else 'grid radii'})",
             f"nowhere-dense lattice vs ball criterion: {len(disagree)} disagreements over {1 << top.n} subsets"]
    return (EXIT_FINDING if disagree else EXIT_OK), res, lines


def _task_baire(space, cfg):
    top = _topology_for(space, cfg)
    br = baire_probe(top)
    return (EXIT_OK if br.dense else EXIT_FINDING), {"baire": br.to_dict(), "open_set_count": len(top.opens)}, [
        f"{br.dense_open_count} dense open sets; intersection dense: {br.dense}"]


def _task_base(space, cfg):
    pts = cfg.get("dense_points")
    if pts is None:
        if not space.universe.is_finite:
            raise UsageError("base needs dense_points on an infinite universe")
        pts = space.universe.points()
    bp = countable_base_prefix(space, [_pt(space, p) for p in pts], cfg.get("depth", 3), _grid(cfg))
    code = EXIT_FINDING if bp.base_property is False else EXIT_OK
    return code, bp.to_dict(), [f"{len(bp.balls)} balls, {len(bp.flagged)} radius clamps, base property: {bp.base_property}"]


TOPOLOGY_TASKS: dict[str, Callable] = {
    "ball": _task_ball,
    "hausdorff": _task_hausdorff,
    "nb": _task_nb,
    "closure-lemma": _task_closure,
    "finite-topology": _task_finite,
    "baire": _task_baire,
    "base": _task_base,
}


def cmd_topology(cfg: dict) -> Outcome:
    space = build_space(cfg["space"])
    code, res, lines = TOPOLOGY_TASKS[cfg["task"]](space, cfg)
    return Outcome(code, {"task": cfg["task"], **res}, lines)


# --------------------------------------------------------------- sequence


def _rows_text(rep) -> list[str]:
    lines = [rep.label]
    for r in rep.rows:
        lines.append("  " + ", ".join(f"{k}={fmt(v) if isinstance(v, float) else v}" for k, v in r.items()))
    return lines


def cmd_sequence(cfg: dict) -> Outcome:
    space = build_space(cfg["space"])
    task = cfg["task"]
    eps = cfg.get("epsilon", 0.1)
    lams = _grid(cfg)
    if task in ("converge", "cauchy"):
        _need(cfg, "sequence")
        seq = build_sequence(cfg["sequence"])
        if seq.name == "explicit" and isinstance(space.universe, FiniteUniverse):
            seq = type(seq).from_list([str(t) for t in seq.terms()])
        if task == "converge":
            _need(cfg, "limit")
            rep = converges_to(space, seq, _pt(space, cfg["limit"]), eps, lams, cfg.get("n_max"))
        else:
            rep = is_cauchy(space, seq, eps, lams, cfg.get("n_max"), cfg.get("seed", 0))
    elif task == "ndz":
        _need(cfg, "family")
        fam = build_family(cfg["family"])
        if isinstance(space.universe, FiniteUniverse):
            fam = type(fam)([[str(p) for p in s] for s in fam.sets])
        rep = has_ndz(space, fam, cfg.get("epsilon_grid", [eps]), lams)
    elif task == "completeness":
        rep = completeness_probe(space, cfg.get("trials", 1000), cfg.get("seed", 0), eps, lams,
                                 cfg.get("n_max", 100))
    else:
        _need(cfg, "function")
        fseq = build_function(cfg["function"])
        rep = uniform_convergence_check(space, fseq, eps, lams, cfg.get("n_max", 10_000))
        result = {"uniform": rep.to_dict()}
        lines = _rows_text(rep)
        if rep.diagnosis:
            d = rep.diagnosis
            lines.append(f"  diagnosis: no uniform N; pointwise N diverges near x = {fmt(float(d['worst_point']))}")
        if not rep.verdict:
            return Outcome(EXIT_FINDING, result, lines)
        cont = cfg.get("continuity", {})
        lc = limit_continuity_probe(space, fseq, cont.get("points"), cont.get("delta_grid", (1e-1, 1e-2, 1e-3, 1e-4)),
                                    uniform=rep, eps=eps, lambda_grid=lams)
        result["limit_continuity"] = lc.to_dict()
        lines.append(lc.label)
        return Outcome(EXIT_OK if lc.verdict else EXIT_FINDING, result, lines)
    return Outcome(EXIT_OK if rep.verdict else EXIT_FINDING, {task: rep.to_dict()}, _rows_text(rep))


# ------------------------------------------------------------------ norms


def cmd_norms(cfg: dict) -> Outcome:
    task = cfg["task"]
    if task == "verify":
        _need(cfg, "kernel")
        kernel = get_kernel(cfg["kernel"], cfg.get("kind"), candidates=True)
        rep = verify_norm_axioms(kernel, cfg.get("samples", 10_000), cfg.get("seed", 0),
                                 cfg.get("tol", 1e-12), cfg.get("slope_bound", 10.0))
        lines = [f"{kernel.name} as {kernel.kind}:"]
        for name, e in rep.entries.items():
            w = e.witnesses[0].inequality if e.witnesses else ""
            lines.append(f"  {name:<14}{e.status:<15}{e.violations:>8}  {w}")
        return Outcome(EXIT_OK if rep.ok else EXIT_FINDING, {"verification": rep.to_dict()}, lines)
    if task == "residual":
        _need(cfg, "epsilon1", "epsilon2")
        e1, e2 = cfg["epsilon1"], cfg["epsilon2"]
        if "kernel" in cfg:
            kernels = [get_kernel(cfg["kernel"], cfg.get("kind"))]
        else:
            pair = NormPair.named(cfg.get("tnorm", "min"), cfg.get("tconorm", "max"))
            kernels = [pair.tnorm, pair.tconorm]
        res: dict = {"epsilon1": e1, "epsilon2": e2, "resolution": 1e-9}
        lines = []
        for kernel in kernels:
            if kernel.kind == TNORM:
                val, key, rel = tnorm_residual(kernel, e1, e2), "epsilon3", "e1 o e3 >= e2"
            else:
                val, key, rel = tconorm_residual(kernel, e1, e2), "epsilon4", "e4 * e2 <= e1"
            res[key] = {"kernel": kernel.name, "value": val}
            lines.append(f"{kernel.name}: {key} = {fmt(val)} ({rel})")
        return Outcome(EXIT_OK, res, lines)
    _need(cfg, "epsilon5")
    pair = NormPair.named(cfg.get("tnorm", "min"), cfg.get("tconorm", "max"))
    e6, e7 = diagonal_witness(pair, cfg["epsilon5"])
    return Outcome(EXIT_OK, {"epsilon5": cfg["epsilon5"], "epsilon6": e6, "epsilon7": e7, "norms": pair.to_dict()},
                   [f"e6 = {fmt(e6)} (e6 o e6 >= e5), e7 = {fmt(e7)} (e7 * e7 <= e5)"])


COMMANDS: dict[str, Callable[[dict], Outcome]] = {
    "check-axioms": cmd_check_axioms,
    "topology": cmd_topology,
    "sequence": cmd_sequence,
    "norms": cmd_norms,
}


# ------------------------------------------------------------------- main


def _floats(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated numbers, got {text!r}") from None


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="JSON run config")
    common.add_argument("--space", help="JSON space description (overrides the config's space)")
    common.add_argument("--samples", type=int)
    common.add_argument("--seed", type=int)
    common.add_argument("--lambda-grid", type=_floats, metavar="A,B,C")
    common.add_argument("--epsilon-grid", type=_floats, metavar="A,B,C")
    common.add_argument("--tol", type=float)
    common.add_argument("--out", help="write the report here instead of stdout")
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--include-timing", action="store_true", help="add wall time to the JSON report")

    p = _Parser(prog="nms", description="Verification toolkit for neutrosophic metric spaces.")
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    sub.add_parser("check-axioms", parents=[common], help="sample the eighteen axioms")
    t = sub.add_parser("topology", parents=[common], help="balls, Hausdorff, NB, closure lemma, finite topology")
    t.add_argument("--task", choices=sorted(TOPOLOGY_TASKS))
    s = sub.add_parser("sequence", parents=[common], help="convergence, Cauchy, NDZ, completeness, uniform")
    s.add_argument("--task", choices=("converge", "cauchy", "ndz", "completeness", "uniform"))
    n = sub.add_parser("norms", parents=[common], help="verify kernels, solve residuals")
    n.add_argument("--task", choices=("verify", "residual", "diagonal"))
    n.add_argument("--kernel")
    n.add_argument("--kind", choices=("tnorm", "tconorm"))
    return p


FLAG_KEYS = {"samples": "samples", "seed": "seed", "lambda_grid": "lambda_grid", "epsilon_grid": "epsilon_grid",
             "tol": "tol", "task": "task", "kernel": "kernel", "kind": "kind"}


def assemble(args: argparse.Namespace) -> dict:
    """Merge the config file and command-line flags; flags win."""
    cfg: dict = {}
    base = None
    if args.config:
        cfg = load_json(args.config)
        if not isinstance(cfg, dict):
            raise UsageError("config must be a JSON object")
        base = Path(args.config).resolve().parent
    if args.space:
        cfg["space"] = str(Path(args.space).resolve())
    for attr, key in FLAG_KEYS.items():
        v = getattr(args, attr, None)
        if v is not None:
            cfg[key] = v
    validate_run(args.command, cfg)
    if "space" in cfg:
        cfg["space"] = resolve_space(cfg["space"], base)
    return cfg


def run(argv: list[str] | None = None) -> tuple[int, str, str | None]:
    """Parse, execute and render; returns (exit code, rendered report, --out path)."""
    args = build_parser().parse_args(argv)
    t0 = time.perf_counter()
    cfg: dict = {}
    try:
        cfg = assemble(args)
        out = COMMANDS[args.command](cfg)
    except UsageError as e:
        out = Outcome(EXIT_USAGE, {"error": str(e), "error_type": type(e).__name__}, [f"error: {e}"])
    except Finding as e:
        out = Outcome(EXIT_FINDING, {"error": str(e), "error_type": type(e).__name__}, [f"finding: {e}"])
    elapsed = time.perf_counter() - t0
    status = {EXIT_OK: "verified (probe)", EXIT_FINDING: "finding", EXIT_USAGE: "usage error"}[out.code]
    report = {
        "command": args.command,
        "config": cfg,
        "exit_code": out.code,
        "result": out.result,
        "schema_version": SCHEMA_VERSION,
        "status": status,
        "version": __version__,
    }
    if args.include_timing:
        report["elapsed_seconds"] = elapsed
    if args.format == "json":
        text = dumps(report)
    else:
        text = "\n".join([f"nms {args.command}: {status} (exit {out.code})", *out.lines,
                          f"elapsed: {elapsed:.3f} s"]) + "\n"
    if out.code == EXIT_USAGE:
        sys.stderr.write(f"nms {args.command}: {out.result['error']}\n")
    return out.code, text, args.out


def main(argv: list[str] | None = None) -> int:
    code, text, out_path = run(argv)
    if out_path:
        Path(out_path).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return code


if __name__ == "__main__":
    raise SystemExit(main())
