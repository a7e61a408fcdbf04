"""Sampled verification of the eighteen neutrosophic-metric axioms.

Axioms are grouped into families that share evaluations:

========== ======================== =================================
family     axioms                   what is checked
========== ======================== =================================
range      i, ii                    degrees in [0, 1]; G + B + Y <= 3
identity   iii, viii, xiii          G = 1, B = 0, Y = 0 exactly when a = b
symmetry   iv, ix, xiv              swapping a and b changes nothing
triangle   v, x, xv                 G(a,b,l) o G(b,c,m) <= G(a,c,l+m), dual for B, Y
continuity vi, xi, xvi              finite-difference slope bound in lam
limit      vii, xii, xvii           G -> 1, B -> 0, Y -> 0 as lam grows
clamp      xviii                    lam <= 0 gives exactly (0, 1, 1)
========== ======================== =================================

Every family check is a pure function of (space, points, scales, params), so
a stored :class:`~neutrosophic.report.Witness` can be replayed exactly.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from typing import Callable, Iterator, Sequence

import numpy as np

from .errors import UsageError
from .report import FAIL, PASS, PROBE_LIMITED, STRUCTURAL, AxiomEntry, AxiomReport, Witness, fmt
from .space import NmsSpace, RealUniverse

AXIOMS = ("i", "ii", "iii", "iv", "v", "vi", "vii", "viii", "ix",
          "x", "xi", "xii", "xiii", "xiv", "xv", "xvi", "xvii", "xviii")

NAMES = "GBY"
TARGET = (1.0, 0.0, 0.0)

DEFAULT_LAMBDA_GRID = (0.1, 1.0, 10.0)
DEFAULT_PARAMS = {
    "tol": 1e-9,
    "slope_bound": 10.0,
    "step": 1e-4,
    "limit_tol": 1e-3,
    "lambda_max": 1e6,
}

SKIP = "skip"


def _deg(space, a, b, lam):
    return tuple(space.evaluate(a, b, lam))


def _range(space, pts, sc, p):
    a, b = pts[:2]
    lam = sc[0]
    deg = _deg(space, a, b, lam)
    out = {"i": None, "ii": None}
    bad = [(NAMES[k], v) for k, v in enumerate(deg) if not (-p["tol"] <= v <= 1 + p["tol"])]
    values = dict(zip(NAMES, deg))
    if bad:
        name, v = bad[0]
        side = "> 1" if v > 1 else "< 0"
        out["i"] = (values, f"{name}({a}, {b}, {fmt(lam)}) = {fmt(v)} {side}")
    total = sum(deg)
    if total > 3 + p["tol"]:
        out["ii"] = ({**values, "sum": total}, f"G+B+Y at ({a}, {b}, {fmt(lam)}) = {fmt(total)} > 3")
    return out


def _identity(space, pts, sc, p):
    a, b = pts[:2]
    lam = sc[0]
    same = space.canon(a) == space.canon(b)
    deg = _deg(space, a, b, lam)
    out = {}
    for k, ax in enumerate(("iii", "viii", "xiii")):
        v, target = deg[k], TARGET[k]
        if same and abs(v - target) > p["tol"]:
            out[ax] = ({NAMES[k]: v}, f"{NAMES[k]}({a}, {a}, {fmt(lam)}) = {fmt(v)} != {fmt(target)}")
        elif not same and v == target:
            out[ax] = ({NAMES[k]: v}, f"{NAMES[k]}({a}, {b}, {fmt(lam)}) = {fmt(v)} although {a} != {b}")
        else:
            out[ax] = None
    return out


def _symmetry(space, pts, sc, p):
    a, b = pts[:2]
    lam = sc[0]
    ab, ba = _deg(space, a, b, lam), _deg(space, b, a, lam)
    out = {}
    for k, ax in enumerate(("iv", "ix", "xiv")):
        if ab[k] != ba[k]:
            out[ax] = ({"ab": ab[k], "ba": ba[k]},
                       f"{NAMES[k]}({a}, {b}) = {fmt(ab[k])} != {NAMES[k]}({b}, {a}) = {fmt(ba[k])}")
        else:
            out[ax] = None
    return out


def _triangle(space, pts, sc, p):
    a, b, c = pts[:3]
    lam, mu = sc[:2]
    x1 = _deg(space, a, b, lam)
    x2 = _deg(space, b, c, mu)
    x3 = _deg(space, a, c, lam + mu)
    tn, tc = space.norms.tnorm.fn, space.norms.tconorm.fn
    out = {}
    for k, ax in enumerate(("v", "x", "xv")):
        u, v, w = x1[k], x2[k], x3[k]
        if not (0.0 <= u <= 1.0 and 0.0 <= v <= 1.0):
            out[ax] = SKIP
            continue
        n = NAMES[k]
        values = {"left": u, "right": v, "whole": w}
        lhs = f"{n}({a},{b},{fmt(lam)}) {{op}} {n}({b},{c},{fmt(mu)})"
        if k == 0:
            comb = float(tn(u, v))
            if comb > w + p["tol"]:
                out[ax] = ({**values, "combined": comb},
                           lhs.format(op="o") + f" = {fmt(comb)} > {n}({a},{c},{fmt(lam + mu)}) = {fmt(w)}")
                continue
        else:
            comb = float(tc(u, v))
            if comb < w - p["tol"]:
                out[ax] = ({**values, "combined": comb},
                           lhs.format(op="*") + f" = {fmt(comb)} < {n}({a},{c},{fmt(lam + mu)}) = {fmt(w)}")
                continue
        out[ax] = None
    return out


def _continuity(space, pts, sc, p):
    a, b = pts[:2]
    lam = sc[0]
    h = p["step"]
    d0, d1 = _deg(space, a, b, lam), _deg(space, a, b, lam + h)
    out = {}
    for k, ax in enumerate(("vi", "xi", "xvi")):
        slope = abs(d1[k] - d0[k]) / h
        if slope > p["slope_bound"] + p["tol"] / h:
            out[ax] = ({"slope": slope},
                       f"|d{NAMES[k]}/dlam| ~ {fmt(slope)} > {fmt(p['slope_bound'])} at ({a}, {b}, {fmt(lam)})")
        else:
            out[ax] = None
    return out


def _limit(space, pts, sc, p):
    a, b = pts[:2]
    seq = [_deg(space, a, b, lam) for lam in sc]
    out = {}
    for k, ax in enumerate(("vii", "xii", "xvii")):
        vals = [d[k] for d in seq]
        target = TARGET[k]
        n = NAMES[k]
        if abs(vals[-1] - target) > p["limit_tol"]:
            out[ax] = ({"values": vals},
                       f"{n}({a}, {b}, {fmt(sc[-1])}) = {fmt(vals[-1])}, |{n} - {fmt(target)}| > {fmt(p['limit_tol'])}")
            continue
        steps = np.diff(vals)
        wrong = steps < -p["tol"] if k == 0 else steps > p["tol"]
        if np.any(wrong):
            j = int(np.argmax(wrong))
            out[ax] = ({"values": vals},
                       f"{n}({a}, {b}, .) moves away from {fmt(target)} between lam={fmt(sc[j])} and {fmt(sc[j + 1])}")
            continue
        out[ax] = None
    return out


def _clamp(space, pts, sc, p):
    a, b = pts[:2]
    for lam in sc:
        deg = _deg(space, a, b, lam)
        if deg != (0.0, 1.0, 1.0):
            return {"xviii": ({"degrees": list(deg)}, f"({a}, {b}, {fmt(lam)}) -> {deg} != (0, 1, 1)")}
    return {"xviii": None}


FAMILIES: dict[str, tuple[tuple[str, ...], Callable, int]] = {
    # name: (axioms, check, points needed)
    "range": (("i", "ii"), _range, 2),
    "identity": (("iii", "viii", "xiii"), _identity, 2),
    "symmetry": (("iv", "ix", "xiv"), _symmetry, 2),
    "triangle": (("v", "x", "xv"), _triangle, 3),
    "continuity": (("vi", "xi", "xvi"), _continuity, 2),
    "limit": (("vii", "xii", "xvii"), _limit, 2),
    "clamp": (("xviii",), _clamp, 2),
}
AXIOM_FAMILY = {ax: fam for fam, (axs, _, _) in FAMILIES.items() for ax in axs}


def _params(**overrides) -> dict:
    p = dict(DEFAULT_PARAMS)
    for k, v in overrides.items():
        if v is not None:
            p[k] = float(v)
    return p


def limit_scales(lambda_grid: Sequence[float], lambda_max: float) -> list[float]:
    """Decades from the top of the grid up to ``lambda_max`` (inclusive)."""
    top = max(lambda_grid)
    out = []
    lam = top
    while lam < lambda_max:
        out.append(lam)
        lam *= 10.0
    out.append(float(lambda_max))
    return out


def _check_grid(lambda_grid) -> list[float]:
    grid = [float(x) for x in lambda_grid]
    if not grid:
        raise UsageError("lambda_grid must be non-empty")
    if any(not (math.isfinite(x) and x > 0) for x in grid):
        raise UsageError("lambda_grid entries must be positive and finite")
    if grid != sorted(grid):
        raise UsageError("lambda_grid must be sorted")
    return grid


def _log_uniform(rng, lo, hi, n):
    if lo == hi:
        return np.full(n, lo)
    return np.exp(rng.uniform(math.log(lo), math.log(hi), size=n))


def _make_witness(axiom, pts, sc, res, index, params) -> Witness:
    values, text = res
    return Witness(axiom, tuple(pts), tuple(float(s) for s in sc), values, text, index, dict(params))


def replay_witness(space: NmsSpace, w: Witness) -> bool:
    """Re-evaluate a witness; True iff it still shows the violation."""
    fam = AXIOM_FAMILY[w.check]
    _, fn, npts = FAMILIES[fam]
    params = _params(**w.params)
    pts = [space.canon(x) for x in w.points[:npts]]
    res = fn(space, pts, list(w.scales), params)[w.check]
    return isinstance(res, tuple)


def witness_for(space: NmsSpace, axiom: str, points: Sequence, scales: Sequence[float], **params) -> Witness | None:
    """Evaluate one axiom at one tuple; a Witness if it is violated there."""
    if axiom not in AXIOM_FAMILY:
        raise UsageError(f"unknown axiom {axiom!r}")
    p = _params(**params)
    fam = AXIOM_FAMILY[axiom]
    _, fn, npts = FAMILIES[fam]
    pts = [space.canon(x) for x in points[:npts]]
    res = fn(space, pts, [float(s) for s in scales], p)[axiom]
    if isinstance(res, tuple):
        return _make_witness(axiom, pts, scales, res, -1, p)
    return None


def _family_scales(fam, lam, mu, lim_scales):
    if fam == "triangle":
        return [lam, mu]
    if fam == "limit":
        return lim_scales
    if fam == "clamp":
        return [0.0, -lam]
    return [lam]


def _point_sets(fam, a, b, c) -> list[list]:
    if fam == "identity":
        # forward on (a, a); reverse on (a, b) when the two differ
        return [[a, a]] if a == b else [[a, a], [a, b]]
    if fam == "triangle":
        return [[a, b, c]]
    return [[a, b]]


def check_axioms(
    space: NmsSpace,
    samples: int = 10_000,
    seed: int = 0,
    lambda_grid: Sequence[float] = DEFAULT_LAMBDA_GRID,
    tol: float | None = None,
    slope_bound: float | None = None,
    limit_tol: float | None = None,
    lambda_max: float | None = None,
    max_witnesses: int = 10,
    axioms: Sequence[str] | None = None,
) -> AxiomReport:
    """Sample the space and return a verdict for each axiom.

    Points are drawn uniformly from the universe, scales log-uniformly over
    the hull of ``lambda_grid``; both from one seeded generator, so the same
    arguments always give the same report.
    """
    if samples < 1:
        raise UsageError("samples must be >= 1")
    grid = _check_grid(lambda_grid)
    p = _params(tol=tol, slope_bound=slope_bound, limit_tol=limit_tol, lambda_max=lambda_max)
    wanted = list(AXIOMS) if axioms is None else [a for a in AXIOMS if a in set(axioms)]
    unknown = set(axioms or ()) - set(AXIOMS)
    if unknown:
        raise UsageError(f"unknown axioms {sorted(unknown)}")

    ss = np.random.SeedSequence(seed)
    rng_pts, rng_lam = (np.random.default_rng(s) for s in ss.spawn(2))
    U = space.universe
    A, B, C = U.sample(rng_pts, samples), U.sample(rng_pts, samples), U.sample(rng_pts, samples)
    lams = _log_uniform(rng_lam, grid[0], grid[-1], samples).tolist()
    mus = _log_uniform(rng_lam, grid[0], grid[-1], samples).tolist()
    lim = limit_scales(grid, p["lambda_max"])

    entries = {ax: AxiomEntry() for ax in wanted}
    families = [f for f, (axs, _, _) in FAMILIES.items() if any(a in entries for a in axs)]

    def record(ax, pts, sc, res, i):
        e = entries.get(ax)
        if e is None:
            return
        if res == SKIP:
            e.skipped += 1
            return
        e.checked += 1
        if res is not None:
            e.violations += 1
            if len(e.witnesses) < max_witnesses:
                e.witnesses.append(_make_witness(ax, pts, sc, res, i, p))

    for i in range(samples):
        a, b, c = A[i], B[i], C[i]
        lam, mu = lams[i], mus[i]
        for fam in families:
            _, fn, _ = FAMILIES[fam]
            sc = _family_scales(fam, lam, mu, lim)
            for pts in _point_sets(fam, a, b, c):
                for ax, res in fn(space, pts, sc, p).items():
                    record(ax, pts, sc, res, i)

    for ax, e in entries.items():
        fam = AXIOM_FAMILY[ax]
        if e.violations:
            e.status = FAIL
        elif fam == "symmetry":
            e.status = STRUCTURAL
            e.note = "evaluator orders its arguments canonically; sampled swaps agree"
        elif fam in ("continuity", "limit"):
            e.status = PROBE_LIMITED
        elif e.checked == 0:
            e.status = PROBE_LIMITED
            e.note = "no sampled tuple had all operands inside the norm's domain [0, 1]"
        else:
            e.status = PASS
        if fam == "triangle" and e.skipped:
            e.note = (e.note + "; " if e.note else "") + f"{e.skipped} tuples skipped: operands outside [0, 1]"
        if fam == "limit" and space.construction == "tabulated":
            e.note = "tabulated degrees are constant beyond the last knot"

    meta = {
        "construction": space.construction,
        "lambda_grid": grid,
        "limit_scales": lim,
        "norms": space.norms.to_dict(),
        "samples": samples,
        "seed": seed,
        **p,
    }
    notes = list(space.notes) + ["all verdicts are finite-sample probes, not proofs"]
    return AxiomReport(entries, meta, notes)


# ----------------------------------------------------------- counterexamples


STRATEGIES = ("random", "grid", "adversarial-line")
_EXTREME_SCALES = (1e-3, 1e-1, 1.0, 10.0, 1e3)


@dataclass
class SearchResult:
    witness: Witness | None
    evaluations: int
    tuples: int
    strategy: str
    axioms: list[str]
    note: str = ""

    @property
    def found(self) -> bool:
        return self.witness is not None

    def to_dict(self) -> dict:
        return {
            "axioms": self.axioms,
            "evaluations": self.evaluations,
            "found": self.found,
            "note": self.note,
            "strategy": self.strategy,
            "tuples": self.tuples,
            "witness": self.witness.to_dict() if self.witness else None,
        }


def _family_cost(fam, lim_len):
    return {"range": 1, "identity": 2, "symmetry": 2, "triangle": 3,
            "continuity": 2, "limit": lim_len, "clamp": 2}[fam]


def _random_tuples(space, rng, grid) -> Iterator[tuple]:
    U = space.universe
    while True:
        a, b, c = U.sample(rng, 3)
        lam, mu = _log_uniform(rng, grid[0], grid[-1], 2).tolist()
        yield a, b, c, lam, mu


def _grid_points(space, budget) -> list:
    U = space.universe
    if U.is_finite:
        return U.points()
    k = max(2, int(round(budget ** (1 / 3))) // max(1, U.dimension))
    axis = np.linspace(U.box[0], U.box[1], k)
    if U.dimension == 1:
        return axis.tolist()
    return [tuple(x) for x in itertools.product(axis.tolist(), repeat=U.dimension)]


def _grid_tuples(space, grid, budget) -> Iterator[tuple]:
    pts = _grid_points(space, budget)
    for a, b, c in itertools.product(pts, repeat=3):
        for lam, mu in itertools.product(grid, repeat=2):
            yield a, b, c, lam, mu


def _between_triples(space, rng) -> Iterator[tuple]:
    U = space.universe
    ratios = (0.5, 0.1, 0.9, 0.01, 0.99, 0.3, 0.7)
    if U.kind == "naturals":
        # geometric and arithmetic progressions a < b < c
        for r in itertools.count(2):
            if r * r > U.bound:
                break
            for a in range(1, U.bound // (r * r) + 1):
                yield a, a * r, a * r * r
        while True:
            a, c = sorted(U.sample(rng, 2))
            if c - a >= 2:
                t = ratios[int(rng.integers(len(ratios)))]
                yield a, min(c - 1, max(a + 1, int(round(a + t * (c - a))))), c
    elif isinstance(U, RealUniverse):
        while True:
            a, c = U.sample(rng, 2)
            t = ratios[int(rng.integers(len(ratios)))]
            if U.dimension == 1:
                yield a, a + t * (c - a), c
            else:
                yield a, tuple(x + t * (y - x) for x, y in zip(a, c)), c
    elif U.has_metric:
        pts = U.points()
        D = U.matrix
        # tightest triangles first: smallest d(a,b) + d(b,c) - d(a,c)
        triples = sorted(
            itertools.permutations(range(len(pts)), 3) if len(pts) <= 60 else [],
            key=lambda t: (D[t[0], t[1]] + D[t[1], t[2]] - D[t[0], t[2]], t),
        )
        for i, j, k in triples:
            yield pts[i], pts[j], pts[k]
        while True:
            yield tuple(U.sample(rng, 3))
    else:
        while True:
            yield tuple(U.sample(rng, 3))


def _adversarial_tuples(space, rng, grid) -> Iterator[tuple]:
    scales = sorted(set(_EXTREME_SCALES) | set(grid))
    U = space.universe
    for a, b, c in _between_triples(space, rng):
        pairs = [(lam, mu) for lam in scales for mu in scales]
        if U.has_metric:
            d1, d2 = U.distance(a, b), U.distance(b, c)
            if d1 > 0 and d2 > 0:
                for s in scales:
                    pairs.append((s * d1, s * d2))
        for lam, mu in pairs:
            yield a, b, c, lam, mu


def find_counterexample(
    space: NmsSpace,
    axioms: Sequence[str] | None = None,
    budget: int = 100_000,
    seed: int = 0,
    strategy: str = "random",
    lambda_grid: Sequence[float] = DEFAULT_LAMBDA_GRID,
    tol: float | None = None,
    slope_bound: float | None = None,
    limit_tol: float | None = None,
    lambda_max: float | None = None,
) -> SearchResult:
    """Search for a tuple violating any of ``axioms``.

    ``budget`` caps the number of degree evaluations. Returns the first
    violation found; an empty result after the budget is not a proof.
    """
    if budget < 1:
        raise UsageError("budget must be >= 1")
    if strategy not in STRATEGIES:
        raise UsageError(f"unknown strategy {strategy!r}; choose from {STRATEGIES}")
    wanted = list(AXIOMS) if axioms is None else list(axioms)
    unknown = set(wanted) - set(AXIOMS)
    if unknown:
        raise UsageError(f"unknown axioms {sorted(unknown)}")
    grid = _check_grid(lambda_grid)
    p = _params(tol=tol, slope_bound=slope_bound, limit_tol=limit_tol, lambda_max=lambda_max)
    lim = limit_scales(grid, p["lambda_max"])
    families = [f for f, (axs, _, _) in FAMILIES.items() if any(a in wanted for a in axs)]
    rng = np.random.default_rng(seed)

    if strategy == "random":
        source = _random_tuples(space, rng, grid)
    elif strategy == "grid":
        source = _grid_tuples(space, grid, budget)
    else:
        source = _adversarial_tuples(space, rng, grid)

    spent = 0
    tuples = 0
    for a, b, c, lam, mu in source:
        a, b, c = (space.canon(x) for x in (a, b, c))
        for fam in families:
            axs, fn, _ = FAMILIES[fam]
            cost = _family_cost(fam, len(lim))
            if spent + cost > budget:
                return SearchResult(None, spent, tuples, strategy, wanted,
                                    "budget exhausted without a violation; absence is not a proof")
            spent += cost
            sc = _family_scales(fam, lam, mu, lim)
            for pts in _point_sets(fam, a, b, c):
                res = fn(space, pts, sc, p)
                for ax in axs:
                    if ax in wanted and isinstance(res[ax], tuple):
                        return SearchResult(_make_witness(ax, pts, sc, res[ax], tuples, p),
                                            spent, tuples + 1, strategy, wanted)
        tuples += 1
    return SearchResult(None, spent, tuples, strategy, wanted,
                        "search space exhausted without a violation; absence is not a proof")
