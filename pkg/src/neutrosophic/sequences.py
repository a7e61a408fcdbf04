"""Convergence, Cauchy, NDZ, completeness and uniform-convergence probes.

"For all n >= N" is checked on the finite window [N, n_max]. A least N is
only accepted when N <= n_max / 2, so a pass always rests on a tail of at
least half the window rather than on the last few terms. Every verdict
carries a "(probe)" label.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from .errors import PreconditionError, UsageError
from .space import NmsSpace, RealUniverse

DEFAULT_EPS = 0.1
DEFAULT_LAMBDA_GRID = (0.1, 1.0, 10.0)
DEFAULT_N_MAX = 10_000
MAX_EXHAUSTIVE_PAIRS = 10_000

GENERATORS = ("harmonic", "alternating", "constant", "geometric")
FAMILIES = ("scaled", "power", "shift", "constant")


# ------------------------------------------------------------------ types


@dataclass
class PointSequence:
    """Terms a_1, a_2, ... given by a list or by ``term(n)`` (1-based)."""

    term: Callable[[int], object]
    n_max: int
    name: str = "explicit"
    params: dict = field(default_factory=dict)

    @classmethod
    def from_list(cls, terms: Sequence) -> "PointSequence":
        terms = list(terms)
        if not terms:
            raise UsageError("a sequence needs at least one term")
        return cls(lambda n: terms[n - 1], len(terms), "explicit", {"terms": terms})

    @classmethod
    def named(cls, name: str, n_max: int = DEFAULT_N_MAX, **params) -> "PointSequence":
        if name == "harmonic":
            s, off = float(params.get("scale", 1.0)), float(params.get("offset", 0.0))
            fn = lambda n: off + s / n
        elif name == "alternating":
            amp = float(params.get("amplitude", 1.0))
            fn = lambda n: amp * (-1.0) ** n
        elif name == "constant":
            v = params.get("value", 0.0)
            fn = lambda n: v
        elif name == "geometric":
            r, s = float(params.get("ratio", 0.5)), float(params.get("scale", 1.0))
            fn = lambda n: s * r ** n
        else:
            raise UsageError(f"unknown sequence generator {name!r}; choose from {GENERATORS}")
        return cls(fn, int(n_max), name, dict(params))

    def terms(self, n_max: int | None = None) -> list:
        n_max = self._window(n_max)
        return [self.term(n) for n in range(1, n_max + 1)]

    def _window(self, n_max):
        n_max = self.n_max if n_max is None else int(n_max)
        if n_max < 1 or n_max > self.n_max:
            raise UsageError(f"n_max must lie in [1, {self.n_max}], got {n_max}")
        return n_max

    def to_dict(self) -> dict:
        return {"n_max": self.n_max, "name": self.name, "params": self.params}


@dataclass
class NestedFamily:
    """Finite point sets D_1 >= D_2 >= ..."""

    sets: list
    allow_empty: bool = False

    def __post_init__(self):
        if not self.sets:
            raise UsageError("a nested family needs at least one set")
        self.sets = [list(dict.fromkeys(s)) for s in self.sets]
        for k, s in enumerate(self.sets):
            if not s and not self.allow_empty:
                raise UsageError(f"set D_{k + 1} is empty")
            if k and not set(s) <= set(self.sets[k - 1]):
                raise UsageError(f"D_{k + 1} is not contained in D_{k}")

    @classmethod
    def shrinking_intervals(cls, n_sets: int, resolution: int = 1000, lo: float = 0.0) -> "NestedFamily":
        """D_n = grid points of [lo, lo + 1/n] on a fixed grid of step 1/resolution."""
        grid = lo + np.arange(resolution + 1) / resolution
        return cls([[float(x) for x in grid if x <= lo + 1.0 / n + 1e-15] for n in range(1, n_sets + 1)])

    def to_dict(self) -> dict:
        return {"sets": self.sets}


def nested_intersection(family: NestedFamily) -> list:
    """Exact intersection of a finite nested family (the last set, checked)."""
    out = set(family.sets[0])
    for s in family.sets[1:]:
        out &= set(s)
    return [p for p in family.sets[0] if p in out]


def _pointwise_power_limit(x):
    return 1.0 if x == 1.0 else 0.0


@dataclass
class FunctionSequence:
    """Maps f_n (1-based) and a candidate limit f on a sampled domain."""

    domain: list
    fn: Callable[[int, object], object]
    limit: Callable[[object], object]
    name: str = "custom"
    params: dict = field(default_factory=dict)

    def __post_init__(self):
        if not self.domain:
            raise UsageError("the domain sample must be non-empty")

    @staticmethod
    def default_domain() -> list:
        # uniform grid plus points crowding 1, where x^n is slowest
        pts = set(np.linspace(0.0, 1.0, 101).tolist()) | {1.0 - 10.0 ** -k for k in range(1, 9)}
        return sorted(pts)

    @classmethod
    def named(cls, family: str, domain: Sequence | None = None, **params) -> "FunctionSequence":
        dom = list(domain) if domain is not None else cls.default_domain()
        if family == "scaled":
            fn, lim = (lambda n, x: x / n), (lambda x: 0.0)
        elif family == "power":
            fn, lim = (lambda n, x: x ** n), _pointwise_power_limit
        elif family == "shift":
            fn, lim = (lambda n, x: x + 1.0 / n), (lambda x: x)
        elif family == "constant":
            c = params.get("value")
            if c is None:
                fn, lim = (lambda n, x: x), (lambda x: x)
            else:
                fn, lim = (lambda n, x: c), (lambda x: c)
        else:
            raise UsageError(f"unknown function family {family!r}; choose from {FAMILIES}")
        return cls(dom, fn, lim, family, dict(params))

    def to_dict(self) -> dict:
        return {"domain_size": len(self.domain), "name": self.name, "params": self.params}


@dataclass
class SeqReport:
    """Per-scale least N (None = no admissible N) and an overall probe verdict."""

    kind: str
    verdict: bool
    label: str
    rows: list
    params: dict = field(default_factory=dict)
    diagnosis: dict = field(default_factory=dict)

    def __bool__(self) -> bool:
        return self.verdict

    def N(self, lam: float):
        for r in self.rows:
            if r["lambda"] == lam:
                return r["N"]
        raise KeyError(lam)

    def to_dict(self) -> dict:
        return {"diagnosis": self.diagnosis, "kind": self.kind, "label": self.label,
                "params": self.params, "rows": self.rows, "verdict": self.verdict}


# ---------------------------------------------------------------- helpers


def _check_eps(eps):
    eps = float(eps)
    if not (0.0 < eps < 1.0):
        raise UsageError(f"eps must lie in (0, 1), got {eps!r}")
    return eps


def _check_lams(grid):
    lams = [float(x) for x in grid]
    if not lams or any(not (math.isfinite(x) and x > 0) for x in lams):
        raise UsageError("lambda_grid must be non-empty, positive and finite")
    return lams


def _inside_many(space, A, B, lam, eps) -> np.ndarray:
    G, Bn, Y = space.degrees_many(A, B, lam)
    return (G > 1.0 - eps) & (Bn < eps) & (Y < eps)


def _least_tail(ok: np.ndarray) -> int | None:
    """Least 1-based N with ok[N-1:] all true and N <= len/2; None otherwise."""
    n = len(ok)
    bad = np.flatnonzero(~ok)
    N = 1 if bad.size == 0 else int(bad[-1]) + 2
    return N if N <= max(1, n // 2) else None


class _PairJudge:
    """Answers "are terms i and j within the ball bounds" for index arrays."""

    def __init__(self, space: NmsSpace, terms: list, lam: float, eps: float, table=None):
        self.space, self.terms, self.lam, self.eps = space, terms, lam, eps
        U = space.universe
        if U.is_finite:
            if table is None:
                table = inside_table(space, lam, eps)
            idx, self.M = table
            self.codes = np.array([idx[space.canon(t)] for t in terms], dtype=int)
        else:
            self.M = None
            self.canon = [space.canon(t) for t in terms]

    def __call__(self, I: np.ndarray, J: np.ndarray) -> np.ndarray:
        if self.M is not None:
            return self.M[self.codes[I], self.codes[J]]
        return _inside_many(self.space, [self.canon[i] for i in I], [self.canon[j] for j in J], self.lam, self.eps)


def inside_table(space: NmsSpace, lam: float, eps: float):
    """(index, matrix) with matrix[i, j] true iff point j is in O(point i, eps, lam)."""
    pts = space.universe.points()
    n = len(pts)
    A = [p for p in pts for _ in pts]
    B = [q for _ in pts for q in pts]
    M = _inside_many(space, A, B, lam, eps).reshape(n, n)
    return {p: i for i, p in enumerate(pts)}, M


def _tail_ok(judge: _PairJudge, N: int, n_max: int, rng) -> bool:
    """All sampled pairs n, m in [N, n_max] pass (0-based indices N-1 ..)."""
    k = n_max - N + 1
    if k <= 1:
        return True
    idx = np.arange(N - 1, n_max)
    if k * (k - 1) // 2 <= MAX_EXHAUSTIVE_PAIRS:
        I, J = np.triu_indices(k, 1)
        return bool(np.all(judge(idx[I], idx[J])))
    # boundary row (N, m) always, then random pairs
    if not np.all(judge(np.full(k - 1, N - 1), idx[1:])):
        return False
    I = rng.integers(N - 1, n_max, size=MAX_EXHAUSTIVE_PAIRS)
    J = rng.integers(N - 1, n_max, size=MAX_EXHAUSTIVE_PAIRS)
    return bool(np.all(judge(I, J)))


def _least_cauchy_N(judge: _PairJudge, n_max: int, seed: int) -> int | None:
    limit = max(1, n_max // 2)
    rng = np.random.default_rng(seed)
    if not _tail_ok(judge, limit, n_max, rng):
        return None
    lo, hi = 1, limit  # hi is known good
    while lo < hi:
        mid = (lo + hi) // 2
        if _tail_ok(judge, mid, n_max, np.random.default_rng([seed, mid])):
            hi = mid
        else:
            lo = mid + 1
    return hi


# ------------------------------------------------------------- operations


def converges_to(space: NmsSpace, seq: PointSequence, a, eps: float = DEFAULT_EPS,
                 lambda_grid: Sequence[float] = DEFAULT_LAMBDA_GRID, n_max: int | None = None) -> SeqReport:
    """Least N per scale with a_n in O(a, eps, lam) for all n in [N, n_max]."""
    eps, lams = _check_eps(eps), _check_lams(lambda_grid)
    terms = [space.canon(t) for t in seq.terms(n_max)]
    a = space.canon(a)
    rows = []
    for lam in lams:
        ok = _inside_many(space, [a] * len(terms), terms, lam, eps)
        rows.append({"N": _least_tail(ok), "lambda": lam})
    verdict = all(r["N"] is not None for r in rows)
    label = "converges (probe)" if verdict else "does not converge (probe)"
    return SeqReport("converge", verdict, label, rows,
                     {"eps": eps, "limit": a, "n_max": len(terms), "sequence": seq.to_dict()})


def is_cauchy(space: NmsSpace, seq: PointSequence, eps: float = DEFAULT_EPS,
              lambda_grid: Sequence[float] = DEFAULT_LAMBDA_GRID, n_max: int | None = None,
              seed: int = 0, _tables: dict | None = None) -> SeqReport:
    """Least N per scale with every sampled pair n, m in [N, n_max] within the bounds.

    Pairs are exhaustive while the window has at most 10^4 of them; beyond
    that the boundary row (N, m) plus 10^4 seeded random pairs are checked.
    """
    eps, lams = _check_eps(eps), _check_lams(lambda_grid)
    terms = seq.terms(n_max)
    if len(terms) < 2:
        raise UsageError("is_cauchy needs n_max >= 2")
    rows = []
    for lam in lams:
        table = _tables.get(lam) if _tables else None
        judge = _PairJudge(space, terms, lam, eps, table)
        rows.append({"N": _least_cauchy_N(judge, len(terms), seed), "lambda": lam})
    verdict = all(r["N"] is not None for r in rows)
    label = "Cauchy (probe)" if verdict else "not Cauchy (probe)"
    return SeqReport("cauchy", verdict, label, rows,
                     {"eps": eps, "n_max": len(terms), "seed": seed, "sequence": seq.to_dict()})


def has_ndz(space: NmsSpace, family: NestedFamily, epsilon_grid: Sequence[float] = (DEFAULT_EPS,),
            lambda_grid: Sequence[float] = DEFAULT_LAMBDA_GRID) -> SeqReport:
    """Least N per (eps, lam) with every pair of D_N within the bounds."""
    lams = _check_lams(lambda_grid)
    epss = [_check_eps(e) for e in epsilon_grid]
    sets = [[space.canon(p) for p in s] for s in family.sets]
    rows = []
    for lam in lams:
        for eps in epss:
            found = None
            for k, D in enumerate(sets):
                if not D:
                    continue
                A = [p for p in D for _ in D]
                B = [q for _ in D for q in D]
                if np.all(_inside_many(space, A, B, lam, eps)):
                    found = k + 1
                    break
            rows.append({"N": found, "epsilon": eps, "lambda": lam})
    verdict = all(r["N"] is not None for r in rows)
    label = "NDZ (probe)" if verdict else "not NDZ (probe)"
    return SeqReport("ndz", verdict, label, rows, {"sets": len(sets)})


def _random_sequence(rng, pts: list, n_max: int, kind: str) -> list:
    n = len(pts)
    if kind == "random":
        return [pts[i] for i in rng.integers(0, n, n_max)]
    if kind == "eventually-constant":
        cut = int(rng.integers(1, n_max // 2 + 1))
        tail = pts[int(rng.integers(0, n))]
        return [pts[i] for i in rng.integers(0, n, cut)] + [tail] * (n_max - cut)
    if kind == "oscillating":
        i, j = rng.choice(n, size=2, replace=n < 2)
        return [pts[i] if k % 2 else pts[j] for k in range(n_max)]
    # late-switch: constant, then a single jump near the end
    i, j = rng.integers(0, n, 2)
    cut = int(rng.integers(n_max // 2, n_max))
    return [pts[i]] * cut + [pts[j]] * (n_max - cut)


SEQUENCE_KINDS = ("random", "eventually-constant", "oscillating", "late-switch")


def completeness_probe(space: NmsSpace, trials: int = 1000, seed: int = 0, eps: float = DEFAULT_EPS,
                       lambda_grid: Sequence[float] = DEFAULT_LAMBDA_GRID, n_max: int = 100) -> SeqReport:
    """Every sequence judged Cauchy must converge to some point of the finite universe.

    The candidate limit tried first is the term a_N at the Cauchy index, then
    every other point. The same (eps, lam) is used for both judgements; see
    the module notes for the scale split used by the completeness theorems.
    """
    U = space.universe
    if not U.is_finite:
        raise PreconditionError(f"completeness_probe needs a finite universe, got {U.kind}")
    if trials < 1:
        raise UsageError("trials must be >= 1")
    eps, lams = _check_eps(eps), _check_lams(lambda_grid)
    pts = U.points()
    tables = {lam: inside_table(space, lam, eps) for lam in lams}
    rng = np.random.default_rng(seed)
    cauchy = failures = 0
    counts = {k: 0 for k in SEQUENCE_KINDS}
    first_failure = None
    for t in range(trials):
        kind = SEQUENCE_KINDS[t % len(SEQUENCE_KINDS)]
        terms = _random_sequence(rng, pts, n_max, kind)
        seq = PointSequence.from_list(terms)
        rep = is_cauchy(space, seq, eps, lams, seed=seed + t, _tables=tables)
        if not rep.verdict:
            continue
        cauchy += 1
        counts[kind] += 1
        N = max(r["N"] for r in rep.rows)
        candidates = [terms[N - 1]] + [p for p in pts if p != terms[N - 1]]
        if not any(_converges_fast(tables, terms, x, lams) for x in candidates):
            failures += 1
            if first_failure is None:
                first_failure = {"terms": terms, "trial": t}
    rows = [{"cauchy": cauchy, "failures": failures, "trials": trials}]
    verdict = failures == 0
    label = "Cauchy implies convergent (probe)" if verdict else "Cauchy sequence without limit (probe)"
    return SeqReport("completeness", verdict, label, rows,
                     {"eps": eps, "lambda_grid": lams, "n_max": n_max, "seed": seed},
                     {"cauchy_by_kind": counts, "first_failure": first_failure})


def _converges_fast(tables, terms, x, lams) -> bool:
    for lam in lams:
        idx, M = tables[lam]
        codes = np.array([idx[t] for t in terms], dtype=int)
        if _least_tail(M[idx[x], codes]) is None:
            return False
    return True


def _fn_values(fseq: FunctionSequence, space: NmsSpace, n_max: int):
    """(limit values, flat list of f_n(x) row-major in n) for the domain sample."""
    dom = fseq.domain
    limit = [space.canon(fseq.limit(x)) for x in dom]
    U = space.universe
    if isinstance(U, RealUniverse) and U.dimension == 1:
        # broadcast the map over (n, x) when it accepts arrays
        try:
            n = np.arange(1, n_max + 1, dtype=float)[:, None]
            x = np.asarray(dom, dtype=float)[None, :]
            V = np.broadcast_to(np.asarray(fseq.fn(n, x), dtype=float), (n_max, len(dom)))
            if np.all(np.isfinite(V)):
                return limit, V.ravel().tolist()
        except (TypeError, ValueError):
            pass
    flat = [space.canon(fseq.fn(n, x)) for n in range(1, n_max + 1) for x in dom]
    return limit, flat


def uniform_convergence_check(space: NmsSpace, fseq: FunctionSequence, eps: float = DEFAULT_EPS,
                              lambda_grid: Sequence[float] = DEFAULT_LAMBDA_GRID,
                              n_max: int = DEFAULT_N_MAX) -> SeqReport:
    """One N per scale valid for every sampled domain point, with the pointwise N per point.

    When no uniform N exists the diagnosis names the domain point whose
    pointwise N is largest (or absent) and lists pointwise N along the
    approach to it.
    """
    eps, lams = _check_eps(eps), _check_lams(lambda_grid)
    if n_max < 2:
        raise UsageError("n_max must be >= 2")
    limit, flat = _fn_values(fseq, space, n_max)
    m = len(fseq.domain)
    rows = []
    diagnosis = {}
    for lam in lams:
        ok = _inside_many(space, limit * n_max, flat, lam, eps).reshape(n_max, m)
        uniform = _least_tail(ok.all(axis=1))
        pointwise = [_least_tail(ok[:, j]) for j in range(m)]
        rows.append({"N": uniform, "lambda": lam,
                     "max_pointwise_N": max((p for p in pointwise if p is not None), default=None),
                     "pointwise_failures": sum(p is None for p in pointwise)})
        if uniform is None and not diagnosis:
            key = [math.inf if p is None else p for p in pointwise]
            worst = int(np.argmax(key))
            order = sorted(range(m), key=lambda j: abs(_as_float(fseq.domain[j]) - _as_float(fseq.domain[worst])))
            near = sorted(order[:10], key=lambda j: _as_float(fseq.domain[j]))
            diagnosis = {
                "lambda": lam,
                "worst_point": fseq.domain[worst],
                "pointwise_N_near_worst": [{"N": pointwise[j], "x": fseq.domain[j]} for j in near],
                "note": "pointwise N grows without bound toward the worst point; no single N serves all points",
            }
    verdict = all(r["N"] is not None for r in rows)
    label = "uniform (probe)" if verdict else "not uniform (probe)"
    return SeqReport("uniform", verdict, label, rows,
                     {"eps": eps, "family": fseq.to_dict(), "n_max": n_max}, diagnosis)


def _as_float(x) -> float:
    try:
        return float(x)
    except TypeError:
        return float(np.linalg.norm(np.asarray(x, dtype=float)))


def limit_continuity_probe(space: NmsSpace, fseq: FunctionSequence, continuity_points: Sequence | None = None,
                           delta_grid: Sequence[float] = (1e-1, 1e-2, 1e-3, 1e-4), uniform: SeqReport | None = None,
                           eps: float = DEFAULT_EPS, lambda_grid: Sequence[float] = DEFAULT_LAMBDA_GRID,
                           samples: int = 21) -> SeqReport:
    """Modulus-of-continuity table for the limit f of a uniformly convergent sequence.

    For each probe point a0, scale lam and delta, records the worst
    gap = max(1 - G, B, Y) between f(a) and f(a0) over sampled |a - a0| < delta
    inside the domain hull. The limit passes when every column is
    non-increasing as delta shrinks and ends below eps.
    """
    if uniform is None:
        uniform = uniform_convergence_check(space, fseq, eps, lambda_grid)
    if uniform.kind != "uniform" or not uniform.verdict:
        raise PreconditionError("limit_continuity_probe needs a uniform convergence verdict")
    eps, lams = _check_eps(eps), _check_lams(lambda_grid)
    deltas = sorted((float(d) for d in delta_grid), reverse=True)
    if not deltas or any(d <= 0 for d in deltas):
        raise UsageError("delta_grid must be positive")
    dom = np.asarray([_as_float(x) for x in fseq.domain])
    lo, hi = float(dom.min()), float(dom.max())
    if continuity_points is None:
        continuity_points = np.linspace(lo, hi, 5).tolist()
    rows = []
    ok_all = True
    for a0 in continuity_points:
        f0 = space.canon(fseq.limit(a0))
        for lam in lams:
            gaps = []
            for d in deltas:
                xs = np.linspace(a0 - d, a0 + d, samples + 2)[1:-1]
                xs = xs[(xs >= lo) & (xs <= hi)]
                img = [space.canon(fseq.limit(float(x))) for x in xs]
                G, B, Y = space.degrees_many([f0] * len(img), img, lam)
                gaps.append(float(np.max(np.maximum.reduce([1.0 - G, B, Y]))) if len(img) else 0.0)
            mono = all(gaps[k + 1] <= gaps[k] + 1e-12 for k in range(len(gaps) - 1))
            ok = mono and gaps[-1] < eps
            ok_all &= ok
            rows.append({"a0": a0, "gaps": gaps, "lambda": lam, "ok": ok})
    label = "limit continuous (probe)" if ok_all else "limit not continuous (probe)"
    return SeqReport("limit-continuity", ok_all, label, rows, {"deltas": deltas, "eps": eps})
