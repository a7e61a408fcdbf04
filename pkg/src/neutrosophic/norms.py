"""Continuous triangular norms and conorms.

Kernels are plain binary functions on the unit square. Built-in kernels are
written with numpy ufuncs so the sampled axiom verifier can evaluate them on
whole arrays at once; user kernels that only accept scalars are wrapped with
``np.vectorize`` on demand.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable

import numpy as np

from .errors import KernelError, NoSolutionError, UsageError, VerificationError
from .report import FAIL, PASS, PROBE_LIMITED, AxiomEntry, AxiomReport, Witness, fmt

TNORM = "tnorm"
TCONORM = "tconorm"

RESOLUTION = 1e-9
CONTINUITY_STEP = 1e-4
DEFAULT_SLOPE_BOUND = 10.0


class UnitValue(float):
    """A float guaranteed to lie in [0, 1]."""

    def __new__(cls, value):
        x = float(value)
        if not (0.0 <= x <= 1.0):
            raise UsageError(f"value {value!r} is outside [0, 1]")
        return super().__new__(cls, x)


def _min(s, t):
    return np.minimum(s, t)


def _product(s, t):
    return np.multiply(s, t)


def _lukasiewicz(s, t):
    # ordered so that x o 1 == x holds bit-for-bit and the result is symmetric
    return np.maximum(0.0, np.minimum(s, t) - (1.0 - np.maximum(s, t)))


def _max(s, t):
    return np.maximum(s, t)


def _probsum(s, t):
    return np.minimum(1.0, s + t - s * t)


def _mean(s, t):
    return (np.asarray(s) + np.asarray(t)) / 2.0


@dataclass(frozen=True)
class NormKernel:
    """A named binary operation on the unit interval.

    ``verified`` marks kernels known to satisfy the norm axioms. Built-ins are
    verified; user kernels start unverified and go through :func:`certify`.
    """

    name: str
    kind: str
    fn: Callable = field(compare=False, repr=False)
    verified: bool = False

    def __post_init__(self):
        if self.kind not in (TNORM, TCONORM):
            raise KernelError(f"kernel kind must be {TNORM!r} or {TCONORM!r}, got {self.kind!r}")

    def __call__(self, s, t):
        return self.fn(s, t)

    @property
    def identity(self) -> float:
        return 1.0 if self.kind == TNORM else 0.0


KERNELS: dict[str, NormKernel] = {
    "min": NormKernel("min", TNORM, _min, verified=True),
    "product": NormKernel("product", TNORM, _product, verified=True),
    "lukasiewicz": NormKernel("lukasiewicz", TNORM, _lukasiewicz, verified=True),
    "max": NormKernel("max", TCONORM, _max, verified=True),
    "probsum": NormKernel("probsum", TCONORM, _probsum, verified=True),
}

# Candidates that are *not* norms; available to the verifier only.
CANDIDATES: dict[str, NormKernel] = {
    "mean": NormKernel("mean", TNORM, _mean),
}

TNORM_NAMES = tuple(k for k, v in KERNELS.items() if v.kind == TNORM)
TCONORM_NAMES = tuple(k for k, v in KERNELS.items() if v.kind == TCONORM)


def get_kernel(name: str, kind: str | None = None, candidates: bool = False) -> NormKernel:
    table = {**KERNELS, **CANDIDATES} if candidates else KERNELS
    try:
        kernel = table[name]
    except KeyError:
        raise KernelError(f"unknown kernel {name!r}; choose from {sorted(table)}") from None
    if kind is not None and kernel.kind != kind and name not in CANDIDATES:
        raise KernelError(f"kernel {name!r} is a {kernel.kind}, expected a {kind}")
    if kind is not None and name in CANDIDATES:
        kernel = replace(kernel, kind=kind)
    return kernel


@dataclass(frozen=True)
class NormPair:
    """The (t-norm, t-conorm) pair a space carries.

    Unverified kernels are refused unless ``force`` is set.
    """

    tnorm: NormKernel
    tconorm: NormKernel
    force: bool = field(default=False, compare=False)

    def __post_init__(self):
        if self.tnorm.kind != TNORM:
            raise KernelError(f"{self.tnorm.name!r} is a {self.tnorm.kind}, not a tnorm")
        if self.tconorm.kind != TCONORM:
            raise KernelError(f"{self.tconorm.name!r} is a {self.tconorm.kind}, not a tconorm")
        if not self.force:
            for k in (self.tnorm, self.tconorm):
                if not k.verified:
                    raise KernelError(
                        f"kernel {k.name!r} has not passed verify_norm_axioms; "
                        "certify it first or pass force=True"
                    )

    @classmethod
    def named(cls, tnorm: str = "min", tconorm: str = "max") -> "NormPair":
        return cls(get_kernel(tnorm, TNORM), get_kernel(tconorm, TCONORM))

    def to_dict(self) -> dict:
        return {"tconorm": self.tconorm.name, "tnorm": self.tnorm.name}


def _check_kind(kernel: NormKernel, kind: str) -> None:
    if kernel.kind != kind:
        raise KernelError(f"kernel {kernel.name!r} is a {kernel.kind}, expected a {kind}")


def _apply(kernel: NormKernel, s, t) -> UnitValue:
    s, t = UnitValue(s), UnitValue(t)
    r = float(kernel.fn(s, t))
    if not (0.0 <= r <= 1.0):
        raise KernelError(f"kernel {kernel.name!r} returned {r!r} outside [0, 1]")
    return UnitValue(r)


def apply_tnorm(kernel: NormKernel, s, t) -> UnitValue:
    _check_kind(kernel, TNORM)
    return _apply(kernel, s, t)


def apply_tconorm(kernel: NormKernel, s, t) -> UnitValue:
    _check_kind(kernel, TCONORM)
    return _apply(kernel, s, t)


def fold(kernel: NormKernel, *values: float) -> float:
    """Left fold of ``kernel`` over ``values`` (e.g. a o b o c)."""
    acc = float(values[0])
    for v in values[1:]:
        acc = float(kernel.fn(acc, float(v)))
    return acc


def _vectorised(fn: Callable) -> Callable:
    def ev(s: np.ndarray, t: np.ndarray) -> np.ndarray:
        try:
            out = np.asarray(fn(s, t), dtype=float)
            if out.shape == np.broadcast(s, t).shape:
                return out
        except (TypeError, ValueError):
            pass
        return np.vectorize(lambda a, b: float(fn(float(a), float(b))), otypes=[float])(s, t)

    return ev


def _corner_lattice() -> np.ndarray:
    g = np.array([0.0, 0.5, 1.0])
    return np.array(np.meshgrid(g, g, g, g, indexing="ij")).reshape(4, -1).T


def verify_norm_axioms(
    kernel: NormKernel,
    samples: int = 10_000,
    seed: int = 0,
    tol: float = 1e-12,
    slope_bound: float = DEFAULT_SLOPE_BOUND,
    max_witnesses: int = 5,
) -> AxiomReport:
    """Check the t-norm / t-conorm axioms on sampled tuples (s, t, u, v).

    The random tuples are followed by the 81 corners of the {0, 1/2, 1}^4
    lattice. Continuity is probed as a Lipschitz bound with step 1e-4.
    Failures are report content; nothing is raised.
    """
    if samples < 1:
        raise UsageError("samples must be >= 1")
    if tol < 0:
        raise UsageError("tol must be >= 0")
    rng = np.random.default_rng(seed)
    X = np.vstack([rng.random((samples, 4)), _corner_lattice()])
    s, t, u, v = X.T
    f = _vectorised(kernel.fn)
    ident = kernel.identity
    h = CONTINUITY_STEP

    checks: dict[str, tuple[np.ndarray, Callable[[int], Witness]]] = {}

    fst = f(s, t)
    bad = ~((fst >= -tol) & (fst <= 1 + tol))
    checks["range"] = (bad, lambda i: Witness(
        "range", (s[i], t[i]), values={"value": fst[i]},
        inequality=f"f({fmt(s[i])}, {fmt(t[i])}) = {fmt(fst[i])} not in [0, 1]"))

    fb = f(s, np.full_like(s, ident))
    bad = np.abs(fb - s) > tol
    sym = "o 1" if kernel.kind == TNORM else "* 0"
    checks["boundary"] = (bad, lambda i: Witness(
        "boundary", (s[i],), values={"lhs": fb[i], "rhs": s[i]},
        inequality=f"{fmt(s[i])} {sym} = {fmt(fb[i])} != {fmt(s[i])}"))

    lo_s, hi_u = np.minimum(s, u), np.maximum(s, u)
    lo_t, hi_v = np.minimum(t, v), np.maximum(t, v)
    m_lo, m_hi = f(lo_s, lo_t), f(hi_u, hi_v)
    bad = m_lo > m_hi + tol
    checks["monotonicity"] = (bad, lambda i: Witness(
        "monotonicity", (lo_s[i], lo_t[i], hi_u[i], hi_v[i]),
        values={"lhs": m_lo[i], "rhs": m_hi[i]},
        inequality=f"f({fmt(lo_s[i])}, {fmt(lo_t[i])}) = {fmt(m_lo[i])} > "
                   f"f({fmt(hi_u[i])}, {fmt(hi_v[i])}) = {fmt(m_hi[i])}"))

    fts = f(t, s)
    bad = np.abs(fst - fts) > tol
    checks["commutativity"] = (bad, lambda i: Witness(
        "commutativity", (s[i], t[i]), values={"lhs": fst[i], "rhs": fts[i]},
        inequality=f"f({fmt(s[i])}, {fmt(t[i])}) = {fmt(fst[i])} != f({fmt(t[i])}, {fmt(s[i])}) = {fmt(fts[i])}"))

    ftu = f(t, u)
    left = f(np.clip(fst, 0, 1), u)
    right = f(s, np.clip(ftu, 0, 1))
    bad = np.abs(left - right) > tol
    checks["associativity"] = (bad, lambda i: Witness(
        "associativity", (s[i], t[i], u[i]), values={"lhs": left[i], "rhs": right[i]},
        inequality=f"f(f({fmt(s[i])}, {fmt(t[i])}), {fmt(u[i])}) = {fmt(left[i])} != "
                   f"f({fmt(s[i])}, f({fmt(t[i])}, {fmt(u[i])})) = {fmt(right[i])}"))

    s2 = np.where(s + h <= 1.0, s + h, s - h)
    t2 = np.where(t + h <= 1.0, t + h, t - h)
    d1 = np.abs(f(s2, t) - fst) / np.abs(s2 - s)
    d2 = np.abs(f(s, t2) - fst) / np.abs(t2 - t)
    slope = np.maximum(d1, d2)
    bad = slope > slope_bound + tol / h
    checks["continuity"] = (bad, lambda i: Witness(
        "continuity", (s[i], t[i]), scales=(h,), values={"slope": slope[i]},
        inequality=f"finite-difference slope {fmt(slope[i])} > {fmt(slope_bound)} at ({fmt(s[i])}, {fmt(t[i])})"))

    params = {"slope_bound": slope_bound, "tol": tol}
    entries = {}
    for name, (bad, make) in checks.items():
        idx = np.flatnonzero(bad)
        entry = AxiomEntry(checked=len(X), violations=int(idx.size))
        for i in idx[:max_witnesses]:
            w = make(int(i))
            w.index = int(i)
            w.points = tuple(float(p) for p in w.points)
            w.values = {k: float(val) for k, val in w.values.items()}
            w.params = params
            entry.witnesses.append(w)
        if idx.size:
            entry.status = FAIL
        elif name == "continuity":
            entry.status = PROBE_LIMITED
        entries[name] = entry
    meta = {
        "corner_tuples": len(X) - samples,
        "kernel": kernel.name,
        "kind": kernel.kind,
        "samples": samples,
        "seed": seed,
        "slope_bound": slope_bound,
        "step": h,
        "tol": tol,
    }
    return AxiomReport(entries, meta)


def certify(kernel: NormKernel, samples: int = 10_000, seed: int = 0, **kw) -> NormKernel:
    """Return a verified copy of ``kernel`` or raise if the sampled check fails."""
    report = verify_norm_axioms(kernel, samples=samples, seed=seed, **kw)
    if not report.ok:
        raise VerificationError(f"kernel {kernel.name!r} fails: {', '.join(report.failed)}")
    return replace(kernel, verified=True)


def _smallest(pred: Callable[[float], bool], lo: float = 0.0, hi: float = 1.0) -> float:
    # pred false at lo, true at hi, monotone in between
    while hi - lo > RESOLUTION:
        mid = 0.5 * (lo + hi)
        if pred(mid):
            hi = mid
        else:
            lo = mid
    return hi


def _largest(pred: Callable[[float], bool], lo: float = 0.0, hi: float = 1.0) -> float:
    # pred true at lo, false at hi, monotone in between
    while hi - lo > RESOLUTION:
        mid = 0.5 * (lo + hi)
        if pred(mid):
            lo = mid
        else:
            hi = mid
    return lo


def _open_unit(x: float, name: str) -> float:
    x = float(x)
    if not (0.0 < x < 1.0):
        raise UsageError(f"{name} must lie in (0, 1), got {x!r}")
    return x


def smallest_right_factor(kernel: NormKernel, left: float, target: float) -> float:
    """Smallest x on the bisection grid with ``left o x >= target``.

    No range preconditions; used by the constructive proofs where ``left``
    may equal 1.
    """
    pred = lambda x: float(kernel.fn(left, x)) >= target
    if not pred(1.0):
        raise NoSolutionError(f"{kernel.name}({left}, 1) < {target}: not a valid t-norm here")
    if pred(0.0):
        return RESOLUTION
    return _smallest(pred)


def largest_left_factor(kernel: NormKernel, bound: float, right: float) -> float:
    """Largest x on the bisection grid with ``x * right <= bound``."""
    pred = lambda x: float(kernel.fn(x, right)) <= bound
    if not pred(0.0):
        raise NoSolutionError(f"{kernel.name}(0, {right}) > {bound}: not a valid t-conorm here")
    if pred(1.0):
        return 1.0 - RESOLUTION
    return _largest(pred)


def tnorm_residual(kernel: NormKernel, e1: float, e2: float) -> float:
    """Smallest e3 in (0, 1) with ``e1 o e3 >= e2`` (requires e1 > e2)."""
    _check_kind(kernel, TNORM)
    e1, e2 = _open_unit(e1, "e1"), _open_unit(e2, "e2")
    if not e1 > e2:
        raise UsageError("tnorm_residual needs e1 > e2")
    e3 = smallest_right_factor(kernel, e1, e2)
    if e3 >= 1.0:
        raise NoSolutionError(f"no e3 < 1 with {kernel.name}({e1}, e3) >= {e2}")
    return e3


def tconorm_residual(kernel: NormKernel, e1: float, e2: float) -> float:
    """Largest e4 in (0, 1) with ``e4 * e2 <= e1`` (requires e1 > e2 >= 0)."""
    _check_kind(kernel, TCONORM)
    e1 = _open_unit(e1, "e1")
    e2 = float(e2)
    if not (0.0 <= e2 < e1):
        raise UsageError("tconorm_residual needs 0 <= e2 < e1")
    e4 = largest_left_factor(kernel, e1, e2)
    if e4 <= 0.0:
        raise NoSolutionError(f"no e4 > 0 with {kernel.name}(e4, {e2}) <= {e1}")
    return e4


def diagonal_witness(pair: NormPair, e5: float) -> tuple[float, float]:
    """Return (e6, e7) with ``e6 o e6 >= e5`` and ``e7 * e7 <= e5``.

    e6 is the smallest and e7 the largest such value on the bisection grid;
    both must be interior to (0, 1).
    """
    e5 = _open_unit(e5, "e5")
    tn, tc = pair.tnorm.fn, pair.tconorm.fn
    e6 = _smallest(lambda x: float(tn(x, x)) >= e5)
    e7 = _largest(lambda x: float(tc(x, x)) <= e5)
    if not (0.0 < e6 < 1.0) or float(tn(e6, e6)) < e5:
        raise NoSolutionError(f"no interior e6 with e6 o e6 >= {e5}")
    if not (0.0 < e7 < 1.0) or float(tc(e7, e7)) > e5:
        raise NoSolutionError(f"no interior e7 with e7 * e7 <= {e5}")
    return e6, e7


def is_finite_unit(x: float) -> bool:
    return math.isfinite(x) and 0.0 <= x <= 1.0
