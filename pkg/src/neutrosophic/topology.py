"""Open balls, the constructive topology theorems, and finite-model topology.

Finite topologies are stored as integer bitmasks over the universe's point
list. Every finite topology is determined by its minimal neighbourhoods
``U_x`` (the intersection of all open sets containing ``x``), so closure is
``{x : U_x meets S}`` and interior is ``{x : U_x inside S}``.

Two ways to build one:

* ``generate_finite_topology(space, eps_grid, lam_grid)`` uses the grid balls
  ``O(a, eps, lam)`` as a subbase.
* ``eps_grid=None`` uses *every* radius at each grid scale. For a fixed
  centre and scale, the distinct balls are the threshold sets
  ``{y : gap(c, y, lam) <= g}`` where ``gap = max(1 - G, B, Y)`` and ``g``
  runs over the gaps below 1 that occur, so this is the exact ball topology
  restricted to the scales in ``lam_grid``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np

from .errors import (
    NoSolutionError,
    NotApplicableError,
    PreconditionError,
    SearchFailure,
    UsageError,
    VerificationError,
)
from .norms import _largest, _smallest, fold, largest_left_factor, smallest_right_factor
from .space import NmsSpace, RealUniverse

RADIUS_CLAMP = 1.0 - 1e-9
LAMBDA0_BUDGET = 32
MAX_FINITE_POINTS = 16
DEFAULT_PROBES = 1000


@dataclass(frozen=True)
class OpenBall:
    """O(center, epsilon, lam). ``trace`` holds construction details."""

    center: object
    epsilon: float
    lam: float
    trace: dict = field(default_factory=dict, compare=False, hash=False)
    flagged: str = field(default="", compare=False)

    def __post_init__(self):
        eps, lam = float(self.epsilon), float(self.lam)
        if not (0.0 < eps < 1.0):
            raise UsageError(f"ball radius must lie in (0, 1), got {self.epsilon!r}")
        if not (math.isfinite(lam) and lam > 0.0):
            raise UsageError(f"ball scale must be positive and finite, got {self.lam!r}")
        object.__setattr__(self, "epsilon", eps)
        object.__setattr__(self, "lam", lam)

    def to_dict(self) -> dict:
        d = {"center": self.center, "epsilon": self.epsilon, "lambda": self.lam}
        if self.trace:
            d["trace"] = self.trace
        if self.flagged:
            d["flagged"] = self.flagged
        return d


def _inside(deg, eps: float) -> bool:
    return deg.g > 1.0 - eps and deg.b < eps and deg.y < eps


def ball_contains(space: NmsSpace, ball: OpenBall, b) -> bool:
    """Strict membership: G > 1 - eps, B < eps and Y < eps."""
    return _inside(space.evaluate(ball.center, b, ball.lam), ball.epsilon)


def ball_mask(space: NmsSpace, points: Sequence, center, eps: float, lam: float) -> np.ndarray:
    """Boolean membership of each of ``points`` in O(center, eps, lam)."""
    G, B, Y = space.degrees_many([center] * len(points), points, lam)
    return (G > 1.0 - eps) & (B < eps) & (Y < eps)


# ------------------------------------------------------------ probe points


def probe_points(space: NmsSpace, centers: Sequence, n: int = DEFAULT_PROBES, seed: int = 0) -> list:
    """Points used to verify a construction.

    Finite universes return every point. Real universes get a multi-scale
    grid around each centre (scales 1e-6 .. 1e2) plus uniform draws over the
    hull of the sampling box and the centres.
    """
    U = space.universe
    if U.is_finite:
        return U.points()
    if not isinstance(U, RealUniverse):
        raise PreconditionError(f"cannot probe a {U.kind} universe")
    rng = np.random.default_rng(seed)
    centers = [U.canon(c) for c in centers]
    C = np.asarray(centers, dtype=float).reshape(len(centers), U.dimension)
    scales = 10.0 ** np.arange(-6, 3)
    per = max(1, n // (2 * len(centers) * len(scales)))
    out = []
    for c in C:
        for s in scales:
            if U.dimension == 1:
                out.extend((c[0] + np.linspace(-s, s, per)).tolist())
            else:
                dirs = rng.normal(size=(per, U.dimension))
                dirs /= np.linalg.norm(dirs, axis=1, keepdims=True)
                r = s * rng.random(per)[:, None]
                out.extend(tuple(row) for row in (c + dirs * r).tolist())
    lo = min(U.box[0], float(C.min()) - 1.0)
    hi = max(U.box[1], float(C.max()) + 1.0)
    rest = max(0, n - len(out))
    X = rng.uniform(lo, hi, size=(rest, U.dimension))
    if U.dimension == 1:
        out.extend(X[:, 0].tolist())
    else:
        out.extend(tuple(row) for row in X.tolist())
    out.extend(centers)
    return out


# ------------------------------------------------- open-set construction


def interior_ball_witness(
    space: NmsSpace, ball: OpenBall, b, probes: int = DEFAULT_PROBES, seed: int = 0
) -> OpenBall | None:
    """A ball around ``b`` inside ``ball``, built from the open-set proof.

    Steps: find lam0 in (0, lam) keeping ``b`` strictly inside at lam0 (scan
    lam * (1 - 2^-k), k = 1..32); let e0 = G, beta = B, gamma = Y at lam0;
    pick zeta strictly between max(1 - e0, beta, gamma) and eps; solve

        e0 o e1 >= 1 - zeta,  beta * (1 - e2) <= zeta,  gamma * (1 - e3) <= zeta

    by bisection and return O(b, 1 - max(e1, e2, e3), lam - lam0). The result
    is checked on probe points (every point of a finite universe); None means
    a probe point escaped, which only happens when the triangle axioms fail.
    """
    b = space.canon(b)
    if not ball_contains(space, ball, b):
        raise PreconditionError(f"{b!r} is not inside the ball")
    a, eps, lam = ball.center, ball.epsilon, ball.lam
    tn, tc = space.norms.tnorm, space.norms.tconorm

    lam0 = deg = None
    for k in range(1, LAMBDA0_BUDGET + 1):
        cand = lam * (1.0 - 2.0 ** -k)
        d = space.evaluate(a, b, cand)
        if 0.0 < cand < lam and _inside(d, eps):
            lam0, deg = cand, d
            break
    if lam0 is None:
        raise SearchFailure(f"no lam0 in (0, {lam}) keeps {b!r} inside after {LAMBDA0_BUDGET} tries")

    e0, beta, gamma = deg.g, deg.b, deg.y
    low = max(1.0 - e0, beta, gamma)
    zeta = 0.5 * (low + eps)
    e1 = smallest_right_factor(tn, e0, 1.0 - zeta)
    e2 = 1.0 - largest_left_factor(tc, zeta, beta)
    e3 = 1.0 - largest_left_factor(tc, zeta, gamma)
    e4 = max(e1, e2, e3)
    if not (0.0 < e4 < 1.0):
        raise NoSolutionError(f"constructed e4={e4} is not interior to (0, 1)")
    inner = OpenBall(b, 1.0 - e4, lam - lam0, trace={
        "lambda0": lam0, "epsilon0": e0, "zeta": zeta, "e1": e1, "e2": e2, "e3": e3, "e4": e4,
    })

    pts = probe_points(space, [b], probes, seed)
    in_inner = ball_mask(space, pts, b, inner.epsilon, inner.lam)
    in_outer = ball_mask(space, pts, a, eps, lam)
    escaped = np.flatnonzero(in_inner & ~in_outer)
    inner.trace["probes"] = len(pts)
    inner.trace["probes_inside"] = int(in_inner.sum())
    if escaped.size:
        return None
    return inner


def hausdorff_witness(
    space: NmsSpace, a, b, lam: float, probes: int = DEFAULT_PROBES, seed: int = 0
) -> tuple[OpenBall, OpenBall]:
    """Two disjoint balls separating ``a`` and ``b``, following the Hausdorff proof.

    eps = max(G, 1 - B, 1 - Y); e0 = (eps + 1) / 2; e4 is the smallest value
    with e4 o e4 >= e0, e5 = e6 is 1 minus the largest y with y * y <= 1 - e0;
    e7 = max(e4, e5, e6). The balls are O(a, 1 - e7, lam/2), O(b, 1 - e7, lam/2).
    """
    a, b = space.canon(a), space.canon(b)
    if a == b:
        raise PreconditionError("hausdorff_witness needs two distinct points")
    lam = float(lam)
    if not (math.isfinite(lam) and lam > 0):
        raise UsageError(f"lam must be positive, got {lam!r}")
    deg = space.evaluate(a, b, lam)
    if not all(0.0 < v < 1.0 for v in deg):
        raise NotApplicableError(
            f"degrees ({deg.g:.6g}, {deg.b:.6g}, {deg.y:.6g}) at lam={lam:g} are not all inside (0, 1)"
        )
    tn, tc = space.norms.tnorm.fn, space.norms.tconorm.fn
    eps = max(deg.g, 1.0 - deg.b, 1.0 - deg.y)
    e0 = 0.5 * (eps + 1.0)
    e4 = _smallest(lambda x: float(tn(x, x)) >= e0)
    y = _largest(lambda x: float(tc(x, x)) <= 1.0 - e0)
    e5 = e6 = 1.0 - y
    e7 = max(e4, e5, e6)
    if not (0.0 < e7 < 1.0):
        raise NoSolutionError(f"e7={e7} is not interior to (0, 1)")
    trace = {"epsilon": eps, "epsilon0": e0, "e4": e4, "e5": e5, "e6": e6, "e7": e7}
    ba = OpenBall(a, 1.0 - e7, lam / 2.0, trace=dict(trace))
    bb = OpenBall(b, 1.0 - e7, lam / 2.0, trace=dict(trace))

    pts = probe_points(space, [a, b], probes, seed)
    both = ball_mask(space, pts, a, ba.epsilon, ba.lam) & ball_mask(space, pts, b, bb.epsilon, bb.lam)
    for w in (ba, bb):
        w.trace["probes"] = len(pts)
    if np.any(both):
        c = pts[int(np.flatnonzero(both)[0])]
        raise VerificationError(f"balls around {a!r} and {b!r} share the point {c!r}")
    return ba, bb


# ------------------------------------------------------------ boundedness


def _pair_gaps(space: NmsSpace, subset: Sequence, lam: float) -> np.ndarray:
    pts = [space.canon(p) for p in subset]
    A = [p for p in pts for _ in pts]
    B = [q for _ in pts for q in pts]
    G, Bn, Y = space.degrees_many(A, B, lam)
    return np.maximum.reduce([1.0 - G, Bn, Y])


def _bounded_at(space, subset, lam, eps) -> bool:
    pts = [space.canon(p) for p in subset]
    A = [p for p in pts for _ in pts]
    B = [q for _ in pts for q in pts]
    G, Bn, Y = space.degrees_many(A, B, lam)
    return bool(np.all((G > 1.0 - eps) & (Bn < eps) & (Y < eps)))


def is_neutro_bounded(space: NmsSpace, subset: Sequence, lambda_grid: Sequence[float],
                      epsilon_grid: Sequence[float]) -> tuple[float, float] | None:
    """Smallest (lam, eps) grid pair, ordered by lam then eps, bounding every pair."""
    if not len(subset):
        raise UsageError("subset must be non-empty")
    for lam in sorted(float(x) for x in lambda_grid):
        for eps in sorted(float(e) for e in epsilon_grid):
            if 0.0 < eps < 1.0 and _bounded_at(space, subset, lam, eps):
                return lam, eps
    return None


@dataclass
class NbCertificate:
    lambda0: float
    zeta: float
    rho: float
    sigma: float
    phi: float
    pairs_checked: int

    def to_dict(self) -> dict:
        return {"lambda0": self.lambda0, "pairs_checked": self.pairs_checked, "phi": self.phi,
                "rho": self.rho, "sigma": self.sigma, "zeta": self.zeta}


DEFAULT_ZETA_GRID = tuple(k / 1000 for k in range(1, 1000))


def nb_certificate_via_cover(
    space: NmsSpace, subset: Sequence, centers: Sequence, eps: float, lam: float,
    zeta_grid: Sequence[float] = DEFAULT_ZETA_GRID,
) -> NbCertificate | None:
    """Boundedness certificate from a finite ball cover, as in the compact => NB proof.

    rho, sigma, phi are the min G, max B, max Y over centre pairs. The
    certificate is lam0 = 3 lam and the smallest grid zeta with

        (1-eps) o (1-eps) o rho > 1 - zeta,  eps * eps * sigma < zeta,  eps * eps * phi < zeta.

    None when no grid zeta in (0, 1) works. The certificate is then checked on
    every subset pair; a failing pair raises VerificationError.
    """
    if not (0.0 < eps < 1.0):
        raise UsageError(f"eps must lie in (0, 1), got {eps!r}")
    centers = [space.canon(c) for c in centers]
    subset = [space.canon(p) for p in subset]
    if not centers or not subset:
        raise UsageError("subset and centers must be non-empty")
    for p in subset:
        if not any(_inside(space.evaluate(c, p, lam), eps) for c in centers):
            raise PreconditionError(f"point {p!r} is not covered by any O(center, {eps}, {lam})")
    degs = [space.evaluate(c, d, lam) for c in centers for d in centers]
    rho = min(x.g for x in degs)
    sigma = max(x.b for x in degs)
    phi = max(x.y for x in degs)
    tn, tc = space.norms.tnorm, space.norms.tconorm
    g = fold(tn, 1.0 - eps, 1.0 - eps, min(rho, 1.0))
    bb = fold(tc, eps, eps, min(sigma, 1.0))
    yy = fold(tc, eps, eps, min(phi, 1.0))
    zeta = next((z for z in sorted(zeta_grid) if 0 < z < 1 and g > 1.0 - z and bb < z and yy < z), None)
    if zeta is None:
        return None
    lam0 = 3.0 * lam
    if not _bounded_at(space, subset, lam0, zeta):
        gaps = _pair_gaps(space, subset, lam0)
        i = int(np.argmax(gaps))
        n = len(subset)
        raise VerificationError(
            f"certificate (lam0={lam0}, zeta={zeta}) fails on pair ({subset[i // n]!r}, {subset[i % n]!r})"
        )
    return NbCertificate(lam0, zeta, rho, sigma, phi, len(subset) ** 2)


# -------------------------------------------------------- finite topology


def _popcount(m: int) -> int:
    return bin(m).count("1")


@dataclass
class FiniteTopology:
    """Open sets of a finite universe as bitmasks over ``points``."""

    points: list
    minimal: tuple[int, ...]
    opens: tuple[int, ...]
    base: tuple[int, ...] = ()
    exact: bool = False
    meta: dict = field(default_factory=dict)

    @property
    def n(self) -> int:
        return len(self.points)

    @property
    def full(self) -> int:
        return (1 << self.n) - 1

    def mask(self, subset) -> int:
        idx = {p: i for i, p in enumerate(self.points)}
        m = 0
        for p in subset:
            if p not in idx:
                raise UsageError(f"{p!r} is not a point of this topology")
            m |= 1 << idx[p]
        return m

    def labels(self, mask: int) -> list:
        return [p for i, p in enumerate(self.points) if mask >> i & 1]

    def is_open(self, mask: int) -> bool:
        return all(self.minimal[i] & ~mask == 0 for i in range(self.n) if mask >> i & 1)

    def closure(self, mask: int) -> int:
        out = 0
        for i, u in enumerate(self.minimal):
            if u & mask:
                out |= 1 << i
        return out

    def interior(self, mask: int) -> int:
        out = 0
        for i, u in enumerate(self.minimal):
            if u & ~mask == 0:
                out |= 1 << i
        return out

    def is_dense(self, mask: int) -> bool:
        return self.closure(mask) == self.full

    def is_discrete(self) -> bool:
        return len(self.opens) == 1 << self.n

    @property
    def balls_form_base(self) -> bool:
        # U_x is the intersection of the balls through x, so the balls are a
        # base iff every U_x is itself a ball
        balls = set(self.base)
        return all(u in balls for u in self.minimal)

    def to_dict(self) -> dict:
        return {
            "balls_form_base": self.balls_form_base,
            "exact": self.exact,
            "meta": self.meta,
            "open_sets": [sorted(str(p) for p in self.labels(m)) for m in self.opens],
            "points": [str(p) for p in self.points],
        }


def _minimal_from(n: int, subbase: Sequence[int]) -> tuple[int, ...]:
    full = (1 << n) - 1
    mins = []
    for i in range(n):
        u = full
        for s in subbase:
            if s >> i & 1:
                u &= s
        mins.append(u)
    return tuple(mins)


def _opens_from_minimal(minimal: Sequence[int]) -> tuple[int, ...]:
    n = len(minimal)
    opens = []
    for m in range(1 << n):
        if all(minimal[i] & ~m == 0 for i in range(n) if m >> i & 1):
            opens.append(m)
    return tuple(opens)


def close_family(family: Sequence[int], n: int) -> tuple[int, ...]:
    """Close a family of masks under pairwise union and intersection, adding 0 and the full set."""
    fam = set(family) | {0, (1 << n) - 1}
    frontier = list(fam)
    while frontier:
        new = set()
        for x in frontier:
            for y in list(fam):
                for z in (x | y, x & y):
                    if z not in fam:
                        new.add(z)
        fam |= new
        frontier = list(new)
    return tuple(sorted(fam))


def _finite_points(space: NmsSpace) -> list:
    U = space.universe
    if not U.is_finite:
        raise PreconditionError(f"finite topology needs a finite universe, got {U.kind}")
    pts = U.points()
    if len(pts) > MAX_FINITE_POINTS:
        raise PreconditionError(f"finite topology is limited to {MAX_FINITE_POINTS} points, got {len(pts)}")
    return pts


def _gap_matrix(space: NmsSpace, pts: list, lam: float) -> np.ndarray:
    n = len(pts)
    A = [p for p in pts for _ in pts]
    B = [q for _ in pts for q in pts]
    G, Bn, Y = space.degrees_many(A, B, lam)
    return np.maximum.reduce([1.0 - G, Bn, Y]).reshape(n, n)


def _to_mask(row: np.ndarray) -> int:
    return int(sum(1 << int(i) for i in np.flatnonzero(row)))


def generate_finite_topology(space: NmsSpace, epsilon_grid: Sequence[float] | None,
                             lambda_grid: Sequence[float]) -> FiniteTopology:
    """Topology generated by balls O(a, eps, lam) over the grids.

    ``epsilon_grid=None`` takes every radius (the exact threshold balls).
    """
    pts = _finite_points(space)
    n = len(pts)
    lams = sorted(float(x) for x in lambda_grid)
    if not lams or any(not (x > 0) for x in lams):
        raise UsageError("lambda_grid must be non-empty and positive")
    base = set()
    if epsilon_grid is None:
        for lam in lams:
            gaps = _gap_matrix(space, pts, lam)
            for i in range(n):
                row = gaps[i]
                for g in np.unique(row[row < 1.0]):
                    base.add(_to_mask(row <= g))
    else:
        eps = sorted(float(e) for e in epsilon_grid)
        if not eps or any(not (0 < e < 1) for e in eps):
            raise UsageError("epsilon_grid must be non-empty with entries in (0, 1)")
        for lam in lams:
            for c in pts:
                for e in eps:
                    base.add(_to_mask(ball_mask(space, pts, c, e, lam)))
    base.discard(0)
    base_t = tuple(sorted(base))
    minimal = _minimal_from(n, base_t)
    opens = _opens_from_minimal(minimal)
    meta = {"epsilon_grid": None if epsilon_grid is None else sorted(float(e) for e in epsilon_grid),
            "lambda_grid": lams, "base_size": len(base_t)}
    return FiniteTopology(pts, minimal, opens, base_t, epsilon_grid is None, meta)


@dataclass
class NowhereDense:
    lattice: bool
    ball_criterion: bool

    @property
    def agree(self) -> bool:
        return self.lattice == self.ball_criterion

    def __bool__(self) -> bool:
        return self.lattice

    def to_dict(self) -> dict:
        return {"agree": self.agree, "ball_criterion": self.ball_criterion, "lattice": self.lattice}


def is_nowhere_dense(top: FiniteTopology, subset) -> NowhereDense:
    """interior(closure(S)) = {} computed on the lattice, cross-checked by the ball criterion.

    Ball criterion: every nonempty open set contains a ball whose closure
    misses S. Every nonempty open set contains some minimal neighbourhood,
    so it suffices to test the minimal neighbourhoods. The criterion always
    implies the lattice answer; the converse can fail when grid radii leave
    the balls short of a base (``FiniteTopology.balls_form_base``).
    """
    S = subset if isinstance(subset, int) else top.mask(subset)
    lattice = top.interior(top.closure(S)) == 0
    base = [m for m in top.base if m] or [m for m in top.opens if m]
    good = [m for m in base if top.closure(m) & S == 0]
    criterion = all(any(g & ~u == 0 for g in good) for u in set(top.minimal) if u)
    return NowhereDense(lattice, criterion)


@dataclass
class BaireResult:
    dense: bool
    dense_open_count: int
    intersection: list

    def __bool__(self) -> bool:
        return self.dense

    def to_dict(self) -> dict:
        return {"dense": self.dense, "dense_open_count": self.dense_open_count,
                "intersection": [str(p) for p in self.intersection]}


def baire_probe(top: FiniteTopology) -> BaireResult:
    """Intersect every dense open set and test the result for density."""
    inter = top.full
    count = 0
    for m in top.opens:
        if m and top.is_dense(m):
            inter &= m
            count += 1
    return BaireResult(top.is_dense(inter), count, top.labels(inter))


# -------------------------------------------------------- closure lemma


@dataclass
class ClosureCheck:
    holds: bool
    regime: str
    checked: int
    witness: object = None

    def __bool__(self) -> bool:
        return self.holds

    def to_dict(self) -> dict:
        return {"checked": self.checked, "holds": self.holds, "regime": self.regime, "witness": self.witness}


def lemma_hypotheses(space: NmsSpace, eps1: float, eps2: float) -> bool:
    tn, tc = space.norms.tnorm.fn, space.norms.tconorm.fn
    return float(tn(1.0 - eps2, 1.0 - eps2)) >= 1.0 - eps1 and float(tc(eps2, eps2)) <= eps1


def closure_containment_check(
    space: NmsSpace, a, eps1: float, eps2: float, lam: float, samples: int = DEFAULT_PROBES,
    seed: int = 0, lambda_grid: Sequence[float] | None = None,
) -> ClosureCheck:
    """Is the closure of O(a, eps2, lam/2) inside O(a, eps1, lam)?

    Finite universes: exact closure in the ball topology over the scales
    ``lambda_grid`` (default: lam/2, lam and the decades 0.01 .. 100).
    Real universes: the closure is approximated by the closed-inequality
    ball, evaluated on probe points.
    """
    for name, e in (("eps1", eps1), ("eps2", eps2)):
        if not (0.0 < e < 1.0):
            raise UsageError(f"{name} must lie in (0, 1), got {e!r}")
    if not lemma_hypotheses(space, eps1, eps2):
        raise PreconditionError(
            f"hypotheses fail for eps1={eps1}, eps2={eps2}: need (1-eps2) o (1-eps2) >= 1-eps1 and eps2 * eps2 <= eps1"
        )
    a = space.canon(a)
    U = space.universe
    if U.is_finite:
        pts = _finite_points(space)
        grid = lambda_grid if lambda_grid is not None else sorted({lam / 2, lam, 0.01, 0.1, 1.0, 10.0, 100.0})
        top = generate_finite_topology(space, None, grid)
        small = _to_mask(ball_mask(space, pts, a, eps2, lam / 2))
        big = _to_mask(ball_mask(space, pts, a, eps1, lam))
        cl = top.closure(small)
        escaped = cl & ~big
        wit = top.labels(escaped)[0] if escaped else None
        return ClosureCheck(escaped == 0, "exact", len(pts), wit)
    pts = probe_points(space, [a], samples, seed)
    G, B, Y = space.degrees_many([a] * len(pts), pts, lam / 2)
    closed = (G >= 1.0 - eps2) & (B <= eps2) & (Y <= eps2)
    big = ball_mask(space, pts, a, eps1, lam)
    bad = np.flatnonzero(closed & ~big)
    wit = pts[int(bad[0])] if bad.size else None
    return ClosureCheck(bad.size == 0, "closed-ball approximation", len(pts), wit)


# ------------------------------------------------------- countable base


@dataclass
class BasePrefix:
    balls: list
    flagged: list
    base_property: bool | None
    note: str = ""

    def to_dict(self) -> dict:
        return {"balls": [b.to_dict() for b in self.balls], "base_property": self.base_property,
                "flagged": self.flagged, "note": self.note}


def countable_base_prefix(space: NmsSpace, dense_points: Sequence, depth: int,
                          lambda_grid: Sequence[float] = (0.1, 1.0, 10.0)) -> BasePrefix:
    """The balls O(a_k, 1/m, 1/m) for m = 1..depth.

    Radius 1 (m = 1) is clamped to 1 - 1e-9 and flagged. On finite universes
    the family is checked to be a base of the exact ball topology over the
    family's own scales plus ``lambda_grid``.
    """
    if int(depth) != depth or depth < 1:
        raise UsageError(f"depth must be a positive integer, got {depth!r}")
    pts = [space.canon(p) for p in dense_points]
    if not pts:
        raise UsageError("dense_points must be non-empty")
    balls, flagged = [], []
    for a in pts:
        for m in range(1, int(depth) + 1):
            r = 1.0 / m
            flag = ""
            if r >= 1.0:
                r = RADIUS_CLAMP
                flag = "radius 1 clamped to 1 - 1e-9"
                flagged.append(len(balls))
            balls.append(OpenBall(a, r, 1.0 / m, flagged=flag))
    if not space.universe.is_finite:
        return BasePrefix(balls, flagged, None, "base property is only checked on finite universes")
    allp = _finite_points(space)
    grid = sorted(set(float(x) for x in lambda_grid) | {1.0 / m for m in range(1, int(depth) + 1)})
    top = generate_finite_topology(space, None, grid)
    fam = [_to_mask(ball_mask(space, allp, b.center, b.epsilon, b.lam)) for b in balls]
    # base iff every point x has a member F with x in F inside U_x
    ok = all(any(f >> i & 1 and f & ~u == 0 for f in fam) for i, u in enumerate(top.minimal))
    return BasePrefix(balls, flagged, ok)
