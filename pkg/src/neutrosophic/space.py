"""Neutrosophic metric spaces: universes, constructions and evaluation.

A space maps (a, b, lam) to a triple (G, B, Y): the degree of nearness,
neutralness and non-nearness of ``a`` and ``b`` at scale ``lam``. The three
constructions are

* ``standard_from_metric``: G = lam/(lam+d), B = d/(lam+d), Y = d/lam,
* ``naturals_example``: G = min/max, B = 1 - G, Y = |a-b| on {1..bound},
* ``tabulated``: an explicit table over a finite universe, linear in lam.

Degrees are never clamped to [0, 1]; range violations are what the axiom
checker exists to find.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Sequence

import numpy as np

from .errors import PreconditionError, UniverseError, UsageError
from .norms import NormPair

METRICS = ("euclidean", "manhattan", "discrete")

NATURALS_B_NOTE = (
    "naturals construction: the printed neutralness formula uses undefined "
    "symbols x, y; read as B(a,b) = (b-a)/b for a <= b and (a-b)/a otherwise, "
    "i.e. B = 1 - G"
)


@dataclass(frozen=True)
class DegreesTriple:
    g: float
    b: float
    y: float

    def __post_init__(self):
        for name in ("g", "b", "y"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v >= 0.0):
                raise UsageError(f"degree {name}={v!r} must be finite and non-negative")

    def __iter__(self):
        return iter((self.g, self.b, self.y))

    def to_list(self) -> list[float]:
        return [self.g, self.b, self.y]

    @property
    def gap(self) -> float:
        """max(1 - G, B, Y): a point is in the ball of radius eps iff gap < eps."""
        return max(1.0 - self.g, self.b, self.y)


CLAMPED = DegreesTriple(0.0, 1.0, 1.0)
COINCIDENT = DegreesTriple(1.0, 0.0, 0.0)


# ---------------------------------------------------------------- universes


class Universe:
    kind: str = ""
    is_finite = False
    has_metric = False

    def canon(self, p: Any):
        raise NotImplementedError

    def key(self, p):
        return p

    def contains(self, p) -> bool:
        try:
            self.canon(p)
        except UniverseError:
            return False
        return True

    def distance(self, a, b) -> float:
        raise PreconditionError(f"{self.kind} universe carries no metric")

    def distances(self, A: Sequence, B: Sequence) -> np.ndarray:
        return np.array([self.distance(a, b) for a, b in zip(A, B)], dtype=float)

    def sample(self, rng: np.random.Generator, n: int) -> list:
        raise NotImplementedError

    def points(self) -> list:
        raise PreconditionError(f"{self.kind} universe is not finite")

    def to_dict(self) -> dict:
        raise NotImplementedError


class FiniteUniverse(Universe):
    """Labelled points with an optional distance matrix."""

    kind = "finite_labeled"
    is_finite = True

    def __init__(self, labels: Sequence, distances=None, tol: float = 1e-12):
        labels = [str(x) for x in labels]
        if not labels:
            raise UniverseError("a finite universe needs at least one label")
        if len(set(labels)) != len(labels):
            raise UniverseError("labels must be unique")
        self.labels = tuple(labels)
        self.index = {lab: i for i, lab in enumerate(labels)}
        self.matrix = None
        self._rows = None
        if distances is not None:
            D = np.asarray(distances, dtype=float)
            n = len(labels)
            if D.shape != (n, n):
                raise UniverseError(f"distance matrix must be {n}x{n}, got {D.shape}")
            _validate_metric(D, tol)
            D = D.copy()
            D.setflags(write=False)
            self.matrix = D
            self._rows = D.tolist()
            self.has_metric = True

    @classmethod
    def from_points(cls, coords, labels=None, metric: str = "euclidean") -> "FiniteUniverse":
        coords = np.asarray(coords, dtype=float)
        if coords.ndim == 1:
            coords = coords[:, None]
        n = len(coords)
        labels = list(labels) if labels is not None else [f"p{i}" for i in range(n)]
        dim = coords.shape[1]
        D = np.zeros((n, n))
        for k in range(dim):
            diff = coords[:, None, k] - coords[None, :, k]
            if metric == "euclidean":
                D = D + diff * diff
            elif metric == "manhattan":
                D = D + np.abs(diff)
            elif metric == "discrete":
                D = np.maximum(D, (diff != 0).astype(float))
            else:
                raise UniverseError(f"unknown metric {metric!r}; choose from {METRICS}")
        if metric == "euclidean":
            D = np.sqrt(D)
        return cls(labels, D)

    @property
    def size(self) -> int:
        return len(self.labels)

    def canon(self, p):
        if isinstance(p, str) and p in self.index:
            return p
        raise UniverseError(f"point {p!r} is not a label of this universe")

    def key(self, p):
        return self.index[p]

    def distance(self, a, b) -> float:
        if self._rows is None:
            raise PreconditionError("this finite universe has no distance matrix")
        return self._rows[self.index[a]][self.index[b]]

    def distances(self, A, B) -> np.ndarray:
        if self.matrix is None:
            raise PreconditionError("this finite universe has no distance matrix")
        ia = np.array([self.index[a] for a in A], dtype=int)
        ib = np.array([self.index[b] for b in B], dtype=int)
        return self.matrix[ia, ib]

    def diameter(self) -> float:
        return float(self.matrix.max()) if self.matrix is not None else math.nan

    def sample(self, rng, n):
        idx = rng.integers(0, len(self.labels), size=n)
        return [self.labels[i] for i in idx]

    def points(self) -> list:
        return list(self.labels)

    def to_dict(self) -> dict:
        d = {"kind": self.kind, "labels": list(self.labels)}
        if self.matrix is not None:
            d["distances"] = self.matrix.tolist()
        return d


def _validate_metric(D: np.ndarray, tol: float) -> None:
    if not np.all(np.isfinite(D)):
        raise UniverseError("distance matrix has non-finite entries")
    if np.any(D < -tol):
        raise UniverseError("distance matrix has negative entries")
    if np.any(np.abs(np.diag(D)) > tol):
        raise UniverseError("distance matrix has a non-zero diagonal")
    if np.any(np.abs(D - D.T) > tol):
        raise UniverseError("distance matrix is not symmetric")
    # d(i,k) <= d(i,j) + d(j,k) for all j, vectorised over (i,k)
    n = len(D)
    for j in range(n):
        via = D[:, j, None] + D[None, j, :]
        if np.any(D > via + tol):
            i, k = np.argwhere(D > via + tol)[0]
            raise UniverseError(
                f"triangle inequality fails: d({i},{k})={D[i, k]} > d({i},{j})+d({j},{k})={via[i, k]}"
            )


class RealUniverse(Universe):
    """R^dimension with a base metric; ``box`` only bounds the sampling."""

    kind = "real_vector"
    has_metric = True

    def __init__(self, dimension: int = 1, metric: str = "euclidean", box=(0.0, 1.0)):
        if int(dimension) < 1:
            raise UniverseError("dimension must be >= 1")
        if metric not in METRICS:
            raise UniverseError(f"unknown metric {metric!r}; choose from {METRICS}")
        lo, hi = float(box[0]), float(box[1])
        if not (math.isfinite(lo) and math.isfinite(hi) and lo < hi):
            raise UniverseError(f"sampling box must satisfy lo < hi, got {box!r}")
        self.dimension = int(dimension)
        self.metric = metric
        self.box = (lo, hi)

    def canon(self, p):
        if self.dimension == 1:
            if isinstance(p, (list, tuple, np.ndarray)):
                if len(p) != 1:
                    raise UniverseError(f"point {p!r} is not in R^1")
                p = p[0]
            try:
                x = float(p)
            except (TypeError, ValueError):
                raise UniverseError(f"point {p!r} is not a real number") from None
            if not math.isfinite(x):
                raise UniverseError(f"point {p!r} is not finite")
            return x
        try:
            x = tuple(float(v) for v in p)
        except (TypeError, ValueError):
            raise UniverseError(f"point {p!r} is not in R^{self.dimension}") from None
        if len(x) != self.dimension or not all(math.isfinite(v) for v in x):
            raise UniverseError(f"point {p!r} is not a finite vector in R^{self.dimension}")
        return x

    def key(self, p):
        return (p,) if self.dimension == 1 else p

    def distance(self, a, b) -> float:
        if self.dimension == 1:
            if self.metric == "discrete":
                return 0.0 if a == b else 1.0
            return abs(a - b)
        if self.metric == "discrete":
            return 0.0 if a == b else 1.0
        acc = 0.0
        for x, y in zip(a, b):
            diff = x - y
            acc = acc + (diff * diff if self.metric == "euclidean" else abs(diff))
        return math.sqrt(acc) if self.metric == "euclidean" else acc

    def distances(self, A, B) -> np.ndarray:
        A = np.asarray(A, dtype=float).reshape(len(A), self.dimension)
        B = np.asarray(B, dtype=float).reshape(len(B), self.dimension)
        if self.metric == "discrete":
            return np.any(A != B, axis=1).astype(float)
        if self.dimension == 1:
            return np.abs(A[:, 0] - B[:, 0])
        acc = np.zeros(len(A))
        for k in range(self.dimension):
            diff = A[:, k] - B[:, k]
            acc = acc + (diff * diff if self.metric == "euclidean" else np.abs(diff))
        return np.sqrt(acc) if self.metric == "euclidean" else acc

    def sample(self, rng, n):
        X = rng.uniform(self.box[0], self.box[1], size=(n, self.dimension))
        if self.dimension == 1:
            return X[:, 0].tolist()
        return [tuple(row) for row in X.tolist()]

    def to_dict(self) -> dict:
        return {"box": list(self.box), "dimension": self.dimension, "kind": self.kind, "metric": self.metric}


class NaturalsUniverse(Universe):
    """The naturals {1, ..., bound}."""

    kind = "naturals"
    is_finite = True

    def __init__(self, bound: int):
        if int(bound) != bound or bound < 1:
            raise UniverseError(f"bound must be a positive integer, got {bound!r}")
        self.bound = int(bound)

    def canon(self, p):
        if isinstance(p, bool):
            raise UniverseError(f"point {p!r} is not a natural number")
        try:
            n = int(p)
        except (TypeError, ValueError):
            raise UniverseError(f"point {p!r} is not a natural number") from None
        if n != p or not (1 <= n <= self.bound):
            raise UniverseError(f"point {p!r} is not in {{1..{self.bound}}}")
        return n

    @property
    def size(self) -> int:
        return self.bound

    def sample(self, rng, n):
        return rng.integers(1, self.bound + 1, size=n).tolist()

    def points(self) -> list:
        return list(range(1, self.bound + 1))

    def to_dict(self) -> dict:
        return {"bound": self.bound, "kind": self.kind}


# ------------------------------------------------------------------- spaces


class NmsSpace:
    """Universe + degree functions + (t-norm, t-conorm) pair. Immutable."""

    construction = ""

    def __init__(self, universe: Universe, norms: NormPair, notes: Sequence[str] = ()):
        self.universe = universe
        self.norms = norms
        self.notes = tuple(notes)

    def canon(self, p):
        return self.universe.canon(p)

    def evaluate(self, a, b, lam: float) -> DegreesTriple:
        a, b = self.universe.canon(a), self.universe.canon(b)
        lam = float(lam)
        if not math.isfinite(lam):
            raise UsageError(f"scale must be finite, got {lam!r}")
        if lam <= 0.0:
            return CLAMPED
        if self.universe.key(b) < self.universe.key(a):
            a, b = b, a
        return DegreesTriple(*self._degrees(a, b, lam))

    def degrees_many(self, A: Sequence, B: Sequence, lam) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Vectorised evaluate over already-canonical point lists.

        Agrees bit-for-bit with :meth:`evaluate`.
        """
        lam = np.broadcast_to(np.asarray(lam, dtype=float), (len(A),))
        G, B_, Y = self._degrees_many(A, B, lam)
        neg = lam <= 0.0
        if np.any(neg):
            G = np.where(neg, 0.0, G)
            B_ = np.where(neg, 1.0, B_)
            Y = np.where(neg, 1.0, Y)
        return G, B_, Y

    def _degrees(self, a, b, lam):
        raise NotImplementedError

    def _degrees_many(self, A, B, lam):
        out = np.array([
            self._degrees(*((a, b) if self.universe.key(a) <= self.universe.key(b) else (b, a)), l)
            if l > 0 else (0.0, 1.0, 1.0)
            for a, b, l in zip(A, B, lam)
        ], dtype=float).reshape(len(A), 3)
        return out[:, 0], out[:, 1], out[:, 2]

    def to_dict(self) -> dict:
        return {
            "construction": self.construction,
            "tconorm": self.norms.tconorm.name,
            "tnorm": self.norms.tnorm.name,
            "universe": self.universe.to_dict(),
        }


class StandardSpace(NmsSpace):
    construction = "standard_from_metric"

    def _degrees(self, a, b, lam):
        d = self.universe.distance(a, b)
        neutral = d / (lam + d)
        return 1.0 - neutral, neutral, d / lam

    def _degrees_many(self, A, B, lam):
        d = self.universe.distances(A, B)
        safe = np.where(lam > 0, lam, 1.0)
        neutral = d / (safe + d)
        return 1.0 - neutral, neutral, d / safe


class NaturalsSpace(NmsSpace):
    construction = "naturals_example"

    def _degrees(self, a, b, lam):
        lo, hi = (a, b) if a <= b else (b, a)
        return lo / hi, (hi - lo) / hi, float(hi - lo)

    def _degrees_many(self, A, B, lam):
        A = np.asarray(A, dtype=float)
        B = np.asarray(B, dtype=float)
        lo, hi = np.minimum(A, B), np.maximum(A, B)
        return lo / hi, (hi - lo) / hi, hi - lo

    def to_dict(self) -> dict:
        d = super().to_dict()
        d["construction"] = "naturals"
        return d


class TabulatedSpace(NmsSpace):
    """Degrees listed per point pair at lam knots; linear between knots,
    constant beyond the end knots."""

    construction = "tabulated"

    def __init__(self, universe: FiniteUniverse, norms: NormPair, knots, table: dict, notes=()):
        super().__init__(universe, norms, notes)
        knots = np.asarray(knots, dtype=float)
        if knots.ndim != 1 or len(knots) < 1 or np.any(knots <= 0) or np.any(np.diff(knots) <= 0):
            raise UniverseError("lambda knots must be positive and strictly increasing")
        self.knots = knots
        self.table: dict[tuple, np.ndarray] = {}
        for (a, b), rows in table.items():
            a, b = universe.canon(a), universe.canon(b)
            if universe.key(b) < universe.key(a):
                a, b = b, a
            arr = np.asarray(rows, dtype=float)
            if arr.shape != (len(knots), 3):
                raise UniverseError(f"table entry ({a}, {b}) must be {len(knots)}x3, got {arr.shape}")
            if not np.all(np.isfinite(arr)) or np.any(arr < 0):
                raise UniverseError(f"table entry ({a}, {b}) has negative or non-finite degrees")
            self.table[(a, b)] = arr
        pts = universe.points()
        for i, a in enumerate(pts):
            for b in pts[i:]:
                if (a, b) not in self.table:
                    if a == b:
                        self.table[(a, b)] = np.tile([1.0, 0.0, 0.0], (len(knots), 1))
                    else:
                        raise UniverseError(f"table has no entry for pair ({a}, {b})")

    def _degrees(self, a, b, lam):
        arr = self.table[(a, b)]
        return tuple(float(np.interp(lam, self.knots, arr[:, k])) for k in range(3))

    def to_dict(self) -> dict:
        d = super().to_dict()
        d["lambda_knots"] = self.knots.tolist()
        d["table"] = [
            {"a": a, "b": b, "degrees": arr.tolist()} for (a, b), arr in sorted(
                self.table.items(), key=lambda kv: (self.universe.key(kv[0][0]), self.universe.key(kv[0][1])))
        ]
        return d


# --------------------------------------------------------------- operations


def evaluate(space: NmsSpace, a, b, lam: float) -> DegreesTriple:
    return space.evaluate(a, b, lam)


def standard_from_metric(universe: Universe, norms: NormPair | None = None) -> StandardSpace:
    if not universe.has_metric:
        raise PreconditionError(f"the standard construction needs a metric; {universe.kind} universe has none")
    return StandardSpace(universe, norms or NormPair.named("min", "max"))


def naturals_example(bound: int, norms: NormPair | None = None) -> NaturalsSpace:
    if int(bound) != bound or bound < 2:
        raise UsageError(f"naturals_example needs bound >= 2, got {bound!r}")
    return NaturalsSpace(NaturalsUniverse(bound), norms or NormPair.named("lukasiewicz", "probsum"),
                         notes=(NATURALS_B_NOTE,))


def tabulated(universe: FiniteUniverse, knots, table: dict, norms: NormPair | None = None) -> TabulatedSpace:
    if not isinstance(universe, FiniteUniverse):
        raise PreconditionError("tabulated spaces need a finite_labeled universe")
    return TabulatedSpace(universe, norms or NormPair.named("min", "max"), knots, table)


def real_line(norms: NormPair | None = None, box=(-1.0, 2.0)) -> StandardSpace:
    """The standard space on R with d = |a - b|."""
    return standard_from_metric(RealUniverse(1, "euclidean", box), norms)
