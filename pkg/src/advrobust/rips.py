"""Simplex-wise Rips filtrations, the Hausdorff heuristic and length certificates.

Removing at most k points moves the point set by at most H_{X,k} in
Hausdorff distance, where H_{X,k} is the largest distance from a point to
its k-th nearest neighbour.  Bars longer than H_{X,k} survive every such
removal.
"""
import logging
from dataclasses import dataclass
from itertools import combinations

import numpy as np

from .complex import Filtration
from .errors import DomainError, MalformedInputError
from .persistence import Bar

log = logging.getLogger(__name__)


class MetricData:
    """Finite dissimilarity space with a total order on its points."""

    def __init__(self, dist, order=None, check_triangle=True):
        d = np.asarray(dist, dtype=float)
        if d.ndim != 2 or d.shape[0] != d.shape[1]:
            raise MalformedInputError("distance matrix must be square")
        if not np.all(np.isfinite(d)) or np.any(d < 0):
            raise MalformedInputError("distances must be finite and non-negative")
        if not np.array_equal(d, d.T):
            raise MalformedInputError("distance matrix must be symmetric")
        if np.any(np.diag(d) != 0):
            raise MalformedInputError("distance matrix must have a zero diagonal")
        self.n = d.shape[0]
        self.dist = d
        if order is None:
            order = list(range(self.n))
        if sorted(order) != list(range(self.n)):
            raise MalformedInputError("order must be a permutation of the points")
        self.order = list(order)
        self.rank = {v: i for i, v in enumerate(self.order)}
        if check_triangle and self.n <= 200 and self.violates_triangle():
            log.warning("dissimilarity violates the triangle inequality; proceeding anyway")

    @classmethod
    def from_points(cls, points, order=None):
        X = np.asarray(points, dtype=float)
        if X.ndim == 1:
            X = X[:, None]
        diff = X[:, None, :] - X[None, :, :]
        d = np.sqrt((diff ** 2).sum(-1))
        d = (d + d.T) / 2
        np.fill_diagonal(d, 0.0)
        return cls(d, order, check_triangle=False)

    def violates_triangle(self, tol=1e-12):
        d = self.dist
        return bool(np.any(d[:, None, :] > d[:, :, None] + d[None, :, :] + tol))

    def d(self, a, b):
        return float(self.dist[a, b])

    def diameter(self, simplex):
        return max((self.d(a, b) for a, b in combinations(simplex, 2)), default=0.0)

    def subset(self, keep):
        """Metric on the kept points (original ids preserved through ``ids``)."""
        keep = sorted(keep)
        sub = MetricData(self.dist[np.ix_(keep, keep)],
                         sorted(range(len(keep)), key=lambda i: self.rank[keep[i]]),
                         check_triangle=False)
        return sub, keep


def rips_filtration(X, max_dim=2):
    """All simplices up to max_dim, ordered by (diameter, dimension, lexicographic under the point order)."""
    if max_dim < 0:
        raise DomainError("max_dim must be non-negative")
    items = []
    for k in range(1, min(max_dim + 1, X.n) + 1):
        for s in combinations(range(X.n), k):
            key = tuple(sorted(X.rank[v] for v in s))
            items.append((X.diameter(s), k, key, s))
    items.sort(key=lambda t: t[:3])
    return Filtration([t[3] for t in items], [t[0] for t in items])


def hausdorff_removal_distance(X, A):
    """d_H(X - A, X) = max over a in A of the distance from a to X - A."""
    A = set(A)
    if not A <= set(range(X.n)):
        raise DomainError("A must be a subset of the points")
    if len(A) >= X.n:
        raise DomainError("cannot remove every point")
    if not A:
        return 0.0
    rest = [x for x in range(X.n) if x not in A]
    return max(min(X.dist[a, x] for x in rest) for a in A).item()


@dataclass(frozen=True)
class HeuristicResult:
    H: float
    k: int
    center: int                 # x* maximising the distance to its k-th neighbour
    neighbours: tuple           # nu_1(x*), ..., nu_k(x*)
    witness: tuple              # {x*, nu_1, ..., nu_{k-1}}: k points attaining H
    witness_k_plus_1: tuple     # {x*, nu_1, ..., nu_k}: the (k+1)-point form


def neighbour_order(X, x):
    """Other points sorted by distance to x, ties broken by index."""
    order = np.argsort(X.dist[x], kind="stable")
    return [int(y) for y in order if y != x]


def hausdorff_heuristic(X, k):
    """H_{X,k} = max over x of d(x, nu_k(x)), with a witness removal set."""
    if not 1 <= k < X.n:
        raise DomainError(f"k must satisfy 1 <= k < n = {X.n}")
    best = None
    for x in range(X.n):
        nb = neighbour_order(X, x)
        h = X.dist[x, nb[k - 1]].item()
        if best is None or h > best[0]:
            best = (h, x, tuple(nb[:k]))
    h, x, nb = best
    return HeuristicResult(h, k, x, nb, tuple(sorted((x,) + nb[:-1])), tuple(sorted((x,) + nb)))


def exhaustive_removal_maximum(X, k):
    """max over |A| <= k of hausdorff_removal_distance, by enumeration."""
    best = 0.0
    for size in range(1, k + 1):
        for A in combinations(range(X.n), size):
            best = max(best, hausdorff_removal_distance(X, A))
    return best


@dataclass(frozen=True)
class GradedBar:
    bar: Bar
    length: float


def graded_bars(barcode, p=None):
    out = []
    for b in barcode:
        if p is not None and b.dim != p:
            continue
        out.append(GradedBar(b, b.length))
    return out


def certify_bars(bars, H):
    """Split bars into (certified, uncertified) by the strict test length > H."""
    certified, uncertified = [], []
    for gb in bars:
        if gb.length > H:
            certified.append(gb)
        else:
            if gb.length == H:
                log.info("bar %s has length exactly H=%g; left uncertified", gb.bar, H)
            uncertified.append(gb)
    return certified, uncertified
