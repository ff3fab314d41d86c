"""Simplices, simplicial complexes, chains, boundary matrices and filtrations.

A simplex is a strictly increasing tuple of vertex ids.  Complexes and
filtrations are immutable; every operation returns new objects.
"""
from dataclasses import dataclass
from itertools import combinations

from .errors import DomainError, MalformedInputError
from .field import get_field


def make_simplex(vertices):
    """Normalise a vertex collection to a sorted tuple, rejecting duplicates."""
    try:
        vs = [int(v) for v in vertices]
    except (TypeError, ValueError):
        raise MalformedInputError(f"simplex {vertices!r} is not a list of integers") from None
    if not vs:
        raise MalformedInputError("empty simplex")
    if any(v < 0 for v in vs):
        raise MalformedInputError(f"negative vertex id in {vs}")
    t = tuple(sorted(vs))
    if len(set(t)) != len(t):
        raise MalformedInputError(f"duplicate vertex in simplex {vs}")
    return t


def dim(simplex):
    return len(simplex) - 1


def facets(simplex):
    """Codimension-one faces, the i-th obtained by dropping vertex i."""
    if len(simplex) == 1:
        return []
    return [simplex[:i] + simplex[i + 1:] for i in range(len(simplex))]


def all_faces(simplex):
    """All non-empty faces, including the simplex itself."""
    n = len(simplex)
    return [c for r in range(1, n + 1) for c in combinations(simplex, r)]


def sort_key(simplex):
    return (len(simplex), simplex)


class SimplicialComplex:
    """A face-closed finite set of simplices."""

    __slots__ = ("simplices", "n_vertices", "_by_dim", "_index")

    def __init__(self, simplices, n_vertices=None):
        self.simplices = frozenset(simplices)
        by_dim = {}
        for s in self.simplices:
            by_dim.setdefault(len(s) - 1, []).append(s)
        for d in by_dim:
            by_dim[d].sort()
        self._by_dim = by_dim
        top = max((v for s in self.simplices for v in s), default=-1)
        self.n_vertices = max(top + 1, n_vertices or 0)
        self._index = {}

    def of_dim(self, d):
        """K^(d): the d-simplices in lexicographic order."""
        return list(self._by_dim.get(d, ()))

    def count(self, d):
        return len(self._by_dim.get(d, ()))

    def index(self, d):
        """Map d-simplex -> its position in of_dim(d)."""
        if d not in self._index:
            self._index[d] = {s: i for i, s in enumerate(self._by_dim.get(d, ()))}
        return self._index[d]

    @property
    def dim(self):
        return max(self._by_dim, default=-1)

    def vertices(self):
        return [s[0] for s in self.of_dim(0)]

    def ordered(self):
        """All simplices sorted by dimension, then lexicographically."""
        return [s for d in sorted(self._by_dim) for s in self._by_dim[d]]

    def is_closed(self):
        return all(f in self.simplices for s in self.simplices for f in facets(s))

    def euler_characteristic(self):
        return sum((-1) ** d * len(v) for d, v in self._by_dim.items())

    def __contains__(self, s):
        return s in self.simplices

    def __iter__(self):
        return iter(self.ordered())

    def __len__(self):
        return len(self.simplices)

    def __eq__(self, other):
        return isinstance(other, SimplicialComplex) and self.simplices == other.simplices

    def __hash__(self):
        return hash(self.simplices)

    def __repr__(self):
        counts = ", ".join(f"{len(self._by_dim[d])}x{d}" for d in sorted(self._by_dim))
        return f"SimplicialComplex({counts})"


def build_complex(simplices, n_vertices=None):
    """Face closure of a list of vertex lists."""
    out = set()
    for vs in simplices:
        s = make_simplex(vs)
        if n_vertices is not None and s[-1] >= n_vertices:
            raise MalformedInputError(f"vertex id {s[-1]} out of range 0..{n_vertices - 1}")
        if s not in out:
            out.update(all_faces(s))
    return SimplicialComplex(out, n_vertices)


def delete_set(K, A):
    """K - A: remove every simplex having a face in A."""
    A = {make_simplex(a) for a in A}
    missing = [a for a in A if a not in K]
    if missing:
        raise DomainError(f"simplices not in complex: {sorted(missing)}")
    if not A:
        return K
    keep = [s for s in K.simplices if not any(f in A for f in all_faces(s))]
    return SimplicialComplex(keep, K.n_vertices)


@dataclass(frozen=True)
class Chain:
    """Sparse p-chain with coefficients in an exact field; zeros are never stored."""

    dim: int
    coeffs: dict
    field: object

    @classmethod
    def from_terms(cls, field, dim, terms):
        field = get_field(field)
        acc = {}
        for s, c in (terms.items() if isinstance(terms, dict) else terms):
            s = make_simplex(s)
            if len(s) - 1 != dim:
                raise MalformedInputError(f"simplex {s} has dimension {len(s) - 1}, expected {dim}")
            acc[s] = field.add(acc.get(s, field.zero), field.coerce(c))
        return cls(dim, {s: c for s, c in acc.items() if not field.is_zero(c)}, field)

    @classmethod
    def zero(cls, field, dim):
        return cls(dim, {}, get_field(field))

    def is_zero(self):
        return not self.coeffs

    def support(self):
        return sorted(self.coeffs)

    def __getitem__(self, s):
        return self.coeffs.get(s, self.field.zero)

    def __add__(self, other):
        self._check(other)
        f = self.field
        acc = dict(self.coeffs)
        for s, c in other.coeffs.items():
            v = f.add(acc.get(s, f.zero), c)
            if f.is_zero(v):
                acc.pop(s, None)
            else:
                acc[s] = v
        return Chain(self.dim, acc, f)

    def __neg__(self):
        return Chain(self.dim, {s: self.field.neg(c) for s, c in self.coeffs.items()}, self.field)

    def __sub__(self, other):
        return self + (-other)

    def scale(self, a):
        f = self.field
        a = f.coerce(a)
        if f.is_zero(a):
            return Chain.zero(f, self.dim)
        return Chain(self.dim, {s: f.mul(a, c) for s, c in self.coeffs.items()}, f)

    def boundary(self):
        f = self.field
        acc = {}
        if self.dim == 0:
            return Chain.zero(f, -1)
        for s, c in self.coeffs.items():
            for i, face in enumerate(facets(s)):
                acc[face] = f.add(acc.get(face, f.zero), f.mul(f.sign(i), c))
        return Chain(self.dim - 1, {s: c for s, c in acc.items() if not f.is_zero(c)}, f)

    def is_cycle(self):
        if self.dim == 0:
            return True
        return self.boundary().is_zero()

    def in_complex(self, K):
        return all(s in K for s in self.coeffs)

    def to_field(self, field):
        field = get_field(field)
        return Chain.from_terms(field, self.dim, self.coeffs.items())

    def _check(self, other):
        if self.dim != other.dim or self.field is not other.field:
            raise DomainError("chains of different dimension or field")

    def __eq__(self, other):
        return (isinstance(other, Chain) and self.dim == other.dim
                and self.field is other.field and self.coeffs == other.coeffs)

    def __hash__(self):
        return hash((self.dim, frozenset(self.coeffs.items())))

    def __repr__(self):
        terms = " + ".join(f"{c}*{list(s)}" for s, c in sorted(self.coeffs.items()))
        return f"Chain[{self.dim}]({terms or '0'})"


def boundary_chain(simplex, field):
    """The chain d(simplex) with signs (-1)^i."""
    f = get_field(field)
    terms = {face: f.sign(i) for i, face in enumerate(facets(simplex))}
    return Chain(len(simplex) - 2, terms, f)


def cycle_from_walk(field, walk):
    """1-chain of a closed vertex walk v0 -> v1 -> ... -> v0 (last vertex may repeat the first)."""
    f = get_field(field)
    walk = list(walk)
    if walk[0] != walk[-1]:
        walk.append(walk[0])
    terms = []
    for a, b in zip(walk, walk[1:]):
        terms.append(((a, b), f.one if a < b else f.neg(f.one)))
    return Chain.from_terms(f, 1, terms)


@dataclass(frozen=True)
class SparseMatrix:
    """Column-sparse matrix: columns[j] maps row index -> nonzero scalar."""

    rows: list
    cols: list
    columns: list
    field: object

    @property
    def shape(self):
        return (len(self.rows), len(self.cols))

    def to_dense(self):
        f = self.field
        out = [[f.zero] * len(self.cols) for _ in self.rows]
        for j, col in enumerate(self.columns):
            for i, v in col.items():
                out[i][j] = v
        return out


def boundary_matrix(K, p, field):
    """Matrix of d_p : C_p(K) -> C_{p-1}(K) in the lexicographic simplex bases."""
    if p < 1:
        raise DomainError("boundary matrix needs p >= 1")
    f = get_field(field)
    rows = K.of_dim(p - 1)
    cols = K.of_dim(p)
    idx = K.index(p - 1)
    columns = []
    for s in cols:
        columns.append({idx[face]: f.sign(i) for i, face in enumerate(facets(s))})
    return SparseMatrix(rows, cols, columns, f)


@dataclass(frozen=True)
class Violation:
    index: int
    reason: str

    def __bool__(self):
        return True


@dataclass(frozen=True, init=False)
class Filtration:
    """Simplex-wise filtration: an insertion order with optional grades."""

    order: tuple
    grades: tuple

    def __init__(self, order, grades=None):
        order = tuple(make_simplex(s) for s in order)
        if grades is not None:
            grades = tuple(float(g) for g in grades)
            if len(grades) != len(order):
                raise MalformedInputError("grades and simplices differ in length")
        object.__setattr__(self, "order", order)
        object.__setattr__(self, "grades", grades)

    def __len__(self):
        return len(self.order)

    def grade(self, i):
        if self.grades is None or i is None or i >= len(self.order):
            return None
        return self.grades[i]

    def position(self):
        return {s: i for i, s in enumerate(self.order)}

    def prefix(self, i):
        """K_i: the complex made of the first i+1 simplices."""
        return SimplicialComplex(self.order[: i + 1])

    def complex(self):
        return SimplicialComplex(self.order)

    def restrict(self, L):
        """Sub-filtration induced on a subcomplex L (same relative order)."""
        keep = [i for i, s in enumerate(self.order) if s in L]
        grades = None if self.grades is None else [self.grades[i] for i in keep]
        return Filtration([self.order[i] for i in keep], grades)

    def __repr__(self):
        return f"Filtration({len(self.order)} simplices)"


def validate_filtration(f):
    """Return None if f is a valid simplex-wise filtration, else the first Violation."""
    seen = set()
    prev = None
    for i, s in enumerate(f.order):
        if s in seen:
            return Violation(i, f"simplex {list(s)} inserted twice")
        for face in facets(s):
            if face not in seen:
                return Violation(i, f"face {list(face)} of {list(s)} not yet inserted")
        if f.grades is not None:
            g = f.grades[i]
            if g != g:
                return Violation(i, "grade is NaN")
            if prev is not None and g < prev:
                return Violation(i, f"grade {g} decreases (previous {prev})")
            prev = g
        seen.add(s)
    return None
