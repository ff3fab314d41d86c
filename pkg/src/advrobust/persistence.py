"""Persistence barcodes, image membership and induced matchings.

Barcodes are computed by left-to-right column reduction with clearing.  The
induced matching of an inclusion of filtrations is computed oracle-style:
the barcode of the image module is read off from exact ranks of the maps
H_p(L_i) -> H_p(K_j), then bars are matched through it (surjection onto the
image by equal births, injection into the target by equal deaths).
"""
import math
from collections import defaultdict
from dataclasses import dataclass

from .complex import Chain, SimplicialComplex, facets, validate_filtration
from .errors import DomainError, InvalidFiltrationError
from .field import GF2, get_field
from .linalg import EchelonBasis, in_span, kernel_basis, ops_for

INF = math.inf


@dataclass(frozen=True)
class Bar:
    dim: int
    birth_index: int
    death_index: float
    birth_simplex: tuple
    death_simplex: tuple = None
    birth_grade: float = None
    death_grade: float = None

    @property
    def finite(self):
        return self.death_index != INF

    @property
    def length(self):
        """Grade length r(tau) - r(sigma); inf for infinite bars, None without grades."""
        if not self.finite:
            return INF
        if self.birth_grade is None or self.death_grade is None:
            return None
        return self.death_grade - self.birth_grade

    def interval(self):
        return (self.birth_index, self.death_index)

    def __str__(self):
        d = "inf" if not self.finite else self.death_index
        return f"H{self.dim}[{self.birth_index},{d})"


@dataclass(frozen=True)
class Barcode:
    bars: tuple

    def of_dim(self, p):
        return [b for b in self.bars if b.dim == p]

    def intervals(self, p=None):
        """Sorted multiset of (birth, death) index pairs, optionally for one dimension."""
        return sorted(b.interval() for b in self.bars if p is None or b.dim == p)

    def find(self, dim, birth_index):
        for b in self.bars:
            if b.dim == dim and b.birth_index == birth_index:
                return b
        raise KeyError(f"no H{dim} bar born at {birth_index}")

    def alive_at(self, i, p):
        return sum(1 for b in self.bars if b.dim == p and b.birth_index <= i < b.death_index)

    def __iter__(self):
        return iter(self.bars)

    def __len__(self):
        return len(self.bars)


@dataclass
class Reduction:
    """Output of the column reduction, in backend-native vectors."""

    pairs: dict       # birth index -> death index
    essential: list   # positive indices that are never paired
    reduced: dict     # death index -> reduced column (a boundary)
    cycles: dict      # positive index -> cycle representative born there
    ops: object


def _check(f):
    v = validate_filtration(f)
    if v:
        raise InvalidFiltrationError(v.index, v.reason)


def reduce_columns(f, field, want_cycles=False):
    """Column reduction with clearing, processing dimensions from the top down."""
    F = get_field(field)
    ops = ops_for(F)
    pos = f.position()
    by_dim = defaultdict(list)
    for j, s in enumerate(f.order):
        by_dim[len(s) - 1].append(j)
    pivots = {}
    reduced = {}
    vcols = {}
    cycles = {}
    cleared = set()
    for d in sorted(by_dim, reverse=True):
        for j in by_dim[d]:
            if j in cleared:
                continue
            s = f.order[j]
            col = ops.make({pos[face]: F.sign(i) for i, face in enumerate(facets(s))})
            tag = ops.unit(j) if want_cycles else None
            while col:
                low = ops.low(col)
                k = pivots.get(low)
                if k is None:
                    break
                c = ops.coef(col, reduced[k], low)
                col = ops.axpy(col, c, reduced[k])
                if want_cycles:
                    tag = ops.axpy(tag, c, vcols[k])
            if col:
                low = ops.low(col)
                pivots[low] = j
                reduced[j] = col
                cleared.add(low)
                if want_cycles:
                    vcols[j] = tag
                    cycles[low] = col
            elif want_cycles:
                cycles[j] = tag
    essential = [j for j in range(len(f.order)) if j not in pivots and j not in reduced]
    return Reduction(dict(pivots), essential, reduced, cycles, ops)


def _bars(f, pairs, essential):
    g = f.grade
    bars = []
    for b, d in pairs.items():
        bars.append(Bar(len(f.order[b]) - 1, b, d, f.order[b], f.order[d], g(b), g(d)))
    for b in essential:
        bars.append(Bar(len(f.order[b]) - 1, b, INF, f.order[b], None, g(b), None))
    bars.sort(key=lambda x: (x.dim, x.birth_index))
    return Barcode(tuple(bars))


def reduce(f, field=GF2):
    """Barcode of a simplex-wise filtration (all dimensions)."""
    _check(f)
    r = reduce_columns(f, field)
    return _bars(f, r.pairs, r.essential)


def reduce_naive(f, field=GF2):
    """Textbook reduction without clearing or pivot lookup; used as a cross-check."""
    _check(f)
    F = get_field(field)
    pos = f.position()
    cols = []
    for s in f.order:
        cols.append({pos[face]: F.sign(i) for i, face in enumerate(facets(s))})

    def low(c):
        return max(c) if c else -1

    for j in range(len(cols)):
        changed = True
        while changed and cols[j]:
            changed = False
            for k in range(j):
                if cols[k] and low(cols[k]) == low(cols[j]):
                    l = low(cols[j])
                    a = F.neg(F.div(cols[j][l], cols[k][l]))
                    new = dict(cols[j])
                    for i, v in cols[k].items():
                        x = F.add(new.get(i, F.zero), F.mul(a, v))
                        if F.is_zero(x):
                            new.pop(i, None)
                        else:
                            new[i] = x
                    cols[j] = new
                    changed = True
                    break
    pairs = {low(c): j for j, c in enumerate(cols) if c}
    essential = [j for j, c in enumerate(cols) if not c and j not in pairs]
    return _bars(f, pairs, essential)


def _chain_vector(z, K, p):
    idx = K.index(p)
    return {idx[s]: c for s, c in z.coeffs.items()}


def image_membership(K, L, z, p, field=GF2):
    """Whether [z] lies in the image of H_p(L) -> H_p(K)."""
    F = get_field(field)
    if z.field is not F:
        z = z.to_field(F)
    if z.dim != p:
        raise DomainError(f"chain has dimension {z.dim}, expected {p}")
    if not z.in_complex(K):
        raise DomainError("chain is not supported in K")
    if not z.is_cycle():
        raise DomainError("chain is not a cycle")
    if not L.simplices <= K.simplices:
        raise DomainError("L is not a subcomplex of K")
    idx = K.index(p)
    Lp = L.of_dim(p)
    if p == 0:
        cycles = [{idx[s]: F.one} for s in Lp]
    else:
        Lidx = L.index(p - 1)
        cols = [{Lidx[fc]: F.sign(i) for i, fc in enumerate(facets(s))} for s in Lp]
        cycles = [{idx[Lp[j]]: c for j, c in x.items()} for x in kernel_basis(cols, F)]
    boundaries = []
    for t in K.of_dim(p + 1):
        boundaries.append({idx[fc]: F.sign(i) for i, fc in enumerate(facets(t))})
    return in_span(cycles + boundaries, _chain_vector(z, K, p), F)


def is_boundary(K, z, field=GF2):
    return image_membership(K, SimplicialComplex(()), z, z.dim, field)


@dataclass(frozen=True)
class PartialMatching:
    """Injective partial map between the bars of two barcodes."""

    pairs: tuple          # (source bar, target bar)
    source: Barcode
    target: Barcode
    image: tuple          # (birth, death) intervals of the image module

    def target_of(self, bar):
        for a, b in self.pairs:
            if a == bar:
                return b
        return None

    def source_of(self, bar):
        for a, b in self.pairs:
            if b == bar:
                return a
        return None

    def is_matched(self, target_bar):
        return any(b == target_bar for _, b in self.pairs)

    def __len__(self):
        return len(self.pairs)


def _restriction_positions(fL, fK):
    posK = fK.position()
    try:
        mapped = [posK[s] for s in fL.order]
    except KeyError as e:
        raise DomainError(f"simplex {list(e.args[0])} of L is not in K") from None
    if any(a >= b for a, b in zip(mapped, mapped[1:])):
        raise DomainError("L's order is not the restriction of K's order")
    return mapped


def _reindex(bc, mapped, fK):
    g = fK.grade
    out = []
    for b in bc.bars:
        bi = mapped[b.birth_index]
        di = INF if not b.finite else mapped[b.death_index]
        out.append(Bar(b.dim, bi, di, b.birth_simplex, b.death_simplex, g(bi),
                       None if di == INF else g(di)))
    return Barcode(tuple(out))


class ImageRanks:
    """rank(H_p(L_i) -> H_p(K_j)) for a filtered inclusion, on K's index scale."""

    def __init__(self, fL, fK, p, field=GF2, kred=None):
        F = get_field(field)
        mapped = _restriction_positions(fL, fK)
        m = len(fK.order)
        self.m = m
        rL = reduce_columns(fL, F, want_cycles=True)
        rK = kred or reduce_columns(fK, F)
        ops = rL.ops
        lift = {}
        for i, vec in rL.cycles.items():
            if len(fL.order[i]) - 1 != p:
                continue
            d = ops.to_dict(vec)
            lift[mapped[i]] = ops.make({mapped[a]: c for a, c in d.items()})
        bnd = [(j, v) for j, v in sorted(rK.reduced.items()) if len(fK.order[j]) - 2 == p]
        self.zpos = sorted(lift)
        self.bpos = [j for j, _ in bnd]
        # table[a][b]: rank with the first a L-cycles and the first b K-boundaries
        table = []
        for b in range(len(bnd) + 1):
            basis = EchelonBasis(F)
            for _, v in bnd[:b]:
                basis.add(v)
            row = [0]
            for i in self.zpos:
                basis.add(lift[i])
                row.append(basis.rank - b)
            table.append(row)
        self.table = table

    def __call__(self, i, j):
        if i < 0 or i > j:
            return 0
        a = _count_le(self.zpos, i)
        b = _count_le(self.bpos, j)
        return self.table[b][a]

    def barcode(self):
        """Image-module intervals by inclusion-exclusion over index pairs."""
        r = self
        m = self.m
        out = []
        for b in self.zpos:
            for d in range(b + 1, m):
                mu = r(b, d - 1) - r(b - 1, d - 1) - r(b, d) + r(b - 1, d)
                out.extend([(b, d)] * mu)
            mu = r(b, m - 1) - r(b - 1, m - 1)
            out.extend([(b, INF)] * mu)
        return out


def _count_le(sorted_list, x):
    lo, hi = 0, len(sorted_list)
    while lo < hi:
        mid = (lo + hi) // 2
        if sorted_list[mid] <= x:
            lo = mid + 1
        else:
            hi = mid
    return lo


def _bl_match(src, dst, group, order):
    """Match two interval lists group-by-group, each group sorted by `order`."""
    gs, gd = defaultdict(list), defaultdict(list)
    for x in src:
        gs[group(x)].append(x)
    for y in dst:
        gd[group(y)].append(y)
    out = []
    for key, xs in gs.items():
        ys = sorted(gd.get(key, []), key=order)
        out.extend(zip(sorted(xs, key=order), ys))
    return out


def induced_matching(fL, fK, p, field=GF2, kred=None):
    """Matching of H_p bars induced by the inclusion of filtrations fL into fK."""
    _check(fL)
    _check(fK)
    mapped = _restriction_positions(fL, fK)
    ranks = ImageRanks(fL, fK, p, field, kred)
    src = _reindex(reduce(fL, field), mapped, fK)
    tgt = reduce(fK, field)
    image = ranks.barcode()
    sbars = src.of_dim(p)
    tbars = tgt.of_dim(p)
    ibars = list(enumerate(image))
    # surjection onto the image: equal births, decreasing length
    surj = _bl_match(sbars, ibars,
                     group=lambda x: x.birth_index if isinstance(x, Bar) else x[1][0],
                     order=lambda x: -(x.death_index if isinstance(x, Bar) else x[1][1]))
    # injection into the target: equal deaths, decreasing length
    inj = _bl_match(ibars, tbars,
                    group=lambda x: x[1][1] if not isinstance(x, Bar) else x.death_index,
                    order=lambda x: x[1][0] if not isinstance(x, Bar) else x.birth_index)
    to_target = {i: t for (i, _), t in inj}
    pairs = []
    for s, (i, _) in surj:
        if i in to_target:
            pairs.append((s, to_target[i]))
    pairs.sort(key=lambda ab: ab[1].birth_index)
    return PartialMatching(tuple(pairs), src, tgt, tuple(image))
