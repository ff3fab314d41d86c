"""Glued-surface gadgets for the exact-cover-by-3-sets (X3C) reduction.

Each element u of the universe gets a planar surface L_u whose outer
boundary is labelled u and whose interior boundaries are labelled by the
sets containing u.  All outer boundaries are identified with one global
triangle ring, and boundaries with the same set label are identified
across surfaces.  Every ring has three vertices, so gluing is plain
vertex identification.

Building blocks:
  disk3   four triangles forming a disk with three triangular holes
  collar  twelve triangles, two stacked triangulated annuli
  M       a collar whose inner ring is the outer ring of a disk3
"""
import math
from collections import deque
from dataclasses import dataclass, field
from itertools import combinations

from .complex import Chain, SimplicialComplex, boundary_chain, build_complex, cycle_from_walk, make_simplex
from .errors import DomainError, MalformedInputError
from .field import Q
from .homcut import CutOracle


def ceil_log3(k):
    n, p = 0, 1
    while p < k:
        p *= 3
        n += 1
    return n


@dataclass(frozen=True)
class X3CInstance:
    universe: tuple
    sets: tuple

    def __init__(self, universe, sets):
        U = tuple(universe)
        if len(set(U)) != len(U):
            raise MalformedInputError("universe has repeated elements")
        if len(U) % 3:
            raise MalformedInputError("universe size must be divisible by 3")
        S = []
        for s in sets:
            s = tuple(s)
            if len(s) != 3 or len(set(s)) != 3:
                raise MalformedInputError(f"set {list(s)} must have exactly 3 distinct members")
            if not set(s) <= set(U):
                raise MalformedInputError(f"set {list(s)} is not contained in the universe")
            S.append(tuple(sorted(s, key=U.index)))
        object.__setattr__(self, "universe", U)
        object.__setattr__(self, "sets", tuple(S))

    def sets_containing(self, u):
        return [i for i, s in enumerate(self.sets) if u in s]

    @property
    def k(self):
        return max((len(self.sets_containing(u)) for u in self.universe), default=0)

    @property
    def c(self):
        return 5 * ceil_log3(self.k) + 3

    @property
    def cut_bound(self):
        return self.c * len(self.universe) + len(self.universe) // 3 + 1

    @classmethod
    def from_json(cls, data):
        if not isinstance(data, dict) or "universe" not in data or "sets" not in data:
            raise MalformedInputError("instance needs 'universe' and 'sets'")
        return cls(data["universe"], data["sets"])


def exact_cover(inst):
    """Some exact cover as a tuple of set indices, or None."""
    U = set(inst.universe)

    def rec(left, chosen):
        if not left:
            return tuple(chosen)
        u = min(left, key=inst.universe.index)
        for i in inst.sets_containing(u):
            s = set(inst.sets[i])
            if s <= left:
                hit = rec(left - s, chosen + [i])
                if hit is not None:
                    return hit
        return None

    return rec(U, [])


class _Builder:
    def __init__(self):
        self.n = 0
        self.triangles = []

    def new(self, m):
        vs = tuple(range(self.n, self.n + m))
        self.n += m
        return vs

    def tri(self, *vs):
        self.triangles.append(make_simplex(vs))

    def annulus(self, inner, outer):
        a0, a1, a2 = inner
        b0, b1, b2 = outer
        for t in ((b0, a0, a1), (b0, b1, a1), (a2, b1, a1), (a2, b1, b2), (a2, a0, b2), (b0, a0, b2)):
            self.tri(*t)

    def collar(self, inner, outer):
        mid = self.new(3)
        self.annulus(inner, mid)
        self.annulus(mid, outer)

    def disk3(self, outer):
        """Fill the ring with four triangles; returns the three hole rings."""
        A, B, T = outer
        il, ir, ib = self.new(3)
        for t in ((A, B, ib), (A, T, il), (ir, T, B), (il, ir, ib)):
            self.tri(*t)
        return [(A, ib, il), (B, ir, ib), (T, il, ir)]

    def main_block(self, outer):
        ring = self.new(3)
        self.collar(ring, outer)
        return self.disk3(ring)

    def surface(self, outer, set_rings, k):
        """L_u between ``outer`` and the rings of the sets containing u."""
        layers = ceil_log3(k)
        if layers == 0:
            # one set and no branching needed: a bare collar already gives c + 2
            self.collar(set_rings[0], outer)
            return
        holes = self.main_block(outer)
        for _ in range(layers - 1):
            holes = [h for ring in holes for h in self.main_block(ring)]
        for ring, hole in zip(set_rings, holes):
            self.collar(ring, hole)
        for hole in holes[len(set_rings):]:
            self.tri(*hole)


def ring_cycle(ring):
    return cycle_from_walk(Q, list(ring) + [ring[0]])


def ring_edges(ring):
    a, b, c = ring
    return tuple(sorted(make_simplex(e) for e in ((a, b), (b, c), (a, c))))


@dataclass
class GadgetComplex:
    complex: SimplicialComplex
    gamma: Chain
    rings: dict                       # label -> 3 vertex ids
    pieces: dict = field(default_factory=dict)   # element -> its triangles
    labels: dict = field(default_factory=dict)   # element -> ring labels of its surface
    instance: X3CInstance = None

    @property
    def boundaries(self):
        return {lab: ring_cycle(r) for lab, r in self.rings.items()}

    def ring_edge_set(self):
        return {e for r in self.rings.values() for e in ring_edges(r)}

    def piece_complex(self, u):
        return build_complex(self.pieces[u], self.complex.count(0))


def _fragment(build, labels):
    b = _Builder()
    rings = build(b)
    K = build_complex(b.triangles, b.n)
    rings = dict(zip(labels, rings))
    gc = GadgetComplex(K, ring_cycle(rings[labels[0]]), rings)
    gc.pieces = {labels[0]: tuple(K.of_dim(2))}
    gc.labels = {labels[0]: tuple(labels)}
    return gc


def block_disk3():
    def build(b):
        outer = b.new(3)
        return [outer] + b.disk3(outer)
    return _fragment(build, ["outer", "hole0", "hole1", "hole2"])


def block_double_collar():
    def build(b):
        outer, inner = b.new(3), b.new(3)
        b.collar(inner, outer)
        return [outer, inner]
    return _fragment(build, ["outer", "inner"])


def block_main():
    def build(b):
        outer = b.new(3)
        return [outer] + b.main_block(outer)
    return _fragment(build, ["outer", "hole0", "hole1", "hole2"])


def build_Lu(u, sets_containing_u, k):
    """Stand-alone surface for one element; outer ring labelled u."""
    sets = list(sets_containing_u)
    if not 1 <= len(sets) <= k:
        raise DomainError("need 1 <= number of containing sets <= k")

    def build(b):
        outer = b.new(3)
        set_rings = [b.new(3) for _ in sets]
        b.surface(outer, set_rings, k)
        return [outer] + set_rings
    return _fragment(build, [u] + [("S", s) for s in sets])


def build_x3c_complex(inst):
    """Glue the surfaces of all elements; gamma is the shared outer ring."""
    b = _Builder()
    u_ring = b.new(3)
    set_rings = [b.new(3) for _ in inst.sets]
    k = inst.k
    pieces, labels = {}, {}
    for u in inst.universe:
        idx = inst.sets_containing(u)
        if not idx:
            raise DomainError(f"element {u} lies in no set")
        start = len(b.triangles)
        b.surface(u_ring, [set_rings[i] for i in idx], k)
        pieces[u] = tuple(b.triangles[start:])
        labels[u] = ("u",) + tuple(("S", i) for i in idx)
    K = build_complex(b.triangles, b.n)
    rings = {"u": u_ring}
    rings.update({("S", i): r for i, r in enumerate(set_rings)})
    return GadgetComplex(K, ring_cycle(u_ring), rings, pieces, labels, inst)


def fundamental_chain(triangles):
    """Coherently oriented sum of the triangles of a connected orientable surface."""
    tris = list(triangles)
    edge_tris = {}
    for t in tris:
        for e in combinations(t, 2):
            edge_tris.setdefault(e, []).append(t)
    sign = {tris[0]: 1}
    todo = deque([tris[0]])
    while todo:
        t = todo.popleft()
        bt = boundary_chain(t, Q)
        for e in combinations(t, 2):
            for o in edge_tris[e]:
                if o == t:
                    continue
                want = -sign[t] * bt[e] * boundary_chain(o, Q)[e]
                if o in sign:
                    if sign[o] != want:
                        raise DomainError("surface is not orientable")
                else:
                    sign[o] = want
                    todo.append(o)
    if len(sign) != len(tris):
        raise DomainError("surface is not connected")
    return Chain(2, {t: Q.coerce(s) for t, s in sign.items()}, Q)


def _dual_search(gc, u, D):
    """0-1 BFS on the extended dual graph of L_u from its outer label.

    Nodes are triangles and boundary labels; each edge of L_u joins its two
    sides.  Edges of D cost 0, internal edges cost 1, and boundary edges
    outside D are unusable.
    """
    labels = gc.labels[u]
    src = labels[0]
    ring_of = {e: lab for lab in labels for e in ring_edges(gc.rings[lab])}
    sides = {}
    for t in gc.pieces[u]:
        for e in combinations(t, 2):
            sides.setdefault(e, []).append(t)
    adj = {}
    for e, ts in sides.items():
        if len(ts) == 1:
            if e not in D:
                continue
            ts = ts + [ring_of[e]]
        elif len(ts) != 2:
            raise DomainError(f"edge {e} is not a surface edge")
        w = 0 if e in D else 1
        adj.setdefault(ts[0], []).append((ts[1], w, e))
        adj.setdefault(ts[1], []).append((ts[0], w, e))
    dist, prev = {src: 0}, {}
    dq = deque([src])
    while dq:
        x = dq.popleft()
        for y, w, e in adj.get(x, ()):
            nd = dist[x] + w
            if nd < dist.get(y, math.inf):
                dist[y], prev[y] = nd, (x, e)
                (dq.appendleft if w == 0 else dq.append)(y)
    return dist, prev, ring_of


def piece_dual_distance(gc, u, D):
    """Fewest internal edges that, together with the ring edges D, cut [u] in L_u."""
    dist, _, _ = _dual_search(gc, u, D)
    return min((dist.get(lab, math.inf) for lab in gc.labels[u][1:]), default=math.inf)


@dataclass(frozen=True)
class GadgetBound:
    lower_bound: float
    ring_edges: tuple     # a minimising choice of ring edges
    per_element: dict     # element -> internal edges needed


def gadget_lower_bound(gc):
    """Minimum over ring-edge sets D of |D| plus the per-surface internal costs.

    Every cut of the glued complex restricts to a cut of each surface, and
    internal edges of different surfaces are disjoint, so this bounds the
    minimum cut from below.
    """
    ring_list = sorted(gc.ring_edge_set())
    memo = {}
    local = {u: {e for lab in gc.labels[u] for e in ring_edges(gc.rings[lab])} for u in gc.pieces}

    def cost(u, D):
        key = (u, frozenset(D & local[u]))
        if key not in memo:
            memo[key] = piece_dual_distance(gc, u, key[1])
        return memo[key]

    best = (math.inf, (), {})
    for r in range(len(ring_list) + 1):
        if r >= best[0]:
            break
        for D in combinations(ring_list, r):
            Ds = set(D)
            total, per = r, {}
            for u in gc.pieces:
                c = cost(u, Ds)
                per[u] = c
                total += c
                if total >= best[0]:
                    break
            if total < best[0]:
                best = (total, D, per)
    return GadgetBound(*best)


def _shortest_internal_path(gc, u, D):
    """Internal edges of a cheapest dual path from the outer label to a set label."""
    dist, prev, ring_of = _dual_search(gc, u, D)
    t = min((lab for lab in gc.labels[u][1:] if lab in dist), key=lambda lab: dist[lab])
    path = []
    while t != gc.labels[u][0]:
        t, e = prev[t]
        if e not in ring_of:
            path.append(e)
    return path


def recipe_cut(gc, cover):
    """Cut built from an exact cover: one outer edge, one edge per cover set, shortest internal paths."""
    inst = gc.instance
    e_u = ring_edges(gc.rings["u"])[0]
    chosen = {i: ring_edges(gc.rings[("S", i)])[0] for i in cover}
    C = {e_u} | set(chosen.values())
    for u in inst.universe:
        i = next(i for i in cover if u in inst.sets[i])
        C |= set(_shortest_internal_path(gc, u, {e_u, chosen[i]}))
    return tuple(sorted(C))


@dataclass(frozen=True)
class ReductionReport:
    instance: X3CInstance
    c: int
    bound: int
    cover: tuple
    cut: tuple
    cut_verified: bool
    lower_bound: float
    gamma_trivial: bool = False

    @property
    def cut_within_bound(self):
        return self.cut is not None and self.cut_verified and len(self.cut) <= self.bound


def check_reduction(inst, gc=None):
    """Decide X3C by search and compare with cut existence below the bound."""
    gc = gc or build_x3c_complex(inst)
    cover = exact_cover(inst)
    try:
        oracle = CutOracle(gc.complex, gc.gamma, 1, Q)
    except DomainError:
        # gamma bounds over Q, so no cut of any size exists
        return ReductionReport(inst, inst.c, inst.cut_bound, cover, None, False, math.inf, True)
    cut, ok = None, False
    if cover is not None:
        cut = recipe_cut(gc, cover)
        ok = oracle.is_cut(cut)
    lb = gadget_lower_bound(gc).lower_bound
    return ReductionReport(inst, inst.c, inst.cut_bound, cover, cut, ok, lb)
