"""Minimum homological 1-cuts of complexes embedded in the plane.

Complement regions come from a face traversal of the embedded 1-skeleton
with exact rational orientation predicates.  The extended dual graph has one
vertex per triangle and per complement region and one edge per edge of K;
a minimum cut is a shortest dual path between two regions whose
coefficients in the region basis differ.
"""
from collections import defaultdict, deque
from dataclasses import dataclass
from fractions import Fraction
import math

from .complex import Chain, SimplicialComplex, boundary_chain, facets
from .errors import DomainError, GeometryError, MalformedInputError
from .field import Q
from .homcut import CutCertificate
from .linalg import solve


# geometry

def orient(a, b, c):
    """Sign of the cross product (b - a) x (c - a)."""
    v = (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0])
    return (v > 0) - (v < 0)


def _strictly_between(p, a, b):
    return min(a[0], b[0]) <= p[0] <= max(a[0], b[0]) and \
        min(a[1], b[1]) <= p[1] <= max(a[1], b[1]) and p != a and p != b


def on_open_segment(p, a, b):
    return orient(a, b, p) == 0 and _strictly_between(p, a, b)


def segments_cross(a, b, c, d):
    """Proper crossing of two segments (interiors meet in one point)."""
    o1, o2 = orient(a, b, c), orient(a, b, d)
    o3, o4 = orient(c, d, a), orient(c, d, b)
    return o1 * o2 < 0 and o3 * o4 < 0


def in_open_triangle(p, a, b, c):
    o1, o2, o3 = orient(a, b, p), orient(b, c, p), orient(c, a, p)
    return o1 == o2 == o3 != 0


def signed_area2(points):
    s = 0
    n = len(points)
    for i in range(n):
        x1, y1 = points[i]
        x2, y2 = points[(i + 1) % n]
        s += x1 * y2 - x2 * y1
    return s


def point_in_polygon(p, poly):
    """Even-odd test; p must not lie on the polygon."""
    inside = False
    x, y = p
    n = len(poly)
    for i in range(n):
        (x1, y1), (x2, y2) = poly[i], poly[(i + 1) % n]
        if (y1 > y) != (y2 > y):
            xi = x1 + (y - y1) * (x2 - x1) / (y2 - y1)
            if xi > x:
                inside = not inside
    return inside


def to_rational(x):
    if isinstance(x, Fraction):
        return x
    if isinstance(x, (list, tuple)) and len(x) == 2:
        return Fraction(int(x[0]), int(x[1]))
    if isinstance(x, float):
        return Fraction(repr(x))
    try:
        return Fraction(x)
    except (TypeError, ValueError):
        raise MalformedInputError(f"cannot read coordinate {x!r} as a rational") from None


def _cells(bbox, size):
    (x0, y0), (x1, y1) = bbox
    for i in range(math.floor(x0 / size), math.floor(x1 / size) + 1):
        for j in range(math.floor(y0 / size), math.floor(y1 / size) + 1):
            yield (i, j)


def _bbox(points):
    xs = [p[0] for p in points]
    ys = [p[1] for p in points]
    return (min(xs), min(ys)), (max(xs), max(ys))


class EmbeddedComplex:
    """A simplicial complex with exact rational vertex coordinates."""

    def __init__(self, complex, coords, validate=True):
        self.complex = complex
        pts = {}
        for v in complex.vertices():
            if v not in coords:
                raise MalformedInputError(f"vertex {v} has no coordinates")
            pts[v] = tuple(to_rational(x) for x in coords[v])
        dims = {len(p) for p in pts.values()}
        if len(dims) > 1:
            raise MalformedInputError("coordinates of mixed dimension")
        self.n = dims.pop() if dims else 2
        self.coords = pts
        if validate and self.n == 2:
            self.validate()

    def validate(self):
        K, P = self.complex, self.coords
        if len(set(P.values())) != len(P):
            raise GeometryError("two vertices share a position")
        edges = K.of_dim(1)
        tris = K.of_dim(2)
        if K.dim > 2:
            raise GeometryError("a planar embedding has no simplices above dimension 2")
        for t in tris:
            if orient(*(P[v] for v in t)) == 0:
                raise GeometryError(f"triangle {list(t)} is degenerate")
        items = [("v", (v,), [P[v]]) for v in P]
        items += [("e", e, [P[e[0]], P[e[1]]]) for e in edges]
        items += [("t", t, [P[v] for v in t]) for t in tris]
        if len(items) < 2:
            return
        span = _bbox([p for _, _, ps in items for p in ps])
        extent = max(span[1][0] - span[0][0], span[1][1] - span[0][1]) or Fraction(1)
        size = extent / max(1, int(math.sqrt(len(items))))
        buckets = defaultdict(list)
        for idx, (_, _, ps) in enumerate(items):
            for c in _cells(_bbox(ps), size):
                buckets[c].append(idx)
        seen = set()
        for members in buckets.values():
            for i in range(len(members)):
                for j in range(i + 1, len(members)):
                    a, b = members[i], members[j]
                    if (a, b) in seen:
                        continue
                    seen.add((a, b))
                    self._check_pair(items[a], items[b])

    @staticmethod
    def _check_pair(x, y):
        if x[0] > y[0]:
            x, y = y, x
        kx, sx, px = x
        ky, sy, py = y
        shared = set(sx) & set(sy)
        if kx == "e" and ky == "e":
            if not shared and segments_cross(*px, *py):
                raise GeometryError(f"edges {list(sx)} and {list(sy)} cross")
        elif kx == "e" and ky == "v":
            if not shared and on_open_segment(py[0], *px):
                raise GeometryError(f"vertex {sy[0]} lies on edge {list(sx)}")
        elif kx == "t" and ky == "v":
            if not shared and in_open_triangle(py[0], *px):
                raise GeometryError(f"vertex {sy[0]} lies inside triangle {list(sx)}")
        elif kx == "e" and ky == "t":
            if len(shared) < 2:
                mid = ((px[0][0] + px[1][0]) / 2, (px[0][1] + px[1][1]) / 2)
                if in_open_triangle(mid, *py):
                    raise GeometryError(f"edge {list(sx)} enters triangle {list(sy)}")
        elif kx == "t" and ky == "t":
            if len(shared) < 3:
                cx = (sum(p[0] for p in px) / 3, sum(p[1] for p in px) / 3)
                cy = (sum(p[0] for p in py) / 3, sum(p[1] for p in py) / 3)
                if in_open_triangle(cx, *py) or in_open_triangle(cy, *px):
                    raise GeometryError(f"triangles {list(sx)} and {list(sy)} overlap")


@dataclass(frozen=True)
class Region:
    xi: Chain              # boundary cycle, region on the left
    walks: tuple           # closed vertex walks bounding the region
    adjacent: tuple        # (n-1)-simplices bordering the region, with multiplicity


@dataclass(frozen=True)
class RegionDecomposition:
    regions: tuple
    unbounded: int


def _angle_key(origin, P):
    ox, oy = origin

    def key(v):
        dx, dy = P[v][0] - ox, P[v][1] - oy
        upper = dy > 0 or (dy == 0 and dx > 0)
        return (0 if upper else 1, _Slope(dx, dy))
    return key


class _Slope:
    """Orders directions within one half-plane counterclockwise."""

    __slots__ = ("dx", "dy")

    def __init__(self, dx, dy):
        self.dx, self.dy = dx, dy

    def __lt__(self, other):
        return self.dx * other.dy - self.dy * other.dx > 0

    def __eq__(self, other):
        return self.dx * other.dy - self.dy * other.dx == 0


def _face_walks(E):
    K, P = E.complex, E.coords
    nbrs = defaultdict(list)
    for a, b in K.of_dim(1):
        nbrs[a].append(b)
        nbrs[b].append(a)
    rank = {}
    for v, ns in nbrs.items():
        ns.sort(key=_angle_key(P[v], P))
        for i, w in enumerate(ns):
            rank[(v, w)] = i
    walk_of = {}
    walks = []
    for start in sorted(rank):
        if start in walk_of:
            continue
        wid = len(walks)
        h = start
        verts = []
        while h not in walk_of:
            walk_of[h] = wid
            u, v = h
            verts.append(u)
            ns = nbrs[v]
            w = ns[(rank[(v, u)] - 1) % len(ns)]
            h = (v, w)
        walks.append(verts)
    return walks, walk_of, nbrs


def complement_regions(E):
    """Connected components of the plane minus |K|, with oriented boundary cycles."""
    if E.n != 2:
        raise DomainError("region reconstruction is implemented for planar embeddings only")
    K, P = E.complex, E.coords
    walks, walk_of, nbrs = _face_walks(E)
    tri_set = set(K.of_dim(2))
    parent = {v: v for v in nbrs}

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in K.of_dim(1):
        parent[find(a)] = find(b)
    area = [signed_area2([P[v] for v in w]) for w in walks]
    kind = []
    for w, ar in zip(walks, area):
        if ar > 0 and len(w) == 3 and tuple(sorted(w)) in tri_set:
            kind.append("triangle")
        elif ar > 0:
            kind.append("inner")
        else:
            kind.append("outer")
    bounded = [i for i, k in enumerate(kind) if k == "inner"]
    host = {}
    for i, k in enumerate(kind):
        if k != "outer":
            continue
        comp = find(walks[i][0])
        p = P[walks[i][0]]
        best = None
        for j, kj in enumerate(kind):
            if kj == "outer" or find(walks[j][0]) == comp:
                continue
            if point_in_polygon(p, [P[v] for v in walks[j]]):
                if best is None or area[j] < area[best]:
                    best = j
        if best is not None and kind[best] == "triangle":
            raise GeometryError("a component lies inside a triangle")
        host[i] = best
    groups = {j: [j] for j in bounded}
    unb = []
    for i, j in host.items():
        (groups[j] if j is not None else unb).append(i)

    def corner(ws):
        return min(P[v] for i in ws for v in walks[i])

    order = sorted(groups, key=lambda j: corner(groups[j]))
    members = [groups[j] for j in order] + [unb]
    regions = []
    for ws in members:
        terms = defaultdict(lambda: Fraction(0))
        adj = []
        for i in ws:
            w = walks[i]
            for a, b in zip(w, w[1:] + w[:1]):
                e = (a, b) if a < b else (b, a)
                terms[e] += 1 if a < b else -1
                adj.append(e)
        xi = Chain(1, {e: c for e, c in terms.items() if c != 0}, Q)
        regions.append(Region(xi, tuple(tuple(walks[i]) for i in ws), tuple(sorted(adj))))
    return RegionDecomposition(tuple(regions), len(regions) - 1)


@dataclass(frozen=True)
class ExtendedDualGraph:
    """Vertices 0..T-1 are top simplices, T..T+R-1 are regions."""

    top: tuple
    n_regions: int
    unbounded: int           # vertex id of the unbounded region
    edges: tuple             # (a, b, simplex) per (n-1)-simplex of K

    @property
    def n_vertices(self):
        return len(self.top) + self.n_regions

    def region_vertex(self, r):
        return len(self.top) + r

    def adjacency(self):
        adj = defaultdict(list)
        for a, b, s in self.edges:
            if a == b:
                continue
            adj[a].append((b, s))
            adj[b].append((a, s))
        for v in adj:
            adj[v].sort()
        return adj


def extended_dual_graph(E, R=None):
    """Dual graph augmented with one vertex per complement region."""
    if R is None:
        R = complement_regions(E)
    K = E.complex
    n = E.n
    top = K.of_dim(n)
    tidx = {t: i for i, t in enumerate(top)}
    sides = defaultdict(list)
    for t in top:
        for fc in facets(t):
            sides[fc].append(tidx[t])
    base = len(top)
    for r, reg in enumerate(R.regions):
        for s in reg.adjacent:
            sides[s].append(base + r)
    edges = []
    for s in K.of_dim(n - 1):
        ends = sides.get(s, [])
        while len(ends) < 2:
            ends.append(base + R.unbounded)
        if len(ends) != 2:
            raise DomainError(f"simplex {list(s)} borders {len(ends)} cells; expected 2")
        a, b = sorted(ends)
        edges.append((a, b, s))
    return ExtendedDualGraph(tuple(top), len(R.regions), base + R.unbounded, tuple(edges))


def express_in_region_basis(E, R, gamma):
    """Coefficients alpha with [gamma] = sum alpha_i [xi_i]; the unbounded region gets 0."""
    K = E.complex
    n = E.n
    if gamma.field is not Q:
        gamma = gamma.to_field(Q)
    if gamma.dim != n - 1 or not gamma.in_complex(K) or not gamma.is_cycle():
        raise DomainError(f"gamma must be an {n - 1}-cycle of K")
    idx = K.index(n - 1)
    bounded = [r for r in range(len(R.regions)) if r != R.unbounded]
    cols = [{idx[s]: c for s, c in R.regions[r].xi.coeffs.items()} for r in bounded]
    for t in K.of_dim(n):
        cols.append({idx[s]: c for s, c in boundary_chain(t, Q).coeffs.items()})
    x = solve(cols, {idx[s]: c for s, c in gamma.coeffs.items()}, Q)
    if x is None:
        raise RuntimeError("region cycles do not span the homology class; invalid decomposition")
    alpha = [Fraction(0)] * len(R.regions)
    for i, r in enumerate(bounded):
        alpha[r] = x.get(i, Fraction(0))
    return alpha


def _bfs(adj, src):
    dist = {src: 0}
    prev = {}
    q = deque([src])
    while q:
        u = q.popleft()
        for w, s in adj.get(u, ()):
            if w not in dist:
                dist[w] = dist[u] + 1
                prev[w] = (u, s)
                q.append(w)
    return dist, prev


def mincut_embedded(E, gamma, R=None):
    """Minimum 1-cut (more generally (n-1)-cut) via shortest paths in the extended dual graph."""
    if R is None:
        R = complement_regions(E)
    alpha = express_in_region_basis(E, R, gamma)
    G = extended_dual_graph(E, R)
    if len(set(alpha)) == 1:
        raise DomainError("gamma is null-homologous; it has no cut")
    adj = G.adjacency()
    best = None
    for r in range(len(R.regions)):
        v = G.region_vertex(r)
        dist, prev = _bfs(adj, v)
        for r2 in range(r + 1, len(R.regions)):
            if alpha[r2] == alpha[r]:
                continue
            w = G.region_vertex(r2)
            if w not in dist:
                continue
            key = (dist[w], v, w)
            if best is None or key < best[0]:
                path = []
                x = w
                while x != v:
                    x, s = prev[x]
                    path.append(s)
                best = (key, path)
    if best is None:
        raise DomainError("no dual path separates regions with different coefficients")
    witness = tuple(sorted(best[1]))
    return CutCertificate(len(witness), witness, E.n - 1, True, len(witness))
