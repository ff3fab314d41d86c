"""Homological cuts, minimum cuts and adversarial robustness of bars.

A set C of s-simplices is a cut for a p-cycle gamma when [gamma] leaves the
image of H_p(K - C) -> H_p(K).  Writing D for the p-simplices having a face
in C, this happens exactly when gamma restricted to D is not a combination
of boundaries of (p+1)-simplices restricted to D.  CutOracle uses that
restricted system for fast repeated queries; is_cut uses the literal
definition and serves as the reference.
"""
import math
from dataclasses import dataclass
from itertools import combinations

from .complex import Chain, SimplicialComplex, boundary_chain, delete_set, facets, make_simplex
from .errors import ConfigurationError, DomainError, UnsupportedError
from .field import GF2, Q, get_field
from .linalg import EchelonBasis
from .persistence import Bar, image_membership, induced_matching, reduce_columns


@dataclass(frozen=True)
class CutCertificate:
    size: float              # math.inf when no cut within the searched bound
    witness: tuple           # sorted s-simplices, or None
    s: int
    exhaustive: bool         # True iff no smaller cut exists
    lower_bound: int = 0     # every cut has at least this many simplices

    @property
    def found(self):
        return self.witness is not None


@dataclass(frozen=True)
class RobustnessVerdict:
    bar: Bar
    s: int
    k: int
    robust: bool
    min_cut: CutCertificate
    strategy: str


def _prepare(K, gamma, s, field):
    F = get_field(field)
    if gamma.field is not F:
        gamma = gamma.to_field(F)
    p = gamma.dim
    if not 0 <= s <= p:
        raise DomainError(f"cut degree s={s} must satisfy 0 <= s <= {p}")
    if not gamma.in_complex(K):
        raise DomainError("gamma is not supported in K")
    if not gamma.is_cycle():
        raise DomainError("gamma is not a cycle")
    if gamma.is_zero():
        raise DomainError("gamma is the zero class; it has no cut")
    return F, gamma


def _check_cut_set(K, C, s):
    C = sorted({make_simplex(c) for c in C})
    for c in C:
        if c not in K or len(c) - 1 != s:
            raise DomainError(f"{list(c)} is not an {s}-simplex of K")
    return C


def is_cut(K, gamma, C, s, field=Q):
    """Reference test: [gamma] is not in the image of H_p(K - C) -> H_p(K)."""
    F, gamma = _prepare(K, gamma, s, field)
    if not image_membership(K, K, gamma, gamma.dim, F) or \
            image_membership(K, SimplicialComplex(()), gamma, gamma.dim, F):
        raise DomainError("gamma is null-homologous; it has no cut")
    C = _check_cut_set(K, C, s)
    L = delete_set(K, C)
    return not image_membership(K, L, gamma, gamma.dim, F)


class CutOracle:
    """Fast cut queries for one (K, gamma, s) via incremental row elimination."""

    def __init__(self, K, gamma, s, field=Q):
        F, gamma = _prepare(K, gamma, s, field)
        self.K, self.gamma, self.s, self.field = K, gamma, s, F
        p = gamma.dim
        self.p = p
        pidx = K.index(p)
        cof = {}
        for j, t in enumerate(K.of_dim(p + 1)):
            for i, fc in enumerate(facets(t)):
                cof.setdefault(fc, {})[j + 1] = F.sign(i)
        basis = EchelonBasis(F)
        ops = basis.ops
        self.ops = ops
        # column 0 carries gamma, columns 1.. the (p+1)-simplices
        self.rows = {}
        for sig in K.of_dim(p):
            d = dict(cof.get(sig, {}))
            g = gamma[sig]
            if not F.is_zero(g):
                d[0] = g
            self.rows[sig] = ops.make(d)
        self.candidates = K.of_dim(s)
        if s == p:
            self.expand = {c: (c,) for c in self.candidates}
        else:
            ex = {c: [] for c in self.candidates}
            for sig in K.of_dim(p):
                for fc in combinations(sig, s + 1):
                    ex[fc].append(sig)
            self.expand = {c: tuple(v) for c, v in ex.items()}
        if not self._cut_rows(K.of_dim(p)):
            raise DomainError("gamma is null-homologous; it has no cut")

    def _cut_rows(self, D):
        basis = EchelonBasis(self.field)
        for sig in D:
            basis.add(self.rows[sig])
            if 0 in basis.rows:
                return True
        return False

    def is_cut(self, C):
        C = _check_cut_set(self.K, C, self.s)
        D = {sig for c in C for sig in self.expand[c]}
        return self._cut_rows(sorted(D))

    def search(self, max_size=None, forced=(), allowed=None):
        """Smallest cut in (cardinality, lexicographic) order, up to max_size.

        ``forced`` simplices are always included (they count towards the size);
        ``allowed`` restricts the remaining choices.
        """
        cands = [c for c in self.candidates if (allowed is None or c in allowed) and c not in forced]
        forced = tuple(sorted(forced))
        n = len(cands) + len(forced)
        if max_size is None:
            max_size = n
        max_size = min(max_size, n)
        F = self.field
        base = EchelonBasis(F)
        used = set()
        for c in forced:
            for sig in self.expand[c]:
                if sig not in used:
                    used.add(sig)
                    base.add(self.rows[sig])
        if 0 in base.rows:
            if len(forced) <= max_size:
                return CutCertificate(len(forced), forced, self.s, True, len(forced))
            return CutCertificate(math.inf, None, self.s, False, max_size + 1)
        ops = self.ops
        rows = self.rows
        expand = self.expand

        def extend(basis, used, c):
            b = EchelonBasis(F)
            b.rows = dict(basis.rows)
            u = set(used)
            for sig in expand[c]:
                if sig not in u:
                    u.add(sig)
                    b.add(rows[sig])
                    if 0 in b.rows:
                        return None, None
            return b, u

        def dfs(basis, used, start, need, chosen):
            if need == 1:
                for idx in range(start, len(cands)):
                    c = cands[idx]
                    ex = expand[c]
                    if len(ex) == 1:
                        sig = ex[0]
                        if sig in used:
                            continue
                        r, _ = basis.reduce(rows[sig])
                        if r and ops.low(r) == 0:
                            return chosen + (c,)
                    else:
                        b, _ = extend(basis, used, c)
                        if b is None:
                            return chosen + (c,)
                return None
            for idx in range(start, len(cands) - need + 1):
                c = cands[idx]
                b, u = extend(basis, used, c)
                if b is None:
                    continue  # a smaller cut exists; cannot happen when sizes ascend
                hit = dfs(b, u, idx + 1, need - 1, chosen + (c,))
                if hit is not None:
                    return hit
            return None

        for size in range(len(forced) + 1, max_size + 1):
            hit = dfs(base, used, 0, size - len(forced), ())
            if hit is not None:
                w = tuple(sorted(forced + hit))
                return CutCertificate(size, w, self.s, True, size)
        return CutCertificate(math.inf, None, self.s, False, max_size + 1)


def mhc_bruteforce(K, gamma, s, field=Q, max_size=None):
    """Minimum homological s-cut by enumeration (cardinality, then lexicographic)."""
    return CutOracle(K, gamma, s, field).search(max_size)


def _components(K):
    """Connected components of the 1-skeleton by union-find over the edge list.

    Returns (comp, comps): comp[v] is the component id of vertex v (-1 when
    v is not a vertex of K) and comps[i] lists the vertices of component i.
    """
    n = K.n_vertices
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b in K.of_dim(1):
        ra, rb = find(a), find(b)
        if ra != rb:
            parent[max(ra, rb)] = min(ra, rb)
    comp = [-1] * n
    comps = []
    for (v,) in K.of_dim(0):
        r = find(v)
        if comp[r] < 0:
            comp[r] = len(comps)
            comps.append([])
        comp[v] = comp[r]
        comps[comp[v]].append(v)
    return comp, comps


def h0_coefficients(K, gamma):
    """Collapse a 0-chain to one coefficient per component, keyed by the component's smallest vertex."""
    comp, comps = _components(K)
    F = gamma.field
    acc = {}
    for (v,), c in gamma.coeffs.items():
        if not 0 <= v < len(comp) or comp[v] < 0:
            raise DomainError(f"vertex {v} is not in K")
        rep = comps[comp[v]][0]
        acc[rep] = F.add(acc.get(rep, F.zero), c)
    return {r: c for r, c in acc.items() if not F.is_zero(c)}


def mhc_h0(K, coeffs, field=Q):
    """Minimum vertex cut for a 0-dimensional class: the smallest component carrying a nonzero coefficient."""
    F = get_field(field)
    comp, comps = _components(K)
    weight = {}
    for v, c in coeffs.items():
        v = int(v[0]) if isinstance(v, tuple) else int(v)
        if not 0 <= v < len(comp) or comp[v] < 0:
            raise DomainError(f"vertex {v} is not in K")
        cid = comp[v]
        weight[cid] = F.add(weight.get(cid, F.zero), F.coerce(c))
    live = [cid for cid, w in weight.items() if not F.is_zero(w)]
    if not live:
        raise DomainError("all coefficients are zero; the zero class has no cut")
    best = min(live, key=lambda cid: (len(comps[cid]), comps[cid][0]))
    witness = tuple(sorted((v,) for v in comps[best]))
    return CutCertificate(len(witness), witness, 0, True, len(witness))


def predeath_complex(f, bar, field=GF2):
    """K_B (the complex just before the bar's death) and the cycle d(tau_B)."""
    if not bar.finite:
        raise UnsupportedError("infinite bars have no death simplex")
    KB = f.prefix(bar.death_index - 1)
    return KB, boundary_chain(bar.death_simplex, field)


STRATEGIES = ("bruteforce", "h0", "embedded")


def robustness(f, bar, s, k, field=GF2, strategy="bruteforce", coords=None, max_size=None):
    """Decide k-robustness of a finite bar in degree s: robust iff min cut > k."""
    if strategy not in STRATEGIES:
        raise ConfigurationError(f"unknown strategy {strategy!r}")
    if not bar.finite:
        raise UnsupportedError("robustness of infinite bars is not supported")
    if not 0 <= s <= bar.dim:
        raise DomainError(f"cut degree s={s} must satisfy 0 <= s <= {bar.dim}")
    F = get_field(field)
    if strategy == "h0" and not (bar.dim == 0 and s == 0):
        raise ConfigurationError("strategy h0 needs a 0-dimensional bar and s = 0")
    if strategy == "embedded":
        if coords is None:
            raise ConfigurationError("strategy embedded needs vertex coordinates")
        if not (bar.dim == 1 and s == 1):
            raise ConfigurationError("strategy embedded needs a 1-dimensional bar and s = 1")
        if F is not Q:
            raise ConfigurationError("strategy embedded works over the rationals")
    if max_size is not None and max_size < k:
        raise ConfigurationError("max_size must be at least k to decide robustness")
    KB, gamma = predeath_complex(f, bar, F)
    if strategy == "bruteforce":
        cert = mhc_bruteforce(KB, gamma, s, F, max_size)
    elif strategy == "h0":
        cert = mhc_h0(KB, h0_coefficients(KB, gamma), F)
    else:
        from .embedded import EmbeddedComplex, mincut_embedded
        E = EmbeddedComplex(KB, {v: coords[v] for v in KB.vertices()})
        cert = mincut_embedded(E, gamma)
    robust = cert.size > k
    return RobustnessVerdict(bar, s, k, robust, cert, strategy)


def robustness_by_matching(f, bar, s, k, field=GF2):
    """Independent oracle: the bar stays matched after deleting any <= k s-simplices.

    Returns (robust, A) where A is a deletion set unmatching the bar, or None.
    """
    if not bar.finite:
        raise UnsupportedError("robustness of infinite bars is not supported")
    F = get_field(field)
    K = f.complex()
    kred = reduce_columns(f, F)
    cands = K.of_dim(s)
    for size in range(0, k + 1):
        for A in combinations(cands, size):
            L = delete_set(K, A)
            m = induced_matching(f.restrict(L), f, bar.dim, F, kred)
            if not m.is_matched(bar):
                return False, A
    return True, None
