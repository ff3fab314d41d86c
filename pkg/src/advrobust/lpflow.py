"""Cocycle certificates for edge cuts, the l1 relaxation and its max-flow dual.

For a 1-cycle c, a cochain phi with d*phi = 0 and phi(c) = 1 has an edge cut
as support; minimising |supp phi| gives the minimum cut mc, minimising
||phi||_1 gives the relaxation value, and the LP dual maximises r subject to
||dB + r c||_inf <= 1 over 2-chains B.
"""
import math
from dataclasses import dataclass
from fractions import Fraction

import numpy as np
from scipy.optimize import linprog

from .complex import boundary_chain, facets
from .corpus import example_6_3
from .embedded import EmbeddedComplex
from .errors import DomainError
from .field import Q
from .homcut import CutOracle, is_cut, mhc_bruteforce
from .linalg import solve
from .persistence import is_boundary

PRIMAL_TOL = 1e-9
GAP_TOL = 1e-6
SUPPORT_TOL = 1e-7


@dataclass(frozen=True)
class Cochain:
    dim: int
    values: dict

    def __call__(self, chain):
        return sum(self.values.get(s, 0) * c for s, c in chain.coeffs.items())

    def support(self, threshold=0):
        return sorted(s for s, v in self.values.items() if abs(v) > threshold)

    def l1(self):
        return sum(abs(v) for v in self.values.values())


def coboundary(K, phi, p=None):
    """(d* phi)(tau) = phi(d tau) for every (p+1)-simplex tau."""
    p = phi.dim if p is None else p
    if phi.dim != p:
        raise DomainError(f"cochain has dimension {phi.dim}, expected {p}")
    out = {}
    for t in K.of_dim(p + 1):
        v = sum((-1) ** i * phi.values.get(fc, 0) for i, fc in enumerate(facets(t)))
        if v != 0:
            out[t] = v
    return Cochain(p + 1, out)


def _check_cycle(K, c):
    if c.field is not Q:
        c = c.to_field(Q)
    if c.dim != 1 or not c.in_complex(K) or not c.is_cycle():
        raise DomainError("c must be a 1-cycle of K")
    if c.is_zero() or is_boundary(K, c, Q):
        raise DomainError("c is a boundary; phi(c) = 1 is infeasible for a cocycle")
    return c


def cut_support_cocycle(K, C, c):
    """Cocycle phi with supp(phi) = C and phi(c) = 1 for a minimal cut C.

    For each e in C a cycle c_e homologous to c avoiding C - {e} is found by
    exact elimination; phi(e) is the reciprocal of c_e's coefficient on e.
    """
    c = _check_cycle(K, c)
    C = sorted({tuple(sorted(e)) for e in C})
    oracle = CutOracle(K, c, 1, Q)
    if not oracle.is_cut(C):
        raise DomainError("C is not a cut for [c]")
    for e in C:
        if oracle.is_cut([x for x in C if x != e]):
            raise DomainError(f"C is not minimal: removing {list(e)} leaves a cut")
    tris = K.of_dim(2)
    bnd = [boundary_chain(t, Q) for t in tris]
    values = {}
    for e in C:
        rest = [x for x in C if x != e]
        ridx = {x: i for i, x in enumerate(rest)}
        cols = [{ridx[s]: v for s, v in b.coeffs.items() if s in ridx} for b in bnd]
        target = {ridx[s]: -c[s] for s in rest if c[s] != 0}
        x = solve(cols, target, Q)
        lam = c[e] + sum(x.get(j, 0) * bnd[j][e] for j in range(len(tris)))
        values[e] = Fraction(1) / lam
    phi = Cochain(1, values)
    if coboundary(K, phi).values or phi(c) != 1:
        raise RuntimeError("cocycle construction failed its postconditions")
    return phi


def _matrices(K, c):
    edges = K.of_dim(1)
    tris = K.of_dim(2)
    eidx = K.index(1)
    D = np.zeros((len(edges), len(tris)))
    for j, t in enumerate(tris):
        for i, fc in enumerate(facets(t)):
            D[eidx[fc], j] = (-1) ** i
    cv = np.zeros(len(edges))
    for s, v in c.coeffs.items():
        cv[eidx[s]] = float(v)
    return edges, tris, D, cv


_HIGHS = {"primal_feasibility_tolerance": 1e-10, "dual_feasibility_tolerance": 1e-10}


def solve_mincut_l1(K, c):
    """LP (P): min ||phi||_1 s.t. d* phi = 0, phi(c) = 1.  Returns (phi, value)."""
    c = _check_cycle(K, c)
    edges, tris, D, cv = _matrices(K, c)
    m = len(edges)
    A = np.vstack([np.hstack([D.T, -D.T]), np.hstack([cv, -cv])[None, :]])
    b = np.zeros(A.shape[0])
    b[-1] = 1.0
    res = linprog(np.ones(2 * m), A_eq=A, b_eq=b, bounds=(0, None), method="highs", options=_HIGHS)
    if res.status != 0:
        raise DomainError(f"LP (P) failed: {res.message}")
    phi = res.x[:m] - res.x[m:]
    resid = max(np.max(np.abs(D.T @ phi), initial=0.0), abs(cv @ phi - 1.0))
    if resid > PRIMAL_TOL:
        raise RuntimeError(f"LP (P) solution violates constraints by {resid:.3g}")
    values = {e: float(v) for e, v in zip(edges, phi) if v != 0}
    return Cochain(1, values), float(np.abs(phi).sum())


def solve_maxflow(K, c):
    """LP (D): max r s.t. ||dB + r c||_inf <= 1.  Returns ((B, r), r)."""
    c = _check_cycle(K, c)
    edges, tris, D, cv = _matrices(K, c)
    T = len(tris)
    M = np.hstack([D, cv[:, None]])
    A = np.vstack([M, -M])
    b = np.ones(A.shape[0])
    obj = np.zeros(T + 1)
    obj[-1] = -1.0
    res = linprog(obj, A_ub=A, b_ub=b, bounds=(None, None), method="highs", options=_HIGHS)
    if res.status != 0:
        raise DomainError(f"LP (D) failed: {res.message}")
    B = {t: float(v) for t, v in zip(tris, res.x[:T]) if v != 0}
    r = float(res.x[-1])
    return (B, r), r


@dataclass(frozen=True)
class LpReport:
    mc: int                      # None when brute force exceeded its bound
    mc_tilde: float
    mf: float
    phi: Cochain
    flow: tuple                  # (B as dict triangle -> value, r)
    gap: bool                    # mc_tilde < mc; None when mc is unknown
    support_size: int            # |supp phi_LP|, an upper bound for mc
    support_is_cut: bool
    lower_bound_candidate: int   # ceil(mc_tilde)
    cut_cocycle_l1: float        # ||phi_C||_1 of the cocycle of the minimum cut found
    condition_holds: bool        # ||phi_C||_1 <= ||phi_C||_0; None when mc is unknown
    min_cut: tuple
    support_threshold: float = SUPPORT_TOL
    duality_tolerance: float = GAP_TOL

    @property
    def duality_gap(self):
        return abs(self.mc_tilde - self.mf)


def duality_report(K, c, bruteforce_bound=None):
    """Minimum cut, its l1 relaxation, and the max-flow dual side by side."""
    c = _check_cycle(K, c)
    phi, mct = solve_mincut_l1(K, c)
    flow, mf = solve_maxflow(K, c)
    cert = mhc_bruteforce(K, c, 1, Q, bruteforce_bound)
    supp = phi.support(SUPPORT_TOL)
    supp_cut = is_cut(K, c, supp, 1, Q) if supp else False
    mc = cert.size if cert.found else None
    if mc is not None:
        phic = cut_support_cocycle(K, cert.witness, c)
        l1 = float(phic.l1())
        cond = phic.l1() <= len(cert.witness)
        gap = mct < mc - GAP_TOL
    else:
        l1 = cond = gap = None
    return LpReport(mc, mct, mf, phi, flow, gap, len(supp), supp_cut,
                    math.ceil(mct - GAP_TOL), l1, cond, cert.witness)


def build_example_6_3():
    """The duality-gap instance as (EmbeddedComplex, c); min cut 3, LP value 3/2."""
    K, coords, c = example_6_3()
    return EmbeddedComplex(K, coords), c
