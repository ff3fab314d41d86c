import math
from itertools import combinations, product

import pytest

from advrobust.complex import boundary_chain
from advrobust.errors import DomainError, MalformedInputError
from advrobust.field import Q
from advrobust.gadgets import (X3CInstance, block_disk3, block_double_collar, block_main, build_Lu,
                               build_x3c_complex, ceil_log3, check_reduction, exact_cover,
                               fundamental_chain, gadget_lower_bound, piece_dual_distance,
                               recipe_cut, ring_edges)
from advrobust.homcut import CutOracle, is_cut, mhc_bruteforce

SOLVABLE_3 = X3CInstance([1, 2, 3], [[1, 2, 3]])
SOLVABLE_6 = X3CInstance([1, 2, 3, 4, 5, 6], [[1, 2, 3], [4, 5, 6], [1, 2, 4]])
UNSOLVABLE_6 = X3CInstance([1, 2, 3, 4, 5, 6], [[1, 2, 3], [1, 4, 5], [2, 4, 6], [3, 5, 6]])


def internal_edges(gc):
    ring = gc.ring_edge_set()
    return {e for e in gc.complex.of_dim(1) if e not in ring}


def test_ceil_log3():
    assert [ceil_log3(k) for k in (1, 2, 3, 4, 9, 10, 27, 28)] == [0, 1, 1, 2, 2, 3, 3, 4]


def test_instance_validation():
    assert SOLVABLE_6.k == 2 and SOLVABLE_6.c == 8 and SOLVABLE_6.cut_bound == 51
    assert SOLVABLE_3.k == 1 and SOLVABLE_3.c == 3 and SOLVABLE_3.cut_bound == 11
    with pytest.raises(MalformedInputError):
        X3CInstance([1, 2], [[1, 2, 3]])
    with pytest.raises(MalformedInputError):
        X3CInstance([1, 2, 3], [[1, 2, 2]])
    with pytest.raises(MalformedInputError):
        X3CInstance([1, 2, 3], [[1, 2, 4]])
    with pytest.raises(MalformedInputError):
        X3CInstance([1, 1, 2], [])
    inst = X3CInstance.from_json({"universe": [1, 2, 3], "sets": [[3, 2, 1]]})
    assert inst.sets == ((1, 2, 3),)


def test_exact_cover():
    assert exact_cover(SOLVABLE_3) == (0,)
    assert tuple(exact_cover(SOLVABLE_6)) == (0, 1)
    assert exact_cover(UNSOLVABLE_6) is None
    assert exact_cover(X3CInstance([1, 2, 3, 4, 5, 6], [[1, 2, 3], [3, 4, 5]])) is None


@pytest.mark.parametrize("make,counts,chi,cut", [
    (block_disk3, (6, 12, 4), -2, 2),
    (block_double_collar, (9, 21, 12), 0, 5),
])
def test_small_block_cuts(make, counts, chi, cut):
    gc = make()
    K = gc.complex
    assert (K.count(0), K.count(1), K.count(2)) == counts
    assert K.euler_characteristic() == chi
    cert = mhc_bruteforce(K, gc.gamma, 1)
    assert cert.size == cut and cert.exhaustive


def test_main_block_cut_is_six():
    gc = block_main()
    K = gc.complex
    assert (K.count(0), K.count(1), K.count(2)) == (12, 30, 16)
    assert mhc_bruteforce(K, gc.gamma, 1).size == 6


def test_single_set_surface_cut_is_five():
    gc = build_Lu(1, [0], 1)
    assert mhc_bruteforce(gc.complex, gc.gamma, 1).size == 5
    assert piece_dual_distance(gc, 1, set(ring_edges(gc.rings[1])[:1]) | set(ring_edges(gc.rings[("S", 0)])[:1])) == 3


@pytest.mark.parametrize("sets,k,expected", [([0, 1], 2, 10), ([0, 1, 2], 3, 10), ([0], 3, 10), ([0, 1, 2, 3], 4, 15)])
def test_surface_dual_bound(sets, k, expected):
    gc = build_Lu("u", sets, k)
    outer = ring_edges(gc.rings["u"])
    best = math.inf
    for s in sets:
        for e, f in product(outer, ring_edges(gc.rings[("S", s)])):
            best = min(best, 2 + piece_dual_distance(gc, "u", {e, f}))
    assert best == expected == 5 * ceil_log3(k) + 5


def test_build_Lu_rejects_bad_set_counts():
    with pytest.raises(DomainError):
        build_Lu(1, [], 1)
    with pytest.raises(DomainError):
        build_Lu(1, [0, 1, 2], 2)


@pytest.mark.parametrize("make", [block_double_collar, lambda: build_Lu(1, [0], 1), block_disk3])
def test_dual_distance_matches_constrained_search(make):
    gc = make()
    u = next(iter(gc.pieces))
    oracle = CutOracle(gc.complex, gc.gamma, 1, Q)
    inner = internal_edges(gc)
    ring = sorted(gc.ring_edge_set())
    for r in range(0, 3):
        for D in combinations(ring, r):
            d = piece_dual_distance(gc, u, set(D))
            cert = oracle.search(max_size=len(D) + 4, forced=D, allowed=inner | set(D))
            if cert.found:
                assert cert.size - len(D) == d
            else:
                assert d > 4


def test_collar_needs_three_inner_edges_for_any_ring_pair():
    gc = block_double_collar()
    oracle = CutOracle(gc.complex, gc.gamma, 1, Q)
    inner = internal_edges(gc)
    for e, f in product(ring_edges(gc.rings["outer"]), ring_edges(gc.rings["inner"])):
        cert = oracle.search(forced=(e, f), allowed=inner | {e, f})
        assert cert.size == 5


def test_main_block_with_prescribed_outer_edge():
    gc = block_main()
    oracle = CutOracle(gc.complex, gc.gamma, 1, Q)
    for e in ring_edges(gc.rings["outer"]):
        assert oracle.search(forced=(e,)).size == 6


def ring_signs(gc, u):
    """Coefficient of each labelled ring in the boundary of the oriented surface."""
    bd = fundamental_chain(gc.pieces[u]).boundary()
    rest, out = bd, []
    for lab in gc.labels[u]:
        r = gc.boundaries[lab]
        e = r.support()[0]
        lam = bd[e] / r[e]
        out.append(lam)
        rest = rest - r.scale(lam)
    assert rest.is_zero()
    return out


@pytest.mark.parametrize("k,n", [(1, 1), (2, 2), (3, 1), (3, 3), (9, 7), (10, 10)])
def test_surface_boundary_is_outer_minus_set_rings(k, n):
    gc = build_Lu("u", range(n), k)
    assert ring_signs(gc, "u") == [1] + [-1] * n


def test_fundamental_chain_rejects_disconnected():
    with pytest.raises(DomainError):
        fundamental_chain([(0, 1, 2), (3, 4, 5)])


def test_glued_complex_small_instance():
    gc = build_x3c_complex(SOLVABLE_3)
    K = gc.complex
    assert (K.count(1), K.count(2)) == (51, 36)
    assert gc.labels[1] == ("u", ("S", 0))
    cut = recipe_cut(gc, (0,))
    assert len(cut) == 11
    assert is_cut(K, gc.gamma, cut, 1, Q)
    assert gadget_lower_bound(gc).lower_bound == 11


@pytest.mark.parametrize("inst", [SOLVABLE_3, SOLVABLE_6])
def test_solvable_instances_have_cut_within_bound(inst):
    rep = check_reduction(inst)
    assert not rep.gamma_trivial
    assert rep.cover is not None and rep.cut_verified and rep.cut_within_bound
    assert rep.lower_bound == len(rep.cut) == rep.bound


def test_unsolvable_instance_has_no_cut_within_bound():
    rep = check_reduction(UNSOLVABLE_6)
    assert not rep.gamma_trivial and rep.cover is None
    assert rep.lower_bound > rep.bound


def test_trivial_gamma_reported():
    # the set indicators do not span the all-ones vector, so gamma bounds
    inst = X3CInstance([1, 2, 3, 4, 5, 6], [[1, 2, 3], [3, 4, 5], [1, 5, 6]])
    rep = check_reduction(inst)
    assert rep.gamma_trivial and rep.cover is None
    assert rep.cut is None and rep.lower_bound == math.inf


def test_gamma_is_outer_ring_cycle():
    gc = build_x3c_complex(SOLVABLE_3)
    assert gc.gamma.is_cycle()
    assert set(gc.gamma.support()) == set(ring_edges(gc.rings["u"]))
