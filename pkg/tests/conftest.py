import random
from itertools import combinations

from hypothesis import strategies as st

from advrobust.complex import Filtration, build_complex, facets


def random_complex(rng, nv=6, ne=9, nt=4):
    """Complex on nv vertices with up to ne random edges and nt triangles among them."""
    pairs = list(combinations(range(nv), 2))
    edges = rng.sample(pairs, min(ne, len(pairs)))
    es = set(edges)
    tris = [t for t in combinations(range(nv), 3) if all(e in es for e in combinations(t, 2))]
    tris = rng.sample(tris, min(nt, len(tris)))
    return build_complex([(v,) for v in range(nv)] + edges + tris)


def random_order(rng, K):
    """Uniformly random linear extension of the face order."""
    left, done, order = set(K), set(), []
    while left:
        ready = sorted(s for s in left if len(s) == 1 or all(f in done for f in facets(s)))
        s = rng.choice(ready)
        order.append(s)
        done.add(s)
        left.remove(s)
    return Filtration(order)


def random_filtration(rng, nv=6, ne=9, nt=4):
    return random_order(rng, random_complex(rng, nv, ne, nt))


@st.composite
def complexes(draw, max_vertices=7):
    nv = draw(st.integers(1, max_vertices))
    seed = draw(st.integers(0, 2**32 - 1))
    rng = random.Random(seed)
    pairs = nv * (nv - 1) // 2
    ne = draw(st.integers(0, pairs))
    nt = draw(st.integers(0, 6))
    return random_complex(rng, nv, ne, nt)


@st.composite
def filtrations(draw, max_vertices=6):
    K = draw(complexes(max_vertices))
    seed = draw(st.integers(0, 2**32 - 1))
    return random_order(random.Random(seed), K)
