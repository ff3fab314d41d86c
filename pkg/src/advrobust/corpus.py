"""Named example complexes used by tests, acceptance runs and the CLI."""
from fractions import Fraction

from .complex import build_complex, cycle_from_walk
from .field import Q

# two-hole grid: vertices (x, y) for 0 <= x <= 5, 0 <= y <= 3
GRID_W, GRID_H = 5, 3
GRID_HOLES = {(1, 1), (3, 1)}   # lower-left corners of the two empty unit squares


def _grid_vertex(x, y, height=GRID_H):
    return x * (height + 1) + y


def _grid(width, height, holes, flipped=()):
    """Triangulated rectangle with empty unit squares.

    Each filled square [x, x+1] x [y, y+1] gets the diagonal (x,y)-(x+1,y+1),
    or (x,y+1)-(x+1,y) when its corner is listed in ``flipped``.
    """
    def v(x, y):
        return _grid_vertex(x, y, height)

    def filled(x, y):
        return 0 <= x < width and 0 <= y < height and (x, y) not in holes

    simplices = []
    for x in range(width + 1):
        for y in range(height + 1):
            if x < width and (filled(x, y) or filled(x, y - 1)):
                simplices.append([v(x, y), v(x + 1, y)])
            if y < height and (filled(x, y) or filled(x - 1, y)):
                simplices.append([v(x, y), v(x, y + 1)])
    for x in range(width):
        for y in range(height):
            if (x, y) in holes:
                continue
            a, b, c, d = v(x, y), v(x + 1, y), v(x + 1, y + 1), v(x, y + 1)
            if (x, y) in flipped:
                simplices += [[a, b, d], [b, c, d]]
            else:
                simplices += [[a, b, c], [a, c, d]]
    coords = {v(x, y): (Fraction(x), Fraction(y))
              for x in range(width + 1) for y in range(height + 1)}
    return build_complex(simplices), coords


def fig1_grid():
    """The two-hole grid: returns (K, coords, named cycles, named cut sets)."""
    K, coords = _grid(GRID_W, GRID_H, GRID_HOLES)
    v = _grid_vertex
    cycles = {
        "c_left": cycle_from_walk(Q, [v(1, 1), v(1, 2), v(2, 2), v(2, 1)]),
        "c_right": cycle_from_walk(Q, [v(3, 1), v(3, 2), v(4, 2), v(4, 1)]),
    }
    cuts = {
        "C1": [(v(1, 2), v(2, 3)), (v(1, 2), v(2, 2)), (v(1, 3), v(2, 3))],
        "C2": [(v(2, 1), v(2, 2)), (v(2, 1), v(3, 2)), (v(3, 1), v(3, 2))],
    }
    cuts = {k: [tuple(sorted(e)) for e in es] for k, es in cuts.items()}
    return K, coords, cycles, cuts


def grid_vertex(x, y):
    return _grid_vertex(x, y, GRID_H)


# duality-gap complex: a 6 x 3 grid with a unit hole on the left and a
# 2 x 1 hole on the right; the cycle passes twice through p = (5, 1).
EX63_W, EX63_H = 6, 3
EX63_HOLES = {(1, 1), (3, 1), (4, 1)}


def example_6_3():
    """Return (K, coords, c) for the duality-gap example."""
    K, coords = _grid(EX63_W, EX63_H, EX63_HOLES)

    def v(x, y):
        return _grid_vertex(x, y, EX63_H)

    outer = [v(5, 1), v(6, 1), v(6, 2), v(6, 3)]
    outer += [v(x, 3) for x in range(5, -1, -1)]
    outer += [v(0, 2), v(0, 1), v(0, 0)]
    outer += [v(x, 0) for x in range(1, 6)]
    hole = [v(5, 1), v(5, 2), v(4, 2), v(3, 2), v(3, 1), v(4, 1)]
    c = cycle_from_walk(Q, outer + [v(5, 1)]) + cycle_from_walk(Q, hole)
    return K, coords, c


def hollow_triangle():
    K = build_complex([[0, 1], [1, 2], [0, 2]])
    coords = {0: (Fraction(0), Fraction(0)), 1: (Fraction(1), Fraction(0)), 2: (Fraction(0), Fraction(1))}
    return K, coords, cycle_from_walk(Q, [0, 1, 2])


def annulus(n=4):
    """Square annulus: inner square of side 1 inside an outer square of side 3, n = 4 corners each.

    Returns (K, coords, inner boundary cycle, outer boundary cycle).
    """
    inner = [(1, 1), (2, 1), (2, 2), (1, 2)]
    outer = [(0, 0), (3, 0), (3, 3), (0, 3)]
    pts = inner + outer
    ids = {p: i for i, p in enumerate(pts)}
    tris = []
    for i in range(4):
        a, b = ids[inner[i]], ids[inner[(i + 1) % 4]]
        A, B = ids[outer[i]], ids[outer[(i + 1) % 4]]
        tris += [[a, b, A], [b, A, B]]
    K = build_complex(tris)
    coords = {ids[p]: (Fraction(p[0]), Fraction(p[1])) for p in pts}
    return K, coords, cycle_from_walk(Q, [0, 1, 2, 3]), cycle_from_walk(Q, [4, 5, 6, 7])


def thin_annulus():
    """Square with a triangular hole touching its bottom side at one vertex.

    The hole and the outside are separated by a single triangle at the
    touching vertex, so the shortest radial cut has 2 edges.
    Returns (K, coords, hole boundary cycle).
    """
    pts = {0: (0, 0), 1: (2, 0), 2: (2, 2), 3: (0, 2),       # outer corners
           4: (1, 0), 5: (Fraction(3, 2), 1), 6: (Fraction(1, 2), 1)}  # hole
    tris = [[0, 4, 6], [4, 1, 5], [1, 2, 5], [5, 2, 6], [6, 2, 3], [0, 6, 3]]
    K = build_complex(tris)
    coords = {v: (Fraction(x), Fraction(y)) for v, (x, y) in pts.items()}
    return K, coords, cycle_from_walk(Q, [4, 5, 6])
