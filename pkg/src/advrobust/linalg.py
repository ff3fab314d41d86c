"""Exact sparse linear algebra over GF(2) and the rationals.

Two vector backends share one interface: GF(2) vectors are Python ints used
as bitmasks, rational vectors are dicts mapping index -> nonzero Fraction.
Callers pass and receive dicts; the backends are internal.
"""
from .field import GF2


class BitOps:
    field = GF2
    zero = 0

    @staticmethod
    def make(d):
        v = 0
        for i, c in d.items():
            if c % 2:
                v ^= 1 << i
        return v

    @staticmethod
    def unit(i):
        return 1 << i

    @staticmethod
    def to_dict(v):
        out = {}
        while v:
            low = v & -v
            out[low.bit_length() - 1] = 1
            v ^= low
        return out

    @staticmethod
    def low(v):
        return v.bit_length() - 1

    @staticmethod
    def coef(v, w, p):
        return 1

    @staticmethod
    def axpy(v, c, w):
        return v ^ w

    @staticmethod
    def get(v, i):
        return (v >> i) & 1


class DictOps:
    zero = None

    def __init__(self, field):
        self.field = field

    @staticmethod
    def make(d):
        return {i: c for i, c in d.items() if c != 0}

    def unit(self, i):
        return {i: self.field.one}

    @staticmethod
    def to_dict(v):
        return dict(v) if v else {}

    @staticmethod
    def low(v):
        return max(v) if v else -1

    def coef(self, v, w, p):
        f = self.field
        return f.neg(f.div(v[p], w[p]))

    def axpy(self, v, c, w):
        f = self.field
        out = dict(v) if v else {}
        for i, wi in w.items():
            x = f.add(out.get(i, f.zero), f.mul(c, wi))
            if f.is_zero(x):
                out.pop(i, None)
            else:
                out[i] = x
        return out

    def get(self, v, i):
        return v.get(i, self.field.zero) if v else self.field.zero


def ops_for(field):
    return BitOps if field is GF2 else DictOps(field)


class EchelonBasis:
    """Incrementally built basis in echelon form (pivot = largest index).

    With ``track=True`` every stored vector remembers its expression as a
    combination of the inserted vectors' tags.  Vectors are backend-native;
    use ``ops.make`` / ``ops.to_dict`` to convert.
    """

    def __init__(self, field, track=False):
        self.ops = ops_for(field)
        self.f = field
        self.track = track
        self.rows = {}

    def __len__(self):
        return len(self.rows)

    @property
    def rank(self):
        return len(self.rows)

    def reduce(self, v, tag=None):
        """Return (remainder, comb) with remainder = v + sum_j comb[j] * inserted_j."""
        ops = self.ops
        rows = self.rows
        comb = tag if tag is not None else (ops.make({}) if self.track else None)
        while v:
            p = ops.low(v)
            b = rows.get(p)
            if b is None:
                break
            vec, btag = b
            c = ops.coef(v, vec, p)
            v = ops.axpy(v, c, vec)
            if self.track:
                comb = ops.axpy(comb, c, btag)
        return v, comb

    def add(self, v, tag=None):
        """Insert v; return True iff it was independent of the current span."""
        r, comb = self.reduce(v, tag)
        if not r:
            return False
        self.rows[self.ops.low(r)] = (r, comb)
        return True

    def contains(self, v):
        return not self.reduce(v)[0]


def rank(vectors, f):
    """Rank of a list of dict vectors."""
    b = EchelonBasis(f)
    for v in vectors:
        b.add(b.ops.make(v))
    return b.rank


def in_span(vectors, target, f):
    b = EchelonBasis(f)
    for v in vectors:
        b.add(b.ops.make(v))
    return b.contains(b.ops.make(target))


def kernel_basis(columns, f):
    """Basis of {x : sum_j x_j columns[j] = 0}, as dicts over column indices."""
    b = EchelonBasis(f, track=True)
    ops = b.ops
    out = []
    for j, col in enumerate(columns):
        r, comb = b.reduce(ops.make(col), ops.unit(j))
        if r:
            b.rows[ops.low(r)] = (r, comb)
        else:
            out.append(ops.to_dict(comb))
    return out


def solve(columns, target, f):
    """Some x with sum_j x_j columns[j] = target, or None if inconsistent."""
    b = EchelonBasis(f, track=True)
    ops = b.ops
    for j, col in enumerate(columns):
        b.add(ops.make(col), ops.unit(j))
    r, comb = b.reduce(ops.make(target), ops.make({}))
    if r:
        return None
    return {j: f.neg(c) for j, c in ops.to_dict(comb).items()}
