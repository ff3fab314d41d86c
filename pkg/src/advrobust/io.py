"""JSON and CSV formats for complexes, filtrations, cycles, point clouds and reports.

Complex JSON:
    {"vertices": n, "coords": {"v": ["x", "y"]} (optional),
     "simplices": [{"v": [ids], "grade": g (optional)}]}
Cycle JSON:
    {"dim": p, "terms": [{"v": [ids], "coeff": "num/den"}]}
    (an unsorted vertex list denotes the correspondingly oriented simplex)
Rationals are written as normalised "num/den" strings ("3" when integral).
"""
import csv
import io as _io
import json
import math
from fractions import Fraction

import numpy as np

from .complex import Chain, Filtration, SimplicialComplex, make_simplex, sort_key
from .embedded import to_rational
from .errors import MalformedInputError
from .field import get_field
from .rips import MetricData


def rational_str(x):
    x = Fraction(x)
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def parse_rational(x):
    if isinstance(x, bool):
        raise MalformedInputError(f"not a number: {x!r}")
    try:
        return to_rational(x)
    except (ValueError, TypeError, ZeroDivisionError) as exc:
        raise MalformedInputError(f"not a rational number: {x!r}") from exc


def _number(x):
    """JSON-safe grade: ints and floats pass, infinities become null."""
    if x is None or (isinstance(x, float) and math.isinf(x)):
        return None
    if isinstance(x, Fraction):
        return rational_str(x)
    return x


def load_json_text(text):
    if not text.strip():
        raise MalformedInputError("empty input")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MalformedInputError(f"invalid JSON: {exc}") from exc


def read_json(path):
    with open(path, encoding="utf-8") as fh:
        return load_json_text(fh.read())


def dumps(obj):
    """Canonical JSON text: sorted keys, compact separators, trailing newline."""
    return json.dumps(obj, sort_keys=True, separators=(",", ":"), allow_nan=False) + "\n"


def _parse_grade(g):
    if g is None:
        return None
    if isinstance(g, bool) or not isinstance(g, (int, float, str)):
        raise MalformedInputError(f"bad grade {g!r}")
    try:
        return float(g) if not isinstance(g, int) else g
    except ValueError as exc:
        raise MalformedInputError(f"bad grade {g!r}") from exc


def parse_filtration(data):
    """Complex JSON -> (Filtration, coords or None, n_vertices).

    The filtration order is the file order; grades, when given, must then
    be non-decreasing (checked by validate_filtration, not here).
    """
    if not isinstance(data, dict) or not isinstance(data.get("simplices"), list):
        raise MalformedInputError("complex JSON needs a 'simplices' list")
    order, grades = [], []
    for item in data["simplices"]:
        if isinstance(item, list):
            item = {"v": item}
        if not isinstance(item, dict) or not isinstance(item.get("v"), list):
            raise MalformedInputError(f"bad simplex entry {item!r}")
        vs = item["v"]
        if not vs or not all(isinstance(v, int) and not isinstance(v, bool) and v >= 0 for v in vs):
            raise MalformedInputError(f"simplex {vs!r} must list non-negative integer vertices")
        order.append(make_simplex(vs))
        grades.append(_parse_grade(item.get("grade")))
    n = data.get("vertices")
    top = max((max(s) for s in order), default=-1) + 1
    if n is None:
        n = top
    if not isinstance(n, int) or isinstance(n, bool) or n < top:
        raise MalformedInputError("'vertices' must be an integer covering every vertex id")
    if all(g is None for g in grades):
        f = Filtration(order)
    elif any(g is None for g in grades):
        raise MalformedInputError("either every simplex has a grade or none does")
    else:
        f = Filtration(order, grades)
    coords = None
    if data.get("coords") is not None:
        raw = data["coords"]
        if isinstance(raw, list):
            raw = {str(i): c for i, c in enumerate(raw)}
        if not isinstance(raw, dict):
            raise MalformedInputError("'coords' must map vertex ids to coordinate lists")
        coords = {}
        for key, c in raw.items():
            try:
                v = int(key)
            except ValueError as exc:
                raise MalformedInputError(f"bad vertex id {key!r}") from exc
            if not isinstance(c, list):
                raise MalformedInputError(f"coordinates of {v} must be a list")
            coords[v] = tuple(parse_rational(x) for x in c)
    return f, coords, n


def parse_complex(data):
    f, coords, n = parse_filtration(data)
    return SimplicialComplex(f.order, n), coords


def complex_to_json(K, coords=None):
    """Canonical form: simplices sorted by dimension then lexicographically."""
    out = {"vertices": K.n_vertices,
           "simplices": [{"v": list(s)} for s in sorted(K, key=sort_key)]}
    if coords is not None:
        out["coords"] = {str(v): [rational_str(x) for x in coords[v]] for v in sorted(coords)}
    return out


def filtration_to_json(f, n_vertices=None, coords=None):
    n = n_vertices if n_vertices is not None else max((max(s) for s in f.order), default=-1) + 1
    simplices = []
    for i, s in enumerate(f.order):
        item = {"v": list(s)}
        if f.grades is not None:
            item["grade"] = _number(f.grade(i))
        simplices.append(item)
    out = {"vertices": n, "simplices": simplices}
    if coords is not None:
        out["coords"] = {str(v): [rational_str(x) for x in coords[v]] for v in sorted(coords)}
    return out


def canonicalize(text):
    """Parse complex JSON text and re-emit its canonical form."""
    K, coords = parse_complex(load_json_text(text))
    return dumps(complex_to_json(K, coords))


def parse_chain(data, field):
    F = get_field(field)
    if not isinstance(data, dict) or not isinstance(data.get("terms"), list):
        raise MalformedInputError("cycle JSON needs 'dim' and 'terms'")
    p = data.get("dim")
    if not isinstance(p, int) or isinstance(p, bool) or p < 0:
        raise MalformedInputError("'dim' must be a non-negative integer")
    terms = []
    for t in data["terms"]:
        if not isinstance(t, dict) or not isinstance(t.get("v"), list):
            raise MalformedInputError(f"bad term {t!r}")
        s = make_simplex(t["v"])
        if len(s) != p + 1 or len(t["v"]) != p + 1:
            raise MalformedInputError(f"term {t['v']} is not a {p}-simplex")
        coeff = F.coerce(parse_rational(t.get("coeff", 1)))
        if _odd_permutation(t["v"]):
            coeff = F.neg(coeff)
        terms.append((s, coeff))
    return Chain.from_terms(F, p, terms)


def _odd_permutation(vs):
    """True when listing the vertices as given reverses the sorted orientation."""
    inv = sum(1 for i in range(len(vs)) for j in range(i + 1, len(vs)) if vs[i] > vs[j])
    return inv % 2 == 1


def chain_to_json(chain):
    return {"dim": chain.dim,
            "terms": [{"v": list(s), "coeff": rational_str(Fraction(chain.coeffs[s]))}
                      for s in sorted(chain.coeffs, key=sort_key)]}


def read_csv_matrix(path):
    with open(path, newline="", encoding="utf-8") as fh:
        text = fh.read()
    return parse_csv_matrix(text)


def parse_csv_matrix(text):
    rows = [r for r in csv.reader(_io.StringIO(text)) if r and any(c.strip() for c in r)]
    if not rows:
        raise MalformedInputError("empty CSV input")
    try:
        M = [[float(c) for c in r] for r in rows]
    except ValueError as exc:
        raise MalformedInputError(f"non-numeric CSV entry: {exc}") from exc
    if len({len(r) for r in M}) != 1:
        raise MalformedInputError("CSV rows have different lengths")
    A = np.array(M, dtype=float)
    if not np.all(np.isfinite(A)):
        raise MalformedInputError("CSV contains non-finite values")
    return A


def metric_from_csv(path, kind="points"):
    A = read_csv_matrix(path)
    if kind == "points":
        return MetricData.from_points(A)
    if kind == "distances":
        return MetricData(A)
    raise MalformedInputError(f"unknown CSV kind {kind!r}")


def bar_to_json(bar):
    return {
        "dim": bar.dim,
        "birth_index": bar.birth_index,
        "death_index": bar.death_index if bar.finite else None,
        "birth_simplex": list(bar.birth_simplex),
        "death_simplex": list(bar.death_simplex) if bar.finite else None,
        "birth_grade": _number(bar.birth_grade),
        "death_grade": _number(bar.death_grade),
        "length": _number(bar.length),
    }


def cert_to_json(cert):
    return {
        "size": cert.size if cert.found else None,
        "witness": [list(c) for c in cert.witness] if cert.found else None,
        "s": cert.s,
        "exhaustive": cert.exhaustive,
        "lower_bound": _number(cert.lower_bound),
    }
