"""Command-line front end.

JSON reports go to stdout (or --output); diagnostics go to stderr.
Exit codes: 0 success or robust, 1 not robust, 2 malformed input or domain
error, 3 invalid filtration, 4 unsupported request, 5 configuration or
geometry error.
"""
import logging
import math
import sys

import click

from . import gadgets, io
from .complex import Filtration, SimplicialComplex, sort_key, validate_filtration
from .corpus import example_6_3, fig1_grid, hollow_triangle
from .embedded import EmbeddedComplex, mincut_embedded
from .errors import (AdvRobustError, ConfigurationError, DomainError, GeometryError,
                     InvalidFiltrationError, MalformedInputError, UnsupportedError)
from .field import get_field
from .homcut import STRATEGIES, h0_coefficients, mhc_bruteforce, mhc_h0, robustness
from .lpflow import duality_report
from .persistence import reduce
from .rips import certify_bars, graded_bars, hausdorff_heuristic, rips_filtration

log = logging.getLogger("advrobust")

EXIT_CODES = [
    (InvalidFiltrationError, 3),
    (UnsupportedError, 4),
    (ConfigurationError, 5),
    (GeometryError, 5),
    (MalformedInputError, 2),
    (DomainError, 2),
    (AdvRobustError, 2),
]

EXAMPLES = ("fig1", "6.3", "gadget-min", "hollow-triangle", "closed-triangle")


class Source:
    """Resolved input: a filtration, optional coordinates and named cycles."""

    def __init__(self, f, n_vertices, coords=None, cycles=None, metric=None):
        self.f = f
        self.n_vertices = n_vertices
        self.coords = coords
        self.cycles = cycles or {}
        self.metric = metric

    @property
    def complex(self):
        return SimplicialComplex(self.f.order, self.n_vertices)


def _canonical_filtration(K):
    return Filtration(sorted(K, key=sort_key))


def load_example(name, field="q"):
    F = get_field(field)
    if name == "fig1":
        K, coords, cycles, _ = fig1_grid()
    elif name == "6.3":
        K, coords, c = example_6_3()
        cycles = {"c": c}
    elif name == "gadget-min":
        gc = gadgets.build_x3c_complex(gadgets.X3CInstance([1, 2, 3], [[1, 2, 3]]))
        K, coords, cycles = gc.complex, None, {"gamma": gc.gamma}
    elif name == "hollow-triangle":
        K, coords, c = hollow_triangle()
        cycles = {"c": c}
    elif name == "closed-triangle":
        f = Filtration([(0,), (1,), (2,), (0, 1), (0, 2), (1, 2), (0, 1, 2)])
        return Source(f, 3)
    else:
        raise MalformedInputError(f"unknown example {name!r}; choose from {', '.join(EXAMPLES)}")
    cycles = {k: v.to_field(F) for k, v in cycles.items()}
    return Source(_canonical_filtration(K), K.n_vertices, coords, cycles)


def _kind_of(path, kind):
    if kind != "auto":
        return kind
    return "points" if str(path).lower().endswith(".csv") else "complex"


def load_source(path, example, kind="auto", max_dim=2, field="q"):
    if (path is None) == (example is None):
        raise MalformedInputError("give exactly one of an input file or --example")
    if example is not None:
        return load_example(example, field)
    kind = _kind_of(path, kind)
    if kind in ("points", "distances"):
        X = io.metric_from_csv(path, kind)
        return Source(rips_filtration(X, max_dim), X.n, metric=X)
    data = io.read_json(path)
    f, coords, n = io.parse_filtration(data)
    cycles = {}
    if isinstance(data, dict) and data.get("cycle") is not None:
        cycles["cycle"] = io.parse_chain(data["cycle"], field)
    return Source(f, n, coords, cycles)


def _check_filtration(f):
    v = validate_filtration(f)
    if v:
        raise InvalidFiltrationError(v.index, v.reason)


def _pick_cycle(src, cycle_path, name, field):
    if cycle_path is not None:
        return io.parse_chain(io.read_json(cycle_path), field)
    if not src.cycles:
        raise MalformedInputError("no cycle given; use --cycle FILE or an example with a cycle")
    if name is None:
        name = next(iter(src.cycles))
    if name not in src.cycles:
        raise MalformedInputError(f"unknown cycle {name!r}; available: {', '.join(src.cycles)}")
    return src.cycles[name].to_field(get_field(field))


def emit(ctx, obj):
    text = io.dumps(obj)
    out = ctx.obj.get("output") if ctx.obj else None
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        click.echo(text, nl=False)


class _Group(click.Group):
    def invoke(self, ctx):
        try:
            return super().invoke(ctx)
        except (OSError, UnicodeDecodeError) as exc:
            click.echo(f"error: {exc}", err=True)
            ctx.exit(2)
        except RecursionError:
            click.echo("error: input too deeply nested", err=True)
            ctx.exit(2)
        except AdvRobustError as exc:
            code = next(c for cls, c in EXIT_CODES if isinstance(exc, cls))
            click.echo(f"error: {exc}", err=True)
            ctx.exit(code)


input_arg = click.argument("input_path", required=False, type=click.Path(dir_okay=False))
example_opt = click.option("--example", type=click.Choice(EXAMPLES), help="Use a built-in instance.")
field_opt = click.option("--field", type=click.Choice(["gf2", "q"]), default="q", show_default=True)
kind_opt = click.option("--kind", type=click.Choice(["auto", "complex", "points", "distances"]),
                        default="auto", show_default=True,
                        help="Input interpretation; auto picks points for .csv files.")


@click.group(cls=_Group)
@click.option("-o", "--output", type=click.Path(dir_okay=False), help="Write the JSON report here.")
@click.option("-v", "--verbose", count=True, help="Log diagnostics to stderr.")
@click.pass_context
def main(ctx, output, verbose):
    """Adversarial robustness of persistent homology features."""
    logging.basicConfig(level=logging.WARNING - 10 * min(verbose, 2), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    ctx.ensure_object(dict)
    ctx.obj["output"] = output


@main.command()
@input_arg
@example_opt
@kind_opt
@field_opt
@click.option("-p", "--dim", "p", type=int, default=None, help="Only report bars of this dimension.")
@click.option("--max-dim", type=int, default=2, show_default=True, help="Rips dimension for CSV input.")
@click.pass_context
def barcode(ctx, input_path, example, kind, field, p, max_dim):
    """Barcode of a filtration (complex JSON or point cloud CSV)."""
    src = load_source(input_path, example, kind, max_dim, field)
    _check_filtration(src.f)
    bc = reduce(src.f, field)
    bars = [b for b in bc if p is None or b.dim == p]
    emit(ctx, {"field": field, "simplices": len(src.f), "bars": [io.bar_to_json(b) for b in bars]})


def _find_bar(bc, birth):
    for b in bc:
        if b.birth_index == birth:
            return b
    raise DomainError(f"no bar is born at index {birth}")


@main.command()
@input_arg
@example_opt
@kind_opt
@click.option("--field", type=click.Choice(["gf2", "q"]), default="gf2", show_default=True)
@click.option("--bar", "birth", type=int, required=True, help="Birth index of the bar.")
@click.option("-s", "s", type=int, default=None, help="Cut degree (default: the bar's dimension).")
@click.option("-k", "k", type=int, required=True, help="Number of deletions to withstand.")
@click.option("--strategy", type=click.Choice(STRATEGIES), default="bruteforce", show_default=True)
@click.option("--max-size", type=int, default=None, help="Bound for the exhaustive search.")
@click.option("--max-dim", type=int, default=2, show_default=True)
@click.pass_context
def robust(ctx, input_path, example, kind, field, birth, s, k, strategy, max_size, max_dim):
    """Decide k-robustness of one bar; exit 0 when robust, 1 when not."""
    if k < 0:
        raise DomainError("k must be non-negative")
    src = load_source(input_path, example, kind, max_dim, field)
    _check_filtration(src.f)
    bc = reduce(src.f, field)
    bar = _find_bar(bc, birth)
    if s is None:
        s = bar.dim
    verdict = robustness(src.f, bar, s, k, field, strategy, src.coords, max_size)
    emit(ctx, {
        "bar": io.bar_to_json(bar), "s": s, "k": k, "strategy": strategy, "field": field,
        "robust": verdict.robust, "min_cut": io.cert_to_json(verdict.min_cut),
    })
    ctx.exit(0 if verdict.robust else 1)


@main.command()
@input_arg
@example_opt
@field_opt
@click.option("--cycle", "cycle_path", type=click.Path(dir_okay=False), help="Cycle JSON file.")
@click.option("--cycle-name", default=None, help="Named cycle of a built-in example.")
@click.option("-s", "s", type=int, default=None, help="Cut degree (default: the cycle's dimension).")
@click.option("--strategy", type=click.Choice(STRATEGIES), default="bruteforce", show_default=True)
@click.option("--max-size", type=int, default=None)
@click.pass_context
def mincut(ctx, input_path, example, field, cycle_path, cycle_name, s, strategy, max_size):
    """Minimum homological cut of a cycle."""
    src = load_source(input_path, example, "complex", field=field)
    _check_filtration(src.f)
    K = src.complex
    gamma = _pick_cycle(src, cycle_path, cycle_name, field)
    if s is None:
        s = gamma.dim
    if strategy == "bruteforce":
        cert = mhc_bruteforce(K, gamma, s, field, max_size)
    elif strategy == "h0":
        if gamma.dim != 0 or s != 0:
            raise ConfigurationError("strategy h0 needs a 0-cycle and s = 0")
        cert = mhc_h0(K, h0_coefficients(K, gamma), field)
    else:
        if src.coords is None:
            raise ConfigurationError("strategy embedded needs vertex coordinates")
        if field != "q":
            raise ConfigurationError("strategy embedded works over the rationals")
        E = EmbeddedComplex(K, src.coords)
        if s != E.n - 1 or gamma.dim != E.n - 1:
            raise ConfigurationError("strategy embedded needs s = p = n - 1")
        cert = mincut_embedded(E, gamma)
    emit(ctx, {"strategy": strategy, "field": field, "cycle": io.chain_to_json(gamma),
               "cut": io.cert_to_json(cert)})


@main.command()
@input_arg
@click.option("--kind", type=click.Choice(["points", "distances"]), default="points", show_default=True)
@click.option("-k", "k", type=int, required=True)
@click.option("--max-dim", type=int, default=2, show_default=True)
@click.option("--field", type=click.Choice(["gf2", "q"]), default="gf2", show_default=True)
@click.pass_context
def heuristic(ctx, input_path, kind, k, max_dim, field):
    """Hausdorff heuristic H_{X,k} and length certificates for a point cloud."""
    if input_path is None:
        raise MalformedInputError("a CSV input file is required")
    X = io.metric_from_csv(input_path, kind)
    res = hausdorff_heuristic(X, k)
    f = rips_filtration(X, max_dim)
    bc = reduce(f, field)
    finite = [b for b in bc if b.finite]
    certified, _ = certify_bars(graded_bars(finite), res.H)
    ok = {gb.bar for gb in certified}
    bars = []
    for b in bc:
        item = io.bar_to_json(b)
        item["certified"] = (b in ok) if b.finite else None
        bars.append(item)
    emit(ctx, {
        "H": res.H, "k": k, "n": X.n, "center": res.center,
        "neighbours": list(res.neighbours), "witness": list(res.witness),
        "witness_k_plus_1": list(res.witness_k_plus_1), "bars": bars,
    })


@main.command()
@input_arg
@click.option("--example", type=click.Choice(["gadget-min"]), help="Use U={1,2,3}, S={{1,2,3}}.")
@click.option("--check", is_flag=True, help="Also compare exact-cover solvability with cut sizes.")
@click.pass_context
def gadget(ctx, input_path, example, check):
    """Glued complex of an exact-cover instance, with its target cycle."""
    if (input_path is None) == (example is None):
        raise MalformedInputError("give exactly one of an instance file or --example")
    if example:
        inst = gadgets.X3CInstance([1, 2, 3], [[1, 2, 3]])
    else:
        inst = gadgets.X3CInstance.from_json(io.read_json(input_path))
    gc = gadgets.build_x3c_complex(inst)
    out = {
        "universe": list(inst.universe), "sets": [list(s) for s in inst.sets],
        "k": inst.k, "c": inst.c, "cut_bound": inst.cut_bound,
        "complex": io.complex_to_json(gc.complex),
        "gamma": io.chain_to_json(gc.gamma),
        "boundaries": {("u" if lab == "u" else f"S{lab[1]}"): io.chain_to_json(ch)
                       for lab, ch in gc.boundaries.items()},
    }
    if check:
        r = gadgets.check_reduction(inst, gc)
        out["reduction"] = {
            "exact_cover": list(r.cover) if r.cover is not None else None,
            "cut": [list(e) for e in r.cut] if r.cut else None,
            "cut_verified": r.cut_verified,
            "lower_bound": None if math.isinf(r.lower_bound) else r.lower_bound,
            "gamma_trivial": r.gamma_trivial,
            "cut_within_bound": r.cut_within_bound,
        }
    emit(ctx, out)


@main.command()
@input_arg
@click.option("--example", type=click.Choice(["6.3", "fig1", "hollow-triangle"]))
@click.option("--cycle", "cycle_path", type=click.Path(dir_okay=False))
@click.option("--cycle-name", default=None)
@click.option("--no-bruteforce", is_flag=True, help="Skip the exact minimum cut.")
@click.pass_context
def lp(ctx, input_path, example, cycle_path, cycle_name, no_bruteforce):
    """l1 relaxation, max-flow dual and the cut cocycle condition for a 1-cycle."""
    src = load_source(input_path, example, "complex", field="q")
    _check_filtration(src.f)
    gamma = _pick_cycle(src, cycle_path, cycle_name, "q")
    r = duality_report(src.complex, gamma, 0 if no_bruteforce else None)
    emit(ctx, lp_report_json(r))


def lp_report_json(r):
    def num(x):
        if x is None or (isinstance(x, float) and math.isinf(x)):
            return None
        return x
    return {
        "mc": num(r.mc), "mc_tilde": r.mc_tilde, "mf": r.mf, "gap": r.gap,
        "duality_gap": r.duality_gap,
        "support_size": r.support_size, "support_is_cut": r.support_is_cut,
        "lower_bound_candidate": r.lower_bound_candidate,
        "cut_cocycle_l1": r.cut_cocycle_l1,
        "condition_holds": r.condition_holds,
        "min_cut": None if r.min_cut is None else [list(e) for e in r.min_cut],
        "support_threshold": r.support_threshold, "duality_tolerance": r.duality_tolerance,
        "phi": {",".join(map(str, e)): v for e, v in sorted(r.phi.values.items())},
    }


if __name__ == "__main__":
    main()
