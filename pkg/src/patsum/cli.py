"""Command-line interface.

Every command writes a header comment ``# patsum <version> <command> k=v ...``
followed by TSV, FIMI or JSON. Exit codes: 0 ok, 2 parse error,
3 precondition violation, 4 incompatible inputs.
"""
import argparse
import json
import sys
from fractions import Fraction

from . import __version__
from .chains import (
    encode_chain,
    greedy_chains,
    minimal_partition_into_chains,
    partition_into_antichains,
    partition_into_chains,
)
from .database import format_database, parse_database
from .discretize import dp_tabulate, dp_valuate_abs, extract_discretization, prefix_cover
from .errors import IncompatibleError, ParseError, PatsumError, PreconditionError
from .inverse import (
    brute_force_reconstruct,
    claim_from_supports,
    count_compatible_two,
    format_projection,
    from_two_to_one,
    parse_projection,
    project,
    projections_compatible,
    to_projections,
)
from .itemsets import EMPTY, key, parse_itemset
from .mining import (
    RatedCollection,
    association_rules,
    free_itemsets,
    maximal_of,
    mine_closed,
    mine_frequent,
    non_derivable_itemsets,
)
from .numbers import as_fraction, format_value
from .ordering import (
    ESTIMATORS,
    CountExceeding,
    Independence,
    LpLoss,
    SquaredErrorSum,
    order_patterns,
)
from .profiles import (
    METRICS,
    NOISE_MODELS,
    VARIANTS,
    agglomerative_cluster,
    change_profiles,
    dp_from_schs,
    noisify_profiles,
    sample_path_products,
    standard_error,
)
from .tiling import greedy_tiling

HEADER = "# patsum"


# io -----------------------------------------------------------------------

def _read(path):
    if path == "-":
        return sys.stdin.buffer.read().decode("utf-8")
    with open(path, encoding="utf-8") as fh:
        return fh.read()


def _strip_header(text):
    """Drop leading ``# patsum`` lines so command output can be fed back in."""
    lines = text.split("\n")
    while lines and lines[0].startswith(HEADER):
        lines.pop(0)
    return "\n".join(lines)


def _rational(text):
    try:
        return as_fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from None


def _itemset_arg(text):
    try:
        return parse_itemset(text.replace(",", " "))
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _num(v):
    if isinstance(v, Fraction):
        return v.numerator if v.denominator == 1 else format_value(v)
    return v


def _items(x):
    return list(x) if x is not None else None


def parse_collection(text):
    """TSV ``rating<TAB>items``; a ``# n: N`` comment sets the database size."""
    entries, n = {}, None
    for lineno, line in enumerate(_strip_header(text).split("\n"), 1):
        if not line.strip():
            continue
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("n:"):
                try:
                    n = int(body[2:])
                except ValueError:
                    raise ParseError("bad database size", lineno) from None
            continue
        rating, _, items = line.partition("\t")
        try:
            v = as_fraction(rating)
            x = parse_itemset(items)
        except (ValueError, ZeroDivisionError) as exc:
            raise ParseError(str(exc), lineno) from None
        if x in entries:
            raise ParseError(f"itemset {x} listed twice", lineno)
        entries[x] = v.numerator if v.denominator == 1 else v
    return RatedCollection(entries, n=n)


def format_collection(c):
    lines = [] if c.n is None else [f"# n: {c.n}"]
    lines += [f"{format_value(v)}\t{' '.join(map(str, x))}" for x, v in c.items()]
    return "\n".join(lines) + ("\n" if lines else "")


def _database(args):
    return parse_database(_strip_header(_read(args.db)))


def _collection(args):
    """Collection from --collection, or the frequent itemsets of --db at --sigma."""
    if args.collection is not None:
        return parse_collection(_read(args.collection))
    if args.db is None:
        raise PreconditionError("need --collection or --db")
    db = _database(args)
    if len(db) == 0:
        raise PreconditionError("cannot mine an empty database")
    c = mine_frequent(db, args.sigma)
    return c


def _add_source(p, sigma_default="1/1"):
    p.add_argument("--collection", help="rated collection TSV")
    p.add_argument("--db", help="FIMI database to mine")
    p.add_argument("--sigma", type=_rational, default=_rational(sigma_default))


def _dump(obj):
    return json.dumps(obj, indent=1, ensure_ascii=False) + "\n"


# commands -----------------------------------------------------------------

def cmd_mine(args):
    db = _database(args)
    if len(db) == 0:
        raise PreconditionError("cannot mine an empty database")
    if args.closed:
        return format_collection(mine_closed(db, args.sigma))
    if args.ndi:
        return format_collection(non_derivable_itemsets(db, args.sigma))
    c = mine_frequent(db, args.sigma)
    if args.free:
        return format_collection(c.restrict(free_itemsets(c)))
    if args.maximal:
        return format_collection(c.restrict(maximal_of(c)))
    if args.minimal_infrequent:
        border = {x: db.support(x) for x in c.minimal_infrequent}
        return format_collection(RatedCollection(border, n=len(db)))
    if args.rules:
        rules = association_rules(c, args.min_accuracy)
        return _dump([
            {"body": list(r.body), "head": list(r.head), "support": r.support,
             "accuracy": _num(r.accuracy)}
            for r in rules
        ])
    return format_collection(c)


def _discretize_values(args):
    if args.values is not None:
        out = []
        for lineno, line in enumerate(_strip_header(_read(args.values)).split("\n"), 1):
            if line.strip() and not line.startswith("#"):
                try:
                    out.append(as_fraction(line))
                except (ValueError, ZeroDivisionError):
                    raise ParseError(f"not a rational number: {line!r}", lineno) from None
        return out
    c = _collection(args)
    return list(c.frequencies().values()) if c.n else list(c.entries.values())


def cmd_discretize(args):
    values = sorted(set(_discretize_values(args)))
    loss = args.loss or ("maxabs" if args.method == "greedy" else "sumabs")
    if args.method == "greedy":
        if loss != "maxabs":
            raise PreconditionError("greedy covers bound the maximum absolute error")
        if args.eps is None:
            raise PreconditionError("greedy discretization needs --eps")
        disc = prefix_cover(values, args.eps)
        achieved = disc.max_abs_error
    else:
        if loss != "sumabs":
            raise PreconditionError("dp minimizes the sum of absolute errors")
        if args.k is None:
            raise PreconditionError("dp discretization needs --k")
        if not values:
            raise PreconditionError("nothing to discretize")
        m = dp_valuate_abs(values)
        t = dp_tabulate(values, m, k_max=args.k)
        if args.tables:
            return _dump({
                "delta": [[_num(v) for v in row] for row in t.delta],
                "omega": t.omega,
            })
        disc = extract_discretization(values, m, t, args.k)
        achieved = disc.loss
    lines = [
        f"# points: {' '.join(format_value(p) for p in disc.points)}",
        f"# loss: {format_value(achieved)}",
    ]
    lines += [f"{format_value(x)}\t{format_value(disc(x))}" for x in values]
    return "\n".join(lines) + "\n"


def _loss(args):
    if args.loss == "squared":
        return SquaredErrorSum()
    if args.loss == "lp":
        return LpLoss(float(args.p) if args.p != "inf" else float("inf"))
    if args.eps is None:
        raise PreconditionError("--loss count needs --eps")
    return CountExceeding(args.eps)


def cmd_order(args):
    c = _collection(args)
    values = c.frequencies() if args.frequencies else c.entries
    if args.estimator == "independence":
        est = Independence(args.delta)
    else:
        est = ESTIMATORS[args.estimator]()
    order = order_patterns(values, est, _loss(args), include_empty=args.include_empty, k=args.k)
    rows = [{"rank": 0, "itemset": None, "prefixLoss": _num(order.prefix_loss[0])}]
    for r, (x, l) in enumerate(zip(order.sequence, order.prefix_loss[1:]), 1):
        rows.append({"rank": r, "itemset": list(x), "prefixLoss": _num(l)})
    return _dump(rows)


def cmd_tile(args):
    db = _database(args)
    res = greedy_tiling(db, args.k)
    return _dump([
        {"tids": list(t.tids), "items": list(t.items), "cumulativeArea": a}
        for t, a in zip(res.tiles, res.cumulative_area)
    ])


def cmd_chain(args):
    c = _collection(args)
    if args.mode == "antichains":
        parts = partition_into_antichains(c)
        return _dump({"antichains": [[list(x) for x in a] for a in parts.antichains]})
    if args.mode == "minimum":
        parts = partition_into_chains(c)
    elif args.mode == "minimal":
        parts = minimal_partition_into_chains(c)
    else:
        parts = greedy_chains(c)
    out = []
    for chain in parts.chains:
        e = encode_chain(chain, [_num(c[x]) for x in chain])
        out.append({
            "encoded": {str(i): r for i, r in sorted(e.ranks.items())},
            "rendered": e.render(),
            "values": e.values,
        })
    return _dump({"chains": out})


def _profile_json(p):
    return {
        "owner": list(p.owner),
        "kind": p.kind,
        "variant": p.variant,
        "changes": [{"key": list(k), "value": _num(v)} for k, v in p.items()],
    }


def _tree_json(node):
    if node.is_leaf:
        return {"members": [list(x) for x in node.members], "height": 0}
    return {
        "members": [list(x) for x in node.members],
        "height": _num(node.height),
        "left": _tree_json(node.left),
        "right": _tree_json(node.right),
    }


def cmd_profile(args):
    c = _collection(args)
    if c.n is None:
        raise PreconditionError("profiles need a database size (a '# n:' line)")
    c = RatedCollection(c.entries, n=c.n, downward_closed=True)
    variant = "simple" if args.estimate is not None else args.variant
    profiles = change_profiles(c, args.kind, variant)
    if args.noise is not None:
        if args.seed is None:
            raise PreconditionError("--noise needs --seed")
        profiles = noisify_profiles(profiles, args.noise, float(args.eps or 0), args.seed)
    if args.estimate is not None:
        x = args.estimate
        out = {"itemset": list(x), "dp": _num(dp_from_schs(x, profiles))}
        if x in c.entries:
            out["exact"] = _num(c.frequency(x))
        if args.paths is not None:
            if args.seed is None:
                raise PreconditionError("--paths needs --seed")
            prods = sample_path_products(x, profiles, args.paths, args.seed)
            total = sum(prods)
            mean = Fraction(total, args.paths) if isinstance(total, (int, Fraction)) else total / args.paths
            out["sample"] = _num(mean)
            out["standardError"] = standard_error(prods)
        return _dump(out)
    if args.cluster:
        return _dump(_tree_json(agglomerative_cluster(profiles, args.metric)))
    return _dump([_profile_json(profiles[x]) for x in sorted(profiles, key=key)])


def _projection(path):
    return parse_projection(_strip_header(_read(path)))


def cmd_inverse(args):
    op = args.op
    if op == "check":
        ps = [_projection(p) for p in args.inputs]
        ok = projections_compatible(ps) and len({len(p) for p in ps}) <= 1
        if not ok:
            raise IncompatibleError("projections are not pairwise compatible")
        return _dump({"compatible": True})
    if op == "reconstruct2":
        p1, p2 = (_projection(p) for p in _exactly(args.inputs, 2))
        return format_database(from_two_to_one(p1, p2))
    if op == "count2":
        p1, p2 = (_projection(p) for p in _exactly(args.inputs, 2))
        return _dump({"count": count_compatible_two(p1, p2)})
    if op == "brute":
        (path,) = _exactly(args.inputs, 1)
        claim = claim_from_supports(parse_collection(_read(path)).entries)
        db = brute_force_reconstruct(claim)
        if db is None:
            raise IncompatibleError("no database matches the claim")
        return format_database(db)
    if op == "project":
        (path,) = _exactly(args.inputs, 1)
        if args.onto is None:
            raise PreconditionError("project needs --onto")
        return format_projection(project(parse_database(_strip_header(_read(path))), args.onto))
    (path,) = _exactly(args.inputs, 1)
    claim = claim_from_supports(parse_collection(_read(path)).entries)
    return "".join(format_projection(p) for p in to_projections(claim))


def _exactly(inputs, n):
    if len(inputs) != n:
        raise PreconditionError(f"expected {n} input file(s), got {len(inputs)}")
    return inputs


# parser -------------------------------------------------------------------

def build_parser():
    parser = argparse.ArgumentParser(prog="patsum", description="Frequent itemset summaries.")
    parser.add_argument("--version", action="version", version=f"patsum {__version__}")
    parser.add_argument("-o", "--output", help="write here instead of stdout")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("mine", help="frequent, closed, free, maximal or non-derivable itemsets")
    p.add_argument("db")
    p.add_argument("--sigma", type=_rational, required=True)
    g = p.add_mutually_exclusive_group()
    for flag in ("closed", "free", "maximal", "ndi", "minimal-infrequent", "rules"):
        g.add_argument(f"--{flag}", action="store_true")
    p.add_argument("--min-accuracy", type=_rational, default=Fraction(0))
    p.set_defaults(func=cmd_mine)

    p = sub.add_parser("discretize", help="map frequencies onto few points")
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--values", help="one rational per line")
    g.add_argument("--collection")
    g.add_argument("--db")
    p.add_argument("--sigma", type=_rational, default=Fraction(1))
    p.add_argument("--method", choices=("greedy", "dp"), default="greedy")
    p.add_argument("--loss", choices=("maxabs", "sumabs"))
    p.add_argument("--eps", type=_rational)
    p.add_argument("--k", type=int)
    p.add_argument("--tables", action="store_true", help="dump the dp tables as JSON")
    p.set_defaults(func=cmd_discretize)

    p = sub.add_parser("order", help="greedy pattern ordering")
    _add_source(p)
    p.add_argument("--estimator", choices=sorted(ESTIMATORS), default="max-superset")
    p.add_argument("--delta", type=_rational, default=Fraction(1, 2))
    p.add_argument("--loss", choices=("squared", "lp", "count"), default="squared")
    p.add_argument("--p", default="2", help="exponent for --loss lp, or 'inf'")
    p.add_argument("--eps", type=_rational)
    p.add_argument("--k", type=int)
    p.add_argument("--include-empty", action="store_true")
    p.add_argument("--frequencies", action="store_true", help="order frequencies instead of supports")
    p.set_defaults(func=cmd_order)

    p = sub.add_parser("tile", help="greedy k-tiling")
    p.add_argument("db")
    p.add_argument("--k", type=int, required=True)
    p.set_defaults(func=cmd_tile)

    p = sub.add_parser("chain", help="chain or antichain partitions")
    _add_source(p)
    p.add_argument("--mode", choices=("minimum", "minimal", "greedy", "antichains"), default="minimum")
    p.set_defaults(func=cmd_chain)

    p = sub.add_parser("profile", help="change profiles, clustering and estimation")
    _add_source(p)
    p.add_argument("--kind", choices=("specializing", "generalizing"), default="specializing")
    p.add_argument("--variant", choices=VARIANTS, default="concise")
    p.add_argument("--metric", choices=METRICS, default="sum-abs")
    p.add_argument("--cluster", action="store_true")
    p.add_argument("--estimate", type=_itemset_arg, metavar="ITEMS")
    p.add_argument("--paths", type=int)
    p.add_argument("--noise", choices=NOISE_MODELS)
    p.add_argument("--eps", type=_rational)
    p.add_argument("--seed", type=int)
    p.set_defaults(func=cmd_profile)

    p = sub.add_parser("inverse", help="projections and database reconstruction")
    p.add_argument("op", choices=("check", "reconstruct2", "count2", "brute", "project", "to-projections"))
    p.add_argument("inputs", nargs="+")
    p.add_argument("--onto", type=_itemset_arg)
    p.set_defaults(func=cmd_inverse)
    return parser


def _header(args):
    skip = {"func", "command", "output", "op", "inputs", "db"}
    parts = [args.command]
    if getattr(args, "op", None):
        parts.append(args.op)
    for name in ("db", "inputs"):
        v = getattr(args, name, None)
        if v is not None:
            parts.append(f"{name}={','.join(v) if isinstance(v, list) else v}")
    for name in sorted(vars(args)):
        if name in skip:
            continue
        v = getattr(args, name)
        if isinstance(v, tuple):
            v = ",".join(map(str, v)) if v else "{}"
        elif isinstance(v, Fraction):
            v = format_value(v)
        parts.append(f"{name}={'none' if v is None else v}")
    return f"{HEADER} {__version__} " + " ".join(parts) + "\n"


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code
    try:
        body = args.func(args)
    except OSError as exc:
        print(f"patsum: {exc}", file=sys.stderr)
        return 2
    except PatsumError as exc:
        print(f"patsum: {exc}", file=sys.stderr)
        return exc.exit_code
    text = _header(args) + body
    if args.output:
        with open(args.output, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.buffer.write(text.encode("utf-8"))
        sys.stdout.flush()
    return 0
