"""Command-line front end.

Exit codes: 0 ok, 1 refuted or nothing found, 2 input could not be parsed,
3 inputs parsed but are semantically invalid (unbound letter, bad table, ...).
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys
import tempfile
from fractions import Fraction
from typing import Callable, List, Optional

from . import __version__, builtin
from .adfam import Branch, BranchError, intersection_size
from .cameron import (
    BASIS,
    FamilyError,
    agreement_blocks,
    build_block_family,
    cameron_generator,
    cameron_word_witness,
)
from .dirprod import DirProdError, FinSupportElement, dump_set, load_set, pigeonhole_probe, relation_search
from .freegroup import (
    Action,
    Budget,
    Gen,
    UnboundLetter,
    Word,
    WordError,
    eval_word,
    example_action,
    nontriviality_witness,
    random_reduced_word,
    rank2_interval_basis,
    reduce,
)
from .order import Frame, Interval, OrderError, format_rational, parse_rational
from .pingpong import PingPongError, PingPongTable, certify
from .plmap import MapError, descriptor_from_json
from .transitivity import (
    OrderedTuple,
    TransitiveFreeFamily,
    TupleError,
    TupleIndexRegistry,
    bounding_interval,
    transitive_generator,
)


class ParseFailure(Exception):
    pass


EXIT_OK, EXIT_NEGATIVE, EXIT_PARSE, EXIT_SEMANTIC = 0, 1, 2, 3


def _parsing(fn: Callable, *args):
    try:
        return fn(*args)
    except (ValueError, KeyError, TypeError, json.JSONDecodeError, ZeroDivisionError) as exc:
        raise ParseFailure(str(exc)) from exc


def _read_json(path: str):
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise ParseFailure(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise ParseFailure(f"{path}: {exc}") from exc


def _dumps(obj) -> str:
    return json.dumps(obj, sort_keys=True, indent=2) + "\n"


def write_atomic(path: str, text: str) -> None:
    d = os.path.dirname(os.path.abspath(path))
    fd, tmp = tempfile.mkstemp(dir=d, prefix=".ordfree-", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as fh:
            fh.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _emit(args, text: str) -> None:
    if args.out:
        write_atomic(args.out, text)
    else:
        sys.stdout.write(text)


def _report(args, body: dict) -> dict:
    return {"tool": "ordfree", "version": __version__, "seed": args.seed, **body}


def _budget(args) -> Budget:
    return Budget(max_windows=args.budget_windows, grid_density=args.grid_density)


def _load_action(args) -> Action:
    if not args.action:
        return example_action()
    return _parsing(Action.from_json, _read_json(args.action))


def _parse_word(text: str) -> Word:
    return _parsing(Word.parse, text)


def _parse_pair(text: str) -> List[Fraction]:
    return _parsing(lambda t: [parse_rational(p) for p in t.split(",") if p.strip()], text)


# ---------------------------------------------------------------------------


def cmd_eval(args) -> int:
    action = _load_action(args)
    w = _parse_word(args.word)
    x = _parsing(parse_rational, args.at)
    _emit(args, format_rational(eval_word(action, w, x)) + "\n")
    return EXIT_OK


def cmd_witness(args) -> int:
    action = _load_action(args)
    budget = _budget(args)
    if args.word is not None:
        words = [_parse_word(args.word)]
    else:
        rng = random.Random(args.seed)
        words = [random_reduced_word(rng, action.gens(), args.max_len) for _ in range(args.random)]
    results, missing = [], 0
    for w in words:
        for g in w.generators():
            action[g]
        r = reduce(w)
        if not r.letters:
            results.append({"word": str(w), "verdict": "trivial", "note": "word reduces to the empty word"})
            missing += 1
            continue
        wit = nontriviality_witness(action, r, budget)
        if wit is None:
            missing += 1
            results.append({"word": str(w), "verdict": "none-found", "note": "budget exhausted; inconclusive"})
        else:
            results.append({"word": str(w), "verdict": "moved", "witness": wit.to_json()})
    body = {"command": "witness", "budget": {"windows": budget.max_windows, "grid_density": budget.grid_density}}
    body["results"] = results
    _emit(args, _dumps(_report(args, body)))
    return EXIT_NEGATIVE if missing else EXIT_OK


def cmd_pingpong(args) -> int:
    if args.table:
        table = _parsing(PingPongTable.from_json, _read_json(args.table))
    else:
        table = builtin.example11_table()
    cert = certify(table)
    _emit(args, _dumps(_report(args, cert.to_json())))
    return EXIT_OK if cert.certified else EXIT_NEGATIVE


def cmd_basis(args) -> int:
    if args.line:
        frame, lam = Frame.unit(), Interval.line()
    else:
        lo, hi = _parse_pair(args.interval)
        frame, lam = Frame.squash(lo, hi, "integers"), Interval.open(lo, hi)
    f, g = rank2_interval_basis(lam, frame)
    body = {
        "command": "basis",
        "interval": lam.to_json(),
        "frame": frame.to_json(),
        "generators": Action({Gen("f"): f, Gen("g"): g}).to_json()["generators"],
        "pingpong": {"A_f": [4, 0], "B_f": [4, 3], "A_g": [4, 2], "B_g": [4, 1]},
        "basis": [str(w) for w in BASIS.take(args.count)],
    }
    _emit(args, _dumps(_report(args, body)))
    return EXIT_OK


def _default_family(args):
    lo, hi = _parse_pair(args.hull)
    return build_block_family(Interval.closed_open(lo, hi), Frame.squash(lo, hi, "naturals"))


def cmd_cameron(args) -> int:
    fam = _default_family(args)
    if args.cameron_cmd == "gen":
        br = _parsing(Branch.parse, args.branch)
        gen = cameron_generator(fam, br)
        body = {
            "command": "cameron gen",
            "branch": str(br),
            "generator": gen.descriptor.to_json(),
            "restriction_indices": [gen.restriction_index(i) for i in range(args.blocks)],
        }
    elif args.cameron_cmd == "agree":
        a, b = _parsing(Branch.parse, args.a), _parsing(Branch.parse, args.b)
        ga, gb = cameron_generator(fam, a), cameron_generator(fam, b)
        blocks = agreement_blocks(ga, gb, args.blocks)
        body = {
            "command": "cameron agree",
            "branches": [str(a), str(b)],
            "common_prefix": intersection_size(a, b),
            "agreement_blocks": blocks,
            "count": len(blocks),
        }
    else:
        w = _parse_word(args.word)
        gens = {}
        for spec in args.bind:
            name, _, br = spec.partition("=")
            if not br:
                raise ParseFailure(f"binding {spec!r} is not of the form letter=branch")
            gens[_parsing(Gen.parse, name.strip())] = cameron_generator(fam, _parsing(Branch.parse, br))
        for g in w.generators():
            if g not in gens:
                raise UnboundLetter(f"letter {g} is not bound")
        wit = cameron_word_witness(w, gens, _budget(args))
        body = {"command": "cameron witness", "bindings": {str(g): str(c.branch) for g, c in gens.items()}}
        if wit is None:
            body.update(verdict="none-found", word=str(w))
            _emit(args, _dumps(_report(args, body)))
            return EXIT_NEGATIVE
        body.update(verdict="moved", witness=wit.to_json())
    _emit(args, _dumps(_report(args, body)))
    return EXIT_OK


def cmd_transitive(args) -> int:
    src = _parsing(OrderedTuple.parse, args.src)
    dst = _parsing(OrderedTuple.parse, args.dst)
    if args.registry and os.path.exists(args.registry):
        reg = _parsing(TupleIndexRegistry.from_json, _read_json(args.registry))
    else:
        reg = TupleIndexRegistry(max_n=max(2, args.max_n))
    reg.max_n = max(reg.max_n, args.max_n)
    fam = TransitiveFreeFamily(reg)
    alpha, gmap = transitive_generator(fam, src, dst)
    lam = bounding_interval(src.points + dst.points)
    body = {
        "command": "transitive map",
        "index": alpha,
        "from": [format_rational(p) for p in src.points],
        "to": [format_rational(p) for p in dst.points],
        "lambda": lam.to_json(),
        "images": [format_rational(gmap(p)) for p in src.points],
        "generator": gmap.to_json(),
    }
    if args.registry:
        write_atomic(args.registry, reg.dumps() + "\n")
    _emit(args, _dumps(_report(args, body)))
    return EXIT_OK


def cmd_dirprod(args) -> int:
    S = _parsing(load_set, _read_json(args.set))
    if args.dirprod_cmd == "relation":
        rel = relation_search(S, args.max_len)
        if rel is None:
            body = {"command": "dirprod relation", "verdict": "none-found", "max_len": args.max_len}
            _emit(args, _dumps(_report(args, body)))
            return EXIT_NEGATIVE
        body = {"command": "dirprod relation", "max_len": args.max_len, **rel.to_json()}
    else:
        res = pigeonhole_probe(S)
        if res is None:
            body = {"command": "dirprod probe", "verdict": "exhausted"}
            _emit(args, _dumps(_report(args, body)))
            return EXIT_NEGATIVE
        body = {"command": "dirprod probe", **res.to_json(S)}
    _emit(args, _dumps(_report(args, body)))
    return EXIT_OK


EXPORTS = {
    "example11": lambda: example_action().to_json(),
    "example11-table": lambda: builtin.example11_table().to_json(),
    "mutated-table": lambda: builtin.mutated_table().to_json(),
    "dirprod-corpus": lambda: json.loads(dump_set(builtin.dirprod_corpus())),
    "shared-instance": lambda: json.loads(dump_set(builtin.shared_coordinate_instance())),
}


def cmd_export(args) -> int:
    _emit(args, _dumps(EXPORTS[args.name]()))
    return EXIT_OK


def _import_value(obj):
    if not isinstance(obj, dict):
        raise ValueError("expected a JSON object")
    if "pairs" in obj:
        return "pingpong-table", PingPongTable.from_json(obj)
    if "generators" in obj:
        return "action", Action.from_json(obj)
    if "elements" in obj:
        return "element-set", load_set(obj)
    if "coords" in obj:
        return "element", FinSupportElement.from_json(obj)
    if "assignments" in obj:
        return "registry", TupleIndexRegistry.from_json(obj)
    if "type" in obj:
        return "descriptor", descriptor_from_json(obj)
    raise ValueError("unrecognized artifact")


def _to_json(kind: str, v):
    if kind == "element-set":
        return json.loads(dump_set(v))
    return v.to_json()


def cmd_import(args) -> int:
    kind, value = _parsing(_import_value, _read_json(args.file))
    canon = _to_json(kind, value)
    kind2, again = _import_value(canon)
    same = kind2 == kind and _to_json(kind2, again) == canon
    body = {"command": "import", "kind": kind, "roundtrip": same, "value": canon}
    _emit(args, _dumps(_report(args, body)))
    return EXIT_OK if same else EXIT_SEMANTIC


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS, help="random seed (default 0)")
    common.add_argument("--budget-windows", type=int, default=argparse.SUPPRESS, help="search windows (default 16)")
    common.add_argument("--grid-density", type=int, default=argparse.SUPPRESS, help="dense grid points per window (default 64)")
    common.add_argument("--out", default=argparse.SUPPRESS, help="write output here instead of stdout")

    p = argparse.ArgumentParser(prog="ordfree", description=__doc__.splitlines()[0], parents=[common])
    p.add_argument("--version", action="version", version=f"ordfree {__version__}")
    p.set_defaults(seed=0, budget_windows=16, grid_density=64, out=None)
    sub = p.add_subparsers(dest="cmd", required=True)

    s = sub.add_parser("eval", parents=[common], help="evaluate a word at a rational point")
    s.add_argument("--action", help="action JSON (default: built-in f, g)")
    s.add_argument("--word", required=True)
    s.add_argument("--at", required=True)
    s.set_defaults(func=cmd_eval)

    s = sub.add_parser("witness", parents=[common], help="find moved points of words")
    s.add_argument("--action")
    grp = s.add_mutually_exclusive_group(required=True)
    grp.add_argument("--word")
    grp.add_argument("--random", type=int, metavar="N", help="sample N reduced words")
    s.add_argument("--max-len", type=int, default=16)
    s.set_defaults(func=cmd_witness)

    s = sub.add_parser("pingpong", parents=[common], help="certify or refute a ping-pong table")
    s.add_argument("--table", help="table JSON (default: built-in example table)")
    s.set_defaults(func=cmd_pingpong)

    s = sub.add_parser("basis", parents=[common], help="rank-2 pair and conjugate basis on an interval")
    s.add_argument("--interval", default="0,1")
    s.add_argument("--line", action="store_true", help="use the unit integer frame on the whole line")
    s.add_argument("--count", type=int, default=4)
    s.set_defaults(func=cmd_basis)

    s = sub.add_parser("cameron", parents=[common], help="almost-disjoint generator families")
    s.add_argument("--hull", default="0,1", help="family hull lo,hi (blocks accumulate at hi)")
    csub = s.add_subparsers(dest="cameron_cmd", required=True)
    c = csub.add_parser("gen", parents=[common])
    c.add_argument("--branch", required=True)
    c.add_argument("--blocks", type=int, default=8)
    c = csub.add_parser("agree", parents=[common])
    c.add_argument("--a", required=True)
    c.add_argument("--b", required=True)
    c.add_argument("--blocks", type=int, default=32)
    c = csub.add_parser("witness", parents=[common])
    c.add_argument("--word", required=True)
    c.add_argument("--bind", action="append", default=[], metavar="LETTER=BRANCH")
    s.set_defaults(func=cmd_cameron)

    s = sub.add_parser("transitive", parents=[common], help="tuple-to-tuple generators")
    tsub = s.add_subparsers(dest="transitive_cmd", required=True)
    t = tsub.add_parser("map", parents=[common])
    t.add_argument("--from", dest="src", required=True)
    t.add_argument("--to", dest="dst", required=True)
    t.add_argument("--registry", help="registry JSON, created or updated in place")
    t.add_argument("--max-n", type=int, default=8)
    s.set_defaults(func=cmd_transitive)

    s = sub.add_parser("dirprod", parents=[common], help="direct sums of finite permutation groups")
    dsub = s.add_subparsers(dest="dirprod_cmd", required=True)
    d = dsub.add_parser("relation", parents=[common])
    d.add_argument("--set", required=True)
    d.add_argument("--max-len", type=int, default=8)
    d = dsub.add_parser("probe", parents=[common])
    d.add_argument("--set", required=True)
    s.set_defaults(func=cmd_dirprod)

    s = sub.add_parser("export", parents=[common], help="write a built-in artifact")
    s.add_argument("name", choices=sorted(EXPORTS))
    s.set_defaults(func=cmd_export)

    s = sub.add_parser("import", parents=[common], help="parse an artifact and re-emit it canonically")
    s.add_argument("file")
    s.set_defaults(func=cmd_import)
    return p


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_PARSE if exc.code not in (0, None) else EXIT_OK
    if args.budget_windows < 1 or args.grid_density < 1:
        print("ordfree: budgets must be positive", file=sys.stderr)
        return EXIT_PARSE
    try:
        return args.func(args)
    except ParseFailure as exc:
        print(f"ordfree: parse error: {exc}", file=sys.stderr)
        return EXIT_PARSE
    except (UnboundLetter, WordError, PingPongError, FamilyError, BranchError, TupleError,
            DirProdError, OrderError, MapError, ValueError) as exc:
        print(f"ordfree: {exc}", file=sys.stderr)
        return EXIT_SEMANTIC


if __name__ == "__main__":
    sys.exit(main())
