"""Command-line interface.

Verbs: compile, member, empty, deterministic, subset, equiv, complement,
intersect, union, expand, bench.  Automata come from JSON files
(``--sra``/``--lhs``/``--rhs``; a non-.json path is read as a regex
pattern file) or inline patterns (``--pattern``).

Exit codes: 0 = success / predicate holds, 1 = predicate fails (with a
counterexample on stdout where one exists), 2 = usage or input error.
"""

from __future__ import annotations

import argparse
import json
import sys
import time

from . import core
from .algebra import UNICODE
from .boolean_ops import complement, complete, intersect, union
from .core import Sra, SraError, membership
from .equiv import equivalent, includes
from .expand import csv_report, expand_to_sfa, size_report
from .normal import is_deterministic, is_empty, normalize
from .single_valued import is_single_valued, to_single_valued
from . import regex as rx


class UsageError(Exception):
    pass


def _load(path: str | None, pattern: str | None, what: str = "--sra") -> Sra:
    if (path is None) == (pattern is None):
        raise UsageError(f"provide exactly one of {what} or --pattern")
    if path is not None:
        if path.endswith(".json"):
            return core.load(path)
        with open(path) as fh:
            pattern = fh.read().strip()
    return rx.compile(pattern).sra


def _load_side(path: str) -> Sra:
    if path.endswith(".json"):
        return core.load(path)
    with open(path) as fh:
        return rx.compile(fh.read().strip()).sra


def _word(S: Sra, args) -> list:
    if args.input is not None:
        text = args.input
    elif args.input_file is not None:
        with open(args.input_file) as fh:
            text = fh.read()
    else:
        raise UsageError("provide --input or --input-file")
    if S.algebra is UNICODE:
        return [ord(c) for c in text]
    stripped = text.strip()
    if stripped.startswith("["):
        return list(json.loads(stripped))
    return [int(x) for x in stripped.replace(",", " ").split()]


def _printable(word: list) -> str:
    chars = []
    for a in word:
        if isinstance(a, int) and 32 <= a < 0x110000 and chr(a).isprintable():
            chars.append(chr(a))
        else:
            chars.append(f"\\u{{{a}}}")
    return "".join(chars)


def _print_word(label: str, word: list):
    print(json.dumps({label: word, "text": _printable(word)}))


def _emit(S: Sra, out: str | None):
    payload = core.dumps(S)
    if out:
        with open(out, "w") as fh:
            fh.write(payload)
    else:
        print(payload)


def _parse_domain(spec: str) -> list:
    """Comma-separated values or ranges; "a-z" uses codepoints, "0-9" ints."""
    values: list = []
    for part in spec.split(","):
        part = part.strip()
        if not part:
            continue
        lo, dash, hi = part.partition("-") if not part.startswith("-") else (part, "", "")
        if dash and lo and hi:
            try:
                values.extend(range(int(lo), int(hi) + 1))
            except ValueError:
                if len(lo) == 1 and len(hi) == 1:
                    values.extend(range(ord(lo), ord(hi) + 1))
                else:
                    raise UsageError(f"bad domain range {part!r}")
        else:
            try:
                values.append(int(part))
            except ValueError:
                if len(part) == 1:
                    values.append(ord(part))
                else:
                    raise UsageError(f"bad domain value {part!r}")
    if not values:
        raise UsageError("empty domain")
    return values


def _ensure_single_valued(S: Sra) -> Sra:
    return S if is_single_valued(S) else to_single_valued(S)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="sra")
    sub = parser.add_subparsers(dest="verb", required=True)

    def automaton_flags(p):
        p.add_argument("--sra", dest="sra_path", metavar="FILE")
        p.add_argument("--pattern")

    p = sub.add_parser("compile", help="compile a pattern or transform an automaton")
    automaton_flags(p)
    p.add_argument("--out")
    p.add_argument("--emit-normalized", action="store_true")
    p.add_argument("--complete", action="store_true")

    p = sub.add_parser("member", help="does the automaton accept the input word?")
    automaton_flags(p)
    p.add_argument("--input")
    p.add_argument("--input-file")

    for verb, help_text in [
        ("empty", "is the language empty?"),
        ("deterministic", "is the automaton deterministic?"),
    ]:
        p = sub.add_parser(verb, help=help_text)
        automaton_flags(p)

    for verb, help_text in [
        ("subset", "is every word of --lhs accepted by --rhs?"),
        ("equiv", "do --lhs and --rhs accept the same language?"),
        ("intersect", "product automaton of --lhs and --rhs"),
        ("union", "sum automaton of --lhs and --rhs"),
    ]:
        p = sub.add_parser(verb, help=help_text)
        p.add_argument("--lhs", required=True)
        p.add_argument("--rhs", required=True)
        p.add_argument("--out")

    p = sub.add_parser("complement", help="swap accepting and rejecting states")
    automaton_flags(p)
    p.add_argument("--complete", action="store_true", help="complete first")
    p.add_argument("--out")

    p = sub.add_parser("expand", help="expand to a plain finite automaton")
    automaton_flags(p)
    p.add_argument("--domain", required=True)
    p.add_argument("--max-states", type=int, default=None)
    p.add_argument("--out")
    p.add_argument("--name", default="sra")

    p = sub.add_parser("bench", help="membership timing over growing inputs")
    p.add_argument("--pattern", default=rx.BENCHMARK_PATTERNS["Pr-C2"])
    p.add_argument("--unit", default="C:ab L:x D:yz",
                   help="record repeated (space-joined) to build the inputs")
    p.add_argument("--sizes", default="100,1000,10000,100000,1000000,10000000")
    p.add_argument("--out")
    return parser


def run(args) -> int:
    if args.verb == "compile":
        S = _load(args.sra_path, args.pattern)
        if args.complete:
            S = complete(_ensure_single_valued(S))
        if args.emit_normalized:
            S = normalize(_ensure_single_valued(S))
        _emit(S, args.out)
        return 0

    if args.verb == "member":
        S = _load(args.sra_path, args.pattern)
        return 0 if membership(S, _word(S, args)) else 1

    if args.verb == "empty":
        S = _load(args.sra_path, args.pattern)
        empty, word = is_empty(S)
        if empty:
            print("empty")
            return 0
        _print_word("witness", word)
        return 1

    if args.verb == "deterministic":
        S = _load(args.sra_path, args.pattern)
        det = is_deterministic(S)
        print("deterministic" if det else "nondeterministic")
        return 0 if det else 1

    if args.verb == "subset":
        lhs = _load_side(args.lhs)
        rhs = _load_side(args.rhs)
        ok, word = includes(lhs, rhs)
        if ok:
            print("subset")
            return 0
        _print_word("counterexample", word)
        return 1

    if args.verb == "equiv":
        lhs = _load_side(args.lhs)
        rhs = _load_side(args.rhs)
        ok = equivalent(lhs, rhs)
        print("equivalent" if ok else "different")
        return 0 if ok else 1

    if args.verb == "intersect" or args.verb == "union":
        op = intersect if args.verb == "intersect" else union
        _emit(op(_load_side(args.lhs), _load_side(args.rhs)), args.out)
        return 0

    if args.verb == "complement":
        S = _load(args.sra_path, args.pattern)
        if args.complete:
            S = complete(_ensure_single_valued(S))
        _emit(complement(S), args.out)
        return 0

    if args.verb == "expand":
        S = _load(args.sra_path, args.pattern)
        domain = _parse_domain(args.domain)
        kwargs = {} if args.max_states is None else {"max_states": args.max_states}
        ex = expand_to_sfa(S, domain, **kwargs)
        text = csv_report([size_report(args.name, S, ex)])
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(text)
        else:
            print(text, end="")
        return 0

    if args.verb == "bench":
        cp = rx.compile(args.pattern)
        sizes = [int(s) for s in args.sizes.split(",")]
        unit = args.unit
        lines = ["length,seconds"]
        for size in sizes:
            # whole records only, so each probe runs the full scan
            reps = max(2, round(size / (len(unit) + 1)))
            text = " ".join([unit] * reps)
            t0 = time.perf_counter()
            rx.match(cp, text)
            lines.append(f"{len(text)},{time.perf_counter() - t0:.6f}")
        payload = "\n".join(lines) + "\n"
        if args.out:
            with open(args.out, "w") as fh:
                fh.write(payload)
        else:
            print(payload, end="")
        return 0

    raise UsageError(f"unknown verb {args.verb!r}")  # pragma: no cover


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 2
    try:
        return run(args)
    except (UsageError, SraError, OSError, json.JSONDecodeError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
