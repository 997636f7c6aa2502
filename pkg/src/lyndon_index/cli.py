"""Command line entry point: ``python -m lyndon_index {fold,member,index}``."""

from __future__ import annotations

import argparse
import re
import sys

from .graph import (
    DEFAULT_CLOSURE_POWER, FoldingError, assert_u_folded, dump_graph, graph_from_words, member,
    to_dot,
)
from .index import DEFAULT_BUDGET, BudgetExceeded, NotASubgroup, decide_index
from .words import (
    WordSyntaxError, invert_word, normalize, parse_tower, parse_word,
    validate_standard, validate_tower,
)
from .zt_poly import DegreeOverflow

EXIT_ERROR = 2
EXIT_BUDGET = 3


class InputError(Exception):
    pass


def _read(path):
    try:
        with open(path) as fh:
            return fh.read()
    except OSError as err:
        raise InputError(f"cannot read {path}: {err.strerror}") from None


def load_tower(path, degree_bound=None):
    try:
        tower = parse_tower(_read(path))
    except WordSyntaxError as err:
        raise InputError(f"{path}: {err}") from None
    if degree_bound is not None:
        tower.D = degree_bound
    problems = validate_tower(tower)
    if problems:
        raise InputError(f"{path}: invalid tower: " + "; ".join(problems))
    return tower


_REF = re.compile(r"@([A-Za-z_][A-Za-z0-9_]*)(\^-1)?")


def parse_generators(text, tower, refs=None, where="<input>"):
    """Generator file: one word per line, optionally ``name = word``.  Tokens
    ``@name`` (or ``@name^-1``) stand for words named in ``refs``."""
    named = {}
    words = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        name = None
        if "=" in line:
            name, line = (s.strip() for s in line.split("=", 1))
        try:
            letters = ()
            for tok in line.split():
                m = _REF.fullmatch(tok)
                if m:
                    if refs is None or m.group(1) not in refs:
                        raise InputError(f"{where}:{lineno}: unknown reference @{m.group(1)}")
                    w = refs[m.group(1)]
                    letters += invert_word(w) if m.group(2) else w
                else:
                    letters += parse_word(tok, tower, reduce=False)
        except WordSyntaxError as err:
            raise InputError(f"{where}:{lineno}: {err}") from None
        letters = normalize(letters, tower)
        words.append(letters)
        if name:
            named[name] = letters
    return words, named


def _fold(words, tower, args):
    g = graph_from_words(words, tower, closure_power=args.closure_power)
    if args.assert_len is not None:
        check = assert_u_folded(g, max_len=args.assert_len)
        if not check:
            raise InputError(f"folding certificate failed: {check.witness}")
    return g


def cmd_fold(args, out):
    tower = load_tower(args.tower, args.degree_bound)
    words, _ = parse_generators(_read(args.group), tower, where=args.group)
    g = _fold(words, tower, args)
    out.write(dump_graph(g))
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(to_dot(g))
    return 0


def cmd_member(args, out):
    tower = load_tower(args.tower, args.degree_bound)
    words, named = parse_generators(_read(args.group), tower, where=args.group)
    if args.subgroup:
        words, _ = parse_generators(_read(args.subgroup), tower, named, where=args.subgroup)
    try:
        w = parse_word(args.word, tower)
    except WordSyntaxError as err:
        raise InputError(f"word: {err}") from None
    if not validate_standard(w, tower):
        if not args.normalize:
            raise InputError("word is not in standard form (use --normalize)")
        w = normalize(w, tower)
    g = _fold(words, tower, args)
    yes = member(g, w)
    out.write("YES\n" if yes else "NO\n")
    return 0 if yes else 1


def cmd_index(args, out):
    tower = load_tower(args.tower, args.degree_bound)
    gwords, named = parse_generators(_read(args.group), tower, where=args.group)
    hwords, _ = parse_generators(_read(args.subgroup), tower, named, where=args.subgroup)
    gG = _fold(gwords, tower, args)
    gH = _fold(hwords, tower, args)
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(to_dot(gG, "G") + to_dot(gH, "H"))
    try:
        v = decide_index(gG, gH, gens=gwords, budget=args.budget)
    except BudgetExceeded as err:
        out.write(f"BUDGET-EXCEEDED {err.reached}\n")
        return EXIT_BUDGET
    except NotASubgroup as err:
        raise InputError(str(err)) from None
    out.write(v.render(tower))
    return 0 if v.finite else 1


def build_parser():
    p = argparse.ArgumentParser(prog="lyndon_index", description="Finite index and membership for subgroups of F^Z[t].")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--tower", required=True, help="tower file")
        sp.add_argument("--group", required=True, help="generators of G")
        sp.add_argument("--budget", type=_positive, default=DEFAULT_BUDGET)
        sp.add_argument("--degree-bound", type=_positive, default=None)
        sp.add_argument("--closure-power", type=_positive, default=DEFAULT_CLOSURE_POWER)
        sp.add_argument("--assert-len", type=_positive, default=None)
        sp.add_argument("--dot", default=None, help="write DOT here")

    common(sub.add_parser("fold", help="print the folded graph of G"))
    m = sub.add_parser("member", help="membership of a word in G (or in --subgroup)")
    common(m)
    m.add_argument("--subgroup", default=None)
    m.add_argument("--normalize", action="store_true", help="accept words not in standard form")
    m.add_argument("word")
    i = sub.add_parser("index", help="decide whether |G:H| is finite")
    common(i)
    i.add_argument("--subgroup", required=True)
    return p


def _positive(text):
    n = int(text)
    if n <= 0:
        raise argparse.ArgumentTypeError("expected a positive integer")
    return n


COMMANDS = {"fold": cmd_fold, "member": cmd_member, "index": cmd_index}


def main(argv=None, out=None, err=None):
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as e:
        return EXIT_ERROR if e.code else 0
    try:
        return COMMANDS[args.command](args, out)
    except (InputError, FoldingError, DegreeOverflow) as e:
        err.write(f"error: {e}\n")
        return EXIT_ERROR
