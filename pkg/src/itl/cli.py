"""Command-line entry point.

Every subcommand prints a human-readable report followed by one
``RESULT:`` line.  Exit status is 0 when all checks pass, 1 when a check
fails and 2 on bad input.  Evaluation subcommands only answer a query, so
a ``false`` answer still exits 0.
"""
from __future__ import annotations

import argparse
import sys
from fractions import Fraction
from pathlib import Path

from . import harness, kripke, realline
from .proofs import ProofError, check_derivation, parse_derivation, system
from .quasimodel import load_quasimodel, validate_quasimodel
from .syntax import ParseError, closure, fragment, length, parse, render, temporal_depth
from .unwind import UnwindError, conservativity_check, weak_limit


class InputError(Exception):
    pass


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as e:
        raise InputError(f"cannot read {path}: {e.strerror}") from e


def _formula(text: str | None):
    if text is None:
        raise InputError("--formula is required")
    return parse(text)


def _need(value, flag: str):
    if value is None:
        raise InputError(f"{flag} is required")
    return value


def cmd_parse(a, out) -> int:
    f = _formula(a.formula)
    print(f"ast: {f!r}", file=out)
    print(f"length: {length(f)}", file=out)
    print(f"temporal depth: {temporal_depth(f)}", file=out)
    print(f"fragment: {fragment(f)}", file=out)
    print(f"subformulas: {len(closure(f))}", file=out)
    print(f"RESULT: {render(f)}", file=out)
    return 0


def cmd_eval_kripke(a, out) -> int:
    m = kripke.load_model(_read(_need(a.model, "--model")), preorder=a.preorder)
    f = _formula(a.formula)
    rep = kripke.validate_model(m)
    for line in rep.lines():
        print(line, file=out)
    if not rep.valid:
        print("RESULT: invalid-model", file=out)
        return 1
    truth = kripke.eval(m, f)
    print(f"{render(f)} holds at {{{', '.join(m.names(truth))}}}", file=out)
    if a.at is not None:
        try:
            got = kripke.holds_at(m, f, a.at)
        except KeyError as e:
            raise InputError(f"unknown world {a.at}") from e
        print(f"RESULT: {'true' if got else 'false'}", file=out)
    else:
        ok, wit = kripke.check_validity(m, f)
        print(f"RESULT: {'valid' if ok else 'not-valid at ' + wit}", file=out)
    return 0


def cmd_eval_real(a, out) -> int:
    v = realline.parse_valuation(_need(a.val, "--val"))
    f = _formula(a.formula)
    s = realline.eval_real(v, f)
    print(f"{render(f)} denotes {s}", file=out)
    if a.at is not None:
        try:
            x = Fraction(a.at)
        except (ValueError, ZeroDivisionError) as e:
            raise InputError(f"not a rational point: {a.at}") from e
        print(f"RESULT: {'true' if s.member(x) else 'false'}", file=out)
    else:
        print(f"RESULT: {s}", file=out)
    return 0


def cmd_check_proof(a, out) -> int:
    d = parse_derivation(_read(_need(a.proof, "--proof")))
    sys_ = system(a.system)
    v = check_derivation(d, sys_)
    print(f"system: {sys_.name}", file=out)
    print(f"lines: {len(d.lines)}", file=out)
    if d.goal is not None:
        print(f"goal: {render(d.goal)}", file=out)
    print(f"RESULT: {v}", file=out)
    return 0 if v.ok else 1


def cmd_qm_validate(a, out) -> int:
    q = load_quasimodel(_read(_need(a.qm, "--qm")))
    rep = validate_quasimodel(q)
    for line in rep.lines():
        print(line, file=out)
    print(f"RESULT: {'valid' if rep else 'invalid'}", file=out)
    return 0 if rep else 1


def cmd_unwind(a, out) -> int:
    q = load_quasimodel(_read(_need(a.qm, "--qm")))
    f = _formula(a.formula)
    world = _need(a.at, "--at")
    rep = conservativity_check(q, f, world, a.mode, bound=a.bound)
    wl = weak_limit(q, rep.bounds[0])
    print("# truncated model", file=out)
    print(wl.to_text(), file=out)
    print("# report", file=out)
    for line in rep.lines():
        print(line, file=out)
    print(f"RESULT: {'pass' if rep.ok else 'fail'}", file=out)
    return 0 if rep.ok else 1


def cmd_fixtures(a, out) -> int:
    results = harness.run_fixtures()
    for r in results:
        print(f"{'PASS' if r.ok else 'FAIL'} {r.name} [{r.anchor}]: {r.detail}", file=out)
    matrix = harness.distinctness_matrix("full")
    print("", file=out)
    for line in harness.format_matrix(matrix):
        print(line, file=out)
    seps = harness.systems_distinct(matrix)
    for x, y, f in seps:
        print(f"{f} separates {x} from {y}", file=out)
    pairs = len(harness.SYSTEM_ORDER) * (len(harness.SYSTEM_ORDER) - 1) // 2
    bad = [r.name for r in results if not r.ok]
    if len(seps) < pairs:
        bad.append("distinctness")
    if bad:
        print(f"RESULT: fail ({', '.join(bad)})", file=out)
        return 1
    print(f"RESULT: pass ({len(results)} fixtures, {len(seps)} separated pairs)", file=out)
    return 0


def cmd_fuzz(a, out) -> int:
    cfg = harness.FuzzConfig(a.system, a.model_class, a.trials, a.max_worlds, a.depth, a.seed)
    try:
        rep = harness.fuzz_soundness(cfg)
    except kripke.GenerationFailure as e:
        raise InputError(str(e)) from e
    print(f"system: {cfg.system}  class: {cfg.model_class}  trials: {cfg.trials}  seed: {cfg.seed}", file=out)
    print(f"instances checked: {rep.checked}  rule checks: {rep.rule_checks}", file=out)
    print(f"expected counterexamples: {len(rep.expected_found)}", file=out)
    print(f"unexpected counterexamples: {len(rep.unexpected)}", file=out)
    shown = rep.unexpected[:3] or rep.expected_found[:1]
    for c in shown:
        print(f"-- trial {c.trial}, {c.schema}: {c.formula}", file=out)
        print(c.model.rstrip(), file=out)
    print(f"RESULT: {rep.verdict}", file=out)
    return 1 if rep.verdict == "fail" else 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="itl", description="Intuitionistic temporal logic workbench")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("parse", help="parse and describe a formula")
    s.add_argument("--formula")
    s.set_defaults(run=cmd_parse)

    s = sub.add_parser("eval-kripke", help="evaluate on a finite dynamic poset model")
    s.add_argument("--model")
    s.add_argument("--formula")
    s.add_argument("--at")
    s.add_argument("--preorder", action="store_true", help="quotient a preorder instead of rejecting cycles")
    s.set_defaults(run=cmd_eval_kripke)

    s = sub.add_parser("eval-real", help="evaluate on the real line under doubling")
    s.add_argument("--val")
    s.add_argument("--formula")
    s.add_argument("--at")
    s.set_defaults(run=cmd_eval_real)

    s = sub.add_parser("check-proof", help="check a Hilbert derivation")
    s.add_argument("--proof")
    s.add_argument("--system", default="itl0")
    s.set_defaults(run=cmd_check_proof)

    s = sub.add_parser("qm-validate", help="validate a quasimodel")
    s.add_argument("--qm")
    s.set_defaults(run=cmd_qm_validate)

    s = sub.add_parser("unwind", help="unwind a quasimodel and check a verdict")
    s.add_argument("--qm")
    s.add_argument("--formula")
    s.add_argument("--at")
    s.add_argument("--mode", choices=("satisfy", "falsify"), default="satisfy")
    s.add_argument("--bound", type=int)
    s.set_defaults(run=cmd_unwind)

    s = sub.add_parser("fixtures", help="run the fixture corpus and distinctness matrix")
    s.set_defaults(run=cmd_fixtures)

    s = sub.add_parser("fuzz-soundness", help="randomized soundness check")
    s.add_argument("--system", default="itl0")
    s.add_argument("--class", dest="model_class", default="cont", choices=harness.MODEL_CLASSES)
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--max-worlds", type=int, default=6)
    s.add_argument("--depth", type=int, default=3)
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(run=cmd_fuzz)
    return p


def run_command(argv: list[str] | None = None, out=None) -> int:
    out = out if out is not None else sys.stdout
    parser = build_parser()
    try:
        a = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code else 0
    try:
        return a.run(a, out)
    except (InputError, ParseError, ProofError, realline.RealLineError, kripke.CycleError,
            kripke.ModelInvalid, UnwindError, ValueError, KeyError) as e:
        print(f"error: {type(e).__name__}: {e}", file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(run_command())


if __name__ == "__main__":
    main()
