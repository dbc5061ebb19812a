"""Acceptance checks 1-8.  Each prints one PASS/FAIL line.

Run ``pytest tests/test_acceptance.py -v`` or ``python tests/test_acceptance.py``.
"""
from __future__ import annotations

import random
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))
from helpers import closed_subset, random_quasimodel, typed_model  # noqa: E402

from itl import kripke, realline  # noqa: E402
from itl.harness import FuzzConfig, data_text, fuzz_soundness, mutations, rejected  # noqa: E402
from itl.proofs import (SCHEMAS, check_derivation, enumerate_axiom_instances,  # noqa: E402
                        parse_derivation, system)
from itl.quasimodel import (delete_realized, is_type, leq_t, load_quasimodel,  # noqa: E402
                            maximal_temporal, restrict, sqsub_t, step_t)
from itl.syntax import Atom, Next, closure_of, parse, random_formula  # noqa: E402
from itl.unwind import check_typed_path, conservativity_check, extend_bound, extend_terminal  # noqa: E402

P, Q = Atom("p"), Atom("q")


def report(num: int, title: str, ok: bool, detail: str) -> str:
    return f"[{num}] {'PASS' if ok else 'FAIL'} {title}: {detail}"


def poset_independence():
    t0 = time.perf_counter()
    m = kripke.load_model(data_text("nonopen_poset.itl"))
    fs_next = kripke.holds_at(m, SCHEMAS["fs-next"].instantiate(phi=P, psi=Q), "w0")
    fs_dia = kripke.holds_at(m, SCHEMAS["fs-dia"].instantiate(phi=P, psi=Q), "w0")
    inst = enumerate_axiom_instances(system("itl-cd"), 2, 0, 100)
    bad = [f for f in inst if not kripke.check_validity(m, f)[0]]
    dt = time.perf_counter() - t0
    ok = not fs_next and not fs_dia and not bad and dt < 1
    return ok, f"FS next/dia at w0 = {fs_next}/{fs_dia}, {len(inst) - len(bad)}/100 CD-system instances valid, {dt:.2f}s"


def line_independence():
    t0 = time.perf_counter()
    v = realline.parse_valuation("p=(-inf,1); q=(0,inf)")
    cd = realline.eval_real(v, SCHEMAS["cd"].instantiate(phi=P, psi=Q)).member(0)
    bi = realline.eval_real(v, SCHEMAS["bi"].instantiate(phi=P, psi=Q)).member(0)
    box_or = realline.eval_real(v, parse("[](p | q)"))
    box_p = realline.eval_real(v, parse("[]p"))
    dt = time.perf_counter() - t0
    ok = (not cd and not bi and box_or == realline.REALS
          and box_p == realline.parse_set("(-inf,0)") and dt < 1)
    return ok, f"CD/BI at 0 = {cd}/{bi}, [](p|q) = {box_or}, []p = {box_p}, {dt:.2f}s"


def soundness_fuzz():
    t0 = time.perf_counter()
    parts = []
    ok = True
    for sys_, cls in (("itl-cd", "cont"), ("itl1", "pers"), ("itl-fs", "open")):
        rep = fuzz_soundness(FuzzConfig(sys_, cls, 500, max_worlds=6, depth=3, seed=0))
        ok &= not rep.counterexamples
        parts.append(f"{sys_}/{cls}: {rep.checked} instances, {len(rep.counterexamples)} counterexamples")
    dt = time.perf_counter() - t0
    return ok and dt < 60, "; ".join(parts) + f", {dt:.1f}s"


def box_equivalence():
    rng = random.Random(0)
    checked = 0
    for _ in range(200):
        m = kripke.gen_random_model(rng.randrange(2**32), rng.randint(1, 6), "continuous")
        for _ in range(3):
            a, b, c = kripke.box_variants(m, random_formula(rng, 3))
            if not a == b == c:
                return False, f"disagreement on\n{kripke.dump_model(m)}"
            checked += 1
    return True, f"{checked} formula/model pairs on 200 models, all three agree"


def type_properties():
    rng = random.Random(0)
    counts = dict.fromkeys(["restrict", "cross", "step-restrict", "delete-next", "delete-dia"], 0)
    fails = []
    while min(counts.values()) < 1000:
        m, sigma, types = typed_model(rng)
        for w in range(m.size):
            phi, psi = types[w], types[m.step[w]]
            gamma = restrict(phi, closed_subset(rng, sigma))
            counts["restrict"] += 1
            if not is_type(gamma):
                fails.append("restrict")
            for v in range(m.size):
                if m.leq(w, v):
                    counts["cross"] += 1
                    mid = restrict(types[v], closed_subset(rng, sigma))
                    if not (leq_t(gamma, types[v]) and (not leq_t(phi, mid) or leq_t(phi, types[v]))):
                        fails.append("cross")
            big = closure_of(gamma.pos) | closed_subset(rng, sigma)
            counts["step-restrict"] += 1
            if not (sqsub_t(gamma, phi) and step_t(gamma, restrict(psi, big))):
                fails.append("step-restrict")
            for f in maximal_temporal(phi):
                key = "delete-next" if isinstance(f, Next) else "delete-dia"
                if key == "delete-dia" and f.arg not in phi.pos:
                    continue
                out = delete_realized(psi, f)
                counts[key] += 1
                if not (is_type(out) and step_t(phi, out)):
                    fails.append(key)
    detail = ", ".join(f"{k} {n}" for k, n in counts.items())
    return not fails, detail + (f"; failures: {sorted(set(fails))}" if fails else "")


def terminal_extension():
    rng = random.Random(0)
    paths = 0
    for _ in range(100):
        q = random_quasimodel(rng, max_worlds=4, max_len=6)
        for w in range(q.size):
            tp = ((w, q.labels[w]),)
            path = extend_terminal(q, tp)
            rep = check_typed_path(q, path)
            if len(path) > extend_bound(q, tp) or not (rep.valid and rep.terminal):
                return False, f"bad extension from {q.worlds[w]}: {rep.problems}"
            paths += 1
    return True, f"100 quasimodels, {paths} extensions terminal and within bound"


def conservativity():
    cases = [("loop.qm", "<>p", "w", "satisfy"), ("two_world.qm", "p -> q", "r", "falsify"),
             ("branching.qm", "O(p | r)", "u", "satisfy"), ("branching.qm", "<>(p & r)", "u", "falsify")]
    parts = []
    ok = not load_quasimodel(data_text("branching.qm")).is_deterministic
    for qm, f, w, mode in cases:
        rep = conservativity_check(load_quasimodel(data_text(qm)), parse(f), w, mode)
        ok &= rep.ok
        parts.append(f"{qm} {mode} {f}: {rep.verdicts} at {rep.bounds}, models valid {all(rep.model_valid)}")
    return ok, "; ".join(parts)


def proof_checker():
    d = parse_derivation(data_text("cd_to_bi.proof"))
    accepted = check_derivation(d, system("itl0")).ok
    muts = mutations(d, 20)
    caught = sum(rejected(x, system("itl0")) for _, x in muts)
    rng = random.Random(0)
    invalid = 0
    for _ in range(50):
        m = kripke.gen_random_model(rng.randrange(2**32), rng.randint(1, 6), "continuous")
        invalid += sum(not kripke.check_validity(m, ln.formula)[0] for ln in d.lines)
    ok = accepted and len(muts) == 20 and caught == 20 and invalid == 0
    return ok, (f"derivation accepted {accepted}, {caught}/{len(muts)} mutations rejected, "
                f"{invalid} invalid line/model pairs over 50 models")


CHECKS = [
    (1, "independence on the three-world poset", poset_independence),
    (2, "independence on the doubling line", line_independence),
    (3, "soundness fuzz", soundness_fuzz),
    (4, "three henceforth computations agree", box_equivalence),
    (5, "type machinery properties", type_properties),
    (6, "terminal extension", terminal_extension),
    (7, "conservativity of unwinding", conservativity),
    (8, "proof checker", proof_checker),
]


@pytest.mark.parametrize("num, title, fn", CHECKS, ids=[f"{n}-{t.replace(' ', '-')}" for n, t, _ in CHECKS])
def test_acceptance(num, title, fn, capsys):
    ok, detail = fn()
    with capsys.disabled():
        print("\n" + report(num, title, ok, detail))
    assert ok, detail


if __name__ == "__main__":
    status = 0
    for num, title, fn in CHECKS:
        ok, detail = fn()
        print(report(num, title, ok, detail))
        status |= not ok
    sys.exit(status)
