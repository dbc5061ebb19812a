"""Fixture corpus, the system distinctness matrix and randomized soundness fuzzing."""
from __future__ import annotations

import json
import random
from dataclasses import dataclass, field
from fractions import Fraction
from importlib import resources

from . import kripke, realline
from .proofs import (SCHEMAS, Derivation, Justification, Line, LogicSystem,
                     BadIndex, check_derivation, parse_derivation, system)
from .quasimodel import load_quasimodel
from .syntax import (Atom, Eventually, Henceforth, Implies, Next, parse,
                     random_formula, render, fragment_ops)
from .unwind import conservativity_check


def data_text(name: str) -> str:
    return resources.files("itl").joinpath("data", name).read_text()


def load_corpus() -> list[dict]:
    return json.loads(data_text("fixtures.json"))["cases"]


# ---------------------------------------------------------------------------
# fixtures

@dataclass
class FixtureResult:
    name: str
    anchor: str
    ok: bool
    detail: str


def _run_kripke(case) -> tuple[bool, str]:
    m = kripke.load_model(data_text(case["model"]))
    f = parse(case["formula"])
    truth = kripke.eval(m, f)
    if "at" in case:
        got = kripke.holds_at(m, f, case["at"])
        return got == case["expect"], f"{case['formula']} at {case['at']}: {got}"
    if "valid" in case:
        got, wit = kripke.check_validity(m, f)
        return got == case["expect"], f"{case['formula']} valid: {got}" + (f" (fails at {wit})" if wit else "")
    got = sorted(m.names(truth))
    return got == sorted(case["expect"]), f"{case['formula']} holds at {got}"


def _run_real(case) -> tuple[bool, str]:
    v = realline.parse_valuation(case["val"])
    f = parse(case["formula"])
    s = realline.eval_real(v, f)
    if "at" in case:
        got = s.member(Fraction(case["at"]))
        return got == case["expect"], f"{case['formula']} at {case['at']}: {got}"
    want = realline.parse_set(case["expect"])
    return s == want, f"{case['formula']} denotes {s}"


def _run_proof(case) -> tuple[bool, str]:
    d = parse_derivation(data_text(case["proof"]))
    v = check_derivation(d, system(case["system"]))
    return v.ok == case["expect"], f"{len(d.lines)} lines, {v}"


def _run_unwind(case) -> tuple[bool, str]:
    q = load_quasimodel(data_text(case["qm"]))
    rep = conservativity_check(q, parse(case["formula"]), case["at"], case["mode"])
    return rep.ok == case["expect"], (f"{case['mode']} {case['formula']} at {case['at']}: "
                                      f"verdicts {rep.verdicts} at bounds {rep.bounds}")


_RUNNERS = {"kripke": _run_kripke, "real": _run_real, "proof": _run_proof, "unwind": _run_unwind}


def run_fixtures(cases: list[dict] | None = None) -> list[FixtureResult]:
    out = []
    for case in cases if cases is not None else load_corpus():
        try:
            ok, detail = _RUNNERS[case["kind"]](case)
        except Exception as e:  # a broken fixture is a failed fixture
            ok, detail = False, f"error: {type(e).__name__}: {e}"
        out.append(FixtureResult(case["name"], case.get("anchor", ""), ok, detail))
    return out


# ---------------------------------------------------------------------------
# distinctness

SYSTEM_ORDER = ("itl0", "itl-fs", "itl-cd", "itl1")


@dataclass
class MatrixEntry:
    formula: str
    system: str
    status: str     # 'axiom', 'derived', 'refuted' or 'open'
    reason: str


def _sound_on_posets(base: str) -> bool:
    return base in ("itl0", "itl-cd")


def _sound_on_open_systems(base: str) -> bool:
    return base in ("itl0", "itl-fs")


def distinctness_matrix(fragment: str = "full") -> list[MatrixEntry]:
    """Membership of the separating formulas in each system.

    Membership is shown by a checked derivation; non-membership by a
    countermodel from a class the system is sound for: the three-world
    non-open poset model refutes the Fischer Servi formulas, the doubling
    map on the line (an open system) refutes the constant-domain ones.
    """
    poset = kripke.load_model(data_text("nonopen_poset.itl"))
    line_val = realline.parse_valuation("p=(-inf,1); q=(0,inf)")
    cd_to_bi = parse_derivation(data_text("cd_to_bi.proof"))
    p, q = Atom("p"), Atom("q")
    rows = [("fs-next", SCHEMAS["fs-next"].instantiate(phi=p, psi=q)),
            ("fs-dia", SCHEMAS["fs-dia"].instantiate(phi=p, psi=q)),
            ("cd", SCHEMAS["cd"].instantiate(phi=p, psi=q)),
            ("bi", SCHEMAS["bi"].instantiate(phi=p, psi=q))]
    out = []
    for name, f in rows:
        refuted_poset = not kripke.check_validity(poset, f)[0]
        refuted_line = not realline.eval_real(line_val, f).is_full
        for base in SYSTEM_ORDER:
            sys = LogicSystem(base, fragment)
            if not sys.admits(f):
                out.append(MatrixEntry(name, sys.name, "n/a", "outside the fragment"))
                continue
            one = Derivation([Line(1, f, Justification("axiom", schema=name))])
            if check_derivation(one, sys).ok:
                out.append(MatrixEntry(name, sys.name, "axiom", "one-line derivation"))
                continue
            if name == "bi" and sys.has_cd and check_derivation(_with_cd_axiom(cd_to_bi, f), sys).ok:
                out.append(MatrixEntry(name, sys.name, "derived", "cd axiom plus the cd -> bi derivation"))
                continue
            if refuted_poset and _sound_on_posets(base):
                out.append(MatrixEntry(name, sys.name, "refuted", "fails on the non-open poset model"))
            elif refuted_line and _sound_on_open_systems(base):
                out.append(MatrixEntry(name, sys.name, "refuted", "fails at 0 under doubling on the line"))
            else:
                out.append(MatrixEntry(name, sys.name, "open", "no certificate"))
    return out


def _with_cd_axiom(cd_to_bi: Derivation, goal) -> Derivation:
    """Append ``cd`` as an axiom line and finish with modus ponens."""
    last = cd_to_bi.lines[-1]
    cd = last.formula.left
    n = last.label
    lines = list(cd_to_bi.lines) + [
        Line(n + 1, cd, Justification("axiom", schema="cd")),
        Line(n + 2, goal, Justification("mp", (n + 1, n))),
    ]
    return Derivation(lines, goal)


def systems_distinct(matrix: list[MatrixEntry]) -> list[tuple[str, str, str]]:
    """For each unordered pair of systems a formula separating them."""
    member = {(e.system, e.formula) for e in matrix if e.status in ("axiom", "derived")}
    refuted = {(e.system, e.formula) for e in matrix if e.status == "refuted"}
    names = [e.system for e in matrix[: len(SYSTEM_ORDER)]]
    out = []
    forms = sorted({e.formula for e in matrix})
    for i, a in enumerate(names):
        for b in names[i + 1:]:
            for x, y in ((a, b), (b, a)):
                f = next((f for f in forms if (x, f) in member and (y, f) in refuted), None)
                if f is not None:
                    out.append((x, y, f))
                    break
    return out


def format_matrix(matrix: list[MatrixEntry]) -> list[str]:
    names = [e.system for e in matrix[: len(SYSTEM_ORDER)]]
    forms = []
    for e in matrix:
        if e.formula not in forms:
            forms.append(e.formula)
    cell = {(e.formula, e.system): e.status for e in matrix}
    width = max(len(n) for n in names) + 2
    out = ["".ljust(10) + "".join(n.ljust(width) for n in names)]
    for f in forms:
        out.append(f.ljust(10) + "".join(cell[(f, n)].ljust(width) for n in names))
    return out


# ---------------------------------------------------------------------------
# mutations of a derivation

def mutations(d: Derivation, count: int = 20) -> list[tuple[str, Derivation]]:
    """Single-line corruptions: atom swaps, index shifts, rule swaps, schema swaps."""
    swap = {Atom("p"): Atom("q"), Atom("q"): Atom("p")}
    from .proofs import substitute

    def replace(k: int, line: Line) -> Derivation:
        lines = list(d.lines)
        lines[k] = line
        return Derivation(lines, d.goal)

    per = count // 4
    buckets: dict[str, list] = {"atom": [], "index": [], "rule": [], "schema": []}
    rule_lines = [k for k, ln in enumerate(d.lines) if ln.why.kind != "axiom"]
    axiom_lines = [k for k, ln in enumerate(d.lines) if ln.why.kind == "axiom"]
    step = max(1, len(rule_lines) // (per + 1))
    for k in rule_lines[::step]:
        ln = d.lines[k]
        f2 = substitute(ln.formula, swap)
        if f2 != ln.formula and len(buckets["atom"]) < per:
            buckets["atom"].append((f"swap p/q on line {ln.label}", replace(k, Line(ln.label, f2, ln.why))))
    for k in rule_lines[::step]:
        ln = d.lines[k]
        refs = (ln.why.refs[0] - 1,) + ln.why.refs[1:]
        if refs[0] >= 1 and len(buckets["index"]) < per:
            buckets["index"].append((f"shift first premise of line {ln.label}",
                                     replace(k, Line(ln.label, ln.formula, Justification(ln.why.kind, refs)))))
    others = {"mp": "nec", "nec": "indbox", "indbox": "inddia", "inddia": "indbox"}
    special = [k for k in rule_lines if d.lines[k].why.kind in ("nec", "indbox", "inddia")]
    for k in special + rule_lines[::step]:
        ln = d.lines[k]
        kind = others[ln.why.kind]
        refs = ln.why.refs[:1]
        if len(buckets["rule"]) < per:
            buckets["rule"].append((f"{ln.why.kind} -> {kind} on line {ln.label}",
                                    replace(k, Line(ln.label, ln.formula, Justification(kind, refs)))))
    names = list(SCHEMAS)
    astep = max(1, len(axiom_lines) // (per + 1))
    for k in axiom_lines[::astep]:
        ln = d.lines[k]
        other = names[(names.index(ln.why.schema) + 1) % len(names)]
        if len(buckets["schema"]) < per:
            buckets["schema"].append((f"schema {ln.why.schema} -> {other} on line {ln.label}",
                                      replace(k, Line(ln.label, ln.formula, Justification("axiom", schema=other)))))
    out = []
    for key in ("atom", "index", "rule", "schema"):
        out.extend(buckets[key])
    return out


def rejected(d: Derivation, sys: LogicSystem) -> bool:
    try:
        return not check_derivation(d, sys).ok
    except BadIndex:
        return True


# ---------------------------------------------------------------------------
# soundness fuzzing

MODEL_CLASSES = ("cont", "open", "pers", "nonopen", "real")


@dataclass
class FuzzConfig:
    system: str = "itl0"
    model_class: str = "cont"
    trials: int = 100
    max_worlds: int = 6
    depth: int = 3
    seed: int = 0
    per_schema: int = 1


@dataclass
class Counterexample:
    trial: int
    schema: str
    formula: str
    model: str
    expected: bool


@dataclass
class FuzzReport:
    config: FuzzConfig
    checked: int = 0
    rule_checks: int = 0
    counterexamples: list[Counterexample] = field(default_factory=list)

    @property
    def unexpected(self) -> list[Counterexample]:
        return [c for c in self.counterexamples if not c.expected]

    @property
    def expected_found(self) -> list[Counterexample]:
        return [c for c in self.counterexamples if c.expected]

    @property
    def expects_counterexamples(self) -> bool:
        return bool(unsound_schemas(system(self.config.system), self.config.model_class))

    @property
    def verdict(self) -> str:
        if self.unexpected:
            return "fail"
        if self.expects_counterexamples and not self.expected_found:
            return "suspicious"
        return "pass"


def fuzz_schemas(sys: LogicSystem) -> list[str]:
    """Admitted schemas, plus ``bi`` for constant-domain systems (derivable there)."""
    names = list(sys.schema_names())
    if sys.has_cd and "bi" not in names and sys.admits(SCHEMAS["bi"].template):
        names.append("bi")
    return names


def unsound_schemas(sys: LogicSystem, cls: str) -> set[str]:
    """Schemas of ``sys`` that are not sound on the model class ``cls``."""
    cls = {"continuous": "cont", "persistent": "pers"}.get(cls, cls)
    bad = set()
    if cls in ("cont", "nonopen"):
        bad |= {"fs-next", "fs-dia"}
    if cls == "real":
        bad |= {"cd", "bi"}
    return bad & set(fuzz_schemas(sys))


def fuzz_soundness(cfg: FuzzConfig) -> FuzzReport:
    sys = system(cfg.system)
    rep = FuzzReport(cfg)
    names = fuzz_schemas(sys)
    expected_bad = unsound_schemas(sys, cfg.model_class)
    ops = fragment_ops(sys.fragment)
    for trial in range(cfg.trials):
        rng = random.Random(cfg.seed * 1_000_003 + trial)
        if cfg.model_class == "real":
            val = {a: realline.random_set(rng) for a in "pqr"}
            valid = lambda f: realline.eval_real(val, f).is_full
            describe = lambda: "; ".join(f"{a}={val[a]}" for a in "pqr")
        else:
            # three worlds is the smallest poset carrying a non-open map
            n = rng.randint(3 if cfg.model_class == "nonopen" else 1, max(cfg.max_worlds, 3))
            m = kripke.gen_random_model(rng.randrange(2**32), n, cfg.model_class)
            valid = lambda f, m=m: kripke.check_validity(m, f)[0]
            describe = lambda m=m: kripke.dump_model(m)
        for name in names:
            schema = SCHEMAS[name]
            for _ in range(cfg.per_schema):
                fill = {v: random_formula(rng, rng.randint(0, cfg.depth), ops=ops) for v in schema.metavars}
                f = schema.instantiate(**fill)
                if not sys.admits(f):
                    continue
                rep.checked += 1
                if not valid(f):
                    rep.counterexamples.append(Counterexample(trial, name, render(f), describe(),
                                                              name in expected_bad))
        rep.rule_checks += _rule_checks(rng, valid, ops, trial, rep, describe)
    return rep


def _rule_checks(rng, valid, ops, trial, rep, describe) -> int:
    """Rules must carry model-validity of premises to their conclusions."""
    done = 0
    for _ in range(4):
        phi = random_formula(rng, 2, ops=ops)
        psi = random_formula(rng, 2, ops=ops)
        pairs = [("nec", [phi], Next(phi)),
                 ("mp", [phi, Implies(phi, psi)], psi)]
        if "henceforth" in ops:
            pairs.append(("indbox", [Implies(phi, Next(phi))], Implies(phi, Henceforth(phi))))
        if "eventually" in ops:
            pairs.append(("inddia", [Implies(Next(phi), phi)], Implies(Eventually(phi), phi)))
        for rule, prem, concl in pairs:
            if all(valid(f) for f in prem):
                done += 1
                if not valid(concl):
                    rep.counterexamples.append(Counterexample(trial, f"rule {rule}", render(concl),
                                                              describe(), False))
    return done
