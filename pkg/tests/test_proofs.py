import random

import pytest

from itl import kripke
from itl.derive import Builder, cd_implies_bi
from itl.harness import data_text, mutations, rejected
from itl.proofs import (SCHEMAS, BadIndex, Derivation, DerivationSyntaxError, Justification, Line,
                        LogicSystem, check_derivation, enumerate_axiom_instances, format_derivation,
                        match_schema, parse_derivation, system)
from itl.syntax import Atom, Implies, parse

ITL0 = system("itl0")
CD_TO_BI = parse_derivation(data_text("cd_to_bi.proof"))


def deriv(*rows):
    lines = []
    for k, (text, why) in enumerate(rows, 1):
        lines.append(Line(k, parse(text), why))
    return Derivation(lines)


def ax(name):
    return Justification("axiom", schema=name)


def test_system_names():
    assert system("itl1-box") == LogicSystem("itl1", "box")
    assert system("ITL-CD").fragment == "full"
    assert "fs-next" in system("itl-fs").schema_names()
    assert "cd" not in system("itl-fs").schema_names()
    assert "bi" in system("itl-cd-box").schema_names()
    assert "cd" not in system("itl-cd-box").schema_names()
    with pytest.raises(ValueError):
        system("itl2")


def test_match_schema():
    f = parse("[](p & q | r) -> [](p & q) | <>r")
    sigma = match_schema(f, SCHEMAS["cd"])
    assert sigma == {"phi": parse("p & q"), "psi": parse("r")}
    assert match_schema(parse("[](p | q) -> []q | <>q"), SCHEMAS["cd"]) is None


def test_instantiate_then_match_roundtrip():
    for f in enumerate_axiom_instances(system("itl1"), 3, 7, 300):
        assert any(match_schema(f, s) is not None for s in SCHEMAS.values())


def test_small_derivation_accepted():
    d = deriv(("p -> q -> p", ax("i1")),
              ("O(p -> q -> p)", Justification("nec", (1,))))
    assert check_derivation(d, ITL0).ok


def test_modus_ponens_either_order():
    base = [("p -> q -> p", ax("i1")), ("(p -> q -> p) -> r -> p -> q -> p", ax("i1"))]
    assert check_derivation(deriv(*base, ("r -> p -> q -> p", Justification("mp", (1, 2)))), ITL0).ok
    assert check_derivation(deriv(*base, ("r -> p -> q -> p", Justification("mp", (2, 1)))), ITL0).ok
    bad = deriv(*base, ("r -> q", Justification("mp", (1, 2))))
    v = check_derivation(bad, ITL0)
    assert not v.ok and v.line == 3


def test_induction_rules():
    b = Builder()
    a = b.identity(parse("p"))
    back = b.mp(a, b.axiom("i1", phi="p -> p", psi="O(p -> p)"))
    d = b.derivation(b.inddia(back))
    assert d.lines[-1].formula == parse("<>(p -> p) -> p -> p")
    assert check_derivation(d, ITL0).ok
    fwd = b.mp(b.nec(a), b.axiom("i1", phi="O(p -> p)", psi="p -> p"))
    d = b.derivation(b.indbox(fwd))
    assert d.lines[-1].formula == parse("(p -> p) -> [](p -> p)")
    assert check_derivation(d, ITL0).ok
    last = d.lines[-1]
    d.lines[-1] = Line(last.label, parse("(p -> p) -> <>(p -> p)"), last.why)
    assert not check_derivation(d, ITL0).ok


def test_schema_must_be_admitted():
    d = deriv(("(O p -> O q) -> O(p -> q)", ax("fs-next")))
    assert not check_derivation(d, ITL0).ok
    assert check_derivation(d, system("itl-fs")).ok
    assert check_derivation(d, system("itl1")).ok
    assert not check_derivation(d, system("itl-cd")).ok


def test_fragment_enforced():
    d = deriv(("[]p -> p & O[]p", ax("ix")))
    assert check_derivation(d, system("itl0-box")).ok
    assert not check_derivation(d, system("itl0-dia")).ok


def test_forward_reference_raises():
    d = deriv(("p -> q -> p", ax("i1")), ("O(p -> q -> p)", Justification("nec", (2,))))
    with pytest.raises(BadIndex):
        check_derivation(d, ITL0)


def test_goal_mismatch():
    d = deriv(("p -> q -> p", ax("i1")))
    d.goal = parse("q -> p -> q")
    assert not check_derivation(d, ITL0).ok


def test_prop_fixture_accepted_and_roundtrips():
    assert check_derivation(CD_TO_BI, ITL0).ok
    pq = {"phi": Atom("p"), "psi": Atom("q")}
    assert CD_TO_BI.goal == Implies(SCHEMAS["cd"].instantiate(**pq), SCHEMAS["bi"].instantiate(**pq))
    again = parse_derivation(format_derivation(CD_TO_BI))
    assert [ln.formula for ln in again.lines] == [ln.formula for ln in CD_TO_BI.lines]
    assert check_derivation(again, ITL0).ok


def test_builder_reproduces_fixture():
    d = cd_implies_bi()
    assert check_derivation(d, ITL0).ok
    assert [ln.formula for ln in d.lines] == [ln.formula for ln in CD_TO_BI.lines]


def test_builder_works_for_other_atoms():
    d = cd_implies_bi("r", "p & q")
    assert check_derivation(d, ITL0).ok


def test_builder_rejects_rules_under_hypotheses():
    b = Builder()
    h = b.hyp("p")
    with pytest.raises(ValueError):
        b.nec(h)


def test_mutations_all_rejected():
    muts = mutations(CD_TO_BI, 20)
    assert len(muts) == 20
    assert len({name.split()[0] for name, _ in muts}) >= 4
    for name, d in muts:
        assert rejected(d, ITL0), name


def test_accepted_lines_valid_on_random_models():
    rng = random.Random(0)
    for _ in range(20):
        m = kripke.gen_random_model(rng.randrange(2**32), rng.randint(1, 6), "continuous")
        for ln in CD_TO_BI.lines:
            assert kripke.check_validity(m, ln.formula)[0], ln.label


@pytest.mark.parametrize("text", ["1 p -> p ; axiom i1", "1: p -> ; axiom i1", "1: p ; frob 2",
                                  "1: p ; mp 1", "1: p ; axiom i1 {phi = p}"])
def test_bad_derivation_text(text):
    with pytest.raises(DerivationSyntaxError):
        parse_derivation(text)
