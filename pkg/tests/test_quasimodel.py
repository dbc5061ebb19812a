import random

import pytest
from hypothesis import given, settings, strategies as st

from helpers import closed_subset, random_model, random_quasimodel, random_sigma, typed_model
from itl import kripke
from itl.harness import data_text
from itl.quasimodel import (NotTemporal, Quasimodel, SigmaNotClosed, TwoSidedType, delete_realized,
                            dump_quasimodel, from_model, from_one_sided, is_maximal_temporal, is_type,
                            leq_t, load_quasimodel, maximal_temporal, restrict, sqsub_t, step_failure,
                            step_t, type_rel, validate_quasimodel, validate_type)
from itl.syntax import Eventually, Implies, Next, closure, closure_of, parse

T = TwoSidedType.of


def test_type_examples():
    assert validate_type(T(["<>q", "q"], ["p", "p | r"])).valid
    assert validate_type(T([], ["false"])).violations[0][0] == 2
    assert [c for c, _ in validate_type(T(["<>q"], [])).violations] == [8]
    assert [c for c, _ in validate_type(T(["p"], ["p"])).violations] == [1]


def test_relation_examples():
    a, b = T(["q", "<>q"], ["p"]), T(["q", "<>q"], ["p", "p | r"])
    assert type_rel(a, b, "sqsubT") and type_rel(a, b, "leqT")
    assert not step_t(T([], ["O p"]), T([], []))
    assert step_failure(T([], ["O p"]), T([], [])) == ("a", parse("O p"))
    assert step_t(T(["<>q", "q"], ["<>p", "p"]), T(["<>q", "q"], []))


def test_restrict_and_delete_examples():
    t = T(["<>q", "q"], ["p", "p | r"])
    assert restrict(t, closure(parse("p"))) == T(["<>q", "q"], ["p"])
    assert restrict(t, ()) == T(["<>q", "q"], [])
    with pytest.raises(SigmaNotClosed):
        restrict(t, [parse("p | r")])
    u = T([], ["p", "<>p"])
    assert delete_realized(u, parse("<>p")) == T([], ["p"])
    assert delete_realized(u, parse("O r")) == u
    with pytest.raises(NotTemporal):
        delete_realized(u, parse("p"))


def test_maximal_temporal():
    t = T([], ["O <>p", "<>p", "p", "<>q", "q"])
    assert maximal_temporal(t) == [parse("<>q"), parse("O <>p")]
    assert not is_maximal_temporal(t, parse("<>p"))


def test_quasimodel_examples():
    good = load_quasimodel(data_text("loop.qm"))
    assert validate_quasimodel(good)
    bad = load_quasimodel("worlds: w\nrel: w->w\nlabel w: neg{} pos{<>p}\n")
    rep = validate_quasimodel(bad)
    assert not rep and rep.failures[0][0] == "not omega-sensible"
    rep = validate_quasimodel(load_quasimodel("worlds: w\nlabel w: neg{} pos{}\n"))
    assert ("not serial", "w") in rep.failures


@pytest.mark.parametrize("name", ["loop.qm", "two_world.qm", "branching.qm"])
def test_fixture_quasimodels_valid(name):
    q = load_quasimodel(data_text(name))
    assert validate_quasimodel(q)
    assert load_quasimodel(dump_quasimodel(q)).labels == q.labels


def test_branching_fixture_is_nondeterministic():
    assert not load_quasimodel(data_text("branching.qm")).is_deterministic


# ---------------------------------------------------------------------------
# type properties on random instances


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_restrict_keeps_types(seed):
    rng = random.Random(seed)
    _, sigma, types = typed_model(rng)
    for t in types:
        assert is_type(t)
        assert is_type(restrict(t, closed_subset(rng, sigma)))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_cross_transitivity(seed):
    rng = random.Random(seed)
    m, sigma, types = typed_model(rng)
    for w in range(m.size):
        for v in range(m.size):
            if not m.leq(w, v):
                continue
            phi, psi = types[w], types[v]
            assert leq_t(phi, psi)
            gamma = restrict(phi, closed_subset(rng, sigma))
            assert sqsub_t(gamma, phi) and leq_t(gamma, psi)
            mid = restrict(psi, closed_subset(rng, sigma))
            assert leq_t(phi, psi) and sqsub_t(mid, psi)
            if leq_t(phi, mid):
                assert leq_t(phi, psi)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_step_survives_restriction(seed):
    rng = random.Random(seed)
    m, sigma, types = typed_model(rng)
    for w in range(m.size):
        phi, psi = types[w], types[m.step[w]]
        assert step_t(phi, psi)
        gamma = restrict(phi, closed_subset(rng, sigma))
        big = closure_of(gamma.pos) | closed_subset(rng, sigma)
        assert step_t(gamma, restrict(psi, big))


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 2**32 - 1))
def test_step_survives_deleting_realized(seed):
    rng = random.Random(seed)
    m, _, types = typed_model(rng)
    for w in range(m.size):
        phi, psi = types[w], types[m.step[w]]
        for f in maximal_temporal(phi):
            if isinstance(f, Next) or f.arg in phi.pos:
                out = delete_realized(psi, f)
                assert is_type(out)
                assert step_t(phi, out)


def test_one_sided_embedding():
    rng = random.Random(3)
    for _ in range(200):
        m = random_model(rng, 5)
        sigma = random_sigma(rng)
        w = rng.randrange(m.size)
        true_here = {f for f in sigma if kripke.holds_at(m, f, m.worlds[w])}
        assert is_type(from_one_sided(true_here, sigma))


# ---------------------------------------------------------------------------
# validator against a brute-force oracle


def brute_valid(q: Quasimodel) -> bool:
    n = q.size
    W = range(n)
    le = lambda a, b: q.leq(a, b)
    R = lambda a, b: q.is_rel(a, b)
    lab = q.labels
    if not all(is_type(t) for t in lab):
        return False
    if any(le(a, b) and not leq_t(lab[a], lab[b]) for a in W for b in W):
        return False
    for a in W:
        for f in lab[a].neg:
            if isinstance(f, Implies) and not any(
                    le(a, b) and f.left in lab[b].pos and f.right in lab[b].neg for b in W):
                return False
    if any(not any(R(a, b) for b in W) for a in W):
        return False
    for a in W:
        for a2 in W:
            for b in W:
                if le(a, a2) and R(a, b) and not any(le(b, b2) and R(a2, b2) for b2 in W):
                    return False
    if any(R(a, b) and not step_t(lab[a], lab[b]) for a in W for b in W):
        return False
    for a in W:
        for f in lab[a].pos:
            if isinstance(f, Eventually):
                reach, frontier = {a}, {a}
                for _ in range(n):
                    frontier = {b for x in frontier for b in W if R(x, b)} - reach
                    reach |= frontier
                if not any(f.arg in lab[b].pos for b in reach):
                    return False
    return True


def test_validator_matches_brute_force():
    rng = random.Random(11)
    seen = {True: 0, False: 0}
    for _ in range(300):
        m = random_model(rng, 5)
        sigma = random_sigma(rng, 1)
        extra = [(a, b) for a in range(m.size) for b in range(m.size) if rng.random() < 0.2]
        q = from_model(m, sigma, extra)
        if rng.random() < 0.3:
            k = rng.randrange(q.size)
            labels = list(q.labels)
            labels[k] = restrict(labels[k], closed_subset(rng, sigma))
            q = Quasimodel(q.worlds, q.up, q.rel, tuple(labels))
        got = bool(validate_quasimodel(q))
        assert got == brute_valid(q)
        seen[got] += 1
    assert seen[True] > 20 and seen[False] > 20


def test_random_quasimodels_are_valid():
    rng = random.Random(2)
    for _ in range(50):
        assert validate_quasimodel(random_quasimodel(rng))
