import random

import pytest

from helpers import random_quasimodel
from itl import kripke
from itl.harness import data_text
from itl.quasimodel import TwoSidedType, load_quasimodel
from itl.syntax import implication_depth, parse, temporal_depth
from itl.unwind import (NotAPath, NotAbove, NotSquareBelow, PreconditionError, candidate_types,
                        check_typed_path, conservativity_check, extend_bound, extend_terminal,
                        lift_path, proper_types, weak_limit)

T = TwoSidedType.of
LOOP = load_quasimodel(data_text("loop.qm"))
TWO = load_quasimodel(data_text("two_world.qm"))
BRANCH = load_quasimodel(data_text("branching.qm"))


def start(q, w):
    i = q.index(w)
    return ((i, q.labels[i]),)


def test_loop_extension():
    path = extend_terminal(LOOP, start(LOOP, "w"))
    assert [t for _, t in path] == [T([], ["p", "<>p"]), T([], ["p"]), T([], [])]
    rep = check_typed_path(LOOP, path)
    assert rep.valid and rep.terminal and rep.proper


def test_branching_extension_is_terminal():
    for w in BRANCH.worlds:
        path = extend_terminal(BRANCH, start(BRANCH, w))
        rep = check_typed_path(BRANCH, path)
        assert rep.valid and rep.terminal, rep.problems


def test_proper_types_and_errors():
    u, x = BRANCH.index("u"), BRANCH.index("x")
    tp = proper_types(BRANCH, [u, x], BRANCH.labels[u])
    assert tp[1][1].pos == frozenset({parse("p | r"), parse("p")})
    with pytest.raises(NotAPath):
        proper_types(BRANCH, [x, u], BRANCH.labels[x])
    with pytest.raises(NotSquareBelow):
        proper_types(BRANCH, [u], T([], ["p"]))


def test_lift_path():
    r, s = TWO.index("r"), TWO.index("s")
    path = extend_terminal(TWO, start(TWO, "r"))
    lifted = lift_path(TWO, path, s)
    assert [w for w, _ in lifted] == [s] * len(path)
    with pytest.raises(NotAbove):
        lift_path(TWO, extend_terminal(TWO, start(TWO, "s")), r)


def test_random_extensions_respect_bound():
    rng = random.Random(4)
    done = 0
    while done < 100:
        q = random_quasimodel(rng)
        for w in range(q.size):
            tp = ((w, q.labels[w]),)
            path = extend_terminal(q, tp)
            assert len(path) <= extend_bound(q, tp)
            rep = check_typed_path(q, path)
            assert rep.valid and rep.terminal, rep.problems
        done += 1


def test_candidate_families():
    lab = BRANCH.labels[BRANCH.index("x")]
    closed = candidate_types(lab, "closed")
    every = candidate_types(lab, "all")
    assert set(closed) <= set(every)
    assert T(lab.neg, []) in closed and lab in closed


@pytest.mark.parametrize("q", [LOOP, TWO, BRANCH], ids=["loop", "two", "branching"])
def test_weak_limit_is_a_valid_model(q):
    wl = weak_limit(q, 4)
    rep = kripke.validate_model(wl.model)
    assert rep.valid and rep.continuous
    assert wl.points[0] == ()
    for i, p in enumerate(wl.points[1:], 1):
        assert check_typed_path(q, p).terminal
        assert wl.model.step[i] == wl.index(p[1:])


@pytest.mark.parametrize("q", [LOOP, TWO, BRANCH], ids=["loop", "two", "branching"])
def test_labels_match_truth_for_implication_free_formulas(q):
    bound = 5
    wl = weak_limit(q, bound)
    sigma = set()
    for t in q.labels:
        sigma |= t.neg | t.pos
    sigma = {g for g in sigma if implication_depth(g) == 0}
    truth = {g: kripke.eval(wl.model, g) for g in sigma}
    for i, p in enumerate(wl.points[1:], 1):
        t = p[0][1]
        for g in sigma:
            if len(p) > bound - temporal_depth(g):
                continue
            if g in t.pos:
                assert truth[g] >> i & 1
            if g in t.neg:
                assert not truth[g] >> i & 1


@pytest.mark.parametrize("qm, f, w, mode", [
    ("loop.qm", "<>p", "w", "satisfy"),
    ("two_world.qm", "p -> q", "r", "falsify"),
    ("two_world.qm", "p", "s", "satisfy"),
    ("branching.qm", "O(p | r)", "u", "satisfy"),
    ("branching.qm", "<>(p & r)", "u", "falsify"),
])
def test_conservativity_fixtures(qm, f, w, mode):
    rep = conservativity_check(load_quasimodel(data_text(qm)), parse(f), w, mode)
    assert rep.ok, rep.lines()


def test_conservativity_preconditions():
    with pytest.raises(PreconditionError):
        conservativity_check(LOOP, parse("[]p"), "w", "satisfy")
    with pytest.raises(PreconditionError):
        conservativity_check(LOOP, parse("q"), "w", "satisfy")
    with pytest.raises(PreconditionError):
        conservativity_check(LOOP, parse("p"), "w", "maybe")


def test_type_families_agree_on_verdict():
    for family in ("closed", "all"):
        rep = conservativity_check(TWO, parse("p -> q"), "r", "falsify", family=family)
        assert rep.ok
