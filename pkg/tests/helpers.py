"""Random structures shared by the property tests."""
from __future__ import annotations

import random

from itl import kripke
from itl.quasimodel import Quasimodel, TwoSidedType, evaluation_type, from_model, validate_quasimodel
from itl.syntax import closure, closure_of, fragment_ops, length, random_formula

DIA_OPS = fragment_ops("dia")


def dia_formula(rng: random.Random, max_len: int = 6, depth: int = 3):
    while True:
        f = random_formula(rng, depth, ops=DIA_OPS)
        if length(f) <= max_len:
            return f


def random_model(rng: random.Random, max_worlds: int = 6, cls: str = "continuous"):
    return kripke.gen_random_model(rng.randrange(2**32), rng.randint(1, max_worlds), cls)


def random_sigma(rng: random.Random, count: int = 2, max_len: int = 6):
    return closure_of(dia_formula(rng, max_len) for _ in range(count))


def closed_subset(rng: random.Random, sigma):
    """A random subformula-closed subset of ``sigma``."""
    picks = [f for f in sigma if rng.random() < 0.4]
    return closure_of(picks)


def typed_model(rng: random.Random, max_worlds: int = 5):
    """A random model with evaluation types over a random sigma."""
    m = random_model(rng, max_worlds)
    sigma = random_sigma(rng)
    truth = {f: kripke.eval(m, f) for f in sigma}
    types = [evaluation_type(truth, sigma, i) for i in range(m.size)]
    return m, sigma, types


def random_type(rng: random.Random) -> TwoSidedType:
    _, _, types = typed_model(rng)
    return rng.choice(types)


def random_quasimodel(rng: random.Random, max_worlds: int = 4, max_len: int = 6) -> Quasimodel:
    """A valid quasimodel: truth types of a random model, sometimes with extra successor pairs."""
    m = random_model(rng, max_worlds)
    sigma = closure(dia_formula(rng, max_len))
    q = from_model(m, sigma)
    if rng.random() < 0.5:
        extra = [(a, b) for a in range(m.size) for b in range(m.size) if rng.random() < 0.3]
        q2 = from_model(m, sigma, extra)
        if validate_quasimodel(q2):
            q = q2
    return q
