"""Two-sided types, labelled frames and quasimodels.

A type is a pair ``(neg | pos)`` of disjoint formula sets closed under the
local saturation conditions checked by :func:`validate_type`.  Quasimodels
are finite posets with a (possibly nondeterministic) successor relation and a
type label per world.
"""
from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterable

from .kripke import CycleError, _bits, transitive_up
from .syntax import (And, Bottom, Eventually, Formula, Implies,
                     Next, Or, ParseError, closure, closure_of, has_box,
                     is_subformula_closed, is_temporal, parse, render,
                     sorted_formulas)


class SigmaNotClosed(ValueError):
    pass


class NotTemporal(ValueError):
    pass


class QuasimodelSyntaxError(ValueError):
    pass


@dataclass(frozen=True)
class TwoSidedType:
    neg: frozenset = frozenset()
    pos: frozenset = frozenset()

    @classmethod
    def of(cls, neg: Iterable = (), pos: Iterable = ()) -> "TwoSidedType":
        conv = lambda fs: frozenset(parse(f) if isinstance(f, str) else f for f in fs)
        return cls(conv(neg), conv(pos))

    @property
    def formulas(self) -> frozenset:
        return self.neg | self.pos

    def size(self) -> int:
        """Number of subformulas of the positive part."""
        return len(closure_of(self.pos))

    def __str__(self) -> str:
        show = lambda fs: ", ".join(render(f) for f in sorted_formulas(fs))
        return f"neg{{{show(self.neg)}}} pos{{{show(self.pos)}}}"

    def __repr__(self) -> str:
        return f"TwoSidedType({self})"


@dataclass
class TypeReport:
    valid: bool
    violations: list[tuple[int, Formula]] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.valid


def validate_type(t: TwoSidedType) -> TypeReport:
    """Check the eight type conditions; condition 0 flags ``[]`` formulas."""
    bad: list[tuple[int, Formula]] = []
    for f in sorted_formulas(t.formulas):
        if has_box(f):
            bad.append((0, f))
    for f in sorted_formulas(t.pos & t.neg):
        bad.append((1, f))
    for f in sorted_formulas(t.pos):
        if isinstance(f, Bottom):
            bad.append((2, f))
        elif isinstance(f, And) and not (f.left in t.pos and f.right in t.pos):
            bad.append((3, f))
        elif isinstance(f, Or) and not (f.left in t.pos or f.right in t.pos):
            bad.append((5, f))
        elif isinstance(f, Implies) and not (f.left in t.neg or f.right in t.pos):
            bad.append((7, f))
    for f in sorted_formulas(t.neg):
        if isinstance(f, And) and not (f.left in t.neg or f.right in t.neg):
            bad.append((4, f))
        elif isinstance(f, Or) and not (f.left in t.neg and f.right in t.neg):
            bad.append((6, f))
        elif isinstance(f, Eventually) and f.arg not in t.neg:
            bad.append((8, f))
    bad.sort(key=lambda cf: cf[0])
    return TypeReport(not bad, bad)


def is_type(t: TwoSidedType) -> bool:
    return validate_type(t).valid


def leq_t(a: TwoSidedType, b: TwoSidedType) -> bool:
    return b.neg <= a.neg and a.pos <= b.pos


def sqsub_t(a: TwoSidedType, b: TwoSidedType) -> bool:
    return a.neg == b.neg and a.pos <= b.pos


def step_failure(a: TwoSidedType, b: TwoSidedType) -> tuple[str, Formula] | None:
    """The first successor clause (a)-(d) that fails for ``a`` followed by ``b``."""
    for f in sorted_formulas(a.pos):
        if isinstance(f, Next) and f.arg not in b.pos:
            return ("a", f)
    for f in sorted_formulas(a.neg):
        if isinstance(f, Next) and f.arg not in b.neg:
            return ("b", f)
    for f in sorted_formulas(a.pos):
        if isinstance(f, Eventually) and f.arg not in a.pos and f not in b.pos:
            return ("c", f)
    for f in sorted_formulas(a.neg):
        if isinstance(f, Eventually) and f not in b.neg:
            return ("d", f)
    return None


def step_t(a: TwoSidedType, b: TwoSidedType) -> bool:
    return step_failure(a, b) is None


def type_rel(a: TwoSidedType, b: TwoSidedType, which: str) -> bool:
    """``which`` is 'leqT', 'sqsubT' or 'sT'."""
    fns = {"leqT": leq_t, "sqsubT": sqsub_t, "sT": step_t}
    return fns[which](a, b)


def restrict(t: TwoSidedType, sigma: Iterable[Formula]) -> TwoSidedType:
    """Keep the negative part, intersect the positive part with ``sigma``."""
    sigma = frozenset(sigma)
    if not is_subformula_closed(sigma):
        raise SigmaNotClosed("restriction set is not closed under subformulas")
    return TwoSidedType(t.neg, t.pos & sigma)


def superformulas(f: Formula, among: Iterable[Formula]) -> frozenset:
    """Members of ``among`` having ``f`` as a subformula (``f`` included)."""
    return frozenset(g for g in among if f in closure(g))


def delete_realized(t: TwoSidedType, f: Formula) -> TwoSidedType:
    """Drop ``f`` and every formula containing it from the positive part."""
    if not is_temporal(f):
        raise NotTemporal(f"{render(f)} is neither O f nor <> f")
    return TwoSidedType(t.neg, t.pos - superformulas(f, t.pos))


def is_maximal_temporal(t: TwoSidedType, f: Formula) -> bool:
    """``f`` is a positive temporal formula not inside another positive temporal one."""
    if not is_temporal(f) or f not in t.pos:
        return False
    return not any(g != f and is_temporal(g) and f in closure(g) for g in t.pos)


def maximal_temporal(t: TwoSidedType) -> list[Formula]:
    return [f for f in sorted(t.pos, key=render) if is_maximal_temporal(t, f)]


def from_one_sided(phi: Iterable[Formula], sigma: Iterable[Formula]) -> TwoSidedType:
    """Positive part ``phi``, negative part the rest of ``sigma``."""
    phi, sigma = frozenset(phi), frozenset(sigma)
    return TwoSidedType(sigma - phi, phi)


# ---------------------------------------------------------------------------
# quasimodels

@dataclass(frozen=True, eq=False)
class Quasimodel:
    worlds: tuple[str, ...]
    up: tuple[int, ...]
    rel: tuple[int, ...]          # successor bitmask per world
    labels: tuple[TwoSidedType, ...]

    @classmethod
    def build(cls, worlds, order=(), rel=(), labels=None) -> "Quasimodel":
        worlds = tuple(worlds)
        ix = {w: i for i, w in enumerate(worlds)}
        try:
            up = transitive_up(len(worlds), [(ix[a], ix[b]) for a, b in order])
            succ = [0] * len(worlds)
            for a, b in rel:
                succ[ix[a]] |= 1 << ix[b]
            labs = tuple((labels or {}).get(w, TwoSidedType()) for w in worlds)
        except KeyError as e:
            raise QuasimodelSyntaxError(f"unknown world {e.args[0]!r}") from None
        return cls(worlds, up, tuple(succ), labs)

    @property
    def size(self) -> int:
        return len(self.worlds)

    def index(self, name: str) -> int:
        try:
            return self.worlds.index(name)
        except ValueError:
            raise QuasimodelSyntaxError(f"unknown world {name!r}") from None

    def leq(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1)

    def succ(self, i: int) -> list[int]:
        return list(_bits(self.rel[i]))

    def is_rel(self, i: int, j: int) -> bool:
        return bool(self.rel[i] >> j & 1)

    def label(self, i: int) -> TwoSidedType:
        return self.labels[i]

    @property
    def is_deterministic(self) -> bool:
        return all(bin(r).count("1") == 1 for r in self.rel)

    def formulas(self) -> frozenset:
        out = frozenset()
        for t in self.labels:
            out |= t.formulas
        return out

    def witness_path(self, i: int, f: Formula) -> list[int] | None:
        """Shortest, lexicographically least rel-path from ``i`` to a world with ``f`` positive."""
        if f in self.labels[i].pos:
            return [i]
        frontier = [[i]]
        seen = {i}
        while frontier:
            nxt = []
            for path in frontier:
                for j in self.succ(path[-1]):
                    if j in seen:
                        continue
                    seen.add(j)
                    p2 = path + [j]
                    if f in self.labels[j].pos:
                        return p2
                    nxt.append(p2)
            frontier = nxt
        return None


@dataclass
class QuasimodelReport:
    valid: bool
    failures: list[tuple[str, str]] = field(default_factory=list)

    def __bool__(self) -> bool:
        return self.valid

    def lines(self) -> list[str]:
        out = [f"valid: {self.valid}"]
        out += [f"failure: {k} witness {w}" for k, w in self.failures]
        return out


def validate_quasimodel(q: Quasimodel) -> QuasimodelReport:
    """Check types, monotony, implication witnesses and the four relational conditions."""
    fails: list[tuple[str, str]] = []
    n, W = q.size, q.worlds
    for i in range(n):
        for j in _bits(q.up[i]):
            if j != i and q.leq(j, i):
                raise CycleError(f"order has a cycle through {W[i]} and {W[j]}")
    for i, t in enumerate(q.labels):
        rep = validate_type(t)
        for cond, f in rep.violations:
            fails.append(("type", f"{W[i]} condition {cond} at {render(f)}"))
    for i in range(n):
        for j in _bits(q.up[i]):
            if not leq_t(q.labels[i], q.labels[j]):
                fails.append(("monotony", f"{W[i]} <= {W[j]}"))
    for i, t in enumerate(q.labels):
        for f in sorted_formulas(t.neg):
            if isinstance(f, Implies):
                if not any(f.left in q.labels[j].pos and f.right in q.labels[j].neg
                           for j in _bits(q.up[i])):
                    fails.append(("implication witness", f"{W[i]} {render(f)}"))
    for i in range(n):
        if not q.rel[i]:
            fails.append(("not serial", W[i]))
    for i in range(n):
        for i2 in _bits(q.up[i]):
            for j in q.succ(i):
                if not any(q.is_rel(i2, j2) for j2 in _bits(q.up[j])):
                    fails.append(("not forward-confluent", f"{W[i]} <= {W[i2]}, {W[i]} -> {W[j]}"))
    for i in range(n):
        for j in q.succ(i):
            bad = step_failure(q.labels[i], q.labels[j])
            if bad:
                fails.append(("not sensible", f"{W[i]} -> {W[j]} clause ({bad[0]}) {render(bad[1])}"))
    for i, t in enumerate(q.labels):
        for f in sorted_formulas(t.pos):
            if isinstance(f, Eventually) and q.witness_path(i, f.arg) is None:
                fails.append(("not omega-sensible", f"{W[i]} {render(f)}"))
    return QuasimodelReport(not fails, fails)


# ---------------------------------------------------------------------------
# text format

_LABEL = re.compile(r"^\s*neg\s*\{(.*?)\}\s*pos\s*\{(.*?)\}\s*$")


def _formula_list(text: str) -> list[Formula]:
    return [parse(x) for x in text.split(",") if x.strip()]


def parse_type(text: str) -> TwoSidedType:
    """``neg{<>q, q} pos{p}``."""
    m = _LABEL.match(text)
    if m is None:
        raise QuasimodelSyntaxError(f"bad type {text.strip()!r}")
    return TwoSidedType(frozenset(_formula_list(m.group(1))), frozenset(_formula_list(m.group(2))))


def load_quasimodel(text: str) -> Quasimodel:
    """Read ``worlds:``, ``order:``, ``rel:`` and ``label w:`` lines."""
    worlds, order, rel, labels = [], [], [], {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, body = line.partition(":")
        if not sep:
            raise QuasimodelSyntaxError(f"line {lineno}: missing ':'")
        head = head.strip()
        try:
            if head == "worlds":
                worlds.extend(body.split())
            elif head == "order":
                for it in body.split():
                    a, s, b = it.partition("<=")
                    if not s:
                        raise QuasimodelSyntaxError(f"line {lineno}: bad order item {it!r}")
                    order.append((a, b))
            elif head in ("rel", "map"):
                for it in body.split():
                    a, s, b = it.partition("->")
                    if not s:
                        raise QuasimodelSyntaxError(f"line {lineno}: bad rel item {it!r}")
                    rel.append((a, b))
            elif head.startswith("label "):
                labels[head[6:].strip()] = parse_type(body)
            else:
                raise QuasimodelSyntaxError(f"line {lineno}: unknown section {head!r}")
        except ParseError as e:
            raise QuasimodelSyntaxError(f"line {lineno}: {e}") from None
    missing = [w for w in labels if w not in worlds]
    if missing:
        raise QuasimodelSyntaxError(f"label for unknown world {missing[0]!r}")
    return Quasimodel.build(worlds, order, rel, labels)


def dump_quasimodel(q: Quasimodel) -> str:
    lines = ["worlds: " + " ".join(q.worlds)]
    pairs = [f"{q.worlds[i]}<={q.worlds[j]}" for i in range(q.size)
             for j in _bits(q.up[i]) if i != j]
    if pairs:
        lines.append("order: " + " ".join(pairs))
    lines.append("rel: " + " ".join(f"{q.worlds[i]}->{q.worlds[j]}"
                                    for i in range(q.size) for j in q.succ(i)))
    for w, t in zip(q.worlds, q.labels):
        lines.append(f"label {w}: {t}")
    return "\n".join(lines) + "\n"


# ---------------------------------------------------------------------------
# quasimodels from dynamic poset models

def evaluation_type(truth: dict[Formula, int], sigma: Iterable[Formula], world: int) -> TwoSidedType:
    pos = frozenset(f for f in sigma if truth[f] >> world & 1)
    return TwoSidedType(frozenset(sigma) - pos, pos)


def from_model(m, sigma: Iterable[Formula], extra_rel: Iterable[tuple[int, int]] = ()) -> Quasimodel:
    """Label each world of a dynamic poset model with its truth type over ``sigma``.

    ``sigma`` must be a set of box-free formulas.  ``extra_rel`` adds
    successor pairs on top of the step map (the caller validates the result).
    """
    from .kripke import _Evaluator

    sigma = frozenset(sigma)
    ev = _Evaluator(m)
    truth = {f: ev.ev(f) for f in sigma}
    labels = tuple(evaluation_type(truth, sigma, i) for i in range(m.size))
    succ = [1 << s for s in m.step]
    for a, b in extra_rel:
        succ[a] |= 1 << b
    return Quasimodel(m.worlds, m.up, tuple(succ), labels)
