"""Formulas of intuitionistic linear temporal logic.

The language has bottom, atoms, conjunction, disjunction, implication and the
three temporal modalities: next (``O``), eventually (``<>``) and henceforth
(``[]``).  Negation and the biconditional are parser sugar only.

Concrete ASCII grammar, loosest binding first::

    phi ::= phi "<->" phi           (right associative)
          | phi "->" phi            (right associative)
          | phi "|" phi             (left associative)
          | phi "&" phi             (left associative)
          | "~" phi | "O" phi | "<>" phi | "[]" phi
          | "false" | atom | "(" phi ")"
    atom ::= lowercase (letter | digit | "_")*
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, Iterator


class Formula:
    """Base class of the formula AST.  Subclasses are frozen dataclasses."""

    __slots__ = ()

    def children(self) -> tuple["Formula", ...]:
        return ()

    def __str__(self) -> str:
        return render(self)


@dataclass(frozen=True, repr=False)
class Bottom(Formula):
    def __repr__(self):
        return "Bottom()"


@dataclass(frozen=True, repr=False)
class Atom(Formula):
    name: str

    def __repr__(self):
        return f"Atom({self.name!r})"


@dataclass(frozen=True, repr=False)
class _Binary(Formula):
    left: Formula
    right: Formula

    def children(self):
        return (self.left, self.right)

    def __hash__(self):
        return hash((type(self).__name__, self.left, self.right))

    def __repr__(self):
        return f"{type(self).__name__}({self.left!r}, {self.right!r})"


@dataclass(frozen=True, repr=False)
class _Unary(Formula):
    arg: Formula

    def children(self):
        return (self.arg,)

    def __hash__(self):
        return hash((type(self).__name__, self.arg))

    def __repr__(self):
        return f"{type(self).__name__}({self.arg!r})"


class And(_Binary):
    pass


class Or(_Binary):
    pass


class Implies(_Binary):
    pass


class Next(_Unary):
    pass


class Eventually(_Unary):
    pass


class Henceforth(_Unary):
    pass


BOTTOM = Bottom()
TOP = Implies(BOTTOM, BOTTOM)
TEMPORAL = (Next, Eventually, Henceforth)


def Neg(f: Formula) -> Formula:
    return Implies(f, BOTTOM)


def Iff(a: Formula, b: Formula) -> Formula:
    return And(Implies(a, b), Implies(b, a))


def is_temporal(f: Formula) -> bool:
    """True for formulas of the shape ``O f`` or ``<> f``."""
    return isinstance(f, (Next, Eventually))


# ---------------------------------------------------------------------------
# parsing

class ParseError(ValueError):
    def __init__(self, position: int, expected: str, text: str = ""):
        self.position = position
        self.expected = expected
        self.text = text
        super().__init__(f"at position {position}: expected {expected}")


_TOKEN = re.compile(
    r"\s*(?:(?P<op><->|->|<>|\[\]|[~&|()])|(?P<name>[A-Za-z_][A-Za-z0-9_]*))"
)


def _tokenize(text: str) -> list[tuple[str, str, int]]:
    tokens = []
    pos = 0
    while True:
        while pos < len(text) and text[pos].isspace():
            pos += 1
        if pos >= len(text):
            break
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(pos, "a token", text)
        start = m.start(m.lastgroup)
        tok = m.group(m.lastgroup)
        if m.lastgroup == "name":
            # "O" is the next-operator; it may be glued to what follows
            if tok[0] == "O":
                tokens.append(("op", "O", start))
                pos = start + 1
                continue
            if not tok[0].islower():
                raise ParseError(start, "an atom (lowercase initial)", text)
            if tok == "false":
                tokens.append(("false", tok, start))
            else:
                tokens.append(("atom", tok, start))
        else:
            tokens.append(("op", tok, start))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value: str):
        kind, tok, pos = self.take()
        if tok != value or kind != "op":
            raise ParseError(pos, repr(value), self.text)

    def parse(self) -> Formula:
        f = self.iff()
        kind, _, pos = self.peek()
        if kind != "end":
            raise ParseError(pos, "end of input", self.text)
        return f

    def iff(self) -> Formula:
        left = self.implication()
        if self.peek()[1] == "<->":
            self.take()
            return Iff(left, self.iff())
        return left

    def implication(self) -> Formula:
        left = self.disjunction()
        if self.peek()[1] == "->":
            self.take()
            return Implies(left, self.implication())
        return left

    def disjunction(self) -> Formula:
        f = self.conjunction()
        while self.peek()[1] == "|":
            self.take()
            f = Or(f, self.conjunction())
        return f

    def conjunction(self) -> Formula:
        f = self.unary()
        while self.peek()[1] == "&":
            self.take()
            f = And(f, self.unary())
        return f

    def unary(self) -> Formula:
        kind, tok, pos = self.take()
        if kind == "op":
            if tok == "~":
                return Neg(self.unary())
            if tok == "O":
                return Next(self.unary())
            if tok == "<>":
                return Eventually(self.unary())
            if tok == "[]":
                return Henceforth(self.unary())
            if tok == "(":
                f = self.iff()
                self.expect(")")
                return f
        elif kind == "false":
            return BOTTOM
        elif kind == "atom":
            return Atom(tok)
        raise ParseError(pos, "a formula", self.text)


def parse(text: str) -> Formula:
    """Parse ``text`` into a formula; raises :class:`ParseError`."""
    return _Parser(text).parse()


# ---------------------------------------------------------------------------
# rendering

_PREC = {Implies: 1, Or: 2, And: 3}
_SYMBOL = {Implies: "->", Or: "|", And: "&"}
_UNARY = {Next: "O ", Eventually: "<>", Henceforth: "[]"}
_ATOMIC_PREC = 4


def _prec(f: Formula) -> int:
    if isinstance(f, Implies) and f.right == BOTTOM:
        return _ATOMIC_PREC
    return _PREC.get(type(f), _ATOMIC_PREC)


@lru_cache(maxsize=65536)
def render(f: Formula) -> str:
    """Print ``f`` with minimal parentheses; ``parse(render(f)) == f``."""
    if isinstance(f, Bottom):
        return "false"
    if isinstance(f, Atom):
        return f.name
    if isinstance(f, Implies) and f.right == BOTTOM:
        return "~" + _wrap(f.left, _prec(f.left) < _ATOMIC_PREC)
    if isinstance(f, _Unary):
        return _UNARY[type(f)] + _wrap(f.arg, _prec(f.arg) < _ATOMIC_PREC)
    p = _PREC[type(f)]
    lp, rp = _prec(f.left), _prec(f.right)
    if isinstance(f, Implies):
        left, right = _wrap(f.left, lp <= p), _wrap(f.right, rp < p)
    else:
        left, right = _wrap(f.left, lp < p), _wrap(f.right, rp <= p)
    return f"{left} {_SYMBOL[type(f)]} {right}"


def _wrap(f: Formula, paren: bool) -> str:
    s = render(f)
    return f"({s})" if paren else s


# ---------------------------------------------------------------------------
# subformulas and measures

def walk(f: Formula) -> Iterator[Formula]:
    stack = [f]
    while stack:
        g = stack.pop()
        yield g
        stack.extend(g.children())


@lru_cache(maxsize=65536)
def closure(f: Formula) -> frozenset[Formula]:
    """sub(f): every subformula of ``f``, ``f`` included."""
    out = {f}
    for c in f.children():
        out |= closure(c)
    return frozenset(out)


def closure_of(fs: Iterable[Formula]) -> frozenset[Formula]:
    out: set[Formula] = set()
    for f in fs:
        out |= closure(f)
    return frozenset(out)


def is_subformula_closed(fs: Iterable[Formula]) -> bool:
    fs = frozenset(fs)
    return all(c in fs for f in fs for c in f.children())


def length(f: Formula) -> int:
    """Number of nodes in the syntax tree."""
    return sum(1 for _ in walk(f))


def temporal_depth(f: Formula) -> int:
    """Nesting depth of O, <> and [] in ``f``."""
    below = max((temporal_depth(c) for c in f.children()), default=0)
    return below + 1 if isinstance(f, TEMPORAL) else below


def implication_depth(f: Formula) -> int:
    below = max((implication_depth(c) for c in f.children()), default=0)
    return below + 1 if isinstance(f, Implies) else below


def atoms(f: Formula) -> frozenset[str]:
    return frozenset(g.name for g in walk(f) if isinstance(g, Atom))


def has_box(f: Formula) -> bool:
    return any(isinstance(g, Henceforth) for g in walk(f))


def has_diamond(f: Formula) -> bool:
    return any(isinstance(g, Eventually) for g in walk(f))


def fragment(f: Formula) -> str:
    """Classify ``f`` as 'temporal-free', 'box-free', 'diamond-free' or 'full'.

    A formula whose only modality is O lies in both the box-free and the
    diamond-free language; it is reported as 'box-free'.
    """
    kinds = {type(g) for g in walk(f)}
    if not kinds & set(TEMPORAL):
        return "temporal-free"
    if Henceforth not in kinds:
        return "box-free"
    if Eventually not in kinds:
        return "diamond-free"
    return "full"


def in_fragment(f: Formula, frag: str) -> bool:
    """``frag`` is one of 'full', 'dia' (no []), 'box' (no <>)."""
    if frag == "full":
        return True
    if frag == "dia":
        return not has_box(f)
    if frag == "box":
        return not has_diamond(f)
    raise ValueError(f"unknown fragment {frag!r}")


def sorted_formulas(fs: Iterable[Formula]) -> list[Formula]:
    return sorted(fs, key=lambda g: (length(g), render(g)))


# ---------------------------------------------------------------------------
# random formulas

ALL_OPS = ("and", "or", "implies", "next", "eventually", "henceforth")


def random_formula(rng: random.Random, depth: int, atom_names=("p", "q", "r"),
                   ops=ALL_OPS, bottom: bool = True) -> Formula:
    """A random formula of nesting depth at most ``depth``."""
    if depth <= 0 or rng.random() < 0.25:
        if bottom and rng.random() < 0.08:
            return BOTTOM
        return Atom(rng.choice(atom_names))
    op = rng.choice(ops)
    sub = lambda: random_formula(rng, depth - 1, atom_names, ops, bottom)
    if op == "and":
        return And(sub(), sub())
    if op == "or":
        return Or(sub(), sub())
    if op == "implies":
        return Implies(sub(), sub())
    if op == "next":
        return Next(sub())
    if op == "eventually":
        return Eventually(sub())
    return Henceforth(sub())


def fragment_ops(frag: str) -> tuple[str, ...]:
    if frag == "dia":
        return tuple(o for o in ALL_OPS if o != "henceforth")
    if frag == "box":
        return tuple(o for o in ALL_OPS if o != "eventually")
    return ALL_OPS
