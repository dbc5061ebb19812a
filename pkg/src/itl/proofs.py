"""Hilbert-style derivation checking for the intuitionistic temporal logics.

Four base systems are supported: ``itl0``, ``itl-fs`` (Fischer Servi axioms
added), ``itl-cd`` (constant domain added) and ``itl1`` (both).  Each comes
in a full, ``dia`` (no ``[]``) and ``box`` (no ``<>``) version; in a fragment
every axiom instance and every line of a derivation must stay inside the
fragment, and the box fragments of constant-domain systems get the backward
induction schema ``bi`` instead of ``cd``.

The classical axiom "all intuitionistic tautologies" is replaced by a fixed
ten-schema basis for intuitionistic propositional logic (``i1`` .. ``i10``).
"""
from __future__ import annotations

import random
import re
from dataclasses import dataclass, field
from typing import Mapping

from .syntax import (Atom, Eventually, Formula, Henceforth, Implies, Next,
                     ParseError, fragment_ops, in_fragment, parse,
                     random_formula, render)


class ProofError(ValueError):
    pass


class BadIndex(ProofError):
    """A justification refers to its own line or a later one."""


class DerivationSyntaxError(ProofError):
    pass


METAVARS = ("phi", "psi", "chi")
_META = {name: Atom("$" + name) for name in METAVARS}


def _template(text: str) -> Formula:
    return substitute(parse(text), {Atom(n): m for n, m in _META.items()})


def substitute(f: Formula, sigma: Mapping[Formula, Formula]) -> Formula:
    """Replace leaves of ``f`` that are keys of ``sigma``."""
    if f in sigma:
        return sigma[f]
    kids = f.children()
    if not kids:
        return f
    return type(f)(*(substitute(k, sigma) for k in kids))


@dataclass(frozen=True)
class AxiomSchema:
    name: str
    template: Formula
    text: str

    @property
    def metavars(self) -> tuple[str, ...]:
        used = {g.name[1:] for g in _leaves(self.template) if isinstance(g, Atom) and g.name.startswith("$")}
        return tuple(n for n in METAVARS if n in used)

    def instantiate(self, **fill: Formula) -> Formula:
        missing = set(self.metavars) - set(fill)
        if missing:
            raise ProofError(f"schema {self.name} needs {sorted(missing)}")
        return substitute(self.template, {_META[k]: v for k, v in fill.items()})


def _leaves(f: Formula):
    stack = [f]
    while stack:
        g = stack.pop()
        kids = g.children()
        if not kids:
            yield g
        stack.extend(kids)


_SCHEMA_TEXT = [
    ("i1", "phi -> (psi -> phi)"),
    ("i2", "(phi -> (psi -> chi)) -> ((phi -> psi) -> (phi -> chi))"),
    ("i3", "phi & psi -> phi"),
    ("i4", "phi & psi -> psi"),
    ("i5", "phi -> (psi -> phi & psi)"),
    ("i6", "phi -> phi | psi"),
    ("i7", "psi -> phi | psi"),
    ("i8", "(phi -> chi) -> ((psi -> chi) -> (phi | psi -> chi))"),
    ("i9", "false -> phi"),
    ("i10", "(phi -> psi) -> ((phi -> ~psi) -> ~phi)"),
    ("ii", "~O false"),
    ("iii", "O(phi & psi) <-> O phi & O psi"),
    ("iv", "O(phi | psi) <-> O phi | O psi"),
    ("v", "O(phi -> psi) -> (O phi -> O psi)"),
    ("vi", "[](phi -> psi) -> ([]phi -> []psi)"),
    ("vii", "[](phi -> psi) -> (<>phi -> <>psi)"),
    ("viii", "<>(phi | psi) -> <>phi | <>psi"),
    ("ix", "[]phi -> phi & O[]phi"),
    ("x", "phi | O<>phi -> <>phi"),
    ("fs-next", "(O phi -> O psi) -> O(phi -> psi)"),
    ("fs-dia", "(<>phi -> []psi) -> [](phi -> psi)"),
    ("cd", "[](phi | psi) -> []phi | <>psi"),
    ("bi", "[](phi | psi) & [](O psi -> psi) -> []phi | psi"),
]

SCHEMAS: dict[str, AxiomSchema] = {n: AxiomSchema(n, _template(t), t) for n, t in _SCHEMA_TEXT}
IPC_BASIS = tuple(f"i{k}" for k in range(1, 11))
TEMPORAL_BASE = ("ii", "iii", "iv", "v", "vi", "vii", "viii", "ix", "x")

BASES = ("itl0", "itl-fs", "itl-cd", "itl1")
FRAGMENTS = ("full", "dia", "box")


@dataclass(frozen=True)
class LogicSystem:
    base: str
    fragment: str = "full"

    def __post_init__(self):
        if self.base not in BASES:
            raise ValueError(f"unknown system {self.base!r}")
        if self.fragment not in FRAGMENTS:
            raise ValueError(f"unknown fragment {self.fragment!r}")

    @property
    def name(self) -> str:
        return self.base if self.fragment == "full" else f"{self.base}-{self.fragment}"

    @property
    def has_fs(self) -> bool:
        return self.base in ("itl-fs", "itl1")

    @property
    def has_cd(self) -> bool:
        return self.base in ("itl-cd", "itl1")

    def schema_names(self) -> tuple[str, ...]:
        names = list(IPC_BASIS + TEMPORAL_BASE)
        if self.has_fs:
            names += ["fs-next", "fs-dia"]
        if self.has_cd:
            names.append("cd")
            if self.fragment == "box":
                names.append("bi")
        return tuple(n for n in names if in_fragment(SCHEMAS[n].template, self.fragment))

    def schemas(self) -> list[AxiomSchema]:
        return [SCHEMAS[n] for n in self.schema_names()]

    def admits(self, f: Formula) -> bool:
        return in_fragment(f, self.fragment)


def system(name: str) -> LogicSystem:
    """``itl0``, ``itl1-box``, ``itl-cd-dia`` ... (case-insensitive)."""
    name = name.strip().lower().replace("_", "-")
    for frag in ("dia", "box", "full"):
        if name.endswith("-" + frag):
            return LogicSystem(name[: -len(frag) - 1], frag)
    return LogicSystem(name)


# ---------------------------------------------------------------------------
# matching

def match_schema(f: Formula, schema: AxiomSchema) -> dict[str, Formula] | None:
    """The substitution instantiating ``schema`` to ``f``, or ``None``."""
    sigma: dict[Formula, Formula] = {}
    if not _match(schema.template, f, sigma):
        return None
    return {m.name[1:]: v for m, v in sigma.items()}


def _match(t: Formula, f: Formula, sigma: dict) -> bool:
    if isinstance(t, Atom) and t.name.startswith("$"):
        bound = sigma.get(t)
        if bound is None:
            sigma[t] = f
            return True
        return bound == f
    if type(t) is not type(f):
        return False
    tk, fk = t.children(), f.children()
    if not tk:
        return t == f
    return all(_match(a, b, sigma) for a, b in zip(tk, fk))


def matching_schemas(f: Formula, sys: LogicSystem) -> list[str]:
    return [s.name for s in sys.schemas() if match_schema(f, s) is not None]


# ---------------------------------------------------------------------------
# derivations

@dataclass(frozen=True)
class Justification:
    kind: str                      # axiom | mp | nec | indbox | inddia
    refs: tuple[int, ...] = ()
    schema: str | None = None
    subst: tuple[tuple[str, Formula], ...] = ()

    def __str__(self) -> str:
        if self.kind == "axiom":
            s = f"axiom {self.schema}"
            if self.subst:
                s += " {" + ", ".join(f"{k} := {render(v)}" for k, v in self.subst) + "}"
            return s
        return " ".join([self.kind, *map(str, self.refs)])


@dataclass(frozen=True)
class Line:
    label: int
    formula: Formula
    why: Justification
    note: str = ""


@dataclass
class Derivation:
    lines: list[Line] = field(default_factory=list)
    goal: Formula | None = None

    def by_label(self) -> dict[int, Line]:
        return {ln.label: ln for ln in self.lines}


@dataclass
class Verdict:
    ok: bool
    line: int | None = None
    reason: str = ""

    def __bool__(self) -> bool:
        return self.ok

    def __str__(self) -> str:
        if self.ok:
            return "accepted"
        return f"rejected at line {self.line}: {self.reason}"


_LINE = re.compile(r"^\s*(\d+)\s*:\s*(.*?)\s*;\s*(.*?)\s*$")
_AXIOM = re.compile(r"^axiom\s+([A-Za-z0-9-]+)\s*(?:\{(.*)\})?$")


def parse_justification(text: str) -> Justification:
    text = text.strip()
    m = _AXIOM.match(text)
    if m:
        subst = []
        if m.group(2) and m.group(2).strip():
            for part in m.group(2).split(","):
                key, sep, val = part.partition(":=")
                if not sep:
                    raise DerivationSyntaxError(f"bad substitution {part.strip()!r}")
                subst.append((key.strip(), parse(val)))
        return Justification("axiom", schema=m.group(1), subst=tuple(subst))
    words = text.split()
    if not words:
        raise DerivationSyntaxError("missing justification")
    kind, args = words[0].lower(), words[1:]
    arity = {"mp": 2, "nec": 1, "indbox": 1, "inddia": 1}
    if kind not in arity:
        raise DerivationSyntaxError(f"unknown rule {kind!r}")
    if len(args) != arity[kind] or not all(a.isdigit() for a in args):
        raise DerivationSyntaxError(f"rule {kind} needs {arity[kind]} line number(s)")
    return Justification(kind, tuple(int(a) for a in args))


def parse_derivation(text: str) -> Derivation:
    """Read ``N: formula ; justification`` lines; ``#`` starts a comment."""
    d = Derivation()
    note = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        body, _, comment = raw.partition("#")
        if not body.strip():
            if comment.strip():
                note.append(comment.strip())
            continue
        if body.strip().startswith("goal:"):
            d.goal = parse(body.strip()[5:])
            continue
        m = _LINE.match(body)
        if m is None:
            raise DerivationSyntaxError(f"line {lineno}: expected 'N: formula ; justification'")
        try:
            f = parse(m.group(2))
        except ParseError as e:
            raise DerivationSyntaxError(f"line {lineno}: {e}") from None
        d.lines.append(Line(int(m.group(1)), f, parse_justification(m.group(3)),
                            " ".join(note + ([comment.strip()] if comment.strip() else []))))
        note = []
    return d


def format_derivation(d: Derivation, notes: bool = True) -> str:
    out = []
    if d.goal is not None:
        out.append(f"goal: {render(d.goal)}")
    for ln in d.lines:
        if notes and ln.note:
            out.append(f"# {ln.note}")
        out.append(f"{ln.label}: {render(ln.formula)} ; {ln.why}")
    return "\n".join(out) + "\n"


def check_derivation(d: Derivation, sys: LogicSystem) -> Verdict:
    """Accept iff every line is an admitted axiom instance or a correct rule step.

    Raises :class:`BadIndex` when a line cites itself or a later line.
    """
    seen: dict[int, Formula] = {}
    admitted = set(sys.schema_names())
    last = None
    for ln in d.lines:
        if last is not None and ln.label <= last:
            return Verdict(False, ln.label, "line numbers must increase")
        last = ln.label
        for r in ln.why.refs:
            if r >= ln.label:
                raise BadIndex(f"line {ln.label} cites line {r}")
        if not sys.admits(ln.formula):
            return Verdict(False, ln.label, f"formula outside the {sys.fragment} fragment")
        reason = _check_line(ln, seen, admitted)
        if reason:
            return Verdict(False, ln.label, reason)
        seen[ln.label] = ln.formula
    if not d.lines:
        return Verdict(False, None, "empty derivation")
    if d.goal is not None and d.lines[-1].formula != d.goal:
        return Verdict(False, d.lines[-1].label, "last line is not the goal")
    return Verdict(True)


def _check_line(ln: Line, seen: dict[int, Formula], admitted: set[str]) -> str:
    why, f = ln.why, ln.formula
    for r in why.refs:
        if r not in seen:
            return f"no line {r}"
    prem = [seen[r] for r in why.refs]
    if why.kind == "axiom":
        if why.schema not in SCHEMAS:
            return f"unknown schema {why.schema}"
        if why.schema not in admitted:
            return f"schema {why.schema} not admitted"
        sigma = match_schema(f, SCHEMAS[why.schema])
        if sigma is None:
            return f"not an instance of {why.schema}"
        for k, v in why.subst:
            if sigma.get(k, v) != v:
                return f"substitution for {k} does not match"
        return ""
    if why.kind == "mp":
        a, b = prem
        if b == Implies(a, f) or a == Implies(b, f):
            return ""
        return "modus ponens premises do not fit"
    if why.kind == "nec":
        return "" if f == Next(prem[0]) else "not the next-step of the premise"
    if why.kind == "indbox":
        p = prem[0]
        if isinstance(p, Implies) and p.right == Next(p.left) and f == Implies(p.left, Henceforth(p.left)):
            return ""
        return "box induction needs a premise f -> O f and yields f -> []f"
    if why.kind == "inddia":
        p = prem[0]
        if (isinstance(p, Implies) and isinstance(p.left, Next) and p.left.arg == p.right
                and f == Implies(Eventually(p.right), p.right)):
            return ""
        return "diamond induction needs a premise O f -> f and yields <>f -> f"
    return f"unknown rule {why.kind}"


# ---------------------------------------------------------------------------
# random instances

def enumerate_axiom_instances(sys: LogicSystem, depth: int, seed: int, count: int,
                              names: tuple[str, ...] | None = None,
                              atom_names=("p", "q", "r")) -> list[Formula]:
    """A seeded sample of schema instances with random fill-ins of bounded depth."""
    if depth < 0:
        raise ValueError("depth must be non-negative")
    rng = random.Random(seed)
    pool = [SCHEMAS[n] for n in (names or sys.schema_names())]
    ops = fragment_ops(sys.fragment)
    out = []
    while len(out) < count:
        s = rng.choice(pool)
        fill = {m: random_formula(rng, depth, atom_names, ops, bottom=depth > 0)
                for m in s.metavars}
        f = s.instantiate(**fill)
        if sys.admits(f):
            out.append(f)
    return out


def instantiate(schema: str, **fill: Formula) -> Formula:
    return SCHEMAS[schema].instantiate(**fill)
