"""Finite dynamic poset models and their intuitionistic temporal semantics.

Worlds are indexed ``0..n-1`` and every world set is an ``int`` bitmask, so the
up-set interior, step preimages and the orbit checks are cheap enough for the
soundness fuzzing loops.
"""
from __future__ import annotations

import random
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from .syntax import (And, Atom, Bottom, Eventually, Formula, Henceforth,
                     Implies, Next, Or)


class CycleError(ValueError):
    """The reflexive-transitive closure of the order is not antisymmetric."""


class ModelInvalid(ValueError):
    pass


class GenerationFailure(RuntimeError):
    pass


def _bits(mask: int) -> Iterable[int]:
    i = 0
    while mask:
        if mask & 1:
            yield i
        mask >>= 1
        i += 1


@dataclass(frozen=True, eq=False)
class DynamicPosetModel:
    """A finite poset with a self-map and an atom valuation.

    ``up[i]`` is the bitmask of worlds ``j`` with ``i <= j`` (closure already
    applied), ``step[i]`` the image of world ``i``.  Atoms missing from ``val``
    denote the empty set.
    """

    worlds: tuple[str, ...]
    up: tuple[int, ...]
    step: tuple[int, ...]
    val: Mapping[str, int] = field(default_factory=dict)

    @classmethod
    def build(cls, worlds: Iterable[str], order: Iterable[tuple[str, str]] = (),
              step: Mapping[str, str] | None = None,
              val: Mapping[str, Iterable[str]] | None = None) -> "DynamicPosetModel":
        """Build from names; ``order`` holds generator pairs ``(a, b)`` for a <= b."""
        worlds = tuple(worlds)
        index = {w: i for i, w in enumerate(worlds)}
        if len(index) != len(worlds):
            raise ModelInvalid("duplicate world names")
        try:
            pairs = [(index[a], index[b]) for a, b in order]
            smap = step or {}
            if set(smap) != set(worlds):
                missing = sorted(set(worlds) - set(smap))
                raise ModelInvalid(f"map is not total: no image for {missing}")
            steps = tuple(index[smap[w]] for w in worlds)
            vals = {p: _mask(index[w] for w in ws) for p, ws in (val or {}).items()}
        except KeyError as e:
            raise ModelInvalid(f"unknown world {e.args[0]!r}") from None
        return cls(worlds, transitive_up(len(worlds), pairs), steps, vals)

    @property
    def size(self) -> int:
        return len(self.worlds)

    @property
    def all(self) -> int:
        return (1 << len(self.worlds)) - 1

    def index(self, name: str) -> int:
        try:
            return self.worlds.index(name)
        except ValueError:
            raise ModelInvalid(f"unknown world {name!r}") from None

    def leq(self, i: int, j: int) -> bool:
        return bool(self.up[i] >> j & 1)

    def names(self, mask: int) -> list[str]:
        return [self.worlds[i] for i in _bits(mask)]

    def atom(self, name: str) -> int:
        return self.val.get(name, 0)

    # -- topology ---------------------------------------------------------

    def interior(self, a: int) -> int:
        """Worlds all of whose successors in the order lie in ``a``."""
        out = 0
        for i, u in enumerate(self.up):
            if u & ~a == 0:
                out |= 1 << i
        return out

    def is_upset(self, a: int) -> bool:
        return all(self.up[i] & ~a == 0 for i in _bits(a))

    def preimage(self, a: int) -> int:
        out = 0
        for i, s in enumerate(self.step):
            if a >> s & 1:
                out |= 1 << i
        return out

    def orbit(self, i: int) -> list[int]:
        """Prefix and cycle of the orbit of ``i``; each world listed once."""
        seen = []
        marks = set()
        while i not in marks:
            marks.add(i)
            seen.append(i)
            i = self.step[i]
        return seen

    @cached_property
    def continuity_witness(self) -> tuple[int, int] | None:
        for i in range(self.size):
            target = self.up[self.step[i]]
            for j in _bits(self.up[i]):
                if not target >> self.step[j] & 1:
                    return (i, j)
        return None

    @cached_property
    def openness_witness(self) -> tuple[int, int] | None:
        """A pair (w, v) with S(w) <= v but no w' >= w mapped onto v."""
        for i in range(self.size):
            image = 0
            for j in _bits(self.up[i]):
                image |= 1 << self.step[j]
            missing = self.up[self.step[i]] & ~image
            if missing:
                return (i, next(iter(_bits(missing))))
        return None

    @property
    def is_continuous(self) -> bool:
        return self.continuity_witness is None

    @property
    def is_open(self) -> bool:
        return self.openness_witness is None

    @cached_property
    def antisymmetry_witness(self) -> tuple[int, int] | None:
        for i in range(self.size):
            for j in _bits(self.up[i]):
                if j != i and self.up[j] >> i & 1:
                    return (i, j)
        return None


FiniteDynamicPosetModel = DynamicPosetModel


def _mask(ixs: Iterable[int]) -> int:
    m = 0
    for i in ixs:
        m |= 1 << i
    return m


def transitive_up(n: int, pairs: Iterable[tuple[int, int]]) -> tuple[int, ...]:
    """Up-set bitmasks of the reflexive-transitive closure of ``pairs``."""
    up = [1 << i for i in range(n)]
    for a, b in pairs:
        up[a] |= 1 << b
    changed = True
    while changed:
        changed = False
        for i in range(n):
            acc = up[i]
            for j in _bits(up[i]):
                acc |= up[j]
            if acc != up[i]:
                up[i] = acc
                changed = True
    return tuple(up)


# ---------------------------------------------------------------------------
# validation

@dataclass
class ValidationReport:
    valid: bool
    continuous: bool
    open: bool
    persistent: bool
    failures: list[tuple[str, tuple[str, ...]]] = field(default_factory=list)
    quotient: dict[str, tuple[str, ...]] = field(default_factory=dict)

    def lines(self) -> list[str]:
        out = [f"valid: {self.valid}", f"continuous: {self.continuous}",
               f"open: {self.open}", f"persistent: {self.persistent}"]
        for kind, wit in self.failures:
            out.append(f"failure: {kind} witness {' '.join(wit)}")
        for rep, members in self.quotient.items():
            out.append(f"quotient: {rep} = {{{', '.join(members)}}}")
        return out


def validate_model(m: DynamicPosetModel) -> ValidationReport:
    """Check the poset, continuity and valuation invariants of ``m``.

    Raises :class:`CycleError` when the order closure is not antisymmetric.
    """
    if m.antisymmetry_witness is not None:
        a, b = m.antisymmetry_witness
        raise CycleError(f"order has a cycle through {m.worlds[a]} and {m.worlds[b]}")
    failures = []
    cw = m.continuity_witness
    if cw is not None:
        failures.append(("not continuous", (m.worlds[cw[0]], m.worlds[cw[1]])))
    for p in sorted(m.val):
        a = m.val[p]
        for i in _bits(a):
            bad = m.up[i] & ~a
            if bad:
                j = next(iter(_bits(bad)))
                failures.append((f"val {p} not upward closed", (m.worlds[i], m.worlds[j])))
                break
    ow = m.openness_witness
    is_open = ow is None
    continuous = cw is None
    return ValidationReport(
        valid=not failures, continuous=continuous, open=is_open,
        persistent=continuous and is_open, failures=failures,
        quotient=dict(getattr(m, "_quotient", {}) or {}),
    )


def quotient_preorder(m: DynamicPosetModel) -> DynamicPosetModel:
    """Collapse strongly connected order components of a preordered model.

    Class names join member names with ``=``.  The step map must respect the
    classes and every valuation must be a union of classes.
    """
    n = m.size
    cls_of = [-1] * n
    classes: list[list[int]] = []
    for i in range(n):
        if cls_of[i] >= 0:
            continue
        members = [j for j in range(n) if m.leq(i, j) and m.leq(j, i)]
        for j in members:
            cls_of[j] = len(classes)
        classes.append(members)
    if len(classes) == n:
        return m
    names = tuple("=".join(m.worlds[j] for j in c) for c in classes)
    steps = []
    for c in classes:
        images = {cls_of[m.step[j]] for j in c}
        if len(images) != 1:
            raise ModelInvalid(f"map does not respect preorder class {names[cls_of[c[0]]]}")
        steps.append(images.pop())
    pairs = [(cls_of[i], cls_of[j]) for i in range(n) for j in _bits(m.up[i])]
    vals = {}
    for p, a in m.val.items():
        qa = 0
        for k, c in enumerate(classes):
            inside = [a >> j & 1 for j in c]
            if any(inside) and not all(inside):
                raise ModelInvalid(f"val {p} is not upward closed")
            if inside[0]:
                qa |= 1 << k
        vals[p] = qa
    q = DynamicPosetModel(names, transitive_up(len(classes), pairs), tuple(steps), vals)
    object.__setattr__(q, "_quotient", {names[k]: tuple(m.worlds[j] for j in c)
                                         for k, c in enumerate(classes) if len(c) > 1})
    return q


# ---------------------------------------------------------------------------
# evaluation

def _require_continuous(m: DynamicPosetModel) -> None:
    if m.antisymmetry_witness is not None:
        raise ModelInvalid("order is not antisymmetric")
    if not m.is_continuous:
        a, b = m.continuity_witness
        raise ModelInvalid(f"map is not monotone: {m.worlds[a]} <= {m.worlds[b]}")


def eval(m: DynamicPosetModel, f: Formula) -> int:  # noqa: A001
    """The truth set of ``f`` as a bitmask over the worlds of ``m``."""
    _require_continuous(m)
    return _Evaluator(m).ev(f)


class _Evaluator:
    def __init__(self, m: DynamicPosetModel):
        self.m = m
        self.memo: dict[Formula, int] = {}

    def ev(self, f: Formula) -> int:
        r = self.memo.get(f)
        if r is None:
            r = self.memo[f] = self._ev(f)
        return r

    def _ev(self, f: Formula) -> int:
        m = self.m
        if isinstance(f, Bottom):
            return 0
        if isinstance(f, Atom):
            return m.atom(f.name)
        if isinstance(f, And):
            return self.ev(f.left) & self.ev(f.right)
        if isinstance(f, Or):
            return self.ev(f.left) | self.ev(f.right)
        if isinstance(f, Implies):
            return m.interior((m.all & ~self.ev(f.left)) | self.ev(f.right))
        if isinstance(f, Next):
            return m.preimage(self.ev(f.arg))
        if isinstance(f, Eventually):
            acc = self.ev(f.arg)
            while True:
                nxt = acc | m.preimage(acc)
                if nxt == acc:
                    return acc
                acc = nxt
        if isinstance(f, Henceforth):
            return box_by_orbits(m, self.ev(f.arg))
        raise TypeError(f"not a formula: {f!r}")


def box_by_orbits(m: DynamicPosetModel, a: int) -> int:
    """Worlds whose whole forward orbit stays inside ``a``."""
    out = 0
    good: dict[int, bool] = {}
    for i in range(m.size):
        orbit = m.orbit(i)
        ok = True
        for j in orbit:
            if j in good:
                ok = good[j]
                break
            if not a >> j & 1:
                ok = False
                break
        for j in orbit:
            if j in good:
                break
            good[j] = ok
            if not ok:
                # only the suffix from the first bad world on is known bad
                break
        if ok:
            out |= 1 << i
    return out


def box_variants(m: DynamicPosetModel, f: Formula) -> tuple[int, int, int]:
    """Three computations of the henceforth truth set.

    (a) the greatest step-invariant up-set inside the truth set of ``f``;
    (b) the interior of the intersection of all iterated preimages;
    (c) the orbit check.
    """
    _require_continuous(m)
    target = eval(m, f)
    # (a) greatest fixpoint of U -> int(U & S^-1 U)
    u = m.interior(target)
    while True:
        nxt = m.interior(u & m.preimage(u))
        if nxt == u:
            break
        u = nxt
    # (b)
    inter = target
    layer = target
    for _ in range(m.size + 1):
        layer = m.preimage(layer)
        inter &= layer
    b = m.interior(inter)
    return u, b, box_by_orbits(m, target)


def check_validity(m: DynamicPosetModel, f: Formula) -> tuple[bool, str | None]:
    """``(True, None)`` if ``f`` holds everywhere, else ``(False, first failing world)``."""
    missing = m.all & ~eval(m, f)
    if not missing:
        return True, None
    return False, m.worlds[next(iter(_bits(missing)))]


def holds_at(m: DynamicPosetModel, f: Formula, world: str) -> bool:
    return bool(eval(m, f) >> m.index(world) & 1)


# ---------------------------------------------------------------------------
# random models

MODEL_CLASSES = ("continuous", "open", "persistent", "nonopen")
_CLASS_ALIASES = {"cont": "continuous", "pers": "persistent"}


def gen_random_model(seed: int, n: int, cls: str = "continuous",
                     atom_names: tuple[str, ...] = ("p", "q", "r"),
                     rounds: int = 20, node_budget: int = 4000) -> DynamicPosetModel:
    """A seeded random dynamic poset model of the requested class.

    ``cls`` is 'continuous', 'open', 'persistent' (on posets the same class as
    'open') or 'nonopen' (continuous but not open).  Atoms get random up-sets.
    """
    cls = _CLASS_ALIASES.get(cls, cls)
    if cls not in MODEL_CLASSES:
        raise ValueError(f"unknown model class {cls!r}")
    if n < 1:
        raise ValueError("a model needs at least one world")
    rng = random.Random(seed)
    density = rng.uniform(0.2, 0.6)
    for attempt in range(2 * rounds):
        if attempt == rounds and cls != "nonopen":
            density /= 3  # relax: sparser orders admit more open maps
        up = _random_poset(rng, n, density)
        steps = _random_monotone_map(rng, up, cls, node_budget)
        if steps is None:
            continue
        worlds = tuple(f"w{i}" for i in range(n))
        vals = {}
        for p in atom_names:
            seed_set = _mask(i for i in range(n) if rng.random() < 0.35)
            vals[p] = _upclose(up, seed_set)
        return DynamicPosetModel(worlds, up, steps, vals)
    raise GenerationFailure(f"no {cls} model with {n} worlds after {2 * rounds} rounds")


def _upclose(up: tuple[int, ...], a: int) -> int:
    out = a
    for i in _bits(a):
        out |= up[i]
    return out


def _random_poset(rng: random.Random, n: int, density: float) -> tuple[int, ...]:
    perm = list(range(n))
    rng.shuffle(perm)
    pairs = [(perm[i], perm[j]) for i in range(n) for j in range(i + 1, n)
             if rng.random() < density]
    return transitive_up(n, pairs)


def _random_monotone_map(rng, up, cls, budget):
    n = len(up)
    # a linear extension: fewer worlds above means later
    order = sorted(range(n), key=lambda i: -bin(up[i]).count("1"))
    below = [[j for j in range(n) if j != i and up[j] >> i & 1] for i in range(n)]
    steps = [-1] * n
    nodes = [0]

    def candidates(i):
        allowed = (1 << n) - 1
        for j in below[i]:
            allowed &= up[steps[j]]
        cs = list(_bits(allowed))
        rng.shuffle(cs)
        return cs

    def accept():
        m = DynamicPosetModel(tuple(map(str, range(n))), up, tuple(steps))
        if cls == "continuous":
            return True
        if cls == "nonopen":
            return not m.is_open
        return m.is_open

    def dfs(k):
        nodes[0] += 1
        if nodes[0] > budget:
            return False
        if k == n:
            return accept()
        i = order[k]
        for c in candidates(i):
            steps[i] = c
            if dfs(k + 1):
                return True
        steps[i] = -1
        return False

    return tuple(steps) if dfs(0) else None


# ---------------------------------------------------------------------------
# text format

def load_model(text: str, preorder: bool = False) -> DynamicPosetModel:
    """Read the line-oriented model format.

    ::

        worlds: w0 w1 w2
        order: w1<=w2
        map: w0->w1 w1->w1 w2->w2
        val p: w2
        val q:

    ``#`` starts a comment.  With ``preorder=True`` cyclic orders are
    collapsed to their quotient poset instead of being rejected.
    """
    worlds: list[str] = []
    order: list[tuple[str, str]] = []
    step: dict[str, str] = {}
    val: dict[str, list[str]] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        head, sep, body = line.partition(":")
        if not sep:
            raise ModelInvalid(f"line {lineno}: missing ':'")
        head = head.strip()
        items = body.split()
        if head == "worlds":
            worlds.extend(items)
        elif head == "order":
            for it in items:
                a, sep, b = it.partition("<=")
                if not sep or not a or not b:
                    raise ModelInvalid(f"line {lineno}: bad order item {it!r}")
                order.append((a, b))
        elif head == "map":
            for it in items:
                a, sep, b = it.partition("->")
                if not sep or not a or not b:
                    raise ModelInvalid(f"line {lineno}: bad map item {it!r}")
                if a in step and step[a] != b:
                    raise ModelInvalid(f"line {lineno}: {a} mapped twice")
                step[a] = b
        elif head.startswith("val "):
            val.setdefault(head[4:].strip(), []).extend(items)
        else:
            raise ModelInvalid(f"line {lineno}: unknown section {head!r}")
    m = DynamicPosetModel.build(worlds, order, step, val)
    if m.antisymmetry_witness is not None and preorder:
        m = quotient_preorder(m)
    return m


def dump_model(m: DynamicPosetModel) -> str:
    lines = ["worlds: " + " ".join(m.worlds)]
    covers = []
    for i in range(m.size):
        for j in _bits(m.up[i]):
            if i == j:
                continue
            # keep only covering pairs to stay readable
            if not any(k not in (i, j) and m.leq(i, k) and m.leq(k, j) for k in range(m.size)):
                covers.append(f"{m.worlds[i]}<={m.worlds[j]}")
    if covers:
        lines.append("order: " + " ".join(covers))
    lines.append("map: " + " ".join(f"{w}->{m.worlds[s]}" for w, s in zip(m.worlds, m.step)))
    for p in sorted(m.val):
        lines.append(f"val {p}: " + " ".join(m.names(m.val[p])))
    return "\n".join(lines) + "\n"
