"""Typed paths over a quasimodel and the truncated weak limit model.

A typed path is a rel-path ``w0 w1 ...`` whose positions carry types sitting
below the labels (same negative part, smaller positive part) with consecutive
types related by the successor clauses.  Terminal paths end in a type with an
empty positive part.  The weak limit takes all terminal typed paths (plus the
empty path) as points, ordered pointwise and stepped by dropping the head; it
is a dynamic poset.  Being infinite, it is truncated at a length bound here.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import lru_cache
from itertools import combinations
from typing import Sequence

from .kripke import DynamicPosetModel, _mask, eval as kripke_eval, validate_model
from .quasimodel import (Quasimodel, TwoSidedType, delete_realized, is_type,
                         leq_t, maximal_temporal, restrict, sqsub_t, step_failure,
                         step_t, superformulas)
from .syntax import (Atom, Formula, Next, closure_of, has_box,
                     implication_depth, render, temporal_depth)


class UnwindError(ValueError):
    pass


class NotAPath(UnwindError):
    pass


class NotSquareBelow(UnwindError):
    pass


class NotAbove(UnwindError):
    pass


class HostNotQuasimodel(UnwindError):
    pass


class Blowup(UnwindError):
    pass


class PreconditionError(UnwindError):
    pass


TypedPath = tuple  # tuple[(world index, TwoSidedType), ...]


@dataclass
class PathReport:
    valid: bool
    proper: bool
    terminal: bool
    problems: list[str] = field(default_factory=list)


def check_typed_path(q: Quasimodel, tp: Sequence) -> PathReport:
    probs = []
    for k, (w, t) in enumerate(tp):
        if not sqsub_t(t, q.labels[w]):
            probs.append(f"position {k}: type not below the label of {q.worlds[w]}")
        if not is_type(t):
            probs.append(f"position {k}: not a type")
    for k in range(len(tp) - 1):
        (w, t), (v, u) = tp[k], tp[k + 1]
        if not q.is_rel(w, v):
            probs.append(f"position {k}: {q.worlds[w]} -> {q.worlds[v]} is not a step")
        bad = step_failure(t, u)
        if bad:
            probs.append(f"position {k}: clause ({bad[0]}) fails at {render(bad[1])}")
    proper = all(closure_of(tp[k + 1][1].pos) <= closure_of(tp[k][1].pos)
                 for k in range(len(tp) - 1))
    terminal = bool(tp) and not tp[-1][1].pos
    return PathReport(not probs and bool(tp), proper, terminal, probs)


def _check_path(q: Quasimodel, worlds: Sequence[int]):
    for a, b in zip(worlds, worlds[1:]):
        if not q.is_rel(a, b):
            raise NotAPath(f"{q.worlds[a]} -> {q.worlds[b]} is not a step")


def proper_types(q: Quasimodel, worlds: Sequence[int], phi0: TwoSidedType) -> TypedPath:
    """Type a rel-path by restricting each label to the subformulas of the previous positives."""
    if not worlds:
        raise NotAPath("empty path")
    _check_path(q, worlds)
    if not sqsub_t(phi0, q.labels[worlds[0]]):
        raise NotSquareBelow("initial type is not below the first label")
    out = [(worlds[0], phi0)]
    for w in worlds[1:]:
        out.append((w, restrict(q.labels[w], closure_of(out[-1][1].pos))))
    return tuple(out)


def lift_path(q: Quasimodel, tp: TypedPath, v0: int) -> TypedPath:
    """Shadow ``tp`` from a world above its start, using forward confluence."""
    w0 = tp[0][0]
    if not q.leq(w0, v0):
        raise NotAbove(f"{q.worlds[v0]} is not above {q.worlds[w0]}")
    vs = [v0]
    for k in range(1, len(tp)):
        cands = [v for v in q.succ(vs[-1]) if q.leq(tp[k][0], v)]
        if not cands:
            raise HostNotQuasimodel("forward confluence fails while lifting")
        vs.append(min(cands))
    return tuple((v, q.labels[v]) for v in vs)


def extend_bound(q: Quasimodel, tp: TypedPath) -> int:
    return len(tp) + tp[-1][1].size() * (q.size + 1) + 1


def extend_terminal(q: Quasimodel, tp: TypedPath) -> TypedPath:
    """Extend a typed path until its last positive part is empty.

    Each round picks the least (by rendering) maximal temporal formula of the
    last positive part and realizes it: ``O f`` by one step, ``<> f`` by the
    shortest witness walk followed by one step.  The realized formula is then
    deleted, so the subformula count of the last positive part strictly
    drops.  Along a witness walk proper superformulas of the target are kept
    out of the types, which keeps the target maximal at the end of the walk.
    """
    if not tp:
        raise UnwindError("cannot extend an empty path")
    path = list(tp)
    limit = extend_bound(q, tp)
    while path[-1][1].pos:
        w, cur = path[-1]
        succ = q.succ(w)
        if not succ:
            raise HostNotQuasimodel(f"{q.worlds[w]} has no successor")
        temporal = maximal_temporal(cur)
        if not temporal:
            v = min(succ)
            path.append((v, TwoSidedType(q.labels[v].neg, frozenset())))
            break
        f = temporal[0]
        if isinstance(f, Next):
            v = min(succ)
            nxt = restrict(q.labels[v], closure_of(cur.pos))
            path.append((v, delete_realized(nxt, f)))
        else:
            target = f.arg
            if target not in cur.pos:
                walk = q.witness_path(w, target)
                if walk is None or len(walk) < 2:
                    raise HostNotQuasimodel(f"no witness for {render(f)} from {q.worlds[w]}")
                for v in walk[1:]:
                    prev = path[-1][1]
                    sigma = closure_of(prev.pos)
                    sigma = sigma - (superformulas(f, sigma) - {f})
                    path.append((v, restrict(q.labels[v], sigma)))
                w, cur = path[-1]
                if target not in cur.pos or f not in cur.pos:
                    raise HostNotQuasimodel(f"witness walk for {render(f)} lost the target")
                succ = q.succ(w)
                if not succ:
                    raise HostNotQuasimodel(f"{q.worlds[w]} has no successor")
            v = min(succ)
            nxt = restrict(q.labels[v], closure_of(cur.pos))
            path.append((v, delete_realized(nxt, f)))
        if len(path) > limit:
            raise HostNotQuasimodel("terminal extension exceeded its length bound")
    return tuple(path)


# ---------------------------------------------------------------------------
# weak limit

def candidate_types(label: TwoSidedType, family: str = "closed") -> list[TwoSidedType]:
    """Types below ``label`` that the unwinding may use.

    'closed' gives the restrictions of the label to subformula-closed sets
    (which include every type the path constructions produce); 'all' gives
    every type below the label.
    """
    pos = sorted(label.pos, key=render)
    out = []
    for r in range(len(pos) + 1):
        for sub in combinations(pos, r):
            s = frozenset(sub)
            if family == "closed":
                if closure_of(s) & label.pos != s:
                    continue
            elif family != "all":
                raise ValueError(f"unknown type family {family!r}")
            t = TwoSidedType(label.neg, s)
            if is_type(t):
                out.append(t)
    return out


@dataclass
class WeakLimitModel:
    host: Quasimodel
    bound: int
    points: list[TypedPath]          # points[0] is the empty path
    model: DynamicPosetModel
    labels: list[TwoSidedType]

    def index(self, path: TypedPath) -> int:
        return self._index[tuple(path)]

    def __post_init__(self):
        self._index = {p: i for i, p in enumerate(self.points)}

    def describe(self, i: int) -> str:
        p = self.points[i]
        if not p:
            return "empty path"
        return " . ".join(f"{self.host.worlds[w]}:{t}" for w, t in p)

    def to_text(self) -> str:
        from .kripke import dump_model
        legend = [f"# {self.model.worlds[i]} = {self.describe(i)}" for i in range(len(self.points))]
        return "\n".join(legend) + "\n" + dump_model(self.model)


def weak_limit(q: Quasimodel, bound: int, family: str = "closed",
               budget: int = 50000) -> WeakLimitModel:
    """All terminal typed paths of length at most ``bound`` plus the empty path."""
    if bound < 1:
        raise ValueError("bound must be at least 1")
    cands = [candidate_types(t, family) for t in q.labels]
    # nodes: (world, type); successors allowed by rel and the step clauses
    nodes = [(w, t) for w in range(q.size) for t in cands[w]]
    nxt = {nd: [m for m in nodes if q.is_rel(nd[0], m[0]) and step_t(nd[1], m[1])]
           for nd in nodes}

    # shortest distance from each node to a terminal node (for pruning)
    INF = bound + 1
    dist = {nd: (0 if not nd[1].pos else INF) for nd in nodes}
    changed = True
    while changed:
        changed = False
        for nd in nodes:
            best = min((dist[m] + 1 for m in nxt[nd]), default=INF)
            if best < dist[nd]:
                dist[nd] = best
                changed = True

    points: list[TypedPath] = [()]
    stack = [(nd,) for nd in reversed(nodes) if dist[nd] < bound]
    while stack:
        path = stack.pop()
        if not path[-1][1].pos:
            points.append(path)
            if len(points) > budget:
                raise Blowup(f"more than {budget} points at bound {bound}")
        room = bound - len(path)
        for m in reversed(nxt[path[-1]]):
            if dist[m] < room:
                stack.append(path + (m,))
    points.sort(key=lambda p: (len(p), [(w, render_type_key(t)) for w, t in p]))
    return _assemble(q, bound, points)


def render_type_key(t: TwoSidedType) -> str:
    return str(t)


def _assemble(q: Quasimodel, bound: int, points: list[TypedPath]) -> WeakLimitModel:
    index = {p: i for i, p in enumerate(points)}
    n = len(points)
    # trie over positions: children keyed by (world, type)
    trie: dict[tuple, dict] = {}
    sub_mask: dict[tuple, int] = {(): 0}
    for i, p in enumerate(points):
        for k in range(len(p) + 1):
            pre = p[:k]
            sub_mask[pre] = sub_mask.get(pre, 0) | (1 << i)
            if k < len(p):
                trie.setdefault(pre, {})[p[k]] = p[:k + 1]

    def above(elem_a, elem_b) -> bool:
        return q.leq(elem_a[0], elem_b[0]) and leq_t(elem_a[1], elem_b[1])

    @lru_cache(maxsize=None)
    def prefixes_above(pre: tuple) -> tuple:
        if not pre:
            return ((),)
        out = []
        for base in prefixes_above(pre[:-1]):
            for elem, child in trie.get(base, {}).items():
                if above(pre[-1], elem):
                    out.append(child)
        return tuple(out)

    up = []
    for p in points:
        m = 0
        for node in prefixes_above(p):
            m |= sub_mask[node]
        up.append(m)
    step = tuple(index[p[1:]] if p else 0 for p in points)
    labels = []
    union_neg = frozenset().union(*(t.neg for t in q.labels)) if q.labels else frozenset()
    for p in points:
        labels.append(p[0][1] if p else TwoSidedType(union_neg, frozenset()))
    atoms = sorted({g.name for t in labels for g in t.pos if isinstance(g, Atom)})
    val = {a: _mask(i for i, t in enumerate(labels) if Atom(a) in t.pos) for a in atoms}
    names = tuple("e" if i == 0 else f"a{i}" for i in range(n))
    model = DynamicPosetModel(names, tuple(up), step, val)
    return WeakLimitModel(q, bound, points, model, labels)


# ---------------------------------------------------------------------------
# conservativity

@dataclass
class ConservativityReport:
    formula: Formula
    world: str
    mode: str
    path: TypedPath
    bounds: list[int]
    verdicts: list[bool]
    model_valid: list[bool]
    sizes: list[int]

    @property
    def expected(self) -> bool:
        return self.mode == "satisfy"

    @property
    def stable(self) -> bool:
        return len(set(self.verdicts)) == 1

    @property
    def agrees(self) -> bool:
        return all(v == self.expected for v in self.verdicts)

    @property
    def ok(self) -> bool:
        return self.stable and self.agrees and all(self.model_valid)

    def lines(self) -> list[str]:
        out = [f"formula: {render(self.formula)}", f"world: {self.world}",
               f"mode: {self.mode}", f"terminal path length: {len(self.path)}"]
        for b, v, ok, n in zip(self.bounds, self.verdicts, self.model_valid, self.sizes):
            out.append(f"bound {b}: points {n}, model valid {ok}, holds {v}")
        out.append(f"stable: {self.stable}")
        out.append(f"agrees with mode: {self.agrees}")
        return out


def unwinding_bound(q: Quasimodel, path: TypedPath, f: Formula) -> int:
    """Path length plus room for one implication witness per nesting level.

    A witness for a refuted implication is a lifted copy of the path followed
    by a terminal extension, which adds at most ``max label size * (|W|+1) + 1``
    positions.
    """
    ext = max((t.size() * (q.size + 1) + 1 for t in q.labels), default=1)
    return len(path) + temporal_depth(f) + implication_depth(f) * ext


def conservativity_check(q: Quasimodel, f: Formula, world: str, mode: str,
                         family: str = "closed", budget: int = 50000,
                         bound: int | None = None) -> ConservativityReport:
    """Unwind ``q`` from ``world`` and evaluate ``f`` at the unwound point at three bounds."""
    if mode not in ("satisfy", "falsify"):
        raise PreconditionError("mode must be satisfy or falsify")
    if has_box(f):
        raise PreconditionError("formula must be box-free")
    w = q.index(world)
    side = q.labels[w].pos if mode == "satisfy" else q.labels[w].neg
    if f not in side:
        raise PreconditionError(f"{render(f)} is not in the {'positive' if mode == 'satisfy' else 'negative'} label of {world}")
    alpha = extend_terminal(q, ((w, q.labels[w]),))
    base = bound if bound is not None else unwinding_bound(q, alpha, f)
    bounds = [base, base + 1, base + 2]
    verdicts, valid, sizes = [], [], []
    for b in bounds:
        wl = weak_limit(q, b, family, budget)
        rep = validate_model(wl.model)
        valid.append(rep.valid)
        truth = kripke_eval(wl.model, f)
        verdicts.append(bool(truth >> wl.index(alpha) & 1))
        sizes.append(len(wl.points))
    return ConservativityReport(f, world, mode, alpha, bounds, verdicts, valid, sizes)
