"""Build Hilbert derivations from hypothetical reasoning.

Proof steps are recorded as a DAG whose nodes may depend on named
hypotheses.  :meth:`Builder.discharge` applies the deduction theorem
(using only ``i1`` and ``i2``), so a derivation can be written in natural
deduction style and then flattened into numbered Hilbert lines.  The
temporal rules may only be applied to hypothesis-free nodes.
"""
from __future__ import annotations

from dataclasses import dataclass

from .proofs import Derivation, Justification, Line, ProofError, SCHEMAS, instantiate
from .syntax import Formula, Implies, Next, Eventually, Henceforth, parse


@dataclass(eq=False)
class Node:
    formula: Formula
    kind: str
    premises: tuple["Node", ...] = ()
    schema: str | None = None
    subst: tuple = ()
    deps: frozenset = frozenset()
    note: str = ""


class Builder:
    def __init__(self):
        self._discharged: dict[tuple[int, int], Node] = {}

    # basic steps

    def axiom(self, name: str, note: str = "", **fill) -> Node:
        fill = {k: parse(v) if isinstance(v, str) else v for k, v in fill.items()}
        f = instantiate(name, **fill)
        order = [m for m in ("phi", "psi", "chi") if m in fill]
        return Node(f, "axiom", schema=name, subst=tuple((k, fill[k]) for k in order), note=note)

    def hyp(self, f: Formula | str, note: str = "") -> Node:
        f = parse(f) if isinstance(f, str) else f
        n = Node(f, "hyp", note=note)
        n.deps = frozenset({id(n)})
        return n

    def mp(self, a: Node, ab: Node, note: str = "") -> Node:
        if not (isinstance(ab.formula, Implies) and ab.formula.left == a.formula):
            raise ProofError(f"cannot apply {ab.formula} to {a.formula}")
        return Node(ab.formula.right, "mp", (a, ab), deps=a.deps | ab.deps, note=note)

    def _closed(self, n: Node, rule: str):
        if n.deps:
            raise ProofError(f"{rule} applied to a line that depends on hypotheses")

    def nec(self, a: Node, note: str = "") -> Node:
        self._closed(a, "nec")
        return Node(Next(a.formula), "nec", (a,), note=note)

    def indbox(self, a: Node, note: str = "") -> Node:
        self._closed(a, "indbox")
        f = a.formula
        if not (isinstance(f, Implies) and f.right == Next(f.left)):
            raise ProofError("box induction needs f -> O f")
        return Node(Implies(f.left, Henceforth(f.left)), "indbox", (a,), note=note)

    def inddia(self, a: Node, note: str = "") -> Node:
        self._closed(a, "inddia")
        f = a.formula
        if not (isinstance(f, Implies) and f.left == Next(f.right)):
            raise ProofError("diamond induction needs O f -> f")
        return Node(Implies(Eventually(f.right), f.right), "inddia", (a,), note=note)

    # deduction theorem

    def identity(self, h: Formula) -> Node:
        hh = Implies(h, h)
        s = self.axiom("i2", phi=h, psi=hh, chi=h)
        k1 = self.axiom("i1", phi=h, psi=hh)
        k2 = self.axiom("i1", phi=h, psi=h)
        return self.mp(k2, self.mp(k1, s))

    def discharge(self, n: Node, h: Node, note: str = "") -> Node:
        """A node for ``h -> n`` no longer depending on hypothesis ``h``."""
        key = (id(n), id(h))
        if key in self._discharged:
            return self._discharged[key]
        hid = id(h)
        if hid not in n.deps:
            out = self.mp(n, self.axiom("i1", phi=n.formula, psi=h.formula))
        elif n is h:
            out = self.identity(h.formula)
        elif n.kind == "mp":
            a, ab = n.premises
            da = self.discharge(a, h)
            dab = self.discharge(ab, h)
            s = self.axiom("i2", phi=h.formula, psi=a.formula, chi=n.formula)
            out = self.mp(da, self.mp(dab, s))
        else:
            raise ProofError(f"cannot discharge through rule {n.kind}")
        if note:
            out.note = note
        self._discharged[key] = out
        return out

    # output

    def derivation(self, goal: Node) -> Derivation:
        if goal.deps:
            raise ProofError("goal still depends on hypotheses")
        labels: dict[int, int] = {}
        keys: dict[tuple, int] = {}
        lines: list[Line] = []

        def emit(n: Node) -> int:
            if id(n) in labels:
                return labels[id(n)]
            refs = tuple(emit(p) for p in n.premises)
            if n.kind == "axiom":
                why = Justification("axiom", schema=n.schema, subst=n.subst)
            else:
                why = Justification(n.kind, refs)
            key = (n.formula, str(why))
            if key in keys:
                labels[id(n)] = keys[key]
                return keys[key]
            label = len(lines) + 1
            lines.append(Line(label, n.formula, why, n.note))
            keys[key] = labels[id(n)] = label
            return label

        emit(goal)
        return Derivation(lines, goal.formula)


def cd_implies_bi(p: str = "p", q: str = "q") -> Derivation:
    """A derivation of CD(p,q) -> BI(p,q) using only the base system's axioms."""
    b = Builder()
    p, q = f"({p})", f"({q})"
    chi = f"[](O {q} -> {q})"
    theta = f"{chi} -> {q}"
    cd = SCHEMAS["cd"].instantiate(phi=parse(p), psi=parse(q))
    bi_left = parse(f"[]({p} | {q}) & {chi}")
    goal_right = parse(f"[]{p} | {q}")

    # part 1: O(chi -> q) -> (chi -> q)
    h_next = b.hyp(f"O({theta})", note="assume O(chi -> q) and chi, where chi = []( O q -> q)")
    h_chi = b.hyp(chi)
    unfold = b.mp(h_chi, b.axiom("ix", phi=f"O {q} -> {q}"),
                  note="unfold chi: (O q -> q) & O chi")
    step = b.mp(unfold, b.axiom("i3", phi=f"O {q} -> {q}", psi=f"O {chi}"))
    later = b.mp(unfold, b.axiom("i4", phi=f"O {q} -> {q}", psi=f"O {chi}"))
    dist = b.mp(h_next, b.axiom("v", phi=chi, psi=q), note="distribute O over chi -> q")
    q_now = b.mp(b.mp(later, dist), step, note="O q, hence q")
    closed = b.discharge(b.discharge(q_now, h_chi), h_next,
                         note="O(chi -> q) -> (chi -> q) holds outright")
    back = b.inddia(closed, note="diamond induction: <>(chi -> q) -> (chi -> q)")

    # part 2: <>q -> <>(chi -> q)
    weak = b.axiom("i1", phi=q, psi=chi, note="q -> (chi -> q)")
    nxt = b.nec(weak)
    lift = b.mp(nxt, b.axiom("i1", phi=Next(weak.formula), psi=weak.formula))
    boxed = b.mp(weak, b.indbox(lift), note="box induction gives [](q -> (chi -> q))")
    mono = b.mp(boxed, b.axiom("vii", phi=q, psi=theta), note="<>q -> <>(chi -> q)")

    # part 3: the main argument by cases on []p | <>q
    h_cd = b.hyp(cd, note="assume CD(p,q) and [](p | q) & chi")
    h_prem = b.hyp(bi_left)
    always_or = b.mp(h_prem, b.axiom("i3", phi=f"[]({p} | {q})", psi=chi))
    chi_now = b.mp(h_prem, b.axiom("i4", phi=f"[]({p} | {q})", psi=chi))
    cases = b.mp(always_or, h_cd, note="CD yields []p | <>q")
    h_dq = b.hyp(f"<>{q}", note="case <>q: chi -> q, then q")
    q_case = b.mp(chi_now, b.mp(b.mp(h_dq, mono), back))
    right = b.mp(q_case, b.axiom("i7", phi=f"[]{p}", psi=q))
    case_dia = b.discharge(right, h_dq)
    case_box = b.axiom("i6", phi=f"[]{p}", psi=q, note="case []p")
    elim = b.axiom("i8", phi=f"[]{p}", psi=f"<>{q}", chi=goal_right, note="join the two cases")
    done = b.mp(cases, b.mp(case_dia, b.mp(case_box, elim)))
    goal = b.discharge(b.discharge(done, h_prem), h_cd, note="discharge both assumptions")
    return b.derivation(goal)
