"""Exact semantics on the real line under the doubling map ``x -> 2x``.

Sets are stored per sign.  The positive half (and the mirrored negative half)
is a :class:`Side`: a threshold ``b > 0`` and a piecewise indicator ``z`` that
is authoritative on ``(b/2, inf)``; below ``b`` the set repeats with period 2,
so ``x <= b`` belongs to it iff the copy of ``x`` rescaled into the block
``(b/2, b]`` does.  This "ladder" form is closed under every connective,
including the greatest-invariant-open ``[]`` and the union-of-preimages ``<>``.
"""
from __future__ import annotations

import random
import re
from bisect import bisect_left
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Mapping

from .syntax import (And, Atom, Bottom, Eventually, Formula, Henceforth,
                     Implies, Next, Or)

# hard guard on ladder unrolling; only absurd rational spreads reach it
UNROLL_CAP = 4096


class RealLineError(ValueError):
    pass


class EmptyIntervalError(RealLineError):
    pass


class NotOpenError(EmptyIntervalError):
    """A literal that is not an open set (e.g. a half-open seed)."""


class NotRepresentable(RealLineError):
    pass


class SetSyntaxError(RealLineError):
    pass


def _frac(x) -> Fraction:
    return x if isinstance(x, Fraction) else Fraction(x)


# ---------------------------------------------------------------------------
# piecewise indicators on the rational line

@dataclass(frozen=True)
class Pieces:
    """Indicator of a finite union of intervals and points.

    ``points`` are the sorted critical points, ``at[i]`` membership of
    ``points[i]`` and ``gaps[i]`` membership of the open gap left of
    ``points[i]`` (``gaps[-1]`` is the gap towards +inf).
    """

    points: tuple[Fraction, ...] = ()
    at: tuple[bool, ...] = ()
    gaps: tuple[bool, ...] = (False,)

    @classmethod
    def make(cls, points, at, gaps) -> "Pieces":
        pts, ats, gs = [], [], [gaps[0]]
        for p, a, g in zip(points, at, gaps[1:]):
            if a == gs[-1] == g:
                continue
            pts.append(p)
            ats.append(a)
            gs.append(g)
        return cls(tuple(pts), tuple(ats), tuple(gs))

    @classmethod
    def interval(cls, lo=None, hi=None, lo_closed=False, hi_closed=False) -> "Pieces":
        """``None`` stands for an infinite end."""
        if lo is not None and hi is not None:
            lo, hi = _frac(lo), _frac(hi)
            if lo > hi or (lo == hi and not (lo_closed and hi_closed)):
                raise EmptyIntervalError(f"empty interval with ends {lo}, {hi}")
            if lo == hi:
                return cls((lo,), (True,), (False, False))
        pts, at, gaps = [], [], [lo is None]
        if lo is not None:
            pts.append(_frac(lo))
            at.append(lo_closed)
            gaps.append(True)
        if hi is not None:
            pts.append(_frac(hi))
            at.append(hi_closed)
            gaps.append(False)
        return cls.make(pts, at, gaps)

    def member(self, x) -> bool:
        i = bisect_left(self.points, x)
        if i < len(self.points) and self.points[i] == x:
            return self.at[i]
        return self.gaps[i]

    def _samples(self, pts):
        if not pts:
            return [Fraction(0)]
        return ([pts[0] - 1] + [(a + b) / 2 for a, b in zip(pts, pts[1:])]
                + [pts[-1] + 1])

    def combine(self, other: "Pieces", fn: Callable[[bool, bool], bool]) -> "Pieces":
        pts = sorted(set(self.points) | set(other.points))
        at = [fn(self.member(p), other.member(p)) for p in pts]
        gaps = [fn(self.member(s), other.member(s)) for s in self._samples(pts)]
        return Pieces.make(pts, at, gaps)

    def __or__(self, other):
        return self.combine(other, lambda a, b: a or b)

    def __and__(self, other):
        return self.combine(other, lambda a, b: a and b)

    def __sub__(self, other):
        return self.combine(other, lambda a, b: a and not b)

    def __invert__(self):
        return Pieces(self.points, tuple(not a for a in self.at),
                      tuple(not g for g in self.gaps))

    def scale(self, k) -> "Pieces":
        k = _frac(k)
        if k <= 0:
            raise ValueError("scale factor must be positive")
        return Pieces(tuple(p * k for p in self.points), self.at, self.gaps)

    def mirror(self) -> "Pieces":
        return Pieces(tuple(-p for p in reversed(self.points)),
                      tuple(reversed(self.at)), tuple(reversed(self.gaps)))

    def interior(self) -> "Pieces":
        at = [a and self.gaps[i] and self.gaps[i + 1] for i, a in enumerate(self.at)]
        return Pieces.make(self.points, at, self.gaps)

    @property
    def is_empty(self) -> bool:
        return not any(self.at) and not any(self.gaps)

    @property
    def is_full(self) -> bool:
        return all(self.at) and all(self.gaps)

    def is_open(self) -> bool:
        return self.interior() == self

    def components(self) -> list[tuple]:
        """Maximal intervals as ``(lo, lo_closed, hi, hi_closed)``; ``None`` = infinite."""
        # interleave: gap0, pt0, gap1, pt1, ..., gapn
        seq = []
        for i, p in enumerate(self.points):
            seq.append(("gap", i, self.gaps[i]))
            seq.append(("pt", i, self.at[i]))
        seq.append(("gap", len(self.points), self.gaps[-1]))
        out = []
        start = None
        for k, (kind, i, inside) in enumerate(seq):
            if inside and start is None:
                start = (kind, i)
            if start is not None and (not inside or k == len(seq) - 1):
                end = seq[k - 1] if not inside else seq[k]
                skind, si = start
                ekind, ei = end[0], end[1]
                if skind == "gap":
                    lo, lo_closed = (None, False) if si == 0 else (self.points[si - 1], False)
                else:
                    lo, lo_closed = self.points[si], True
                if ekind == "gap":
                    hi, hi_closed = (None, False) if ei == len(self.points) else (self.points[ei], False)
                else:
                    hi, hi_closed = self.points[ei], True
                out.append((lo, lo_closed, hi, hi_closed))
                start = None
        return out


EMPTY_PIECES = Pieces()
FULL_PIECES = Pieces((), (), (True,))


def _above(t) -> Pieces:
    return Pieces.interval(t, None)


def _block(b) -> Pieces:
    return Pieces.interval(b / 2, b, hi_closed=True)


# ---------------------------------------------------------------------------
# one half-line with its ladder

@dataclass(frozen=True)
class Side:
    """An subset of ``(0, inf)`` that is 2-periodic on ``(0, b]``."""

    b: Fraction
    z: Pieces

    @classmethod
    def of(cls, b, z: Pieces) -> "Side":
        b = _frac(b)
        if b <= 0:
            raise ValueError("ladder threshold must be positive")
        return cls(b, z & _above(b / 2))

    @classmethod
    def plain(cls, z: Pieces) -> "Side":
        """The positive part of ``z``, which must be constant near 0."""
        pos = [p for p in z.points if p > 0]
        b = Fraction(1)
        if pos:
            while b >= pos[0]:
                b /= 2
        return cls.of(b, z)

    @property
    def pattern(self) -> Pieces:
        return self.z & _block(self.b)

    @property
    def has_ray(self) -> bool:
        return self.z.gaps[-1]

    @property
    def top(self) -> Fraction:
        return max(self.z.points[-1], self.b) if self.z.points else self.b

    def member(self, x) -> bool:
        x = _frac(x)
        if x <= 0:
            raise ValueError("side membership is for positive points")
        if x > self.b / 2:
            return self.z.member(x)
        steps = 0
        while x <= self.b / 2:
            x *= 2
            steps += 1
            if steps > 10 * UNROLL_CAP:
                raise NotRepresentable("point too close to 0")
        return self.z.member(x)

    def rethreshold(self, b2) -> "Side":
        """The same set with a lower threshold ``b2 <= b``."""
        b2 = _frac(b2)
        if b2 > self.b:
            raise ValueError("can only lower the threshold")
        acc = self.z
        copy = self.pattern
        lower = self.b / 2
        n = 0
        while lower > b2 / 2:
            copy = copy.scale(Fraction(1, 2))
            acc = acc | copy
            lower /= 2
            n += 1
            if n > UNROLL_CAP:
                raise NotRepresentable("ladder unrolling exceeded the cap")
        return Side.of(b2, acc)

    def _common(self, other: "Side") -> tuple["Side", "Side"]:
        b = min(self.b, other.b)
        return self.rethreshold(b), other.rethreshold(b)

    def combine(self, other: "Side", fn) -> "Side":
        a, c = self._common(other)
        return Side.of(a.b, a.z.combine(c.z, fn))

    def complement(self) -> "Side":
        return Side.of(self.b, ~self.z)

    def interior(self) -> "Side":
        ext = self.rethreshold(self.b / 2)
        return Side.of(self.b, ext.z.interior())

    def halve(self) -> "Side":
        return Side(self.b / 2, self.z.scale(Fraction(1, 2)))

    def _shifts(self) -> list[Pieces]:
        """``z / 2**n`` for every n that can still reach above ``b/2``."""
        out = []
        n = 0
        lo = self.b / 2
        while True:
            out.append(self.z.scale(Fraction(1, 2 ** n)))
            if lo * 2 ** n >= self.top:
                break
            n += 1
            if n > UNROLL_CAP:
                raise NotRepresentable("orbit scan exceeded the cap")
        # one extra copy covers the ray
        out.append(self.z.scale(Fraction(1, 2 ** (n + 1))))
        return out

    def eventually(self) -> "Side":
        """Points whose orbit under doubling enters the set."""
        if self.has_ray:
            return FULL_SIDE
        acc = EMPTY_PIECES
        for z in self._shifts():
            acc = acc | z
        return Side.of(self.b, acc)

    def always(self) -> "Side":
        """Points whose whole orbit under doubling stays in the set."""
        if not self.has_ray:
            return EMPTY_SIDE
        acc = FULL_PIECES
        for z in self._shifts():
            acc = acc & z
        return Side.of(self.b, acc)

    @property
    def full_near_zero(self) -> bool:
        return self.pattern == _block(self.b)

    @property
    def empty_near_zero(self) -> bool:
        return self.pattern.is_empty

    def same_as(self, other: "Side") -> bool:
        a, c = self._common(other)
        return a.z == c.z

    def canonical(self) -> tuple[Pieces, Side | None]:
        """Split into a plain part and an optional ladder with a maximal block.

        Returns ``(plain, ladder)``; the plain part is a subset of
        ``(0, inf)`` and the ladder (when present) has its threshold outside
        the set, so its seed is a union of intervals strictly inside the block.
        """
        b = Fraction(1)
        while b > self.b:
            b /= 2
        while b * 2 <= self.b:
            b *= 2
        s = self.rethreshold(b)
        while any(p > s.b / 2 for p in s.z.points):
            upper = s.z & Pieces.interval(s.b, 2 * s.b, hi_closed=True)
            if upper != s.pattern.scale(2):
                break
            s = Side.of(2 * s.b, s.z)
        pat = s.pattern
        if pat.is_empty or pat == _block(s.b):
            near = Pieces.interval(0, s.b / 2, hi_closed=True) if not pat.is_empty else EMPTY_PIECES
            return s.z | near, None
        if s.z.member(s.b):
            outside = [p for p in s.z.points if s.b / 2 < p < s.b and not s.z.member(p)]
            if outside:
                s = s.rethreshold(max(outside))
        return s.z & _above(s.b), s


EMPTY_SIDE = Side(Fraction(1), EMPTY_PIECES)
FULL_SIDE = Side.of(1, FULL_PIECES)


# ---------------------------------------------------------------------------
# whole-line sets

@dataclass(frozen=True, eq=False)
class DyadicSet:
    """A subset of the real line: negative half (mirrored), the point 0, positive half.

    Equality is semantic, so instances are deliberately unhashable.
    """

    neg: Side
    zero: bool
    pos: Side

    __hash__ = None  # type: ignore[assignment]

    @classmethod
    def from_pieces(cls, z: Pieces) -> "DyadicSet":
        return cls(Side.plain(z.mirror()), z.member(0), Side.plain(z))

    @classmethod
    def intervals(cls, *spans) -> "DyadicSet":
        """Union of open intervals ``(lo, hi)``; ``None`` for infinite ends."""
        z = EMPTY_PIECES
        for lo, hi in spans:
            z = z | Pieces.interval(lo, hi)
        return cls.from_pieces(z)

    @classmethod
    def ladder(cls, seed: Pieces, block_top, sign: int = 1) -> "DyadicSet":
        """``U_n 2**-n * seed`` for a seed inside the block ``(t/2, t]``."""
        t = _frac(block_top)
        if t <= 0:
            raise EmptyIntervalError("ladder block must lie in (0, inf)")
        if not (seed - _block(t)).is_empty:
            raise RealLineError("ladder seed leaves its block")
        side = Side.of(t, seed)
        if sign > 0:
            return cls(EMPTY_SIDE, False, side)
        return cls(side, False, EMPTY_SIDE)

    def member(self, x) -> bool:
        x = _frac(x)
        if x > 0:
            return self.pos.member(x)
        if x < 0:
            return self.neg.member(-x)
        return self.zero

    def _map(self, other, side_fn, fn) -> "DyadicSet":
        return DyadicSet(side_fn(self.neg, other.neg), fn(self.zero, other.zero),
                         side_fn(self.pos, other.pos))

    def __or__(self, other: "DyadicSet") -> "DyadicSet":
        f = lambda a, b: a or b
        return self._map(other, lambda s, t: s.combine(t, f), f)

    def __and__(self, other: "DyadicSet") -> "DyadicSet":
        f = lambda a, b: a and b
        return self._map(other, lambda s, t: s.combine(t, f), f)

    def complement(self) -> "DyadicSet":
        return DyadicSet(self.neg.complement(), not self.zero, self.pos.complement())

    def interior(self) -> "DyadicSet":
        zero = self.zero and self.neg.full_near_zero and self.pos.full_near_zero
        return DyadicSet(self.neg.interior(), zero, self.pos.interior())

    def is_open(self) -> bool:
        return self.interior() == self

    def __eq__(self, other) -> bool:
        if not isinstance(other, DyadicSet):
            return NotImplemented
        return (self.zero == other.zero and self.neg.same_as(other.neg)
                and self.pos.same_as(other.pos))

    @property
    def is_empty(self) -> bool:
        return self == EMPTY

    @property
    def is_full(self) -> bool:
        return self == REALS

    def critical_points(self) -> list[Fraction]:
        """Breakpoints of the plain parts and the ladder blocks (both signs)."""
        pts = {Fraction(0)}
        for sign, side in ((1, self.pos), (-1, self.neg)):
            pts.update(sign * p for p in side.z.points if p > 0)
            pts.add(sign * side.b)
        return sorted(pts)

    def __str__(self) -> str:
        return format_set(self)

    def __repr__(self) -> str:
        return f"DyadicSet({format_set(self)!r})"


EMPTY = DyadicSet(EMPTY_SIDE, False, EMPTY_SIDE)
REALS = DyadicSet(FULL_SIDE, True, FULL_SIDE)


def normalize(spans: Iterable[tuple]) -> DyadicSet:
    """Build a set from raw open intervals, merging overlaps."""
    return DyadicSet.intervals(*spans)


def union(a: DyadicSet, b: DyadicSet) -> DyadicSet:
    return a | b


def intersect(a: DyadicSet, b: DyadicSet) -> DyadicSet:
    return a & b


def impl_interior(a: DyadicSet, b: DyadicSet) -> DyadicSet:
    """Interior of the complement of ``a`` joined with ``b``."""
    return (a.complement() | b).interior()


def set_ops(a: DyadicSet, b: DyadicSet, op: str) -> DyadicSet:
    ops = {"union": union, "intersect": intersect, "impl_interior": impl_interior}
    return ops[op](a, b)


def member(x, s: DyadicSet) -> bool:
    return s.member(x)


def preimage(s: DyadicSet) -> DyadicSet:
    """Preimage under doubling: the set halved."""
    return DyadicSet(s.neg.halve(), s.zero, s.pos.halve())


def eventually(s: DyadicSet) -> DyadicSet:
    return DyadicSet(s.neg.eventually(), s.zero, s.pos.eventually())


def orbit_core(s: DyadicSet) -> DyadicSet:
    """Points whose whole forward orbit stays in ``s`` (not yet interiorized)."""
    return DyadicSet(s.neg.always(), s.zero, s.pos.always())


def henceforth(s: DyadicSet) -> DyadicSet:
    """Greatest open doubling-invariant subset of ``s``.

    Doubling is a homeomorphism, so the interior of the orbit-invariant core
    is itself invariant and is the answer.
    """
    return orbit_core(s).interior()


def eval_real(v: Mapping[str, DyadicSet], f: Formula) -> DyadicSet:
    """Truth set of ``f`` on the line with the doubling map."""
    memo: dict[Formula, DyadicSet] = {}

    def ev(g: Formula) -> DyadicSet:
        if g in memo:
            return memo[g]
        if isinstance(g, Bottom):
            r = EMPTY
        elif isinstance(g, Atom):
            if g.name not in v:
                raise RealLineError(f"no valuation for atom {g.name!r}")
            r = v[g.name]
        elif isinstance(g, And):
            r = ev(g.left) & ev(g.right)
        elif isinstance(g, Or):
            r = ev(g.left) | ev(g.right)
        elif isinstance(g, Implies):
            r = impl_interior(ev(g.left), ev(g.right))
        elif isinstance(g, Next):
            r = preimage(ev(g.arg))
        elif isinstance(g, Eventually):
            r = eventually(ev(g.arg))
        elif isinstance(g, Henceforth):
            r = henceforth(ev(g.arg))
        else:
            raise TypeError(f"not a formula: {g!r}")
        memo[g] = r
        return r

    return ev(f)


# ---------------------------------------------------------------------------
# literal syntax

def _fmt_num(x) -> str:
    return str(x)


def _fmt_span(lo, lo_closed, hi, hi_closed) -> str:
    if lo is not None and lo == hi:
        return "{" + _fmt_num(lo) + "}"
    left = "[" if lo_closed else "("
    right = "]" if hi_closed else ")"
    los = "-inf" if lo is None else _fmt_num(lo)
    his = "inf" if hi is None else _fmt_num(hi)
    return f"{left}{los},{his}{right}"


def format_set(s: DyadicSet) -> str:
    """Canonical literal: plain intervals first, then ladders."""
    plain = Pieces.interval(0, 0, True, True) if s.zero else EMPTY_PIECES
    ladders = []
    for sign, side in ((-1, s.neg), (1, s.pos)):
        part, lad = side.canonical()
        part = part & _above(0)
        plain = plain | (part.mirror() if sign < 0 else part)
        if lad is not None:
            t = lad.b
            seed = lad.pattern & Pieces.interval(t / 2, t)
            seed_txt = " U ".join(_fmt_span(*c) for c in seed.components())
            ladders.append(f"ladder(seed={seed_txt}; block=({_fmt_num(t / 2)},"
                           f"{_fmt_num(t)}]; sign={'+' if sign > 0 else '-'})")
    items = [_fmt_span(*c) for c in plain.components()] + ladders
    return " U ".join(items) if items else "empty"


_NUM = r"-?(?:inf|\d+(?:/\d+)?(?:\.\d+)?)"
_SPAN = re.compile(rf"\s*([\[(])\s*({_NUM})\s*,\s*({_NUM})\s*([\])])\s*$")


def _num(text: str):
    text = text.strip()
    if text in ("inf", "+inf"):
        return None, 1
    if text == "-inf":
        return None, -1
    try:
        return Fraction(text), 0
    except (ValueError, ZeroDivisionError):
        raise SetSyntaxError(f"bad number {text!r}") from None


def _parse_span(text: str, open_only: bool = True) -> tuple:
    m = _SPAN.match(text)
    if m is None:
        raise SetSyntaxError(f"bad interval {text.strip()!r}")
    lb, a, c, rb = m.groups()
    lo, lo_inf = _num(a)
    hi, hi_inf = _num(c)
    if lo_inf > 0 or hi_inf < 0:
        raise EmptyIntervalError(f"empty interval {text.strip()}")
    lo_closed, hi_closed = lb == "[", rb == "]"
    if (lo_closed and lo is None) or (hi_closed and hi is None):
        raise SetSyntaxError("infinite ends must be open")
    if open_only and (lo_closed or hi_closed):
        raise NotOpenError(f"interval {text.strip()} is not open")
    if lo is not None and hi is not None and lo >= hi and not (lo == hi and lo_closed and hi_closed):
        raise EmptyIntervalError(f"empty interval {text.strip()}")
    return lo, lo_closed, hi, hi_closed


def split_top(text: str, sep: str) -> list[str]:
    """Split on ``sep`` outside brackets."""
    out, depth, cur, i = [], 0, [], 0
    while i < len(text):
        ch = text[i]
        if ch in "([":
            depth += 1
        elif ch in ")]":
            depth -= 1
        if depth == 0 and text.startswith(sep, i):
            out.append("".join(cur))
            cur = []
            i += len(sep)
            continue
        cur.append(ch)
        i += 1
    out.append("".join(cur))
    return out


def _parse_ladder(body: str) -> DyadicSet:
    fields = {}
    for part in split_top(body, ";"):
        key, eq, value = part.partition("=")
        if not eq:
            raise SetSyntaxError(f"bad ladder field {part.strip()!r}")
        fields[key.strip()] = value.strip()
    if set(fields) != {"seed", "block", "sign"}:
        raise SetSyntaxError("ladder needs seed, block and sign")
    lo, _, hi, hi_closed = _parse_span(fields["block"], open_only=False)
    if lo is None or hi is None or lo <= 0 or hi != 2 * lo or not hi_closed:
        raise SetSyntaxError("ladder block must be (t/2,t] with t > 0")
    seed = EMPTY_PIECES
    for item in split_top(fields["seed"], " U "):
        slo, _, shi, _ = _parse_span(item)
        if slo is None or shi is None or slo < lo or shi > hi:
            raise SetSyntaxError(f"seed {item.strip()} leaves the block")
        seed = seed | Pieces.interval(slo, shi)
    sign = fields["sign"]
    if sign not in ("+", "-"):
        raise SetSyntaxError("ladder sign must be + or -")
    return DyadicSet.ladder(seed, hi, 1 if sign == "+" else -1)


def parse_set(text: str) -> DyadicSet:
    """Read a set literal such as ``(-inf,1) U ladder(seed=(3/4,1); block=(1/2,1]; sign=+)``."""
    text = text.strip()
    if text in ("empty", "{}", ""):
        return EMPTY
    if text in ("R", "reals"):
        return REALS
    acc = EMPTY
    for item in split_top(text, " U "):
        item = item.strip()
        if item.startswith("ladder(") and item.endswith(")"):
            acc = acc | _parse_ladder(item[len("ladder("):-1])
        elif item in ("R", "reals"):
            acc = REALS
        else:
            lo, _, hi, _ = _parse_span(item)
            acc = acc | DyadicSet.from_pieces(Pieces.interval(lo, hi))
    return acc


def parse_valuation(text: str) -> dict[str, DyadicSet]:
    """``p=(-inf,1); q=(0,inf)``; semicolons inside a ladder do not split."""
    out = {}
    for part in split_top(text, ";"):
        if not part.strip():
            continue
        name, eq, body = part.partition("=")
        if not eq:
            raise SetSyntaxError(f"bad valuation entry {part.strip()!r}")
        out[name.strip()] = parse_set(body)
    return out


# ---------------------------------------------------------------------------
# random sets and sample points for oracle checks

def random_set(rng: random.Random, max_spans: int = 3, denom: int = 4,
               span: int = 4, ladders: bool = True) -> DyadicSet:
    """A random open set: a few rational intervals, sometimes a ladder."""
    z = EMPTY_PIECES
    for _ in range(rng.randint(0, max_spans)):
        ends = sorted(rng.sample(range(-span * denom, span * denom + 1), 2))
        lo = None if rng.random() < 0.15 else Fraction(ends[0], denom)
        hi = None if rng.random() < 0.15 else Fraction(ends[1], denom)
        z = z | Pieces.interval(lo, hi)
    s = DyadicSet.from_pieces(z)
    if ladders and rng.random() < 0.4:
        t = Fraction(2) ** rng.randint(-1, 1)
        a, c = sorted(rng.sample(range(denom + 1, 2 * denom + 1), 2))
        seed = Pieces.interval(t * Fraction(a, 2 * denom), t * Fraction(c, 2 * denom))
        s = s | DyadicSet.ladder(seed, t, rng.choice((1, -1)))
    return s


def sample_points(sets: Iterable[DyadicSet], rng: random.Random, count: int = 200) -> list[Fraction]:
    """Breakpoints, their neighbours and random rationals near them."""
    crit = set()
    for s in sets:
        crit.update(s.critical_points())
    crit = sorted(crit)
    pts = set(crit)
    for a, b in zip(crit, crit[1:]):
        pts.add((a + b) / 2)
    while len(pts) < count:
        base = rng.choice(crit) if crit else Fraction(0)
        pts.add(base + Fraction(rng.randint(-64, 64), rng.choice((3, 7, 16, 64))))
        pts.add(base / 2 ** rng.randint(1, 6))
    return sorted(pts)[: max(count, len(crit))]
