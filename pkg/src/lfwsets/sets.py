"""Clopen subsets of K as canonical finite disjoint unions of balls.

A ball ``Ball(c, s)`` is ``c + P**s D``: every element whose digits with index
below ``s`` agree with those of ``c``.  Two balls meet iff one contains the
other, which makes all set operations exact and decidable.  Haar measure is
normalised so ``D`` has measure 1, giving ``measure(Ball(c, s)) = q**-s``.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Iterable, Sequence

from .errors import DomainError, ParamsMismatchError
from .field import FieldElement, FieldParams, RootOfUnity, chi, u_inverse
from .verdict import Verdict

__all__ = [
    "Ball",
    "ClopenSet",
    "StepFunction",
    "ExtendedRational",
    "INFINITE",
    "canonicalize",
    "set_boolean",
    "measure",
    "dilate",
    "translate",
    "reduce_mod_translations",
    "translation_index",
    "normalize_ball",
    "unit_sphere",
    "dilation_partition_check",
    "integral_inverse_valuation",
    "integral_char_over_ball",
    "step_combine",
]


@dataclass(frozen=True)
class Ball:
    center: FieldElement
    scale: int

    def __post_init__(self):
        object.__setattr__(self, "center", self.center.truncate(self.scale))

    @property
    def params(self) -> FieldParams:
        return self.center.params

    def measure(self) -> Fraction:
        return Fraction(self.params.q) ** (-self.scale)

    @property
    def valuation(self) -> int | None:
        """Common valuation index of all points, ``None`` when the ball holds 0."""
        return self.center.valuation

    def key(self):
        return (self.scale, self.center.terms)

    def contains_point(self, x: FieldElement) -> bool:
        return x.truncate(self.scale) == self.center

    def contains(self, other: "Ball") -> bool:
        return other.scale >= self.scale and other.center.truncate(self.scale) == self.center

    def intersects(self, other: "Ball") -> bool:
        return self.contains(other) or other.contains(self)

    def children(self) -> list["Ball"]:
        s = self.scale
        return [
            Ball(self.center + FieldElement.monomial(self.params, a, s), s + 1)
            for a in range(self.params.q)
        ]

    def parent(self) -> "Ball":
        return Ball(self.center, self.scale - 1)

    def refine(self, scale: int) -> list["Ball"]:
        """Split into the sub-balls at a finer ``scale``."""
        if scale <= self.scale:
            return [self]
        out = [self]
        for _ in range(scale - self.scale):
            out = [ch for b in out for ch in b.children()]
        return out

    def minus(self, inner: "Ball") -> list["Ball"]:
        """``self`` without a sub-ball, as disjoint balls (siblings along the path)."""
        if not self.contains(inner):
            return [self]
        pieces = []
        cur = self
        while cur.scale < inner.scale:
            nxt = None
            for ch in cur.children():
                if ch.contains(inner):
                    nxt = ch
                else:
                    pieces.append(ch)
            cur = nxt
        return pieces

    def dilate(self, j: int) -> "Ball":
        """``P**j * ball``."""
        return Ball(self.center.shift(j), self.scale + j)

    def translate(self, x: FieldElement) -> "Ball":
        return Ball(self.center + x, self.scale)

    def to_expr(self) -> str:
        return f"ball scale={self.scale} center={self.center.to_expr()}"

    def __repr__(self):
        return f"Ball({self.center.to_expr()}, {self.scale})"


def _check_params(items: Iterable[FieldParams]) -> FieldParams | None:
    first = None
    for p in items:
        if first is None:
            first = p
        elif p is not first and p != first:
            raise ParamsMismatchError(f"{first!r} vs {p!r}")
    return first


def _remove_contained(balls: list[Ball]) -> list[Ball]:
    by_scale: dict[int, set] = defaultdict(set)
    kept = []
    for b in sorted(set(balls), key=Ball.key):
        if any(b.center.truncate(s) in by_scale[s] for s in list(by_scale) if s <= b.scale):
            continue
        by_scale[b.scale].add(b.center)
        kept.append(b)
    return kept


def _merge_siblings(balls: list[Ball], q: int) -> list[Ball]:
    by_scale: dict[int, set] = defaultdict(set)
    for b in balls:
        by_scale[b.scale].add(b.center)
    if not by_scale:
        return []
    s, lo = max(by_scale), min(by_scale)
    # finest first, so a merged parent can itself merge one level up
    while s >= lo:
        groups: dict[FieldElement, list] = defaultdict(list)
        for c in by_scale.get(s, ()):
            groups[c.truncate(s - 1)].append(c)
        for parent, kids in groups.items():
            if len(kids) == q:
                by_scale[s].difference_update(kids)
                by_scale[s - 1].add(parent)
                lo = min(lo, s - 1)
        s -= 1
    out = [Ball(c, s) for s, cs in by_scale.items() for c in cs]
    out.sort(key=Ball.key)
    return out


@dataclass(frozen=True)
class ClopenSet:
    """Canonical disjoint union of balls; equal point sets compare equal."""

    params: FieldParams
    balls: tuple[Ball, ...] = ()

    @classmethod
    def from_balls(cls, balls: Iterable[Ball], params: FieldParams | None = None) -> "ClopenSet":
        return canonicalize(balls, params)

    @classmethod
    def empty(cls, params: FieldParams) -> "ClopenSet":
        return cls(params, ())

    @classmethod
    def ball(cls, center: FieldElement, scale: int) -> "ClopenSet":
        return cls(center.params, (Ball(center, scale),))

    @classmethod
    def ideal(cls, params: FieldParams, s: int = 0) -> "ClopenSet":
        """``P**s D = {|x| <= q**-s}``; ``s = 0`` gives the integers D."""
        return cls(params, (Ball(FieldElement.zero(params), s),))

    @classmethod
    def sphere(cls, params: FieldParams, k: int) -> "ClopenSet":
        """``{|x| = q**k}``."""
        return cls.ideal(params, -k) - cls.ideal(params, -k + 1)

    def __iter__(self):
        return iter(self.balls)

    def __len__(self):
        return len(self.balls)

    def is_empty(self) -> bool:
        return not self.balls

    def measure(self) -> Fraction:
        return sum((b.measure() for b in self.balls), Fraction(0))

    def contains_point(self, x: FieldElement) -> bool:
        return any(b.contains_point(x) for b in self.balls)

    def has_zero_ball(self) -> bool:
        return any(not b.center for b in self.balls)

    def __or__(self, other: "ClopenSet") -> "ClopenSet":
        return set_boolean("union", self, other)

    def __and__(self, other: "ClopenSet") -> "ClopenSet":
        return set_boolean("intersect", self, other)

    def __sub__(self, other: "ClopenSet") -> "ClopenSet":
        return set_boolean("difference", self, other)

    def issubset(self, other: "ClopenSet") -> bool:
        return (self - other).is_empty()

    def isdisjoint(self, other: "ClopenSet") -> bool:
        return (self & other).is_empty()

    def dilate(self, j: int) -> "ClopenSet":
        return dilate(self, j)

    def translate(self, x: FieldElement) -> "ClopenSet":
        return translate(self, x)

    def __repr__(self):
        return "ClopenSet[" + ", ".join(repr(b) for b in self.balls) + "]"


def canonicalize(balls: Iterable[Ball], params: FieldParams | None = None) -> ClopenSet:
    balls = list(balls)
    found = _check_params(b.params for b in balls)
    if params is None:
        if found is None:
            raise DomainError("cannot infer field parameters of an empty ball list")
        params = found
    elif found is not None:
        _check_params([params, found])
    balls = _merge_siblings(_remove_contained(balls), params.q)
    return ClopenSet(params, tuple(balls))


def _subtract(pieces: list[Ball], b: Ball) -> list[Ball]:
    out = []
    for a in pieces:
        if b.contains(a):
            continue
        if a.contains(b):
            out.extend(a.minus(b))
        else:
            out.append(a)
    return out


def set_boolean(op: str, A: ClopenSet, B: ClopenSet) -> ClopenSet:
    _check_params([A.params, B.params])
    if op == "union":
        return canonicalize(A.balls + B.balls, A.params)
    if op == "intersect":
        out = []
        for a in A.balls:
            for b in B.balls:
                if a.contains(b):
                    out.append(b)
                elif b.contains(a):
                    out.append(a)
        return canonicalize(out, A.params)
    if op == "difference":
        pieces = list(A.balls)
        for b in B.balls:
            pieces = _subtract(pieces, b)
        return canonicalize(pieces, A.params)
    raise DomainError(f"unknown set operation {op!r}")


def measure(S: ClopenSet) -> Fraction:
    return S.measure()


def dilate(S: ClopenSet, j: int) -> ClopenSet:
    """``P**j S``; measure scales by ``q**-j``."""
    return ClopenSet(S.params, tuple(sorted((b.dilate(j) for b in S.balls), key=Ball.key)))


def translate(S: ClopenSet, x: FieldElement) -> ClopenSet:
    return ClopenSet(S.params, tuple(sorted((b.translate(x) for b in S.balls), key=Ball.key)))


class ExtendedRational:
    """A nonnegative exact rational or ``INFINITE``."""

    __slots__ = ("value",)

    def __init__(self, value=None):
        self.value = None if value is None else Fraction(value)

    @property
    def is_infinite(self) -> bool:
        return self.value is None

    def __add__(self, other):
        if not isinstance(other, ExtendedRational):
            other = ExtendedRational(other)
        if self.is_infinite or other.is_infinite:
            return INFINITE
        return ExtendedRational(self.value + other.value)

    __radd__ = __add__

    def __mul__(self, k):
        k = Fraction(k)
        if self.is_infinite:
            return INFINITE if k else ExtendedRational(0)
        return ExtendedRational(self.value * k)

    __rmul__ = __mul__

    def __eq__(self, other):
        if isinstance(other, ExtendedRational):
            return self.value == other.value
        if isinstance(other, (int, Fraction)):
            return self.value is not None and self.value == other
        return NotImplemented

    def __hash__(self):
        return hash(self.value)

    def __lt__(self, other):
        other = other if isinstance(other, ExtendedRational) else ExtendedRational(other)
        if self.is_infinite:
            return False
        return other.is_infinite or self.value < other.value

    def __le__(self, other):
        return self == other or self < other

    def __gt__(self, other):
        other = other if isinstance(other, ExtendedRational) else ExtendedRational(other)
        return other < self

    def __ge__(self, other):
        return self == other or self > other

    def __str__(self):
        if self.is_infinite:
            return "inf"
        v = self.value
        return str(v.numerator) if v.denominator == 1 else f"{v.numerator}/{v.denominator}"

    def __repr__(self):
        return f"ExtendedRational({self})"


INFINITE = ExtendedRational(None)


# ---------------------------------------------------------------------------
# step functions


def _is_rational(v) -> bool:
    return isinstance(v, (int, Fraction))


def _accumulate(items: Iterable[tuple[Ball, object]]) -> list[tuple[Ball, object]]:
    """Disjoint pieces of the pointwise sum of weighted (possibly overlapping) balls."""
    pieces: list[tuple[Ball, object]] = []
    for b, w in sorted(items, key=lambda it: it[0].key()):
        sup = next((i for i, (pb, _) in enumerate(pieces) if pb.contains(b)), None)
        if sup is not None:
            pb, v = pieces.pop(sup)
            pieces.extend((r, v) for r in pb.minus(b))
            pieces.append((b, v + w))
            continue
        rest = [b]
        for i, (pb, v) in enumerate(pieces):
            if b.contains(pb):
                pieces[i] = (pb, v + w)
                rest = _subtract(rest, pb)
        pieces.extend((r, w) for r in rest)
    return pieces


def _normalize_pieces(pieces: list[tuple[Ball, object]], q: int) -> tuple[tuple[Ball, object], ...]:
    pieces = [(b, v) for b, v in pieces if v != 0]
    changed = True
    while changed:
        changed = False
        groups = defaultdict(list)
        for b, v in pieces:
            groups[(b.scale, b.center.truncate(b.scale - 1))].append((b, v))
        merged = []
        for (s, pc), grp in groups.items():
            if len(grp) == q and all(v == grp[0][1] for _, v in grp):
                merged.append((Ball(pc, s - 1), grp[0][1]))
                changed = True
            else:
                merged.extend(grp)
        pieces = merged
    pieces.sort(key=lambda it: it[0].key())
    return tuple(pieces)


@dataclass(frozen=True)
class StepFunction:
    """Finitely supported function constant on disjoint balls, zero elsewhere.

    ``domain`` is ``"rational"`` (values are Fractions) or ``"complex"``.
    Construct with :meth:`from_pieces`, which accepts overlapping balls and
    sums them.
    """

    params: FieldParams
    pieces: tuple[tuple[Ball, object], ...] = ()
    domain: str = "rational"

    @classmethod
    def from_pieces(cls, pieces: Iterable[tuple[Ball, object]], params: FieldParams,
                    domain: str | None = None) -> "StepFunction":
        pieces = list(pieces)
        _check_params([params] + [b.params for b, _ in pieces])
        if domain is None:
            domain = "rational" if all(_is_rational(v) for _, v in pieces) else "complex"
        if domain == "rational":
            if not all(_is_rational(v) for _, v in pieces):
                raise DomainError("complex value in a rational step function")
            pieces = [(b, Fraction(v)) for b, v in pieces]
        elif domain == "complex":
            pieces = [(b, complex(v)) for b, v in pieces]
        else:
            raise DomainError(f"unknown value domain {domain!r}")
        return cls(params, _normalize_pieces(_accumulate(pieces), params.q), domain)

    @classmethod
    def from_disjoint(cls, pieces: Iterable[tuple[Ball, object]], params: FieldParams,
                      domain: str) -> "StepFunction":
        """Fast path for pieces already known to be pairwise disjoint."""
        conv = Fraction if domain == "rational" else complex
        return cls(params, _normalize_pieces([(b, conv(v)) for b, v in pieces], params.q), domain)

    @classmethod
    def zero(cls, params: FieldParams, domain: str = "rational") -> "StepFunction":
        return cls(params, (), domain)

    @classmethod
    def indicator(cls, S: ClopenSet, value=1) -> "StepFunction":
        return cls.from_pieces([(b, value) for b in S.balls], S.params)

    def __call__(self, x: FieldElement):
        for b, v in self.pieces:
            if b.contains_point(x):
                return v
        return Fraction(0) if self.domain == "rational" else 0j

    evaluate = __call__

    def support(self) -> ClopenSet:
        return canonicalize([b for b, _ in self.pieces], self.params)

    def values(self) -> set:
        return {v for _, v in self.pieces}

    def integral(self):
        zero = Fraction(0) if self.domain == "rational" else 0j
        return sum((v * b.measure() if self.domain == "rational" else v * float(b.measure())
                    for b, v in self.pieces), zero)

    def as_complex(self) -> "StepFunction":
        return StepFunction(self.params, tuple((b, complex(v)) for b, v in self.pieces), "complex")

    def _coerce(self, other: "StepFunction") -> None:
        _check_params([self.params, other.params])
        if self.domain != other.domain:
            raise DomainError(f"value-domain mismatch ({self.domain} vs {other.domain}); promote with as_complex()")

    def __add__(self, other: "StepFunction") -> "StepFunction":
        self._coerce(other)
        return StepFunction.from_pieces(self.pieces + other.pieces, self.params, self.domain)

    def __neg__(self) -> "StepFunction":
        return self.scale(-1)

    def __sub__(self, other: "StepFunction") -> "StepFunction":
        return self + (-other)

    def scale(self, k) -> "StepFunction":
        domain = self.domain if _is_rational(k) else "complex"
        if domain == "complex" and self.domain == "rational":
            return self.as_complex().scale(k)
        return StepFunction.from_pieces([(b, v * k) for b, v in self.pieces], self.params, domain)

    def map(self, fn: Callable, domain: str | None = None) -> "StepFunction":
        return StepFunction.from_pieces([(b, fn(v)) for b, v in self.pieces], self.params, domain)

    def conj(self) -> "StepFunction":
        if self.domain == "rational":
            return self
        return StepFunction(self.params, tuple((b, v.conjugate()) for b, v in self.pieces), "complex")

    def __mul__(self, other: "StepFunction") -> "StepFunction":
        self._coerce(other)
        out = []
        for a, va in self.pieces:
            for b, vb in other.pieces:
                if a.contains(b):
                    out.append((b, va * vb))
                elif b.contains(a):
                    out.append((a, va * vb))
        return StepFunction.from_pieces(out, self.params, self.domain)

    def restrict(self, S: ClopenSet) -> "StepFunction":
        _check_params([self.params, S.params])
        out = []
        for a, v in self.pieces:
            for b in S.balls:
                if a.contains(b):
                    out.append((b, v))
                elif b.contains(a):
                    out.append((a, v))
        return StepFunction.from_pieces(out, self.params, self.domain)

    def refine(self, scale: int) -> "StepFunction":
        """Same function with every piece split down to ``scale`` (not re-merged)."""
        pieces = tuple((c, v) for b, v in self.pieces for c in b.refine(scale))
        return StepFunction(self.params, tuple(sorted(pieces, key=lambda it: it[0].key())), self.domain)

    def level_set(self, predicate: Callable) -> ClopenSet:
        return canonicalize([b for b, v in self.pieces if predicate(v)], self.params)

    def max_scale(self) -> int | None:
        return max((b.scale for b, _ in self.pieces), default=None)

    def __repr__(self):
        body = ", ".join(f"{b!r}: {v}" for b, v in self.pieces)
        return f"StepFunction[{body}]"


def step_combine(op: str, f: StepFunction, g=None) -> StepFunction:
    if op == "add":
        return f + g
    if op == "scale":
        return f.scale(g)
    if op == "multiply":
        return f * g
    if op == "restrict":
        return f.restrict(g)
    raise DomainError(f"unknown step operation {op!r}")


# ---------------------------------------------------------------------------
# translation reduction and dilation tiling


def translation_index(ball: Ball) -> tuple[int, Ball]:
    """Write a ball of scale >= 0 as ``u(t) + r`` with ``r`` a sub-ball of D."""
    if ball.scale < 0:
        raise DomainError("ball is coarser than D; split it first")
    return u_inverse(ball.center.truncate(0)), Ball(ball.center.tail(0), ball.scale)


def reduce_mod_translations(S: ClopenSet) -> StepFunction:
    """Multiplicity ``xi -> #{t : xi + u(t) in S}`` on D, as an integer step function."""
    D = Ball(FieldElement.zero(S.params), 0)
    items = []
    for b in S.balls:
        if b.scale <= 0:
            items.append((D, S.params.q ** (-b.scale)))
        else:
            items.append((translation_index(b)[1], 1))
    return StepFunction.from_pieces(items, S.params, "rational")


def unit_sphere(params: FieldParams) -> ClopenSet:
    return ClopenSet.sphere(params, 0)


def normalize_ball(b: Ball) -> Ball:
    """Dilate a ball of constant valuation onto the unit sphere ``{|x| = 1}``."""
    if b.valuation is None:
        raise DomainError("a ball containing 0 has no constant valuation")
    return b.dilate(-b.valuation)


def dilation_partition_check(sets: Sequence[ClopenSet]) -> Verdict:
    """Do the dilates ``P**j W_m`` (all j, m) tile ``K`` up to the point 0?

    Each ball of constant valuation sweeps out exactly the dilates of its
    normalised copy, so the family tiles iff the normalised balls partition
    the unit sphere.
    """
    v = Verdict("dilation_partition")
    if not sets:
        raise DomainError("empty family")
    params = _check_params(S.params for S in sets)
    entries = []
    for m, S in enumerate(sets, 1):
        for b in S.balls:
            if b.valuation is None:
                v.add("zero-ball", False, f"W{m} contains a ball around 0")
                v.witnesses.append({"clause": "zero-ball", "m": m, "ball": b})
                return v
            entries.append((m, b, normalize_ball(b)))
    total = sum((nb.measure() for _, _, nb in entries), Fraction(0))
    sphere = unit_sphere(params)
    v.quantities["normalized_measure"] = total
    v.quantities["sphere_measure"] = sphere.measure()
    overlap = None
    for i in range(len(entries)):
        for k in range(i + 1, len(entries)):
            if entries[i][2].intersects(entries[k][2]):
                overlap = (entries[i], entries[k])
                break
        if overlap:
            break
    if overlap:
        (m1, b1, n1), (m2, b2, n2) = overlap
        v.add("tiling-overlap", False, f"dilates of W{m1} and W{m2} overlap")
        v.witnesses.append({"clause": "tiling-overlap", "m": m1, "ball": b1, "m2": m2, "ball2": b2,
                            "normalized": n1 if n1.scale >= n2.scale else n2})
    else:
        v.add("tiling-overlap", True)
    covered = canonicalize([nb for _, _, nb in entries], params)
    uncovered = sphere - covered
    if uncovered.is_empty():
        v.add("tiling-cover", True)
    else:
        v.add("tiling-cover", False, "unit sphere not covered by normalised balls")
        v.witnesses.append({"clause": "tiling-cover", "ball": uncovered.balls[0]})
    return v


def integral_inverse_valuation(S: ClopenSet, power: int = 1) -> ExtendedRational:
    """``integral over S of |xi|**-power``; infinite when S contains a ball around 0."""
    if power not in (1, 2):
        raise DomainError("power must be 1 or 2")
    q = Fraction(S.params.q)
    total = Fraction(0)
    for b in S.balls:
        if b.valuation is None:
            return INFINITE
        total += q ** (-b.scale) * q ** (power * b.valuation)
    return ExtendedRational(total)


def integral_char_over_ball(y: FieldElement, b: Ball) -> tuple[RootOfUnity, Fraction]:
    """``integral over b of chi(y * xi)``, returned as ``(root, magnitude)``."""
    p = b.params.p
    vy = y.valuation
    if vy is not None and vy < -b.scale:
        return RootOfUnity(0, p), Fraction(0)
    return chi(y * b.center), b.measure()
