"""Exact arithmetic in K = GF(q)((t)) restricted to finite Laurent expansions.

Elements are sums ``a_n * P**n`` over finitely many integer indices ``n``,
where ``P`` is the uniformizer and each digit ``a_n`` lies in GF(q).  GF(q)
is realised as F_p[X]/(modulus) with basis ``eps_k = X**k``; a digit is
stored as the integer code ``sum(d_k * p**k)`` of its coordinate vector.
With this encoding the translation set u(n) for n < q is simply
``code(n) * P**-1``.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
import cmath

from .errors import DomainError, ParamsMismatchError, SetFileError

__all__ = [
    "DEFAULT_MODULI",
    "FieldParams",
    "GFqElem",
    "FieldElement",
    "RootOfUnity",
    "Cyclotomic",
    "default_params",
    "gfq_mul",
    "u_map",
    "u_inverse",
    "chi",
    "chi_pair",
    "enumerate_translations",
    "parse_element",
]

# lowest-degree-first coefficient lists of monic irreducible polynomials
DEFAULT_MODULI = {
    (2, 1): (0, 1),
    (3, 1): (0, 1),
    (5, 1): (0, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
}


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    d = 2
    while d * d <= n:
        if n % d == 0:
            return False
        d += 1
    return True


def _poly_mod(a: list[int], m: list[int], p: int) -> list[int]:
    """Remainder of a modulo the monic polynomial m over F_p."""
    a = list(a)
    dm = len(m) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        coef = a[i] % p
        if coef:
            for k in range(dm + 1):
                a[i - dm + k] = (a[i - dm + k] - coef * m[k]) % p
    rem = [x % p for x in a[:dm]]
    return rem + [0] * (dm - len(rem))


def _is_irreducible(modulus: tuple[int, ...], p: int) -> bool:
    c = len(modulus) - 1
    for d in range(1, c // 2 + 1):
        for low in itertools.product(range(p), repeat=d):
            g = list(low) + [1]
            if not any(_poly_mod(list(modulus), g, p)):
                return False
    return True


@dataclass(frozen=True)
class FieldParams:
    """Prime ``p``, degree ``c`` and the monic modulus defining GF(p**c)."""

    p: int
    c: int
    modulus: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "modulus", tuple(int(d) for d in self.modulus))
        if not _is_prime(self.p):
            raise DomainError(f"p={self.p} is not prime")
        if self.c < 1:
            raise DomainError(f"c={self.c} must be positive")
        if len(self.modulus) != self.c + 1:
            raise DomainError(f"modulus needs {self.c + 1} coefficients, got {len(self.modulus)}")
        if any(not 0 <= d < self.p for d in self.modulus):
            raise DomainError("modulus coefficients must lie in [0, p)")
        if self.modulus[-1] != 1:
            raise DomainError("modulus must be monic")
        if not _is_irreducible(self.modulus, self.p):
            raise DomainError(f"modulus {self.modulus} is reducible over F_{self.p}")

    @property
    def q(self) -> int:
        return self.p ** self.c

    def digits_of(self, code: int) -> tuple[int, ...]:
        out = []
        for _ in range(self.c):
            code, d = divmod(code, self.p)
            out.append(d)
        return tuple(out)

    def code_of(self, digits) -> int:
        digits = tuple(digits)
        if len(digits) != self.c:
            raise DomainError(f"expected {self.c} digits, got {len(digits)}")
        code = 0
        for d in reversed(digits):
            if not 0 <= d < self.p:
                raise DomainError(f"digit {d} is not in [0, {self.p})")
            code = code * self.p + d
        return code

    @cached_property
    def add_table(self) -> tuple[tuple[int, ...], ...]:
        p, q = self.p, self.q
        digits = [self.digits_of(a) for a in range(q)]
        return tuple(
            tuple(self.code_of([(x + y) % p for x, y in zip(digits[a], digits[b])]) for b in range(q))
            for a in range(q)
        )

    @cached_property
    def neg_table(self) -> tuple[int, ...]:
        return tuple(self.code_of([(-x) % self.p for x in self.digits_of(a)]) for a in range(self.q))

    @cached_property
    def mul_table(self) -> tuple[tuple[int, ...], ...]:
        p, c = self.p, self.c
        m = list(self.modulus)
        digits = [self.digits_of(a) for a in range(self.q)]
        rows = []
        for a in range(self.q):
            row = []
            for b in range(self.q):
                prod = [0] * (2 * c - 1)
                for i, x in enumerate(digits[a]):
                    if x:
                        for k, y in enumerate(digits[b]):
                            prod[i + k] = (prod[i + k] + x * y) % p
                row.append(self.code_of(_poly_mod(prod, m, p)))
            rows.append(tuple(row))
        return tuple(rows)

    @cached_property
    def trace0_table(self) -> tuple[tuple[int, ...], ...]:
        """``eps_0``-coordinate of ``a*b``: the character exponent of ``a*b*P**-1``."""
        return tuple(tuple(v % self.p for v in row) for row in self.mul_table)

    def __repr__(self):
        poly = ",".join(str(d) for d in self.modulus)
        return f"FieldParams(p={self.p}, c={self.c}, poly={poly})"


def default_params(p: int, c: int = 1) -> FieldParams:
    try:
        modulus = DEFAULT_MODULI[(p, c)]
    except KeyError:
        if c == 1:
            modulus = (0, 1)
        else:
            raise DomainError(f"no default modulus for p={p}, c={c}; supply one") from None
    return FieldParams(p, c, modulus)


def _check_same(a: FieldParams, b: FieldParams) -> None:
    if a is not b and a != b:
        raise ParamsMismatchError(f"{a!r} vs {b!r}")


@dataclass(frozen=True)
class GFqElem:
    params: FieldParams
    code: int

    @classmethod
    def from_digits(cls, params: FieldParams, digits) -> "GFqElem":
        return cls(params, params.code_of(digits))

    @property
    def digits(self) -> tuple[int, ...]:
        return self.params.digits_of(self.code)

    def __add__(self, other: "GFqElem") -> "GFqElem":
        _check_same(self.params, other.params)
        return GFqElem(self.params, self.params.add_table[self.code][other.code])

    def __neg__(self) -> "GFqElem":
        return GFqElem(self.params, self.params.neg_table[self.code])

    def __mul__(self, other: "GFqElem") -> "GFqElem":
        return gfq_mul(self, other)


def gfq_mul(a: GFqElem, b: GFqElem) -> GFqElem:
    _check_same(a.params, b.params)
    return GFqElem(a.params, a.params.mul_table[a.code][b.code])


@dataclass(frozen=True)
class FieldElement:
    """Finite expansion ``sum(code_n * P**n)``.

    ``terms`` is a tuple of ``(index, code)`` pairs sorted by index with every
    code nonzero, so equal elements compare and hash equal.
    """

    params: FieldParams
    terms: tuple[tuple[int, int], ...] = ()

    @classmethod
    def from_dict(cls, params: FieldParams, digits: dict[int, int]) -> "FieldElement":
        return cls(params, tuple(sorted((n, a) for n, a in digits.items() if a)))

    @classmethod
    def zero(cls, params: FieldParams) -> "FieldElement":
        return cls(params, ())

    @classmethod
    def one(cls, params: FieldParams) -> "FieldElement":
        return cls(params, ((0, 1),))

    @classmethod
    def monomial(cls, params: FieldParams, digit, index: int) -> "FieldElement":
        code = digit.code if isinstance(digit, GFqElem) else int(digit)
        if not 0 <= code < params.q:
            raise DomainError(f"digit code {code} outside GF({params.q})")
        return cls(params, ((index, code),) if code else ())

    @classmethod
    def uniformizer_power(cls, params: FieldParams, index: int) -> "FieldElement":
        return cls(params, ((index, 1),))

    def __bool__(self) -> bool:
        return bool(self.terms)

    @property
    def valuation(self) -> int | None:
        """Index of the leading digit, ``None`` for zero (so ``|x| = q**-valuation``)."""
        return self.terms[0][0] if self.terms else None

    @property
    def top_index(self) -> int | None:
        return self.terms[-1][0] if self.terms else None

    def abs(self) -> Fraction:
        if not self.terms:
            return Fraction(0)
        return Fraction(self.params.q) ** (-self.terms[0][0])

    def digit(self, index: int) -> int:
        for n, a in self.terms:
            if n == index:
                return a
            if n > index:
                break
        return 0

    def as_dict(self) -> dict[int, int]:
        return dict(self.terms)

    def shift(self, j: int) -> "FieldElement":
        """Multiply by ``P**j``."""
        if not j:
            return self
        return FieldElement(self.params, tuple((n + j, a) for n, a in self.terms))

    def truncate(self, s: int) -> "FieldElement":
        """Keep the digits with index < s (the canonical center modulo ``P**s D``)."""
        terms = self.terms
        if not terms or terms[-1][0] < s:
            return self
        return FieldElement(self.params, tuple(t for t in terms if t[0] < s))

    def tail(self, s: int) -> "FieldElement":
        """Digits with index >= s."""
        return FieldElement(self.params, tuple(t for t in self.terms if t[0] >= s))

    def __add__(self, other: "FieldElement") -> "FieldElement":
        _check_same(self.params, other.params)
        if not other.terms:
            return self
        if not self.terms:
            return other
        add = self.params.add_table
        out = dict(self.terms)
        for n, b in other.terms:
            a = out.get(n)
            out[n] = b if a is None else add[a][b]
        return FieldElement.from_dict(self.params, out)

    def __neg__(self) -> "FieldElement":
        neg = self.params.neg_table
        return FieldElement(self.params, tuple((n, neg[a]) for n, a in self.terms))

    def __sub__(self, other: "FieldElement") -> "FieldElement":
        return self + (-other)

    def __mul__(self, other: "FieldElement") -> "FieldElement":
        _check_same(self.params, other.params)
        if not self.terms or not other.terms:
            return FieldElement.zero(self.params)
        add, mul = self.params.add_table, self.params.mul_table
        out: dict[int, int] = {}
        for n, a in self.terms:
            row = mul[a]
            for k, b in other.terms:
                prev = out.get(n + k, 0)
                out[n + k] = add[prev][row[b]]
        return FieldElement.from_dict(self.params, out)

    def to_expr(self) -> str:
        """Render in center-expression syntax, e.g. ``(1)@-2 + (1)@-1``."""
        if not self.terms:
            return "0"
        return " + ".join(
            "(" + ",".join(str(d) for d in self.params.digits_of(a)) + f")@{n}" for n, a in self.terms
        )

    def __repr__(self):
        return f"<{self.to_expr()}>"


_MONOMIAL = re.compile(r"\s*\(([^)]*)\)\s*@\s*([+-]?\d+)\s*")


def parse_element(text: str, params: FieldParams, column: int = 1, line: int | None = None) -> FieldElement:
    """Parse a center expression: ``0`` or ``(d0,...,d_{c-1})@k + ...``."""
    if text.strip() == "0":
        return FieldElement.zero(params)
    out = FieldElement.zero(params)
    pos = 0
    for part in text.split("+"):
        m = _MONOMIAL.fullmatch(part)
        col = column + pos
        if m is None:
            raise SetFileError(f"malformed monomial {part.strip()!r}", line, col)
        try:
            digits = [int(d) for d in m.group(1).split(",")]
        except ValueError:
            raise SetFileError(f"malformed digits in {part.strip()!r}", line, col) from None
        if len(digits) != params.c:
            raise SetFileError(f"monomial needs {params.c} digits, got {len(digits)}", line, col)
        for d in digits:
            if not 0 <= d < params.p:
                raise SetFileError(f"digit {d} >= p={params.p}" if d >= 0 else f"negative digit {d}", line, col)
        out = out + FieldElement.monomial(params, params.code_of(digits), int(m.group(2)))
        pos += len(part) + 1
    return out


@dataclass(frozen=True)
class RootOfUnity:
    """``exp(2*pi*i*exponent/p)``."""

    exponent: int
    p: int

    def __post_init__(self):
        object.__setattr__(self, "exponent", self.exponent % self.p)

    def __mul__(self, other: "RootOfUnity") -> "RootOfUnity":
        if self.p != other.p:
            raise ParamsMismatchError("roots of unity of different orders")
        return RootOfUnity(self.exponent + other.exponent, self.p)

    def conjugate(self) -> "RootOfUnity":
        return RootOfUnity(-self.exponent, self.p)

    def __complex__(self) -> complex:
        return cmath.exp(2j * cmath.pi * self.exponent / self.p)


@dataclass(frozen=True)
class Cyclotomic:
    """Exact element ``sum(coeffs[k] * zeta**k)`` of Q(zeta_p).

    Normalised so the last coefficient is zero; ``1, zeta, ..., zeta**(p-2)``
    is a Q-basis, so equality of normalised tuples is equality of numbers.
    """

    p: int
    coeffs: tuple[Fraction, ...] = field(default=())

    def __post_init__(self):
        cs = list(self.coeffs) + [Fraction(0)] * (self.p - len(self.coeffs))
        last = Fraction(cs[-1])
        object.__setattr__(self, "coeffs", tuple(Fraction(x) - last for x in cs))

    @classmethod
    def term(cls, root: RootOfUnity, value) -> "Cyclotomic":
        cs = [Fraction(0)] * root.p
        cs[root.exponent] = Fraction(value)
        return cls(root.p, tuple(cs))

    def __add__(self, other: "Cyclotomic") -> "Cyclotomic":
        return Cyclotomic(self.p, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def scale(self, value) -> "Cyclotomic":
        return Cyclotomic(self.p, tuple(a * value for a in self.coeffs))

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __complex__(self) -> complex:
        return sum(
            (float(a) * cmath.exp(2j * cmath.pi * k / self.p) for k, a in enumerate(self.coeffs) if a),
            0j,
        )


def u_map(n: int, params: FieldParams) -> FieldElement:
    """The n-th translation: base-q digit ``b_k`` of n sits at index ``-(k+1)``."""
    if n < 0:
        raise DomainError("u(n) needs n >= 0")
    q = params.q
    terms = []
    k = 1
    while n:
        n, b = divmod(n, q)
        if b:
            terms.append((-k, b))
        k += 1
    terms.reverse()
    return FieldElement(params, tuple(terms))


def u_inverse(x: FieldElement) -> int:
    q = x.params.q
    n = 0
    for index, code in x.terms:
        if index >= 0:
            raise DomainError(f"{x.to_expr()} has a digit at index {index} >= 0; not a translation")
        n += code * q ** (-index - 1)
    return n


def chi(x: FieldElement) -> RootOfUnity:
    """The canonical character: ``eps_0``-coordinate of the digit at index -1."""
    return RootOfUnity(x.digit(-1) % x.params.p, x.params.p)


def chi_pair(y: FieldElement, x: FieldElement) -> RootOfUnity:
    return chi(y * x)


def enumerate_translations(k: int, params: FieldParams) -> list[FieldElement]:
    """``[u(0), ..., u(q**k - 1)]``: every expansion supported on ``[-k, -1]``."""
    if k < 0:
        raise DomainError("k must be >= 0")
    return [u_map(n, params) for n in range(params.q ** k)]
