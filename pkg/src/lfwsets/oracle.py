"""Finite-resolution Fourier analysis on K, independent of the set-level verifiers.

Everything here works with step functions: the Fourier transform of the
indicator of ``c + P**s D`` is ``xi -> chi(-xi c) q**-s 1{|xi| <= q**s}``,
again a step function.  Frame sums are evaluated term by term over finite
``(j, t)`` windows outside of which every term vanishes exactly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

import numpy as np

from .errors import DomainError, PreconditionError
from .field import Cyclotomic, FieldElement, FieldParams, chi, u_map
from .sets import Ball, ClopenSet, StepFunction, integral_char_over_ball

__all__ = [
    "TestFunction",
    "FrameSum",
    "fourier_step",
    "inner_product",
    "analysis_integral",
    "analysis_coefficient",
    "affine_element",
    "frame_sum",
    "calderon_sum_at",
    "shift_sum_at",
    "dimension_sum_at",
    "character_orthonormality",
    "random_test_function",
    "random_point",
]

MAX_TERMS = 1 << 22


@dataclass(frozen=True)
class TestFunction:
    """A complex step function tagged with the side (time or frequency) it lives on."""

    __test__ = False  # not a pytest class

    side: str
    f: StepFunction

    def __post_init__(self):
        if self.side not in ("time", "frequency"):
            raise DomainError(f"side must be 'time' or 'frequency', not {self.side!r}")
        if self.f.domain != "complex":
            object.__setattr__(self, "f", self.f.as_complex())

    @property
    def params(self) -> FieldParams:
        return self.f.params

    @property
    def resolution(self) -> int | None:
        return self.f.max_scale()

    def support_bounds(self) -> tuple[int | None, int | None]:
        """``(a, b)`` with the carrier inside ``q**-a <= |xi| <= q**b``; ``a`` is None if it reaches 0."""
        vals = [b.valuation for b, _ in self.f.pieces]
        if not vals:
            return None, None
        a = None if any(v is None for v in vals) else max(vals)
        b = -min(v if v is not None else blk.scale for (blk, _), v in zip(self.f.pieces, vals))
        return a, b

    def norm2(self) -> float:
        return float(sum(abs(v) ** 2 * float(b.measure()) for b, v in self.f.pieces))


def _omega(p: int) -> np.ndarray:
    return np.exp(2j * np.pi * np.arange(p) / p)


def _grid(q: int, n: int) -> np.ndarray:
    """All digit vectors of length n (row r holds the base-q digits of r, least significant first)."""
    r = np.arange(q ** n, dtype=np.int64)
    out = np.empty((q ** n, n), dtype=np.int64)
    for i in range(n):
        r, out[:, i] = np.divmod(r, q)
    return out


def fourier_step(tf: TestFunction, direction: str = "forward") -> TestFunction:
    """Exact transform of a step function (``forward`` uses ``chi(-xi x)``, ``inverse`` ``chi(xi x)``)."""
    if direction not in ("forward", "inverse"):
        raise DomainError("direction must be 'forward' or 'inverse'")
    params = tf.params
    q, p = params.q, params.p
    side = "frequency" if direction == "forward" else "time"
    pieces = tf.f.pieces
    if not pieces:
        return TestFunction(side, StepFunction.zero(params, "complex"))
    sign = -1 if direction == "forward" else 1
    smax = max(b.scale for b, _ in pieces)
    lo = -smax  # image supported on {valuation >= -smax}
    rho = max([lo] + [(-b.valuation if b.valuation is not None else -b.scale) for b, _ in pieces])
    n = rho - lo
    if q ** n > MAX_TERMS:
        raise PreconditionError(f"transform grid q^{n} too large")
    digits = _grid(q, n)
    idx = np.arange(lo, rho)
    if n:
        first_nz = np.where(digits.any(axis=1), np.argmax(digits != 0, axis=1), n)
    else:
        first_nz = np.zeros(1, dtype=np.int64)
    val_index = lo + first_nz  # valuation of each grid point (rho for the zero row)
    tr = np.array(params.trace0_table, dtype=np.int64)
    omega = _omega(p)
    out = np.zeros(q ** n, dtype=complex)
    for ball, value in pieces:
        c = ball.center
        e = np.zeros(q ** n, dtype=np.int64)
        for col, i in enumerate(idx):
            d = c.digit(-1 - int(i))
            if d:
                e += tr[digits[:, col], d]
        e = (sign * e) % p
        mask = val_index >= -ball.scale
        out += np.where(mask, value * float(ball.measure()) * omega[e], 0)
    zero = FieldElement.zero(params)
    result = []
    for r in np.nonzero(out)[0]:
        x = FieldElement(params, tuple((int(i), int(d)) for i, d in zip(idx, digits[r]) if d))
        result.append((Ball(x if n else zero, rho), complex(out[r])))
    return TestFunction(side, StepFunction.from_disjoint(result, params, "complex"))


def inner_product(f: TestFunction, g: TestFunction) -> complex:
    if f.side != g.side:
        raise DomainError("inner product of functions on different sides")
    return complex((f.f * g.f.conj()).integral())


def analysis_integral(W: ClopenSet, j: int, t: int, ghat: StepFunction):
    """``integral of ghat(xi) chi(u(t) P**j xi) over P**-j W``.

    Exact :class:`Cyclotomic` for rational ``ghat``, complex otherwise.
    """
    params = W.params
    y = u_map(t, params).shift(j)
    region = ghat.restrict(W.dilate(-j))
    if ghat.domain == "rational":
        total = Cyclotomic(params.p)
        for b, v in region.pieces:
            root, mag = integral_char_over_ball(y, b)
            total = total + Cyclotomic.term(root, v * mag)
        return total
    total = 0j
    for b, v in region.pieces:
        root, mag = integral_char_over_ball(y, b)
        total += v * float(mag) * complex(root)
    return total


def analysis_coefficient(W: ClopenSet, j: int, t: int, ghat: TestFunction) -> complex:
    """``<g, psi_{j,t}>`` for ``psi_hat = 1_W``, computed on the frequency side."""
    if ghat.side != "frequency":
        raise DomainError("analysis coefficients need a frequency-side test function")
    return float(params_q(W)) ** (-j / 2) * complex(analysis_integral(W, j, t, ghat.f))


def params_q(W: ClopenSet) -> int:
    return W.params.q


def affine_element(W: ClopenSet, j: int, t: int) -> TestFunction:
    """Frequency-side ``psi_{j,t}``: ``q**(-j/2) chi(-u(t) P**j xi) 1_W(P**j xi)``."""
    params = W.params
    y = u_map(t, params).shift(j)
    fine = -y.valuation if y else None
    amp = float(params.q) ** (-j / 2)
    pieces = []
    for b in W.dilate(-j).balls:
        for sub in b.refine(fine if fine is not None else b.scale):
            pieces.append((sub, amp * complex(chi(-(y * sub.center)))))
    return TestFunction("frequency", StepFunction.from_disjoint(pieces, params, "complex"))


@dataclass
class FrameSum:
    value: float
    norm2: float
    windows: list[dict] = field(default_factory=list)

    @property
    def relative_error(self) -> float:
        if self.norm2 == 0:
            return abs(self.value)
        return abs(self.value - self.norm2) / self.norm2


def _t_window_sum(pieces, j: int, params: FieldParams) -> tuple[float, int]:
    """``sum_t |sum_k v_k mu_k chi(u(t) P**j c_k) [t < q**(s_k+j)]|**2`` over the nonvanishing t."""
    q, p = params.q, params.p
    kmax = max(max(b.scale for b, _ in pieces) + j, 0)
    T = q ** kmax
    if T * len(pieces) > MAX_TERMS:
        raise PreconditionError(f"t-window q^{kmax} too large for the frame-sum oracle")
    digits = _grid(q, kmax)
    tr = np.array(params.trace0_table, dtype=np.int64)
    omega = _omega(p)
    tvals = np.arange(T)
    coef = np.zeros(T, dtype=complex)
    for b, v in pieces:
        z = b.center.shift(j)
        e = np.zeros(T, dtype=np.int64)
        for i in range(kmax):
            d = z.digit(i)
            if d:
                e += tr[digits[:, i], d]
        limit = q ** max(b.scale + j, 0)
        coef += np.where(tvals < limit, complex(v) * float(b.measure()) * omega[e % p], 0)
    return float(np.sum(np.abs(coef) ** 2)), T


def frame_sum(sets: Sequence[ClopenSet], ghat: TestFunction) -> FrameSum:
    """``sum_m sum_j sum_t |<g, psi^m_{j,t}>|**2`` with ``psi^m_hat = 1_{W_m}``.

    Terms with ``P**-j W_m`` outside the carrier of ``ghat`` vanish, and for
    each j only ``t < q**(rho + j)`` contribute (``rho`` the finest scale of the
    integrand).  If ``ghat`` is constant, say ``g0``, on a ball ``P**s0 D``
    around 0, the dilates falling inside it add ``|g0|**2 C_m q**j`` for every
    such j, summed in closed form.
    """
    if ghat.side != "frequency":
        raise DomainError("frame sums need a frequency-side test function")
    params = ghat.params
    q = params.q
    total = 0.0
    windows = []
    pieces = ghat.f.pieces
    zero_piece = next(((b, v) for b, v in pieces if b.valuation is None), None)
    vals = [b.valuation for b, _ in pieces if b.valuation is not None]
    for m, W in enumerate(sets, 1):
        if not W.balls or not pieces:
            continue
        if W.has_zero_ball():
            raise PreconditionError(f"W{m} contains a ball around 0; frame sum window unbounded")
        wv = [b.valuation for b in W.balls]
        R, S = -min(wv), max(wv)
        vmin = min(vals + ([zero_piece[0].scale] if zero_piece else []))
        jhi = S - vmin
        tail = 0.0
        if zero_piece is not None:
            s0 = zero_piece[0].scale
            jtail = -R - s0
            jlo = jtail + 1
            cw, _ = _t_window_sum([(b, 1) for b in W.balls], 0, params)
            geometric = float(q) ** jtail * q / (q - 1)
            tail = abs(zero_piece[1]) ** 2 * cw * geometric
        else:
            jlo = -R - max(vals)
        subtotal = tail
        for j in range(jlo, jhi + 1):
            region = ghat.f.restrict(W.dilate(-j))
            if not region.pieces:
                continue
            s, T = _t_window_sum(region.pieces, j, params)
            subtotal += float(q) ** (-j) * s
            windows.append({"m": m, "j": j, "t_bound": T})
        total += subtotal
        windows.append({"m": m, "j_window": (jlo, jhi), "tail": tail})
    return FrameSum(total, ghat.norm2(), windows)


def _set_window(W: ClopenSet) -> tuple[int, int] | None:
    vals = [b.valuation for b in W.balls]
    if not vals:
        return None
    if any(v is None for v in vals):
        raise PreconditionError("set contains a ball around 0")
    return -min(vals), max(vals)


def calderon_sum_at(sets: Sequence[ClopenSet], xi: FieldElement) -> int:
    """``#{(m, j) : P**-j xi in W_m}``, the Calderon sum for indicator transforms."""
    if not xi:
        raise DomainError("Calderon sum is evaluated at xi != 0")
    w = xi.valuation
    count = 0
    for W in sets:
        win = _set_window(W)
        if win is None:
            continue
        R, S = win
        for j in range(w - S, w + R + 1):
            if W.contains_point(xi.shift(-j)):
                count += 1
    return count


def shift_sum_at(sets: Sequence[ClopenSet], xi: FieldElement, t: int) -> int:
    """``sum_m sum_{j>=0} 1_W_m(P**-j xi) 1_W_m(P**-j (xi + u(t)))`` for t not in qN."""
    params = xi.params
    if t % params.q == 0:
        raise DomainError("shift sums are taken over t not divisible by q")
    if not xi:
        raise DomainError("shift sum is evaluated at xi != 0")
    other = xi + u_map(t, params)
    w = xi.valuation
    count = 0
    for W in sets:
        win = _set_window(W)
        if win is None:
            continue
        R, _ = win
        for j in range(0, w + R + 1):
            if W.contains_point(xi.shift(-j)) and W.contains_point(other.shift(-j)):
                count += 1
    return count


def dimension_sum_at(sets: Sequence[ClopenSet], xi: FieldElement) -> int:
    """Direct evaluation of ``sum_m sum_{j>=1} sum_t 1_W_m(P**-j (xi + u(t)))`` at one point.

    Only ``t`` with ``|u(t)| <= max(|xi|, q**(R-1))`` can contribute, and for
    each such t only j in a finite valuation window.
    """
    params = xi.params
    wins = [(W, _set_window(W)) for W in sets]
    wins = [(W, w) for W, w in wins if w is not None]
    if not wins:
        return 0
    R = max(w[0] for _, w in wins)
    w_xi = xi.valuation if xi else 0
    kmax = max(R - 1, -w_xi, 0)
    count = 0
    for t in range(params.q ** kmax):
        y = xi + u_map(t, params)
        if not y:
            continue
        vy = y.valuation
        for W, (Rm, Sm) in wins:
            for j in range(max(1, vy - Sm), vy + Rm + 1):
                if W.contains_point(y.shift(-j)):
                    count += 1
    return count


def character_orthonormality(n: int, n2: int, depth: int, params: FieldParams) -> complex:
    """``integral over D of chi_{u(n)} * conj(chi_{u(n2)})`` by summing over ``D / P**depth D``."""
    y1, y2 = u_map(n, params), u_map(n2, params)
    need = max(-(y1.valuation or 0), -(y2.valuation or 0), 0)
    if depth < need:
        raise PreconditionError(f"depth {depth} too shallow; characters are constant only at depth {need}")
    q = params.q
    mu = Fraction(1, q ** depth)
    total = Cyclotomic(params.p)
    for row in _grid(q, depth):
        x = FieldElement(params, tuple((i, int(d)) for i, d in enumerate(row) if d))
        root = chi(y1 * x) * chi(y2 * x).conjugate()
        total = total + Cyclotomic.term(root, mu)
    return complex(total)


# ---------------------------------------------------------------------------
# seeded random inputs


def random_point(params: FieldParams, rng: random.Random, vmin: int = -3, vmax: int = 3,
                 depth: int = 4) -> FieldElement:
    """A nonzero finite expansion with valuation in ``[vmin, vmax]`` and ``depth`` digits."""
    v = rng.randint(vmin, vmax)
    digits = {v: rng.randrange(1, params.q)}
    for i in range(v + 1, v + depth):
        digits[i] = rng.randrange(params.q)
    return FieldElement.from_dict(params, digits)


def _random_value(rng: random.Random) -> complex:
    re = Fraction(rng.randint(-4, 4), rng.randint(1, 4))
    im = Fraction(rng.randint(-4, 4), rng.randint(1, 4))
    return complex(float(re), float(im))


def random_test_function(params: FieldParams, rng: random.Random, side: str = "frequency",
                         vmin: int = -3, vmax: int = 2, max_scale: int = 3,
                         max_pieces: int = 8) -> TestFunction:
    """1 to ``max_pieces`` balls with rational complex values, carrier in ``q**-vmax-1 .. q**-vmin``."""
    pieces = []
    for _ in range(rng.randint(1, max_pieces)):
        v = rng.randint(vmin, vmax)
        s = rng.randint(v + 1, max(v + 1, min(v + 2, max_scale)))
        c = {v: rng.randrange(1, params.q)}
        for i in range(v + 1, s):
            c[i] = rng.randrange(params.q)
        pieces.append((Ball(FieldElement.from_dict(params, c), s), _random_value(rng)))
    f = StepFunction.from_pieces(pieces, params, "complex")
    if not f.pieces:
        return random_test_function(params, rng, side, vmin, vmax, max_scale, max_pieces)
    return TestFunction(side, f)
