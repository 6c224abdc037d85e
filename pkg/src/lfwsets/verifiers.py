"""Witness-bearing decision procedures for wavelet, framelet and scaling sets.

Every family is a sequence of :class:`ClopenSet` (a multiset: duplicates are
kept).  The infinite quantifiers over dilations ``j`` and translations ``t``
are cut to finite windows using :class:`FamilyBounds`; the justification for
each cut is written into ``Verdict.notes``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .errors import DomainError, PreconditionError
from .field import u_map
from .sets import (
    Ball,
    ClopenSet,
    ExtendedRational,
    StepFunction,
    _check_params,
    canonicalize,
    dilation_partition_check,
    integral_inverse_valuation,
    normalize_ball,
    reduce_mod_translations,
    unit_sphere,
)
from .verdict import Verdict

__all__ = [
    "FamilyBounds",
    "UNBOUNDED",
    "family_bounds",
    "check_orthonormal_system",
    "check_parseval_multiframelet_set",
    "check_multiwavelet_set",
    "check_scaling_set",
    "check_parseval_scaling_set",
    "dimension_function",
    "dimension_steps",
    "check_mra",
    "check_dim_integral_identity",
    "check_superwavelet_equivalence",
    "decomposability_lower_bound",
    "replay_witness",
]

UNBOUNDED = "unbounded"


@dataclass(frozen=True)
class FamilyBounds:
    """Every point of the family satisfies ``q**-S <= |xi| <= q**R``."""

    R: int
    S: int


def family_bounds(sets: Sequence[ClopenSet]) -> FamilyBounds:
    vals = []
    for S in sets:
        for b in S.balls:
            if b.valuation is None:
                raise PreconditionError("family contains a ball around 0; bounds undefined")
            vals.append(b.valuation)
    if not vals:
        raise DomainError("family has no balls")
    return FamilyBounds(R=-min(vals), S=max(vals))


def _set_bounds(S: ClopenSet) -> FamilyBounds | None:
    vals = [b.valuation for b in S.balls]
    if not vals:
        return None
    return FamilyBounds(R=-min(vals), S=max(vals))


def _require_family(sets) -> list[ClopenSet]:
    sets = list(sets)
    if not sets:
        raise DomainError("empty family")
    _check_params(S.params for S in sets)
    return sets


def _zero_ball_fail(v: Verdict, sets) -> bool:
    for m, S in enumerate(sets, 1):
        for b in S.balls:
            if b.valuation is None:
                v.add("zero-ball", False, f"W{m} contains a ball around 0")
                v.witnesses.append({"clause": "zero-ball", "m": m, "ball": b})
                return True
    return False


def _mismatch(f: StepFunction, g: StepFunction) -> tuple[Ball, object, object] | None:
    """A ball on which f and g differ, with both values there."""
    diff = f - g
    if not diff.pieces:
        return None
    b = diff.pieces[0][0]
    return b, f(b.center), g(b.center)


def _integers(params) -> ClopenSet:
    return ClopenSet.ideal(params, 0)


def check_orthonormal_system(sets: Sequence[ClopenSet]) -> Verdict:
    """Set form of the orthonormality relations of the affine system.

    (i) each ``W_m`` tiles K under the translations u(t);
    (ii) the ``W_m`` are pairwise disjoint;
    (iii) ``W_l`` misses ``P**j W_m`` for every j >= 1.
    """
    sets = _require_family(sets)
    v = Verdict("orthonormal_system")
    if _zero_ball_fail(v, sets):
        return v
    params = sets[0].params
    one = StepFunction.indicator(_integers(params))
    bad = None
    for m, W in enumerate(sets, 1):
        mult = reduce_mod_translations(W)
        mm = _mismatch(mult, one)
        if mm and bad is None:
            bad = (m, mm)
    if bad:
        m, (ball, got, _) = bad
        v.add("on-i", False, f"translates of W{m} cover with multiplicity {got}")
        v.witnesses.append({"clause": "on-i", "m": m, "ball": ball, "multiplicity": got})
    else:
        v.add("on-i", True)

    bad = None
    for l in range(len(sets)):
        for m in range(l + 1, len(sets)):
            inter = sets[l] & sets[m]
            if not inter.is_empty():
                bad = (l + 1, m + 1, inter.balls[0])
                break
        if bad:
            break
    if bad:
        v.add("on-ii", False, f"W{bad[0]} and W{bad[1]} overlap")
        v.witnesses.append({"clause": "on-ii", "l": bad[0], "m": bad[1], "ball": bad[2]})
    else:
        v.add("on-ii", True)

    bounds = family_bounds(sets)
    jmax = bounds.R + bounds.S
    v.quantities["R"], v.quantities["S"] = bounds.R, bounds.S
    v.notes.append(f"on-iii checked for 1 <= j <= R+S = {jmax}: beyond it P^j W has valuations below the family minimum")
    bad = None
    for j in range(1, jmax + 1):
        for m, Wm in enumerate(sets, 1):
            dil = Wm.dilate(j)
            for l, Wl in enumerate(sets, 1):
                inter = Wl & dil
                if not inter.is_empty():
                    bad = (l, m, j, inter.balls[0])
                    break
            if bad:
                break
        if bad:
            break
    if bad:
        l, m, j, ball = bad
        v.add("on-iii", False, f"W{l} meets P^{j} W{m}")
        v.witnesses.append({"clause": "on-iii", "l": l, "m": m, "j": j, "ball": ball})
    else:
        v.add("on-iii", True)
    return v


def check_parseval_multiframelet_set(sets: Sequence[ClopenSet]) -> Verdict:
    """(a) dilates tile K; (b) ``P**j W_m`` misses its own translate by u(t), t not in qN."""
    sets = _require_family(sets)
    v = Verdict("parseval_multiframelet_set")
    if _zero_ball_fail(v, sets):
        return v
    params = sets[0].params
    q = params.q
    tiling = dilation_partition_check(sets)
    v.add("ps-a", tiling.passed, "; ".join(c.detail for c in tiling.clauses if not c.passed))
    for w in tiling.witnesses:
        v.witnesses.append({**w, "clause": "ps-a", "kind": w["clause"]})
    v.quantities["normalized_measure"] = tiling.quantities["normalized_measure"]

    witness = None
    checked = 0
    for m, W in enumerate(sets, 1):
        bounds = _set_bounds(W)
        if bounds is None:
            continue
        Rm = bounds.R
        for j in range(0, max(Rm, 0)):
            Wj = W.dilate(j)
            for t in range(1, q ** (Rm - j)):
                if t % q == 0:
                    continue
                checked += 1
                inter = Wj & Wj.translate(u_map(t, params))
                if not inter.is_empty():
                    witness = {"clause": "ps-b", "m": m, "j": j, "t": t, "ball": inter.balls[0]}
                    break
            if witness:
                break
        if witness:
            break
    v.quantities["ps_b_pairs_checked"] = checked
    v.notes.append("ps-b checked for 0 <= j < R_m and t < q^(R_m - j): otherwise |u(t)| q^j exceeds "
                   "every |xi| in P^j W_m and the translate is disjoint by the ultrametric equality case")
    if witness:
        v.add("ps-b", False, f"P^{witness['j']} W{witness['m']} meets its translate by u({witness['t']})")
        v.witnesses.append(witness)
    else:
        v.add("ps-b", True)
    return v


def check_multiwavelet_set(sets: Sequence[ClopenSet]) -> Verdict:
    """Parseval multiframelet conditions plus ``measure(W_m) = 1`` for every m.

    The two other characterisations (orthonormality relations with the
    tiling, and with the ``1/|xi|`` integral) are computed too; their
    agreement is recorded as clause ``routes-agree``.
    """
    sets = _require_family(sets)
    params = sets[0].params
    q = params.q
    v = Verdict("multiwavelet_set")
    ps = check_parseval_multiframelet_set(sets)
    v.clauses.extend(ps.clauses)
    v.witnesses.extend(ps.witnesses)
    v.notes.extend(ps.notes)
    measures = [W.measure() for W in sets]
    v.quantities["measures"] = measures
    v.quantities["total_measure"] = sum(measures, Fraction(0))
    bad = [m for m, mu in enumerate(measures, 1) if mu != 1]
    if bad:
        v.add("measure", False, f"measure(W{bad[0]}) = {measures[bad[0] - 1]} != 1")
        v.witnesses.append({"clause": "measure", "m": bad[0], "measure": measures[bad[0] - 1]})
    else:
        v.add("measure", True)

    union = canonicalize([b for W in sets for b in W.balls], params)
    integral = integral_inverse_valuation(union, 1)
    target = Fraction(q - 1, q)
    v.quantities["integral_1_over_xi"] = integral
    on = check_orthonormal_system(sets)
    tiling = dilation_partition_check(sets) if not any(S.has_zero_ball() for S in sets) else None
    routes = {
        "ps+measure": ps.passed and not bad,
        "orthonormal+tiling": on.passed and tiling is not None and tiling.passed,
        "orthonormal+integral": on.passed and integral == target,
    }
    v.quantities["routes"] = routes
    v.quantities["orthonormal_clauses"] = {c.tag: c.passed for c in on.clauses}
    agree = len(set(routes.values())) == 1
    v.add("routes-agree", agree, "" if agree else f"characterisations disagree: {routes}")
    return v


def check_scaling_set(S: ClopenSet) -> Verdict:
    """(1) translates of S tile D; (2) S holds a ball around 0; (3) ``S <= P**-1 S``."""
    v = Verdict("scaling_set")
    params = S.params
    D = _integers(params)
    mult = reduce_mod_translations(S)
    v.quantities["multiplicity"] = mult
    mm = _mismatch(mult, StepFunction.indicator(D))
    if mm:
        v.add("sc-1", False, f"translates cover with multiplicity {mm[1]}")
        v.witnesses.append({"clause": "sc-1", "ball": mm[0], "multiplicity": mm[1]})
    else:
        v.add("sc-1", True)
    _zero_ball_clause(v, S, "sc-2")
    _nested_clause(v, S, "sc-3")
    return v


def _zero_ball_clause(v: Verdict, S: ClopenSet, tag: str) -> None:
    zero = next((b for b in S.balls if b.valuation is None), None)
    v.quantities["zero_ball"] = zero
    if zero is None:
        v.add(tag, False, "no ball around 0, so the dilates P^-j S never exhaust K")
        v.witnesses.append({"clause": tag})
    else:
        v.add(tag, True)


def _nested_clause(v: Verdict, S: ClopenSet, tag: str) -> None:
    outside = S - S.dilate(-1)
    v.quantities["nested"] = outside.is_empty()
    if outside.is_empty():
        v.add(tag, True)
    else:
        v.add(tag, False, "S is not contained in P^-1 S")
        v.witnesses.append({"clause": tag, "ball": outside.balls[0]})


def check_parseval_scaling_set(S: ClopenSet) -> Verdict:
    """(a) translates of S pack (multiplicity <= 1); (b) dilates exhaust K; (c) ``S <= P**-1 S``.

    The nesting clause is read with a single dilation step, j = 1.
    """
    v = Verdict("parseval_scaling_set")
    mult = reduce_mod_translations(S)
    v.quantities["multiplicity"] = mult
    over = next(((b, k) for b, k in mult.pieces if k > 1), None)
    if over:
        v.add("psc-a", False, f"translates overlap with multiplicity {over[1]}")
        v.witnesses.append({"clause": "psc-a", "ball": over[0], "multiplicity": over[1]})
    else:
        v.add("psc-a", True)
    _zero_ball_clause(v, S, "psc-b")
    _nested_clause(v, S, "psc-c")
    v.notes.append("nesting S <= P^-j S evaluated at j = 1")
    return v


def dimension_function(sets: Sequence[ClopenSet]) -> StepFunction:
    """``D(xi) = sum_m sum_{j>=1} sum_t 1_W_m(P**-j (xi + u(t)))`` on D, exactly.

    Needs the dilation tiling: then the ``t = 0`` terms over all ``j >= 1``
    add up to the indicator of ``D`` minus the finitely many dilates with
    ``j <= 0``, and the ``t != 0`` terms vanish once ``j >= R``.
    """
    sets = _require_family(sets)
    total = StepFunction.zero(sets[0].params)
    for step in dimension_steps(sets):
        total = total + step["contribution"]
    return total


def dimension_steps(sets: Sequence[ClopenSet]) -> list[dict]:
    """The terms summed by :func:`dimension_function`, in order.

    First the ``t = 0`` part ``1_V`` with ``V = D minus the dilates with j <= 0``,
    then one term per ``(j, m)`` with ``1 <= j < R``: ``P**j W_m - D`` folded
    into D by translations.
    """
    sets = _require_family(sets)
    if any(S.has_zero_ball() for S in sets):
        raise PreconditionError("dimension function needs a family without balls around 0")
    tiling = dilation_partition_check(sets)
    if not tiling.passed:
        raise PreconditionError("dimension function needs the dilates P^j W_m to tile K; "
                                f"failed: {', '.join(tiling.failed_tags())}")
    params = sets[0].params
    D = _integers(params)
    bounds = family_bounds(sets)
    low = [W.dilate(j) & D for j in range(-bounds.S, 1) for W in sets]
    V = D - canonicalize([b for X in low for b in X.balls], params)
    steps = [{"term": "t=0", "contribution": StepFunction.indicator(V)}]
    for j in range(1, bounds.R):
        for m, W in enumerate(sets, 1):
            steps.append({"term": "t!=0", "j": j, "m": m,
                          "contribution": reduce_mod_translations(W.dilate(j) - D)})
    return steps


def _order_check(sets, force_order: bool, v: Verdict) -> None:
    q = sets[0].params.q
    if len(sets) != q - 1:
        if not force_order:
            raise PreconditionError(f"the MRA criterion is stated for families of order q-1 = {q - 1}, got {len(sets)}")
        v.notes.append(f"extrapolated: order {len(sets)} differs from q-1 = {q - 1}")
        v.quantities["extrapolated"] = True


def check_mra(sets: Sequence[ClopenSet], force_order: bool = False) -> Verdict:
    """Does a multiwavelet set of order q-1 come from an MRA?  Iff its dimension function is 1."""
    sets = _require_family(sets)
    v = Verdict("mra")
    _order_check(sets, force_order, v)
    mw = check_multiwavelet_set(sets)
    if not mw.passed:
        raise PreconditionError(f"not a multiwavelet set (failed: {', '.join(mw.failed_tags())})")
    dim = dimension_function(sets)
    v.quantities["dimension_function"] = dim
    v.quantities["dimension_integral"] = dim.integral()
    one = StepFunction.indicator(_integers(sets[0].params))
    mm = _mismatch(dim, one)
    if mm:
        v.add("mra-cover", False, f"dimension function takes the value {mm[1]}")
        v.witnesses.append({"clause": "mra-cover", "ball": mm[0], "value": mm[1]})
    else:
        v.add("mra-cover", True)
    return v


def check_dim_integral_identity(sets: Sequence[ClopenSet]) -> Verdict:
    """``integral over D of the dimension function == sum_m measure(W_m) / (q-1)``."""
    sets = _require_family(sets)
    q = sets[0].params.q
    v = Verdict("dim_integral_identity")
    dim = dimension_function(sets)
    lhs = dim.integral()
    rhs = sum((W.measure() for W in sets), Fraction(0)) / (q - 1)
    v.quantities["lhs"], v.quantities["rhs"] = lhs, rhs
    v.add("dim-integral", lhs == rhs, f"{lhs} vs {rhs}")
    if lhs != rhs:
        v.witnesses.append({"clause": "dim-integral", "lhs": lhs, "rhs": rhs})
    return v


def _equiv_side(family: Sequence[ClopenSet], n: int) -> StepFunction:
    params = family[0].params
    total = StepFunction.zero(params)
    for W in family:
        total = total + reduce_mod_translations(W.dilate(n) & W)
    return total


def check_superwavelet_equivalence(A: Sequence[ClopenSet], B: Sequence[ClopenSet]) -> Verdict:
    """Compare ``sum_j sum_t 1_{(P**n W_j & W_j) + u(t)}`` of both families for every n >= 0."""
    A, B = _require_family(A), _require_family(B)
    _check_params([A[0].params, B[0].params])
    if any(S.has_zero_ball() for S in list(A) + list(B)):
        raise PreconditionError("equivalence test needs families without balls around 0")
    ba, bb = family_bounds(A), family_bounds(B)
    nstar = max(ba.R + ba.S, bb.R + bb.S)
    v = Verdict("superwavelet_equivalence")
    v.quantities["N_star"] = nstar
    v.notes.append(f"n > N* = {nstar}: P^n W misses W on both sides, so both sides vanish")
    integrals = []
    for n in range(nstar + 1):
        left, right = _equiv_side(A, n), _equiv_side(B, n)
        integrals.append((n, left.integral(), right.integral()))
        mm = _mismatch(left, right)
        if mm:
            v.add(f"eqv-{n}", False, f"sides differ at n={n}")
            v.witnesses.append({"clause": "eqv", "n": n, "ball": mm[0], "left": mm[1], "right": mm[2],
                                "left_integral": left.integral(), "right_integral": right.integral()})
            break
        v.add(f"eqv-{n}", True)
    v.quantities["side_integrals"] = integrals
    return v


def decomposability_lower_bound(W: ClopenSet):
    """``integral over D of (sum_t 1_{W+u(t)}) / |xi|**2`` and the largest m it allows.

    Only a necessary condition for m-decomposability.  Returns
    ``(value, m_max)`` with ``m_max == UNBOUNDED`` when the value is infinite.
    """
    q = W.params.q
    mult = reduce_mod_translations(W)
    value = ExtendedRational(0)
    for b, k in mult.pieces:
        value = value + integral_inverse_valuation(ClopenSet(W.params, (b,)), 2) * k
    if value.is_infinite:
        return value, UNBOUNDED
    return value, int(value.value // Fraction(q - 1, q))


# ---------------------------------------------------------------------------
# witness replay


def replay_witness(witness: dict, sets: Sequence[ClopenSet] = (), other: Sequence[ClopenSet] = ()) -> bool:
    """Re-evaluate the violated clause on the witness alone; True if it still fails."""
    clause = witness["clause"]
    kind = witness.get("kind", clause)
    sets = list(sets)
    if kind == "zero-ball":
        b = witness["ball"]
        return b.valuation is None and b in sets[witness["m"] - 1].balls
    if kind == "tiling-overlap":
        b1, b2 = witness["ball"], witness["ball2"]
        return (b1 in sets[witness["m"] - 1].balls and b2 in sets[witness["m2"] - 1].balls
                and normalize_ball(b1).intersects(normalize_ball(b2)))
    if kind in ("tiling-cover",):
        u = witness["ball"]
        params = u.params
        if not ClopenSet(params, (u,)).issubset(unit_sphere(params)):
            return False
        return not any(normalize_ball(b).intersects(u) for S in sets for b in S.balls)
    if clause == "ps-b":
        if witness["t"] % sets[0].params.q == 0:
            return False
        Wj = sets[witness["m"] - 1].dilate(witness["j"])
        inter = Wj & Wj.translate(u_map(witness["t"], Wj.params))
        return ClopenSet(Wj.params, (witness["ball"],)).issubset(inter) and not inter.is_empty()
    if clause == "measure":
        return sets[witness["m"] - 1].measure() != 1
    if clause == "on-i":
        b = witness["ball"]
        return reduce_mod_translations(sets[witness["m"] - 1])(b.center) != 1
    if clause == "on-ii":
        inter = sets[witness["l"] - 1] & sets[witness["m"] - 1]
        return witness["ball"] in inter.balls or not inter.is_empty()
    if clause == "on-iii":
        inter = sets[witness["l"] - 1] & sets[witness["m"] - 1].dilate(witness["j"])
        return not inter.is_empty() and witness["j"] >= 1
    if clause == "sc-1":
        return reduce_mod_translations(sets[0])(witness["ball"].center) != 1
    if clause == "psc-a":
        return reduce_mod_translations(sets[0])(witness["ball"].center) > 1
    if clause in ("sc-2", "psc-b"):
        return not sets[0].has_zero_ball()
    if clause in ("sc-3", "psc-c"):
        S = sets[0]
        b = ClopenSet(S.params, (witness["ball"],))
        return b.issubset(S) and b.isdisjoint(S.dilate(-1))
    if clause == "mra-cover":
        return dimension_function(sets)(witness["ball"].center) != 1
    if clause == "dim-integral":
        v = check_dim_integral_identity(sets)
        return not v.passed
    if clause == "eqv":
        n, x = witness["n"], witness["ball"].center
        return _equiv_side(sets, n)(x) != _equiv_side(list(other), n)(x)
    raise DomainError(f"no replay rule for clause {clause!r}")
