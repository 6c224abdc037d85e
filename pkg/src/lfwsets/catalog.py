"""Named constructions and their mutations, used as positive and negative fixtures."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from .errors import DomainError, PreconditionError
from .field import FieldParams, default_params, u_map
from .sets import Ball, ClopenSet
from . import verifiers

__all__ = [
    "CatalogEntry",
    "shannon_multiwavelet",
    "unit_scaling_set",
    "prime_ideal",
    "mutate",
    "build",
    "recompute_expected",
    "NAMES",
    "FAMILY_VERIFIERS",
]


# verifiers that take a whole family
FAMILY_VERIFIERS: dict[str, Callable] = {
    "framelet-set": verifiers.check_parseval_multiframelet_set,
    "wavelet-set": verifiers.check_multiwavelet_set,
    "mra": verifiers.check_mra,
}
# verifiers that take a single set
SET_VERIFIERS: dict[str, Callable] = {
    "scaling-set": verifiers.check_scaling_set,
    "parseval-scaling-set": verifiers.check_parseval_scaling_set,
}


@dataclass
class CatalogEntry:
    name: str
    family: list[ClopenSet]
    expected: dict[str, str] = field(default_factory=dict)
    breaks: str | None = None  # clause a mutation is meant to violate
    kind: str = "family"  # "family" or "set"

    @property
    def params(self) -> FieldParams:
        return self.family[0].params

    def set_names(self) -> list[str]:
        if self.kind == "set":
            return ["S"]
        return [f"W{m}" for m in range(1, len(self.family) + 1)]


def shannon_multiwavelet(params: FieldParams) -> list[ClopenSet]:
    """``{u(m) + D : m = 1..q-1}``."""
    return [ClopenSet.ball(u_map(m, params), 0) for m in range(1, params.q)]


def unit_scaling_set(params: FieldParams) -> ClopenSet:
    return ClopenSet.ideal(params, 0)


def prime_ideal(params: FieldParams) -> ClopenSet:
    return ClopenSet.ideal(params, 1)


def _verdict_status(name: str, fn: Callable, family: list[ClopenSet], kind: str) -> str:
    try:
        if kind == "set":
            return fn(family[0]).status
        return fn(family).status
    except (PreconditionError, DomainError):
        return "REFUSED"


def recompute_expected(entry: CatalogEntry) -> dict[str, str]:
    """Run every applicable verifier; the result is what ``expected`` must equal."""
    table = SET_VERIFIERS if entry.kind == "set" else FAMILY_VERIFIERS
    return {name: _verdict_status(name, fn, entry.family, entry.kind) for name, fn in table.items()}


def _locate(family: list[ClopenSet], i: int) -> tuple[int, Ball]:
    k = 0
    for m, S in enumerate(family):
        for b in S.balls:
            if k == i:
                return m, b
            k += 1
    raise DomainError(f"ball index {i} out of range (family has {k} balls)")


def mutate(entry: CatalogEntry, op: str, i: int, arg: int | None = None) -> CatalogEntry:
    """Apply ``drop_ball(i)``, ``shift_ball(i, t)`` or ``dilate_ball(i, j)``.

    ``i`` counts balls across the whole family in order.  Sets emptied by
    ``drop_ball`` leave the family.  Expected verdicts are recomputed.
    """
    m, ball = _locate(entry.family, i)
    params = entry.params
    if op == "drop_ball":
        new, breaks, label = None, "tiling-cover", f"drop_ball({i})"
    elif op == "shift_ball":
        if arg is None:
            raise DomainError("shift_ball needs t")
        new, breaks, label = ball.translate(u_map(arg, params)), "ps-b", f"shift_ball({i},{arg})"
    elif op == "dilate_ball":
        if arg is None:
            raise DomainError("dilate_ball needs j")
        new, breaks, label = ball.dilate(arg), "ps-b", f"dilate_ball({i},{arg})"
    else:
        raise DomainError(f"unknown mutation {op!r}")
    rest = [b for b in entry.family[m].balls if b != ball]
    if new is not None:
        rest.append(new)
    family = list(entry.family)
    if rest:
        family[m] = ClopenSet.from_balls(rest, params)
    else:
        del family[m]
    if not family:
        raise DomainError(f"{op}({i}) leaves an empty family")
    out = CatalogEntry(f"{entry.name}/{label}", family, breaks=breaks, kind=entry.kind)
    out.expected = recompute_expected(out)
    return out


def _shannon_entry(params: FieldParams) -> CatalogEntry:
    return CatalogEntry(
        "shannon",
        shannon_multiwavelet(params),
        {"framelet-set": "PASS", "wavelet-set": "PASS", "mra": "PASS"},
    )


def _build_shannon(params):
    return _shannon_entry(params)


def _build_unit_scaling(params):
    return CatalogEntry("unit-scaling", [unit_scaling_set(params)],
                        {"scaling-set": "PASS", "parseval-scaling-set": "PASS"}, kind="set")


def _build_prime_ideal(params):
    return CatalogEntry("prime-ideal", [prime_ideal(params)],
                        {"scaling-set": "FAIL", "parseval-scaling-set": "PASS"}, kind="set")


def _build_dilated_shannon(params):
    e = mutate(_shannon_entry(params), "dilate_ball", 0, -1)
    e.name = "dilated-shannon"
    return e


def _build_shannon_drop_one(params):
    if params.q == 2:
        raise DomainError("shannon-drop-one needs q >= 3 (the q=2 family has a single ball)")
    e = mutate(_shannon_entry(params), "drop_ball", 0)
    e.name = "shannon-drop-one"
    return e


_BUILDERS = {
    "shannon": _build_shannon,
    "unit-scaling": _build_unit_scaling,
    "prime-ideal": _build_prime_ideal,
    "dilated-shannon": _build_dilated_shannon,
    "shannon-drop-one": _build_shannon_drop_one,
}
NAMES = tuple(_BUILDERS)


def build(name: str, p: int = 2, c: int = 1, params: FieldParams | None = None) -> CatalogEntry:
    if name not in _BUILDERS:
        raise DomainError(f"unknown catalog entry {name!r}; choose from {', '.join(NAMES)}")
    return _BUILDERS[name](params or default_params(p, c))
