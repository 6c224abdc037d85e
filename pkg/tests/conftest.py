import random
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from lfwsets.catalog import shannon_multiwavelet
from lfwsets.field import FieldElement, default_params
from lfwsets.sets import Ball, ClopenSet

ROOT = Path(__file__).resolve().parent.parent
PARAM_KEYS = [(2, 1), (3, 1), (2, 2), (5, 1)]
PARAMS = [default_params(p, c) for p, c in PARAM_KEYS]

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(params=PARAMS, ids=[f"p{p}c{c}" for p, c in PARAM_KEYS])
def params(request):
    return request.param


params_st = st.sampled_from(PARAMS)


def elements(params, lo=-4, hi=4, max_terms=5):
    return st.dictionaries(st.integers(lo, hi), st.integers(1, params.q - 1), max_size=max_terms).map(
        lambda d: FieldElement.from_dict(params, d)
    )


def nonzero_elements(params, lo=-4, hi=4, max_terms=5):
    return elements(params, lo, hi, max_terms).filter(bool)


def balls(params, lo=-3, hi=3):
    return st.builds(Ball, elements(params, lo - 1, hi), st.integers(lo, hi))


def clopen_sets(params, max_balls=4, lo=-3, hi=3):
    return st.lists(balls(params, lo, hi), max_size=max_balls).map(
        lambda bs: ClopenSet.from_balls(bs, params)
    )


def random_tiling_family(params, rng: random.Random, moves: int = 3):
    """Shannon family reshaped by splitting a ball and dilating one child.

    Dilating a piece of a set keeps the dilates P^j W tiling K, so every
    output still satisfies the dilation partition condition.
    """
    family = shannon_multiwavelet(params)
    for _ in range(moves):
        m = rng.randrange(len(family))
        balls_m = list(family[m].balls)
        b = balls_m.pop(rng.randrange(len(balls_m)))
        kids = b.children()
        k = rng.randrange(len(kids))
        kids[k] = kids[k].dilate(rng.randint(-2, 2))
        family[m] = ClopenSet.from_balls(balls_m + kids, params)
    return family
