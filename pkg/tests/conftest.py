from __future__ import annotations

import os

import pytest
from hypothesis import HealthCheck, settings

from treeharm.tree import make_tree_params

settings.register_profile(
    "default", max_examples=60, deadline=None, suppress_health_check=[HealthCheck.too_slow]
)
settings.register_profile("thorough", max_examples=400, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

PRESET_TRIPLES = [(3, 3, 1), (2, 3, 2), (4, 5, 2)]


@pytest.fixture(params=PRESET_TRIPLES, ids=lambda t: "-".join(map(str, t)))
def preset(request):
    return make_tree_params(*request.param)


@pytest.fixture
def homog3():
    return make_tree_params(3, 3, 1)


@pytest.fixture
def semi23():
    return make_tree_params(2, 3, 2)
