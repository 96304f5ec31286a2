import functools
import os

import pytest
from hypothesis import settings

from umbra.family import builtin, random_family

settings.register_profile("default", max_examples=40, deadline=None)
settings.register_profile("thorough", max_examples=400, deadline=None)
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@functools.lru_cache(maxsize=None)
def cached_builtin(name, N=10, N_y=12):
    return builtin(name, N, N_y)


@functools.lru_cache(maxsize=None)
def cached_random(seed, N=10, N_y=12, vanishing=True):
    return random_family(seed, N, N_y, vanishing)


@pytest.fixture(params=["monomial", "falling", "qexp"])
def builtin_family(request):
    return cached_builtin(request.param)
