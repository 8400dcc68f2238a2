import random

import pytest

from shadowkit.core import PseudoOrbit
from shadowkit.systems import get_system
from shadowkit.systems.cat import make_cat_bracket
from shadowkit.systems.northsouth import make_ns_bowen_bracket


@pytest.fixture(scope="session")
def cat():
    return get_system("cat")


@pytest.fixture(scope="session")
def cat_bracket(cat):
    return make_cat_bracket(cat)


@pytest.fixture(scope="session")
def ns():
    return get_system("ns-circle")


@pytest.fixture(scope="session")
def ns_bowen_bracket(ns):
    return make_ns_bowen_bracket(ns)


@pytest.fixture(scope="session")
def shift3():
    return get_system("shift-3")


@pytest.fixture(scope="session")
def shift_circle():
    return get_system("shift-circle")


@pytest.fixture(scope="session")
def odometer():
    return get_system("odometer-8")


def walk_orbit(sysm, seed, delta, lo, hi, start=None, back_scale=None):
    """Two-sided random pseudo-orbit built by walking both directions
    from index 0, so the start point sits mid-window."""
    rng = random.Random(seed)
    if start is None:
        start = sysm.sample_points(rng, 1)[0]
    fwd = [start]
    for _ in range(hi):
        fwd.append(sysm.perturb(sysm.fwd(fwd[-1]), delta, rng))
    if back_scale is None:
        back_scale = 1.0 / max(sysm.lip_fwd, 1.0)
    back = [start]
    for _ in range(-lo):
        back.append(sysm.perturb(sysm.inv(back[-1]), delta * back_scale, rng))
    entries = list(reversed(back[1:])) + fwd
    return PseudoOrbit(sysm, lo, hi, entries)
