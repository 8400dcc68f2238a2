"""Seeded pseudo-orbit generators.

Four jump schedules cover every check in the package: constant jumps,
a single spike, geometrically decaying jumps (two-sided limit
pseudo-orbits), and a quiet window (zero jumps near the center).  All
generators walk forward from the window's left edge, perturbing each
image by the scheduled magnitude, so jump sizes are exact by
construction and runs are reproducible from (system, seed, schedule).
"""

from __future__ import annotations

import random

from .core import MetricSystem, ORBIT_CAPPED, PERIODIC, PseudoOrbit

SCHEDULES = ("constant", "one-spike", "geometric-decay", "quiet-window",
             "true-orbit", "periodic")


def schedule_magnitude(schedule: str, i: int, delta: float,
                       quiet_halfwidth: int = 32) -> float:
    """Target jump size at index i for the named schedule."""
    if schedule == "constant":
        return delta
    if schedule == "one-spike":
        return delta if i == 0 else 0.0
    if schedule == "geometric-decay":
        return delta * 2.0 ** (-abs(i))
    if schedule == "quiet-window":
        return 0.0 if abs(i) <= quiet_halfwidth else delta
    if schedule == "true-orbit":
        return 0.0
    raise ValueError(f"unknown schedule {schedule!r}")


def make_pseudo_orbit(sysm: MetricSystem, seed: int, schedule: str,
                      delta: float, lo: int, hi: int,
                      quiet_halfwidth: int = 32,
                      start=None) -> PseudoOrbit:
    """Walk f from the left edge, perturbing each image by the schedule.

    The jump at index i is d(f(x_{i-1}), x_i) <= magnitude(i) exactly.
    """
    if schedule == "periodic":
        return make_periodic_pseudo_orbit(sysm, seed, delta, hi - lo + 1)
    rng = random.Random(seed)
    if start is None:
        start = sysm.sample_points(rng, 1)[0]
    # place the start at index lo so the walk covers the window
    entries = [start]
    for i in range(lo + 1, hi + 1):
        mag = schedule_magnitude(schedule, i, delta, quiet_halfwidth)
        nxt = sysm.fwd(entries[-1])
        entries.append(sysm.perturb(nxt, mag, rng) if mag > 0.0 else nxt)
    return PseudoOrbit(sysm, lo, hi, entries, ORBIT_CAPPED)


def make_periodic_pseudo_orbit(sysm: MetricSystem, seed: int, delta: float,
                               period: int, anchor=None) -> PseudoOrbit:
    """A pseudo-cycle: perturb the window of a walk and close it up.

    The closing jump d(f(x_{hi}), x_{lo}) is whatever the walk produced;
    callers needing small wrap jumps should anchor near a fixed or
    periodic point of the map.
    """
    rng = random.Random(seed)
    if anchor is None:
        anchor = sysm.sample_points(rng, 1)[0]
    entries = [sysm.perturb(anchor, delta, rng)]
    for _ in range(period - 1):
        entries.append(sysm.perturb(sysm.fwd(entries[-1]), delta, rng))
    return PseudoOrbit(sysm, 0, period - 1, entries, PERIODIC)


def orbit_of_other_map(sys_f: MetricSystem, sys_g: MetricSystem, p,
                       lo: int, hi: int) -> PseudoOrbit:
    """The two-sided orbit of g, stored as a pseudo-orbit of f.

    Window jumps are bounded by the uniform distance between f and g;
    outside the window the orbit-capped extension continues with f, so
    those jumps vanish exactly.
    """
    if not lo <= 0 <= hi:
        raise ValueError("window must contain index 0")
    fwd_part = [p]
    q = p
    for _ in range(hi):
        q = sys_g.fwd(q)
        fwd_part.append(q)
    back_part = []
    q = p
    for _ in range(-lo):
        q = sys_g.inv(q)
        back_part.append(q)
    back_part.reverse()
    return PseudoOrbit(sys_f, lo, hi, back_part + fwd_part, ORBIT_CAPPED)
