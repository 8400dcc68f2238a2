import itertools
import random

from shadowkit.core import discrepancy1, orbit_map
from shadowkit.generators import make_pseudo_orbit
from shadowkit.systems.odometer import (OdometerSystem,
                                        odometer_projection_shadow)
from shadowkit.verify import (build_method, check_dyn_invariance,
                              check_shift_invariance,
                              check_weak_shift_invariance, limit_shadow_decay,
                              shadow_error)


class TestArithmetic:
    def test_add_one_with_carry(self):
        odo = OdometerSystem(4)
        assert odo.fwd((0, 0, 0, 0)) == (1, 0, 0, 0)
        assert odo.fwd((1, 0, 0, 0)) == (0, 1, 0, 0)
        assert odo.fwd((1, 1, 1, 1)) == (0, 0, 0, 0)

    def test_subtract_roundtrip_exhaustive(self):
        odo = OdometerSystem(6)
        for bits in itertools.product((0, 1), repeat=6):
            assert odo.inv(odo.fwd(bits)) == bits
            assert odo.fwd(odo.inv(bits)) == bits

    def test_full_cycle_length(self):
        odo = OdometerSystem(5)
        p = (0, 0, 0, 0, 0)
        q = p
        for _ in range(2 ** 5):
            q = odo.fwd(q)
        assert q == p

    def test_ultrametric(self, odometer):
        rng = random.Random(0)
        pts = odometer.sample_points(rng, 30)
        for a in pts[:10]:
            for b in pts[10:20]:
                for c in pts[20:]:
                    assert odometer.dist(a, c) <= max(odometer.dist(a, b),
                                                      odometer.dist(b, c))

    def test_isometry_exhaustive_pairs(self):
        odo = OdometerSystem(5)
        pts = list(itertools.product((0, 1), repeat=5))
        for a in pts[::3]:
            for b in pts[::5]:
                assert odo.dist(odo.fwd(a), odo.fwd(b)) == odo.dist(a, b)
                assert odo.dist(odo.inv(a), odo.inv(b)) == odo.dist(a, b)


class TestExactHitShadowing:
    def test_projection_error_bounded_by_jump(self, odometer):
        for j in (3, 5, 7):
            delta = 2.0 ** -j
            for seed in range(10):
                x = make_pseudo_orbit(odometer, 100 * j + seed, "constant",
                                      delta, -16, 16)
                assert discrepancy1(x) <= delta
                p = odometer_projection_shadow(x)
                assert shadow_error(odometer, p, x) <= delta

    def test_true_orbit_exact(self, odometer):
        x = orbit_map(odometer, (1, 0, 1, 0, 1, 0, 1, 0), -10, 10)
        p = odometer_projection_shadow(x)
        assert shadow_error(odometer, p, x) == 0.0

    def test_perturbation_respects_magnitude(self, odometer):
        rng = random.Random(1)
        for _ in range(100):
            p = odometer.sample_points(rng, 1)[0]
            q = odometer.perturb(p, 2.0 ** -4, rng)
            assert odometer.dist(p, q) <= 2.0 ** -4


class TestInvarianceProfile:
    def test_dynamically_invariant_exactly(self, odometer):
        method = build_method(odometer, "projection")
        x = make_pseudo_orbit(odometer, 2, "constant", 2.0 ** -4, -8, 8)
        rep = check_dyn_invariance(method, odometer, x, tol=0.0)
        assert rep.passed

    def test_weak_shift_invariance_passes(self, odometer):
        method = build_method(odometer, "projection")
        make = lambda g: make_pseudo_orbit(odometer, 3, "constant",
                                           g, -12, 12)
        ladder = tuple(2.0 ** -k for k in (1, 3, 5, 7))
        rep = check_weak_shift_invariance(method, odometer, make,
                                          ladder=ladder,
                                          improvement=2.0 ** -5)
        assert rep.passed

    def test_strict_shift_invariance_fails(self, odometer):
        # the projection of the shifted orbit is the entry itself, while
        # the image of the projection carries the accumulated jumps
        method = build_method(odometer, "projection")
        delta = 2.0 ** -3
        x = make_pseudo_orbit(odometer, 4, "constant", delta, -12, 12)
        rep = check_shift_invariance(method, odometer, x, tol=delta / 16.0)
        assert not rep.passed

    def test_no_limit_shadowing(self, odometer):
        # two-sided-limit pseudo-orbits are not limit-shadowed: the
        # projection's error never decays (the isometry preserves every
        # past jump), so the decaying envelope is violated
        method = build_method(odometer, "projection")
        x = make_pseudo_orbit(odometer, 5, "geometric-decay", 2.0 ** -3,
                              -20, 20)
        rep = limit_shadow_decay(method, odometer, x)
        assert not rep.passed
