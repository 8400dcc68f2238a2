import math
import random

import pytest

from shadowkit.brackets import (Bracket, BracketDomainError,
                                check_f_invariance, check_hyperbolic,
                                check_identity_axiom,
                                check_shadowing_bracket, check_ss12,
                                check_uniform_contraction, diagonal_pairs,
                                fit_hyperbolic, induced_bracket)
from shadowkit.core import MetricSystem, connect
from shadowkit.systems.northsouth import make_ns_bracket, ns_bracket_eval
from shadowkit.systems.shift import make_shift_bracket
from shadowkit.verify import build_method


class RotationSystem(MetricSystem):
    """Irrational circle rotation: an isometry with no contraction."""

    system_id = "rotation"

    def __init__(self):
        super().__init__(lip_fwd=1.0, lip_inv=1.0, diam=0.5)
        self.alpha = math.sqrt(2.0) - 1.0

    def fwd(self, t):
        return (t + self.alpha) % 1.0

    def inv(self, t):
        return (t - self.alpha) % 1.0

    def dist(self, p, q):
        d = abs(p - q) % 1.0
        return min(d, 1.0 - d)

    def sample_points(self, rng, count):
        return [rng.random() for _ in range(count)]

    def perturb(self, p, magnitude, rng):
        return (p + magnitude * (2 * rng.random() - 1)) % 1.0

    def point_to_jsonable(self, p):
        return [p]


def projection_bracket(radius=0.25):
    return Bracket(name="projection", domain_radius=radius,
                   eval=lambda p, q: p)


class TestIdentityAxiom:
    def test_projection_passes_exactly(self):
        sysm = RotationSystem()
        rep = check_identity_axiom(projection_bracket(), sysm)
        assert rep.passed and rep.worst_slack == pytest.approx(1e-9)

    def test_cat_bracket_passes(self, cat, cat_bracket):
        rep = check_identity_axiom(cat_bracket, cat)
        assert rep.passed
        assert "continuity_modulus" in rep.details

    def test_broken_bracket_fails_with_witness(self, cat):
        bad = Bracket(name="broken", domain_radius=0.2,
                      eval=lambda p, q: ((q[0] + 0.1) % 1.0, q[1]))
        rep = check_identity_axiom(bad, cat)
        assert not rep.passed
        assert rep.witness is not None


class TestAssociativity:
    def test_shift_bracket_exact(self, shift3):
        rep = check_ss12(make_shift_bracket(shift3), shift3)
        assert rep.passed and rep.worst_slack == pytest.approx(1e-9)

    def test_cat_bracket_float_exact(self, cat, cat_bracket):
        rep = check_ss12(cat_bracket, cat)
        assert rep.passed

    def test_ns_bracket_fails_on_transition_triples(self, ns):
        rep = check_ss12(make_ns_bracket(ns), ns, samples=400)
        assert not rep.passed
        assert rep.witness is not None


class TestMapInvariance:
    def test_cat_exact(self, cat, cat_bracket):
        rep = check_f_invariance(cat_bracket, cat)
        assert rep.passed

    def test_ns_fails(self, ns):
        rep = check_f_invariance(make_ns_bracket(ns), ns, samples=500)
        assert not rep.passed

    def test_shift_splice_fails_at_boundary(self, shift3):
        # the splice keeps its seam at coordinate zero, so shifting
        # flips which argument owns the boundary coordinate
        rep = check_f_invariance(make_shift_bracket(shift3), shift3)
        assert not rep.passed


class TestHyperbolic:
    def test_cat_declared_rates_hold(self, cat, cat_bracket):
        rep = check_hyperbolic(cat_bracket, cat)
        assert rep.passed
        assert rep.details["mode"] == "declared"

    def test_fit_recovers_cat_rates(self, cat, cat_bracket):
        from shadowkit.systems.cat import LAMBDA_S
        plain = Bracket(name="cat-undeclared",
                        domain_radius=cat_bracket.domain_radius,
                        eval=cat_bracket.eval)
        c, mu = fit_hyperbolic(plain, cat, n_max=20)
        # the fitted pair certifies at least as sharply at the horizon
        # as the exact rates (1, lam_s), with a sane constant
        assert c < 10.0 and 0.3 < mu < 0.45
        assert c * mu ** 20 <= LAMBDA_S ** 20 * 1.05

    def test_rotation_projection_has_no_contraction(self):
        sysm = RotationSystem()
        b = projection_bracket()
        rep = check_uniform_contraction(b, sysm, eps=0.01)
        assert not rep.passed
        assert rep.details["m"] is None

    def test_ns_eq19_rates_hold(self, ns):
        rep = check_hyperbolic(make_ns_bracket(ns), ns)
        assert rep.passed
        assert rep.details["c"] == pytest.approx(ns.c_transition)


class TestUniformContraction:
    def test_hyperbolic_bracket_matches_prediction(self, cat, cat_bracket):
        eps = 0.02
        rep = check_uniform_contraction(cat_bracket, cat, eps=eps)
        assert rep.passed
        m = rep.details["m"]
        pred = rep.details["predicted_m"]
        assert m is not None and m <= pred + 1

    def test_vacuous_when_eps_dominates(self, cat, cat_bracket):
        rep = check_uniform_contraction(cat_bracket, cat, eps=10.0)
        assert rep.passed and rep.details["m"] == 0


class TestShadowingBracket:
    def test_equal_points_trivially_inside(self, cat, cat_bracket):
        rep = check_shadowing_bracket(cat_bracket, cat,
                                      eps=cat_bracket.domain_radius,
                                      window=8)
        assert rep.passed

    def test_cat_l_mode_decays(self, cat, cat_bracket):
        eps = cat_bracket.declared_c * cat_bracket.domain_radius
        rep = check_shadowing_bracket(cat_bracket, cat, eps=eps, window=16,
                                      l_mode=True)
        assert rep.passed and rep.details["decay_ok"]

    def test_ns_near_s_is_projection_with_geometric_decay(self, ns):
        # near the attracting point the bracket returns its first
        # argument and the stable distance contracts at the ball rate
        p = 0.02
        q = 0.05
        r = ns_bracket_eval(ns, p, q)
        assert r == pytest.approx(p)
        a, b = r, q
        d0 = ns.dist(p, q)
        for n in range(1, 12):
            a, b = ns.fwd(a), ns.fwd(b)
            assert ns.dist(a, b) <= ns.mu ** n * d0 * (1 + 1e-9)

    def test_rotation_projection_fails(self):
        sysm = RotationSystem()
        rep = check_shadowing_bracket(projection_bracket(), sysm,
                                      eps=0.05, window=8, l_mode=True)
        assert not rep.passed


class TestInducedBracket:
    def test_identity_on_diagonal(self, cat):
        method = build_method(cat, "oracle")
        p = (0.3, 0.8)
        assert cat.dist(induced_bracket(method, cat, p, p), p) < 1e-12

    def test_oracle_induces_linear_bracket(self, cat, cat_bracket):
        # the splice of p's past with q's future is shadowed by the
        # stable/unstable crossing point
        method = build_method(cat, "oracle")
        rng = random.Random(11)
        for _ in range(20):
            p = (rng.random(), rng.random())
            q = cat.perturb(p, 0.03, rng)
            got = induced_bracket(method, cat, p, q, window=40)
            want = cat_bracket.eval(p, q)
            assert cat.dist(got, want) < 1e-10

    def test_canonical_induces_splice(self, shift3):
        method = build_method(shift3, "shift-canonical")
        rng = random.Random(12)
        xs = shift3.sample_points(rng, 4)
        ys = shift3.sample_points(rng, 4)
        b = make_shift_bracket(shift3)
        for x, y in zip(xs, ys):
            got = induced_bracket(method, shift3, x, y, window=30)
            want = b.eval(x, y)
            for i in range(-26, 27):
                assert shift3.base.dist(got.at(i), want.at(i)) == 0.0

    def test_out_of_domain_rejected(self, cat):
        method = build_method(cat, "oracle")
        with pytest.raises(BracketDomainError):
            induced_bracket(method, cat, (0.0, 0.0), (0.35, 0.35))


class TestAxiomImplications:
    def test_hyperbolic_implies_shadowing_bracket(self, cat, cat_bracket,
                                                  ns, shift3):
        # on every bundled bracket: passing the contraction check forces
        # finite-window stable/unstable membership at eps = c * radius
        bundles = [(cat, cat_bracket), (ns, make_ns_bracket(ns)),
                   (shift3, make_shift_bracket(shift3))]
        for sysm, b in bundles:
            hyp = check_hyperbolic(b, sysm)
            assert hyp.passed
            eps = b.declared_c * b.domain_radius
            mem = check_shadowing_bracket(b, sysm, eps=eps, window=12)
            assert mem.passed, b.name

    def test_induced_brackets_fix_the_diagonal(self, cat, shift3):
        # the evaluation-level restatement: a method's induced bracket
        # passes the identity axiom
        from shadowkit.brackets import method_bracket
        for sysm, mid in ((cat, "oracle"), (cat, "bowen"),
                          (shift3, "shift-canonical")):
            method = build_method(sysm, mid)
            b = method_bracket(method, sysm, window=24)
            rep = check_identity_axiom(b, sysm, samples=25)
            assert rep.passed, mid


class TestSampling:
    def test_diagonal_pairs_deterministic(self, cat):
        a = diagonal_pairs(cat, cat.sample_points, 0.1, seed=5, count=20)
        b = diagonal_pairs(cat, cat.sample_points, 0.1, seed=5, count=20)
        assert a == b

    def test_pairs_within_radius(self, cat):
        for p, q in diagonal_pairs(cat, cat.sample_points, 0.07, 3, 50):
            assert cat.dist(p, q) <= 0.07 * (1 + 1e-12)
