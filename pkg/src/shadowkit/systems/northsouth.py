"""North-south dynamics on the circle with its bump-function bracket.

The map is theta -> theta - a * sin(2 pi theta) mod 1 with amplitude
a < 1/(2 pi): an orientation-preserving diffeomorphism with an
attracting fixed point S = 0 and a repelling fixed point N = 1/2, every
other orbit flowing from N to S.

Around each fixed point sits a radius-r ball on which iterates contract
at a geometric rate (forward near S, backward near N).  The bracket
interpolates along the short arc,

    [p, q] = p + phi(p) * arc(p -> q),

where the bump phi is 1 on the N-ball, 0 on the S-ball and
piecewise-linear in the distance to N between them.  Near N the bracket
returns q, near S it returns p.  The transition integer u is the
smallest power such that the u-th image of the N-ball and the u-th
preimage of the S-ball cover the circle and every transition point has
settled into the half-radius balls after u steps both ways; it gives the
crude contraction constant c = (L/mu)^u.

That crude constant is far too large to drive the iterative shadowing
construction at usable jump sizes, so the system also carries a tighter
fitted pair (bowen_c, bowen_mu), certified by sampling and re-checked by
the stage assertions on every run.  For the default parameters the
calibrated values are baked in; a test re-derives them.
"""

from __future__ import annotations

import math

from ..core import MetricSystem, lipschitz_geom_sum

TWO_PI = 2.0 * math.pi

# calibration for the default (amplitude, r, bracket_radius); re-derived
# by tests/test_northsouth.py
_DEFAULT_KEY = (1.0 / (4.0 * math.pi), 0.14, 0.1)
_DEFAULT_CALIBRATION = {
    "u": 7,
    "bowen_c": 1.1252791526689256,
    "bowen_mu": 0.7914134509735027,
}


class NorthSouthSystem(MetricSystem):
    """Concrete north-south circle map with computed rates.

    The bracket radius must stay below the ball radius: otherwise the
    domain admits pairs that straddle a ball with one endpoint outside,
    whose interpolation arc passes near a fixed point and ruins any
    geometric contraction rate.
    """

    system_id = "ns-circle"

    def __init__(self, amplitude: float = 1.0 / (4.0 * math.pi),
                 r: float = 0.14, bracket_radius: float = 0.1,
                 tol: float = 1e-10):
        if not 0.0 < amplitude < 1.0 / TWO_PI:
            raise ValueError("amplitude must lie in (0, 1/(2*pi))")
        if not 0.0 < r < 0.25:
            raise ValueError("ball radius must lie in (0, 1/4)")
        if bracket_radius > r:
            raise ValueError("bracket radius must not exceed the ball radius")
        self.a = float(amplitude)
        self.r = float(r)
        self.S = 0.0
        self.N = 0.5
        self.bracket_radius = float(bracket_radius)
        z = TWO_PI * self.a
        lip_fwd = 1.0 + z                   # max f' (attained at N)
        lip_inv = 1.0 / (1.0 - z)           # 1 / min f' (attained at S)
        # ball rates: max f' on B_r(S), max 1/f' on B_r(N)
        mu_s = 1.0 - z * math.cos(TWO_PI * self.r)
        mu_n = 1.0 / (1.0 + z * math.cos(TWO_PI * self.r))
        self.mu = max(mu_s, mu_n)
        super().__init__(lip_fwd=lip_fwd, lip_inv=lip_inv, diam=0.5, tol=tol)
        self._u = None
        self._bowen_rates = None
        if (self.a, self.r, self.bracket_radius) == _DEFAULT_KEY:
            self._u = _DEFAULT_CALIBRATION["u"]
            self._bowen_rates = (_DEFAULT_CALIBRATION["bowen_c"],
                                 _DEFAULT_CALIBRATION["bowen_mu"])

    # -- map and metric ----------------------------------------------------

    def fwd(self, t):
        return (t - self.a * math.sin(TWO_PI * t)) % 1.0

    def deriv(self, t):
        return 1.0 - TWO_PI * self.a * math.cos(TWO_PI * t)

    def inv(self, y):
        # solve t - a sin(2 pi t) = y on the lift; Newton from t = y,
        # globally convergent since the derivative is in [1-z, 1+z]
        t = y
        for _ in range(60):
            step = (t - self.a * math.sin(TWO_PI * t) - y) / self.deriv(t)
            t -= step
            if abs(step) < 1e-15:
                break
        return t % 1.0

    def dist(self, p, q):
        d = abs(p - q) % 1.0
        return min(d, 1.0 - d)

    def arc(self, p, q):
        """Signed shortest arc from p to q in (-0.5, 0.5]."""
        return ((q - p + 0.5) % 1.0) - 0.5

    def local_stretch(self, p_from, p_to, inverse):
        # one-dimensional and monotone, so the step derivative is exact:
        # |(f^-1)'| at p_from equals 1/f' at the preimage
        return 1.0 / self.deriv(p_to) if inverse else self.deriv(p_from)

    def iterate_amplification(self, k):
        # derivative products saturate: trajectories staying jump-scale
        # away from the fixed points expand by a bounded transit factor
        crude = max(self.lip_fwd, self.lip_inv) ** min(abs(k), 64)
        return min(crude, 2.0e3)

    # -- bump and bracket ----------------------------------------------------

    def phi(self, t):
        dn = self.dist(t, self.N)
        if dn <= self.r:
            return 1.0
        if dn >= 0.5 - self.r:
            return 0.0
        return (0.5 - self.r - dn) / (0.5 - 2.0 * self.r)

    def in_ball_s(self, t, radius=None):
        return self.dist(t, self.S) <= (self.r if radius is None else radius)

    def in_ball_n(self, t, radius=None):
        return self.dist(t, self.N) <= (self.r if radius is None else radius)

    # -- calibrated quantities ------------------------------------------------

    @property
    def u(self) -> int:
        if self._u is None:
            self._u = self.compute_transition_steps()
        return self._u

    @property
    def c_transition(self) -> float:
        return (max(self.lip_fwd, self.lip_inv) / self.mu) ** self.u

    @property
    def bowen_c(self) -> float:
        if self._bowen_rates is None:
            self._bowen_rates = self.fit_bowen_rates()
        return self._bowen_rates[0]

    @property
    def bowen_mu(self) -> float:
        if self._bowen_rates is None:
            self._bowen_rates = self.fit_bowen_rates()
        return self._bowen_rates[1]

    # -- hooks ---------------------------------------------------------------

    def sample_points(self, rng, count):
        return [rng.random() for _ in range(count)]

    def perturb(self, p, magnitude, rng):
        return (p + magnitude * (2.0 * rng.random() - 1.0)) % 1.0

    def point_to_jsonable(self, p):
        return [p]

    def point_from_jsonable(self, obj):
        return float(obj[0])

    # -- construction-time numerics -------------------------------------------

    def compute_transition_steps(self, grid: int = 2001) -> int:
        """Smallest u with the ball-covering and half-ball settling
        conditions, maximized over a dense grid."""
        need = 1
        for k in range(grid):
            t = k / grid
            fwd_hit = self.hitting_time(t, forward=True, radius=self.r)
            back_hit = self.hitting_time(t, forward=False, radius=self.r)
            need = max(need, min(fwd_hit, back_hit))
            if not (self.in_ball_n(t, self.r / 2)
                    or self.in_ball_s(t, self.r / 2)):
                need = max(need,
                           self.hitting_time(t, True, self.r / 2),
                           self.hitting_time(t, False, self.r / 2))
        return need

    def hitting_time(self, t, forward: bool, radius: float,
                     cap: int = 4096) -> int:
        """Steps until the forward orbit enters the radius-ball at S
        (or the backward orbit the one at N)."""
        target = self.S if forward else self.N
        step = self.fwd if forward else self.inv
        k = 0
        while self.dist(t, target) > radius:
            t = step(t)
            k += 1
            if k >= cap:
                return cap
        return k

    def fit_bowen_rates(self, base_grid: int = 1500, n_max: int = 48,
                        safety: float = 1.08, mu_grid: int = 64):
        """Certified contraction rates for the bump bracket.

        A deterministic sweep of base points against a ladder of pair
        widths records both iterate-distance sequences.  For each mu
        above the asymptotic ball rate, c(mu) is the largest required
        ratio, inflated by ``safety``; among the certified pairs, pick
        the one minimizing the block length and then maximizing the
        admissible jump cap.  The stage assertions re-test the chosen
        pair on every run.
        """
        from ..brackets import _contraction_ratios
        bracket = make_ns_bracket(self)
        gamma = self.bracket_radius
        data = []
        for k in range(base_grid):
            p = k / base_grid
            for frac in (0.999, 0.8, 0.55, 0.3, 0.1, 0.02):
                for sgn in (1, -1):
                    q = (p + sgn * gamma * frac) % 1.0
                    d0 = self.dist(p, q)
                    if d0 <= 0.0 or d0 > gamma:
                        continue
                    d0, fwd, back = _contraction_ratios(bracket, self,
                                                        p, q, n_max)
                    data.append((d0, fwd, back))
        best = None
        for k in range(mu_grid):
            mu = self.mu + (0.99 - self.mu) * k / (mu_grid - 1)
            c = 1.0
            for d0, fwd, back in data:
                for n in range(n_max + 1):
                    need = max(fwd[n], back[n]) / (mu ** n * d0)
                    if need > c:
                        c = need
            c *= safety
            m = _choose_m_or_none(c, mu)
            if m is None:
                continue
            lm = lipschitz_geom_sum(max(self.lip_fwd, self.lip_inv), m)
            cap = self.bracket_radius / (2.0 * lm)
            key = (m, -cap)
            if best is None or key < best[0]:
                best = (key, c, mu)
        if best is None:
            raise RuntimeError("no certifiable contraction rates found")
        return best[1], best[2]


def _choose_m_or_none(c, mu):
    if c < 1.0 or not 0.0 < mu < 1.0:
        return None
    m = 1
    while c * mu ** m > 1.0 / (2.0 * c):
        m += 1
        if m > 64:
            return None
    return m


def ns_bracket_eval(sysm: NorthSouthSystem, p, q):
    """Point at fraction phi(p) along the short arc from p to q; equals
    q on the N-ball and p on the S-ball."""
    d = sysm.dist(p, q)
    if d > sysm.bracket_radius:
        from ..brackets import BracketDomainError
        raise BracketDomainError(
            f"pair distance {d:.4g} exceeds bracket radius "
            f"{sysm.bracket_radius}")
    if d == 0.5:
        from ..brackets import BracketDomainError
        raise BracketDomainError("antipodal pair: shortest arc ambiguous")
    return (p + sysm.phi(p) * sysm.arc(p, q)) % 1.0


def make_ns_bracket(sysm: NorthSouthSystem):
    """The bump bracket with the crude transition rates declared."""
    from ..brackets import Bracket
    return Bracket(
        name="ns-bump",
        domain_radius=sysm.bracket_radius,
        eval=lambda p, q: ns_bracket_eval(sysm, p, q),
        declared_c=sysm.c_transition,
        declared_mu=sysm.mu,
    )


def make_ns_bowen_bracket(sysm: NorthSouthSystem):
    """Same bracket carrying the tighter fitted rates, for the iterative
    shadowing construction."""
    from ..brackets import Bracket
    return Bracket(
        name="ns-bump-fitted",
        domain_radius=sysm.bracket_radius,
        eval=lambda p, q: ns_bracket_eval(sysm, p, q),
        declared_c=sysm.bowen_c,
        declared_mu=sysm.bowen_mu,
    )


def ns_counterexample(sysm: NorthSouthSystem, window: int = 48,
                      pair_gap: float | None = None,
                      cert_factor: float = 100.0):
    """Witness that the induced shadowing map is not shift-invariant.

    Splice the past of p onto the future of q for a transition pair
    (phi(p) strictly between 0 and 1, both points outside the balls).
    The u-shifted splice is shadowed by the u-th image of q, while the
    u-th image of the original shadow stays a definite distance away;
    the gap is reported against the runs' error certificates.
    """
    from ..bowen import BowenConfig, bowen_shadow
    from ..brackets import CheckReport
    from ..core import connect
    bracket = make_ns_bowen_bracket(sysm)
    cfg = BowenConfig.for_bracket(sysm, bracket)
    if pair_gap is None:
        pair_gap = min(sysm.bracket_radius, cfg.delta_cap * 0.9)
    p = 0.25
    q = (p - pair_gap) % 1.0   # toward S so the future settles quickly
    x = connect(sysm, p, q, -window, window)
    res = bowen_shadow(sysm, bracket, cfg, x, per_index=False)
    shifted = x.shifted(sysm.u)
    res_shift = bowen_shadow(sysm, bracket, cfg, shifted, per_index=False)
    fu_sh = sysm.apply_iter(res.point, sysm.u)
    gap = sysm.dist(fu_sh, res_shift.point)
    certs = res.tail_bound + res_shift.tail_bound
    fuq = sysm.apply_iter(q, sysm.u)
    details = {
        "p": p, "q": q, "u": sysm.u,
        "phi_p": sysm.phi(p),
        "gap": gap,
        "certificates": certs,
        # one of the two compared points coincides with the u-th image
        # of the future endpoint (up to certificates); the other carries
        # the correction that breaks shift-invariance
        "shifted_shadow_vs_fu_q": sysm.dist(res_shift.point, fuq),
        "pushed_shadow_vs_fu_q": sysm.dist(fu_sh, fuq),
        "fu_q_in_s_ball": sysm.in_ball_s(fuq),
    }
    slack = gap - cert_factor * max(certs, 1e-14)
    return CheckReport(name="shift-invariance-counterexample[ns]",
                       passed=True, samples=1, worst_slack=slack,
                       witness={"points": [[p], [q]]}, details=details)
