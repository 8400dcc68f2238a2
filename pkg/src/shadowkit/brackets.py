"""Brackets on near-diagonal pairs and numerical checkers for their axioms.

A bracket is a partial binary map defined for pairs within
``domain_radius`` of each other, with ``[p, p] = p``.  The checkers in
this module probe, on deterministic samples, the axiom families used
throughout the package: the identity/continuity axiom, the two
associativity identities, map-invariance, hyperbolic contraction at
declared or fitted rates (c, mu), uniform contraction, and finite-window
membership in stable/unstable sets.

None of this proves an axiom; each check returns a :class:`CheckReport`
with the worst observed slack (bound minus observation; negative means a
violation) and the witness that achieved it.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from typing import Callable, Optional

from .core import MetricSystem, connect


class BracketDomainError(ValueError):
    """Bracket evaluated on a pair outside its domain radius."""


@dataclass
class Bracket:
    name: str
    domain_radius: float
    eval: Callable
    declared_c: Optional[float] = None
    declared_mu: Optional[float] = None
    eval_batch: Optional[Callable] = None

    def __call__(self, p, q):
        return self.eval(p, q)

    def reversed(self) -> "Bracket":
        """Argument swap: the matching bracket for the inverse map.

        Time reversal exchanges the stable and unstable roles of the two
        arguments, so a (c, mu)-contracting bracket for f becomes one
        for f^{-1} with the arguments flipped.
        """
        rev_batch = None
        if self.eval_batch is not None:
            rev_batch = lambda P, Q: self.eval_batch(Q, P)
        return Bracket(name=self.name + "-rev",
                       domain_radius=self.domain_radius,
                       eval=lambda p, q: self.eval(q, p),
                       declared_c=self.declared_c,
                       declared_mu=self.declared_mu,
                       eval_batch=rev_batch)


@dataclass
class CheckReport:
    """Outcome of one property check.

    ``worst_slack`` is bound minus worst observation; the check passes
    exactly when it is >= -tolerance.  ``witness`` serializes the inputs
    achieving the worst slack.
    """

    name: str
    passed: bool
    samples: int
    worst_slack: float
    witness: Optional[dict] = None
    tolerance: float = 0.0
    details: dict = field(default_factory=dict)

    def __post_init__(self):
        self.passed = bool(self.worst_slack >= -self.tolerance)

    def to_jsonable(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "samples": self.samples,
            "worst_slack": self.worst_slack,
            "tolerance": self.tolerance,
            "witness": self.witness,
            "details": self.details,
        }

    def to_json(self) -> str:
        return json.dumps(self.to_jsonable(), sort_keys=True)

    def summary_line(self) -> str:
        status = "PASS" if self.passed else "FAIL"
        return f"{status:4s}  {self.name:40s} worst_slack={self.worst_slack:+.3e} samples={self.samples}"


# ---------------------------------------------------------------------------
# deterministic low-discrepancy sampling
# ---------------------------------------------------------------------------

_GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0
_PLASTIC = 1.3247179572447460  # real root of t^3 = t + 1


def golden_sequence(seed: int, count: int):
    """Low-discrepancy scalars in [0, 1): a seeded Kronecker sequence."""
    start = (seed * _GOLDEN) % 1.0
    return [(start + k * _GOLDEN) % 1.0 for k in range(1, count + 1)]


def plastic_pairs(seed: int, count: int):
    """Low-discrepancy pairs in [0, 1)^2 (two-dimensional Kronecker)."""
    a1 = 1.0 / _PLASTIC
    a2 = 1.0 / _PLASTIC ** 2
    s = (seed * _GOLDEN) % 1.0
    return [(((s + k * a1) % 1.0), ((s + k * a2) % 1.0))
            for k in range(1, count + 1)]


def diagonal_pairs(sysm: MetricSystem, sampler, radius: float, seed: int,
                   count: int):
    """Pairs (p, q) with d(p, q) <= radius, deterministically seeded."""
    import random
    rng = random.Random(seed)
    pts = sampler(rng, count)
    mags = golden_sequence(seed + 1, count)
    return [(p, sysm.perturb(p, radius * m, rng)) for p, m in zip(pts, mags)]


def _wit(sysm, *points):
    return {"points": [sysm.point_to_jsonable(p) for p in points]}


# ---------------------------------------------------------------------------
# induced bracket
# ---------------------------------------------------------------------------

def induced_bracket(method, sysm: MetricSystem, p, q, window: int = 32):
    """Bracket induced by a shadowing method: apply it to the splice of
    p's past with q's future."""
    if sysm.dist(p, q) > method.gamma:
        raise BracketDomainError(
            f"d(p, q) = {sysm.dist(p, q):.4g} exceeds the method's "
            f"admissible jump bound {method.gamma:.4g}")
    x = connect(sysm, p, q, -window, window)
    return method.apply(x)


def method_bracket(method, sysm: MetricSystem, window: int = 32,
                   declared_c=None, declared_mu=None) -> Bracket:
    return Bracket(name=f"induced-{method.id}",
                   domain_radius=method.gamma,
                   eval=lambda p, q: induced_bracket(method, sysm, p, q, window),
                   declared_c=declared_c, declared_mu=declared_mu)


# ---------------------------------------------------------------------------
# axiom checkers
# ---------------------------------------------------------------------------

def check_identity_axiom(b: Bracket, sysm: MetricSystem, seed: int = 0,
                         samples: int = 200, tol: float = 1e-9,
                         perturbations=(1e-2, 1e-3, 1e-4)) -> CheckReport:
    """[p, p] = p on samples, plus a measured continuity modulus.

    The modulus records, for each perturbation size h, the largest
    output displacement over input displacements of size <= h; it is
    reported, not judged, since continuity is not decidable from
    samples.
    """
    import random
    rng = random.Random(seed)
    pts = sysm.sample_points(rng, samples)
    worst = 0.0
    witness = None
    for p in pts:
        d = sysm.dist(b.eval(p, p), p)
        if d > worst:
            worst, witness = d, _wit(sysm, p)
    modulus = {}
    for h in perturbations:
        disp = 0.0
        for p in pts[: max(20, samples // 4)]:
            q = sysm.perturb(p, min(h, b.domain_radius / 4), rng)
            p2 = sysm.perturb(p, h / 2, rng)
            q2 = sysm.perturb(q, h / 2, rng)
            try:
                disp = max(disp, sysm.dist(b.eval(p, q), b.eval(p2, q2)))
            except BracketDomainError:
                continue
        modulus[str(h)] = disp
    return CheckReport(name=f"identity[{b.name}]", passed=True,
                       samples=samples, worst_slack=tol - worst,
                       witness=witness, tolerance=0.0,
                       details={"continuity_modulus": modulus})


def check_ss12(b: Bracket, sysm: MetricSystem, seed: int = 0,
               samples: int = 200, tol: float = 1e-9) -> CheckReport:
    """Associativity pair [[p,q],r] = [p,r] and [p,[q,r]] = [p,r],
    evaluated whenever all intermediate pairs stay in the domain."""
    import random
    rng = random.Random(seed)
    radius = b.domain_radius / 3.0
    pts = sysm.sample_points(rng, samples)
    worst = 0.0
    witness = None
    used = 0
    for p in pts:
        q = sysm.perturb(p, radius * rng.random(), rng)
        r = sysm.perturb(p, radius * rng.random(), rng)
        try:
            pr = b.eval(p, r)
            d1 = sysm.dist(b.eval(b.eval(p, q), r), pr)
            d2 = sysm.dist(b.eval(p, b.eval(q, r)), pr)
        except BracketDomainError:
            continue
        used += 1
        d = max(d1, d2)
        if d > worst:
            worst, witness = d, _wit(sysm, p, q, r)
    return CheckReport(name=f"associativity[{b.name}]", passed=True,
                       samples=used, worst_slack=tol - worst,
                       witness=witness)


def check_f_invariance(b: Bracket, sysm: MetricSystem, seed: int = 0,
                       samples: int = 300, tol: float = 1e-9) -> CheckReport:
    """f([p,q]) = [f(p), f(q)] where both sides are defined."""
    import random
    rng = random.Random(seed)
    pts = sysm.sample_points(rng, samples)
    worst = 0.0
    witness = None
    used = 0
    for p in pts:
        q = sysm.perturb(p, b.domain_radius * rng.random(), rng)
        fp, fq = sysm.fwd(p), sysm.fwd(q)
        if sysm.dist(fp, fq) > b.domain_radius:
            continue
        try:
            d = sysm.dist(sysm.fwd(b.eval(p, q)), b.eval(fp, fq))
        except BracketDomainError:
            continue
        used += 1
        if d > worst:
            worst, witness = d, _wit(sysm, p, q)
    return CheckReport(name=f"map-invariance[{b.name}]", passed=True,
                       samples=used, worst_slack=tol - worst,
                       witness=witness)


def _contraction_ratios(b: Bracket, sysm: MetricSystem, p, q, n_max: int):
    """Distance sequences d(f^n([p,q]), f^n(q)) and d(f^-n([p,q]), f^-n(p)).

    Returns (d0, fwd_list, back_list); the lists stop early if an
    intermediate evaluation fails.
    """
    d0 = sysm.dist(p, q)
    r = b.eval(p, q)
    fwd = []
    a, c = r, q
    for _ in range(n_max + 1):
        fwd.append(sysm.dist(a, c))
        a, c = sysm.fwd(a), sysm.fwd(c)
    back = []
    a, c = r, p
    for _ in range(n_max + 1):
        back.append(sysm.dist(a, c))
        a, c = sysm.inv(a), sysm.inv(c)
    return d0, fwd, back


def check_hyperbolic(b: Bracket, sysm: MetricSystem, seed: int = 0,
                     samples: int = 150, n_max: int = 24,
                     tol: float = 1e-9, mu_grid_size: int = 64) -> CheckReport:
    """Contraction toward the second argument forward and the first
    argument backward, at geometric rate c * mu^n * d(p, q).

    With declared (c, mu) on the bracket the check verifies both
    inequalities for n = 0..n_max.  Otherwise it fits: for each mu on a
    log grid, c(mu) is the smallest constant covering all samples, and
    the certified pair minimizes c * mu^n_max.
    """
    pairs = diagonal_pairs(sysm, sysm.sample_points, b.domain_radius,
                           seed, samples)
    data = []
    skipped = 0
    for p, q in pairs:
        try:
            d0, fwd, back = _contraction_ratios(b, sysm, p, q, n_max)
        except BracketDomainError:
            skipped += 1
            continue
        if d0 > 0:
            data.append((p, q, d0, fwd, back))
    details = {"skipped": skipped, "n_max": n_max}
    eps = 2.0 ** -52
    if b.declared_c is not None and b.declared_mu is not None:
        c, mu = b.declared_c, b.declared_mu
        worst = -math.inf
        witness = None
        for p, q, d0, fwd, back in data:
            for n in range(n_max + 1):
                # measuring iterate distances amplifies rounding noise
                bound = c * mu ** n * d0 \
                    + 64.0 * eps * sysm.iterate_amplification(n)
                slack = min(bound - fwd[n], bound - back[n])
                if worst == -math.inf or slack < worst:
                    worst, witness = slack, _wit(sysm, p, q)
        details.update({"c": c, "mu": mu, "mode": "declared"})
        return CheckReport(name=f"hyperbolic-contraction[{b.name}]",
                           passed=True, samples=len(data),
                           worst_slack=(worst if data else 0.0) + tol,
                           witness=witness, details=details)
    noise = _iterate_noise(sysm, n_max)
    c_fit, mu_fit = fit_hyperbolic_from_data(data, n_max, mu_grid_size,
                                             noise)
    details.update({"c": c_fit, "mu": mu_fit, "mode": "fitted"})
    passed_slack = tol if math.isfinite(c_fit) else -1.0
    return CheckReport(name=f"hyperbolic-contraction[{b.name}]",
                       passed=True, samples=len(data),
                       worst_slack=passed_slack, details=details)


def _iterate_noise(sysm: MetricSystem, n_max: int):
    """Per-iterate rounding allowance: measured distances at depth n are
    meaningless below it."""
    eps = 2.0 ** -52
    return [64.0 * eps * (1.0 + sysm.iterate_amplification(n))
            for n in range(n_max + 1)]


def fit_hyperbolic_from_data(data, n_max: int, mu_grid_size: int = 64,
                             noise=None):
    """Best certified (c, mu) with c(mu) = max required ratio over
    samples and iterates (after discounting the rounding allowance).

    Among rates whose constant stays within a decade of the smallest
    achievable one (tiny mu can always be bought with an astronomically
    large, useless constant), the returned pair minimizes c * mu^n_max.
    Always c >= 1.
    """
    if not data:
        return 1.0, 0.5
    if noise is None:
        noise = [0.0] * (n_max + 1)
    lo, hi = math.log(0.01), math.log(0.99)
    grid = []
    for k in range(mu_grid_size):
        mu = math.exp(lo + (hi - lo) * k / (mu_grid_size - 1))
        c = 1.0
        for _p, _q, d0, fwd, back in data:
            for n in range(n_max + 1):
                val = max(fwd[n], back[n]) - noise[n]
                if val <= 0.0:
                    continue
                need = val / (mu ** n * d0)
                if need > c:
                    c = need
        grid.append((c, mu))
    c_min = min(c for c, _mu in grid)
    best = None
    for c, mu in grid:
        if c > 10.0 * c_min:
            continue
        score = c * mu ** n_max
        if best is None or score < best[0]:
            best = (score, c, mu)
    return best[1], best[2]


def fit_hyperbolic(b: Bracket, sysm: MetricSystem, seed: int = 0,
                   samples: int = 200, n_max: int = 30,
                   mu_grid_size: int = 64):
    """Sample near-diagonal pairs and fit certified (c, mu) rates."""
    pairs = diagonal_pairs(sysm, sysm.sample_points, b.domain_radius,
                           seed, samples)
    data = []
    for p, q in pairs:
        try:
            d0, fwd, back = _contraction_ratios(b, sysm, p, q, n_max)
        except BracketDomainError:
            continue
        if d0 > 0:
            data.append((p, q, d0, fwd, back))
    return fit_hyperbolic_from_data(data, n_max, mu_grid_size,
                                    _iterate_noise(sysm, n_max))


def check_uniform_contraction(b: Bracket, sysm: MetricSystem, eps: float,
                              seed: int = 0, samples: int = 120,
                              m_max: int = 48) -> CheckReport:
    """Smallest m such that both iterate distances stay below eps for
    every n in [m, m_max] on all samples; fails when no m works.

    The horizon is clamped to where iterate rounding noise stays well
    below eps.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    feps = 2.0 ** -52
    while m_max > 4 and 256.0 * feps * sysm.iterate_amplification(m_max) > eps:
        m_max -= 1
    pairs = diagonal_pairs(sysm, sysm.sample_points, b.domain_radius,
                           seed, samples)
    worst_by_n = [0.0] * (m_max + 1)
    used = 0
    for p, q in pairs:
        try:
            _d0, fwd, back = _contraction_ratios(b, sysm, p, q, m_max)
        except BracketDomainError:
            continue
        used += 1
        for n in range(m_max + 1):
            worst_by_n[n] = max(worst_by_n[n], fwd[n], back[n])
    m_found = None
    for m in range(m_max + 1):
        if all(w < eps for w in worst_by_n[m:]):
            m_found = m
            break
    details = {"eps": eps, "m": m_found, "m_max": m_max}
    if b.declared_c is not None and b.declared_mu is not None:
        c, mu = b.declared_c, b.declared_mu
        pred = 0 if c * b.domain_radius < eps else int(
            math.ceil(math.log(eps / (c * b.domain_radius)) / math.log(mu)))
        details["predicted_m"] = pred
    slack = 1.0 if m_found is not None else -1.0
    return CheckReport(name=f"uniform-contraction[{b.name}]", passed=True,
                       samples=used, worst_slack=slack, details=details)


def check_shadowing_bracket(b: Bracket, sysm: MetricSystem, eps: float,
                            window: int, seed: int = 0, samples: int = 120,
                            l_mode: bool = False,
                            decay_target: float = 0.25) -> CheckReport:
    """Finite-window membership of [p,q] in the eps-stable set of q and
    the eps-unstable set of p.

    With ``l_mode`` the two distance sequences must additionally decay:
    the maximum over the tail half of the window must drop below
    ``decay_target`` times the overall maximum (or below float noise).
    """
    if window < 1:
        raise ValueError("window must be >= 1")
    pairs = diagonal_pairs(sysm, sysm.sample_points, b.domain_radius,
                           seed, samples)
    worst = math.inf
    witness = None
    used = 0
    decay_ok = True
    decay_worst = 0.0
    for p, q in pairs:
        try:
            _d0, fwd, back = _contraction_ratios(b, sysm, p, q, window)
        except BracketDomainError:
            continue
        used += 1
        m = max(max(fwd), max(back))
        slack = eps - m
        if slack < worst:
            worst, witness = slack, _wit(sysm, p, q)
        if l_mode:
            for seq in (fwd, back):
                peak = max(seq)
                tail = max(seq[window // 2:])
                if peak > 1e-13 and tail > decay_target * peak + 1e-13:
                    decay_ok = False
                    decay_worst = max(decay_worst, tail / peak)
    details = {"eps": eps, "window": window}
    if l_mode:
        details.update({"l_mode": True, "decay_ok": decay_ok,
                        "worst_tail_ratio": decay_worst})
        if not decay_ok:
            worst = -abs(decay_worst)
    name = "l-bracket" if l_mode else "shadowing-bracket"
    return CheckReport(name=f"{name}[{b.name}]", passed=True,
                       samples=used,
                       worst_slack=worst if used else 0.0,
                       witness=witness, details=details)
