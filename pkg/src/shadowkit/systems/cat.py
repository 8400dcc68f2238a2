"""Hyperbolic toral automorphism (the 2x2 cat map) with its stable/unstable
bracket and a closed-form shadowing oracle.

The map is p -> A p mod 1 with A = [[2, 1], [1, 1]].  A is symmetric with
eigenvalues lam_u = (3 + sqrt 5)/2 > 1 > lam_s = 1/lam_u and orthogonal
unit eigenvectors, so every torus vector splits exactly into an expanding
and a contracting component.  That decomposition gives:

* a bracket with hyperbolic contraction constants (c, mu) = (1, lam_s):
  the bracket point sits on the unstable line of the first argument and
  the stable line of the second,
* a linear-algebra oracle: the unique bounded solution of the correction
  recursion w_{i+1} = A w_i - e_i around a pseudo-orbit with lifted jump
  vectors e_i, summing unstable components over the future and stable
  components over the past.
"""

from __future__ import annotations

import math

import numpy as np

from ..core import MetricSystem, PseudoOrbit, ORBIT_CAPPED, PERIODIC

SQRT5 = math.sqrt(5.0)
LAMBDA_U = (3.0 + SQRT5) / 2.0
LAMBDA_S = (3.0 - SQRT5) / 2.0

# unit eigenvectors of [[2,1],[1,1]] (orthogonal since A is symmetric)
_vu = (1.0, (SQRT5 - 1.0) / 2.0)
_nu = math.hypot(*_vu)
V_U = (_vu[0] / _nu, _vu[1] / _nu)
_vs = (1.0, -(SQRT5 + 1.0) / 2.0)
_ns = math.hypot(*_vs)
V_S = (_vs[0] / _ns, _vs[1] / _ns)


def _wrap(t: float) -> float:
    """Signed representative of t mod 1 in [-0.5, 0.5)."""
    return (t + 0.5) % 1.0 - 0.5


class CatMapSystem(MetricSystem):
    """The torus automorphism A = [[2,1],[1,1]] with the flat metric.

    Points are (x, y) tuples with coordinates in [0, 1).  Both Lipschitz
    constants equal the spectral radius lam_u.  ``bracket_radius`` keeps
    near-diagonal pairs well inside the injectivity range of the nearest
    lift, so the stable/unstable splitting of the difference vector is
    unambiguous.
    """

    system_id = "cat"

    def __init__(self, bracket_radius: float = 0.2, tol: float = 1e-10):
        super().__init__(lip_fwd=LAMBDA_U, lip_inv=LAMBDA_U,
                         diam=math.sqrt(0.5), tol=tol)
        self.bracket_radius = float(bracket_radius)
        self.lambda_u = LAMBDA_U
        self.lambda_s = LAMBDA_S
        self.v_u = V_U
        self.v_s = V_S

    # -- map and metric ----------------------------------------------------

    def fwd(self, p):
        x, y = p
        return ((2.0 * x + y) % 1.0, (x + y) % 1.0)

    def inv(self, p):
        x, y = p
        return ((x - y) % 1.0, (2.0 * y - x) % 1.0)

    def dist(self, p, q):
        return math.hypot(_wrap(p[0] - q[0]), _wrap(p[1] - q[1]))

    def lift_diff(self, p, q):
        """Shortest lift of q - p as a plane vector."""
        return (_wrap(q[0] - p[0]), _wrap(q[1] - p[1]))

    # -- hooks ---------------------------------------------------------------

    def sample_points(self, rng, count):
        return [(rng.random(), rng.random()) for _ in range(count)]

    def perturb(self, p, magnitude, rng):
        ang = rng.random() * 2.0 * math.pi
        rad = magnitude * rng.random()
        return ((p[0] + rad * math.cos(ang)) % 1.0,
                (p[1] + rad * math.sin(ang)) % 1.0)

    def point_to_jsonable(self, p):
        return [p[0], p[1]]

    def point_from_jsonable(self, obj):
        return (float(obj[0]), float(obj[1]))

    # -- batch helpers (numpy arrays of shape (..., 2)) ----------------------

    def fwd_batch(self, P):
        out = np.empty_like(P)
        out[..., 0] = (2.0 * P[..., 0] + P[..., 1]) % 1.0
        out[..., 1] = (P[..., 0] + P[..., 1]) % 1.0
        return out

    def inv_batch(self, P):
        out = np.empty_like(P)
        out[..., 0] = (P[..., 0] - P[..., 1]) % 1.0
        out[..., 1] = (2.0 * P[..., 1] - P[..., 0]) % 1.0
        return out

    def dist_batch(self, P, Q):
        d = (Q - P + 0.5) % 1.0 - 0.5
        return np.hypot(d[..., 0], d[..., 1])


class PerturbedCatSystem(MetricSystem):
    """The cat map plus a smooth bump of uniform size ``amplitude``.

    g(p) = A p + amplitude * (sin(2 pi y), cos(2 pi x)) / sqrt(2) mod 1,
    so the uniform distance between g and the cat map is at most
    ``amplitude``.  The inverse solves the fixed-point equation
    q = A^{-1}(y - bump(q)), a contraction for small amplitudes.
    """

    system_id = "cat-perturbed"

    def __init__(self, amplitude: float = 1e-3, tol: float = 1e-10):
        if not 0.0 <= amplitude < 0.05:
            raise ValueError("amplitude too large for an invertible bump")
        bump_lip = 2.0 * math.pi * amplitude / math.sqrt(2.0)
        super().__init__(lip_fwd=LAMBDA_U + bump_lip,
                         lip_inv=LAMBDA_U / (1.0 - LAMBDA_U * bump_lip),
                         diam=math.sqrt(0.5), tol=tol)
        self.amplitude = float(amplitude)
        self.base = CatMapSystem(tol=tol)

    def _bump(self, p):
        a = self.amplitude / math.sqrt(2.0)
        return (a * math.sin(2.0 * math.pi * p[1]),
                a * math.cos(2.0 * math.pi * p[0]))

    def fwd(self, p):
        b = self._bump(p)
        return ((2.0 * p[0] + p[1] + b[0]) % 1.0,
                (p[0] + p[1] + b[1]) % 1.0)

    def inv(self, y):
        q = self.base.inv(y)
        for _ in range(40):
            b = self._bump(q)
            q2 = self.base.inv(((y[0] - b[0]) % 1.0, (y[1] - b[1]) % 1.0))
            if math.hypot(_wrap(q2[0] - q[0]), _wrap(q2[1] - q[1])) < 1e-15:
                return q2
            q = q2
        return q

    def dist(self, p, q):
        return self.base.dist(p, q)

    def fwd_batch(self, P):
        a = self.amplitude / math.sqrt(2.0)
        out = np.empty_like(P)
        out[..., 0] = (2.0 * P[..., 0] + P[..., 1]
                       + a * np.sin(2.0 * np.pi * P[..., 1])) % 1.0
        out[..., 1] = (P[..., 0] + P[..., 1]
                       + a * np.cos(2.0 * np.pi * P[..., 0])) % 1.0
        return out

    def inv_batch(self, Y):
        a = self.amplitude / math.sqrt(2.0)
        Q = self.base.inv_batch(Y)
        for _ in range(40):
            B = np.stack([a * np.sin(2.0 * np.pi * Q[..., 1]),
                          a * np.cos(2.0 * np.pi * Q[..., 0])], axis=-1)
            Q2 = self.base.inv_batch((Y - B) % 1.0)
            if float(np.max(np.abs((Q2 - Q + 0.5) % 1.0 - 0.5))) < 1e-14:
                return Q2
            Q = Q2
        return Q

    def point_to_jsonable(self, p):
        return [p[0], p[1]]

    def point_from_jsonable(self, obj):
        return (float(obj[0]), float(obj[1]))


def cat_bracket_eval(sysm: CatMapSystem, p, q):
    """Crossing point of the unstable line through p and the stable line
    through q: keeps q's expanding coordinate and p's contracting one."""
    dx, dy = sysm.lift_diff(p, q)
    if math.hypot(dx, dy) > sysm.bracket_radius:
        from ..brackets import BracketDomainError
        raise BracketDomainError(
            f"pair distance {math.hypot(dx, dy):.4g} exceeds bracket "
            f"radius {sysm.bracket_radius}")
    a = dx * V_U[0] + dy * V_U[1]
    return ((p[0] + a * V_U[0]) % 1.0, (p[1] + a * V_U[1]) % 1.0)


def cat_bracket_eval_batch(sysm: CatMapSystem, P, Q):
    d = (Q - P + 0.5) % 1.0 - 0.5
    a = d[..., 0] * V_U[0] + d[..., 1] * V_U[1]
    out = np.empty_like(P)
    out[..., 0] = (P[..., 0] + a * V_U[0]) % 1.0
    out[..., 1] = (P[..., 1] + a * V_U[1]) % 1.0
    return out


def make_cat_bracket(sysm: CatMapSystem):
    from ..brackets import Bracket
    return Bracket(
        name="cat-linear",
        domain_radius=sysm.bracket_radius,
        eval=lambda p, q: cat_bracket_eval(sysm, p, q),
        declared_c=1.0,
        declared_mu=LAMBDA_S,
        eval_batch=lambda P, Q: cat_bracket_eval_batch(sysm, P, Q),
    )


# ---------------------------------------------------------------------------
# closed-form oracle
# ---------------------------------------------------------------------------

_A = np.array([[2.0, 1.0], [1.0, 1.0]])
_VU = np.array(V_U)
_VS = np.array(V_S)


def _jump_vectors(x: PseudoOrbit):
    """Lifted jump vectors e_i = lift(x_{i+1}) - A lift(x_i) for the window.

    e[k] connects index (lo + k) to (lo + k + 1).  Rejects orbits whose
    jumps are too large for the nearest-representative lift to be
    unambiguous.
    """
    E = np.array(x.entries)
    img = E[:-1] @ _A.T
    e = (E[1:] - img + 0.5) % 1.0 - 0.5
    if e.size and float(np.max(np.abs(e))) >= 0.25:
        raise ValueError("jump too large for an unambiguous lift (>= 0.25)")
    return e


def cat_oracle_shadow(sysm: CatMapSystem, x: PseudoOrbit):
    """The unique shadow point of a small-jump pseudo-orbit, in closed form.

    Writing the true shadow orbit as x_i + w_i in the lift gives
    w_{i+1} = A w_i - e_i.  The only solution bounded in both directions
    has unstable component summed over future jumps and stable component
    summed over past jumps:

        w_0 . v_u =  sum_{k>=0} lam_u^{-k-1} (e_k . v_u)
        w_0 . v_s = -sum_{k<0}  lam_s^{-k-1} (e_k . v_s)

    Orbit-capped extensions make both sums finite; periodic orbits close
    them into geometric series.
    """
    if x.extension == ORBIT_CAPPED:
        e = _jump_vectors(x)
        if len(e) == 0:
            return x.entry(0)
        eu = e @ _VU
        es = e @ _VS
        k = np.arange(x.lo, x.hi)      # e[j] connects k=lo+j to k+1
        fut = k >= 0
        wu = float(np.sum(LAMBDA_U ** (-k[fut] - 1.0) * eu[fut]))
        past = k < 0
        ws = -float(np.sum(LAMBDA_S ** (-k[past] - 1.0) * es[past]))
    elif x.extension == PERIODIC:
        n = x.period
        pts = np.array([x.entry(i) for i in range(x.lo, x.lo + n + 1)])
        img = pts[:-1] @ _A.T
        e_all = (pts[1:] - img + 0.5) % 1.0 - 0.5   # jump vec k -> k+1
        if float(np.max(np.abs(e_all))) >= 0.25:
            raise ValueError(
                "jump too large for an unambiguous lift (>= 0.25)")
        eu = e_all @ _VU
        es = e_all @ _VS

        def at(idx):
            return (idx - x.lo) % n

        wu = sum(LAMBDA_U ** (-j - 1.0) * eu[at(j)] for j in range(n)) \
            / (1.0 - LAMBDA_U ** (-n))
        ws = -sum(LAMBDA_S ** (j - 1.0) * es[at(-j)] for j in range(1, n + 1)) \
            / (1.0 - LAMBDA_S ** n)
    else:  # pragma: no cover
        raise ValueError(x.extension)
    w = wu * _VU + ws * _VS
    p0 = x.entry(0)
    return ((p0[0] + w[0]) % 1.0, (p0[1] + w[1]) % 1.0)


def cat_oracle_error_bound(sysm: CatMapSystem, x: PseudoOrbit) -> float:
    """Geometric-series bound on the oracle's shadowing error:
    max jump length times lam_u / (lam_u - 1)."""
    e = _jump_vectors(x)
    if len(e) == 0:
        return 0.0
    worst = float(np.max(np.hypot(e[:, 0], e[:, 1])))
    return worst * LAMBDA_U / (LAMBDA_U - 1.0)


def cat_oracle_shadow_batch(entries: np.ndarray, lo: int) -> np.ndarray:
    """Vectorized orbit-capped oracle for a batch of pseudo-orbits.

    ``entries`` has shape (span, nbatch, 2) with window index first.
    Returns the (nbatch, 2) array of shadow points.
    """
    img = np.einsum("ij,snj->sni", _A, entries[:-1])
    e = (entries[1:] - img + 0.5) % 1.0 - 0.5
    eu = e @ _VU
    es = e @ _VS
    k = np.arange(lo, lo + e.shape[0], dtype=float)
    wu_weights = np.where(k >= 0, LAMBDA_U ** (-k - 1.0), 0.0)
    ws_weights = np.where(k < 0, LAMBDA_S ** (-k - 1.0), 0.0)
    wu = np.tensordot(wu_weights, eu, axes=(0, 0))
    ws = -np.tensordot(ws_weights, es, axes=(0, 0))
    w = np.outer(wu, _VU) + np.outer(ws, _VS)
    return (entries[-lo] + w) % 1.0
