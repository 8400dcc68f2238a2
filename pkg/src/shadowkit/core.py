"""Carrier spaces, pseudo-orbits and discrepancy functions.

A pseudo-orbit with jump tolerance ``delta`` is a bi-infinite sequence
``x`` with ``d(f(x[i]), x[i+1]) <= delta`` for every ``i``.  We store a
finite window of entries plus an extension rule that determines every
entry outside the window, so that all infinite objects in this package
are exactly evaluable:

* ``orbit-capped``: beyond the window the sequence continues as the true
  orbit of the boundary entries (all jumps outside the window are zero),
* ``periodic``: the window is one full period and repeats.

Sums over infinitely many indices (the weighted sequence metric, the
second discrepancy) are returned as :class:`BoundedValue` certificates:
the truncated value together with a bound on everything discarded.
"""

from __future__ import annotations

from dataclasses import dataclass, field


class MetricSystem:
    """An invertible Lipschitz map on a compact metric carrier.

    Points are opaque: concrete systems decide their representation
    (tuples for the torus, floats for the circle, digit tuples for the
    odometer).  Subclasses must provide ``dist``, ``fwd`` and ``inv``
    plus the constants below; the optional hooks (sampling,
    perturbation, JSON codecs) are needed by generators and the CLI.
    """

    system_id = "abstract"

    def __init__(self, dist=None, fwd=None, inv=None, lip_fwd=1.0,
                 lip_inv=1.0, diam=1.0, tol=1e-10):
        if dist is not None:
            self.dist = dist
        if fwd is not None:
            self.fwd = fwd
        if inv is not None:
            self.inv = inv
        self.lip_fwd = float(lip_fwd)
        self.lip_inv = float(lip_inv)
        self.diam = float(diam)
        self.tol = float(tol)

    # -- equality and iteration ------------------------------------------

    def close(self, p, q, tol=None):
        return self.dist(p, q) <= (self.tol if tol is None else tol)

    def apply_iter(self, p, k: int):
        """k-th iterate of the map; negative k uses the inverse."""
        step = self.fwd if k >= 0 else self.inv
        for _ in range(abs(k)):
            p = step(p)
        return p

    def inverse(self) -> "MetricSystem":
        """The same carrier driven by the inverse map."""
        return _InverseView(self)

    def local_stretch(self, p_from, p_to, inverse: bool) -> float:
        """Local Lipschitz bound of the step that sent p_from to p_to
        (the inverse map when ``inverse``).  Used to track how much a
        transport path can amplify rounding noise; the default is the
        global constant, systems with pointwise derivatives sharpen it.
        """
        return self.lip_inv if inverse else self.lip_fwd

    def iterate_amplification(self, k: int) -> float:
        """A-priori bound on derivative products over k steps (either
        direction), used to pick numerically meaningful check windows.
        Systems whose transients saturate override the Lipschitz power.
        """
        lip = max(self.lip_fwd, self.lip_inv)
        if lip <= 1.0:
            return 1.0
        try:
            return lip ** abs(k)
        except OverflowError:
            return float("inf")

    # -- hooks for generators / serialization ----------------------------

    def sample_points(self, rng, count: int):
        raise NotImplementedError

    def perturb(self, p, magnitude: float, rng):
        """A point within ``magnitude`` of ``p`` (used to inject jumps)."""
        raise NotImplementedError

    def point_to_jsonable(self, p):
        raise NotImplementedError

    def point_from_jsonable(self, obj):
        raise NotImplementedError


class _InverseView(MetricSystem):
    """Swap of fwd/inv; shares the carrier of its base system."""

    def __init__(self, base: MetricSystem):
        self.base = base
        self.system_id = base.system_id + "^-1"
        self.dist = base.dist
        self.fwd = base.inv
        self.inv = base.fwd
        self.lip_fwd = base.lip_inv
        self.lip_inv = base.lip_fwd
        self.diam = base.diam
        self.tol = base.tol

    def inverse(self):
        return self.base

    def local_stretch(self, p_from, p_to, inverse):
        return self.base.local_stretch(p_from, p_to, not inverse)

    def iterate_amplification(self, k):
        return self.base.iterate_amplification(k)

    def sample_points(self, rng, count):
        return self.base.sample_points(rng, count)

    def perturb(self, p, magnitude, rng):
        return self.base.perturb(p, magnitude, rng)

    def point_to_jsonable(self, p):
        return self.base.point_to_jsonable(p)

    def point_from_jsonable(self, obj):
        return self.base.point_from_jsonable(obj)


@dataclass(frozen=True)
class BoundedValue:
    """A truncated nonnegative sum: the true quantity lies in
    [value, value + tail_bound]."""

    value: float
    tail_bound: float = 0.0

    def upper(self) -> float:
        return self.value + self.tail_bound


ORBIT_CAPPED = "orbit-capped"
PERIODIC = "periodic"


@dataclass
class PseudoOrbit:
    """A finite window ``entries[lo..hi]`` of a bi-infinite sequence.

    ``extension`` is ``"orbit-capped"`` (true orbit of the boundary
    entries outside the window) or ``"periodic"`` (window is exactly one
    period).
    """

    system: MetricSystem
    lo: int
    hi: int
    entries: list
    extension: str = ORBIT_CAPPED
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError(f"empty window [{self.lo}, {self.hi}]")
        if len(self.entries) != self.hi - self.lo + 1:
            raise ValueError("entry count does not match window size")
        if self.extension not in (ORBIT_CAPPED, PERIODIC):
            raise ValueError(f"unknown extension rule {self.extension!r}")

    # -- indexing ---------------------------------------------------------

    @property
    def span(self) -> int:
        return self.hi - self.lo + 1

    @property
    def period(self) -> int:
        if self.extension != PERIODIC:
            raise ValueError("not a periodic pseudo-orbit")
        return self.span

    def indices(self):
        return range(self.lo, self.hi + 1)

    def entry(self, i: int):
        """Entry x_i, using the extension rule outside the window."""
        if self.lo <= i <= self.hi:
            return self.entries[i - self.lo]
        if self.extension == PERIODIC:
            return self.entries[(i - self.lo) % self.span]
        if i in self._cache:
            return self._cache[i]
        sysm = self.system
        ext = [k for k in self._cache if isinstance(k, int)]
        if i > self.hi:
            higher = [k for k in ext if k > self.hi]
            base = max(higher) if higher else self.hi
            p = self._cache.get(base, self.entries[-1])
            for j in range(base + 1, i + 1):
                p = sysm.fwd(p)
                self._cache[j] = p
        else:
            lower = [k for k in ext if k < self.lo]
            base = min(lower) if lower else self.lo
            p = self._cache.get(base, self.entries[0])
            for j in range(base - 1, i - 1, -1):
                p = sysm.inv(p)
                self._cache[j] = p
        return p

    # -- structural transforms ---------------------------------------------

    def shifted(self, k: int) -> "PseudoOrbit":
        """The k-fold shift: ``shifted(k)`` at index i equals self at i+k.

        Realized by re-indexing the window; no entries are recomputed.
        """
        return PseudoOrbit(self.system, self.lo - k, self.hi - k,
                           self.entries, self.extension)

    def reversed(self) -> "PseudoOrbit":
        """Time reversal: entry i of the result is entry -i of self.

        The result is a pseudo-orbit of the inverse system.
        """
        return PseudoOrbit(self.system.inverse(), -self.hi, -self.lo,
                           list(reversed(self.entries)), self.extension)

    def fmap(self) -> "PseudoOrbit":
        """Coordinate-wise image under the map: entry i becomes f(x_i)."""
        sysm = self.system
        return PseudoOrbit(sysm, self.lo, self.hi,
                           [sysm.fwd(p) for p in self.entries],
                           self.extension)

    def structurally_equal(self, other: "PseudoOrbit") -> bool:
        return (self.lo == other.lo and self.hi == other.hi
                and self.extension == other.extension
                and all(self.system.dist(a, b) == 0.0
                        for a, b in zip(self.entries, other.entries)))


# ---------------------------------------------------------------------------
# constructions
# ---------------------------------------------------------------------------

def apply_iter(sysm: MetricSystem, p, k: int):
    """f^k(p); the inverse map is used for negative k, k=0 returns p."""
    return sysm.apply_iter(p, k)


def orbit_map(sysm: MetricSystem, p, lo: int, hi: int) -> PseudoOrbit:
    """The true orbit of p on the window [lo, hi] (all jumps zero)."""
    if not lo <= 0 <= hi:
        raise ValueError("orbit window must contain index 0")
    fwd_part = [p]
    q = p
    for _ in range(hi):
        q = sysm.fwd(q)
        fwd_part.append(q)
    back_part = []
    q = p
    for _ in range(-lo):
        q = sysm.inv(q)
        back_part.append(q)
    back_part.reverse()
    return PseudoOrbit(sysm, lo, hi, back_part + fwd_part, ORBIT_CAPPED)


def connect(sysm: MetricSystem, p, q, lo: int, hi: int) -> PseudoOrbit:
    """Splice the past of p onto the future of q.

    Entry i is f^i(p) for i < 0 and f^i(q) for i >= 0; the only possibly
    nonzero jump is at index 0 and equals d(f(f^{-1}(p)), q) = d(p, q).
    """
    if lo > -1 or hi < 0:
        raise ValueError("connect window must contain indices -1 and 0")
    past = orbit_map(sysm, p, lo, 0)
    future = orbit_map(sysm, q, 0, hi)
    entries = past.entries[:-1] + future.entries
    return PseudoOrbit(sysm, lo, hi, entries, ORBIT_CAPPED)


def orbit_cap(x: PseudoOrbit, n: int) -> PseudoOrbit:
    """Keep entries |i| <= n and continue with true orbits outside.

    Restricting the window removes every jump at |i| > n; as n grows the
    capped orbits converge pointwise to x.
    """
    if x.lo > -n or x.hi < n:
        raise ValueError(f"window [{x.lo}, {x.hi}] does not cover [-{n}, {n}]")
    entries = [x.entry(i) for i in range(-n, n + 1)]
    return PseudoOrbit(x.system, -n, n, entries, ORBIT_CAPPED)


# ---------------------------------------------------------------------------
# jumps and discrepancies
# ---------------------------------------------------------------------------

def jumps(x: PseudoOrbit) -> dict:
    """Jump sizes d(f(x_{i-1}), x_i) on the effective window.

    Orbit-capped: indices lo+1..hi (jumps vanish identically outside).
    Periodic: indices lo..hi, where index lo measures the wrap jump
    d(f(x_hi), x_lo).  Memoized on the orbit.
    """
    cached = x._cache.get("__jumps__")
    if cached is not None:
        return cached
    sysm = x.system
    out = {}
    if x.extension == PERIODIC:
        prev = x.entries[-1]
        lo = x.lo
    else:
        prev = x.entries[0]
        lo = x.lo + 1
    for i in range(lo, x.hi + 1):
        cur = x.entry(i)
        out[i] = sysm.dist(sysm.fwd(prev), cur)
        prev = cur
    x._cache["__jumps__"] = out
    return out


def jump_at(x: PseudoOrbit, i: int) -> float:
    """Jump at an arbitrary index, honoring the extension rule: zero
    beyond an orbit cap, wrapped for periodic orbits."""
    js = jumps(x)
    if x.extension == PERIODIC:
        return js[x.lo + (i - x.lo) % x.span]
    return js.get(i, 0.0)


def discrepancy1(x: PseudoOrbit) -> float:
    """Sup of jumps; zero exactly on true orbits."""
    js = jumps(x)
    return max(js.values()) if js else 0.0


def block_jumps(x: PseudoOrbit, m: int, i: int, lip: float | None = None) -> float:
    """Blocked jump sum L^m * sum_{j=1..m} jump_{(i-1)m+j}."""
    if m < 1:
        raise ValueError("block length must be >= 1")
    L = x.system.lip_fwd if lip is None else lip
    js = jumps(x)
    total = sum(js.get((i - 1) * m + j, 0.0) for j in range(1, m + 1))
    return (L ** m) * total


def lipschitz_geom_sum(L: float, n: int) -> float:
    """1 + L + ... + L^{n-1}; satisfies L*sum(n) + 1 = sum(n+1)."""
    if n < 1:
        raise ValueError("need n >= 1")
    if L == 1.0:
        return float(n)
    return float(sum(L ** k for k in range(n)))


def tilde_dist_s(x: PseudoOrbit, y: PseudoOrbit, mu: float = 0.5,
                 half_width: int | None = None) -> BoundedValue:
    """Weighted-sum sequence metric sum_i mu^|i| d(x_i, y_i).

    Evaluated for |i| <= n where n covers both windows by default; the
    discarded part is at most diam * 2 mu^{n+1} / (1 - mu).
    """
    if not 0.0 < mu < 1.0:
        raise ValueError("weight must lie in (0, 1)")
    sysm = x.system
    if x is y or x.structurally_equal(y):
        return BoundedValue(0.0, 0.0)
    if half_width is None:
        half_width = max(abs(x.lo), abs(x.hi), abs(y.lo), abs(y.hi))
    n = half_width
    total = sysm.dist(x.entry(0), y.entry(0))
    w = 1.0
    for i in range(1, n + 1):
        w *= mu
        total += w * (sysm.dist(x.entry(i), y.entry(i))
                      + sysm.dist(x.entry(-i), y.entry(-i)))
    tail = sysm.diam * 2.0 * mu ** (n + 1) / (1.0 - mu)
    return BoundedValue(total, tail)


def tilde_dist_m(x: PseudoOrbit, y: PseudoOrbit, mu: float = 0.5,
                 half_width: int | None = None) -> BoundedValue:
    """Weighted-max variant max_i mu^|i| d(x_i, y_i) of the sequence metric."""
    if not 0.0 < mu < 1.0:
        raise ValueError("weight must lie in (0, 1)")
    sysm = x.system
    if x is y or x.structurally_equal(y):
        return BoundedValue(0.0, 0.0)
    if half_width is None:
        half_width = max(abs(x.lo), abs(x.hi), abs(y.lo), abs(y.hi))
    n = half_width
    best = sysm.dist(x.entry(0), y.entry(0))
    w = 1.0
    for i in range(1, n + 1):
        w *= mu
        best = max(best,
                   w * sysm.dist(x.entry(i), y.entry(i)),
                   w * sysm.dist(x.entry(-i), y.entry(-i)))
    tail = sysm.diam * mu ** (n + 1)
    return BoundedValue(best, tail)


def discrepancy2(x: PseudoOrbit, mu: float = 0.5,
                 eval_half_width: int | None = None,
                 shift_pad: int = 16) -> BoundedValue:
    """Second discrepancy: sup over shifts i of the sequence-metric
    distance between the shifted orbit and the true orbit of x_i.

    The sup is evaluated for shifts in [lo - pad, hi + pad]; shifts
    further out differ from true orbits only through window entries
    whose weight is below the reported tail.
    """
    sysm = x.system
    if eval_half_width is None:
        eval_half_width = min(max(x.span, 8), 64)
    n = eval_half_width
    per_shift_tail = sysm.diam * 2.0 * mu ** (n + 1) / (1.0 - mu)
    far_shift_bound = sysm.diam * 2.0 * mu ** (shift_pad + 1) / (1.0 - mu)
    best = 0.0
    for i in range(x.lo - shift_pad, x.hi + shift_pad + 1):
        center = x.entry(i)
        total = 0.0
        w = 1.0
        p_fwd = center
        p_back = center
        total += sysm.dist(x.entry(i), center)
        for j in range(1, n + 1):
            w *= mu
            p_fwd = sysm.fwd(p_fwd)
            p_back = sysm.inv(p_back)
            total += w * (sysm.dist(x.entry(i + j), p_fwd)
                          + sysm.dist(x.entry(i - j), p_back))
        best = max(best, total)
    return BoundedValue(best, max(per_shift_tail, far_shift_bound))


def local_discrepancy(x: PseudoOrbit, i: int, mu: float = 0.5,
                      eval_half_width: int | None = None) -> BoundedValue:
    """Sequence-metric distance between the i-shifted orbit and the true
    orbit of x_i — the locality measure used by self-tuning checks."""
    sysm = x.system
    if eval_half_width is None:
        eval_half_width = min(max(x.span, 8), 64)
    n = eval_half_width
    center = x.entry(i)
    total = 0.0
    w = 1.0
    p_fwd = center
    p_back = center
    for j in range(1, n + 1):
        w *= mu
        p_fwd = sysm.fwd(p_fwd)
        p_back = sysm.inv(p_back)
        total += w * (sysm.dist(x.entry(i + j), p_fwd)
                      + sysm.dist(x.entry(i - j), p_back))
    tail = sysm.diam * 2.0 * mu ** (n + 1) / (1.0 - mu)
    return BoundedValue(total, tail)
