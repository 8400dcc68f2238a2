"""The shift on bi-infinite sequences as a dynamical system of its own.

The carrier is the set of sequences over a base space (a finite alphabet
with the discrete metric, or the circle), represented exactly as a
finite window plus a designated fill value outside it.  With weight
mu = 1/2 the sequence metric between two such points is a finite sum of
dyadic terms, so every identity in this module can be checked at zero
tolerance on a symbolic base.

The splice bracket keeps the first argument's strictly negative
coordinates and the second's nonnegative ones; the canonical shadowing
map extracts the zero coordinate of every entry of a pseudo-orbit of
the shift, and the blockwise recursion

    x_0 = alpha_0,  x_n = [shift(x_{n-1}), alpha_n],  y_n = shift^{-n}(x_n)

reconstructs it one coordinate per stage: (y_n)_i = (alpha_i)_0 for
0 <= i <= n.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from ..core import MetricSystem, PseudoOrbit


class FiniteAlphabet:
    """Base space {0, .., k-1} with the discrete metric."""

    def __init__(self, k: int):
        if k < 1:
            raise ValueError("alphabet needs at least one symbol")
        self.k = k
        self.diam = 1.0 if k > 1 else 0.0
        self.fill = 0

    def dist(self, a, b):
        return 0.0 if a == b else 1.0

    def sample(self, rng):
        return rng.randrange(self.k)

    def nearby(self, a, magnitude, rng):
        if magnitude >= 1.0 and self.k > 1:
            return rng.randrange(self.k)
        return a

    def to_jsonable(self, a):
        return a

    def from_jsonable(self, obj):
        return int(obj)


class CircleBase:
    """Base space R mod 1 with the arc metric."""

    diam = 0.5
    fill = 0.0

    def dist(self, a, b):
        d = abs(a - b) % 1.0
        return min(d, 1.0 - d)

    def sample(self, rng):
        return rng.random()

    def nearby(self, a, magnitude, rng):
        return (a + magnitude * (2.0 * rng.random() - 1.0)) % 1.0

    def to_jsonable(self, a):
        return a

    def from_jsonable(self, obj):
        return float(obj)


@dataclass(frozen=True)
class SeqPoint:
    """A sequence equal to ``fill`` outside the window sym[lo..hi]."""

    lo: int
    sym: tuple
    fill: object

    @property
    def hi(self) -> int:
        return self.lo + len(self.sym) - 1

    def at(self, i: int):
        if self.lo <= i <= self.hi:
            return self.sym[i - self.lo]
        return self.fill

    def shifted(self, k: int) -> "SeqPoint":
        """Index shift: shifted(k) at i equals self at i + k."""
        return SeqPoint(self.lo - k, self.sym, self.fill)

    def reversed_indices(self) -> "SeqPoint":
        return SeqPoint(-self.hi, tuple(reversed(self.sym)), self.fill)

    def trimmed(self) -> "SeqPoint":
        """Drop fill values at both ends (canonical representative)."""
        lo, hi = self.lo, self.hi
        sym = self.sym
        a = 0
        while a < len(sym) - 1 and sym[a] == self.fill:
            a += 1
        b = len(sym)
        while b > a + 1 and sym[b - 1] == self.fill:
            b -= 1
        return SeqPoint(lo + a, sym[a:b], self.fill)


class SequenceSystem(MetricSystem):
    """The shift acting on windowed sequences over a base space."""

    def __init__(self, base, mu: float = 0.5, window_half_width: int = 24,
                 tol: float = 1e-12, system_id: str = "shift"):
        if not 0.0 < mu < 1.0:
            raise ValueError("weight must lie in (0, 1)")
        self.base = base
        self.mu = float(mu)
        self.W = int(window_half_width)
        self.system_id = system_id
        diam = base.diam * (1.0 + mu) / (1.0 - mu)
        super().__init__(lip_fwd=1.0 / mu, lip_inv=1.0 / mu, diam=diam,
                         tol=tol)

    # -- map and metric ----------------------------------------------------

    def fwd(self, x: SeqPoint) -> SeqPoint:
        return x.shifted(1)

    def inv(self, x: SeqPoint) -> SeqPoint:
        return x.shifted(-1)

    def dist(self, x: SeqPoint, y: SeqPoint) -> float:
        lo = min(x.lo, y.lo)
        hi = max(x.hi, y.hi)
        if x.fill != y.fill:
            # fills differ: beyond the windows the distance is constant
            return math.inf
        total = 0.0
        for i in range(lo, hi + 1):
            d = self.base.dist(x.at(i), y.at(i))
            if d:
                total += self.mu ** abs(i) * d
        return total

    def dist_max(self, x: SeqPoint, y: SeqPoint) -> float:
        """Weighted-max metric on the same representation."""
        lo = min(x.lo, y.lo)
        hi = max(x.hi, y.hi)
        best = 0.0
        for i in range(lo, hi + 1):
            d = self.base.dist(x.at(i), y.at(i))
            if d:
                best = max(best, self.mu ** abs(i) * d)
        return best

    def local_stretch(self, p_from, p_to, inverse):
        # shifting a windowed sequence is exact: no rounding to amplify
        return 1.0

    def iterate_amplification(self, k):
        return 1.0

    def bracket_eval(self, x: SeqPoint, y: SeqPoint) -> SeqPoint:
        """Splice: first argument's coordinates for i <= -1, second's
        for i >= 0."""
        if x.fill != y.fill:
            raise ValueError("cannot splice sequences with different fills")
        lo = min(x.lo, y.lo, -1)
        hi = max(x.hi, y.hi, 0)
        sym = tuple(x.at(i) if i <= -1 else y.at(i)
                    for i in range(lo, hi + 1))
        return SeqPoint(lo, sym, x.fill).trimmed()

    # -- hooks ---------------------------------------------------------------

    def sample_points(self, rng, count):
        out = []
        for _ in range(count):
            sym = tuple(self.base.sample(rng) for _ in range(2 * self.W + 1))
            out.append(SeqPoint(-self.W, sym, self.base.fill))
        return out

    def perturb(self, x: SeqPoint, magnitude: float, rng):
        """Change far coordinates: pick the smallest |j| whose weight
        allows a change within the magnitude and alter one side."""
        if magnitude <= 0.0:
            return x
        lo = min(x.lo, -self.W)
        hi = max(x.hi, self.W)
        sym = list(x.at(i) for i in range(lo, hi + 1))
        budget = magnitude
        for i in sorted(range(lo, hi + 1), key=abs, reverse=True):
            w = self.mu ** abs(i)
            if w * self.base.diam <= budget:
                old = sym[i - lo]
                new = self.base.nearby(old, 1.0, rng)
                sym[i - lo] = new
                budget -= w * self.base.dist(old, new)
            if budget <= 0:
                break
        return SeqPoint(lo, tuple(sym), x.fill).trimmed()

    def point_to_jsonable(self, x: SeqPoint):
        return {"lo": x.lo,
                "sym": [self.base.to_jsonable(s) for s in x.sym]}

    def point_from_jsonable(self, obj):
        return SeqPoint(int(obj["lo"]),
                        tuple(self.base.from_jsonable(s) for s in obj["sym"]),
                        self.base.fill)


def make_shift_system(k: int | str = 3, mu: float = 0.5,
                      window_half_width: int = 24) -> SequenceSystem:
    if k == "circle":
        return SequenceSystem(CircleBase(), mu, window_half_width,
                              system_id="shift-circle")
    return SequenceSystem(FiniteAlphabet(int(k)), mu, window_half_width,
                          system_id=f"shift-{k}")


def make_shift_bracket(sysm: SequenceSystem):
    """Splice bracket; exact contraction at rate mu with constant 1."""
    from ..brackets import Bracket
    return Bracket(
        name="shift-splice",
        domain_radius=sysm.diam,
        eval=sysm.bracket_eval,
        declared_c=1.0,
        declared_mu=sysm.mu,
    )


# ---------------------------------------------------------------------------
# canonical shadowing map and the blockwise reconstruction
# ---------------------------------------------------------------------------

def shift_canonical_shadow(alpha: PseudoOrbit, pad: int | None = None) -> SeqPoint:
    """Extract the zero coordinate of every entry: the canonical
    shadowing map of the shift, 1-Lipschitz for the sequence metric.

    The output window extends beyond the orbit window by the span of the
    stored entries (reachable exactly through the extension rule), so
    that comparisons against shifted entries see real coordinates rather
    than fill.
    """
    sysm = alpha.system
    if pad is None:
        pad = max(max(abs(e.lo), abs(e.hi)) for e in alpha.entries)
    sym = tuple(alpha.entry(i).at(0)
                for i in range(alpha.lo - pad, alpha.hi + pad + 1))
    return SeqPoint(alpha.lo - pad, sym, sysm.base.fill).trimmed()


def shift_mutual_induction(alpha: PseudoOrbit, n: int):
    """Run the blockwise recursion and return [y_0, .., y_n].

    Asserts the reconstruction identity (y_k)_i = (alpha_i)_0 for
    0 <= i <= k at every stage; exact on symbolic bases.
    """
    if alpha.hi < n or alpha.lo > 0:
        raise ValueError("window must cover indices 0..n")
    sysm: SequenceSystem = alpha.system
    x = alpha.entry(0)
    ys = [x]
    for k in range(1, n + 1):
        x = sysm.bracket_eval(x.shifted(1), alpha.entry(k))
        y = x.shifted(-k)
        for i in range(0, k + 1):
            want = alpha.entry(i).at(0)
            got = y.at(i)
            if sysm.base.dist(want, got) != 0.0:
                raise AssertionError(
                    f"reconstruction identity fails at stage {k}, index {i}")
        ys.append(y)
    return ys


def shift_limit_assembly(alpha: PseudoOrbit) -> SeqPoint:
    """Assemble the two one-sided reconstructions through the bracket.

    The forward recursion yields z+ with coordinates (alpha_i)_0 for
    i >= 0.  Conjugating by the index reversal turns the inverse-shift
    run into the same forward recursion on the fully reversed orbit
    (outer index and entries both flipped); flipping the result back
    yields z- with coordinates (alpha_i)_0 for i <= 0.  The splice of
    the two equals the canonical shadow on the evaluated window.
    """
    sysm: SequenceSystem = alpha.system
    n_plus = alpha.hi
    x = alpha.entry(0)
    for k in range(1, n_plus + 1):
        x = sysm.bracket_eval(x.shifted(1), alpha.entry(k))
    z_plus = x.shifted(-n_plus)
    n_minus = -alpha.lo
    w = alpha.entry(0).reversed_indices()
    for k in range(1, n_minus + 1):
        w = sysm.bracket_eval(w.shifted(1),
                              alpha.entry(-k).reversed_indices())
    z_minus = w.shifted(-n_minus).reversed_indices()
    return sysm.bracket_eval(z_minus, z_plus)


def seq_equal_on_window(sysm: SequenceSystem, a: SeqPoint, b: SeqPoint,
                        lo: int, hi: int) -> bool:
    return all(sysm.base.dist(a.at(i), b.at(i)) == 0.0
               for i in range(lo, hi + 1))


def remark_noncommuting_witness(sysm: SequenceSystem):
    """For a base with two points, a pseudo-orbit of the shift on which
    the coordinate-wise-shift diagram cannot commute: make the inner
    coordinate (alpha_0)_1 differ from (alpha_1)_0."""
    fill = sysm.base.fill
    if isinstance(sysm.base, FiniteAlphabet):
        if sysm.base.k < 2:
            raise ValueError("need at least two symbols")
        other = 1
    else:
        other = 0.5
    a = SeqPoint(0, (fill, other), fill)   # (alpha_0)_1 = other
    b = SeqPoint(0, (fill, fill), fill)    # (alpha_1)_0 = fill != other
    return PseudoOrbit(sysm, 0, 1, [a, b], extension="orbit-capped")
