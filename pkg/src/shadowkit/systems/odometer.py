"""Add-one-with-carry on base-2 digit vectors with the ultrametric.

Points are tuples of D bits, digit 0 least significant; the distance is
2^{-k} where k is the first differing digit.  Adding one is an isometry:
equal low digits produce equal carries, so the first difference never
moves.  Together with the ultrametric triangle inequality this gives
exact-hit shadowing: the 0th entry of any pseudo-orbit shadows it with
error at most the largest jump.

The carrier is a finite 2^{-D}-net of the 2-adic integers, which keeps
every check exhaustive at desk scale.
"""

from __future__ import annotations

from ..core import MetricSystem


class OdometerSystem(MetricSystem):
    system_id = "odometer"

    def __init__(self, digits: int = 8):
        if digits < 1:
            raise ValueError("need at least one digit")
        self.D = int(digits)
        super().__init__(lip_fwd=1.0, lip_inv=1.0, diam=1.0, tol=0.0)
        self.system_id = f"odometer-{self.D}"

    def fwd(self, p):
        out = list(p)
        for i in range(self.D):
            if out[i] == 0:
                out[i] = 1
                break
            out[i] = 0
        return tuple(out)

    def inv(self, p):
        out = list(p)
        for i in range(self.D):
            if out[i] == 1:
                out[i] = 0
                break
            out[i] = 1
        return tuple(out)

    def dist(self, p, q):
        for k in range(self.D):
            if p[k] != q[k]:
                return 2.0 ** (-k)
        return 0.0

    # -- hooks ---------------------------------------------------------------

    def sample_points(self, rng, count):
        return [tuple(rng.randrange(2) for _ in range(self.D))
                for _ in range(count)]

    def perturb(self, p, magnitude, rng):
        """Randomize digits whose weight is within the magnitude: the
        result stays within 2^{-j} of p for the smallest allowed j."""
        if magnitude <= 0.0:
            return p
        j = 0
        while 2.0 ** (-j) > magnitude and j < self.D:
            j += 1
        if j >= self.D:
            return p
        out = list(p)
        for i in range(j, self.D):
            out[i] = rng.randrange(2)
        return tuple(out)

    def point_to_jsonable(self, p):
        return list(p)

    def point_from_jsonable(self, obj):
        if len(obj) != self.D:
            raise ValueError(f"expected {self.D} digits, got {len(obj)}")
        return tuple(int(b) for b in obj)


def odometer_projection_shadow(x) -> tuple:
    """The 0th entry: an exact-hit shadow with error at most the largest
    jump, by the isometry plus the ultrametric triangle inequality."""
    return x.entry(0)
