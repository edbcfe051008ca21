"""Minkowski four-vectors.

Metric signature is fixed to (+, -, -, -) everywhere in this package:
u.v = u^0 v^0 - u^1 v^1 - u^2 v^2 - u^3 v^3.  Components are stored
contravariantly as (t, x1, x2, x3).
"""

import math
import numbers
from dataclasses import dataclass

METRIC_SIGNS = (1.0, -1.0, -1.0, -1.0)


@dataclass(frozen=True)
class FourVector:
    t: float = 0.0
    x1: float = 0.0
    x2: float = 0.0
    x3: float = 0.0

    def __add__(self, other):
        return FourVector(self.t + other.t, self.x1 + other.x1,
                          self.x2 + other.x2, self.x3 + other.x3)

    def __sub__(self, other):
        return FourVector(self.t - other.t, self.x1 - other.x1,
                          self.x2 - other.x2, self.x3 - other.x3)

    def __neg__(self):
        return FourVector(-self.t, -self.x1, -self.x2, -self.x3)

    def __mul__(self, s):
        if isinstance(s, numbers.Real):
            s = float(s)
            return FourVector(self.t * s, self.x1 * s, self.x2 * s, self.x3 * s)
        return NotImplemented

    __rmul__ = __mul__

    def components(self):
        return (self.t, self.x1, self.x2, self.x3)

    def spatial(self):
        return (self.x1, self.x2, self.x3)

    def shifted(self, axis, h):
        c = list(self.components())
        c[axis] += h
        return FourVector(*c)

    def is_finite(self):
        return all(math.isfinite(c) for c in self.components())

    def is_zero(self):
        return self.t == 0.0 and self.x1 == 0.0 and self.x2 == 0.0 and self.x3 == 0.0


def minkowski_dot(u, v):
    """u^0 v^0 - u^1 v^1 - u^2 v^2 - u^3 v^3."""
    return u.t * v.t - u.x1 * v.x1 - u.x2 * v.x2 - u.x3 * v.x3


def spatial_dot(u, v):
    """Euclidean dot of the spatial parts (3-vector dot, no metric signs)."""
    return u.x1 * v.x1 + u.x2 * v.x2 + u.x3 * v.x3
