"""Quaternion arithmetic in the extended real representation.

A quaternion q = w + x*i + y*j + z*k is stored as four doubles.  The unit
products follow the usual anti-commuting table (ij = k, ji = -k, ...).
The symplectic view q = z0 + z1*j with complex z0 = w + x*i and
z1 = y + z*i is a conversion, not a second storage.
"""

import math
import numbers
from dataclasses import dataclass


@dataclass(frozen=True)
class Quaternion:
    w: float = 0.0
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0

    def __add__(self, other):
        if isinstance(other, numbers.Real):
            other = Quaternion(float(other))
        return Quaternion(self.w + other.w, self.x + other.x,
                          self.y + other.y, self.z + other.z)

    __radd__ = __add__

    def __sub__(self, other):
        return self + (-other)

    def __neg__(self):
        return Quaternion(-self.w, -self.x, -self.y, -self.z)

    def __mul__(self, other):
        if isinstance(other, numbers.Real):
            s = float(other)
            return Quaternion(self.w * s, self.x * s, self.y * s, self.z * s)
        if not isinstance(other, Quaternion):
            return NotImplemented
        # Hamilton product
        a, b = self, other
        return Quaternion(
            a.w * b.w - a.x * b.x - a.y * b.y - a.z * b.z,
            a.w * b.x + a.x * b.w + a.y * b.z - a.z * b.y,
            a.w * b.y - a.x * b.z + a.y * b.w + a.z * b.x,
            a.w * b.z + a.x * b.y - a.y * b.x + a.z * b.w,
        )

    def __rmul__(self, other):
        if isinstance(other, numbers.Real):
            return self * other
        return NotImplemented

    def __truediv__(self, s):
        if isinstance(s, numbers.Real):
            return self * (1.0 / float(s))
        return NotImplemented

    def conjugate(self):
        return Quaternion(self.w, -self.x, -self.y, -self.z)

    def norm(self):
        return math.sqrt(self.w ** 2 + self.x ** 2 + self.y ** 2 + self.z ** 2)

    def components(self):
        return (self.w, self.x, self.y, self.z)

    def to_symplectic(self):
        return SymplecticPair(complex(self.w, self.x), complex(self.y, self.z))

    @classmethod
    def from_symplectic(cls, z0, z1):
        z0 = complex(z0)
        z1 = complex(z1)
        return cls(z0.real, z0.imag, z1.real, z1.imag)

    def __repr__(self):
        return "Quaternion(%r, %r, %r, %r)" % (self.w, self.x, self.y, self.z)


@dataclass(frozen=True)
class SymplecticPair:
    """Complex pair (z0, z1) with q = z0 + z1*j; round-trips exactly."""

    z0: complex
    z1: complex

    def to_quaternion(self):
        return Quaternion.from_symplectic(self.z0, self.z1)


ONE = Quaternion(1.0)
I = Quaternion(0.0, 1.0, 0.0, 0.0)
J = Quaternion(0.0, 0.0, 1.0, 0.0)
K = Quaternion(0.0, 0.0, 0.0, 1.0)

UNITS = {"1": ONE, "i": I, "j": J, "k": K}


def mul(a, b):
    """Hamilton product of two quaternions."""
    return a * b


def conjugate(q):
    return q.conjugate()


def norm(q):
    return q.norm()


def commutator(a, b):
    """[a, b] = ab - ba."""
    return a * b - b * a


def associator(a, b, c):
    """(a, b, c) = a(bc) - (ab)c; identically zero on the quaternions."""
    return a * (b * c) - (a * b) * c


def isclose(a, b, tol=1e-12):
    return all(abs(u - v) <= tol for u, v in zip(a.components(), b.components()))
