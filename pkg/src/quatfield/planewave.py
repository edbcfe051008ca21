"""Classical plane-wave solutions of the quaternionic Klein-Gordon equation.

A solution is Phi(x) = cos(T(x)) phi0(x) + sin(T(x)) phi1(x) j, where
T(x) = theta.x + Theta0 is a linear real phase and
phi_alpha(x) = exp[i s_alpha k_alpha.x] are unit complex plane waves.
For (box + m^2) Phi = 0 the wave vectors must satisfy

    k_alpha.k_alpha + theta.theta = m^2     (mass shell, both alpha)
    theta.k_alpha = 0                       (orthogonality, both alpha)

with the (+,-,-,-) metric.  The four effective momenta p = k_alpha +/- theta
are then on shell, p.p = m^2.  Everything here checks those statements
numerically: constraint residuals, a constructive wave-vector solver, and
finite-difference residuals of the field equation and of its two complex
component equations.
"""

import cmath
import json
import math
from dataclasses import dataclass

import numpy as np

from .minkowski import METRIC_SIGNS, FourVector, minkowski_dot, spatial_dot
from .quaternion import Quaternion

DEFAULT_TOL = 1e-12

# effective-momentum index map: a=1 (alpha=0,+theta), a=2 (alpha=0,-theta),
# a=3 (alpha=1,+theta), a=4 (alpha=1,-theta)
MOMENTUM_SIGNS = (+1, -1, +1, -1)


class ConstraintViolation(ValueError):
    """Plane-wave data fails the mass-shell or orthogonality constraints."""


class NoRealSolution(ValueError):
    """No real k^0 completes the requested spatial wave vector."""


class DegenerateTheta(ValueError):
    """theta is null; the linear-plus-quadratic system for k is singular."""


@dataclass(frozen=True)
class PlaneWaveSpec:
    m: float
    theta: FourVector
    Theta0: float
    k0: FourVector
    k1: FourVector
    s0: int = 1
    s1: int = 1

    def to_dict(self):
        return {
            "m": self.m,
            "theta": list(self.theta.components()),
            "Theta0": self.Theta0,
            "k0": list(self.k0.components()),
            "k1": list(self.k1.components()),
            "s0": self.s0,
            "s1": self.s1,
        }

    @classmethod
    def from_dict(cls, d):
        return cls(
            m=float(d["m"]),
            theta=FourVector(*[float(v) for v in d["theta"]]),
            Theta0=float(d.get("Theta0", 0.0)),
            k0=FourVector(*[float(v) for v in d["k0"]]),
            k1=FourVector(*[float(v) for v in d["k1"]]),
            s0=int(d.get("s0", 1)),
            s1=int(d.get("s1", 1)),
        )

    def to_json(self, path=None):
        text = json.dumps(self.to_dict(), indent=2, sort_keys=True)
        if path is not None:
            with open(path, "w") as fh:
                fh.write(text + "\n")
        return text

    @classmethod
    def from_json(cls, source):
        if hasattr(source, "read"):
            return cls.from_dict(json.load(source))
        text = str(source)
        if text.lstrip().startswith("{"):
            return cls.from_dict(json.loads(text))
        with open(text) as fh:
            return cls.from_dict(json.load(fh))


@dataclass
class ConstraintReport:
    mass_shell_residuals: tuple      # |k_a.k_a + theta.theta - m^2|, a = 0, 1
    orthogonality_residuals: tuple   # |theta.k_a|, a = 0, 1
    on_shell_residuals: tuple        # |p_a.p_a - m^2|, a = 1..4
    effective_momenta: tuple         # p_1..p_4
    tolerance: float
    passed: bool

    def worst(self):
        return max(self.mass_shell_residuals + self.orthogonality_residuals
                   + self.on_shell_residuals)

    def to_dict(self):
        return {
            "passed": self.passed,
            "tolerance": self.tolerance,
            "mass_shell_residuals": list(self.mass_shell_residuals),
            "orthogonality_residuals": list(self.orthogonality_residuals),
            "on_shell_residuals": list(self.on_shell_residuals),
            "effective_momenta": [list(p.components())
                                  for p in self.effective_momenta],
        }


def _check_finite(spec):
    vals = [spec.m, spec.Theta0]
    for v in (spec.theta, spec.k0, spec.k1):
        vals.extend(v.components())
    if not all(math.isfinite(v) for v in vals):
        raise ConstraintViolation("non-finite entries in plane-wave data")
    if spec.m <= 0:
        raise ConstraintViolation("mass must be positive, got %r" % spec.m)
    if spec.s0 not in (-1, 1) or spec.s1 not in (-1, 1):
        raise ConstraintViolation("sign choices must be +1 or -1")


def _raw_effective_momenta(spec):
    kk = (spec.k0, spec.k0, spec.k1, spec.k1)
    return tuple(k + s * spec.theta for k, s in zip(kk, MOMENTUM_SIGNS))


def validate_constraints(spec, tol=DEFAULT_TOL):
    """Residuals of the mass-shell and orthogonality constraints.

    Passes iff every residual is at most tol * max(1, m^2).
    """
    _check_finite(spec)
    m2 = spec.m * spec.m
    tt = minkowski_dot(spec.theta, spec.theta)
    mass_shell = tuple(abs(minkowski_dot(k, k) + tt - m2)
                       for k in (spec.k0, spec.k1))
    ortho = tuple(abs(minkowski_dot(spec.theta, k))
                  for k in (spec.k0, spec.k1))
    momenta = _raw_effective_momenta(spec)
    on_shell = tuple(abs(minkowski_dot(p, p) - m2) for p in momenta)
    tol_abs = tol * max(1.0, m2)
    passed = all(r <= tol_abs for r in mass_shell + ortho)
    return ConstraintReport(mass_shell, ortho, on_shell, momenta, tol_abs, passed)


def effective_momenta(spec, tol=DEFAULT_TOL):
    """The four on-shell momenta (k0+theta, k0-theta, k1+theta, k1-theta)."""
    report = validate_constraints(spec, tol=tol)
    if not report.passed:
        raise ConstraintViolation(
            "constraints violated (worst residual %.3e > %.3e)"
            % (report.worst(), report.tolerance))
    return report.effective_momenta


def solve_k(m, theta, direction, magnitude, tol=DEFAULT_TOL):
    """Complete a spatial wave vector to a k satisfying both constraints.

    direction is a spatial 3-vector (normalized here), magnitude >= 0 its
    length; the temporal component is solved from k.k = m^2 - theta.theta
    and theta.k = 0.  Raises NoRealSolution when no real k^0 exists for the
    requested spatial part, DegenerateTheta when theta is null and the
    system loses rank.
    """
    if not (math.isfinite(m) and m > 0):
        raise ValueError("mass must be positive and finite")
    if magnitude < 0:
        raise ValueError("magnitude must be >= 0")
    dn = math.sqrt(sum(c * c for c in direction))
    if dn == 0.0:
        if magnitude != 0.0:
            raise ValueError("direction must be nonzero for magnitude > 0")
        kvec = (0.0, 0.0, 0.0)
    else:
        kvec = tuple(magnitude * c / dn for c in direction)

    m2 = m * m
    tol_abs = tol * max(1.0, m2)
    tt = minkowski_dot(theta, theta)
    target = m2 - tt
    kspace = FourVector(0.0, *kvec)

    if theta.is_zero() or theta.t == 0.0:
        if not theta.is_zero():
            # purely spatial theta: orthogonality reads theta_vec . k_vec = 0
            if abs(spatial_dot(theta, kspace)) > tol_abs:
                raise NoRealSolution(
                    "spatial part is not orthogonal to theta")
        k0sq = target + magnitude * magnitude
        if k0sq < -tol_abs:
            raise NoRealSolution(
                "(k^0)^2 = %.6g < 0 for the requested spatial part" % k0sq)
        return FourVector(math.sqrt(max(k0sq, 0.0)), *kvec)

    # theta.t != 0: orthogonality pins k^0, the mass shell must then agree
    kt = spatial_dot(theta, kspace) / theta.t
    k = FourVector(kt, *kvec)
    residual = abs(minkowski_dot(k, k) - target)
    if residual > tol_abs:
        if abs(tt) <= tol_abs:
            raise DegenerateTheta(
                "theta is null; orthogonal k cannot reach the mass shell")
        raise NoRealSolution(
            "no real k^0 for the requested spatial part "
            "(mass-shell residual %.6g)" % residual)
    return k


def theta_phase(spec, x):
    """T(x) = theta.x + Theta0."""
    return minkowski_dot(spec.theta, x) + spec.Theta0


def _wave(spec, x):
    # ansatz evaluation without constraint validation (residual probes
    # deliberately evaluate broken data)
    th = theta_phase(spec, x)
    ph0 = cmath.exp(1j * spec.s0 * minkowski_dot(spec.k0, x))
    ph1 = cmath.exp(1j * spec.s1 * minkowski_dot(spec.k1, x))
    return Quaternion.from_symplectic(math.cos(th) * ph0, math.sin(th) * ph1)


def evaluate_wave(spec, x, tol=DEFAULT_TOL):
    """Phi(x) as a quaternion; |Phi(x)| = 1 for every x of a valid spec."""
    report = validate_constraints(spec, tol=tol)
    if not report.passed:
        raise ConstraintViolation(
            "constraints violated (worst residual %.3e)" % report.worst())
    return _wave(spec, x)


def kg_residual(spec, x, h):
    """|(box + m^2) Phi| at x with 4D central second differences of step h.

    O(h^2) for a valid spec; converges to the constraint violation times
    |Phi| when the mass-shell constraint is broken.
    """
    if h <= 0:
        raise ValueError("step h must be positive")
    center = _wave(spec, x)
    box = Quaternion()
    for axis, sign in enumerate(METRIC_SIGNS):
        plus = _wave(spec, x.shifted(axis, h))
        minus = _wave(spec, x.shifted(axis, -h))
        box = box + sign * ((plus - 2.0 * center + minus) / (h * h))
    return (box + (spec.m * spec.m) * center).norm()


def _component(spec, alpha, x):
    k = spec.k0 if alpha == 0 else spec.k1
    s = spec.s0 if alpha == 0 else spec.s1
    return cmath.exp(1j * s * minkowski_dot(k, x))


def component_residuals(spec, x, h):
    """Finite-difference residuals of the two component equations.

    Returns (eom_0, eom_1, cons_0, cons_1): the equation-of-motion residual
    |(box + m^2 - dT.dT) phi_alpha| and the constraint residual
    |d_mu(d^mu T phi_alpha^2)| for alpha = 0, 1, all with central
    differences of step h (O(h^2) for a valid spec).
    """
    if h <= 0:
        raise ValueError("step h must be positive")

    def grad_up_theta(y):
        # contravariant gradient d^mu T by central differences
        return [sign * (theta_phase(spec, y.shifted(ax, h))
                        - theta_phase(spec, y.shifted(ax, -h))) / (2.0 * h)
                for ax, sign in enumerate(METRIC_SIGNS)]

    dth = grad_up_theta(x)
    # dT.dT = g_{mu nu} d^mu T d^nu T: signs again on the squares
    dth2 = sum(sign * d * d for sign, d in zip(METRIC_SIGNS, dth))

    eom = []
    cons = []
    for alpha in (0, 1):
        phi_c = _component(spec, alpha, x)
        box = 0.0 + 0.0j
        for axis, sign in enumerate(METRIC_SIGNS):
            plus = _component(spec, alpha, x.shifted(axis, h))
            minus = _component(spec, alpha, x.shifted(axis, -h))
            box += sign * (plus - 2.0 * phi_c + minus) / (h * h)
        eom.append(abs(box + (spec.m * spec.m - dth2) * phi_c))

        def current(y, alpha=alpha):
            # g^mu(y) = d^mu T(y) * phi_alpha(y)^2
            g = grad_up_theta(y)
            ph2 = _component(spec, alpha, y) ** 2
            return [gi * ph2 for gi in g]

        div = 0.0 + 0.0j
        for axis in range(4):
            plus = current(x.shifted(axis, h))[axis]
            minus = current(x.shifted(axis, -h))[axis]
            div += (plus - minus) / (2.0 * h)
        cons.append(abs(div))

    return (eom[0], eom[1], cons[0], cons[1])


def _unit_perp(rng, normal):
    # random unit 3-vector orthogonal to `normal` (normal may be zero)
    n = np.asarray(normal, dtype=float)
    for _ in range(64):
        v = rng.normal(size=3)
        if np.linalg.norm(n) > 0:
            v -= n * (v @ n) / (n @ n)
        ln = np.linalg.norm(v)
        if ln > 1e-8:
            return tuple(v / ln)
    raise RuntimeError("failed to draw a perpendicular direction")


def random_valid_spec(rng, theta_scale=0.6, boosted=False):
    """Draw a spec that satisfies the constraints by construction.

    The default family uses a purely spatial theta with both wave vectors
    solved from directions orthogonal to it.  With boosted=True theta gets
    a temporal component and the spatial magnitude is solved from the
    consistency condition, which produces wave vectors with full component
    overlap (useful for convergence probes that need generic data).
    """
    m = float(rng.uniform(0.5, 2.0))
    if not boosted:
        tvec = rng.normal(size=3)
        tvec *= rng.uniform(0.2, theta_scale) * m / np.linalg.norm(tvec)
        theta = FourVector(0.0, *tvec)
        ks = []
        for _ in range(2):
            direction = _unit_perp(rng, tvec)
            magnitude = float(rng.uniform(0.0, 1.5) * m)
            ks.append(solve_k(m, theta, direction, magnitude))
    else:
        for _ in range(256):
            tvec = rng.normal(size=3)
            tvec *= rng.uniform(0.3, theta_scale) * m / np.linalg.norm(tvec)
            tt_t = float(rng.uniform(0.05, 0.25) * m)
            theta = FourVector(tt_t, *tvec)
            target = m * m - minkowski_dot(theta, theta)
            ks = []
            for _ in range(2):
                direction = rng.normal(size=3)
                direction /= np.linalg.norm(direction)
                u = float(np.asarray(tvec) @ direction) / tt_t
                denom = u * u - 1.0
                if denom <= 1e-3 or target / denom <= 1e-6:
                    break
                magnitude = math.sqrt(target / denom)
                ks.append(solve_k(m, theta, tuple(direction), magnitude))
            if len(ks) == 2:
                break
        else:
            raise RuntimeError("failed to draw a boosted spec")
    return PlaneWaveSpec(
        m=m, theta=theta, Theta0=float(rng.uniform(0.0, 2.0 * math.pi)),
        k0=ks[0], k1=ks[1],
        s0=int(rng.choice([-1, 1])), s1=int(rng.choice([-1, 1])))
