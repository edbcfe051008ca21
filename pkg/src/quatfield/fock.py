"""Truncated bosonic Fock spaces over finite mode tables.

Box normalization throughout: continuum momentum integrals become finite
sums over the mode table and Dirac deltas become Kronecker deltas.  The
basis enumerates occupation tuples lexicographically with every occupation
capped at n_max, so dim = (n_max + 1) ** n_modes and the vacuum sits at
index 0.  Ladder operators are sparse matrices; creation is the exact
conjugate transpose of annihilation.  Truncation makes [a, a+] differ from
the identity on top-occupation states (eigenvalue -n_max there); checks
restrict to the sub-cutoff subspace and report that defect separately.
"""

import itertools
import json
import math
from dataclasses import dataclass

import numpy as np
from scipy import sparse

from .minkowski import FourVector, minkowski_dot
from .planewave import DEFAULT_TOL, PlaneWaveSpec, effective_momenta

FOUR_COMPONENT = "four"
TWO_COMPONENT = "two"

PARTICLE = "a"
ANTIPARTICLE = "b"

MAX_DIMENSION = 10 ** 6


class DimensionOverflow(ValueError):
    pass


class UnknownMode(ValueError):
    pass


class SchemeMismatch(ValueError):
    pass


class CutoffExceeded(ValueError):
    pass


@dataclass(frozen=True)
class Mode:
    index: int          # component index: 1..4 (four) or 1..2 (two)
    species: str        # "a" particle, "b" antiparticle
    momentum: FourVector

    @property
    def energy(self):
        return abs(self.momentum.t)

    def key(self):
        return (self.index, self.species, self.momentum.components())


@dataclass(frozen=True)
class ModeTable:
    scheme: str
    mass: float
    modes: tuple

    def __post_init__(self):
        if self.scheme not in (FOUR_COMPONENT, TWO_COMPONENT):
            raise ValueError("unknown scheme %r" % self.scheme)
        top = 4 if self.scheme == FOUR_COMPONENT else 2
        seen = set()
        m2 = self.mass * self.mass
        tol_abs = DEFAULT_TOL * max(1.0, m2)
        for mode in self.modes:
            if not 1 <= mode.index <= top:
                raise ValueError("component index %d out of range for "
                                 "scheme %r" % (mode.index, self.scheme))
            if mode.species not in (PARTICLE, ANTIPARTICLE):
                raise ValueError("unknown species %r" % mode.species)
            if mode.key() in seen:
                raise ValueError("duplicate mode %r" % (mode.key(),))
            seen.add(mode.key())
            p = mode.momentum
            if abs(minkowski_dot(p, p) - m2) > tol_abs:
                raise ValueError(
                    "mode momentum %r is off shell for m=%g"
                    % (p.components(), self.mass))

    def __len__(self):
        return len(self.modes)

    def with_index(self, index, species=None):
        out = [m for m in self.modes if m.index == index
               and (species is None or m.species == species)]
        return tuple(out)

    def to_dict(self):
        return {
            "scheme": self.scheme,
            "mass": self.mass,
            "modes": [{"index": m.index, "species": m.species,
                       "p": list(m.momentum.components())}
                      for m in self.modes],
        }

    @classmethod
    def from_dict(cls, d):
        modes = tuple(Mode(int(e["index"]), str(e["species"]),
                           FourVector(*[float(v) for v in e["p"]]))
                      for e in d["modes"])
        return cls(scheme=str(d["scheme"]), mass=float(d["mass"]), modes=modes)

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


def four_component_table(spec: PlaneWaveSpec, antiparticles=True):
    """Mode table with the four effective momenta of a valid plane wave."""
    momenta = effective_momenta(spec)
    modes = []
    for a, p in enumerate(momenta, start=1):
        modes.append(Mode(a, PARTICLE, p))
        if antiparticles:
            modes.append(Mode(a, ANTIPARTICLE, p))
    return ModeTable(FOUR_COMPONENT, spec.m, tuple(modes))


def two_component_table(mass, k1, k2, antiparticles=True):
    """Mode table for the constant-phase scheme (indices 1 and 2)."""
    modes = []
    for alpha, k in ((1, k1), (2, k2)):
        modes.append(Mode(alpha, PARTICLE, k))
        if antiparticles:
            modes.append(Mode(alpha, ANTIPARTICLE, k))
    return ModeTable(TWO_COMPONENT, mass, tuple(modes))


def reflection_symmetric(table):
    """Close the table under spatial reflection p_vec -> -p_vec.

    The discrete stand-in for the reflection symmetry of the continuum
    momentum measure; separated-point field commutators vanish only on
    tables closed this way.
    """
    modes = list(table.modes)
    keys = {m.key() for m in modes}
    for m in table.modes:
        p = m.momentum
        refl = Mode(m.index, m.species, FourVector(p.t, -p.x1, -p.x2, -p.x3))
        if refl.key() not in keys:
            modes.append(refl)
            keys.add(refl.key())
    return ModeTable(table.scheme, table.mass, tuple(modes))


class FockSpace:
    """Occupation-number basis over a mode table, capped at n_max per mode.

    Basis order is lexicographic in the occupation tuples, so the vacuum
    (0, ..., 0) is index 0 and the layout is deterministic.
    """

    def __init__(self, modes: ModeTable, n_max: int, max_dim=MAX_DIMENSION):
        if n_max < 1:
            raise ValueError("n_max must be >= 1")
        n_modes = len(modes)
        if n_modes == 0:
            raise ValueError("mode table is empty")
        dim = (n_max + 1) ** n_modes
        if dim > max_dim:
            raise DimensionOverflow(
                "dimension %d exceeds cap %d" % (dim, max_dim))
        self.modes = modes
        self.n_max = n_max
        self.n_modes = n_modes
        self.dim = dim
        # mixed-radix strides for lexicographic order: occupation of the
        # first listed mode is the most significant digit
        self._strides = [(n_max + 1) ** (n_modes - 1 - j)
                         for j in range(n_modes)]
        self.occupations = np.array(
            list(itertools.product(range(n_max + 1), repeat=n_modes)),
            dtype=np.int64)
        self._position = {m.key(): j for j, m in enumerate(modes.modes)}

    def mode_position(self, mode):
        if isinstance(mode, (int, np.integer)):
            if not 0 <= mode < self.n_modes:
                raise UnknownMode("mode position %d out of range" % mode)
            return int(mode)
        try:
            return self._position[mode.key()]
        except (AttributeError, KeyError):
            raise UnknownMode("mode %r not in this space" % (mode,))

    def find_mode(self, index, species=PARTICLE):
        for m in self.modes.modes:
            if m.index == index and m.species == species:
                return m
        raise UnknownMode("no mode with index %d species %r" % (index, species))

    def state_index(self, occupations):
        occ = tuple(int(n) for n in occupations)
        if len(occ) != self.n_modes:
            raise ValueError("expected %d occupations" % self.n_modes)
        if any(n < 0 or n > self.n_max for n in occ):
            raise CutoffExceeded("occupations %r exceed n_max=%d"
                                 % (occ, self.n_max))
        return sum(n * s for n, s in zip(occ, self._strides))

    def vacuum(self):
        v = np.zeros(self.dim, dtype=complex)
        v[0] = 1.0
        return v


def _require_scheme(fs, scheme):
    if fs.modes.scheme != scheme:
        raise SchemeMismatch("expected a %s-component space, got %s"
                             % (scheme, fs.modes.scheme))


def annihilation(fs, mode):
    """Sparse lowering operator: a|n> = sqrt(n) |n-1> (zero above cutoff)."""
    j = fs.mode_position(mode)
    n = fs.occupations[:, j]
    src = np.nonzero(n > 0)[0]
    dst = src - fs._strides[j]
    data = np.sqrt(n[src].astype(float))
    return sparse.csr_matrix((data, (dst, src)), shape=(fs.dim, fs.dim),
                             dtype=complex)


def creation(fs, mode):
    """Exact conjugate transpose of annihilation (a+|n_max> = 0)."""
    return annihilation(fs, mode).conj().T.tocsr()


def number_operator(fs, mode):
    j = fs.mode_position(mode)
    return sparse.diags(fs.occupations[:, j].astype(float), format="csr",
                        dtype=complex)


def commutator_check(fs, mode1, mode2):
    """[a(mode1), a+(mode2)] on the truncated space.

    Equals the identity (mode1 == mode2) or zero (otherwise) on states with
    occupation of mode1 below n_max; on top-occupation states the same-mode
    commutator has the truncation eigenvalue -n_max.
    """
    a1 = annihilation(fs, mode1)
    c2 = creation(fs, mode2)
    return (a1 @ c2 - c2 @ a1).tocsr()


def subcutoff_projector(fs, *modes):
    """Diagonal projector onto occupations strictly below n_max for modes."""
    keep = np.ones(fs.dim, dtype=bool)
    for mode in modes:
        j = fs.mode_position(mode)
        keep &= fs.occupations[:, j] < fs.n_max
    return sparse.diags(keep.astype(float), format="csr", dtype=complex)


def ladder_ccr_report(fs, tol=DEFAULT_TOL):
    """Check every ladder commutation relation on the truncated space.

    Same-mode [a, a+] must equal the identity on the sub-cutoff subspace,
    cross-mode and cross-species commutators must vanish exactly, and the
    top-occupation defect must be -n_max.  Returns a dict of worst-case
    deviations plus a pass flag.
    """
    n = fs.n_modes
    eye = sparse.identity(fs.dim, dtype=complex, format="csr")
    same_dev = 0.0
    cross_dev = 0.0
    defect_dev = 0.0
    zeros_dev = 0.0
    for j in range(n):
        pj = subcutoff_projector(fs, j)
        for l in range(n):
            comm = commutator_check(fs, j, l)
            if j == l:
                dev = _max_abs(pj @ (comm - eye) @ pj)
                same_dev = max(same_dev, dev)
                # defect: on states with occupation n_max the eigenvalue
                # must be exactly -n_max
                top = np.nonzero(fs.occupations[:, j] == fs.n_max)[0]
                diag = comm.diagonal()
                defect_dev = max(defect_dev,
                                 float(np.max(np.abs(diag[top] + fs.n_max))))
            else:
                cross_dev = max(cross_dev, _max_abs(comm))
        aj = annihilation(fs, j)
        cj = creation(fs, j)
        for l in range(n):
            al = annihilation(fs, l)
            cl = creation(fs, l)
            zeros_dev = max(zeros_dev,
                            _max_abs(aj @ al - al @ aj),
                            _max_abs(cj @ cl - cl @ cj))
            if j != l:
                zeros_dev = max(zeros_dev, _max_abs(aj @ cl - cl @ aj))
    return {
        "same_mode_identity_dev": same_dev,
        "cross_mode_dev": cross_dev,
        "pairwise_zero_dev": zeros_dev,
        "truncation_defect_dev": defect_dev,
        "passed": bool(same_dev <= tol and cross_dev == 0.0
                       and zeros_dev == 0.0 and defect_dev <= tol),
    }


def _max_abs(matrix):
    m = sparse.csr_matrix(matrix)
    return float(np.max(np.abs(m.data))) if m.nnz else 0.0


def _diagonal_operator(fs, weights):
    diag = fs.occupations.astype(float) @ np.asarray(weights, dtype=float)
    return sparse.diags(diag, format="csr", dtype=complex)


def hamiltonian4(fs):
    """Normal-ordered energy operator, (1/4) sum_a |p0_a| (a+a + b+b)."""
    _require_scheme(fs, FOUR_COMPONENT)
    weights = [0.25 * m.energy for m in fs.modes.modes]
    return _diagonal_operator(fs, weights)


def charge4(fs):
    """Charge operator, (1/4) sum_a (a+a - b+b)."""
    _require_scheme(fs, FOUR_COMPONENT)
    weights = [0.25 * (1.0 if m.species == PARTICLE else -1.0)
               for m in fs.modes.modes]
    return _diagonal_operator(fs, weights)


def _two_component_weights(fs, Theta0):
    c2 = math.cos(Theta0) ** 2
    s2 = math.sin(Theta0) ** 2
    return [c2 if m.index == 1 else s2 for m in fs.modes.modes]


def hamiltonian2(fs, Theta0):
    """Energy operator with cos^2/sin^2 weights between the two sectors."""
    _require_scheme(fs, TWO_COMPONENT)
    trig = _two_component_weights(fs, Theta0)
    weights = [w * m.energy for w, m in zip(trig, fs.modes.modes)]
    return _diagonal_operator(fs, weights)


def charge2(fs, Theta0):
    _require_scheme(fs, TWO_COMPONENT)
    trig = _two_component_weights(fs, Theta0)
    weights = [w * (1.0 if m.species == PARTICLE else -1.0)
               for w, m in zip(trig, fs.modes.modes)]
    return _diagonal_operator(fs, weights)


def make_state(fs, occupancies):
    """Normalized occupation-basis vector from (mode, count) pairs."""
    occ = [0] * fs.n_modes
    for mode, count in occupancies:
        j = fs.mode_position(mode)
        occ[j] += int(count)
        if occ[j] > fs.n_max:
            raise CutoffExceeded(
                "occupation %d of mode %d exceeds n_max=%d"
                % (occ[j], j, fs.n_max))
    v = np.zeros(fs.dim, dtype=complex)
    v[fs.state_index(occ)] = 1.0
    return v


def single_particle_state(fs, index, species=PARTICLE):
    """a+(index)|0> (or b+|0>): the named single-quantum states."""
    return make_state(fs, [(fs.find_mode(index, species), 1)])
