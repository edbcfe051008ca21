import math

import numpy as np
import pytest
from scipy import sparse

from quatfield.fock import (
    ANTIPARTICLE,
    PARTICLE,
    CutoffExceeded,
    DimensionOverflow,
    FockSpace,
    Mode,
    ModeTable,
    SchemeMismatch,
    UnknownMode,
    annihilation,
    charge2,
    charge4,
    commutator_check,
    creation,
    four_component_table,
    hamiltonian2,
    hamiltonian4,
    ladder_ccr_report,
    make_state,
    number_operator,
    reflection_symmetric,
    single_particle_state,
    subcutoff_projector,
    two_component_table,
)
from quatfield.minkowski import FourVector
from quatfield.planewave import PlaneWaveSpec

TOL = 1e-12


def rest_mode(index=1, species=PARTICLE, m=1.0):
    return Mode(index, species, FourVector(m, 0, 0, 0))


def small_table(n_indices=2, scheme="four", m=1.0):
    # distinct on-shell momenta per index
    modes = []
    for a in range(1, n_indices + 1):
        px = 0.25 * a
        p = FourVector(math.sqrt(m * m + px * px), px, 0, 0)
        modes.append(Mode(a, PARTICLE, p))
        modes.append(Mode(a, ANTIPARTICLE, p))
    return ModeTable(scheme, m, tuple(modes))


def spatial_theta_spec():
    theta = FourVector(0.0, 0.6, 0.0, 0.0)
    k = FourVector(math.sqrt(1.36), 0.0, 0.0, 0.0)
    return PlaneWaveSpec(m=1.0, theta=theta, Theta0=0.0, k0=k, k1=k)


def test_mode_table_rejects_off_shell():
    with pytest.raises(ValueError, match="off shell"):
        ModeTable("four", 1.0, (Mode(1, PARTICLE, FourVector(1, 0.5, 0, 0)),))


def test_mode_table_rejects_duplicates():
    m = rest_mode()
    with pytest.raises(ValueError, match="duplicate"):
        ModeTable("four", 1.0, (m, m))


def test_mode_table_rejects_bad_index():
    with pytest.raises(ValueError, match="out of range"):
        ModeTable("two", 1.0, (rest_mode(index=3),))


def test_dimensions():
    t1 = ModeTable("four", 1.0, (rest_mode(),))
    assert FockSpace(t1, n_max=3).dim == 4
    t4 = small_table(2)
    assert FockSpace(t4, n_max=2).dim == 81
    t8 = small_table(4)
    assert FockSpace(t8, n_max=3).dim == 65536


def test_dimension_overflow():
    t8 = small_table(4)
    with pytest.raises(DimensionOverflow):
        FockSpace(t8, n_max=3, max_dim=1000)


def test_basis_enumeration_lexicographic():
    fs = FockSpace(small_table(1), n_max=2)  # 2 modes, dim 9
    occ = fs.occupations
    assert occ.shape == (9, 2)
    assert list(occ[0]) == [0, 0]
    assert list(occ[1]) == [0, 1]
    assert list(occ[3]) == [1, 0]
    # index arithmetic is the inverse of enumeration
    for i in range(fs.dim):
        assert fs.state_index(occ[i]) == i
    assert fs.vacuum()[0] == 1.0


def test_annihilation_matrix_entries():
    fs = FockSpace(ModeTable("four", 1.0, (rest_mode(),)), n_max=2)
    a = annihilation(fs, 0).toarray()
    expected = np.zeros((3, 3), dtype=complex)
    expected[0, 1] = 1.0
    expected[1, 2] = math.sqrt(2.0)
    assert np.array_equal(a, expected)


def test_annihilation_kills_vacuum():
    fs = FockSpace(small_table(2), n_max=2)
    for j in range(fs.n_modes):
        assert np.all(annihilation(fs, j) @ fs.vacuum() == 0)


def test_number_operator_action():
    fs = FockSpace(ModeTable("four", 1.0, (rest_mode(),)), n_max=3)
    mode = fs.modes.modes[0]
    v2 = make_state(fs, [(mode, 2)])
    n = creation(fs, 0) @ annihilation(fs, 0)
    assert np.allclose(n @ v2, 2.0 * v2, atol=TOL)
    assert np.allclose(number_operator(fs, 0) @ v2, 2.0 * v2, atol=0)


def test_creation_is_exact_adjoint():
    fs = FockSpace(small_table(2), n_max=3)
    for j in range(fs.n_modes):
        diff = creation(fs, j) - annihilation(fs, j).conj().T
        assert sparse.csr_matrix(diff).nnz == 0


def test_commutator_same_mode_subcutoff_identity():
    fs = FockSpace(small_table(2), n_max=3)
    eye = sparse.identity(fs.dim, dtype=complex)
    for j in range(fs.n_modes):
        p = subcutoff_projector(fs, j)
        dev = p @ (commutator_check(fs, j, j) - eye) @ p
        data = sparse.csr_matrix(dev).data
        assert data.size == 0 or np.max(np.abs(data)) <= TOL


def test_commutator_cross_mode_exactly_zero():
    fs = FockSpace(small_table(2), n_max=2)
    for j in range(fs.n_modes):
        for l in range(fs.n_modes):
            if j == l:
                continue
            assert sparse.csr_matrix(commutator_check(fs, j, l)).nnz == 0


def test_commutator_truncation_defect():
    fs = FockSpace(ModeTable("four", 1.0, (rest_mode(),)), n_max=3)
    comm = commutator_check(fs, 0, 0).toarray()
    top = make_state(fs, [(fs.modes.modes[0], 3)])
    val = top.conj() @ (comm @ top)
    assert abs(val - (-3.0)) <= TOL


def test_ladder_ccr_report_passes():
    fs = FockSpace(small_table(2), n_max=3)
    report = ladder_ccr_report(fs)
    assert report["passed"], report
    assert report["cross_mode_dev"] == 0.0
    assert report["pairwise_zero_dev"] == 0.0


def test_hamiltonian4_eigenvalues():
    spec = spatial_theta_spec()
    table = four_component_table(spec)
    fs = FockSpace(table, n_max=1)
    h = hamiltonian4(fs)
    # vacuum annihilated by normal ordering
    assert abs((h @ fs.vacuum())[0]) == 0.0
    e1 = table.with_index(1, PARTICLE)[0].energy
    v = single_particle_state(fs, 1, PARTICLE)
    assert abs(v.conj() @ (h @ v) - 0.25 * e1) <= TOL
    # additivity on a particle-antiparticle pair across components
    e3 = table.with_index(3, PARTICLE)[0].energy
    w = make_state(fs, [(fs.find_mode(1, PARTICLE), 1),
                        (fs.find_mode(3, ANTIPARTICLE), 1)])
    assert abs(w.conj() @ (h @ w) - 0.25 * (e1 + e3)) <= TOL


def test_hamiltonian4_matches_closed_form_everywhere():
    fs = FockSpace(small_table(2), n_max=2)
    h = hamiltonian4(fs).diagonal().real
    for i in range(fs.dim):
        expected = 0.25 * sum(n * m.energy for n, m in
                              zip(fs.occupations[i], fs.modes.modes))
        assert abs(h[i] - expected) <= TOL


def test_charge4_eigenvalues():
    spec = spatial_theta_spec()
    fs = FockSpace(four_component_table(spec), n_max=1)
    q = charge4(fs)
    assert abs((q @ fs.vacuum())[0]) == 0.0
    va = single_particle_state(fs, 1, PARTICLE)
    vb = single_particle_state(fs, 1, ANTIPARTICLE)
    assert abs(va.conj() @ (q @ va) - 0.25) <= TOL
    assert abs(vb.conj() @ (q @ vb) + 0.25) <= TOL
    pair = make_state(fs, [(fs.find_mode(1, PARTICLE), 1),
                           (fs.find_mode(1, ANTIPARTICLE), 1)])
    assert abs(pair.conj() @ (q @ pair)) == 0.0


def test_two_component_operators():
    k1 = FourVector(1.0, 0, 0, 0)
    k2 = FourVector(math.sqrt(1.25), 0.5, 0, 0)
    table = two_component_table(1.0, k1, k2)
    fs = FockSpace(table, n_max=1)
    t0 = math.pi / 4.0
    h = hamiltonian2(fs, t0)
    q = charge2(fs, t0)
    v1 = single_particle_state(fs, 1, PARTICLE)
    assert abs(v1.conj() @ (h @ v1) - 0.5 * k1.t) <= TOL
    assert abs(v1.conj() @ (q @ v1) - 0.5) <= TOL
    # Theta0 = 0: the second sector contributes nothing
    h0 = hamiltonian2(fs, 0.0)
    v2 = single_particle_state(fs, 2, PARTICLE)
    assert abs(v2.conj() @ (h0 @ v2)) <= TOL
    # Theta0 = pi/2: antiparticle of the second sector has charge -1
    qh = charge2(fs, math.pi / 2.0)
    vb2 = single_particle_state(fs, 2, ANTIPARTICLE)
    assert abs(vb2.conj() @ (qh @ vb2) + 1.0) <= TOL


def test_scheme_mismatch_errors():
    fs4 = FockSpace(small_table(2, scheme="four"), n_max=1)
    with pytest.raises(SchemeMismatch):
        hamiltonian2(fs4, 0.3)
    k = FourVector(1.0, 0, 0, 0)
    fs2 = FockSpace(two_component_table(1.0, k, k * 1.0 + FourVector(
        math.sqrt(1.25) - 1.0, 0.5, 0, 0)), n_max=1)
    with pytest.raises(SchemeMismatch):
        hamiltonian4(fs2)
    with pytest.raises(SchemeMismatch):
        charge4(fs2)


def test_h_q_commute_and_are_diagonal():
    fs = FockSpace(small_table(3), n_max=2)
    h = hamiltonian4(fs)
    q = charge4(fs)
    comm = h @ q - q @ h
    assert sparse.csr_matrix(comm).nnz == 0
    assert (h - sparse.diags(h.diagonal())).nnz == 0
    assert (q - sparse.diags(q.diagonal())).nnz == 0


def test_make_state_cutoff():
    fs = FockSpace(small_table(1), n_max=2)
    mode = fs.modes.modes[0]
    with pytest.raises(CutoffExceeded):
        make_state(fs, [(mode, 3)])


def test_unknown_mode():
    fs = FockSpace(small_table(1), n_max=1)
    with pytest.raises(UnknownMode):
        annihilation(fs, rest_mode(index=2, m=1.0))
    with pytest.raises(UnknownMode):
        fs.find_mode(4, PARTICLE)


def test_reflection_symmetric_closure():
    table = small_table(2)
    sym = reflection_symmetric(table)
    keys = {m.key() for m in sym.modes}
    for m in sym.modes:
        p = m.momentum
        refl = (m.index, m.species, (p.t, -p.x1, -p.x2, -p.x3))
        assert refl in keys


def test_mode_table_json_round_trip(tmp_path):
    table = small_table(2)
    path = tmp_path / "modes.json"
    table.to_json(path)
    back = ModeTable.from_json(str(path))
    assert back == table
