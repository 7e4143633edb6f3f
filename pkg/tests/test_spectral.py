"""Green blocks, resonance/singularity classifiers, spectral bounds."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from msalab.geometry import MPBox
from msalab.hamiltonian import BoxInstance, assemble, eigensolve
from msalab.randomfield import AlloySpec
from msalab.spectral import (
    ALPHA,
    BETA,
    CnrPolicy,
    ResonantEnergyError,
    build_green_table,
    classify_box,
    classify_cnr,
    classify_resonance,
    classify_singularity,
    combes_thomas_check,
    gamma,
    green_block,
    green_row,
    resolvent_matrix,
    resonance_threshold,
    weyl_cutoff,
)


def instance(seed=0, L=8, g=2.0):
    return BoxInstance.create(MPBox((0,), L, 1, 1), AlloySpec(g=g), None, seed)


def safe_energy(inst, offset=1.0):
    return float(inst.spectral().eigenvalues[0]) - offset


def test_exponents_fixed():
    assert ALPHA == 1.5 and BETA == 0.5


def test_gamma_values():
    assert gamma(1.0, 16, 2, 2) == 24.0
    assert gamma(1.0, 16, 1, 2) == 36.0
    # decreasing in n at fixed N, increasing in m and L
    assert gamma(1.0, 16, 1, 3) > gamma(1.0, 16, 2, 3) > gamma(1.0, 16, 3, 3)
    assert gamma(2.0, 16, 1, 1) > gamma(1.0, 16, 1, 1)


# ---------------------------------------------------------------------------
# green blocks


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 200), st.integers(-7, 7), st.integers(-7, 7))
def test_green_block_symmetric_nonnegative(seed, a, b):
    inst = instance(seed)
    sd = inst.spectral()
    E = safe_energy(inst)
    g1 = green_block(sd, E, (a,), (b,))
    g2 = green_block(sd, E, (b,), (a,))
    assert g1 >= 0.0
    assert abs(g1 - g2) <= 1e-12 * max(1.0, g1)


def test_green_block_matches_direct_solve():
    inst = instance(3)
    sd = inst.spectral()
    E = safe_energy(inst)
    ham = sd.ham
    G = np.linalg.solve(ham.matrix - E * np.eye(ham.dim), np.eye(ham.dim))
    for v, w in [((0,), (5,)), ((-7,), (7,)), ((2,), (2,))]:
        i = ham.cell_indices(v)[0]
        j = ham.cell_indices(w)[0]
        assert abs(green_block(sd, E, v, w) - abs(G[i, j])) <= 1e-10


def test_green_row_matches_blocks():
    inst = instance(4)
    sd = inst.spectral()
    E = safe_energy(inst)
    targets = [(i,) for i in range(-7, 8)]
    row = green_row(sd, E, (0,), targets)
    for w in targets:
        assert abs(row[w] - green_block(sd, E, (0,), w)) <= 1e-12


def test_green_refuses_spectrum():
    inst = instance(0)
    sd = inst.spectral()
    with pytest.raises(ResonantEnergyError):
        green_block(sd, float(sd.eigenvalues[2]), (0,), (1,))


@settings(max_examples=15, deadline=None)
@given(st.integers(0, 100))
def test_resolvent_identity(seed):
    inst = instance(seed)
    sd = inst.spectral()
    E1, E2 = safe_energy(inst, 1.0), safe_energy(inst, 2.0)
    G1 = resolvent_matrix(sd, E1)
    G2 = resolvent_matrix(sd, E2)
    lhs = G1 - G2
    rhs = (E1 - E2) * (G1 @ G2)
    assert np.abs(lhs - rhs).max() <= 1e-8


def test_green_table_consistent():
    inst = instance(1)
    sd = inst.spectral()
    E = safe_energy(inst)
    tab = build_green_table(sd, E, [(0,)], [(3,), (4,)])
    assert abs(tab.values[((0,), (3,))] - green_block(sd, E, (0,), (3,))) <= 1e-12


# ---------------------------------------------------------------------------
# resonance / CNR / NS


def test_resonance_threshold_shrinks():
    assert resonance_threshold(8) == math.exp(-math.sqrt(8))
    assert resonance_threshold(16) < resonance_threshold(8)


def test_classify_resonance_matches_gap():
    inst = instance(0)
    sd = inst.spectral()
    lam = float(sd.eigenvalues[0])
    assert not classify_resonance(sd, lam + 1e-9)  # resonant
    assert classify_resonance(sd, lam - 0.5)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 100))
def test_cnr_implies_nr(seed):
    inst = instance(seed, L=12)
    E = safe_energy(inst, 0.7)
    cls = classify_box(inst, E, 0.5, 1)
    if cls.completely_nonresonant:
        assert cls.nonresonant


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 100))
def test_strided_cnr_implies_concentric_cnr(seed):
    # the strided family is a superset of the concentric one
    inst = instance(seed, L=12)
    E = safe_energy(inst, 0.7)
    strided, fam_s = classify_cnr(inst, E, CnrPolicy(kind="strided"))
    concentric, fam_c = classify_cnr(inst, E, CnrPolicy(kind="concentric"))
    assert set(fam_c) <= set(fam_s)
    if strided:
        assert concentric


def test_singularity_refuses_resonant_energy():
    inst = instance(0)
    lam = float(inst.spectral().eigenvalues[0])
    with pytest.raises(ResonantEnergyError):
        classify_singularity(inst, lam + 1e-12, 0.5, 1)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 100), st.floats(0.05, 0.4), st.floats(0.41, 1.0))
def test_ns_monotone_in_mass(seed, m_small, m_big):
    # NS at a larger decay mass implies NS at any smaller one
    inst = instance(seed, L=12, g=5.0)
    E = safe_energy(inst, 0.5)
    try:
        if classify_singularity(inst, E, m_big, 1):
            assert classify_singularity(inst, E, m_small, 1)
    except ResonantEnergyError:
        pass


def test_classify_box_records_family_and_gap():
    inst = instance(0)
    E = safe_energy(inst)
    cls = classify_box(inst, E, 0.5, 1)
    assert cls.cnr_family
    assert cls.spectral_gap > resonance_threshold(inst.box.radius)
    assert cls.nonsingular in (True, False)


# ---------------------------------------------------------------------------
# spectral bounds


def test_combes_thomas_rates_increase_with_gap():
    inst = instance(2, L=16, g=2.0)
    sd = inst.spectral()
    base = float(sd.eigenvalues[0])
    rates = [combes_thomas_check(sd, base - d, d)["rate"] for d in (0.5, 1.0, 2.0)]
    assert all(r > 0 for r in rates)
    assert rates[0] < rates[1] < rates[2]


def test_combes_thomas_requires_gap():
    inst = instance(2, L=16)
    sd = inst.spectral()
    with pytest.raises(ValueError):
        combes_thomas_check(sd, float(sd.eigenvalues[0]) - 0.1, 2.0)


def test_weyl_cutoff_example():
    sd = eigensolve(assemble(MPBox((0,), 16, 1, 1)))
    rep = weyl_cutoff(sd, 0.0, 1.0, 1, 1)
    assert rep == {"count": 16, "bound": 31.0, "within": True}
