"""Finite-volume Hamiltonian assembly and eigensolvers."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from msalab.geometry import MPBox
from msalab.hamiltonian import (
    DENSE_LIMIT,
    BoxInstance,
    CapExceededError,
    assemble,
    assemble_segment,
    assemble_split,
    eigensolve,
    eigensolve_lowest,
    ground_energy_reference,
    kron_sum,
)
from msalab.randomfield import AlloySpec, CoverageError, InteractionSpec, sample_disorder


def closed_form_1d(M):
    return np.array([1 - math.cos(k * math.pi / (M + 1)) for k in range(1, M + 1)])


@pytest.mark.parametrize("L", [2, 8, 32])
def test_zero_potential_1d_spectrum(L):
    sd = eigensolve(assemble(MPBox((0,), L, 1, 1)))
    M = sd.ham.dim
    assert M == 2 * L - 1
    np.testing.assert_allclose(sd.eigenvalues, closed_form_1d(M), atol=1e-10)


def test_segment_matches_box_for_odd_lengths():
    # a 2L-1 segment at the right origin is the same operator as the box
    box = eigensolve(assemble(MPBox((0,), 5, 1, 1)))
    seg = eigensolve(assemble_segment((-4,), 9, 1, 1))
    np.testing.assert_allclose(box.eigenvalues, seg.eigenvalues, atol=1e-12)


def test_segment_even_length():
    sd = eigensolve(assemble_segment((0,), 48, 1, 1))
    np.testing.assert_allclose(sd.eigenvalues, closed_form_1d(48), atol=1e-10)


def test_eigensolve_residual_and_order():
    inst = BoxInstance.create(MPBox((0,), 8, 1, 1), AlloySpec(g=2.0), None, 0)
    sd = inst.spectral()
    assert np.all(np.diff(sd.eigenvalues) >= 0)
    H = sd.ham.matrix
    resid = np.linalg.norm(H @ sd.eigenvectors - sd.eigenvectors * sd.eigenvalues, axis=0)
    assert resid.max() <= 1e-8 * max(1.0, np.abs(sd.eigenvalues).max())


def test_eigensolve_lowest_matches_full():
    inst = BoxInstance.create(MPBox((0,), 16, 1, 1), AlloySpec(g=2.0), None, 1)
    full = inst.spectral()
    low = eigensolve_lowest(full.ham, 4)
    np.testing.assert_allclose(low.eigenvalues, full.eigenvalues[:4], atol=1e-10)


def test_cap_enforced():
    with pytest.raises(CapExceededError):
        assemble(MPBox((0, 0), 40, 2, 1))
    assert DENSE_LIMIT == 4096


def test_coverage_error_on_missing_sites():
    spec = AlloySpec(g=1.0)
    sample = sample_disorder(spec, [(0,), (1,)], 0)
    with pytest.raises(CoverageError):
        assemble(MPBox((0,), 8, 1, 1), disorder=sample, alloy=spec)


# ---------------------------------------------------------------------------
# tensor-product structure of PI boxes


def pi_instance(seed, gap=60):
    box = MPBox((0, gap), 4, 2, 1)
    return BoxInstance.create(box, AlloySpec(g=2.0), InteractionSpec(), seed)


@settings(max_examples=10, deadline=None)
@given(st.integers(0, 500))
def test_kron_sum_spectrum_matches_full(seed):
    inst = pi_instance(seed)
    h1, h2, reordered = assemble_split(
        inst.box, [1], interaction=inst.interaction,
        disorder=inst.disorder, alloy=inst.alloy,
    )
    full = np.linalg.eigvalsh(
        assemble(reordered, 1.0, inst.interaction, inst.disorder, inst.alloy).matrix
    )
    pairs = np.sort(np.add.outer(
        np.linalg.eigvalsh(h1.matrix), np.linalg.eigvalsh(h2.matrix)
    ).ravel())
    assert np.abs(full - pairs).max() <= 1e-9


def test_kron_sum_identity():
    a = np.diag([1.0, 2.0])
    b = np.diag([10.0, 20.0, 30.0])
    ks = kron_sum(a, b)
    assert sorted(np.diag(ks)) == [11.0, 12.0, 21.0, 22.0, 31.0, 32.0]


def test_split_rejects_cross_interaction():
    box = MPBox((0, 1), 4, 2, 1)  # particles too close to decouple
    with pytest.raises(ValueError):
        assemble_split(box, [1], interaction=InteractionSpec())


def test_ground_energy_reference_zero_potential():
    e0, _ = ground_energy_reference(None, MPBox((0,), 8, 1, 1))
    assert abs(e0 - closed_form_1d(15)[0]) < 1e-10


# ---------------------------------------------------------------------------
# instances


def test_sub_instance_shares_disorder():
    inst = BoxInstance.create(MPBox((0,), 8, 1, 1), AlloySpec(g=2.0), None, 5)
    sub = inst.sub_instance((2,), 4)
    assert sub.disorder is inst.disorder
    with pytest.raises(ValueError):
        inst.sub_instance((6,), 4)  # sticks out


def test_spectral_cache_identity():
    inst = BoxInstance.create(MPBox((0,), 8, 1, 1), AlloySpec(g=2.0), None, 5)
    assert inst.spectral() is inst.spectral()
