"""Seeded alloy disorder and interaction potentials."""

import numpy as np
from hypothesis import given, settings
from hypothesis import strategies as st

from msalab.randomfield import (
    AlloySpec,
    InteractionSpec,
    check_holder,
    external_potential,
    influence_sites,
    interaction_energy,
    multiparticle_potential,
    sample_disorder,
    site_uniforms,
    sites_for_cube,
)

REGION = [(i,) for i in range(-10, 11)]


def test_same_seed_same_values():
    spec = AlloySpec(g=3.0)
    s1 = sample_disorder(spec, REGION, 7)
    s2 = sample_disorder(spec, REGION, 7)
    assert s1.values == s2.values


def test_values_depend_only_on_seed_and_site():
    # counter-based generator: enlarging the region never changes old values
    spec = AlloySpec(g=3.0)
    small = sample_disorder(spec, REGION, 7)
    big = sample_disorder(spec, REGION + [(i,) for i in range(11, 30)], 7)
    for site in REGION:
        assert big.values[site] == small.values[site]


def test_different_seeds_differ():
    spec = AlloySpec(g=3.0)
    a = sample_disorder(spec, REGION, 0).values
    b = sample_disorder(spec, REGION, 1).values
    assert any(a[s] != b[s] for s in REGION)


def test_uniform_support():
    spec = AlloySpec(g=2.5)
    vals = list(sample_disorder(spec, [(i,) for i in range(2000)], 0).values.values())
    assert 0.0 <= min(vals) and max(vals) <= 2.5
    # roughly uniform: mean near g/2
    assert abs(np.mean(vals) - 1.25) < 0.1


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 2**32), st.lists(st.integers(-100, 100), min_size=1, max_size=20, unique=True))
def test_site_uniforms_range_and_determinism(seed, xs):
    sites = np.array([[x] for x in xs])
    u = site_uniforms(seed, sites)
    assert np.all((0.0 <= u) & (u < 1.0))
    assert np.array_equal(u, site_uniforms(seed, sites))


def test_holder_continuity_uniform_law():
    rep = check_holder(AlloySpec(g=2.0), [0.05, 0.1, 0.5])
    assert rep["holds"]
    for eps, val in rep["table"].items():
        assert val <= rep["b"] * eps ** rep["a"] + 1e-12


# ---------------------------------------------------------------------------
# potentials


def test_external_potential_is_bump_sum():
    spec = AlloySpec(g=1.0, R=1)
    sample = sample_disorder(spec, REGION, 3)
    # with R=1 the bump at x covers only the site at x itself
    for x in [(0.0,), (4.0,), (-7.0,)]:
        v = external_potential(sample, spec, x)
        assert v >= 0.0


def test_multiparticle_potential_sums_particles():
    spec = AlloySpec(g=1.0, R=1)
    sample = sample_disorder(spec, REGION, 3)
    x = (2.0, -3.0)
    total = multiparticle_potential(sample, spec, x, 1)
    parts = external_potential(sample, spec, (2.0,)) + external_potential(
        sample, spec, (-3.0,)
    )
    assert abs(total - parts) < 1e-12


def test_interaction_bounds_and_range():
    spec = InteractionSpec(u0=1.5, r0=1.0)
    close = interaction_energy(spec, (0.0, 0.5), 1)
    assert 0.0 <= close <= 1.5
    # an r0-isolated particle contributes nothing
    assert interaction_energy(spec, (0.0, 10.0), 1) == 0.0


@settings(max_examples=40, deadline=None)
@given(st.floats(-5, 5), st.floats(-5, 5), st.floats(-5, 5))
def test_interaction_symmetric_and_bounded(a, b, c):
    spec = InteractionSpec(u0=2.0, r0=1.0)
    x, y = (a, b, c), (c, b, a)
    vx = interaction_energy(spec, x, 1)
    assert 0.0 <= vx <= 2.0 * 3  # sum over k-clusters stays bounded per particle
    assert abs(vx - interaction_energy(spec, y, 1)) < 1e-12


def test_influence_sites_cover_bumps():
    sites = influence_sites([(0.0,)], 2)
    assert (0,) in set(sites)
    assert len(set(sites)) >= 3


def test_sites_for_cube():
    sites = set(sites_for_cube((0,), 2.0))
    assert sites == {(-2,), (-1,), (0,), (1,), (2,)}
