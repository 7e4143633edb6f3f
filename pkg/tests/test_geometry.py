"""Box geometry, separability, covers, annuli."""

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from msalab.geometry import (
    Annulus,
    Cube,
    MPBox,
    annuli_family,
    box_distance,
    classify_interaction,
    clump_decomposition,
    cover_contains,
    inner_boundary,
    interior,
    is_separable_pair,
    is_separable_pair_oracle,
    kappa,
    non_separable_cover,
    outer_layer,
    projection,
)


def centers(n, d, lo=-40, hi=40):
    return st.tuples(*[st.integers(lo, hi)] * (n * d))


# ---------------------------------------------------------------------------
# boxes and annuli


def test_box_lattice_points_are_max_norm_ball():
    box = MPBox((0, 3), 3, 2, 1)
    pts = list(box.lattice_points())
    assert len(pts) == box.lattice_cardinality() == 5 * 5
    for x in pts:
        assert max(abs(a - b) for a, b in zip(x, box.center)) <= 2


def test_box_contains_box_strict_on_radius():
    big = MPBox((0,), 8, 1, 1)
    assert big.contains_box(MPBox((3,), 5, 1, 1))
    assert not big.contains_box(MPBox((4,), 5, 1, 1))


def test_annulus_equals_box_difference():
    ann = Annulus((0, 0), 3, 6)
    outer = {x for x in MPBox((0, 0), 6, 2, 1).lattice_points()}
    inner = {x for x in MPBox((0, 0), 3, 2, 1).lattice_points()}
    member = {x for x in outer if ann.contains_point(x)}
    assert member == outer - inner
    assert ann.width > 0


def test_annulus_rejects_degenerate_width():
    with pytest.raises(ValueError):
        Annulus((0,), 5, 5)


def test_annuli_family_tiles_without_overlap():
    fam = annuli_family((0,), 4, 1, 1)
    for a, b in zip(fam, fam[1:]):
        assert a.outer == b.inner


def test_outer_layer_and_interior():
    box = MPBox((0,), 5, 1, 1)
    layer = outer_layer(box)
    assert set(layer) == {(-4,), (-3,), (3,), (4,)}
    core = interior(box)
    assert core.radius < box.radius
    assert all(not core.contains_lattice_point(x) for x in layer)


def test_inner_boundary_is_extreme_shell():
    box = MPBox((0, 0), 3, 1, 2)
    for x in inner_boundary(box):
        assert max(abs(c) for c in x) == 2


# ---------------------------------------------------------------------------
# separability


def test_kappa():
    assert kappa(1) == 1
    assert kappa(2) == 4
    assert kappa(3) == 27


def test_far_apart_boxes_are_separable():
    a = MPBox((0, 0), 4, 2, 1)
    b = MPBox((100, 100), 4, 2, 1)
    v = is_separable_pair(a, b, 1, 2)
    assert v.separable
    assert v.witness  # nonempty subset of {1..n}
    assert set(v.witness) <= {1, 2}


def test_overlapping_boxes_are_not_separable():
    a = MPBox((0, 0), 4, 2, 1)
    b = MPBox((1, 1), 4, 2, 1)
    assert not is_separable_pair(a, b, 1, 2).separable


def test_spec_distance_example():
    # distance must clear the 2N(L+R) threshold strictly
    a = MPBox((0, 0), 3, 2, 1)
    b = MPBox((22, 0), 3, 2, 1)
    assert box_distance(a, b) == 22 - 2 * 3
    assert not is_separable_pair(a, b, 1, 2).separable  # 16 == 2*2*(3+1)
    c = MPBox((23, 0), 3, 2, 1)
    assert is_separable_pair(a, c, 1, 2).separable


@settings(max_examples=60, deadline=None)
@given(centers(2, 1), centers(2, 1), st.integers(2, 5))
def test_separability_matches_oracle(ca, cb, L):
    a, b = MPBox(ca, L, 2, 1), MPBox(cb, L, 2, 1)
    fast = is_separable_pair(a, b, 1, 2)
    slow = is_separable_pair_oracle(a, b, 1, 2)
    assert fast.separable == slow.separable
    if fast.separable:
        # the structured witness must be accepted by the oracle's criterion
        assert fast.witness is not None


@settings(max_examples=30, deadline=None)
@given(centers(3, 1, -25, 25), centers(3, 1, -25, 25))
def test_separability_matches_oracle_three_particles(ca, cb):
    a, b = MPBox(ca, 3, 3, 1), MPBox(cb, 3, 3, 1)
    assert (
        is_separable_pair(a, b, 1, 3).separable
        == is_separable_pair_oracle(a, b, 1, 3).separable
    )


# ---------------------------------------------------------------------------
# non-separable cover


def test_cover_size_and_radius():
    n, d, L, R = 2, 1, 4, 1
    cover = non_separable_cover((0, 0), L, R, n, d)
    assert len(cover) == n**n
    assert all(box.radius == 2 * n * (L + R) for box in cover)


@settings(max_examples=80, deadline=None)
@given(centers(2, 1, -150, 150))
def test_cover_complement_is_separable(cy):
    n, d, L, R = 2, 1, 3, 1
    x = (5, -7)
    cover = non_separable_cover(x, L, R, n, d)
    a, b = MPBox(x, L, n, d), MPBox(cy, L, n, d)
    if not cover_contains(cover, cy) and box_distance(a, b) > 2 * n * (L + R):
        assert is_separable_pair(a, b, R, n).separable


def test_cover_membership_is_closed():
    cover = [MPBox((0,), 4, 1, 1)]
    assert cover_contains(cover, (4,))  # boundary sphere included
    assert not cover_contains(cover, (5,))


# ---------------------------------------------------------------------------
# clumps / interaction class


def test_clump_decomposition_merges_overlapping_projections():
    clumps = clump_decomposition([(0,), (3,), (50,)], 2, 1)
    assert sorted(sorted(c) for c in clumps) == [[1, 2], [3]]


def test_interaction_classification():
    assert classify_interaction(MPBox((0, 0), 4, 2, 1), 1.0, 2).tag == "FI"
    cls = classify_interaction(MPBox((0, 50), 4, 2, 1), 1.0, 2)
    assert cls.tag == "PI"
    assert cls.partition  # witness subsystem split


@settings(max_examples=60, deadline=None)
@given(centers(2, 1), st.integers(2, 5))
def test_pi_iff_diagonal_disjoint(c, L):
    # PI <=> the box avoids the N*r0 diagonal neighborhood
    N, r0 = 2, 1.0
    box = MPBox(c, L, 2, 1)
    meets = any(
        max(
            abs(a - b)
            for a, b in zip(box.particle(1), box.particle(2))
        )
        - 2 * (L - 1)
        <= N * r0
        for _ in [0]
    )
    assert (classify_interaction(box, r0, N).tag == "PI") == (not meets)


def test_projection_cube():
    box = MPBox((5, -3), 4, 2, 1)
    p1 = projection(box, 1)
    assert isinstance(p1, Cube)
    assert p1.center == (5,)
