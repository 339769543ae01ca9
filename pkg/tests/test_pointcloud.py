"""Tests for point-cloud centering, SL normalization, orientation, and baselines."""

import numpy as np
import pytest
from numpy.testing import assert_allclose, assert_array_equal

from grouporbit.linalg import hull_area
from grouporbit.optimize import NmOptions
from grouporbit.pointcloud import (
    Compose,
    RandomSL,
    canonical_orientation_2d,
    center,
    diameter,
    hausdorff,
    hull_is_square,
    normalize_sl,
    orientation_minimized_hausdorff,
    pca_normalize,
    random_distortion,
    so_normalize,
    squareness,
)

from conftest import grid_square

LIGHT = NmOptions(restarts=16)


def _sheared_square(shear=0.8):
    return grid_square() @ random_distortion(Compose(shear=shear)).T


# ----------------------------------------------------------------- centering


def test_center_removes_centroid_and_is_idempotent():
    pts = grid_square() + np.array([5.0, -3.0])
    centered, centroid = center(pts)
    assert_allclose(centroid, [5.0, -3.0], atol=1e-12)
    assert_allclose(centered.mean(axis=0), [0.0, 0.0], atol=1e-12)
    again, second_centroid = center(centered)
    assert_allclose(second_centroid, [0.0, 0.0], atol=1e-12)
    assert_allclose(again, centered, atol=1e-15)


# ------------------------------------------------------------ SL normalizing


def test_square_corners_are_already_normal():
    corners = np.array([[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]])
    res = normalize_sl(corners, LIGHT)
    assert res.objective == pytest.approx(1.0, abs=1e-6)


def test_shear_recovery_hits_area_target():
    sheared = _sheared_square()
    res = normalize_sl(sheared, LIGHT)
    # Volume preservation pins the best reachable half-extent at
    # sqrt(hull area) / 2.
    target = np.sqrt(hull_area(sheared)) / 2.0
    assert res.objective <= 1.02 * target
    assert hull_is_square(res.points)


def test_sl_preserves_hull_area():
    sheared = _sheared_square()
    res = normalize_sl(sheared, LIGHT)
    assert hull_area(res.points) == pytest.approx(hull_area(sheared), abs=1e-9)
    assert np.linalg.det(res.matrix) == pytest.approx(1.0, abs=1e-12)


def test_sl_beats_rotation_baseline():
    sheared = _sheared_square()
    sl = normalize_sl(sheared, LIGHT)
    so = so_normalize(sheared, LIGHT)
    assert sl.objective <= so.objective + 1e-6


def test_normalize_is_deterministic():
    sheared = _sheared_square()
    a = normalize_sl(sheared, LIGHT)
    b = normalize_sl(sheared, LIGHT)
    assert_array_equal(a.matrix, b.matrix)
    assert a.objective == b.objective


def test_normalize_requires_centered_points():
    with pytest.raises(ValueError, match="centered first"):
        normalize_sl(grid_square() + 3.0, LIGHT)


def test_normalize_rejects_degenerate_cloud():
    line = np.column_stack([np.linspace(-1, 1, 10), np.linspace(-1, 1, 10)])
    with pytest.raises(ValueError, match="rank-deficient"):
        normalize_sl(line, LIGHT)


def test_three_dimensional_smoke():
    rng = np.random.default_rng(11)
    pts, _ = center(rng.normal(size=(30, 3)))
    res = normalize_sl(pts, NmOptions(restarts=8))
    assert np.linalg.det(res.matrix) == pytest.approx(1.0, abs=1e-10)
    assert res.objective <= float(np.max(np.abs(pts))) * (1.0 + 1e-12)


# ---------------------------------------------------------------- orientation


def test_orientation_prefers_negative_mass():
    pts = np.array([[1.0, 1.0], [0.9, 1.0], [1.0, 0.9]])
    oriented, rot = canonical_orientation_2d(pts)
    assert_allclose(rot, [[-1.0, 0.0], [0.0, -1.0]])
    assert_allclose(oriented, -pts)


def test_orientation_tie_breaks_to_identity():
    corners = np.array([[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]])
    _, rot = canonical_orientation_2d(corners)
    assert_allclose(rot, np.eye(2))


def test_orientation_is_rotation_invariant():
    # An L-shaped cloud lands in the same canonical pose from any of the four
    # square-symmetry starts.
    l_cloud = np.array(
        [[0.0, 0.0], [1.0, 0.0], [2.0, 0.0], [0.0, 1.0], [0.0, 2.0], [1.0, 1.0]]
    )
    l_cloud -= l_cloud.mean(axis=0)
    quarter = np.array([[0.0, 1.0], [-1.0, 0.0]])
    base, _ = canonical_orientation_2d(l_cloud)
    rotated, _ = canonical_orientation_2d(l_cloud @ quarter)
    assert_allclose(base, rotated, atol=1e-12)


def test_orientation_requires_planar_points():
    with pytest.raises(ValueError, match="2-D points"):
        canonical_orientation_2d(np.zeros((4, 3)))


# ------------------------------------------------------------------ baselines


def test_pca_cannot_fix_shear():
    sheared = _sheared_square()
    mapped, rot = pca_normalize(sheared)
    assert rot.shape == (2, 2)
    # Rotations preserve the sheared hull, so the squareness test keeps
    # failing where the SL normalizer passes.
    assert hull_area(mapped) == pytest.approx(hull_area(sheared), abs=1e-9)
    assert not hull_is_square(mapped)


def test_pca_axis_order_and_sign_rule():
    rng = np.random.default_rng(12)
    pts = rng.normal(size=(200, 2)) * np.array([3.0, 1.0])
    theta = 0.7
    c, s = np.cos(theta), np.sin(theta)
    pts = pts @ np.array([[c, -s], [s, c]])
    pts, _ = center(pts)
    mapped, rot = pca_normalize(pts)
    assert mapped.var(axis=0)[0] >= mapped.var(axis=0)[1]
    for j in range(2):
        i = int(np.argmax(np.abs(rot[:, j])))
        assert rot[i, j] > 0
    again, rot2 = pca_normalize(pts)
    assert_array_equal(rot, rot2)


# ---------------------------------------------------------------- distortions


def test_random_sl_distortion_is_unimodular_and_seeded():
    for seed in range(5):
        g = random_distortion(RandomSL(seed))
        assert np.linalg.det(g) == pytest.approx(1.0, abs=1e-12)
    assert_array_equal(random_distortion(RandomSL(3)), random_distortion(RandomSL(3)))


def test_compose_identity_and_determinants():
    assert_allclose(random_distortion(Compose()), np.eye(2))
    g = random_distortion(Compose(theta=0.3, shear=0.5, squeeze=1.2))
    assert np.linalg.det(g) == pytest.approx(1.0, abs=1e-12)
    mirrored = random_distortion(Compose(theta=0.3, shear=0.5, squeeze=1.2, mirror=True))
    assert np.linalg.det(mirrored) == pytest.approx(-1.0, abs=1e-12)
    g3 = random_distortion(Compose(theta=0.4, shear=0.2, squeeze=0.8), d=3)
    assert np.linalg.det(g3) == pytest.approx(1.0, abs=1e-12)


def test_distortion_validation():
    with pytest.raises(ValueError, match="squeeze must be positive"):
        random_distortion(Compose(squeeze=0.0))
    with pytest.raises(ValueError, match="d in \\{2, 3\\}"):
        random_distortion(RandomSL(0), d=4)


# -------------------------------------------------------------------- metrics


def test_hausdorff_literals():
    assert hausdorff([[0.0, 0.0]], [[3.0, 4.0]]) == pytest.approx(5.0)
    a = [[0.0, 0.0], [1.0, 0.0]]
    b = [[0.0, 0.0]]
    assert hausdorff(a, b) == pytest.approx(1.0)
    assert hausdorff(b, a) == pytest.approx(1.0)


def test_orientation_minimized_hausdorff_absorbs_quarter_turns():
    l_cloud = np.array([[0.0, 0.0], [1.0, 0.0], [0.0, 2.0]])
    quarter = np.array([[0.0, 1.0], [-1.0, 0.0]])
    assert orientation_minimized_hausdorff(l_cloud, l_cloud @ quarter) == pytest.approx(0.0)


def test_diameter_of_square():
    corners = np.array([[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]])
    assert diameter(corners) == pytest.approx(2.0 * np.sqrt(2.0))


def test_squareness_literals():
    corners = np.array([[1.0, 1.0], [-1.0, 1.0], [-1.0, -1.0], [1.0, -1.0]])
    assert squareness(corners) == pytest.approx(1.0)
    assert hull_is_square(corners)
    assert squareness(_sheared_square()) < 0.95
