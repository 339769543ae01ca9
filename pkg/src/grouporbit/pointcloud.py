"""Point-cloud normalization by inf-norm minimization over SL(d).

Points are rows; all maps act on the right (``X @ G``).  Volume-normalized
clouds come from minimizing the largest coordinate magnitude over the special
linear group, which squeezes the cloud into the smallest axis-aligned
bounding cube reachable without changing (hyper)volume.  A second step picks
a canonical planar orientation among the four det=+1 square symmetries.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_array, check_is_fitted

from .groups import GroupSpec, embed, lie_dim
from .linalg import hull_area
from .optimize import NmOptions, multi_start
from .oracles import oracle_svd
from .validation import as_points

# The four det=+1 symmetries of the square: rotations by 0, 90, 180, 270
# degrees acting on row vectors, in the candidate order used for orientation.
ORIENTATIONS_2D = (
    np.array([[1.0, 0.0], [0.0, 1.0]]),
    np.array([[0.0, 1.0], [-1.0, 0.0]]),
    np.array([[-1.0, 0.0], [0.0, -1.0]]),
    np.array([[0.0, -1.0], [1.0, 0.0]]),
)


def center(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Translate the centroid to the origin; returns (centered, centroid)."""
    pts = as_points(points)
    centroid = pts.mean(axis=0)
    return pts - centroid, centroid


def _check_rank(pts: np.ndarray) -> None:
    _, s, _ = oracle_svd(pts)
    if s[-1] <= 1e-10 * max(s[0], 1e-300):
        raise ValueError("rank-deficient cloud")


@dataclass
class NormalizeResult:
    """Normalized points plus the group element that produced them."""

    points: np.ndarray
    matrix: np.ndarray
    objective: float
    evals: int
    restart_index: int
    converged: bool


def _normalize_with_group(
    points: np.ndarray, kind: str, options: NmOptions | None
) -> NormalizeResult:
    pts = as_points(points)
    if np.max(np.abs(pts.mean(axis=0))) > 1e-8 * max(float(np.max(np.abs(pts))), 1e-300):
        raise ValueError("points must be centered first")
    _check_rank(pts)
    d = pts.shape[1]
    spec = GroupSpec(kind, d)
    opts = options or NmOptions(restarts=64)

    def objective(p: np.ndarray) -> float:
        return float(np.max(np.abs(pts @ embed(spec, p))))

    res = multi_start(objective, lie_dim(spec), opts)
    g = embed(spec, res.params)
    return NormalizeResult(
        points=pts @ g,
        matrix=g,
        objective=res.value,
        evals=res.evals,
        restart_index=res.restart_index,
        converged=res.converged,
    )


def normalize_sl(points: np.ndarray, options: NmOptions | None = None) -> NormalizeResult:
    """Minimize ``max |(X G)_ij|`` over G in SL(d) for a centered cloud X."""
    return _normalize_with_group(points, "sl", options)


def so_normalize(points: np.ndarray, options: NmOptions | None = None) -> NormalizeResult:
    """Rotation-only baseline: same objective restricted to SO(d)."""
    return _normalize_with_group(points, "so", options)


def orientation_score(points: np.ndarray) -> float:
    """Frobenius norm of the positive part, ``||max(0, X)||_F``."""
    return float(np.linalg.norm(np.maximum(points, 0.0)))


def canonical_orientation_2d(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Pick the score-minimizing orientation among the four square symmetries.

    Returns (oriented points, the 2x2 rotation applied); ties break toward the
    earlier candidate.
    """
    pts = as_points(points)
    if pts.shape[1] != 2:
        raise ValueError("canonical_orientation_2d expects 2-D points")
    best_rot = ORIENTATIONS_2D[0]
    best_score = orientation_score(pts @ best_rot)
    for rot in ORIENTATIONS_2D[1:]:
        score = orientation_score(pts @ rot)
        if score < best_score:
            best_score = score
            best_rot = rot
    return pts @ best_rot, best_rot


def pca_normalize(points: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Rotate a centered cloud onto its principal axes (descending variance).

    Axis signs are fixed deterministically: the largest-magnitude loading of
    each axis is made positive.
    """
    pts = as_points(points)
    _, _, v = oracle_svd(pts)
    v = np.real(v).copy()
    for j in range(v.shape[1]):
        i = int(np.argmax(np.abs(v[:, j])))
        if v[i, j] < 0:
            v[:, j] *= -1.0
    return pts @ v, v


@dataclass(frozen=True)
class RandomSL:
    """A seeded Gaussian matrix rescaled to determinant one."""

    seed: int = 0


@dataclass(frozen=True)
class Compose:
    """Rotation * squeeze * shear, optionally mirrored; |det| = 1 throughout."""

    theta: float = 0.0
    shear: float = 0.0
    squeeze: float = 1.0
    mirror: bool = False


DistortionSpec = RandomSL | Compose


def random_distortion(spec: DistortionSpec, d: int = 2) -> np.ndarray:
    """Build a distortion matrix for d in {2, 3} from its spec."""
    if d not in (2, 3):
        raise ValueError(f"distortions support d in {{2, 3}}, got {d}")
    if isinstance(spec, RandomSL):
        rng = np.random.default_rng(spec.seed)
        for _ in range(100):
            a = rng.normal(size=(d, d))
            det = float(np.linalg.det(a))
            if det > 1e-6:
                return a / det ** (1.0 / d)
        raise ValueError("could not draw a well-conditioned distortion in 100 tries")
    if isinstance(spec, Compose):
        c, s = np.cos(spec.theta), np.sin(spec.theta)
        lam = spec.squeeze
        if lam <= 0:
            raise ValueError(f"squeeze must be positive, got {lam}")
        if d == 2:
            rot = np.array([[c, -s], [s, c]])
            sq = np.diag([lam, 1.0 / lam])
            sh = np.array([[1.0, spec.shear], [0.0, 1.0]])
            mir = np.diag([-1.0, 1.0]) if spec.mirror else np.eye(2)
        else:
            rot = np.array([[c, -s, 0.0], [s, c, 0.0], [0.0, 0.0, 1.0]])
            sq = np.diag([lam, 1.0 / lam, 1.0])
            sh = np.eye(3)
            sh[0, 1] = spec.shear
            mir = np.diag([-1.0, 1.0, 1.0]) if spec.mirror else np.eye(3)
        return rot @ sq @ sh @ mir
    raise TypeError(f"unknown distortion spec {type(spec).__name__}")


def hausdorff(a: np.ndarray, b: np.ndarray) -> float:
    """Symmetric Hausdorff distance between two point sets."""
    dists = cdist(np.asarray(a, dtype=float), np.asarray(b, dtype=float))
    return float(max(dists.min(axis=1).max(), dists.min(axis=0).max()))


def orientation_minimized_hausdorff(a: np.ndarray, b: np.ndarray) -> float:
    """Hausdorff distance minimized over the four planar square symmetries of b.

    Canonical forms of symmetric clouds are only defined up to these maps, so
    shape comparisons enumerate them.
    """
    b = np.asarray(b, dtype=float)
    return min(hausdorff(a, b @ rot) for rot in ORIENTATIONS_2D)


def diameter(points: np.ndarray) -> float:
    """Largest pairwise distance, via hull vertices."""
    pts = np.asarray(points, dtype=float)
    if pts.shape[1] == 2:
        from .linalg import convex_hull

        pts = convex_hull(pts)
    d = cdist(pts, pts)
    return float(d.max())


def squareness(points: np.ndarray) -> float:
    """Hull area over bounding-square area; 1 for an axis-aligned filled square."""
    pts = as_points(points)
    if pts.shape[1] != 2:
        raise ValueError("squareness expects 2-D points")
    half = float(np.max(np.abs(pts)))
    if half == 0.0:
        return 0.0
    return hull_area(pts) / (4.0 * half * half)


def hull_is_square(points: np.ndarray, threshold: float = 0.95) -> bool:
    """Whether the cloud fills an axis-aligned square to within ``threshold``."""
    return squareness(points) >= threshold


class _NormalizerBase(BaseEstimator, TransformerMixin):
    """Shared fit/transform plumbing: center, learn a right-multiplier, orient."""

    def __init__(self, orient: bool = True) -> None:
        self.orient = orient

    def _learn(self, centered: np.ndarray) -> tuple[np.ndarray, dict]:
        raise NotImplementedError

    def fit(self, X: np.ndarray, y: None = None):
        X = check_array(X, dtype=np.float64)
        pts = as_points(X)
        centered, centroid = center(pts)
        matrix, extras = self._learn(centered)
        mapped = centered @ matrix
        if self.orient and pts.shape[1] == 2:
            _, rot = canonical_orientation_2d(mapped)
        else:
            rot = np.eye(pts.shape[1])
        self.centroid_ = centroid
        self.matrix_ = matrix @ rot
        self.group_matrix_ = matrix
        self.orientation_ = rot
        self.n_features_in_ = pts.shape[1]
        for key, val in extras.items():
            setattr(self, key, val)
        return self

    def transform(self, X: np.ndarray) -> np.ndarray:
        check_is_fitted(self, "matrix_")
        X = check_array(X, dtype=np.float64)
        if X.shape[1] != self.n_features_in_:
            raise ValueError(f"expected {self.n_features_in_} columns, got {X.shape[1]}")
        return (X - self.centroid_) @ self.matrix_


class SpecialLinearNormalizer(_NormalizerBase):
    """Center, volume-normalize over SL(d), and orient a point cloud."""

    def __init__(
        self,
        orient: bool = True,
        restarts: int = 64,
        seed: int = 0,
        max_iters: int | None = None,
    ) -> None:
        super().__init__(orient=orient)
        self.restarts = restarts
        self.seed = seed
        self.max_iters = max_iters

    def _learn(self, centered: np.ndarray) -> tuple[np.ndarray, dict]:
        opts = NmOptions(restarts=self.restarts, seed=self.seed, max_iters=self.max_iters)
        res = normalize_sl(centered, opts)
        return res.matrix, {"objective_": res.objective, "converged_": res.converged}


class OrthogonalNormalizer(_NormalizerBase):
    """Rotation-only baseline using the same inf-norm objective over SO(d)."""

    def __init__(
        self,
        orient: bool = True,
        restarts: int = 64,
        seed: int = 0,
        max_iters: int | None = None,
    ) -> None:
        super().__init__(orient=orient)
        self.restarts = restarts
        self.seed = seed
        self.max_iters = max_iters

    def _learn(self, centered: np.ndarray) -> tuple[np.ndarray, dict]:
        opts = NmOptions(restarts=self.restarts, seed=self.seed, max_iters=self.max_iters)
        res = so_normalize(centered, opts)
        return res.matrix, {"objective_": res.objective, "converged_": res.converged}


class PCANormalizer(_NormalizerBase):
    """Principal-axes baseline; rotation only, deterministic axis signs."""

    def __init__(self, orient: bool = True) -> None:
        super().__init__(orient=orient)

    def _learn(self, centered: np.ndarray) -> tuple[np.ndarray, dict]:
        _, rot = pca_normalize(centered)
        return rot, {"objective_": float(np.max(np.abs(centered @ rot))), "converged_": True}
