"""Random polytopes as point clouds and Monte Carlo mean outer radii.

The projected outer radius of a point hull is max_j |P_F X_j|, so no convex
hull is ever built; everything reduces to inner products with frames.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Union

import numpy as np

from .estimates import Estimate, mean_and_stderr
from .grassmann import Subspace, haar_flag, haar_subspace, sphere_points
from .streams import StreamKey

if TYPE_CHECKING:
    from .bodies import Body


@dataclass(frozen=True, eq=False)
class PointCloud:
    """N sample points whose convex hull is the random polytope.

    ``source`` is the Body the points were drawn from, or the string
    "gaussian" for standard Gaussian clouds.
    """

    points: np.ndarray
    source: Union["Body", str]
    key: StreamKey

    def __post_init__(self) -> None:
        if self.points.ndim != 2 or self.points.shape[0] < 1:
            raise ValueError("points must be a nonempty (N, n) array")

    @property
    def size(self) -> int:
        return self.points.shape[0]

    @property
    def dim(self) -> int:
        return self.points.shape[1]


@dataclass(frozen=True, eq=False)
class RadiusProfile:
    """Flag-averaged projected radii over a grid of projection dimensions.

    Built from nested flags, so ``values`` is nondecreasing in k exactly,
    not just on average.
    """

    ks: np.ndarray
    values: np.ndarray
    stderrs: np.ndarray
    flags_used: int
    key: StreamKey

    def estimate(self, k: int) -> Estimate:
        i = int(np.searchsorted(self.ks, k))
        if i >= self.ks.size or self.ks[i] != k:
            raise KeyError(f"profile has no entry for k={k}")
        return Estimate(float(self.values[i]), float(self.stderrs[i]), self.flags_used, self.key)


def symmetrize(cloud: PointCloud) -> PointCloud:
    """The cloud of +-X_j; shares every projected outer radius with the original."""
    return PointCloud(np.vstack([cloud.points, -cloud.points]), cloud.source, cloud.key)


def outer_radius_points(cloud: PointCloud) -> float:
    """R(conv X) = max_j |X_j|."""
    return float(np.max(np.linalg.norm(cloud.points, axis=1)))


def projected_radius(cloud: PointCloud, subspace: Subspace) -> float:
    """max_j |P_F X_j|, the outer radius of the projected hull."""
    if cloud.dim != subspace.n:
        raise ValueError("cloud and subspace dimension mismatch")
    proj = cloud.points @ subspace.frame
    return float(np.max(np.linalg.norm(proj, axis=1)))


def mean_outer_radius(cloud: PointCloud, k: int, M: int, key: StreamKey) -> Estimate:
    """Monte Carlo k-th mean outer radius: average over M Haar subspaces."""
    if not 1 <= k <= cloud.dim:
        raise ValueError("need 1 <= k <= n")
    if M < 2:
        raise ValueError("need at least 2 subspaces")
    vals = np.empty(M)
    for i in range(M):
        vals[i] = projected_radius(cloud, haar_subspace(cloud.dim, k, key.child(i)))
    return mean_and_stderr(vals, key)


def radius_profile(
    cloud: PointCloud, M: int, key: StreamKey, ks: np.ndarray | None = None
) -> RadiusProfile:
    """Per-k mean outer radii from M Haar flags, monotone in k pathwise.

    For each flag the squared projected norms are accumulated column segment
    by column segment (running sums of squared basis inner products), so the
    per-point radii never decrease with k and neither does their max or the
    flag average.  ``ks`` restricts the grid (default: every k = 1..n); each
    per-k marginal is distributed exactly as mean_outer_radius at that k.
    """
    n = cloud.dim
    if ks is None:
        ks = np.arange(1, n + 1)
    ks = np.asarray(ks, dtype=int)
    if ks.size == 0 or np.any(ks < 1) or np.any(ks > n) or np.any(np.diff(ks) <= 0):
        raise ValueError("ks must be strictly increasing within 1..n")
    if M < 2:
        raise ValueError("need at least 2 flags")
    starts = np.concatenate([[0], ks[:-1]])
    per_flag = np.empty((M, ks.size))
    for i in range(M):
        basis = haar_flag(n, key.child(i)).basis
        sq = (cloud.points @ basis[:, : ks[-1]]) ** 2
        partial = np.cumsum(np.add.reduceat(sq, starts, axis=1), axis=1)
        per_flag[i] = np.sqrt(np.max(partial, axis=0))
    values = np.mean(per_flag, axis=0)
    stderrs = (
        np.std(per_flag, axis=0, ddof=1) / np.sqrt(M) if M > 1 else np.zeros(ks.size)
    )
    return RadiusProfile(ks, values, stderrs, M, key)


def mean_width(cloud: PointCloud, M: int, key: StreamKey) -> Estimate:
    """Average over M uniform directions of max_j |<X_j, theta>|.

    This is the k = 1 mean outer radius computed without frames.
    """
    if M < 2:
        raise ValueError("need at least 2 directions")
    thetas = sphere_points(cloud.dim, M, key.child(0))
    vals = np.max(np.abs(cloud.points @ thetas.T), axis=0)
    return mean_and_stderr(vals, key)
