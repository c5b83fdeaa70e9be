"""Haar subspaces, nested flags, projections and sphere marginal moments."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .streams import StreamKey, standard_normal

_ORTHO_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class Subspace:
    """A k-dimensional subspace of R^n given by an orthonormal (n, k) frame."""

    frame: np.ndarray

    @property
    def n(self) -> int:
        return self.frame.shape[0]

    @property
    def k(self) -> int:
        return self.frame.shape[1]

    def __post_init__(self) -> None:
        n, k = self.frame.shape
        if not 1 <= k <= n:
            raise ValueError("need 1 <= k <= n")
        gram = self.frame.T @ self.frame
        if np.max(np.abs(gram - np.eye(k))) > _ORTHO_TOL:
            raise ValueError("frame columns are not orthonormal")


@dataclass(frozen=True, eq=False)
class Flag:
    """A full nested chain of subspaces from one orthonormal basis.

    The first k columns form a subspace that is Haar on G_{n,k} for every k,
    and the chain makes projected norms monotone in k pathwise.
    """

    basis: np.ndarray

    @property
    def n(self) -> int:
        return self.basis.shape[0]

    def subspace(self, k: int) -> Subspace:
        return Subspace(self.basis[:, :k])


def _oriented_orthonormal(a: np.ndarray) -> np.ndarray:
    # QR with the sign convention diag(R) > 0: deterministic and Haar-correct.
    q, r = np.linalg.qr(a)
    d = np.sign(np.diagonal(r))
    d = np.where(d == 0.0, 1.0, d)
    return q * d


def haar_subspace(n: int, k: int, key: StreamKey) -> Subspace:
    """Haar-distributed k-dimensional subspace of R^n."""
    if not 1 <= k <= n:
        raise ValueError("need 1 <= k <= n")
    g = standard_normal(key, n * k).reshape(n, k)
    return Subspace(_oriented_orthonormal(g))


def haar_flag(n: int, key: StreamKey) -> Flag:
    """Haar orthonormal basis of R^n; every prefix is Haar on G_{n,k}."""
    if n < 1:
        raise ValueError("dimension must be >= 1")
    g = standard_normal(key, n * n).reshape(n, n)
    return Flag(_oriented_orthonormal(g))


def project(subspace: Subspace, x: np.ndarray) -> np.ndarray:
    """Coordinates of the orthogonal projection onto the subspace.

    Returns frame^T x, whose Euclidean norm is |P_F x|.  Accepts a single
    vector (n,) or a batch (m, n).
    """
    x = np.asarray(x, dtype=float)
    if x.shape[-1] != subspace.n:
        raise ValueError("vector dimension mismatch")
    return x @ subspace.frame


def sphere_points(n: int, count: int, key: StreamKey) -> np.ndarray:
    """count i.i.d. uniform points on S^{n-1} as a (count, n) array."""
    if n < 1:
        raise ValueError("dimension must be >= 1")
    z = standard_normal(key, count * n).reshape(count, n)
    return z / np.linalg.norm(z, axis=1, keepdims=True)


def sphere_sample(n: int, key: StreamKey) -> np.ndarray:
    """One uniform point on S^{n-1}."""
    return sphere_points(n, 1, key)[0]


def sphere_marginal_moment(k: int, q: float) -> float:
    """Exact m_{k,q} = integral of |theta_1|^q over S^{k-1}.

    m_{k,q} = Gamma((q+1)/2) Gamma(k/2) / (sqrt(pi) Gamma((k+q)/2)), finite
    for q > -1; evaluated in log space so real q and large k are safe.
    For k = 1 the value is 1 for every q.
    """
    if k < 1:
        raise ValueError("dimension must be >= 1")
    if q <= -1.0:
        raise ValueError("divergent marginal moment")
    log_m = gammaln((q + 1.0) / 2.0) + gammaln(k / 2.0) - gammaln((k + q) / 2.0)
    return float(np.exp(log_m) / np.sqrt(np.pi))
