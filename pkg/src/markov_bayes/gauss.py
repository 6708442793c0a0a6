"""Conjugate Gaussian linear regression with known noise variance.

The continuous counterpart of the finite updaters: observing data moves a
Gaussian belief over regression weights to another Gaussian, whether the
points arrive one at a time or all at once.  Starting from the flat
(improper) prior, the posterior mean is exactly the least-squares solution.

Everything here is floating point.  Solves go through QR and Cholesky
factorizations, never through an explicitly formed matrix inverse.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np
from scipy.linalg import cho_factor, cho_solve, solve_triangular

from .errors import DimensionMismatch, RankDeficient

#: Condition-number ceiling for the normal matrix of an improper-prior fit.
MAX_NORMAL_CONDITION = 1e12

_SYM_TOL = 1e-12


def _as_matrix(a, name: str) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2:
        raise DimensionMismatch(f"{name} must be a matrix, got shape {a.shape}")
    return a


def _as_vector(a, name: str) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 1:
        raise DimensionMismatch(f"{name} must be a vector, got shape {a.shape}")
    return a


def _check_noise(sigma: float) -> float:
    sigma = float(sigma)
    if not sigma > 0:
        raise ValueError(f"noise scale must be positive, got {sigma}")
    return sigma


@dataclass(eq=False)
class GaussChannel:
    """An affine map with additive Gaussian noise: ``y = W x + b + noise``."""

    weight: np.ndarray
    offset: np.ndarray
    noise_cov: np.ndarray

    def __post_init__(self):
        self.weight = _as_matrix(self.weight, "weight")
        self.offset = _as_vector(self.offset, "offset")
        self.noise_cov = _as_matrix(self.noise_cov, "noise_cov")
        k = self.weight.shape[0]
        if self.offset.shape != (k,) or self.noise_cov.shape != (k, k):
            raise DimensionMismatch(
                f"inconsistent output dimensions: weight {self.weight.shape}, "
                f"offset {self.offset.shape}, noise {self.noise_cov.shape}"
            )
        if np.max(np.abs(self.noise_cov - self.noise_cov.T), initial=0.0) > _SYM_TOL:
            raise ValueError("noise covariance is not symmetric")
        if np.min(np.linalg.eigvalsh(self.noise_cov)) < -_SYM_TOL:
            raise ValueError("noise covariance has a negative eigenvalue")

    def push(self, post: "GaussPosterior") -> tuple[np.ndarray, np.ndarray]:
        """Mean and covariance of the output when the input is ``post``."""
        if self.weight.shape[1] != post.mean.shape[0]:
            raise DimensionMismatch(
                f"channel expects dimension {self.weight.shape[1]}, "
                f"posterior has {post.mean.shape[0]}"
            )
        mean = self.weight @ post.mean + self.offset
        cov = self.weight @ post.cov @ self.weight.T + self.noise_cov
        return mean, 0.5 * (cov + cov.T)


@dataclass(eq=False)
class GaussPosterior:
    """A Gaussian belief over regression weights: mean vector and covariance."""

    mean: np.ndarray
    cov: np.ndarray

    def __post_init__(self):
        self.mean = _as_vector(self.mean, "mean")
        self.cov = _as_matrix(self.cov, "cov")
        n = self.mean.shape[0]
        if self.cov.shape != (n, n):
            raise DimensionMismatch(
                f"mean has dimension {n} but covariance has shape {self.cov.shape}"
            )
        if np.max(np.abs(self.cov - self.cov.T), initial=0.0) > _SYM_TOL * max(
            1.0, float(np.max(np.abs(self.cov)))
        ):
            raise ValueError("covariance is not symmetric")
        try:
            np.linalg.cholesky(self.cov)
        except np.linalg.LinAlgError:
            raise RankDeficient("covariance is not positive definite") from None


@dataclass(eq=False)
class RegressionData:
    """Observed inputs (rows of the design matrix) and scalar targets."""

    design: np.ndarray
    targets: np.ndarray

    def __post_init__(self):
        self.design = _as_matrix(self.design, "design")
        self.targets = _as_vector(self.targets, "targets")
        if self.design.shape[0] != self.targets.shape[0]:
            raise DimensionMismatch(
                f"{self.design.shape[0]} input rows but "
                f"{self.targets.shape[0]} targets"
            )
        if self.design.shape[0] == 0:
            raise ValueError("need at least one observation")

    def __len__(self) -> int:
        return self.design.shape[0]


def fit_posterior(data: RegressionData, sigma: float) -> GaussPosterior:
    """Posterior from the flat prior: mean solves least squares exactly.

    Requires at least as many observations as weight dimensions and a
    well-conditioned design; the covariance is the noise variance spread
    through the inverse normal matrix, computed from the QR factors.
    """
    sigma = _check_noise(sigma)
    x, y = data.design, data.targets
    n_obs, dim = x.shape
    if n_obs < dim:
        raise RankDeficient(
            f"{n_obs} observations cannot determine {dim} weights"
        )
    q, r = np.linalg.qr(x)
    cond = np.linalg.cond(r)
    if not np.isfinite(cond) or cond * cond >= MAX_NORMAL_CONDITION:
        raise RankDeficient(
            f"normal matrix condition {cond * cond:.3e} exceeds "
            f"{MAX_NORMAL_CONDITION:.0e}"
        )
    mean = solve_triangular(r, q.T @ y)
    r_inv = solve_triangular(r, np.eye(dim))
    cov = sigma * sigma * (r_inv @ r_inv.T)
    return GaussPosterior(mean=mean, cov=0.5 * (cov + cov.T))


def map_estimate(post: GaussPosterior) -> np.ndarray:
    """The mode of the posterior, which for a Gaussian is its mean."""
    return post.mean.copy()


def predictive_density(
    post: GaussPosterior, x_star, sigma: float
) -> tuple[float, float]:
    """Mean and variance of the output at ``x_star``, weights integrated out."""
    sigma = _check_noise(sigma)
    x_star = _as_vector(x_star, "x_star")
    if x_star.shape[0] != post.mean.shape[0]:
        raise DimensionMismatch(
            f"input has dimension {x_star.shape[0]}, "
            f"posterior has {post.mean.shape[0]}"
        )
    row = GaussChannel(
        weight=x_star[None, :],
        offset=np.zeros(1),
        noise_cov=np.array([[sigma * sigma]]),
    )
    mean, cov = row.push(post)
    return float(mean[0]), float(cov[0, 0])


def gauss_sequential(
    data: RegressionData, sigma: float, prior: GaussPosterior
) -> GaussPosterior:
    """Fold the observations in one at a time with the rank-one update."""
    sigma = _check_noise(sigma)
    if data.design.shape[1] != prior.mean.shape[0]:
        raise DimensionMismatch(
            f"data has dimension {data.design.shape[1]}, "
            f"prior has {prior.mean.shape[0]}"
        )
    mean = prior.mean.copy()
    cov = prior.cov.copy()
    for x, y in zip(data.design, data.targets):
        cx = cov @ x
        gain = cx / (sigma * sigma + x @ cx)
        mean = mean + gain * (y - x @ mean)
        cov = cov - np.outer(gain, cx)
        cov = 0.5 * (cov + cov.T)
    return GaussPosterior(mean=mean, cov=cov)


def gauss_batch(
    data: RegressionData, sigma: float, prior: GaussPosterior
) -> GaussPosterior:
    """Absorb all observations at once in precision form."""
    sigma = _check_noise(sigma)
    x, y = data.design, data.targets
    dim = prior.mean.shape[0]
    if x.shape[1] != dim:
        raise DimensionMismatch(
            f"data has dimension {x.shape[1]}, prior has {dim}"
        )
    eye = np.eye(dim)
    prior_prec = cho_solve(cho_factor(prior.cov), eye)
    precision = prior_prec + (x.T @ x) / (sigma * sigma)
    shift = prior_prec @ prior.mean + (x.T @ y) / (sigma * sigma)
    factor = cho_factor(0.5 * (precision + precision.T))
    mean = cho_solve(factor, shift)
    cov = cho_solve(factor, eye)
    return GaussPosterior(mean=mean, cov=0.5 * (cov + cov.T))
