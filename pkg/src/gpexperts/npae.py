"""Dependent-expert aggregation of local GP predictions (NPAE).

Each expert's posterior mean is a linear function of its targets, so the
vector of expert means and the latent function value at a test point are
jointly Gaussian.  Aggregation conditions on the expert means:

    mean = c^T M^{-1} mu,    variance = k(x*, x*) - c^T M^{-1} c

where c[i] = Cov(mu_i, f*), M[i, j] = Cov(mu_i, mu_j), and mu stacks the
expert means.  This is the best linear unbiased combination of the expert
means and, unlike product-style rules, accounts for their correlations.

The between-expert covariance is exact for disjoint parts: off-diagonal
entries come from the cross-kernels between the parts, and the diagonal
includes each expert's noise term, Var(mu_i) = w_i (K_i + noise I) w_i^T,
which makes M the true second moment of the expert means (and equal to c[i]
on the diagonal).  Pass ``noise_free_diag=True`` to drop the noise term for
comparison runs.

Every test point needs its own small solve of the n_experts-sized system;
restricting ``subset`` to a selected group of experts shrinks that system,
which is where graph-based selection earns its speedup.
"""

from dataclasses import dataclass

import numpy as np

from .gp import PredictiveDist
from .kernels import kernel_matrix
from .linalg import solve_psd_robust, solve_spd


@dataclass
class PointwiseCov:
    """Aggregation inputs at one test point.

    target_cov[i] is the covariance between expert i's mean and the latent
    target; mean_cov[i, j] is the covariance between expert means i and j;
    prior_var is k(x*, x*).
    """

    target_cov: np.ndarray
    mean_cov: np.ndarray
    prior_var: float


def _assemble(ensemble, xs, subset, noise_free_diag):
    """Batched covariance pieces for all test points at once.

    Returns (target_cov (t, m), mean_cov (t, m, m), expert_means (t, m)).
    The cross-kernels between parts do not depend on the test point and are
    formed once per pair; everything per-point is pure products.
    """
    xs = np.asarray(xs, dtype=float)
    if xs.ndim == 1:
        xs = xs[:, None]
    hp = ensemble.hp
    experts = [ensemble.experts[i] for i in subset]
    m = len(experts)
    nt = xs.shape[0]

    # Per expert: k(X_i, xs) and w_i = C_i^{-1} k(X_i, xs), both (n_i, t).
    ks = [kernel_matrix(e.x, xs, hp) for e in experts]
    ws = [solve_spd(e.chol, k) for e, k in zip(experts, ks)]

    target_cov = np.empty((nt, m))
    means = np.empty((nt, m))
    for i, e in enumerate(experts):
        target_cov[:, i] = np.sum(ws[i] * ks[i], axis=0)
        means[:, i] = ks[i].T @ e.alpha

    mean_cov = np.empty((nt, m, m))
    for i in range(m):
        if noise_free_diag:
            kii = kernel_matrix(experts[i].x, experts[i].x, hp)
            mean_cov[:, i, i] = np.sum((kii @ ws[i]) * ws[i], axis=0)
        else:
            # w_i (K_i + noise I) w_i^T collapses to w_i^T k(X_i, x*).
            mean_cov[:, i, i] = target_cov[:, i]
        for j in range(i + 1, m):
            kij = kernel_matrix(experts[i].x, experts[j].x, hp)
            cov = np.sum((kij.T @ ws[i]) * ws[j], axis=0)
            mean_cov[:, i, j] = cov
            mean_cov[:, j, i] = cov
    return target_cov, mean_cov, means


def pointwise_cov(ensemble, x_star, subset=None, noise_free_diag=False) -> PointwiseCov:
    """Covariance pieces the aggregation needs at a single test point."""
    subset = ensemble.subset_or_all(subset)
    x_star = np.atleast_2d(np.asarray(x_star, dtype=float))
    target_cov, mean_cov, _ = _assemble(ensemble, x_star, subset, noise_free_diag)
    return PointwiseCov(target_cov[0], mean_cov[0], float(ensemble.hp.signal_variance))


def npae_aggregate(
    ensemble, xs, subset=None, noise_free_diag=False
) -> PredictiveDist:
    """Aggregate expert predictions through their joint covariance.

    Solves one symmetric system per test point; singular systems (e.g.
    duplicated experts) fall back to a pseudo-inverse, and points whose solve
    produces non-finite values revert to the prior and are flagged.
    """
    subset = ensemble.subset_or_all(subset)
    target_cov, mean_cov, means = _assemble(ensemble, xs, subset, noise_free_diag)
    prior_var = float(ensemble.hp.signal_variance)
    nt = target_cov.shape[0]

    out_mean = np.zeros(nt)
    out_var = np.full(nt, prior_var)
    failed = np.zeros(nt, dtype=bool)
    for t in range(nt):
        rhs = np.column_stack([means[t], target_cov[t]])
        try:
            sol = solve_psd_robust(mean_cov[t], rhs)
        except np.linalg.LinAlgError:
            failed[t] = True
            continue
        mean = float(target_cov[t] @ sol[:, 0])
        var = prior_var - float(target_cov[t] @ sol[:, 1])
        if not (np.isfinite(mean) and np.isfinite(var)):
            failed[t] = True
            continue
        out_mean[t] = mean
        out_var[t] = min(max(var, 0.0), prior_var)
    return PredictiveDist(out_mean, out_var, failed if failed.any() else None)
