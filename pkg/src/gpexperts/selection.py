"""Graph-based expert selection.

Expert means computed over the test inputs are treated as samples of an
m-dimensional zero-mean random vector (targets are normalized, so the prior
mean is zero); the sparse inverse of their second-moment matrix (estimated
by an l1-penalized maximum likelihood, the graphical lasso) defines a
dependency graph between experts.  Experts with large total off-diagonal
precision mass are strongly coupled to the rest and carry the most
information, so aggregation can be restricted to the top-connected fraction
at little cost in accuracy.  Keeping raw magnitudes (no correlation
rescaling) matters: weak experts predict low-amplitude curves, which is
exactly what drops their coupling strength and ranks them last.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np

from .experts import ExpertEnsemble, expert_predict


@dataclass
class ExpertGraph:
    """Estimated dependency structure over experts.

    ``order`` ranks experts most-connected first (ties broken by ascending
    index); ``selected`` is the sorted index set of the kept experts.
    """

    sample_cov: np.ndarray
    precision: np.ndarray
    penalty: float
    importance: np.ndarray
    order: np.ndarray
    selected: np.ndarray
    alpha: float


def prediction_covariance(ensemble: ExpertEnsemble, xs) -> np.ndarray:
    """Second-moment matrix of expert means across the test inputs.

    S[i, j] = mean_t mu_i(x_t) * mu_j(x_t), the zero-mean sample covariance.
    An expert that predicts a constant carries no coupling information; its
    off-diagonal entries are set to 0 (diagonal 1, isolating the node) and a
    warning is issued.
    """
    xs = np.asarray(xs, dtype=float)
    if (xs.shape[0] if xs.ndim > 0 else 0) < 2:
        raise ValueError("need at least two test points to estimate covariance")
    means = np.column_stack(
        [expert_predict(e, xs).means for e in ensemble.experts]
    )
    cov = means.T @ means / means.shape[0]
    degenerate = np.ptp(means, axis=0) == 0.0
    if degenerate.any():
        warnings.warn(
            f"{int(degenerate.sum())} expert(s) predict a constant; "
            "their graph couplings are set to zero",
            RuntimeWarning,
            stacklevel=2,
        )
        cov[degenerate, :] = 0.0
        cov[:, degenerate] = 0.0
        diag = np.diagonal(cov).copy()
        diag[degenerate] = 1.0
        np.fill_diagonal(cov, diag)
    return cov


def _penalized_objective(s, omega, lam):
    sign, logdet = np.linalg.slogdet(omega)
    if sign <= 0:
        return -np.inf
    off_l1 = np.sum(np.abs(omega)) - np.sum(np.abs(np.diagonal(omega)))
    return logdet - float(np.sum(s * omega)) - lam * off_l1


def _soft(z, lam):
    return math.copysign(max(abs(z) - lam, 0.0), z)


def graphical_lasso(
    s,
    lam: float,
    tol: float = 1e-4,
    max_iter: int = 100,
    return_history: bool = False,
):
    """l1-penalized precision estimate maximizing log det O - tr(SO) - lam*|O|_1.

    Only off-diagonal entries are penalized.  The solver is a block
    coordinate descent on the precision matrix: each column update solves its
    lasso subproblem by cyclic soft-thresholding, warm-started at the current
    column so the penalized objective never decreases.  Convergence is
    declared when the mean absolute change of the working covariance over a
    sweep drops below ``tol`` times the mean absolute off-diagonal of S.

    Returns the precision matrix, or ``(precision, objectives)`` with the
    per-sweep objective values when ``return_history`` is set.  On hitting
    ``max_iter`` the best iterate is returned with a warning.
    """
    s = np.asarray(s, dtype=float)
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise ValueError("S must be square")
    if not np.allclose(s, s.T, atol=1e-10):
        raise ValueError("S must be symmetric")
    if np.any(np.diagonal(s) <= 0):
        raise ValueError("S must have a positive diagonal")
    if lam < 0:
        raise ValueError("penalty must be >= 0")
    m = s.shape[0]
    if m == 1:
        omega = np.array([[1.0 / s[0, 0]]])
        return (omega, [_penalized_objective(s, omega, lam)]) if return_history else omega

    omega = np.diag(1.0 / np.diagonal(s))
    cov = np.diag(np.diagonal(s)).astype(float)  # working covariance, = omega^{-1}
    off_scale = (np.sum(np.abs(s)) - np.sum(np.abs(np.diagonal(s)))) / (m * (m - 1))
    thresh = tol * (off_scale if off_scale > 0 else 1.0)
    inner_tol = 1e-10 * float(np.max(np.diagonal(s)))

    objectives = []
    best_obj, best_omega = -np.inf, omega.copy()
    converged = False
    idx_all = np.arange(m)
    for _ in range(max_iter):
        cov_prev = cov.copy()
        for j in range(m):
            idx = np.concatenate([idx_all[:j], idx_all[j + 1 :]])
            s12, s22 = s[idx, j], s[j, j]
            w12, w22 = cov[idx, j], cov[j, j]
            # Inverse of the precision submatrix without row/column j.
            q = cov[np.ix_(idx, idx)] - np.outer(w12, w12) / w22
            qd = np.diagonal(q)
            # Lasso subproblem for the off-diagonal column u:
            #   min_u  (s22/2) u^T q u + s12^T u + lam * |u|_1
            u = omega[idx, j].copy()
            r = q @ u
            for _ in range(1000):
                delta = 0.0
                for k in range(m - 1):
                    old = u[k]
                    z = -s12[k] - s22 * (r[k] - qd[k] * old)
                    new = _soft(z, lam) / (s22 * qd[k])
                    if new != old:
                        u[k] = new
                        r += q[:, k] * (new - old)
                        delta = max(delta, abs(new - old))
                if delta <= inner_tol:
                    break
            qu = q @ u
            omega[idx, j] = u
            omega[j, idx] = u
            omega[j, j] = float(u @ qu) + 1.0 / s22
            # Refresh the working covariance blocks from the block inverse.
            cov[np.ix_(idx, idx)] = q + np.outer(qu, qu) * s22
            w12_new = -qu * s22
            cov[idx, j] = w12_new
            cov[j, idx] = w12_new
            cov[j, j] = s22
        obj = _penalized_objective(s, omega, lam)
        objectives.append(obj)
        if obj >= best_obj:
            best_obj, best_omega = obj, omega.copy()
        if float(np.mean(np.abs(cov - cov_prev))) < thresh:
            converged = True
            break
    if not converged:
        warnings.warn(
            f"graphical lasso did not converge in {max_iter} sweeps",
            RuntimeWarning,
            stacklevel=2,
        )
    return (best_omega, objectives) if return_history else best_omega


def rank_importance(omega):
    """Total absolute off-diagonal precision per expert, and the ranking.

    Returns ``(importance, order)``; order lists expert indices by descending
    importance with ties broken by ascending index.
    """
    omega = np.asarray(omega, dtype=float)
    importance = np.sum(np.abs(omega), axis=1) - np.abs(np.diagonal(omega))
    order = np.lexsort((np.arange(omega.shape[0]), -importance))
    return importance, order


def select_experts(order, n_experts: int, alpha: float) -> np.ndarray:
    """Sorted indices of the ceil(alpha * m) most-connected experts."""
    if not 0.0 < alpha <= 1.0:
        raise ValueError("alpha must be in (0, 1]")
    # Guard ceil against float dust in alpha * m (e.g. 0.1 * 3).
    keep = min(max(math.ceil(alpha * n_experts - 1e-12), 1), n_experts)
    return np.sort(np.asarray(order[:keep], dtype=int))


def expert_graph(
    ensemble: ExpertEnsemble,
    xs,
    lam: float = 0.1,
    alpha: float = 1.0,
    tol: float = 1e-4,
    max_iter: int = 100,
) -> ExpertGraph:
    """Estimate the expert dependency graph and pick the experts to keep."""
    cov = prediction_covariance(ensemble, xs)
    omega = graphical_lasso(cov, lam, tol=tol, max_iter=max_iter)
    importance, order = rank_importance(omega)
    selected = select_experts(order, ensemble.n_experts, alpha)
    return ExpertGraph(cov, omega, lam, importance, order, selected, alpha)


def save_graph(graph: ExpertGraph, path) -> None:
    """Write the precision matrix as an edge list CSV: i, j, precision.

    Upper-triangle entries only; the diagonal is always included, while
    off-diagonal rows appear only for nonzero entries (the graph's edges).
    """
    omega = graph.precision
    lines = ["i,j,precision"]
    for i in range(omega.shape[0]):
        for j in range(i, omega.shape[0]):
            if i == j or omega[i, j] != 0.0:
                lines.append(f"{i},{j},{float(omega[i, j])!r}")
    with open(path, "w", encoding="ascii") as fh:
        fh.write("\n".join(lines) + "\n")
