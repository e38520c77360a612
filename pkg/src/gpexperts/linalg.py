"""Shared dense linear-algebra helpers with explicit failure policies."""

import numpy as np
from scipy.linalg import cho_factor, cho_solve, eigh


class SingularMatrixError(np.linalg.LinAlgError):
    """Raised when a matrix stays non-factorizable after jitter escalation."""


def chol_with_jitter(a, initial=1e-10, maximum=1e-4, stat="mean"):
    """Lower Cholesky factor of ``a``, adding escalating diagonal jitter.

    The first attempt uses no jitter.  On failure, ``initial * s`` is added
    to the diagonal, where ``s`` is the mean (or max) of ``diag(a)``, and the
    jitter grows tenfold per retry until it would exceed ``maximum * s``.

    Returns ``(L, jitter)`` with the jitter actually applied (0.0 for a clean
    factorization).  Raises :class:`SingularMatrixError` once the ladder is
    exhausted.
    """
    a = np.asarray(a, dtype=float)
    diag = np.diagonal(a)
    scale = float(np.mean(diag)) if stat == "mean" else float(np.max(diag))
    if not np.isfinite(scale) or scale <= 0.0:
        scale = 1.0
    jitter = 0.0
    while True:
        try:
            c = a if jitter == 0.0 else a + jitter * np.eye(a.shape[0])
            low, _ = cho_factor(c, lower=True, check_finite=False)
            return low, jitter
        except np.linalg.LinAlgError:
            jitter = initial * scale if jitter == 0.0 else jitter * 10.0
            if jitter > maximum * scale * (1.0 + 1e-12):
                raise SingularMatrixError(
                    f"Cholesky failed at jitter {jitter:.3e} (scale {scale:.3e})"
                ) from None


def solve_spd(low, b):
    """Solve ``a x = b`` given the lower Cholesky factor of ``a``."""
    return cho_solve((low, True), b, check_finite=False)


def solve_psd_robust(a, b, initial=1e-10, maximum=1e-6):
    """Solve ``a x = b`` for symmetric PSD ``a`` that may be singular.

    Tries Cholesky with escalating jitter (scaled by the max diagonal entry);
    if the matrix never factorizes, falls back to an eigendecomposition
    pseudo-inverse that drops eigenvalues below ``n * eps * lambda_max``.
    """
    a = np.asarray(a, dtype=float)
    # a non-positive diagonal leaves nothing to scale jitter against
    if float(np.max(np.diagonal(a))) > 0.0:
        try:
            low, _ = chol_with_jitter(a, initial=initial, maximum=maximum, stat="max")
            return solve_spd(low, b)
        except SingularMatrixError:
            pass
    w, v = eigh(a, check_finite=False)
    cutoff = a.shape[0] * np.finfo(float).eps * max(float(w.max()), 0.0)
    keep = w > cutoff
    if not np.any(keep):
        return np.zeros_like(np.asarray(b, dtype=float))
    vk = v[:, keep]
    return vk @ ((vk.T @ b).T / w[keep]).T
