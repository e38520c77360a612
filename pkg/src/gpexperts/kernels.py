"""Anisotropic squared-exponential kernel and its hyperparameter gradients.

The kernel is

    k(x, x') = signal_variance * exp(-0.5 * sum_d (x_d - x'_d)^2 / lengthscales[d])

with one positive lengthscale per input dimension (note the lengthscales act
on squared distances, i.e. they carry squared-length units).  Gradients are
taken with respect to log-hyperparameters so that optimizers can work on an
unconstrained vector; see :meth:`Hyperparams.to_log_vector` for the layout.
"""

from dataclasses import dataclass

import numpy as np
from scipy.spatial.distance import cdist


@dataclass(frozen=True)
class Hyperparams:
    """Kernel and noise hyperparameters, all strictly positive.

    Attributes
    ----------
    signal_variance : prior variance of the latent function, k(x, x).
    lengthscales : per-dimension scales dividing squared distances, shape (D,).
    noise_variance : observation noise variance added to the kernel diagonal.
    """

    signal_variance: float
    lengthscales: np.ndarray
    noise_variance: float

    def __post_init__(self):
        ls = np.atleast_1d(np.asarray(self.lengthscales, dtype=float))
        object.__setattr__(self, "lengthscales", ls)
        if self.signal_variance <= 0 or self.noise_variance < 0:
            raise ValueError("signal variance must be > 0 and noise variance >= 0")
        if np.any(ls <= 0):
            raise ValueError("lengthscales must be > 0")

    @property
    def dim(self) -> int:
        return self.lengthscales.shape[0]

    def to_log_vector(self) -> np.ndarray:
        """Pack as [log signal_variance, log lengthscales..., log noise_variance]."""
        return np.log(
            np.concatenate(
                [[self.signal_variance], self.lengthscales, [self.noise_variance]]
            )
        )

    @staticmethod
    def from_log_vector(theta) -> "Hyperparams":
        theta = np.asarray(theta, dtype=float)
        vals = np.exp(theta)
        return Hyperparams(float(vals[0]), vals[1:-1].copy(), float(vals[-1]))


def _as_2d(x):
    x = np.asarray(x, dtype=float)
    return x[None, :] if x.ndim == 1 else x


def _check_dims(x, x2, hp):
    if x.shape[1] != x2.shape[1]:
        raise ValueError(f"input dims differ: {x.shape[1]} vs {x2.shape[1]}")
    if x.shape[1] != hp.dim:
        raise ValueError(f"inputs have dim {x.shape[1]}, hyperparams have {hp.dim}")


def kernel_eval(x, x2, hp: Hyperparams) -> float:
    """Kernel value for a single pair of points."""
    x = np.asarray(x, dtype=float).ravel()
    x2 = np.asarray(x2, dtype=float).ravel()
    if x.shape != x2.shape or x.shape[0] != hp.dim:
        raise ValueError("point dimensions must match each other and hp")
    d2 = np.sum((x - x2) ** 2 / hp.lengthscales)
    return float(hp.signal_variance * np.exp(-0.5 * d2))


def kernel_matrix(x, x2, hp: Hyperparams) -> np.ndarray:
    """Cross-kernel matrix of shape (n, m) for row sets ``x`` and ``x2``.

    Squared distances are computed from explicit coordinate differences, so
    identical rows give exactly k = signal_variance.
    """
    x, x2 = _as_2d(x), _as_2d(x2)
    _check_dims(x, x2, hp)
    scale = 1.0 / np.sqrt(hp.lengthscales)
    d2 = cdist(x * scale, x2 * scale, metric="sqeuclidean")
    return hp.signal_variance * np.exp(-0.5 * d2)


def kernel_grad(x, hp: Hyperparams) -> np.ndarray:
    """Gradients of kernel_matrix(x, x, hp) w.r.t. log-hyperparameters.

    Returns an array of shape (1 + D, n, n): slice 0 is dK/dlog(signal_variance)
    (= K itself) and slice 1 + d is dK/dlog(lengthscales[d]).  The noise term
    is not part of K and is handled by the marginal-likelihood code.
    """
    x = _as_2d(x)
    if x.shape[1] != hp.dim:
        raise ValueError(f"inputs have dim {x.shape[1]}, hyperparams have {hp.dim}")
    k = kernel_matrix(x, x, hp)
    out = np.empty((1 + hp.dim, x.shape[0], x.shape[0]))
    out[0] = k
    for d in range(hp.dim):
        sqd = (x[:, d, None] - x[None, :, d]) ** 2
        # d/dlog(l_d) of exp(-0.5 * sqd / l_d) multiplies by 0.5 * sqd / l_d.
        out[1 + d] = k * (0.5 * sqd / hp.lengthscales[d])
    return out
