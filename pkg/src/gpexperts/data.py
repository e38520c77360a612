"""Dataset construction: a 1-D synthetic benchmark and delimited-file loading.

Both paths produce a :class:`Dataset` normalized to zero mean and unit
variance per input column and for the targets, using training statistics
only.  Metrics downstream are computed on this normalized scale; use
:func:`denormalize_targets` to map predictions back.
"""

import math
from dataclasses import dataclass

import numpy as np


@dataclass
class NormStats:
    """Training-set statistics used to normalize (and undo)."""

    x_mean: np.ndarray
    x_std: np.ndarray
    y_mean: float
    y_std: float


@dataclass
class Dataset:
    x_train: np.ndarray
    y_train: np.ndarray
    x_test: np.ndarray
    y_test: np.ndarray
    norm: NormStats

    @property
    def n_train(self) -> int:
        return self.x_train.shape[0]

    @property
    def n_test(self) -> int:
        return self.x_test.shape[0]


def synth_f(x):
    """Smooth multi-scale test function on [0, 1] (extrapolates fine nearby)."""
    x = np.asarray(x, dtype=float)
    return (
        5.0 * x**2 * np.sin(12.0 * x)
        + (x**3 - 0.5) * np.sin(3.0 * x - 0.5)
        + 4.0 * np.cos(2.0 * x)
    )


def _normalize(x_train, y_train, x_test, y_test) -> Dataset:
    x_mean = x_train.mean(axis=0)
    x_std = x_train.std(axis=0)
    x_std[x_std <= 0] = 1.0
    y_mean = float(y_train.mean())
    y_std = float(y_train.std())
    if y_std <= 0:
        y_std = 1.0
    stats = NormStats(x_mean, x_std, y_mean, y_std)
    return Dataset(
        (x_train - x_mean) / x_std,
        (y_train - y_mean) / y_std,
        (x_test - x_mean) / x_std,
        (y_test - y_mean) / y_std,
        stats,
    )


def denormalize_targets(dataset: Dataset, values):
    """Map normalized target-scale values back to the raw scale."""
    return np.asarray(values, dtype=float) * dataset.norm.y_std + dataset.norm.y_mean


def synth_dataset(
    n: int = 5000, n_test: int | None = None, noise_sd: float = 0.2, seed=0
) -> Dataset:
    """Noisy draws of the synthetic function, normalized and split.

    Training inputs are uniform on [0, 1] with Gaussian noise on the targets;
    test inputs are equispaced on [-0.2, 1.2] (so both ends extrapolate) with
    noise-free targets.
    """
    if n < 2:
        raise ValueError("need at least two training points")
    if n_test is None:
        n_test = max(n // 10, 2)
    rng = np.random.default_rng(seed)
    x_train = rng.uniform(0.0, 1.0, size=n)
    y_train = synth_f(x_train) + rng.normal(0.0, noise_sd, size=n)
    x_test = np.linspace(-0.2, 1.2, n_test)
    y_test = synth_f(x_test)
    return _normalize(x_train[:, None], y_train, x_test[:, None], y_test)


def _parse_table(path):
    rows = []
    delimiter = None
    first_line = True
    with open(path, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.strip()
            if not line:
                continue
            if delimiter is None and "," in line:
                delimiter = ","
            cells = line.split(delimiter)
            values = []
            for col, cell in enumerate(cells):
                try:
                    values.append(float(cell))
                except ValueError:
                    if first_line:
                        values = None  # header row
                        break
                    raise ValueError(
                        f"{path}: non-numeric value {cell!r} at line {lineno}, "
                        f"column {col}"
                    ) from None
            first_line = False
            if values is None:
                continue
            if rows and len(values) != len(rows[0]):
                raise ValueError(
                    f"{path}: line {lineno} has {len(values)} columns, "
                    f"expected {len(rows[0])}"
                )
            rows.append(values)
    if not rows:
        raise ValueError(f"{path}: no data rows")
    return np.asarray(rows, dtype=float)


def load_delimited(
    path,
    target_column: int = -1,
    train_fraction: float = 0.9,
    seed=0,
    n_train: int | None = None,
) -> Dataset:
    """Load a numeric CSV or whitespace table and split it for benchmarking.

    A single non-numeric first line is treated as a header.  The split is a
    seeded shuffle; ``n_train`` overrides the fraction with an explicit
    training-row count.
    """
    table = _parse_table(path)
    n, n_cols = table.shape
    if n_cols < 2:
        raise ValueError(f"{path}: need at least one feature column plus the target")
    if not -n_cols <= target_column < n_cols:
        raise ValueError(f"{path}: target column {target_column} out of range")
    y = table[:, target_column]
    x = np.delete(table, target_column % n_cols, axis=1)
    if n_train is None:
        if not 0.0 < train_fraction < 1.0:
            raise ValueError("train_fraction must be in (0, 1)")
        n_train = int(math.floor(train_fraction * n))
    if not 2 <= n_train < n:
        raise ValueError(f"split leaves no usable train/test rows (n_train={n_train})")
    perm = np.random.default_rng(seed).permutation(n)
    tr, te = perm[:n_train], perm[n_train:]
    return _normalize(x[tr], y[tr], x[te], y[te])
