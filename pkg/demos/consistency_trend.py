"""
More data per expert, better dependent aggregation
==================================================

Holds the committee fixed at eight experts and grows the training set, so
every expert sees more of its region. The dependent aggregator's in-sample
error should fall roughly in half each time the data doubles. Errors are
averaged over five seeds and scored inside the sampled interval; the test
grid's extrapolation tails are excluded because no amount of data helps
there.
"""

import numpy as np

from gpexperts import npae_aggregate, partition_kmeans, smse, synth_dataset
from gpexperts.experts import train_ensemble

print(f"{'n':>5} {'per expert':>10} {'smse':>9}")
for n in (400, 800, 1600, 3200):
    vals = []
    for seed in range(5):
        data = synth_dataset(n=n, n_test=200, noise_sd=0.2, seed=seed)
        inside = (data.x_test[:, 0] >= 0.0) & (data.x_test[:, 0] <= 1.0)
        parts = partition_kmeans(data.x_train, 8, seed=seed + 1)
        ensemble = train_ensemble(data.x_train, data.y_train, parts, restarts=1, seed=seed + 2)
        pred = npae_aggregate(ensemble, data.x_test)
        vals.append(smse(data.y_test[inside], pred.means[inside]))
    print(f"{n:>5} {n // 8:>10} {np.mean(vals):>9.5f}")
