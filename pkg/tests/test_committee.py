"""Product and committee fusion rules over independent experts."""

import numpy as np
import pytest

from conftest import manual_ensemble
from gpexperts import (
    Hyperparams,
    bcm_aggregate,
    compute_weights,
    expert_predict,
    grbcm_aggregate,
    partition_kmeans,
    poe_aggregate,
    train_ensemble,
)
from gpexperts.experts import _factorize_expert


def make_ensemble(n=36, m=3, seed=0):
    rng = np.random.default_rng(seed)
    x = rng.uniform(0, 1, size=(n, 1))
    y = np.sin(5 * x).ravel() + 0.1 * rng.normal(size=n)
    parts = partition_kmeans(x, m, seed=seed + 1)
    return train_ensemble(x, y, parts, restarts=1, seed=seed + 2)


def duplicated(m, seed=0):
    hp = Hyperparams(1.0, [0.4], 0.1)
    rng = np.random.default_rng(seed)
    x = rng.uniform(0, 1, size=(8, 1))
    y = np.cos(3 * x).ravel()
    return manual_ensemble([(x, y)] * m, hp)


def expert_moments(ensemble, xs):
    preds = [expert_predict(e, xs) for e in ensemble.experts]
    means = np.column_stack([p.means for p in preds])
    variances = np.column_stack([p.variances for p in preds])
    return means, variances


def test_weight_schemes():
    v = np.array([[0.5, 0.2], [0.9, 0.9]])
    np.testing.assert_array_equal(compute_weights("ones", v, 1.0), 1.0)
    np.testing.assert_array_equal(compute_weights("uniform", v, 1.0), 0.5)
    ent = compute_weights("diff_entropy", v, 1.0)
    np.testing.assert_allclose(ent, 0.5 * (np.log(1.0) - np.log(v)))
    with pytest.raises(ValueError):
        compute_weights("softmax", v, 1.0)


def test_diff_entropy_weights_clip_at_zero():
    # an expert less confident than the prior contributes nothing
    v = np.array([[2.0, 0.5]])
    w = compute_weights("diff_entropy", v, 1.0)
    assert w[0, 0] == 0.0
    assert w[0, 1] == pytest.approx(0.5 * np.log(2.0))


def test_poe_matches_precision_weighted_formula():
    ens = make_ensemble(seed=1)
    xs = np.linspace(0.1, 0.9, 9)[:, None]
    means, variances = expert_moments(ens, xs)
    fused = poe_aggregate(ens, xs)
    prec = np.sum(1.0 / variances, axis=1)
    np.testing.assert_allclose(fused.variances, 1.0 / prec, rtol=1e-12)
    np.testing.assert_allclose(
        fused.means, np.sum(means / variances, axis=1) / prec, rtol=1e-10
    )


def test_poe_precision_is_additive():
    ens = make_ensemble(seed=2)
    xs = np.linspace(0.1, 0.9, 5)[:, None]
    full = poe_aggregate(ens, xs)
    member_prec = sum(
        1.0 / poe_aggregate(ens, xs, subset=[i]).variances for i in range(3)
    )
    np.testing.assert_allclose(1.0 / full.variances, member_prec, rtol=1e-10)


def test_poe_adding_an_expert_never_loses_precision():
    ens = make_ensemble(seed=3)
    xs = np.linspace(0, 1, 7)[:, None]
    two = poe_aggregate(ens, xs, subset=[0, 1])
    three = poe_aggregate(ens, xs, subset=[0, 1, 2])
    assert np.all(three.variances <= two.variances + 1e-15)


def test_poe_duplicate_experts_shrink_variance_m_fold():
    m = 4
    ens = duplicated(m)
    xs = np.array([[0.3], [0.8]])
    single = expert_predict(ens.experts[0], xs)
    fused = poe_aggregate(ens, xs)
    np.testing.assert_allclose(fused.variances, single.variances / m, rtol=1e-12)
    np.testing.assert_allclose(fused.means, single.means, rtol=1e-12)


def test_gpoe_uniform_weights_leave_duplicates_honest():
    # beta summing to one keeps the fused variance at the member variance
    ens = duplicated(5)
    xs = np.array([[0.3], [0.8]])
    single = expert_predict(ens.experts[0], xs)
    fused = poe_aggregate(ens, xs, scheme="uniform")
    np.testing.assert_allclose(fused.variances, single.variances, rtol=1e-12)
    np.testing.assert_allclose(fused.means, single.means, rtol=1e-12)


def test_gpoe_uniform_variance_is_m_times_plain_product():
    ens = make_ensemble(seed=4)
    xs = np.linspace(0.2, 0.8, 6)[:, None]
    plain = poe_aggregate(ens, xs)
    uniform = poe_aggregate(ens, xs, scheme="uniform")
    np.testing.assert_allclose(uniform.variances, 3.0 * plain.variances, rtol=1e-12)
    np.testing.assert_allclose(uniform.means, plain.means, rtol=1e-12)


def test_positive_variance_required():
    # a noiseless expert has exactly zero latent variance at its own point
    hp = Hyperparams(1.0, [1.0], 0.0)
    ens = manual_ensemble([(np.array([[0.5]]), np.array([1.0]))], hp)
    with pytest.raises(ValueError):
        poe_aggregate(ens, np.array([[0.5]]))


def test_bcm_single_expert_is_that_expert():
    ens = make_ensemble(seed=5)
    xs = np.linspace(0.1, 0.9, 5)[:, None]
    fused = bcm_aggregate(ens, xs, subset=[1])
    ref = expert_predict(ens.experts[1], xs)
    np.testing.assert_allclose(fused.means, ref.means, rtol=1e-12)
    np.testing.assert_allclose(fused.variances, ref.variances, rtol=1e-12)


def test_bcm_matches_prior_corrected_formula():
    ens = make_ensemble(seed=6)
    xs = np.linspace(0.1, 0.9, 9)[:, None]
    means, variances = expert_moments(ens, xs)
    prior = ens.hp.signal_variance + ens.hp.noise_variance
    fused = bcm_aggregate(ens, xs)
    prec = np.sum(1.0 / variances, axis=1) + (1.0 - 3) / prior
    np.testing.assert_allclose(fused.variances, 1.0 / prec, rtol=1e-10)
    np.testing.assert_allclose(
        fused.means, np.sum(means / variances, axis=1) / prec, rtol=1e-8
    )


def test_bcm_vanishing_weights_recover_the_prior():
    # far from all data with near-zero noise the correction term dominates
    hp = Hyperparams(1.0, [0.5], 1e-10)
    rng = np.random.default_rng(7)
    blocks = [
        (rng.uniform(0, 1, size=(6, 1)), rng.normal(size=6)) for _ in range(3)
    ]
    ens = manual_ensemble(blocks, hp)
    far = np.array([[50.0]])
    fused = bcm_aggregate(ens, far, scheme="diff_entropy")
    prior = hp.signal_variance + hp.noise_variance
    assert fused.means[0] == pytest.approx(0.0, abs=1e-6)
    assert fused.variances[0] == pytest.approx(prior, rel=1e-6)


def test_rbcm_downweights_the_clueless_expert():
    # beta -> 0 where an expert sits at prior variance, so rbcm stays bounded
    ens = make_ensemble(seed=8)
    xs = np.linspace(-2.0, 3.0, 30)[:, None]
    fused = bcm_aggregate(ens, xs, scheme="diff_entropy")
    prior = ens.hp.signal_variance + ens.hp.noise_variance
    assert np.all(fused.variances <= prior * (1 + 1e-12))
    assert np.all(fused.variances > 0)


def test_grbcm_two_experts_equal_augmented_model():
    ens = make_ensemble(n=30, m=2, seed=9)
    xs = np.linspace(0.1, 0.9, 8)[:, None]
    fused = grbcm_aggregate(ens, xs, base_choice="top_importance", order=[0, 1])
    base, other = ens.experts[0], ens.experts[1]
    aug = _factorize_expert(
        1,
        np.vstack([base.x, other.x]),
        np.concatenate([base.y, other.y]),
        ens.hp,
    )
    ref = expert_predict(aug, xs)
    np.testing.assert_allclose(fused.means, ref.means, rtol=1e-12)
    np.testing.assert_allclose(fused.variances, ref.variances, rtol=1e-12)


def test_grbcm_three_experts_match_manual_fusion():
    ens = make_ensemble(n=45, m=3, seed=10)
    xs = np.linspace(0.1, 0.9, 8)[:, None]
    fused = grbcm_aggregate(ens, xs, base_choice="top_importance", order=[2, 0, 1])

    base = ens.experts[2]
    base_pred = expert_predict(base, xs)
    aug_preds = []
    for i in (0, 1):  # subset order with the base removed
        e = ens.experts[i]
        aug = _factorize_expert(
            i, np.vstack([base.x, e.x]), np.concatenate([base.y, e.y]), ens.hp
        )
        aug_preds.append(expert_predict(aug, xs))

    betas = np.column_stack(
        [
            np.ones(len(xs)),
            np.maximum(
                0.5 * (np.log(base_pred.variances) - np.log(aug_preds[1].variances)),
                0.0,
            ),
        ]
    )
    aug_vars = np.column_stack([p.variances for p in aug_preds])
    aug_means = np.column_stack([p.means for p in aug_preds])
    prec = np.sum(betas / aug_vars, axis=1) + (
        1.0 - betas.sum(axis=1)
    ) / base_pred.variances
    mean = (
        np.sum(betas * aug_means / aug_vars, axis=1)
        + (1.0 - betas.sum(axis=1)) * base_pred.means / base_pred.variances
    ) / prec
    np.testing.assert_allclose(fused.variances, 1.0 / prec, rtol=1e-12)
    np.testing.assert_allclose(fused.means, mean, rtol=1e-10)


def test_grbcm_random_base_is_seeded():
    ens = make_ensemble(n=40, m=4, seed=11)
    xs = np.linspace(0.2, 0.8, 5)[:, None]
    a = grbcm_aggregate(ens, xs, base_choice="random", seed=5)
    b = grbcm_aggregate(ens, xs, base_choice="random", seed=5)
    np.testing.assert_array_equal(a.means, b.means)
    np.testing.assert_array_equal(a.variances, b.variances)


def test_grbcm_argument_validation():
    ens = make_ensemble(n=30, m=3, seed=12)
    xs = np.array([[0.5]])
    single = make_ensemble(n=20, m=1, seed=13)
    with pytest.raises(ValueError):
        grbcm_aggregate(single, xs)
    with pytest.raises(ValueError):
        grbcm_aggregate(ens, xs, base_choice="top_importance")  # no order
    with pytest.raises(ValueError):
        grbcm_aggregate(ens, xs, base_choice="top_importance", order=[2], subset=[0, 1])
    with pytest.raises(ValueError):
        grbcm_aggregate(ens, xs, base_choice="median")
