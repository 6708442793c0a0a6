"""Conjugate Gaussian regression: fits, updates, and predictive moments."""

import random

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from markov_bayes import (
    DimensionMismatch,
    GaussChannel,
    GaussPosterior,
    RankDeficient,
    RegressionData,
    fit_posterior,
    gauss_batch,
    gauss_sequential,
    map_estimate,
    predictive_density,
)

seeds = st.integers(min_value=0, max_value=10**9)


def make_data(rng: random.Random, n: int, dim: int) -> RegressionData:
    npr = np.random.default_rng(rng.randrange(2**32))
    x = npr.normal(size=(n, dim))
    w = npr.normal(size=dim)
    y = x @ w + 0.1 * npr.normal(size=n)
    return RegressionData(design=x, targets=y)


# ---------- container validation ----------


def test_regression_data_shape_checks():
    with pytest.raises(DimensionMismatch):
        RegressionData(design=np.ones((3, 2)), targets=np.ones(2))
    with pytest.raises(DimensionMismatch):
        RegressionData(design=np.ones(3), targets=np.ones(3))
    with pytest.raises(ValueError):
        RegressionData(design=np.ones((0, 2)), targets=np.ones(0))


def test_posterior_rejects_bad_covariances():
    with pytest.raises(DimensionMismatch):
        GaussPosterior(mean=np.zeros(2), cov=np.eye(3))
    with pytest.raises(ValueError):
        GaussPosterior(mean=np.zeros(2), cov=np.array([[1.0, 0.5], [0.2, 1.0]]))
    with pytest.raises(RankDeficient):
        GaussPosterior(mean=np.zeros(2), cov=np.array([[1.0, 0.0], [0.0, -1.0]]))


def test_channel_validation():
    with pytest.raises(DimensionMismatch):
        GaussChannel(weight=np.ones((2, 3)), offset=np.zeros(1), noise_cov=np.eye(2))
    with pytest.raises(ValueError):
        GaussChannel(
            weight=np.ones((2, 3)),
            offset=np.zeros(2),
            noise_cov=np.array([[1.0, 0.5], [0.0, 1.0]]),
        )
    post = GaussPosterior(mean=np.zeros(2), cov=np.eye(2))
    chan = GaussChannel(weight=np.ones((1, 3)), offset=np.zeros(1), noise_cov=np.eye(1))
    with pytest.raises(DimensionMismatch):
        chan.push(post)


def test_noise_scale_must_be_positive():
    data = RegressionData(design=np.ones((3, 1)), targets=np.ones(3))
    with pytest.raises(ValueError):
        fit_posterior(data, 0.0)
    with pytest.raises(ValueError):
        fit_posterior(data, -1.0)


# ---------- improper-prior fit ----------


@given(seeds)
@settings(max_examples=40, deadline=None)
def test_fit_mean_is_the_least_squares_solution(seed):
    rng = random.Random(seed)
    dim = rng.randint(1, 5)
    data = make_data(rng, dim + rng.randint(1, 20), dim)
    post = fit_posterior(data, 0.5)
    ols, *_ = np.linalg.lstsq(data.design, data.targets, rcond=None)
    assert np.max(np.abs(post.mean - ols)) < 1e-9
    assert np.array_equal(map_estimate(post), post.mean)


def test_fit_covariance_matches_the_normal_matrix_inverse():
    rng = random.Random(11)
    data = make_data(rng, 12, 3)
    sigma = 0.7
    post = fit_posterior(data, sigma)
    want = sigma * sigma * np.linalg.inv(data.design.T @ data.design)
    assert np.max(np.abs(post.cov - want)) < 1e-9


def test_fit_refuses_underdetermined_and_collinear_designs():
    with pytest.raises(RankDeficient):
        fit_posterior(RegressionData(design=np.ones((1, 2)), targets=np.ones(1)), 1.0)
    x = np.array([[1.0, 2.0], [2.0, 4.0], [3.0, 6.0]])
    with pytest.raises(RankDeficient):
        fit_posterior(RegressionData(design=x, targets=np.ones(3)), 1.0)


# ---------- predictive moments ----------


def test_predictive_density_in_one_dimension():
    # scalar case is hand-computable: mean m*x, variance v*x^2 + sigma^2
    post = GaussPosterior(mean=np.array([2.0]), cov=np.array([[0.25]]))
    mean, var = predictive_density(post, np.array([3.0]), sigma=0.5)
    assert mean == pytest.approx(6.0)
    assert var == pytest.approx(0.25 * 9.0 + 0.25)


def test_predictive_density_dimension_check():
    post = GaussPosterior(mean=np.zeros(2), cov=np.eye(2))
    with pytest.raises(DimensionMismatch):
        predictive_density(post, np.array([1.0]), sigma=1.0)


def test_push_through_a_channel():
    post = GaussPosterior(mean=np.array([1.0, -1.0]), cov=np.diag([1.0, 4.0]))
    chan = GaussChannel(
        weight=np.array([[2.0, 1.0]]),
        offset=np.array([3.0]),
        noise_cov=np.array([[0.5]]),
    )
    mean, cov = chan.push(post)
    assert mean[0] == pytest.approx(2.0 - 1.0 + 3.0)
    assert cov[0, 0] == pytest.approx(4.0 * 1.0 + 1.0 * 4.0 + 0.5)


# ---------- proper-prior updates ----------


@given(seeds)
@settings(max_examples=40, deadline=None)
def test_sequential_equals_batch(seed):
    rng = random.Random(seed)
    dim = rng.randint(1, 4)
    data = make_data(rng, rng.randint(1, 15), dim)
    prior = GaussPosterior(mean=np.zeros(dim), cov=np.eye(dim))
    seq = gauss_sequential(data, 0.5, prior)
    bat = gauss_batch(data, 0.5, prior)
    assert np.max(np.abs(seq.mean - bat.mean)) < 1e-9
    assert np.max(np.abs(seq.cov - bat.cov)) < 1e-9


@given(seeds)
@settings(max_examples=30, deadline=None)
def test_batch_is_split_invariant(seed):
    rng = random.Random(seed)
    dim = rng.randint(1, 4)
    n = rng.randint(2, 12)
    data = make_data(rng, n, dim)
    cut = rng.randint(1, n - 1)
    prior = GaussPosterior(mean=np.zeros(dim), cov=np.eye(dim))
    head = RegressionData(design=data.design[:cut], targets=data.targets[:cut])
    tail = RegressionData(design=data.design[cut:], targets=data.targets[cut:])
    in_two = gauss_batch(tail, 0.5, gauss_batch(head, 0.5, prior))
    at_once = gauss_batch(data, 0.5, prior)
    assert np.max(np.abs(in_two.mean - at_once.mean)) < 1e-9
    assert np.max(np.abs(in_two.cov - at_once.cov)) < 1e-9


def test_batch_matches_the_closed_form():
    rng = random.Random(5)
    data = make_data(rng, 10, 2)
    sigma = 0.5
    prior = GaussPosterior(mean=np.array([1.0, -2.0]), cov=np.diag([2.0, 0.5]))
    post = gauss_batch(data, sigma, prior)
    prec0 = np.linalg.inv(prior.cov)
    prec = prec0 + data.design.T @ data.design / sigma**2
    cov = np.linalg.inv(prec)
    mean = cov @ (prec0 @ prior.mean + data.design.T @ data.targets / sigma**2)
    assert np.max(np.abs(post.mean - mean)) < 1e-9
    assert np.max(np.abs(post.cov - cov)) < 1e-9


def test_update_dimension_checks():
    prior = GaussPosterior(mean=np.zeros(3), cov=np.eye(3))
    data = RegressionData(design=np.ones((4, 2)), targets=np.ones(4))
    with pytest.raises(DimensionMismatch):
        gauss_sequential(data, 1.0, prior)
    with pytest.raises(DimensionMismatch):
        gauss_batch(data, 1.0, prior)


def test_tight_prior_dominates_and_wide_prior_recovers_the_fit():
    rng = random.Random(3)
    data = make_data(rng, 30, 2)
    sigma = 0.5
    wide = GaussPosterior(mean=np.zeros(2), cov=1e12 * np.eye(2))
    post = gauss_batch(data, sigma, wide)
    fit = fit_posterior(data, sigma)
    assert np.max(np.abs(post.mean - fit.mean)) < 1e-6
    tight = GaussPosterior(mean=np.array([7.0, -7.0]), cov=1e-12 * np.eye(2))
    post = gauss_batch(data, sigma, tight)
    assert np.max(np.abs(post.mean - tight.mean)) < 1e-6
