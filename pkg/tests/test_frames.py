import numpy as np
import pytest

from spinprod.frames import (
    FrameError,
    PointFrame,
    assemble_metric,
    eguchi_sample,
    product_frame,
)


def random_spd(rng, d):
    q, _ = np.linalg.qr(rng.normal(size=(d, d)))
    eigs = rng.uniform(0.5, 2.0, size=d)
    return q @ np.diag(eigs) @ q.T


def random_invertible(rng, d):
    while True:
        a = rng.normal(size=(d, d))
        if np.linalg.cond(a) < 1e6:
            return a


def orthonormal_frame(g):
    # columns of inv(L).T satisfy E^T g E == I for the Cholesky factor L
    l = np.linalg.cholesky(g)
    return np.linalg.inv(l).T


class TestAssembleMetric:
    def test_identity_scaling_is_exact_copy(self):
        rng = np.random.default_rng(7)
        gs = [random_spd(rng, d) for d in (2, 3)]
        pf = assemble_metric(gs, [np.eye(2), np.eye(3)])
        expect = np.zeros((5, 5))
        expect[:2, :2] = gs[0]
        expect[2:, 2:] = gs[1]
        assert np.array_equal(pf.g_total, expect)

    def test_warped_product_one_one(self):
        f = 3.0
        pf = assemble_metric([[[1.0]], [[1.0]]], [[[1.0]], [[f]]])
        assert np.allclose(pf.g_total, np.diag([1.0, f * f]))

    def test_random_blocks_stay_spd(self):
        rng = np.random.default_rng(11)
        for _ in range(20):
            dims = rng.integers(1, 4, size=rng.integers(1, 4))
            gs = [random_spd(rng, d) for d in dims]
            As = [random_invertible(rng, d) for d in dims]
            pf = assemble_metric(gs, As)
            assert np.linalg.eigvalsh(pf.g_total).min() > 0

    def test_scaling_squares(self):
        rng = np.random.default_rng(3)
        g = random_spd(rng, 2)
        a = random_invertible(rng, 2)
        base = assemble_metric([g], [a]).g_total
        scaled = assemble_metric([g], [2.0 * a]).g_total
        assert np.abs(scaled - 4.0 * base).max() < 1e-12 * max(1.0, np.abs(scaled).max())

    def test_rejects_singular_scaling(self):
        with pytest.raises(FrameError):
            assemble_metric([np.eye(2)], [np.array([[1.0, 1.0], [1.0, 1.0]])])

    def test_rejects_non_spd_metric(self):
        with pytest.raises(FrameError):
            assemble_metric([np.array([[1.0, 2.0], [2.0, 1.0]])], [np.eye(2)])
        with pytest.raises(FrameError):
            assemble_metric([np.array([[1.0, 0.5], [0.4, 1.0]])], [np.eye(2)])


class TestProductFrame:
    def test_identity_scaling_returns_input(self):
        rng = np.random.default_rng(5)
        g = random_spd(rng, 3)
        pf = assemble_metric([g], [np.eye(3)])
        e = orthonormal_frame(g)
        f = product_frame([e], pf)
        assert np.allclose(f, e)
        assert np.abs(f.T @ pf.g_total @ f - np.eye(3)).max() < 1e-10

    def test_one_line_warp_oracle(self):
        # f == 2: E2 == [1] maps to [1/2]; then 4 * (1/2)^2 == 1
        pf = assemble_metric([[[1.0]], [[1.0]]], [[[1.0]], [[2.0]]])
        f = product_frame([[[1.0]], [[1.0]]], pf)
        assert np.allclose(f, np.diag([1.0, 0.5]))
        assert np.abs(f.T @ pf.g_total @ f - np.eye(2)).max() < 1e-15

    def test_residual_on_random_data(self):
        rng = np.random.default_rng(13)
        for _ in range(30):
            dims = rng.integers(1, 4, size=rng.integers(1, 4))
            gs = [random_spd(rng, d) for d in dims]
            As = [random_invertible(rng, d) for d in dims]
            pf = assemble_metric(gs, As)
            frames = [orthonormal_frame(g) for g in gs]
            f = product_frame(frames, pf)
            assert np.abs(f.T @ pf.g_total @ f - np.eye(sum(dims))).max() < 1e-10

    def test_rejects_non_orthonormal_frame(self):
        pf = assemble_metric([np.eye(2)], [np.eye(2)])
        with pytest.raises(FrameError):
            product_frame([2.0 * np.eye(2)], pf)


class TestEguchiSample:
    def test_product_point(self):
        pf = eguchi_sample(1.5, lambda r: 1.0, lambda r: np.eye(3))
        assert np.allclose(pf.g_total, np.eye(4))

    def test_warp_profile(self):
        alpha = lambda r: 1.0 / (1.0 - r ** -4)
        h = lambda r: (r ** 2 / 4.0) * np.eye(3)
        pf = eguchi_sample(2.0, alpha, h)
        assert isinstance(pf, PointFrame)
        assert pf.dims == (1, 3)
        assert np.linalg.eigvalsh(pf.g_total).min() > 0
        assert np.isclose(pf.g_total[0, 0], alpha(2.0))

    def test_feeds_assembly_invariants(self):
        h = lambda r: np.array([[2.0, 0.3, 0.0], [0.3, 1.5, 0.1], [0.0, 0.1, 1.0]])
        pf = eguchi_sample(2.0, lambda r: 0.5, h)
        block = pf.g_total[1:, 1:]
        assert np.abs(block - h(2.0)).max() < 1e-12
        frames = [orthonormal_frame(g) for g in pf.g_blocks]
        f = product_frame(frames, pf)
        assert np.abs(f.T @ pf.g_total @ f - np.eye(4)).max() < 1e-10

    def test_rejects_bad_warp(self):
        with pytest.raises(FrameError):
            eguchi_sample(1.0, lambda r: 0.0, lambda r: np.eye(3))
