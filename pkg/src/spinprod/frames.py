"""Pointwise metric blocks and orthonormal frames for twisted products.

Floating-point (binary64) counterpart to the exact core: the assembled
metric restricted to factor i is ``A_i^T g_i A_i``, orthogonal across
factors, and a g_i-orthonormal frame E_i becomes orthonormal for the
assembled metric as ``A_i^{-1} E_i``.  Warp factors are generally
irrational, hence floats and fixed tolerances here.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

SPD_EIG_TOL = 1e-10
FRAME_TOL = 1e-10
SYMMETRY_RTOL = 1e-12
MAX_CONDITION = 1e12


class FrameError(ValueError):
    """Invalid pointwise metric or frame data."""


@dataclass
class PointFrame:
    """Metric blocks, scaling maps and the assembled block-diagonal metric."""

    dims: tuple[int, ...]
    g_blocks: list[np.ndarray]
    A_blocks: list[np.ndarray]
    g_total: np.ndarray


def _check_spd(g: np.ndarray, label: str) -> np.ndarray:
    g = np.asarray(g, dtype=float)
    if g.ndim != 2 or g.shape[0] != g.shape[1]:
        raise FrameError(f"{label} must be a square matrix")
    scale = max(1.0, np.abs(g).max())
    if np.abs(g - g.T).max() > SPD_EIG_TOL * scale:
        raise FrameError(f"{label} must be symmetric")
    if np.linalg.eigvalsh(g).min() <= SPD_EIG_TOL:
        raise FrameError(f"{label} must be positive definite")
    return g


def _check_invertible(a: np.ndarray, label: str) -> np.ndarray:
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise FrameError(f"{label} must be a square matrix")
    if np.linalg.cond(a) >= MAX_CONDITION:
        raise FrameError(f"{label} is singular or too ill-conditioned")
    return a


def assemble_metric(g_blocks, A_blocks) -> PointFrame:
    """Assemble the block-diagonal metric with blocks ``A_i^T g_i A_i``.

    With A_i equal to the identity the block is copied verbatim, so the
    Riemannian product case has no float error at all.
    """
    if len(g_blocks) != len(A_blocks):
        raise FrameError("need one scaling block per metric block")
    gs, As, dims = [], [], []
    for i, (g, a) in enumerate(zip(g_blocks, A_blocks)):
        g = _check_spd(g, f"g_blocks[{i}]")
        a = _check_invertible(a, f"A_blocks[{i}]")
        if g.shape != a.shape:
            raise FrameError(f"block {i}: metric and scaling shapes differ")
        gs.append(g)
        As.append(a)
        dims.append(g.shape[0])
    total = sum(dims)
    g_total = np.zeros((total, total))
    off = 0
    for g, a, d in zip(gs, As, dims):
        if np.array_equal(a, np.eye(d)):
            block = g.copy()
        else:
            block = a.T @ g @ a
        g_total[off:off + d, off:off + d] = block
        off += d
    scale = max(1.0, np.abs(g_total).max())
    if np.abs(g_total - g_total.T).max() > SYMMETRY_RTOL * scale:
        raise FrameError("assembled metric failed the symmetry tolerance")
    return PointFrame(tuple(dims), gs, As, g_total)


def product_frame(factor_frames, pf: PointFrame) -> np.ndarray:
    """Block-diagonal frame that is orthonormal for the assembled metric.

    Each input E_i must be g_i-orthonormal; its block in the output is
    ``A_i^{-1} E_i``.  The metric convention makes the inverse (not A_i
    itself) produce an orthonormal frame, which the caller can confirm via
    the returned residual ``F^T g_total F == I``.
    """
    if len(factor_frames) != len(pf.dims):
        raise FrameError("need one frame per factor")
    blocks = []
    for i, (e, g, a, d) in enumerate(zip(factor_frames, pf.g_blocks,
                                         pf.A_blocks, pf.dims)):
        e = np.asarray(e, dtype=float)
        if e.shape != (d, d):
            raise FrameError(f"frame {i} must be {d}x{d}")
        if np.abs(e.T @ g @ e - np.eye(d)).max() > FRAME_TOL:
            raise FrameError(f"frame {i} is not orthonormal for its metric block")
        blocks.append(np.linalg.solve(a, e))
    total = sum(pf.dims)
    out = np.zeros((total, total))
    off = 0
    for b, d in zip(blocks, pf.dims):
        out[off:off + d, off:off + d] = b
        off += d
    return out


def _principal_sqrt(h: np.ndarray) -> np.ndarray:
    w, v = np.linalg.eigh(h)
    return v @ np.diag(np.sqrt(w)) @ v.T


def eguchi_sample(r: float, alpha, h_scale) -> PointFrame:
    """A dims-(1, 3) warped point: radial factor times a scaled 3-sphere.

    ``alpha`` gives the radial warp at r and ``h_scale`` the SPD 3x3 scale
    of the round block, realized through its principal square root.  The
    result is a twisted product that is not a holonomy product.
    """
    a = float(alpha(r))
    if a <= 0:
        raise FrameError(f"radial warp must be positive, got {a}")
    h = _check_spd(np.asarray(h_scale(r), dtype=float), "h_scale(r)")
    if h.shape != (3, 3):
        raise FrameError("h_scale(r) must be 3x3")
    g1 = np.array([[1.0]])
    a1 = np.array([[np.sqrt(a)]])
    g2 = np.eye(3)
    a2 = _principal_sqrt(h)
    return assemble_metric([g1, g2], [a1, a2])
