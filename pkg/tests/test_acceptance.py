"""Acceptance gate: every criterion prints one pass/fail line.

Run with ``pytest tests/test_acceptance.py -v -s`` to see the lines as the
criteria execute; each one is an exact check (or a stated float tolerance
for the frame module) with its runtime bound asserted where one is given.
"""
import subprocess
import sys
import time

import numpy as np
import pytest

from spinprod.cli import _random_rational_scaling, compositions
from spinprod.clifford import build_gamma, verify_clifford
from spinprod.exact import (
    commutant_basis,
    exact_rank,
    gr,
    mat_mul,
    solve_intertwiner,
    sparse_product_rows,
)
from spinprod.frames import assemble_metric, product_frame
from spinprod.graded import (
    build_parity,
    build_product,
    build_subspace,
    clifford_violation,
    make_factor,
    split_gammas,
)


def report(number, name, ok):
    print(f"ACCEPTANCE {number} {name}: {'PASS' if ok else 'FAIL'}")
    assert ok, f"acceptance criterion {number} ({name}) failed"


ALL_DIMS = compositions(8)


def module_for(dims, scaling=None):
    return build_product([make_factor(build_gamma(d)) for d in dims], scaling)


@pytest.fixture(scope="module")
def modules():
    return {dims: module_for(dims) for dims in ALL_DIMS}


@pytest.fixture(scope="module")
def subspaces(modules):
    return {dims: build_subspace(pm) for dims, pm in modules.items()}


def test_criterion_1_clifford_construction():
    start = time.monotonic()
    ok = True
    for dim in range(1, 11):
        rep = build_gamma(dim)
        ok = ok and verify_clifford(rep)
        ok = ok and rep.rep_size == 2 ** (dim // 2)
        ok = ok and len(commutant_basis(rep.gammas, rep.rep_size)) == 1
    elapsed = time.monotonic() - start
    report(1, "clifford_construction", ok and elapsed < 10.0)


def test_criterion_2_product_relation(modules):
    start = time.monotonic()
    ok = True
    for dims in ALL_DIMS:
        ok = ok and clifford_violation(modules[dims]) is None
        scaled = module_for(dims, _random_rational_scaling(dims))
        ok = ok and clifford_violation(scaled) is None
    elapsed = time.monotonic() - start
    report(2, "product_clifford_relation", ok and elapsed < 60.0)


def test_criterion_3_rank_claims(modules, subspaces):
    ok = True
    for dims in ALL_DIMS:
        n = sum(d // 2 for d in dims)
        n_o = sum(d % 2 for d in dims)
        ok = ok and modules[dims].total_size == 2 ** (n + n_o)
        ss = subspaces[dims]
        ok = ok and ss.basis.cols == 2 ** (n + n_o // 2)
        ok = ok and exact_rank(ss.basis) == ss.basis.cols
    # the three two-factor cases, written out with their stated exponents
    for n, m in ((1, 1), (1, 2), (2, 1)):
        ok = ok and subspaces[(2 * n, 2 * m)].basis.cols == 2 ** (n + m)
        ok = ok and subspaces[(2 * n, 2 * m + 1)].basis.cols == 2 ** (n + m)
        ok = ok and subspaces[(2 * n + 1, 2 * m + 1)].basis.cols == 2 ** (n + m + 1)
    # all-ones factor lists up to total dimension 8 (beyond the N <= 4 sweep)
    for total in range(1, 9):
        dims = (1,) * total
        pm = modules[dims] if dims in modules else module_for(dims)
        ok = ok and pm.total_size == 2 ** total
        ss = subspaces[dims] if dims in subspaces else build_subspace(pm)
        ok = ok and ss.basis.cols == 2 ** (total // 2)
        ok = ok and (ss.closed or (ss.fallback is not None and ss.fallback.closed))
    report(3, "rank_claims", ok)


def test_criterion_4_parity_involution(modules):
    ok = True
    for dims, pm in modules.items():
        pi = build_parity(pm)
        want = gr(len(dims))
        for i, row in enumerate(sparse_product_rows(pi, pi)):
            if row != {i: want}:
                ok = False
                break
    report(4, "parity_square", ok)


def test_criterion_5_gamma_splitting(subspaces):
    ok = True
    for d1 in (2, 4):
        for d2 in (1, 2, 3):
            even = build_gamma(d1)
            other = build_gamma(d2)
            split = split_gammas(even, other)
            total = d1 + d2
            for a in range(total):
                for b in range(total):
                    anti = mat_mul(split[a], split[b]) + mat_mul(split[b], split[a])
                    ok = ok and anti.is_scalar(gr(-2) if a == b else gr(0))
            for carried in split[:d2]:
                for plain in split[d2:]:
                    ok = ok and (mat_mul(carried, plain) + mat_mul(plain, carried)).is_zero()
            ss = subspaces[(d1, d2)]
            ok = ok and ss.closed
            reordered = split[d2:] + split[:d2]
            t = solve_intertwiner(list(ss.restricted_gammas), reordered, 2 ** ss.K)
            ok = ok and t is not None
            if t is not None:
                ok = ok and exact_rank(t) == 2 ** ss.K
                for x, y in zip(ss.restricted_gammas, reordered):
                    ok = ok and mat_mul(t, x) == mat_mul(y, t)
    report(5, "gamma_splitting_equivalence", ok)


def test_criterion_6_closure_ledger(subspaces):
    ok = True
    for dims in ALL_DIMS:
        ss = subspaces[dims]
        n_o = sum(d % 2 for d in dims)
        if len(dims) == 2:
            if dims[0] % 2 == 0 or n_o == 2:
                # two-factor layouts whose diagonalized slot comes last
                ok = ok and ss.closed
            else:
                # odd factor first: the verdict is reported and the
                # recombination must recover the rank with exact closure
                ok = ok and not ss.closed
                ok = ok and ss.fallback is not None and ss.fallback.closed
                ok = ok and ss.fallback.size == 2 ** ss.K
        if not ss.closed:
            fb = ss.fallback
            ok = ok and fb is not None and fb.closed and fb.size == 2 ** ss.K
    report(6, "closure_ledger", ok)


def test_criterion_7_frames():
    rng = np.random.default_rng(20240809)
    ok = True
    for _ in range(200):
        nfac = int(rng.integers(1, 4))
        dims = [int(rng.integers(1, 4)) for _ in range(nfac)]
        gs, As, frames = [], [], []
        for d in dims:
            q, _ = np.linalg.qr(rng.normal(size=(d, d)))
            g = q @ np.diag(rng.uniform(0.5, 2.0, size=d)) @ q.T
            while True:
                a = rng.normal(size=(d, d))
                if np.linalg.cond(a) < 1e6:
                    break
            gs.append(g)
            As.append(a)
            frames.append(np.linalg.inv(np.linalg.cholesky(g)).T)
        pf = assemble_metric(gs, As)
        f = product_frame(frames, pf)
        residual = np.abs(f.T @ pf.g_total @ f - np.eye(sum(dims))).max()
        ok = ok and residual < 1e-9
    g1 = np.array([[2.0, 0.25], [0.25, 1.0]])
    g2 = np.array([[3.0]])
    pf = assemble_metric([g1, g2], [np.eye(2), np.eye(1)])
    expect = np.zeros((3, 3))
    expect[:2, :2] = g1
    expect[2:, 2:] = g2
    ok = ok and np.array_equal(pf.g_total, expect)
    report(7, "frame_orthonormality", ok)


def test_criterion_8_determinism():
    cmd = [sys.executable, "-m", "spinprod", "verify", "--max-dim", "8"]
    first = subprocess.run(cmd, capture_output=True)
    second = subprocess.run(cmd, capture_output=True)
    ok = first.returncode == 0 and second.returncode == 0
    ok = ok and first.stdout == second.stdout and len(first.stdout) > 0
    report(8, "byte_identical_reports", ok)
