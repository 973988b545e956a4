"""Graded tensor products of Clifford modules.

Builds the total module W for a list of factors, with the product Clifford
action realized by inserting grading operators in all preceding tensor
slots (the operator form of the Koszul sign), the unnormalized parity
operator, and the spinor subspace obtained by diagonalizing doubled odd
slots.  Closure of that subspace under the action is always verified
exactly; when it fails, factors are recombined two at a time, which
recovers the expected rank with verified closure.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import prod

from .clifford import (
    DIAG_PM,
    SWAP2,
    GammaRep,
    chirality,
    gamma_rep_from_generators,
    graded_basis,
)
from .exact import (
    ONE,
    ZERO,
    ExactMatrix,
    GaussianRational,
    exact_rank,
    gr,
    kron,
    kron_all,
    mat_mul,
    merge_into,
    sparse_product_rows,
)


@dataclass(frozen=True)
class GradedFactor:
    """One tensor slot: a graded module with an odd Clifford action.

    Even-dimensional sources are rotated into the eigenbasis of their
    grading operator; odd-dimensional ones are doubled, acting by
    ``X(xi+, xi-) = (X xi-, X xi+)``.
    """

    source: GammaRep
    slot_size: int
    parity_vector: tuple[int, ...]
    action: tuple[ExactMatrix, ...]
    grading_op: ExactMatrix


@dataclass(frozen=True)
class ProductModule:
    """The graded module W with the assembled Clifford action."""

    factors: tuple[GradedFactor, ...]
    dims: tuple[int, ...]
    total_size: int
    gamma_total: tuple[ExactMatrix, ...]
    parity_total: tuple[int, ...]
    scaling: tuple[ExactMatrix, ...] | None
    metric_blocks: tuple[ExactMatrix, ...]

    def metric_entry(self, a: int, b: int) -> GaussianRational:
        """Entry of the block-diagonal assembled metric."""
        ia, la = self.factor_of_generator(a)
        ib, lb = self.factor_of_generator(b)
        if ia != ib:
            return ZERO
        return self.metric_blocks[ia].get(la, lb)

    def factor_of_generator(self, a: int) -> tuple[int, int]:
        for i, d in enumerate(self.dims):
            if a < d:
                return i, a
            a -= d
        raise IndexError("generator index out of range")


@dataclass
class PairwiseResult:
    """Outcome of recombining the factors two at a time."""

    gammas: tuple[ExactMatrix, ...]
    size: int
    closed: bool
    factor_order: tuple[int, ...]


@dataclass
class SpinorSubspace:
    """The diagonalized subspace of W, with its literal closure verdict."""

    parent: ProductModule
    basis: ExactMatrix
    K: int
    choice: tuple[int, ...]
    closed: bool
    restricted_gammas: tuple[ExactMatrix, ...] | None
    fallback: PairwiseResult | None
    column_supports: tuple[tuple[int, ...], ...] = ()

    def contains(self, vec: dict) -> bool:
        """Exact membership of a sparse vector in the column span."""
        support_of = getattr(self, "_support_of", None)
        if support_of is None:
            support_of = {p: col for col, positions in enumerate(self.column_supports)
                          for p in positions}
            self._support_of = support_of
        return _coords_in_diag_basis(vec, self.column_supports, support_of) is not None


@lru_cache(maxsize=None)
def make_factor(rep: GammaRep) -> GradedFactor:
    """Turn a one-factor representation into a graded tensor slot."""
    if rep.parity == "odd":
        size = rep.rep_size
        action = tuple(kron(SWAP2, g) for g in rep.gammas)
        grading = kron(DIAG_PM, ExactMatrix.identity(size))
        parity = (1,) * size + (-1,) * size
        return GradedFactor(rep, 2 * size, parity, action, grading)
    basis, basis_inv = graded_basis(rep)
    action = tuple(mat_mul(basis_inv, mat_mul(g, basis)) for g in rep.gammas)
    half = rep.rep_size // 2
    grading = mat_mul(basis_inv, mat_mul(chirality(rep), basis))
    expected = ExactMatrix.diagonal([1] * half + [-1] * half)
    if grading != expected:
        raise AssertionError("graded basis did not diagonalize the volume element")
    parity = (1,) * half + (-1,) * half
    return GradedFactor(rep, rep.rep_size, parity, action, grading)


def delta_sign(k: int, eps) -> int:
    """Koszul sign ``(-1)^(eps_1 + ... + eps_{k-1})`` for acting in slot k."""
    eps = tuple(eps)
    if not 1 <= k <= len(eps):
        raise ValueError(f"slot index {k} out of range for {len(eps)} factors")
    if any(e not in (0, 1) for e in eps):
        raise ValueError("parity indices must be 0 or 1")
    return -1 if sum(eps[:k - 1]) % 2 else 1


def _validate_scaling(factors, scaling) -> tuple[ExactMatrix, ...]:
    scaling = tuple(scaling)
    if len(scaling) != len(factors):
        raise ValueError("need one scaling matrix per factor")
    for f, a in zip(factors, scaling):
        d = f.source.dim_vector
        if a.rows != d or a.cols != d:
            raise ValueError(f"scaling block must be {d}x{d}")
        if any(not v.is_real() for v in a.entries):
            raise ValueError("scaling blocks must be real rational")
        if exact_rank(a) != d:
            raise ValueError("scaling blocks must be invertible")
    return scaling


def _scaled_action(factor: GradedFactor, a_col) -> ExactMatrix:
    """Clifford action of the transformed basis vector, extended linearly."""
    acc = None
    for c, coef in a_col:
        term = factor.action[c].scale(coef)
        acc = term if acc is None else acc + term
    return acc


def build_product(factors, scaling=None) -> ProductModule:
    """Assemble the total Clifford action on the tensor product of the slots.

    The operator for basis vector a of factor i is the Kronecker product of
    the grading operators of all earlier slots, the slot-i action of the
    (optionally scaled) vector, and identities after.
    """
    factors = tuple(factors)
    if not factors:
        raise ValueError("need at least one factor")
    if scaling is not None:
        scaling = _validate_scaling(factors, scaling)
    sizes = [f.slot_size for f in factors]
    total = prod(sizes)
    gradings = [f.grading_op for f in factors]
    idents = [ExactMatrix.identity(s) for s in sizes]
    gammas = []
    for i, f in enumerate(factors):
        d = f.source.dim_vector
        for a in range(d):
            if scaling is None:
                slot_op = f.action[a]
            else:
                col = [(c, scaling[i].get(c, a)) for c in range(d)
                       if not scaling[i].get(c, a).is_zero()]
                slot_op = _scaled_action(f, col)
            gammas.append(kron_all(gradings[:i] + [slot_op] + idents[i + 1:]))
    parity = []
    for idx in range(total):
        sign = 1
        rem = idx
        for f in reversed(factors):
            rem, k = divmod(rem, f.slot_size)
            sign *= f.parity_vector[k]
        parity.append(sign)
    blocks = []
    for i, f in enumerate(factors):
        eta = ExactMatrix.diagonal(list(f.source.eta))
        if scaling is None:
            blocks.append(eta)
        else:
            blocks.append(mat_mul(scaling[i].transpose(), mat_mul(eta, scaling[i])))
    return ProductModule(
        factors=factors,
        dims=tuple(f.source.dim_vector for f in factors),
        total_size=total,
        gamma_total=tuple(gammas),
        parity_total=tuple(parity),
        scaling=scaling,
        metric_blocks=tuple(blocks),
    )


def clifford_violation(pm: ProductModule) -> tuple[int, int, int] | None:
    """First (a, b, basis index) violating the assembled Clifford relation.

    Checks ``G_a G_b + G_b G_a == -2 g_ab I`` basis vector by basis vector,
    which is the full matrix identity checked exactly.
    """
    return _pair_relation_violation(pm.gamma_total, pm)


def _pair_relation_violation(gammas, pm: ProductModule) -> tuple[int, int, int] | None:
    gammas = list(gammas)
    d = len(gammas)
    size = gammas[0].rows
    for a in range(d):
        for b in range(a, d):
            coef = gr(2) * pm.metric_entry(a, b)
            ab = sparse_product_rows(gammas[a], gammas[b])
            ba = sparse_product_rows(gammas[b], gammas[a])
            for k in range(size):
                acc = merge_into(dict(ab[k]), ba[k])
                if not coef.is_zero():
                    merge_into(acc, {k: coef})
                if acc:
                    return a, b, k
    return None


def verify_product_clifford(pm: ProductModule) -> bool:
    """True iff the assembled action satisfies the Clifford relation exactly."""
    return clifford_violation(pm) is None


def build_parity(pm: ProductModule) -> ExactMatrix:
    """The unnormalized parity operator: sum over slots of the graded swap.

    Each term swaps the two parity halves of one slot, with grading
    operators inserted before it; the square is N times the identity, the
    exact form of the normalized involution property (the 1/sqrt(N)
    normalization is irrational and deliberately left out).
    """
    factors = pm.factors
    gradings = [f.grading_op for f in factors]
    idents = [ExactMatrix.identity(f.slot_size) for f in factors]
    total = None
    for i, f in enumerate(factors):
        swap = kron(SWAP2, ExactMatrix.identity(f.slot_size // 2))
        term = kron_all(gradings[:i] + [swap] + idents[i + 1:])
        total = term if total is None else total + term
    return total


def _odd_factor_indices(pm: ProductModule) -> list[int]:
    return [i for i, f in enumerate(pm.factors) if f.source.parity == "odd"]


def _diag_basis_data(pm: ProductModule, choice: tuple[int, ...]):
    """Columns of the diagonalized subspace plus the support bookkeeping.

    Each column is a tensor product that restricts every chosen slot to the
    +1 eigenspace of its half swap, i.e. vectors (xi, xi); its support
    positions all carry coefficient one and supports are pairwise disjoint.
    """
    factors = pm.factors
    chosen = set(choice)
    slot_indices = []
    for i, f in enumerate(factors):
        if i in chosen:
            slot_indices.append(list(range(f.slot_size // 2)))
        else:
            slot_indices.append(list(range(f.slot_size)))
    sizes = [f.slot_size for f in factors]
    columns = []

    def expand(i, offsets):
        if i == len(factors):
            columns.append(tuple(offsets))
            return
        for k in slot_indices[i]:
            if i in chosen:
                half = sizes[i] // 2
                new = []
                for off in offsets:
                    new.append(off * sizes[i] + k)
                    new.append(off * sizes[i] + k + half)
            else:
                new = [off * sizes[i] + k for off in offsets]
            expand(i + 1, new)

    expand(0, [0])
    support_of = {}
    for col, positions in enumerate(columns):
        for p in positions:
            support_of[p] = col
    return columns, support_of


def _coords_in_diag_basis(w: dict, columns, support_of) -> dict[int, GaussianRational] | None:
    """Coordinates of w in the disjoint-support basis, or None if outside."""
    coords: dict[int, GaussianRational] = {}
    for p, v in w.items():
        col = support_of.get(p)
        if col is None:
            return None
        cur = coords.get(col)
        if cur is None:
            coords[col] = v
        elif cur != v:
            return None
    for col, v in coords.items():
        for p in columns[col]:
            if w.get(p, ZERO) != v:
                return None
    return coords


def build_subspace(pm: ProductModule, diag_choice=None, run_fallback: bool = True) -> SpinorSubspace:
    """Cut W down to the diagonalized subspace and verify closure exactly.

    ``diag_choice`` must select ceil(N_o / 2) odd factors; the default takes
    the last ones in factor order.  When some assembled generator maps the
    span outside itself the verdict is recorded as not closed and, if
    ``run_fallback`` is set, the pairwise recombination is attempted and
    attached to the result.
    """
    odd = _odd_factor_indices(pm)
    n_o = len(odd)
    need = n_o - n_o // 2
    if diag_choice is None:
        diag_choice = tuple(odd[len(odd) - need:])
    else:
        diag_choice = tuple(sorted(diag_choice))
        if len(diag_choice) != need:
            raise ValueError(f"must diagonalize exactly {need} odd factors")
        if any(i not in odd for i in diag_choice):
            raise ValueError("diagonalization choice must pick odd-dimensional factors")
    n = sum(f.source.dim_vector // 2 for f in pm.factors)
    k_rank = n + n_o // 2
    columns, support_of = _diag_basis_data(pm, diag_choice)
    if len(columns) != 2 ** k_rank:
        raise AssertionError("diagonal basis does not have the expected rank")
    data = [ZERO] * (pm.total_size * len(columns))
    for col, positions in enumerate(columns):
        for p in positions:
            data[p * len(columns) + col] = ONE
    basis = ExactMatrix(pm.total_size, len(columns), data)

    closed = True
    restricted: list[ExactMatrix] | None = []
    for g in pm.gamma_total:
        cols_out = []
        for col, positions in enumerate(columns):
            w = g.apply_dict({p: ONE for p in positions})
            coords = _coords_in_diag_basis(w, columns, support_of)
            if coords is None:
                closed = False
                restricted = None
                break
            cols_out.append(coords)
        if not closed:
            break
        restricted.append(cols_out)
    if closed:
        size = len(columns)
        mats = []
        for cols_out in restricted:
            entries = [ZERO] * (size * size)
            for j, coords in enumerate(cols_out):
                for i, v in coords.items():
                    entries[i * size + j] = v
            mats.append(ExactMatrix(size, size, entries))
        restricted_gammas = tuple(mats)
    else:
        restricted_gammas = None

    fallback = None
    if not closed and run_fallback:
        fallback = pairwise_fallback(pm)
    return SpinorSubspace(
        parent=pm,
        basis=basis,
        K=k_rank,
        choice=diag_choice,
        closed=closed,
        restricted_gammas=restricted_gammas,
        fallback=fallback,
        column_supports=tuple(columns),
    )


@lru_cache(maxsize=None)
def _pair(rep_a: GammaRep, rep_b: GammaRep) -> GammaRep:
    """Combine two factors through the verified two-factor construction.

    The caller must put an even factor first in a mixed pair; then the
    diagonalized slot is last and the literal diagonal is closed.
    """
    pm = build_product((make_factor(rep_a), make_factor(rep_b)))
    ss = build_subspace(pm, run_fallback=False)
    if not ss.closed:
        raise AssertionError("two-factor diagonalization unexpectedly not closed")
    return gamma_rep_from_generators(ss.restricted_gammas, rep_a.eta + rep_b.eta)


def pairwise_fallback(pm: ProductModule) -> PairwiseResult:
    """Recombine factors two at a time, evens first, and verify the result.

    Produces generators of size 2^K in the original factor-generator order
    (undoing the even-first permutation), applies the module's scaling, and
    re-checks the Clifford relation against the assembled metric.
    """
    reps = [f.source for f in pm.factors]
    order = [i for i, r in enumerate(reps) if r.parity == "even"] + \
        [i for i, r in enumerate(reps) if r.parity == "odd"]
    acc = reps[order[0]]
    for i in order[1:]:
        acc = _pair(acc, reps[i])
    # generators of acc follow the permuted factor order; undo it
    permuted_offsets = {}
    off = 0
    for i in order:
        permuted_offsets[i] = off
        off += reps[i].dim_vector
    unscaled = []
    for i in range(len(reps)):
        base = permuted_offsets[i]
        unscaled.extend(acc.gammas[base:base + reps[i].dim_vector])
    if pm.scaling is None:
        gammas = unscaled
    else:
        gammas = []
        off = 0
        for i, rep in enumerate(reps):
            d = rep.dim_vector
            block = unscaled[off:off + d]
            for a in range(d):
                col = [(c, pm.scaling[i].get(c, a)) for c in range(d)
                       if not pm.scaling[i].get(c, a).is_zero()]
                acc_m = None
                for c, coef in col:
                    term = block[c].scale(coef)
                    acc_m = term if acc_m is None else acc_m + term
                gammas.append(acc_m)
            off += d
    closed = relations_match_metric(gammas, pm)
    return PairwiseResult(
        gammas=tuple(gammas),
        size=acc.rep_size,
        closed=closed,
        factor_order=tuple(order),
    )


def relations_match_metric(gammas, pm: ProductModule) -> bool:
    """Exact pair relations against the module's assembled metric."""
    return _pair_relation_violation(gammas, pm) is None


def split_gammas(even_rep: GammaRep, other_rep: GammaRep) -> list[ExactMatrix]:
    """Tensor-split generators: the other factor's carry the even chirality.

    Returns the other factor's generators as ``kron(g_a, hat)`` followed by
    the even factor's as ``kron(I, g_alpha)``; the chirality in the first
    group makes mixed pairs anticommute, so the whole list satisfies the
    Clifford relation for the direct-sum metric.
    """
    if even_rep.dim_vector % 2 != 0:
        raise ValueError("the first factor must be even-dimensional")
    hat = chirality(even_rep)
    ident = ExactMatrix.identity(other_rep.rep_size)
    out = [kron(g, hat) for g in other_rep.gammas]
    out.extend(kron(ident, g) for g in even_rep.gammas)
    return out
