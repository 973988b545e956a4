"""Irreducible gamma-matrix representations via the Pauli-seed recursion.

Generators follow the convention ``X Y + Y X == -2 g(X, Y)``, so Euclidean
generators square to minus the identity.  All matrices carry exact Gaussian
rational entries; the recursion seeds Cl(2) with {i*sigma1, i*sigma2} and
never leaves Q(i).
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .exact import (
    IMAG,
    MINUS_ONE,
    ONE,
    ZERO,
    ExactMatrix,
    HALF,
    Rref,
    gr,
    invert,
    kron,
    mat_mul,
)

SWAP2 = ExactMatrix.from_rows([[0, 1], [1, 0]])
DIAG_PM = ExactMatrix.diagonal([1, -1])
I_SIGMA1 = ExactMatrix.from_rows([[ZERO, IMAG], [IMAG, ZERO]])
I_SIGMA2 = ExactMatrix.from_rows([[0, 1], [-1, 0]])


@dataclass(frozen=True)
class Signature:
    """(p, q) split of the generators: the first p square to -I, the last q to +I."""

    p: int
    q: int

    def __post_init__(self):
        if self.p < 0 or self.q < 0:
            raise ValueError("signature counts must be non-negative")

    @property
    def dim(self) -> int:
        return self.p + self.q

    @classmethod
    def euclidean(cls, d: int) -> "Signature":
        return cls(d, 0)

    def eta(self) -> tuple[int, ...]:
        """Diagonal of the signature matrix: +1 for the first p slots, -1 after."""
        return (1,) * self.p + (-1,) * self.q


@dataclass(frozen=True)
class GammaRep:
    """An irreducible Clifford representation of one factor.

    ``eta`` is the diagonal of the bilinear form the generators satisfy,
    kept explicit so representations assembled from several factors can
    carry an unsorted signature.
    """

    dim_vector: int
    signature: Signature
    rep_size: int
    gammas: tuple[ExactMatrix, ...]
    volume: ExactMatrix | None
    parity: str  # "even" | "odd"
    eta: tuple[int, ...]

    def generator(self, a: int) -> ExactMatrix:
        return self.gammas[a]


def _euclidean_generators(d: int) -> list[ExactMatrix]:
    if d == 1:
        return [ExactMatrix.from_rows([[IMAG]])]
    gens = [I_SIGMA1, I_SIGMA2]
    built = 2
    while built + 2 <= d:
        size = gens[0].rows
        ident = ExactMatrix.identity(size)
        gens = [kron(g, DIAG_PM) for g in gens]
        gens.append(kron(ident, I_SIGMA1))
        gens.append(kron(ident, I_SIGMA2))
        built += 2
    if built < d:
        gens.append(_normalized_product(gens, want_square=MINUS_ONE))
    return gens


def _normalized_product(gens, want_square) -> ExactMatrix:
    """c * g_1 ... g_k with c in {1, i} chosen so the square equals want_square * I."""
    prod = gens[0]
    for g in gens[1:]:
        prod = mat_mul(prod, g)
    square = mat_mul(prod, prod)
    if square.is_scalar(want_square):
        return prod
    scaled = prod.scale(IMAG)
    if mat_mul(scaled, scaled).is_scalar(want_square):
        return scaled
    raise ValueError("generator product does not square to a +-1 scalar")


@lru_cache(maxsize=None)
def build_gamma(dim: int, signature: Signature | None = None) -> GammaRep:
    """Construct the rank ``2^(dim//2)`` representation for one factor.

    Euclidean generators come from the Pauli recursion; for signature (p, q)
    the last q generators are multiplied by i, flipping their squares to +I.
    """
    if dim < 1:
        raise ValueError("dimension must be at least 1")
    if signature is None:
        signature = Signature.euclidean(dim)
    if signature.dim != dim:
        raise ValueError(f"signature {signature} does not sum to dimension {dim}")
    gens = _euclidean_generators(dim)
    if signature.q:
        gens = gens[:signature.p] + [g.scale(IMAG) for g in gens[signature.p:]]
    return _finish_rep(gens, signature, signature.eta())


def _finish_rep(gens, signature: Signature, eta: tuple[int, ...]) -> GammaRep:
    dim = len(gens)
    size = gens[0].rows
    volume = _volume_element(gens) if dim % 2 == 0 else None
    return GammaRep(
        dim_vector=dim,
        signature=signature,
        rep_size=size,
        gammas=tuple(gens),
        volume=volume,
        parity="even" if dim % 2 == 0 else "odd",
        eta=eta,
    )


def gamma_rep_from_generators(gens, eta) -> GammaRep:
    """Package explicit generators (e.g. from a composed construction)."""
    gens = tuple(gens)
    eta = tuple(eta)
    p = sum(1 for e in eta if e == 1)
    return _finish_rep(list(gens), Signature(p, len(eta) - p), eta)


def _volume_element(gens) -> ExactMatrix:
    return _normalized_product(gens, want_square=ONE)


def chirality(rep: GammaRep) -> ExactMatrix:
    """The grading operator: i^k * g_1 ... g_D, normalized so it squares to I.

    Defined for even-dimensional representations only; it anticommutes with
    every generator and is traceless.
    """
    if rep.dim_vector % 2 != 0:
        raise ValueError("chirality exists only in even dimension")
    if rep.volume is not None:
        return rep.volume
    return _volume_element(list(rep.gammas))


def verify_clifford(rep: GammaRep) -> bool:
    """Exact check of all D*D pair relations ``g_a g_b + g_b g_a == -2 eta_ab I``."""
    gens = rep.gammas
    d = len(gens)
    products = [[mat_mul(a, b) for b in gens] for a in gens]
    for a in range(d):
        for b in range(d):
            target = gr(-2 * rep.eta[a]) if a == b else ZERO
            if not (products[a][b] + products[b][a]).is_scalar(target):
                return False
    return True


def _pivot_columns(m: ExactMatrix, count: int) -> list[int]:
    """Indices of the first ``count`` linearly independent columns."""
    rr = Rref(m.rows)
    out = []
    cols = m.nonzero_cols()
    for j in range(m.cols):
        if rr.insert(dict(cols[j])):
            out.append(j)
            if len(out) == count:
                break
    if len(out) != count:
        raise ValueError(f"matrix has fewer than {count} independent columns")
    return out


def _select_columns(m: ExactMatrix, cols: list[int]) -> ExactMatrix:
    data = []
    for i in range(m.rows):
        for j in cols:
            data.append(m.get(i, j))
    return ExactMatrix(m.rows, len(cols), data)


def grading_split(rep: GammaRep) -> tuple[ExactMatrix, ExactMatrix]:
    """Exact bases of the +1 and -1 eigenspaces of the grading operator.

    Columns are pivot columns of the projectors (I +- omega)/2, plus
    eigenvectors first; each basis has rep_size/2 columns and conjugating
    any generator into the combined basis makes it block-antidiagonal.
    """
    if rep.dim_vector % 2 != 0:
        raise ValueError("grading split needs an even-dimensional representation")
    omega = chirality(rep)
    ident = ExactMatrix.identity(rep.rep_size)
    half = rep.rep_size // 2
    plus = (ident + omega).scale(HALF)
    minus = (ident - omega).scale(HALF)
    basis_plus = _select_columns(plus, _pivot_columns(plus, half))
    basis_minus = _select_columns(minus, _pivot_columns(minus, half))
    return basis_plus, basis_minus


def _hstack(a: ExactMatrix, b: ExactMatrix) -> ExactMatrix:
    data = []
    for i in range(a.rows):
        data.extend(a.entries[i * a.cols:(i + 1) * a.cols])
        data.extend(b.entries[i * b.cols:(i + 1) * b.cols])
    return ExactMatrix(a.rows, a.cols + b.cols, data)


@lru_cache(maxsize=None)
def graded_basis(rep: GammaRep) -> tuple[ExactMatrix, ExactMatrix]:
    """Change-of-basis matrix [plus | minus] and its exact inverse."""
    plus, minus = grading_split(rep)
    basis = _hstack(plus, minus)
    return basis, invert(basis)
