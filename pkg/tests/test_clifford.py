import pytest

from spinprod.clifford import (
    I_SIGMA1,
    I_SIGMA2,
    GammaRep,
    Signature,
    build_gamma,
    chirality,
    grading_split,
    verify_clifford,
)
from spinprod.exact import (
    ExactMatrix,
    IMAG,
    HALF,
    commutant_basis,
    gr,
    mat_mul,
)


def test_dim_one_is_forced():
    rep = build_gamma(1)
    assert rep.rep_size == 1
    assert rep.gammas == (ExactMatrix.from_rows([[IMAG]]),)
    assert verify_clifford(rep)


def test_dim_two_is_pauli_seed():
    rep = build_gamma(2)
    assert rep.gammas == (I_SIGMA1, I_SIGMA2)
    for g in rep.gammas:
        assert mat_mul(g, g).is_scalar(gr(-1))
    assert (mat_mul(I_SIGMA1, I_SIGMA2) + mat_mul(I_SIGMA2, I_SIGMA1)).is_zero()


def test_dim_three_top_generator():
    rep = build_gamma(3)
    prod = mat_mul(I_SIGMA1, I_SIGMA2)
    # squaring the product shows c == 1 already gives square -I
    assert mat_mul(prod, prod).is_scalar(gr(-1))
    assert rep.gammas[2] == prod
    assert verify_clifford(rep)


def test_dim_five_pair_relations():
    rep = build_gamma(5)
    assert rep.rep_size == 4
    assert verify_clifford(rep)


def test_zero_dim_rejected():
    with pytest.raises(ValueError):
        build_gamma(0)


@pytest.mark.parametrize("dim", range(1, 11))
def test_euclidean_tower(dim):
    rep = build_gamma(dim)
    assert rep.rep_size == 2 ** (dim // 2)
    assert verify_clifford(rep)
    assert len(commutant_basis(rep.gammas, rep.rep_size)) == 1


@pytest.mark.parametrize("dim", range(2, 7))
def test_signature_variants(dim):
    for p in range(dim + 1):
        rep = build_gamma(dim, Signature(p, dim - p))
        assert verify_clifford(rep)
        for a, g in enumerate(rep.gammas):
            want = gr(-1) if a < p else gr(1)
            assert mat_mul(g, g).is_scalar(want)


def test_bad_signature_rejected():
    with pytest.raises(ValueError):
        build_gamma(3, Signature(1, 1))
    with pytest.raises(ValueError):
        Signature(-1, 2)


class TestChirality:
    def test_dim_two_value(self):
        omega = chirality(build_gamma(2))
        assert omega == ExactMatrix.diagonal([1, -1])
        assert omega == mat_mul(I_SIGMA1, I_SIGMA2).scale(IMAG)

    @pytest.mark.parametrize("dim", (2, 4, 6))
    def test_square_and_anticommutation(self, dim):
        rep = build_gamma(dim)
        omega = chirality(rep)
        assert mat_mul(omega, omega).is_scalar(gr(1))
        for g in rep.gammas:
            assert (mat_mul(omega, g) + mat_mul(g, omega)).is_zero()
        assert omega.trace().is_zero()

    def test_odd_dim_rejected(self):
        with pytest.raises(ValueError):
            chirality(build_gamma(3))


class TestVerifyClifford:
    def test_negated_generator_still_valid(self):
        rep = build_gamma(4)
        flipped = GammaRep(
            dim_vector=rep.dim_vector,
            signature=rep.signature,
            rep_size=rep.rep_size,
            gammas=(rep.gammas[0].scale(gr(-1)),) + rep.gammas[1:],
            volume=None,
            parity=rep.parity,
            eta=rep.eta,
        )
        assert verify_clifford(flipped)

    def test_identity_generator_fails(self):
        rep = build_gamma(2)
        broken = GammaRep(
            dim_vector=rep.dim_vector,
            signature=rep.signature,
            rep_size=rep.rep_size,
            gammas=(ExactMatrix.identity(2), rep.gammas[1]),
            volume=None,
            parity=rep.parity,
            eta=rep.eta,
        )
        assert not verify_clifford(broken)


class TestGradingSplit:
    def test_dim_two_eigenvectors(self):
        plus, minus = grading_split(build_gamma(2))
        assert plus == ExactMatrix.from_rows([[1], [0]])
        assert minus == ExactMatrix.from_rows([[0], [1]])

    @pytest.mark.parametrize("dim", (2, 4, 6))
    def test_projectors_idempotent(self, dim):
        rep = build_gamma(dim)
        omega = chirality(rep)
        ident = ExactMatrix.identity(rep.rep_size)
        for sign in (gr(1), gr(-1)):
            proj = (ident + omega.scale(sign)).scale(HALF)
            assert mat_mul(proj, proj) == proj

    @pytest.mark.parametrize("dim", (2, 4, 6))
    def test_equal_halves_and_antidiagonal_action(self, dim):
        from spinprod.clifford import graded_basis

        rep = build_gamma(dim)
        plus, minus = grading_split(rep)
        half = rep.rep_size // 2
        assert plus.cols == minus.cols == half
        basis, basis_inv = graded_basis(rep)
        for g in rep.gammas:
            conj = mat_mul(basis_inv, mat_mul(g, basis))
            for i in range(half):
                for j in range(half):
                    assert conj.get(i, j).is_zero()
                    assert conj.get(half + i, half + j).is_zero()

    def test_odd_dim_rejected(self):
        with pytest.raises(ValueError):
            grading_split(build_gamma(5))
