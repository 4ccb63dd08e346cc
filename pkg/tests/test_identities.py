"""Identity evaluators: worked-example values, randomized hypotheses,
negative controls, transvection derivations, scaling covariance."""

from fractions import Fraction
from itertools import product as iproduct

import pytest

from curvident.scalar import Scalar
from curvident.tensor import ShapeError, ein
from curvident.curvature import CurvatureTensor, invariants, weyl
from curvident.delta import reference_delta_contract
from curvident.identities import (
    _patterson_binding,
    einstein5_residual,
    einstein5_trace_residual,
    einstein6_residual,
    einstein6_trace_residual,
    einstein6_trace_residual_alt,
    gauss_bonnet_integrand_6,
    patterson_residual,
    super5_blocks,
    super5_residual,
    super5_trace_residual,
    super6_residual,
    super6_trace_residual,
    trace_subidentities_5,
    trace_subidentities_6,
    transvect_rank4,
    transvect_rank6,
    tsa,
    weyl_expansion_residual,
    weyl_patterson_residual,
)
from curvident.models import (
    constant_curvature,
    einsteinize,
    example_5d,
    example_6d,
    flat,
    nikolayevsky,
    random_curvature,
    sl3_so3,
)


def _einstein(dim, seed, k=1):
    return einsteinize(random_curvature(dim, seed, 4), Scalar(k))


# -- universal delta identity ---------------------------------------------------


def test_patterson_traced_dim4_matches_oracle():
    R = random_curvature(4, seed=9, n_terms=3)
    rep = patterson_residual(R, 2, "traced")
    assert rep.is_zero and rep.residual.rank == 2
    ref = reference_delta_contract(
        5, 4, [R.tensor, R.tensor], _patterson_binding(4, 2, "traced")
    )
    assert rep.residual == ref


def test_patterson_free_rank8_constant_curvature():
    rep = patterson_residual(constant_curvature(5, 1), 1, "free")
    assert rep.residual.rank == 8 and rep.is_zero


def test_patterson_free_sl3_so3_with_oracle_spot_check():
    R = sl3_so3()
    rep = patterson_residual(R, 2, "free")
    assert rep.residual.rank == 4 and rep.is_zero
    # oracle on a sample of output components (full brute force is 5**14)
    binding = _patterson_binding(5, 2, "free")
    sample = [(0, 0, 0, 0), (0, 1, 0, 1), (1, 2, 3, 4), (2, 2, 3, 3), (4, 0, 1, 3)]
    ref = reference_delta_contract(
        6, 5, [R.tensor, R.tensor], binding, out_indices=sample
    )
    assert ref.is_zero()


def test_patterson_r_out_of_range():
    with pytest.raises(ValueError):
        patterson_residual(constant_curvature(5, 1), 3)
    with pytest.raises(ValueError):
        patterson_residual(constant_curvature(4, 1), 0)


def test_patterson_free_modes_random():
    for dim, r in ((4, 1), (4, 2), (5, 2), (6, 2), (6, 3)):
        R = random_curvature(dim, seed=dim * 10 + r, n_terms=3)
        assert patterson_residual(R, r, "free").is_zero
    assert patterson_residual(random_curvature(5, 5, 3), 1, "free").is_zero


def test_weyl_patterson_and_expansions():
    for dim in (5, 6):
        R = random_curvature(dim, seed=dim, n_terms=4)
        eng = weyl_patterson_residual(R, 2, "free")
        exp = weyl_expansion_residual(R)
        assert eng.is_zero and exp.is_zero
        assert eng.residual == exp.residual
    # constant curvature: W = 0, every explicit block vanishes individually
    from curvident.identities import weyl_identity_blocks

    for dim in (5, 6):
        blocks = weyl_identity_blocks(weyl(constant_curvature(dim, 1)))
        assert all(b.is_zero() for b in blocks)


# -- dimension 5 ------------------------------------------------------------------


def test_lemma5_examples():
    assert einstein5_residual(example_5d(1)).is_zero
    assert einstein5_residual(constant_curvature(5, 1)).is_zero
    assert einstein5_residual(_einstein(5, seed=21)).is_zero


def test_lemma5_nonzero_on_non_einstein():
    rep = einstein5_residual(random_curvature(5, seed=4, n_terms=3))
    assert not rep.is_zero
    assert rep.witness is not None


def test_thmA_a_examples():
    assert einstein5_trace_residual(example_5d(1)).is_zero
    assert einstein5_trace_residual(example_5d(2)).is_zero
    assert einstein5_trace_residual(_einstein(5, seed=33)).is_zero


def test_thmA_b_fails_on_einstein_not_super():
    rep = super5_trace_residual(example_5d(1))
    assert not rep.is_zero


def test_thmA_b_holds_on_super_einstein():
    assert super5_trace_residual(sl3_so3()).is_zero
    assert super5_trace_residual(constant_curvature(5, 1)).is_zero
    assert super5_trace_residual(nikolayevsky(2, 1)).is_zero


def test_pa5_examples():
    assert super5_residual(sl3_so3()).is_zero
    assert super5_residual(constant_curvature(5, 1)).is_zero


@pytest.mark.parametrize("a,b", [(1, 1), (2, 1), (0, 1), (1, 0)])
def test_nikolayevsky_proof_table(a, b):
    """Block values at (1,2,3,4): 2(2a-5b)b, 2(2a-5b)b, 2(2a+b)b,
    -6(2a-3b)b; they sum to zero and the full residual vanishes."""
    R = nikolayevsky(a, b)
    blocks = super5_blocks(R, (0, 1, 2, 3))
    want = [
        Scalar(2 * (2 * a - 5 * b) * b),
        Scalar(2 * (2 * a - 5 * b) * b),
        Scalar(2 * (2 * a + b) * b),
        Scalar(-6 * (2 * a - 3 * b) * b),
    ]
    assert blocks == want
    total = blocks[0] + blocks[1] + blocks[2] + blocks[3]
    assert total == Scalar(0)
    assert super5_residual(R).is_zero


def test_dim5_evaluators_reject_wrong_dim():
    R6 = example_6d(1)
    for fn in (einstein5_residual, einstein5_trace_residual, super5_residual, super5_trace_residual):
        with pytest.raises(ShapeError):
            fn(R6)


# -- TSA decomposition -------------------------------------------------------------


def test_tsa_flat_zero():
    dec = tsa(flat(6))
    assert dec.t.is_zero() and dec.s.is_zero() and dec.a.is_zero()


def test_tsa_s_symmetries():
    dec = tsa(random_curvature(6, seed=2, n_terms=3))
    assert dec.s == ein("rspq->pqrs", dec.s)
    assert dec.s == -ein("qprs->pqrs", dec.s)
    assert dec.s == -ein("pqsr->pqrs", dec.s)


def test_tsa_constant_curvature_oracle():
    """T_pqrs for constant curvature dim 6 k=1 against a direct sum over
    the two bound indices."""
    dec = tsa(constant_curvature(6, 1))

    def rc(i, j, k, l):
        return (i == l) * (j == k) - (i == k) * (j == l)

    for p, q, r, s in [(0, 1, 0, 1), (0, 1, 1, 0), (0, 0, 0, 0), (0, 1, 2, 3), (2, 3, 2, 3)]:
        want = sum(rc(p, a, b, q) * rc(r, a, b, s) for a, b in iproduct(range(6), repeat=2))
        assert dec.t.item(p, q, r, s) == Scalar(want)


def test_tsa_full_trace_two_paths():
    R = example_6d(1)
    dec = tsa(R)
    via_tsa = ein("pqpq->", dec.s).to_scalar()
    via_invariants = ein("abpq,abpq->", R.tensor, R.tensor).to_scalar()
    assert via_tsa == via_invariants


# -- dimension 6 --------------------------------------------------------------------


def test_lemma6_examples():
    assert einstein6_residual(constant_curvature(6, 1)).is_zero
    assert einstein6_residual(example_6d(1)).is_zero
    assert einstein6_residual(_einstein(6, seed=55)).is_zero


def test_lemma6_nonzero_on_non_einstein():
    assert not einstein6_residual(random_curvature(6, seed=6, n_terms=3)).is_zero


def test_thmB_examples():
    assert einstein6_trace_residual(example_6d(1)).is_zero
    assert einstein6_trace_residual(constant_curvature(6, 1)).is_zero
    assert einstein6_trace_residual(_einstein(6, seed=56)).is_zero


def test_thmB_two_arrangements_identical():
    # the same polynomial, so identical even off the Einstein hypothesis
    for R in (example_6d(1), random_curvature(6, seed=31, n_terms=3)):
        a = einstein6_trace_residual(R).residual
        b = einstein6_trace_residual_alt(R).residual
        assert a == b


def test_eq42_examples():
    assert super6_residual(example_6d(1)).is_zero
    assert super6_residual(constant_curvature(6, 1)).is_zero


def test_eq42_wrong_dim_is_error():
    with pytest.raises(ShapeError):
        super6_residual(example_5d(1))


def test_thmB_b_examples_and_negative_control():
    assert super6_trace_residual(example_6d(1)).is_zero
    assert super6_trace_residual(constant_curvature(6, 1)).is_zero
    rep = super6_trace_residual(_einstein(6, seed=57))  # Einstein, not super
    assert not rep.is_zero
    assert rep.witness is not None


# -- 34 term groups ------------------------------------------------------------------


def test_term_groups_hold_exactly_on_einstein():
    from curvident.expansion6 import group_sum_check, term_groups

    E = _einstein(6, seed=58)
    for k, lhs, rhs in term_groups(E):
        assert (lhs - rhs).is_zero(), f"group {k}"
    total, eight = group_sum_check(E)
    assert total == eight


def test_term_groups_fail_off_einstein():
    from curvident.expansion6 import term_groups

    R = random_curvature(6, seed=59, n_terms=3)
    bad = [k for k, lhs, rhs in term_groups(R) if not (lhs - rhs).is_zero()]
    assert bad  # the group equalities characterize the Einstein reduction


# -- transvection derivations ---------------------------------------------------------


def test_dim5_transvection_subidentities():
    for seed in range(10):
        E = _einstein(5, seed=100 + seed)
        for name, lhs, rhs in trace_subidentities_5(E):
            assert lhs == rhs, name


def test_dim5_transvection_reproduces_trace_identity():
    E = _einstein(5, seed=200)
    tv = transvect_rank4(einstein5_residual(E).residual, E)
    assert tv == einstein5_trace_residual(E).residual.scale(2)
    # per-term right sides sum to the same combination
    subs = trace_subidentities_5(E)
    total = subs[0][2]
    for _, _, rhs in subs[1:]:
        total = total + rhs
    assert total == einstein5_trace_residual(E).residual.scale(2)


def test_dim6_transvection_subidentities():
    for seed in range(10):
        E = _einstein(6, seed=300 + seed)
        for name, lhs, rhs in trace_subidentities_6(E):
            assert lhs == rhs, name


def test_dim6_transvection_reproduces_trace_identity():
    E = _einstein(6, seed=301)
    tv = transvect_rank6(einstein6_residual(E).residual, E)
    assert tv == einstein6_trace_residual(E).residual.scale(Fraction(-1, 2))


# -- scaling covariance ----------------------------------------------------------------


@pytest.mark.parametrize("lam", [2, -1, Fraction(3, 2)])
def test_scaling_covariance(lam):
    """Each homogeneous residual scales by lam**degree; Einstein inputs
    stay Einstein under scaling, so zero residuals stay zero."""
    E5 = _einstein(5, seed=400)
    E5s = CurvatureTensor(E5.tensor.scale(lam), _validated=True)
    l2, l3 = Scalar(lam) * Scalar(lam), Scalar(lam) * Scalar(lam) * Scalar(lam)
    assert einstein5_residual(E5s).residual == einstein5_residual(E5).residual.scale(l2)
    assert einstein5_trace_residual(E5s).residual == einstein5_trace_residual(
        E5
    ).residual.scale(l3)
    assert einstein5_residual(E5s).is_zero

    E6 = _einstein(6, seed=401)
    E6s = CurvatureTensor(E6.tensor.scale(lam), _validated=True)
    assert einstein6_residual(E6s).residual == einstein6_residual(E6).residual.scale(l2)
    assert einstein6_trace_residual(E6s).residual == einstein6_trace_residual(
        E6
    ).residual.scale(l3)
    assert einstein6_residual(E6s).is_zero

    R = random_curvature(4, seed=402, n_terms=3)
    Rs = CurvatureTensor(R.tensor.scale(lam), _validated=True)
    assert patterson_residual(Rs, 2, "traced").residual == patterson_residual(
        R, 2, "traced"
    ).residual.scale(l2)


# -- Euler-characteristic integrand ------------------------------------------------------


def test_gauss_bonnet_flat_zero():
    assert gauss_bonnet_integrand_6(flat(6)) == Scalar(0)


def test_gauss_bonnet_constant_curvature_oracle_and_chi():
    """Bracket = 720 for the unit round metric, certified by a direct
    brute-force contraction; times Vol(S6)/(384 pi^3) = (16/15)/384 the
    pi-free rational gives chi = 2."""
    R = constant_curvature(6, 1)
    bracket = gauss_bonnet_integrand_6(R)

    def rc(i, j, k, l):
        return (i == l) * (j == k) - (i == k) * (j == l)

    n = 6
    rho = [[sum(rc(i, a, a, j) for a in range(n)) for j in range(n)] for i in range(n)]
    tau = sum(rho[i][i] for i in range(n))
    rho2 = sum(rho[i][j] ** 2 for i, j in iproduct(range(n), repeat=2))
    rn2 = sum(
        rc(i, j, k, l) ** 2 for i, j, k, l in iproduct(range(n), repeat=4)
    )
    rho3 = sum(
        rho[a][b] * rho[a][c] * rho[b][c] for a, b, c in iproduct(range(n), repeat=3)
    )
    rho_rho_r = sum(
        rho[a][b] * rho[c][d] * rc(a, c, b, d)
        for a, b, c, d in iproduct(range(n), repeat=4)
    )
    rho_tt = sum(
        rho[u][v] * rc(a, b, c, u) * rc(a, b, c, v)
        for a, b, c, u, v in iproduct(range(n), repeat=5)
    )
    cubic1 = sum(
        rc(a, b, c, d) * rc(a, u, c, v) * rc(b, v, d, u)
        for a, b, c, d, u, v in iproduct(range(n), repeat=6)
    )
    cubic2 = sum(
        rc(a, b, c, d) * rc(a, b, u, v) * rc(c, d, u, v)
        for a, b, c, d, u, v in iproduct(range(n), repeat=6)
    )
    oracle = (
        tau ** 3
        - 12 * tau * rho2
        + 3 * tau * rn2
        + 16 * rho3
        - 24 * rho_rho_r
        - 24 * rho_tt
        + 8 * cubic1
        - 2 * cubic2
    )
    assert bracket == Scalar(oracle)
    assert bracket == Scalar(720)
    vol_over_384pi3 = Fraction(16, 15) / 384  # pi^3 cancels symbolically
    assert Scalar(vol_over_384pi3) * bracket == Scalar(2)


def test_gauss_bonnet_reassembly_from_invariants():
    """Two-path consistency on the worked 6-dim example: the bracket
    equals its reassembly from InvariantReport pieces, using the trace of
    the triple-product relation R_abcd R_aucv R_bvdu = r_ring0 - r_hat0/4."""
    R = example_6d(1)
    inv = invariants(R)
    rho3 = ein("ab,ac,bc->", inv.ricci, inv.ricci, inv.ricci).to_scalar()
    rho_rho_r = ein("ab,cd,acbd->", inv.ricci, inv.ricci, R.tensor).to_scalar()
    rho_tt = ein("uv,uv->", inv.ricci, inv.t_check).to_scalar()
    cubic1 = inv.r_ring0 - inv.r_hat0 * Fraction(1, 4)
    assembled = (
        inv.tau * inv.tau * inv.tau
        - Scalar(12) * inv.tau * inv.ricci_norm_sq
        + Scalar(3) * inv.tau * inv.r_norm_sq
        + Scalar(16) * rho3
        - Scalar(24) * rho_rho_r
        - Scalar(24) * rho_tt
        + Scalar(8) * cubic1
        - Scalar(2) * inv.r_hat0
    )
    assert gauss_bonnet_integrand_6(R) == assembled


def test_gauss_bonnet_wrong_dim():
    with pytest.raises(ShapeError):
        gauss_bonnet_integrand_6(flat(5))
