from fractions import Fraction
from itertools import product

import pytest

from modcohft.coeffs import register_minimal, mono, SymVectorSpace
from modcohft.complexes import GA, GVec, Truncation, vertex_graph
from modcohft.complexes.basis import ga_basis
from modcohft.cohft import (FrobeniusData, frobenius_tqft, pz_alpha, pz_lambda, br, xi,
                            classify, verify_cohft)
from modcohft.graphs import total_genus


def test_z2_correlators_match_idempotent_formula():
    # idempotents (1 +- x)/2 have norm 1/2, so Omega = sum_(+-) (+-1)^(#x) 2^(g-1)
    F = FrobeniusData.group_algebra_z2()
    for g in range(3):
        for n in range(4):
            for labs in product((0, 1), repeat=n):
                nx = sum(labs)
                expect = (1 + (-1) ** nx) * Fraction(2) ** (g - 1)
                assert F.correlator(g, [{i: 1} for i in labs]) == expect


def test_rank_one_correlator():
    F = FrobeniusData.rank_one()
    assert all(F.correlator(g, [{0: 1}] * n) == 1 for g in range(3) for n in range(4))


def test_frobenius_checks():
    A = SymVectorSpace([0, 0], [[1, 0], [0, 1]])
    with pytest.raises(ValueError):
        FrobeniusData(A, [[{0: 1}, {1: 1}], [{1: 1}, {1: 1}]])


@pytest.mark.parametrize("F", [FrobeniusData.rank_one(), FrobeniusData.group_algebra_z2()])
def test_tqft_solves_master_equation(F):
    al = frobenius_tqft(F, 4)
    assert verify_cohft(F.A, al)["verdict"] == "pass"
    assert classify(al) == "TQFT"


def test_perturbed_tqft_fails():
    F = FrobeniusData.rank_one()
    al = frobenius_tqft(F, 4)
    k = next(k for k in sorted(al, key=repr) if k[0].verts[0][0] == 0 and len(k[0].hv) == 4)
    al[k] *= 2
    assert verify_cohft(F.A, al)["verdict"] == "fail"


@pytest.mark.parametrize("m", [0, 1, 2])
def test_pz_master_equation(m):
    A, x = pz_alpha(m, 4)
    assert not GA(A, Truncation(4)).master_residual(x)


@pytest.mark.parametrize("h,m", [(2, 1), (2, 2)])
def test_pz_deformation(h, m):
    name = register_minimal(h, m)
    A, x = pz_alpha(m, 4)
    _, lam = pz_lambda(name, 4)
    ga = GA(A, Truncation(4))
    assert lam and not ga.master_residual(x + lam)


def test_pz_lambda_parity():
    name = register_minimal(2, 1, parity=0, name="even-on-odd")
    with pytest.raises(ValueError):
        pz_lambda(name)


def test_br_genus_zero_is_unchanged():
    F = FrobeniusData.rank_one()
    al = frobenius_tqft(F, 3)
    tree = GVec({k: c for k, c in al.items() if total_genus(k[0]) == 0})
    assert br(tree) == tree


def test_br_genus_one_vertex():
    # lambda^hbar at genus one is hbar + lambda_1
    F = FrobeniusData.rank_one()
    A = F.A
    x = GVec()
    x.add_raw(vertex_graph(A, 1, [0]), 0, 1)
    y = br(x)
    expect = GVec()
    expect.add_raw(vertex_graph(A, 1, [0]), 1, 1)
    expect.add_raw(vertex_graph(A, 1, [0], cls=mono(lam=(1,))), 0, 1)
    assert y == expect


def test_xi_powers():
    F = FrobeniusData.rank_one()
    x = GVec()
    x.add_raw(vertex_graph(F.A, 2, [0]), 0, 1)
    assert {h for G, h in xi(x)} == {2}


def test_br_quantum_master_pz():
    A, x = pz_alpha(1, 4)
    W = Truncation(4, 3)
    assert not GA(A, W).quantum_master_residual(br(x, W))


def test_br_is_a_morphism_small_window():
    A = SymVectorSpace([0], [[1]])
    ga = GA(A, Truncation(None))
    for G in ga_basis(A, Truncation(3), psi_max=1, dashed=True):
        x = GVec({(G, 0): 1})
        assert br(ga.D(x)) == ga.D(br(x), quantum=True)


def test_classify():
    F = FrobeniusData.rank_one()
    A = F.A
    x = GVec()
    x.add_raw(vertex_graph(A, 1, [0], cls=mono(kappa=(1,))), 0, 1)
    assert classify(x) == "strict CohFT"
    # classification is by shape: the PZ element has bare unit vertices
    A1, p = pz_alpha(1, 3)
    assert classify(p) == "TQFT"
    assert classify(br(frobenius_tqft(F, 3))) == "homotopy CohFT"
    ga = GA(A, Truncation(3))
    tree = GVec({k: c for k, c in ga.d2(frobenius_tqft(F, 3)).items()
                 if total_genus(k[0]) == 0})
    assert tree and classify(tree) == "tree-level"
