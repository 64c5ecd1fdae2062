from fractions import Fraction

import pytest

from modcohft.coeffs import SymVectorSpace, register_minimal
from modcohft.cohft import FrobeniusData, frobenius_tqft, br, pz_alpha, pz_lambda
from modcohft.complexes import GA, GVec, Truncation, vertex_graph, weight
from modcohft.complexes.basis import ga_basis
from modcohft.complexes.homology import (gauge_equivalent, infinitesimal_check,
                                         extend_formal_deformation, matrix_of)
from modcohft.complexes.operad import act_on_gA, sigma3, op_graph
from modcohft.graphs import canon_info, stable_graph
from modcohft.linalg import rank


@pytest.fixture(scope="module")
def rank1():
    return SymVectorSpace([0], [[1]])


def test_ga_differentials_square_to_zero(rank1):
    ga = GA(rank1, Truncation(None))
    for G in ga_basis(rank1, Truncation(3), psi_max=2, dashed=True):
        x = GVec({(G, 0): 1})
        dx, Dx = ga.d(x), ga.delta(x)
        assert not ga.d(dx)
        assert not ga.delta(Dx)
        assert not (ga.d(Dx) + ga.delta(dx))


def test_super_space_differentials():
    A, _ = pz_alpha(1, 2)
    ga = GA(A, Truncation(None))
    for G in ga_basis(A, Truncation(2), max_vertices=2):
        x = GVec({(G, 0): 1})
        assert not ga.d(ga.d(x))
        assert not ga.delta(ga.delta(x))


def test_matrix_of_rank(rank1):
    ga = GA(rank1, Truncation(None))
    src = [(G, 0) for G in ga_basis(rank1, Truncation(2)) if weight(G) == 2]
    m, rows = matrix_of(ga.d, src)
    assert m.ncols == len(src) and m.nrows == len(rows)
    assert rank(m) <= len(src)


def test_gauge_act_zero(rank1):
    F = FrobeniusData.rank_one()
    al = frobenius_tqft(F, 3)
    ga = GA(F.A, Truncation(3))
    assert ga.gauge_act(GVec(), al) == al
    with pytest.raises(ValueError):
        ga.gauge_act(al, al)


def test_gauge_solver_recovers_a_known_orbit():
    F = FrobeniusData.rank_one()
    A = F.A
    W = Truncation(3)
    ga = GA(A, W)
    al = frobenius_tqft(F, 3)
    xi = GVec()
    xi.add_raw(stable_graph([0, 0], [(0, 1)], [(0, 0), (0, 0), (1, 0), (1, 0)]), 0, 1)
    assert xi and xi.parity() == 1
    beta = ga.gauge_act(xi, al)
    assert beta != al
    res = gauge_equivalent(ga, al, beta)
    assert res["verdict"] == "equivalent"
    assert ga.gauge_act(res["xi"], al) == beta


def test_tetrahedron_obstruction():
    F = FrobeniusData.rank_one()
    A = F.A
    W = Truncation(4, 3)
    al = br(frobenius_tqft(F, 4), W)
    b = act_on_gA(sigma3(), al, A, W)
    res = gauge_equivalent(GA(A, W), b, al, quantum=True)
    assert res["verdict"] == "obstructed" and res["weight"] == 4
    (G, h), = [d["graph"] for d in res["detected"]]
    assert G.nv == 4 and G.n_edges() == 6 and res["detected"][0]["target_coef"] != 0


def test_double_edge_candidate_vanishes():
    G = stable_graph([0, 0, 0], [(0, 1), (0, 1), (0, 2), (0, 2), (1, 2)])
    assert canon_info(G).sign == 0


def test_infinitesimal_check_pz():
    name = register_minimal(2, 1)
    A, al = pz_alpha(1, 4)
    _, lam = pz_lambda(name, 4)
    ga = GA(A, Truncation(4))
    assert infinitesimal_check(ga, lam, al)["verdict"] == "pass"


@pytest.mark.parametrize("mode", ["formal", "syzygy"])
def test_pz_lambda_extends_trivially(mode):
    name = register_minimal(2, 2)
    A, al = pz_alpha(2, 4)
    _, lam = pz_lambda(name, 4)
    ga = GA(A, Truncation(4))
    assert not ga.delta(lam) and not ga.bracket(lam, lam)
    r = extend_formal_deformation(ga, al, lam, steps=3, mode=mode)
    assert r["verdict"] == "extends"
    assert all(not t for t in r["terms"][1:])


def test_hyperbolic_counterexample_is_obstructed():
    A = SymVectorSpace([0, 0], [[0, 1], [1, 0]])
    ga = GA(A, Truncation(2))
    lam = GVec()
    lam.add_raw(vertex_graph(A, 0, [0, 0, 0]), 0, 1)
    lam.add_raw(vertex_graph(A, 0, [1, 1, 1]), 0, 1)
    r = extend_formal_deformation(ga, GVec(), lam, steps=3)
    assert r["verdict"] == "obstructed" and r["step"] == 2
    assert r["obstruction"] and r["witness"]


def test_non_cocycle_is_rejected():
    A = SymVectorSpace([0], [[1]])
    ga = GA(A, Truncation(3))
    lam = GVec()
    lam.add_raw(vertex_graph(A, 1, [0, 0]), 0, 1)
    r = extend_formal_deformation(ga, GVec(), lam)
    assert r["verdict"] == "not a cocycle"
