import random
from fractions import Fraction

import pytest

from modcohft.cohft import FrobeniusData, frobenius_tqft, br, pz_alpha
from modcohft.coeffs import mono, mono_mul
from modcohft.complexes import GA, GVec, OVec, Truncation, weight
from modcohft.complexes.operad import (act_on_gA, apply_word, check_cycle, op_graph, ovec,
                                       twisted_diff, bch)
from modcohft.graphs import Builder, betti1
from modcohft.givental import (givental_r, random_r_data, translation_T, manin_zograf_l,
                               hodge_Fhat, unary_bracket, teleman_infinitesimal_oracle,
                               mz_oracle, br_via_ggrt, one_vertex_homology_window,
                               pbw_word)


@pytest.fixture(scope="module", params=["rank1", "z2"])
def tqft(request):
    F = FrobeniusData.rank_one() if request.param == "rank1" else \
        FrobeniusData.group_algebra_z2()
    return F.A, frobenius_tqft(F, 3)


def times_vertex_class(x, m):
    """Independent helper: multiply every vertex class by the monomial m."""
    out = GVec()
    for (G, h), c in x.items():
        b = Builder(G)
        for v, (g, cl) in enumerate(G.verts):
            b.verts[v] = (g, mono_mul(cl, m))
        out.add_raw(b.freeze(), h, c)
    return out


# --- elements -------------------------------------------------------------------

def test_r_data_symmetry():
    A = FrobeniusData.group_algebra_z2().A
    rng = random.Random(3)
    for _ in range(10):
        for k, T in random_r_data(A, rng):
            for (i, j), c in T.items():
                assert T[(j, i)] == (-1) ** k * c
    with pytest.raises(ValueError):
        givental_r(A, [(1, {(0, 1): 1})])


@pytest.mark.parametrize("hbar,flavor", [(False, 'tautgra-omega'), (True, 'tautgra-theta')])
def test_givental_r_is_a_cycle(hbar, flavor):
    A = FrobeniusData.group_algebra_z2().A
    rng = random.Random(11)
    for _ in range(3):
        r = givental_r(A, random_r_data(A, rng), hbar=hbar)
        assert check_cycle(r, flavor, A)["verdict"] == "pass"


def test_opposite_r_sign_is_not_a_cycle():
    A = FrobeniusData.rank_one().A
    r = givental_r(A, [(0, {(0, 0): 1})])
    flipped = OVec({k: (-c if k[0].nv == 1 and not k[0].edges() else c) for k, c in r.items()})
    assert check_cycle(flipped, 'tautgra-omega', A)["verdict"] == "fail"


def test_hbar_b1_embedding_sends_cycles_to_cycles():
    A = FrobeniusData.rank_one().A
    r = givental_r(A, [(0, {(0, 0): 1}), (2, {(0, 0): 3})])
    emb = OVec()
    for (G, h), c in r.items():
        emb.add_raw(G, h + betti1(G), c)
    assert emb == givental_r(A, [(0, {(0, 0): 1}), (2, {(0, 0): 3})], hbar=True)
    assert not twisted_diff(emb, 'tautgra-theta', A)


def test_unary_constructors_validate():
    with pytest.raises(ValueError):
        translation_T({(0, 1): 1})
    with pytest.raises(ValueError):
        manin_zograf_l({('ch', 2): 1})
    F = hodge_Fhat(5)
    assert sorted(F) == [1, 3, 5]
    assert F[3] == manin_zograf_l({('ch', 3): 2})


# --- Givental-Teleman and Manin-Zograf -----------------------------------------------

def test_teleman_zero_r(tqft):
    A, al = tqft
    assert not teleman_infinitesimal_oracle(A, [], al, Truncation(3))


def test_teleman_rejects_non_strict():
    A = FrobeniusData.rank_one().A
    with pytest.raises(ValueError):
        teleman_infinitesimal_oracle(A, [], br(frobenius_tqft(FrobeniusData.rank_one(), 3)))


def test_infinitesimal_action_matches_teleman(tqft):
    A, al = tqft
    W = Truncation(3)
    rng = random.Random(5)
    for _ in range(3):
        rd = random_r_data(A, rng)
        lhs = act_on_gA(givental_r(A, rd), al, A, W, infinitesimal=True)
        assert lhs == teleman_infinitesimal_oracle(A, rd, al, W)


def test_manin_zograf_is_multiplication(tqft):
    A, al = tqft
    W = Truncation(3)
    ld = {('k', 1): 2, ('ch', 1): Fraction(1, 3), ('k', 2): -1}
    assert act_on_gA(manin_zograf_l(ld), al, A, W) == mz_oracle(ld, al, W)


def test_kappa_infinitesimal_is_multiplication(tqft):
    A, al = tqft
    W = Truncation(3)
    x = act_on_gA(manin_zograf_l({('k', 1): 1}), al, A, W, infinitesimal=True)
    assert x == times_vertex_class(al, mono(kappa=(1,)))


def test_translation_psi2_gives_kappa1():
    # forgetting a point with psi^2 pushes forward to kappa_1
    F = FrobeniusData.rank_one()
    A, al = F.A, frobenius_tqft(F, 3)
    W = Truncation(3)
    x = act_on_gA(translation_T({(0, 2): 1}), al, A, W, infinitesimal=True)
    # the source (g, n + 1) must lie in the window, and kappa_1 needs dimension >= 1
    expect = GVec({(G, h): c for (G, h), c in times_vertex_class(al, mono(kappa=(1,))).items()
                   if weight(G) <= 2 and 3 * G.verts[0][0] - 3 + len(G.hv) >= 1})
    assert expect and x == expect


def test_action_preserves_master_equation():
    F = FrobeniusData.rank_one()
    A, al = F.A, frobenius_tqft(F, 3)
    W = Truncation(3)
    b = act_on_gA(givental_r(A, [(0, {(0, 0): 1})]), al, A, W)
    assert b != al
    assert not GA(A, W).master_residual(b)


def test_unary_action_keeps_strictness(tqft):
    A, al = tqft
    W = Truncation(3)
    for el in (translation_T({(0, 2): 1}), manin_zograf_l({('k', 1): 1})):
        b = act_on_gA(el, al, A, W)
        assert all(G.nv == 1 and not G.edges() and h == 0 for G, h in b)


# --- unary Lie algebra ----------------------------------------------------------------------

LETTERS = [('R', 0, 1, 1), ('R', 1, 1, 2), ('T', 0, 2), ('T', 1, 3), ('k', 1), ('ch', 1)]


def test_unary_bracket_is_commutator_of_actions():
    F = FrobeniusData.group_algebra_z2()
    A, al = F.A, frobenius_tqft(F, 3)
    W = Truncation(3)
    for x in LETTERS:
        for y in LETTERS:
            X, Y = ovec([(op_graph([(x,)]), 0, 1)]), ovec([(op_graph([(y,)]), 0, 1)])
            lhs = apply_word(A, (x,), apply_word(A, (y,), al, W), W) - \
                apply_word(A, (y,), apply_word(A, (x,), al, W), W)
            b = unary_bracket(A, X, Y)
            rhs = act_on_gA(b, al, A, W, infinitesimal=True) if b else GVec()
            assert lhs == rhs, (x, y)


def test_pbw_rewriting_preserves_the_action():
    F = FrobeniusData.group_algebra_z2()
    A, al = F.A, frobenius_tqft(F, 3)
    W = Truncation(3)
    word = (('T', 0, 2), ('R', 0, 1, 1), ('k', 1))
    lhs = apply_word(A, word, al, W)
    rhs = GVec()
    for w, c in pbw_word(A, word).items():
        rhs.iadd(apply_word(A, w, al, W), c)
    assert lhs == rhs


def test_bch_group_law():
    F = FrobeniusData.rank_one()
    A, al = F.A, frobenius_tqft(F, 3)
    W = Truncation(3)
    x = ovec([(op_graph([(('k', 1),)]), 0, 1)])
    y = translation_T({(0, 2): Fraction(1, 2)})
    z = bch(x, y, 6, lambda a, b: unary_bracket(A, a, b))
    assert act_on_gA(z, al, A, W) == act_on_gA(x, act_on_gA(y, al, A, W), A, W)


# --- BR through GGRT ------------------------------------------------------------------------

def test_br_via_ggrt_rank1():
    F = FrobeniusData.rank_one()
    W = Truncation(3, 2)
    al = frobenius_tqft(F, 3)
    assert br_via_ggrt(F.A, al, W) == br(al, W)


def test_br_via_ggrt_pz():
    A, al = pz_alpha(1, 3)
    W = Truncation(3, 2)
    assert br_via_ggrt(A, al, W) == br(al, W)


def test_br_via_ggrt_genus0_unchanged():
    F = FrobeniusData.rank_one()
    al = frobenius_tqft(F, 3)
    tree = GVec({k: c for k, c in al.items() if k[0].verts[0][0] == 0})
    assert br_via_ggrt(F.A, tree) == tree


def test_br_via_ggrt_commutes_with_manin_zograf():
    F = FrobeniusData.rank_one()
    A, al = F.A, frobenius_tqft(F, 3)
    W = Truncation(3, 2)
    ell = manin_zograf_l({('k', 1): 1})
    lhs = br_via_ggrt(A, act_on_gA(ell, al, A, W), W)
    rhs = act_on_gA(ell, br_via_ggrt(A, al, W), A, W)
    assert lhs == rhs


# --- one-vertex homology --------------------------------------------------------------------

def pbw_dimensions(gens, degree_max):
    """Graded dimensions of the free graded-commutative algebra on gens.

    gens is a list of (degree, parity); odd generators square to zero.
    """
    dims = [1] + [0] * degree_max
    for d, p in gens:
        new = [0] * (degree_max + 1)
        for base in range(degree_max + 1):
            if not dims[base]:
                continue
            k = 0
            while base + k * d <= degree_max and (p == 0 or k <= 1):
                new[base + k * d] += dims[base]
                k += 1
        dims = new
    return dims


def generators(A, degree_max):
    """Degrees of the Lie algebra spanned by the r, tadpole, T and l families."""
    even = [i for i in range(A.dim) if not A.parity[i]]
    n = len(even)
    sym, alt = n * (n + 1) // 2, n * (n - 1) // 2
    gens = []
    for k in range(0, degree_max):
        gens += [(k + 1, 0)] * (sym if k % 2 == 0 else alt)   # r-family
    gens += [(1, 1)] * sym                                     # usual tadpole
    for l in range(2, degree_max + 2):
        gens += [(l - 1, 0)] * n                               # T-family
    for a in range(1, degree_max + 1):
        gens.append((a, 0))                                    # kappa_a
        if a % 2:
            gens.append((a, 0))                                # ch_a
    return gens


@pytest.mark.parametrize("name,D", [("rank1", 3), ("z2", 2)])
def test_one_vertex_homology_is_enveloping_algebra(name, D):
    F = FrobeniusData.rank_one() if name == "rank1" else FrobeniusData.group_algebra_z2()
    got = one_vertex_homology_window(F.A, D)
    expect = pbw_dimensions(generators(F.A, D), D)
    assert [got[d] for d in range(D + 1)] == expect


def test_one_vertex_homology_empty_window():
    A = FrobeniusData.rank_one().A
    assert one_vertex_homology_window(A, 0) == {0: 1}
