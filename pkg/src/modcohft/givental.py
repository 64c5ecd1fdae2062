"""Givental and GGRT action elements, their cycle certificates and oracles."""

from fractions import Fraction
from itertools import combinations_with_replacement, permutations, product
from math import factorial

from .coeffs import (UNIT, mono, mono_mul, mono_degree, chern_exp_rewrite,
                     vanishes_by_dimension)
from .graphs import Builder, DASHED, betti1, total_genus
from .complexes.vec import GVec, OVec, Truncation
from .complexes.ga import disjoint_union
from .complexes.operad import (op_graph, ovec, sigma3, check_cycle, HALF,
                               twisted_diff, letter_degree, apply_letter)
from .linalg import Basis, homology_dim, inverse

__all__ = ["sigma3", "check_cycle", "givental_r", "translation_T", "manin_zograf_l",
           "hodge_Fhat", "unary_bracket", "teleman_infinitesimal_oracle",
           "mz_oracle", "br_via_ggrt", "one_vertex_homology_window", "random_r_data",
           "default_letters", "one_vertex_differential"]


# ---------------------------------------------------------------------------
# action elements

def _check_r(A, rdata):
    for k, T in rdata:
        if k < 0:
            raise ValueError("psi degree must be >= 0")
        for (i, j), c in T.items():
            if A.parity[i] or A.parity[j]:
                raise ValueError("r-data must be even")
            if Fraction(T.get((j, i), 0)) != (-1) ** k * Fraction(c):
                raise ValueError("r-data violates (a1 x a2)^(12) = (-1)^k a1 x a2")


def givental_r(A, rdata, hbar=False):
    """The r-element for data [(k, {(i, j): coef}), ...].

    Each (k, a1 (x) a2) contributes the unary vertex a -> <a, a1> a2 psi^(k+1)
    minus sum_{p+q=k} (-1)^q times the dashed tadpole and the dashed edge
    labelled a1 psi^p | a2 psi^q.  With hbar=True the tadpole carries hbar.
    """
    _check_r(A, rdata)
    out = OVec()
    for k, T in rdata:
        for (i, j), c in sorted(T.items()):
            c = Fraction(c)
            if not c:
                continue
            out.add_raw(op_graph([(('R', i, j, k + 1),)]), 0, c)
            for p in range(k + 1):
                q = k - p
                s = -(-1) ** q * c * HALF
                out.add_raw(op_graph([()], [('d', 0, 0, (i, p), (j, q))]), 1 if hbar else 0, s)
                out.add_raw(op_graph([(), ()], [('d', 0, 1, (i, p), (j, q))]), 0, s)
    return out


def random_r_data(A, rng, kmax=2, terms=2):
    """Random admissible r-data with small integer coefficients."""
    even = [i for i in range(A.dim) if not A.parity[i]]
    out = []
    for k in sorted(rng.sample(range(kmax + 1), min(terms, kmax + 1))):
        T = {}
        for i in even:
            for j in even:
                if i < j or (i == j and k % 2 == 0):
                    c = rng.randint(-2, 2)
                    if c:
                        T[(i, j)] = T.get((i, j), 0) + c
                        if i != j:
                            T[(j, i)] = (-1) ** k * c
        if T:
            out.append((k, T))
    return out


def translation_T(tdata):
    """Unary T element from {(i, l): coef} with l >= 2."""
    out = OVec()
    for (i, l), c in sorted(tdata.items()):
        if l < 2:
            raise ValueError("T-series must be divisible by psi^2")
        out.add_raw(op_graph([(('T', i, l),)]), 0, Fraction(c))
    return out


def manin_zograf_l(ldata):
    """Unary Manin-Zograf element from {('k', i): c, ('ch', d): c}."""
    out = OVec()
    for (t, a), c in sorted(ldata.items()):
        if t == 'k' and a < 1:
            raise ValueError("kappa index must be positive")
        if t == 'ch' and a % 2 == 0:
            raise ValueError("only odd Chern characters")
        out.add_raw(op_graph([((t, a),)]), 0, Fraction(c))
    return out


def hodge_Fhat(smax):
    """F-hat = sum_j (2j)! s^(2j+1) f_(2j+1) as {s power: element}."""
    out = {}
    j = 0
    while 2 * j + 1 <= smax:
        out[2 * j + 1] = manin_zograf_l({('ch', 2 * j + 1): factorial(2 * j)})
        j += 1
    return out


# ---------------------------------------------------------------------------
# the Lie algebra of unstable unary operations

def _letter_of(G):
    if G.nv != 1 or G.hv or len(G.verts[0]) != 1:
        raise ValueError("not a unary one-letter element")
    return G.verts[0][0]


def _letter_bracket(A, x, y):
    """[x, y] for two letters as a list of (coef, letter)."""
    tx, ty = x[0], y[0]
    if tx == 'R' and ty == 'R':
        _, i1, j1, k1 = x
        _, i2, j2, k2 = y
        out = []
        if A.G[j2][i1]:
            out.append((A.G[j2][i1], ('R', i2, j1, k1 + k2)))
        if A.G[j1][i2]:
            out.append((-A.G[j1][i2], ('R', i1, j2, k1 + k2)))
        return out
    if tx == 'R' and ty == 'T':
        _, i, j, k = x
        _, it, kt = y
        return [(-A.G[j][it], ('T', i, k + kt))] if A.G[j][it] else []
    if tx == 'T' and ty == 'R':
        return [(-c, z) for c, z in _letter_bracket(A, y, x)]
    if tx == 'k' and ty == 'T':
        return [(-1, ('T', y[1], y[2] + x[1]))]
    if tx == 'T' and ty == 'k':
        return [(1, ('T', x[1], x[2] + y[1]))]
    return []


def unary_bracket(A, x, y):
    """Bracket of unary elements: the commutator of their actions."""
    out = OVec()
    for (G1, h1), c1 in x.items():
        for (G2, h2), c2 in y.items():
            for c, z in _letter_bracket(A, _letter_of(G1), _letter_of(G2)):
                out.add_raw(op_graph([(z,)]), h1 + h2, c * c1 * c2)
    return out


# ---------------------------------------------------------------------------
# oracles

def _require_strict(alpha):
    for G, h in alpha:
        if G.nv != 1 or G.hpart.count(-1) != len(G.hpart) or h:
            raise ValueError("the oracle needs a strict CohFT (single vertices, no hbar)")


def teleman_infinitesimal_oracle(A, rdata, alpha, window=None):
    """Direct three-term infinitesimal Givental-Teleman formula.

    sum_m r^(m) psi_m^(k+1) alpha, minus 1/2 sum (-1)^q of the self-gluing
    of alpha along a1 psi^p (x) a2 psi^q, minus 1/2 sum (-1)^q of the gluing
    of two copies of alpha along the same bivector.
    """
    _check_r(A, rdata)
    _require_strict(alpha)
    out = GVec()
    terms = [(G, c) for (G, h), c in sorted(alpha.items(), key=lambda kv: repr(kv[0]))]

    def glue(U, x, y, i, j, p, q):
        lx, ly = U.hatt[x][0], U.hatt[y][0]
        f = A.G[lx][i] * A.G[j][ly]
        if not f:
            return 0, None
        b = Builder(U)
        b.join(x, y, DASHED)
        b.hatt[x] = (-1, U.hatt[x][1] + p) + tuple(U.hatt[x][2:])
        b.hatt[y] = (-1, U.hatt[y][1] + q) + tuple(U.hatt[y][2:])
        return f, b.freeze()

    for k, T in rdata:
        for (i, j), t in sorted(T.items()):
            t = Fraction(t)
            for G, c in terms:
                for l in G.legs():
                    f = A.G[G.hatt[l][0]][i]
                    if f:
                        b = Builder(G)
                        b.hatt[l] = (j, G.hatt[l][1] + k + 1) + tuple(G.hatt[l][2:])
                        out.add_raw(b.freeze(), 0, c * t * f, window)
            for p in range(k + 1):
                q = k - p
                s = -(-1) ** q * t * HALF
                for G, c in terms:
                    for x, y in permutations(G.legs(), 2):
                        f, H = glue(G, x, y, i, j, p, q)
                        if f:
                            out.add_raw(H, 0, s * c * f, window)
                for (G1, c1), (G2, c2) in product(terms, repeat=2):
                    U, off = disjoint_union(G1, G2)
                    for x in G1.legs():
                        for y in G2.legs():
                            f, H = glue(U, x, y + off, i, j, p, q)
                            if f:
                                out.add_raw(H, 0, s * c1 * c2 * f, window)
    return out


def mz_oracle(ldata, alpha, window=None):
    """Multiply every vertex class by exp(sum c x), expanded directly."""
    gens = [(mono(kappa=(a,)) if t == 'k' else mono(ch=(a,)), Fraction(c))
            for (t, a), c in sorted(ldata.items())]
    out = GVec()
    for (G, h), c in alpha.items():
        per_vertex = []
        for v, (g, m) in enumerate(G.verts):
            dim = 3 * g - 3 + G.arity(v)
            series = {UNIT: Fraction(1)}
            power = {UNIT: Fraction(1)}
            r = 1
            while power:
                nxt = {}
                for mm, cc in power.items():
                    for gm, gc in gens:
                        z = mono_mul(mm, gm)
                        if mono_degree(z) <= dim:
                            nxt[z] = nxt.get(z, 0) + cc * gc / r
                power = {k: v for k, v in nxt.items() if v}
                for mm, cc in power.items():
                    series[mm] = series.get(mm, 0) + cc
                r += 1
            per_vertex.append(sorted(series.items()))
        for choice in product(*per_vertex):
            b = Builder(G)
            cc = c
            for v, (mm, k) in enumerate(choice):
                g, m = G.verts[v]
                b.verts[v] = (g, mono_mul(m, mm))
                cc *= k
            out.add_raw(b.freeze(), h, cc, window)
    return out


# ---------------------------------------------------------------------------
# BR through the GGRT action

def _fhat_exp_at_vertex(A, g, n, smax):
    """exp(F-hat) acting on the unit class of one (g, n) vertex.

    Computed with the Manin-Zograf letter action on a bare vertex and read
    back as {s power: {ch tuple: coef}}, truncated at the dimension.
    """
    from .complexes.ga import vertex_graph
    base = GVec()
    even = [i for i in range(A.dim) if not A.parity[i]]
    base[(vertex_graph(A, g, [even[0]] * n) if n else _bare_vertex(g), 0)] = Fraction(1)
    F = hodge_Fhat(smax)
    series = {0: base}
    power = {0: base}
    m = 1
    while power:
        nxt = {}
        for p, x in power.items():
            for sp, el in F.items():
                if p + sp > smax:
                    continue
                for (G, h), c in el.items():
                    y = apply_letter(A, G.verts[0][0], x)
                    nxt.setdefault(p + sp, GVec()).iadd(y, c / m)
        power = {p: x for p, x in nxt.items() if x}
        for p, x in power.items():
            series.setdefault(p, GVec()).iadd(x)
        m += 1
    out = {}
    for p, x in series.items():
        for (G, h), c in x.items():
            out.setdefault(p, {})[G.verts[0][1][2]] = c
    return out


def _bare_vertex(g):
    b = Builder()
    b.add_vertex((g, UNIT))
    return b.freeze()


def br_via_ggrt(A, alpha, window=None):
    """BR(alpha) computed as exp(F-hat) . Xi(alpha) with s = 1/hbar.

    Each vertex (g, n) of Xi(alpha) receives exp(F-hat), which is rewritten
    as sum_i lambda_i s^i; setting s = hbar^-1 must leave no negative hbar
    power.
    """
    window = window or Truncation(None, None)
    out = GVec()
    cache = {}
    for (G, h), c in sorted(alpha.items(), key=lambda kv: repr(kv[0])):
        hx = h + total_genus(G)
        choices = []
        for v, (g, m) in enumerate(G.verts):
            n = G.arity(v)
            key = (g, n)
            if key not in cache:
                smax = 3 * g - 3 + n
                cache[key] = chern_exp_rewrite(_fhat_exp_at_vertex(A, g, n, smax), g, n)
            choices.append(sorted(cache[key].items()))
        for choice in product(*choices):
            s = sum(i for i, _ in choice)
            if hx - s < 0:
                raise ArithmeticError("negative hbar power survives")
            b = Builder(G)
            for v, (i, lam) in enumerate(choice):
                g, m = G.verts[v]
                b.verts[v] = (g, mono_mul(m, lam))
            out.add_raw(b.freeze(), hx - s, c, window)
    return out


# ---------------------------------------------------------------------------
# one-vertex part of the Givental complex

def default_letters(A, degree_max):
    """Every letter of degree <= degree_max on the even part of A."""
    even = [i for i in range(A.dim) if not A.parity[i]]
    out = [('R', i, j, k) for i in even for j in even for k in range(1, degree_max + 1)]
    out += [('T', i, k) for i in even for k in range(2, degree_max + 2)]
    out += [('k', a) for a in range(1, degree_max + 1)]
    out += [('ch', d) for d in range(1, degree_max + 1, 2)]
    return out


def _one_vertex_basis(A, letters, degree_max):
    """One-vertex operad graphs: a word plus standard, labelled and dashed loops."""
    from .complexes.operad import op_degree
    even = [i for i in range(A.dim) if not A.parity[i]]
    ends = [(i, p) for i in even for p in range(degree_max + 1)]
    loop_types = []
    for a1, a2 in product(ends, repeat=2):
        loop_types.append(('u', a1, a2))
        loop_types.append(('d', a1, a2))
    words = [()]
    frontier = [()]
    while frontier:
        nxt = []
        for w in frontier:
            for x in letters:
                if w and x > w[0]:
                    continue
                w2 = (x,) + w
                if sum(letter_degree(y) for y in w2) <= degree_max:
                    nxt.append(w2)
        words.extend(nxt)
        frontier = nxt
    out = set()
    for w in words:
        free = degree_max - sum(letter_degree(y) for y in w)
        for nl in range(free + 1):
            for loops in combinations_with_replacement(loop_types, nl):
                es = []
                for t in loops:
                    if t[0] == 's':
                        es.append((0, 0))
                    elif t[0] == 'd':
                        es.append(('d', 0, 0, t[1], t[2]))
                    else:
                        es.append((0, 0, t[1], t[2]))
                G = op_graph([w], es)
                if op_degree(G) > degree_max:
                    continue
                out.update(ovec([(G, 0, 1)]))
    return sorted(out, key=lambda k: (op_degree(k[0]), repr(k[0])))


def expand_standard(A, x):
    """Rewrite standard edges as sums of labelled psi^0 edges.

    The standard edge is the Casimir sum_(i,j) G^(ij) e_i (x) e_j.  Only
    purely even A is supported.
    """
    if any(A.parity):
        raise ValueError("standard edges are expanded only for even A")
    Ginv = inverse(A.G)
    out = OVec()
    for (G, h), c in x.items():
        std = [e for e in G.edges() if G.hkind[e[0]] != DASHED and G.hatt[e[0]][0] < 0]
        for ij in product(range(A.dim), repeat=2 * len(std)):
            f = Fraction(c)
            b = Builder(G)
            for n, (e1, e2) in enumerate(std):
                i, j = ij[2 * n], ij[2 * n + 1]
                f *= Ginv[i][j]
                b.hatt[e1] = (i,) + tuple(G.hatt[e1][1:])
                b.hatt[e2] = (j,) + tuple(G.hatt[e2][1:])
            if f:
                out.add_raw(b.freeze(), h, f)
    return out


def pbw_word(A, word, _memo=None):
    """Rewrite a word in sorted (PBW) form using (x, y) = (y, x) + [x, y]."""
    memo = {} if _memo is None else _memo
    if word in memo:
        return memo[word]
    for n in range(len(word) - 1):
        x, y = word[n], word[n + 1]
        if x > y:
            out = {}
            pre, post = word[:n], word[n + 2:]
            for w, c in pbw_word(A, pre + (y, x) + post, memo).items():
                out[w] = out.get(w, 0) + c
            for c, z in _letter_bracket(A, x, y):
                for w, cc in pbw_word(A, pre + (z,) + post, memo).items():
                    out[w] = out.get(w, 0) + c * cc
            res = {w: c for w, c in out.items() if c}
            break
    else:
        res = {word: Fraction(1)}
    memo[word] = res
    return res


def normalize_words(A, x):
    """Put every vertex word of x in PBW form."""
    out = OVec()
    memo = {}
    for (G, h), c in x.items():
        forms = [sorted(pbw_word(A, w, memo).items()) for w in G.verts]
        for choice in product(*forms):
            b = Builder(G)
            f = Fraction(c)
            for v, (w, cc) in enumerate(choice):
                b.verts[v] = w
                f *= cc
            out.add_raw(b.freeze(), h, f)
    return out


def one_vertex_differential(A, x):
    """Part of the tautgra-omega differential that keeps one vertex."""
    r = twisted_diff(x, 'tautgra-omega', A)
    r = OVec({k: c for k, c in r.items() if k[0].nv == 1})
    return normalize_words(A, expand_standard(A, r))


def one_vertex_homology_window(A, degree_max=2, letters=None):
    """Homology of the one-vertex part of the Givental complex.

    The number of vertices never drops under the differential, so the
    one-vertex graphs with the induced differential (d_E plus the tadpole
    bracket) form the first page of that filtration.  The differential
    raises the degree (V - 1) + b1 + psi + letter degrees by one.  Returns
    {degree: dimension} for degree <= degree_max; every graph of these
    degrees over the given alphabet is enumerated, so each entry is exact
    for that alphabet.
    """
    from .complexes.operad import op_degree
    from .complexes.homology import matrix_of
    if letters is None:
        letters = default_letters(A, degree_max)
    keys = _one_vertex_basis(A, letters, degree_max)
    groups = {}
    for k in keys:
        groups.setdefault(op_degree(k[0]), []).append(k)
    result = {}
    for deg in range(0, degree_max + 1):
        ks = groups.get(deg, [])
        dout, _ = matrix_of(lambda x: one_vertex_differential(A, x), ks)
        din, rows = matrix_of(lambda x: one_vertex_differential(A, x), groups.get(deg - 1, []),
                              Basis(ks))
        if len(rows) != len(ks):
            raise RuntimeError("one-vertex differential leaves the enumerated basis")
        result[deg] = homology_dim(din, dout)
    return result
