"""The shifted Delta-Lie algebra of decorated stable graphs.

A term is a "picture": a graph whose legs carry basis labels of A.  The
picture stands for the sum over all ways of numbering its legs, so no
automorphism factors enter any formula below; Delta sums over unordered leg
pairs and the bracket over pairs (leg of x, leg of y).

Dashed edges stand for pushforwards along gluing maps (boundary classes).
The differential is

    d = d_A - d_1 - d_2 + c,

where d_1 adds a loop (pullback along the nonseparating gluing), d_2 splits
a vertex (pullback along separating gluings, each unordered splitting once),
and c turns a dashed edge into a usual one decorated by psi + psi'.  The
last term is the excess-intersection correction for vertices that are
themselves boundary pushforwards.
"""

from fractions import Fraction
from itertools import combinations

from ..graphs import Builder, front, USUAL, DASHED, LEG, Graph
from ..coeffs import chi_mono, delta_mono, mono_parity, UNIT
from ..graphs import split_vertex_terms
from .vec import GVec, Truncation, weight

HALF = Fraction(1, 2)


def _leg_item(A, G, h):
    return [('h', h)] if A.parity[G.hatt[h][0]] else []


def vertex_graph(A, g, labels, cls=UNIT, psis=None, roles=None):
    """Single vertex of genus g with legs labelled by basis indices, in order.

    Odd labels become odd items in the order given.
    """
    b = Builder()
    b.add_vertex((g, cls))
    n = len(labels)
    psis = psis or [0] * n
    roles = roles or [0] * n
    items = []
    if cls[3] and mono_parity(cls):
        items.append(('v', 0))
    for lab, p, r in zip(labels, psis, roles):
        h = b.add_half(0, (lab, p, r))
        if A.parity[lab]:
            items.append(('h', h))
    b.odd = items
    return b.freeze()


class GA:
    """Operations of the algebra for a fixed target space A."""

    def __init__(self, A, window=None):
        self.A = A
        self.window = window if window is not None else Truncation()

    # -- Delta and bracket -------------------------------------------------

    def _glue(self, out, G, i, j, coef, h, hshift):
        """Join legs i, j of G into a usual edge with coefficient <a_i, a_j>."""
        A = self.A
        p = A.G[G.hatt[i][0]][G.hatt[j][0]]
        if not p:
            return
        s, rest = front(G.odd, _leg_item(A, G, i) + _leg_item(A, G, j))
        b = Builder(G)
        b.join(i, j, USUAL)
        b.hatt[i] = (-1,) + G.hatt[i][1:]
        b.hatt[j] = (-1,) + G.hatt[j][1:]
        b.odd = [('e', min(i, j))] + rest
        out.add_raw(b.freeze(), h + hshift, coef * p * s, self.window)

    def delta(self, x, hshift=0):
        out = GVec()
        for (G, h), c in x.items():
            for i, j in combinations(G.legs(), 2):
                self._glue(out, G, i, j, c, h, hshift)
        return out

    def bracket(self, x, y):
        out = GVec()
        for (G1, h1), c1 in x.items():
            for (G2, h2), c2 in y.items():
                U, off = disjoint_union(G1, G2)
                for i in G1.legs():
                    for j in G2.legs():
                        self._glue(out, U, i, j + off, c1 * c2, h1 + h2, 0)
        return out

    # -- differential ---------------------------------------------------------

    def dA(self, x):
        A = self.A
        out = GVec()
        for (G, h), c in x.items():
            for i in G.legs():
                a = G.hatt[i][0]
                for bidx in range(A.dim):
                    k = A.D[bidx][a]
                    if not k:
                        continue
                    b = Builder(G)
                    b.hatt[i] = (bidx,) + G.hatt[i][1:]
                    if A.parity[a]:
                        s, rest = front(G.odd, [('h', i)])
                        b.odd = rest
                    else:
                        s = 1
                        b.odd = [('h', i)] + list(G.odd)
                    out.add_raw(b.freeze(), h, c * k * s, self.window)
        return out

    def d1(self, x):
        out = GVec()
        for (G, h), c in x.items():
            for v in range(G.nv):
                g, m = G.verts[v]
                if g < 1:
                    continue
                for k, m2 in chi_mono(g, m):
                    b = Builder(G)
                    b.verts[v] = (g - 1, m2)
                    h1 = b.add_half(v, (-1, 0, 0), USUAL)
                    h2 = b.add_half(v, (-1, 0, 0), USUAL)
                    b.join(h1, h2, USUAL)
                    b.odd.insert(0, ('e', h1))
                    out.add_raw(b.freeze(), h, c * k * HALF, self.window)
        return out

    def d2(self, x):
        out = GVec()
        for (G, h), c in x.items():
            for v in range(G.nv):
                m = G.verts[v][1]
                for H, (g1, S1), (g2, S2), hA, hB in split_vertex_terms(G, v):
                    r1 = [G.hatt[k][2] for k in S1]
                    r2 = [G.hatt[k][2] for k in S2]
                    w = H.nv - 1
                    for k, m1, m2, nr1, nr2 in delta_mono(m, g1, r1, g2, r2):
                        b = Builder(H)
                        b.verts[v] = (g1, m1)
                        b.verts[w] = (g2, m2)
                        b.hatt[hA] = (-1, 0, nr1)
                        b.hatt[hB] = (-1, 0, nr2)
                        # roles only mean something next to a minimal class
                        for S, mm in ((S1, m1), (S2, m2)):
                            if not mm[3]:
                                for k2 in S:
                                    b.hatt[k2] = b.hatt[k2][:2] + (0,)
                        if m[3] and m2[3]:
                            b.odd = [('v', w) if it == ('v', v) else it for it in b.odd]
                        out.add_raw(b.freeze(), h, c * k * HALF, self.window)
        return out

    def dashed_term(self, x):
        out = GVec()
        for (G, h), c in x.items():
            for e1, e2 in G.edges():
                if G.hkind[e1] != DASHED:
                    continue
                for t in (e1, e2):
                    b = Builder(G)
                    b.hkind[e1] = b.hkind[e2] = USUAL
                    a = G.hatt[t]
                    b.hatt[t] = (a[0], a[1] + 1) + tuple(a[2:])
                    b.odd.insert(0, ('e', e1))
                    out.add_raw(b.freeze(), h, c, self.window)
        return out

    def d(self, x):
        out = self.dA(x)
        out.iadd(self.d1(x), -1)
        out.iadd(self.d2(x), -1)
        out.iadd(self.dashed_term(x))
        return out

    # -- master equations -----------------------------------------------

    def master_residual(self, a):
        if a and a.parity():
            raise ValueError("master equation needs an even element")
        r = self.d(a)
        r.iadd(self.delta(a))
        r.iadd(self.bracket(a, a), HALF)
        return r

    def quantum_master_residual(self, a):
        if a and a.parity():
            raise ValueError("master equation needs an even element")
        r = self.d(a)
        r.iadd(self.delta(a, hshift=1))
        r.iadd(self.bracket(a, a), HALF)
        return r

    def D(self, x, quantum=False):
        """d + Delta (or d + hbar Delta)."""
        r = self.d(x)
        r.iadd(self.delta(x, hshift=1 if quantum else 0))
        return r

    # -- gauge action ---------------------------------------------------

    def gauge_act(self, xi, a, order=None, quantum=False):
        """exp of the gauge action of an odd element xi on an even element a.

        a + sum_k 1/k! (ad_xi^k a + ad_xi^(k-1) (d xi + Delta xi)).
        """
        if xi and not xi.parity():
            raise ValueError("gauge parameter must be odd")
        order = order if order is not None else (self.window.N or 4) + 1
        res = a.copy()
        cur_a = a
        cur_d = self.D(xi, quantum)
        fact = Fraction(1)
        for k in range(1, order + 1):
            fact /= k
            if not cur_a and not cur_d:
                break
            if k == 1:
                nxt_a = self.bracket(xi, cur_a)
                nxt_d = cur_d
            else:
                nxt_a = self.bracket(xi, cur_a)
                nxt_d = self.bracket(xi, cur_d)
            res.iadd(nxt_a, fact)
            res.iadd(nxt_d, fact)
            cur_a, cur_d = nxt_a, nxt_d
        return res


def disjoint_union(G1, G2):
    """G1 then G2; odd items of G1 first.  Returns (graph, half-edge offset)."""
    off_h, off_v = len(G1.hv), G1.nv
    verts = G1.verts + G2.verts
    hv = G1.hv + tuple(v + off_v for v in G2.hv)
    hatt = G1.hatt + G2.hatt
    hpart = G1.hpart + tuple(p + off_h if p >= 0 else -1 for p in G2.hpart)
    hkind = G1.hkind + G2.hkind
    odd = G1.odd + tuple((t, x + (off_v if t == 'v' else off_h)) for t, x in G2.odd)
    return Graph(verts, hv, hatt, hpart, hkind, odd), off_h
