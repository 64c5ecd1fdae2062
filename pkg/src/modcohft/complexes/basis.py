"""Spanning sets of decorated graphs on truncation windows."""

from itertools import product, combinations_with_replacement

from ..graphs import (Builder, enumerate_stable_graphs, canon_info, USUAL, DASHED,
                      edge_item)
from ..coeffs import UNIT, mono_parity
from .vec import Truncation, gA_vertex_zero, psi_degree


def _psi_spreads(nh, total):
    """All ways to put total psi powers on nh half-edges."""
    if nh == 0:
        if total == 0:
            yield ()
        return
    for c in combinations_with_replacement(range(nh), total):
        v = [0] * nh
        for i in c:
            v[i] += 1
        yield tuple(v)


def _decorate(G, A, labels, psis, dashed_mask, classes):
    b = Builder(G)
    legs = G.legs()
    items = []
    for h, lab in zip(legs, labels):
        b.hatt[h] = (lab, 0, 0)
        if A is not None and A.parity[lab]:
            items.append(('h', h))
    for h, p in enumerate(psis):
        a = b.hatt[h]
        b.hatt[h] = (a[0], p) + tuple(a[2:])
    edges = G.edges()
    for (e1, e2), dsh in zip(edges, dashed_mask):
        if dsh:
            b.hkind[e1] = b.hkind[e2] = DASHED
    b.odd = [it for it in G.odd if not (it[0] == 'e' and dashed_mask[_edge_pos(edges, it[1])])]
    b.odd += items
    for v, m in enumerate(classes):
        b.verts[v] = (b.verts[v][0], m)
        if mono_parity(m):
            b.odd.insert(0, ('v', v))
    return b.freeze()


def _edge_pos(edges, h):
    for i, (a, b) in enumerate(edges):
        if h in (a, b):
            return i
    raise KeyError(h)


def ga_basis(A, window, max_vertices=4, psi_max=0, dashed=False, classes=(UNIT,),
             labels=None):
    """Canonical nonzero decorated graphs of weight <= window.N.

    labels restricts the basis indices allowed on legs; classes lists the
    vertex monomials to try.  Graphs with a vanishing vertex class or an odd
    symmetry are skipped.
    """
    N = window.N
    labels = list(range(A.dim)) if labels is None else list(labels)
    out = set()
    for g in range(0, N // 2 + 2):
        for n in range(0, N + 3):
            if 2 * g + n <= 2 or 2 * g - 2 + n > N:
                continue
            for G in enumerate_stable_graphs(g, n, max_vertices, labeled=False):
                legs = G.legs()
                ne = len(G.edges())
                for labs in combinations_with_replacement(labels, len(legs)):
                    for t in range(psi_max + 1):
                        for ps in _psi_spreads(len(G.hv), t):
                            for mask in product((0, 1) if dashed else (0,), repeat=ne):
                                for cl in product(classes, repeat=G.nv):
                                    H = _decorate(G, A, labs, ps, mask, cl)
                                    if gA_vertex_zero(H):
                                        continue
                                    info = canon_info(H)
                                    if info.sign:
                                        out.add(info.graph)
    return sorted(out, key=lambda G: (G.nv, len(G.hv), G))
