import itertools
import json
import random

import networkx as nx
import pytest

from modcohft import graphs as gr
from modcohft.graphs import stable_graph, canonicalize, automorphism_order

TET = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]


# --- independent oracles -------------------------------------------------

def brute_stable_graphs(g, n, V):
    """All stable graphs by direct generation plus networkx isomorphism filtering."""
    found = {}
    for nv in range(1, V + 1):
        pairs = [(i, j) for i in range(nv) for j in range(i, nv)]
        for gens in itertools.product(range(g + 1), repeat=nv):
            b1 = g - sum(gens)
            if b1 < 0:
                continue
            E = b1 + nv - 1
            for edges in itertools.combinations_with_replacement(pairs, E):
                for legs in itertools.product(range(nv), repeat=n):
                    val = [0] * nv
                    for i, j in edges:
                        val[i] += 1
                        val[j] += 1
                    for v in legs:
                        val[v] += 1
                    if any(2 * gens[v] + val[v] <= 2 for v in range(nv)):
                        continue
                    H = nx.Graph()
                    H.add_nodes_from(range(nv))
                    H.add_edges_from((i, j) for i, j in edges if i != j)
                    if not nx.is_connected(H):
                        continue
                    X = nx.Graph()
                    for v in range(nv):
                        X.add_node(('v', v), t=('v', gens[v]))
                    for k, (i, j) in enumerate(edges):
                        X.add_node(('e', k), t=('loop',) if i == j else ('e',))
                        X.add_edge(('e', k), ('v', i))
                        X.add_edge(('e', k), ('v', j))
                    for lab, v in enumerate(legs, 1):
                        X.add_node(('l', lab), t=('l', lab))
                        X.add_edge(('l', lab), ('v', v))
                    for node in X.nodes:
                        X.nodes[node]['s'] = repr(X.nodes[node]['t'])
                    key = nx.weisfeiler_lehman_graph_hash(X, node_attr='s')
                    bucket = found.setdefault(key, [])
                    nm = lambda a, b: a['t'] == b['t']
                    if not any(nx.is_isomorphic(X, Y, node_match=nm) for Y in bucket):
                        bucket.append(X)
    return [X for b in found.values() for X in b]


def brute_aut(genera, edges, legs):
    """(automorphism order, exists odd edge permutation) by explicit search."""
    nv = len(genera)
    legmap = {lab: v for v, lab in legs}
    classes = {}
    for k, (i, j) in enumerate(edges):
        classes.setdefault(tuple(sorted((i, j))), []).append(k)
    count, odd = 0, False
    for pi in itertools.permutations(range(nv)):
        if any(genera[pi[v]] != genera[v] for v in range(nv)):
            continue
        if any(pi[v] != v for v in legmap.values()):
            continue
        ok = True
        for key, ks in classes.items():
            img = tuple(sorted((pi[key[0]], pi[key[1]])))
            if len(classes.get(img, [])) != len(ks):
                ok = False
        if not ok:
            continue
        keys = list(classes)
        choices = [itertools.permutations(classes[tuple(sorted((pi[a], pi[b])))]) for a, b in keys]
        for combo in itertools.product(*choices):
            perm = [0] * len(edges)
            for (a, b), tgt in zip(keys, combo):
                for src, t in zip(classes[(a, b)], tgt):
                    perm[src] = t
            loops = sum(1 for i, j in edges if i == j)
            count += 2 ** loops
            if gr.perm_sign(perm) < 0:
                odd = True
    return count, odd


# --- small worked examples -------------------------------------------------------

def test_total_genus():
    assert gr.total_genus(stable_graph([0] * 4, TET)) == 3
    assert gr.total_genus(stable_graph([2])) == 2
    G = stable_graph([0, 0], [(0, 1)], [(0, 1), (0, 2), (1, 3), (1, 4)])
    assert gr.total_genus(G) == 0


def test_disconnected_rejected():
    with pytest.raises(ValueError):
        gr.total_genus(stable_graph([1, 1]))


def test_canonicalize_examples():
    G = stable_graph([0, 0], [(0, 1), (0, 1)])
    assert canonicalize(G)[1] == 0
    G = stable_graph([0])
    C, s = canonicalize(G)
    assert s == 1 and C == canonicalize(C)[0]
    T1 = stable_graph([0] * 4, TET)
    T2 = stable_graph([0] * 4, [TET[1], TET[0]] + TET[2:])
    C1, s1 = canonicalize(T1)
    C2, s2 = canonicalize(T2)
    assert C1 == C2 and s1 * s2 == -1


def test_automorphism_examples():
    assert automorphism_order(stable_graph([0] * 4, TET)) == 24
    assert automorphism_order(stable_graph([1], [(0, 0)])) == 2
    assert automorphism_order(stable_graph([0, 1], [(0, 1)], [(0, 1), (0, 2)])) == 1


def test_enumeration_examples():
    assert len(gr.enumerate_stable_graphs(0, 3, 2)) == 1
    assert len(gr.enumerate_stable_graphs(1, 1, 2)) == 2
    assert len(gr.enumerate_stable_graphs(0, 4, 2, labeled=False)) == 2
    assert len(gr.enumerate_stable_graphs(0, 4, 2)) == 4
    with pytest.raises(ValueError):
        gr.enumerate_stable_graphs(0, 2, 3)


@pytest.mark.parametrize("g,n", [(g, n) for g in range(4) for n in range(7)
                                 if 2 < 2 * g + n <= 6])
def test_enumeration_matches_brute_force(g, n):
    mine = gr.enumerate_stable_graphs(g, n, 4)
    assert len(mine) == len(brute_stable_graphs(g, n, 4))
    for G in mine:
        assert gr.is_stable(G) and gr.total_genus(G) == g


def _plain(G):
    genera = [d[0] for d in G.verts]
    edges = [(G.hv[h], G.hv[p]) for h, p in G.edges()]
    legs = [(G.hv[h], G.hatt[h][0]) for h in G.legs()]
    return genera, edges, legs


@pytest.mark.parametrize("g,n", [(2, 0), (2, 1), (1, 2), (3, 0), (0, 5), (2, 2)])
def test_zero_detection_and_aut(g, n):
    for G in gr.enumerate_stable_graphs(g, n, 4):
        genera, edges, legs = _plain(G)
        order, odd = brute_aut(genera, edges, legs)
        assert automorphism_order(G) == order
        assert (canonicalize(G)[1] == 0) == odd


def test_split_counts():
    G = stable_graph([0], legs=[(0, i) for i in range(1, 6)])
    # ordered splittings; unordered count is half
    assert len(gr.split_vertex_terms(G, 0)) == 2 * 10
    assert gr.split_vertex_terms(stable_graph([1], legs=[(0, 1)]), 0) == []
    G = stable_graph([2], legs=[(0, 1)])
    kinds = sorted((a[0], len(a[1]), b[0], len(b[1])) for _, a, b, _, _ in gr.split_vertex_terms(G, 0))
    assert kinds == [(1, 0, 1, 1), (1, 1, 1, 0)]


def test_surgery():
    A = stable_graph([0], legs=[(0, 1), (0, 2), (0, 3)])
    s, G = gr.graft(A, 0, A, 0)
    C = canonicalize(G)[0]
    D = canonicalize(stable_graph([0, 0], [(0, 1)], [(0, 2), (0, 3), (1, 2), (1, 3)]))[0]
    assert C == D
    s, H = gr.contract_edge(G, [h for h, p in G.edges()][0])
    assert H.nv == 1 and len(H.legs()) == 4 and H.odd == ()
    B = stable_graph([1], legs=[(0, 1)])
    T = gr.add_tadpole(B, 0)
    assert canonicalize(T)[0] == canonicalize(stable_graph([0], [(0, 0)], [(0, 1)]))[0]


def test_sign_is_homomorphism():
    rng = random.Random(1)
    for _ in range(50):
        n = rng.randint(1, 7)
        a = list(range(n)); b = list(range(n))
        rng.shuffle(a); rng.shuffle(b)
        ab = [a[b[i]] for i in range(n)]
        assert gr.perm_sign(ab) == gr.perm_sign(a) * gr.perm_sign(b)


def test_canonical_idempotent_and_relabel_invariant():
    rng = random.Random(7)
    for G in gr.enumerate_stable_graphs(2, 2, 4) + gr.enumerate_stable_graphs(3, 0, 4):
        C, s = canonicalize(G)
        assert canonicalize(C) == (C, s if s == 0 else 1)
        # random relabelling of vertices and half-edges, random edge order
        genera, edges, legs = _plain(G)
        pv = list(range(len(genera))); rng.shuffle(pv)
        inv = {v: i for i, v in enumerate(pv)}
        edges2 = [(inv[i], inv[j]) if rng.random() < .5 else (inv[j], inv[i]) for i, j in edges]
        perm = list(range(len(edges2))); rng.shuffle(perm)
        H = stable_graph([genera[v] for v in pv], [edges2[k] for k in perm],
                         [(inv[v], l) for v, l in legs])
        G0 = stable_graph(genera, edges, legs)
        C0, s0 = canonicalize(G0)
        C1, s1 = canonicalize(H)
        assert C0 == C1
        assert s1 == s0 * gr.perm_sign(perm)


def test_json_roundtrip():
    G = stable_graph([0] * 4, TET)
    d = gr.to_json(G)
    assert gr.from_json(json.loads(json.dumps(d))) == G
    plain = {"vertices": [{"g": 1}], "edges": [], "legs": [[0, 1]]}
    assert gr.from_json(plain) == stable_graph([1], legs=[(0, 1)])
