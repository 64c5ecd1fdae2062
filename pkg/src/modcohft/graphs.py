"""Half-edge graphs with odd orientation data.

One graph type serves three worlds: decorated stable graphs (vertices carry
(genus, class), legs carry target-space labels), bare operad graphs (vertices
carry unary words, no legs) and everything in between.

A graph is a frozen tuple of arrays indexed by half-edges.  The odd part of
the orientation is an ordered tuple of "odd items":

    ('e', h)  a usual (odd) edge, named by its smaller half-edge
    ('h', h)  a half-edge carrying an odd label
    ('v', v)  a vertex carrying odd data

Reordering the items costs the sign of the permutation.  Any surgery that
creates an odd item puts it in front.
"""

from itertools import combinations
from typing import NamedTuple
import json

LEG, USUAL, DASHED = 0, 1, 2


class Graph(NamedTuple):
    verts: tuple  # vertex data
    hv: tuple     # vertex of each half-edge
    hatt: tuple   # attribute of each half-edge (a tuple)
    hpart: tuple  # partner half-edge, -1 for a leg
    hkind: tuple  # LEG, USUAL or DASHED
    odd: tuple    # ordered odd items

    @property
    def nv(self):
        return len(self.verts)

    def legs(self):
        return [h for h, p in enumerate(self.hpart) if p < 0]

    def edges(self):
        return [(h, p) for h, p in enumerate(self.hpart) if p > h]

    def halfedges_at(self, v):
        return [h for h, w in enumerate(self.hv) if w == v]

    def arity(self, v):
        return sum(1 for w in self.hv if w == v)

    def n_edges(self, kind=None):
        return sum(1 for h, p in enumerate(self.hpart)
                   if p > h and (kind is None or self.hkind[h] == kind))

    def n_tadpoles(self):
        return sum(1 for h, p in enumerate(self.hpart)
                   if p > h and self.hv[h] == self.hv[p])

    def parity(self):
        return len(self.odd) % 2


def betti1(G):
    return G.n_edges() - G.nv + 1


def is_connected(G):
    if G.nv == 0:
        return False
    adj = [set() for _ in range(G.nv)]
    for h, p in G.edges():
        adj[G.hv[h]].add(G.hv[p])
        adj[G.hv[p]].add(G.hv[h])
    seen = {0}
    stack = [0]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == G.nv


def total_genus(G):
    """b1 plus the vertex genera (vertex data must start with the genus)."""
    if not is_connected(G):
        raise ValueError("graph is not connected")
    return betti1(G) + sum(d[0] for d in G.verts)


def is_stable(G):
    return all(2 * G.verts[v][0] + G.arity(v) > 2 for v in range(G.nv))


# ---------------------------------------------------------------------------
# sign bookkeeping

def perm_sign(perm):
    """Sign of a permutation given as a list of images."""
    seen = [False] * len(perm)
    s = 1
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            s = -s
    return s


def front(odd, seq):
    """Move the items of seq (in this order) to the front of odd.

    Returns (sign, rest) with odd == seq + rest up to sign.
    """
    lst = list(odd)
    s = 0
    for x in seq:
        pos = lst.index(x)
        s += pos
        lst.pop(pos)
    return (-1 if s % 2 else 1), lst


# ---------------------------------------------------------------------------
# mutable builder used by all surgeries

class Builder:
    def __init__(self, G=None):
        if G is None:
            G = Graph((), (), (), (), (), ())
        self.verts = list(G.verts)
        self.hv = list(G.hv)
        self.hatt = list(G.hatt)
        self.hpart = list(G.hpart)
        self.hkind = list(G.hkind)
        self.odd = list(G.odd)
        self.dead_h = set()
        self.dead_v = set()

    def add_vertex(self, data):
        self.verts.append(data)
        return len(self.verts) - 1

    def add_half(self, v, att, kind=LEG):
        self.hv.append(v)
        self.hatt.append(att)
        self.hpart.append(-1)
        self.hkind.append(kind)
        return len(self.hv) - 1

    def join(self, h1, h2, kind):
        self.hpart[h1] = h2
        self.hpart[h2] = h1
        self.hkind[h1] = kind
        self.hkind[h2] = kind

    def remove_half(self, h):
        self.dead_h.add(h)

    def remove_vertex(self, v):
        self.dead_v.add(v)

    def freeze(self):
        """Compact away removed half-edges and vertices."""
        hmap = {}
        for h in range(len(self.hv)):
            if h not in self.dead_h:
                hmap[h] = len(hmap)
        vmap = {}
        for v in range(len(self.verts)):
            if v not in self.dead_v:
                vmap[v] = len(vmap)
        n = len(hmap)
        hv = [0] * n
        hatt = [None] * n
        hpart = [0] * n
        hkind = [0] * n
        for h, i in hmap.items():
            hv[i] = vmap[self.hv[h]]
            hatt[i] = self.hatt[h]
            p = self.hpart[h]
            hpart[i] = hmap[p] if p >= 0 else -1
            hkind[i] = self.hkind[h]
        odd = []
        for t, x in self.odd:
            if t == 'e':
                a, b = hmap[x], hmap[self.hpart[x]]
                odd.append(('e', min(a, b)))
            elif t == 'h':
                odd.append(('h', hmap[x]))
            else:
                odd.append(('v', vmap[x]))
        verts = tuple(self.verts[v] for v in sorted(vmap, key=vmap.get))
        return Graph(verts, tuple(hv), tuple(hatt), tuple(hpart),
                     tuple(hkind), tuple(odd))


def edge_item(G_or_b, h):
    p = G_or_b.hpart[h]
    return ('e', min(h, p))


# ---------------------------------------------------------------------------
# canonical forms

def _pdesc(G, h, col):
    p = G.hpart[h]
    if p < 0:
        return (G.hkind[h], G.hatt[h], -1, ())
    return (G.hkind[h], G.hatt[h], col[G.hv[p]], G.hatt[p])


def _rank(values):
    keys = sorted(set(values))
    idx = {k: i for i, k in enumerate(keys)}
    return [idx[x] for x in values]


def _refine(G, col, inc):
    ncls = len(set(col))
    while True:
        inv = [(col[v], tuple(sorted(_pdesc(G, h, col) for h in inc[v])))
               for v in range(G.nv)]
        new = _rank(inv)
        m = len(set(new))
        if m == ncls:
            return new
        col, ncls = new, m


def _leaves(G, col, inc):
    col = _refine(G, col, inc)
    if len(set(col)) == G.nv:
        yield col
        return
    counts = {}
    for c in col:
        counts[c] = counts.get(c, 0) + 1
    target = min(c for c, k in counts.items() if k > 1)
    for v in range(G.nv):
        if col[v] == target:
            c2 = [2 * c for c in col]
            c2[v] = 2 * target - 1
            yield from _leaves(G, c2, inc)


def _encode(G, order, inc):
    pos = {v: i for i, v in enumerate(order)}
    return tuple((G.verts[v], tuple(sorted(_pdesc(G, h, pos) for h in inc[v])))
                 for v in order)


def _numbering(G, order, inc):
    """Canonical half-edge numbering for a vertex order."""
    pos = {v: i for i, v in enumerate(order)}
    new = {}
    for p, v in enumerate(order):
        tad_rank = {}
        tad_seen = {}
        keys = []
        for h in inc[v]:
            d = _pdesc(G, h, pos)
            q = G.hpart[h]
            if q < 0:
                tb = (0,)
            elif G.hv[q] != v:
                tb = (new[q],) if q in new else (0,)
            else:
                e = (min(h, q), max(h, q))
                if e not in tad_rank:
                    typ = (G.hkind[h], tuple(sorted([G.hatt[h], G.hatt[q]])))
                    tad_seen[typ] = tad_seen.get(typ, 0) + 1
                    tad_rank[e] = tad_seen[typ]
                tb = (tad_rank[e], 0 if h == e[0] else 1)
            keys.append((d, tb, h))
        keys.sort(key=lambda t: (t[0], t[1]))
        for _, _, h in keys:
            new[h] = len(new)
    return new


def _build(G, order, new):
    pos = {v: i for i, v in enumerate(order)}
    n = len(new)
    hv = [0] * n
    hatt = [None] * n
    hpart = [0] * n
    hkind = [0] * n
    for h, i in new.items():
        hv[i] = pos[G.hv[h]]
        hatt[i] = G.hatt[h]
        p = G.hpart[h]
        hpart[i] = new[p] if p >= 0 else -1
        hkind[i] = G.hkind[h]
    items = []
    for t, x in G.odd:
        if t == 'e':
            items.append(('e', min(new[x], new[G.hpart[x]])))
        elif t == 'h':
            items.append(('h', new[x]))
        else:
            items.append(('v', pos[x]))
    srt = sorted(items)
    idx = {it: i for i, it in enumerate(srt)}
    sign = perm_sign([idx[it] for it in items])
    verts = tuple(G.verts[v] for v in order)
    C = Graph(verts, tuple(hv), tuple(hatt), tuple(hpart), tuple(hkind), tuple(srt))
    return C, sign


def _map_sign(C, hmap, vmap):
    """Sign of the permutation of odd items induced by an automorphism of C."""
    idx = {it: i for i, it in enumerate(C.odd)}
    perm = []
    for t, x in C.odd:
        if t == 'e':
            y = ('e', min(hmap[x], hmap[C.hpart[x]]))
        elif t == 'h':
            y = ('h', hmap[x])
        else:
            y = ('v', vmap[x])
        perm.append(idx[y])
    return perm_sign(perm)


def _tie_generators(C):
    """Generators of the automorphisms of C fixing every vertex, and their count."""
    gens = []
    order = 1
    for v in range(C.nv):
        groups = {}
        for h in C.halfedges_at(v):
            p = C.hpart[h]
            if p >= 0 and C.hv[p] == v:
                continue
            if p >= 0 and C.hv[p] < v:
                continue  # counted at the smaller vertex
            key = (C.hkind[h], C.hatt[h],
                   -1 if p < 0 else C.hv[p], () if p < 0 else C.hatt[p])
            groups.setdefault(key, []).append(h)
        for hs in groups.values():
            for i in range(2, len(hs) + 1):
                order *= i
            for a, b in zip(hs, hs[1:]):
                m = list(range(len(C.hv)))
                m[a], m[b] = b, a
                pa, pb = C.hpart[a], C.hpart[b]
                if pa >= 0:
                    m[pa], m[pb] = pb, pa
                gens.append(m)
        # tadpoles
        tads = {}
        for h in C.halfedges_at(v):
            p = C.hpart[h]
            if p > h and C.hv[p] == v:
                a, b = (h, p) if C.hatt[h] <= C.hatt[p] else (p, h)
                key = (C.hkind[h], C.hatt[a], C.hatt[b])
                tads.setdefault(key, []).append((a, b))
        for key, ts in tads.items():
            for i in range(2, len(ts) + 1):
                order *= i
            for (a1, b1), (a2, b2) in zip(ts, ts[1:]):
                m = list(range(len(C.hv)))
                m[a1], m[a2] = a2, a1
                m[b1], m[b2] = b2, b1
                gens.append(m)
            if key[1] == key[2]:
                order *= 2 ** len(ts)
                for a, b in ts:
                    m = list(range(len(C.hv)))
                    m[a], m[b] = b, a
                    gens.append(m)
    return gens, order


class CanonInfo(NamedTuple):
    graph: Graph
    sign: int        # relabelling sign, 0 if the graph vanishes
    aut: int         # order of the decoration-preserving automorphism group


_CACHE = {}


def canon_info(G):
    r = _CACHE.get(G)
    if r is not None:
        return r
    inc = [[] for _ in range(G.nv)]
    for h, v in enumerate(G.hv):
        inc[v].append(h)
    col = _rank(list(G.verts))
    best = None
    best_orders = []
    for leaf in _leaves(G, col, inc):
        order = sorted(range(G.nv), key=lambda v: leaf[v])
        enc = _encode(G, order, inc)
        if best is None or enc < best:
            best, best_orders = enc, [order]
        elif enc == best:
            best_orders.append(order)
    order0 = best_orders[0]
    new0 = _numbering(G, order0, inc)
    C, sign = _build(G, order0, new0)
    gens, tie_order = _tie_generators(C)
    zero = any(_map_sign(C, m, list(range(C.nv))) < 0 for m in gens)
    if not zero and C.odd:
        inv0 = {i: h for h, i in new0.items()}
        pos0 = {v: i for i, v in enumerate(order0)}
        for order in best_orders[1:]:
            new = _numbering(G, order, inc)
            pos = {v: i for i, v in enumerate(order)}
            hmap = [new[inv0[i]] for i in range(len(C.hv))]
            vmap = [0] * C.nv
            for v, i in pos0.items():
                vmap[i] = pos[v]
            if _map_sign(C, hmap, vmap) < 0:
                zero = True
                break
    info = CanonInfo(C, 0 if zero else sign, len(best_orders) * tie_order)
    _CACHE[G] = info
    if C not in _CACHE:
        _CACHE[C] = CanonInfo(C, 0 if zero else 1, info.aut)
    return info


def canonicalize(G):
    """Canonical representative and relabelling sign (0 when G vanishes)."""
    info = canon_info(G)
    return info.graph, info.sign


def automorphism_order(G):
    return canon_info(G).aut


def clear_cache():
    _CACHE.clear()


# ---------------------------------------------------------------------------
# plain stable graphs

UNIT = ((), (), (), '')  # vertex class 1: (kappas, lambdas, chs, base)


def stable_graph(genera, edges=(), legs=(), dashed=()):
    """Stable graph with unit decorations.

    edges: usual edges as (v, w) in orientation order; legs: (v, label);
    dashed: even edges.  Leg labels are stored as the attribute (label, 0, 0).
    """
    b = Builder()
    for g in genera:
        b.add_vertex((g, UNIT))
    for v, lab in legs:
        b.add_half(v, (lab, 0, 0))
    for kind, lst in ((USUAL, edges), (DASHED, dashed)):
        for v, w in lst:
            h1 = b.add_half(v, (-1, 0, 0))
            h2 = b.add_half(w, (-1, 0, 0))
            b.join(h1, h2, kind)
            if kind == USUAL:
                b.odd.append(('e', h1))
    return b.freeze()


def validate_stable(G):
    if not is_connected(G):
        raise ValueError("graph is not connected")
    if not is_stable(G):
        raise ValueError("unstable vertex")
    labs = sorted(G.hatt[h][0] for h in G.legs())
    if labs != list(range(1, len(labs) + 1)):
        raise ValueError("leg labels must be 1..n")


def add_tadpole(G, v, att=(-1, 0, 0), kind=USUAL, genus_shift=-1):
    """New loop at v (new edge first); the vertex genus drops by one."""
    b = Builder(G)
    g, dec = b.verts[v][0], b.verts[v][1:]
    b.verts[v] = (g + genus_shift,) + tuple(dec)
    h1 = b.add_half(v, att, kind)
    h2 = b.add_half(v, att, kind)
    b.join(h1, h2, kind)
    if kind == USUAL:
        b.odd.insert(0, ('e', h1))
    return b.freeze()


def graft(G1, h1, G2, h2, kind=USUAL):
    """Join leg h1 of G1 to leg h2 of G2 (new edge first, G1 items before G2)."""
    b = Builder(G1)
    off_h, off_v = len(G1.hv), G1.nv
    for d in G2.verts:
        b.verts.append(d)
    for h in range(len(G2.hv)):
        b.hv.append(G2.hv[h] + off_v)
        b.hatt.append(G2.hatt[h])
        p = G2.hpart[h]
        b.hpart.append(p + off_h if p >= 0 else -1)
        b.hkind.append(G2.hkind[h])
    for t, x in G2.odd:
        b.odd.append((t, x + (off_v if t == 'v' else off_h)))
    sign, rest = front(b.odd, [it for it in (('h', h1), ('h', h2 + off_h)) if it in b.odd])
    b.odd = rest
    b.join(h1, h2 + off_h, kind)
    b.hatt[h1] = (-1,) + tuple(b.hatt[h1][1:])
    b.hatt[h2 + off_h] = (-1,) + tuple(b.hatt[h2 + off_h][1:])
    if kind == USUAL:
        b.odd.insert(0, ('e', h1))
    return sign, b.freeze()


def contract_edge(G, h, merge=None, allow_tadpole=False):
    """Contract the edge through half-edge h; returns (sign, graph).

    The removed edge item leaves the order with its positional sign.  merge
    combines the two vertex data (default: add genera, keep the first class).
    """
    p = G.hpart[h]
    if p < 0:
        raise ValueError("not an edge")
    v, w = G.hv[h], G.hv[p]
    b = Builder(G)
    sign = 1
    it = edge_item(G, h)
    if it in b.odd:
        sign, b.odd = front(b.odd, [it])
    b.remove_half(h)
    b.remove_half(p)
    if v == w:
        if not allow_tadpole:
            raise ValueError("contracting a tadpole is not allowed here")
        d = b.verts[v]
        b.verts[v] = (d[0] + 1,) + tuple(d[1:])
        return sign, b.freeze()
    if merge is None:
        dv, dw = b.verts[v], b.verts[w]
        b.verts[v] = (dv[0] + dw[0],) + tuple(dv[1:])
    else:
        b.verts[v] = merge(b.verts[v], b.verts[w])
    for k in range(len(b.hv)):
        if b.hv[k] == w:
            b.hv[k] = v
    b.odd = [(t, v if (t == 'v' and x == w) else x) for t, x in b.odd]
    b.remove_vertex(w)
    return sign, b.freeze()


def split_vertex_terms(G, v):
    """All splittings of v into two vertices joined by a new usual edge.

    Every ordered stable splitting (S1, g1 | S2, g2) of the half-edges at v
    is listed.  The first piece keeps the index v; the new vertex is last;
    the new edge is put first.  Vertex data is (g,) + old decoration, which
    the caller replaces.  Returns (graph, (g1, S1), (g2, S2), hA, hB) where
    hA sits on the first piece and hB on the second.
    """
    hs = G.halfedges_at(v)
    g = G.verts[v][0]
    out = []
    k = len(hs)
    for mask in range(1 << k):
        S1 = [hs[i] for i in range(k) if mask >> i & 1]
        S2 = [hs[i] for i in range(k) if not mask >> i & 1]
        for g1 in range(g + 1):
            g2 = g - g1
            if 2 * g1 + len(S1) + 1 <= 2 or 2 * g2 + len(S2) + 1 <= 2:
                continue
            b = Builder(G)
            d = b.verts[v]
            b.verts[v] = (g1,) + tuple(d[1:])
            w = b.add_vertex((g2,) + tuple(d[1:]))
            for h in S2:
                b.hv[h] = w
            hA = b.add_half(v, (-1, 0, 0), USUAL)
            hB = b.add_half(w, (-1, 0, 0), USUAL)
            b.join(hA, hB, USUAL)
            b.odd.insert(0, ('e', hA))
            out.append((b.freeze(), (g1, tuple(S1)), (g2, tuple(S2)), hA, hB))
    return out


def enumerate_stable_graphs(g, n, max_vertices, labeled=True):
    """Isomorphism classes of stable graphs of genus g with n legs.

    With labeled=False all legs carry the same label, so graphs differing
    only by a relabelling of the legs are identified.
    """
    if 2 * g + n <= 2:
        raise ValueError("unstable (g, n)")
    labs = range(1, n + 1) if labeled else [1] * n
    start = stable_graph([g], legs=[(0, i) for i in labs])
    start = canonicalize(start)[0]
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for G in frontier:
            cands = []
            for v in range(G.nv):
                if G.verts[v][0] >= 1:
                    cands.append(add_tadpole(G, v))
                if G.nv < max_vertices:
                    for H, *_ in split_vertex_terms(G, v):
                        cands.append(H)
            for H in cands:
                C = canonicalize(H)[0]
                if C not in seen:
                    seen.add(C)
                    nxt.append(C)
        frontier = nxt
    return sorted(seen, key=lambda G: (G.nv, G.n_edges(), G))


# ---------------------------------------------------------------------------
# JSON

def to_json(G):
    """Deterministic JSON-able dict for a graph."""
    edges, dashed = [], []
    order = [x for t, x in G.odd if t == 'e']
    rest = sorted(h for h, p in G.edges() if G.hkind[h] == USUAL and h not in order)
    for h in order + rest:
        edges.append([G.hv[h], G.hv[G.hpart[h]]])
    for h, p in G.edges():
        if G.hkind[h] == DASHED:
            dashed.append([G.hv[h], G.hv[p]])
    d = {
        "vertices": [_vjson(x) for x in G.verts],
        "edges": edges,
        "legs": [[G.hv[h], G.hatt[h][0]] for h in G.legs()],
    }
    if dashed:
        d["dashed"] = dashed
    d["halfedges"] = {"vertex": list(G.hv), "att": [list(a) for a in G.hatt],
                      "partner": list(G.hpart), "kind": list(G.hkind)}
    d["odd"] = [[t, x] for t, x in G.odd]
    return d


def _vjson(x):
    if isinstance(x, tuple) and x and isinstance(x[0], int):
        return {"g": x[0], "class": _tolist(x[1:])}
    return {"word": _tolist(x)}


def _tolist(x):
    if isinstance(x, tuple):
        return [_tolist(y) for y in x]
    return x


def _totuple(x):
    if isinstance(x, list):
        return tuple(_totuple(y) for y in x)
    return x


def from_json(d):
    if "halfedges" in d:
        he = d["halfedges"]
        verts = []
        for x in d["vertices"]:
            if "g" in x:
                verts.append((x["g"],) + _totuple(x["class"]) if "class" in x
                             else (x["g"], UNIT))
            else:
                verts.append(_totuple(x["word"]))
        return Graph(tuple(verts), tuple(he["vertex"]), tuple(_totuple(a) for a in he["att"]),
                     tuple(he["partner"]), tuple(he["kind"]),
                     tuple((t, x) for t, x in d["odd"]))
    return stable_graph([x["g"] for x in d["vertices"]],
                        [tuple(e) for e in d["edges"]],
                        [tuple(l) for l in d["legs"]],
                        [tuple(e) for e in d.get("dashed", [])])


def dumps(G):
    return json.dumps(to_json(G), sort_keys=True)
