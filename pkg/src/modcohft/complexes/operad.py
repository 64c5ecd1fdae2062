"""Graph operads CGra and TautGra_A and their convolution pre-Lie algebras.

An operad graph has no legs.  Each vertex carries a word of unary letters,
the word () being a bare vertex:

    ('R', i, j, k)  a -> <a, e_i> e_j psi^k        (k >= 1)
    ('T', i, k)     forget a point carrying <-, e_i> psi^k   (k >= 2)
    ('k', i)        multiply by kappa_i
    ('ch', d)       multiply by ch_d (d odd)

A vertex with word (x_1, ..., x_k) applies x_k first.  Usual edges are odd;
a standard edge has attribute (-1, 0, 0) on both ends and glues with the
pairing, a labelled edge has (i, p, 0) on its ends and stands for the label
e_i psi^p at that end.  Dashed edges are even and always labelled.

Normalisation.  A key G with coefficient c acts on an even element alpha
of g_A by c * F_G(alpha), where F_G feeds a term of alpha to every vertex
and sums over all injective assignments of the half-edges at a vertex to
the legs of its term.  In this normalisation the pre-Lie product is the
plain sum over insertions with all reconnections of half-edges, the edge
element is 1/2 (one edge) and the tadpole element is 1/2 (one loop).
"""

from fractions import Fraction
from itertools import product, permutations
from math import factorial

from ..graphs import Builder, Graph, USUAL, DASHED, front, betti1
from ..coeffs import (mono, mono_mul, pushforward_forget, vanishes_by_dimension)
from .vec import GVec, OVec, Truncation, weight
from .ga import disjoint_union

HALF = Fraction(1, 2)
STD = (-1, 0, 0)

FLAVORS = ('cgra-theta', 'cgra-vartheta', 'cgra-omega', 'tautgra-omega', 'tautgra-theta')


# ---------------------------------------------------------------------------
# constructors

def op_graph(words, edges=()):
    """Operad graph from vertex words and an edge list.

    An edge is (v, w) for a standard edge, (v, w, (i, p), (j, q)) for a
    labelled usual edge and ('d', v, w, (i, p), (j, q)) for a dashed edge.
    Usual edges are oriented in the order given.
    """
    b = Builder()
    for w in words:
        b.add_vertex(tuple(w))
    items = []
    for e in edges:
        if e[0] == 'd':
            _, v, w, a1, a2 = e
            h1 = b.add_half(v, (a1[0], a1[1], 0))
            h2 = b.add_half(w, (a2[0], a2[1], 0))
            b.join(h1, h2, DASHED)
            continue
        if len(e) == 2:
            v, w = e
            h1 = b.add_half(v, STD)
            h2 = b.add_half(w, STD)
        else:
            v, w, a1, a2 = e
            h1 = b.add_half(v, (a1[0], a1[1], 0))
            h2 = b.add_half(w, (a2[0], a2[1], 0))
        b.join(h1, h2, USUAL)
        items.append(('e', h1))
    b.odd = items
    return b.freeze()


def ovec(terms=()):
    """OVec from (graph, hbar, coef) triples."""
    out = OVec()
    for G, h, c in terms:
        out.add_raw(G, h, Fraction(c))
    return out


def vertex():
    return op_graph([()])


def edge_graph():
    return op_graph([(), ()], [(0, 1)])


def tadpole_graph():
    return op_graph([()], [(0, 0)])


def tetrahedron():
    return op_graph([()] * 4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])


def vartheta():
    return ovec([(edge_graph(), 0, HALF)])


def omega(hbar=0):
    return ovec([(tadpole_graph(), hbar, HALF)])


def theta(flavor='cgra-theta'):
    """The Maurer-Cartan element twisting the given flavor."""
    if flavor in ('cgra-vartheta',):
        return vartheta()
    if flavor in ('cgra-omega', 'tautgra-omega'):
        return vartheta() + omega(0)
    if flavor in ('cgra-theta', 'tautgra-theta'):
        return vartheta() + omega(1)
    raise ValueError("unknown flavor %r" % (flavor,))


def sigma3():
    """The tetrahedron cycle (unit coefficient on the concrete graph)."""
    return ovec([(tetrahedron(), 0, 1)])


# ---------------------------------------------------------------------------
# degrees

def letter_degree(x):
    t = x[0]
    if t == 'R':
        return x[3]
    if t == 'T':
        return x[2] - 1
    if t in ('k', 'ch'):
        return x[1]
    raise ValueError("unknown letter %r" % (x,))


def op_degree(G):
    """Additive filtration degree: (V - 1) + b1 + psi exponents + letter degrees."""
    d = G.nv - 1 + betti1(G)
    d += sum(a[1] for a in G.hatt)
    d += sum(letter_degree(x) for w in G.verts for x in w)
    return d


def default_degree_cap(N):
    return N + (N // 2 + 1) + (3 * N) // 2 + 2


def _min_weight(a, delta):
    """Least 2g - 2 + m over stable (g, m) with m >= a and dimension >= delta."""
    best = None
    for g in range(0, delta + 3):
        m = max(a, 3 - 2 * g, delta + 3 - 3 * g)
        w = 2 * g - 2 + m
        if best is None or w < best:
            best = w
    return best


def min_weight(G):
    """Lower bound for the weight of any nonzero output of F_G.

    Every vertex needs an input whose arity covers its half-edges and whose
    dimension covers the psi powers on its half-edges plus its letters.
    """
    arity = [0] * G.nv
    delta = [sum(letter_degree(x) for x in w) for w in G.verts]
    for h, v in enumerate(G.hv):
        arity[v] += 1
        delta[v] += G.hatt[h][1]
    return sum(_min_weight(a, d) for a, d in zip(arity, delta))


# ---------------------------------------------------------------------------
# composition

def r_on_graph(A, letter, G):
    """R . G: an R letter pushed through the edges of G (sign included)."""
    _, i, j, k = letter
    out = []
    for h in range(len(G.hv)):
        if G.hpart[h] < 0:
            continue
        a = G.hatt[h]
        b = Builder(G)
        if a[0] < 0:
            b.hatt[h] = (i, k, 0)
            b.hatt[G.hpart[h]] = (j, 0, 0)
            c = -1
        else:
            c = -A.G[j][a[0]]
            if not c:
                continue
            b.hatt[h] = (i, a[1] + k, 0)
        out.append((c, b.freeze()))
    return out


def push_letter(A, letter, G):
    """letter o G in normal form: a list of (coef, graph)."""
    out = []
    for v in range(G.nv):
        b = Builder(G)
        b.verts[v] = (letter,) + tuple(G.verts[v])
        out.append((1, b.freeze()))
    if letter[0] == 'R':
        out.extend(r_on_graph(A, letter, G))
    return out


def push_word(A, word, G):
    terms = [(1, G)]
    for x in reversed(word):
        nxt = []
        for c, H in terms:
            for c2, H2 in push_letter(A, x, H):
                nxt.append((c * c2, H2))
        terms = nxt
    return terms


def insert(A, x, v, y):
    """x o_v y with every reconnection of the half-edges at v; list of (coef, graph)."""
    out = []
    word = x.verts[v]
    for c0, z in push_word(A, word, y):
        U, off = disjoint_union(x, z)
        offv = x.nv
        hs = [h for h in range(len(x.hv)) if x.hv[h] == v]
        for targets in product(range(z.nv), repeat=len(hs)):
            b = Builder(U)
            for h, t in zip(hs, targets):
                b.hv[h] = offv + t
            b.remove_vertex(v)
            out.append((c0, b.freeze()))
    return out


def prelie_star(x, y, A=None, window=None, degree_cap=None):
    """x * y = sum over vertices v of x of x o_v y."""
    out = OVec()
    for (G1, h1), c1 in x.items():
        for (G2, h2), c2 in y.items():
            if window is not None and window.vertex_max is not None:
                if G1.nv + G2.nv - 1 > window.vertex_max:
                    continue
            if degree_cap is not None and op_degree(G1) + op_degree(G2) > degree_cap:
                continue
            for v in range(G1.nv):
                for c, H in insert(A, G1, v, G2):
                    out.add_raw(H, h1 + h2, c * c1 * c2, window)
    return out


def _by_parity(x):
    parts = {}
    for (G, h), c in x.items():
        parts.setdefault(G.parity(), OVec())[(G, h)] = c
    return parts


def lie(x, y, A=None, window=None):
    """[x, y] = x * y - (-1)^(|x||y|) y * x, componentwise in parity."""
    out = OVec()
    for px, xx in _by_parity(x).items():
        for py, yy in _by_parity(y).items():
            out.iadd(prelie_star(xx, yy, A, window))
            out.iadd(prelie_star(yy, xx, A, window), -(-1) ** (px * py))
    return out


def d_E(x):
    """Replace a dashed edge by a usual one decorated by psi + psi'."""
    out = OVec()
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
                out.add_raw(b.freeze(), h, c)
    return out


def twisted_diff(x, flavor='cgra-theta', A=None):
    """d_E x + [theta, x] for the flavor's twisting element."""
    out = OVec()
    if flavor.startswith('tautgra'):
        out.iadd(d_E(x))
    th = theta(flavor)
    for p, xx in _by_parity(x).items():
        out.iadd(prelie_star(th, xx, A))
        out.iadd(prelie_star(xx, th, A), -(-1) ** p)
    return out


def check_cycle(x, flavor='cgra-theta', A=None):
    """Certificate for the exact vanishing of the twisted differential."""
    r = twisted_diff(x, flavor, A)
    return {"operation": "check_cycle", "flavor": flavor,
            "residual_support": [describe(G, h) for G, h in sorted(r, key=_skey)],
            "verdict": "pass" if not r else "fail"}


def _skey(k):
    G, h = k
    return (G.nv, h, repr(G))


def describe(G, h=0):
    """Short human-readable form of an operad graph."""
    es = []
    for a, b in G.edges():
        kind = 'd' if G.hkind[a] == DASHED else 'e'
        es.append("%s%d-%d%s" % (kind, G.hv[a], G.hv[b],
                                 '' if G.hatt[a][0] < 0 else "[%s|%s]" % (G.hatt[a][:2], G.hatt[b][:2])))
    ws = ["%d:%s" % (v, w) for v, w in enumerate(G.verts) if w]
    return "V=%d h=%d %s %s" % (G.nv, h, " ".join(es), " ".join(ws))


# ---------------------------------------------------------------------------
# BCH and the pre-Lie exponential

def _bch_words(order):
    """Dynkin coefficients of log(e^X e^Y): {word over (0, 1): coef}."""
    series = {}
    for a in range(order + 1):
        for b in range(order + 1 - a):
            if a + b:
                series[(0,) * a + (1,) * b] = Fraction(1, factorial(a) * factorial(b))
    logs = {}
    power = dict(series)
    for m in range(1, order + 1):
        for w, c in power.items():
            logs[w] = logs.get(w, 0) + Fraction((-1) ** (m + 1), m) * c
        nxt = {}
        for w1, c1 in power.items():
            for w2, c2 in series.items():
                if len(w1) + len(w2) <= order:
                    w = w1 + w2
                    nxt[w] = nxt.get(w, 0) + c1 * c2
        power = nxt
    return {w: c / len(w) for w, c in logs.items() if c}


def bch(x, y, order=6, bracket=None):
    """log(e^x e^y) to the given order via Dynkin's formula.

    bracket defaults to the pre-Lie commutator of operad elements.
    """
    if bracket is None:
        bracket = lie
    cache = {}

    def nested(w):
        if w in cache:
            return cache[w]
        base = x if w[0] == 0 else y
        r = base if len(w) == 1 else bracket(base, nested(w[1:]))
        cache[w] = r
        return r

    out = type(x)()
    for w, c in sorted(_bch_words(order).items()):
        if len(w) > 1 and w[-1] == w[-2]:
            continue  # [.., [z, z]] = 0
        t = nested(w)
        if t:
            out.iadd(t, c)
    return out


def prelie_exp(sigma, A=None, vertex_max=None, degree_cap=None, max_power=64,
               weight_cap=None):
    """e^sigma = unit + sum_m (left-iterated powers)/m!, truncated.

    Every term of sigma must have positive degree so the series is finite
    under the degree cap.  With weight_cap, terms whose every output has
    weight above the cap (see min_weight) are dropped; this is exact for the
    action on a window of that weight, since such terms stay dead under
    further insertions.
    """
    for G, h in sigma:
        if op_degree(G) + h < 1:
            raise ValueError("pre-Lie exponential needs weight >= 1")
    window = Truncation(None, None, None, vertex_max)
    out = ovec([(vertex(), 0, 1)])
    cur = sigma
    fact = Fraction(1)
    for m in range(1, max_power + 1):
        if not cur:
            break
        fact /= m
        out.iadd(cur, fact)
        cur = prelie_star(cur, sigma, A, window, degree_cap)
        if degree_cap is not None or weight_cap is not None:
            cur = OVec({k: c for k, c in cur.items()
                        if (degree_cap is None or op_degree(k[0]) <= degree_cap)
                        and (weight_cap is None or min_weight(k[0]) <= weight_cap)})
    else:
        raise RuntimeError("pre-Lie exponential did not terminate")
    return out


# ---------------------------------------------------------------------------
# action on g_A

def _leg_items(A, G, h):
    return [('h', h)] if A.parity[G.hatt[h][0]] else []


def apply_letter(A, letter, x, window=None):
    """Action of one unary letter on an element of g_A."""
    out = GVec()
    t = letter[0]
    for (G, h), c in x.items():
        if t == 'R':
            _, i, j, k = letter
            for l in G.legs():
                lab, p = G.hatt[l][0], G.hatt[l][1]
                f = A.G[lab][i]
                if not f:
                    continue
                if A.parity[lab] != A.parity[j]:
                    raise ValueError("R letters must be even")
                b = Builder(G)
                b.hatt[l] = (j, p + k) + tuple(G.hatt[l][2:])
                out.add_raw(b.freeze(), h, c * f, window)
        elif t == 'T':
            _, i, k = letter
            for l in G.legs():
                lab, p = G.hatt[l][0], G.hatt[l][1]
                f = A.G[lab][i]
                if not f:
                    continue
                v = G.hv[l]
                g, m = G.verts[v]
                n = G.arity(v)
                ptot = sum(G.hatt[q][1] for q in range(len(G.hv)) if G.hv[q] == v)
                if vanishes_by_dimension(g, n, m, ptot + k):
                    continue
                for cc, m2 in pushforward_forget(g, n, m, p + k):
                    b = Builder(G)
                    b.verts[v] = (g, m2)
                    b.remove_half(l)
                    out.add_raw(b.freeze(), h, c * f * cc, window)
        elif t in ('k', 'ch'):
            gen = mono(kappa=(letter[1],)) if t == 'k' else mono(ch=(letter[1],))
            for v in range(G.nv):
                b = Builder(G)
                g, m = G.verts[v]
                b.verts[v] = (g, mono_mul(m, gen))
                out.add_raw(b.freeze(), h, c, window)
        else:
            raise ValueError("unknown letter %r" % (letter,))
    return out


def apply_word(A, word, x, window=None):
    for letter in reversed(word):
        x = apply_letter(A, letter, x, window)
    return x


def _glue_edge(A, b, odd, x, y, kind, a1, a2):
    """Glue legs x, y of the builder for an operad edge with end data a1, a2.

    Returns (coef, new odd list) or (0, None).
    """
    lx, ly = b.hatt[x][0], b.hatt[y][0]
    if a1[0] < 0:
        f = A.G[lx][ly]
        px, py = 0, 0
    else:
        f = A.G[lx][a1[0]] * A.G[a2[0]][ly]
        px, py = a1[1], a2[1]
    if not f:
        return 0, None
    items = ([('h', x)] if A.parity[lx] else []) + ([('h', y)] if A.parity[ly] else [])
    if items and (a1[0] >= 0 or kind == DASHED):
        raise ValueError("labelled edges need even legs")
    s, rest = front(odd, items)
    b.join(x, y, kind)
    b.hatt[x] = (-1, b.hatt[x][1] + px) + tuple(b.hatt[x][2:])
    b.hatt[y] = (-1, b.hatt[y][1] + py) + tuple(b.hatt[y][2:])
    if kind == USUAL:
        rest = [('e', min(x, y))] + rest
    return f * s, rest


def evaluate(A, H, terms, window=None, hbar=0, coef=1, out=None):
    """coef * F_H applied to the vertex inputs; terms[v] is a list of (graph, hbar, c)."""
    out = GVec() if out is None else out
    N = window.N if window is not None else None
    hs = [H.halfedges_at(v) for v in range(H.nv)]
    edges = [(h, H.hpart[h]) for t, h in H.odd if t == 'e']
    dashed = [(a, b) for a, b in H.edges() if H.hkind[a] == DASHED]
    order = dashed + list(reversed(edges))

    def rec(v, chosen):
        if v == H.nv:
            yield list(chosen)
            return
        for t in terms[v]:
            G = t[0]
            if len(G.legs()) < len(hs[v]):
                continue
            if N is not None:
                w = sum(weight(c[0]) for c in chosen) + weight(G)
                if w > N:
                    continue
            chosen.append(t)
            yield from rec(v + 1, chosen)
            chosen.pop()

    for combo in rec(0, []):
        U = combo[0][0]
        offs = [0]
        for G, _, _ in combo[1:]:
            off_before = len(U.hv)
            U, _ = disjoint_union(U, G)
            offs.append(off_before)
        hsum = hbar + sum(t[1] for t in combo)
        c0 = coef
        for t in combo:
            c0 *= t[2]
        legsets = [[l + offs[v] for l in combo[v][0].legs()] for v in range(H.nv)]
        choices = [list(permutations(legsets[v], len(hs[v]))) for v in range(H.nv)]
        for pick in product(*choices):
            where = {}
            for v in range(H.nv):
                for h, l in zip(hs[v], pick[v]):
                    where[h] = l
            b = Builder(U)
            odd = list(U.odd)
            c = c0
            for e1, e2 in order:
                f, odd = _glue_edge(A, b, odd, where[e1], where[e2], H.hkind[e1],
                                    H.hatt[e1], H.hatt[e2])
                if not f:
                    c = 0
                    break
                c *= f
            if not c:
                continue
            b.odd = odd
            out.add_raw(b.freeze(), hsum, c, window)
    return out


def act_on_gA(lam, alpha, A, window=None, infinitesimal=False, exp=None):
    """lambda . alpha = sum over terms of e^lambda of c hbar^k F_G(alpha).

    With infinitesimal=True only F_lambda(alpha) is returned.  alpha must be
    even; it may be given on a larger window than the output when T letters
    are present.
    """
    window = window or Truncation(4)
    if alpha and alpha.parity():
        raise ValueError("action needs an even element")
    if infinitesimal:
        ex = lam
    elif exp is not None:
        ex = exp
    else:
        cap = default_degree_cap(window.N) if window.N is not None else None
        ex = prelie_exp(lam, A, vertex_max=window.N, degree_cap=cap, weight_cap=window.N)
    items = [(G, h, c) for (G, h), c in alpha.items()]
    cache = {}
    out = GVec()
    for (H, hh), c in sorted(ex.items(), key=lambda kv: _skey(kv[0])):
        if window.hbar_max is not None and hh > window.hbar_max:
            continue
        terms = []
        for w in H.verts:
            if w not in cache:
                cache[w] = [(G, h, cc) for (G, h), cc in apply_word(A, w, alpha).items()] if w else items
            terms.append(cache[w])
        evaluate(A, H, terms, window, hh, c, out)
    return out
