"""Window homology, cycle lifting, gauge equivalence and formal deformations."""

from fractions import Fraction
from itertools import combinations, product

from ..graphs import betti1, total_genus, is_connected
from ..linalg import SparseMatQ, Basis, rank, solve_in_image
from .vec import GVec, OVec, Truncation, weight
from .operad import (op_graph, twisted_diff, lie, vartheta, omega, ovec, describe, _skey)
from .basis import ga_basis


# ---------------------------------------------------------------------------
# matrices of linear maps on graph vectors

def matrix_of(fn, src, rows=None):
    """Columns fn(e_k) for k in src; rows is grown to hold every image key.

    Returns (SparseMatQ, rows).  fn maps a one-term vector to a vector.
    """
    rows = Basis() if rows is None else rows
    cols = []
    for k in src:
        x = _vec_class(k)({k: Fraction(1)})
        img = fn(x)
        cols.append({rows.add(kk): c for kk, c in img.items()})
    return SparseMatQ(len(rows), len(src), cols), rows


def _vec_class(k):
    # g_A vertices are (genus, class) pairs, operad vertices are words
    for w in k[0].verts:
        if w and not isinstance(w[0], tuple):
            return GVec
    return OVec


def coords(rows, x):
    """Sparse coordinate vector of x, extending rows as needed."""
    return {rows.add(k): Fraction(c) for k, c in x.items()}


# ---------------------------------------------------------------------------
# CGra complexes

def cgra_graphs(max_vertices=4):
    """Canonical nonzero connected graphs: simple edges, at most one tadpole per vertex."""
    out = set()
    for V in range(1, max_vertices + 1):
        pairs = list(combinations(range(V), 2))
        for emask in range(1 << len(pairs)):
            es = [pairs[i] for i in range(len(pairs)) if emask >> i & 1]
            if len(es) < V - 1:
                continue
            for tmask in range(1 << V):
                ts = [(v, v) for v in range(V) if tmask >> v & 1]
                G = op_graph([()] * V, es + ts)
                if not is_connected(G):
                    continue
                for k in ovec([(G, 0, 1)]):
                    out.add(k[0])
    return sorted(out, key=lambda G: (G.n_edges(), G.nv, repr(G)))


def tautgra_graphs(A, max_vertices=3, psi_max=2, max_decorated=1, letters=None):
    """Decorated operad graphs for TautGra checks.

    Shapes are the CGra graphs with at most max_vertices vertices; at most
    max_decorated of their edges become labelled usual or dashed edges
    (even labels, total psi <= psi_max), and at most one vertex carries one
    letter from letters (default: degree-one letters on the even part).
    """
    even = [i for i in range(A.dim) if not A.parity[i]]
    if letters is None:
        letters = [('R', i, j, 1) for i in even for j in even]
        letters += [('T', i, 2) for i in even] + [('k', 1), ('ch', 1)]
    ends = [(i, p) for i in even for p in range(psi_max + 1)]
    out = set()
    for G in cgra_graphs(max_vertices):
        pairs = [(G.hv[a], G.hv[b]) for a, b in G.edges()]
        for nd in range(max_decorated + 1):
            for S in combinations(range(len(pairs)), nd):
                decos = []
                for a1 in ends:
                    for a2 in ends:
                        for kind in ('u', 'd'):
                            decos.append((kind, a1, a2))
                for choice in product(decos, repeat=nd):
                    if sum(a1[1] + a2[1] for _, a1, a2 in choice) > psi_max:
                        continue
                    es = list(pairs)
                    for n, (kind, a1, a2) in zip(S, choice):
                        v, w = pairs[n]
                        es[n] = ('d', v, w, a1, a2) if kind == 'd' else (v, w, a1, a2)
                    wordings = [[()] * G.nv]
                    for v in range(G.nv):
                        for x in letters:
                            ws = [()] * G.nv
                            ws[v] = (x,)
                            wordings.append(ws)
                    for ws in wordings:
                        for k in ovec([(op_graph(ws, es), 0, 1)]):
                            out.add(k[0])
    return sorted(out, key=lambda G: (G.nv, G.n_edges(), repr(G)))


def d_squared(x, flavor, A=None):
    """The twisted differential applied twice."""
    return twisted_diff(twisted_diff(x, flavor, A), flavor, A)


def _min_vertices(s):
    v = 1
    while v * (v - 1) // 2 < s:
        v += 1
    return v


def _omega_in_window(E, t, vmax, b1max):
    """Are all graphs with E edges and t tadpoles inside the window?"""
    s = E - t
    if s < 0 or t < 0:
        return True
    vlo = max(t, _min_vertices(s), 1)
    vhi = s + 1
    if vlo > vhi:
        return True  # empty
    return vhi <= vmax and E - vlo + 1 <= b1max


def homology_window(flavor='cgra-omega', max_vertices=4, b1_max=None, hbar_max=3, A=None,
                    degree_max=2):
    """Homology dimensions of a twisted complex on a window.

    cgra-omega: the hbar = 1 complex with d = [vartheta + omega, -], graded
    by (edges, tadpoles).  cgra-theta: d = [vartheta + hbar omega, -],
    graded by (edges, b1 - hbar, tadpoles).  givental: the one-vertex part
    of the Givental complex (see givental.one_vertex_homology_window).

    Each row is (grading, dimension, status).  status is 'exact' when the
    incoming and outgoing gradings are complete in the window, 'bound'
    otherwise (the number is then an upper bound, since images from outside
    the window are missing).
    """
    if flavor == 'givental':
        from ..givental import one_vertex_homology_window
        res = one_vertex_homology_window(A, degree_max)
        return [((d,), dim, 'exact') for d, dim in sorted(res.items())]
    if b1_max is None:
        b1_max = max_vertices * (max_vertices + 1) // 2
    graphs = [G for G in cgra_graphs(max_vertices) if betti1(G) <= b1_max]
    if flavor == 'cgra-omega':
        keys = [(G, 0) for G in graphs]

        def grade(k):
            return (k[0].n_edges(), k[0].n_tadpoles())

        def nxt(g):
            return (g[0] + 1, g[1])

        def prv(g):
            return (g[0] - 1, g[1])

        def complete(g):
            return _omega_in_window(g[0], g[1], max_vertices, b1_max)
    elif flavor == 'cgra-theta':
        keys = [(G, h) for G in graphs for h in range(0, hbar_max + 1) if h <= betti1(G)]

        def grade(k):
            G, h = k
            return (G.n_edges(), betti1(G) - h, G.n_tadpoles())

        def nxt(g):
            return (g[0] + 1, g[1], g[2])

        def prv(g):
            return (g[0] - 1, g[1], g[2])

        def complete(g):
            E, c, t = g
            if not _omega_in_window(E, t, max_vertices, b1_max):
                return False
            # hbar = b1 - c must stay under the cap for every graph of the grading
            return E - c <= hbar_max or E < 0
    else:
        raise ValueError("unknown flavor %r" % (flavor,))
    groups = {}
    for k in keys:
        groups.setdefault(grade(k), []).append(k)

    def dmap(x):
        return twisted_diff(x, flavor)

    rows = []
    for g in sorted(groups):
        ks = groups[g]
        dout, _ = matrix_of(dmap, ks)
        src = groups.get(prv(g), [])
        B = Basis(ks)
        din, B2 = matrix_of(dmap, src, B)
        # boundaries are counted only inside the span of the window's graphs
        outside = SparseMatQ(len(B2) - len(ks), din.ncols,
                             [{r - len(ks): c for r, c in col.items() if r >= len(ks)}
                              for col in din.cols])
        dim = len(ks) - rank(dout) - (rank(din) - rank(outside))
        exact = (len(B2) == len(ks) and complete(prv(g)) and complete(g)
                 and complete(nxt(g)))
        rows.append((g, dim, 'exact' if exact else 'bound'))
    return rows


def quantize_cycle(sigma0, max_steps=8):
    """Lift a vartheta-cycle to a theta-cycle sum_i hbar^i sigma_i.

    Solves [vartheta, sigma_(i+1)] = -[omega, sigma_i] among graphs with one
    vertex fewer and as many edges.  Returns (lift, None) or (None, witness).
    """
    if twisted_diff(sigma0, 'cgra-vartheta'):
        raise ValueError("input is not a vartheta-cycle")
    om = omega(0)
    out = OVec()
    cur = OVec({(G, 0): c for (G, h), c in sigma0.items()})
    for i in range(max_steps + 1):
        for (G, h), c in cur.items():
            out[(G, i)] = out.get((G, i), 0) + c
        rhs = lie(om, cur)
        if not rhs:
            return out, None
        shapes = {(G.nv - 1, G.n_edges()) for G, h in cur}
        src = [(G, 0) for G in cgra_graphs(max(v for v, e in shapes) if shapes else 1)
               if (G.nv, G.n_edges()) in shapes]
        m, rows = matrix_of(lambda x: lie(vartheta(), x), src)
        b = coords(rows, rhs.scaled(-1))
        m.nrows = len(rows)
        x, wit = solve_in_image(m, b)
        if x is None:
            return None, {rows.keys[r][0]: c for r, c in wit.items()}
        cur = OVec()
        for j, c in x.items():
            cur[src[j]] = c
    raise RuntimeError("lift did not terminate")


# ---------------------------------------------------------------------------
# gauge equivalence in g_A

def _basis_for(ga, x, w, psi_max, dashed, classes, max_vertices, hbar_max):
    graphs = ga_basis(ga.A, Truncation(w), max_vertices, psi_max, dashed, classes)
    out = []
    for G in graphs:
        if weight(G) != w or G.parity() != 1:
            continue
        for h in range(hbar_max + 1):
            out.append((G, h))
    return out


def _vertex_classes(*xs):
    cl = set()
    for x in xs:
        for G, h in x:
            for g, m in G.verts:
                cl.add(m)
    return sorted(cl)


def gauge_equivalent(ga, alpha, beta, quantum=False, classes=None, psi_max=None,
                     dashed=None, max_vertices=4, hbar_max=None):
    """Find odd xi with exp(xi) . alpha = beta, order by order in the weight.

    At weight w the equation is (d + Delta) xi_w = (beta - xi_<w . alpha)_w,
    solved over a spanning set of odd graphs (vertex classes, psi cap and
    dashed edges default to those seen in alpha and beta).  Returns a dict
    with verdict 'equivalent' and xi, or 'obstructed' with a certificate:
    the weight, the left-kernel witness and the target terms it detects.
    The certificate is relative to the spanning set used.
    """
    window = ga.window
    N = window.N
    if classes is None:
        classes = _vertex_classes(alpha, beta)
    if psi_max is None:
        psi_max = max([sum(a[1] for a in G.hatt) for G, h in list(alpha) + list(beta)] + [0])
    if dashed is None:
        dashed = any(G.n_edges(2) for G, h in list(alpha) + list(beta))
    if hbar_max is None:
        hbar_max = (window.hbar_max if window.hbar_max is not None else 0) if quantum else 0
    xi = GVec()
    for w in range(1, N + 1):
        cur = ga.gauge_act(xi, alpha, quantum=quantum)
        diff = beta - cur
        low = [k for k in diff if weight(k[0]) < w]
        if low:
            raise RuntimeError("lower weights not solved")
        target = GVec({k: c for k, c in diff.items() if weight(k[0]) == w})
        if not target:
            continue
        src = _basis_for(ga, target, w, psi_max, dashed, classes, max_vertices, hbar_max)
        m, rows = matrix_of(lambda x: _weight_part(ga.D(x, quantum), w), src)
        b = coords(rows, target)
        m.nrows = len(rows)
        x, wit = solve_in_image(m, b)
        if x is None:
            detected = []
            for r, y in sorted(wit.items()):
                k = rows.keys[r]
                if k in target:
                    detected.append({"graph": k, "target_coef": target[k], "witness": y})
            return {"verdict": "obstructed", "weight": w, "xi": xi,
                    "witness": {rows.keys[r]: y for r, y in wit.items()},
                    "detected": detected, "basis_size": len(src)}
        for j, c in x.items():
            xi[src[j]] = xi.get(src[j], 0) + c
    return {"verdict": "equivalent", "xi": xi}


def _weight_part(x, w):
    return GVec({k: c for k, c in x.items() if weight(k[0]) == w})


# ---------------------------------------------------------------------------
# infinitesimal and formal deformations

def infinitesimal_check(ga, lam, phi):
    """d1 lam = Delta lam and d2 lam = {phi, lam} (with d_A lam = 0)."""
    a = ga.d1(lam) - ga.delta(lam)
    b = ga.d2(lam) - ga.bracket(phi, lam)
    c = ga.dA(lam)
    return {"d1_equals_delta": not a, "d2_equals_bracket": not b, "dA_zero": not c,
            "verdict": "pass" if not (a or b or c) else "fail"}


def _single_vertex_basis(ga, degree_w, classes, psi_max, parity=0):
    graphs = ga_basis(ga.A, Truncation(degree_w), 1, psi_max, False, classes)
    return [(G, 0) for G in graphs if weight(G) == degree_w and G.parity() == parity]


def extend_formal_deformation(ga, phi, lam, steps=3, mode='formal', classes=None, psi_max=0):
    """Extend phi + t lam to a formal solution of the master equation.

    formal: d^phi phi_n = -1/2 sum_(k=1..n-1) {phi_k, phi_(n-k)} with
    d^phi = d + Delta + {phi, -}, phi_n sought among single-vertex graphs.
    syzygy: d_A phi_n = -((-d1 - d2 + Delta) phi_(n-1) + 1/2 sum {phi_k,
    phi_(n-k)}), phi_n sought among graphs with n - 1 edges more than lam.
    Returns {"verdict", "terms": [phi_1, ...], "obstruction": ...}.
    A vanishing right-hand side gives phi_n = 0.
    """
    if classes is None:
        classes = _vertex_classes(phi, lam)
    terms = [lam]
    half = Fraction(1, 2)

    def dphi(x):
        r = ga.D(x)
        r.iadd(ga.bracket(phi, x))
        return r

    if mode == 'formal':
        if dphi(lam):
            return {"verdict": "not a cocycle", "terms": terms, "obstruction": dphi(lam)}
    elif mode == 'syzygy':
        if ga.dA(lam):
            return {"verdict": "not a cocycle", "terms": terms, "obstruction": ga.dA(lam)}
    else:
        raise ValueError("mode must be 'formal' or 'syzygy'")
    for n in range(2, steps + 1):
        rhs = GVec()
        for k in range(1, n):
            rhs.iadd(ga.bracket(terms[k - 1], terms[n - k - 1]), half)
        if mode == 'syzygy':
            prev = terms[-1]
            rhs.iadd(ga.d1(prev), -1)
            rhs.iadd(ga.d2(prev), -1)
            rhs.iadd(ga.delta(prev))
        if not rhs:
            terms.append(GVec())
            continue
        ws = sorted({weight(G) for G, h in rhs})
        if mode == 'formal':
            src = [k for w in ws for k in _single_vertex_basis(ga, w, classes, psi_max)]
            fn = dphi
        else:
            ne = min(G.n_edges() for G, h in lam) + n - 1
            src = [(G, 0) for w in ws
                   for G in ga_basis(ga.A, Truncation(w), ne + 1, psi_max, False, classes)
                   if weight(G) == w and G.n_edges() == ne and G.parity() == 0]
            fn = ga.dA
        m, rows = matrix_of(fn, src)
        b = coords(rows, rhs.scaled(-1))
        m.nrows = len(rows)
        x, wit = solve_in_image(m, b)
        if x is None:
            return {"verdict": "obstructed", "step": n, "terms": terms, "obstruction": rhs,
                    "witness": {rows.keys[r]: y for r, y in wit.items()}}
        sol = GVec()
        for j, c in x.items():
            sol[src[j]] = c
        terms.append(sol)
    return {"verdict": "extends", "terms": terms, "obstruction": None}
