"""Concrete CohFT data: TQFTs, the two PZ constructions, BR and Xi."""

from fractions import Fraction
from itertools import combinations_with_replacement
from math import factorial

from .coeffs import SymVectorSpace, UNIT, mono, mono_mul, register_minimal, minimal, lambda_hbar
from .graphs import betti1, total_genus, Builder
from .complexes import GA, GVec, Truncation, vertex_graph, weight
from .complexes.vec import psi_degree


# ---------------------------------------------------------------------------
# Frobenius algebras

class FrobeniusData:
    """Graded commutative Frobenius algebra: A plus mult[i][j] = {k: coef}.

    Odd basis elements are allowed; commutativity is meant in the graded
    sense.  The counit is x -> <x, 1>.
    """

    def __init__(self, A, mult, unit=None, degrees=None):
        self.A = A
        n = A.dim
        self.mult = [[{k: Fraction(c) for k, c in mult[i][j].items() if c} for j in range(n)]
                     for i in range(n)]
        self.degrees = degrees
        self.unit = self._find_unit() if unit is None else {k: Fraction(c) for k, c in unit.items()}
        self.check()

    def mul(self, x, y):
        out = {}
        for i, a in x.items():
            for j, b in y.items():
                for k, c in self.mult[i][j].items():
                    out[k] = out.get(k, 0) + a * b * c
        return {k: v for k, v in out.items() if v}

    def pair(self, x, y):
        return sum(a * b * self.A.G[i][j] for i, a in x.items() for j, b in y.items())

    def _find_unit(self):
        from .linalg import SparseMatQ, solve_in_image
        n = self.A.dim
        # solve sum_i u_i e_i e_j = e_j for all j
        rhs = {}
        cols = [dict() for _ in range(n)]
        r = 0
        for j in range(n):
            for k in range(n):
                for i in range(n):
                    c = self.mult[i][j].get(k, 0)
                    if c:
                        cols[i][r] = c
                if j == k:
                    rhs[r] = 1
                r += 1
        x, cert = solve_in_image(SparseMatQ(n * n, n, cols), rhs)
        if x is None:
            raise ValueError("algebra has no unit")
        return x

    def check(self):
        n = self.A.dim
        par = self.A.parity
        e = [{i: Fraction(1)} for i in range(n)]
        for i in range(n):
            for j in range(n):
                for k, c in self.mult[i][j].items():
                    if par[k] != (par[i] + par[j]) % 2:
                        raise ValueError("product is not even")
                sg = -1 if par[i] and par[j] else 1
                ji = {k: sg * c for k, c in self.mul(e[j], e[i]).items()}
                if self.mul(e[i], e[j]) != ji:
                    raise ValueError("not graded commutative")
                for k in range(n):
                    if self.mul(self.mul(e[i], e[j]), e[k]) != self.mul(e[i], self.mul(e[j], e[k])):
                        raise ValueError("not associative")
                    if self.pair(self.mul(e[i], e[j]), e[k]) != self.pair(e[i], self.mul(e[j], e[k])):
                        raise ValueError("not Frobenius")

    def counit(self, x):
        return self.pair(x, self.unit)

    def duals(self):
        """Right duals: <e_k, e_k^v> = 1, <e_m, e_k^v> = 0 otherwise."""
        M = self.A.dual_basis()
        G = self.A.G
        n = self.A.dim
        out = []
        for k in range(n):
            # solve <e_m, x> = delta_mk, i.e. G x = e_k
            x = {j: M[j][k] for j in range(n) if M[j][k]}
            assert all(sum(G[m][j] * x.get(j, 0) for j in range(n)) == (m == k) for m in range(n))
            out.append(x)
        return out

    def handle(self):
        """sum_k (-1)^|e_k| e_k e_k^v; the Euler class for cohomology rings."""
        out = {}
        for k, dk in enumerate(self.duals()):
            sg = -1 if self.A.parity[k] else 1
            for i, c in self.mul({k: Fraction(1)}, dk).items():
                out[i] = out.get(i, 0) + sg * c
        return {k: v for k, v in out.items() if v}

    def correlator(self, g, xs):
        """counit(x_1 ... x_n H^g) for vectors x_i."""
        p = dict(self.unit)
        for x in xs:
            p = self.mul(p, x)
        H = self.handle()
        for _ in range(g):
            p = self.mul(p, H)
        return self.counit(p)

    def superdimension(self):
        return sum(-1 if p else 1 for p in self.A.parity)

    @classmethod
    def rank_one(cls):
        A = SymVectorSpace([0], [[1]], names=["a"])
        return cls(A, [[{0: 1}]])

    @classmethod
    def group_algebra_z2(cls):
        A = SymVectorSpace([0, 0], [[1, 0], [0, 1]], names=["1", "x"])
        return cls(A, [[{0: 1}, {1: 1}], [{1: 1}, {0: 1}]])

    @classmethod
    def from_json(cls, d):
        A = SymVectorSpace.from_json(d)
        mult = [[{int(k): Fraction(v) for k, v in cell.items()} for cell in row] for row in d["mult"]]
        return cls(A, mult, degrees=d.get("degrees"))


def _stab(labels):
    out = 1
    for lab in set(labels):
        out *= factorial(labels.count(lab))
    return out


def frobenius_tqft(F, N=4):
    """The TQFT solution of the master equation: single unit vertices.

    A picture with leg labels l_1..l_n (odd ones in the stored order) has
    coefficient Omega(l_n^v, ..., l_1^v) / |Stab L|, where Omega is the
    correlator and ^v the right dual.
    """
    A = F.A
    dual = F.duals()
    out = GVec()
    for g in range(0, N // 2 + 2):
        for n in range(0, N + 3):
            if 2 * g + n <= 2 or 2 * g - 2 + n > N:
                continue
            for labels in combinations_with_replacement(range(A.dim), n):
                labels = list(labels)
                c = F.correlator(g, [dual[l] for l in reversed(labels)])
                if c:
                    out.add_raw(vertex_graph(A, g, labels), 0, c / _stab(labels))
    return out


# ---------------------------------------------------------------------------
# PZ constructions

def pz_space(m):
    """Basis b_1..b_m, a, d, c_1..c_m with <a,d> = 1 and <b_i, c_i> = 1."""
    n = 2 * m + 2
    par = [1] * m + [0, 0] + [1] * m
    G = [[0] * n for _ in range(n)]
    a, d = m, m + 1
    G[a][d] = G[d][a] = 1
    for i in range(m):
        G[i][m + 2 + i] = 1
        G[m + 2 + i][i] = -1
    names = ["b%d" % (i + 1) for i in range(m)] + ["a", "d"] + ["c%d" % (i + 1) for i in range(m)]
    return SymVectorSpace(par, G, names=names)


def pz_indices(m):
    return {"a": m, "d": m + 1, "b": list(range(m)), "c": [m + 2 + i for i in range(m)]}


def pz_alpha(m, N=4):
    """The PZ element on the window of weight <= N.

    The odd legs of the b/c family are stored in the order (c_i, b_i).
    """
    A = pz_space(m)
    ix = pz_indices(m)
    a, d = ix["a"], ix["d"]
    x = GVec()
    for n in range(3, N + 3):
        x.add_raw(vertex_graph(A, 0, [a] + [d] * (n - 1)), 0, Fraction(1, factorial(n - 1)))
        for b, c in zip(ix["b"], ix["c"]):
            x.add_raw(vertex_graph(A, 0, [c, b] + [d] * (n - 2)), 0, Fraction(1, factorial(n - 2)))
    for n in range(1, N + 1):
        x.add_raw(vertex_graph(A, 1, [d] * n), 0, Fraction(2 - 2 * m, factorial(n)))
    return A, x


def pz_lambda(name, N=4):
    """lambda = sum_k 1/(k-m)! Lambda_k(c_1..c_m, d^(k-m)) at genus h."""
    L = minimal(name)
    h, m = L.h, L.m
    if L.parity != m % 2:
        raise ValueError("parity of the minimal class must match m")
    A = pz_space(m)
    ix = pz_indices(m)
    x = GVec()
    k = m
    while 2 * h - 2 + k <= N:
        labels = ix["c"] + [ix["d"]] * (k - m)
        roles = list(range(1, m + 1)) + [0] * (k - m)
        G = vertex_graph(A, h, labels, cls=mono(base=name), roles=roles)
        x.add_raw(G, 0, Fraction(1, factorial(k - m)))
        k += 1
    return A, x


def pz_general_frobenius(m, r, D, e_pairing=(), e_degrees=()):
    """Cohomology-type ring with basis b_1..b_m, a, d, c_1..c_m, e_1..e_s.

    Degrees: a in 0, d in D, c_i in r, b_i in D - r, e_j as given.  Every
    product of two positive-degree classes is a multiple of d:
    x y = <x, y> d.  The e-block pairing is e_pairing (graded symmetric).
    """
    s = len(e_degrees)
    degs = [D - r] * m + [0, D] + [r] * m + list(e_degrees)
    par = [x % 2 for x in degs]
    n = len(degs)
    G = [[0] * n for _ in range(n)]
    a, d = m, m + 1
    G[a][d] = G[d][a] = 1
    for i in range(m):
        b, c = i, m + 2 + i
        G[b][c] = 1
        G[c][b] = -1 if par[b] and par[c] else 1
    off = 2 * m + 2
    for i in range(s):
        for j in range(s):
            G[off + i][off + j] = e_pairing[i][j]
    names = (["b%d" % (i + 1) for i in range(m)] + ["a", "d"] + ["c%d" % (i + 1) for i in range(m)]
             + ["e%d" % (j + 1) for j in range(s)])
    A = SymVectorSpace(par, G, names=names)
    mult = [[{} for _ in range(n)] for _ in range(n)]
    for i in range(n):
        mult[a][i] = {i: 1}
        mult[i][a] = {i: 1}
    for i in range(n):
        for j in range(n):
            if i != a and j != a and G[i][j]:
                mult[i][j] = {d: G[i][j]}
    return FrobeniusData(A, mult, unit={a: 1}, degrees=degs)


def pz_general_alpha(F, N=4):
    """Generalised PZ element of a graded Frobenius algebra F.

    Genus-0 correlators are integrals of products, the genus-1 family
    carries the superdimension and genus >= 2 vanishes for degree reasons,
    so the element is the TQFT of F.  Returns (A, alpha, sdim).
    """
    if F.degrees is not None:
        D = max(F.degrees)
        if any(x % 2 != p for x, p in zip(F.degrees, F.A.parity)):
            raise ValueError("degrees do not match parities")
        H = F.handle()
        if any(F.degrees[k] != D for k in H):
            raise ValueError("handle element is not a top class")
    return F.A, frobenius_tqft(F, N), F.superdimension()


# ---------------------------------------------------------------------------
# Buryak-Rossi and Xi

def _times_vertex_classes(G, factors):
    """Multiply vertex v's class by factors[v] (monomial)."""
    b = Builder(G)
    for v, f in enumerate(factors):
        g, m = b.verts[v]
        b.verts[v] = (g, mono_mul(m, f))
    return b.freeze()


def br(x, window=None):
    """Decorate every vertex by lambda^hbar and the graph by hbar^b1."""
    window = window or Truncation(None, None)
    out = GVec()
    for (G, h), c in x.items():
        b1 = betti1(G)
        choices = [lambda_hbar(g) for g, m in G.verts]
        stack = [(0, [], 0)]
        while stack:
            v, fac, hp = stack.pop()
            if v == G.nv:
                out.add_raw(_times_vertex_classes(G, fac), h + b1 + hp, c, window)
                continue
            for hh, mm in choices[v]:
                stack.append((v + 1, fac + [mm], hp + hh))
    return out


def xi(x, window=None):
    """Multiply each graph by hbar^(b1 + sum of vertex genera)."""
    window = window or Truncation(None, None)
    out = GVec()
    for (G, h), c in x.items():
        out.add_raw(G, h + total_genus(G), c, window)
    return out


# ---------------------------------------------------------------------------
# classification

def classify(x):
    single = all(G.nv == 1 and G.n_edges() == 0 for G, h in x)
    if single and all(G.verts[0][1] == UNIT and psi_degree(G) == 0 and h == 0 for G, h in x):
        return "TQFT"
    if single and all(h == 0 for G, h in x):
        return "strict CohFT"
    if all(total_genus(G) == 0 for G, h in x):
        return "tree-level"
    return "homotopy CohFT"


def verify_cohft(A, x, window=None, quantum=False):
    window = window or Truncation(4)
    ga = GA(A, window)
    kind = classify(x)
    res = ga.quantum_master_residual(x) if quantum else ga.master_residual(x)
    return {"kind": kind, "residual_terms": len(res),
            "verdict": "pass" if not res else "fail", "window": window._asdict()}
