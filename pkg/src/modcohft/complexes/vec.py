"""Sparse rational combinations of canonical graphs, with hbar powers."""

from fractions import Fraction
from typing import NamedTuple, Optional

from ..graphs import canonicalize, total_genus, Graph, USUAL, DASHED, LEG, betti1
from ..coeffs import vanishes_by_dimension


class Truncation(NamedTuple):
    """Window caps.  N bounds the weight n + 2g - 2 (or arity - 1 for operad
    graphs); None means no cap."""
    N: Optional[int] = 4
    hbar_max: Optional[int] = None
    psi_max: Optional[int] = None
    vertex_max: Optional[int] = None


def weight(G):
    """2g - 2 + n for decorated stable graphs."""
    return 2 * total_genus(G) - 2 + len(G.legs())


def psi_degree(G):
    return sum(a[1] for a in G.hatt if a and len(a) > 1)


def gA_vertex_zero(G):
    """True if some vertex class vanishes by the dimension rule."""
    psis = [0] * G.nv
    for h, a in enumerate(G.hatt):
        psis[G.hv[h]] += a[1]
    for v, (g, m) in enumerate(G.verts):
        if vanishes_by_dimension(g, G.arity(v), m, psis[v]):
            return True
    return False


class GVec(dict):
    """{(graph, hbar power): Fraction}; keys canonical, values nonzero.

    `dropped` counts terms removed by a truncation window.
    """

    kind = 'gA'

    def __init__(self, *args, **kw):
        super().__init__(*args, **kw)
        self.dropped = 0

    def copy(self):
        r = type(self)(self)
        r.dropped = self.dropped
        return r

    def add_raw(self, G, h, c, window=None):
        """Add c * G * hbar^h after normalising G."""
        if not c:
            return
        if self.kind == 'gA' and gA_vertex_zero(G):
            return
        if window is not None and not self.in_window(G, h, window):
            self.dropped += 1
            return
        C, s = canonicalize(G)
        if not s:
            return
        k = (C, h)
        v = self.get(k, 0) + s * c
        if v:
            self[k] = v
        else:
            del self[k]

    def in_window(self, G, h, w):
        if w.hbar_max is not None and h > w.hbar_max:
            return False
        if w.vertex_max is not None and G.nv > w.vertex_max:
            return False
        if w.psi_max is not None and psi_degree(G) > w.psi_max:
            return False
        if w.N is not None and self.gweight(G, h) > w.N:
            return False
        return True

    def gweight(self, G, h):
        return weight(G)

    def iadd(self, other, c=1):
        for k, v in other.items():
            x = self.get(k, 0) + c * v
            if x:
                self[k] = x
            else:
                self.pop(k, None)
        self.dropped += getattr(other, 'dropped', 0)
        return self

    def __add__(self, other):
        return self.copy().iadd(other)

    def __sub__(self, other):
        return self.copy().iadd(other, -1)

    def __neg__(self):
        return self.scaled(-1)

    def scaled(self, c):
        r = type(self)()
        if c:
            for k, v in self.items():
                r[k] = v * c
        return r

    def truncated(self, w):
        r = type(self)()
        for (G, h), c in self.items():
            if self.in_window(G, h, w):
                r[(G, h)] = c
        return r

    def is_zero(self):
        return not self

    def parity(self):
        ps = {G.parity() for G, h in self}
        if len(ps) > 1:
            raise ValueError("inhomogeneous parity")
        return ps.pop() if ps else 0

    def components(self):
        """Group by (genus, legs) for decorated graphs."""
        out = {}
        for (G, h), c in self.items():
            key = (total_genus(G), len(G.legs()))
            out.setdefault(key, type(self)())[(G, h)] = c
        return out

    def support(self):
        return sorted(self, key=lambda k: (weight_key(k[0]), k[1], k[0]))

    def at_hbar1(self):
        r = type(self)()
        for (G, h), c in self.items():
            x = r.get((G, 0), 0) + c
            if x:
                r[(G, 0)] = x
            else:
                r.pop((G, 0), None)
        return r


def weight_key(G):
    try:
        return weight(G)
    except Exception:
        return G.nv


def gvec(terms=(), window=None, cls=GVec):
    v = cls()
    for G, h, c in terms:
        v.add_raw(G, h, Fraction(c), window)
    return v


class OVec(GVec):
    """Operad-side combinations: vertex data are unary words."""

    kind = 'op'

    def gweight(self, G, h):
        return G.nv - 1 + h

    def components(self):
        out = {}
        for (G, h), c in self.items():
            out.setdefault((G.nv, h), OVec())[(G, h)] = c
        return out
