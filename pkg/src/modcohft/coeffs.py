"""Formal tautological classes and the rule set acting on them.

A vertex class is a monomial in the free commutative algebra on kappa_a,
lambda_i, ch_{2j+1}, optionally times a registered minimal class (or its
pullback Lambda_k along a point-forgetting map).  psi exponents and the
"role" of a point for Lambda_k are stored on the half-edges of the graph, so
a monomial here is the tuple

    (kappas, lambdas, chs, base)

with sorted integer tuples and base '' (unit) or a minimal-class name.

All rules raise NoRule on input they do not cover; nothing is silently zero
except where a rule says so.
"""

from fractions import Fraction
from itertools import product
from math import factorial
from typing import NamedTuple
import json

UNIT = ((), (), (), '')


class NoRule(Exception):
    pass


# ---------------------------------------------------------------------------
# target space

class SymVectorSpace:
    """Finite-dimensional graded space with a graded symmetric pairing and d_A.

    parity[i] is the Z/2 degree of e_i; pairing[i][j] = <e_i, e_j>;
    diff[i][j] is the e_i-coefficient of d_A e_j.
    """

    def __init__(self, parity, pairing, diff=None, names=None):
        n = len(parity)
        self.dim = n
        self.parity = tuple(int(p) % 2 for p in parity)
        self.G = tuple(tuple(Fraction(x) for x in row) for row in pairing)
        if diff is None:
            diff = [[0] * n for _ in range(n)]
        self.D = tuple(tuple(Fraction(x) for x in row) for row in diff)
        self.names = list(names) if names else ["e%d" % i for i in range(n)]
        self._check()
        self._dual = None

    def _check(self):
        n, G, P = self.dim, self.G, self.parity
        for i in range(n):
            for j in range(n):
                if G[i][j] and P[i] != P[j]:
                    raise ValueError("pairing must be even")
                if G[j][i] != (-1) ** (P[i] * P[j]) * G[i][j]:
                    raise ValueError("pairing must be graded symmetric")
        D = self.D
        for i in range(n):
            for j in range(n):
                if D[i][j] and P[i] == P[j]:
                    raise ValueError("d_A must be odd")
                if sum(D[i][k] * D[k][j] for k in range(n)):
                    raise ValueError("d_A must square to zero")
        # <d x, y> + (-1)^|x| <x, d y> = 0
        for x in range(n):
            for y in range(n):
                a = sum(D[k][x] * G[k][y] for k in range(n))
                b = sum(D[k][y] * G[x][k] for k in range(n))
                if a + (-1) ** P[x] * b:
                    raise ValueError("d_A must be skew for the pairing")

    def pair(self, i, j):
        return self.G[i][j]

    def dual_basis(self):
        """Matrix M with e^k = sum_m M[k][m] e_m, so sum_k <a,e_k><e^k,b> = <a,b>."""
        if self._dual is None:
            from .linalg import inverse
            self._dual = inverse([list(r) for r in self.G])
        return self._dual

    def to_json(self):
        return {"parity": list(self.parity),
                "pairing": [[str(x) for x in r] for r in self.G],
                "diff": [[str(x) for x in r] for r in self.D],
                "names": self.names}

    @classmethod
    def from_json(cls, d):
        return cls(d["parity"], [[Fraction(x) for x in r] for r in d["pairing"]],
                   [[Fraction(x) for x in r] for r in d["diff"]] if "diff" in d else None,
                   d.get("names"))


# ---------------------------------------------------------------------------
# minimal classes

class MinimalClass(NamedTuple):
    name: str
    h: int
    m: int
    parity: int


_MINIMAL = {}


def register_minimal(h, m, parity=None, name=None):
    """Register a symbolic minimal class on the moduli space at (h, m)."""
    if 2 * h + m <= 2:
        raise ValueError("unstable (h, m)")
    name = name or "Lambda:%d,%d" % (h, m)
    _MINIMAL[name] = MinimalClass(name, h, m, m % 2 if parity is None else parity % 2)
    return name


def minimal(name):
    try:
        return _MINIMAL[name]
    except KeyError:
        raise NoRule("unregistered minimal class %r" % name)


# ---------------------------------------------------------------------------
# monomials

def mono(kappa=(), lam=(), ch=(), base=''):
    return (tuple(sorted(kappa)), tuple(sorted(lam)), tuple(sorted(ch)), base)


def mono_mul(a, b):
    if a[3] and b[3]:
        raise NoRule("product of two minimal classes")
    return (tuple(sorted(a[0] + b[0])), tuple(sorted(a[1] + b[1])),
            tuple(sorted(a[2] + b[2])), a[3] or b[3])


def mono_parity(m):
    return minimal(m[3]).parity if m[3] else 0


def mono_degree(m):
    """Cohomological degree / 2, or None when a minimal class is present."""
    if m[3]:
        return None
    return sum(m[0]) + sum(m[1]) + sum(m[2])


def vanishes_by_dimension(g, n, m, psi_total):
    d = mono_degree(m)
    if d is None:
        return False
    return d + psi_total > 3 * g - 3 + n


def mono_str(m, g=None):
    parts = []
    parts += ["k%d" % a for a in m[0]]
    parts += ["l%d" % a for a in m[1]]
    parts += ["ch%d" % a for a in m[2]]
    if m[3]:
        parts.append(m[3])
    return "*".join(parts) if parts else "1"


# ---------------------------------------------------------------------------
# expansion chi and decomposition delta

def chi_mono(g, m):
    """Pullback along the nonseparating gluing map to genus g-1.

    Returns [] (zero) or [(1, m')].
    """
    if g < 1:
        raise ValueError("chi needs genus >= 1")
    if m[3]:
        minimal(m[3])
        return []
    if any(i > g - 1 for i in m[1]):
        return []
    return [(1, m)]


def _split_generator(kind, a):
    """Coproduct of one even generator: list of ((kind, a) or None) pairs."""
    if kind == 'lam':
        return [((kind, x) if x else None, (kind, a - x) if a - x else None)
                for x in range(a + 1)]
    return [((kind, a), None), (None, (kind, a))]


def delta_mono(m, g1, roles1, g2, roles2):
    """Pullback along a separating gluing map.

    roles1/roles2 list the role numbers carried by the half-edges on each
    side (0 = no role).  Returns a list of (coef, m1, m2, node_role1,
    node_role2) where node_role* is the role given to the new node
    half-edge on that side.
    """
    base = m[3]
    r1 = r2 = 0
    if base:
        L = minimal(base)
        n1 = [r for r in roles1 if r]
        n2 = [r for r in roles2 if r]
        # Lambda_k survives only when one side is contracted by forgetting
        if g1 == 0 and len(n1) <= 1 and g2 == L.h:
            b1, b2 = '', base
            r2 = n1[0] if n1 else 0
        elif g2 == 0 and len(n2) <= 1 and g1 == L.h:
            b1, b2 = base, ''
            r1 = n2[0] if n2 else 0
        else:
            return []
    else:
        b1 = b2 = ''
    terms = [(Fraction(1), [[], [], []], [[], [], []])]
    slot = {'kappa': 0, 'lam': 1, 'ch': 2}
    gens = [('kappa', a) for a in m[0]] + [('lam', a) for a in m[1]] + [('ch', a) for a in m[2]]
    for kind, a in gens:
        new = []
        for c, x1, x2 in terms:
            for s1, s2 in _split_generator(kind, a):
                y1 = [list(t) for t in x1]
                y2 = [list(t) for t in x2]
                if s1:
                    y1[slot[kind]].append(s1[1])
                if s2:
                    y2[slot[kind]].append(s2[1])
                new.append((c, y1, y2))
        terms = new
    out = {}
    for c, x1, x2 in terms:
        if any(i > g1 for i in x1[1]) or any(i > g2 for i in x2[1]):
            continue
        key = (mono(*x1, base=b1), mono(*x2, base=b2))
        out[key] = out.get(key, 0) + c
    return [(c, a, b, r1, r2) for (a, b), c in out.items() if c]


# ---------------------------------------------------------------------------
# pushforward along forgetting a point

def pushforward_forget(g, n, m, e):
    """pi_*(m * psi_i^e) from (g, n) to (g, n-1), m pulled back from (g, n-1).

    Other psi classes on the remaining points pass through untouched (the
    caller keeps them).  Returns a list of (coef, m').
    """
    if e < 1:
        raise NoRule("pushforward needs psi_i^k with k >= 1")
    if m[3]:
        raise NoRule("pushforward of a minimal-class monomial")
    if vanishes_by_dimension(g, n, m, e):
        return []
    if 2 * g + n - 1 <= 2:
        raise NoRule("target moduli space unstable")
    kap = m[0]
    out = {}
    k = len(kap)
    for mask in range(1 << k):
        chosen = [kap[i] for i in range(k) if mask >> i & 1]
        kept = [kap[i] for i in range(k) if not mask >> i & 1]
        a = e - 1 + sum(chosen)
        if a == 0:
            coef = Fraction(2 * g - 2 + (n - 1))
            newk = kept
        else:
            coef = Fraction(1)
            newk = kept + [a]
        key = mono(newk, m[1], m[2])
        out[key] = out.get(key, 0) + coef
    return [(c, x) for x, c in out.items() if c]


# ---------------------------------------------------------------------------
# lambda^hbar and the Chern character series

def lambda_hbar(g):
    """lambda^hbar at genus g as a list of (hbar power, monomial)."""
    return [(g - i, mono(lam=(i,) if i else ())) for i in range(g + 1)]


def _ch_exp_series(smax):
    """exp(sum_j (2j)! s^(2j+1) ch_(2j+1)) as {s power: {ch tuple: coef}}."""
    # log part
    logp = {}
    j = 0
    while 2 * j + 1 <= smax:
        logp[2 * j + 1] = {(2 * j + 1,): Fraction(factorial(2 * j))}
        j += 1
    result = {0: {(): Fraction(1)}}
    term = {0: {(): Fraction(1)}}
    for r in range(1, smax + 1):
        new = {}
        for p1, poly1 in term.items():
            for p2, poly2 in logp.items():
                if p1 + p2 > smax:
                    continue
                tgt = new.setdefault(p1 + p2, {})
                for m1, c1 in poly1.items():
                    for m2, c2 in poly2.items():
                        mm = tuple(sorted(m1 + m2))
                        tgt[mm] = tgt.get(mm, 0) + c1 * c2 / r
        term = new
        for p, poly in term.items():
            tgt = result.setdefault(p, {})
            for mm, c in poly.items():
                tgt[mm] = tgt.get(mm, 0) + c
    return {p: {m: c for m, c in poly.items() if c} for p, poly in result.items()}


def chern_series(smax, g=None, n=None):
    """The Chern-character exponential, optionally truncated by dimension at (g, n)."""
    ser = _ch_exp_series(smax)
    if g is not None and n is not None:
        dim = 3 * g - 3 + n
        ser = {p: poly for p, poly in ser.items() if p <= dim}
    return ser


def chern_exp_rewrite(series, g, n=None):
    """Recognise the Chern-character exponential and rewrite it in lambdas.

    series: {s power: {ch tuple: coef}}.  Returns {s power: monomial} with
    lambda_i at s^i for i <= g.
    """
    smax = max(series) if series else 0
    expected = chern_series(smax, g, n)
    clean = {p: {m: Fraction(c) for m, c in poly.items() if c} for p, poly in series.items()}
    clean = {p: poly for p, poly in clean.items() if poly}
    if clean != {p: poly for p, poly in expected.items() if poly}:
        raise NoRule("series is not the Chern-character exponential")
    return {i: mono(lam=(i,) if i else ()) for i in range(0, min(g, smax) + 1)}


# ---------------------------------------------------------------------------
# a stand-alone class type for single moduli spaces

class TautClass:
    """Rational combination of monomials at a fixed (g, n), with hbar powers.

    Keys are (hbar power, monomial, psi exponents per point, roles per point).
    """

    def __init__(self, g, n, terms=None):
        self.g, self.n = g, n
        self.terms = {}
        for k, c in (terms or {}).items():
            self._add(k, Fraction(c))

    def _add(self, key, c):
        h, m, psi, roles = key
        if vanishes_by_dimension(self.g, self.n, m, sum(psi)):
            return
        v = self.terms.get(key, 0) + c
        if v:
            self.terms[key] = v
        else:
            self.terms.pop(key, None)

    @classmethod
    def unit(cls, g, n):
        return cls(g, n, {(0, UNIT, (0,) * n, (0,) * n): 1})

    @classmethod
    def psi(cls, g, n, i, e=1):
        p = [0] * n
        p[i] = e
        return cls(g, n, {(0, UNIT, tuple(p), (0,) * n): 1})

    @classmethod
    def gen(cls, g, n, m, hbar=0):
        return cls(g, n, {(hbar, m, (0,) * n, (0,) * n): 1})

    @classmethod
    def lambda_hbar(cls, g, n):
        return cls(g, n, {(h, m, (0,) * n, (0,) * n): 1 for h, m in lambda_hbar(g)})

    def __eq__(self, other):
        return (self.g, self.n, self.terms) == (other.g, other.n, other.terms)

    def __add__(self, other):
        self._same(other)
        r = TautClass(self.g, self.n, self.terms)
        for k, c in other.terms.items():
            r._add(k, c)
        return r

    def scale(self, c):
        return TautClass(self.g, self.n, {k: v * c for k, v in self.terms.items()})

    def _same(self, other):
        if (self.g, self.n) != (other.g, other.n):
            raise ValueError("mismatched ambient")

    def mul(self, other):
        self._same(other)
        r = TautClass(self.g, self.n)
        for (h1, m1, p1, r1), c1 in self.terms.items():
            for (h2, m2, p2, r2), c2 in other.terms.items():
                roles = tuple(max(a, b) for a, b in zip(r1, r2))
                r._add((h1 + h2, mono_mul(m1, m2), tuple(a + b for a, b in zip(p1, p2)), roles),
                       c1 * c2)
        return r

    def chi(self):
        """Pull back along the gluing of the two new points n, n+1 (genus drops)."""
        r = TautClass(self.g - 1, self.n + 2)
        for (h, m, psi, roles), c in self.terms.items():
            for c2, m2 in chi_mono(self.g, m):
                r._add((h, m2, psi + (0, 0), roles + (0, 0)), c * c2)
        return r

    def delta(self, g1, S1):
        """Pull back along the separating map (g1, S1 + node) | (g - g1, rest + node).

        Returns a dict {(key1, key2): coef} of tensor terms; each side's points
        are the selected original points in order followed by the node.
        """
        S1 = sorted(S1)
        S2 = [i for i in range(self.n) if i not in S1]
        g2 = self.g - g1
        if 2 * g1 + len(S1) + 1 <= 2 or 2 * g2 + len(S2) + 1 <= 2:
            raise ValueError("unstable splitting")
        out = {}
        for (h, m, psi, roles), c in self.terms.items():
            for c2, m1, m2, nr1, nr2 in delta_mono(m, g1, [roles[i] for i in S1],
                                                   g2, [roles[i] for i in S2]):
                k1 = (h, m1, tuple(psi[i] for i in S1) + (0,), tuple(roles[i] for i in S1) + (nr1,))
                k2 = (0, m2, tuple(psi[i] for i in S2) + (0,), tuple(roles[i] for i in S2) + (nr2,))
                if vanishes_by_dimension(g1, len(S1) + 1, m1, sum(k1[2])):
                    continue
                if vanishes_by_dimension(g2, len(S2) + 1, m2, sum(k2[2])):
                    continue
                out[(k1, k2)] = out.get((k1, k2), 0) + c * c2
        return {k: v for k, v in out.items() if v}

    def pushforward(self, i):
        r = TautClass(self.g, self.n - 1)
        for (h, m, psi, roles), c in self.terms.items():
            if roles[i]:
                raise NoRule("cannot forget a distinguished point")
            rest = psi[:i] + psi[i + 1:]
            for c2, m2 in pushforward_forget(self.g, self.n, m, psi[i]):
                r._add((h, m2, rest, roles[:i] + roles[i + 1:]), c * c2)
        return r

    def __repr__(self):
        parts = []
        for (h, m, psi, roles), c in sorted(self.terms.items()):
            s = "%s*%s" % (c, mono_str(m))
            if any(psi):
                s += "*psi%s" % (psi,)
            if h:
                s += "*hbar^%d" % h
            parts.append(s)
        return "TautClass(%d,%d: %s)" % (self.g, self.n, " + ".join(parts) or "0")


# ---------------------------------------------------------------------------
# rule-set files

def load_rules(path):
    """Register minimal classes from a JSON (or TOML) rule file.

    Format: {"minimal": [{"h": 2, "m": 1, "parity": 1, "name": "..."}]}
    """
    if str(path).endswith(".toml"):
        import tomllib
        with open(path, "rb") as f:
            data = tomllib.load(f)
    else:
        with open(path) as f:
            data = json.load(f)
    names = []
    for rec in data.get("minimal", []):
        names.append(register_minimal(rec["h"], rec["m"], rec.get("parity"), rec.get("name")))
    return names
