"""Exact sparse linear algebra over Q.

Matrices are stored by columns (a column is the image of a basis vector,
which is how differentials get assembled).  Elimination works on rows with
Fraction entries; the pivot of a row is its smallest column index.
"""

from fractions import Fraction


class SparseMatQ:
    def __init__(self, nrows, ncols, cols=None):
        self.nrows = nrows
        self.ncols = ncols
        self.cols = [dict() for _ in range(ncols)]
        if cols is not None:
            if len(cols) != ncols:
                raise ValueError("column count mismatch")
            for j, col in enumerate(cols):
                for i, x in col.items():
                    if not 0 <= i < nrows:
                        raise ValueError("row index out of range")
                    if x:
                        self.cols[j][i] = Fraction(x)

    @classmethod
    def from_dense(cls, rows):
        nr = len(rows)
        nc = len(rows[0]) if nr else 0
        cols = [{i: rows[i][j] for i in range(nr) if rows[i][j]} for j in range(nc)]
        return cls(nr, nc, cols)

    def to_dense(self):
        out = [[Fraction(0)] * self.ncols for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, x in col.items():
                out[i][j] = x
        return out

    def rows(self):
        rs = [dict() for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, x in col.items():
                rs[i][j] = x
        return rs

    def transpose(self):
        return SparseMatQ(self.ncols, self.nrows, self.rows())

    def apply(self, x):
        """Matrix times a sparse vector {col: value}."""
        out = {}
        for j, xj in x.items():
            for i, a in self.cols[j].items():
                out[i] = out.get(i, 0) + a * xj
        return {i: v for i, v in out.items() if v}

    def compose(self, other):
        """self * other."""
        if self.ncols != other.nrows:
            raise ValueError("dimension mismatch")
        return SparseMatQ(self.nrows, other.ncols, [self.apply(c) for c in other.cols])

    def is_zero(self):
        return all(not c for c in self.cols)

    def dump(self):
        """Matrix-market style text."""
        lines = ["%%MatrixMarket matrix coordinate rational general",
                 "%d %d %d" % (self.nrows, self.ncols, sum(len(c) for c in self.cols))]
        for j, col in enumerate(self.cols):
            for i in sorted(col):
                lines.append("%d %d %s" % (i + 1, j + 1, col[i]))
        return "\n".join(lines) + "\n"


def _axpy(x, a, y):
    """x += a*y in place for sparse dicts."""
    for k, v in y.items():
        w = x.get(k, 0) + a * v
        if w:
            x[k] = w
        else:
            x.pop(k, None)


class Echelon:
    """Incremental row echelon form; optionally tracks row combinations."""

    def __init__(self, track=False):
        self.piv = {}      # pivot column -> (row, combination)
        self.track = track

    def add(self, row, tag=None):
        """Insert a row; returns None if independent, else the reduced
        combination that vanishes (when tracking) or True."""
        x = {k: Fraction(v) for k, v in row.items() if v}
        comb = {tag: Fraction(1)} if self.track else None
        while x:
            c = min(x)
            p = self.piv.get(c)
            if p is None:
                a = 1 / x[c]
                for k in x:
                    x[k] *= a
                if self.track:
                    for k in comb:
                        comb[k] *= a
                self.piv[c] = (x, comb)
                return None
            a = -x[c]
            _axpy(x, a, p[0])
            if self.track:
                _axpy(comb, a, p[1])
        return comb if self.track else True

    def rank(self):
        return len(self.piv)

    def reduced(self):
        """Fully reduced rows {pivot: row} (RREF)."""
        rows = {c: dict(r) for c, (r, _) in self.piv.items()}
        for c in sorted(rows, reverse=True):
            r = rows[c]
            for c2 in sorted(rows):
                if c2 >= c:
                    break
                r2 = rows[c2]
                if c in r2:
                    _axpy(r2, -r2[c], r)
        return rows


def _echelon_of(m):
    E = Echelon()
    for r in m.rows():
        if r:
            E.add(r)
    return E


def rank(m):
    return _echelon_of(m).rank()


def kernel_basis(m):
    """Basis of {x : m x = 0} as sparse dicts."""
    rows = _echelon_of(m).reduced()
    pivots = set(rows)
    basis = []
    for f in range(m.ncols):
        if f in pivots:
            continue
        v = {f: Fraction(1)}
        for p, r in rows.items():
            if f in r:
                v[p] = -r[f]
        basis.append(v)
    return basis


class Infeasible(Exception):
    def __init__(self, witness):
        super().__init__("right-hand side not in the image")
        self.witness = witness


def solve_in_image(m, b):
    """Return (x, None) with m x = b, or (None, y) with y m = 0 and y.b != 0."""
    B = m.ncols  # extra column index for the right-hand side
    E = Echelon(track=True)
    rows = m.rows()
    for i in range(m.nrows):
        r = dict(rows[i])
        if b.get(i):
            r[B] = Fraction(b[i])
        if not r:
            continue
        comb = E.add(r, tag=i)
    if B in E.piv:
        y = E.piv[B][1]
        return None, {i: v for i, v in y.items() if v}
    red = E.reduced()
    x = {p: r[B] for p, r in red.items() if B in r and r[B]}
    return x, None


def homology_dim(d_in, d_out):
    """dim ker(d_out) - rank(d_in), checking d_out d_in = 0."""
    if d_in.nrows != d_out.ncols:
        raise ValueError("dimension mismatch")
    if not d_out.compose(d_in).is_zero():
        raise ValueError("composition of the two maps is not zero")
    return d_out.ncols - rank(d_out) - rank(d_in)


def inverse(rows):
    n = len(rows)
    aug = [[Fraction(x) for x in r] + [Fraction(int(i == j)) for j in range(n)]
           for i, r in enumerate(rows)]
    for c in range(n):
        p = next((i for i in range(c, n) if aug[i][c]), None)
        if p is None:
            raise ValueError("singular matrix")
        aug[c], aug[p] = aug[p], aug[c]
        a = aug[c][c]
        aug[c] = [x / a for x in aug[c]]
        for i in range(n):
            if i != c and aug[i][c]:
                f = aug[i][c]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[c])]
    return [r[n:] for r in aug]


class Basis:
    """Ordered duplicate-free list of hashable keys."""

    def __init__(self, keys=()):
        self.keys = []
        self.index = {}
        for k in keys:
            self.add(k)

    def add(self, k):
        if k not in self.index:
            self.index[k] = len(self.keys)
            self.keys.append(k)
        return self.index[k]

    def __len__(self):
        return len(self.keys)

    def __contains__(self, k):
        return k in self.index

    def vector(self, d):
        """Sparse vector from a {key: coef} dict; keys must be in the basis."""
        return {self.index[k]: Fraction(c) for k, c in d.items() if c}


def write_csv(path, header, rows):
    import csv
    with open(path, "w", newline="") as f:
        w = csv.writer(f)
        w.writerow(header)
        for r in rows:
            w.writerow(r)
