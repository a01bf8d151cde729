"""Exact operators on finite or lazily explored Hilbert spaces.

Two kinds of operator share one interface (``column``, ``adjoint``, ``@``,
``+``, scalar ``*``):

* :class:`Matrix` -- a finite matrix with labelled rows and columns, stored as
  ``sum_d (A_d + i B_d) sqrt(d)`` with ``A_d, B_d`` FLINT rational matrices.
* :class:`LazyOperator` -- an exact basis action ``label -> sparse vector``
  with an explicit adjoint, used when the carrier is infinite.

Sparse vectors are plain dicts ``{label: Scalar}`` with no stored zeros.
"""

from __future__ import annotations

import math
import random
from collections.abc import Callable, Hashable, Iterable, Mapping, Sequence
from fractions import Fraction
from functools import lru_cache

from flint import fmpq, fmpq_mat

from .scalars import Scalar

Vector = dict


# --- sparse vectors -----------------------------------------------------------

def vclean(v: Mapping) -> Vector:
    return {k: x for k, x in v.items() if x}


def vadd(u: Mapping, v: Mapping) -> Vector:
    out = dict(u)
    for k, x in v.items():
        if k in out:
            y = out[k] + x
            if y:
                out[k] = y
            else:
                del out[k]
        elif x:
            out[k] = x
    return out


def vscale(s, v: Mapping) -> Vector:
    s = Scalar.coerce(s)
    if not s:
        return {}
    return {k: s * x for k, x in v.items()}


def vsub(u: Mapping, v: Mapping) -> Vector:
    return vadd(u, vscale(-1, v))


def inner(u: Mapping, v: Mapping) -> Scalar:
    """``<u, v> = sum conj(v) u`` (linear in the first slot)."""
    total = Scalar()
    small, big = (u, v) if len(u) <= len(v) else (v, u)
    for k in small:
        if k in big:
            total = total + u[k] * v[k].conjugate()
    return total


def basis_vector(label) -> Vector:
    return {label: Scalar(1)}


# --- FLINT helpers ------------------------------------------------------------

def _q(x) -> fmpq:
    if isinstance(x, fmpq):
        return x
    x = Fraction(x)
    return fmpq(x.numerator, x.denominator)


def _frac(x: fmpq) -> Fraction:
    return Fraction(int(x.p), int(x.q))


@lru_cache(maxsize=512)
def _zero(m: int, n: int) -> fmpq_mat:
    return fmpq_mat(m, n)


def _is_zero(a: fmpq_mat) -> bool:
    return a == _zero(a.nrows(), a.ncols())


@lru_cache(maxsize=1024)
def _index(labels: tuple) -> dict:
    return {lab: i for i, lab in enumerate(labels)}


def _radmul(d1: int, d2: int) -> tuple[int, int]:
    if d1 == 1:
        return 1, d2
    if d2 == 1:
        return 1, d1
    g = math.gcd(d1, d2)
    return g, (d1 // g) * (d2 // g)


def _accumulate(parts: dict, d: int, re_: fmpq_mat, im_: fmpq_mat) -> None:
    if d in parts:
        a, b = parts[d]
        parts[d] = (a + re_, b + im_)
    else:
        parts[d] = (re_, im_)


def _normalize(parts: dict) -> dict:
    return {d: (a, b) for d, (a, b) in parts.items() if not (_is_zero(a) and _is_zero(b))}


# --- operator interface -------------------------------------------------------

class Operator:
    """Common algebra for exact linear operators."""

    def column(self, label) -> Vector:
        raise NotImplementedError

    def adjoint(self) -> Operator:
        raise NotImplementedError

    def apply(self, v: Mapping) -> Vector:
        out: Vector = {}
        for k, x in v.items():
            if x:
                out = vadd(out, vscale(x, self.column(k)))
        return out

    def __matmul__(self, other: Operator) -> Operator:
        if not isinstance(other, Operator):
            return NotImplemented
        a, b = self, other
        return LazyOperator(lambda l: a.apply(b.column(l)),
                            lambda l: b.adjoint().apply(a.adjoint().column(l)))

    def __add__(self, other: Operator) -> Operator:
        if not isinstance(other, Operator):
            return NotImplemented
        a, b = self, other
        return LazyOperator(lambda l: vadd(a.column(l), b.column(l)),
                            lambda l: vadd(a.adjoint().column(l), b.adjoint().column(l)))

    def __neg__(self) -> Operator:
        return self * -1

    def __sub__(self, other: Operator) -> Operator:
        return self + (-other)

    def __mul__(self, s) -> Operator:
        if isinstance(s, Operator):
            return NotImplemented
        s = Scalar.coerce(s)
        a = self
        return LazyOperator(lambda l: vscale(s, a.column(l)),
                            lambda l: vscale(s.conjugate(), a.adjoint().column(l)))

    __rmul__ = __mul__

    def equal_on(self, other: Operator, labels: Iterable) -> Hashable | None:
        """First column label where the two operators differ, else ``None``."""
        for lab in labels:
            if vclean(self.column(lab)) != vclean(other.column(lab)):
                return lab
        return _SAME

    def is_zero_on(self, labels: Iterable):
        for lab in labels:
            if self.column(lab):
                return lab
        return _SAME


_SAME = None


class LazyOperator(Operator):
    """Operator given by its action on basis vectors (memoized per column)."""

    def __init__(self, col_fn: Callable, adj_fn: Callable | None = None, name: str = ""):
        self._col = col_fn
        self._adj = adj_fn
        self._cache: dict = {}
        self._adjoint: LazyOperator | None = None
        self.name = name

    def column(self, label) -> Vector:
        hit = self._cache.get(label)
        if hit is None:
            hit = vclean(self._col(label))
            self._cache[label] = hit
        return hit

    def adjoint(self) -> LazyOperator:
        if self._adjoint is None:
            if self._adj is None:
                raise TypeError(f"operator {self.name!r} has no adjoint action")
            self._adjoint = LazyOperator(self._adj, self._col, name=self.name + "*")
            self._adjoint._adjoint = self
        return self._adjoint

    def __repr__(self) -> str:
        return f"LazyOperator({self.name!r})"


class Matrix(Operator):
    """Exact finite matrix with labelled rows and columns."""

    __slots__ = ("rows", "cols", "parts")

    def __init__(self, rows: Sequence, cols: Sequence, parts: dict | None = None):
        self.rows = tuple(rows)
        self.cols = tuple(cols)
        self.parts = _normalize(parts or {})

    # construction ----------------------------------------------------------
    @classmethod
    def from_entries(cls, rows: Sequence, cols: Sequence, entries: Mapping) -> Matrix:
        rows, cols = tuple(rows), tuple(cols)
        ri, ci = _index(rows), _index(cols)
        m, n = len(rows), len(cols)
        grids: dict[int, tuple[list, list]] = {}
        for (r, c), val in entries.items():
            val = Scalar.coerce(val)
            i, j = ri[r], ci[c]
            for d, (a, b) in val._t.items():
                if d not in grids:
                    grids[d] = ([0] * (m * n), [0] * (m * n))
                ga, gb = grids[d]
                ga[i * n + j] += a
                gb[i * n + j] += b
        parts = {d: (fmpq_mat(m, n, [_q(x) for x in ga]), fmpq_mat(m, n, [_q(x) for x in gb]))
                 for d, (ga, gb) in grids.items()}
        return cls(rows, cols, parts)

    @classmethod
    def from_columns(cls, rows: Sequence, cols: Sequence, columns: Mapping) -> Matrix:
        return cls.from_entries(rows, cols, {(r, c): x for c, col in columns.items() for r, x in col.items()})

    @classmethod
    def from_operator(cls, op: Operator, labels: Sequence, rows: Sequence | None = None) -> Matrix:
        rows = tuple(labels if rows is None else rows)
        return cls.from_columns(rows, labels, {c: op.column(c) for c in labels})

    @classmethod
    def identity(cls, labels: Sequence) -> Matrix:
        labels = tuple(labels)
        n = len(labels)
        eye = fmpq_mat(n, n)
        for i in range(n):
            eye[i, i] = 1
        return cls(labels, labels, {1: (eye, fmpq_mat(n, n))})

    @classmethod
    def zero(cls, rows: Sequence, cols: Sequence) -> Matrix:
        return cls(rows, cols, {})

    # access ----------------------------------------------------------------
    @property
    def shape(self) -> tuple[int, int]:
        return len(self.rows), len(self.cols)

    def entry(self, r, c) -> Scalar:
        i, j = _index(self.rows)[r], _index(self.cols)[c]
        t = {}
        for d, (a, b) in self.parts.items():
            x, y = a[i, j], b[i, j]
            if x != 0 or y != 0:
                t[d] = (_frac(x), _frac(y))
        return Scalar._raw(t)

    def column(self, label) -> Vector:
        ci = _index(self.cols)
        if label not in ci:
            return {}
        j = ci[label]
        out = {}
        for i, r in enumerate(self.rows):
            t = {}
            for d, (a, b) in self.parts.items():
                x, y = a[i, j], b[i, j]
                if x != 0 or y != 0:
                    t[d] = (_frac(x), _frac(y))
            if t:
                out[r] = Scalar._raw(t)
        return out

    def entries(self) -> list[list[Scalar]]:
        return [[self.entry(r, c) for c in self.cols] for r in self.rows]

    def nonzero_entries(self) -> dict:
        return {(r, c): x for c in self.cols for r, x in self.column(c).items()}

    def is_gaussian(self) -> bool:
        return set(self.parts) <= {1}

    # algebra ---------------------------------------------------------------
    def __matmul__(self, other: Operator) -> Operator:
        if not isinstance(other, Matrix):
            return Operator.__matmul__(self, other)
        if self.cols != other.rows:
            raise ValueError("label mismatch in matrix product")
        parts: dict = {}
        for d1, (a1, b1) in self.parts.items():
            for d2, (a2, b2) in other.parts.items():
                g, d = _radmul(d1, d2)
                re_ = a1 * a2 - b1 * b2
                im_ = a1 * b2 + b1 * a2
                if g != 1:
                    re_, im_ = re_ * g, im_ * g
                _accumulate(parts, d, re_, im_)
        return Matrix(self.rows, other.cols, parts)

    def __add__(self, other: Operator) -> Operator:
        if not isinstance(other, Matrix):
            return Operator.__add__(self, other)
        if self.rows != other.rows or self.cols != other.cols:
            raise ValueError("label mismatch in matrix sum")
        parts = dict(self.parts)
        for d, (a, b) in other.parts.items():
            _accumulate(parts, d, a, b)
        return Matrix(self.rows, self.cols, parts)

    def __neg__(self) -> Matrix:
        return Matrix(self.rows, self.cols, {d: (-a, -b) for d, (a, b) in self.parts.items()})

    def __sub__(self, other: Operator) -> Operator:
        if not isinstance(other, Matrix):
            return Operator.__sub__(self, other)
        return self + (-other)

    def __mul__(self, s) -> Matrix:
        if isinstance(s, Operator):
            return NotImplemented
        s = Scalar.coerce(s)
        parts: dict = {}
        for ds, (x, y) in s._t.items():
            qx, qy = _q(x), _q(y)
            for dm, (a, b) in self.parts.items():
                g, d = _radmul(ds, dm)
                re_ = a * qx - b * qy
                im_ = b * qx + a * qy
                if g != 1:
                    re_, im_ = re_ * g, im_ * g
                _accumulate(parts, d, re_, im_)
        return Matrix(self.rows, self.cols, parts)

    __rmul__ = __mul__

    def adjoint(self) -> Matrix:
        return Matrix(self.cols, self.rows, {d: (a.transpose(), -b.transpose()) for d, (a, b) in self.parts.items()})

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Matrix):
            return NotImplemented
        return self.rows == other.rows and self.cols == other.cols and self.parts == other.parts

    __hash__ = None  # type: ignore[assignment]

    def is_zero(self) -> bool:
        return not self.parts

    def trace(self) -> Scalar:
        if self.rows != self.cols:
            raise ValueError("trace of a non-square matrix")
        total = Scalar()
        n = len(self.rows)
        for d, (a, b) in self.parts.items():
            re_ = sum((_frac(a[i, i]) for i in range(n)), Fraction(0))
            im_ = sum((_frac(b[i, i]) for i in range(n)), Fraction(0))
            total = total + Scalar._raw({d: (re_, im_)} if (re_ or im_) else {})
        return total

    def is_hermitian(self) -> bool:
        return self == self.adjoint()

    def is_unitary(self) -> bool:
        return (self.adjoint() @ self == Matrix.identity(self.cols)
                and self @ self.adjoint() == Matrix.identity(self.rows))

    def relabel(self, rows: Sequence | None = None, cols: Sequence | None = None) -> Matrix:
        return Matrix(self.rows if rows is None else rows, self.cols if cols is None else cols, self.parts)

    def rank(self) -> int:
        if self.is_gaussian():
            a, b = self.parts.get(1, (_zero(*self.shape), _zero(*self.shape)))
            m, n = self.shape
            block = fmpq_mat(2 * m, 2 * n)
            for i in range(m):
                for j in range(n):
                    x, y = a[i, j], b[i, j]
                    block[i, j] = x
                    block[i + m, j + n] = x
                    block[i, j + n] = -y
                    block[i + m, j] = y
            return block.rank() // 2
        return scalar_rank(self.entries())

    def __repr__(self) -> str:
        return f"Matrix({len(self.rows)}x{len(self.cols)}, radicands={sorted(self.parts)})"

    def pretty(self) -> str:
        rows = [[str(x) for x in row] for row in self.entries()]
        w = max((len(s) for row in rows for s in row), default=1)
        return "\n".join("[" + " ".join(s.rjust(w) for s in row) + "]" for row in rows)


def _kron_q(x: fmpq_mat, y: fmpq_mat) -> fmpq_mat:
    m1, n1, m2, n2 = x.nrows(), x.ncols(), y.nrows(), y.ncols()
    out = fmpq_mat(m1 * m2, n1 * n2)
    ynz = [(k, l, y[k, l]) for k in range(m2) for l in range(n2) if y[k, l] != 0]
    for i in range(m1):
        for j in range(n1):
            a = x[i, j]
            if a == 0:
                continue
            for k, l, b in ynz:
                out[i * m2 + k, j * n2 + l] = a * b
    return out


def kron(A: Matrix, B: Matrix) -> Matrix:
    """Tensor product with row labels ``(r1, r2)`` and column labels ``(c1, c2)``."""
    rows = tuple((r1, r2) for r1 in A.rows for r2 in B.rows)
    cols = tuple((c1, c2) for c1 in A.cols for c2 in B.cols)
    parts: dict = {}
    for d1, (a1, b1) in A.parts.items():
        for d2, (a2, b2) in B.parts.items():
            g, d = _radmul(d1, d2)
            re_ = _kron_q(a1, a2) - _kron_q(b1, b2)
            im_ = _kron_q(a1, b2) + _kron_q(b1, a2)
            if g != 1:
                re_, im_ = re_ * g, im_ * g
            _accumulate(parts, d, re_, im_)
    return Matrix(rows, cols, parts)


def direct_sum(blocks: Sequence[Matrix]) -> Matrix:
    entries = {}
    rows, cols = [], []
    for idx, blk in enumerate(blocks):
        rows.extend((idx, r) for r in blk.rows)
        cols.extend((idx, c) for c in blk.cols)
        for (r, c), x in blk.nonzero_entries().items():
            entries[((idx, r), (idx, c))] = x
    return Matrix.from_entries(rows, cols, entries)


def op_sum(ops: Iterable[Operator], zero: Operator) -> Operator:
    """Sum without nesting: lazy terms are added column by column in one pass."""
    ops = list(ops)
    if not ops:
        return zero
    if all(isinstance(o, Matrix) for o in ops):
        total = ops[0]
        for o in ops[1:]:
            total = total + o
        return total

    def col(l):
        out: Vector = {}
        for o in ops:
            out = vadd(out, o.column(l))
        return out

    def adj(l):
        out: Vector = {}
        for o in ops:
            out = vadd(out, o.adjoint().column(l))
        return out
    return LazyOperator(col, adj, name="sum")


def op_equal(A: Operator, B: Operator, labels: Iterable | None = None):
    """``None`` when equal (on ``labels`` if given), else the first differing label.

    Two matrices compared without labels return ``"matrix"`` on mismatch.
    """
    if labels is None:
        if isinstance(A, Matrix) and isinstance(B, Matrix):
            return None if A == B else "matrix"
        raise ValueError("lazy operators can only be compared on explicit probe labels")
    return A.equal_on(B, labels)


# --- exact decision procedures -------------------------------------------------

def scalar_rank(rows: list[list[Scalar]]) -> int:
    A = [list(r) for r in rows]
    rank, m = 0, len(A)
    n = len(A[0]) if A else 0
    for j in range(n):
        piv = next((i for i in range(rank, m) if A[i][j]), None)
        if piv is None:
            continue
        A[rank], A[piv] = A[piv], A[rank]
        inv = A[rank][j].inverse()
        for i in range(rank + 1, m):
            if A[i][j]:
                f = A[i][j] * inv
                A[i] = [x - f * y for x, y in zip(A[i], A[rank])]
        rank += 1
    return rank


def psd_certificate(M: Matrix) -> tuple[bool, dict | None]:
    """Decide exactly whether a Hermitian matrix is positive semidefinite.

    Symmetric elimination: a negative diagonal entry, or a zero diagonal
    entry with a nonzero entry in its row, certifies failure; otherwise
    eliminate on a positive pivot and recurse on the Schur complement.
    """
    if not M.is_hermitian():
        return False, {"reason": "not hermitian"}
    A = M.entries()
    labels = list(M.rows)
    active = list(range(len(A)))
    while active:
        signs = {i: A[i][i].real_part().sign() for i in active}
        neg = [i for i in active if signs[i] < 0]
        if neg:
            return False, {"reason": "negative pivot", "label": str(labels[neg[0]]), "value": str(A[neg[0]][neg[0]])}
        for i in [i for i in active if signs[i] == 0]:
            bad = next((j for j in active if A[i][j]), None)
            if bad is not None:
                return False, {"reason": "zero pivot with nonzero row", "label": str(labels[i])}
            active.remove(i)
        if not active:
            break
        k = active.pop(0)
        inv = A[k][k].inverse()
        for i in active:
            if not A[i][k]:
                continue
            f = A[i][k] * inv
            for j in active:
                if A[k][j]:
                    A[i][j] = A[i][j] - f * A[k][j]
    return True, None


def is_projection(P: Matrix) -> bool:
    return P.is_hermitian() and P @ P == P


def _primitive(v: Vector) -> Vector:
    """Rescale a Gaussian-rational vector to coprime Gaussian-integer entries.

    Keeps squared norms (and so the radicands introduced by normalizing) small.
    """
    parts = []
    for x in v.values():
        if not x.is_gaussian():
            return v
        parts += [y.as_fraction() for y in (x.real_part(), x.imag_part()) if y]
    den = math.lcm(*(q.denominator for q in parts))
    g = math.gcd(*(int(q * den) for q in parts))
    return vscale(Scalar(Fraction(den, g)), v) if (den, g) != (1, 1) else v


def orthonormal_basis(P: Matrix) -> list[Vector]:
    """Orthonormal basis of the range of ``P`` (columns, Gram-Schmidt).

    Squared norms must be rational so the normalization stays in the scalar
    ring; this holds whenever ``P`` has Gaussian-rational entries.
    """
    ortho: list[tuple[Vector, Scalar]] = []
    for c in P.cols:
        v = P.column(c)
        for u, nu in ortho:
            coef = inner(v, u) / nu
            if coef:
                v = vsub(v, vscale(coef, u))
        if v:
            v = _primitive(v)
            ortho.append((v, inner(v, v)))
    out = []
    for v, n2 in ortho:
        if not n2.is_rational():
            raise ValueError("squared norm is not rational; cannot normalize exactly")
        out.append(vscale(Scalar.sqrt(n2.as_fraction()).inverse(), v))
    return out


# --- exact unitaries ------------------------------------------------------------

PYTHAGOREAN = ((Fraction(3, 5), Fraction(4, 5)), (Fraction(5, 13), Fraction(12, 13)),
               (Fraction(8, 17), Fraction(15, 17)), (Fraction(7, 25), Fraction(24, 25)))

_PHASES = (Scalar(1), Scalar(-1), Scalar(0, 1), Scalar(0, -1))


def random_unitary(labels: Sequence, rng: random.Random, rotations: int | None = None) -> Matrix:
    """Exact unitary over Q(i): phased permutation times rational Givens rotations."""
    labels = tuple(labels)
    n = len(labels)
    perm = list(range(n))
    rng.shuffle(perm)
    entries = {(labels[perm[j]], labels[j]): rng.choice(_PHASES) for j in range(n)}
    U = Matrix.from_entries(labels, labels, entries)
    for _ in range(n if rotations is None else rotations):
        if n < 2:
            break
        i, j = rng.sample(range(n), 2)
        c, s = rng.choice(PYTHAGOREAN)
        ph = rng.choice(_PHASES)
        rot = {(labels[k], labels[k]): 1 for k in range(n) if k not in (i, j)}
        rot[(labels[i], labels[i])] = c
        rot[(labels[j], labels[j])] = c
        rot[(labels[i], labels[j])] = -s * ph.conjugate()
        rot[(labels[j], labels[i])] = s * ph
        U = Matrix.from_entries(labels, labels, rot) @ U
    return U
