"""Exact sparse linear algebra over Z, Q and GF(p).

Matrices are stored column-major as lists of ``{row: coefficient}`` dicts.
Everything is exact: Python ints, ``fractions.Fraction`` for Q, and ints
reduced mod p for prime fields.  No floating point is used anywhere.

The workhorse is :func:`_eliminate`, a Schur-complement elimination that
only ever pivots on units of the ring.  Over a field that reduces the whole
matrix; over Z it reduces everything except a (usually tiny) core with no
unit entries, which is then handled densely.
"""

from __future__ import annotations

import heapq
import re
from dataclasses import dataclass, field
from fractions import Fraction
from math import gcd
from typing import Dict, Iterable, List, Optional, Sequence, Tuple

SparseVector = Dict[int, object]


class RingError(ValueError):
    pass


@dataclass(frozen=True)
class CoefficientRing:
    """One of Z, Q or GF(p)."""

    kind: str  # "Z", "Q" or "GF"
    p: int = 0

    def __post_init__(self):
        if self.kind not in ("Z", "Q", "GF"):
            raise RingError(f"unknown ring kind {self.kind!r}")
        if self.kind == "GF" and not _is_prime(self.p):
            raise RingError(f"GF(p) needs a prime, got {self.p}")

    @classmethod
    def parse(cls, text: str) -> "CoefficientRing":
        """Parse ``z``, ``q``, ``gf<p>`` (also ``gf(p)``), case-insensitive."""
        t = text.strip().lower()
        if t in ("z", "zz", "int", "integers"):
            return cls("Z")
        if t in ("q", "qq", "rationals"):
            return cls("Q")
        m = re.fullmatch(r"gf\(?(\d+)\)?", t)
        if m:
            return cls("GF", int(m.group(1)))
        raise RingError(f"invalid ring {text!r}; expected z, q or gf<p>")

    @property
    def is_field(self) -> bool:
        return self.kind != "Z"

    @property
    def name(self) -> str:
        return f"GF{self.p}" if self.kind == "GF" else self.kind

    def __str__(self):
        return self.name

    def coerce(self, x):
        if self.kind == "GF":
            return int(x) % self.p
        if self.kind == "Z":
            if isinstance(x, Fraction):
                if x.denominator != 1:
                    raise RingError(f"{x} is not an integer")
                return x.numerator
            return int(x)
        return x

    def is_unit(self, x) -> bool:
        if self.kind == "Z":
            return x == 1 or x == -1
        return x != 0

    def inv(self, x):
        if self.kind == "GF":
            return pow(x, -1, self.p)
        if self.kind == "Z":
            if x in (1, -1):
                return x
            raise RingError(f"{x} is not a unit in Z")
        if x == 1 or x == -1:
            return x
        r = Fraction(1) / x
        return r.numerator if r.denominator == 1 else r

    def mul(self, a, b):
        r = a * b
        if self.kind == "GF":
            return r % self.p
        if isinstance(r, Fraction) and r.denominator == 1:
            return r.numerator
        return r

    def sub(self, a, b):
        r = a - b
        if self.kind == "GF":
            return r % self.p
        if isinstance(r, Fraction) and r.denominator == 1:
            return r.numerator
        return r


ZZ = CoefficientRing("Z")
QQ = CoefficientRing("Q")


def GF(p: int) -> CoefficientRing:
    return CoefficientRing("GF", p)


def _is_prime(n: int) -> bool:
    if n < 2:
        return False
    i = 2
    while i * i <= n:
        if n % i == 0:
            return False
        i += 1
    return True


class SparseMatrix:
    """Column-major sparse matrix; zero entries are never stored."""

    __slots__ = ("nrows", "ncols", "cols")

    def __init__(self, nrows: int, ncols: int, cols: Optional[List[SparseVector]] = None):
        self.nrows = nrows
        self.ncols = ncols
        if cols is None:
            cols = [{} for _ in range(ncols)]
        if len(cols) != ncols:
            raise ValueError("column count mismatch")
        self.cols = cols

    @classmethod
    def zeros(cls, nrows, ncols):
        return cls(nrows, ncols)

    @classmethod
    def identity(cls, n):
        return cls(n, n, [{i: 1} for i in range(n)])

    @classmethod
    def from_dense(cls, rows: Sequence[Sequence]) -> "SparseMatrix":
        nrows = len(rows)
        ncols = len(rows[0]) if nrows else 0
        cols = [{} for _ in range(ncols)]
        for i, row in enumerate(rows):
            for j, x in enumerate(row):
                if x:
                    cols[j][i] = x
        return cls(nrows, ncols, cols)

    def to_dense(self) -> List[list]:
        out = [[0] * self.ncols for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, x in col.items():
                out[i][j] = x
        return out

    def __getitem__(self, ij):
        i, j = ij
        return self.cols[j].get(i, 0)

    def nnz(self) -> int:
        return sum(len(c) for c in self.cols)

    @property
    def shape(self):
        return (self.nrows, self.ncols)

    def rows(self) -> List[SparseVector]:
        out: List[SparseVector] = [{} for _ in range(self.nrows)]
        for j, col in enumerate(self.cols):
            for i, x in col.items():
                out[i][j] = x
        return out

    def apply(self, v: SparseVector, ring: CoefficientRing) -> SparseVector:
        """Return ``self @ v`` for a sparse column vector ``v``."""
        out: SparseVector = {}
        for j, a in v.items():
            for i, b in self.cols[j].items():
                out[i] = out.get(i, 0) + a * b
        return _clean(out, ring)

    def matmul(self, other: "SparseMatrix", ring: CoefficientRing) -> "SparseMatrix":
        if self.ncols != other.nrows:
            raise ValueError(f"shape mismatch {self.shape} @ {other.shape}")
        return SparseMatrix(self.nrows, other.ncols, [self.apply(c, ring) for c in other.cols])

    def add(self, other: "SparseMatrix", ring: CoefficientRing, scale=1) -> "SparseMatrix":
        if self.shape != other.shape:
            raise ValueError(f"shape mismatch {self.shape} + {other.shape}")
        cols = []
        for a, b in zip(self.cols, other.cols):
            c = dict(a)
            for i, x in b.items():
                c[i] = c.get(i, 0) + scale * x
            cols.append(_clean(c, ring))
        return SparseMatrix(self.nrows, self.ncols, cols)

    def reduce(self, ring: CoefficientRing) -> "SparseMatrix":
        return SparseMatrix(self.nrows, self.ncols, [_clean(dict(c), ring) for c in self.cols])

    def is_zero(self) -> bool:
        return all(not c for c in self.cols)

    def __eq__(self, other):
        if not isinstance(other, SparseMatrix):
            return NotImplemented
        return self.shape == other.shape and self.cols == other.cols

    def __repr__(self):
        return f"SparseMatrix({self.nrows}x{self.ncols}, nnz={self.nnz()})"


def _clean(v: SparseVector, ring: CoefficientRing) -> SparseVector:
    if ring.kind == "GF":
        p = ring.p
        return {i: x % p for i, x in v.items() if x % p}
    out = {}
    for i, x in v.items():
        if x:
            if isinstance(x, Fraction) and x.denominator == 1:
                x = x.numerator
            out[i] = x
    return out


# ---------------------------------------------------------------------------
# elimination core


@dataclass
class _Elimination:
    ncols: int
    # (pivot column, {other column: coefficient}) meaning x_c = sum coeff * x_j
    substitutions: List[Tuple[int, SparseVector]] = field(default_factory=list)
    # remaining rows restricted to remaining columns (no unit entries over Z)
    core_rows: List[SparseVector] = field(default_factory=list)
    core_cols: List[int] = field(default_factory=list)

    @property
    def unit_rank(self) -> int:
        return len(self.substitutions)


def _eliminate(a: SparseMatrix, ring: CoefficientRing, track: bool = True) -> _Elimination:
    rows = [r for r in _clean_rows(a, ring) if r]
    colrows: Dict[int, set] = {}
    for ri, r in enumerate(rows):
        for c in r:
            colrows.setdefault(c, set()).add(ri)
    alive = [True] * len(rows)
    heap = [(len(r), ri) for ri, r in enumerate(rows)]
    heapq.heapify(heap)
    stuck = set()
    elim = _Elimination(a.ncols)
    removed_cols = set()

    while heap:
        n, ri = heapq.heappop(heap)
        if not alive[ri] or n != len(rows[ri]) or ri in stuck:
            continue
        row = rows[ri]
        best = None
        for c, x in row.items():
            if ring.is_unit(x):
                k = len(colrows[c])
                if best is None or k < best[0]:
                    best = (k, c)
                    if k == 1:
                        break
        if best is None:
            stuck.add(ri)
            continue
        c = best[1]
        piv = row[c]
        pinv = ring.inv(piv)
        alive[ri] = False
        for cc in row:
            colrows[cc].discard(ri)
        if track:
            # x_c = -pinv * sum_{j != c} row[j] x_j
            elim.substitutions.append(
                (c, {j: ring.mul(-pinv, x) for j, x in row.items() if j != c})
            )
        else:
            elim.substitutions.append((c, {}))
        removed_cols.add(c)
        for si in list(colrows[c]):
            srow = rows[si]
            f = ring.mul(srow[c], pinv)
            for j, x in row.items():
                old = srow.get(j, 0)
                new = ring.sub(old, ring.mul(f, x))
                if new:
                    if not old:
                        colrows.setdefault(j, set()).add(si)
                    srow[j] = new
                else:
                    if old:
                        colrows[j].discard(si)
                    srow.pop(j, None)
            if srow:
                stuck.discard(si)
                heapq.heappush(heap, (len(srow), si))
            else:
                alive[si] = False
        del colrows[c]

    elim.core_rows = [rows[ri] for ri in range(len(rows)) if alive[ri] and rows[ri]]
    elim.core_cols = [c for c in range(a.ncols) if c not in removed_cols]
    return elim


def _clean_rows(a: SparseMatrix, ring: CoefficientRing) -> List[SparseVector]:
    rows: List[SparseVector] = [{} for _ in range(a.nrows)]
    for j, col in enumerate(a.cols):
        for i, x in col.items():
            x = ring.coerce(x)
            if x:
                rows[i][j] = x
    return rows


# ---------------------------------------------------------------------------
# dense integer helpers for the core


def _dense_core(elim: _Elimination) -> List[List[int]]:
    pos = {c: k for k, c in enumerate(elim.core_cols)}
    out = []
    for r in elim.core_rows:
        row = [0] * len(elim.core_cols)
        for c, x in r.items():
            row[pos[c]] = x
        out.append(row)
    return out


def _xgcd(a: int, b: int) -> Tuple[int, int, int]:
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b:
        q, a, b = a // b, b, a % b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    return a, x0, y0


def smith_invariants_dense(m: List[List[int]]) -> List[int]:
    """Nonzero invariant factors of a dense integer matrix (divisibility chain)."""
    a = [list(r) for r in m]
    nr = len(a)
    nc = len(a[0]) if nr else 0
    diag = []
    t = 0
    while t < nr and t < nc:
        # pick smallest nonzero entry in the trailing block as pivot
        piv = None
        for i in range(t, nr):
            for j in range(t, nc):
                if a[i][j] and (piv is None or abs(a[i][j]) < abs(a[piv[0]][piv[1]])):
                    piv = (i, j)
        if piv is None:
            break
        i, j = piv
        a[t], a[i] = a[i], a[t]
        for r in a:
            r[t], r[j] = r[j], r[t]
        while True:
            done = True
            p = a[t][t]
            for i in range(t + 1, nr):
                if a[i][t]:
                    q = a[i][t] // p
                    if q:
                        ai, at = a[i], a[t]
                        for j in range(t, nc):
                            ai[j] -= q * at[j]
                    if a[i][t]:
                        done = False
            for j in range(t + 1, nc):
                if a[t][j]:
                    q = a[t][j] // p
                    if q:
                        for r in a[t:]:
                            r[j] -= q * r[t]
                    if a[t][j]:
                        done = False
            if done:
                # enforce divisibility by the rest of the block
                bad = None
                for i in range(t + 1, nr):
                    for j in range(t + 1, nc):
                        if a[i][j] % p:
                            bad = i
                            break
                    if bad is not None:
                        break
                if bad is None:
                    break
                at, ab = a[t], a[bad]
                for j in range(t, nc):
                    at[j] += ab[j]
                continue
            # move the smallest remaining entry of row/column t into the pivot
            best = (abs(a[t][t]), t, t)
            for i in range(t + 1, nr):
                if a[i][t] and abs(a[i][t]) < best[0]:
                    best = (abs(a[i][t]), i, t)
            for j in range(t + 1, nc):
                if a[t][j] and abs(a[t][j]) < best[0]:
                    best = (abs(a[t][j]), t, j)
            _, i, j = best
            if i != t:
                a[t], a[i] = a[i], a[t]
            if j != t:
                for r in a:
                    r[t], r[j] = r[j], r[t]
        diag.append(abs(a[t][t]))
        t += 1
    return diag


def _column_hnf(m: List[List[int]], ncols: int):
    """Column-style echelon ``m @ U = [H | 0]`` with ``U`` unimodular.

    Returns ``(rank, U, Uinv)`` as dense lists.
    """
    a = [list(r) for r in m]
    n = ncols
    U = [[int(i == j) for j in range(n)] for i in range(n)]
    Uinv = [[int(i == j) for j in range(n)] for i in range(n)]

    def col_op(j, k, g, h, p, q):
        # new col j = g*col_j + h*col_k ; new col k = p*col_j + q*col_k ; det = gq - hp = +-1
        for mat in (a, U):
            for r in mat:
                x, y = r[j], r[k]
                r[j] = g * x + h * y
                r[k] = p * x + q * y
        # inverse acts on rows j,k of Uinv
        det = g * q - h * p
        rj, rk = Uinv[j], Uinv[k]
        for c in range(n):
            x, y = rj[c], rk[c]
            rj[c] = (q * x - p * y) * det
            rk[c] = (-h * x + g * y) * det

    rank = 0
    for r in range(len(a)):
        if rank >= n:
            break
        row = a[r]
        for k in range(rank + 1, n):
            if row[k] == 0:
                continue
            if row[rank] == 0:
                col_op(rank, k, 0, 1, 1, 0)  # swap, det -1
                continue
            x, y = row[rank], row[k]
            g, s, t = _xgcd(x, y)
            # [s, -y/g ; t, x/g] has det (s*x + t*y)/g = 1
            col_op(rank, k, s, t, -y // g, x // g)
        if row[rank] != 0:
            rank += 1
    return rank, U, Uinv


# ---------------------------------------------------------------------------
# public operations


def rank(a: SparseMatrix, ring: CoefficientRing) -> int:
    elim = _eliminate(a, ring, track=False)
    r = elim.unit_rank
    if elim.core_rows:
        if ring.is_field:
            raise AssertionError("field elimination left a core")
        r += len(smith_invariants_dense(_dense_core(elim)))
    return r


def invariant_factors(a: SparseMatrix) -> List[int]:
    """All nonzero invariant factors over Z (including the 1s), sorted."""
    elim = _eliminate(a, ZZ, track=False)
    out = [1] * elim.unit_rank
    if elim.core_rows:
        out += smith_invariants_dense(_dense_core(elim))
    return sorted(out)


class Kernel:
    """A basis of ``ker A`` plus a coordinate map for vectors in the kernel.

    Over Z the basis generates the full saturated lattice ``ker A ∩ Z^n``.
    """

    def __init__(self, elim: _Elimination, ring: CoefficientRing):
        self.ring = ring
        self.ncols = elim.ncols
        self._subs = elim.substitutions
        core_cols = elim.core_cols
        self._core_cols = core_cols
        k = len(core_cols)
        if elim.core_rows:
            dense = _dense_core(elim)
            r, U, Uinv = _column_hnf(dense, k)
            self._Uinv_rows = [Uinv[i] for i in range(r, k)]
            core_basis = [{core_cols[i]: U[i][j] for i in range(k) if U[i][j]} for j in range(r, k)]
        else:
            self._Uinv_rows = None
            core_basis = [{c: 1} for c in core_cols]
        self.basis: List[SparseVector] = [self._lift(v) for v in core_basis]

    def _lift(self, v: SparseVector) -> SparseVector:
        ring = self.ring
        x = dict(v)
        for c, expr in reversed(self._subs):
            s = 0
            for j, coeff in expr.items():
                xj = x.get(j)
                if xj:
                    s += coeff * xj
            s = ring.coerce(s) if ring.kind == "GF" else s
            if s:
                x[c] = s
        return _clean(x, ring)

    def __len__(self):
        return len(self.basis)

    def coordinates(self, v: SparseVector) -> List:
        """Coefficients of ``v`` (assumed in the kernel) on :attr:`basis`."""
        if self._Uinv_rows is None:
            return [v.get(c, 0) for c in self._core_cols]
        y = [v.get(c, 0) for c in self._core_cols]
        return [sum(a * b for a, b in zip(row, y) if b) for row in self._Uinv_rows]

    def matrix(self) -> SparseMatrix:
        return SparseMatrix(self.ncols, len(self.basis), [dict(b) for b in self.basis])


def kernel(a: SparseMatrix, ring: CoefficientRing) -> Kernel:
    return Kernel(_eliminate(a, ring, track=True), ring)


class Echelon:
    """Fully reduced echelon basis of a subspace of F^n (field only).

    ``reduce(v)`` returns the remainder of ``v`` modulo the subspace, which
    is supported away from the pivot coordinates.
    """

    def __init__(self, ring: CoefficientRing):
        if not ring.is_field:
            raise RingError("Echelon needs a field")
        self.ring = ring
        self.pivots: Dict[int, SparseVector] = {}

    def reduce(self, v: SparseVector) -> SparseVector:
        ring = self.ring
        v = _clean(dict(v), ring)
        for p in [p for p in v if p in self.pivots]:
            f = v.get(p)
            if not f:
                continue
            for j, x in self.pivots[p].items():
                v[j] = ring.sub(v.get(j, 0), ring.mul(f, x))
        return _clean(v, ring)

    def add(self, v: SparseVector) -> bool:
        ring = self.ring
        r = self.reduce(v)
        if not r:
            return False
        p = min(r)
        inv = ring.inv(r[p])
        r = {j: ring.mul(inv, x) for j, x in r.items()}
        for q, w in self.pivots.items():
            f = w.get(p)
            if f:
                for j, x in r.items():
                    w[j] = ring.sub(w.get(j, 0), ring.mul(f, x))
                self.pivots[q] = _clean(w, ring)
        self.pivots[p] = r
        return True

    def __len__(self):
        return len(self.pivots)
