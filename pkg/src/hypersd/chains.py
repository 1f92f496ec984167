"""Chain complexes, embedded complexes and embedded homology.

An embedded complex is a chain complex ``C`` together with a graded subset
of its basis cells spanning ``D``.  Its infimum complex is
``Inf_n = {x in D_n : dx in D_{n-1}}``; the embedded homology is the
homology of ``Inf``.

``Inf_n`` is computed as the kernel of ``D_n -> C_{n-1} / D_{n-1}``.  Over Z
that kernel is a saturated lattice, so the homology does not depend on the
basis the elimination happens to pick.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Hashable, List, Optional, Sequence, Tuple

from .hypergraph import Hypergraph, SimplicialComplex, simplicial_closure
from .linalg import (
    QQ,
    ZZ,
    CoefficientRing,
    Echelon,
    Kernel,
    SparseMatrix,
    SparseVector,
    invariant_factors,
    kernel,
    rank,
)


class ChainComplexError(ValueError):
    pass


class ChainComplex:
    """Free chain complex with ordered bases and sparse boundary matrices.

    ``boundary(n)`` maps ``C_n -> C_{n-1}``; columns are n-cells, rows are
    (n-1)-cells.
    """

    def __init__(self, bases: Sequence[Sequence[Hashable]], boundaries: Dict[int, SparseMatrix],
                 ring: CoefficientRing = ZZ):
        self.ring = ring
        self.bases: List[List[Hashable]] = [list(b) for b in bases]
        while self.bases and not self.bases[-1]:
            self.bases.pop()
        self.index: List[Dict[Hashable, int]] = [{c: i for i, c in enumerate(b)} for b in self.bases]
        self._d: Dict[int, SparseMatrix] = {}
        for n in range(len(self.bases)):
            rows = len(self.bases[n - 1]) if n > 0 else 0
            m = boundaries.get(n)
            if m is None:
                m = SparseMatrix(rows, len(self.bases[n]))
            if m.shape != (rows, len(self.bases[n])):
                raise ChainComplexError(f"boundary {n} has shape {m.shape}, expected {(rows, len(self.bases[n]))}")
            self._d[n] = m.reduce(ring)

    @property
    def top_dim(self) -> int:
        return len(self.bases) - 1

    def size(self, n: int) -> int:
        return len(self.bases[n]) if 0 <= n < len(self.bases) else 0

    def boundary(self, n: int) -> SparseMatrix:
        if n in self._d:
            return self._d[n]
        return SparseMatrix(self.size(n - 1), self.size(n))

    def check(self) -> None:
        """Raise unless ``d_{n-1} d_n = 0`` for all n."""
        for n in range(2, len(self.bases)):
            prod = self.boundary(n - 1).matmul(self.boundary(n), self.ring)
            if not prod.is_zero():
                j = next(j for j, c in enumerate(prod.cols) if c)
                raise ChainComplexError(f"d∘d != 0 in dimension {n} at cell {self.bases[n][j]!r}")

    def is_complex(self) -> bool:
        try:
            self.check()
        except ChainComplexError:
            return False
        return True

    def __repr__(self):
        return f"ChainComplex(sizes={[len(b) for b in self.bases]}, ring={self.ring})"


def simplicial_chain_complex(k: SimplicialComplex, ring: CoefficientRing = ZZ) -> ChainComplex:
    """Simplicial chains of ``k``; the i-th face of a simplex carries sign (-1)^i."""
    top = k.dim
    bases = [k.of_dim(n) for n in range(top + 1)]
    index = [{s: i for i, s in enumerate(b)} for b in bases]
    boundaries = {}
    for n in range(1, top + 1):
        rows = index[n - 1]
        cols = []
        for s in bases[n]:
            col = {}
            for i in range(n + 1):
                col[rows[s[:i] + s[i + 1:]]] = 1 if i % 2 == 0 else -1
            cols.append(col)
        boundaries[n] = SparseMatrix(len(bases[n - 1]), len(bases[n]), cols)
    return ChainComplex(bases, boundaries, ring)


@dataclass
class EmbeddedComplex:
    """A chain complex plus the basis cells spanning the embedded submodule."""

    ambient: ChainComplex
    sub: List[List[int]]

    def __post_init__(self):
        self.sub = [sorted(s) for s in self.sub]
        while len(self.sub) < len(self.ambient.bases):
            self.sub.append([])
        if len(self.sub) > len(self.ambient.bases) and any(self.sub[len(self.ambient.bases):]):
            raise ChainComplexError("sub-basis has cells above the ambient top dimension")
        self.sub = self.sub[: len(self.ambient.bases)]
        for n, s in enumerate(self.sub):
            if s and (s[0] < 0 or s[-1] >= self.ambient.size(n)):
                raise ChainComplexError(f"sub-basis index out of range in dimension {n}")
        self._subset = [set(s) for s in self.sub]
        self._pos = [{a: i for i, a in enumerate(s)} for s in self.sub]
        self._inf = None

    @property
    def ring(self) -> CoefficientRing:
        return self.ambient.ring

    def sub_cells(self, n: int) -> List[Hashable]:
        return [self.ambient.bases[n][a] for a in self.sub[n]] if n < len(self.sub) else []

    def in_sub(self, n: int, v: SparseVector) -> bool:
        """Whether a vector of ``C_n`` lies in the span of the sub-basis."""
        s = self._subset[n] if 0 <= n < len(self._subset) else set()
        return all(a in s for a in v)

    def with_ring(self, ring: CoefficientRing) -> "EmbeddedComplex":
        amb = ChainComplex(self.ambient.bases, {n: self.ambient.boundary(n) for n in range(len(self.ambient.bases))}, ring)
        return EmbeddedComplex(amb, self.sub)


def embedded_complex(h: Hypergraph, ring: CoefficientRing = ZZ,
                     ambient: Optional[SimplicialComplex] = None) -> EmbeddedComplex:
    """``(D(h), C(closure of h))``, or ``C(ambient)`` for a larger complex."""
    k = simplicial_closure(h) if ambient is None else ambient
    if not h.edges <= k.edges:
        raise ChainComplexError("ambient complex does not contain the hypergraph")
    c = simplicial_chain_complex(k, ring)
    sub = [[c.index[n][s] for s in h.of_dim(n)] for n in range(c.top_dim + 1)]
    return EmbeddedComplex(c, sub)


# ---------------------------------------------------------------------------
# infimum complex


class InfimumComplex(ChainComplex):
    """``Inf(D, C)`` with its basis expressed in ambient coordinates.

    ``generators[n][j]`` is the j-th basis vector of ``Inf_n`` as a sparse
    vector over the ambient ``C_n``.
    """

    def __init__(self, e: EmbeddedComplex):
        amb = e.ambient
        ring = amb.ring
        self.embedded = e
        self.kernels: List[Kernel] = []
        self.generators: List[List[SparseVector]] = []
        top = amb.top_dim
        for n in range(top + 1):
            d = amb.boundary(n)
            outside = {} if n == 0 else {
                a: i for i, a in enumerate(x for x in range(amb.size(n - 1)) if x not in e._subset[n - 1])
            }
            cols = []
            for a in e.sub[n]:
                cols.append({outside[r]: x for r, x in d.cols[a].items() if r in outside})
            proj = SparseMatrix(len(outside), len(e.sub[n]), cols)
            ker = kernel(proj, ring)
            self.kernels.append(ker)
            self.generators.append([{e.sub[n][i]: x for i, x in v.items()} for v in ker.basis])
        bases = [list(range(len(g))) for g in self.generators]
        boundaries = {}
        for n in range(1, top + 1):
            d = amb.boundary(n)
            cols = []
            for v in self.generators[n]:
                w = d.apply(v, ring)
                cols.append(self._coords(n - 1, w))
            boundaries[n] = SparseMatrix(len(self.generators[n - 1]), len(self.generators[n]), cols)
        super().__init__(bases, boundaries, ring)
        # keep trailing empty dimensions addressable
        self.bases = bases
        self.index = [{c: i for i, c in enumerate(b)} for b in bases]
        for n in range(len(bases)):
            self._d.setdefault(n, SparseMatrix(len(bases[n - 1]) if n else 0, len(bases[n])))

    def _coords(self, n: int, w: SparseVector) -> SparseVector:
        e = self.embedded
        pos = e._pos[n]
        try:
            local = {pos[a]: x for a, x in w.items()}
        except KeyError as exc:
            raise ChainComplexError(f"vector leaves D_{n} at ambient cell {exc.args[0]}") from None
        coords = self.kernels[n].coordinates(local)
        return {i: x for i, x in enumerate(coords) if x}

    def coordinates(self, n: int, w: SparseVector) -> SparseVector:
        """Coordinates on ``generators[n]`` of an ambient vector lying in ``Inf_n``."""
        return self._coords(n, w)

    def lift(self, n: int, coords: SparseVector) -> SparseVector:
        """Ambient vector with the given coordinates on ``generators[n]``."""
        out: SparseVector = {}
        for j, c in coords.items():
            for a, x in self.generators[n][j].items():
                out[a] = out.get(a, 0) + c * x
        ring = self.ring
        return {a: ring.coerce(x) for a, x in out.items() if ring.coerce(x)}

    def contains(self, n: int, w: SparseVector) -> bool:
        e = self.embedded
        if not e.in_sub(n, w):
            return False
        if n == 0:
            return True
        return e.in_sub(n - 1, e.ambient.boundary(n).apply(w, self.ring))


def infimum_complex(e: EmbeddedComplex) -> InfimumComplex:
    return InfimumComplex(e)


# ---------------------------------------------------------------------------
# homology


@dataclass(frozen=True)
class HomologyGroup:
    dim: int
    rank: int
    torsion: Tuple[int, ...] = ()

    def to_dict(self) -> dict:
        return {"dim": self.dim, "rank": self.rank, "torsion": list(self.torsion)}

    def is_zero(self) -> bool:
        return self.rank == 0 and not self.torsion

    def __str__(self):
        parts = []
        if self.rank:
            parts.append("Z^%d" % self.rank if self.rank > 1 else "Z")
        parts += [f"Z/{t}" for t in self.torsion]
        return " + ".join(parts) or "0"


def homology(c: ChainComplex, check: bool = True) -> List[HomologyGroup]:
    """Homology in every dimension ``0..top_dim`` over ``c.ring``."""
    if check:
        c.check()
    ring = c.ring
    top = c.top_dim
    ranks: List[int] = []
    factors: List[List[int]] = []
    for n in range(top + 2):
        d = c.boundary(n) if n <= top else SparseMatrix(c.size(top), 0)
        if ring.kind == "Z":
            f = invariant_factors(d)
            factors.append(f)
            ranks.append(len(f))
        else:
            factors.append([])
            ranks.append(rank(d, ring))
    out = []
    for n in range(top + 1):
        betti = c.size(n) - ranks[n] - ranks[n + 1]
        torsion = tuple(x for x in factors[n + 1] if x > 1)
        out.append(HomologyGroup(n, betti, torsion))
    return out


def embedded_homology(h: Hypergraph, ring: CoefficientRing = ZZ,
                      ambient: Optional[SimplicialComplex] = None) -> List[HomologyGroup]:
    return homology(infimum_complex(embedded_complex(h, ring, ambient)))


def homology_report(groups: Sequence[HomologyGroup], ring: CoefficientRing) -> dict:
    return {"ring": ring.name, "groups": [g.to_dict() for g in groups]}


def pad(groups: Sequence[HomologyGroup], n: int) -> List[HomologyGroup]:
    """Extend with zero groups up to dimension ``n - 1`` for comparisons."""
    out = list(groups)
    for k in range(len(out), n):
        out.append(HomologyGroup(k, 0, ()))
    return out


def same_homology(a: Sequence[HomologyGroup], b: Sequence[HomologyGroup]) -> bool:
    n = max(len(a), len(b))
    return [(g.rank, g.torsion) for g in pad(a, n)] == [(g.rank, g.torsion) for g in pad(b, n)]


# ---------------------------------------------------------------------------
# maps


@dataclass
class GradedMap:
    """``f_n : C_n -> C'_{n + degree}`` between embedded complexes."""

    source: EmbeddedComplex
    target: EmbeddedComplex
    degree: int
    matrices: Dict[int, SparseMatrix] = field(default_factory=dict)

    def matrix(self, n: int) -> SparseMatrix:
        m = self.matrices.get(n)
        if m is None:
            return SparseMatrix(self.target.ambient.size(n + self.degree), self.source.ambient.size(n))
        return m

    def dims(self) -> range:
        return range(self.source.ambient.top_dim + 1)

    def embedded_violation(self) -> Optional[Tuple[int, Hashable]]:
        """First ``(dimension, cell)`` of ``D`` whose image leaves ``D'`` (or None)."""
        for n in self.dims():
            m = self.matrix(n)
            for a in self.source.sub[n]:
                if not self.target.in_sub(n + self.degree, m.cols[a]):
                    return n, self.source.ambient.bases[n][a]
        return None

    def is_embedded(self) -> bool:
        return self.embedded_violation() is None

    def chain_map_violation(self) -> Optional[Tuple[int, Hashable]]:
        """First ``(dimension, cell)`` where ``d f != f d`` (degree-0 maps)."""
        if self.degree != 0:
            raise ChainComplexError("chain-map check needs a degree-0 map")
        ring = self.source.ring
        src, tgt = self.source.ambient, self.target.ambient
        for n in range(1, src.top_dim + 1):
            lhs = tgt.boundary(n).matmul(self.matrix(n), ring) if n <= tgt.top_dim else None
            rhs = self.matrix(n - 1).matmul(src.boundary(n), ring)
            if lhs is None:
                lhs = SparseMatrix(rhs.nrows, rhs.ncols)
            for j, (x, y) in enumerate(zip(lhs.cols, rhs.cols)):
                if x != y:
                    return n, src.bases[n][j]
        return None

    def is_chain_map(self) -> bool:
        return self.chain_map_violation() is None

    def compose(self, first: "GradedMap") -> "GradedMap":
        """``self ∘ first``."""
        ring = self.source.ring
        mats = {}
        for n in first.dims():
            mats[n] = self.matrix(n + first.degree).matmul(first.matrix(n), ring)
        return GradedMap(first.source, self.target, first.degree + self.degree, mats)


def identity_map(e: EmbeddedComplex) -> GradedMap:
    return GradedMap(e, e, 0, {n: SparseMatrix.identity(e.ambient.size(n)) for n in range(e.ambient.top_dim + 1)})


def zero_map(source: EmbeddedComplex, target: EmbeddedComplex, degree: int = 0) -> GradedMap:
    return GradedMap(source, target, degree, {})


def homotopy_violation(f: GradedMap, g: GradedMap, h: GradedMap) -> Optional[str]:
    """Why ``f - g = dh + hd`` fails (or why ``h`` is not embedded); None if it holds."""
    if f.degree != 0 or g.degree != 0 or h.degree != 1:
        raise ChainComplexError("need degree-0 maps f, g and a degree-1 homotopy h")
    if f.source is not g.source or f.target is not g.target or h.source is not f.source or h.target is not f.target:
        raise ChainComplexError("f, g and h must share source and target")
    ring = f.source.ring
    src, tgt = f.source.ambient, f.target.ambient
    for n in f.dims():
        lhs = f.matrix(n).add(g.matrix(n), ring, scale=-1)
        dh = tgt.boundary(n + 1).matmul(h.matrix(n), ring) if n + 1 <= tgt.top_dim else SparseMatrix(lhs.nrows, lhs.ncols)
        hd = h.matrix(n - 1).matmul(src.boundary(n), ring) if n > 0 else SparseMatrix(lhs.nrows, lhs.ncols)
        rhs = dh.add(hd, ring)
        for j, (x, y) in enumerate(zip(lhs.cols, rhs.cols)):
            if x != y:
                return f"f - g != dh + hd in dimension {n} at cell {src.bases[n][j]!r}"
    bad = h.embedded_violation()
    if bad is not None:
        return f"homotopy leaves D in dimension {bad[0]} at cell {bad[1]!r}"
    return None


def check_homotopy(f: GradedMap, g: GradedMap, h: GradedMap) -> bool:
    return homotopy_violation(f, g, h) is None


# ---------------------------------------------------------------------------
# induced maps on homology (over a field)


class _FieldHomology:
    """Cycles, boundaries and a quotient basis of ``H_n(Inf)`` over a field."""

    def __init__(self, inf: InfimumComplex, n: int):
        ring = inf.ring
        self.inf = inf
        self.n = n
        self.cycles = kernel(inf.boundary(n), ring)
        bd = inf.boundary(n + 1) if n + 1 <= inf.top_dim else SparseMatrix(inf.size(n), 0)
        self.boundaries = Echelon(ring)
        for col in bd.cols:
            if col:
                self.boundaries.add(_as_dict(self.cycles.coordinates(col)))
        self.free = [j for j in range(len(self.cycles)) if j not in self.boundaries.pivots]

    @property
    def betti(self) -> int:
        return len(self.free)

    def basis_vectors(self) -> List[SparseVector]:
        """Ambient chains representing the quotient basis."""
        out = []
        for j in self.free:
            z = self.cycles.basis[j]
            out.append(self.inf.lift(self.n, z))
        return out

    def classify(self, inf_coords: SparseVector) -> List:
        """Homology coordinates of a cycle given in ``Inf_n`` coordinates."""
        zc = _as_dict(self.cycles.coordinates(inf_coords))
        r = self.boundaries.reduce(zc)
        return [r.get(j, 0) for j in self.free]


def _as_dict(xs: Sequence) -> SparseVector:
    return {i: x for i, x in enumerate(xs) if x}


def induced_map_on_homology(f: GradedMap, field_ring: Optional[CoefficientRing] = None) -> Dict[int, List[list]]:
    """Matrices of ``H_n(f)`` on quotient bases, over a field.

    Rows index the target basis, columns the source basis.  For maps defined
    over Z pass ``field_ring`` (default Q); the matrices then describe the
    map on the free parts.
    """
    if f.degree != 0:
        raise ChainComplexError("induced map needs a degree-0 map")
    ring = field_ring or (f.source.ring if f.source.ring.is_field else QQ)
    bad = f.embedded_violation()
    if bad is not None:
        raise ChainComplexError(f"not an embedded map: cell {bad[1]!r} in dimension {bad[0]}")
    if f.source.ring != ring:
        src_e, tgt_e = f.source.with_ring(ring), f.target.with_ring(ring)
    else:
        src_e, tgt_e = f.source, f.target
    src_inf, tgt_inf = infimum_complex(src_e), infimum_complex(tgt_e)
    out: Dict[int, List[list]] = {}
    for n in f.dims():
        hs = _FieldHomology(src_inf, n)
        if n > tgt_inf.top_dim:
            out[n] = [[] for _ in range(0)] if hs.betti == 0 else [[0] * hs.betti for _ in range(0)]
            continue
        ht = _FieldHomology(tgt_inf, n)
        m = f.matrix(n).reduce(ring)
        cols = []
        for v in hs.basis_vectors():
            w = m.apply(v, ring)
            cols.append(ht.classify(tgt_inf.coordinates(n, w)))
        out[n] = [[cols[j][i] for j in range(len(cols))] for i in range(ht.betti)]
    return out


def is_invertible(m: List[list], ring: CoefficientRing) -> bool:
    n = len(m)
    if any(len(r) != n for r in m):
        return False
    if n == 0:
        return True
    return rank(SparseMatrix.from_dense(m), ring) == n
