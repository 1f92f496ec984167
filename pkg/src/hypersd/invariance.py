"""Explicit chain maps between a hypergraph and its subdivision.

* ``rho`` sends a simplex to the signed sum of all flags ending at it.
* ``pi`` sends a chain of simplices to the simplex of their last vertices,
  or to zero when two last vertices coincide.
* ``homotopy_h`` is a degree-one map on the subdivided side with
  ``dh + hd = id - rho pi``.

Flags are built by deleting one vertex at a time.  Deleting position ``k``
of the current simplex at each step, the flag gets sign
``(-1)^(sum(k) - n(n+1)/2)``; with this convention ``pi rho = id``.

Matrices are built column by column on first use of a dimension and cached.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Callable, Dict, Hashable, List, Optional, Tuple

from .chains import (
    ChainComplexError,
    EmbeddedComplex,
    GradedMap,
    HomologyGroup,
    embedded_complex,
    homology,
    homotopy_violation,
    identity_map,
    induced_map_on_homology,
    infimum_complex,
    is_invertible,
    same_homology,
)
from .hypergraph import Hypergraph, Simplex, as_complex, simplicial_closure
from .linalg import QQ, ZZ, CoefficientRing, SparseMatrix, SparseVector
from .subdivision import SubdivisionResult, subdivide

Chain = Tuple[Simplex, ...]


class InvarianceError(ValueError):
    pass


@lru_cache(maxsize=4096)
def signed_flags(s: Simplex) -> Tuple[Tuple[Chain, int], ...]:
    """All flags ending at ``s`` with their signs, bottom element first."""
    n = len(s) - 1

    def rec(cur: Simplex, depth: int, ksum: int):
        if len(cur) == 1:
            yield (cur,), ksum
            return
        for k in range(len(cur)):
            for tail, total in rec(cur[:k] + cur[k + 1:], depth + 1, ksum + k):
                yield tail + (cur,), total

    out = []
    for flag, ksum in rec(s, 0, 0):
        out.append((flag, -1 if (ksum - n * (n + 1) // 2) % 2 else 1))
    return tuple(out)


def last_vertices(c: Chain) -> Optional[Simplex]:
    """Simplex of last vertices, or None if two of them coincide."""
    lv = tuple(s[-1] for s in c)
    for a, b in zip(lv, lv[1:]):
        if a == b:
            return None
    return lv


class LazyGradedMap(GradedMap):
    """A graded map whose matrix in each dimension is built on first access."""

    def __init__(self, source: EmbeddedComplex, target: EmbeddedComplex, degree: int,
                 column: Callable[[int, int], SparseVector]):
        super().__init__(source, target, degree, {})
        self._column = column

    def matrix(self, n: int) -> SparseMatrix:
        m = self.matrices.get(n)
        if m is None:
            rows = self.target.ambient.size(n + self.degree)
            cols = [self._column(n, j) for j in range(self.source.ambient.size(n))]
            m = SparseMatrix(rows, len(cols), cols).reduce(self.source.ring)
            self.matrices[n] = m
        return m


@dataclass
class InvarianceSetup:
    """A hypergraph, its subdivision and the two embedded complexes."""

    hypergraph: Hypergraph
    ring: CoefficientRing
    subdivision: SubdivisionResult
    source: EmbeddedComplex
    target: EmbeddedComplex

    @classmethod
    def build(cls, h: Hypergraph, ring: CoefficientRing = ZZ) -> "InvarianceSetup":
        k = simplicial_closure(h)
        sd = subdivide(h, ambient=k)
        sdk = subdivide(k, ambient=k)
        if sd.provenance != sdk.provenance:
            raise InvarianceError("vertex interning differs between the two subdivisions")
        source = embedded_complex(h, ring, k)
        target = embedded_complex(sd.hypergraph, ring, as_complex(sdk.hypergraph))
        return cls(h, ring, sd, source, target)

    def cell_label(self, side: str, n: int, j: int):
        """Readable form of the j-th n-cell: vertex lists or chains of them."""
        if side == "source":
            return list(self.source.ambient.bases[n][j])
        return [list(s) for s in self.subdivision.chain(self.target.ambient.bases[n][j])]

    def _check_same(self, e: EmbeddedComplex):
        if e is not self.source and e is not self.target:
            raise InvarianceError("map requested for a complex from another setup")


def _coerce(ring: CoefficientRing, col: Dict[int, int]) -> SparseVector:
    out = {}
    for i, x in col.items():
        x = ring.coerce(x)
        if x:
            out[i] = x
    return out


def rho(setup: InvarianceSetup) -> GradedMap:
    src, tgt = setup.source.ambient, setup.target.ambient
    encode = setup.subdivision.encode

    def column(n: int, j: int) -> SparseVector:
        rows = tgt.index[n]
        col: Dict[int, int] = {}
        for flag, sign in signed_flags(src.bases[n][j]):
            r = rows[encode(flag)]
            col[r] = col.get(r, 0) + sign
        return _coerce(setup.ring, col)

    return LazyGradedMap(setup.source, setup.target, 0, column)


def pi(setup: InvarianceSetup) -> GradedMap:
    src, tgt = setup.target.ambient, setup.source.ambient
    chain = setup.subdivision.chain

    def column(n: int, j: int) -> SparseVector:
        lv = last_vertices(chain(src.bases[n][j]))
        if lv is None:
            return {}
        return {tgt.index[n][lv]: 1}

    return LazyGradedMap(setup.target, setup.source, 0, column)


def homotopy_h(setup: InvarianceSetup) -> GradedMap:
    amb = setup.target.ambient
    chain, encode = setup.subdivision.chain, setup.subdivision.encode

    def column(n: int, j: int) -> SparseVector:
        x = chain(amb.bases[n][j])
        if n + 1 > amb.top_dim:
            return {}
        rows = amb.index[n + 1]
        col: Dict[int, int] = {}
        for i in range(n + 1):
            tau = last_vertices(x[: i + 1])
            if tau is None or tau == x[i]:
                continue
            tail = x[i:]
            for flag, sign in signed_flags(tau):
                r = rows[encode(flag + tail)]
                s = -sign if i % 2 else sign
                col[r] = col.get(r, 0) + s
        return _coerce(setup.ring, col)

    return LazyGradedMap(setup.target, setup.target, 1, column)


# ---------------------------------------------------------------------------
# verification


@dataclass
class Check:
    name: str
    passed: bool
    detail: str = ""

    def to_dict(self) -> dict:
        d = {"name": self.name, "pass": self.passed}
        if self.detail:
            d["detail"] = self.detail
        return d


@dataclass
class InvarianceReport:
    ring: CoefficientRing
    checks: List[Check] = field(default_factory=list)
    source_homology: List[HomologyGroup] = field(default_factory=list)
    subdivided_homology: List[HomologyGroup] = field(default_factory=list)
    induced: Dict[int, list] = field(default_factory=dict)

    @property
    def passed(self) -> bool:
        return all(c.passed for c in self.checks)

    def check(self, name: str) -> Check:
        for c in self.checks:
            if c.name == name:
                return c
        raise KeyError(name)

    def failures(self) -> List[Check]:
        return [c for c in self.checks if not c.passed]

    def to_dict(self) -> dict:
        return {
            "ring": self.ring.name,
            "checks": [c.to_dict() for c in self.checks],
            "homology": {
                "source": [g.to_dict() for g in self.source_homology],
                "subdivided": [g.to_dict() for g in self.subdivided_homology],
            },
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=False) + "\n"


def _chain_map_check(name: str, f: GradedMap, setup: InvarianceSetup, side: str) -> Check:
    bad = f.chain_map_violation()
    if bad is None:
        return Check(name, True)
    n, cell = bad
    j = f.source.ambient.index[n][cell]
    return Check(name, False, f"d f != f d in dimension {n} at {setup.cell_label(side, n, j)}")


def _embedded_check(name: str, f: GradedMap, setup: InvarianceSetup, side: str) -> Check:
    bad = f.embedded_violation()
    if bad is None:
        return Check(name, True)
    n, cell = bad
    j = f.source.ambient.index[n][cell]
    return Check(name, False, f"image leaves the hypergraph in dimension {n} at {setup.cell_label(side, n, j)}")


def _identity_check(name: str, f: GradedMap, setup: InvarianceSetup, side: str) -> Check:
    for n in f.dims():
        m = f.matrix(n)
        for j, col in enumerate(m.cols):
            if col != {j: 1}:
                return Check(name, False, f"column differs from identity in dimension {n} at {setup.cell_label(side, n, j)}")
    return Check(name, True)


def verify_invariance(h: Hypergraph, ring: CoefficientRing = ZZ,
                      setup: Optional[InvarianceSetup] = None) -> InvarianceReport:
    """Check the chain-level identities and the homology isomorphism for ``h``."""
    s = setup or InvarianceSetup.build(h, ring)
    ring = s.ring
    r, p, hh = rho(s), pi(s), homotopy_h(s)
    rep = InvarianceReport(ring)
    rep.checks.append(_chain_map_check("rho_chain_map", r, s, "source"))
    rep.checks.append(_chain_map_check("pi_chain_map", p, s, "target"))
    rep.checks.append(_embedded_check("rho_embedded", r, s, "source"))
    rep.checks.append(_embedded_check("pi_embedded", p, s, "target"))
    rep.checks.append(_embedded_check("h_embedded", hh, s, "target"))
    rep.checks.append(_identity_check("pi_rho_identity", p.compose(r), s, "source"))
    why = homotopy_violation(identity_map(s.target), r.compose(p), hh)
    rep.checks.append(Check("homotopy_identity", why is None, why or ""))

    src_inf = infimum_complex(s.source)
    tgt_inf = infimum_complex(s.target)
    rep.source_homology = homology(src_inf)
    rep.subdivided_homology = homology(tgt_inf)
    same = same_homology(rep.source_homology, rep.subdivided_homology)
    detail = ""
    if not same:
        detail = "source %s vs subdivided %s" % (
            [str(g) for g in rep.source_homology], [str(g) for g in rep.subdivided_homology])
    rep.checks.append(Check("homology_match", same, detail))

    field_ring = ring if ring.is_field else QQ
    try:
        rep.induced = induced_map_on_homology(r, field_ring)
        bad = [n for n, m in rep.induced.items() if not is_invertible(m, field_ring)]
        rep.checks.append(Check("rho_induced_isomorphism", not bad,
                                f"induced map not invertible in dimension {bad[0]}" if bad else ""))
    except ChainComplexError as exc:
        rep.checks.append(Check("rho_induced_isomorphism", False, str(exc)))
    return rep
