"""Hypergraphs, simplicial complexes and vertex maps.

Vertices are interned: a :class:`VertexTable` holds the labels, and a
simplex is a strictly increasing tuple of vertex indices.  The total vertex
order is index order and never changes after construction.
"""

from __future__ import annotations

import json
import random
from itertools import combinations
from typing import Dict, Iterable, Iterator, List, Mapping, Optional, Sequence, Tuple

Simplex = Tuple[int, ...]


class HypergraphError(ValueError):
    pass


class HypergraphFormatError(HypergraphError):
    pass


class MorphismError(HypergraphError):
    pass


def simplex(vertices: Iterable[int]) -> Simplex:
    s = tuple(sorted(set(vertices)))
    if not s:
        raise HypergraphError("empty simplex")
    return s


def dim(s: Simplex) -> int:
    return len(s) - 1


def simplex_key(s: Simplex):
    """Canonical (dimension, lexicographic) sort key."""
    return (len(s), s)


def faces(s: Simplex) -> List[Simplex]:
    """Codimension-1 faces; ``faces(s)[i]`` deletes the i-th vertex."""
    if len(s) == 1:
        return []
    return [s[:i] + s[i + 1:] for i in range(len(s))]


def subsets(s: Simplex) -> Iterator[Simplex]:
    for k in range(1, len(s) + 1):
        yield from combinations(s, k)


class VertexTable:
    """Ordered, duplicate-free list of vertex labels."""

    __slots__ = ("labels", "_index")

    def __init__(self, labels: Iterable[str]):
        self.labels: Tuple[str, ...] = tuple(str(x) for x in labels)
        self._index = {lab: i for i, lab in enumerate(self.labels)}
        if len(self._index) != len(self.labels):
            raise HypergraphError("vertex labels must be unique")

    @classmethod
    def range(cls, n: int) -> "VertexTable":
        return cls(str(i) for i in range(n))

    def index(self, label: str) -> int:
        return self._index[label]

    def __len__(self):
        return len(self.labels)

    def __getitem__(self, i):
        return self.labels[i]

    def __iter__(self):
        return iter(self.labels)

    def __eq__(self, other):
        return isinstance(other, VertexTable) and self.labels == other.labels

    def __hash__(self):
        return hash(self.labels)

    def __repr__(self):
        return f"VertexTable({list(self.labels)!r})"


class Hypergraph:
    """A nonempty finite set of nonempty hyperedges over a vertex table."""

    __slots__ = ("vertices", "edges", "_by_dim")

    def __init__(self, vertices: VertexTable | int | Sequence[str], edges: Iterable[Iterable[int]]):
        if isinstance(vertices, int):
            vertices = VertexTable.range(vertices)
        elif not isinstance(vertices, VertexTable):
            vertices = VertexTable(vertices)
        self.vertices = vertices
        es = set()
        n = len(vertices)
        for e in edges:
            s = simplex(e)
            if s[0] < 0 or s[-1] >= n:
                raise HypergraphError(f"edge {list(s)} uses a vertex outside 0..{n - 1}")
            es.add(s)
        if not es:
            raise HypergraphError("a hypergraph needs at least one hyperedge")
        self.edges = frozenset(es)
        self._by_dim = None
        self._check()

    def _check(self):
        pass

    # -- views -------------------------------------------------------------

    def by_dim(self) -> Dict[int, List[Simplex]]:
        """Edges bucketed by dimension, each bucket in lexicographic order."""
        if self._by_dim is None:
            out: Dict[int, List[Simplex]] = {}
            for e in self.edges:
                out.setdefault(len(e) - 1, []).append(e)
            for v in out.values():
                v.sort()
            self._by_dim = out
        return self._by_dim

    def of_dim(self, n: int) -> List[Simplex]:
        return self.by_dim().get(n, [])

    @property
    def dim(self) -> int:
        return max(len(e) for e in self.edges) - 1

    def sorted_edges(self) -> List[Simplex]:
        return sorted(self.edges, key=simplex_key)

    def counts(self) -> List[int]:
        return [len(self.of_dim(n)) for n in range(self.dim + 1)]

    def __contains__(self, s) -> bool:
        return tuple(s) in self.edges

    def __iter__(self):
        return iter(self.sorted_edges())

    def __len__(self):
        return len(self.edges)

    def __eq__(self, other):
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return self.vertices == other.vertices and self.edges == other.edges

    def __hash__(self):
        return hash((self.vertices, self.edges))

    def __repr__(self):
        return f"{type(self).__name__}({[list(e) for e in self.sorted_edges()]})"

    def issubset(self, other: "Hypergraph") -> bool:
        return self.edges <= other.edges

    def label(self, s: Simplex) -> List[str]:
        return [self.vertices[i] for i in s]

    # -- serialization -----------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "vertices": list(self.vertices.labels),
            "edges": [list(e) for e in self.sorted_edges()],
        }

    def to_json(self, **extra) -> str:
        d = self.to_dict()
        d.update(extra)
        return json.dumps(d, indent=None, separators=(", ", ": ")) + "\n"


class SimplicialComplex(Hypergraph):
    """A downward-closed hypergraph."""

    __slots__ = ()

    def _check(self):
        for e in self.edges:
            for f in faces(e):
                if f not in self.edges:
                    raise HypergraphError(f"not downward closed: {list(f)} missing below {list(e)}")


def is_simplicial_complex(h: Hypergraph) -> bool:
    return all(f in h.edges for e in h.edges for f in faces(e))


def simplicial_closure(h: Hypergraph) -> SimplicialComplex:
    """All nonempty subsets of the hyperedges of ``h``."""
    if isinstance(h, SimplicialComplex):
        return h
    closed = set()
    # largest first so that shared faces are skipped early
    for e in sorted(h.edges, key=len, reverse=True):
        if e in closed:
            continue
        closed.update(subsets(e))
    return SimplicialComplex(h.vertices, closed)


def as_complex(h: Hypergraph) -> SimplicialComplex:
    """Re-type a hypergraph already known to be downward closed."""
    if isinstance(h, SimplicialComplex):
        return h
    return SimplicialComplex(h.vertices, h.edges)


def full_simplex(n_vertices: int) -> SimplicialComplex:
    return simplicial_closure(Hypergraph(n_vertices, [range(n_vertices)]))


# ---------------------------------------------------------------------------
# vertex maps


class VertexMap:
    """A vertex function between two hypergraphs.

    ``VertexMap`` does not insist on being a morphism; use
    :meth:`is_morphism` or construct with ``check=True``.
    """

    __slots__ = ("source", "target", "mapping")

    def __init__(self, source: Hypergraph, target: Hypergraph, mapping: Sequence[int] | Mapping[int, int],
                 check: bool = False):
        if isinstance(mapping, Mapping):
            mapping = [mapping[i] for i in range(len(source.vertices))]
        mapping = tuple(int(x) for x in mapping)
        if len(mapping) != len(source.vertices):
            raise MorphismError("vertex map must be total on the source vertex table")
        n = len(target.vertices)
        if any(not 0 <= x < n for x in mapping):
            raise MorphismError("vertex map points outside the target vertex table")
        self.source = source
        self.target = target
        self.mapping = mapping
        if check and not self.is_morphism():
            bad = self.first_violation()
            raise MorphismError(f"edge {list(bad)} maps to {list(self(bad))}, which is not an edge of the target")

    def __call__(self, s: Simplex) -> Simplex:
        return tuple(sorted({self.mapping[v] for v in s}))

    def first_violation(self) -> Optional[Simplex]:
        for e in self.source.sorted_edges():
            if self(e) not in self.target.edges:
                return e
        return None

    def is_morphism(self) -> bool:
        return self.first_violation() is None

    def compose(self, first: "VertexMap") -> "VertexMap":
        """``self ∘ first``."""
        if first.target.vertices != self.source.vertices:
            raise MorphismError("maps are not composable")
        return VertexMap(first.source, self.target, [self.mapping[x] for x in first.mapping])

    @classmethod
    def identity(cls, h: Hypergraph) -> "VertexMap":
        return cls(h, h, range(len(h.vertices)))

    def __eq__(self, other):
        if not isinstance(other, VertexMap):
            return NotImplemented
        return (self.mapping == other.mapping and self.source == other.source
                and self.target == other.target)

    def __repr__(self):
        return f"VertexMap({list(self.mapping)})"


def apply_morphism(m: VertexMap, h: Optional[Hypergraph] = None, strict: bool = True) -> Hypergraph:
    """Set-image of ``h`` (default ``m.source``) under ``m``.

    With ``strict`` every image edge must be an edge of ``m.target``.
    """
    if h is None:
        h = m.source
    if h.vertices != m.source.vertices:
        raise MorphismError("hypergraph is not over the map's source vertex table")
    image = []
    for e in h.sorted_edges():
        im = m(e)
        if strict and im not in m.target.edges:
            raise MorphismError(f"edge {list(e)} maps to {list(im)}, which is not an edge of the target")
        image.append(im)
    return Hypergraph(m.target.vertices, image)


# ---------------------------------------------------------------------------
# random instances


def random_hypergraph(n_vertices: int, n_edges: int, seed=None, weighted: bool = False,
                      allow_isolated: bool = False) -> Hypergraph:
    """``n_edges`` distinct nonempty subsets of ``0..n_vertices-1`` drawn by rejection.

    Subsets are uniform among all nonempty subsets, or with ``weighted`` the
    size is drawn uniformly first.  Unless ``allow_isolated`` is set, vertices
    that no edge uses are dropped from the vertex table (labels are kept).
    """
    if n_vertices < 1:
        raise HypergraphError("need at least one vertex")
    if n_edges < 1:
        raise HypergraphError("need at least one edge")
    if n_edges > 2 ** n_vertices - 1:
        raise HypergraphError(f"{n_edges} edges exceed the {2 ** n_vertices - 1} nonempty subsets of {n_vertices} vertices")
    rng = seed if isinstance(seed, random.Random) else random.Random(seed)
    chosen: Dict[Simplex, None] = {}
    while len(chosen) < n_edges:
        if weighted:
            size = rng.randint(1, n_vertices)
            e = tuple(sorted(rng.sample(range(n_vertices), size)))
        else:
            mask = rng.randint(1, 2 ** n_vertices - 1)
            e = tuple(i for i in range(n_vertices) if mask >> i & 1)
        chosen.setdefault(e, None)
    edges = list(chosen)
    if allow_isolated:
        return Hypergraph(n_vertices, edges)
    used = sorted({v for e in edges for v in e})
    new = {v: i for i, v in enumerate(used)}
    return Hypergraph([str(v) for v in used], [[new[v] for v in e] for e in edges])


# ---------------------------------------------------------------------------
# JSON


def hypergraph_from_dict(d: Mapping) -> Hypergraph:
    if not isinstance(d, Mapping) or "edges" not in d:
        raise HypergraphFormatError("expected an object with an 'edges' array")
    raw_edges = d["edges"]
    if not isinstance(raw_edges, list):
        raise HypergraphFormatError("'edges' must be an array")
    if "vertices" in d:
        labels = d["vertices"]
        if not isinstance(labels, list):
            raise HypergraphFormatError("'vertices' must be an array")
        try:
            table = VertexTable(labels)
        except HypergraphError as exc:
            raise HypergraphFormatError(str(exc)) from None
    else:
        top = -1
        for e in raw_edges:
            if isinstance(e, list) and e and all(isinstance(x, int) for x in e):
                top = max(top, max(e))
        table = VertexTable.range(top + 1)
    seen = set()
    edges = []
    for k, e in enumerate(raw_edges):
        if not isinstance(e, list) or not all(isinstance(x, int) and not isinstance(x, bool) for x in e):
            raise HypergraphFormatError(f"edge {k}: expected an array of vertex indices, got {e!r}")
        if not e:
            raise HypergraphFormatError(f"edge {k}: empty hyperedge")
        s = tuple(sorted(set(e)))
        if s[0] < 0 or s[-1] >= len(table):
            raise HypergraphFormatError(f"edge {k}: vertex index out of range 0..{len(table) - 1} in {e}")
        if s in seen:
            raise HypergraphFormatError(f"edge {k}: duplicate hyperedge {list(s)}")
        seen.add(s)
        edges.append(s)
    if not edges:
        raise HypergraphFormatError("a hypergraph needs at least one hyperedge")
    return Hypergraph(table, edges)


def loads(text: str) -> Hypergraph:
    try:
        d = json.loads(text)
    except json.JSONDecodeError as exc:
        raise HypergraphFormatError(f"line {exc.lineno}: {exc.msg}") from None
    return hypergraph_from_dict(d)


def dumps(h: Hypergraph, **extra) -> str:
    return h.to_json(**extra)
