"""Subdivision of hypergraphs.

``subdivide(h)`` returns the hypergraph whose vertices are the simplices of
the closure of ``h`` and whose edges are the chains ``s0 < s1 < ... < sn``
of simplices with ``sn`` an edge of ``h`` such that every flag below the
chain also ends in an edge of ``h``.  On a simplicial complex this is the
barycentric subdivision.

Flags below a chain are computed by repeatedly replacing one component by
its codimension-1 faces (``refine_step``), following a schedule of rank
values.  ``flag_oracle`` enumerates the same set directly and is kept as an
independent check.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from itertools import combinations, product
from typing import Dict, FrozenSet, Iterable, Iterator, List, Optional, Sequence, Set, Tuple

from .hypergraph import (
    Hypergraph,
    MorphismError,
    Simplex,
    SimplicialComplex,
    VertexMap,
    VertexTable,
    simplex_key,
    simplicial_closure,
)
from .poset import (
    Chain,
    MarkedGradedPoset,
    PosetError,
    _chains_ending,
    chain_lower_covers,
    initial_chains_below,
    is_chain,
    is_initial_chain,
)

RankWord = Tuple[int, ...]


class SubdivisionError(ValueError):
    pass


class SubdivisionCapExceeded(SubdivisionError):
    def __init__(self, iteration: int, count: int, cap: int):
        super().__init__(f"iteration {iteration}: more than {cap} edges (aborted at {count})")
        self.iteration = iteration
        self.count = count
        self.cap = cap


# ---------------------------------------------------------------------------
# rank words and schedules


def is_rank_word(w: Sequence[int]) -> bool:
    return all(x >= 0 for x in w) and all(a < b for a, b in zip(w, w[1:]))


def can_lower(w: RankWord, k: int) -> bool:
    if k == 0:
        return w[0] > 0
    return w[k] > w[k - 1] + 1


def lower(w: RankWord, k: int) -> RankWord:
    """Decrement position ``k`` of a rank word."""
    if not can_lower(w, k):
        raise SubdivisionError(f"cannot lower position {k} of {w}")
    return w[:k] + (w[k] - 1,) + w[k + 1:]


def schedule_length(w: RankWord) -> int:
    return sum(a - i for i, a in enumerate(w))


def schedules(w: RankWord) -> Iterator[Tuple[int, ...]]:
    """Every position sequence that lowers ``w`` to ``(0, 1, ..., n)``."""
    if schedule_length(w) == 0:
        yield ()
        return
    for k in range(len(w)):
        if can_lower(w, k):
            for rest in schedules(lower(w, k)):
                yield (k,) + rest


def positions_to_ranks(w: RankWord, positions: Sequence[int]) -> List[int]:
    """Translate a position schedule into the rank values it lowers."""
    out = []
    for k in positions:
        out.append(w[k])
        w = lower(w, k)
    return out


def default_schedule(w: RankWord) -> List[int]:
    """Rank values ``d0, ..., 1, d1, ..., 2, ..., dq, ..., q + 1``."""
    out: List[int] = []
    for i, d in enumerate(w):
        out.extend(range(d, i, -1))
    return out


# ---------------------------------------------------------------------------
# F-refinement on chains of simplices


def rank_word(x: Chain) -> RankWord:
    return tuple(len(s) - 1 for s in x)


def _check_chain(x: Sequence[Simplex]) -> Chain:
    x = tuple(tuple(s) for s in x)
    if not x:
        raise SubdivisionError("empty chain")
    for a, b in zip(x, x[1:]):
        if not (len(a) < len(b) and set(a) < set(b)):
            raise SubdivisionError(f"not a strict chain of simplices: {x}")
    return x


@dataclass(frozen=True)
class FlagSet:
    """Chains below ``base`` that all share the rank word ``word``."""

    base: Chain
    chains: FrozenSet[Chain]
    word: RankWord

    @classmethod
    def start(cls, x: Sequence[Simplex]) -> "FlagSet":
        x = _check_chain(x)
        return cls(x, frozenset([x]), rank_word(x))


def refine_step(fs: FlagSet, r: int) -> FlagSet:
    """Replace the rank-``r`` component of every chain by its admissible faces."""
    try:
        k = fs.word.index(r)
    except ValueError:
        raise SubdivisionError(f"rank {r} does not occur in {fs.word}") from None
    new_word = lower(fs.word, k)
    out = set()
    for c in fs.chains:
        s = c[k]
        prev = set(c[k - 1]) if k else set()
        for i, v in enumerate(s):
            if v in prev:
                continue
            out.add(c[:k] + (s[:i] + s[i + 1:],) + c[k + 1:])
    return FlagSet(fs.base, frozenset(out), new_word)


def run_schedule(x: Sequence[Simplex], ranks: Iterable[int]) -> FlagSet:
    fs = FlagSet.start(x)
    for r in ranks:
        fs = refine_step(fs, r)
    return fs


def schedule_outcomes(x: Sequence[Simplex]) -> Set[FrozenSet[Chain]]:
    """Results of every valid schedule for ``x``, explored as a memoized DAG.

    Each state is (current chains, rank word); distinct schedules that meet
    in a state share the rest of the search, so this covers all of them
    without enumerating the sequences one by one.
    """
    memo: Dict[Tuple[FrozenSet[Chain], RankWord], FrozenSet[FrozenSet[Chain]]] = {}

    def outcomes(fs: FlagSet) -> FrozenSet[FrozenSet[Chain]]:
        key = (fs.chains, fs.word)
        got = memo.get(key)
        if got is None:
            if schedule_length(fs.word) == 0:
                got = frozenset([fs.chains])
            else:
                acc = set()
                for k in range(len(fs.word)):
                    if can_lower(fs.word, k):
                        acc |= outcomes(refine_step(fs, fs.word[k]))
                got = frozenset(acc)
            memo[key] = got
        return got

    return set(outcomes(FlagSet.start(x)))


def initial_elements(x: Sequence[Simplex]) -> Set[Chain]:
    """All flags (dimensions 0..n) componentwise below the chain ``x``."""
    fs = FlagSet.start(x)
    for r in default_schedule(fs.word):
        fs = refine_step(fs, r)
    return set(fs.chains)


def flag_oracle(x: Sequence[Simplex]) -> Set[Chain]:
    """Direct enumeration of flags ``xi_0 < ... < xi_n`` with ``xi_i`` inside ``x[i]``."""
    x = _check_chain(x)
    options = [list(combinations(s, i + 1)) for i, s in enumerate(x)]
    out = set()
    for pick in product(*options):
        if all(set(a) < set(b) for a, b in zip(pick, pick[1:])):
            out.add(tuple(pick))
    return out


# ---------------------------------------------------------------------------
# the hypergraph construction on marked posets


class _FaceMembership:
    """Membership in the construction for a marked face poset.

    A chain is accepted iff every chain componentwise below it (same length)
    ends in a marked simplex.  ``tops(x)`` is the set of possible last
    components of such chains, built prefix by prefix and memoized.
    """

    def __init__(self, marked: FrozenSet[Simplex]):
        self.marked = marked
        self._tops: Dict[Chain, FrozenSet[Simplex]] = {}

    def tops(self, x: Chain) -> FrozenSet[Simplex]:
        got = self._tops.get(x)
        if got is not None:
            return got
        last = x[-1]
        if len(x) == 1:
            out = frozenset(t for k in range(1, len(last) + 1) for t in combinations(last, k))
        else:
            lower = self.tops(x[:-1])
            out = set()
            for k in range(len(x), len(last) + 1):
                for t in combinations(last, k):
                    if _has_proper_face_in(t, lower):
                        out.add(t)
            out = frozenset(out)
        self._tops[x] = out
        return out

    def __call__(self, x: Chain) -> bool:
        if x[-1] not in self.marked:
            return False
        return all(t in self.marked for t in self.tops(x))

    def flag_criterion(self, x: Chain) -> bool:
        """The weaker test that only looks at flags below ``x``."""
        return x[-1] in self.marked and all(f[-1] in self.marked for f in initial_elements(x))


def _has_proper_face_in(t: Simplex, faces_: FrozenSet[Simplex]) -> bool:
    return any(f in faces_ for k in range(1, len(t)) for f in combinations(t, k))


def chains_below(p, c: Chain) -> Set[Chain]:
    """All chains of the same length componentwise below ``c`` (``c`` included)."""
    seen = {c}
    stack = [c]
    while stack:
        x = stack.pop()
        for y in chain_lower_covers(p, x):
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return seen


def membership(mp: MarkedGradedPoset, c: Sequence) -> bool:
    """Whether the chain ``c`` is an edge of the hypergraph built on ``mp``.

    True iff every chain componentwise below ``c``, ``c`` included, has a
    marked top.
    """
    c = tuple(c)
    p = mp.poset
    if not is_chain(p, c):
        raise PosetError(f"{c!r} is not a chain of the poset")
    if c[-1] not in mp.marked:
        return False
    if p.is_face_poset:
        return _FaceMembership(mp.marked)(c)
    return all(d[-1] in mp.marked for d in chains_below(p, c))


def flag_criterion(mp: MarkedGradedPoset, c: Sequence) -> bool:
    """Marked top, and every initial chain below ``c`` has a marked top.

    Necessary for membership but not sufficient: a chain can pass while one
    of the chains between it and its flags has an unmarked top.
    """
    c = tuple(c)
    p = mp.poset
    if not is_chain(p, c):
        raise PosetError(f"{c!r} is not a chain of the poset")
    if c[-1] not in mp.marked:
        return False
    below = initial_elements(c) if p.is_face_poset else initial_chains_below(p, c)
    return all(f[-1] in mp.marked for f in below)


def hypergraph_from_marked_poset(mp: MarkedGradedPoset, nmax: Optional[int] = None) -> Set[Chain]:
    """All accepted chains with at most ``nmax + 1`` elements (default: no bound)."""
    p = mp.poset
    longest = p.height()
    top = longest if nmax is None else min(nmax + 1, longest)
    out = set()
    if p.is_face_poset:
        test = _FaceMembership(mp.marked)
        for length in range(1, top + 1):
            for c in _chains_ending(p, p.sorted(mp.marked), length):
                if test(c):
                    out.add(c)
    else:
        for length in range(1, top + 1):
            for c in _chains_ending(p, p.sorted(mp.marked), length):
                if all(d[-1] in mp.marked for d in chains_below(p, c)):
                    out.add(c)
    return out


def hypergraph_from_marked_poset_inductive(mp: MarkedGradedPoset, nmax: Optional[int] = None) -> Set[Chain]:
    """Same set via the inductive closure: a marked-top chain is accepted if it
    is initial, or if every chain it covers is accepted.  Exponential; test oracle.
    """
    p = mp.poset
    longest = p.height()
    top = longest if nmax is None else min(nmax + 1, longest)
    memo: Dict[Chain, bool] = {}

    def accepted(c: Chain) -> bool:
        if c in memo:
            return memo[c]
        if c[-1] not in mp.marked:
            res = False
        else:
            low = chain_lower_covers(p, c)
            res = all(accepted(d) for d in low)
        memo[c] = res
        return res

    out = set()
    for length in range(1, top + 1):
        for c in _chains_ending(p, p.elements, length):
            if accepted(c):
                out.add(c)
    return out


# ---------------------------------------------------------------------------
# subdivision of hypergraphs


def simplex_table(k: SimplicialComplex, base: VertexTable) -> Tuple[VertexTable, List[Simplex], Dict[Simplex, int]]:
    """Intern the simplices of ``k`` as new vertices in (dimension, lex) order."""
    simplices = sorted(k.edges, key=simplex_key)
    labels = ["[" + ",".join(base[v] for v in s) + "]" for s in simplices]
    return VertexTable(labels), simplices, {s: i for i, s in enumerate(simplices)}


@dataclass
class SubdivisionResult:
    """A subdivided hypergraph plus where each new vertex came from."""

    hypergraph: Hypergraph
    provenance: List[Simplex]
    source: Hypergraph
    ambient: Optional[SimplicialComplex] = None
    previous: Optional["SubdivisionResult"] = None
    index: Dict[Simplex, int] = field(default_factory=dict, repr=False)

    @property
    def depth(self) -> int:
        """Number of results chained through ``previous``."""
        return 0 if self.previous is None else 1 + self.previous.depth

    def chain(self, edge: Simplex) -> Chain:
        """An edge as the chain of source simplices it stands for."""
        return tuple(self.provenance[i] for i in edge)

    def chains(self) -> Set[Chain]:
        return {self.chain(e) for e in self.hypergraph.edges}

    def chains_of_dim(self, n: int) -> Set[Chain]:
        return {self.chain(e) for e in self.hypergraph.of_dim(n)}

    def encode(self, c: Sequence[Simplex]) -> Simplex:
        return tuple(self.index[tuple(s)] for s in c)

    def to_dict(self) -> dict:
        d = self.hypergraph.to_dict()
        d["provenance"] = [list(s) for s in self.provenance]
        return d

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), separators=(", ", ": ")) + "\n"


def subdivide(h: Hypergraph, ambient: Optional[SimplicialComplex] = None,
              cap: Optional[int] = None, _iteration: int = 1) -> SubdivisionResult:
    """Subdivide ``h``; ``ambient`` (a complex containing ``h``) defaults to its closure."""
    k = simplicial_closure(h) if ambient is None else ambient
    if not h.edges <= k.edges or k.vertices != h.vertices:
        raise SubdivisionError("ambient complex must contain the hypergraph over the same vertices")
    table, simplices, index = simplex_table(k, h.vertices)
    test = _FaceMembership(h.edges)
    edges = []
    count = 0
    # chains ending at a marked top only involve faces of that top
    for top in h.sorted_edges():
        for c in _chains_in_simplex(top):
            if test(c):
                edges.append(tuple(index[s] for s in c))
                count += 1
                if cap is not None and count > cap:
                    raise SubdivisionCapExceeded(_iteration, count, cap)
    return SubdivisionResult(Hypergraph(table, edges), simplices, h, k, index=index)


def _chains_in_simplex(top: Simplex) -> Iterator[Chain]:
    """All strict chains of nonempty faces of ``top`` that end at ``top``."""
    def rec(s: Simplex) -> Iterator[Chain]:
        yield (s,)
        for k in range(1, len(s)):
            for f in combinations(s, k):
                for c in rec(f):
                    yield c + (s,)

    return rec(top)


def classical_subdivision(k: SimplicialComplex) -> Set[Chain]:
    """Barycentric subdivision of a complex as the order complex of its face poset."""
    from .poset import face_poset, order_complex

    return set(order_complex(face_poset(k)))


def subdivide_morphism(m: VertexMap, source: Optional[SubdivisionResult] = None,
                       target: Optional[SubdivisionResult] = None) -> VertexMap:
    """The induced map on subdivisions, ``sigma -> m(sigma)`` on interned simplices."""
    if not m.is_morphism():
        bad = m.first_violation()
        raise MorphismError(f"not a hypergraph morphism: edge {list(bad)} maps to {list(m(bad))}")
    if source is None:
        source = subdivide(m.source)
    if target is None:
        target = subdivide(m.target)
    mapping = []
    for s in source.provenance:
        im = m(s)
        if im not in target.index:
            raise MorphismError(f"image {list(im)} of {list(s)} is not a simplex of the target closure")
        mapping.append(target.index[im])
    return VertexMap(source.hypergraph, target.hypergraph, mapping)


def iterate_subdivision(h: Hypergraph, k: int, cap: int = 10**6) -> SubdivisionResult:
    """Apply ``subdivide`` ``k`` times, keeping the chain of results."""
    if k < 0:
        raise SubdivisionError("iteration count must be >= 0")
    if cap <= 0:
        raise SubdivisionError("edge cap must be positive")
    res = SubdivisionResult(h, [(v,) for v in range(len(h.vertices))], h,
                            index={(v,): v for v in range(len(h.vertices))})
    for i in range(1, k + 1):
        nxt = subdivide(res.hypergraph, cap=cap, _iteration=i)
        nxt.previous = res
        res = nxt
    return res
