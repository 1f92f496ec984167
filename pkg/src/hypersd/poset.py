"""Finite marked graded posets, chains and face posets.

A :class:`GradedPoset` keeps its Hasse diagram as primary data and answers
``<=`` from a reachability table built once at construction.  Elements are
arbitrary hashable values; face posets use simplices (sorted vertex tuples)
as elements and set inclusion as the order.

Chains are tuples ``(x0, x1, ..., xn)`` with ``x0 < x1 < ... < xn``.  Two
chains of equal length compare componentwise, which makes the set of chains
itself a poset.  A chain is *initial* in that poset exactly when none of its
components can be swapped for an element it covers while keeping the chain
strict.
"""

from __future__ import annotations

from itertools import combinations, product
from typing import Dict, FrozenSet, Hashable, Iterable, Iterator, List, Mapping, Optional, Sequence, Set, Tuple

from .hypergraph import Hypergraph, SimplicialComplex, VertexMap, faces, simplex_key, simplicial_closure

Chain = Tuple[Hashable, ...]


class PosetError(ValueError):
    pass


class GradedPoset:
    """Finite poset with a rank function compatible with its covers."""

    def __init__(self, elements: Iterable[Hashable], covers: Iterable[Tuple[Hashable, Hashable]],
                 rank: Mapping[Hashable, int], sort_key=None, check_rank: bool = True):
        key = sort_key or (lambda x: (rank[x], repr(x)))
        self.elements: List[Hashable] = sorted(set(elements), key=key)
        self._sort_key = key
        self.rank: Dict[Hashable, int] = {x: rank[x] for x in self.elements}
        self.index = {x: i for i, x in enumerate(self.elements)}
        down: Dict[Hashable, Set[Hashable]] = {x: set() for x in self.elements}
        up: Dict[Hashable, Set[Hashable]] = {x: set() for x in self.elements}
        for lo, hi in covers:
            if lo not in self.index or hi not in self.index:
                raise PosetError(f"cover ({lo!r}, {hi!r}) uses an unknown element")
            if self.rank[hi] <= self.rank[lo] or (check_rank and self.rank[hi] != self.rank[lo] + 1):
                raise PosetError(f"cover {lo!r} < {hi!r} does not raise the rank by one")
            down[hi].add(lo)
            up[lo].add(hi)
        self._down = {x: frozenset(s) for x, s in down.items()}
        self._up = {x: frozenset(s) for x, s in up.items()}
        # strict down-sets; ranks strictly increase along covers so rank order is topological
        below: Dict[Hashable, FrozenSet[Hashable]] = {}
        for x in sorted(self.elements, key=lambda x: self.rank[x]):
            acc = set(self._down[x])
            for y in self._down[x]:
                acc |= below[y]
            below[x] = frozenset(acc)
        self._below = below
        self.is_face_poset = False

    def __len__(self):
        return len(self.elements)

    def __contains__(self, x):
        return x in self.index

    def __iter__(self):
        return iter(self.elements)

    def leq(self, x, y) -> bool:
        return x == y or x in self._below[y]

    def lt(self, x, y) -> bool:
        return x in self._below[y]

    def lower_covers(self, x) -> FrozenSet[Hashable]:
        return self._down[x]

    def upper_covers(self, x) -> FrozenSet[Hashable]:
        return self._up[x]

    def below(self, x) -> FrozenSet[Hashable]:
        """Strict down-set of ``x``."""
        return self._below[x]

    def covers(self) -> List[Tuple[Hashable, Hashable]]:
        return [(lo, hi) for hi in self.elements for lo in self.sorted(self._down[hi])]

    def sorted(self, xs: Iterable[Hashable]) -> List[Hashable]:
        return sorted(xs, key=self._sort_key)

    def minimal(self) -> List[Hashable]:
        return [x for x in self.elements if not self._down[x]]

    def height(self) -> int:
        """Number of elements in a longest chain."""
        return max(self.rank.values()) - min(self.rank.values()) + 1 if self.elements else 0

    def to_dot(self, marked: Iterable[Hashable] = (), name: str = "poset") -> str:
        marked = set(marked)
        lines = [f"digraph {name} {{", "  rankdir=BT;"]
        for x in self.elements:
            style = ", style=filled, fillcolor=lightgrey" if x in marked else ""
            lines.append(f'  n{self.index[x]} [label="{_dot_label(x)}"{style}];')
        for lo, hi in self.covers():
            lines.append(f"  n{self.index[lo]} -> n{self.index[hi]};")
        lines.append("}")
        return "\n".join(lines) + "\n"


def _dot_label(x) -> str:
    if isinstance(x, tuple):
        return "{" + ",".join(str(v) for v in x) + "}"
    return str(x).replace('"', "'")


class MarkedGradedPoset:
    """A graded poset together with a marked subset."""

    def __init__(self, poset: GradedPoset, marked: Iterable[Hashable]):
        marked = frozenset(marked)
        missing = [x for x in marked if x not in poset]
        if missing:
            raise PosetError(f"marked elements not in poset: {missing[:3]!r}")
        self.poset = poset
        self.marked = marked

    def __repr__(self):
        return f"MarkedGradedPoset({len(self.poset)} elements, {len(self.marked)} marked)"


# ---------------------------------------------------------------------------
# the covered-by / strictly-below / initial operators


def covered_by(p: GradedPoset, ys: Iterable[Hashable]) -> Set[Hashable]:
    out: Set[Hashable] = set()
    for y in ys:
        out |= p.lower_covers(y)
    return out


def strictly_below(p: GradedPoset, ys: Iterable[Hashable]) -> Set[Hashable]:
    out: Set[Hashable] = set()
    for y in ys:
        out |= p.below(y)
    return out


def initial_below(p: GradedPoset, ys: Iterable[Hashable]) -> Set[Hashable]:
    """Initial elements of the strict down-set of ``ys``."""
    return {x for x in strictly_below(p, ys) if not p.lower_covers(x)}


# ---------------------------------------------------------------------------
# face posets and order complexes


def face_poset(k: SimplicialComplex) -> GradedPoset:
    """Simplices of ``k`` ordered by inclusion, ranked by dimension."""
    if not isinstance(k, SimplicialComplex):
        k = SimplicialComplex(k.vertices, k.edges)
    covers = [(f, s) for s in k.edges for f in faces(s)]
    p = GradedPoset(k.edges, covers, {s: len(s) - 1 for s in k.edges}, sort_key=simplex_key)
    p.is_face_poset = True
    return p


def inclusion_poset(h: Hypergraph) -> GradedPoset:
    """Edges of ``h`` ordered by inclusion, ranked by dimension.

    Covers may skip dimensions, so the rank is only a strict monotone here.
    """
    es = sorted(h.edges, key=simplex_key)
    below = {e: [f for f in es if len(f) < len(e) and set(f) < set(e)] for e in es}
    covers = []
    for e, lows in below.items():
        for f in lows:
            if not any(set(f) < set(g) for g in lows):
                covers.append((f, e))
    return GradedPoset(es, covers, {e: len(e) - 1 for e in es}, sort_key=simplex_key, check_rank=False)


def marked_face_poset(h: Hypergraph, ambient: Optional[SimplicialComplex] = None) -> MarkedGradedPoset:
    """``(face poset of the closure, edges of h)``; ``ambient`` may enlarge the closure."""
    k = simplicial_closure(h) if ambient is None else ambient
    if not h.edges <= k.edges:
        raise PosetError("ambient complex does not contain the hypergraph")
    return MarkedGradedPoset(face_poset(k), h.edges)


def order_complex(p: GradedPoset) -> List[Chain]:
    """All nonempty strict chains of ``p``, shortest first."""
    out: List[Chain] = []
    for c in _chains_ending(p, p.elements):
        out.append(c)
    return sorted(out, key=lambda c: (len(c), [p.index[x] for x in c]))


def _chains_ending(p: GradedPoset, tops: Iterable[Hashable], length: Optional[int] = None) -> Iterator[Chain]:
    """Chains whose top lies in ``tops`` (optionally of a fixed length)."""
    memo: Dict[Tuple[Hashable, Optional[int]], List[Chain]] = {}

    def ending(x, n):
        key = (x, n)
        if key in memo:
            return memo[key]
        res: List[Chain] = []
        if n is None:
            res.append((x,))
            for y in p.below(x):
                res.extend(c + (x,) for c in ending(y, None))
        elif n == 1:
            res.append((x,))
        else:
            for y in p.below(x):
                res.extend(c + (x,) for c in ending(y, n - 1))
        memo[key] = res
        return res

    for t in tops:
        yield from ending(t, length)


def chains_with_marked_top(mp: MarkedGradedPoset, n: int) -> Set[Chain]:
    """All strict chains with ``n + 1`` elements whose top is marked."""
    if n < 0:
        raise PosetError("chain index n must be >= 0")
    return set(_chains_ending(mp.poset, mp.poset.sorted(mp.marked), n + 1))


def is_chain(p: GradedPoset, c: Sequence[Hashable]) -> bool:
    return bool(c) and all(x in p for x in c) and all(p.lt(a, b) for a, b in zip(c, c[1:]))


def chain_leq(p: GradedPoset, a: Chain, b: Chain) -> bool:
    return len(a) == len(b) and all(p.leq(x, y) for x, y in zip(a, b))


def chain_lower_covers(p: GradedPoset, c: Chain) -> List[Chain]:
    """Chains covered by ``c`` in the componentwise order.

    Each replaces one component by an element it covers, keeping the chain
    strict.
    """
    out = []
    for i, x in enumerate(c):
        prev = c[i - 1] if i else None
        for z in p.sorted(p.lower_covers(x)):
            if prev is None or p.lt(prev, z):
                out.append(c[:i] + (z,) + c[i + 1:])
    return out


def is_initial_chain(p: GradedPoset, c: Chain) -> bool:
    if p.is_face_poset:
        return all(len(x) == i + 1 for i, x in enumerate(c))
    return not chain_lower_covers(p, c)


def is_S_successive(mp: MarkedGradedPoset, c: Sequence[Hashable]) -> bool:
    """Whether ``c`` is an initial chain whose top is marked.

    In a face poset the initial chains are exactly the flags (dimensions
    0, 1, ..., n), so that case is a rank test.
    """
    c = tuple(c)
    if not is_chain(mp.poset, c):
        raise PosetError(f"{c!r} is not a chain of the poset")
    return c[-1] in mp.marked and is_initial_chain(mp.poset, c)


def initial_chains_below(p: GradedPoset, c: Chain) -> Set[Chain]:
    """Initial chains ``<= c`` (``{c}`` itself if ``c`` is initial).

    Generic closure over chain covers; the face-poset fast path lives in
    :mod:`hypersd.subdivision`.
    """
    seen = {c}
    stack = [c]
    out = set()
    while stack:
        x = stack.pop()
        low = chain_lower_covers(p, x)
        if not low:
            out.add(x)
        for y in low:
            if y not in seen:
                seen.add(y)
                stack.append(y)
    return out


# ---------------------------------------------------------------------------
# morphisms


class PosetMap:
    """Element map between marked graded posets."""

    def __init__(self, source: MarkedGradedPoset, target: MarkedGradedPoset, mapping: Mapping[Hashable, Hashable]):
        self.source = source
        self.target = target
        self.mapping = dict(mapping)
        for x in source.poset:
            if x not in self.mapping or self.mapping[x] not in target.poset:
                raise PosetError(f"map undefined or out of range at {x!r}")

    def __call__(self, x):
        return self.mapping[x]

    def violations(self) -> List[str]:
        """Reasons this is not a morphism of marked graded posets (empty if it is)."""
        src, tgt = self.source.poset, self.target.poset
        out = []
        for x in src:
            for y in src.upper_covers(x):
                fx, fy = self(x), self(y)
                if not tgt.leq(fx, fy):
                    out.append(f"order not preserved at {x!r} < {y!r}")
                if tgt.rank[fy] > tgt.rank[fx] + 1:
                    out.append(f"rank jumps by more than one along {x!r} < {y!r}")
        for s in self.source.marked:
            if self(s) not in self.target.marked:
                out.append(f"marked {s!r} maps to unmarked {self(s)!r}")
        return out

    def is_morphism(self) -> bool:
        return not self.violations()


def is_compatible(m: PosetMap) -> bool:
    """Every element covered by ``f(x)`` is the image of something covered by ``x``."""
    src, tgt = m.source.poset, m.target.poset
    for x in src:
        images = {m(z) for z in src.lower_covers(x)}
        if not tgt.lower_covers(m(x)) <= images:
            return False
    return True


def induced_poset_map(vm: VertexMap, source: Optional[MarkedGradedPoset] = None,
                      target: Optional[MarkedGradedPoset] = None) -> PosetMap:
    """The marked face-poset map ``sigma -> phi(sigma)`` induced by a hypergraph morphism."""
    if source is None:
        source = marked_face_poset(vm.source)
    if target is None:
        target = marked_face_poset(vm.target)
    return PosetMap(source, target, {s: vm(s) for s in source.poset})


# ---------------------------------------------------------------------------
# brute-force oracles (exponential; for tests on small inputs)


def all_chains_of_length(p: GradedPoset, length: int) -> List[Chain]:
    return [c for c in combinations(p.elements, length) if is_chain(p, c)] if length <= len(p) else []


def is_S_successive_bruteforce(mp: MarkedGradedPoset, c: Chain) -> bool:
    """Definition check: marked top and minimal among all same-length chains."""
    p = mp.poset
    if c[-1] not in mp.marked:
        return False
    for d in all_chains_of_length(p, len(c)):
        if d != c and chain_leq(p, d, c):
            return False
    return True
