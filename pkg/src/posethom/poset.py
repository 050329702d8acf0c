"""Finite posets stored as Hasse diagrams.

Element ids are strings. Internally every element gets its position in the
element list as an index, and each down-set / up-set is kept as a Python int
bitmask, which makes comparability tests and subposet extraction cheap.
"""

from __future__ import annotations

from dataclasses import dataclass
from collections.abc import Iterable, Mapping
from typing import NamedTuple

from .errors import PreconditionError, ValidationError


def _bits(mask: int):
    """Indices of the set bits of ``mask``, ascending."""
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class Poset:
    """A finite poset given by elements and cover pairs ``(x, y)`` for x < y.

    Redundant pairs (implied by transitivity) are dropped; cycles, duplicate
    ids and unknown ids raise :class:`ValidationError`.
    """

    def __init__(self, elements: Iterable, covers: Iterable = ()):
        elements = tuple(str(e) for e in elements)
        index = {}
        for i, e in enumerate(elements):
            if e in index:
                raise ValidationError(f"duplicate element id {e!r}")
            index[e] = i
        n = len(elements)
        succ = [0] * n
        for pair in covers:
            x, y = (str(v) for v in pair)
            for v in (x, y):
                if v not in index:
                    raise ValidationError(f"cover references unknown element {v!r}")
            if x == y:
                raise ValidationError(f"cycle: self-cover on {x!r}")
            succ[index[x]] |= 1 << index[y]
        order = _topological(succ)
        up = [0] * n  # strictly above
        for i in reversed(order):
            m = 0
            for j in _bits(succ[i]):
                m |= (1 << j) | up[j]
            up[i] = m
        down = [0] * n  # strictly below
        for i in range(n):
            for j in _bits(up[i]):
                down[j] |= 1 << i
        self.elements = elements
        self.index = index
        self._up = up
        self._down = down
        self._upper = []
        self._lower = [0] * n
        for i in range(n):
            higher = 0
            for j in _bits(up[i]):
                higher |= up[j]
            c = up[i] & ~higher
            self._upper.append(c)
            for j in _bits(c):
                self._lower[j] |= 1 << i
        self.covers = frozenset((elements[i], elements[j])
                                for i in range(n) for j in _bits(self._upper[i]))
        self._topo = tuple(order)

    # -- basics ------------------------------------------------------------

    def __len__(self):
        return len(self.elements)

    def __iter__(self):
        return iter(self.elements)

    def __contains__(self, x):
        return x in self.index

    def __eq__(self, other):
        return (isinstance(other, Poset) and self.elements == other.elements
                and self.covers == other.covers)

    def __hash__(self):
        return hash((self.elements, self.covers))

    def __repr__(self):
        return f"Poset({len(self)} elements, {len(self.covers)} covers)"

    def idx(self, x) -> int:
        try:
            return self.index[x]
        except KeyError:
            raise ValidationError(f"unknown element {x!r}") from None

    def _ids(self, mask):
        return [self.elements[i] for i in _bits(mask)]

    def mask(self, subset) -> int:
        m = 0
        for x in subset:
            m |= 1 << self.idx(x)
        return m

    def sorted(self, subset):
        """``subset`` listed in element order."""
        return self._ids(self.mask(subset))

    def leq(self, x, y) -> bool:
        i, j = self.idx(x), self.idx(y)
        return i == j or bool(self._up[i] >> j & 1)

    def less(self, x, y) -> bool:
        return bool(self._up[self.idx(x)] >> self.idx(y) & 1)

    def comparable(self, x, y) -> bool:
        return self.leq(x, y) or self.leq(y, x)

    def upper_covers(self, x):
        return self._ids(self._upper[self.idx(x)])

    def lower_covers(self, x):
        return self._ids(self._lower[self.idx(x)])

    def down_set(self, x, strict=False):
        """``U_x`` (or ``Û_x`` when strict), in element order."""
        i = self.idx(x)
        return self._ids(self._down[i] | (0 if strict else 1 << i))

    def up_set(self, x, strict=False):
        """``F_x`` (or ``F̂_x`` when strict), in element order."""
        i = self.idx(x)
        return self._ids(self._up[i] | (0 if strict else 1 << i))

    def ideal(self, subset):
        """Smallest down-set containing ``subset``."""
        m = 0
        for x in subset:
            i = self.idx(x)
            m |= self._down[i] | 1 << i
        return self._ids(m)

    def is_down_set(self, subset) -> bool:
        m = self.mask(subset)
        return all(self._down[i] & ~m == 0 for i in _bits(m))

    def maxima(self, subset=None):
        m = self.mask(self.elements if subset is None else subset)
        return [self.elements[i] for i in _bits(m) if not self._up[i] & m]

    def minima(self, subset=None):
        m = self.mask(self.elements if subset is None else subset)
        return [self.elements[i] for i in _bits(m) if not self._down[i] & m]

    def maximum(self, subset=None):
        """The greatest element of ``subset`` (or of the poset), else ``None``."""
        mx = self.maxima(subset)
        if len(mx) != 1:
            return None
        m = self.mask(self.elements if subset is None else subset)
        i = self.index[mx[0]]
        return mx[0] if m & ~(self._down[i] | 1 << i) == 0 else None

    def minimum(self, subset=None):
        mn = self.minima(subset)
        if len(mn) != 1:
            return None
        m = self.mask(self.elements if subset is None else subset)
        i = self.index[mn[0]]
        return mn[0] if m & ~(self._up[i] | 1 << i) == 0 else None

    def subposet(self, subset) -> "Poset":
        """Induced suborder on ``subset``; element order is inherited."""
        m = self.mask(subset)
        keep = list(_bits(m))
        pairs = []
        for i in keep:
            above = self._up[i] & m
            higher = 0
            for j in _bits(above):
                higher |= self._up[j]
            for j in _bits(above & ~higher):
                pairs.append((self.elements[i], self.elements[j]))
        return Poset([self.elements[i] for i in keep], pairs)

    def without(self, subset) -> "Poset":
        m = self.mask(subset)
        return self.subposet(self._ids(((1 << len(self)) - 1) & ~m))

    @property
    def height(self) -> int:
        """Length (number of steps) of the longest chain; -1 when empty."""
        if not self.elements:
            return -1
        h = [0] * len(self)
        for i in reversed(self._topo):
            h[i] = max((h[j] + 1 for j in _bits(self._upper[i])), default=0)
        return max(h)

    def chains(self, n: int):
        """All ``n``-chains as ascending id tuples, lexicographic in element order."""
        return [tuple(self.elements[i] for i in c) for c in self.index_chains(n)]

    def index_chains(self, n: int):
        out = []
        if n < 0:
            return out
        up = self._up

        def grow(chain, last):
            if len(chain) == n + 1:
                out.append(tuple(chain))
                return
            for j in _bits(up[last]):
                chain.append(j)
                grow(chain, j)
                chain.pop()

        for i in range(len(self)):
            grow([i], i)
        return out

    def all_index_chains(self):
        """Every chain, grouped by degree: ``result[n]`` lists the n-chains."""
        by_deg = []
        up = self._up

        def grow(chain, last):
            k = len(chain) - 1
            while len(by_deg) <= k:
                by_deg.append([])
            by_deg[k].append(tuple(chain))
            for j in _bits(up[last]):
                chain.append(j)
                grow(chain, j)
                chain.pop()

        for i in range(len(self)):
            grow([i], i)
        return by_deg

    def to_json(self):
        return {"elements": list(self.elements),
                "covers": sorted([list(c) for c in self.covers],
                                 key=lambda c: (self.index[c[0]], self.index[c[1]]))}


def _topological(succ):
    n = len(succ)
    indeg = [0] * n
    for i in range(n):
        for j in _bits(succ[i]):
            indeg[j] += 1
    stack = [i for i in range(n) if indeg[i] == 0]
    order = []
    while stack:
        i = stack.pop()
        order.append(i)
        for j in _bits(succ[i]):
            indeg[j] -= 1
            if indeg[j] == 0:
                stack.append(j)
    if len(order) != n:
        raise ValidationError("cycle detected in cover relation")
    return order


def build_poset(elements, covers=()) -> Poset:
    return Poset(elements, covers)


def point(name="*") -> Poset:
    return Poset([name])


def chain_poset(n: int, prefix="") -> Poset:
    """Total order on ``n`` elements named ``prefix0 < prefix1 < ...``."""
    names = [f"{prefix}{i}" for i in range(n)]
    return Poset(names, zip(names, names[1:]))


class ConeSets(NamedTuple):
    U: frozenset
    U_hat: frozenset
    F: frozenset
    F_hat: frozenset
    C: frozenset
    C_hat: frozenset


def cone_sets(X: Poset, x) -> ConeSets:
    U = frozenset(X.down_set(x))
    F = frozenset(X.up_set(x))
    C = U | F
    return ConeSets(U, U - {x}, F, F - {x}, C, C - {x})


def chains(X: Poset, n: int):
    return X.chains(n)


def is_antichain(X: Poset, S) -> bool:
    m = X.mask(S)
    return all(not X._up[i] & m for i in _bits(m))


def opposite(X: Poset) -> Poset:
    return Poset(X.elements, [(y, x) for x, y in X.covers])


def beat_points(X: Poset):
    """``(up, down)`` lists: up iff one upper cover, down iff one lower cover."""
    up = [x for x in X.elements if len(X.upper_covers(x)) == 1]
    down = [x for x in X.elements if len(X.lower_covers(x)) == 1]
    return up, down


def core(X: Poset, log=None) -> Poset:
    """Remove beat points one at a time until none remain.

    Each step removes the first up beat point in element order, or if there
    is none the first down beat point. Removed ids are appended to ``log``.
    """
    while True:
        up, down = beat_points(X)
        victim = up[0] if up else down[0] if down else None
        if victim is None:
            return X
        if log is not None:
            log.append((victim, "up" if up else "down"))
        X = X.without([victim])


# ---------------------------------------------------------------------------
# boolean lattices
# ---------------------------------------------------------------------------

def bitstrings(n: int):
    """All length-``n`` bit strings ordered by rank, then lexicographically."""
    out = [format(i, f"0{n}b") if n else "" for i in range(2 ** n)]
    out.sort(key=lambda s: (s.count("1"), s))
    return out


def rank(x: str) -> int:
    return x.count("1")


def boolean_lattice(n: int) -> Poset:
    """Subsets of ``{1..n}`` as bit strings; character ``j`` is coordinate ``j+1``."""
    if n < 0:
        raise ValidationError("boolean lattice rank must be non-negative")
    elems = bitstrings(n)
    covers = [(s, s[:j] + "1" + s[j + 1:]) for s in elems
              for j in range(n) if s[j] == "0"]
    return Poset(elems, covers)


def boolean_rank(L: Poset) -> int:
    """Rank of ``L`` when it is a bit-string boolean lattice, else raise."""
    if not L.elements:
        raise PreconditionError("empty poset is not a boolean lattice")
    n = len(L.elements[0])
    if len(L) != 2 ** n or any(len(e) != n or set(e) - {"0", "1"}
                               for e in L.elements):
        raise PreconditionError("poset is not a bit-string boolean lattice")
    expected = {(s, s[:j] + "1" + s[j + 1:]) for s in L.elements
                for j in range(n) if s[j] == "0"}
    if set(L.covers) != expected:
        raise PreconditionError("poset covers are not those of a boolean lattice")
    return n


# ---------------------------------------------------------------------------
# maps, cylinders, homotopy colimits
# ---------------------------------------------------------------------------

class MonotoneMap:
    def __init__(self, source: Poset, target: Poset, assignment: Mapping):
        self.source = source
        self.target = target
        self.assignment = {str(k): str(v) for k, v in assignment.items()}
        for x in source.elements:
            if x not in self.assignment:
                raise ValidationError(f"map is undefined on {x!r}")
            if self.assignment[x] not in target:
                raise ValidationError(
                    f"map sends {x!r} to unknown element {self.assignment[x]!r}")
        for x, y in source.covers:
            if not target.leq(self.assignment[x], self.assignment[y]):
                raise ValidationError(f"map is not order preserving on {x!r} < {y!r}")

    def __call__(self, x):
        return self.assignment[x]

    def preimage(self, subset):
        s = set(subset)
        return [x for x in self.source.elements if self.assignment[x] in s]

    def fiber_ideal(self, y):
        """``f⁻¹(U_y)``, in source element order."""
        return self.preimage(self.target.down_set(y))

    @classmethod
    def identity(cls, X: Poset):
        return cls(X, X, {x: x for x in X.elements})


@dataclass(frozen=True)
class Cylinder:
    """Mapping cylinder with the tags used for the two copies."""

    poset: Poset
    source: Poset
    target: Poset
    embed_source: dict
    embed_target: dict

    @property
    def source_ids(self):
        return [self.embed_source[p] for p in self.source.elements]

    @property
    def target_ids(self):
        return [self.embed_target[q] for q in self.target.elements]


def mapping_cylinder(f: MonotoneMap) -> Cylinder:
    """``P ⊔ Q`` with ``p <= q`` iff ``f(p) <= q``; ids tagged ``P:`` / ``Q:``."""
    P, Q = f.source, f.target
    ep = {p: f"P:{p}" for p in P.elements}
    eq = {q: f"Q:{q}" for q in Q.elements}
    pairs = [(ep[x], ep[y]) for x, y in P.covers]
    pairs += [(eq[x], eq[y]) for x, y in Q.covers]
    pairs += [(ep[p], eq[f(p)]) for p in P.elements]
    return Cylinder(Poset(list(ep.values()) + list(eq.values()), pairs),
                    P, Q, ep, eq)


def hocolim_id(p, x):
    return f"({p},{x})"


def hocolim(P: Poset, D: Mapping, arrows: Mapping):
    """Grothendieck construction of a diagram of posets over ``P``.

    ``D[p]`` is a Poset and ``arrows[(p, q)]`` a dict or MonotoneMap for each
    cover ``p < q``. Returns ``(total poset, projection MonotoneMap)``.
    """
    maps = {}
    for p, q in P.covers:
        a = arrows.get((p, q))
        if a is None:
            raise ValidationError(f"diagram has no arrow for {p!r} < {q!r}")
        if not isinstance(a, MonotoneMap):
            a = MonotoneMap(D[p], D[q], a)
        maps[(p, q)] = a.assignment
    # composite along every cover path must agree
    comp = {}
    for q in sorted(P.elements, key=lambda e: len(P.down_set(e))):
        comp[(q, q)] = {x: x for x in D[q].elements}
        for p in P.down_set(q, strict=True):
            candidate = None
            for r in P.lower_covers(q):
                if not P.leq(p, r):
                    continue
                via = {x: maps[(r, q)][comp[(p, r)][x]] for x in D[p].elements}
                if candidate is None:
                    candidate = via
                elif candidate != via:
                    raise ValidationError(
                        f"diagram is not functorial between {p!r} and {q!r}")
            comp[(p, q)] = candidate
    elems, pairs, proj = [], [], {}
    for p in P.elements:
        for x in D[p].elements:
            e = hocolim_id(p, x)
            elems.append(e)
            proj[e] = p
        for x, y in D[p].covers:
            pairs.append((hocolim_id(p, x), hocolim_id(p, y)))
    for (p, q), a in maps.items():
        for x in D[p].elements:
            pairs.append((hocolim_id(p, x), hocolim_id(q, a[x])))
    total = Poset(elems, pairs)
    return total, MonotoneMap(total, P, proj)
