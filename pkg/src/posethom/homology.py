"""Chain complexes of posets with functor coefficients and their homology."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .abelian import (AbHom, FpAbGroup, HomologyGroup, direct_sum,
                      fp_homology_at, hstack, identity, induced_map, mm,
                      shrink, zeros)
from .errors import PreconditionError, ValidationError
from .functor import CoeffFunctor
from .poset import Poset, is_antichain

_TRIVIAL = FpAbGroup.trivial()


class ChainComplex:
    """Graded direct sums of labelled summands with differentials.

    ``labels[n]`` and ``groups[n]`` list the degree-``n`` summands;
    ``diffs[n]`` is the matrix of ``C_n -> C_{n-1}`` in generator coordinates.
    """

    def __init__(self, labels, groups, diffs):
        self.labels = [list(ls) for ls in labels]
        self.groups = [list(gs) for gs in groups]
        self.position = [{lab: k for k, lab in enumerate(ls)} for ls in self.labels]
        self.offsets = []
        for gs in self.groups:
            off, acc = [], 0
            for g in gs:
                off.append(acc)
                acc += g.ngens
            self.offsets.append(off + [acc])
        self.totals = [direct_sum(gs) for gs in self.groups]
        self.diffs = dict(diffs)
        self._homology = {}

    @property
    def top(self) -> int:
        return len(self.labels) - 1

    def rank(self, n) -> int:
        return self.offsets[n][-1] if 0 <= n <= self.top else 0

    def group(self, n) -> FpAbGroup:
        return self.totals[n] if 0 <= n <= self.top else _TRIVIAL

    def d(self, n):
        """Matrix of ``d_n : C_n -> C_{n-1}``."""
        m = self.diffs.get(n)
        return m if m is not None else zeros(self.rank(n - 1), self.rank(n))

    def block(self, n, k):
        """Row/column slice of the ``k``-th degree-``n`` summand."""
        return slice(self.offsets[n][k], self.offsets[n][k + 1])

    def d_squared_zero(self) -> bool:
        return all(self.group(n - 2).is_zero(mm(self.d(n - 1), self.d(n)))
                   for n in range(2, self.top + 1))

    def homology_group(self, n) -> HomologyGroup:
        if n not in self._homology:
            din = AbHom(self.group(n + 1), self.group(n), self.d(n + 1))
            dout = AbHom(self.group(n), self.group(n - 1), self.d(n))
            self._homology[n] = fp_homology_at(din, dout)
        return self._homology[n]

    def homology(self, n_range=None):
        if n_range is None:
            n_range = range(max(self.top, 0) + 1)
        return [self.homology_group(n) for n in n_range]


def _poset_complex(X: Poset, F: CoeffFunctor, exclude=None) -> ChainComplex:
    if F.base != X:
        F = F.restrict(X.elements)
    skip = X.mask(exclude) if exclude else 0
    full = (1 << len(X)) - 1
    keep_mask = full & ~skip
    by_deg = X.all_index_chains()
    labels, groups = [], []
    E = X.elements
    for chs in by_deg:
        if skip:
            chs = [c for c in chs if any(keep_mask >> i & 1 for i in c)]
        labels.append([tuple(E[i] for i in c) for c in chs])
        groups.append([F.values[E[c[0]]] for c in chs])
    while labels and not labels[-1]:
        labels.pop()
        groups.pop()
    C = ChainComplex(labels, groups, {})
    obj = any(m.dtype == object for m in F._rel.values())
    for n in range(1, C.top + 1):
        D = np.zeros((C.rank(n - 1), C.rank(n)), dtype=object if obj else np.int64)
        pos = C.position[n - 1]
        offs = C.offsets[n - 1]
        for k, c in enumerate(C.labels[n]):
            g = C.groups[n][k].ngens
            if not g:
                continue
            col = C.offsets[n][k]
            j = pos.get(c[1:])
            if j is not None:
                gy = C.groups[n - 1][j].ngens
                D[offs[j]:offs[j] + gy, col:col + g] += F.matrix(c[0], c[1])
            for i in range(1, n + 1):
                j = pos.get(c[:i] + c[i + 1:])
                if j is not None:
                    sign = -1 if i % 2 else 1
                    for t in range(g):
                        D[offs[j] + t, col + t] += sign
        C.diffs[n] = shrink(D) if obj else D
    return C


def chain_complex(X: Poset, F: CoeffFunctor) -> ChainComplex:
    return _poset_complex(X, F)


def relative_chain_complex(X: Poset, A, F: CoeffFunctor) -> ChainComplex:
    """Quotient ``C(X;F)/C(A;F|A)``: summands are chains not inside ``A``."""
    A = list(A)
    for a in A:
        if a not in X:
            raise ValidationError(f"subset element {a!r} is not in the poset")
    return _poset_complex(X, F, A)


def _range(X, n_range):
    return range(max(X.height, 0) + 1) if n_range is None else n_range


def homology(X: Poset, F: CoeffFunctor, n_range=None):
    return chain_complex(X, F).homology(_range(X, n_range))


def relative_homology(X: Poset, A, F: CoeffFunctor, n_range=None):
    return relative_chain_complex(X, A, F).homology(_range(X, n_range))


# ---------------------------------------------------------------------------
# chain maps
# ---------------------------------------------------------------------------

class ChainMap:
    """Per-degree matrices between two complexes."""

    def __init__(self, source: ChainComplex, target: ChainComplex, mats):
        self.source, self.target = source, target
        self.mats = dict(mats)

    def matrix(self, n):
        m = self.mats.get(n)
        return m if m is not None else zeros(self.target.rank(n), self.source.rank(n))

    @classmethod
    def from_components(cls, Cs: ChainComplex, Ct: ChainComplex, block):
        """Place ``block(label)`` wherever a source label also labels a target summand."""
        mats = {}
        for n in range(min(Cs.top, Ct.top) + 1):
            M = None
            pos = Ct.position[n]
            for k, lab in enumerate(Cs.labels[n]):
                j = pos.get(lab)
                if j is None:
                    continue
                b = block(lab)
                if M is None:
                    M = np.zeros((Ct.rank(n), Cs.rank(n)),
                                 dtype=object if b.dtype == object else np.int64)
                elif b.dtype == object and M.dtype != object:
                    M = M.astype(object)
                M[Ct.block(n, j), Cs.block(n, k)] = b
            if M is not None:
                mats[n] = shrink(M)
        return cls(Cs, Ct, mats)

    @classmethod
    def inclusion(cls, Cs: ChainComplex, Ct: ChainComplex):
        """Identity on shared labels, zero on the rest (inclusions and quotients)."""
        def block(lab):
            n = len(lab) - 1
            return identity(Cs.groups[n][Cs.position[n][lab]].ngens)
        return cls.from_components(Cs, Ct, block)

    def commutes(self) -> bool:
        Cs, Ct = self.source, self.target
        for n in range(1, max(Cs.top, Ct.top) + 1):
            lhs = mm(Ct.d(n), self.matrix(n))
            rhs = mm(self.matrix(n - 1), Cs.d(n))
            diff = shrink(lhs.astype(object) - rhs.astype(object))
            if not Ct.group(n - 1).is_zero(diff):
                return False
        return True

    def compose(self, inner: "ChainMap") -> "ChainMap":
        """``self o inner``."""
        top = max(inner.source.top, self.target.top)
        return ChainMap(inner.source, self.target,
                        {n: mm(self.matrix(n), inner.matrix(n))
                         for n in range(top + 1)})

    def induced(self, n, Hs=None, Ht=None) -> AbHom:
        Hs = Hs or self.source.homology_group(n)
        Ht = Ht or self.target.homology_group(n)
        return induced_map(self.matrix(n), Hs, Ht)


def induced_on_homology(chain_map: ChainMap, source=None, target=None, n=0) -> AbHom:
    if source is not None and source is not chain_map.source:
        raise ValidationError("chain map source does not match")
    if target is not None and target is not chain_map.target:
        raise ValidationError("chain map target does not match")
    if not chain_map.commutes():
        raise ValidationError("chain map does not commute with differentials")
    return chain_map.induced(n)


# ---------------------------------------------------------------------------
# long exact sequences
# ---------------------------------------------------------------------------

@dataclass
class LongExactSequence:
    """Nodes ``(label, group)`` with ``maps[i] : nodes[i] -> nodes[i+1]``.

    The sequence is read as starting and ending with zero groups.
    """

    nodes: list
    maps: list
    extra: dict = field(default_factory=dict)

    def failures(self):
        """Indices of nodes where image and kernel differ."""
        bad = []
        for i, (_, G) in enumerate(self.nodes):
            into = self.maps[i - 1] if i > 0 else AbHom.zero(_TRIVIAL, G)
            out = self.maps[i] if i < len(self.maps) else AbHom.zero(G, _TRIVIAL)
            if not out.compose(into).is_zero():
                bad.append(i)
                continue
            if not fp_homology_at(into, out).is_trivial:
                bad.append(i)
        return bad

    @property
    def is_exact(self) -> bool:
        return not self.failures()

    def __str__(self):
        return " -> ".join(f"{lab}={G}" for lab, G in self.nodes)


def _transfer(Cs, Ct, n):
    return ChainMap.inclusion(Cs, Ct).matrix(n)


def triple_les(X: Poset, A, B, F: CoeffFunctor, names=("A,B", "X,B", "X,A")):
    """Sequence of the triple ``B ⊆ A ⊆ X``:

    ``... -> H_n(A,B) -> H_n(X,B) -> H_n(X,A) -> H_{n-1}(A,B) -> ...``
    """
    A, B = list(A), list(B)
    if not set(B) <= set(A) <= set(X.elements):
        raise ValidationError("triple must satisfy B ⊆ A ⊆ X")
    XA = X.subposet(A)
    C_ab = relative_chain_complex(XA, B, F.restrict(A))
    C_xb = relative_chain_complex(X, B, F)
    C_xa = relative_chain_complex(X, A, F)
    inc = ChainMap.inclusion(C_ab, C_xb)
    proj = ChainMap.inclusion(C_xb, C_xa)
    nodes, maps = [], []
    top = max(X.height, 0)
    for n in range(top, -1, -1):
        Hab, Hxb, Hxa = (C.homology_group(n) for C in (C_ab, C_xb, C_xa))
        nodes += [(f"H_{n}({names[0]})", Hab), (f"H_{n}({names[1]})", Hxb),
                  (f"H_{n}({names[2]})", Hxa)]
        if len(nodes) > 3:
            # connecting map from the previous degree into H_n(A,B)
            maps.append(_connecting(C_xa, C_xb, C_ab, n + 1, nodes[-4][1], Hab))
        maps.append(inc.induced(n, Hab, Hxb))
        maps.append(proj.induced(n, Hxb, Hxa))
    return LongExactSequence(nodes, maps)


def _connecting(C_xa, C_xb, C_ab, n, Hs, Ht) -> AbHom:
    """``H_n(X,A) -> H_{n-1}(A,B)``: lift, take the boundary, keep A-chains."""
    lift = mm(_transfer(C_xa, C_xb, n), Hs.reps)
    bd = mm(C_xb.d(n), lift)
    restricted = mm(_transfer(C_xb, C_ab, n - 1), bd)
    return AbHom(Hs, Ht, Ht.coordinates(restricted))


def pair_les(X: Poset, A, F: CoeffFunctor) -> LongExactSequence:
    """``... -> H_n(A) -> H_n(X) -> H_n(X,A) -> H_{n-1}(A) -> ...``"""
    return triple_les(X, A, [], F, names=("A", "X", "X,A"))


# ---------------------------------------------------------------------------
# local shortcuts, decompositions and reductions
# ---------------------------------------------------------------------------

def local_shortcut(X: Poset, x, F: CoeffFunctor, n_range=None):
    """``H_n(U_x, Û_x; F)`` from the map ``α : H_0(Û_x) -> F(x)``.

    Degree 0 is coker α, degree 1 is ker α, degree ``n >= 2`` is
    ``H_{n-1}(Û_x)``.
    """
    below = X.down_set(x, strict=True)
    Ub = X.subposet(below)
    C = chain_complex(Ub, F.restrict(below))
    Fx = F(x)
    if C.top >= 0:
        M = hstack([F.matrix(c[0], x) for c in C.labels[0]], Fx.ngens)
    else:
        M = zeros(Fx.ngens, 0)
    H0 = C.homology_group(0)
    alpha = AbHom(H0, Fx, mm(M, H0.reps))
    n_range = range(max(X.subposet(X.down_set(x)).height, 0) + 1) \
        if n_range is None else n_range
    out = []
    for n in n_range:
        if n == 0:
            out.append(alpha.cokernel())
        elif n == 1:
            out.append(alpha.kernel())
        else:
            out.append(C.homology_group(n - 1))
    return out


@dataclass
class AntichainDecomposition:
    summands: dict  # x -> list of groups H_n(C_x, Ĉ_x)
    total: list  # H_n(X, A)
    isomorphic: list  # per degree: glued map is an isomorphism


def antichain_decompose(X: Poset, A, F: CoeffFunctor, n_range=None):
    rest = [e for e in X.elements if e not in set(A)]
    if not is_antichain(X, rest):
        raise PreconditionError("complement of the subspace is not an antichain")
    n_range = _range(X, n_range)
    C = relative_chain_complex(X, A, F)
    pieces = {}
    for x in rest:
        Cx = X.up_set(x) + X.down_set(x, strict=True)
        Px = X.subposet(Cx)
        pieces[x] = relative_chain_complex(Px, [e for e in Px.elements if e != x],
                                           F.restrict(Cx))
    summands = {x: Cx.homology(n_range) for x, Cx in pieces.items()}
    total, iso = [], []
    for n in n_range:
        Ht = C.homology_group(n)
        total.append(Ht)
        blocks = [ChainMap.inclusion(Cx, C).induced(n).matrix for Cx in pieces.values()]
        src = direct_sum([Cx.homology_group(n) for Cx in pieces.values()])
        glued = AbHom(src, Ht, hstack(blocks, Ht.ngens))
        iso.append(glued.is_isomorphism())
    return AntichainDecomposition(summands, total, iso)


def reduce(X: Poset, F: CoeffFunctor):
    """Strip beat points that provably do not change the homology.

    Any up beat point may go; a down beat point ``a`` goes when ``F(b <= a)``
    is an isomorphism for the unique lower cover ``b``. Returns the reduced
    poset, the restricted functor and the list of ``(id, kind)`` removals.
    """
    log = []
    while True:
        victim = None
        for a in X.elements:
            if len(X.upper_covers(a)) == 1:
                victim = (a, "up")
                break
        if victim is None:
            for a in X.elements:
                lower = X.lower_covers(a)
                if len(lower) == 1 and F.relation_map(lower[0], a).is_isomorphism():
                    victim = (a, "down")
                    break
        if victim is None:
            return X, F, log
        log.append(victim)
        X = X.without([victim[0]])
        F = F.restrict(X.elements)
