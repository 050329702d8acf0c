"""Functors from a poset to finitely presented abelian groups."""

from __future__ import annotations

from collections.abc import Mapping

import numpy as np

from .abelian import AbHom, FpAbGroup, as_matrix, identity, mm
from .errors import ValidationError
from .poset import Cylinder, MonotoneMap, Poset, mapping_cylinder


def _same(h: np.ndarray, k: np.ndarray, target: FpAbGroup) -> bool:
    if np.array_equal(h, k):
        return True
    return target.is_zero(as_matrix(h.astype(object) - k.astype(object)))


class CoeffFunctor:
    """Values on elements, homomorphisms on covers.

    Composites along longer relations are computed once at construction; with
    ``check=True`` (the default) every cover map must be well defined and all
    cover paths between two elements must give the same composite.
    """

    def __init__(self, base: Poset, values: Mapping, maps: Mapping = None,
                 check: bool = True):
        self.base = base
        self.values = {}
        for x in base.elements:
            if x not in values:
                raise ValidationError(f"functor has no value at {x!r}")
            g = values[x]
            self.values[x] = g if isinstance(g, FpAbGroup) else FpAbGroup(*g)
        maps = dict(maps or {})
        self.edge_maps = {}
        for x, y in base.covers:
            m = maps.pop((x, y), None)
            if m is None:
                raise ValidationError(f"functor has no map for cover {x!r} < {y!r}")
            if isinstance(m, AbHom):
                m = m.matrix
            gx, gy = self.values[x], self.values[y]
            try:
                m = as_matrix(m, gy.ngens, gx.ngens)
            except ValidationError as e:
                raise ValidationError(f"map {x!r} < {y!r}: {e}") from None
            if check and not AbHom(gx, gy, m).is_valid():
                raise ValidationError(f"map {x!r} < {y!r} is not well defined")
            self.edge_maps[(x, y)] = m
        if maps:
            x, y = next(iter(maps))
            raise ValidationError(f"map given for non-cover pair {x!r} < {y!r}")
        self._rel, bad = self._compose(check)
        if bad:
            raise ValidationError(
                "functor is not functorial: cover paths disagree for "
                + ", ".join(f"{x}<{y}" for x, y in bad[:5]))

    def _compose(self, check):
        X = self.base
        rel, bad = {}, []
        for y in sorted(X.elements, key=lambda e: len(X.down_set(e))):
            rel[(y, y)] = identity(self.values[y].ngens)
            for x in X.down_set(y, strict=True):
                found = None
                for r in X.lower_covers(y):
                    if not X.leq(x, r):
                        continue
                    via = mm(self.edge_maps[(r, y)], rel[(x, r)])
                    if found is None:
                        found = via
                        if not check:
                            break
                    elif not _same(found, via, self.values[y]):
                        bad.append((x, y))
                        break
                rel[(x, y)] = found
        return rel, bad

    @classmethod
    def _trusted(cls, base, values, edge_maps, rel):
        F = cls.__new__(cls)
        F.base, F.values, F.edge_maps, F._rel = base, values, edge_maps, rel
        return F

    def __call__(self, x) -> FpAbGroup:
        return self.values[x]

    def matrix(self, x, y):
        """Matrix of ``F(x <= y)``."""
        try:
            return self._rel[(x, y)]
        except KeyError:
            self.base.idx(x), self.base.idx(y)
            raise ValidationError(f"{x!r} is not below {y!r}") from None

    def relation_map(self, x, y) -> AbHom:
        return AbHom(self.values[x], self.values[y], self.matrix(x, y))

    def violations(self):
        """Pairs ``(x, y)`` whose cover paths compose to different maps."""
        bad = [(x, y) for (x, y), m in self.edge_maps.items()
               if not AbHom(self.values[x], self.values[y], m).is_valid()]
        return bad + self._compose(True)[1]

    def restrict(self, subset) -> "CoeffFunctor":
        Y = self.base.subposet(subset)
        vals = {x: self.values[x] for x in Y.elements}
        edges = {c: self._rel[c] for c in Y.covers}
        rel = {(x, y): self._rel[(x, y)] for x in Y.elements for y in Y.elements
               if Y.leq(x, y)}
        return CoeffFunctor._trusted(Y, vals, edges, rel)

    def relabel(self, base: Poset, rename: Mapping) -> "CoeffFunctor":
        """Same functor on an isomorphic copy; ``rename`` maps old ids to new."""
        vals = {rename[x]: g for x, g in self.values.items()}
        rel = {(rename[x], rename[y]): m for (x, y), m in self._rel.items()}
        edges = {c: rel[c] for c in base.covers}
        return CoeffFunctor._trusted(base, vals, edges, rel)

    def to_json(self):
        from .io import functor_to_json
        return functor_to_json(self)


def validate_functor(F: CoeffFunctor):
    """``(ok, violations)`` for a functor built with ``check=False``."""
    bad = F.violations()
    return not bad, bad


def constant_functor(X: Poset, G: FpAbGroup = None) -> CoeffFunctor:
    G = G if G is not None else FpAbGroup.free(1)
    I = identity(G.ngens)
    vals = {x: G for x in X.elements}
    rel = {(x, y): I for x in X.elements for y in X.up_set(x)}
    return CoeffFunctor._trusted(X, vals, {c: I for c in X.covers}, rel)


def restrict(F: CoeffFunctor, subset) -> CoeffFunctor:
    return F.restrict(subset)


def relation_map(F: CoeffFunctor, x, y) -> AbHom:
    return F.relation_map(x, y)


class NatTransform:
    """Components ``T_x : F(x) -> G(x)`` commuting with every cover map."""

    def __init__(self, source: CoeffFunctor, target: CoeffFunctor,
                 components: Mapping, check: bool = True):
        if source.base != target.base:
            raise ValidationError("natural transformation between different bases")
        self.source, self.target = source, target
        self.components = {}
        for x in source.base.elements:
            c = components[x]
            if isinstance(c, AbHom):
                c = c.matrix
            c = as_matrix(c, target(x).ngens, source(x).ngens)
            if check and not AbHom(source(x), target(x), c).is_valid():
                raise ValidationError(f"component at {x!r} is not well defined")
            self.components[x] = c
        if check:
            for x, y in source.base.covers:
                lhs = mm(target.edge_maps[(x, y)], self.components[x])
                rhs = mm(self.components[y], source.edge_maps[(x, y)])
                if not _same(lhs, rhs, target(y)):
                    raise ValidationError(f"naturality fails on {x!r} < {y!r}")

    @classmethod
    def identity(cls, F: CoeffFunctor):
        return cls(F, F, {x: identity(g.ngens) for x, g in F.values.items()},
                   check=False)

    @classmethod
    def zero(cls, F: CoeffFunctor, G: CoeffFunctor):
        return cls(F, G, {x: np.zeros((G(x).ngens, F(x).ngens), dtype=np.int64)
                          for x in F.base.elements}, check=False)


def nat_chain_map(T: NatTransform, subcomplex=None):
    """Chain map ``C(X;F) -> C(X;G)`` (relative to ``subcomplex`` if given)."""
    from .homology import chain_complex, relative_chain_complex, ChainMap
    X = T.source.base
    if subcomplex is None:
        Cs, Ct = chain_complex(X, T.source), chain_complex(X, T.target)
    else:
        Cs = relative_chain_complex(X, subcomplex, T.source)
        Ct = relative_chain_complex(X, subcomplex, T.target)
    return ChainMap.from_components(Cs, Ct, lambda chain: T.components[chain[0]])


def pushforward_hq(f: MonotoneMap, F: CoeffFunctor, q: int) -> CoeffFunctor:
    """``y -> H_q(f⁻¹(U_y); F|)`` with maps induced by inclusion."""
    return pushforward_all(f, F, [q])[q]


def pushforward_all(f: MonotoneMap, F: CoeffFunctor, qs) -> dict:
    """:func:`pushforward_hq` for several ``q`` sharing the fiber complexes."""
    from .homology import chain_complex, ChainMap
    X, Y = f.source, f.target
    cx = {}
    for y in Y.elements:
        Xi = X.subposet(f.fiber_ideal(y))
        cx[y] = chain_complex(Xi, F.restrict(Xi.elements))
    incs = {(y, z): ChainMap.inclusion(cx[y], cx[z]) for y, z in Y.covers}
    out = {}
    for q in qs:
        groups = {y: C.homology_group(q) for y, C in cx.items()}
        maps = {c: inc.induced(q, groups[c[0]], groups[c[1]]).matrix
                for c, inc in incs.items()}
        out[q] = CoeffFunctor(Y, groups, maps, check=False)
    return out


def pullback(f: MonotoneMap, F: CoeffFunctor) -> CoeffFunctor:
    """``F∘f`` on the source of ``f``."""
    P = f.source
    vals = {p: F(f(p)) for p in P.elements}
    rel = {(a, b): F.matrix(f(a), f(b)) for a in P.elements for b in P.elements
           if P.leq(a, b)}
    return CoeffFunctor._trusted(P, vals, {c: rel[c] for c in P.covers}, rel)


def glue_functor(f: MonotoneMap, phi: NatTransform | Mapping,
                 F_P: CoeffFunctor, F_Q: CoeffFunctor, cylinder: Cylinder = None,
                 check: bool = True) -> tuple[Cylinder, CoeffFunctor]:
    """Functor on the mapping cylinder of ``f`` built from ``φ : F_P ⇒ F_Q∘f``.

    ``phi`` may be a mapping ``p -> matrix F_P(p) -> F_Q(f(p))``.
    """
    if isinstance(phi, NatTransform):
        phi = phi.components
    P, Q = f.source, f.target
    comps = {}
    for p in P.elements:
        comps[p] = as_matrix(phi[p], F_Q(f(p)).ngens, F_P(p).ngens)
        if check and not AbHom(F_P(p), F_Q(f(p)), comps[p]).is_valid():
            raise ValidationError(f"component at {p!r} is not well defined")
    if check:
        for a, b in P.covers:
            lhs = mm(F_Q.matrix(f(a), f(b)), comps[a])
            rhs = mm(comps[b], F_P.edge_maps[(a, b)])
            if not _same(lhs, rhs, F_Q(f(b))):
                raise ValidationError(f"gluing map is not natural on {a!r} < {b!r}")
    cyl = cylinder or mapping_cylinder(f)
    ep, eq = cyl.embed_source, cyl.embed_target
    vals = {ep[p]: F_P(p) for p in P.elements}
    vals.update({eq[q]: F_Q(q) for q in Q.elements})
    inv_p = {v: k for k, v in ep.items()}
    inv_q = {v: k for k, v in eq.items()}
    maps = {}
    for x, y in cyl.poset.covers:
        if x in inv_p and y in inv_p:
            maps[(x, y)] = F_P.edge_maps[(inv_p[x], inv_p[y])]
        elif x in inv_q:
            maps[(x, y)] = F_Q.edge_maps[(inv_q[x], inv_q[y])]
        else:
            p, q = inv_p[x], inv_q[y]
            maps[(x, y)] = mm(F_Q.matrix(f(p), q), comps[p])
    return cyl, CoeffFunctor(cyl.poset, vals, maps, check=check)
