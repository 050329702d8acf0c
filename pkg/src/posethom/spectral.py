"""E² pages of order-preserving maps, covers and homotopy colimits."""

from __future__ import annotations

from collections.abc import Mapping
from dataclasses import dataclass, field

from .abelian import FpAbGroup, direct_sum
from .errors import PreconditionError, ValidationError
from .functor import (CoeffFunctor, constant_functor, glue_functor,
                      pushforward_all)
from .homology import (ChainMap, LongExactSequence, chain_complex, homology,
                       relative_chain_complex, triple_les)
from .poset import MonotoneMap, Poset, hocolim

_TRIVIAL = FpAbGroup.trivial()


@dataclass
class SpectralPage:
    """``entries[(p, q)] = H_p(base; H_q)``; missing entries are zero."""

    entries: dict
    map: MonotoneMap = None
    functor: CoeffFunctor = None
    rows: dict = field(default_factory=dict)  # q -> pushed-forward functor

    def __getitem__(self, pq) -> FpAbGroup:
        return self.entries.get(pq, _TRIVIAL)

    @property
    def nonzero(self):
        return {pq: G for pq, G in sorted(self.entries.items()) if not G.is_trivial}

    @property
    def max_total(self) -> int:
        return max((p + q for p, q in self.entries), default=-1)

    def to_json(self):
        return [{"p": p, "q": q, "group": str(G)} for (p, q), G in self.nonzero.items()]

    def table(self) -> str:
        if not self.entries:
            return "(empty page)"
        P = max(p for p, _ in self.entries)
        Q = max(q for _, q in self.entries)
        cells = [[str(self[(p, q)]) for p in range(P + 1)] for q in range(Q, -1, -1)]
        width = max(len(c) for row in cells for c in row)
        lines = [f"q={Q - i:<3}| " + "  ".join(c.rjust(width) for c in row)
                 for i, row in enumerate(cells)]
        lines.append("     +" + "-" * (len(lines[0]) - 6))
        lines.append("  p:   " + "  ".join(str(p).rjust(width) for p in range(P + 1)))
        return "\n".join(lines)


def e2_page(f: MonotoneMap, F: CoeffFunctor) -> SpectralPage:
    X, Y = f.source, f.target
    qmax = max((X.subposet(f.fiber_ideal(y)).height for y in Y.elements), default=-1)
    qs = range(max(qmax, 0) + 1)
    rows = pushforward_all(f, F, qs)
    entries = {}
    for q in qs:
        for p, G in enumerate(homology(Y, rows[q])):
            entries[(p, q)] = G
    return SpectralPage(entries, f, F, rows)


@dataclass
class DegreeReport:
    n: int
    entries: dict  # (p, q) -> group, nonzero entries with p + q = n
    determined: bool
    group: FpAbGroup | None
    reason: str = ""


def collapse_report(page: SpectralPage):
    """Per total degree: is ``H_n`` forced by the E² page alone?

    Every higher differential touching the antidiagonal must have a zero end,
    and every nonzero entry above the lowest filtration must be free so that
    the extensions split.
    """
    nz = page.nonzero
    reports = []
    for n in range(page.max_total + 1):
        diag = {pq: G for pq, G in nz.items() if sum(pq) == n}
        reason = ""
        for (p, q) in diag:
            for (p2, q2) in nz:
                r_out = p - p2
                if r_out >= 2 and q2 - q == r_out - 1:
                    reason = f"possible differential ({p},{q}) -> ({p2},{q2})"
                r_in = p2 - p
                if r_in >= 2 and q - q2 == r_in - 1:
                    reason = f"possible differential ({p2},{q2}) -> ({p},{q})"
        if not reason and diag:
            lowest = min(p for p, _ in diag)
            for (p, q), G in diag.items():
                if p != lowest and not G.is_free:
                    reason = f"extension by non-free ({p},{q}) may not split"
        ok = not reason
        group = direct_sum(diag.values()) if ok else None
        reports.append(DegreeReport(n, diag, ok, group, reason))
    return reports


def cover_to_map(X: Poset, cover) -> MonotoneMap:
    """Send ``x`` to the least cover member containing it.

    ``cover`` is a mapping ``name -> subset`` or a list (named V1, V2, ...).
    """
    if not isinstance(cover, Mapping):
        cover = {f"V{i + 1}": S for i, S in enumerate(cover)}
    sets = {}
    for name, S in cover.items():
        S = frozenset(S)
        if not X.is_down_set(S):
            raise PreconditionError(f"cover member {name} is not open (not a down-set)")
        if S in sets.values():
            raise ValidationError(f"cover member {name} repeats another member")
        sets[name] = S
    names = list(sets)
    pairs = [(a, b) for a in names for b in names if a != b and sets[a] < sets[b]]
    Y = Poset(names, pairs)
    assign = {}
    for x in X.elements:
        holders = [v for v in names if x in sets[v]]
        if not holders:
            raise PreconditionError(f"{x!r} is not covered")
        least = [v for v in holders if all(sets[v] <= sets[w] for w in holders)]
        if not least:
            raise PreconditionError(f"no least cover member contains {x!r}")
        assign[x] = least[0]
    f = MonotoneMap(X, Y, assign)
    for v in names:
        if set(f.fiber_ideal(v)) != sets[v]:
            raise PreconditionError(f"cover is not basis-like at member {v}")
    return f


def hocolim_e2(P: Poset, D: Mapping, arrows: Mapping) -> SpectralPage:
    total, proj = hocolim(P, D, arrows)
    return e2_page(proj, constant_functor(total))


# ---------------------------------------------------------------------------
# mapping cylinders
# ---------------------------------------------------------------------------

@dataclass
class CylinderComparison:
    degrees: list
    cylinder: list  # H_n(P ∪_f Q)
    target: list  # H_n(Q)
    isomorphic: list  # inclusion-induced map is an isomorphism

    @property
    def holds(self) -> bool:
        return all(self.isomorphic)


def cylinder_compare(f: MonotoneMap, F_P: CoeffFunctor, F_Q: CoeffFunctor, phi,
                     glued=None) -> CylinderComparison:
    cyl, G = glued or glue_functor(f, phi, F_P, F_Q)
    M = cyl.poset
    Mq = M.subposet(cyl.target_ids)
    C = chain_complex(M, G)
    Cq = chain_complex(Mq, G.restrict(Mq.elements))
    inc = ChainMap.inclusion(Cq, C)
    degrees = list(range(max(M.height, 0) + 1))
    iso = [inc.induced(n).is_isomorphism() for n in degrees]
    return CylinderComparison(degrees, [C.homology_group(n) for n in degrees],
                              [Cq.homology_group(n) for n in degrees], iso)


def cylinder_les(f: MonotoneMap, F_P: CoeffFunctor, F_Q: CoeffFunctor, phi,
                 glued=None) -> LongExactSequence:
    """``... -> H_n(Q,Q-1) -> H_n(M,M-1) -> H_{n-1}(P,P-1) -> ...`` for ``M = P ∪_f Q``.

    Built from the triple ``M ⊇ M-{1_Q} ⊇ M-{1_Q,1_P}``; ``extra`` records that
    the inclusions of ``(P, P-1)`` and ``(Q, Q-1)`` are homology isomorphisms.
    """
    P, Q = f.source, f.target
    top_p, top_q = P.maximum(), Q.maximum()
    if top_p is None or top_q is None:
        raise PreconditionError("both posets need a maximum")
    if f.preimage([top_q]) != [top_p]:
        raise PreconditionError("the maximum of Q must have exactly the maximum of P as preimage")
    cyl, G = glued or glue_functor(f, phi, F_P, F_Q)
    M = cyl.poset
    one_p, one_q = cyl.embed_source[top_p], cyl.embed_target[top_q]
    A = [x for x in M.elements if x != one_q]
    B = [x for x in A if x != one_p]
    les = triple_les(M, A, B, G, names=("P,P-1", "Q,Q-1", "M,M-1"))
    # the nodes hold groups of (A,B) and (M,B); check they are the claimed ones
    Mp, Mq = M.subposet(cyl.source_ids), M.subposet(cyl.target_ids)
    Cp = relative_chain_complex(Mp, [x for x in Mp.elements if x != one_p],
                                G.restrict(Mp.elements))
    Cq = relative_chain_complex(Mq, [x for x in Mq.elements if x != one_q],
                                G.restrict(Mq.elements))
    Cab = relative_chain_complex(M.subposet(A), B, G.restrict(A))
    Cmb = relative_chain_complex(M, B, G)
    degrees = range(max(M.height, 0) + 1)
    les.extra["source_identified"] = [
        ChainMap.inclusion(Cp, Cab).induced(n).is_isomorphism() for n in degrees]
    les.extra["target_identified"] = [
        ChainMap.inclusion(Cq, Cmb).induced(n).is_isomorphism() for n in degrees]
    return les
