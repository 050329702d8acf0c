"""Signed cube complexes on boolean lattices and quasicellular complexes."""

from __future__ import annotations

from itertools import permutations

import numpy as np

from .abelian import FpAbGroup, block_diag, shrink, zeros
from .errors import PreconditionError, ValidationError
from .functor import CoeffFunctor, constant_functor
from .homology import ChainComplex, chain_complex
from .poset import Poset, bitstrings, boolean_rank, is_antichain, rank


def flipped_coordinate(x: str, y: str) -> int:
    diff = [j for j, (a, b) in enumerate(zip(x, y)) if a != b]
    if len(x) != len(y) or len(diff) != 1 or x[diff[0]] != "0":
        raise ValidationError(f"{x!r} < {y!r} is not a cube edge")
    return diff[0]


def edge_sign(x: str, y: str) -> int:
    """``-1`` iff ``x`` has an odd number of ones before the flipped coordinate."""
    m = flipped_coordinate(x, y)
    return -1 if x[:m].count("1") % 2 else 1


def cube_complex(L: Poset, F: CoeffFunctor) -> ChainComplex:
    """``E_n = ⊕_{rk x = r-n} F(x)`` with ``d = Σ ε(x<y) F(x<y)`` over covers."""
    r = boolean_rank(L)
    levels = [[] for _ in range(r + 1)]
    for x in L.elements:
        levels[r - rank(x)].append(x)
    labels = levels
    groups = [[F(x) for x in lv] for lv in levels]
    C = ChainComplex(labels, groups, {})
    obj = any(m.dtype == object for m in F.edge_maps.values())
    for n in range(1, r + 1):
        D = np.zeros((C.rank(n - 1), C.rank(n)), dtype=object if obj else np.int64)
        for k, x in enumerate(labels[n]):
            for y in L.upper_covers(x):
                j = C.position[n - 1][y]
                D[C.block(n - 1, j), C.block(n, k)] += edge_sign(x, y) * F.edge_maps[(x, y)]
        C.diffs[n] = shrink(D) if obj else D
    return C


def subset_id(n: int, A) -> str:
    """Bit string of ``A ⊆ {1..n}``."""
    A = set(A)
    if not A <= set(range(1, n + 1)):
        raise ValidationError(f"{sorted(A)} is not a subset of 1..{n}")
    return "".join("1" if j + 1 in A else "0" for j in range(n))


def nonempty_subsets(n: int) -> Poset:
    """Nonempty subsets of ``{1..n}`` as bit strings."""
    elems = bitstrings(n)[1:]
    covers = [(s, s[:j] + "1" + s[j + 1:]) for s in elems
              for j in range(n) if s[j] == "0"]
    return Poset(elems, covers)


def _sign(perm) -> int:
    sgn, seen = 1, [False] * len(perm)
    for i in range(len(perm)):
        if seen[i]:
            continue
        j, length = i, 0
        while not seen[j]:
            seen[j] = True
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sgn = -sgn
    return sgn


def generator_gA(n: int, A) -> dict:
    """``Σ_σ sgn(σ)`` times the chain of initial segments of ``A`` listed by σ.

    Returns ``{chain: coefficient}`` with chains as ascending tuples of bit
    strings (subsets of ``{1..n}``).
    """
    items = sorted(set(A))
    if not items:
        raise ValidationError("generator needs a nonempty subset")
    subset_id(n, items)
    out = {}
    for perm in permutations(range(len(items))):
        chain = tuple(subset_id(n, [items[perm[i]] for i in range(j + 1)])
                      for j in range(len(items)))
        out[chain] = _sign(perm)
    return out


def drop_top(combo: dict, n: int, A, a) -> dict:
    """Keep chains through ``A - {a}`` and delete their top element ``A``."""
    top = subset_id(n, A)
    face = subset_id(n, set(A) - {a})
    out = {}
    for chain, c in combo.items():
        if chain[-1] != top:
            raise ValidationError("chain does not end at the given subset")
        if face in chain:
            out[chain[:-1]] = out.get(chain[:-1], 0) + c
    return {k: v for k, v in out.items() if v}


def combo_vector(C: ChainComplex, degree: int, combo: dict):
    """Column vector of a chain combination in a complex with rank-1 summands."""
    v = np.zeros((C.rank(degree), 1), dtype=np.int64)
    for chain, c in combo.items():
        v[C.offsets[degree][C.position[degree][chain]], 0] += c
    return v


# ---------------------------------------------------------------------------
# quasicellular complexes
# ---------------------------------------------------------------------------

def augmented_complex(X: Poset) -> ChainComplex:
    """Integral chains of ``X`` with the empty chain in the bottom slot.

    Slot ``k`` holds degree ``k - 1``, so slot homology is reduced homology.
    """
    C = chain_complex(X, constant_functor(X))
    Z = FpAbGroup.free(1)
    labels = [[()]] + C.labels
    groups = [[Z]] + C.groups
    diffs = {n + 1: m for n, m in C.diffs.items()}
    if C.top >= 0:
        diffs[1] = np.ones((1, C.rank(0)), dtype=np.int64)
    return ChainComplex(labels, groups, diffs)


def quasicellular_complex(P: Poset, rho, F: CoeffFunctor) -> ChainComplex:
    """Complex with ``C_n = ⊕_{ρ(x)=n} H̃_{n-1}(F̂_x) ⊗ F(x)``.

    ``rho`` (dict or callable) must be order reversing on ``P``, with
    antichain level sets and free reduced homology of each ``F̂_x`` in the
    single degree ``ρ(x)-1``.
    """
    rho_of = rho if callable(rho) else rho.__getitem__
    val = {x: int(rho_of(x)) for x in P.elements}
    if any(v < 0 for v in val.values()):
        raise PreconditionError("grading takes negative values")
    for x, y in P.covers:
        if val[y] > val[x]:
            raise PreconditionError(f"grading is not order reversing on {x} < {y}")
    top = max(val.values(), default=-1)
    levels = [[x for x in P.elements if val[x] == n] for n in range(top + 1)]
    for lv in levels:
        if not is_antichain(P, lv):
            raise PreconditionError("a level set of the grading is not an antichain")
    basis = {}
    for x in P.elements:
        above = P.subposet(P.up_set(x, strict=True))
        aug = augmented_complex(above)
        n = val[x]
        for slot in range(aug.top + 1):
            H = aug.homology_group(slot)
            if slot != n and not H.is_trivial:
                raise PreconditionError(
                    f"reduced homology above {x!r} is not concentrated in degree {n - 1}")
        H = aug.homology_group(n)
        if not H.is_free:
            raise PreconditionError(f"reduced homology above {x!r} has torsion")
        basis[x] = (aug, H)
    labels = levels
    groups = []
    for lv in levels:
        row = []
        for x in lv:
            beta = basis[x][1].ngens
            Fx = F(x)
            row.append(FpAbGroup(beta * Fx.ngens,
                                 block_diag([Fx.relations] * beta) if beta
                                 else zeros(0, 0)))
        groups.append(row)
    C = ChainComplex(labels, groups, {})
    for n in range(1, top + 1):
        D = np.zeros((C.rank(n - 1), C.rank(n)), dtype=object)
        for k, x in enumerate(labels[n]):
            aug_x, Hx = basis[x]
            for j, y in enumerate(labels[n - 1]):
                if not P.less(x, y):
                    continue
                aug_y, Hy = basis[y]
                E = _restricted_classes(aug_x, Hx, aug_y, Hy, n, y)
                D[C.block(n - 1, j), C.block(n, k)] = np.kron(
                    E.astype(object), F.matrix(x, y).astype(object))
        C.diffs[n] = shrink(D)
    return C


def _restricted_classes(aug_x, Hx, aug_y, Hy, n, y):
    """Basis classes of ``x`` pushed to ``y``: chains starting at ``y`` lose ``y``."""
    reps = Hx.reps
    W = zeros(aug_y.rank(n - 1), reps.shape[1])
    for k, chain in enumerate(aug_x.labels[n]):
        if chain[0] != y:
            continue
        target = aug_y.position[n - 1][chain[1:]]
        W = W.astype(reps.dtype)
        W[aug_y.offsets[n - 1][target]] += reps[aug_x.offsets[n][k]]
    return Hy.coordinates(shrink(W))
