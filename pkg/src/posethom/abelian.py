"""Finitely presented abelian groups over exact integer matrices.

A group is ``Z^n / col(R)`` for an ``n x k`` relation matrix ``R``; a
homomorphism is an integer matrix acting on generators. Everything reduces to
Smith normal form (see :mod:`posethom.kernels`).

Matrices are numpy arrays of dtype int64 while entries stay small and dtype
object (Python ints) once they might not; :func:`mm` picks the dtype per
product so callers never see an overflow.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ValidationError
from .kernels import smith_kernel

_SAFE = 1 << 62


# ---------------------------------------------------------------------------
# integer matrix helpers
# ---------------------------------------------------------------------------

def _maxabs(A):
    return int(np.abs(A).max()) if A.size else 0


def shrink(A):
    """Return ``A`` as int64 when every entry fits comfortably, else object."""
    A = np.asarray(A)
    if A.dtype == np.int64:
        return A
    if A.dtype == object:
        if _maxabs(A) < _SAFE:
            return A.astype(np.int64)
        return A
    if A.dtype.kind in "iub":
        return A.astype(np.int64)
    raise TypeError(f"non-integer matrix dtype {A.dtype}")


def as_matrix(entries, rows=None, cols=None):
    """Build an integer matrix from nested lists (ints or decimal strings)."""
    if isinstance(entries, np.ndarray):
        A = entries
    else:
        data = [[int(v) for v in row] for row in entries]
        if rows is None:
            rows = len(data)
        if cols is None:
            cols = len(data[0]) if data else 0
        if rows * cols == 0:
            return np.zeros((rows, cols), dtype=np.int64)
        A = np.empty((rows, cols), dtype=object)
        if len(data) != rows or any(len(r) != cols for r in data):
            raise ValidationError(
                f"matrix entries do not match declared shape {rows}x{cols}")
        for i, row in enumerate(data):
            for j, v in enumerate(row):
                A[i, j] = v
    A = shrink(A)
    if rows is not None and cols is not None and A.shape != (rows, cols):
        if A.size == 0 and rows * cols == 0:
            return np.zeros((rows, cols), dtype=np.int64)
        raise ValidationError(f"expected a {rows}x{cols} matrix, got {A.shape}")
    return A


def zeros(rows, cols):
    return np.zeros((rows, cols), dtype=np.int64)


def identity(n):
    return np.eye(n, dtype=np.int64)


def mm(A, B):
    """Exact integer matrix product."""
    if A.shape[1] != B.shape[0]:
        raise ValueError(f"shape mismatch {A.shape} @ {B.shape}")
    if A.size == 0 or B.size == 0:
        return zeros(A.shape[0], B.shape[1])
    if A.dtype == np.int64 and B.dtype == np.int64:
        if _maxabs(A) * _maxabs(B) * A.shape[1] < _SAFE:
            return A @ B
    return shrink(A.astype(object) @ B.astype(object))


def hstack(mats, rows):
    mats = [m for m in mats if m.shape[1]]
    if not mats:
        return zeros(rows, 0)
    if any(m.dtype == object for m in mats):
        return shrink(np.hstack([m.astype(object) for m in mats]))
    return np.hstack(mats)


def vstack(mats, cols):
    mats = [m for m in mats if m.shape[0]]
    if not mats:
        return zeros(0, cols)
    if any(m.dtype == object for m in mats):
        return shrink(np.vstack([m.astype(object) for m in mats]))
    return np.vstack(mats)


def block_diag(mats):
    rows = sum(m.shape[0] for m in mats)
    cols = sum(m.shape[1] for m in mats)
    obj = any(m.dtype == object for m in mats)
    out = np.zeros((rows, cols), dtype=object if obj else np.int64)
    r = c = 0
    for m in mats:
        out[r:r + m.shape[0], c:c + m.shape[1]] = m
        r += m.shape[0]
        c += m.shape[1]
    return shrink(out) if obj else out


def matrix_to_json(A):
    return [[int(v) if abs(int(v)) < 2 ** 53 else str(int(v)) for v in row]
            for row in A.tolist()]


# ---------------------------------------------------------------------------
# Smith normal form and derived linear algebra
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class SmithForm:
    """``U @ A @ V == S`` with ``U``, ``V`` unimodular and ``S`` diagonal."""

    U: np.ndarray
    S: np.ndarray
    V: np.ndarray
    divisors: tuple
    Uinv: np.ndarray
    Vinv: np.ndarray

    @property
    def rank(self):
        return len(self.divisors)


def smith_normal_form(A, backend=None) -> SmithForm:
    A = shrink(np.asarray(A))
    rank, D, U, Ui, V, Vi = smith_kernel(A, backend=backend)
    divisors = tuple(int(D[i, i]) for i in range(rank))
    return SmithForm(shrink(U), shrink(D), shrink(V), divisors,
                     shrink(Ui), shrink(Vi))


def _smith(A, wu, wv):
    rank, D, U, Ui, V, Vi = smith_kernel(A, wu=wu, wv=wv)
    d = [int(D[i, i]) for i in range(rank)]
    return (rank, d,
            shrink(U) if wu else None, shrink(Ui) if wu else None,
            shrink(V) if wv else None, shrink(Vi) if wv else None)


def kernel_basis(A):
    """Columns form a basis of the integer kernel of ``A``."""
    n = A.shape[1]
    if A.shape[0] == 0 or not A.any():
        return identity(n)
    rank, _, _, _, V, _ = _smith(A, False, True)
    return V[:, rank:]


def solve(A, B):
    """Integer solution ``X`` of ``A @ X == B``, or ``None`` if none exists."""
    m, n = A.shape
    if B.shape[1] == 0:
        return zeros(n, 0)
    rank, d, U, _, V, _ = _smith(A, True, True)
    Y = mm(U, B) if m else zeros(0, B.shape[1])
    if Y[rank:].any():
        return None
    Z = np.zeros((n, B.shape[1]), dtype=object)
    for i in range(rank):
        row = Y[i].astype(object)
        if any(int(v) % d[i] for v in row):
            return None
        Z[i] = row // d[i]
    return mm(V, shrink(Z))


def in_lattice(R, X):
    """True iff every column of ``X`` lies in the column lattice of ``R``."""
    if X.size == 0 or not X.any():
        return True
    if R.shape[1] == 0 or not R.any():
        return False
    return solve(R, X) is not None


# ---------------------------------------------------------------------------
# groups and homomorphisms
# ---------------------------------------------------------------------------

class FpAbGroup:
    """The cokernel ``Z^ngens / col(relations)``."""

    def __init__(self, ngens, relations=None):
        self.ngens = int(ngens)
        if self.ngens < 0:
            raise ValidationError("negative generator count")
        if relations is None:
            relations = zeros(self.ngens, 0)
        relations = as_matrix(relations)
        if relations.size == 0:
            relations = zeros(self.ngens, relations.shape[1] if
                              relations.shape[0] == self.ngens else 0)
        if relations.shape[0] != self.ngens:
            raise ValidationError(
                f"relation matrix has {relations.shape[0]} rows for "
                f"{self.ngens} generators")
        self.relations = relations

    @classmethod
    def free(cls, rank=1):
        return cls(rank)

    @classmethod
    def cyclic(cls, order):
        if order == 0:
            return cls(1)
        return cls(1, [[order]])

    @classmethod
    def trivial(cls):
        return cls(0)

    @classmethod
    def from_invariants(cls, free_rank, torsion=()):
        n = len(torsion) + free_rank
        R = zeros(n, len(torsion))
        for i, d in enumerate(torsion):
            R[i, i] = d
        return cls(n, R)

    @cached_property
    def invariants(self):
        """``(free_rank, torsion)`` with torsion coefficients dividing each other."""
        if self.relations.shape[1] == 0 or not self.relations.any():
            return self.ngens, ()
        rank, d, *_ = _smith(self.relations, False, False)
        return self.ngens - rank, tuple(x for x in d if x > 1)

    @property
    def is_trivial(self):
        free, tors = self.invariants
        return free == 0 and not tors

    @property
    def is_free(self):
        return not self.invariants[1]

    def is_zero(self, X):
        """Columns of ``X`` (generator coordinates) are zero in the group."""
        return in_lattice(self.relations, X)

    def isomorphic(self, other):
        return self.invariants == other.invariants

    def __str__(self):
        return render_group(*self.invariants)

    def __repr__(self):
        return f"FpAbGroup({self})"


def classify(G: FpAbGroup):
    return G.invariants


def render_group(free_rank, torsion):
    parts = []
    if free_rank == 1:
        parts.append("Z")
    elif free_rank > 1:
        parts.append(f"Z^{free_rank}")
    parts.extend(f"Z/{d}" for d in torsion)
    return " (+) ".join(parts) if parts else "0"


_TERM = re.compile(r"^Z(?:\^(\d+)|/(\d+))?$")


def parse_group(text: str) -> FpAbGroup:
    """Inverse of :func:`render_group` (also accepts ``Z/n`` for any n >= 0)."""
    text = text.strip()
    if text == "0":
        return FpAbGroup.trivial()
    gens, rels = 0, []
    for term in text.split("(+)"):
        m = _TERM.match(term.strip().replace(" ", ""))
        if not m:
            raise ValueError(f"cannot parse group term {term!r}")
        if m.group(1):
            gens += int(m.group(1))
        elif m.group(2):
            d = int(m.group(2))
            if d != 0:
                rels.append((gens, d))
            gens += 1
        else:
            gens += 1
    R = zeros(gens, len(rels))
    for k, (i, d) in enumerate(rels):
        R[i, k] = d
    return FpAbGroup(gens, R)


def direct_sum(groups) -> FpAbGroup:
    groups = list(groups)
    if not groups:
        return FpAbGroup.trivial()
    return FpAbGroup(sum(g.ngens for g in groups),
                     block_diag([g.relations for g in groups]))


class AbHom:
    """Homomorphism given by a ``target.ngens x source.ngens`` matrix."""

    def __init__(self, source, target, matrix=None, check=False):
        self.source = source
        self.target = target
        if matrix is None:
            matrix = zeros(target.ngens, source.ngens)
        matrix = as_matrix(matrix, target.ngens, source.ngens)
        self.matrix = matrix
        if check and not self.is_valid():
            raise ValidationError("homomorphism is not well defined on relations")

    @classmethod
    def identity(cls, G):
        return cls(G, G, identity(G.ngens))

    @classmethod
    def zero(cls, G, H):
        return cls(G, H)

    def is_valid(self):
        return self.target.is_zero(mm(self.matrix, self.source.relations))

    def compose(self, inner: "AbHom") -> "AbHom":
        """``self o inner``."""
        return AbHom(inner.source, self.target, mm(self.matrix, inner.matrix))

    def is_zero(self):
        return self.target.is_zero(self.matrix)

    def equals(self, other: "AbHom"):
        return self.target.is_zero(shrink(self.matrix.astype(object)
                                          - other.matrix.astype(object)))

    def cokernel(self) -> FpAbGroup:
        return FpAbGroup(self.target.ngens,
                         hstack([self.target.relations, self.matrix],
                                self.target.ngens))

    def kernel(self) -> "HomologyGroup":
        return fp_homology_at(AbHom.zero(FpAbGroup.trivial(), self.source), self)

    def image(self) -> FpAbGroup:
        """The image, presented as ``source / ker``."""
        K = self.kernel()
        rel = hstack([self.source.relations, K.reps], self.source.ngens)
        return FpAbGroup(self.source.ngens, rel)

    def is_isomorphism(self):
        if not self.cokernel().is_trivial:
            return False
        return self.kernel().is_trivial

    def __repr__(self):
        return f"AbHom({self.source} -> {self.target}, {self.matrix.tolist()})"


def validate_hom(h: AbHom) -> bool:
    return h.is_valid()


def is_isomorphism(h: AbHom) -> bool:
    if not h.is_valid():
        raise ValidationError("is_isomorphism called on an ill-defined hom")
    return h.is_isomorphism()


# ---------------------------------------------------------------------------
# homology of a three-term complex
# ---------------------------------------------------------------------------

class HomologyGroup(FpAbGroup):
    """``ker(d_out) / im(d_in)`` in canonical form.

    Generators are listed torsion first (increasing orders), then free; the
    relation matrix is diagonal. ``reps`` holds one cycle per generator in the
    ambient generator coordinates, and :meth:`coordinates` maps cycles back.
    """

    def __init__(self, ambient, orders, reps, lattice_P, lattice_d,
                 lattice_check, U2):
        torsion = [d for d in orders if d > 1]
        n = len(orders)
        R = zeros(n, len(torsion))
        for i, d in enumerate(orders):
            if d > 1:
                R[i, i] = d
        super().__init__(n, R)
        self.ambient = ambient
        self.orders = tuple(orders)
        self.reps = reps
        self._P = lattice_P
        self._d = lattice_d
        self._check = lattice_check
        self._U2 = U2

    @cached_property
    def invariants(self):
        return (sum(1 for d in self.orders if d == 0),
                tuple(d for d in self.orders if d > 1))

    def coordinates(self, X):
        """Canonical coordinates of the cycles in the columns of ``X``."""
        if X.shape[0] != self.ambient.ngens:
            raise ValueError("cycle vector has wrong length")
        if self._check is not None and self._check.shape[0]:
            if mm(self._check, X).any():
                raise ValidationError("vector is not a cycle")
        if self.ngens == 0:
            return zeros(0, X.shape[1])
        Y = mm(self._P, X)
        if any(d != 1 for d in self._d):
            Yo = Y.astype(object)
            for i, d in enumerate(self._d):
                if d != 1:
                    if any(int(v) % d for v in Yo[i]):
                        raise ValidationError("vector is not a cycle")
                    Yo[i] = Yo[i] // d
            Y = shrink(Yo)
        W = mm(self._U2, Y)
        if any(d > 1 for d in self.orders):
            Wo = W.astype(object)
            for i, d in enumerate(self.orders):
                if d > 1:
                    Wo[i] = Wo[i] % d
            W = shrink(Wo)
        return W


def fp_homology_at(d_in: AbHom, d_out: AbHom) -> HomologyGroup:
    """Homology at the middle group ``G`` of ``A --d_in--> G --d_out--> B``."""
    G = d_out.source
    if d_in.target.ngens != G.ngens:
        raise ValidationError("d_in does not land in the source of d_out")
    n = G.ngens
    Dout, Rout = d_out.matrix, d_out.target.relations
    free_target = Rout.shape[1] == 0 or not Rout.any()
    # cycle lattice Z = {x : Dout x in col(Rout)} with a coordinate map
    if Dout.shape[0] == 0 or not Dout.any():
        Zb, P, dz, check = identity(n), identity(n), [1] * n, None
    elif free_target:
        rank, _, _, _, V, Vi = _smith(Dout, False, True)
        Zb, P, dz, check = V[:, rank:], Vi[rank:], [1] * (n - rank), Vi[:rank]
    else:
        K = kernel_basis(hstack([Dout, Rout], Dout.shape[0]))[:n]
        if K.shape[1] == 0 or not K.any():
            Zb, P, dz, check = zeros(n, 0), zeros(0, n), [], identity(n)
        else:
            rank, d, U, Ui, _, _ = _smith(K, True, False)
            Zb = Ui[:, :rank]
            if any(x != 1 for x in d):
                Zb = shrink(Zb.astype(object) * np.array(d, dtype=object))
            P, dz, check = U[:rank], d, U[rank:]
    k = Zb.shape[1]
    # boundaries plus relations, expressed in lattice coordinates
    Bgen = hstack([d_in.matrix, G.relations], n)
    probe = HomologyGroup(G, [0] * k, Zb, P, dz, check, identity(k))
    try:
        C = probe.coordinates(Bgen)
    except ValidationError:
        raise ValidationError("d_out o d_in is not zero") from None
    if C.shape[1] == 0 or not C.any():
        return HomologyGroup(G, [0] * k, Zb, P, dz, check, identity(k))
    rank2, d2, U2, Ui2, _, _ = _smith(C, True, False)
    orders = d2 + [0] * (k - rank2)
    kept = [i for i, o in enumerate(orders) if o != 1]
    reps = mm(Zb, Ui2[:, kept])
    return HomologyGroup(G, [orders[i] for i in kept], reps, P, dz, check,
                         U2[kept])


def induced_map(matrix, Hs: HomologyGroup, Ht: HomologyGroup) -> AbHom:
    """Map on homology induced by a chain-level ``matrix`` (ambient coords)."""
    images = mm(as_matrix(matrix), Hs.reps)
    return AbHom(Hs, Ht, Ht.coordinates(images))
