"""Smith normal form kernels.

Two interchangeable elimination kernels share one algorithm: move a
minimal-absolute-value entry to the pivot, reduce its row and column by
nearest-integer quotients, re-pivot on the smallest remainder until the row
and column are clear, then run a gcd/lcm pass over the diagonal to enforce
the divisibility chain. Elementary steps keep entries of sparse inputs and
of the transforms far smaller than 2x2 extended-gcd combinations do.

* ``smith_loops`` is a scalar-loop kernel compiled by numba (int64 only).
* ``smith_numpy`` vectorizes each row/column operation with numpy and works
  for both int64 and ``object`` (Python int) arrays.

The int64 kernels keep every entry below ``LIMIT`` so that no product can
overflow; when an entry would exceed it they report failure and the caller
reruns the exact object-dtype path.
"""

import numpy as np

from ._accel import USE_NUMBA, njit

LIMIT = 1 << 30


def _xgcd(a, b):
    x0, x1, y0, y1 = 1, 0, 0, 1
    while b != 0:
        q = a // b
        a, b = b, a - q * b
        x0, x1 = x1, x0 - q * x1
        y0, y1 = y1, y0 - q * y1
    if a < 0:
        a, x0, y0 = -a, -x0, -y0
    return a, x0, y0


_xgcd_jit = njit(_xgcd)


def _nearest(b, a):
    """Quotient ``c`` with ``|b - c*a| <= |a|/2``."""
    c = b // a
    if 2 * abs(b - c * a) > abs(a):
        c += 1
    return c


_nearest_jit = njit(_nearest)


# ---------------------------------------------------------------------------
# scalar kernel (numba target)
# ---------------------------------------------------------------------------

@njit
def _rows2(A, U, Ui, wu, i, j, p, q, r, s, c0):
    # rows (i, j) <- [[p, q], [r, s]] (rows); det must be 1
    bad = False
    for c in range(c0, A.shape[1]):
        u = A[i, c]
        v = A[j, c]
        if u == 0 and v == 0:
            continue
        nu = p * u + q * v
        nv = r * u + s * v
        A[i, c] = nu
        A[j, c] = nv
        if abs(nu) > LIMIT or abs(nv) > LIMIT:
            bad = True
    if wu:
        for c in range(U.shape[1]):
            u = U[i, c]
            v = U[j, c]
            nu = p * u + q * v
            nv = r * u + s * v
            U[i, c] = nu
            U[j, c] = nv
            if abs(nu) > LIMIT or abs(nv) > LIMIT:
                bad = True
        for c in range(Ui.shape[0]):
            u = Ui[c, i]
            v = Ui[c, j]
            nu = s * u - r * v
            nv = p * v - q * u
            Ui[c, i] = nu
            Ui[c, j] = nv
            if abs(nu) > LIMIT or abs(nv) > LIMIT:
                bad = True
    return bad


@njit
def _cols2(A, V, Vi, wv, i, j, p, q, r, s, r0):
    # col_i <- p col_i + q col_j ; col_j <- r col_i + s col_j ; det 1
    bad = False
    for c in range(r0, A.shape[0]):
        u = A[c, i]
        v = A[c, j]
        if u == 0 and v == 0:
            continue
        nu = p * u + q * v
        nv = r * u + s * v
        A[c, i] = nu
        A[c, j] = nv
        if abs(nu) > LIMIT or abs(nv) > LIMIT:
            bad = True
    if wv:
        for c in range(V.shape[0]):
            u = V[c, i]
            v = V[c, j]
            nu = p * u + q * v
            nv = r * u + s * v
            V[c, i] = nu
            V[c, j] = nv
            if abs(nu) > LIMIT or abs(nv) > LIMIT:
                bad = True
        for c in range(Vi.shape[1]):
            u = Vi[i, c]
            v = Vi[j, c]
            nu = s * u - r * v
            nv = p * v - q * u
            Vi[i, c] = nu
            Vi[j, c] = nv
            if abs(nu) > LIMIT or abs(nv) > LIMIT:
                bad = True
    return bad


@njit
def _swap_rows(A, U, Ui, wu, i, j):
    for c in range(A.shape[1]):
        A[i, c], A[j, c] = A[j, c], A[i, c]
    if wu:
        for c in range(U.shape[1]):
            U[i, c], U[j, c] = U[j, c], U[i, c]
        for c in range(Ui.shape[0]):
            Ui[c, i], Ui[c, j] = Ui[c, j], Ui[c, i]


@njit
def _swap_cols(A, V, Vi, wv, i, j):
    for c in range(A.shape[0]):
        A[c, i], A[c, j] = A[c, j], A[c, i]
    if wv:
        for c in range(V.shape[0]):
            V[c, i], V[c, j] = V[c, j], V[c, i]
        for c in range(Vi.shape[1]):
            Vi[i, c], Vi[j, c] = Vi[j, c], Vi[i, c]


@njit
def smith_loops(A, U, Ui, V, Vi, wu, wv):
    """Diagonalize ``A`` in place; return the rank, or -1 on int64 overflow risk.

    ``U``, ``Ui``, ``V``, ``Vi`` must start as identities (or be empty when the
    matching ``wu``/``wv`` flag is off). On success ``U @ A0 @ V == A``.
    """
    m, n = A.shape
    t = 0
    while t < m and t < n:
        best = 0
        bi = -1
        bj = -1
        for i in range(t, m):
            for j in range(t, n):
                a = abs(A[i, j])
                if a != 0 and (best == 0 or a < best):
                    best = a
                    bi = i
                    bj = j
                    if a == 1:
                        break
            if best == 1:
                break
        if bi < 0:
            break
        if bi != t:
            _swap_rows(A, U, Ui, wu, t, bi)
        if bj != t:
            _swap_cols(A, V, Vi, wv, t, bj)
        while True:
            a = A[t, t]
            for i in range(t + 1, m):
                b = A[i, t]
                if b != 0:
                    c = _nearest_jit(b, a)
                    if c != 0 and _rows2(A, U, Ui, wu, i, t, 1, -c, 0, 1, t):
                        return -1
            for j in range(t + 1, n):
                b = A[t, j]
                if b != 0:
                    c = _nearest_jit(b, a)
                    if c != 0 and _cols2(A, V, Vi, wv, j, t, 1, -c, 0, 1, t):
                        return -1
            best = 0
            bi = -1
            bj = -1
            for i in range(t + 1, m):
                b = abs(A[i, t])
                if b != 0 and (best == 0 or b < best):
                    best = b
                    bi = i
            for j in range(t + 1, n):
                b = abs(A[t, j])
                if b != 0 and (best == 0 or b < best):
                    best = b
                    bi = -1
                    bj = j
            if best == 0:
                break
            if bi >= 0:
                _swap_rows(A, U, Ui, wu, t, bi)
            else:
                _swap_cols(A, V, Vi, wv, t, bj)
        t += 1
    rank = t
    for i in range(rank):
        for j in range(i + 1, rank):
            a = A[i, i]
            b = A[j, j]
            if b % a == 0:
                continue
            if _rows2(A, U, Ui, wu, i, j, 1, 1, 0, 1, i):
                return -1
            g, x, y = _xgcd_jit(a, b)
            if _cols2(A, V, Vi, wv, i, j, x, y, -(b // g), a // g, i):
                return -1
            c = A[j, i] // A[i, i]
            if _rows2(A, U, Ui, wu, j, i, 1, -c, 0, 1, i):
                return -1
    for i in range(rank):
        if A[i, i] < 0:
            A[i, i] = -A[i, i]
            if wu:
                for c in range(U.shape[1]):
                    U[i, c] = -U[i, c]
                for c in range(Ui.shape[0]):
                    Ui[c, i] = -Ui[c, i]
    return rank


# ---------------------------------------------------------------------------
# vectorized kernel (pure numpy; int64 with overflow check, or exact object)
# ---------------------------------------------------------------------------

class _Overflow(Exception):
    pass


class _NumpyElim:
    def __init__(self, A, wu, wv):
        self.A = A
        self.exact = A.dtype == object
        m, n = A.shape
        self.wu, self.wv = wu, wv
        eye = (lambda k: _eye(k, A.dtype))
        self.U = eye(m) if wu else None
        self.Ui = eye(m) if wu else None
        self.V = eye(n) if wv else None
        self.Vi = eye(n) if wv else None

    def _check(self, *vecs):
        if self.exact:
            return
        for v in vecs:
            if v.size and np.abs(v).max() > LIMIT:
                raise _Overflow

    def rows2(self, i, j, p, q, r, s, c0):
        A = self.A
        ai = A[i, c0:].copy()
        aj = A[j, c0:].copy()
        A[i, c0:] = p * ai + q * aj
        A[j, c0:] = r * ai + s * aj
        self._check(A[i, c0:], A[j, c0:])
        if self.wu:
            U, Ui = self.U, self.Ui
            ui, uj = U[i].copy(), U[j].copy()
            U[i] = p * ui + q * uj
            U[j] = r * ui + s * uj
            ci, cj = Ui[:, i].copy(), Ui[:, j].copy()
            Ui[:, i] = s * ci - r * cj
            Ui[:, j] = p * cj - q * ci
            self._check(U[i], U[j], Ui[:, i], Ui[:, j])

    def cols2(self, i, j, p, q, r, s, r0):
        A = self.A
        ai = A[r0:, i].copy()
        aj = A[r0:, j].copy()
        A[r0:, i] = p * ai + q * aj
        A[r0:, j] = r * ai + s * aj
        self._check(A[r0:, i], A[r0:, j])
        if self.wv:
            V, Vi = self.V, self.Vi
            vi, vj = V[:, i].copy(), V[:, j].copy()
            V[:, i] = p * vi + q * vj
            V[:, j] = r * vi + s * vj
            ri, rj = Vi[i].copy(), Vi[j].copy()
            Vi[i] = s * ri - r * rj
            Vi[j] = p * rj - q * ri
            self._check(V[:, i], V[:, j], Vi[i], Vi[j])

    def _quotients(self, b, a):
        if self.exact:
            return np.array([_nearest(int(v), a) for v in b], dtype=object)
        c = b // a
        c += 2 * np.abs(b - c * a) > abs(a)
        return c

    def _guard(self, M, q):
        # the product M @ q must stay inside int64
        if not self.exact and M.size and q.size and \
                int(np.abs(M).max()) * int(np.abs(q).sum()) >= 1 << 62:
            raise _Overflow

    def clear_col(self, t):
        """Reduce column ``t`` below the pivot by row operations."""
        A = self.A
        a = int(A[t, t])
        q = self._quotients(A[t + 1:, t], a)
        nz = np.flatnonzero(q)
        if nz.size == 0:
            return
        rows, q = nz + t + 1, q[nz]
        A[rows, t:] -= np.outer(q, A[t, t:])
        self._check(A[rows, t:])
        if self.wu:
            self.U[rows] -= np.outer(q, self.U[t])
            self._guard(self.Ui[:, rows], q)
            self.Ui[:, t] += self.Ui[:, rows] @ q
            self._check(self.U[rows], self.Ui[:, t])

    def clear_row(self, t):
        """Reduce row ``t`` right of the pivot by column operations."""
        A = self.A
        a = int(A[t, t])
        q = self._quotients(A[t, t + 1:], a)
        nz = np.flatnonzero(q)
        if nz.size == 0:
            return
        cols, q = nz + t + 1, q[nz]
        A[t:, cols] -= np.outer(A[t:, t], q)
        self._check(A[t:, cols])
        if self.wv:
            self.V[:, cols] -= np.outer(self.V[:, t], q)
            self._guard(self.Vi[cols], q)
            self.Vi[t] += q @ self.Vi[cols]
            self._check(self.V[:, cols], self.Vi[t])

    def swap_rows(self, i, j):
        self.A[[i, j]] = self.A[[j, i]]
        if self.wu:
            self.U[[i, j]] = self.U[[j, i]]
            self.Ui[:, [i, j]] = self.Ui[:, [j, i]]

    def swap_cols(self, i, j):
        self.A[:, [i, j]] = self.A[:, [j, i]]
        if self.wv:
            self.V[:, [i, j]] = self.V[:, [j, i]]
            self.Vi[[i, j]] = self.Vi[[j, i]]

    def run(self):
        A = self.A
        m, n = A.shape
        t = 0
        while t < min(m, n):
            sub = A[t:, t:]
            rows, cols = np.nonzero(sub)
            if rows.size == 0:
                break
            mags = np.abs(sub[rows, cols])
            k = int(np.argmin(mags))
            bi, bj = int(rows[k]) + t, int(cols[k]) + t
            if bi != t:
                self.swap_rows(t, bi)
            if bj != t:
                self.swap_cols(t, bj)
            while True:
                self.clear_col(t)
                self.clear_row(t)
                col, row = A[t + 1:, t], A[t, t + 1:]
                ci, ri = np.flatnonzero(col), np.flatnonzero(row)
                if ci.size == 0 and ri.size == 0:
                    break
                bc = int(np.abs(col[ci]).min()) if ci.size else 0
                br = int(np.abs(row[ri]).min()) if ri.size else 0
                if ci.size and (not ri.size or bc <= br):
                    self.swap_rows(t, t + 1 + int(ci[np.argmin(np.abs(col[ci]))]))
                else:
                    self.swap_cols(t, t + 1 + int(ri[np.argmin(np.abs(row[ri]))]))
            t += 1
        rank = t
        for i in range(rank):
            for j in range(i + 1, rank):
                a, b = int(A[i, i]), int(A[j, j])
                if b % a == 0:
                    continue
                self.rows2(i, j, 1, 1, 0, 1, i)
                g, x, y = _xgcd(a, b)
                self.cols2(i, j, x, y, -(b // g), a // g, i)
                c = int(A[j, i]) // int(A[i, i])
                self.rows2(j, i, 1, -c, 0, 1, i)
        for i in range(rank):
            if A[i, i] < 0:
                A[i, i] = -A[i, i]
                if self.wu:
                    self.U[i] = -self.U[i]
                    self.Ui[:, i] = -self.Ui[:, i]
        return rank


def _eye(k, dtype):
    if dtype == object:
        out = np.zeros((k, k), dtype=object)
        for i in range(k):
            out[i, i] = 1
        return out
    return np.eye(k, dtype=dtype)


def smith_numpy(A, wu=True, wv=True):
    """Vectorized elimination on a copy of ``A``.

    Returns ``(rank, D, U, Ui, V, Vi)`` or ``None`` when an int64 input would
    overflow (never for ``object`` input).
    """
    el = _NumpyElim(A.copy(), wu, wv)
    try:
        rank = el.run()
    except _Overflow:
        return None
    return rank, el.A, el.U, el.Ui, el.V, el.Vi


def smith_numba(A, wu=True, wv=True):
    """Scalar-loop elimination (numba-compiled) on an int64 copy of ``A``."""
    m, n = A.shape
    D = np.array(A, dtype=np.int64, copy=True)
    U = np.eye(m, dtype=np.int64) if wu else np.zeros((0, 0), np.int64)
    Ui = np.eye(m, dtype=np.int64) if wu else np.zeros((0, 0), np.int64)
    V = np.eye(n, dtype=np.int64) if wv else np.zeros((0, 0), np.int64)
    Vi = np.eye(n, dtype=np.int64) if wv else np.zeros((0, 0), np.int64)
    rank = smith_loops(D, U, Ui, V, Vi, wu, wv)
    if rank < 0:
        return None
    return (rank, D, U if wu else None, Ui if wu else None,
            V if wv else None, Vi if wv else None)


def smith_kernel(A, wu=True, wv=True, backend=None):
    """Dispatch to the fast int64 kernel and fall back to exact arithmetic.

    ``backend`` is ``"numba"``, ``"numpy"`` or ``None`` (follow the
    ``POSETHOM_NUMBA`` flag). Input may be int64 or object; object input whose
    entries exceed ``LIMIT`` goes straight to the exact path.
    """
    if backend is None:
        backend = "numba" if USE_NUMBA else "numpy"
    small = A.size == 0 or int(np.abs(A).max()) <= LIMIT
    if small:
        A64 = np.asarray(A, dtype=np.int64)
        if backend == "numba":
            out = smith_numba(A64, wu, wv)
        else:
            out = smith_numpy(A64, wu, wv)
        if out is not None:
            return out
    return smith_numpy(np.asarray(A, dtype=object), wu, wv)
