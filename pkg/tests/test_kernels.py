import os
import subprocess
import sys

import numpy as np
import pytest

from posethom.kernels import LIMIT, smith_kernel


def _verify(A, out):
    rank, D, U, Ui, V, Vi = (x.astype(object) if hasattr(x, "astype") else x for x in out)
    A = A.astype(object)
    assert (U @ A @ V == D).all()
    assert (U @ Ui == np.eye(A.shape[0], dtype=np.int64).astype(object)).all()
    assert (V @ Vi == np.eye(A.shape[1], dtype=np.int64).astype(object)).all()
    return [int(D[i, i]) for i in range(rank)]


@pytest.mark.parametrize("seed", range(5))
def test_backends_agree(seed):
    rng = np.random.default_rng(seed)
    for _ in range(40):
        m, n = rng.integers(0, 8, 2)
        A = rng.integers(-50, 51, (m, n)) * (rng.random((m, n)) < 0.5)
        divs = {b: _verify(A, smith_kernel(A, backend=b)) for b in ("numba", "numpy")}
        divs["exact"] = _verify(A, smith_kernel(A.astype(object), backend="numpy"))
        assert divs["numba"] == divs["numpy"] == divs["exact"]


def test_overflow_falls_back_to_exact_path():
    big = LIMIT * 4 + 1
    A = np.array([[big, big - 1], [3, big * 2]], dtype=object)
    for b in ("numba", "numpy"):
        _verify(A, smith_kernel(A, backend=b))


def test_transforms_can_be_skipped():
    A = np.array([[2, 4], [6, 8]])
    rank, D, U, Ui, V, Vi = smith_kernel(A, wu=False, wv=False)
    assert rank == 2 and U is None and V is None and (np.diag(D) == [2, 4]).all()


def test_env_flag_selects_numpy_backend():
    code = "import posethom._accel as a; print(a.USE_NUMBA)"
    env = dict(os.environ, POSETHOM_NUMBA="0")
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True,
                         text=True, check=True)
    assert out.stdout.strip() == "False"
