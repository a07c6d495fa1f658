import os
import subprocess
import sys

import numpy as np
import pytest
import sympy
from hypothesis import given, strategies as st

from koszulkit import _kernels

BACKENDS = ["numpy"] + (["numba"] if _kernels.HAS_NUMBA else [])


@pytest.mark.parametrize("backend", BACKENDS)
@given(st.integers(1, 7).flatmap(lambda n: st.lists(st.lists(st.integers(-4, 4), min_size=n, max_size=n),
                                                    min_size=1, max_size=7)))
def test_rank_mod_p_matches_rational_rank(backend, rows):
    # entries are tiny, so no rank drop modulo a 31-bit prime is possible
    mat = np.array(rows, dtype=np.int64)
    assert _kernels.rank_mod_p(mat, backend=backend) == sympy.Matrix(rows).rank()


@pytest.mark.parametrize("backend", BACKENDS)
def test_rank_mod_p_sees_characteristic(backend):
    assert _kernels.rank_mod_p(np.array([[2, 0], [0, 2]]), p=2, backend=backend) == 0
    assert _kernels.rank_mod_p(np.zeros((0, 3), dtype=np.int64), backend=backend) == 0


def test_backends_agree_on_larger_matrices():
    if not _kernels.HAS_NUMBA:
        pytest.skip("numba disabled")
    rng = np.random.default_rng(7)
    for n in (20, 40):
        mat = rng.integers(-3, 4, size=(n, 8)) @ rng.integers(-3, 4, size=(8, n))
        assert _kernels.rank_mod_p(mat, backend="numpy") == _kernels.rank_mod_p(mat, backend="numba") == 8


def test_unknown_backend():
    with pytest.raises(ValueError):
        _kernels.rank_mod_p(np.eye(2, dtype=np.int64), backend="cuda")


def test_env_flag_selects_numpy():
    env = dict(os.environ, KOSZULKIT_NO_NUMBA="1")
    code = "from koszulkit import _kernels as k; import numpy as np; print(k.HAS_NUMBA, k.rank_mod_p(np.eye(3)))"
    out = subprocess.run([sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True)
    assert out.stdout.split() == ["False", "3"]
