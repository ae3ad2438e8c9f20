"""Backend parity: the compiled kernels must match the pure-Python reference
bit for bit, and the import-time selection must honor the override knob."""

import os
import random
import subprocess
import sys

import pytest

import qpkc._kernels as kernels
from qpkc._kernels import _pure

try:
    from qpkc._kernels import _core

    BACKENDS = [("python", _pure), ("cython", _core)]
except ImportError:
    _core = None
    BACKENDS = [("python", _pure)]


def pairs():
    if _core is None:
        pytest.skip("compiled backend not built")
    return _pure, _core


def test_active_backend_is_known():
    assert kernels.BACKEND in ("python", "cython")


def test_env_override_forces_pure_backend():
    code = "import qpkc._kernels as k; print(k.BACKEND)"
    env = dict(os.environ, QPKC_PURE_PYTHON="1")
    out = subprocess.run(
        [sys.executable, "-c", code], env=env, capture_output=True, text=True, check=True
    )
    assert out.stdout.strip() == "python"


def test_rref_parity():
    pure, core = pairs()
    rng = random.Random(100)
    for _ in range(100):
        nrows = rng.randrange(1, 40)
        ncols = rng.randrange(1, 130)
        rows = [rng.getrandbits(ncols) for _ in range(nrows)]
        assert tuple(pure.rref_packed(rows, ncols)) == tuple(core.rref_packed(rows, ncols))


def test_rref_parity_word_boundaries():
    pure, core = pairs()
    rng = random.Random(101)
    for ncols in (63, 64, 65, 127, 128, 129):
        rows = [rng.getrandbits(ncols) for _ in range(70)]
        assert tuple(pure.rref_packed(rows, ncols)) == tuple(core.rref_packed(rows, ncols))


def test_mat_mul_parity():
    pure, core = pairs()
    rng = random.Random(102)
    for _ in range(100):
        a, b, c = rng.randrange(1, 30), rng.randrange(1, 90), rng.randrange(1, 90)
        ar = [rng.getrandbits(b) for _ in range(a)]
        br = [rng.getrandbits(c) for _ in range(b)]
        assert pure.mat_mul_packed(ar, br, c) == core.mat_mul_packed(ar, br, c)


@pytest.mark.parametrize("m,modulus", [(4, 0x13), (10, 0x409), (13, 0x201B)])
def test_poly_square_pow_parity(m, modulus):
    pure, core = pairs()
    rng = random.Random(103 + m)
    q = 1 << m
    for _ in range(30):
        t = rng.randrange(1, 9)
        g = [rng.randrange(q) for _ in range(t)] + [1]
        u = [rng.randrange(q) for _ in range(t)]
        times = rng.randrange(0, 40)
        assert pure.poly_square_pow_mod(u, g, times, m, modulus) == core.poly_square_pow_mod(
            u, g, times, m, modulus
        )


@pytest.mark.parametrize("m,modulus", [(4, 0x13), (10, 0x409), (13, 0x201B)])
def test_poly_eval_batch_parity(m, modulus):
    pure, core = pairs()
    rng = random.Random(104 + m)
    q = 1 << m
    for _ in range(30):
        f = [rng.randrange(q) for _ in range(rng.randrange(0, 10))]
        xs = [rng.randrange(q) for _ in range(25)] + [0]
        assert pure.poly_eval_batch(f, xs, m, modulus) == core.poly_eval_batch(
            f, xs, m, modulus
        )
