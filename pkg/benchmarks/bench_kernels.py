#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallback.

The four kernels carry the hot loops of key generation and decoding:
packed rref and matrix multiply at the n=1024 scale, the repeated-squaring
chain behind irreducibility testing and modular square roots, and batched
polynomial evaluation for locator root finding.

Usage:
    python benchmarks/bench_kernels.py [--repeat 5] [--end-to-end]

--end-to-end additionally times keygen and one 8-term superposition round
trip at (m=10, n=1024, t=50) in a subprocess per backend.
"""

from __future__ import annotations

import argparse
import os
import random
import subprocess
import sys
import time

from qpkc._kernels import _pure

try:
    from qpkc._kernels import _core
except ImportError:
    _core = None


def best_of(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def make_workloads(seed: int = 1):
    rng = random.Random(seed)
    rows_sq = [rng.getrandbits(1024) for _ in range(1024)]
    a_rows = [rng.getrandbits(524) for _ in range(524)]
    b_rows = [rng.getrandbits(1024) for _ in range(524)]
    m, modulus, t = 10, 0x409, 50
    g = [rng.randrange(1 << m) for _ in range(t)] + [1]
    u = [rng.randrange(1 << m) for _ in range(t)]
    f = [rng.randrange(1 << m) for _ in range(t + 1)]
    xs = [rng.randrange(1 << m) for _ in range(1024)]
    return [
        (
            "rref_packed 1024x1024",
            lambda impl: impl.rref_packed(rows_sq, 1024),
        ),
        (
            "mat_mul_packed 524x524 * 524x1024",
            lambda impl: impl.mat_mul_packed(a_rows, b_rows, 1024),
        ),
        (
            "poly_square_pow_mod t=50, 499 squarings",
            lambda impl: impl.poly_square_pow_mod(u, g, 499, m, modulus),
        ),
        (
            "poly_eval_batch deg 50 at 1024 points",
            lambda impl: impl.poly_eval_batch(f, xs, m, modulus),
        ),
    ]


END_TO_END_SNIPPET = """
import math, random, time
from qpkc._rng import derive_stream
from qpkc.bitlinalg import BitVec
from qpkc.gf2m import FieldParams
from qpkc.mceliece import keygen
from qpkc.protocol import alice_encrypt, bob_decrypt, plaintext_state
from qpkc.qsim import fidelity
import qpkc._kernels as k

t0 = time.perf_counter()
pk, sk = keygen(FieldParams(10, 0x409), 1024, 50, seed=9)
t_key = time.perf_counter() - t0

rng = random.Random(9)
keys = {rng.getrandbits(524) for _ in range(8)}
amp = 1 / math.sqrt(len(keys))
psi = plaintext_state(524, [(amp, BitVec(524, v)) for v in keys])
t0 = time.perf_counter()
cipher, _ = alice_encrypt(pk, psi, derive_stream(9, "error"))
out, _ = bob_decrypt(sk, cipher, derive_stream(9, "measure"))
t_rt = time.perf_counter() - t0
assert fidelity(out, psi) >= 1 - 1e-12
print(f"{k.BACKEND} keygen={t_key:.3f}s roundtrip={t_rt:.3f}s")
"""


def run_end_to_end() -> None:
    print("\nend to end at (m=10, n=1024, t=50), 8-term superposition:")
    for pure in (False, True):
        env = dict(os.environ)
        if pure:
            env["QPKC_PURE_PYTHON"] = "1"
        else:
            env.pop("QPKC_PURE_PYTHON", None)
        out = subprocess.run(
            [sys.executable, "-c", END_TO_END_SNIPPET],
            env=env,
            capture_output=True,
            text=True,
        )
        if out.returncode != 0:
            print(out.stderr, file=sys.stderr)
            raise SystemExit(1)
        print("  " + out.stdout.strip())


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5, help="take the best of N runs")
    parser.add_argument("--seed", type=int, default=1)
    parser.add_argument(
        "--end-to-end", action="store_true", help="also time keygen + round trip per backend"
    )
    args = parser.parse_args()

    if _core is None:
        print("compiled backend not available; timing the pure backend only")

    name_w = 44
    header = f"{'kernel':<{name_w}} {'pure':>10}"
    if _core is not None:
        header += f" {'cython':>10} {'speedup':>8}"
    print(header)
    print("-" * len(header))
    for name, work in make_workloads(args.seed):
        t_pure = best_of(lambda: work(_pure), args.repeat)
        line = f"{name:<{name_w}} {t_pure * 1e3:>8.2f}ms"
        if _core is not None:
            t_core = best_of(lambda: work(_core), args.repeat)
            line += f" {t_core * 1e3:>8.2f}ms {t_pure / t_core:>7.1f}x"
        print(line)

    if args.end_to_end:
        run_end_to_end()
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
