"""Built-in property suites behind `qpkc selftest`.

quick: exhaustive desk-scale checks (m=4, n=16, t=2), a few seconds.
full:  adds the large parameter set (m=10, n=1024, t=50) with randomized
       decode trials and a timing report.

Each check prints one `ok`/`FAIL` line; the run exits nonzero iff any check
failed.  A fault hook lets tests corrupt the code under test and watch the
right invariant trip.
"""

from __future__ import annotations

import itertools
import math
import random
import sys
import time
from dataclasses import replace
from typing import Callable

from ._rng import derive_stream
from .bitlinalg import (
    BitMatrix,
    BitVec,
    mat_mul,
    random_matrix,
    rank,
    rref,
    right_inverse,
    vec_mat_mul,
)
from .gf2m import FieldParams, fe_inv, fe_mul, poly_mulmod, poly_norm, poly_sqrt_mod
from .goppa import GoppaCode, build_goppa, patterson_decode, syndrome_bits
from .mceliece import assemble_keypair, decrypt, encrypt, keygen, parse_private_key, \
    parse_public_key, serialize_private_key, serialize_public_key
from .bitlinalg import random_invertible, random_permutation
from .protocol import alice_encrypt, bob_decrypt, plaintext_state
from .qsim import RegisterLayout, apply_linear_bijection, apply_xor_const, \
    apply_xor_linear, fidelity, state_from_terms

DESK = (4, 16, 2)
SCALE = (10, 1024, 50)


def _check_field_mul(params: FieldParams) -> None:
    q = params.order
    for a in range(q):
        for b in range(q):
            ab = fe_mul(params, a, b)
            for c in range(q):
                assert fe_mul(params, a, fe_mul(params, b, c)) == fe_mul(params, ab, c), \
                    "associativity broken"
                assert fe_mul(params, a, b ^ c) == ab ^ fe_mul(params, a, c), \
                    "distributivity broken"
    for a in range(1, q):
        assert fe_mul(params, a, fe_inv(params, a)) == 1, "inverse broken"


def _check_sqrt_mod(code: GoppaCode) -> None:
    p = code.params
    for c0 in range(p.order):
        for c1 in range(p.order):
            u = poly_norm((c0, c1))
            r = poly_sqrt_mod(p, u, code.g)
            assert poly_mulmod(p, r, r, code.g) == u, f"sqrt broken for {u}"


def _check_rref(rng: random.Random) -> None:
    for _ in range(50):
        M = random_matrix(rng.randrange(1, 12), rng.randrange(1, 12), rng)
        R, rk, pivots, T = rref(M)
        assert mat_mul(T, M) == R, "transform does not reproduce rref"


def _check_right_inverse(rng: random.Random) -> None:
    done = 0
    while done < 100:
        M = random_matrix(8, 16, rng)
        if rank(M) < 8:
            continue
        assert mat_mul(M, right_inverse(M)) == BitMatrix.identity(8), "M * Minv != I"
        done += 1


def _check_parity(code: GoppaCode) -> None:
    assert mat_mul(code.G, code.Ht) == BitMatrix.zeros(code.k, code.mt), "G * H^T != 0"
    assert rank(code.G) == code.k, "generator rank deficient"
    assert rank(code.H) == code.mt, "parity check rank deficient"
    assert mat_mul(code.G, code.Ginv) == BitMatrix.identity(code.k), "G * Ginv != I"


def _check_decode_exhaustive(code: GoppaCode) -> None:
    for w in range(code.t + 1):
        for posns in itertools.combinations(range(code.n), w):
            e = BitVec.from_support(code.n, posns)
            got = patterson_decode(code, syndrome_bits(code, e))
            assert got == e, f"decode({posns}) returned {got.support()}"


def _check_distance(code: GoppaCode) -> None:
    bound = 2 * code.t + 1
    for msg in range(1, 1 << code.k):
        w = vec_mat_mul(BitVec(code.k, msg), code.G).weight()
        assert w >= bound, f"codeword of weight {w} < {bound}"


def _check_mceliece_roundtrip(pk, sk, rng: random.Random) -> None:
    for msg in range(1 << pk.k):
        m = BitVec(pk.k, msg)
        for _ in range(3):
            assert decrypt(sk, encrypt(pk, m, rng)) == m, f"round trip broke at {msg}"


def _check_serialization(pk, sk) -> None:
    pub = serialize_public_key(pk)
    priv = serialize_private_key(sk)
    assert parse_public_key(pub) == pk and serialize_public_key(parse_public_key(pub)) == pub
    assert parse_private_key(priv) == sk
    assert serialize_private_key(parse_private_key(priv)) == priv


def _check_protocol_identity(pk, sk, rng: random.Random) -> None:
    for msg in range(16):
        psi = plaintext_state(pk.k, [(1.0, BitVec(pk.k, msg))])
        cipher, _ = alice_encrypt(pk, psi, derive_stream(msg, "error"))
        out, _ = bob_decrypt(sk, cipher, derive_stream(msg, "measure"))
        assert fidelity(out, psi) >= 1 - 1e-12, f"basis state {msg} not recovered"
    for trial in range(10):
        n_terms = rng.randrange(2, 17)
        keys = rng.sample(range(1 << pk.k), n_terms)
        amp = 1 / math.sqrt(n_terms)
        psi = plaintext_state(pk.k, [(amp, BitVec(pk.k, v)) for v in keys])
        cipher, _ = alice_encrypt(pk, psi, derive_stream(trial, "error"))
        out, _ = bob_decrypt(sk, cipher, derive_stream(trial, "measure"))
        assert fidelity(out, psi) >= 1 - 1e-12, "superposition not recovered"


def _check_unitarity(rng: random.Random) -> None:
    lay = RegisterLayout((("a", 6), ("b", 6)))
    keys = rng.sample(range(1 << 12), 8)
    amp = 1 / math.sqrt(8)
    s = state_from_terms(
        lay, [(amp, [BitVec(6, k & 63), BitVec(6, k >> 6)]) for k in keys]
    )
    amps0 = sorted((a.real, a.imag) for a in s.terms.values())
    for _ in range(1000):
        op = rng.randrange(3)
        if op == 0:
            src, dst = ("a", "b") if rng.random() < 0.5 else ("b", "a")
            s = apply_xor_linear(s, src, dst, random_matrix(6, 6, rng))
        elif op == 1:
            s = apply_xor_const(s, rng.choice(["a", "b"]), BitVec(6, rng.getrandbits(6)))
        else:
            s = apply_linear_bijection(s, rng.choice(["a", "b"]), random_invertible(6, rng))
        assert s.term_count() == 8, "term count changed"
        assert sorted((a.real, a.imag) for a in s.terms.values()) == amps0, \
            "amplitude multiset changed"


def _check_scale_decode(code: GoppaCode, trials: int, rng: random.Random) -> None:
    for _ in range(trials):
        w = rng.randrange(0, code.t + 1)
        e = BitVec.from_support(code.n, rng.sample(range(code.n), w))
        assert patterson_decode(code, syndrome_bits(code, e)) == e, "scale decode broke"


def _check_scale_roundtrip(pk, sk) -> None:
    rng = random.Random(5)
    keys = {rng.getrandbits(pk.k) for _ in range(8)}
    amp = 1 / math.sqrt(len(keys))
    psi = plaintext_state(pk.k, [(amp, BitVec(pk.k, v)) for v in keys])
    cipher, _ = alice_encrypt(pk, psi, derive_stream(1, "error"))
    out, _ = bob_decrypt(sk, cipher, derive_stream(1, "measure"))
    assert fidelity(out, psi) >= 1 - 1e-12, "scale round trip lost fidelity"


def run_selftest(
    level: str = "quick",
    stream=None,
    fault: Callable[[GoppaCode], GoppaCode] | None = None,
    trials: int = 10_000,
) -> int:
    """Run the property suites; returns 0 iff every check passed."""
    if level not in ("quick", "full"):
        raise ValueError(f"unknown selftest level {level!r}")
    out = stream if stream is not None else sys.stdout

    m, n, t = DESK
    params = FieldParams.default(m)
    code = build_goppa(params, n, t, derive_stream(1, "goppa"))
    if fault is not None:
        code = fault(code)
    S = random_invertible(code.k, derive_stream(1, "scrambler"))
    P = random_permutation(n, derive_stream(1, "permutation"))
    pk, sk = assemble_keypair(code, S, P)

    checks: list[tuple[str, Callable[[], None]]] = [
        ("field.mul-laws", lambda: _check_field_mul(params)),
        ("field.sqrt-mod", lambda: _check_sqrt_mod(code)),
        ("linalg.rref", lambda: _check_rref(random.Random(1))),
        ("linalg.right-inverse", lambda: _check_right_inverse(random.Random(2))),
        ("goppa.parity", lambda: _check_parity(code)),
        ("goppa.decode-exhaustive", lambda: _check_decode_exhaustive(code)),
        ("goppa.distance", lambda: _check_distance(code)),
        ("mceliece.roundtrip", lambda: _check_mceliece_roundtrip(pk, sk, random.Random(3))),
        ("mceliece.serialization", lambda: _check_serialization(pk, sk)),
        ("protocol.identity", lambda: _check_protocol_identity(pk, sk, random.Random(4))),
        ("qsim.unitarity", lambda: _check_unitarity(random.Random(5))),
    ]

    timings: dict[str, float] = {}

    if level == "full":
        sm, sn, st = SCALE

        def scale_suite() -> None:
            t0 = time.perf_counter()
            spk, ssk = keygen(FieldParams.default(sm), sn, st, seed=1)
            timings["scale.keygen"] = time.perf_counter() - t0
            assert mat_mul(ssk.code.G, ssk.code.Ht) == BitMatrix.zeros(
                ssk.k, ssk.code.mt
            ), "G * H^T != 0 at scale"
            t0 = time.perf_counter()
            _check_scale_decode(ssk.code, trials, random.Random(6))
            timings["scale.decode-random"] = time.perf_counter() - t0
            t0 = time.perf_counter()
            _check_scale_roundtrip(spk, ssk)
            timings["scale.roundtrip"] = time.perf_counter() - t0

        checks.append((f"scale.suite[{trials} trials]", scale_suite))

    failures = 0
    for name, fn in checks:
        try:
            fn()
        except Exception as exc:  # noqa: BLE001 - report and keep going
            failures += 1
            print(f"FAIL {name}: {exc}", file=out)
        else:
            print(f"ok {name}", file=out)
    for name, dt in timings.items():
        print(f"time {name}={dt:.3f}s", file=out)
    print(f"{len(checks) - failures}/{len(checks)} checks passed", file=out)
    return 0 if failures == 0 else 3


def flip_parity_bit(code: GoppaCode) -> GoppaCode:
    """Fault-injection hook: flip one bit of H (for exercising the selftest)."""
    rows = list(code.H.row_bits)
    rows[0] ^= 1
    return replace(code, H=BitMatrix(code.H.rows, code.H.cols, tuple(rows)))
