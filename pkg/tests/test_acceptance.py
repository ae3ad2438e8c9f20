"""Acceptance gate: ten criteria, each at its stated tolerance, one printed
pass line per criterion (run with `pytest tests/test_acceptance.py -v -s`).

Desk scale is (m=4, n=16, t=2, k=8); the scale check uses (m=10, n=1024,
t=50, k=524).  Timing bounds are measured on the active kernel backend.
"""

import itertools
import math
import random
import time

import pytest

from qpkc import KERNEL_BACKEND
from qpkc._rng import derive_stream
from qpkc.bitlinalg import BitMatrix, BitVec, random_invertible, random_matrix, vec_mat_mul
from qpkc.bitlinalg import mat_mul
from qpkc.gf2m import FieldParams
from qpkc.goppa import build_goppa, patterson_decode, syndrome_bits
from qpkc.mceliece import decrypt, encrypt, keygen, public_matrix
from qpkc.protocol import alice_encrypt, bob_decrypt, plaintext_state, run_roundtrip
from qpkc.qsim import (
    RegisterLayout,
    apply_linear_bijection,
    apply_xor_const,
    apply_xor_linear,
    fidelity,
    state_from_terms,
)

DESK = FieldParams(4, 0x13)


def report(num: int, name: str, detail: str = "") -> None:
    suffix = f" ({detail})" if detail else ""
    print(f"ACCEPTANCE {num:02d} {name}: PASS{suffix}")


@pytest.fixture(scope="module")
def desk_keypair():
    return keygen(DESK, 16, 2, seed=1)


@pytest.fixture(scope="module")
def hundred_keypairs():
    return [keygen(DESK, 16, 2, seed=s) for s in range(100)]


def test_01_decoder_exhaustive():
    code = build_goppa(DESK, 16, 2, random.Random(3))
    t0 = time.perf_counter()
    count = 0
    for w in range(3):
        for posns in itertools.combinations(range(16), w):
            e = BitVec.from_support(16, posns)
            assert patterson_decode(code, syndrome_bits(code, e)) == e
            count += 1
    elapsed = time.perf_counter() - t0
    assert count == 137
    assert elapsed < 1.0
    report(1, "goppa decoder exhaustive", f"137 patterns in {elapsed:.3f}s")


def test_02_parity_identities(hundred_keypairs):
    for pk, sk in hundred_keypairs:
        code = sk.code
        assert mat_mul(code.G, code.Ht) == BitMatrix.zeros(code.k, code.mt)
        assert public_matrix(sk) == pk.Gpub
    report(2, "G*H^T = 0 and S*G*P = Gpub", "100 seeded keypairs, exact")


def test_03_right_inverse_identities(hundred_keypairs):
    for pk, sk in hundred_keypairs:
        assert mat_mul(pk.Gpub, pk.GpubInv) == BitMatrix.identity(pk.k)
        assert mat_mul(sk.code.G, sk.code.Ginv) == BitMatrix.identity(sk.k)
    report(3, "Gpub*GpubInv = I and G*Ginv = I", "100 seeded keypairs, exact")


def test_04_classical_round_trip(desk_keypair):
    pk, sk = desk_keypair
    rng = random.Random(4)
    t0 = time.perf_counter()
    for msg in range(256):
        m = BitVec(8, msg)
        for _ in range(20):
            assert decrypt(sk, encrypt(pk, m, rng)) == m
    elapsed = time.perf_counter() - t0
    assert elapsed < 5.0
    report(4, "classical round trip", f"256 x 20 in {elapsed:.2f}s")


def _random_superposition(k: int, n_terms: int, rng: random.Random):
    keys = rng.sample(range(1 << k), n_terms)
    raw = [complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in keys]
    norm = math.sqrt(sum(abs(a) ** 2 for a in raw))
    return plaintext_state(k, [(a / norm, BitVec(k, v)) for a, v in zip(raw, keys)])


def _assert_equation_evidence(sk, alice_trace, bob_trace):
    # (i) message register constant 0 after the encode-side uncompute
    steps = {s.label: s for s in alice_trace.steps}
    assert "msg" in steps["uncompute-msg"].constant_regs
    # (ii) syndrome outcome is the permuted error's syndrome, with certainty
    (rec,) = bob_trace.measurements
    assert abs(rec.probability - 1.0) <= 1e-12
    permuted = sk.Pinv.apply(alice_trace.error_applied)
    assert bob_trace.error_recovered == permuted
    assert rec.outcome == syndrome_bits(sk.code, permuted)
    # (iii) code register constant 0 after the decode-side uncompute
    steps = {s.label: s for s in bob_trace.steps}
    assert "code" in steps["uncompute-code"].constant_regs


def test_05_and_06_quantum_round_trip_with_equation_assertions(desk_keypair):
    pk, sk = desk_keypair
    t0 = time.perf_counter()
    for msg in range(256):
        psi = plaintext_state(8, [(1.0, BitVec(8, msg))])
        cipher, atrace = alice_encrypt(pk, psi, derive_stream(msg, "error"))
        out, btrace = bob_decrypt(sk, cipher, derive_stream(msg, "measure"))
        assert fidelity(out, psi) >= 1 - 1e-12
        _assert_equation_evidence(sk, atrace, btrace)
    rng = random.Random(5)
    for trial in range(100):
        psi = _random_superposition(8, rng.randrange(1, 17), rng)
        cipher, atrace = alice_encrypt(pk, psi, derive_stream(1000 + trial, "error"))
        out, btrace = bob_decrypt(sk, cipher, derive_stream(1000 + trial, "measure"))
        assert fidelity(out, psi) >= 1 - 1e-12
        _assert_equation_evidence(sk, atrace, btrace)
    elapsed = time.perf_counter() - t0
    assert elapsed < 10.0
    report(5, "quantum round trip", f"256 basis + 100 superpositions in {elapsed:.2f}s")
    report(6, "pipeline equation assertions", "zero violations across all runs")


def test_07_classical_quantum_consistency(desk_keypair):
    pk, sk = desk_keypair
    for msg in range(256):
        m = BitVec(8, msg)
        c_classical = encrypt(pk, m, derive_stream(msg, "error"))
        state, _ = alice_encrypt(
            pk, plaintext_state(8, [(1.0, m)]), derive_stream(msg, "error")
        )
        (ckey,) = state.terms
        assert BitVec(16, ckey) == c_classical
        out, _ = bob_decrypt(sk, state, derive_stream(msg, "measure"))
        (okey,) = out.terms
        assert BitVec(8, okey) == decrypt(sk, c_classical) == m
    report(7, "classical/quantum consistency", "256 messages under shared seeds")


def test_08_brute_force_oracle_equivalence(desk_keypair):
    pk, sk = desk_keypair
    codewords = [vec_mat_mul(BitVec(8, msg), pk.Gpub) for msg in range(256)]
    rng = random.Random(8)
    for _ in range(1000):
        m = BitVec(8, rng.getrandbits(8))
        c = encrypt(pk, m, rng)
        best_msg, best_dist = None, None
        for msg, w in enumerate(codewords):
            dist = (w ^ c).weight()
            if best_dist is None or dist < best_dist:
                best_msg, best_dist = msg, dist
        assert best_dist <= 2
        assert decrypt(sk, c) == BitVec(8, best_msg) == m
    report(8, "brute-force nearest-codeword equivalence", "1000 ciphertexts")


def test_09_scale():
    params = FieldParams(10, 0x409)
    t0 = time.perf_counter()
    pk, sk = keygen(params, 1024, 50, seed=9)
    keygen_time = time.perf_counter() - t0
    assert keygen_time < 60.0
    assert pk.k == 524

    rng = random.Random(9)
    keys = set()
    while len(keys) < 8:
        keys.add(rng.getrandbits(524))
    amp = 1 / math.sqrt(8)
    psi = plaintext_state(524, [(amp, BitVec(524, v)) for v in keys])
    t0 = time.perf_counter()
    cipher, _ = alice_encrypt(pk, psi, derive_stream(9, "error"))
    out, _ = bob_decrypt(sk, cipher, derive_stream(9, "measure"))
    roundtrip_time = time.perf_counter() - t0
    f = fidelity(out, psi)
    assert roundtrip_time < 10.0
    assert f >= 1 - 1e-12
    report(
        9,
        "scale (m=10, n=1024, t=50)",
        f"keygen {keygen_time:.2f}s, 8-term round trip {roundtrip_time:.2f}s, "
        f"backend={KERNEL_BACKEND}",
    )


def test_10_unitarity_suite():
    rng = random.Random(10)
    lay = RegisterLayout((("a", 6), ("b", 6)))
    keys = rng.sample(range(1 << 12), 10)
    raw = [complex(rng.gauss(0, 1), rng.gauss(0, 1)) for _ in keys]
    norm = math.sqrt(sum(abs(a) ** 2 for a in raw))
    s = state_from_terms(
        lay,
        [(a / norm, [BitVec(6, k & 63), BitVec(6, k >> 6)]) for a, k in zip(raw, keys)],
    )
    amps0 = sorted((a.real, a.imag) for a in s.terms.values())
    norm0 = sum(re * re + im * im for re, im in amps0)
    for i in range(10_000):
        op = i % 3
        if op == 0:
            src, dst = ("a", "b") if rng.random() < 0.5 else ("b", "a")
            s = apply_xor_linear(s, src, dst, random_matrix(6, 6, rng))
        elif op == 1:
            s = apply_xor_const(s, rng.choice(["a", "b"]), BitVec(6, rng.getrandbits(6)))
        else:
            s = apply_linear_bijection(s, rng.choice(["a", "b"]), random_invertible(6, rng))
        assert s.term_count() == 10
        amps = sorted((a.real, a.imag) for a in s.terms.values())
        assert amps == amps0
        assert sum(re * re + im * im for re, im in amps) - norm0 == 0.0
    report(10, "unitarity suite", "10^4 ops, exact amplitude multiset, norm drift 0")
