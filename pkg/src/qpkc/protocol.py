"""The encode/decode pipelines on superpositions, with runtime assertions.

Encoding: entangle a code register with the message through the public
matrix, uncompute the message register through the right inverse (it must
land exactly on |0>), discard it, and XOR in a fresh weight-t error.

Decoding: unpermute, XOR the syndrome into a fresh register and measure it
(the outcome is error-determined, so the measurement must be certain),
decode the error classically, strip it, pull the scrambled message out
through the code's right inverse, uncompute the code register (again
exactly |0>), and unscramble.

Each step's displayed intermediate state is checked at runtime: constant
registers must actually be constant and the syndrome measurement must have
Born probability 1.  Violations raise ProtocolError instead of proceeding.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from ._rng import derive_stream
from .bitlinalg import BitVec
from .errors import ProtocolError
from .gf2m import FieldParams
from .goppa import patterson_decode
from .mceliece import PrivateKey, PublicKey, keygen, sample_error
from .qsim import (
    MeasurementRecord,
    RegisterLayout,
    SparseState,
    apply_linear_bijection,
    apply_xor_const,
    apply_xor_linear,
    attach_register,
    constant_registers,
    constant_value,
    discard_register,
    fidelity,
    measure_register,
    state_from_terms,
)

MSG_REG = "msg"
CODE_REG = "code"
SYN_REG = "syn"

SYNDROME_CERTAINTY_TOL = 1e-12


@dataclass(frozen=True)
class StepRecord:
    label: str
    term_count: int
    layout: tuple[tuple[str, int], ...]
    constant_regs: tuple[str, ...]


@dataclass
class ProtocolTrace:
    side: str
    steps: list[StepRecord] = field(default_factory=list)
    measurements: list[MeasurementRecord] = field(default_factory=list)
    error_applied: BitVec | None = None
    error_recovered: BitVec | None = None

    def record(self, label: str, state: SparseState) -> None:
        self.steps.append(
            StepRecord(label, state.term_count(), state.layout.regs, constant_registers(state))
        )

    def lines(self) -> list[str]:
        out = []
        for s in self.steps:
            layout = ",".join(f"{n}:{w}" for n, w in s.layout)
            const = ",".join(s.constant_regs) if s.constant_regs else "-"
            out.append(
                f"{self.side} {s.label}: terms={s.term_count} layout={layout} const={const}"
            )
        for rec in self.measurements:
            out.append(
                f"{self.side} measured {rec.register}={rec.outcome.to_string()} "
                f"p={rec.probability:.15f}"
            )
        if self.error_applied is not None:
            out.append(f"{self.side} error-applied: {self.error_applied.to_string()}")
        if self.error_recovered is not None:
            out.append(f"{self.side} error-recovered: {self.error_recovered.to_string()}")
        return out


def _single_register(state: SparseState, expected_width: int, forbidden: tuple[str, ...]):
    if len(state.layout.regs) != 1:
        raise ValueError(f"expected a single register, got {state.layout.describe()}")
    name, width = state.layout.regs[0]
    if width != expected_width:
        raise ValueError(f"register {name!r} has width {width}, expected {expected_width}")
    if name in forbidden:
        raise ValueError(f"register name {name!r} collides with a pipeline ancilla")
    return name


def plaintext_state(k: int, terms) -> SparseState:
    """State over one k-bit message register from (amplitude, BitVec) pairs."""
    layout = RegisterLayout.single(MSG_REG, k)
    return state_from_terms(layout, [(amp, [v]) for amp, v in terms])


def alice_encrypt(
    pk: PublicKey, plaintext: SparseState, rng
) -> tuple[SparseState, ProtocolTrace]:
    """Encode a message state into an n-qubit ciphertext state."""
    msg_reg = _single_register(plaintext, pk.k, (CODE_REG,))
    trace = ProtocolTrace("alice")
    trace.record("input", plaintext)

    s = attach_register(plaintext, CODE_REG, pk.n, BitVec(pk.n))
    trace.record("attach-code", s)

    s = apply_xor_linear(s, msg_reg, CODE_REG, pk.Gpub)
    trace.record("encode", s)

    s = apply_xor_linear(s, CODE_REG, msg_reg, pk.GpubInv)
    if constant_value(s, msg_reg) != 0:
        raise ProtocolError("uncompute failed: message register is not |0> (Gpub*GpubInv != I?)")
    trace.record("uncompute-msg", s)

    s = discard_register(s, msg_reg)
    trace.record("discard-msg", s)

    e = sample_error(pk.n, pk.t, rng)
    trace.error_applied = e
    s = apply_xor_const(s, CODE_REG, e)
    trace.record("add-error", s)
    return s, trace


def bob_decrypt(
    sk: PrivateKey, ciphertext: SparseState, rng
) -> tuple[SparseState, ProtocolTrace]:
    """Decode an n-qubit ciphertext state back to the k-bit message state."""
    code_reg = _single_register(ciphertext, sk.n, (MSG_REG, SYN_REG))
    code = sk.code
    trace = ProtocolTrace("bob")
    trace.record("input", ciphertext)

    s = apply_linear_bijection(ciphertext, code_reg, sk.Pinv.matrix())
    trace.record("unpermute", s)

    s = attach_register(s, SYN_REG, code.mt, BitVec(code.mt))
    s = apply_xor_linear(s, code_reg, SYN_REG, code.Ht)
    trace.record("syndrome", s)

    rec, s = measure_register(s, SYN_REG, rng)
    trace.measurements.append(rec)
    if abs(rec.probability - 1.0) > SYNDROME_CERTAINTY_TOL:
        raise ProtocolError(
            f"syndrome register entangled: outcome probability {rec.probability!r} "
            "(error weight beyond t or corrupted ciphertext)"
        )
    e = patterson_decode(code, rec.outcome)
    trace.error_recovered = e
    trace.record("measure-syndrome", s)
    s = discard_register(s, SYN_REG)
    trace.record("discard-syndrome", s)

    s = apply_xor_const(s, code_reg, e)
    trace.record("remove-error", s)

    s = attach_register(s, MSG_REG, sk.k, BitVec(sk.k))
    s = apply_xor_linear(s, code_reg, MSG_REG, code.Ginv)
    s = apply_xor_linear(s, MSG_REG, code_reg, code.G)
    if constant_value(s, code_reg) != 0:
        raise ProtocolError("uncompute failed: code register is not |0> after message extraction")
    trace.record("uncompute-code", s)
    s = discard_register(s, code_reg)
    trace.record("discard-code", s)

    s = apply_linear_bijection(s, MSG_REG, sk.Sinv)
    trace.record("unscramble", s)
    return s, trace


@dataclass
class RoundTripReport:
    m: int
    n: int
    k: int
    t: int
    seed: int
    term_count: int
    fidelity: float
    alice: ProtocolTrace
    bob: ProtocolTrace
    timings: dict[str, float]
    input_state: SparseState
    cipher_state: SparseState
    output_state: SparseState

    def to_text(self, include_timing: bool = True) -> str:
        lines = [
            f"params: m={self.m} n={self.n} k={self.k} t={self.t} "
            f"seed={self.seed} terms={self.term_count}"
        ]
        lines += self.alice.lines()
        lines += self.bob.lines()
        lines.append(f"fidelity={self.fidelity:.15f}")
        if include_timing:
            for name, dt in self.timings.items():
                lines.append(f"timing {name}={dt:.3f}s")
        return "\n".join(lines) + "\n"


def run_roundtrip(
    params: FieldParams, n: int, t: int, terms, seed: int
) -> RoundTripReport:
    """keygen, encode, decode, and compare: the pipeline must be the identity."""
    timings: dict[str, float] = {}
    t0 = time.perf_counter()
    pk, sk = keygen(params, n, t, seed)
    timings["keygen"] = time.perf_counter() - t0

    psi = plaintext_state(pk.k, terms)

    t0 = time.perf_counter()
    cipher, alice_trace = alice_encrypt(pk, psi, derive_stream(seed, "error"))
    timings["alice"] = time.perf_counter() - t0

    t0 = time.perf_counter()
    out, bob_trace = bob_decrypt(sk, cipher, derive_stream(seed, "measure"))
    timings["bob"] = time.perf_counter() - t0

    return RoundTripReport(
        m=params.m,
        n=n,
        k=pk.k,
        t=t,
        seed=seed,
        term_count=psi.term_count(),
        fidelity=fidelity(out, psi),
        alice=alice_trace,
        bob=bob_trace,
        timings=timings,
        input_state=psi,
        cipher_state=cipher,
        output_state=out,
    )
