"""Exact sparse simulator for basis-permutation unitaries.

Every operation the pipeline needs (XOR a linear image of one register into
another, XOR a constant, apply an invertible matrix, measure, attach or
discard an ancilla) maps computational-basis states to computational-basis
states.  A pure state is therefore a finite map from basis bitstrings to
complex amplitudes, and every operation costs O(number of terms); amplitudes
are only ever re-keyed, never scaled, so unitarity is exact.

Keys pack the registers in layout order: the register at offset o with width
w occupies key bits [o, o+w), bit b of its value = key bit o+b.  Printed
bitstrings put bit 0 leftmost.

States are immutable; operations return new states.  Only the externally
supplied rng handle for measurement carries mutable state.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import cached_property

from .bitlinalg import BitMatrix, BitVec, rank
from .errors import StateFormatError

INPUT_NORM_TOL = 1e-9
NORM_TOL = 1e-12

STATE_HEADER = "QSTATE v1"


@dataclass(frozen=True)
class RegisterLayout:
    """Ordered named registers; concatenation order = declaration order."""

    regs: tuple[tuple[str, int], ...]

    def __post_init__(self) -> None:
        names = [name for name, _ in self.regs]
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate register names in {names}")
        for name, width in self.regs:
            if width < 1:
                raise ValueError(f"register {name!r} has width {width} < 1")
            if not name or " " in name or ":" in name:
                raise ValueError(f"bad register name {name!r}")

    @classmethod
    def single(cls, name: str, width: int) -> "RegisterLayout":
        return cls(((name, width),))

    @cached_property
    def _offsets(self) -> dict[str, tuple[int, int]]:
        out = {}
        off = 0
        for name, width in self.regs:
            out[name] = (off, width)
            off += width
        return out

    @property
    def total_width(self) -> int:
        return sum(w for _, w in self.regs)

    def names(self) -> tuple[str, ...]:
        return tuple(name for name, _ in self.regs)

    def has(self, name: str) -> bool:
        return name in self._offsets

    def field(self, name: str) -> tuple[int, int]:
        """(offset, width) of a register."""
        try:
            return self._offsets[name]
        except KeyError:
            raise ValueError(f"unknown register {name!r}") from None

    def width_of(self, name: str) -> int:
        return self.field(name)[1]

    def append(self, name: str, width: int) -> "RegisterLayout":
        return RegisterLayout(self.regs + ((name, width),))

    def remove(self, name: str) -> "RegisterLayout":
        self.field(name)
        return RegisterLayout(tuple(r for r in self.regs if r[0] != name))

    def describe(self) -> str:
        return ",".join(f"{name}:{width}" for name, width in self.regs)


@dataclass(frozen=True)
class SparseState:
    """Finite map from basis keys to amplitudes over a register layout.

    The terms dict is owned by the state and must not be mutated.
    """

    layout: RegisterLayout
    terms: dict

    def term_count(self) -> int:
        return len(self.terms)

    def norm_squared(self) -> float:
        return sum((a * a.conjugate()).real for a in self.terms.values())

    def register_value(self, key: int, name: str) -> int:
        off, width = self.layout.field(name)
        return (key >> off) & ((1 << width) - 1)


@dataclass(frozen=True)
class MeasurementRecord:
    register: str
    outcome: BitVec
    probability: float


def _checked(layout: RegisterLayout, terms: dict, tol: float) -> SparseState:
    terms = {k: a for k, a in terms.items() if a != 0}
    if not terms:
        raise ValueError("state has no nonzero terms")
    norm = sum((a * a.conjugate()).real for a in terms.values())
    if abs(norm - 1.0) > tol:
        raise ValueError(f"state is not normalized: sum of squared amplitudes = {norm!r}")
    return SparseState(layout, terms)


def state_from_terms(layout: RegisterLayout, terms) -> SparseState:
    """Build a state from (amplitude, per-register values) pairs.

    Values are BitVecs in layout order.  No silent normalization: amplitudes
    must already sum to one in squared magnitude (within 1e-9).
    """
    entries = list(terms)
    if not entries:
        raise ValueError("at least one term is required")
    packed: dict[int, complex] = {}
    for amp, values in entries:
        values = tuple(values)
        if len(values) != len(layout.regs):
            raise ValueError(
                f"expected {len(layout.regs)} register values, got {len(values)}"
            )
        key = 0
        for (name, width), v in zip(layout.regs, values):
            if v.n != width:
                raise ValueError(f"value for register {name!r} has width {v.n}, not {width}")
            off, _ = layout.field(name)
            key |= v.bits << off
        if key in packed:
            raise ValueError("duplicate basis state in term list")
        packed[key] = complex(amp)
    return _checked(layout, packed, INPUT_NORM_TOL)


def basis_state(layout: RegisterLayout, values) -> SparseState:
    return state_from_terms(layout, [(1.0, values)])


def attach_register(state: SparseState, name: str, width: int, value: BitVec) -> SparseState:
    """Tensor a fresh register in a known basis state onto every term."""
    if state.layout.has(name):
        raise ValueError(f"register {name!r} already exists")
    if value.n != width:
        raise ValueError(f"value width {value.n} != register width {width}")
    layout = state.layout.append(name, width)
    shift = state.layout.total_width
    bits = value.bits << shift
    return SparseState(layout, {key | bits: a for key, a in state.terms.items()})


def discard_register(state: SparseState, name: str) -> SparseState:
    """Drop a register whose value is identical across all terms."""
    off, width = state.layout.field(name)
    if len(state.layout.regs) == 1:
        raise ValueError("cannot discard the only register")
    if constant_value(state, name) is None:
        raise ValueError(f"register {name!r} is entangled or non-constant, cannot discard")
    low_mask = (1 << off) - 1
    new_terms = {}
    for key, a in state.terms.items():
        new_terms[(key & low_mask) | ((key >> (off + width)) << off)] = a
    return SparseState(state.layout.remove(name), new_terms)


def apply_xor_linear(state: SparseState, src: str, dst: str, M: BitMatrix) -> SparseState:
    """dst ^= src * M on every term; the unified form of all the pipeline's
    register-to-register unitaries."""
    if src == dst:
        raise ValueError("source and destination registers must differ")
    src_off, src_w = state.layout.field(src)
    dst_off, dst_w = state.layout.field(dst)
    if M.rows != src_w or M.cols != dst_w:
        raise ValueError(
            f"matrix is {M.rows}x{M.cols}, need {src_w}x{dst_w} for {src!r}->{dst!r}"
        )
    rows = M.row_bits
    src_mask = (1 << src_w) - 1
    new_terms: dict[int, complex] = {}
    for key, amp in state.terms.items():
        x = (key >> src_off) & src_mask
        image = 0
        while x:
            low = x & -x
            image ^= rows[low.bit_length() - 1]
            x ^= low
        new_key = key ^ (image << dst_off)
        new_terms[new_key] = new_terms.get(new_key, 0) + amp
    return _checked(state.layout, new_terms, NORM_TOL)


def apply_xor_const(state: SparseState, reg: str, c: BitVec) -> SparseState:
    """reg ^= c on every term."""
    off, width = state.layout.field(reg)
    if c.n != width:
        raise ValueError(f"constant width {c.n} != register width {width}")
    bits = c.bits << off
    return SparseState(state.layout, {key ^ bits: a for key, a in state.terms.items()})


def apply_linear_bijection(state: SparseState, reg: str, A: BitMatrix) -> SparseState:
    """reg = reg * A on every term, for invertible A (a basis permutation)."""
    off, width = state.layout.field(reg)
    if A.rows != width or A.cols != width:
        raise ValueError(f"matrix is {A.rows}x{A.cols}, need {width}x{width}")
    if rank(A) != width:
        raise ValueError("matrix is singular; the induced map would not be unitary")
    rows = A.row_bits
    mask = (1 << width) - 1
    new_terms: dict[int, complex] = {}
    for key, amp in state.terms.items():
        x = (key >> off) & mask
        image = 0
        while x:
            low = x & -x
            image ^= rows[low.bit_length() - 1]
            x ^= low
        new_terms[(key & ~(mask << off)) | (image << off)] = amp
    return _checked(state.layout, new_terms, NORM_TOL)


def register_distribution(state: SparseState, reg: str) -> dict[int, float]:
    """Born probabilities of each outcome of a register."""
    off, width = state.layout.field(reg)
    mask = (1 << width) - 1
    dist: dict[int, float] = {}
    for key, amp in state.terms.items():
        v = (key >> off) & mask
        dist[v] = dist.get(v, 0.0) + (amp * amp.conjugate()).real
    return dist


def measure_register(
    state: SparseState, reg: str, rng: random.Random
) -> tuple[MeasurementRecord, SparseState]:
    """Projective measurement in the computational basis; collapses the state."""
    off, width = state.layout.field(reg)
    dist = register_distribution(state, reg)
    r = rng.random()
    acc = 0.0
    outcomes = sorted(dist)
    outcome = outcomes[-1]
    for v in outcomes:
        acc += dist[v]
        if r < acc:
            outcome = v
            break
    p = dist[outcome]
    mask = (1 << width) - 1
    scale = 1.0 / math.sqrt(p)
    survivors = {
        key: amp * scale
        for key, amp in state.terms.items()
        if (key >> off) & mask == outcome
    }
    record = MeasurementRecord(reg, BitVec(width, outcome), p)
    return record, _checked(state.layout, survivors, NORM_TOL)


def constant_value(state: SparseState, reg: str) -> int | None:
    """The register's value if identical across all terms, else None."""
    off, width = state.layout.field(reg)
    mask = (1 << width) - 1
    it = iter(state.terms)
    v = (next(it) >> off) & mask
    for key in it:
        if (key >> off) & mask != v:
            return None
    return v


def constant_registers(state: SparseState) -> tuple[str, ...]:
    return tuple(
        name for name, _ in state.layout.regs if constant_value(state, name) is not None
    )


def fidelity(a: SparseState, b: SparseState) -> float:
    """|<a|b>|^2 between pure states over identical layouts."""
    if a.layout != b.layout:
        raise ValueError(
            f"layout mismatch: {a.layout.describe()} vs {b.layout.describe()}"
        )
    if len(b.terms) < len(a.terms):
        a, b = b, a
    inner = 0j
    for key, amp in a.terms.items():
        other = b.terms.get(key)
        if other is not None:
            inner += amp.conjugate() * other
    return abs(inner) ** 2


# ---------------------------------------------------------------------------
# state file format
# ---------------------------------------------------------------------------


def state_to_text(state: SparseState) -> str:
    """Canonical line-oriented text: header, layout, one sorted term per line."""
    width = state.layout.total_width
    lines = [
        STATE_HEADER,
        "layout: " + " ".join(f"{name}:{w}" for name, w in state.layout.regs),
    ]
    rows = []
    for key, amp in state.terms.items():
        bits = BitVec(width, key).to_string()
        rows.append((bits, f"{amp.real:.17g} {amp.imag:.17g} {bits}"))
    rows.sort()
    lines += [line for _, line in rows]
    return "\n".join(lines) + "\n"


def state_from_text(text: str) -> SparseState:
    lines = text.splitlines()
    if not lines or lines[0] != STATE_HEADER:
        raise StateFormatError(f"missing {STATE_HEADER!r} header")
    if len(lines) < 2 or not lines[1].startswith("layout: "):
        raise StateFormatError("missing layout line")
    regs = []
    for item in lines[1][len("layout: ") :].split():
        name, sep, w = item.partition(":")
        if not sep:
            raise StateFormatError(f"bad layout item {item!r}")
        try:
            regs.append((name, int(w)))
        except ValueError:
            raise StateFormatError(f"bad register width in {item!r}") from None
    try:
        layout = RegisterLayout(tuple(regs))
    except ValueError as exc:
        raise StateFormatError(str(exc)) from None
    width = layout.total_width
    terms: dict[int, complex] = {}
    for ln in lines[2:]:
        parts = ln.split()
        if len(parts) != 3:
            raise StateFormatError(f"bad term line {ln!r}")
        try:
            amp = complex(float(parts[0]), float(parts[1]))
        except ValueError:
            raise StateFormatError(f"bad amplitude in {ln!r}") from None
        try:
            v = BitVec.from_string(parts[2])
        except ValueError as exc:
            raise StateFormatError(str(exc)) from None
        if v.n != width:
            raise StateFormatError(f"bit string width {v.n} != layout width {width}")
        if v.bits in terms:
            raise StateFormatError("duplicate basis state in file")
        terms[v.bits] = amp
    if not terms:
        raise StateFormatError("state file lists no terms")
    try:
        return _checked(layout, terms, INPUT_NORM_TOL)
    except ValueError as exc:
        raise StateFormatError(str(exc)) from None
