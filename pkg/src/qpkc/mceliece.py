"""Classical McEliece layer: keys, encrypt/decrypt, and key file formats.

The public matrix is Gpub = S * G * P for a random invertible scrambler S
and a random coordinate permutation P over a Goppa code with generator G.
Decryption mirrors, step for step, the pipeline that later runs on
superpositions, so it doubles as the oracle for that pipeline.

Key files are line-oriented text, canonical byte-for-byte:

  QPKC-PUB v1          | QPKC-PRIV v1
  n=.. k=.. t=..       | m=.. modulus=0x.. n=.. k=.. t=..
  k rows of Gpub       | L: n hex field elements
  GINV                 | g: t+1 hex coefficients (z^0 first)
  n rows of GpubInv    | S:
                       | k rows of S
                       | P: n indices

Bit rows print leftmost character = coordinate 0; derived matrices (Sinv,
H, G, Ginv) are recomputed on load rather than stored, and every load
re-verifies the structural invariants.
"""

from __future__ import annotations

import random
from dataclasses import dataclass

from ._rng import derive_stream
from .bitlinalg import (
    BitMatrix,
    BitVec,
    Permutation,
    mat_mul,
    nullspace_basis,
    random_invertible,
    random_permutation,
    right_inverse,
    rref,
    square_inverse,
    vec_mat_mul,
)
from .errors import DecodingFailure, KeyFormatError
from .gf2m import FieldParams, poly_deg, poly_eval_batch, poly_is_irreducible, poly_norm
from .goppa import GoppaCode, _parity_check_rows, build_goppa, patterson_decode, syndrome_bits

PUB_HEADER = "QPKC-PUB v1"
PRIV_HEADER = "QPKC-PRIV v1"


@dataclass(frozen=True)
class PublicKey:
    n: int
    k: int
    t: int
    Gpub: BitMatrix
    GpubInv: BitMatrix


@dataclass(frozen=True)
class PrivateKey:
    S: BitMatrix
    Sinv: BitMatrix
    code: GoppaCode
    P: Permutation
    Pinv: Permutation

    @property
    def n(self) -> int:
        return self.code.n

    @property
    def k(self) -> int:
        return self.code.k

    @property
    def t(self) -> int:
        return self.code.t


def assemble_keypair(
    code: GoppaCode, S: BitMatrix, P: Permutation
) -> tuple[PublicKey, PrivateKey]:
    """Dress a code with a scrambler and permutation; also the test hook for
    forcing S = I or P = id."""
    if S.rows != code.k or S.cols != code.k:
        raise ValueError(f"scrambler must be {code.k}x{code.k}")
    if len(P) != code.n:
        raise ValueError(f"permutation must act on {code.n} coordinates")
    SG = mat_mul(S, code.G)
    Gpub = BitMatrix.from_rows(P.apply(SG.row(i)) for i in range(SG.rows))
    pk = PublicKey(code.n, code.k, code.t, Gpub, right_inverse(Gpub))
    sk = PrivateKey(S, square_inverse(S), code, P, P.inverse())
    return pk, sk


def keygen(params: FieldParams, n: int, t: int, seed: int) -> tuple[PublicKey, PrivateKey]:
    """Deterministic key generation from one seed (independent labeled streams)."""
    code = build_goppa(params, n, t, derive_stream(seed, "goppa"))
    S = random_invertible(code.k, derive_stream(seed, "scrambler"))
    P = random_permutation(n, derive_stream(seed, "permutation"))
    return assemble_keypair(code, S, P)


def public_matrix(sk: PrivateKey) -> BitMatrix:
    """S * G * P recomputed from the private parts (for cross-verification)."""
    SG = mat_mul(sk.S, sk.code.G)
    return BitMatrix.from_rows(sk.P.apply(SG.row(i)) for i in range(SG.rows))


def sample_error(n: int, t: int, rng: random.Random) -> BitVec:
    """Uniform weight-exactly-t vector via a partial Fisher-Yates selection."""
    if not 0 <= t <= n:
        raise ValueError(f"cannot place {t} errors in {n} positions")
    arr = list(range(n))
    for i in range(t):
        j = rng.randrange(i, n)
        arr[i], arr[j] = arr[j], arr[i]
    return BitVec.from_support(n, arr[:t])


def encrypt(
    pk: PublicKey,
    msg: BitVec,
    rng: random.Random | None = None,
    *,
    error: BitVec | None = None,
) -> BitVec:
    """c = msg * Gpub + e with a fresh weight-t error (or the hook-provided one)."""
    if msg.n != pk.k:
        raise ValueError(f"message length {msg.n} != k = {pk.k}")
    if error is None:
        if rng is None:
            raise ValueError("an rng is required when no explicit error is given")
        error = sample_error(pk.n, pk.t, rng)
    elif error.n != pk.n:
        raise ValueError(f"error length {error.n} != n = {pk.n}")
    return vec_mat_mul(msg, pk.Gpub) ^ error


def decrypt(sk: PrivateKey, c: BitVec) -> BitVec:
    """Invert encrypt: unpermute, decode the syndrome, strip the error,
    pull the message back through the right inverse, unscramble."""
    if c.n != sk.n:
        raise ValueError(f"ciphertext length {c.n} != n = {sk.n}")
    c1 = sk.Pinv.apply(c)
    s = syndrome_bits(sk.code, c1)
    e1 = patterson_decode(sk.code, s)
    y = c1 ^ e1
    if syndrome_bits(sk.code, y).bits != 0:
        raise DecodingFailure("residual parity after error removal")
    u = vec_mat_mul(y, sk.code.Ginv)
    return vec_mat_mul(u, sk.Sinv)


# ---------------------------------------------------------------------------
# key file formats
# ---------------------------------------------------------------------------


def _parse_kv(line: str, expected_keys: list[str], where: str) -> dict[str, int]:
    parts = line.split()
    if [p.split("=", 1)[0] for p in parts] != expected_keys:
        raise KeyFormatError(f"{where}: expected fields {' '.join(expected_keys)}")
    out = {}
    for part in parts:
        key, _, val = part.partition("=")
        try:
            out[key] = int(val, 0)
        except ValueError:
            raise KeyFormatError(f"{where}: bad integer for {key}: {val!r}") from None
    return out


def _parse_bit_rows(lines: list[str], count: int, width: int, where: str) -> tuple[int, ...]:
    if len(lines) != count:
        raise KeyFormatError(f"{where}: expected {count} rows, got {len(lines)}")
    rows = []
    for ln in lines:
        if len(ln) != width or ln.strip("01"):
            raise KeyFormatError(f"{where}: bad {width}-bit row {ln!r}")
        rows.append(BitVec.from_string(ln).bits)
    return tuple(rows)


def serialize_public_key(pk: PublicKey) -> str:
    lines = [PUB_HEADER, f"n={pk.n} k={pk.k} t={pk.t}"]
    lines += pk.Gpub.to_strings()
    lines.append("GINV")
    lines += pk.GpubInv.to_strings()
    return "\n".join(lines) + "\n"


def parse_public_key(text: str) -> PublicKey:
    lines = text.splitlines()
    if not lines or lines[0] != PUB_HEADER:
        raise KeyFormatError(f"missing {PUB_HEADER!r} header")
    if len(lines) < 2:
        raise KeyFormatError("truncated public key")
    dims = _parse_kv(lines[1], ["n", "k", "t"], "public key")
    n, k, t = dims["n"], dims["k"], dims["t"]
    if n <= 0 or k <= 0 or t <= 0 or k >= n:
        raise KeyFormatError(f"implausible dimensions n={n} k={k} t={t}")
    if len(lines) != 2 + k + 1 + n:
        raise KeyFormatError("truncated or oversized public key")
    if lines[2 + k] != "GINV":
        raise KeyFormatError("missing GINV separator")
    Gpub = BitMatrix(k, n, _parse_bit_rows(lines[2 : 2 + k], k, n, "Gpub"))
    GpubInv = BitMatrix(n, k, _parse_bit_rows(lines[3 + k :], n, k, "GpubInv"))
    if mat_mul(Gpub, GpubInv) != BitMatrix.identity(k):
        raise KeyFormatError("Gpub * GpubInv != I; key material inconsistent")
    return PublicKey(n, k, t, Gpub, GpubInv)


def serialize_private_key(sk: PrivateKey) -> str:
    p = sk.code.params
    width = (p.m + 3) // 4
    lines = [
        PRIV_HEADER,
        f"m={p.m} modulus=0x{p.modulus:x} n={sk.n} k={sk.k} t={sk.t}",
        "L: " + " ".join(f"{x:0{width}x}" for x in sk.code.support),
        "g: " + " ".join(f"{c:0{width}x}" for c in sk.code.g),
        "S:",
    ]
    lines += sk.S.to_strings()
    lines.append("P: " + " ".join(str(i) for i in sk.P.mapping))
    return "\n".join(lines) + "\n"


def _rebuild_code(
    params: FieldParams, support: tuple[int, ...], g, n: int, k: int, t: int
) -> GoppaCode:
    mt = params.m * t
    if k != n - mt:
        raise KeyFormatError(f"k={k} inconsistent with n - mt = {n - mt}")
    if len(support) != n or len(set(support)) != n:
        raise KeyFormatError("support is not n distinct elements")
    if any(x >> params.m for x in support):
        raise KeyFormatError("support element outside the field")
    if poly_deg(g) != t or g[-1] != 1:
        raise KeyFormatError("g is not monic of degree t")
    if not poly_is_irreducible(params, g):
        raise KeyFormatError("g is reducible")
    if any(v == 0 for v in poly_eval_batch(params, g, support)):
        raise KeyFormatError("g vanishes on a support element")
    H = BitMatrix(mt, n, tuple(_parity_check_rows(params, support, g)))
    if rref(H).rank != mt:
        raise KeyFormatError("parity check matrix is rank deficient")
    G = nullspace_basis(H)
    return GoppaCode(params, support, g, H, G, right_inverse(G))


def parse_private_key(text: str) -> PrivateKey:
    lines = text.splitlines()
    if not lines or lines[0] != PRIV_HEADER:
        raise KeyFormatError(f"missing {PRIV_HEADER!r} header")
    if len(lines) < 5:
        raise KeyFormatError("truncated private key")
    dims = _parse_kv(lines[1], ["m", "modulus", "n", "k", "t"], "private key")
    m, modulus, n, k, t = (dims[x] for x in ("m", "modulus", "n", "k", "t"))
    try:
        params = FieldParams(m, modulus)
    except ValueError as exc:
        raise KeyFormatError(str(exc)) from None
    if len(lines) != 5 + k + 1:
        raise KeyFormatError("truncated or oversized private key")
    if not lines[2].startswith("L: ") or not lines[3].startswith("g: "):
        raise KeyFormatError("missing L:/g: lines")
    try:
        support = tuple(int(x, 16) for x in lines[2][3:].split())
        g = poly_norm(int(x, 16) for x in lines[3][3:].split())
    except ValueError:
        raise KeyFormatError("bad hex in L:/g: lines") from None
    if len(lines[3][3:].split()) != t + 1:
        raise KeyFormatError(f"g must list exactly t+1 = {t + 1} coefficients")
    if lines[4] != "S:":
        raise KeyFormatError("missing S: section")
    code = _rebuild_code(params, support, g, n, k, t)
    S = BitMatrix(k, k, _parse_bit_rows(lines[5 : 5 + k], k, k, "S"))
    try:
        Sinv = square_inverse(S)
    except ValueError:
        raise KeyFormatError("scrambler S is singular") from None
    pline = lines[5 + k]
    if not pline.startswith("P: "):
        raise KeyFormatError("missing P: line")
    try:
        P = Permutation(tuple(int(x) for x in pline[3:].split()))
    except ValueError:
        raise KeyFormatError("P is not a permutation") from None
    if len(P) != n:
        raise KeyFormatError(f"P acts on {len(P)} coordinates, expected {n}")
    return PrivateKey(S, Sinv, code, P, P.inverse())
