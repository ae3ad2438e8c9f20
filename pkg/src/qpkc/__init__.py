"""McEliece over binary Goppa codes, plus a sparse basis-state simulator
that runs the encode/decode pipeline on superpositions of messages.

The compiled kernel extension is used when available; see KERNEL_BACKEND
(or set QPKC_PURE_PYTHON=1 to force the pure-Python fallback).
"""

from ._kernels import BACKEND as KERNEL_BACKEND
from .bitlinalg import BitMatrix, BitVec, Permutation
from .errors import (
    DecodingFailure,
    KeyFormatError,
    ProtocolError,
    QpkcError,
    StateFormatError,
)
from .gf2m import DEFAULT_MODULI, FieldParams
from .goppa import GoppaCode, build_goppa, patterson_decode, syndrome_bits
from .mceliece import (
    PrivateKey,
    PublicKey,
    decrypt,
    encrypt,
    keygen,
    parse_private_key,
    parse_public_key,
    sample_error,
    serialize_private_key,
    serialize_public_key,
)
from .protocol import (
    ProtocolTrace,
    RoundTripReport,
    alice_encrypt,
    bob_decrypt,
    plaintext_state,
    run_roundtrip,
)
from .qsim import (
    MeasurementRecord,
    RegisterLayout,
    SparseState,
    fidelity,
    state_from_terms,
    state_from_text,
    state_to_text,
)

__version__ = "0.1.0"

__all__ = [
    "KERNEL_BACKEND",
    "__version__",
    "BitMatrix",
    "BitVec",
    "Permutation",
    "QpkcError",
    "DecodingFailure",
    "KeyFormatError",
    "ProtocolError",
    "StateFormatError",
    "DEFAULT_MODULI",
    "FieldParams",
    "GoppaCode",
    "build_goppa",
    "patterson_decode",
    "syndrome_bits",
    "PublicKey",
    "PrivateKey",
    "keygen",
    "encrypt",
    "decrypt",
    "sample_error",
    "serialize_public_key",
    "serialize_private_key",
    "parse_public_key",
    "parse_private_key",
    "ProtocolTrace",
    "RoundTripReport",
    "alice_encrypt",
    "bob_decrypt",
    "plaintext_state",
    "run_roundtrip",
    "MeasurementRecord",
    "RegisterLayout",
    "SparseState",
    "fidelity",
    "state_from_terms",
    "state_from_text",
    "state_to_text",
]
