"""Command-line interface: key management, classical encrypt/decrypt,
superposition round-trip demos, and the self-test suites.

Conventions: results go to stdout, errors to stderr; every randomized
command requires an explicit --seed (nothing is seeded from the clock).
Bit strings print and parse with the leftmost character as coordinate 0.
Exit codes: 0 ok, 1 usage, 2 data/format, 3 cryptographic/decode failure.
"""

from __future__ import annotations

import argparse
import hashlib
import sys
from pathlib import Path

from ._rng import derive_stream
from .bitlinalg import BitVec
from .errors import DecodingFailure, KeyFormatError, ProtocolError, StateFormatError
from .gf2m import DEFAULT_MODULI, FieldParams
from .mceliece import (
    decrypt,
    encrypt,
    keygen,
    parse_private_key,
    parse_public_key,
    serialize_private_key,
    serialize_public_key,
)
from .protocol import run_roundtrip
from .qsim import state_from_text, state_to_text
from .selftest import run_selftest

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2
EXIT_CRYPTO = 3

INPUT_NORM_TOL = 1e-9


def _bits_argument(text: str) -> BitVec:
    try:
        return BitVec.from_string(text)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _terms_argument(text: str) -> list[tuple[complex, str]]:
    """Parse 'amp:bits,amp:bits,...' with complex amplitudes like 0.5+0.5j."""
    out = []
    for item in text.split(","):
        amp_text, sep, bits = item.partition(":")
        if not sep:
            raise argparse.ArgumentTypeError(f"term {item!r} is missing ':'")
        try:
            amp = complex(amp_text)
        except ValueError:
            raise argparse.ArgumentTypeError(f"bad amplitude {amp_text!r}") from None
        if not bits or bits.strip("01"):
            raise argparse.ArgumentTypeError(f"bad bit string {bits!r}")
        out.append((amp, bits))
    return out


def _field_params(args) -> FieldParams:
    if args.modulus is not None:
        return FieldParams(args.m, args.modulus)
    if args.m not in DEFAULT_MODULI:
        raise ValueError(f"no default modulus for m={args.m}; pass --modulus")
    return FieldParams.default(args.m)


def cmd_keygen(args) -> int:
    pk, sk = keygen(_field_params(args), args.n, args.t, args.seed)
    pub_text = serialize_public_key(pk)
    Path(args.pub).write_text(pub_text)
    Path(args.priv).write_text(serialize_private_key(sk))
    digest = hashlib.sha256(pub_text.encode()).hexdigest()
    print(f"n={pk.n} k={pk.k} t={pk.t}")
    print(f"fingerprint=sha256:{digest}")
    return EXIT_OK


def cmd_encrypt(args) -> int:
    pk = parse_public_key(Path(args.pub).read_text())
    c = encrypt(pk, args.msg, derive_stream(args.seed, "error"))
    print(c.to_string())
    return EXIT_OK


def cmd_decrypt(args) -> int:
    sk = parse_private_key(Path(args.priv).read_text())
    print(decrypt(sk, args.ct).to_string())
    return EXIT_OK


def cmd_qdemo(args) -> int:
    if args.terms is None and args.state_in is None:
        raise ValueError("one of --terms or --state-in is required")
    if args.terms is not None and args.state_in is not None:
        raise ValueError("--terms and --state-in are mutually exclusive")

    if args.terms is not None:
        amps = [amp for amp, _ in args.terms]
        widths = {len(bits) for _, bits in args.terms}
        norm = sum(abs(a) ** 2 for a in amps)
        if abs(norm - 1.0) > INPUT_NORM_TOL:
            raise ValueError(f"terms are not normalized: sum of squares = {norm!r}")
        if len(widths) != 1:
            raise ValueError("all term bit strings must have the same length")
        terms = [(amp, BitVec.from_string(bits)) for amp, bits in args.terms]
    else:
        state = state_from_text(Path(args.state_in).read_text())
        if len(state.layout.regs) != 1:
            raise ValueError("input state must use a single register")
        (name, width), = state.layout.regs
        terms = [
            (amp, BitVec(width, key)) for key, amp in sorted(state.terms.items())
        ]

    params = _field_params(args)
    report = run_roundtrip(params, args.n, args.t, terms, args.seed)
    if args.dump_cipher:
        Path(args.dump_cipher).write_text(state_to_text(report.cipher_state))
    if args.dump_output:
        Path(args.dump_output).write_text(state_to_text(report.output_state))
    print(report.to_text(include_timing=True), end="")
    return EXIT_OK


def cmd_selftest(args) -> int:
    return run_selftest(args.level, trials=args.trials)


class _Parser(argparse.ArgumentParser):
    """argparse defaults to exit code 2 on usage errors; this CLI uses 1."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="qpkc", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    def add_field_args(p, with_seed=True):
        p.add_argument("--m", type=int, required=True, help="extension degree of GF(2^m)")
        p.add_argument("--n", type=int, required=True, help="code length")
        p.add_argument("--t", type=int, required=True, help="correctable errors")
        p.add_argument(
            "--modulus",
            type=lambda s: int(s, 0),
            default=None,
            help="irreducible field modulus as a bitmask (default: per-m standard)",
        )
        if with_seed:
            p.add_argument("--seed", type=int, required=True, help="deterministic seed")

    p = sub.add_parser("keygen", help="generate a key pair and write both key files")
    add_field_args(p)
    p.add_argument("--pub", required=True, help="output path for the public key")
    p.add_argument("--priv", required=True, help="output path for the private key")
    p.set_defaults(func=cmd_keygen)

    p = sub.add_parser("encrypt", help="encrypt a k-bit message to an n-bit ciphertext")
    p.add_argument("--pub", required=True, help="public key file")
    p.add_argument("--msg", type=_bits_argument, required=True, help="k-bit message")
    p.add_argument("--seed", type=int, required=True, help="seed for the error vector")
    p.set_defaults(func=cmd_encrypt)

    p = sub.add_parser("decrypt", help="decrypt an n-bit ciphertext")
    p.add_argument("--priv", required=True, help="private key file")
    p.add_argument("--ct", type=_bits_argument, required=True, help="n-bit ciphertext")
    p.set_defaults(func=cmd_decrypt)

    p = sub.add_parser(
        "qdemo",
        help="run the full superposition round trip and print the step trace",
    )
    add_field_args(p)
    p.add_argument(
        "--terms",
        type=_terms_argument,
        default=None,
        help="plaintext state as 'amp:bits,...' (k-bit strings, leftmost = bit 0)",
    )
    p.add_argument("--state-in", default=None, help="read the plaintext state from a file")
    p.add_argument("--dump-cipher", default=None, help="write the ciphertext state here")
    p.add_argument("--dump-output", default=None, help="write the decoded state here")
    p.set_defaults(func=cmd_qdemo)

    p = sub.add_parser("selftest", help="run the built-in property suites")
    p.add_argument("--level", choices=("quick", "full"), default="quick")
    p.add_argument(
        "--trials", type=int, default=10_000, help="randomized decode trials (full level)"
    )
    p.set_defaults(func=cmd_selftest)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except (KeyFormatError, StateFormatError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except (DecodingFailure, ProtocolError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CRYPTO
    except (ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA


if __name__ == "__main__":
    sys.exit(main())
