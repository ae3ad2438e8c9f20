"""Arithmetic in GF(2^m) and in the polynomial ring GF(2^m)[z].

Field elements are ints whose bits are coefficients in the polynomial basis
(bit i = coefficient of x^i); addition is XOR.  Polynomials over the field
are tuples of such ints, index i = coefficient of z^i, normalized so the
leading coefficient is nonzero; the zero polynomial is the empty tuple.

All values are immutable and all operations are pure functions.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

from . import _kernels
from ._kernels._pure import _mul_shift_xor

FieldElement = int
FieldPoly = tuple

POLY_ZERO: FieldPoly = ()
POLY_ONE: FieldPoly = (1,)
POLY_Z: FieldPoly = (0, 1)

# One fixed irreducible modulus per extension degree, so that key generation
# and test vectors are reproducible without carrying the modulus around.
DEFAULT_MODULI: dict[int, int] = {
    2: 0x7,
    3: 0xB,
    4: 0x13,
    5: 0x25,
    6: 0x43,
    7: 0x89,
    8: 0x11D,
    9: 0x211,
    10: 0x409,
    11: 0x805,
    12: 0x1053,
    13: 0x201B,
    14: 0x4443,
    15: 0x8003,
    16: 0x1100B,
}


def _gf2_poly_is_irreducible(mask: int) -> bool:
    """Irreducibility of a binary polynomial (bitmask) by trial division."""
    deg = mask.bit_length() - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    if not mask & 1:  # divisible by x
        return False
    for d in range(2, 1 << (deg // 2 + 1)):
        # long division of mask by d over GF(2)
        r = mask
        dd = d.bit_length() - 1
        while r.bit_length() - 1 >= dd:
            r ^= d << (r.bit_length() - 1 - dd)
        if r == 0:
            return False
    return True


@dataclass(frozen=True)
class FieldParams:
    """Parameters of GF(2^m): extension degree and irreducible modulus."""

    m: int
    modulus: int

    def __post_init__(self) -> None:
        if not 2 <= self.m <= 16:
            raise ValueError(f"extension degree m={self.m} outside supported range 2..16")
        if self.modulus.bit_length() - 1 != self.m:
            raise ValueError(f"modulus 0x{self.modulus:x} does not have degree m={self.m}")
        if not _gf2_poly_is_irreducible(self.modulus):
            raise ValueError(f"modulus 0x{self.modulus:x} is reducible over GF(2)")

    @classmethod
    def default(cls, m: int) -> "FieldParams":
        if m not in DEFAULT_MODULI:
            raise ValueError(f"no default modulus for m={m}")
        return cls(m, DEFAULT_MODULI[m])

    @property
    def order(self) -> int:
        return 1 << self.m

    @cached_property
    def _tables(self) -> tuple[list[int], list[int]] | None:
        return _kernels.field_tables(self.m, self.modulus)


def fe_mul(p: FieldParams, a: FieldElement, b: FieldElement) -> FieldElement:
    """Product in GF(2^m)."""
    if a == 0 or b == 0:
        return 0
    tables = p._tables
    if tables is None:
        return _mul_shift_xor(a, b, p.m, p.modulus)
    exp, log = tables
    return exp[log[a] + log[b]]


def fe_inv(p: FieldParams, a: FieldElement) -> FieldElement:
    """Multiplicative inverse; a must be nonzero."""
    if a == 0:
        raise ZeroDivisionError("division by zero in GF(2^m)")
    tables = p._tables
    if tables is not None:
        exp, log = tables
        return exp[(p.order - 1) - log[a]]
    # a^(2^m - 2) by square and multiply
    acc = 1
    base = a
    e = p.order - 2
    while e:
        if e & 1:
            acc = _mul_shift_xor(acc, base, p.m, p.modulus)
        base = _mul_shift_xor(base, base, p.m, p.modulus)
        e >>= 1
    return acc


def fe_sqrt(p: FieldParams, a: FieldElement) -> FieldElement:
    """Square root, i.e. a^(2^(m-1)); squaring is a bijection in characteristic 2."""
    acc = a
    for _ in range(p.m - 1):
        acc = fe_mul(p, acc, acc)
    return acc


def poly_norm(coeffs) -> FieldPoly:
    """Strip trailing zero coefficients and return a tuple."""
    c = list(coeffs)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


def poly_deg(f: FieldPoly) -> int:
    """Degree; -1 for the zero polynomial."""
    return len(f) - 1


def poly_add(a: FieldPoly, b: FieldPoly) -> FieldPoly:
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, c in enumerate(b):
        out[i] ^= c
    return poly_norm(out)


def poly_scale(p: FieldParams, f: FieldPoly, c: FieldElement) -> FieldPoly:
    if c == 0:
        return POLY_ZERO
    return poly_norm(fe_mul(p, x, c) for x in f)


def poly_mul(p: FieldParams, a: FieldPoly, b: FieldPoly) -> FieldPoly:
    if not a or not b:
        return POLY_ZERO
    out = [0] * (len(a) + len(b) - 1)
    for i, ca in enumerate(a):
        if ca:
            for j, cb in enumerate(b):
                if cb:
                    out[i + j] ^= fe_mul(p, ca, cb)
    return poly_norm(out)


def poly_eval(p: FieldParams, f: FieldPoly, x: FieldElement) -> FieldElement:
    """Horner evaluation of f at x."""
    acc = 0
    for c in reversed(f):
        acc = fe_mul(p, acc, x) ^ c
    return acc


def poly_eval_batch(p: FieldParams, f: FieldPoly, xs) -> list[FieldElement]:
    """Evaluate f at every point of xs (kernel-backed)."""
    return _kernels.poly_eval_batch(list(f), list(xs), p.m, p.modulus)


def poly_divmod(p: FieldParams, a: FieldPoly, b: FieldPoly) -> tuple[FieldPoly, FieldPoly]:
    """Quotient and remainder with deg r < deg b."""
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return POLY_ZERO, a
    r = list(a)
    db = len(b) - 1
    q = [0] * (len(a) - db)
    inv_lead = fe_inv(p, b[-1])
    for i in range(len(a) - 1, db - 1, -1):
        c = r[i]
        if c:
            f = fe_mul(p, c, inv_lead)
            q[i - db] = f
            for j, bc in enumerate(b):
                if bc:
                    r[i - db + j] ^= fe_mul(p, f, bc)
    return poly_norm(q), poly_norm(r[:db])


def poly_mod(p: FieldParams, a: FieldPoly, b: FieldPoly) -> FieldPoly:
    return poly_divmod(p, a, b)[1]


def poly_mulmod(p: FieldParams, a: FieldPoly, b: FieldPoly, g: FieldPoly) -> FieldPoly:
    return poly_mod(p, poly_mul(p, a, b), g)


def poly_eea(
    p: FieldParams, a: FieldPoly, b: FieldPoly, stop_deg: int | None = None
) -> tuple[FieldPoly, FieldPoly, FieldPoly]:
    """Extended Euclid on (a, b), maintaining u*a + v*b = r.

    With stop_deg=None, runs to the gcd and returns (u, v, gcd).  Otherwise
    returns the first remainder-sequence entry (a and b included) whose
    degree is <= stop_deg, together with its cofactors.
    """
    if not a and not b:
        raise ValueError("gcd of two zero polynomials is undefined")
    r0, r1 = a, b
    u0, v0 = POLY_ONE, POLY_ZERO
    u1, v1 = POLY_ZERO, POLY_ONE
    if stop_deg is not None and poly_deg(r0) <= stop_deg:
        return u0, v0, r0
    while True:
        if stop_deg is None:
            if not r1:
                return u0, v0, r0
        elif poly_deg(r1) <= stop_deg:
            return u1, v1, r1
        q, r2 = poly_divmod(p, r0, r1)
        r0, r1 = r1, r2
        u0, u1 = u1, poly_add(u0, poly_mul(p, q, u1))
        v0, v1 = v1, poly_add(v0, poly_mul(p, q, v1))


def poly_gcd(p: FieldParams, a: FieldPoly, b: FieldPoly) -> FieldPoly:
    return poly_eea(p, a, b, None)[2]


def poly_monic(p: FieldParams, f: FieldPoly) -> FieldPoly:
    if not f:
        return f
    if f[-1] == 1:
        return f
    return poly_scale(p, f, fe_inv(p, f[-1]))


def poly_square_pow_mod(p: FieldParams, u: FieldPoly, g: FieldPoly, times: int) -> FieldPoly:
    """u^(2^times) mod g for monic g; kernel-backed repeated squaring."""
    t = poly_deg(g)
    if t < 1:
        raise ValueError("modulus polynomial must have degree >= 1")
    if g[-1] != 1:
        raise ValueError("modulus polynomial must be monic")
    if poly_deg(u) >= t:
        u = poly_mod(p, u, g)
    w = list(u) + [0] * (t - len(u))
    out = _kernels.poly_square_pow_mod(w, list(g), times, p.m, p.modulus)
    return poly_norm(out)


def poly_sqrt_mod(p: FieldParams, u: FieldPoly, g: FieldPoly) -> FieldPoly:
    """The unique R with R*R = u mod g, for g irreducible of degree t.

    Squaring is a bijection of the residue field GF(2^(m*t)), so the root
    is u^(2^(m*t - 1)) mod g.
    """
    t = poly_deg(g)
    return poly_square_pow_mod(p, u, g, p.m * t - 1)


def _prime_divisors(n: int) -> list[int]:
    out = []
    d = 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def poly_is_irreducible(p: FieldParams, f: FieldPoly) -> bool:
    """Rabin's criterion over GF(2^m).

    f of degree t is irreducible iff z^(q^t) = z mod f (q = 2^m) and, for
    every prime d dividing t, gcd(z^(q^(t/d)) - z mod f, f) is constant.
    """
    t = poly_deg(f)
    if t < 1:
        raise ValueError("irreducibility is undefined for constant polynomials")
    if t == 1:
        return True
    fm = poly_monic(p, f)
    w = POLY_Z
    cur = 0
    for j in sorted(t // d for d in _prime_divisors(t)):
        w = poly_square_pow_mod(p, w, fm, p.m * (j - cur))
        cur = j
        d = poly_gcd(p, poly_add(w, POLY_Z), fm)
        if poly_deg(d) != 0:
            return False
    w = poly_square_pow_mod(p, w, fm, p.m * (t - cur))
    return w == POLY_Z
