"""Binary irreducible Goppa codes and Patterson syndrome decoding.

A code is fixed by a support L of n distinct GF(2^m) elements and a monic
irreducible polynomial g(z) of degree t with g(L_j) != 0.  Its parity check
matrix H is mt x n binary: column j stacks the t coefficients of the residue
(z + L_j)^(-1) mod g, m bits per coefficient, little-endian within each
coefficient (row i*m + b holds bit b of coefficient i).  The generator G
spans the kernel of H, and the build retries until rank(H) = mt so that
k = n - mt exactly.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from functools import cached_property

from .bitlinalg import (
    BitMatrix,
    BitVec,
    nullspace_basis,
    random_permutation,
    right_inverse,
    rref,
    vec_mat_mul,
)
from .errors import DecodingFailure
from .gf2m import (
    POLY_Z,
    POLY_ZERO,
    FieldParams,
    FieldPoly,
    fe_inv,
    fe_mul,
    fe_sqrt,
    poly_add,
    poly_deg,
    poly_eval,
    poly_eval_batch,
    poly_eea,
    poly_is_irreducible,
    poly_mod,
    poly_mul,
    poly_mulmod,
    poly_norm,
    poly_scale,
    poly_sqrt_mod,
)

BUILD_RETRY_CAP = 100


@dataclass(frozen=True)
class GoppaCode:
    """Immutable code with its private structure and cached derived matrices."""

    params: FieldParams
    support: tuple[int, ...]
    g: FieldPoly
    H: BitMatrix
    G: BitMatrix
    Ginv: BitMatrix

    @property
    def n(self) -> int:
        return len(self.support)

    @property
    def t(self) -> int:
        return poly_deg(self.g)

    @property
    def mt(self) -> int:
        return self.params.m * self.t

    @property
    def k(self) -> int:
        return self.n - self.mt

    @cached_property
    def Ht(self) -> BitMatrix:
        """H transposed (n x mt), the syndrome map as a right-multiplier."""
        return self.H.transpose()

    @cached_property
    def sqrt_z(self) -> FieldPoly:
        """Square root of z in GF(2^m)[z]/g, cached for decoding."""
        return poly_sqrt_mod(self.params, poly_mod(self.params, POLY_Z, self.g), self.g)


def inv_linear_mod_g(p: FieldParams, g: FieldPoly, x: int) -> FieldPoly:
    """The residue (z + x)^(-1) mod g, via exact division of g(z) + g(x).

    (g(z) + g(x)) is divisible by (z + x); scaling the quotient by g(x)^(-1)
    gives a polynomial of degree < t whose product with (z + x) is 1 mod g.
    """
    t = poly_deg(g)
    gx = poly_eval(p, g, x)
    if gx == 0:
        raise ValueError("support element is a root of g")
    # synthetic division of g(z) + g(x) by (z + x), top down
    q = [0] * t
    q[t - 1] = g[t]
    for i in range(t - 1, 0, -1):
        q[i - 1] = g[i] ^ fe_mul(p, x, q[i])
    return poly_scale(p, poly_norm(q), fe_inv(p, gx))


def _sample_irreducible(p: FieldParams, t: int, rng: random.Random) -> FieldPoly:
    """Monic irreducible of degree t by rejection sampling."""
    cap = 1000 * (t + 1)
    for _ in range(cap):
        coeffs = [rng.randrange(p.order) for _ in range(t)] + [1]
        f = poly_norm(coeffs)
        if poly_is_irreducible(p, f):
            return f
    raise RuntimeError(f"no irreducible polynomial of degree {t} found in {cap} draws")


def _parity_check_rows(p: FieldParams, support, g: FieldPoly) -> list[int]:
    """Rows of H as packed ints, column j from the residue at support[j]."""
    t = poly_deg(g)
    m = p.m
    rows = [0] * (m * t)
    for j, x in enumerate(support):
        col = inv_linear_mod_g(p, g, x)
        bit = 1 << j
        for i, c in enumerate(col):
            base = i * m
            while c:
                low = c & -c
                rows[base + low.bit_length() - 1] |= bit
                c ^= low
    return rows


def build_goppa(params: FieldParams, n: int, t: int, rng: random.Random) -> GoppaCode:
    """Sample a code with k = n - mt exactly, retrying on rank-deficient H."""
    if t < 1:
        raise ValueError("t must be >= 1")
    if n > params.order:
        raise ValueError(f"support size n={n} exceeds field size {params.order}")
    mt = params.m * t
    if mt >= n:
        raise ValueError(f"mt = {mt} must be smaller than n = {n}")
    for _ in range(BUILD_RETRY_CAP):
        support = random_permutation(params.order, rng).mapping[:n]
        g = _sample_irreducible(params, t, rng)
        if any(v == 0 for v in poly_eval_batch(params, g, support)):
            continue  # only possible for t = 1
        rows = _parity_check_rows(params, support, g)
        H = BitMatrix(mt, n, tuple(rows))
        if rref(H).rank != mt:
            continue
        G = nullspace_basis(H)
        return GoppaCode(params, support, g, H, G, right_inverse(G))
    raise RuntimeError(f"no full-rank parity check matrix after {BUILD_RETRY_CAP} attempts")


def syndrome_bits(code: GoppaCode, word: BitVec) -> BitVec:
    """word * H^T: packed coefficients of sum of (z + L_j)^(-1) over set bits."""
    if word.n != code.n:
        raise ValueError(f"word length {word.n} != n = {code.n}")
    return vec_mat_mul(word, code.Ht)


def _syndrome_poly(code: GoppaCode, syndrome: BitVec) -> FieldPoly:
    m = code.params.m
    mask = (1 << m) - 1
    return poly_norm((syndrome.bits >> (i * m)) & mask for i in range(code.t))


def _sqrt_mod_cached(code: GoppaCode, w: FieldPoly) -> FieldPoly:
    """Square root mod g via the even/odd split and the cached sqrt of z.

    w = A(z)^2 + z*B(z)^2 with A, B collecting the element square roots of
    the even/odd coefficients, so sqrt(w) = A + sqrt(z)*B mod g.
    """
    p = code.params
    even = poly_norm(fe_sqrt(p, c) for c in w[0::2])
    odd = poly_norm(fe_sqrt(p, c) for c in w[1::2])
    return poly_add(even, poly_mulmod(p, odd, code.sqrt_z, code.g))


def patterson_decode(code: GoppaCode, syndrome: BitVec) -> BitVec:
    """Recover the unique error of weight <= t with the given syndrome.

    Steps: unpack the syndrome into S(z); invert it mod g; split
    T + z = R^2; run the Euclidean degree split g, R down to degree t/2
    to get a = b*R mod g; form the locator sigma = a^2 + z*b^2; read error
    positions off the roots of sigma among the support; verify the result
    (root count = deg sigma and syndrome match) and fail loudly otherwise.
    """
    if syndrome.n != code.mt:
        raise ValueError(f"syndrome length {syndrome.n} != mt = {code.mt}")
    p = code.params
    S = _syndrome_poly(code, syndrome)
    if not S:
        return BitVec(code.n)
    _, v, r = poly_eea(p, code.g, S, 0)
    T = poly_scale(p, v, fe_inv(p, r[0]))
    w = poly_mod(p, poly_add(T, POLY_Z), code.g)
    if not w:
        sigma = POLY_Z  # single error at the support point 0
    else:
        R = _sqrt_mod_cached(code, w)
        _, b, a = poly_eea(p, code.g, R, code.t // 2)
        sigma = poly_add(poly_mul(p, a, a), (0,) + poly_mul(p, b, b))
    values = poly_eval_batch(p, sigma, code.support)
    bits = 0
    for j, val in enumerate(values):
        if val == 0:
            bits |= 1 << j
    err = BitVec(code.n, bits)
    if err.weight() != poly_deg(sigma) or syndrome_bits(code, err) != syndrome:
        raise DecodingFailure(
            f"no weight-<={code.t} error matches the syndrome "
            f"(locator degree {poly_deg(sigma)}, roots in support {err.weight()})"
        )
    return err
