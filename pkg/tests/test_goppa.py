"""Goppa code construction and Patterson decoding.

The desk-scale code (m=4, n=16, t=2) is small enough for exhaustive oracles:
every error pattern of weight <= 2, every codeword, every support residue.
"""

import itertools
import random

import pytest

from qpkc.bitlinalg import BitMatrix, BitVec, mat_mul, rank, vec_mat_mul
from qpkc.errors import DecodingFailure
from qpkc.gf2m import (
    FieldParams,
    poly_deg,
    poly_eea,
    poly_mod,
    poly_mul,
    poly_mulmod,
    poly_norm,
)
from qpkc.goppa import (
    GoppaCode,
    build_goppa,
    inv_linear_mod_g,
    patterson_decode,
    syndrome_bits,
)

F16 = FieldParams(4, 0x13)


@pytest.fixture(scope="module")
def code() -> GoppaCode:
    return build_goppa(F16, 16, 2, random.Random(2024))


def all_codewords(code: GoppaCode):
    for msg in range(1 << code.k):
        yield vec_mat_mul(BitVec(code.k, msg), code.G)


class TestInvLinear:
    def test_defining_property(self, code):
        for x in code.support:
            r = inv_linear_mod_g(code.params, code.g, x)
            assert poly_mulmod(code.params, r, poly_norm((x, 1)), code.g) == (1,)

    def test_degree_one_gives_constant(self):
        g = (0x5, 1)  # z + 5
        r = inv_linear_mod_g(F16, g, 0x3)
        # (z + 3)^-1 mod (z + 5) is the constant (5 + 3)^-1
        from qpkc.gf2m import fe_inv

        assert r == (fe_inv(F16, 0x5 ^ 0x3),)

    def test_root_clash_raises(self):
        g = (0x5, 1)
        with pytest.raises(ValueError):
            inv_linear_mod_g(F16, g, 0x5)

    def test_matches_eea_inversion_exhaustively(self, code):
        # independent route: invert (z + x) mod g with the extended Euclid
        p = code.params
        for x in code.support:
            lin = poly_norm((x, 1))
            _, v, r = poly_eea(p, code.g, lin, 0)
            from qpkc.gf2m import fe_inv, poly_scale

            expected = poly_scale(p, v, fe_inv(p, r[0]))
            assert inv_linear_mod_g(p, code.g, x) == expected


class TestBuild:
    def test_dimensions_and_identities(self, code):
        assert code.n == 16 and code.t == 2 and code.mt == 8 and code.k == 8
        assert code.G.rows == 8 and code.H.rows == 8
        assert rank(code.G) == 8 and rank(code.H) == 8
        assert mat_mul(code.G, code.Ht) == BitMatrix.zeros(8, 8)
        assert mat_mul(code.G, code.Ginv) == BitMatrix.identity(8)

    def test_support_distinct_and_g_irreducible(self, code):
        assert len(set(code.support)) == code.n
        from qpkc.gf2m import poly_is_irreducible

        assert poly_deg(code.g) == 2 and code.g[-1] == 1
        assert poly_is_irreducible(code.params, code.g)

    def test_parameter_validation(self):
        with pytest.raises(ValueError):
            build_goppa(F16, 8, 2, random.Random(0))  # mt = 8 not < n = 8
        with pytest.raises(ValueError):
            build_goppa(F16, 17, 2, random.Random(0))  # n > 2^m
        with pytest.raises(ValueError):
            build_goppa(F16, 16, 0, random.Random(0))

    def test_deterministic_under_seed(self):
        a = build_goppa(F16, 16, 2, random.Random(7))
        b = build_goppa(F16, 16, 2, random.Random(7))
        assert a == b

    def test_h_columns_match_residue_expansion(self, code):
        m = code.params.m
        for j, x in enumerate(code.support):
            col = inv_linear_mod_g(code.params, code.g, x)
            col = tuple(col) + (0,) * (code.t - len(col))
            expected = 0
            for i, c in enumerate(col):
                expected |= c << (i * m)
            assert code.H.column(j).bits == expected


class TestSyndrome:
    def test_zero_word(self, code):
        assert syndrome_bits(code, BitVec(16)) == BitVec(8)

    def test_codewords_have_zero_syndrome(self, code):
        for i in range(code.G.rows):
            assert syndrome_bits(code, code.G.row(i)).bits == 0

    def test_unit_vectors_give_h_columns(self, code):
        for j in range(code.n):
            s = syndrome_bits(code, BitVec.from_support(16, [j]))
            assert s == code.H.column(j)

    def test_linearity(self, code):
        rng = random.Random(31)
        for _ in range(50):
            a = BitVec(16, rng.getrandbits(16))
            b = BitVec(16, rng.getrandbits(16))
            assert syndrome_bits(code, a ^ b) == syndrome_bits(code, a) ^ syndrome_bits(
                code, b
            )

    def test_length_mismatch(self, code):
        with pytest.raises(ValueError):
            syndrome_bits(code, BitVec(15))


class TestPatterson:
    def test_zero_syndrome(self, code):
        assert patterson_decode(code, BitVec(8)) == BitVec(16)

    def test_all_137_patterns_round_trip(self, code):
        count = 0
        for w in range(3):
            for posns in itertools.combinations(range(16), w):
                e = BitVec.from_support(16, posns)
                assert patterson_decode(code, syndrome_bits(code, e)) == e
                count += 1
        assert count == 137

    def test_weight3_never_silently_wrong(self, code):
        # Exhaustive weight-3 syndromes: either a decoding failure, or some
        # valid weight-<=2 preimage whose syndrome matches; the decoder's own
        # verification must hold on every return.
        preimage = {}
        for w in range(3):
            for posns in itertools.combinations(range(16), w):
                e = BitVec.from_support(16, posns)
                preimage[syndrome_bits(code, e).bits] = e
        for posns in itertools.combinations(range(16), 3):
            e3 = BitVec.from_support(16, posns)
            s = syndrome_bits(code, e3)
            try:
                out = patterson_decode(code, s)
            except DecodingFailure:
                assert s.bits not in preimage
                continue
            assert out.weight() <= 2
            assert syndrome_bits(code, out) == s
            assert out == preimage[s.bits]
            assert out != e3

    def test_syndrome_length_check(self, code):
        with pytest.raises(ValueError):
            patterson_decode(code, BitVec(7))

    def test_distance_witness(self, code):
        # irreducible Goppa minimum distance >= 2t + 1 = 5, exhaustively
        for c in all_codewords(code):
            assert c.bits == 0 or c.weight() >= 5

    def test_fast_sqrt_matches_normative_formula(self, code):
        from qpkc.goppa import _sqrt_mod_cached
        from qpkc.gf2m import poly_sqrt_mod

        rng = random.Random(55)
        for _ in range(100):
            u = poly_norm([rng.randrange(16), rng.randrange(16)])
            assert _sqrt_mod_cached(code, u) == poly_sqrt_mod(code.params, u, code.g)


class TestErrorAtZeroSupportPoint:
    def test_single_error_at_zero(self, code):
        # the T = z corner of the decoder: a lone error at the support point 0
        j = code.support.index(0)
        e = BitVec.from_support(16, [j])
        assert patterson_decode(code, syndrome_bits(code, e)) == e


@pytest.mark.slow
class TestAtScale:
    def test_randomized_round_trips(self):
        params = FieldParams(10, 0x409)
        code = build_goppa(params, 1024, 50, random.Random(9))
        assert code.k == 1024 - 500
        assert mat_mul(code.G, code.Ginv) == BitMatrix.identity(code.k)
        rng = random.Random(10)
        for _ in range(25):
            posns = rng.sample(range(1024), rng.randrange(0, 51))
            e = BitVec.from_support(1024, posns)
            assert patterson_decode(code, syndrome_bits(code, e)) == e
