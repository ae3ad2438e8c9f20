"""Pure-Python kernel backend.

Matrices over GF(2) travel as lists of ints, one int per row, bit j of the
int = column j.  GF(2^m) polynomials travel as fixed-length coefficient
lists (index i = coefficient of z^i), with field elements in the polynomial
basis (bit i of the int = coefficient of x^i).

This module is the reference implementation; the compiled backend in
``_core`` must produce bit-identical results for every function here.
"""

from __future__ import annotations


def _mul_shift_xor(a: int, b: int, m: int, modulus: int) -> int:
    """Multiply two GF(2^m) elements by shift-and-XOR with reduction."""
    acc = 0
    while b:
        if b & 1:
            acc ^= a
        b >>= 1
        a <<= 1
        if (a >> m) & 1:
            a ^= modulus
    return acc


_TABLE_CACHE: dict[tuple[int, int], tuple[list[int], list[int]] | None] = {}
_SQUARE_CACHE: dict[tuple[int, int], list[int]] = {}

# Log/antilog tables are an optimization for small fields only; larger
# extensions fall back to shift-and-XOR multiplies.
_TABLE_MAX_M = 12


def field_tables(m: int, modulus: int) -> tuple[list[int], list[int]] | None:
    """Return (exp, log) tables for GF(2^m), or None when m > 12.

    ``exp`` is doubled in length so that exp[log[a] + log[b]] never needs a
    modular reduction; ``log[0]`` is meaningless and must not be read.
    """
    key = (m, modulus)
    if key in _TABLE_CACHE:
        return _TABLE_CACHE[key]
    if m > _TABLE_MAX_M:
        _TABLE_CACHE[key] = None
        return None
    q = 1 << m
    tables = None
    for alpha in range(2, q):
        exp = [0] * (2 * (q - 1))
        log = [0] * q
        v = 1
        primitive = True
        for i in range(q - 1):
            if v == 1 and i > 0:
                primitive = False
                break
            exp[i] = v
            log[v] = i
            v = _mul_shift_xor(v, alpha, m, modulus)
        if primitive and v == 1:
            for i in range(q - 1, 2 * (q - 1)):
                exp[i] = exp[i - (q - 1)]
            tables = (exp, log)
            break
    if tables is None:
        raise ValueError(f"no primitive element found; 0x{modulus:x} is not irreducible")
    _TABLE_CACHE[key] = tables
    return tables


def _square_table(m: int, modulus: int) -> list[int]:
    key = (m, modulus)
    table = _SQUARE_CACHE.get(key)
    if table is None:
        table = [_mul_shift_xor(c, c, m, modulus) for c in range(1 << m)]
        _SQUARE_CACHE[key] = table
    return table


def rref_packed(
    rows: list[int], ncols: int
) -> tuple[list[int], int, list[int], list[int]]:
    """Reduced row echelon form over GF(2) on packed rows.

    Returns (R, rank, pivot columns, T) where T holds the row transform as
    packed rows of width len(rows), satisfying T * input = R.
    """
    r = list(rows)
    nrows = len(r)
    t = [1 << i for i in range(nrows)]
    pivots: list[int] = []
    rank = 0
    for col in range(ncols):
        mask = 1 << col
        piv = -1
        for i in range(rank, nrows):
            if r[i] & mask:
                piv = i
                break
        if piv < 0:
            continue
        if piv != rank:
            r[rank], r[piv] = r[piv], r[rank]
            t[rank], t[piv] = t[piv], t[rank]
        rr = r[rank]
        tt = t[rank]
        for i in range(nrows):
            if (r[i] & mask) and i != rank:
                r[i] ^= rr
                t[i] ^= tt
        pivots.append(col)
        rank += 1
        if rank == nrows:
            break
    return r, rank, pivots, t


def mat_mul_packed(a_rows: list[int], b_rows: list[int], b_cols: int) -> list[int]:
    """Rows of A*B over GF(2); row i = XOR of B-rows selected by bits of A row i."""
    out = []
    for a in a_rows:
        acc = 0
        x = a
        while x:
            low = x & -x
            acc ^= b_rows[low.bit_length() - 1]
            x ^= low
        out.append(acc)
    return out


def poly_square_pow_mod(
    u: list[int], g: list[int], times: int, m: int, modulus: int
) -> list[int]:
    """Square u repeatedly `times` times modulo the monic polynomial g.

    u must have exactly deg(g) entries (coefficients 0..t-1); the result has
    the same shape.  Computes u^(2^times) mod g.
    """
    t = len(g) - 1
    w = list(u)
    if times <= 0 or t == 0:
        return w
    tables = field_tables(m, modulus)
    if tables is None:
        return _square_pow_generic(w, g, times, m, modulus)
    exp, log = tables
    sq = _square_table(m, modulus)
    gpairs = [(j, log[c]) for j, c in enumerate(g[:t]) if c]
    width = 2 * t - 1
    for _ in range(times):
        buf = [0] * width
        for i in range(t):
            c = w[i]
            if c:
                buf[2 * i] = sq[c]
        for i in range(width - 1, t - 1, -1):
            c = buf[i]
            if c:
                lc = log[c]
                base = i - t
                for j, lg in gpairs:
                    buf[base + j] ^= exp[lc + lg]
        w = buf[:t]
    return w


def _square_pow_generic(
    w: list[int], g: list[int], times: int, m: int, modulus: int
) -> list[int]:
    t = len(g) - 1
    width = 2 * t - 1
    for _ in range(times):
        buf = [0] * width
        for i in range(t):
            c = w[i]
            if c:
                buf[2 * i] = _mul_shift_xor(c, c, m, modulus)
        for i in range(width - 1, t - 1, -1):
            c = buf[i]
            if c:
                base = i - t
                for j in range(t):
                    gc = g[j]
                    if gc:
                        buf[base + j] ^= _mul_shift_xor(c, gc, m, modulus)
        w = buf[:t]
    return w


def poly_eval_batch(f: list[int], xs: list[int], m: int, modulus: int) -> list[int]:
    """Evaluate the polynomial f (little-endian coefficients) at each x via Horner."""
    if not f:
        return [0] * len(xs)
    tables = field_tables(m, modulus)
    c0 = f[0]
    top = f[-1]
    rest = f[-2::-1]
    out = []
    if tables is None:
        for x in xs:
            if x == 0:
                out.append(c0)
                continue
            acc = top
            for c in rest:
                acc = _mul_shift_xor(acc, x, m, modulus) ^ c
            out.append(acc)
        return out
    exp, log = tables
    for x in xs:
        if x == 0:
            out.append(c0)
            continue
        lx = log[x]
        acc = top
        for c in rest:
            if acc:
                acc = exp[log[acc] + lx] ^ c
            else:
                acc = c
        out.append(acc)
    return out
