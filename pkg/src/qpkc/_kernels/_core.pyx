# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernel backend.

Same API and bit-identical results as ``qpkc._kernels._pure``; packed GF(2)
rows cross the boundary as Python ints and are worked on as uint64 word
arrays, GF(2^m) coefficients as uint32 arrays with shift-and-XOR multiplies.
"""

from cpython.bytes cimport PyBytes_AS_STRING, PyBytes_FromStringAndSize
from cpython.mem cimport PyMem_Free, PyMem_Malloc
from libc.stdint cimport uint32_t, uint64_t
from libc.string cimport memcpy, memset

cdef extern from *:
    int __builtin_ctzll(unsigned long long) nogil


cdef inline uint32_t gf_mul(uint32_t a, uint32_t b, int m, uint32_t modulus) nogil:
    cdef uint32_t acc = 0
    while b:
        if b & 1u:
            acc ^= a
        b >>= 1
        a <<= 1
        if (a >> m) & 1u:
            a ^= modulus
    return acc


cdef uint64_t* _rows_to_words(rows, Py_ssize_t nrows, Py_ssize_t nwords) except NULL:
    cdef uint64_t* buf = <uint64_t*> PyMem_Malloc(nrows * nwords * sizeof(uint64_t))
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    cdef Py_ssize_t nbytes = nwords * 8
    cdef bytes bb
    try:
        for i in range(nrows):
            bb = rows[i].to_bytes(nbytes, "little")
            memcpy(buf + i * nwords, PyBytes_AS_STRING(bb), nbytes)
    except BaseException:
        PyMem_Free(buf)
        raise
    return buf


cdef object _words_to_int(uint64_t* row, Py_ssize_t nwords):
    cdef bytes bb = PyBytes_FromStringAndSize(<char*> row, nwords * 8)
    return int.from_bytes(bb, "little")


def rref_packed(rows, ncols):
    """Reduced row echelon form over GF(2) on packed rows.

    Returns (R, rank, pivot columns, T) where T holds the row transform as
    packed rows of width len(rows), satisfying T * input = R.
    """
    cdef Py_ssize_t nrows = len(rows)
    cdef Py_ssize_t nc = ncols
    if nrows == 0:
        return [], 0, [], []
    cdef Py_ssize_t nwords = (nc + 63) // 64 if nc else 1
    cdef Py_ssize_t twords = (nrows + 63) // 64
    cdef uint64_t* R = _rows_to_words(rows, nrows, nwords)
    cdef uint64_t* T = <uint64_t*> PyMem_Malloc(nrows * twords * sizeof(uint64_t))
    if T == NULL:
        PyMem_Free(R)
        raise MemoryError()
    memset(T, 0, nrows * twords * sizeof(uint64_t))
    cdef Py_ssize_t i, w, col, piv, rank, wi
    cdef int bi
    cdef uint64_t mask, tmp
    pivots = []
    rank = 0
    try:
        for i in range(nrows):
            T[i * twords + (i >> 6)] = (<uint64_t> 1) << (i & 63)
        for col in range(nc):
            wi = col >> 6
            bi = col & 63
            mask = (<uint64_t> 1) << bi
            piv = -1
            for i in range(rank, nrows):
                if R[i * nwords + wi] & mask:
                    piv = i
                    break
            if piv < 0:
                continue
            if piv != rank:
                for w in range(nwords):
                    tmp = R[rank * nwords + w]
                    R[rank * nwords + w] = R[piv * nwords + w]
                    R[piv * nwords + w] = tmp
                for w in range(twords):
                    tmp = T[rank * twords + w]
                    T[rank * twords + w] = T[piv * twords + w]
                    T[piv * twords + w] = tmp
            for i in range(nrows):
                if i != rank and (R[i * nwords + wi] & mask):
                    for w in range(nwords):
                        R[i * nwords + w] ^= R[rank * nwords + w]
                    for w in range(twords):
                        T[i * twords + w] ^= T[rank * twords + w]
            pivots.append(col)
            rank += 1
            if rank == nrows:
                break
        r_out = [_words_to_int(R + i * nwords, nwords) for i in range(nrows)]
        t_out = [_words_to_int(T + i * twords, twords) for i in range(nrows)]
    finally:
        PyMem_Free(R)
        PyMem_Free(T)
    return r_out, rank, pivots, t_out


def mat_mul_packed(a_rows, b_rows, b_cols):
    """Rows of A*B over GF(2); row i = XOR of B-rows selected by bits of A row i."""
    cdef Py_ssize_t na = len(a_rows)
    cdef Py_ssize_t nb = len(b_rows)
    out = []
    if na == 0:
        return out
    if nb == 0:
        return [0] * na
    cdef Py_ssize_t bwords = (b_cols + 63) // 64 if b_cols else 1
    cdef Py_ssize_t awords = (nb + 63) // 64
    cdef uint64_t* B = _rows_to_words(b_rows, nb, bwords)
    cdef uint64_t* A = NULL
    cdef uint64_t* acc = NULL
    cdef Py_ssize_t i, w, wj
    cdef Py_ssize_t j
    cdef uint64_t x
    try:
        A = _rows_to_words(a_rows, na, awords)
        acc = <uint64_t*> PyMem_Malloc(bwords * sizeof(uint64_t))
        if acc == NULL:
            raise MemoryError()
        for i in range(na):
            memset(acc, 0, bwords * sizeof(uint64_t))
            for wj in range(awords):
                x = A[i * awords + wj]
                while x:
                    j = (wj << 6) + __builtin_ctzll(x)
                    x &= x - 1
                    for w in range(bwords):
                        acc[w] ^= B[j * bwords + w]
            out.append(_words_to_int(acc, bwords))
    finally:
        PyMem_Free(B)
        if A != NULL:
            PyMem_Free(A)
        if acc != NULL:
            PyMem_Free(acc)
    return out


def poly_square_pow_mod(u, g, times, m, modulus):
    """Square u repeatedly `times` times modulo the monic polynomial g.

    u must have exactly deg(g) entries (coefficients 0..t-1); the result has
    the same shape.  Computes u^(2^times) mod g.
    """
    cdef Py_ssize_t t = len(g) - 1
    if times <= 0 or t == 0:
        return list(u)
    cdef int mm = m
    cdef uint32_t mod = modulus
    cdef Py_ssize_t width = 2 * t - 1
    cdef uint32_t* w = <uint32_t*> PyMem_Malloc((t + width + t + 1) * sizeof(uint32_t))
    if w == NULL:
        raise MemoryError()
    cdef uint32_t* buf = w + t
    cdef uint32_t* gc = buf + width
    cdef Py_ssize_t i, j, base, rep
    cdef uint32_t c
    try:
        for i in range(t):
            w[i] = u[i]
        for i in range(t + 1):
            gc[i] = g[i]
        for rep in range(times):
            memset(buf, 0, width * sizeof(uint32_t))
            for i in range(t):
                c = w[i]
                if c:
                    buf[2 * i] = gf_mul(c, c, mm, mod)
            for i in range(width - 1, t - 1, -1):
                c = buf[i]
                if c:
                    base = i - t
                    for j in range(t):
                        if gc[j]:
                            buf[base + j] ^= gf_mul(c, gc[j], mm, mod)
            memcpy(w, buf, t * sizeof(uint32_t))
        return [w[i] for i in range(t)]
    finally:
        PyMem_Free(w)


def poly_eval_batch(f, xs, m, modulus):
    """Evaluate the polynomial f (little-endian coefficients) at each x via Horner."""
    cdef Py_ssize_t nf = len(f)
    if nf == 0:
        return [0] * len(xs)
    cdef int mm = m
    cdef uint32_t mod = modulus
    cdef uint32_t* fc = <uint32_t*> PyMem_Malloc(nf * sizeof(uint32_t))
    if fc == NULL:
        raise MemoryError()
    cdef Py_ssize_t i, k
    cdef uint32_t acc, xv
    out = []
    try:
        for i in range(nf):
            fc[i] = f[i]
        for k in range(len(xs)):
            xv = xs[k]
            if xv == 0:
                out.append(f[0])
                continue
            acc = fc[nf - 1]
            for i in range(nf - 2, -1, -1):
                acc = gf_mul(acc, xv, mm, mod) ^ fc[i]
            out.append(acc)
    finally:
        PyMem_Free(fc)
    return out
