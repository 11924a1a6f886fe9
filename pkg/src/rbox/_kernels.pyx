# cython: language_level=3
# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled bitset kernels: the dense counting/maximization inner loops.

Word-for-word twin of the dense walk in ``_kernels_py``: same candidate
filters, same pruning, same lexicographic order, so counts, maximizers and
``visited`` diagnostics are identical across backends.  Masks are arrays of
64-bit words with one trailing guard word (always zero) so unaligned bit
slices may read one word past the payload.
"""

import math

from libc.stdint cimport int64_t, uint64_t
from libc.string cimport memcpy

cdef extern from *:
    """
    #if defined(__GNUC__) || defined(__clang__)
    static inline int rbox_popcll(unsigned long long x) { return __builtin_popcountll(x); }
    #else
    static inline int rbox_popcll(unsigned long long x) {
        int c = 0;
        while (x) { x &= x - 1; ++c; }
        return c;
    }
    #endif
    """
    int rbox_popcll(unsigned long long x) nogil

cdef uint64_t UMAX = <uint64_t>0xFFFFFFFFFFFFFFFFULL

_py_comb = math.comb


cdef inline Py_ssize_t _nwords(int64_t bits):
    return <Py_ssize_t>((bits + 63) >> 6)


cdef void _slice_bits(uint64_t* src, int64_t bit_off, int64_t nbits, uint64_t* dst):
    # copy src[bit_off : bit_off + nbits]; relies on the guard word for the
    # one-past read when the slice is unaligned
    cdef Py_ssize_t w = <Py_ssize_t>(bit_off >> 6)
    cdef int sh = <int>(bit_off & 63)
    cdef Py_ssize_t out_words = _nwords(nbits)
    cdef Py_ssize_t k
    if sh == 0:
        memcpy(dst, src + w, out_words * sizeof(uint64_t))
    else:
        for k in range(out_words):
            dst[k] = (src[w + k] >> sh) | (src[w + k + 1] << (64 - sh))
    cdef int tail = <int>(nbits & 63)
    if tail:
        dst[out_words - 1] &= ((<uint64_t>1) << tail) - 1


cdef inline int64_t _popcount_words(uint64_t* a, Py_ssize_t words):
    cdef Py_ssize_t k
    cdef int64_t pc = 0
    for k in range(words):
        pc += rbox_popcll(a[k])
    return pc


cdef inline int64_t _and_pc(uint64_t* a, uint64_t* b, uint64_t* dst, Py_ssize_t words):
    cdef Py_ssize_t k
    cdef int64_t pc = 0
    cdef uint64_t v
    for k in range(words):
        v = a[k] & b[k]
        dst[k] = v
        pc += rbox_popcll(v)
    return pc


cdef object _comb_exact(int64_t d, int64_t s):
    # overflow-checked uint64 fast path, exact big-int spill otherwise
    if s < 0 or d < s:
        return 0
    cdef int64_t k = s if s <= d - s else d - s
    if k == 0:
        return 1
    cdef uint64_t res = 1
    cdef int64_t i, f
    for i in range(1, k + 1):
        f = d - k + i
        if res > UMAX // <uint64_t>f:
            return _py_comb(d, s)
        res = res * <uint64_t>f // <uint64_t>i
    return res


cdef class _Arena:
    """Pre-sized per-level buffers for one search.

    Level i consumes a mask over axes i.. and produces fibers over axes
    i+1..; buffers are reused on re-entry, which is safe because the walk
    finishes a level before its caller resumes.
    """

    cdef Py_ssize_t r
    cdef list sizes          # axis sizes, python ints
    cdef list suffix         # suffix[i] = prod(sizes[i+1:])
    cdef list shape
    cdef list needs          # per-level candidate threshold (clamped)
    cdef list fib_bufs       # level -> bytearray-backed uint64 fibers
    cdef list part_bufs      # level -> partial intersection rows
    cdef list cand_bufs      # level -> candidate value array
    cdef list pc_bufs        # level -> candidate popcounts
    cdef list ncand          # level -> number of candidates (mutable ints)

    def __cinit__(self, sizes, shape):
        import array
        self.r = len(sizes)
        self.sizes = list(sizes)
        self.shape = list(shape)
        self.suffix = [1] * self.r
        cdef Py_ssize_t i
        for i in range(self.r - 2, -1, -1):
            self.suffix[i] = self.suffix[i + 1] * self.sizes[i + 1]
        self.needs = [1] * self.r
        for i in range(self.r - 2, -1, -1):
            self.needs[i] = min(self.needs[i + 1] * self.shape[i + 1], self.suffix[i] + 1)
        self.fib_bufs = []
        self.part_bufs = []
        self.cand_bufs = []
        self.pc_bufs = []
        self.ncand = [0] * self.r
        for i in range(self.r - 1):
            words = _nwords(self.suffix[i]) + 1
            self.fib_bufs.append(array.array("Q", bytes(8 * words * self.sizes[i])))
            self.part_bufs.append(array.array("Q", bytes(8 * words * max(1, self.shape[i]))))
            self.cand_bufs.append(array.array("q", bytes(8 * self.sizes[i])))
            self.pc_bufs.append(array.array("q", bytes(8 * self.sizes[i])))


cdef uint64_t* _buf64(object arr):
    cdef uint64_t[::1] mv = arr
    return &mv[0]


cdef int64_t* _buf_i64(object arr):
    cdef int64_t[::1] mv = arr
    return &mv[0]


cdef class _CountRun:
    cdef _Arena a
    cdef object total
    cdef int64_t visited
    cdef int64_t s_last

    def __cinit__(self, arena):
        self.a = arena
        self.total = 0
        self.visited = 0
        self.s_last = self.a.shape[self.a.r - 1]

    cdef void _level(self, uint64_t* mask, Py_ssize_t i):
        cdef int64_t p = self.a.suffix[i]
        cdef Py_ssize_t words = _nwords(p)
        cdef Py_ssize_t stride = words + 1
        cdef int64_t need = self.a.needs[i]
        cdef uint64_t* fib = _buf64(self.a.fib_bufs[i])
        cdef int64_t* pcs = _buf_i64(self.a.pc_bufs[i])
        cdef Py_ssize_t n_i = self.a.sizes[i]
        cdef Py_ssize_t u, ncand = 0
        cdef int64_t pc
        for u in range(n_i):
            _slice_bits(mask, u * p, p, fib + ncand * stride)
            pc = _popcount_words(fib + ncand * stride, words)
            if pc >= need:
                pcs[ncand] = pc
                ncand += 1
        cdef Py_ssize_t s = self.a.shape[i]
        if ncand < s:
            return
        self.a.ncand[i] = ncand
        self._choose(i, 0, s, NULL, words, stride, need)

    cdef void _choose(self, Py_ssize_t i, Py_ssize_t start, Py_ssize_t remaining,
                      uint64_t* acc, Py_ssize_t words, Py_ssize_t stride, int64_t need):
        cdef uint64_t* fib = _buf64(self.a.fib_bufs[i])
        cdef uint64_t* parts = _buf64(self.a.part_bufs[i])
        cdef int64_t* pcs = _buf_i64(self.a.pc_bufs[i])
        cdef Py_ssize_t ncand = self.a.ncand[i]
        cdef Py_ssize_t s = self.a.shape[i]
        cdef Py_ssize_t j
        cdef uint64_t* nxt
        cdef int64_t pc
        for j in range(start, ncand - remaining + 1):
            if acc == NULL:
                nxt = fib + j * stride
                pc = pcs[j]
            else:
                nxt = parts + (s - remaining) * stride
                pc = _and_pc(acc, fib + j * stride, nxt, words)
                if pc < need:
                    continue
            if remaining == 1:
                if i == self.a.r - 2:
                    self.visited += 1
                    self.total = self.total + _comb_exact(pc, self.s_last)
                else:
                    self._level(nxt, i + 1)
            else:
                self._choose(i, j + 1, remaining - 1, nxt, words, stride, need)


cdef class _MaxRun:
    cdef _Arena a
    cdef int64_t visited
    cdef int64_t best_d
    cdef object best_parts
    cdef object best_mask_buf
    cdef list chosen

    def __cinit__(self, arena):
        import array
        self.a = arena
        self.visited = 0
        self.best_d = 0
        self.best_parts = None
        words = _nwords(self.a.suffix[self.a.r - 2]) + 1
        self.best_mask_buf = array.array("Q", bytes(8 * words))
        self.chosen = [[0] * self.a.shape[i] for i in range(self.a.r - 1)]

    cdef void _level(self, uint64_t* mask, Py_ssize_t i):
        cdef int64_t p = self.a.suffix[i]
        cdef Py_ssize_t words = _nwords(p)
        cdef Py_ssize_t stride = words + 1
        cdef int64_t need = self.a.needs[i]
        cdef uint64_t* fib = _buf64(self.a.fib_bufs[i])
        cdef int64_t* pcs = _buf_i64(self.a.pc_bufs[i])
        cdef int64_t* cand = _buf_i64(self.a.cand_bufs[i])
        cdef Py_ssize_t n_i = self.a.sizes[i]
        cdef Py_ssize_t u, ncand = 0
        cdef int64_t pc
        for u in range(n_i):
            _slice_bits(mask, u * p, p, fib + ncand * stride)
            pc = _popcount_words(fib + ncand * stride, words)
            if pc >= need:
                pcs[ncand] = pc
                cand[ncand] = u
                ncand += 1
        cdef Py_ssize_t s = self.a.shape[i]
        if ncand < s:
            return
        self.a.ncand[i] = ncand
        self._choose(i, 0, s, NULL, words, stride, need)

    cdef void _choose(self, Py_ssize_t i, Py_ssize_t start, Py_ssize_t remaining,
                      uint64_t* acc, Py_ssize_t words, Py_ssize_t stride, int64_t need):
        cdef uint64_t* fib = _buf64(self.a.fib_bufs[i])
        cdef uint64_t* parts = _buf64(self.a.part_bufs[i])
        cdef int64_t* pcs = _buf_i64(self.a.pc_bufs[i])
        cdef int64_t* cand = _buf_i64(self.a.cand_bufs[i])
        cdef Py_ssize_t ncand = self.a.ncand[i]
        cdef Py_ssize_t s = self.a.shape[i]
        cdef Py_ssize_t j, k
        cdef uint64_t* nxt
        cdef int64_t pc
        cdef uint64_t* bm
        for j in range(start, ncand - remaining + 1):
            if acc == NULL:
                nxt = fib + j * stride
                pc = pcs[j]
            else:
                nxt = parts + (s - remaining) * stride
                pc = _and_pc(acc, fib + j * stride, nxt, words)
            if pc < need * (self.best_d + 1):
                continue
            (<list>self.chosen[i])[s - remaining] = cand[j]
            if remaining == 1:
                if i == self.a.r - 2:
                    self.visited += 1
                    if pc > self.best_d:
                        self.best_d = pc
                        self.best_parts = tuple(
                            tuple((<list>self.chosen[k])[: self.a.shape[k]])
                            for k in range(self.a.r - 1)
                        )
                        bm = _buf64(self.best_mask_buf)
                        memcpy(bm, nxt, words * sizeof(uint64_t))
                else:
                    self._level(nxt, i + 1)
            else:
                self._choose(i, j + 1, remaining - 1, nxt, words, stride, need)


cdef object _build_mask(object encoded, int64_t bits):
    import array
    cdef Py_ssize_t words = _nwords(bits) + 1
    buf = array.array("Q", bytes(8 * words))
    cdef uint64_t[::1] mv = buf
    cdef int64_t e
    for e in encoded:
        mv[e >> 6] |= (<uint64_t>1) << (e & 63)
    return buf


def count_boxes_flat(axis_sizes, encoded, shape):
    """(count, visited) over the flattened relation; exact big integers."""
    sizes = tuple(axis_sizes)
    shp = tuple(shape)
    cdef Py_ssize_t r = len(sizes)
    if r == 1:
        return _py_comb(len(encoded), shp[0]), 1
    total_bits = 1
    for n in sizes:
        total_bits *= n
    mask_buf = _build_mask(encoded, total_bits)
    arena = _Arena(sizes, shp)
    run = _CountRun(arena)
    cdef uint64_t[::1] mv = mask_buf
    (<_CountRun>run)._level(&mv[0], 0)
    return (<_CountRun>run).total, (<_CountRun>run).visited


def best_rectangle_flat(axis_sizes, encoded, prefix_shape):
    """(best_d, best_parts, best_neighborhood, visited); lex-least maximizer."""
    sizes = tuple(axis_sizes)
    pshape = tuple(prefix_shape)
    cdef Py_ssize_t r = len(sizes)
    if r < 2:
        raise ValueError("rectangle search requires arity >= 2")
    total_bits = 1
    for n in sizes:
        total_bits *= n
    mask_buf = _build_mask(encoded, total_bits)
    arena = _Arena(sizes, pshape + (1,))
    run = _MaxRun(arena)
    cdef uint64_t[::1] mv = mask_buf
    (<_MaxRun>run)._level(&mv[0], 0)
    cdef _MaxRun m = <_MaxRun>run
    if m.best_parts is None:
        return 0, None, (), m.visited
    cdef uint64_t[::1] bm = m.best_mask_buf
    neigh = []
    cdef Py_ssize_t w
    cdef int b
    cdef uint64_t word
    for w in range(len(m.best_mask_buf)):
        word = bm[w]
        while word:
            b = rbox_popcll((word & (~word + 1)) - 1)
            neigh.append((w << 6) + b)
            word &= word - 1
    return m.best_d, m.best_parts, tuple(neigh), m.visited
