# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled composition sweep; same contract as ``_sweep_py.sweep``."""

from libc.stdint cimport int64_t
from libc.stdlib cimport malloc, free

DEF MAXM = 32
cdef int64_t P = 2147483647


cdef inline int64_t _mod(int64_t x) nogil:
    x %= P
    return x + P if x < 0 else x


cdef int64_t _inv(int64_t a) nogil:
    cdef int64_t t = 0, nt = 1, r = P, nr = a, q, tmp
    while nr:
        q = r // nr
        tmp = t - q * nt; t = nt; nt = tmp
        tmp = r - q * nr; r = nr; nr = tmp
    return t + P if t < 0 else t


cdef class _Sweeper:
    cdef int m, max_piv
    cdef int64_t *mats      # (m + 1) levels of m x m
    cdef int *frees         # (m + 1) levels of free lists
    cdef int nfree[MAXM + 1]
    cdef int d[MAXM]
    cdef int keep[MAXM]
    cdef long long nodes
    cdef bint stop
    cdef object callback

    def __cinit__(self, int m):
        self.m = m
        self.mats = <int64_t *> malloc(sizeof(int64_t) * (m + 1) * m * m)
        self.frees = <int *> malloc(sizeof(int) * (m + 1) * m)

    def __dealloc__(self):
        free(self.mats)
        free(self.frees)

    cdef void level(self, int k, int piv, int rest):
        cdef int m = self.m
        cdef int64_t *mat = self.mats + k * m * m
        cdef int64_t *new = self.mats + (k + 1) * m * m
        cdef int *fr = self.frees + k * m
        cdef int *nfr = self.frees + (k + 1) * m
        cdef int nf = self.nfree[k]
        cdef int hi = rest - (m - k - 1)
        cdef int lo = hi if k == m - 1 else 1
        cdef int dk, i, j, r, s, nkeep, npiv, nnf, ri_idx
        cdef int64_t c, a, ainv, cc, cinv, ri, rk, si, sk, t, tr
        for dk in range(lo, hi + 1):
            if self.stop:
                return
            self.nodes += 1
            self.d[k] = dk
            c = _mod(mat[k * m + k] - dk)
            i = -1
            for j in range(nf):
                if mat[k * m + fr[j]] != 0:
                    i = fr[j]
                    break
            for j in range(m * m):
                new[j] = mat[j]
            nkeep = 0
            if i >= 0:
                a = mat[k * m + i]
                ainv = _inv(a)
                cc = _mod(-_mod(c * ainv) * ainv)
                nnf = 0
                for j in range(nf):
                    if fr[j] != i:
                        self.keep[nkeep] = fr[j]; nkeep += 1
                        nfr[nnf] = fr[j]; nnf += 1
                for r in range(k + 1, m):
                    self.keep[nkeep] = r; nkeep += 1
                for ri_idx in range(nkeep):
                    r = self.keep[ri_idx]
                    ri = mat[r * m + i]
                    rk = mat[r * m + k]
                    if ri == 0 and rk == 0:
                        continue
                    tr = _mod(ri * cc)
                    for j in range(nkeep):
                        s = self.keep[j]
                        si = mat[i * m + s]
                        sk = mat[k * m + s]
                        if si == 0 and sk == 0:
                            continue
                        t = _mod(tr * si)
                        t = _mod(t + _mod(ainv * _mod(_mod(ri * sk) + _mod(rk * si))))
                        new[r * m + s] = _mod(mat[r * m + s] - t)
                npiv = piv + 2
            elif c != 0:
                cinv = _inv(c)
                nnf = nf
                for j in range(nf):
                    self.keep[nkeep] = fr[j]; nkeep += 1
                    nfr[j] = fr[j]
                for r in range(k + 1, m):
                    self.keep[nkeep] = r; nkeep += 1
                for ri_idx in range(nkeep):
                    r = self.keep[ri_idx]
                    rk = mat[r * m + k]
                    if rk == 0:
                        continue
                    t = _mod(rk * cinv)
                    for j in range(nkeep):
                        s = self.keep[j]
                        sk = mat[k * m + s]
                        if sk != 0:
                            new[r * m + s] = _mod(mat[r * m + s] - _mod(t * sk))
                npiv = piv + 1
            else:
                new[k * m + k] = 0
                for j in range(nf):
                    nfr[j] = fr[j]
                nfr[nf] = k
                nnf = nf + 1
                npiv = piv
            if npiv > self.max_piv:
                continue
            self.nfree[k + 1] = nnf
            if k == m - 1:
                if self.callback(tuple([self.d[j] for j in range(m)])):
                    self.stop = True
                    return
            else:
                self.level(k + 1, npiv, rest - dk)


def sweep(structure, int total, int min_defect, callback):
    """Call ``callback(d)`` for each candidate; stop early when it returns True.

    Returns the number of search nodes visited.
    """
    cdef int m = len(structure)
    cdef int i, j
    if m == 0 or total < m or m - min_defect < 0:
        return 0
    if m > MAXM:
        raise ValueError(f"at most {MAXM} edges supported")
    cdef _Sweeper sw = _Sweeper(m)
    sw.max_piv = m - min_defect
    sw.callback = callback
    sw.nodes = 0
    sw.stop = False
    sw.nfree[0] = 0
    for i in range(m):
        for j in range(m):
            sw.mats[i * m + j] = _mod(structure[i][j])
    sw.level(0, 0, total)
    return sw.nodes
