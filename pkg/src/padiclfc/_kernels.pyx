# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the hot tower-arithmetic loops (int64 path).

Same flat-list signatures as _kernels_py.  The backend only selects this
implementation when width * (pm-1)^2 fits comfortably in int64, so the
accumulators below cannot overflow.
"""

from libc.stdlib cimport malloc, free

IMPL = "compiled"


cdef long long* _to_c(list xs, Py_ssize_t n) except NULL:
    cdef long long* buf = <long long*> malloc(n * sizeof(long long))
    if buf == NULL:
        raise MemoryError()
    cdef Py_ssize_t i
    for i in range(n):
        buf[i] = xs[i]
    return buf


cdef list _to_list(long long* buf, Py_ssize_t n):
    cdef list out = [0] * n
    cdef Py_ssize_t i
    for i in range(n):
        out[i] = buf[i]
    return out


cdef void _zq_mul_c(long long* a, long long* b, Py_ssize_t f,
                    long long* ured, long long pm, long long* out,
                    long long* scratch) nogil:
    # raw accumulation stays below (f+1)*pm^2; the backend's selection
    # bound keeps that inside int64
    cdef Py_ssize_t i, j, t
    cdef long long ai, c
    for i in range(2 * f - 1):
        scratch[i] = 0
    for i in range(f):
        ai = a[i]
        if ai != 0:
            for j in range(f):
                scratch[i + j] += ai * b[j]
    for i in range(f):
        out[i] = scratch[i] % pm
    for t in range(f - 1):
        c = scratch[f + t] % pm
        if c != 0:
            for j in range(f):
                out[j] = (out[j] + c * ured[t * f + j]) % pm
    for i in range(f):
        out[i] = out[i] % pm


def zq_mul(list a, list b, int f, list ured, long long pm):
    cdef long long* ca = _to_c(a, f)
    cdef long long* cb = _to_c(b, f)
    cdef long long* cu = _to_c(ured, (f - 1) * f) if f > 1 else NULL
    cdef long long* out = <long long*> malloc(f * sizeof(long long))
    cdef long long* scratch = <long long*> malloc(
        (2 * f) * sizeof(long long))
    try:
        _zq_mul_c(ca, cb, f, cu, pm, out, scratch)
        return _to_list(out, f)
    finally:
        free(ca); free(cb); free(out); free(scratch)
        if cu != NULL:
            free(cu)


def field_mul(list a, list b, int e, int f, list ured, list ered,
              long long pm):
    cdef Py_ssize_t n = e * f
    cdef long long* ca = _to_c(a, n)
    cdef long long* cb = _to_c(b, n)
    cdef long long* cu = _to_c(ured, (f - 1) * f) if f > 1 else NULL
    cdef long long* ce = _to_c(ered, (e - 1) * e * f) if e > 1 else NULL
    cdef long long* conv = <long long*> malloc(
        (2 * e - 1) * f * sizeof(long long))
    cdef long long* out = <long long*> malloc(n * sizeof(long long))
    cdef long long* prod = <long long*> malloc(f * sizeof(long long))
    cdef long long* scratch = <long long*> malloc(
        (2 * f) * sizeof(long long))
    cdef Py_ssize_t i, j, t, s
    cdef bint nonzero
    try:
        for i in range((2 * e - 1) * f):
            conv[i] = 0
        for i in range(e):
            nonzero = False
            for t in range(f):
                if ca[i * f + t] != 0:
                    nonzero = True
                    break
            if not nonzero:
                continue
            for j in range(e):
                _zq_mul_c(ca + i * f, cb + j * f, f, cu, pm, prod, scratch)
                for t in range(f):
                    conv[(i + j) * f + t] = (
                        conv[(i + j) * f + t] + prod[t]) % pm
        for i in range(n):
            out[i] = conv[i]
        for s in range(e - 2, -1, -1):
            nonzero = False
            for t in range(f):
                if conv[(e + s) * f + t] % pm != 0:
                    nonzero = True
                    break
            if not nonzero:
                continue
            for i in range(e):
                _zq_mul_c(conv + (e + s) * f, ce + (s * e + i) * f, f,
                          cu, pm, prod, scratch)
                for t in range(f):
                    out[i * f + t] = (out[i * f + t] + prod[t]) % pm
        for i in range(n):
            out[i] = out[i] % pm
        return _to_list(out, n)
    finally:
        free(ca); free(cb); free(conv); free(out); free(prod); free(scratch)
        if cu != NULL:
            free(cu)
        if ce != NULL:
            free(ce)


def mat_vec(list mat, list vec, int nrows, int ncols, long long pm):
    cdef long long* cm = _to_c(mat, nrows * ncols)
    cdef long long* cv = _to_c(vec, ncols)
    cdef list out = [0] * nrows
    cdef Py_ssize_t r, c
    cdef long long s
    try:
        for r in range(nrows):
            s = 0
            for c in range(ncols):
                s = (s + cm[r * ncols + c] * cv[c]) % pm
            out[r] = s
        return out
    finally:
        free(cm); free(cv)
