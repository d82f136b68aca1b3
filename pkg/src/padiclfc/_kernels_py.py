"""Pure-Python reference kernels for the hot tower-arithmetic loops.

Coordinate vectors are flat lists of Python ints (arbitrary precision): a
field element is laid out row-major as e blocks of f unramified-layer
coordinates.  Reduction tables are flat too: `ured` has (f-1)*f entries
with w^(f+t) = sum_j ured[t*f+j] w^j, and `ered` has (e-1)*e*f entries
with pi^(e+s) = sum_i ered[(s*e+i)*f ..][j] w^j pi^i.  The compiled
extension mirrors these signatures exactly; the backend module picks one
implementation per field.
"""

IMPL = "pure"


def zq_mul(a, b, f, ured, pm):
    """Product in Z_p[w]/(unram_poly, p^cap)."""
    conv = [0] * (2 * f - 1)
    for i in range(f):
        ai = a[i]
        if ai:
            for j in range(f):
                bj = b[j]
                if bj:
                    conv[i + j] += ai * bj
    out = conv[:f]
    for t in range(f - 1):
        c = conv[f + t] % pm
        if c:
            base = t * f
            for j in range(f):
                out[j] += c * ured[base + j]
    return [x % pm for x in out]


def field_mul(a, b, e, f, ured, ered, pm):
    """Product of two tower elements (flat e*f coordinate lists)."""
    conv = [None] * (2 * e - 1)
    for i in range(e):
        ablock = a[i * f:(i + 1) * f]
        if not any(ablock):
            continue
        for j in range(e):
            bblock = b[j * f:(j + 1) * f]
            if not any(bblock):
                continue
            prod = zq_mul(ablock, bblock, f, ured, pm)
            tgt = conv[i + j]
            if tgt is None:
                conv[i + j] = prod
            else:
                for t in range(f):
                    tgt[t] += prod[t]
    out = [blk if blk is not None else [0] * f for blk in conv[:e]]
    for s in range(e - 2, -1, -1):
        blk = conv[e + s]
        if blk is None or not any(blk):
            continue
        blk = [x % pm for x in blk]
        for i in range(e):
            base = (s * e + i) * f
            row = ered[base:base + f]
            if any(row):
                prod = zq_mul(blk, row, f, ured, pm)
                tgt = out[i]
                for t in range(f):
                    tgt[t] += prod[t]
    flat = []
    for blk in out:
        flat.extend(x % pm for x in blk)
    return flat


def mat_vec(mat, vec, nrows, ncols, pm):
    """Flat row-major matrix times vector, mod pm."""
    out = []
    for r in range(nrows):
        base = r * ncols
        s = 0
        for c in range(ncols):
            m = mat[base + c]
            v = vec[c]
            if m and v:
                s += m * v
        out.append(s % pm)
    return out
