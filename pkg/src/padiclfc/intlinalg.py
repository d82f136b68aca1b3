"""Integer and modular linear algebra used across the package.

Four kinds of problems show up:

  * Gaussian elimination over F_p (residue solvers),
  * exact integer kernels and echelon lattices (cocycle conditions over Z),
  * linear congruence systems over Z/m (coboundary solving; m is split
    into prime powers by CRT and each prime-power system is eliminated
    with minimum-valuation pivoting),
  * presentations of finite quotients with a known exponent bound
    (cohomology groups, where |G| annihilates everything and all Smith
    form work can be reduced modulo that bound).

Matrices are lists of lists of Python ints unless stated otherwise; numpy
is only used where entries are guaranteed to stay well inside int64.
"""

import numpy as np


def xgcd(a, b):
    """(g, u, v) with u*a + v*b = g = gcd(a, b) >= 0."""
    old_r, r = a, b
    old_s, s = 1, 0
    old_t, t = 0, 1
    while r:
        q = old_r // r
        old_r, r = r, old_r - q * r
        old_s, s = s, old_s - q * s
        old_t, t = t, old_t - q * t
    if old_r < 0:
        old_r, old_s, old_t = -old_r, -old_s, -old_t
    return old_r, old_s, old_t


def solve_mod_p(matrix, rhs, p):
    """Solve M x = rhs over F_p; first-nonzero pivoting, free variables 0.

    Returns a coordinate list, or None if inconsistent.
    """
    rows = [[v % p for v in row] + [b % p] for row, b in zip(matrix, rhs)]
    nrows, ncols = len(rows), len(matrix[0]) if matrix else 0
    pivots = {}
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, nrows):
            if rows[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = pow(rows[r][c], p - 2, p) if p > 2 else rows[r][c]
        rows[r] = [(v * inv) % p for v in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
        pivots[c] = r
        r += 1
        if r == nrows:
            break
    for i in range(r, nrows):
        if rows[i][ncols]:
            return None
    sol = [0] * ncols
    for c, i in pivots.items():
        sol[c] = rows[i][ncols]
    return sol


def kernel_mod_p(matrix, p, ncols=None):
    """Basis of the kernel of M over F_p, as a list of coordinate lists."""
    if ncols is None:
        ncols = len(matrix[0]) if matrix else 0
    rows = [[v % p for v in row] for row in matrix]
    nrows = len(rows)
    pivots = {}
    r = 0
    for c in range(ncols):
        pivot_row = None
        for i in range(r, nrows):
            if rows[i][c]:
                pivot_row = i
                break
        if pivot_row is None:
            continue
        rows[r], rows[pivot_row] = rows[pivot_row], rows[r]
        inv = pow(rows[r][c], p - 2, p) if p > 2 else rows[r][c]
        rows[r] = [(v * inv) % p for v in rows[r]]
        for i in range(nrows):
            if i != r and rows[i][c]:
                f = rows[i][c]
                rows[i] = [(a - f * b) % p for a, b in zip(rows[i], rows[r])]
        pivots[c] = r
        r += 1
        if r == nrows:
            break
    basis = []
    for c in range(ncols):
        if c in pivots:
            continue
        vec = [0] * ncols
        vec[c] = 1
        for pc, pr in pivots.items():
            vec[pc] = (-rows[pr][c]) % p
        basis.append(vec)
    return basis


def int_kernel(matrix, ncols):
    """Basis of the integer kernel of a matrix (rows = equations).

    Column elimination with extended-gcd combinations; the companion matrix
    of column operations yields the kernel columns.
    """
    rows = [list(r) for r in matrix]
    nrows = len(rows)
    comp = [[1 if i == j else 0 for j in range(ncols)] for i in range(ncols)]

    def col_combine(c1, c2, a, b, c, d):
        # (col c1, col c2) <- (a*col c1 + b*col c2, c*col c1 + d*col c2)
        for row in rows:
            x, y = row[c1], row[c2]
            row[c1], row[c2] = a * x + b * y, c * x + d * y
        for row in comp:
            x, y = row[c1], row[c2]
            row[c1], row[c2] = a * x + b * y, c * x + d * y

    rank_col = 0
    for r in range(nrows):
        row = rows[r]
        # eliminate all but one entry of this row among columns >= rank_col
        lead = None
        for c in range(rank_col, ncols):
            if row[c]:
                lead = c
                break
        if lead is None:
            continue
        for c in range(lead + 1, ncols):
            if row[c]:
                g, u, v = xgcd(row[lead], row[c])
                a, b = row[lead] // g, row[c] // g
                col_combine(lead, c, u, v, -b, a)
        if lead != rank_col:
            col_combine(rank_col, lead, 0, 1, 1, 0)
        rank_col += 1
        if rank_col == ncols:
            break
    # columns rank_col.. of comp span the kernel
    return [[comp[i][c] for i in range(ncols)] for c in range(rank_col, ncols)]


class Lattice:
    """Integer lattice under row-echelon (Hermite-style) reduction.

    Basis rows keep strictly increasing pivot columns, pivots positive,
    entries above a pivot reduced modulo it.  Supports membership tests,
    reduction, and coordinates of lattice members in the echelon basis.
    """

    def __init__(self, ambient):
        self.n = ambient
        self.rows = []      # echelon basis
        self.pivot_cols = []

    def _reduce_against(self, vec):
        vec = list(vec)
        for row, pc in zip(self.rows, self.pivot_cols):
            if vec[pc]:
                q = vec[pc] // row[pc]
                if q:
                    for j in range(pc, self.n):
                        vec[j] -= q * row[j]
        return vec

    def add(self, vec):
        vec = list(vec)
        while True:
            lead = next((j for j in range(self.n) if vec[j]), None)
            if lead is None:
                return
            # insertion point
            import bisect
            idx = bisect.bisect_left(self.pivot_cols, lead)
            if idx < len(self.pivot_cols) and self.pivot_cols[idx] == lead:
                row = self.rows[idx]
                g, u, v = xgcd(row[lead], vec[lead])
                a, b = row[lead] // g, vec[lead] // g
                new_row = [u * x + v * y for x, y in zip(row, vec)]
                vec = [a * y - b * x for x, y in zip(row, vec)]
                self.rows[idx] = new_row
            else:
                if vec[lead] < 0:
                    vec = [-x for x in vec]
                self.rows.insert(idx, vec)
                self.pivot_cols.insert(idx, lead)
                self._normalize()
                return

    def _normalize(self):
        # reduce entries above each pivot
        for i in range(len(self.rows) - 1, -1, -1):
            pc = self.pivot_cols[i]
            piv = self.rows[i][pc]
            for k in range(i):
                q = self.rows[k][pc] // piv
                if q:
                    self.rows[k] = [a - q * b
                                    for a, b in zip(self.rows[k], self.rows[i])]

    def extend(self, vectors):
        for v in vectors:
            self.add(v)

    def reduce(self, vec):
        """Residual of vec modulo the lattice (zero iff member)."""
        return self._reduce_against(vec)

    def __contains__(self, vec):
        vec = list(vec)
        for row, pc in zip(self.rows, self.pivot_cols):
            if vec[pc]:
                q, r = divmod(vec[pc], row[pc])
                if r:
                    return False
                for j in range(pc, self.n):
                    vec[j] -= q * row[j]
        return not any(vec)

    def coords_of(self, vec):
        """Coefficients of vec in the echelon basis, or None if outside."""
        vec = list(vec)
        coords = [0] * len(self.rows)
        for i, (row, pc) in enumerate(zip(self.rows, self.pivot_cols)):
            if vec[pc]:
                q, r = divmod(vec[pc], row[pc])
                if r:
                    return None
                coords[i] = q
                for j in range(pc, self.n):
                    vec[j] -= q * row[j]
        if any(vec):
            return None
        return coords

    def rank(self):
        return len(self.rows)


# -- prime-power modular elimination -------------------------------------

def _val_p(x, p, cap):
    if x == 0:
        return cap
    v = 0
    while x % p == 0 and v < cap:
        x //= p
        v += 1
    return v


def diagonalize_mod_pp(matrix, p, a, track_u=False, track_v=False):
    """Two-sided diagonalization of a matrix over Z/p^a.

    Returns (diag, U, V) with U M V = diag(p^{v_0}, p^{v_1}, ...) mod p^a,
    diagonal entries normalized to pure powers of p (a zero entry is p^a).
    U and V are returned as numpy arrays when tracked, else None.  The
    input matrix (numpy int64 or object array) is consumed.
    """
    m = np.array(matrix, dtype=object) % (p ** a)
    nrows, ncols = m.shape if m.size else (len(matrix), 0)
    pa = p ** a
    U = np.eye(nrows, dtype=object) if track_u else None
    V = np.eye(ncols, dtype=object) if track_v else None
    diag = []
    t = 0
    limit = min(nrows, ncols)
    while t < limit:
        # locate entry of minimal p-valuation in the remaining block
        best = None
        best_v = a
        for i in range(t, nrows):
            row = m[i, t:]
            for j0, x in enumerate(row):
                if x:
                    v = _val_p(int(x), p, a)
                    if v < best_v:
                        best_v = v
                        best = (i, t + j0)
                        if v == 0:
                            break
            if best_v == 0:
                break
        if best is None:
            break
        i0, j0 = best
        if i0 != t:
            m[[t, i0], :] = m[[i0, t], :]
            if track_u:
                U[[t, i0], :] = U[[i0, t], :]
        if j0 != t:
            m[:, [t, j0]] = m[:, [j0, t]]
            if track_v:
                V[:, [t, j0]] = V[:, [j0, t]]
        piv = int(m[t, t])
        v = _val_p(piv, p, a)
        unit = piv // (p ** v)
        inv_unit = pow(unit, -1, p ** (a - v)) if v < a else 1
        # normalize pivot to p^v
        m[t, :] = (m[t, :] * inv_unit) % pa
        if track_u:
            U[t, :] = (U[t, :] * inv_unit) % pa
        pv = p ** v
        # clear column
        for i in range(nrows):
            if i != t and m[i, t]:
                f = int(m[i, t]) // pv
                m[i, :] = (m[i, :] - f * m[t, :]) % pa
                if track_u:
                    U[i, :] = (U[i, :] - f * U[t, :]) % pa
        # clear row
        for j in range(t + 1, ncols):
            if m[t, j]:
                f = int(m[t, j]) // pv
                m[:, j] = (m[:, j] - f * m[:, t]) % pa
                if track_v:
                    V[:, j] = (V[:, j] - f * V[:, t]) % pa
        diag.append(v)
        t += 1
    # pad with "zero" entries
    while len(diag) < limit:
        diag.append(a)
    return diag, U, V


def solve_mod_pp(matrix, rhs, p, a):
    """Particular solution of M x = rhs over Z/p^a, or None."""
    mat = np.array(matrix, dtype=object)
    if mat.size == 0:
        return [0] * (len(matrix[0]) if matrix else 0)
    diag, U, V = diagonalize_mod_pp(mat, p, a, track_u=True, track_v=True)
    pa = p ** a
    b = (U @ np.array(rhs, dtype=object)) % pa
    ncols = V.shape[0]
    y = [0] * ncols
    for i, v in enumerate(diag):
        bi = int(b[i]) if i < len(b) else 0
        if v >= a:
            if bi % pa:
                return None
            continue
        pv = p ** v
        if bi % pv:
            return None
        y[i] = bi // pv
    for i in range(len(diag), len(b)):
        if int(b[i]) % pa:
            return None
    x = (V @ np.array(y, dtype=object)) % pa
    return [int(t) for t in x]


def kernel_mod_pp(matrix, p, a, ncols):
    """Generators of {x in (Z/p^a)^ncols : M x = 0}, as integer lists.

    Includes the full p^{a - v} scalings, so the generated subgroup is the
    exact kernel.
    """
    if not matrix or ncols == 0:
        return [[p ** 0 if i == j else 0 for j in range(ncols)]
                for i in range(ncols)] if ncols else []
    mat = np.array(matrix, dtype=object)
    diag, _, V = diagonalize_mod_pp(mat, p, a, track_v=True)
    pa = p ** a
    gens = []
    for i in range(ncols):
        v = diag[i] if i < len(diag) else a
        scale = p ** (a - v) if v < a else 1
        vec = (V[:, i] * scale) % pa
        if any(int(t) for t in vec):
            gens.append([int(t) for t in vec])
    return gens


def smith_with_transforms(matrix, nrows, ncols):
    """Exact Smith normal form over Z: returns (diag, U, Uinv).

    U is the unimodular row transform with U*M*V diagonal (V is not
    returned); Uinv is maintained alongside so callers can map quotient
    coordinates back to generator exponents.  Intended for small matrices
    (relation lattices of unit filtrations).
    """
    m = [list(r) for r in matrix]
    U = [[1 if i == j else 0 for j in range(nrows)] for i in range(nrows)]
    Uinv = [[1 if i == j else 0 for j in range(nrows)] for i in range(nrows)]

    def row_op(i, j, q):
        # row_i -= q * row_j ;  Uinv col_j += q * col_i
        m[i] = [a - q * b for a, b in zip(m[i], m[j])]
        U[i] = [a - q * b for a, b in zip(U[i], U[j])]
        for r in range(nrows):
            Uinv[r][j] += q * Uinv[r][i]

    def row_swap(i, j):
        m[i], m[j] = m[j], m[i]
        U[i], U[j] = U[j], U[i]
        for r in range(nrows):
            Uinv[r][i], Uinv[r][j] = Uinv[r][j], Uinv[r][i]

    def col_op(i, j, q):
        for r in range(len(m)):
            m[r][i] -= q * m[r][j]

    def col_swap(i, j):
        for r in range(len(m)):
            m[r][i], m[r][j] = m[r][j], m[r][i]

    t = 0
    limit = min(nrows, ncols)
    while t < limit:
        # find minimal nonzero |entry| in the remaining block
        best = None
        for i in range(t, nrows):
            for j in range(t, ncols):
                if m[i][j] and (best is None
                                or abs(m[i][j]) < abs(m[best[0]][best[1]])):
                    best = (i, j)
        if best is None:
            break
        i0, j0 = best
        if i0 != t:
            row_swap(t, i0)
        if j0 != t:
            col_swap(t, j0)
        dirty = False
        for i in range(t + 1, nrows):
            if m[i][t]:
                q = m[i][t] // m[t][t]
                row_op(i, t, q)
                if m[i][t]:
                    dirty = True
        for j in range(t + 1, ncols):
            if m[t][j]:
                q = m[t][j] // m[t][t]
                col_op(j, t, q)
                if m[t][j]:
                    dirty = True
        if dirty:
            continue
        if m[t][t] < 0:
            m[t] = [-a for a in m[t]]
            U[t] = [-a for a in U[t]]
            for r in range(nrows):
                Uinv[r][t] = -Uinv[r][t]
        t += 1
    diag = [m[i][i] if i < ncols else 0 for i in range(min(nrows, ncols))]
    # enforce the divisibility chain d_i | d_{i+1}
    changed = True
    while changed:
        changed = False
        for i in range(len(diag) - 1):
            a, b = diag[i], diag[i + 1]
            if a == 0 and b != 0:
                row_swap(i, i + 1)
                diag[i], diag[i + 1] = b, a
                changed = True
                continue
            if a and b and b % a != 0:
                g, u, v = xgcd(a, b)
                lcm = a // g * b
                # standard 2x2 fix-up: diag entries become (g, lcm); the
                # row transform part is what callers rely on
                _fix_pair(U, Uinv, m, i, i + 1, a, b, g, u, v)
                diag[i], diag[i + 1] = g, lcm
                changed = True
    return diag, U, Uinv


def _fix_pair(U, Uinv, m, i, j, a, b, g, u, v):
    """Replace diag block (a, b) by (g, lcm) with unimodular transforms."""
    # rows: new_i = u*row_i + v*row_j ; new_j combines to keep det 1
    a_, b_ = a // g, b // g
    nrows = len(U)
    Ui = [u * x + v * y for x, y in zip(U[i], U[j])]
    Uj = [-b_ * x + a_ * y for x, y in zip(U[i], U[j])]
    U[i], U[j] = Ui, Uj
    for r in range(nrows):
        ci, cj = Uinv[r][i], Uinv[r][j]
        # inverse of [[u, v], [-b_, a_]] is [[a_, -v], [b_, u]]
        Uinv[r][i] = ci * a_ + cj * b_
        Uinv[r][j] = -ci * v + cj * u


def zp_row_echelon(rows, p, cap):
    """Row echelon form over Z_p at precision p^cap, min-valuation pivoting.

    Row operations only (swaps and subtracting Z_p-multiples), so the output
    rows are a Z_p-basis of the span of the input rows.  Returns the nonzero
    echelon rows reduced mod p^cap.
    """
    pm = p ** cap
    work = [[x % pm for x in r] for r in rows]
    ncols = len(work[0]) if work else 0
    out = []
    r0 = 0
    for c in range(ncols):
        best, best_v = None, cap
        for i in range(r0, len(work)):
            x = work[i][c]
            if x:
                v = _val_p(x, p, cap)
                if v < best_v:
                    best, best_v = i, v
                    if v == 0:
                        break
        if best is None:
            continue
        work[r0], work[best] = work[best], work[r0]
        piv = work[r0][c]
        unit = piv // p ** best_v
        inv_unit = pow(unit, -1, pm)
        work[r0] = [(x * inv_unit) % pm for x in work[r0]]
        for i in range(len(work)):
            if i != r0 and work[i][c]:
                q = work[i][c] // p ** best_v
                work[i] = [(a - q * b) % pm
                           for a, b in zip(work[i], work[r0])]
        r0 += 1
        if r0 == len(work):
            break
    for row in work[:r0]:
        out.append(row)
    return out


# -- general modulus via CRT ----------------------------------------------

def _crt_split(m):
    from .finite_field import factor_small
    return factor_small(m)


def solve_mod(matrix, rhs, m):
    """Particular solution of M x = rhs over Z/m, or None."""
    if m == 1:
        return [0] * (len(matrix[0]) if matrix else 0)
    fac = _crt_split(m)
    parts = []
    for p, a in fac.items():
        sol = solve_mod_pp(matrix, rhs, p, a)
        if sol is None:
            return None
        parts.append((p ** a, sol))
    ncols = len(parts[0][1])
    out = []
    for j in range(ncols):
        x, mod = 0, 1
        for pm, sol in parts:
            g, u, _ = xgcd(mod, pm)
            x = (x + mod * u * (sol[j] - x)) % (mod * pm)
            mod *= pm
        out.append(x % m)
    return out


def kernel_mod(matrix, m, ncols):
    """Generators of the kernel of M over Z/m."""
    if m == 1:
        return [[1 if i == j else 0 for j in range(ncols)]
                for i in range(ncols)]
    fac = _crt_split(m)
    gens = []
    for p, a in fac.items():
        pm = p ** a
        rest = m // pm
        g, u, _ = xgcd(rest, pm)
        idem = (rest * u) % m  # 1 mod p^a, 0 mod m/p^a
        for vec in kernel_mod_pp(matrix, p, a, ncols):
            gens.append([(idem * x) % m for x in vec])
    return gens


# -- finite quotients with known exponent bound ---------------------------

class FiniteQuotient:
    """Z^dim modulo a relation lattice, with exponent dividing `bound`.

    All Smith-form work happens modulo the prime powers of `bound`, which
    keeps entries tiny.  Provides invariant factors, projection of vectors
    to canonical coordinates, and element orders.
    """

    def __init__(self, dim, relation_columns, bound):
        self.dim = dim
        self.bound = bound
        self._parts = []  # (p, a, diag_vals, U) per prime power of bound
        fac = _crt_split(bound) if bound > 1 else {}
        for p, a in fac.items():
            cols = [[c[i] % (p ** a) for c in relation_columns]
                    for i in range(dim)]
            # append p^a * identity so everything reduces mod p^a
            for i in range(dim):
                for j in range(dim):
                    cols[i].append(p ** a if i == j else 0)
            mat = np.array(cols, dtype=object)
            diag, U, _ = diagonalize_mod_pp(mat, p, a, track_u=True)
            self._parts.append((p, a, diag, U))

    def invariant_factors(self):
        """Nontrivial invariant factors, largest first."""
        per_prime = []
        for p, a, diag, _ in self._parts:
            exps = sorted((min(v, a) for v in diag if v > 0), reverse=True)
            per_prime.append((p, exps))
        width = max((len(e) for _, e in per_prime), default=0)
        factors = []
        for i in range(width):
            d = 1
            for p, exps in per_prime:
                if i < len(exps):
                    d *= p ** exps[i]
            if d > 1:
                factors.append(d)
        return factors

    def project(self, vec):
        """Canonical coordinates of vec's class: ((p^e, coord), ...)."""
        out = []
        for p, a, diag, U in self._parts:
            y = (U @ np.array([v % (p ** a) for v in vec], dtype=object))
            for i, v in enumerate(diag):
                if 0 < v:
                    out.append((p ** min(v, a), int(y[i]) % p ** min(v, a)))
        return tuple(out)

    def order_of(self, vec):
        order = 1
        for mod, coord in self.project(vec):
            if coord:
                from math import gcd, lcm
                order = lcm(order, mod // gcd(mod, coord))
        return order

    def is_trivial_class(self, vec):
        return all(c == 0 for _, c in self.project(vec))
