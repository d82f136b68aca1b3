"""Arithmetic in F_{p^n} and the residue-level equation solvers.

Fields are kept at desk scale (p^n < 2^20) so that discrete logs and
solvability checks can be done by brute force or table lookup.  The two
solvers at the bottom (Hilbert 90 and Artin-Schreier) are the residue-level
engines of the successive-approximation loops used by the local-field layer:
every unit equation there reduces, one filtration level at a time, to

    x^(p^d - 1) = c        (multiplicative, base level)
    y^(p^d) - y = b        (additive, one-unit levels)

in the residue field.
"""

from functools import lru_cache

from .errors import (
    DegreeError,
    DivisionByZero,
    NormConditionViolated,
    NotAGenerator,
    ParentMismatch,
    TraceConditionViolated,
    ZeroArgument,
)
from .intlinalg import solve_mod_p

SIZE_CAP = 1 << 20


def factor_small(n):
    """Prime factorization by trial division; n is below 2^20 here."""
    out = {}
    d = 2
    while d * d <= n:
        while n % d == 0:
            out[d] = out.get(d, 0) + 1
            n //= d
        d += 1
    if n > 1:
        out[n] = out.get(n, 0) + 1
    return out


# -- polynomial helpers over F_p (dense coefficient lists, low degree first)

def _poly_trim(a):
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mulmod(a, b, mod, p):
    n = len(mod) - 1
    res = [0] * (len(a) + len(b) - 1) if a and b else []
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                res[i + j] = (res[i + j] + ai * bj) % p
    for deg in range(len(res) - 1, n - 1, -1):
        c = res[deg]
        if c:
            res[deg] = 0
            for j in range(n):
                res[deg - n + j] = (res[deg - n + j] - c * mod[j]) % p
    return _poly_trim(res[:n] + [0] * max(0, n - len(res)))


def _poly_powmod(a, e, mod, p):
    result = [1]
    base = list(a)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, mod, p)
        base = _poly_mulmod(base, base, mod, p)
        e >>= 1
    return result


def _poly_sub(a, b, p):
    width = max(len(a), len(b))
    a = list(a) + [0] * (width - len(a))
    b = list(b) + [0] * (width - len(b))
    return _poly_trim([(x - y) % p for x, y in zip(a, b)])


def _poly_gcd(a, b, p):
    a, b = list(a), list(b)
    while _poly_trim(b):
        # reduce a mod b
        inv_lead = pow(b[-1], p - 2, p)
        while len(a) >= len(b) and _poly_trim(a):
            shift = len(a) - len(b)
            c = (a[-1] * inv_lead) % p
            for j in range(len(b)):
                a[shift + j] = (a[shift + j] - c * b[j]) % p
            _poly_trim(a)
        a, b = b, a
    return _poly_trim(a)


def is_irreducible(modulus, p):
    """Rabin test: x^(p^n) = x mod g, and gcd(x^(p^(n/l)) - x, g) = 1.

    The iterated Frobenius powers x^(p^i) are built incrementally and the
    subfield gcd checks run as soon as their power is available, so most
    reducible candidates exit early.
    """
    n = len(modulus) - 1
    if n < 1 or modulus[-1] != 1:
        return False
    if n > 1 and modulus[0] == 0:
        return False  # divisible by x
    if n > 1 and any(
        not _poly_eval_mod(modulus, a, p) for a in range(p)
    ):
        return False  # linear factor
    x = [0, 1]
    xr = _poly_mulmod(x, [1], modulus, p)
    checkpoints = {n // ell for ell in factor_small(n)} - {1}
    power = xr
    for i in range(1, n + 1):
        power = _poly_powmod(power, p, modulus, p)
        if i in checkpoints:
            g = _poly_gcd(_poly_sub(power, xr, p), list(modulus), p)
            if len(g) != 1:
                return False
    return not _poly_sub(power, xr, p)


def _poly_eval_mod(coeffs, a, p):
    acc = 0
    for c in reversed(coeffs):
        acc = (acc * a + c) % p
    return acc


class FFq:
    """The finite field F_{p^n} presented as F_p[w]/(modulus).

    The canonical modulus (used throughout the local-field layer) is the
    lexicographically smallest monic irreducible of degree n whose root
    generates the multiplicative group; coefficient tuples are compared
    constant term first.  This pins Teichmueller coordinates across runs.
    Multiplication goes through exp/log tables relative to a fixed
    generator, built lazily.
    """

    def __init__(self, p, n, modulus=None):
        if p < 2 or n < 1 or p ** n >= SIZE_CAP:
            raise ValueError(f"field size p^n = {p}^{n} out of supported range")
        self.p = p
        self.n = n
        self.q = p ** n
        if modulus is None:
            modulus = _canonical_modulus(p, n)
        modulus = tuple(c % p for c in modulus)
        if len(modulus) != n + 1 or modulus[-1] != 1:
            raise ValueError("modulus must be monic of degree n")
        if not is_irreducible(modulus, p):
            raise ValueError("modulus is reducible")
        self.modulus = modulus
        self._exp = None   # index -> encoding of g0^index
        self._log = None   # encoding -> index
        self._gen_enc = None

    def __repr__(self):
        return f"FFq({self.p}^{self.n})"

    def __eq__(self, other):
        return (isinstance(other, FFq) and self.p == other.p
                and self.modulus == other.modulus)

    def __hash__(self):
        return hash((self.p, self.modulus))

    # -- element construction

    def element(self, coords):
        return FFElem(self, tuple(c % self.p for c in coords))

    def zero(self):
        return self.element((0,) * self.n)

    def one(self):
        return self.element((1,) + (0,) * (self.n - 1))

    def gen(self):
        """The class of w (a multiplicative generator for canonical moduli)."""
        if self.n == 1:
            return self.from_encoding(self._find_generator_enc())
        return self.element((0, 1) + (0,) * (self.n - 2))

    def from_encoding(self, enc):
        coords = []
        for _ in range(self.n):
            enc, r = divmod(enc, self.p)
            coords.append(r)
        return self.element(coords)

    def elements(self):
        return (self.from_encoding(i) for i in range(self.q))

    def units(self):
        return (x for x in self.elements() if not x.is_zero())

    # -- exp/log tables

    def _find_generator_enc(self):
        fac = factor_small(self.q - 1)
        for enc in range(1, self.q):
            x = self.from_encoding(enc)
            if x.is_zero():
                continue
            if all(not _pow_poly(x, (self.q - 1) // ell).is_one()
                   for ell in fac):
                return enc
        raise RuntimeError("no generator found")  # unreachable

    def _build_tables(self):
        g = self.gen()
        if not g._is_generator_raw():
            g = self.from_encoding(self._find_generator_enc())
        exp = [0] * (self.q - 1)
        log = {}
        acc = self.one()
        for i in range(self.q - 1):
            e = acc.encoding()
            exp[i] = e
            log[e] = i
            acc = acc._mul_poly(g)
        self._exp = exp
        self._log = log
        self._gen_enc = g.encoding()

    def log_of(self, elem):
        if self._log is None:
            self._build_tables()
        return self._log[elem.encoding()]

    def exp_of(self, idx):
        if self._exp is None:
            self._build_tables()
        return self.from_encoding(self._exp[idx % (self.q - 1)])


@lru_cache(maxsize=None)
def _canonical_modulus(p, n):
    """Lex smallest monic irreducible of degree n over F_p with primitive root."""
    if n == 1:
        # x - g for the smallest generator g of F_p^*; for p = 2 take x - 1.
        fac = factor_small(p - 1) if p > 2 else {}
        for g in range(1, p):
            if all(pow(g, (p - 1) // ell, p) != 1 for ell in fac):
                return (-g % p, 1)
    fac = factor_small(p ** n - 1)

    def primitive(modulus):
        x = [0, 1]
        return all(
            _poly_powmod(x, (p ** n - 1) // ell, modulus, p) != [1]
            for ell in fac
        )

    # the root's norm is (-1)^n a_0 and must generate F_p^*
    p_fac = factor_small(p - 1) if p > 2 else {}
    sign = 1 if n % 2 == 0 else -1
    allowed_const = {
        c for c in range(1, p)
        if all(pow(sign * c % p, (p - 1) // ell, p) != 1 for ell in p_fac)
    }
    # lex order on (a_0, a_1, ..., a_{n-1}), constant term most significant
    for code in range(p ** n):
        rev = []
        c = code
        for _ in range(n):
            c, r = divmod(c, p)
            rev.append(r)
        modulus = tuple(reversed(rev)) + (1,)
        if modulus[0] not in allowed_const:
            continue
        if is_irreducible(modulus, p) and primitive(modulus):
            return modulus
    raise RuntimeError("no primitive polynomial found")  # unreachable


class FFElem:
    """Element of an FFq, stored as a length-n coordinate tuple mod p."""

    __slots__ = ("parent", "coords")

    def __init__(self, parent, coords):
        self.parent = parent
        self.coords = coords

    def __repr__(self):
        return f"FF({self.parent.p}^{self.parent.n}){list(self.coords)}"

    def __eq__(self, other):
        return (isinstance(other, FFElem) and self.parent == other.parent
                and self.coords == other.coords)

    def __hash__(self):
        return hash((self.parent.p, self.coords))

    def encoding(self):
        enc = 0
        for c in reversed(self.coords):
            enc = enc * self.parent.p + c
        return enc

    def is_zero(self):
        return all(c == 0 for c in self.coords)

    def is_one(self):
        return self.encoding() == 1

    def _check(self, other):
        if self.parent != other.parent:
            raise ParentMismatch(f"{self.parent} vs {other.parent}")

    def __add__(self, other):
        self._check(other)
        p = self.parent.p
        return FFElem(self.parent, tuple(
            (a + b) % p for a, b in zip(self.coords, other.coords)))

    def __sub__(self, other):
        self._check(other)
        p = self.parent.p
        return FFElem(self.parent, tuple(
            (a - b) % p for a, b in zip(self.coords, other.coords)))

    def __neg__(self):
        p = self.parent.p
        return FFElem(self.parent, tuple(-a % p for a in self.coords))

    def _mul_poly(self, other):
        par = self.parent
        prod = _poly_mulmod(list(self.coords), list(other.coords),
                            list(par.modulus), par.p)
        prod += [0] * (par.n - len(prod))
        return FFElem(par, tuple(prod))

    def __mul__(self, other):
        self._check(other)
        par = self.parent
        if self.is_zero() or other.is_zero():
            return par.zero()
        if par._log is None:
            par._build_tables()
        return par.exp_of(par.log_of(self) + par.log_of(other))

    def inverse(self):
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        par = self.parent
        return par.exp_of(-par.log_of(self))

    def __truediv__(self, other):
        return self * other.inverse()

    def __pow__(self, k):
        par = self.parent
        if self.is_zero():
            if k < 0:
                raise DivisionByZero("negative power of zero")
            return par.one() if k == 0 else par.zero()
        if par._log is None:
            par._build_tables()
        return par.exp_of(par.log_of(self) * k)

    def frobenius(self, d=1):
        """a^(p^d); d >= 0."""
        if d < 0:
            raise ValueError("d must be >= 0")
        return self ** (self.parent.p ** d) if not self.is_zero() else self

    def _is_generator_raw(self):
        if self.is_zero():
            return False
        fac = factor_small(self.parent.q - 1)
        return all(
            not _pow_poly(self, (self.parent.q - 1) // ell).is_one()
            for ell in fac
        )


def _pow_poly(a, e):
    """Square-and-multiply power without the log tables (used to build them)."""
    result = a.parent.one()
    base = a
    while e:
        if e & 1:
            result = result._mul_poly(base)
        base = base._mul_poly(base)
        e >>= 1
    return result


def ff_arith(a, b, op):
    """Dispatching wrapper: op in {'add', 'mul', 'inv', 'pow'}."""
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    if op == "inv":
        return a.inverse()
    if op == "pow":
        return a ** b
    raise ValueError(f"unknown op {op!r}")


def ff_frobenius(a, d):
    return a.frobenius(d)


def ff_norm_trace(a, d):
    """Norm and trace of a from F_{p^n} down to F_{p^d}; d must divide n.

    Returns (prod of a^(p^(d*i)), sum of a^(p^(d*i))) for i < n/d.  Both
    results are fixed by Frobenius^d, which is asserted.
    """
    n = a.parent.n
    if d <= 0 or n % d != 0:
        raise DegreeError(f"d={d} does not divide n={n}")
    norm = a.parent.one()
    trace = a.parent.zero()
    conj = a
    for _ in range(n // d):
        norm = norm * conj
        trace = trace + conj
        conj = conj.frobenius(d)
    assert norm.frobenius(d) == norm and trace.frobenius(d) == trace
    return norm, trace


def ff_dlog(x, g):
    """k with g^k = x, 0 <= k < q - 1, by brute-force enumeration."""
    if x.is_zero():
        raise ZeroArgument("dlog of zero")
    par = x.parent
    if not g._is_generator_raw():
        raise NotAGenerator(f"{g} does not generate the unit group")
    if par._log is not None:
        base = par.log_of(g)
        target = par.log_of(x)
        # base is invertible mod q-1 because g generates
        return (target * pow(base, -1, par.q - 1)) % (par.q - 1)
    acc = par.one()
    for k in range(par.q - 1):
        if acc == x:
            return k
        acc = acc._mul_poly(g)
    raise NotAGenerator("dlog enumeration failed")  # unreachable for generators


def ff_solve_hilbert90(c, d):
    """x != 0 with x^(p^d - 1) = c, requiring Norm_{F_q/F_{p^d}}(c) = 1.

    Deterministic: among all solutions (a coset of F_{p^d}^*), returns the
    one with the smallest integer encoding.
    """
    par = c.parent
    n = par.n
    if d <= 0 or n % d != 0:
        raise DegreeError(f"d={d} does not divide n={n}")
    if c.is_zero():
        raise ZeroArgument("hilbert90 needs c != 0")
    norm, _ = ff_norm_trace(c, d)
    if not norm.is_one():
        raise NormConditionViolated(f"norm of {c} over F_(p^{d}) is {norm}")
    qd = par.p ** d
    step = (par.q - 1) // (qd - 1)
    if par._log is None:
        par._build_tables()
    a = par.log_of(c)
    # solve b*(qd - 1) = a mod (q - 1); the norm condition makes qd-1 | a
    assert a % (qd - 1) == 0
    b0 = a // (qd - 1)
    best = None
    for t in range(qd - 1):
        x = par.exp_of(b0 + t * step)
        if best is None or x.encoding() < best.encoding():
            best = x
    assert (best ** (qd - 1)) == c
    return best


def ff_solve_trace(b, d):
    """y with Trace_{F_q/F_{p^d}}(y) = b, for b in the subfield F_{p^d}.

    The trace is surjective onto the subfield, so this always has solutions;
    the linear solve (first-nonzero pivots, free variables zero) picks one
    deterministically.
    """
    par = b.parent
    n = par.n
    if d <= 0 or n % d != 0:
        raise DegreeError(f"d={d} does not divide n={n}")
    if b.frobenius(d) != b:
        raise TraceConditionViolated(f"{b} is not in the subfield F_(p^{d})")
    cols = []
    for j in range(n):
        basis = par.element((0,) * j + (1,) + (0,) * (n - 1 - j))
        _, tr = ff_norm_trace(basis, d)
        cols.append(tr.coords)
    matrix = [[cols[j][i] for j in range(n)] for i in range(n)]
    sol = solve_mod_p(matrix, list(b.coords), par.p)
    assert sol is not None
    y = par.element(sol)
    assert ff_norm_trace(y, d)[1] == b
    return y


def ff_solve_artin_schreier(b, d):
    """y with y^(p^d) - y = b, requiring Trace_{F_q/F_{p^d}}(b) = 0.

    Solved as the F_p-linear system (Frobenius^d - id) y = b with
    first-nonzero pivoting and free variables set to zero.
    """
    par = b.parent
    n = par.n
    if d <= 0 or n % d != 0:
        raise DegreeError(f"d={d} does not divide n={n}")
    _, trace = ff_norm_trace(b, d)
    if not trace.is_zero():
        raise TraceConditionViolated(f"trace of {b} over F_(p^{d}) is {trace}")
    # columns: (Frobenius^d - id) applied to basis vectors w^j
    cols = []
    for j in range(n):
        basis = par.element((0,) * j + (1,) + (0,) * (n - 1 - j))
        img = basis.frobenius(d) - basis
        cols.append(img.coords)
    matrix = [[cols[j][i] for j in range(n)] for i in range(n)]
    sol = solve_mod_p(matrix, list(b.coords), par.p)
    if sol is None:
        raise TraceConditionViolated("linear system inconsistent")  # unreachable
    y = par.element(sol)
    assert y.frobenius(d) - y == b
    return y
