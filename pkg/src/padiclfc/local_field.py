"""Finite-precision exact arithmetic in two-level towers over Q_p.

Every field here is presented the same way: an unramified layer
Z_p[w]/(unram_poly) of degree f with canonical (primitive, lex-smallest)
defining polynomial, followed by an Eisenstein layer of degree e generated
by a root pi of a polynomial whose non-leading coefficients all have
positive valuation and whose constant term has valuation exactly one.
Keeping this shape for every field in a computation, including the
unramified compositum where the unit equations get solved, means no new
defining polynomials ever have to be generated mid-run.

An element is a coordinate array (e blocks of f integers mod p^cap, for
sum_{i,j} c_ij w^j pi^i), an optional denominator p^den, and a tracked
absolute precision: the element is known modulo P^prec, where v(pi) = 1
and v(p) = e.  Operations compute the precision of their result from the
precisions and valuations of the operands and never over-claim.
"""

import json
import math

from . import backend
from .errors import (
    DivisionByZero,
    HenselFails,
    IndistinguishableFromZero,
    NotEisenstein,
    PrecisionExhausted,
    PrecisionTooSmall,
    ZeroArgument,
)
from .finite_field import FFq

GUARD_DIGITS = 4


class _UnramContext:
    """Arithmetic in Z_p[w]/(unram_poly, p^cap): flat coordinate lists."""

    def __init__(self, p, f, unram_poly, cap):
        self.p = p
        self.f = f
        self.cap = cap
        self.pm = p ** cap
        self.poly = unram_poly  # length f+1, monic, integer coefficients
        # reduction rows (flat): w^(f+t) = sum_j ured[t*f+j] w^j
        rows = [[(-unram_poly[j]) % self.pm for j in range(f)]]
        for _ in range(f - 2):
            prev = rows[-1]
            row = [0] + prev[:f - 1]
            top = prev[f - 1]
            for j in range(f):
                row[j] = (row[j] + top * rows[0][j]) % self.pm
            rows.append(row)
        self.ured = [x for row in rows for x in row]
        self.kern = backend.pick(self.pm, 2 * f + 2)

    def mul(self, a, b):
        return self.kern.zq_mul(list(a), list(b), self.f, self.ured,
                                self.pm)

    def add(self, a, b):
        return [(x + y) % self.pm for x, y in zip(a, b)]

    def sub(self, a, b):
        return [(x - y) % self.pm for x, y in zip(a, b)]

    def scale(self, a, c):
        return [(x * c) % self.pm for x in a]

    def one(self):
        return [1] + [0] * (self.f - 1)

    def zero(self):
        return [0] * self.f

    def pow(self, a, n):
        result = self.one()
        base = list(a)
        while n:
            if n & 1:
                result = self.mul(result, base)
            base = self.mul(base, base)
            n >>= 1
        return result

    def vp(self, a):
        """min p-valuation of the coordinates (the Gauss valuation); None if 0."""
        best = None
        for x in a:
            if x:
                v = 0
                while x % self.p == 0:
                    x //= self.p
                    v += 1
                best = v if best is None else min(best, v)
                if best == 0:
                    return 0
        return best

    def inv_unit(self, a):
        """Newton inversion of a unit (vp = 0)."""
        if self.vp(a) != 0:
            raise DivisionByZero("not a unit in the unramified layer")
        # residue inverse, then y <- y(2 - a y) doubles p-adic accuracy
        res = self.residue_field().element([x % self.p for x in a])
        y = [c % self.pm for c in res.inverse().coords]
        steps = max(1, math.ceil(math.log2(self.cap)) + 1)
        two = [2] + [0] * (self.f - 1)
        for _ in range(steps):
            t = self.sub(two, self.mul(a, y))
            y = self.mul(y, t)
        return y

    def residue_field(self):
        if not hasattr(self, "_residue"):
            self._residue = FFq(self.p, self.f,
                                tuple(c % self.p for c in self.poly))
        return self._residue


class LocalField:
    """Two-level tower descriptor: unramified degree f, Eisenstein degree e.

    eis_coeffs is the defining polynomial of the ramified layer, a list of
    e+1 coefficients low degree first; each coefficient is a length-f
    coordinate vector over the unramified layer (plain ints are accepted
    and mean constants).  The leading coefficient must be 1.
    """

    def __init__(self, p, f, eis_coeffs, n_abs):
        if f < 1 or len(eis_coeffs) < 2:
            raise NotEisenstein("need f >= 1 and degree >= 1")
        self.p = p
        self.f = f
        self.e = len(eis_coeffs) - 1
        self.degree = self.e * self.f
        if n_abs < 2 * self.e + 4:
            raise PrecisionTooSmall(
                f"N_abs = {n_abs} leaves no room below 2e+4 = {2*self.e+4}")
        self.N_abs = n_abs
        self.cap = math.ceil(n_abs / self.e) + GUARD_DIGITS
        self.pm = p ** self.cap
        residue = FFq(p, f)  # canonical primitive modulus
        self.unram_poly = tuple(int(c) for c in residue.modulus)
        self.zq = _UnramContext(p, f, self.unram_poly, self.cap)
        self.zq._residue = residue
        self.residue_field = residue

        self.eis = []
        self.eis_exact = []
        for c in eis_coeffs:
            if isinstance(c, int):
                raw = [c] + [0] * (f - 1)
            else:
                if len(c) != f:
                    raise NotEisenstein("coefficient vector of wrong length")
                raw = [int(x) for x in c]
            self.eis_exact.append(raw)
            self.eis.append([x % self.pm for x in raw])
        if self.eis[-1] != self.zq.one():
            raise NotEisenstein("polynomial must be monic")
        for c in self.eis[:-1]:
            v = self.zq.vp(c)
            if v is not None and v < 1:
                raise NotEisenstein("non-leading coefficient is a unit")
        v0 = self.zq.vp(self.eis[0])
        if v0 != 1:
            raise NotEisenstein(
                f"constant term has valuation {v0}, must be exactly 1")

        self.kern = backend.pick(self.pm, 2 * max(self.e, self.f) + 2)
        self._build_reduction()
        self._build_frobenius()
        self._pi_inv = None
        self._teich_cache = {}

    # -- construction helpers

    def _build_reduction(self):
        e, f = self.e, self.f
        if e == 1:
            self._ered = []
            return
        row0 = [self.zq.scale(self.eis[i], -1) for i in range(e)]
        rows = [row0]
        for _ in range(e - 2):
            prev = rows[-1]
            row = [self.zq.zero()] + prev[:e - 1]
            top = prev[e - 1]
            for i in range(e):
                row[i] = self.zq.add(row[i], self.zq.mul(top, row0[i]))
            rows.append(row)
        # flat layout: pi^(e+s) coefficient of pi^i is ered[(s*e+i)*f :]
        self._ered = [x for row in rows for blk in row for x in blk]

    def _build_frobenius(self):
        """Matrices of Frobenius^t on the unramified layer, t in [0, f)."""
        f = self.f
        if f == 1:
            self._fmat = [[[1]]]
            self._frob_gen = [1]
            return
        # Newton-lift the root of unram_poly with residue w^p
        kappa = self.residue_field
        w_res = kappa.gen()
        target = w_res.frobenius(1)
        x = [int(c) % self.pm for c in target.coords]
        poly = [([c % self.pm] + [0] * (f - 1)) for c in self.unram_poly]
        steps = max(1, math.ceil(math.log2(self.cap)) + 1)
        for _ in range(steps):
            gx = self._zq_poly_eval(poly, x)
            gpx = self._zq_poly_eval(
                [self.zq.scale(poly[i], i) for i in range(1, f + 1)], x)
            x = self.zq.sub(x, self.zq.mul(gx, self.zq.inv_unit(gpx)))
        self._frob_gen = x
        ident = [1 if (j // f) == (j % f) else 0 for j in range(f * f)]
        mats = [ident]
        w_t = x
        for _ in range(1, f):
            # flat row-major matrix with columns = powers of w_t
            pw = self.zq.one()
            cols = []
            for _ in range(f):
                cols.append(pw)
                pw = self.zq.mul(pw, w_t)
            mats.append([cols[j][i] for i in range(f) for j in range(f)])
            w_t = self.kern.mat_vec(mats[1], w_t, f, f, self.pm)
        self._fmat = mats

    def _zq_poly_eval(self, coeffs, x):
        acc = self.zq.zero()
        for c in reversed(coeffs):
            acc = self.zq.add(self.zq.mul(acc, x), c)
        return acc

    def frob_unram(self, vec, t):
        """Frobenius^t applied to an unramified-layer coordinate list."""
        t %= self.f
        if t == 0:
            return list(vec)
        return self.kern.mat_vec(self._fmat[t], list(vec), self.f, self.f,
                                 self.pm)

    # -- element constructors

    def element(self, flat, den=0, prec=None):
        return FieldElement(self, flat, den, prec)

    def zero(self, prec=None):
        return self.element([0] * (self.e * self.f), 0, prec)

    def one(self):
        vec = [0] * (self.e * self.f)
        vec[0] = 1
        return self.element(vec)

    def from_int(self, n):
        vec = [0] * (self.e * self.f)
        vec[0] = n % self.pm
        return self.element(vec)

    def from_unram(self, coords, layer=0):
        vec = [0] * (self.e * self.f)
        for j, c in enumerate(coords):
            vec[layer * self.f + j] = c % self.pm
        return self.element(vec)

    def pi(self):
        if self.e == 1:
            return self.from_unram(self.zq.scale(self.eis[0], -1))
        return self.from_unram(self.zq.one(), layer=1)

    def omega(self):
        c = [0] * self.f
        if self.f > 1:
            c[1] = 1
        else:
            c[0] = 1
        return self.from_unram(c)

    def pi_inv(self):
        """Exact inverse of pi, with denominator p."""
        if self._pi_inv is None:
            u0 = [c // self.p for c in self.eis[0]]
            u0_inv = self.zq.inv_unit(u0)
            if self.e == 1:
                # pi = -c0 = -p*u0, so 1/pi = -u0^(-1)/p
                self._pi_inv = self.element(
                    self.zq.scale(u0_inv, -1), den=1)
            else:
                layers = [self.zq.zero() for _ in range(self.e)]
                layers[self.e - 1] = self.zq.one()
                for j in range(1, self.e):
                    layers[j - 1] = self.zq.add(layers[j - 1], self.eis[j])
                flat = []
                for lay in layers:
                    flat.extend(self.zq.scale(self.zq.mul(lay, u0_inv), -1))
                self._pi_inv = self.element(flat, den=1)
        return self._pi_inv

    def pi_pow(self, n):
        if n >= 0:
            out = self.one()
            piv = self.pi()
            for _ in range(n):
                out = out * piv
            return out
        out = self.one()
        piv = self.pi_inv()
        for _ in range(-n):
            out = out * piv
        return out

    def teichmueller(self, r):
        """The unique lift t of r != 0 with t^(p^f) = t."""
        if r.is_zero():
            raise ZeroArgument("teichmueller lift of zero")
        key = r.coords
        if key not in self._teich_cache:
            x = self.from_unram([c for c in r.coords])
            q = self.p ** self.f
            for _ in range(self.cap + 2):
                nxt = x ** q
                if (nxt - x).is_zero_within(self.N_abs):
                    x = nxt
                    break
                x = nxt
            self._teich_cache[key] = x
        return self._teich_cache[key]

    # -- serialization

    def descriptor(self):
        return {
            "p": self.p,
            "f": self.f,
            "eis_poly": [list(c) for c in self.eis],
            "precision": self.N_abs,
        }

    def __repr__(self):
        return (f"LocalField(p={self.p}, f={self.f}, e={self.e}, "
                f"N={self.N_abs})")

    def same_tower(self, other):
        return (self.p == other.p and self.f == other.f
                and self.eis == other.eis)


def field_from_descriptor(desc, min_precision=None):
    """Build a LocalField from the JSON descriptor dict (or a JSON string)."""
    if isinstance(desc, str):
        desc = json.loads(desc)
    prec = int(desc.get("precision", 0))
    if min_precision is not None:
        prec = max(prec, min_precision)
    eis = desc["eis_poly"]
    e = len(eis) - 1
    prec = max(prec, 2 * e + 4)
    return LocalField(int(desc["p"]), int(desc["f"]), eis, prec)


class FieldElement:
    """Element of a LocalField: coordinates / p^den, known modulo P^prec."""

    __slots__ = ("parent", "vec", "den", "prec")

    def __init__(self, parent, vec, den=0, prec=None):
        self.parent = parent
        if prec is None:
            prec = parent.N_abs
        prec = min(prec, parent.N_abs)
        vec = [x % parent.pm for x in vec]
        # strip the denominator as far as the coordinates allow
        p = parent.p
        while den > 0 and all(x % p == 0 for x in vec):
            vec = [x // p for x in vec]
            den -= 1
        max_prec = parent.e * (parent.cap - den)
        if prec > max_prec:
            prec = max_prec
        if prec <= 0:
            raise PrecisionExhausted(
                f"element representable only modulo P^{prec}")
        self.den = den
        self.prec = prec
        # zero out digits beyond the declared precision
        e, f = parent.e, parent.f
        shifted = prec + e * den
        for i in range(e):
            m = (shifted - i + e - 1) // e
            m = min(max(m, 0), parent.cap)
            pm_i = p ** m
            for j in range(f):
                idx = i * f + j
                if vec[idx] >= pm_i:
                    vec[idx] %= pm_i
        self.vec = tuple(vec)

    # -- inspection

    def _raw_val(self):
        """min over nonzero digits of e*vp(c_ij) + i, or None (numerator)."""
        par = self.parent
        e, f, p = par.e, par.f, par.p
        best = None
        for i in range(e):
            for j in range(f):
                x = self.vec[i * f + j]
                if x:
                    v = 0
                    while x % p == 0:
                        x //= p
                        v += 1
                    cand = e * v + i
                    if best is None or cand < best:
                        best = cand
            if best is not None and best <= i:
                break
        return best

    def valuation(self):
        raw = self._raw_val()
        shift = self.parent.e * self.den
        if raw is None or raw - shift >= self.prec:
            raise IndistinguishableFromZero(
                f"all digits vanish modulo P^{self.prec}")
        return raw - shift

    def val_floor(self):
        """A sound lower bound for the valuation (= prec when zero-like)."""
        try:
            return self.valuation()
        except IndistinguishableFromZero:
            return self.prec

    def is_zero_within(self, prec=None):
        if prec is None:
            prec = self.prec
        prec = min(prec, self.prec)
        raw = self._raw_val()
        return raw is None or raw - self.parent.e * self.den >= prec

    def is_exactly_one(self):
        return (self - self.parent.one()).is_zero_within()

    def residue(self):
        """Image in the residue field; requires an integral element."""
        if self.den > 0:
            raise IndistinguishableFromZero("element is not integral")
        par = self.parent
        return par.residue_field.element(
            [self.vec[j] % par.p for j in range(par.f)])

    # -- arithmetic

    def _check(self, other):
        if self.parent is not other.parent:
            if not self.parent.same_tower(other.parent):
                raise ValueError("operands from different towers")

    def __add__(self, other):
        self._check(other)
        par = self.parent
        den = max(self.den, other.den)
        sa = par.p ** (den - self.den)
        sb = par.p ** (den - other.den)
        vec = [(x * sa + y * sb) % par.pm
               for x, y in zip(self.vec, other.vec)]
        return FieldElement(par, vec, den, min(self.prec, other.prec))

    def __sub__(self, other):
        self._check(other)
        par = self.parent
        den = max(self.den, other.den)
        sa = par.p ** (den - self.den)
        sb = par.p ** (den - other.den)
        vec = [(x * sa - y * sb) % par.pm
               for x, y in zip(self.vec, other.vec)]
        return FieldElement(par, vec, den, min(self.prec, other.prec))

    def __neg__(self):
        par = self.parent
        return FieldElement(par, [(-x) % par.pm for x in self.vec],
                            self.den, self.prec)

    def __mul__(self, other):
        self._check(other)
        par = self.parent
        vec = par.kern.field_mul(list(self.vec), list(other.vec),
                                 par.e, par.f, par.zq.ured, par._ered,
                                 par.pm)
        prec = min(self.prec + other.val_floor(),
                   other.prec + self.val_floor())
        return FieldElement(par, vec, self.den + other.den, prec)

    def __pow__(self, n):
        par = self.parent
        if n < 0:
            return self.inverse() ** (-n)
        result = par.one()
        base = self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result

    def inverse(self):
        par = self.parent
        try:
            v = self.valuation()
        except IndistinguishableFromZero:
            raise DivisionByZero(
                "inverse of an element indistinguishable from zero")
        new_prec = self.prec - 2 * v
        if new_prec <= 0:
            raise PrecisionExhausted(
                f"inverse would have precision {new_prec}")
        unit = self * par.pi_pow(-v) if v else self
        assert unit.val_floor() == 0
        # Newton: y <- y (2 - u y), starting from the residue inverse
        res_inv = unit.residue().inverse()
        y = par.from_unram([c for c in res_inv.coords])
        two = par.from_int(2)
        steps = max(1, math.ceil(math.log2(par.e * par.cap)) + 1)
        for _ in range(steps):
            y = y * (two - unit * y)
        out = y * par.pi_pow(-v) if v else y
        return FieldElement(par, list(out.vec), out.den, new_prec)

    def __truediv__(self, other):
        return self * other.inverse()

    # -- comparison and display

    def eq_within(self, other, prec=None):
        diff = self - other
        return diff.is_zero_within(prec)

    def __eq__(self, other):
        if not isinstance(other, FieldElement):
            return NotImplemented
        return self.eq_within(other)

    def __hash__(self):
        raise TypeError("FieldElement precision-relative equality; no hash")

    def digits(self):
        """Canonical serialization: [[coords per pi-layer]], den, prec."""
        par = self.parent
        return {
            "coords": [[int(self.vec[i * par.f + j]) for j in range(par.f)]
                       for i in range(par.e)],
            "den": self.den,
            "prec_abs": self.prec,
        }

    def __repr__(self):
        par = self.parent
        body = self.digits()["coords"]
        s = f"{body}"
        if self.den:
            s += f" / {par.p}^{self.den}"
        return f"El({s}; prec={self.prec})"


# -- polynomials over a LocalField ---------------------------------------

def poly_eval(coeffs, x):
    acc = x.parent.zero()
    for c in reversed(coeffs):
        acc = acc * x + c
    return acc


def poly_derivative(coeffs):
    return [c * c.parent.from_int(i) for i, c in enumerate(coeffs)][1:]


def hensel_root(coeffs, x0):
    """Newton iteration from x0, requiring v(g(x0)) > 2 v(g'(x0)).

    The returned root carries the honest precision N_abs - v(g'): values
    of g are only known modulo P^N_abs, which pins the root no finer.
    """
    par = x0.parent
    dcoeffs = poly_derivative(coeffs)
    gx = poly_eval(coeffs, x0)
    gpx = poly_eval(dcoeffs, x0)
    try:
        v_gp = gpx.valuation()
    except IndistinguishableFromZero:
        raise HenselFails("derivative vanishes within precision")
    if not gx.is_zero_within() and gx.valuation() <= 2 * v_gp:
        raise HenselFails(
            f"v(g(x0)) = {gx.valuation()} <= 2 v(g'(x0)) = {2 * v_gp}")
    if par.N_abs - v_gp <= 2:
        raise HenselFails("working precision cannot separate the root "
                          f"(v(g') = {v_gp})")
    x = x0
    for _ in range(par.N_abs.bit_length() + 3):
        gx = poly_eval(coeffs, x)
        if gx.is_zero_within(par.N_abs - v_gp):
            break
        gpx = poly_eval(dcoeffs, x)
        x = x - gx / gpx
    else:
        raise HenselFails("Newton iteration did not converge")
    return par.element(list(x.vec), x.den,
                       min(x.prec, par.N_abs - v_gp))


# -- compositum -----------------------------------------------------------

class TowerEmbedding:
    """Embedding of a tower L into a tower F with the same Eisenstein layer.

    The unramified generator of L goes to a Hensel-lifted root W of L's
    unramified polynomial inside F's unramified layer; pi goes to pi.
    Valuations are preserved (both are normalized, F/L is unramified).
    """

    def __init__(self, src, dst, w_image=None):
        self.src = src
        self.dst = dst
        if w_image is None and src.f == dst.f:
            w_image = dst.zq.one() if src.f == 1 else None
        if w_image is None:
            w_image = _embed_unram_generator(src, dst)
        self.w_image = w_image
        pw = dst.zq.one()
        self.wpows = []
        for _ in range(src.f):
            self.wpows.append(pw)
            pw = dst.zq.mul(pw, w_image)
        self._solver = None

    def apply_unram(self, coords):
        out = self.dst.zq.zero()
        for j, c in enumerate(coords):
            if c:
                out = self.dst.zq.add(out, self.dst.zq.scale(self.wpows[j], c))
        return out

    def apply(self, x):
        src, dst = self.src, self.dst
        assert x.parent.same_tower(src)
        flat = []
        for i in range(src.e):
            flat.extend(self.apply_unram(x.vec[i * src.f:(i + 1) * src.f]))
        return FieldElement(dst, flat, x.den, x.prec)

    def _build_solver(self):
        # row-reduce the (f_F x f_L) matrix of W-powers with unit pivots;
        # full column rank mod p because the W-powers are independent over F_p
        dst, src = self.dst, self.src
        fF, fL = dst.f, src.f
        p, pm = dst.p, dst.pm
        rows = [[self.wpows[j][i] for j in range(fL)] + [0] * fF
                for i in range(fF)]
        for i in range(fF):
            rows[i][fL + i] = 1  # track transform
        pivots = []
        used = set()
        for c in range(fL):
            pr = next(i for i in range(fF)
                      if i not in used and rows[i][c] % p != 0)
            inv = pow(rows[pr][c], -1, pm)
            rows[pr] = [(x * inv) % pm for x in rows[pr]]
            for i in range(fF):
                if i != pr and rows[i][c] % pm:
                    fap = rows[i][c]
                    rows[i] = [(a - fap * b) % pm
                               for a, b in zip(rows[i], rows[pr])]
            pivots.append(pr)
            used.add(pr)
        self._solver = (rows, pivots, used)

    def pullback_unram(self, coords, tol_digits):
        """Solve for src-layer coordinates; residual must vanish mod p^tol."""
        if self._solver is None:
            self._build_solver()
        rows, pivots, used = self._solver
        dst, src = self.dst, self.src
        fF, fL = dst.f, src.f
        pm = dst.pm
        # apply recorded transform to the target vector
        transformed = [
            sum(rows[i][fL + t] * coords[t] for t in range(fF)) % pm
            for i in range(fF)
        ]
        sol = [transformed[pr] for pr in pivots]
        tol = dst.p ** max(0, min(tol_digits, dst.cap))
        for i in range(fF):
            if i not in used and transformed[i] % tol:
                return None
        return sol

    def pullback(self, y, prec=None):
        """Preimage in the source tower, or None if y is not in the image."""
        src, dst = self.src, self.dst
        if prec is None:
            prec = y.prec
        prec = min(prec, y.prec)
        flat = []
        shifted = prec + dst.e * y.den
        for i in range(src.e):
            digits = (shifted - i + dst.e - 1) // dst.e
            sol = self.pullback_unram(
                list(y.vec[i * dst.f:(i + 1) * dst.f]), digits)
            if sol is None:
                return None
            flat.extend(sol)
        return FieldElement(src, flat, y.den, prec)


class _IdentityEmbedding:
    def __init__(self, field):
        self.src = field
        self.dst = field

    def apply(self, x):
        return x

    def apply_unram(self, coords):
        return list(coords)

    def pullback(self, y, prec=None):
        return y


def _embed_unram_generator(src, dst):
    """Root of src.unram_poly in dst's unramified layer, canonically chosen."""
    kappa = dst.residue_field
    target_poly = [c % dst.p for c in src.unram_poly]
    # roots in the residue field, smallest encoding first
    root_res = None
    for enc in range(kappa.q):
        x = kappa.from_encoding(enc)
        acc = kappa.zero()
        for c in reversed(target_poly):
            cc = kappa.element([c] + [0] * (kappa.n - 1))
            acc = acc * x + cc
        if acc.is_zero():
            root_res = x
            break
    if root_res is None:
        raise RuntimeError("unramified subfield root not found")
    x = [int(c) % dst.pm for c in root_res.coords]
    poly = [([c % dst.pm] + [0] * (dst.f - 1)) for c in src.unram_poly]
    dpoly = [dst.zq.scale(poly[i], i) for i in range(1, len(poly))]
    steps = max(1, math.ceil(math.log2(dst.cap)) + 1)
    for _ in range(steps):
        gx = dst._zq_poly_eval(poly, x)
        gpx = dst._zq_poly_eval(dpoly, x)
        x = dst.zq.sub(x, dst.zq.mul(gx, dst.zq.inv_unit(gpx)))
    return x


def compositum(L, e_rel=None):
    """The unramified extension F of L of degree e_rel, with the embedding.

    F reuses L's Eisenstein polynomial with coefficients re-embedded into
    the larger unramified layer, so pi maps to pi.
    """
    if e_rel is None:
        e_rel = L.e
    if e_rel == 1:
        return L, _IdentityEmbedding(L)
    f_new = L.f * e_rel
    # scratch unramified field with enough digits to carry the embedded
    # Eisenstein coefficients at the compositum's own storage precision
    cap_F = math.ceil(L.N_abs / L.e) + GUARD_DIGITS
    scratch = LocalField(L.p, f_new, [[-L.p] + [0] * (f_new - 1), 1],
                         cap_F + 2)
    w_image = _embed_unram_generator(L, scratch)
    # the scratch field only provided unramified arithmetic; rebuild at the
    # real working precision with the embedded Eisenstein coefficients
    pw = scratch.zq.one()
    wpows = []
    for _ in range(L.f):
        wpows.append(pw)
        pw = scratch.zq.mul(pw, w_image)
    eis = []
    for c in L.eis:
        out = scratch.zq.zero()
        for j, cc in enumerate(c):
            if cc:
                out = scratch.zq.add(out, scratch.zq.scale(wpows[j], cc))
        eis.append([x % scratch.pm for x in out])
    F = LocalField(L.p, f_new, eis, L.N_abs)
    emb = TowerEmbedding(L, F)
    return F, emb


# -- fixed fields ----------------------------------------------------------

class SubfieldData:
    """Fixed field of a set of automorphisms, described inside L.

    Carries a Z_p-basis of the fixed space, a minimal-positive-valuation
    element pi_K, and the ramification/inertia degrees of L over the fixed
    field.
    """

    def __init__(self, basis, pi_K, e_rel, d_rel, autos):
        self.basis = basis
        self.pi_K = pi_K
        self.e_rel = e_rel
        self.d_rel = d_rel
        self.autos = autos

    def __repr__(self):
        return f"SubfieldData(e={self.e_rel}, d={self.d_rel})"


def fixed_field(autos, L):
    """Joint fixed field of a subgroup of automorphisms, as SubfieldData.

    The fixed space is the joint kernel of (sigma - id) as Z_p-linear maps
    at working precision; rank ambiguity raises PrecisionExhausted.
    """
    from .intlinalg import diagonalize_mod_pp
    import numpy as np

    n = L.degree
    if n % len(autos) != 0:
        raise ValueError("automorphism count must divide the degree")
    expected = n // len(autos)
    basis_elems = []
    for i in range(L.e):
        for j in range(L.f):
            vec = [0] * n
            vec[i * L.f + j] = 1
            basis_elems.append(L.element(vec))
    rows = []
    nontrivial = [a for a in autos if not _is_identity_auto(a, L)]
    for a in nontrivial:
        cols = [list((a.apply(b) - b).vec) for b in basis_elems]
        for r in range(n):
            rows.append([cols[c][r] for c in range(n)])
    if not rows:
        basis = basis_elems
        pi_K = L.pi()
        return SubfieldData(basis, pi_K, 1, 1, list(autos))
    diag, _, V = diagonalize_mod_pp(
        np.array(rows, dtype=object), L.p, L.cap, track_v=True)
    order = sorted(range(n), key=lambda i: -(diag[i] if i < len(diag) else L.cap))
    vals = [diag[i] if i < len(diag) else L.cap for i in order]
    # matrix entries are only as accurate as the automorphisms' pi-images;
    # genuine kernel directions sit at or above that accuracy (worst layer)
    # and must be separated from the finite invariants by a clear gap
    auto_prec = min([a.pi_image.prec for a in nontrivial] + [L.N_abs])
    a_eff = (auto_prec - (L.e - 1)) // L.e
    gap_ok = expected == n or vals[expected - 1] - vals[expected] >= 3
    if vals[expected - 1] < a_eff - 1 or not gap_ok:
        raise PrecisionExhausted("fixed-space rank ambiguous at working "
                                 f"precision (diag valuations {vals}, "
                                 f"accuracy {a_eff} digits)")
    kernel_vecs = [[int(V[r, order[i]]) for r in range(n)]
                   for i in range(expected)]
    basis = [L.element(v, prec=max(L.e, L.N_abs - L.e))
             for v in kernel_vecs]

    # ramification data of L over the fixed field
    e_rel = sum(1 for a in autos if a.frob_power % L.f == 0)
    d_rel = len(autos) // e_rel

    pi_K = _minimal_positive_valuation(basis, L, e_rel)
    return SubfieldData(basis, pi_K, e_rel, d_rel, list(autos))


def _is_identity_auto(a, L):
    return a.frob_power % L.f == 0 and (a.pi_image - L.pi()).is_zero_within(
        L.N_abs - 1)


def _minimal_positive_valuation(basis, L, expected_val):
    """Element of minimal positive valuation in the span of `basis`.

    Walks the valuation filtration: at level m, the digit map to P^m/P^(m+1)
    is F_p-linear; a basis element with nonzero digit at level m >= 1 has
    valuation exactly m, and the kernel combinations (plus p times the old
    basis) span the next level.  Bases are kept at full rank with a Z_p row
    echelon.
    """
    from .intlinalg import kernel_mod_p, zp_row_echelon

    p, e, f = L.p, L.e, L.f

    def digit(vec, m):
        layer = m % e
        scale = p ** (m // e)
        return [(vec[layer * f + j] // scale) % p for j in range(f)]

    rows = zp_row_echelon([list(b.vec) for b in basis], p, L.cap)
    for m in range(0, L.N_abs - 1):
        imgs = [digit(v, m) for v in rows]
        if m > 0:
            for img, vec in zip(imgs, rows):
                if any(img):
                    elem = L.element(vec)
                    if elem.valuation() != expected_val:
                        raise PrecisionExhausted(
                            f"minimal positive valuation {elem.valuation()}"
                            f" != e(L/K) = {expected_val}")
                    return elem
        mat = [[imgs[c][r] for c in range(len(rows))] for r in range(f)]
        combos = kernel_mod_p(mat, p, ncols=len(rows)) if rows else []
        gens = []
        for combo in combos:
            vec = [0] * (e * f)
            for c, v in zip(combo, rows):
                if c:
                    vec = [a + c * b for a, b in zip(vec, v)]
            gens.append(vec)
        gens.extend([[p * x for x in v] for v in rows])
        rows = zp_row_echelon(gens, p, L.cap)
        if not rows:
            raise PrecisionExhausted(
                "filtration collapsed before finding a uniformizer")
    raise PrecisionExhausted("no positive-valuation element found")
