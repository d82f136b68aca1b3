"""Automorphism groups of the towers.

An automorphism is a pair (Frobenius power on the unramified layer, image
of the Eisenstein root).  The full group over Q_p is enumerated by finding,
for each Frobenius twist of the unramified layer, all roots of the twisted
Eisenstein polynomial: a digit-by-digit residue search that hands off to
Newton iteration once the usual Hensel criterion holds.  Extensions that
come up later (the unramified compositum) never need a root search; their
automorphisms are assembled from lifts.
"""

from .errors import HenselFails, NotGalois, PrecisionExhausted
from .local_field import (
    FieldElement,
    hensel_root,
    poly_derivative,
    poly_eval,
)


class Automorphism:
    """Field automorphism: w -> Frobenius^frob_power(w), pi -> pi_image."""

    __slots__ = ("field", "frob_power", "pi_image")

    def __init__(self, field, frob_power, pi_image):
        self.field = field
        self.frob_power = frob_power % field.f
        self.pi_image = pi_image

    def apply(self, x):
        L = self.field
        assert x.parent.same_tower(L)
        t = self.frob_power
        layers = [L.frob_unram(list(x.vec[i * L.f:(i + 1) * L.f]), t)
                  for i in range(L.e)]
        acc = L.zero()
        for coords in reversed(layers):
            acc = acc * self.pi_image + L.from_unram(coords)
        return FieldElement(L, list(acc.vec), acc.den + x.den,
                            min(x.prec, acc.prec))

    def compose(self, other):
        """self after other: (self . other)(x) = self(other(x))."""
        return Automorphism(self.field,
                            self.frob_power + other.frob_power,
                            self.apply(other.pi_image))

    def is_identity(self, tol=None):
        L = self.field
        if self.frob_power != 0:
            return False
        if tol is None:
            tol = L.N_abs - 1
        return (self.pi_image - L.pi()).is_zero_within(tol)

    def sort_key(self):
        return (self.frob_power, self.pi_image.den,
                tuple(self.pi_image.vec))

    def __repr__(self):
        return f"Aut(frob^{self.frob_power}, pi->{self.pi_image!r})"


class GaloisGroup:
    """Automorphisms with a composition table over stable indices."""

    def __init__(self, field, elements, sep_prec):
        self.field = field
        self.elements = elements
        self.sep_prec = sep_prec
        n = len(elements)
        self.identity = next(
            i for i, a in enumerate(elements) if a.is_identity())
        self.mul_table = [[None] * n for _ in range(n)]
        for i in range(n):
            for j in range(n):
                self.mul_table[i][j] = self._match(
                    elements[i].compose(elements[j]))
        self.inv_table = [None] * n
        for i in range(n):
            for j in range(n):
                if self.mul_table[i][j] == self.identity:
                    self.inv_table[i] = j
                    break
        assert all(v is not None for v in self.inv_table)

    def _match(self, auto):
        for k, b in enumerate(self.elements):
            if (auto.frob_power == b.frob_power
                    and (auto.pi_image - b.pi_image).is_zero_within(
                        self.sep_prec)):
                return k
        raise NotGalois("composition left the automorphism set")

    def __len__(self):
        return len(self.elements)

    def mul(self, i, j):
        return self.mul_table[i][j]

    def inv(self, i):
        return self.inv_table[i]

    def order_of(self, i):
        k, n = i, 1
        while k != self.identity:
            k = self.mul(k, i)
            n += 1
        return n

    def is_cyclic(self):
        return any(self.order_of(i) == len(self) for i in range(len(self)))

    def cyclic_generator(self):
        for i in range(len(self)):
            if self.order_of(i) == len(self):
                return i
        return None

    def subgroup_indices_of_order(self, m):
        """All subgroups of order m (desk scale: enumerate cyclic ones and
        their joins for m <= 4)."""
        n = len(self)
        found = []
        if m == 1:
            return [[self.identity]]
        cyclic = []
        for i in range(n):
            if self.order_of(i) == m:
                sub = sorted(self._generated([i]))
                if sub not in cyclic:
                    cyclic.append(sub)
        found.extend(cyclic)
        if m == 4:  # V_4 subgroups
            invol = [i for i in range(n)
                     if i != self.identity and self.order_of(i) == 2]
            for a in range(len(invol)):
                for b in range(a + 1, len(invol)):
                    sub = sorted(self._generated([invol[a], invol[b]]))
                    if len(sub) == 4 and sub not in found:
                        found.append(sub)
        return found

    def _generated(self, gens):
        seen = {self.identity}
        frontier = list(gens)
        while frontier:
            g = frontier.pop()
            if g in seen:
                continue
            seen.add(g)
            for h in list(seen):
                frontier.append(self.mul(g, h))
                frontier.append(self.mul(h, g))
        return seen

    def structure_name(self):
        n = len(self)
        if self.is_cyclic():
            return f"C{n}"
        orders = sorted(self.order_of(i) for i in range(n))
        if n == 4:
            return "V4"
        if n == 6:
            return "S3"
        if n == 8 and orders.count(2) == 1:
            return "Q8"
        return f"order{n}"


def eisenstein_roots(L, coeffs):
    """All roots in L (valuation 1) of an Eisenstein-shaped polynomial.

    Digit search: true roots survive the filter v(g(x)) >= m+1 for an
    approximation x modulo P^(m+1) because the divided derivatives of an
    integral polynomial are integral.  Newton finishes each branch as soon
    as v(g(x)) > 2 v(g'(x)).
    """
    kappa = L.residue_field
    dcoeffs = poly_derivative(coeffs)
    deg = len(coeffs) - 1
    if deg == 1:
        return [-coeffs[0]]
    # Hasse derivatives g_i = g^(i)/i! stay integral, which makes the
    # root-proximity filter below sound
    hasse = []
    for i in range(1, deg + 1):
        hasse.append([
            L.from_int(_binom(k, i)) * coeffs[k]
            for k in range(i, deg + 1)
        ])
    roots = []

    def could_contain_root(x, depth):
        """Necessary condition for a root congruent to x mod P^depth:
        g(x) = -sum_i g_i(x) (r-x)^i forces
        v(g(x)) >= min_i [v(g_i(x)) + i*depth]."""
        gx = poly_eval(coeffs, x)
        if gx.is_zero_within(L.N_abs - 1):
            return True
        bound = None
        for i, hc in enumerate(hasse, start=1):
            hv = poly_eval(hc, x)
            term = (hv.val_floor() if hv.is_zero_within()
                    else hv.valuation()) + i * depth
            bound = term if bound is None else min(bound, term)
        return gx.valuation() >= min(bound, L.N_abs - 1)

    def isolated(x, m):
        # A branch at depth m (x fixed mod P^(m+1)) contains a single root
        # once v(g'(x)) <= m: any second root r' in the branch would force
        # v(g'(r)) >= v(r - r') >= m + 1.  Newton then applies as soon as
        # v(g(x)) > 2 v(g'(x)).
        gpx = poly_eval(dcoeffs, x)
        if gpx.is_zero_within() or gpx.valuation() > m:
            return False
        gx = poly_eval(coeffs, x)
        return (gx.is_zero_within(L.N_abs - 1)
                or gx.valuation() > 2 * gpx.valuation())

    def push(root):
        for r in roots:
            if (root - r).is_zero_within(L.N_abs - 2):
                return
        roots.append(root)

    # level-1 digits: Eisenstein roots have valuation exactly 1
    frontier = []
    pi = L.pi()
    for enc in range(1, kappa.q):
        c = kappa.from_encoding(enc)
        x = L.from_unram([int(t) for t in c.coords]) * pi
        if could_contain_root(x, 2):
            frontier.append((x, 1))
    while frontier:
        x, m = frontier.pop()
        if isolated(x, m):
            try:
                push(hensel_root(coeffs, x))
            except HenselFails:
                pass
            continue
        if m + 2 > L.N_abs - 1:
            # a surviving branch that was never isolated means the working
            # precision cannot certify the root count
            raise PrecisionExhausted(
                "root search exhausted the working precision before "
                "isolating a branch; raise N_abs")
        pim = L.pi_pow(m + 1)
        for enc in range(kappa.q):
            c = kappa.from_encoding(enc)
            x2 = x + L.from_unram([int(t) for t in c.coords]) * pim
            if could_contain_root(x2, m + 2):
                frontier.append((x2, m + 1))
    return sorted(roots, key=lambda r: tuple(r.vec))


def _binom(n, k):
    from math import comb
    return comb(n, k)


def compute_automorphisms(L):
    """Gal(L/Q_p) as a GaloisGroup; raises NotGalois when undersized."""
    autos = []
    for j in range(L.f):
        twisted = [L.from_unram(L.frob_unram(c, j)) for c in L.eis]
        for root in eisenstein_roots(L, twisted):
            autos.append(Automorphism(L, j, root))
    if len(autos) != L.degree:
        raise NotGalois(
            f"found {len(autos)} automorphisms, degree is {L.degree}")
    autos.sort(key=lambda a: a.sort_key())
    sep = _separation_precision(autos, L)
    return GaloisGroup(L, autos, sep)


def group_from_automorphisms(L, autos):
    """GaloisGroup structure on an explicit (sub)set of automorphisms."""
    autos = sorted(autos, key=lambda a: a.sort_key())
    sep = _separation_precision(autos, L)
    return GaloisGroup(L, autos, sep)


def _separation_precision(autos, L):
    """Smallest precision distinguishing all pi-images pairwise."""
    sep = 2
    for i in range(len(autos)):
        for j in range(i + 1, len(autos)):
            if autos[i].frob_power != autos[j].frob_power:
                continue
            diff = autos[i].pi_image - autos[j].pi_image
            v = diff.valuation()  # distinct roots: nonzero difference
            sep = max(sep, v + 1)
    if sep > L.N_abs - 2:
        raise NotGalois("automorphisms not separable at working precision")
    return sep


def restrict_unram(sigma, d, f_K=1):
    """The j in [0, d) with (sigma-hat restricted to N)^(-1) = phi^j.

    sigma acts on residues as x -> x^(p^t); relative to the base field
    (residue degree f_K) this is the f_K-power Frobenius to the t/f_K, and
    the lift convention inverts it.
    """
    t = sigma.frob_power
    if t % f_K:
        raise ValueError("automorphism does not fix the base residue field")
    j0 = (t // f_K) % d if d > 0 else 0
    return (-j0) % d if d > 1 else 0


def lift_sigma_hat(sigma, F, emb, d, f_K=1):
    """The unique extension of sigma to F that restricts to phi^-j on the
    maximal unramified subextension over the base field."""
    j = restrict_unram(sigma, d, f_K)
    t_hat = (-j * f_K) % F.f
    assert (t_hat - sigma.frob_power) % sigma.field.f == 0
    return Automorphism(F, t_hat, emb.apply(sigma.pi_image))


def frobenius_over(F, L):
    """The canonical generator of Gal(F/L) for the unramified F/L."""
    return Automorphism(F, L.f % F.f, F.pi())
