"""The fast local-fundamental-class computation.

Given a Galois tower L and a base (Q_p, or a fixed field inside L), the
pipeline produces the fundamental class of the extension as an explicit
2-cocycle with values in L^x known modulo the k-units U_L^(k):

  1. a uniformizer pi of the unramified compositum F whose norm down to L
     is the base uniformizer, obtained from a level-by-level norm-equation
     solve (residue discrete log, then trace equations);
  2. for every sigma, a unit u_sigma with
     u_sigma^(Frob - 1) = sigma-hat(pi)/pi modulo U_F^(k+2),
     solved level-by-level (residue Hilbert 90, then Artin-Schreier);
  3. the 1-cochain beta on the d-fold product of F twisted by the shift
     action, whose coboundary has diagonal values in L; the table returned
     is the pointwise inverse of that coboundary.

Every run asserts the two defining-equation residuals at level k+2 and the
final table precision at level k.
"""

import math

from .errors import (
    DiagonalityViolated,
    NormSolveFailed,
    NotInL,
    PrecisionExhausted,
)
from .finite_field import (
    ff_solve_artin_schreier,
    ff_solve_hilbert90,
    ff_solve_trace,
)
from .galois import (
    compute_automorphisms,
    frobenius_over,
    group_from_automorphisms,
    lift_sigma_hat,
    restrict_unram,
)
from .intlinalg import xgcd
from .local_field import LocalField, compositum

ALGORITHM_VERSION = "1.0"


class OneCochain:
    """sigma -> vector over the compositum (length d = inertia degree)."""

    def __init__(self, group, vectors):
        self.group = group
        self.vectors = vectors
        ident = vectors[group.identity]
        one = ident[0].parent.one()
        assert all((c - one).is_zero_within() for c in ident)

    def __getitem__(self, idx):
        return self.vectors[idx]


class TwoCocycle:
    """Pair table of field values, meaningful modulo U^(k)."""

    def __init__(self, group, values, k, meta=None):
        self.group = group
        self.values = values
        self.k = k
        self.meta = meta or {}
        for (i, j), val in values.items():
            v = val.valuation()  # raises if zero within precision
            if val.prec - v < k:
                raise PrecisionExhausted(
                    f"table value at {(i, j)} has multiplicative precision "
                    f"{val.prec - v} < k = {k}")

    def value(self, i, j):
        return self.values[(i, j)]

    def pointwise_inverse(self):
        inv = {key: val.inverse() for key, val in self.values.items()}
        return TwoCocycle(self.group, inv, self.k, dict(self.meta))

    def pointwise_product(self, other):
        assert self.group is other.group
        prod = {key: val * other.values[key]
                for key, val in self.values.items()}
        return TwoCocycle(self.group, prod, min(self.k, other.k),
                          dict(self.meta))

    def serialize(self, units_quotient=None):
        group_legend = [
            {"frob_power": a.frob_power,
             "pi_image": a.pi_image.digits()}
            for a in self.group.elements
        ]
        table = []
        for i in range(len(self.group)):
            for j in range(len(self.group)):
                val = self.values[(i, j)]
                entry = {
                    "sigma": i,
                    "tau": j,
                    "valuation": val.valuation(),
                    "digits": val.digits(),
                }
                if units_quotient is not None:
                    entry["unit_coords"] = list(
                        units_quotient.dlog(val))
                table.append(entry)
        return {"metadata": self.meta, "group": group_legend, "table": table}


class RelativeExtension:
    """L together with a base field: Q_p, or the fixed field of a subgroup.

    Bundles the relative invariants (d, e_rel, f_K), the compositum F with
    its embedding, the distinguished lifts sigma-hat, and the twisted
    action on d-vectors over F.
    """

    def __init__(self, L, base=None, group=None):
        self.L = L
        self.base = base
        if base is None:
            self.group = group if group is not None else \
                compute_automorphisms(L)
            self.d = L.f
            self.e_rel = L.e
            self.f_K = 1
            self.pi_K = L.from_int(L.p)
        else:
            self.group = group_from_automorphisms(L, base.autos)
            self.d = base.d_rel
            self.e_rel = base.e_rel
            self.f_K = L.f // self.d
            self.pi_K = base.pi_K
        self.n = self.d * self.e_rel
        assert len(self.group) == self.n
        self.F, self.emb = compositum(L, self.e_rel)
        self.frob_FL = frobenius_over(self.F, L)
        self._frob_pows = [None] * self.e_rel
        self.j_of = [restrict_unram(a, self.d, self.f_K)
                     for a in self.group.elements]
        self.sigma_hat = [lift_sigma_hat(a, self.F, self.emb,
                                         self.d, self.f_K)
                          for a in self.group.elements]
        self._res_emb_pows = None

    def frob_pow(self, s):
        from .galois import Automorphism

        s %= self.e_rel
        if self._frob_pows[s] is None:
            acc = Automorphism(self.F, 0, self.F.pi())
            for _ in range(s):
                acc = self.frob_FL.compose(acc)
            self._frob_pows[s] = acc
        return self._frob_pows[s]

    def norm_FL(self, x):
        out = x
        for s in range(1, self.e_rel):
            out = out * self.frob_pow(s).apply(x)
        return out

    def embed_residue(self, r):
        """kappa_L -> kappa_F along the compositum embedding."""
        F = self.F
        if self.e_rel == 1:
            return r
        if self._res_emb_pows is None:
            self._res_emb_pows = [
                F.residue_field.element([c % F.p for c in w[:F.f]])
                for w in self.emb.wpows
            ]
        out = F.residue_field.zero()
        for coeff, wp in zip(r.coords, self._res_emb_pows):
            if coeff:
                scal = F.residue_field.element(
                    [coeff] + [0] * (F.f - 1))
                out = out + scal * wp
        return out

    def act(self, sigma_idx, vec):
        """The twisted action of sigma on a d-vector over F."""
        j = self.j_of[sigma_idx]
        hat = self.sigma_hat[sigma_idx]
        d = self.d
        out = []
        for i in range(d):
            s = i + j
            if s < d:
                out.append(hat.apply(vec[s]))
            else:
                out.append(self.frob_FL.apply(hat.apply(vec[s - d])))
        return out


def solve_norm_unit(rel, u, k):
    """v in U_F with N_{F/L}(v) = u modulo U_L^(k+2).

    u is a unit of L given embedded in F.  Residue level: the norm on
    residues is x -> x^((q_F-1)/(q_L-1)), inverted through the discrete
    log; one-unit levels: trace equations in the residue field.
    """
    F, L = rel.F, rel.L
    if u.valuation() != 0:
        raise NormSolveFailed(f"norm target has valuation {u.valuation()}")
    q_L = L.p ** L.f
    q_F = F.p ** F.f
    kappa_F = F.residue_field
    gen = kappa_F.gen()
    a = kappa_F.log_of(u.residue())
    E = (q_F - 1) // (q_L - 1)
    g, inv_e, _ = xgcd(E, q_F - 1)
    if a % g:
        raise NormSolveFailed("residue of the norm target is not a norm")
    b = (a // g) * (inv_e % ((q_F - 1) // g)) % ((q_F - 1) // g)
    v = F.teichmueller(gen ** b)
    one = F.one()
    for m in range(1, k + 2):
        defect = u / rel.norm_FL(v)
        delta = defect - one
        if delta.is_zero_within(k + 2):
            break
        if delta.valuation() < m:
            raise NormSolveFailed(
                f"defect at level {delta.valuation()} below target {m}")
        if delta.valuation() > m:
            continue
        digit = (delta * F.pi_pow(-m)).residue()
        if digit.frobenius(L.f) != digit:
            raise NormSolveFailed("defect digit escaped the base residue "
                                  "field")
        y = ff_solve_trace(digit, L.f)
        v = v * (one + F.from_unram([int(t) for t in y.coords])
                 * F.pi_pow(m))
    defect = u / rel.norm_FL(v)
    if not (defect - one).is_zero_within(k + 2):
        raise NormSolveFailed("norm equation unsolved at requested level")
    return v


def solve_frobenius_unit(rel, c, k):
    """u in U_F with u^(Frob_{F/L} - 1) = c modulo U_F^(k+2).

    Residue level through Hilbert 90 (deterministic smallest solution),
    one-unit levels through Artin-Schreier solves with zero free offset.
    """
    F, L = rel.F, rel.L
    x = F.teichmueller(ff_solve_hilbert90(c.residue(), L.f))
    one = F.one()
    frob = rel.frob_FL
    for m in range(1, k + 2):
        defect = c * x / frob.apply(x)
        delta = defect - one
        if delta.is_zero_within(k + 2):
            break
        if delta.valuation() < m:
            raise NormSolveFailed(
                f"defect at level {delta.valuation()} below target {m}")
        if delta.valuation() > m:
            continue
        digit = (delta * F.pi_pow(-m)).residue()
        y = ff_solve_artin_schreier(digit, L.f)
        x = x * (one + F.from_unram([int(t) for t in y.coords])
                 * F.pi_pow(m))
    defect = c * x / frob.apply(x)
    if not (defect - one).is_zero_within(k + 2):
        raise NormSolveFailed("Frobenius unit equation unsolved at "
                              "requested level")
    return x


def lfc_pipeline(rel, k):
    """Steps 1-3 on a prepared RelativeExtension; returns the cocycle and
    the intermediates (pi, the u_sigma list, beta)."""
    F, L = rel.F, rel.L
    G = rel.group
    d, e_rel = rel.d, rel.e_rel
    one_F = F.one()

    # step 1: pi with N_{F/L}(pi) = pi_K mod U^(k+2)
    pi_K_F = rel.emb.apply(rel.pi_K)
    if e_rel == 1:
        pi = pi_K_F
    else:
        u = rel.pi_K * L.pi_pow(-e_rel)
        assert u.valuation() == 0
        v = solve_norm_unit(rel, rel.emb.apply(u), k)
        pi = v * F.pi()
    norm_ratio = rel.norm_FL(pi) / pi_K_F
    assert norm_ratio.valuation() == 0
    if not (norm_ratio - one_F).is_zero_within(k + 2):
        raise NormSolveFailed("step-1 residual above U^(k+2)")

    # step 2: the units u_sigma
    u_sigmas = []
    pi_inv = None
    for idx, sigma in enumerate(G.elements):
        if idx == G.identity:
            u_sigmas.append(one_F)
            continue
        if e_rel == 1:
            # unramified case: sigma-hat fixes pi, any unit solves the
            # trivial equation; 1/pi reproduces the classical table exactly
            if pi_inv is None:
                pi_inv = pi.inverse()
            u_sigmas.append(pi_inv)
            continue
        c = rel.sigma_hat[idx].apply(pi) / pi
        assert c.valuation() == 0
        norm_c = rel.norm_FL(c)
        if not (norm_c - one_F).is_zero_within(k + 2):
            raise NormSolveFailed(
                "sigma-hat(pi)/pi does not have norm 1 at level k+2")
        u = solve_frobenius_unit(rel, c, k)
        residual = c * u / rel.frob_FL.apply(u)
        assert (residual - one_F).is_zero_within(k + 2)
        u_sigmas.append(u)

    # step 3: beta and the coboundary
    beta_vecs = []
    for idx in range(len(G)):
        j = rel.j_of[idx]
        u = u_sigmas[idx]
        tail = u * rel.sigma_hat[idx].apply(pi)
        beta_vecs.append([u] * (d - j) + [tail] * j)
    beta = OneCochain(G, beta_vecs)

    values = {}
    for i in range(len(G)):
        for j in range(len(G)):
            acted = rel.act(i, beta[j])
            ij = G.mul(i, j)
            comp = [acted[t] * beta[i][t] / beta[ij][t] for t in range(d)]
            for t in range(1, d):
                ratio = comp[t] / comp[0]
                if ratio.valuation() != 0 or not (
                        ratio - one_F).is_zero_within(k):
                    raise DiagonalityViolated(
                        f"components of gamma({i},{j}) disagree mod U^({k})")
            # the u_sigma solve their equations mod U^(k+2) and the two
            # divisions above cost one digit each, so membership in L holds
            # at multiplicative level k
            target = comp[0].valuation() + k
            pulled = rel.emb.pullback(comp[0], prec=target)
            if pulled is None:
                raise NotInL(f"gamma({i},{j}) is not in L within precision")
            if pulled.prec - pulled.valuation() < k:
                raise PrecisionExhausted(
                    f"gamma({i},{j}) multiplicative precision "
                    f"{pulled.prec - pulled.valuation()} < {k}")
            values[(i, j)] = pulled

    gamma = TwoCocycle(G, values, k)
    return gamma, pi, u_sigmas, beta


def lfc_main(L, k, base=None, group=None):
    """The fundamental class of L over the base, modulo U_L^(k).

    base None means Q_p; otherwise a SubfieldData from fixed_field.  The
    returned table is the pointwise inverse of the coboundary built in the
    pipeline, i.e. the class mapping to 1/[L:K] under the invariant map.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    rel = RelativeExtension(L, base=base, group=group)
    gamma, pi, u_sigmas, _ = lfc_pipeline(rel, k)
    fundamental = gamma.pointwise_inverse()
    fundamental.meta.update({
        "p": L.p,
        "f": L.f,
        "e": L.e,
        "d": rel.d,
        "e_rel": rel.e_rel,
        "k": k,
        "degree_over_base": rel.n,
        "pi_L": L.pi().digits(),
        "pi": pi.digits(),
        "pi_K": rel.pi_K.digits(),
        "element_order": [
            {"frob_power": a.frob_power, "pi_image": a.pi_image.digits()}
            for a in rel.group.elements
        ],
        "algorithm_version": ALGORITHM_VERSION,
        "normalization": ("unramified-explicit" if rel.e_rel == 1
                          else "residue-canonical"),
    })
    return fundamental


def _vp_int(n, p):
    v = 0
    while n % p == 0:
        n //= p
        v += 1
    return v


def working_field(L, k):
    """Copy of L with enough working precision for a level-k run.

    Beyond the 2k + 2e guard, wild ramification costs up to the different
    exponent e - 1 + e*v_p(e) in root separation, so that is reserved too.
    """
    wild = L.e - 1 + L.e * _vp_int(L.e, L.p)
    needed = 2 * (k + 2) + 2 * L.e + 4 + wild
    if L.N_abs >= needed:
        return L
    return LocalField(L.p, L.f, [list(c) for c in L.eis_exact], needed)


def explicit_unramified_cocycle(group, pi_K, k):
    """The classical table for an unramified extension: 1 below the degree
    threshold, pi_K at or above it, indexed by Frobenius powers."""
    n = len(group)
    frob_of = {}
    for idx, a in enumerate(group.elements):
        frob_of[idx] = a.frob_power % n if n > 1 else 0
    values = {}
    one = pi_K.parent.one()
    for i in range(n):
        for j in range(n):
            s = frob_of[i] + frob_of[j]
            values[(i, j)] = pi_K if s >= n else one
    return TwoCocycle(group, values, k)
