import json

import pytest

from conftest import build_field, catalog_entries
from padiclfc.cli import cocycle_to_json
from padiclfc.errors import PrecisionExhausted
from padiclfc.galois import compute_automorphisms
from padiclfc.lfc import (
    RelativeExtension,
    lfc_main,
    lfc_pipeline,
    solve_norm_unit,
    working_field,
)
from padiclfc.local_field import LocalField, fixed_field


def test_trivial_extension():
    L = working_field(LocalField(2, 1, [[-2], [1]], 10), 2)
    cocycle = lfc_main(L, 2)
    assert len(cocycle.group) == 1
    v = cocycle.value(0, 0)
    assert (v - L.one()).is_zero_within(v.prec)


def test_unramified_explicit_table():
    # gamma(phi^i, phi^j) = 1 if i+j < n else pi_K, bit exact
    for p, n in [(3, 2), (2, 3), (5, 2)]:
        L = working_field(
            LocalField(p, n, [[-p] + [0] * (n - 1), [1] + [0] * (n - 1)],
                       12), 4)
        cocycle = lfc_main(L, 4)
        G = cocycle.group
        p_elem = L.from_int(p)
        for i, a in enumerate(G.elements):
            for j, b in enumerate(G.elements):
                got = cocycle.value(i, j)
                want = p_elem if a.frob_power + b.frob_power >= n else L.one()
                lvl = min(got.prec, got.valuation() + 4)
                want_t = L.element(list(want.vec), want.den, lvl)
                assert got.digits()["coords"] == want_t.digits()["coords"]


def test_step1_norm_residual():
    L = working_field(LocalField(2, 1, [[-2], [0], [1]], 20), 6)
    rel = RelativeExtension(L)
    _, pi, u_sigmas, _ = lfc_pipeline(rel, 6)
    F = rel.F
    # independent norm product over Gal(F/L)
    norm = pi
    for s in range(1, rel.e_rel):
        norm = norm * rel.frob_pow(s).apply(pi)
    ratio = norm / rel.emb.apply(rel.pi_K)
    assert ratio.valuation() == 0
    assert (ratio - F.one()).is_zero_within(6 + 2)


def test_step2_residuals_random_ramified():
    entry = next(e for e in catalog_entries()
                 if e["group"] == "C4" and e["e"] == 4)
    L = build_field(entry, 4)
    rel = RelativeExtension(L)
    _, pi, u_sigmas, _ = lfc_pipeline(rel, 4)
    F = rel.F
    for idx, u in enumerate(u_sigmas):
        c = rel.sigma_hat[idx].apply(pi) / pi
        residual = c * u / rel.frob_FL.apply(u)
        assert (residual - F.one()).is_zero_within(4 + 2)


def test_beta_shapes():
    # d = 2: the tail of beta(sigma) has j components of valuation 1
    entry = next(e for e in catalog_entries()
                 if e["p"] == 2 and e["f"] == 2 and e["e"] == 2)
    L = build_field(entry, 4)
    rel = RelativeExtension(L)
    _, pi, u_sigmas, beta = lfc_pipeline(rel, 4)
    for idx in range(len(rel.group)):
        j = rel.j_of[idx]
        vec = beta[idx]
        assert len(vec) == rel.d
        for t, comp in enumerate(vec):
            expect_val = 1 if t >= rel.d - j else 0
            assert comp.valuation() == expect_val
    ident = beta[rel.group.identity]
    for comp in ident:
        assert (comp - rel.F.one()).is_zero_within()


def test_solve_norm_unit_trivial_and_teich():
    L = working_field(LocalField(2, 1, [[-2], [0], [1]], 20), 6)
    rel = RelativeExtension(L)
    F = rel.F
    one = F.one()
    v = solve_norm_unit(rel, one, 6)
    assert (v - one).is_zero_within(6)
    # a Teichmueller unit of L: norm product re-verification
    t = rel.emb.apply(L.teichmueller(L.residue_field.one()))
    v = solve_norm_unit(rel, t, 6)
    norm = v
    for s in range(1, rel.e_rel):
        norm = norm * rel.frob_pow(s).apply(v)
    assert (norm / t - one).is_zero_within(6 + 2)


def test_ramified_quadratic_table_and_order():
    L = working_field(LocalField(2, 1, [[-2], [0], [1]], 20), 6)
    cocycle = lfc_main(L, 6)
    # the lone nontrivial value is 5 mod P^6: a non-norm unit of Q_2
    v = cocycle.value(1, 1)
    assert v.valuation() == 0
    assert v.digits()["coords"] == [[5], [0]]


def test_table_precision_at_least_k():
    for entry in catalog_entries():
        if entry["degree"] > 4:
            continue
        L = build_field(entry, 4)
        cocycle = lfc_main(L, 4)
        for val in cocycle.values.values():
            assert val.prec - val.valuation() >= 4


def test_precision_stability_truncation():
    # k = 4 output equals the truncation of the k = 8 output
    entry = next(e for e in catalog_entries() if e["group"] == "V4"
                 and e["f"] == 1)
    L8 = build_field(entry, 8)
    lo = lfc_main(L8, 4)
    hi = lfc_main(L8, 8)
    for key, v4 in lo.values.items():
        v8 = hi.values[key]
        lvl = v4.valuation() + 4
        a = L8.element(list(v4.vec), v4.den, lvl)
        b = L8.element(list(v8.vec), v8.den, lvl)
        assert a.digits()["coords"] == b.digits()["coords"]


def test_determinism():
    entry = next(e for e in catalog_entries() if e["group"] == "S3")
    L = build_field(entry, 4)
    a = lfc_main(L, 4)
    b = lfc_main(L, 4)
    ja = json.dumps(cocycle_to_json(a, L), sort_keys=True)
    jb = json.dumps(cocycle_to_json(b, L), sort_keys=True)
    assert ja == jb


def test_relative_base_subgroup():
    # S3 sextic over its C3 fixed field: quadratic relative extension
    entry = next(e for e in catalog_entries() if e["group"] == "S3")
    L = build_field(entry, 4)
    G = compute_automorphisms(L)
    order3 = next(i for i in range(len(G)) if G.order_of(i) == 3)
    idxs = sorted({G.identity, order3, G.mul(order3, order3)})
    sub = fixed_field([G.elements[i] for i in idxs], L)
    cocycle = lfc_main(L, 4, base=sub)
    assert len(cocycle.group) == 3
    for val in cocycle.values.values():
        assert val.prec - val.valuation() >= 4
