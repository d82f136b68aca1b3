import random

import pytest

from padiclfc.errors import (
    DivisionByZero,
    HenselFails,
    IndistinguishableFromZero,
    NotEisenstein,
    PrecisionTooSmall,
    ZeroArgument,
)
from padiclfc.local_field import (
    LocalField,
    compositum,
    field_from_descriptor,
    fixed_field,
    hensel_root,
    poly_eval,
)


def Q2_sqrt2(n=24):
    return LocalField(2, 1, [[-2], [0], [1]], n)


def test_make_and_validation():
    L = Q2_sqrt2()
    assert (L.p, L.f, L.e, L.degree) == (2, 1, 2, 2)
    # unramified quadratic of Q_3 via degenerate Eisenstein layer
    U = LocalField(3, 2, [[-3, 0], [1, 0]], 20)
    assert (U.f, U.e) == (2, 1)
    # Q_2(i) via x^2 + 2x + 2
    Li = LocalField(2, 1, [[2], [2], [1]], 20)
    assert Li.e == 2
    with pytest.raises(NotEisenstein):
        LocalField(2, 1, [[-1], [0], [1]], 20)  # unit constant term
    with pytest.raises(NotEisenstein):
        LocalField(2, 1, [[-4], [0], [1]], 20)  # valuation 2 constant
    with pytest.raises(PrecisionTooSmall):
        LocalField(2, 1, [[-2], [0], [1]], 4)


def test_basic_arithmetic_and_valuation():
    L = Q2_sqrt2()
    pi = L.pi()
    two = L.from_int(2)
    assert (pi * pi - two).is_zero_within()
    assert pi.valuation() == 1
    assert two.valuation() == 2
    assert L.teichmueller(L.residue_field.one()).valuation() == 0
    x = L.one() + pi
    assert ((x.inverse() * x) - L.one()).is_zero_within()
    with pytest.raises(DivisionByZero):
        L.zero().inverse()
    with pytest.raises(IndistinguishableFromZero):
        L.zero().valuation()


def test_valuation_additive_and_ultrametric():
    rng = random.Random(17)
    L = LocalField(3, 2, [[3, 3], [0, 3], [1, 0]], 30)
    for _ in range(100):
        a = L.element([rng.randrange(L.pm) for _ in range(L.e * L.f)])
        b = L.element([rng.randrange(L.pm) for _ in range(L.e * L.f)])
        try:
            va, vb = a.valuation(), b.valuation()
        except IndistinguishableFromZero:
            continue
        assert (a * b).valuation() == va + vb
        s = a + b
        if not s.is_zero_within():
            assert s.valuation() >= min(va, vb)


def test_precision_rules():
    L = Q2_sqrt2(30)
    pi = L.pi()
    x = L.element(list((L.one() + pi).vec), 0, 10)
    y = L.element(list(pi.vec), 0, 12)
    assert (x + y).prec == 10
    assert (x * y).prec == min(x.prec + 1, y.prec + 0)
    inv = y.inverse()
    assert inv.prec == y.prec - 2 * y.valuation()


def test_precision_soundness_recompute_higher():
    # recomputing at higher N_abs agrees on all claimed digits
    rng = random.Random(23)
    lo = LocalField(2, 1, [[2], [2], [1]], 16)
    hi = LocalField(2, 1, [[2], [2], [1]], 40)
    seq = [(rng.randrange(4), rng.randrange(1, 8)) for _ in range(12)]

    def run(L):
        x = L.one() + L.pi()
        for op, val in seq:
            if op == 0:
                x = x * (L.from_int(val) + L.pi())
            elif op == 1:
                x = x + L.from_int(val)
            elif op == 2:
                x = x * L.pi()
            else:
                x = x + L.pi() * L.from_int(val)
        return x

    x_lo, x_hi = run(lo), run(hi)
    digits_lo = x_lo.digits()
    prec = min(x_lo.prec, 14)
    hi_trunc = hi.element(list(x_hi.vec), x_hi.den, prec)
    lo_trunc = lo.element(list(x_lo.vec), x_lo.den, prec)
    assert hi_trunc.digits()["coords"] == lo_trunc.digits()["coords"]


def test_teichmueller():
    L = LocalField(3, 1, [[-3], [1]], 20)
    t = L.teichmueller(L.residue_field.element([2]))
    # the lift of 2 in Q_3 is -1
    assert (t + L.one()).is_zero_within()
    q = 3
    for enc in range(1, 3):
        r = L.residue_field.from_encoding(enc)
        t = L.teichmueller(r)
        assert (t ** q - t).is_zero_within()
    with pytest.raises(ZeroArgument):
        L.teichmueller(L.residue_field.zero())
    L9 = LocalField(3, 2, [[-3, 0], [1, 0]], 20)
    g = L9.residue_field.gen()
    t = L9.teichmueller(g)
    assert (t ** 9 - t).is_zero_within()


def test_hensel_root():
    L = Q2_sqrt2()
    coeffs = [L.from_int(-2), L.zero(), L.one()]
    pi = L.pi()
    assert (hensel_root(coeffs, pi) - pi).is_zero_within(L.N_abs - 4)
    assert (hensel_root(coeffs, -pi) + pi).is_zero_within(L.N_abs - 4)
    # x^2 + 1 over Q_5 from x0 = 2
    Q5 = LocalField(5, 1, [[-5], [1]], 30)
    i = hensel_root([Q5.one(), Q5.zero(), Q5.one()], Q5.from_int(2))
    assert (i * i + Q5.one()).is_zero_within(Q5.N_abs - 2)
    with pytest.raises(HenselFails):
        hensel_root(coeffs, L.one())  # v(g(1)) = 0 not > 2 v(g'(1))


def test_compositum():
    L = Q2_sqrt2()
    F, emb = compositum(L)
    assert (F.f, F.e) == (2, 2)
    # embedded pi satisfies the Eisenstein polynomial of F
    pe = emb.apply(L.pi())
    coeffs = [F.from_unram(c) for c in F.eis]
    assert poly_eval(coeffs, pe).is_zero_within(F.N_abs - 2)
    # unramified tower: compositum is the identity
    U = LocalField(3, 2, [[-3, 0], [1, 0]], 20)
    F2, emb2 = compositum(U)
    assert F2 is U
    # embedding is a ring morphism and valuation-preserving
    rng = random.Random(3)
    for _ in range(20):
        a = L.element([rng.randrange(L.pm) for _ in range(2)])
        b = L.element([rng.randrange(L.pm) for _ in range(2)])
        assert (emb.apply(a * b) - emb.apply(a) * emb.apply(b)
                ).is_zero_within(min(a.prec, b.prec) - 2)
        try:
            assert emb.apply(a).valuation() == a.valuation()
        except IndistinguishableFromZero:
            pass
    # pullback round trip and rejection of outside elements
    x = L.one() + L.pi()
    back = emb.pullback(emb.apply(x))
    assert (back - x).is_zero_within(back.prec)
    w = F.omega()
    assert emb.pullback(w) is None


def test_fixed_field():
    from padiclfc.galois import compute_automorphisms
    from padiclfc.lfc import working_field

    L = working_field(LocalField(2, 1, [[2], [4], [6], [4], [1]], 16), 4)
    G = compute_automorphisms(L)
    # full group fixes Q_2: pi_K = 2 up to a unit
    sub = fixed_field(list(G.elements), L)
    assert (sub.e_rel, sub.d_rel) == (4, 1)
    assert sub.pi_K.valuation() == 4
    # trivial subgroup fixes L
    sub_id = fixed_field([G.elements[G.identity]], L)
    assert (sub_id.e_rel, sub_id.d_rel) == (1, 1)
    assert sub_id.pi_K.valuation() == 1
    # order-2 subgroup: quadratic fixed field, sigma-invariant basis
    for indices in G.subgroup_indices_of_order(2):
        autos = [G.elements[i] for i in sorted(set(indices) | {G.identity})]
        sub2 = fixed_field(autos, L)
        assert sub2.e_rel * sub2.d_rel == 2
        assert sub2.pi_K.valuation() == sub2.e_rel
        for b in sub2.basis:
            for a in autos:
                assert (a.apply(b) - b).is_zero_within(b.prec - 2)


def test_descriptor_roundtrip():
    L = LocalField(2, 1, [[2], [2], [1]], 20)
    desc = L.descriptor()
    L2 = field_from_descriptor(desc)
    assert L2.same_tower(L)
    assert L2.N_abs == L.N_abs
    import json
    L3 = field_from_descriptor(json.dumps(desc))
    assert L3.same_tower(L)
