import itertools

import pytest
from hypothesis import given, settings, strategies as st

from ideal_zeta.combinat import (
    DyckWord,
    StructuralDescriptor,
    admissible_compositions,
    beta,
    birkhoff_alpha,
    dual,
    ell,
    enum_dyck,
    flags,
    gauss_binom,
    gauss_multinom,
    is_admissible,
    lambda_of_nu,
    overlap_type,
    partitions_bounded,
    radical,
    radical_bruteforce,
    star,
    star_power,
    subwords,
    sym_group_tools,
    tau_multiset,
)
from ideal_zeta.exactalg import ONE_POLY, Monomial, Polynomial, specialize
from ideal_zeta.zeta import descriptor_for, parse_spec

Y = Monomial.var("Y")


def poly(*coeffs):
    return Polynomial({Y**i: c for i, c in enumerate(coeffs) if c})


partitions = st.lists(st.integers(0, 5), max_size=6).map(lambda xs: tuple(sorted(xs, reverse=True)))


def test_dual_examples():
    assert dual((3, 1)) == (2, 1, 1)
    assert dual(()) == ()


@given(partitions)
def test_dual_involution(p):
    assert dual(dual(p)) == tuple(x for x in p if x)


def test_star_examples():
    assert star((3, 1), (2, 2)) == (2, 2, 1, 1)
    assert star((3, 1), ()) == ()
    assert star(star((3, 1), (2,)), (2,)) == star((3, 1), star((2,), (2,)))
    assert star_power((3, 2, 1), 2) == (2, 1, 1)
    assert star_power((3, 1), 1) == (3, 1)
    assert star_power((3, 1), 2) == (1,) and star((3, 1), (3, 1)) == (3, 1, 1, 1)
    with pytest.raises(ValueError):
        star_power((1,), 2)


@given(partitions, partitions, partitions)
def test_star_associative_commutative(a, b, c):
    assert star(star(a, b), c) == star(a, star(b, c))
    assert star(a, b) == star(b, a)
    assert len(star(a, b)) == len(a) * len(b)


def test_tau_multiset():
    assert tau_multiset(5, 2, 3) == (3, 3, 3, 2, 2, 2)
    assert tau_multiset(4, 1, 3) == (4, 4, 4)
    assert tau_multiset(0, 2, 2) == (0, 0, 0, 0)


def test_gauss_examples():
    assert gauss_binom(2, 1, Y) == poly(1, 1)
    assert gauss_binom(3, 1, Y) == poly(1, 1, 1)
    assert gauss_binom(5, 0, Y) == ONE_POLY
    with pytest.raises(ValueError):
        gauss_binom(1, 2, Y)
    assert gauss_multinom(4, (), Y) == ONE_POLY
    assert gauss_multinom(3, {1, 2}, Y) == poly(1, 1, 1) * poly(1, 1)
    assert gauss_multinom(3, {1, 2}, Y) == poly(1, 2, 2, 1)
    with pytest.raises(ValueError):
        gauss_multinom(3, {3}, Y)


def test_sym_group_examples():
    assert sorted((l, tuple(d)) for _, l, d in sym_group_tools(2)) == [(0, ()), (1, (1,))]
    s4 = list(sym_group_tools(4))
    w0 = max(s4, key=lambda x: x[1])
    assert w0[1] == 6 and w0[0] == (4, 3, 2, 1)
    lengths = {w: l for w, l, _ in s4}
    for w, l, _ in s4:
        ww0 = tuple(w[4 - 1 - i] for i in range(4))  # w w_0 reverses positions
        assert lengths[ww0] == 6 - l
    with pytest.raises(ValueError):
        list(sym_group_tools(9))


def test_birkhoff_examples():
    assert birkhoff_alpha((2, 1), (2, 1), Y) == ONE_POLY
    a = birkhoff_alpha((1, 1), (1, 0), Y)
    assert a == poly(1, 1) and specialize(a, {"Y": 2}).constant_value() == 3
    assert birkhoff_alpha((2,), (1,), Y) == ONE_POLY
    with pytest.raises(ValueError):
        birkhoff_alpha((1,), (2,), Y)


def test_birkhoff_padding_value_irrelevant():
    for lam, mu in [((1,), (2, 1)), ((2, 1), (3, 1, 1)), ((), (2, 2))]:
        vals = {birkhoff_alpha(lam, mu, Y, epsilon=len(mu) - len(lam), xi=x) for x in (3, 4, 6)}
        assert len(vals) == 1


def test_beta_examples():
    assert beta((3,), Y) == ONE_POLY
    b = beta((1, 0), Y)
    assert b == poly(1, 1) and specialize(b, {"Y": 2}).constant_value() == 3
    assert beta((1, 1), Y) == ONE_POLY


def test_enum_dyck_examples():
    assert [w.word for w in enum_dyck(1)] == ["01"]
    assert [w.word for w in enum_dyck(2)] == ["0011", "0101"]
    assert len(enum_dyck(4)) == 14
    assert [len(enum_dyck(c)) for c in range(1, 7)] == [1, 2, 5, 14, 42, 132]


def test_dyck_word_round_trip():
    for c in range(1, 6):
        for w in enum_dyck(c):
            assert DyckWord.from_word(w.word) == w
            assert all(m <= l for l, m in zip(w.L, w.M)) and w.L[-1] == w.M[-1] == c
    with pytest.raises(ValueError):
        DyckWord.from_word("0110")


def test_overlap_examples():
    w = overlap_type((2, 1), (2, 1))
    assert w.word == "0101"
    assert overlap_type((1,), (2,)) is None


def test_subwords_and_flags():
    assert len(subwords((2, 1))) == 6
    assert len(subwords((2, 1), nonempty=True)) == 5
    # chains of nonempty subwords of a1 a2: {}, a1, a2, a1a2, a1<a1a2, a2<a1a2
    assert len(list(flags((1, 1)))) == 6


# descriptors used throughout
G11 = descriptor_for(parse_spec("g1,1"))
F2D = descriptor_for(parse_spec("f2,4"))
G22 = descriptor_for(parse_spec("g2,2"))
CATALOG = ["g1,1", "h1", "h2", "f2,3", "f2,4", "g2,1", "g2,2", "g1,1 x g1,1", "f2,3[f=2]", "g1,1[f=2] x Z^1"]


def test_lambda_of_nu_examples():
    assert lambda_of_nu(((4,), (2,)), G11) == (2,)
    f22 = descriptor_for(parse_spec("f2,2"))
    assert lambda_of_nu(((5, 3),), f22) == (3,)
    assert lambda_of_nu(((3, 1), (2, 2)), G22) == (2, 2, 1, 1)
    with pytest.raises(ValueError):
        lambda_of_nu(((1, 1),), G11)


def test_ell_examples():
    f = descriptor_for(parse_spec("f2,3[f=2]"))
    assert ell((3,), f) == 3 * 2 and ell((2,), f) == 1 * 2
    g = descriptor_for(parse_spec("g2,2[f=3]"))
    assert ell((2, 1), g) == 2 * 1 * 3
    assert ell((0, 0), G11) == 0


def test_radical_examples():
    assert radical((1, 0), G11) == (0, 0)
    assert radical((1, 1), G11) == (1, 1)
    assert radical((1,), F2D) == (0,)
    assert all(radical((a,), F2D) == (a,) for a in range(2, 5))


@pytest.mark.parametrize("spec", CATALOG)
def test_radical_properties(spec):
    d = descriptor_for(parse_spec(spec))
    for v in subwords(d.nbar):
        r = radical(v, d)
        assert radical(r, d) == r
        assert ell(r, d) == ell(v, d)
        assert r == radical_bruteforce(v, d)


@pytest.mark.parametrize("spec", CATALOG)
def test_admissible_compositions_recheck(spec):
    d = descriptor_for(parse_spec(spec))
    for w in enum_dyck(d.c):
        for rho in admissible_compositions(d, w):
            assert is_admissible(d, w, rho)
            assert all(rho.P(i, rho.r) == n for i, n in enumerate(d.nbar))


def test_admissible_examples():
    for d_, f in ((2, 1), (3, 1), (2, 2)):
        d = descriptor_for(parse_spec(f"g{d_},1[f={f}]"))
        for w in enum_dyck(d.c):
            rhos = admissible_compositions(d, w)
            if all(L % f == 0 for L in w.L):
                assert len(rhos) == 1
                rho = rhos[0]
                assert all(rho.P(0, j) == w.L[j - 1] // f and rho.P(1, j) == 1 for j in range(1, w.r + 1))
            else:
                assert rhos == []
    f23 = descriptor_for(parse_spec("f2,4"))
    for w in enum_dyck(f23.c):
        rhos = admissible_compositions(f23, w)
        gammas = [next((g for g in range(5) if g * (g - 1) // 2 == L), None) for L in w.L]
        if None in gammas:
            assert rhos == []
        else:
            assert len(rhos) == 1 and [rhos[0].P(0, j) for j in range(1, w.r + 1)] == gammas
    flags_ = {rho.flag() for rho in admissible_compositions(G22, DyckWord.from_word("00100111"))}
    assert flags_ == {((2, 1), (2, 2)), ((1, 2), (2, 2))}


def test_descriptor_rank_identity():
    for spec in CATALOG:
        d = descriptor_for(parse_spec(spec))
        assert d.c_prime == ell(d.nbar, d)


def test_descriptor_rejects_bad_pairs():
    with pytest.raises(ValueError):
        StructuralDescriptor((1, 1), (1, 1), (((0,), (1,)),))
    with pytest.raises(ValueError):
        StructuralDescriptor((1,), (1, 1), (((0,), (1,)),))


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 3).flatmap(lambda c: st.tuples(
    st.lists(st.integers(0, 3), min_size=c, max_size=c), st.lists(st.integers(0, 3), min_size=c, max_size=c))))
def test_overlap_type_matches_chain(pair):
    from ideal_zeta.combinat import overlap_holds, pad

    lam, mu = (tuple(sorted(x, reverse=True)) for x in pair)
    w = overlap_type(lam, mu)
    hits = [v for v in enum_dyck(len(lam)) if overlap_holds(pad(lam, mu, 0), mu, v)]
    if all(m <= l for m, l in zip(mu, lam)):
        assert hits == [w]
    else:
        assert w is None


def test_partitions_bounded():
    ps = list(partitions_bounded(2, 2))
    assert set(ps) == {(0, 0), (1, 0), (1, 1), (2, 0), (2, 1), (2, 2)}
    assert all(list(p) == sorted(p, reverse=True) for p in ps)


def test_gauss_funeq_property():
    for a, b in itertools.product(range(7), repeat=2):
        if b <= a:
            inv = specialize(gauss_binom(a, b, Y), {"Y": Y.inverse()})
            assert inv == gauss_binom(a, b, Y).shift(Y ** (b * (b - a)))
