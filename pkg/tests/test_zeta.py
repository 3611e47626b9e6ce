from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from ideal_zeta.combinat import DyckWord, StructuralDescriptor, admissible_compositions, enum_dyck
from ideal_zeta.exactalg import ONE_POLY, Monomial, Polynomial, RationalFunction, evaluate, rf_equal, series_expand
from ideal_zeta.igusa import IgusaVariables, generalized_igusa, igusa_I
from ideal_zeta.zeta import (
    D_w_rho,
    LieRingSpec,
    NotCertified,
    RamifiedError,
    ResourceGuard,
    SpecError,
    abelian_zeta,
    abscissa,
    base_extend,
    check_local_funeq,
    compute,
    descriptor_for,
    numerical_data,
    parse_spec,
    qt,
    zeta_ideal,
)

from grenham_formula import grenham_zeta

q, t = Monomial.var("q"), Monomial.var("t")


def first_rho(d, word):
    w = DyckWord.from_word(word)
    return w, admissible_compositions(d, w)[0]


def test_descriptor_f23():
    d = descriptor_for(parse_spec("f2,3"))
    assert (d.m, d.nbar, d.pairs, d.c, d.c_prime, d.epsilon, d.n) == (1, (3,), (((0,), (2,)),), 3, 3, 0, 3)


def test_descriptor_heisenberg():
    d = descriptor_for(parse_spec("g1,1"))
    assert (d.m, d.nbar, d.pairs, d.c, d.epsilon, d.n) == (2, (1, 1), (((0, 1), (1, 1)),), 1, 0, 2)


@pytest.mark.parametrize("f", [1, 2, 3])
def test_descriptor_higher_heisenberg(f):
    d = descriptor_for(parse_spec(f"h2[f={f}]"))
    assert d.m == 4 and d.nbar == (1, 1, 1, 1) and d.c == f and d.n == 4 * f
    assert d.pairs == (((0, 1, 2, 3), (1, 1, 1, 1)),) * f


def test_descriptor_abelian_factor_goes_to_epsilon():
    d = descriptor_for(parse_spec("g1,1 x Z^2"))
    assert d.epsilon == 2 and d.m == 2 and d.c == 3


def test_abelian_zeta_examples():
    assert rf_equal(abelian_zeta(0), RationalFunction.const(1))
    assert rf_equal(abelian_zeta(1), RationalFunction(ONE_POLY, {t: 1}))
    assert rf_equal(abelian_zeta(2), RationalFunction(ONE_POLY, {t: 1, q * t: 1}))


def test_numerical_data_g22_row1():
    d = descriptor_for(parse_spec("g2,2"))
    w, rho = first_rho(d, "00001111")
    data = numerical_data(d, w, rho)
    y = data.y[1]
    assert y[(1, 0)] == y[(0, 1)] == q * t
    assert y[(1, 1)] == q**2 * t**2 and y[(2, 2)] == t**4
    assert [data.x[k] for k in range(1, 5)] == [q**7 * t**5, q**12 * t**6, q**15 * t**7, q**16 * t**8]


@pytest.mark.parametrize("dd", [3, 4])
def test_numerical_data_delta_f2d(dd):
    d = descriptor_for(parse_spec(f"f2,{dd}"))
    for w, rho in ((w, r) for w in enum_dyck(d.c) for r in admissible_compositions(d, w)):
        data = numerical_data(d, w, rho)
        for j, dj in data.delta.items():
            for v, dv in dj.items():
                assert dv == (0 if (j, v) == (1, (1,)) else 1)


def test_D_w_rho_g22_row1():
    d = descriptor_for(parse_spec("g2,2"))
    w, rho = first_rho(d, "00001111")
    data = numerical_data(d, w, rho)
    expected = generalized_igusa((2, 2), IgusaVariables((q.inverse(),) * 2, data.y[1])) * igusa_I(
        4, q.inverse(), [q**7 * t**5, q**12 * t**6, q**15 * t**7, q**16 * t**8])
    assert rf_equal(D_w_rho(d, w, rho), expected)


def test_D_w_rho_flags_agree():
    d = descriptor_for(parse_spec("g2,2"))
    w = DyckWord.from_word("00100111")
    a, b = (D_w_rho(d, w, r) for r in admissible_compositions(d, w))
    assert rf_equal(a, b)


def test_heisenberg_first_coefficient():
    s = series_expand(zeta_ideal("h1"), "t", 1)
    assert s.coeffs[1] == ONE_POLY + Polynomial.monomial(q)


def test_base_extend_examples():
    z = zeta_ideal("g1,1")
    assert base_extend(z, 1) is z
    assert rf_equal(base_extend(abelian_zeta(1), 2), RationalFunction(ONE_POLY, {t**2: 1}))


@pytest.mark.parametrize("f", [1, 2, 3])
def test_over_extension_matches_base_extend(f):
    assert rf_equal(zeta_ideal(f"h1 over f={f}"), base_extend(zeta_ideal("h1"), f))


@settings(max_examples=20, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.integers(1, 3), st.integers(4, 9))
def test_base_extend_numeric(p, f, s):
    z = zeta_ideal("g1,1")
    lhs = evaluate(base_extend(z, f), {"q": p, "t": Fraction(1, p**s)})
    rhs = evaluate(z, {"q": p**f, "t": Fraction(1, p ** (f * s))})
    assert lhs == rhs


@pytest.mark.parametrize("spec,N0,N1", [("Z^3", 3, 0), ("h1", 3, 2), ("f2,3", 6, 3), ("g1,1 over f=2", 3, 2)])
def test_check_local_funeq(spec, N0, N1):
    r = check_local_funeq(spec)
    assert r.holds and (r.N0, r.N1) == (N0, N1)


def test_check_local_funeq_rejects_wrong_function():
    assert not check_local_funeq("h1", zeta_ideal("g2,1")).holds


def test_abscissa_examples():
    for n in range(1, 5):
        assert abscissa(abelian_zeta(n), n) == n
    assert abscissa(RationalFunction(ONE_POLY, {q**3 * t**2: 1}), 1) == Fraction(3, 2)
    assert abscissa(zeta_ideal("h1"), descriptor_for(parse_spec("h1")).n) == 2
    with pytest.raises(ValueError):
        abscissa(RationalFunction(ONE_POLY, {q: 1}), 1)


@pytest.mark.parametrize("spec", ["g1,1", "h1", "f2,3", "g2,1", "g2,2", "h1 x Z^1", "g1,1[f=2]"])
def test_series_coefficients_count_something(spec):
    for c in series_expand(zeta_ideal(spec), "t", 4).coeffs:
        for m, v in dict(c.terms).items():
            assert v == int(v) and v > 0
            assert m.degree("q") >= 0 and set(m.variables()) <= {"q"}


def test_f22_is_heisenberg():
    assert rf_equal(zeta_ideal("f2,2"), zeta_ideal("g1,1"))


def test_terms_satisfy_funeq():
    assert all(term.funeq for term in compute("g2,2").terms)
    assert len(compute("g2,2").terms) == 8


def test_ramified_rejected():
    with pytest.raises(RamifiedError):
        zeta_ideal("g1,1[e=2]")


def test_resource_guard():
    with pytest.raises(ResourceGuard):
        zeta_ideal("f2,6")


def test_bare_descriptor_is_not_certified():
    with pytest.raises(NotCertified):
        descriptor_for(LieRingSpec())
    d = StructuralDescriptor((1, 1), (1, 1), (((0, 1), (1, 1)),), certified=False)
    res = compute(LieRingSpec(descriptor=d))
    assert not res.certified and rf_equal(res.value, zeta_ideal("g1,1"))


@pytest.mark.parametrize("text", ["", "q7", "g1,1[f=x]", "g1,1[k=2]", "h1 over f=0", "h1 over g=2"])
def test_parse_errors(text):
    with pytest.raises(SpecError):
        parse_spec(text)


@pytest.mark.parametrize("text", ["g1,1", "f2,3[f=2] x Z^1", "h1 over f=3", "g2,1 x h2[f=2] over f=2"])
def test_spec_round_trip(text):
    spec = parse_spec(text)
    assert parse_spec(str(spec)) == spec
    assert LieRingSpec.from_json_obj(spec.to_json_obj()) == spec


@pytest.mark.parametrize("d,f", [(2, 1), (2, 2), (3, 1), (3, 2)])
def test_grenham_with_corrected_exponent(d, f):
    def corrected(M, k):
        return M * ((d + 1 + k) * f - M) + f * k * (d - k)

    spec = f"g{d},1" + (f"[f={f}]" if f > 1 else "")
    assert rf_equal(zeta_ideal(spec), grenham_zeta(d, f, corrected))


def test_qt_helper():
    assert qt(2, 3) == q**2 * t**3 and qt().is_one()
