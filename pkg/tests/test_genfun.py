from fractions import Fraction as F

import pytest
from hypothesis import given, strategies as st

from conftest import rationals
from cumulantkit.cumulants import CumulantFunctional, cumulants_from_moments
from cumulantkit.exactalg import Poly
from cumulantkit.genfun import (
    NCSeries,
    a_transform,
    cumulant_series,
    flow_check,
    format_laurent,
    identity_vector,
    load_series,
    moment_series,
    moment_series_t,
    mu_compose,
    mu_vector,
    muraki_compose,
    ode_residual,
    r_transform,
    save_series,
    series_add,
    series_mul,
    substitute,
)
from cumulantkit.independence import sum_functional
from cumulantkit.moments import MomentDataError, MomentFunctional, random_functional, words

t, s = Poly.var("t"), Poly.var("s")


def single(*ms):
    return MomentFunctional(1, len(ms), {(1,) * (i + 1): F(m) for i, m in enumerate(ms)})


def z(i, r=2, D=4):
    return NCSeries.gen(i, r, D)


def series(r, D, const=True):
    keys = list(words(r, D)) + ([()] if const else [])
    return st.lists(rationals, min_size=len(keys), max_size=len(keys)).map(
        lambda cs: NCSeries(r, D, dict(zip(keys, cs)))
    )


def test_noncommutative_product():
    one = NCSeries.one(2, 3)
    p = series_mul(one + z(1, 2, 3), one + z(2, 2, 3))
    assert p.coeffs == {(): 1, (1,): 1, (2,): 1, (1, 2): 1}
    assert p[(2, 1)] == 0


def test_truncation_and_shapes():
    a = z(1, 1, 2)
    assert (a * a * a).is_zero()
    with pytest.raises(ValueError):
        z(1, 1, 2) + z(1, 1, 3)
    with pytest.raises(ValueError):
        NCSeries(1, 2, {(2,): F(1)})


@given(series(2, 4), series(2, 4), series(2, 4))
def test_ring_laws(a, b, c):
    assert (a * b) * c == a * (b * c)
    assert a * series_add(b, c) == a * b + a * c
    assert series_add(a, c) * b == a * b + c * b


def test_substitute_examples():
    one = NCSeries.one(1, 3)
    z1 = z(1, 1, 3)
    T = z1 * (one + z1)
    assert substitute(z1, [T]) == z1 + z1 * z1
    assert substitute(z1 * z1, [T]) == z1 * z1 + 2 * (z1 * z1 * z1)
    P = NCSeries.from_function(2, 4, lambda w: F(len(w), w[0] + 1), constant=F(3))
    assert substitute(P, identity_vector(2, 4)) == P


def test_substitute_rejects_constant():
    with pytest.raises(ValueError):
        substitute(z(1), [NCSeries.one(2, 4), z(2)])
    with pytest.raises(ValueError):
        substitute(z(1), [z(1)])


@given(series(2, 4), series(2, 4), series(2, 4, const=False), series(2, 4, const=False))
def test_substitute_is_homomorphism(a, b, t1, t2):
    T = [t1, t2]
    assert substitute(a * b, T) == substitute(a, T) * substitute(b, T)
    assert substitute(a + b, T) == substitute(a, T) + substitute(b, T)


def test_generating_functions():
    phi = random_functional(2, 4, 3)
    M = moment_series(phi, 4)
    assert M.constant() == 1 and M[(1, 2)] == phi.moment((1, 2))
    K = cumulant_series(cumulants_from_moments("monotone", phi), 4)
    assert K.constant() == 0
    Mt = moment_series_t("monotone", phi, 4)
    assert Mt.map_coeffs(lambda c: c(t=1)) == M
    assert Mt.map_coeffs(lambda c: c(t=0)) == NCSeries.one(2, 4)
    with pytest.raises(MomentDataError):
        moment_series(phi, 5)


def test_muraki_degree_two():
    a, a2, b, b2 = F(2), F(7), F(-1), F(3)
    X, Y = single(a, a2), single(b, b2)
    got = muraki_compose(moment_series(X, 2), moment_series(Y, 2))
    assert got[(1,)] == a + b
    assert got[(1, 1)] == a2 + b2 + 2 * a * b
    mu = mu_compose(mu_vector(moment_series(X, 2)), mu_vector(moment_series(Y, 2)))
    assert mu[0][(1, 1)] == a + b


@pytest.mark.parametrize("seed", range(2))
def test_muraki_against_evaluator(seed):
    fam = {1: random_functional(2, 5, seed), 2: random_functional(2, 5, seed + 10)}
    lhs = moment_series(sum_functional("monotone", fam, 5), 5)
    MX, MY = moment_series(fam[1], 5), moment_series(fam[2], 5)
    assert lhs == muraki_compose(MX, MY)
    assert mu_vector(lhs) == mu_compose(mu_vector(MX), mu_vector(MY))


def test_mu_identity_and_associativity():
    U, V, W = (mu_vector(moment_series(random_functional(2, 4, k), 4)) for k in (1, 2, 3))
    ident = identity_vector(2, 4)
    assert mu_compose(U, ident) == U
    assert mu_compose(ident, U) == U
    assert mu_compose(mu_compose(U, V), W) == mu_compose(U, mu_compose(V, W))


def test_flow_identity():
    phi = random_functional(2, 4, 9)
    assert flow_check(phi, 4).ok
    mu_t = mu_vector(moment_series_t("monotone", phi, 4))
    mu_0 = [u.map_coeffs(lambda c: c.subs(t=0)) for u in mu_t]
    assert mu_0 == identity_vector(2, 4)
    assert mu_compose(mu_t, mu_0) == mu_t
    twice = [u.map_coeffs(lambda c: c.subs(t=2 * t)) for u in mu_t]
    assert mu_compose(mu_t, mu_t) == twice
    with pytest.raises(ValueError):
        flow_check(phi, 3, flavor="free")


def test_ode_residual():
    m1, m2 = F(3), F(11)
    phi = single(m1, m2)
    assert ode_residual(phi, 2).is_zero()
    Mt = moment_series_t("monotone", phi, 2)
    assert Mt[(1, 1)] == (m2 - m1 ** 2) * t + m1 ** 2 * t * t
    assert ode_residual(random_functional(2, 4, 12), 4).is_zero()


def test_ode_residual_detects_wrong_cumulants():
    phi = random_functional(1, 3, 2)
    K = cumulants_from_moments("free", phi)
    assert not ode_residual(phi, 3, K).is_zero()


def test_r_transform():
    phi = single(2, 7, 5, 1)
    R = r_transform(phi, 4)
    assert R[(1,)] == 2
    assert R[(1, 1)] == 7 - 4
    phi2 = random_functional(2, 4, 5)
    assert r_transform(phi2, 4).coeffs == {
        w: k for w, k in cumulants_from_moments("free", phi2).table.items() if k
    }


@pytest.mark.parametrize(
    "ks,want,text",
    [
        ((0, 1, 0, 0), {-1: F(-1)}, "-1/z"),
        ((F(3, 2), 0, 0), {0: F(-3, 2)}, "-3/2"),
        ((0, 0, 0), {}, "0"),
    ],
)
def test_a_transform(ks, want, text):
    K = CumulantFunctional("monotone", 1, len(ks), {(1,) * (i + 1): F(k) for i, k in enumerate(ks)})
    got = a_transform(K)
    assert got == want
    assert format_laurent(got) == text


def test_a_transform_needs_one_variable():
    K = cumulants_from_moments("monotone", random_functional(2, 2, 1))
    with pytest.raises(ValueError):
        a_transform(K)


def test_series_json(tmp_path):
    S = moment_series(random_functional(2, 3, 4), 3)
    save_series(S, tmp_path / "s.json")
    assert load_series(tmp_path / "s.json") == S
    P = moment_series_t("monotone", random_functional(1, 3, 4), 3)
    assert NCSeries.from_json(P.to_json()) == P
