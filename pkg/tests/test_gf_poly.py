import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from almostnet.gf_poly import (
    FieldError,
    IrreducibleBasis,
    Poly,
    count_irreducibles,
    crt_solve,
    enumerate_irreducibles,
    ext_gcd,
    is_irreducible,
    irreducible_codes,
    is_prime,
    monic_polys,
    poly_divmod,
)

from oracles import conv_mod, has_root, mobius_count
from oracles import irreducible_codes as sieve_codes


def P(text, q=2):
    return Poly.parse(text, q)


def polys(q, max_len=10):
    return st.lists(st.integers(0, q - 1), max_size=max_len).map(lambda c: Poly(c, q))


class TestCanonicalForm:
    def test_trailing_zeros_dropped(self):
        assert Poly([1, 0, 1, 0, 0], 2).coeffs == (1, 0, 1)

    def test_zero_polynomial(self):
        z = Poly([], 3)
        assert z.coeffs == () and z.degree == float("-inf") and z.is_zero()

    def test_text_round_trip(self):
        f = P("11001")
        assert f == Poly([1, 1, 0, 0, 1], 2)
        assert f.to_text() == "11001"

    def test_parse_rejects_big_digit(self):
        with pytest.raises(FieldError):
            Poly.parse("102", 2)

    def test_comma_form_for_large_q(self):
        f = Poly.parse("12,0,3", 13)
        assert f.coeffs == (12, 0, 3) and f.to_text() == "12,0,3"

    def test_composite_modulus_rejected(self):
        with pytest.raises(FieldError):
            Poly([1], 4)

    def test_field_mismatch(self):
        with pytest.raises(FieldError):
            Poly([1], 2) + Poly([1], 3)

    @pytest.mark.parametrize("n,expected", [(2, True), (9, False), (97, True), (1, False), (91, False)])
    def test_is_prime(self, n, expected):
        assert is_prime(n) is expected


class TestDivmod:
    def test_example(self):
        # (x+1)(x^2+x+1) = x^3 + 1 over GF(2)
        assert conv_mod([1, 1], [1, 1, 1], 2) == [1, 0, 0, 1]
        assert poly_divmod(P("0001"), P("111")) == (P("11"), P("1"))

    def test_zero_dividend(self):
        assert poly_divmod(Poly.zero(2), P("111")) == (Poly.zero(2), Poly.zero(2))

    def test_identity(self):
        f = Poly([2, 1, 4], 5)
        assert poly_divmod(f, f) == (Poly.one(5), Poly.zero(5))

    def test_division_by_zero(self):
        with pytest.raises(ZeroDivisionError):
            poly_divmod(P("1"), Poly.zero(2))

    @settings(max_examples=200)
    @given(st.sampled_from([2, 3, 5, 7]).flatmap(lambda q: st.tuples(polys(q, 14), polys(q, 8))))
    def test_round_trip(self, fg):
        f, g = fg
        if g.is_zero():
            return
        quo, rem = poly_divmod(f, g)
        assert quo * g + rem == f
        assert rem.degree < g.degree


@settings(max_examples=150)
@given(st.sampled_from([2, 3, 7]).flatmap(lambda q: st.tuples(polys(q), polys(q), polys(q))))
def test_ring_axioms(fgh):
    f, g, h = fgh
    assert (f + g) + h == f + (g + h)
    assert f * (g + h) == f * g + f * h
    assert f * g == g * f
    assert f - f == Poly.zero(f.q)


class TestExtGcd:
    def test_example(self):
        f, g = P("111"), P("01")
        d, u, v = ext_gcd(f, g)
        assert d == Poly.one(2)
        assert u * f + v * g == d

    def test_equal_inputs(self):
        f = Poly([2, 0, 3], 5)
        d, u, v = ext_gcd(f, f)
        assert d == f.monic() and u * f + v * f == d

    def test_coprime_quartics(self):
        p1, p2 = P("11001"), P("10011")
        # independent Euclid by repeated remainder
        a, b = p1, p2
        while not b.is_zero():
            a, b = b, poly_divmod(a, b)[1]
        assert a.monic() == Poly.one(2)
        d, u, v = ext_gcd(p1, p2)
        assert d == Poly.one(2) and u * p1 + v * p2 == d

    def test_both_zero(self):
        with pytest.raises(FieldError):
            ext_gcd(Poly.zero(3), Poly.zero(3))

    @settings(max_examples=100)
    @given(st.sampled_from([2, 3, 5]).flatmap(lambda q: st.tuples(polys(q), polys(q))))
    def test_bezout(self, fg):
        f, g = fg
        if f.is_zero() and g.is_zero():
            return
        d, u, v = ext_gcd(f, g)
        assert u * f + v * g == d and d.is_monic()
        assert poly_divmod(f, d)[1].is_zero() and poly_divmod(g, d)[1].is_zero()


class TestIrreducible:
    def test_examples(self):
        assert is_irreducible(P("111"))
        assert not is_irreducible(P("101"))
        assert is_irreducible(Poly([1, 0, 1], 3))
        assert not has_root([1, 0, 1], 3)

    def test_constant_raises(self):
        with pytest.raises(FieldError):
            is_irreducible(Poly([1], 2))

    def test_non_monic_input(self):
        assert is_irreducible(Poly([2, 0, 2], 3))  # 2(x^2 + 1)

    def test_linear(self):
        assert is_irreducible(Poly([3, 1], 5))

    @pytest.mark.parametrize("q,t", [(2, 1), (2, 4), (2, 5), (2, 6), (3, 2), (3, 3), (3, 4), (5, 3), (7, 2)])
    def test_matches_sieve(self, q, t):
        got = [f.to_int() - q**t for f in enumerate_irreducibles(q, t, count_irreducibles(q, t))]
        assert got == sieve_codes(q, t)
        assert irreducible_codes(q, t).tolist() == got

    @pytest.mark.parametrize("q,t", [(2, 2), (2, 3), (3, 2), (3, 3), (5, 2), (7, 3), (11, 2)])
    def test_rabin_low_degree(self, q, t):
        # the Rabin path itself, independent of the vectorised root test
        got = [f.to_int() - q**t for f in monic_polys(q, t) if is_irreducible(f)]
        assert got == sieve_codes(q, t)

    def test_partial_listing_matches_full(self):
        full = enumerate_irreducibles(7, 2, count_irreducibles(7, 2))
        assert enumerate_irreducibles(7, 2, 3) == full[:3]
        assert enumerate_irreducibles(7, 2, 20) == full[:20]

    @pytest.mark.parametrize("q,t,N", [(2, 4, 3), (2, 1, 2), (3, 2, 3), (2, 5, 6), (2, 6, 9), (5, 2, 10)])
    def test_counts(self, q, t, N):
        assert count_irreducibles(q, t) == N == mobius_count(q, t)

    def test_request_too_many(self):
        with pytest.raises(FieldError, match="only 3 exist"):
            enumerate_irreducibles(2, 4, 4)

    def test_first_quartics(self):
        assert enumerate_irreducibles(2, 4, 2) == [P("11001"), P("10011")]


class TestCrt:
    def test_two_linear_moduli(self):
        f = crt_solve([Poly([1], 2), Poly([], 2)], [P("01"), P("11")])
        assert f == P("11")
        assert f(0) == 1 and f(1) == 0

    def test_single_modulus(self):
        r = Poly([1, 2], 3)
        assert crt_solve([r], [Poly([1, 0, 1], 3)]) == r

    @settings(max_examples=100)
    @given(polys(2, 4), polys(2, 4))
    def test_quartic_pair(self, r1, r2):
        m1, m2 = P("11001"), P("10011")
        f = crt_solve([r1, r2], [m1, m2])
        assert f.degree < 8
        assert poly_divmod(f, m1)[1] == r1
        assert poly_divmod(f, m2)[1] == r2

    def test_powers_of_irreducibles(self):
        m1, m2 = P("11001") ** 2, P("10011") ** 3
        r1, r2 = Poly([1, 0, 1, 1, 0, 1, 1], 2), Poly([0, 1, 1], 2)
        f = crt_solve([r1, r2], [m1, m2])
        assert f.degree < 20
        assert poly_divmod(f, m1)[1] == r1 and poly_divmod(f, m2)[1] == r2

    def test_non_coprime(self):
        with pytest.raises(FieldError):
            crt_solve([P("1"), P("0")], [P("111"), P("111")])


class TestBasis:
    def test_standard(self):
        b = IrreducibleBasis.standard(2, 4, 2)
        assert b.d == 2 and b.t == 4 and list(b) == [P("11001"), P("10011")]

    def test_rejects_duplicates(self):
        with pytest.raises(FieldError):
            IrreducibleBasis([P("111"), P("111")])

    def test_rejects_reducible(self):
        with pytest.raises(FieldError):
            IrreducibleBasis([P("101")])
