import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from subring_census import analytics as an


class TestBoundedValue:
    def test_exact(self):
        v = an.BoundedValue.exact(Fraction(1, 3))
        assert abs(v.value - 1 / 3) <= v.bound

    def test_arithmetic_encloses(self):
        a = an.BoundedValue(1.0, 0.1)
        b = an.BoundedValue(2.0, 0.2)
        s = a + b
        assert s.contains(3.25) and not s.contains(3.5)
        m = a * b
        assert m.value == 2.0 and m.bound >= 0.1 * 2 + 0.2 * 1

    def test_division_guard(self):
        with pytest.raises(ValueError):
            an.BoundedValue(1.0, 0.0) / an.BoundedValue(0.1, 0.09)

    def test_rtruediv(self):
        half = 1 / an.BoundedValue(2.0, 0.0)
        assert half.contains(0.5)

    @given(
        st.floats(-10, 10), st.floats(0, 0.5), st.floats(-10, 10), st.floats(0, 0.5),
        st.floats(-1, 1), st.floats(-1, 1),
    )
    @settings(max_examples=80)
    def test_interval_soundness(self, va, ba, vb, bb, ta, tb):
        # any true values inside the operand intervals stay inside the result
        a = an.BoundedValue(va, ba)
        b = an.BoundedValue(vb, bb)
        xa = va + ta * ba
        xb = vb + tb * bb
        assert (a + b).contains(xa + xb)
        assert (a - b).contains(xa - xb)
        assert (a * b).contains(xa * xb)


class TestPrimesAndZeta:
    def test_primes(self):
        assert an.primes_up_to(20) == [2, 3, 5, 7, 11, 13, 17, 19]
        assert an.primes_up_to(1) == []

    def test_zeta2(self):
        z = an.zeta_int(2)
        assert z.contains(math.pi**2 / 6)
        assert z.bound < 1e-7

    def test_zeta_partial_sum_comparison(self):
        # independent oracle: direct partial sums bound zeta(2) from below
        partial = sum(1 / m**2 for m in range(1, 50_000))
        z = an.zeta_int(2)
        assert partial < z.value + z.bound
        assert z.value - z.bound < partial + 1 / 49_999

    def test_zeta_guard(self):
        with pytest.raises(ValueError):
            an.zeta_int(1)


class TestEulerProduct:
    def test_product_of_ones(self):
        spec = an.EulerProductSpec("one", lambda p: Fraction(1), 2, 0.0, cutoff=100)
        v = an.euler_product(spec)
        assert v.value == 1.0 and v.bound < 1e-12

    def test_zeta2_as_product(self):
        spec = an.EulerProductSpec(
            "zeta2-inverse", lambda p: Fraction(p**2 - 1, p**2), 2, 1.0, cutoff=10**5
        )
        v = an.euler_product(spec, target=1e-4)
        z = an.zeta_int(2)
        assert abs(v.value - 1 / z.value) <= v.bound + 1e-6

    def test_tail_model_violation_detected(self):
        spec = an.EulerProductSpec(
            "bad-model", lambda p: Fraction(1 + p, p), 2, 1.0, cutoff=100
        )
        with pytest.raises(an.TailModelError):
            an.euler_product(spec)

    def test_monotone_in_cutoff_for_decreasing_factors(self):
        spec31 = an.EulerProductSpec.from_inverse_p_polynomial("p31", [1, 0, -3, 2])
        values = []
        for cutoff in (10**3, 10**4, 10**5):
            s = an.EulerProductSpec("p31", spec31.factor, 2, spec31.tail_constant, cutoff)
            values.append(an.euler_product(s).value)
        assert values[0] >= values[1] >= values[2]

    def test_polynomial_spec_factor(self):
        spec = an.EulerProductSpec.from_inverse_p_polynomial("t", [1, 0, -3, 2])
        num, den = spec.factor(5)
        assert Fraction(num, den) == Fraction(5**3 - 3 * 5 + 2, 5**3)
        assert spec.tail_exponent == 2
        with pytest.raises(ValueError):
            an.EulerProductSpec.from_inverse_p_polynomial("t", [2, 1])

    def test_unreachable_target(self):
        spec = an.EulerProductSpec.from_inverse_p_polynomial("t", [1, 0, -3, 2])
        with pytest.raises(an.EulerProductError):
            an.euler_product(spec, target=1e-12)


class TestCorankProbabilities:
    def test_rank2_trivial(self):
        assert an.corank_probability(2, 1).value == 1.0
        with pytest.raises(ValueError):
            an.corank_probability(2, 2)

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            an.corank_probability(5, 1)
        with pytest.raises(ValueError):
            an.corank_probability(3, 3)

    def test_rank3_sum(self):
        total = an.corank_probability(3, 1) + an.corank_probability(3, 2)
        assert total.contains(1.0)


class TestLatticeBaseline:
    def test_monotone_in_k(self):
        vals = [an.lattice_baseline(10, k).value for k in (1, 2, 3)]
        assert vals[0] <= vals[1] <= vals[2] <= 1.0

    def test_stabilizes_in_n(self):
        for k in (1, 2):
            seq = [an.lattice_baseline(n, k).value for n in (5, 10, 20, 50)]
            assert abs(seq[-1] - seq[-2]) < 1e-3

    def test_bad_k(self):
        with pytest.raises(ValueError):
            an.lattice_baseline(4, 0)


class TestGroupMass:
    def test_aut_orders(self):
        assert an.abelian_p_group_aut_order(3, (1, 1)) == 48
        assert an.abelian_p_group_aut_order(5, (1,)) == 4
        assert an.abelian_p_group_aut_order(5, (2,)) == 20
        assert an.abelian_p_group_aut_order(2, (2, 1)) == 8
        assert an.abelian_p_group_aut_order(2, (1, 1, 1)) == 168

    def test_trivial_group_limit(self):
        v = an.cohen_lenstra_mass(60, 2, ())
        assert abs(v.value - 0.2887880951) < 1e-9

    def test_total_mass_rank1(self):
        total = an.cohen_lenstra_mass(1, 2, ()).value + sum(
            an.cohen_lenstra_mass(1, 2, (j,)).value for j in range(1, 64)
        )
        assert abs(total - 1.0) < 1e-12

    def test_rank_guard(self):
        with pytest.raises(ValueError):
            an.cohen_lenstra_mass(1, 2, (1, 1))


class TestCoprimeAndExponent:
    def test_exact_ratios(self):
        assert an.coprime_index_ratio_exact(2, 2) == Fraction(1, 2)
        assert an.coprime_index_ratio_exact(3, 2) == Fraction(1, 6)
        assert an.coprime_index_ratio_exact(3, 3) == Fraction(1, 3)

    def test_rank3_general_p(self):
        # reciprocal of p(p+1)/(p-1)^2 at the accumulation point
        for p in (2, 3, 5, 7):
            assert an.coprime_index_ratio_exact(3, p) == Fraction((p - 1) ** 2, p * (p + 1))

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            an.coprime_index_ratio_exact(5, 2)

    def test_growth_exponent(self):
        assert an.a_lower(7) == Fraction(9, 8)
        assert an.a_lower(2) == 1

    def test_growth_exponent_asymptotic(self):
        # a(n) >= (3 - 2 sqrt 2)(n - 1) - (sqrt 2 - 1), exact rational test
        from fractions import Fraction as F

        sqrt2_hi = F(14142135624, 10**10)  # sqrt(2) < this
        for n in range(2, 60):
            lower = (3 - 2 * sqrt2_hi) * (n - 1) - (sqrt2_hi - 1)
            assert an.a_lower(n) >= lower


class TestEmpiricalDensity:
    def test_coprime_density_trend_matches_limit(self):
        # the odd-index proportion converges only at log speed, so compare
        # the trend over growing bounds against the exact limiting ratio
        from subring_census.counting import CountLedger, multiplicative_extend

        ledger = CountLedger()
        limit = float(an.coprime_index_ratio_exact(3, 2))
        table = multiplicative_extend(3, 10**4, ledger)

        def ratio(x):
            total = sum(table.f[1 : x + 1])
            odd = sum(table.f[j] for j in range(1, x + 1) if j % 2 == 1)
            return odd / total

        r2, r3, r4 = ratio(10**2), ratio(10**3), ratio(10**4)
        assert r2 > r3 > r4 > limit
        assert abs(r4 - limit) / limit < 0.4
