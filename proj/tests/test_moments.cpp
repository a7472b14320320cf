#include <cmath>
#include <vector>

#include <boost/multiprecision/cpp_dec_float.hpp>
#include <boost/multiprecision/cpp_int.hpp>
#include <gtest/gtest.h>

#include "itree/generators.hpp"
#include "itree/moments.hpp"

using namespace itree;
using Dec = boost::multiprecision::cpp_dec_float_50;
using Rational = boost::multiprecision::cpp_rational;
using BigInt = boost::multiprecision::cpp_int;

namespace {

Dec dec_falling(std::uint64_t r, std::uint64_t t) {
    Dec out = 1;
    for (std::uint64_t i = 0; i < t; ++i) out *= Dec(r - i);
    return out;
}

Dec dec_factorial(std::uint64_t k) { return dec_falling(k, k); }

Dec dec_binom(std::uint64_t n, std::uint64_t k) { return dec_falling(n, k) / dec_factorial(k); }

/// 50-digit threshold formulas.
Dec dec_threshold(std::uint64_t n, const Dec& p, ThresholdForm form) {
    const Dec c = Dec(n) * p;
    const Dec lc = log(c);
    const Dec h = 3 * log(lc) / lc;
    if (form == ThresholdForm::logq) return (2 - h) * lc / -log(1 - p);
    return (2 - h) * lc / c * Dec(n);
}

/// g(l) straight from its definition, 50 digits.
Dec dec_g(std::uint64_t n, const Dec& p, unsigned delta, std::uint64_t b, std::uint64_t ell) {
    const BigInt d = degree_constant(delta);
    const Dec dd(d);
    const std::uint64_t kl = k_max(ell, b, saturate_u64(d));
    Dec sum = 0;
    for (std::uint64_t k = 1; k <= kl; ++k) {
        sum += dec_binom(b, k) * dec_binom(b, k) * dec_factorial(k) * dec_binom(k + ell - 1, ell) * pow(dd, ell) *
               pow(p / (1 - p), k);
    }
    const Dec l(ell);
    return dec_falling(n - b, b - ell) / dec_falling(n, b) * pow(p, -l) * pow(1 - p, l - l * (l - 1) / 2) * sum;
}

}  // namespace

TEST(DegreeConstant, Examples) {
    EXPECT_EQ(degree_constant(1), 4);
    EXPECT_EQ(degree_constant(2), 32);
    EXPECT_EQ(degree_constant(3), 384);
    BigInt f20 = 1;
    for (int i = 2; i <= 20; ++i) f20 *= i;
    EXPECT_EQ(degree_constant(20), (BigInt(1) << 40) * f20);
    EXPECT_EQ(saturate_u64(degree_constant(20)), UINT64_MAX);
    EXPECT_THROW((void)degree_constant(0), std::invalid_argument);
}

TEST(KMax, ExamplesAndProperties) {
    EXPECT_EQ(k_max(10, 10, 32), 1u);
    EXPECT_EQ(k_max(9, 10, 32), 9u);
    EXPECT_EQ(k_max(2, 10, 3), 2u);
    EXPECT_EQ(k_max(5, 10, 0), 0u);
    EXPECT_THROW((void)k_max(11, 10, 3), std::invalid_argument);
    EXPECT_THROW((void)k_max(1, 10, 3), std::invalid_argument);
    for (std::uint64_t b = 2; b <= 40; ++b) {
        EXPECT_EQ(k_max(b, b, 384), 1u);
        for (std::uint64_t l = 2; l <= b; ++l) {
            for (std::uint64_t d : {std::uint64_t{1}, std::uint64_t{4}, std::uint64_t{384}, std::uint64_t{UINT64_MAX}}) EXPECT_LE(k_max(l, b, d), l);
        }
    }
}

TEST(Threshold, TooSmallCIsAnError) {
    EXPECT_THROW((void)threshold_size(100, 0.01, ThresholdForm::lnform), std::domain_error);
    EXPECT_THROW((void)threshold_size(100, 0.01, ThresholdForm::logq), std::domain_error);
    EXPECT_THROW((void)threshold_size(100, 0.0274, ThresholdForm::lnform), std::domain_error);  // c < e^1.01
    EXPECT_NO_THROW((void)threshold_size(100, 0.0276, ThresholdForm::lnform));
}

TEST(Threshold, MatchesFiftyDigitOracle) {
    const Dec p = Dec(1) / 100;
    const Dec exact = dec_threshold(10000, p, ThresholdForm::lnform);
    EXPECT_EQ(threshold_size(10000, 0.01, ThresholdForm::lnform), static_cast<std::uint64_t>(floor(exact)));
    EXPECT_NEAR(threshold_value(10000, 0.01, ThresholdForm::lnform), static_cast<double>(exact), 1e-9);
    EXPECT_EQ(threshold_size(10000, 0.01, ThresholdForm::lnform), 462u);
    for (std::uint64_t n : {1000ull, 2000ull, 100000ull, 10000000ull}) {
        for (int inv : {20, 50, 200}) {
            const double pd = 1.0 / inv;
            if (std::log(n * pd) <= 1.01) continue;
            for (auto form : {ThresholdForm::lnform, ThresholdForm::logq}) {
                const Dec v = dec_threshold(n, Dec(1) / inv, form);
                const Dec frac = v - floor(v);
                if (frac < Dec(1e-9) || frac > 1 - Dec(1e-9)) continue;  // too close to an integer to pin
                EXPECT_EQ(threshold_size(n, pd, form), static_cast<std::uint64_t>(floor(v))) << n << " " << inv;
            }
        }
    }
}

TEST(Threshold, LnformAtLeastLogq) {
    for (double n = 50; n < 1e9; n *= 3.7) {
        for (double c : {3.0, 10.0, 100.0, 1e3, 1e4}) {
            const double p = c / n;
            if (p >= 1.0 || std::log(c) <= 1.01) continue;
            const auto nn = static_cast<std::uint64_t>(n);
            EXPECT_GE(threshold_size(nn, p, ThresholdForm::lnform), threshold_size(nn, p, ThresholdForm::logq));
        }
    }
}

TEST(Threshold, PinnedExperimentPoint) {
    EXPECT_EQ(threshold_size(2000, 0.05, ThresholdForm::lnform), 92u);
    const double logq = std::log(100.0) / -std::log1p(-0.05);
    EXPECT_EQ(static_cast<std::uint64_t>(std::ceil(2.4 * logq)), 216u);
}

TEST(MomentParams, DerivedFieldsAndGuards) {
    const auto m = MomentParams::make(10000, 0.01, 3, 100);
    EXPECT_DOUBLE_EQ(m.c, 100.0);
    EXPECT_DOUBLE_EQ(m.q, 1.0 / 0.99);
    EXPECT_EQ(m.d, 384u);
    EXPECT_NEAR(m.log_d, std::log(384.0), 1e-12);
    EXPECT_NEAR(m.h(), 3.0 * std::log(std::log(100.0)) / std::log(100.0), 1e-15);
    EXPECT_FALSE(m.in_regime);  // 0.01 < n^-1/2 (ln n)^(10/9)
    EXPECT_TRUE(MomentParams::make(10000, 0.5, 3, 10).in_regime);
    EXPECT_FALSE(MomentParams::make(10000, 0.995, 3, 10).in_regime);
    EXPECT_THROW((void)MomentParams::make(100, 0.01, 3, 10).h(), std::domain_error);
    EXPECT_THROW((void)MomentParams::make(100, 0.0, 3, 10), std::invalid_argument);
    EXPECT_THROW((void)MomentParams::make(100, 1.0, 3, 10), std::invalid_argument);
    EXPECT_THROW((void)MomentParams::make(100, 0.5, 3, 1), std::invalid_argument);
}

TEST(ExpectedCount, Examples) {
    EXPECT_NEAR(expected_count(MomentParams::make(5, 0.5, 2, 2)).to_double(), 10.0, 1e-12);
    EXPECT_NEAR(expected_count(MomentParams::make(4, 0.5, 2, 3)).to_double(), 3.0, 1e-12);
    EXPECT_NEAR(expected_count(MomentParams::make(10, 0.3, 2, 4)).to_double(), 5040 * 0.027 * 0.343, 1e-9);
    EXPECT_THROW((void)expected_count(MomentParams::make(4, 0.5, 2, 5)), std::invalid_argument);
}

TEST(ExpectedCount, MatchesBigRational) {
    const std::pair<int, int> probs[] = {{1, 10}, {3, 10}, {1, 2}, {7, 10}};
    for (std::uint64_t n = 2; n <= 30; ++n) {
        for (std::uint64_t b = 2; b <= n; ++b) {
            for (auto [num, den] : probs) {
                const Rational p(num, den);
                Rational exact = 1;
                for (std::uint64_t i = 0; i < b; ++i) exact *= Rational(n - i);
                for (std::uint64_t i = 0; i + 1 < b; ++i) exact *= p;
                for (std::uint64_t i = 0; i < (b - 1) * (b - 2) / 2; ++i) exact *= (1 - p);
                const double got = expected_count(MomentParams::make(n, double(num) / den, 2, b)).log();
                const Dec want = log(Dec(numerator(exact)) / Dec(denominator(exact)));
                ASSERT_LT(std::abs(std::expm1(got - static_cast<double>(want))), 1e-9) << n << " " << b << " " << num;
            }
        }
    }
}

TEST(FValue, Examples) {
    const auto m = MomentParams::make(10, 0.5, 2, 4);
    EXPECT_NEAR(f_value(2, 1, m).to_double(), 16384.0, 1e-8);
    EXPECT_NEAR(f_value(2, 2, m).to_double(), 221184.0, 1e-7);
    EXPECT_NEAR((f_value(2, 2, m) / f_value(2, 1, m)).to_double(), 13.5, 1e-12);
    EXPECT_THROW((void)f_value(2, 3, m), std::invalid_argument);
    EXPECT_THROW((void)f_value(4, 2, m), std::invalid_argument);
    EXPECT_THROW((void)f_value(1, 1, m), std::invalid_argument);
}

TEST(FValue, ClosedFormRatio) {
    for (std::uint64_t b : {6ull, 20ull, 150ull}) {
        const auto m = MomentParams::make(100000, 0.003, 3, b);
        for (std::uint64_t l = 2; l < b; l += 1 + b / 17) {
            const auto kl = k_max(l, b, m.d);
            for (std::uint64_t k = 1; k < kl; ++k) {
                const double direct = f_value(l, k + 1, m).log() - f_value(l, k, m).log();
                ASSERT_NEAR(log_f_ratio(l, k, m), direct, 1e-9 * std::max(1.0, std::abs(direct)));
            }
        }
    }
}

TEST(SBound, Examples) {
    const auto m = MomentParams::make(10, 0.5, 2, 4);
    EXPECT_NEAR(s_bound(2, 1, m).to_double(), 491520.0, 1e-6);
    const auto top = s_bound(4, 1, m);
    EXPECT_GT(top.sign(), 0);
    EXPECT_NEAR(top.to_double(), 16.0 * 1.0 * 1.0 * std::pow(32.0, 4), 1e-3);  // C(4,1)^2 1! C(4,4) d^4
    EXPECT_THROW((void)s_bound(4, 2, m), std::invalid_argument);
}

TEST(HTilde, SingleTermAtBTwo) {
    const auto m = MomentParams::make(9, 0.3, 2, 2);
    const auto want = s_bound(2, 1, m) / LogReal(9.0 * 8.0) / LogReal(0.3);
    EXPECT_NEAR(h_tilde_bound(m).log(), want.log(), 1e-12);
    EXPECT_NEAR(g_value(2, m).log(), h_tilde_bound(m).log(), 1e-12);
    // exact: two compatible partners share both vertices (identity and swap)
    const auto exact = h_tilde_exact(m, path_tree(2));
    EXPECT_NEAR(exact.to_double(), 2.0 / (9.0 * 8.0) / 0.3, 1e-12);
}

TEST(HTilde, ExactBelowBoundTermByTerm) {
    for (std::size_t b = 2; b <= 5; ++b) {
        for (const auto& t : all_labeled_trees(b)) {
            if (t.max_degree() > 3) continue;
            for (std::uint64_t n : {b, b + 2, std::uint64_t{9}}) {
                if (n < b) continue;
                const auto m = MomentParams::make(n, 0.3, static_cast<unsigned>(t.max_degree()), b);
                ASSERT_LE(h_tilde_exact(m, t), h_tilde_bound(m));
            }
        }
    }
}

TEST(HTilde, SumOfGEqualsBound) {
    for (auto [n, p, delta, b] : std::vector<std::tuple<std::uint64_t, double, unsigned, std::uint64_t>>{
             {30, 0.3, 2, 6}, {1000, 0.05, 3, 25}, {10000, 0.05, 3, 120}, {100000, 0.001, 2, 40}}) {
        const auto m = MomentParams::make(n, p, delta, b);
        LogReal sum;
        for (std::uint64_t l = 2; l <= b; ++l) sum += g_value(l, m);
        const auto h = h_tilde_bound(m);
        EXPECT_LT(std::abs(std::expm1(sum.log() - h.log())), 1e-10) << n;
    }
}

TEST(HTilde, LargePointIsFinite) {
    const auto b = threshold_size(10000, 0.05, ThresholdForm::lnform);
    const auto m = MomentParams::make(10000, 0.05, 3, b);
    const auto h = h_tilde_bound(m);
    EXPECT_GT(h.sign(), 0);
    EXPECT_TRUE(std::isfinite(h.log()));
    EXPECT_TRUE(std::isfinite(expected_count(m).log()));
}

TEST(HTilde, ExactNeedsTree) {
    const auto m = MomentParams::make(8, 0.3, 2, 4);
    EXPECT_THROW((void)h_tilde(m, SSource::exact_oracle), std::invalid_argument);
    EXPECT_THROW((void)h_tilde(m, SSource::exact_oracle, &static_cast<const Tree&>(path_tree(5))), std::invalid_argument);
    const auto big = MomentParams::make(11, 0.3, 2, 4);
    const auto t = path_tree(4);
    EXPECT_THROW((void)h_tilde(big, SSource::exact_oracle, &t), CapExceeded);
    EXPECT_NO_THROW((void)h_tilde(big, SSource::exact_oracle, &t, true));
}

TEST(GValue, FiftyDigitOracle) {
    for (auto [n, p_num, p_den, delta, b, ell] :
         std::vector<std::tuple<std::uint64_t, int, int, unsigned, std::uint64_t, std::uint64_t>>{
             {1000, 1, 20, 2, 20, 10}, {1000, 1, 20, 3, 20, 19}, {5000, 1, 100, 2, 30, 2}, {200, 3, 10, 3, 8, 8}}) {
        const auto m = MomentParams::make(n, double(p_num) / p_den, delta, b);
        const Dec want = log(dec_g(n, Dec(p_num) / p_den, delta, b, ell));
        EXPECT_LT(std::abs(g_value(ell, m).log() - static_cast<double>(want)), 1e-10 * std::max(1.0, std::abs(static_cast<double>(want))))
            << n << " " << b << " " << ell;
    }
}

TEST(Chebyshev, UninformativeWhenExpectationBelowOne) {
    const auto m = MomentParams::make(20, 0.05, 2, 10);
    ASSERT_LT(expected_count(m).to_double(), 1.0);
    const auto cb = chebyshev_bound(m, SSource::bound);
    EXPECT_FALSE(cb.informative);
    EXPECT_EQ(cb.value, 1.0);
}

TEST(Chebyshev, DecreasesWithN) {
    double prev = INFINITY;
    for (std::uint64_t n : {1000ull, 10000ull, 100000ull, 1000000ull}) {
        const auto cb = chebyshev_bound(MomentParams::make(n, 0.5, 2, 4), SSource::bound);
        EXPECT_LT(cb.raw.log(), prev);
        prev = cb.raw.log();
    }
}
