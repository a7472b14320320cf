#include <cmath>
#include <limits>
#include <vector>

#include <gtest/gtest.h>

#include "itree/log_real.hpp"
#include "itree/rng.hpp"

using namespace itree;

namespace {

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(a), std::abs(b)); }

}  // namespace

TEST(LogReal, ZeroAndSign) {
    EXPECT_TRUE(LogReal().is_zero());
    EXPECT_TRUE(LogReal(0.0).is_zero());
    EXPECT_EQ(LogReal(-3.0).sign(), -1);
    EXPECT_EQ(LogReal(2.0).sign(), 1);
    EXPECT_DOUBLE_EQ(LogReal(-3.0).to_double(), -3.0);
    EXPECT_THROW(LogReal(std::nan("")), std::invalid_argument);
    EXPECT_THROW((void)LogReal(-1.0).log(), std::domain_error);
}

TEST(LogReal, ArithmeticMatchesDoubles) {
    Rng rng(Seed{1, 1});
    for (int i = 0; i < 2000; ++i) {
        const double a = (rng.uniform01() - 0.3) * 100.0;
        const double b = (rng.uniform01() - 0.6) * 10.0;
        const LogReal la(a), lb(b);
        EXPECT_LT(rel((la * lb).to_double(), a * b), 1e-12);
        EXPECT_LT(rel((la / lb).to_double(), a / b), 1e-12);
        if (std::abs(a + b) > 1e-3 * (std::abs(a) + std::abs(b))) {
            EXPECT_LT(rel((la + lb).to_double(), a + b), 1e-9);
        }
        EXPECT_EQ(la < lb, a < b);
    }
}

TEST(LogReal, MultiplyThenDivideRecovers) {
    Rng rng(Seed{2, 2});
    for (int i = 0; i < 2000; ++i) {
        const auto a = LogReal::from_log((rng.uniform01() - 0.5) * 600.0, rng.bernoulli(0.5) ? 1 : -1);
        const auto b = LogReal::from_log((rng.uniform01() - 0.5) * 600.0, rng.bernoulli(0.5) ? 1 : -1);
        const auto back = (a * b) / b;
        EXPECT_EQ(back.sign(), a.sign());
        EXPECT_LT(std::abs(std::expm1(back.log_abs() - a.log_abs())), 1e-12);
    }
}

TEST(LogReal, MultiplyThenDivideFarOutsideDoubleRange) {
    // Here only the log magnitude is meaningful; it round-trips to double precision.
    Rng rng(Seed{2, 3});
    for (int i = 0; i < 2000; ++i) {
        const auto a = LogReal::from_log((rng.uniform01() - 0.5) * 1e6);
        const auto b = LogReal::from_log((rng.uniform01() - 0.5) * 1e6);
        const auto back = (a * b) / b;
        EXPECT_LT(std::abs(back.log_abs() - a.log_abs()), 1e-15 * 1e6 * 4);
    }
}

TEST(LogReal, AdditionCommutativeAssociative) {
    Rng rng(Seed{3, 3});
    for (int i = 0; i < 2000; ++i) {
        const auto a = LogReal::from_log(rng.uniform01() * 50.0);
        const auto b = LogReal::from_log(rng.uniform01() * 50.0);
        const auto c = LogReal::from_log(rng.uniform01() * 50.0);
        EXPECT_EQ((a + b).log(), (b + a).log());
        EXPECT_LT(std::abs(((a + b) + c).log() - (a + (b + c)).log()), 1e-13 * 60);
    }
}

TEST(LogReal, HugeMagnitudesDoNotOverflow) {
    const auto big = LogReal::from_log(1e8);
    const auto sum = big + big;
    EXPECT_NEAR(sum.log(), 1e8 + std::log(2.0), 1e-6);
    EXPECT_TRUE((big - big).is_zero());
    EXPECT_NEAR(big.pow(0.5).log(), 5e7, 1e-6);
    EXPECT_EQ((LogReal::from_log(-1e9) + LogReal::one()).log(), 0.0);
}

TEST(LogReal, Ordering) {
    EXPECT_LT(LogReal(-5.0), LogReal(-1.0));
    EXPECT_LT(LogReal(-1.0), LogReal::zero());
    EXPECT_LT(LogReal::zero(), LogReal(1e-300));
    EXPECT_EQ(LogReal(2.0), LogReal(2.0));
}
