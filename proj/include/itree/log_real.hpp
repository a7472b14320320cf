#pragma once

#include <cmath>
#include <compare>
#include <limits>
#include <ostream>
#include <stdexcept>

namespace itree {

/// Signed real stored as (sign, ln|x|). Products are exact up to one
/// rounding of the log; sums use log-sum-exp. The relative error of one
/// operation is about |ln x| * 2^-53, i.e. below 1e-12 while |ln x| < 4000.
class LogReal {
public:
    constexpr LogReal() = default;

    explicit LogReal(double x) {
        if (std::isnan(x)) throw std::invalid_argument("LogReal: NaN");
        if (x > 0) {
            sign_ = 1;
            log_abs_ = std::log(x);
        } else if (x < 0) {
            sign_ = -1;
            log_abs_ = std::log(-x);
        }
    }

    static constexpr LogReal zero() noexcept { return LogReal{}; }
    static LogReal one() noexcept { return from_log(0.0); }

    /// Value sign * exp(log_abs).
    static LogReal from_log(double log_abs, int sign = 1) {
        if (std::isnan(log_abs)) throw std::invalid_argument("LogReal: NaN log magnitude");
        LogReal r;
        if (sign == 0 || log_abs == -std::numeric_limits<double>::infinity()) return r;
        r.sign_ = sign > 0 ? 1 : -1;
        r.log_abs_ = log_abs;
        return r;
    }

    [[nodiscard]] constexpr int sign() const noexcept { return sign_; }
    [[nodiscard]] constexpr bool is_zero() const noexcept { return sign_ == 0; }

    /// ln|x|; -inf for zero.
    [[nodiscard]] double log_abs() const noexcept {
        return sign_ == 0 ? -std::numeric_limits<double>::infinity() : log_abs_;
    }

    /// ln x for positive values; throws otherwise.
    [[nodiscard]] double log() const {
        if (sign_ <= 0) throw std::domain_error("LogReal::log of a non-positive value");
        return log_abs_;
    }

    /// Native double; may overflow to inf or underflow to 0.
    [[nodiscard]] double to_double() const noexcept { return sign_ == 0 ? 0.0 : sign_ * std::exp(log_abs_); }

    LogReal operator-() const noexcept {
        LogReal r = *this;
        r.sign_ = -r.sign_;
        return r;
    }

    friend LogReal operator*(const LogReal& a, const LogReal& b) noexcept {
        if (a.sign_ == 0 || b.sign_ == 0) return {};
        LogReal r;
        r.sign_ = a.sign_ * b.sign_;
        r.log_abs_ = a.log_abs_ + b.log_abs_;
        return r;
    }

    friend LogReal operator/(const LogReal& a, const LogReal& b) {
        if (b.sign_ == 0) throw std::domain_error("LogReal: division by zero");
        if (a.sign_ == 0) return {};
        LogReal r;
        r.sign_ = a.sign_ * b.sign_;
        r.log_abs_ = a.log_abs_ - b.log_abs_;
        return r;
    }

    friend LogReal operator+(const LogReal& a, const LogReal& b) noexcept {
        if (a.sign_ == 0) return b;
        if (b.sign_ == 0) return a;
        const bool a_big = a.log_abs_ >= b.log_abs_;
        const LogReal& hi = a_big ? a : b;
        const LogReal& lo = a_big ? b : a;
        const double delta = lo.log_abs_ - hi.log_abs_;  // <= 0
        LogReal r;
        if (hi.sign_ == lo.sign_) {
            r.sign_ = hi.sign_;
            r.log_abs_ = hi.log_abs_ + std::log1p(std::exp(delta));
            return r;
        }
        if (delta == 0.0) return {};
        r.sign_ = hi.sign_;
        r.log_abs_ = hi.log_abs_ + std::log1p(-std::exp(delta));
        return r;
    }

    friend LogReal operator-(const LogReal& a, const LogReal& b) noexcept { return a + (-b); }

    LogReal& operator+=(const LogReal& o) noexcept { return *this = *this + o; }
    LogReal& operator*=(const LogReal& o) noexcept { return *this = *this * o; }

    /// x^e for x > 0 (and 0^e = 0 for e > 0).
    [[nodiscard]] LogReal pow(double e) const {
        if (sign_ == 0) {
            if (e > 0) return {};
            throw std::domain_error("LogReal::pow: 0 to a non-positive power");
        }
        if (sign_ < 0) throw std::domain_error("LogReal::pow: negative base");
        return from_log(log_abs_ * e);
    }

    friend std::partial_ordering operator<=>(const LogReal& a, const LogReal& b) noexcept {
        if (a.sign_ != b.sign_) return a.sign_ <=> b.sign_;
        if (a.sign_ == 0) return std::partial_ordering::equivalent;
        return a.sign_ > 0 ? a.log_abs_ <=> b.log_abs_ : b.log_abs_ <=> a.log_abs_;
    }

    friend bool operator==(const LogReal& a, const LogReal& b) noexcept { return (a <=> b) == 0; }

    friend std::ostream& operator<<(std::ostream& os, const LogReal& x) {
        if (x.sign_ == 0) return os << "0";
        return os << (x.sign_ < 0 ? "-" : "") << "exp(" << x.log_abs_ << ")";
    }

private:
    int sign_ = 0;
    double log_abs_ = 0.0;
};

}  // namespace itree
