#pragma once

// Second-moment quantities for the count X of ordered induced copies of a
// b-vertex tree with maximum degree <= Delta in G(n, p), evaluated in
// natural-log space.
//
// Notation: c = np, q = 1/(1-p), h = 3 ln ln c / ln c, d = 2^(2 Delta) Delta!,
// (r)_t = r (r-1) ... (r-t+1).

#include <boost/multiprecision/cpp_int.hpp>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <stdexcept>
#include <string>

#include "itree/log_real.hpp"
#include "itree/overlap.hpp"

namespace itree {

/// Regime boundaries of the containment theorem. Outside them a
/// MomentParams is still usable; it only carries a flag.
namespace regime {
inline constexpr double kMaxP = 0.99;                 // upper end of the general statement
inline constexpr double kLowerExponent = 10.0 / 9.0;  // p >= n^(-1/2) (ln n)^(10/9)
/// Minimum c for which h is evaluated: c > e^(1.01).
inline constexpr double kMinLogC = 1.01;
}  // namespace regime

inline double log_falling(double r, double t) {
    if (t < 0 || t > r + 1e-9) throw std::domain_error("log_falling: need 0 <= t <= r");
    if (t <= 256) {
        double s = 0.0;
        for (double i = 0; i < t; i += 1.0) s += std::log(r - i);
        return s;
    }
    return std::lgamma(r + 1.0) - std::lgamma(r - t + 1.0);
}

inline double log_factorial(double k) { return std::lgamma(k + 1.0); }

inline double log_binom(double n, double k) {
    if (k < 0 || k > n) return -std::numeric_limits<double>::infinity();
    const double kk = std::min(k, n - k);
    return log_falling(n, kk) - log_factorial(kk);
}

inline double choose2(double x) { return x * (x - 1.0) / 2.0; }

/// Exact 2^(2 Delta) Delta!.
inline boost::multiprecision::cpp_int degree_constant(unsigned delta) {
    if (delta < 1) throw std::invalid_argument("degree_constant: Delta must be at least 1");
    boost::multiprecision::cpp_int d = 1;
    d <<= 2 * delta;
    for (unsigned i = 2; i <= delta; ++i) d *= i;
    return d;
}

inline std::uint64_t saturate_u64(const boost::multiprecision::cpp_int& x) {
    if (x > std::numeric_limits<std::uint64_t>::max()) return std::numeric_limits<std::uint64_t>::max();
    return x.convert_to<std::uint64_t>();
}

/// k_l: the largest possible number of overlap components at overlap l,
/// 1 when l = b and min(l, (b - l) d) otherwise.
inline std::uint64_t k_max(std::uint64_t ell, std::uint64_t b, std::uint64_t d) {
    if (ell > b) throw std::invalid_argument("k_max: l exceeds b");
    if (ell < 2) throw std::invalid_argument("k_max: defined for l >= 2");
    if (ell == b) return 1;
    std::uint64_t outside = 0;
    if (__builtin_mul_overflow(b - ell, d, &outside)) return ell;
    return std::min(ell, outside);
}

enum class ThresholdForm { logq, lnform };

struct MomentParams {
    std::uint64_t n = 0;
    double p = 0.0;
    unsigned delta = 2;
    std::uint64_t b = 2;

    // derived
    double c = 0.0;
    double q = 0.0;
    double log_d = 0.0;
    std::uint64_t d = 0;  // saturated at 2^64-1
    bool in_regime = false;

    static MomentParams make(std::uint64_t n, double p, unsigned delta, std::uint64_t b) {
        if (n < 1) throw std::invalid_argument("MomentParams: n must be at least 1");
        if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("MomentParams: p must lie in (0, 1)");
        if (delta < 1) throw std::invalid_argument("MomentParams: Delta must be at least 1");
        if (b < 2) throw std::invalid_argument("MomentParams: b must be at least 2");
        MomentParams m;
        m.n = n;
        m.p = p;
        m.delta = delta;
        m.b = b;
        m.c = static_cast<double>(n) * p;
        m.q = 1.0 / (1.0 - p);
        const auto dd = degree_constant(delta);
        m.d = saturate_u64(dd);
        m.log_d = 2.0 * delta * std::log(2.0) + log_factorial(delta);
        const double nn = static_cast<double>(n);
        const double lower = n > 1 ? std::pow(nn, -0.5) * std::pow(std::log(nn), regime::kLowerExponent) : 1.0;
        m.in_regime = p >= lower && p <= regime::kMaxP;
        return m;
    }

    /// h = 3 ln ln c / ln c; requires c > e^(1.01).
    [[nodiscard]] double h() const {
        const double lc = std::log(c);
        if (!(lc > regime::kMinLogC)) {
            throw std::domain_error("h requires c = np > e^1.01, got c = " + std::to_string(c));
        }
        return 3.0 * std::log(lc) / lc;
    }

    /// Below the main theorem's p < 1/ln n split the finite-n bounds on
    /// (1 - c/n)^(-1) used in the proof apply.
    [[nodiscard]] bool below_log_split() const { return p < 1.0 / std::log(static_cast<double>(n)); }
};

/// Real-valued threshold before flooring.
inline double threshold_value(std::uint64_t n, double p, ThresholdForm form) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("threshold_size: p must lie in (0, 1)");
    const double nn = static_cast<double>(n);
    const double c = nn * p;
    const double lc = std::log(c);
    if (!(lc > regime::kMinLogC)) {
        throw std::domain_error("threshold_size: c = np must exceed e^1.01, got c = " + std::to_string(c));
    }
    const double h = 3.0 * std::log(lc) / lc;
    if (form == ThresholdForm::logq) return (2.0 - h) * lc / -std::log1p(-p);
    return (2.0 - h) * lc / c * nn;
}

/// floor((2 - h) log_q(np)) or floor((2 - h) n ln c / c).
inline std::uint64_t threshold_size(std::uint64_t n, double p, ThresholdForm form) {
    return static_cast<std::uint64_t>(std::floor(threshold_value(n, p, form)));
}

/// E[X] = (n)_b p^(b-1) (1-p)^C(b-1,2).
inline LogReal expected_count(const MomentParams& m) {
    if (m.b > m.n) throw std::invalid_argument("expected_count: b exceeds n");
    const double b = static_cast<double>(m.b);
    return LogReal::from_log(log_falling(static_cast<double>(m.n), b) + (b - 1.0) * std::log(m.p) +
                             choose2(b - 1.0) * std::log1p(-m.p));
}

namespace detail {

inline void check_ell(const MomentParams& m, std::uint64_t ell, const char* who) {
    if (ell < 2 || ell > m.b) {
        throw std::invalid_argument(std::string(who) + ": l must lie in [2, b], got " + std::to_string(ell));
    }
}

inline void check_k(const MomentParams& m, std::uint64_t ell, std::uint64_t k, const char* who) {
    check_ell(m, ell, who);
    const auto kl = k_max(ell, m.b, m.d);
    if (k < 1 || k > kl) {
        throw std::invalid_argument(std::string(who) + ": k must lie in [1, k_l = " + std::to_string(kl) + "]");
    }
}

/// ln of C(b,k)^2 k! C(k+l-1, l) d^l, shared by f and the S bound.
inline double log_root_choices(const MomentParams& m, double ell, double k) {
    const double b = static_cast<double>(m.b);
    return 2.0 * log_binom(b, k) + log_factorial(k) + log_binom(k + ell - 1.0, ell) + ell * m.log_d;
}

}  // namespace detail

/// f_l(k) = C(b,k)^2 k! C(k+l-1, l) d^l (p/(1-p))^k.
inline LogReal f_value(std::uint64_t ell, std::uint64_t k, const MomentParams& m) {
    detail::check_k(m, ell, k, "f_value");
    const double kk = static_cast<double>(k);
    return LogReal::from_log(detail::log_root_choices(m, static_cast<double>(ell), kk) +
                             kk * (std::log(m.p) - std::log1p(-m.p)));
}

/// ln f_l(k+1) - ln f_l(k) in closed form:
///   ((b-k)/(k+1))^2 (k+1) (k+l)/k * p/(1-p).
inline double log_f_ratio(std::uint64_t ell, std::uint64_t k, const MomentParams& m) {
    const double b = static_cast<double>(m.b);
    const double kk = static_cast<double>(k);
    const double l = static_cast<double>(ell);
    return 2.0 * std::log((b - kk) / (kk + 1.0)) + std::log(kk + 1.0) + std::log((kk + l) / kk) + std::log(m.p) -
           std::log1p(-m.p);
}

/// Upper bound (n-b)_(b-l) C(b,k)^2 k! C(k+l-1, l) d^l on S(l, k). Zero when
/// fewer than b - l vertices lie outside the first copy.
inline LogReal s_bound(std::uint64_t ell, std::uint64_t k, const MomentParams& m) {
    detail::check_k(m, ell, k, "s_bound");
    if (m.b > m.n || m.n - m.b < m.b - ell) return LogReal::zero();
    return LogReal::from_log(log_falling(static_cast<double>(m.n - m.b), static_cast<double>(m.b - ell)) +
                             detail::log_root_choices(m, static_cast<double>(ell), static_cast<double>(k)));
}

/// p^-(l-k) (1-p)^(-C(l,2) + l - k) / (n)_b: weight of one compatible partner
/// in the normalized covariance sum.
inline LogReal partner_weight(std::uint64_t ell, std::uint64_t k, const MomentParams& m) {
    const double l = static_cast<double>(ell);
    const double kk = static_cast<double>(k);
    return LogReal::from_log(-(l - kk) * std::log(m.p) + (-choose2(l) + l - kk) * std::log1p(-m.p) -
                             log_falling(static_cast<double>(m.n), static_cast<double>(m.b)));
}

enum class SSource { bound, exact_oracle };

/// Sum over l = 2..b, k = 1..k_l of S(l,k) * partner_weight(l,k), with the
/// closed-form bound for S. Cost grows like b^2.
inline LogReal h_tilde_bound(const MomentParams& m) {
    if (m.b > m.n) throw std::invalid_argument("h_tilde: b exceeds n");
    LogReal total;
    for (std::uint64_t ell = 2; ell <= m.b; ++ell) {
        const auto kl = k_max(ell, m.b, m.d);
        for (std::uint64_t k = 1; k <= kl; ++k) total += s_bound(ell, k, m) * partner_weight(ell, k, m);
    }
    return total;
}

/// Same double sum with S(l,k) counted exactly for `tree` against the
/// identity phi1. Requires tree.b() == m.b and an enumerable size.
inline LogReal h_tilde_exact(const MomentParams& m, const Tree& tree, bool force = false) {
    if (tree.b() != m.b) throw std::invalid_argument("h_tilde: tree size differs from b");
    if (tree.max_degree() > m.delta) throw std::invalid_argument("h_tilde: tree degree exceeds Delta");
    if (m.b > m.n) throw std::invalid_argument("h_tilde: b exceeds n");
    const auto table = overlap_table(tree, identity_embedding(m.b, m.n), m.n, force);
    LogReal total;
    for (std::uint64_t ell = 2; ell <= m.b; ++ell) {
        const auto kl = k_max(ell, m.b, m.d);
        for (std::uint64_t k = 1; k <= kl; ++k) {
            const auto s = table.S(ell, k);
            if (s != 0) total += LogReal(static_cast<double>(s)) * partner_weight(ell, k, m);
        }
    }
    return total;
}

inline LogReal h_tilde(const MomentParams& m, SSource source, const Tree* tree = nullptr, bool force = false) {
    if (source == SSource::bound) return h_tilde_bound(m);
    if (tree == nullptr) throw std::invalid_argument("h_tilde: the exact oracle needs a tree");
    return h_tilde_exact(m, *tree, force);
}

/// g(l) = (n-b)_(b-l)/(n)_b p^-l (1-p)^(l - C(l,2)) sum_{k<=k_l} f_l(k):
/// the l-th summand of the bound-based double sum, computed through f.
inline LogReal g_value(std::uint64_t ell, const MomentParams& m) {
    detail::check_ell(m, ell, "g_value");
    if (m.n - m.b < m.b - ell) return LogReal::zero();
    const double l = static_cast<double>(ell);
    const double prefix = log_falling(static_cast<double>(m.n - m.b), static_cast<double>(m.b - ell)) -
                          log_falling(static_cast<double>(m.n), static_cast<double>(m.b)) - l * std::log(m.p) +
                          (l - choose2(l)) * std::log1p(-m.p);
    LogReal sum;
    const auto kl = k_max(ell, m.b, m.d);
    for (std::uint64_t k = 1; k <= kl; ++k) sum += f_value(ell, k, m);
    return LogReal::from_log(prefix) * sum;
}

struct ChebyshevBound {
    LogReal raw;        // 1/E[X] + H~
    double value = 1;   // min(1, raw)
    bool informative = false;
};

/// Pr(X = 0) <= 1/E[X] + H~ (Chebyshev with the covariance sum dominated by
/// H~). Saturates at 1; `informative` is false when the bound is >= 1.
inline ChebyshevBound chebyshev_bound(const MomentParams& m, SSource source, const Tree* tree = nullptr,
                                      bool force = false) {
    ChebyshevBound out;
    out.raw = LogReal::one() / expected_count(m) + h_tilde(m, source, tree, force);
    out.informative = out.raw < LogReal::one();
    out.value = out.informative ? out.raw.to_double() : 1.0;
    return out;
}

}  // namespace itree
