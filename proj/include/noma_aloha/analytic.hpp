#ifndef NOMA_ALOHA_ANALYTIC_HPP
#define NOMA_ALOHA_ANALYTIC_HPP

// Closed-form model of p-persistent slotted ALOHA with two-level power-domain
// NOMA and SIC at the access point. All functions are pure.

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

#include "types.hpp"

namespace noma_aloha {

/// SINR of the i-th decoded high-power signal (1-based), with the n1 - i
/// stronger-layer peers not yet cancelled and every low-power signal as
/// interference.
inline double sinr_high(const Scenario& s, int i, CountPair pair)
{
    if (i < 1 || i > pair.high)
        throw std::invalid_argument("sinr_high: index " + std::to_string(i) + " outside [1, " +
                                    std::to_string(pair.high) + "]");
    return s.v1() / (s.v1() * (pair.high - i) + s.v2() * pair.low + 1.0);
}

/// SINR of the j-th decoded low-power signal once the high layer is cancelled.
inline double sinr_low(const Scenario& s, int j, CountPair pair)
{
    if (j < 1 || j > pair.low)
        throw std::invalid_argument("sinr_low: index " + std::to_string(j) + " outside [1, " +
                                    std::to_string(pair.low) + "]");
    return s.v2() / (s.v2() * (pair.low - j) + 1.0);
}

/// Membership in the two decodable regions, evaluated straight from the SINR
/// inequalities. The first signal of a layer is the weakest in SINR terms, so
/// checking it decides the whole layer.
inline DecodeFlags decode_feasibility(const Scenario& s, CountPair pair)
{
    require_valid(s, pair);
    DecodeFlags flags;
    flags.high_ok = pair.high >= 1 && sinr_high(s, 1, pair) >= s.gamma();
    flags.low_ok = pair.low >= 1 && sinr_low(s, 1, pair) >= s.gamma() && (pair.high == 0 || flags.high_ok);
    return flags;
}

namespace detail {

// min{cap, (x)+} for a value that is already an integer after flooring.
inline int clamp_count(double x, int cap)
{
    if (!(x > 0.0))
        return 0;
    if (x >= static_cast<double>(cap))
        return cap;
    return static_cast<int>(x);
}

} // namespace detail

/// Upper bounds on the concurrent transmitter counts of each decodable region.
///
/// Region (a), high layer decodes: 1 <= n1 <= max_high_a and n2 <= max_low_a(n1).
/// Region (b), low layer decodes:  1 <= n2 <= max_low_b  and n1 <= max_high_b(n2).
struct RegionBounds {
    int max_high_a = 0;
    int max_low_b = 0;
    std::vector<int> low_limits_a;  // entry k is max n2 for n1 = k + 1
    std::vector<int> high_limits_b; // entry k is max n1 for n2 = k + 1

    int max_low_a(int n1) const
    {
        if (n1 < 1 || n1 > max_high_a)
            throw std::out_of_range("max_low_a: n1 outside [1, max_high_a]");
        return low_limits_a[static_cast<std::size_t>(n1 - 1)];
    }

    int max_high_b(int n2) const
    {
        if (n2 < 1 || n2 > max_low_b)
            throw std::out_of_range("max_high_b: n2 outside [1, max_low_b]");
        return high_limits_b[static_cast<std::size_t>(n2 - 1)];
    }

    bool in_region_a(CountPair pair) const
    {
        return pair.high >= 1 && pair.high <= max_high_a && pair.low >= 0 && pair.low <= max_low_a(pair.high);
    }

    bool in_region_b(CountPair pair) const
    {
        return pair.low >= 1 && pair.low <= max_low_b && pair.high >= 0 && pair.high <= max_high_b(pair.low);
    }
};

/// Floor-form bounds obtained by solving the SINR inequalities for integer
/// counts. They agree with decode_feasibility except on pairs whose SINR lies
/// within rounding of the threshold.
inline RegionBounds region_bounds(const Scenario& s)
{
    const int m = s.users();
    const double v1 = s.v1();
    const double v2 = s.v2();
    const double g = s.gamma();

    RegionBounds b;
    b.max_high_a = detail::clamp_count(std::floor((v1 - g) / (v1 * g)) + 1.0, m);
    b.low_limits_a.reserve(static_cast<std::size_t>(b.max_high_a));
    for (int n1 = 1; n1 <= b.max_high_a; ++n1) {
        const double x = std::floor((v1 - g * (n1 - 1) * v1 - g) / (v2 * g));
        b.low_limits_a.push_back(detail::clamp_count(x, m - n1));
    }

    b.max_low_b = detail::clamp_count(std::floor((v2 - g) / (v2 * g)) + 1.0, m);
    b.high_limits_b.reserve(static_cast<std::size_t>(b.max_low_b));
    for (int n2 = 1; n2 <= b.max_low_b; ++n2) {
        const double x = std::floor((v1 - g * n2 * v2 - g) / (v1 * g)) + 1.0;
        b.high_limits_b.push_back(detail::clamp_count(x, m - n2));
    }
    return b;
}

/// Multinomial probabilities of (n1, n2) among `users` independent contenders,
/// evaluated in log space. Build once per profile when summing many cells.
class CountDistribution {
public:
    CountDistribution(int users, const PowerProfile& prof)
        : users_(users), log_tau1_(std::log(prof.tau1())), log_tau2_(std::log(prof.tau2())),
          log_idle_(std::log(prof.idle())), log_fact_(static_cast<std::size_t>(std::max(users, 0)) + 1, 0.0)
    {
        if (users < 0)
            throw std::invalid_argument("CountDistribution: negative population");
        for (int k = 2; k <= users; ++k)
            log_fact_[static_cast<std::size_t>(k)] = log_fact_[static_cast<std::size_t>(k) - 1] + std::log(k);
    }

    int users() const noexcept { return users_; }

    double operator()(int n1, int n2) const
    {
        const int rest = users_ - n1 - n2;
        if (n1 < 0 || n2 < 0 || rest < 0)
            return 0.0;
        double log_p = log_fact_[idx(users_)] - log_fact_[idx(n1)] - log_fact_[idx(n2)] - log_fact_[idx(rest)];
        if (!add_power(log_p, n1, log_tau1_) || !add_power(log_p, n2, log_tau2_) ||
            !add_power(log_p, rest, log_idle_))
            return 0.0;
        return std::exp(log_p);
    }

private:
    static std::size_t idx(int k) { return static_cast<std::size_t>(k); }

    // x^0 is 1 even for x = 0; returns false when the factor is exactly zero.
    static bool add_power(double& acc, int exponent, double log_base)
    {
        if (exponent == 0)
            return true;
        if (std::isinf(log_base))
            return false;
        acc += exponent * log_base;
        return true;
    }

    int users_;
    double log_tau1_;
    double log_tau2_;
    double log_idle_;
    std::vector<double> log_fact_;
};

/// P(n1 high and n2 low transmitters among all m users).
inline double joint_pmf(const Scenario& s, const PowerProfile& prof, CountPair pair)
{
    require_valid(s, pair);
    return CountDistribution(s.users(), prof)(pair.high, pair.low);
}

/// Probability that a tagged user transmits and is decoded.
inline double success_probability(const Scenario& s, const PowerProfile& prof)
{
    const RegionBounds b = region_bounds(s);
    // The other m - 1 users form the interference population.
    const CountDistribution others(s.users() - 1, prof);

    double given_high = 0.0;
    for (int n1 = 1; n1 <= b.max_high_a; ++n1)
        for (int n2 = 0; n2 <= b.max_low_a(n1); ++n2)
            given_high += others(n1 - 1, n2);

    double given_low = 0.0;
    for (int n2 = 1; n2 <= b.max_low_b; ++n2)
        for (int n1 = 0; n1 <= b.max_high_b(n2); ++n1)
            given_low += others(n1, n2 - 1);

    return prof.tau1() * given_high + prof.tau2() * given_low;
}

namespace detail {

inline double high_layer_rate(const Scenario& s, CountPair pair)
{
    double rate = 0.0;
    for (int i = 1; i <= pair.high; ++i)
        rate += std::log2(1.0 + s.v1() / ((i - 1) * s.v1() + pair.low * s.v2() + 1.0));
    return rate;
}

inline double low_layer_rate(const Scenario& s, CountPair pair)
{
    double rate = 0.0;
    for (int j = 1; j <= pair.low; ++j)
        rate += std::log2(1.0 + s.v2() / ((j - 1) * s.v2() + 1.0));
    return rate;
}

} // namespace detail

/// Sum spectral efficiency of the high-power layer given it decodes, in bits
/// per slot per unit bandwidth.
inline double cond_sum_rate_high(const Scenario& s, CountPair pair)
{
    if (!decode_feasibility(s, pair).high_ok)
        throw std::domain_error("cond_sum_rate_high: pair outside the high-layer decodable region");
    return detail::high_layer_rate(s, pair);
}

/// Sum spectral efficiency of the low-power layer given it decodes.
inline double cond_sum_rate_low(const Scenario& s, CountPair pair)
{
    if (!decode_feasibility(s, pair).low_ok)
        throw std::domain_error("cond_sum_rate_low: pair outside the low-layer decodable region");
    return detail::low_layer_rate(s, pair);
}

/// Long-term average system throughput. The high-layer rate counts whenever
/// the high layer decodes, even if the low layer then fails.
inline double average_throughput(const Scenario& s, const PowerProfile& prof)
{
    const RegionBounds b = region_bounds(s);
    const CountDistribution all(s.users(), prof);

    double th = 0.0;
    for (int n1 = 1; n1 <= b.max_high_a; ++n1)
        for (int n2 = 0; n2 <= b.max_low_a(n1); ++n2)
            th += detail::high_layer_rate(s, {n1, n2}) * all(n1, n2);
    for (int n2 = 1; n2 <= b.max_low_b; ++n2)
        for (int n1 = 0; n1 <= b.max_high_b(n2); ++n1)
            th += detail::low_layer_rate(s, {n1, n2}) * all(n1, n2);
    return th;
}

// Conventional p-persistent ALOHA without NOMA: a slot succeeds only when
// exactly one user transmits, at SNR v1.

inline double baseline_success(const Scenario& s, double p)
{
    if (!(p >= 0.0 && p <= 1.0))
        throw ConfigError("p must be in [0, 1]");
    return p * std::pow(1.0 - p, s.users() - 1);
}

inline double baseline_throughput(const Scenario& s, double p)
{
    return std::log2(1.0 + s.v1()) * baseline_success(s, p);
}

struct BaselineOptimum {
    double p_star = 0.0;
    double th_star = 0.0;
};

inline BaselineOptimum baseline_optimum(const Scenario& s)
{
    const double p = 1.0 / s.users();
    return {p, baseline_throughput(s, p)};
}

} // namespace noma_aloha

#endif
