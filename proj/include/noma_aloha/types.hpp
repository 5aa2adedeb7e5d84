#ifndef NOMA_ALOHA_TYPES_HPP
#define NOMA_ALOHA_TYPES_HPP

#include <cmath>
#include <stdexcept>
#include <string>

namespace noma_aloha {

/// Raised when a value violates the invariants of a domain type.
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Raised when an internal consistency check fails at run time.
class InvariantError : public std::logic_error {
public:
    using std::logic_error::logic_error;
};

/// Static network parameters. Powers are received SNRs: noise power is 1.
class Scenario {
public:
    Scenario(int users, double v1, double v2, double gamma)
        : users_(users), v1_(v1), v2_(v2), gamma_(gamma)
    {
        if (users < 1)
            throw ConfigError("m must be >= 1");
        if (!(v2 > 0.0) || !std::isfinite(v2))
            throw ConfigError("v2 must be a finite value > 0");
        if (!(v1 > v2) || !std::isfinite(v1))
            throw ConfigError("v1 must be a finite value > v2");
        if (!(gamma > 0.0) || !std::isfinite(gamma))
            throw ConfigError("gamma must be a finite value > 0");
    }

    /// Defaults used throughout the numerical study: m=10, v1=4, v2=1.5, gamma=1.5.
    static Scenario defaults() { return {10, 4.0, 1.5, 1.5}; }

    int users() const noexcept { return users_; }
    double v1() const noexcept { return v1_; }
    double v2() const noexcept { return v2_; }
    double gamma() const noexcept { return gamma_; }

    Scenario with_users(int users) const { return {users, v1_, v2_, gamma_}; }
    Scenario with_gamma(double gamma) const { return {users_, v1_, v2_, gamma}; }

    friend bool operator==(const Scenario&, const Scenario&) = default;

private:
    int users_;
    double v1_;
    double v2_;
    double gamma_;
};

/// Per-slot probabilities of transmitting in high and low power mode.
class PowerProfile {
public:
    /// Sums within this slack of 1 are accepted so grid points such as
    /// 0.29 + 0.71 are not rejected for rounding.
    static constexpr double sum_slack = 1e-12;

    PowerProfile(double tau1, double tau2) : tau1_(tau1), tau2_(tau2)
    {
        if (!(tau1 >= 0.0 && tau1 <= 1.0))
            throw ConfigError("tau1 must be in [0, 1]");
        if (!(tau2 >= 0.0 && tau2 <= 1.0))
            throw ConfigError("tau2 must be in [0, 1]");
        if (tau1 + tau2 > 1.0 + sum_slack)
            throw ConfigError("tau1 + tau2 must not exceed 1");
    }

    double tau1() const noexcept { return tau1_; }
    double tau2() const noexcept { return tau2_; }
    double transmit() const noexcept { return tau1_ + tau2_; }
    double idle() const noexcept
    {
        const double q = 1.0 - tau1_ - tau2_;
        return q > 0.0 ? q : 0.0;
    }

    friend bool operator==(const PowerProfile&, const PowerProfile&) = default;

private:
    double tau1_;
    double tau2_;
};

/// Numbers of concurrent high-power and low-power transmitters in a slot.
struct CountPair {
    int high = 0;
    int low = 0;

    int total() const noexcept { return high + low; }
    friend bool operator==(const CountPair&, const CountPair&) = default;
};

inline void require_valid(const Scenario& s, CountPair pair)
{
    if (pair.high < 0 || pair.low < 0)
        throw ConfigError("transmitter counts must be nonnegative");
    if (pair.total() > s.users())
        throw ConfigError("n1 + n2 must not exceed m (got " + std::to_string(pair.total()) + " > " +
                          std::to_string(s.users()) + ")");
}

/// Whether each power layer decodes completely under SIC.
struct DecodeFlags {
    bool high_ok = false;
    bool low_ok = false;

    friend bool operator==(const DecodeFlags&, const DecodeFlags&) = default;
};

} // namespace noma_aloha

#endif
