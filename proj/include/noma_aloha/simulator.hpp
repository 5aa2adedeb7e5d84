#ifndef NOMA_ALOHA_SIMULATOR_HPP
#define NOMA_ALOHA_SIMULATOR_HPP

// Slot-level Monte Carlo of p-persistent slotted ALOHA with two-level NOMA.

#include <cmath>
#include <cstdint>
#include <future>
#include <ostream>
#include <stdexcept>
#include <string>
#include <vector>

#include "analytic.hpp"
#include "format.hpp"
#include "random.hpp"
#include "types.hpp"

namespace noma_aloha {

enum class UserAction : std::uint8_t { Idle, High, Low };

enum class PowerLevel : std::uint8_t { High, Low };

/// Transmit power that makes the received power exactly v1 or v2 (channel inversion).
inline double tx_power_for(PowerLevel level, double gain, const Scenario& s)
{
    if (!(gain > 0.0))
        throw std::domain_error("tx_power_for: channel gain must be > 0");
    return (level == PowerLevel::High ? s.v1() : s.v2()) / gain;
}

/// Distance-based path loss with Rayleigh fading for users uniformly placed in
/// a disk around the access point: g = L0 * r^-alpha * |h|^2. Disabled by
/// default; the decoder only ever sees the inverted powers.
struct ChannelModel {
    bool enabled = false;
    double radius = 100.0;
    double reference_loss = 1.0;
    double path_loss_exponent = 3.0;

    void validate() const
    {
        if (!(radius > 0.0))
            throw ConfigError("channel radius must be > 0");
        if (!(reference_loss > 0.0))
            throw ConfigError("channel reference loss must be > 0");
        if (!(path_loss_exponent > 0.0))
            throw ConfigError("path loss exponent must be > 0");
    }

    double draw_gain(CounterStream& rng) const
    {
        const double r = radius * std::sqrt(rng.uniform_open());
        const double fading = -std::log(rng.uniform_open());
        return reference_loss * std::pow(r, -path_loss_exponent) * fading;
    }
};

struct SlotOutcome {
    int n1 = 0;
    int n2 = 0;
    bool high_decoded = false;
    bool low_decoded = false;
    double sum_rate = 0.0;
    std::vector<bool> per_user_success; // decoding order: high layer first
};

/// Sequential SIC at the access point: high-power signals first, each decoded
/// against the not-yet-cancelled signals; low-power signals only once the
/// whole high layer is cancelled. Decoding stops at the first failure.
inline SlotOutcome sic_decode(const Scenario& s, int n1, int n2)
{
    const CountPair pair{n1, n2};
    require_valid(s, pair);

    SlotOutcome out;
    out.n1 = n1;
    out.n2 = n2;
    out.per_user_success.assign(static_cast<std::size_t>(n1 + n2), false);

    int decoded_high = 0;
    for (int i = 1; i <= n1; ++i) {
        const double sinr = sinr_high(s, i, pair);
        if (sinr < s.gamma())
            break;
        out.sum_rate += std::log2(1.0 + sinr);
        out.per_user_success[static_cast<std::size_t>(i - 1)] = true;
        ++decoded_high;
    }
    out.high_decoded = n1 >= 1 && decoded_high == n1;
    if (decoded_high < n1)
        return out;

    int decoded_low = 0;
    for (int j = 1; j <= n2; ++j) {
        const double sinr = sinr_low(s, j, pair);
        if (sinr < s.gamma())
            break;
        out.sum_rate += std::log2(1.0 + sinr);
        out.per_user_success[static_cast<std::size_t>(n1 + j - 1)] = true;
        ++decoded_low;
    }
    out.low_decoded = n2 >= 1 && decoded_low == n2;
    return out;
}

struct SimConfig {
    std::uint64_t slots = 1'000'000;
    std::uint64_t seed = 1;
    int replications = 10;
    ChannelModel channel;
    /// Per-slot CSV trace; forces replications to run one after another.
    std::ostream* trace = nullptr;
    bool parallel = true;

    void validate() const
    {
        if (slots < 1)
            throw ConfigError("slots must be >= 1");
        if (slots >= (std::uint64_t{1} << 32))
            throw ConfigError("slots must be < 2^32");
        if (replications < 1)
            throw ConfigError("replications must be >= 1");
        if (static_cast<std::uint64_t>(replications) * 2 >= CounterStream::max_streams)
            throw ConfigError("too many replications");
        channel.validate();
    }
};

inline constexpr const char* trace_header = "replication,slot,n1,n2,high_decoded,low_decoded,sum_rate";

/// Monte Carlo estimates. Standard errors are the sample standard deviation
/// of the per-replication means over sqrt(replications); with a single
/// replication they fall back to the per-slot standard deviation over sqrt(slots).
struct SimStats {
    double p_success_hat = 0.0;     // tagged user (user 0)
    double stderr_p = 0.0;
    double p_success_all_hat = 0.0; // average over all users
    double stderr_p_all = 0.0;
    double throughput_hat = 0.0;
    double stderr_th = 0.0;
    std::uint64_t slots_run = 0;
    int users = 0;
    std::vector<std::uint64_t> pair_counts; // (m + 1) x (m + 1), row n1, column n2

    std::uint64_t pair_count(int n1, int n2) const
    {
        return pair_counts.at(static_cast<std::size_t>(n1) * static_cast<std::size_t>(users + 1) +
                              static_cast<std::size_t>(n2));
    }
};

namespace detail {

struct Tally {
    std::uint64_t tagged_successes = 0;
    std::vector<std::uint64_t> pair_counts;
};

inline void check_inversion(const Scenario& s, PowerLevel level, const ChannelModel& ch, CounterStream& rng)
{
    const double gain = ch.draw_gain(rng);
    const double target = level == PowerLevel::High ? s.v1() : s.v2();
    const double received = tx_power_for(level, gain, s) * gain;
    const double ulp = std::nextafter(target, INFINITY) - target;
    if (std::abs(received - target) > ulp)
        throw InvariantError("channel inversion missed the target received power");
}

inline Tally run_replication(const Scenario& s, const PowerProfile& prof, const SimConfig& cfg, int rep,
                             const std::vector<SlotOutcome>& outcomes)
{
    const int m = s.users();
    const auto width = static_cast<std::size_t>(m + 1);
    CounterStream actions(cfg.seed, 2 * static_cast<std::uint64_t>(rep));
    CounterStream channel(cfg.seed, 2 * static_cast<std::uint64_t>(rep) + 1);

    const double p_high = prof.tau1();
    const double p_any = prof.tau1() + prof.tau2();

    Tally t;
    t.pair_counts.assign(width * width, 0);
    for (std::uint64_t slot = 0; slot < cfg.slots; ++slot) {
        int n1 = 0;
        int n2 = 0;
        UserAction tagged = UserAction::Idle;
        for (int u = 0; u < m; ++u) {
            const double x = actions.uniform();
            const UserAction a = x < p_high ? UserAction::High : (x < p_any ? UserAction::Low : UserAction::Idle);
            if (a == UserAction::High)
                ++n1;
            else if (a == UserAction::Low)
                ++n2;
            if (u == 0)
                tagged = a;
            if (cfg.channel.enabled && a != UserAction::Idle)
                check_inversion(s, a == UserAction::High ? PowerLevel::High : PowerLevel::Low, cfg.channel,
                                channel);
        }

        const std::size_t cell = static_cast<std::size_t>(n1) * width + static_cast<std::size_t>(n2);
        const SlotOutcome& o = outcomes[cell];
        ++t.pair_counts[cell];
        if ((tagged == UserAction::High && o.high_decoded) || (tagged == UserAction::Low && o.low_decoded))
            ++t.tagged_successes;

        if (cfg.trace != nullptr)
            *cfg.trace << rep << ',' << slot << ',' << n1 << ',' << n2 << ','
                       << (o.high_decoded ? "true" : "false") << ',' << (o.low_decoded ? "true" : "false") << ','
                       << format_real(o.sum_rate) << '\n';
    }
    return t;
}

// Per-slot quantity that depends only on (n1, n2): mean and mean square over
// the slots of one replication, weighted by pair frequencies. A constant
// quantity therefore averages to itself exactly.
struct CellMoments {
    double mean = 0.0;
    double mean_sq = 0.0;
};

template <class Value>
CellMoments cell_moments(const std::vector<std::uint64_t>& counts, const std::vector<SlotOutcome>& outcomes,
                         double slots, Value value)
{
    CellMoments cm;
    for (std::size_t c = 0; c < counts.size(); ++c) {
        if (counts[c] == 0)
            continue;
        const double w = static_cast<double>(counts[c]) / slots;
        const double x = value(outcomes[c]);
        cm.mean += w * x;
        cm.mean_sq += w * x * x;
    }
    return cm;
}

struct MeanAndError {
    double mean = 0.0;
    double stderr_ = 0.0;
};

inline MeanAndError across_replications(const std::vector<double>& means)
{
    const double r = static_cast<double>(means.size());
    double sum = 0.0;
    for (double x : means)
        sum += x;
    const double mean = sum / r;
    double ss = 0.0;
    for (double x : means)
        ss += (x - mean) * (x - mean);
    return {mean, std::sqrt(ss / (r - 1.0) / r)};
}

inline MeanAndError within_replication(CellMoments cm, double n)
{
    if (n < 2.0)
        return {cm.mean, 0.0};
    const double var = std::max(0.0, (cm.mean_sq - cm.mean * cm.mean) * n / (n - 1.0));
    return {cm.mean, std::sqrt(var / n)};
}

} // namespace detail

/// Runs `cfg.replications` independent replications of `cfg.slots` slots.
/// Replication r draws user actions from stream 2r and channel gains from
/// stream 2r + 1 of the counter-based generator keyed by `cfg.seed`, so the
/// result is identical whether replications run serially or in parallel.
inline SimStats run_simulation(const Scenario& s, const PowerProfile& prof, const SimConfig& cfg)
{
    cfg.validate();
    const int m = s.users();
    const auto width = static_cast<std::size_t>(m + 1);

    std::vector<SlotOutcome> outcomes(width * width);
    for (int n1 = 0; n1 <= m; ++n1)
        for (int n2 = 0; n1 + n2 <= m; ++n2)
            outcomes[static_cast<std::size_t>(n1) * width + static_cast<std::size_t>(n2)] = sic_decode(s, n1, n2);

    std::vector<detail::Tally> tallies(static_cast<std::size_t>(cfg.replications));
    if (cfg.parallel && cfg.trace == nullptr && cfg.replications > 1) {
        std::vector<std::future<detail::Tally>> jobs;
        for (int r = 0; r < cfg.replications; ++r)
            jobs.push_back(std::async(std::launch::async, [&, r] {
                return detail::run_replication(s, prof, cfg, r, outcomes);
            }));
        for (std::size_t r = 0; r < jobs.size(); ++r)
            tallies[r] = jobs[r].get();
    } else {
        if (cfg.trace != nullptr)
            *cfg.trace << trace_header << '\n';
        for (int r = 0; r < cfg.replications; ++r)
            tallies[static_cast<std::size_t>(r)] = detail::run_replication(s, prof, cfg, r, outcomes);
    }

    SimStats st;
    st.users = m;
    st.slots_run = cfg.slots * static_cast<std::uint64_t>(cfg.replications);
    st.pair_counts.assign(width * width, 0);
    for (const auto& t : tallies)
        for (std::size_t c = 0; c < st.pair_counts.size(); ++c)
            st.pair_counts[c] += t.pair_counts[c];

    const double n = static_cast<double>(cfg.slots);
    auto all_users = [m](const SlotOutcome& o) {
        return ((o.high_decoded ? o.n1 : 0) + (o.low_decoded ? o.n2 : 0)) / static_cast<double>(m);
    };
    auto rate = [](const SlotOutcome& o) { return o.sum_rate; };

    detail::MeanAndError p, all, th;
    if (cfg.replications == 1) {
        const auto& t = tallies.front();
        const double ps = static_cast<double>(t.tagged_successes) / n;
        p = detail::within_replication({ps, ps}, n);
        all = detail::within_replication(detail::cell_moments(t.pair_counts, outcomes, n, all_users), n);
        th = detail::within_replication(detail::cell_moments(t.pair_counts, outcomes, n, rate), n);
    } else {
        std::vector<double> pm, am, tm;
        for (const auto& t : tallies) {
            pm.push_back(static_cast<double>(t.tagged_successes) / n);
            am.push_back(detail::cell_moments(t.pair_counts, outcomes, n, all_users).mean);
            tm.push_back(detail::cell_moments(t.pair_counts, outcomes, n, rate).mean);
        }
        p = detail::across_replications(pm);
        all = detail::across_replications(am);
        th = detail::across_replications(tm);
    }

    st.p_success_hat = p.mean;
    st.stderr_p = p.stderr_;
    st.p_success_all_hat = all.mean;
    st.stderr_p_all = all.stderr_;
    st.throughput_hat = th.mean;
    st.stderr_th = th.stderr_;
    return st;
}

} // namespace noma_aloha

#endif
