#ifndef NOMA_ALOHA_FORMAT_HPP
#define NOMA_ALOHA_FORMAT_HPP

#include <cmath>
#include <cstdio>
#include <string>

namespace noma_aloha {

/// Machine outputs use 17 significant digits (round-trip exact); human
/// summaries use 6.
inline constexpr int machine_digits = 17;
inline constexpr int human_digits = 6;

inline std::string format_real(double x, int digits = machine_digits)
{
    if (std::isnan(x))
        return "nan";
    if (std::isinf(x))
        return x > 0 ? "inf" : "-inf";
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.*g", digits, x);
    return buf;
}

} // namespace noma_aloha

#endif
