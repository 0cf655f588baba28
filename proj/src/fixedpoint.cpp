#include "qmaps/fixedpoint.hpp"

#include <stdexcept>

namespace qmaps {

FixedPointPhase FixedPointPhase::from_dyadic(std::int64_t num, int log2_den) {
    if (log2_den < 0 || log2_den > 127)
        throw std::invalid_argument("from_dyadic: log2_den must be in [0, 127]");
    FixedPointPhase p;
    if (log2_den == 0) return p;  // any integer is 0 turns mod 1
    // num mod 2^log2_den, as an unsigned residue (two's complement).
    const auto u = static_cast<unsigned __int128>(static_cast<std::uint64_t>(num)) |
                   (num < 0 ? (~static_cast<unsigned __int128>(0) << 64) : 0);
    const unsigned __int128 den_mask =
        ~static_cast<unsigned __int128>(0) >> (128 - log2_den);
    p.v_ = (u & den_mask) << (128 - log2_den);
    return p;
}

double FixedPointPhase::to_radians() const {
    constexpr double two_pi = 6.28318530717958647692528676655900577;
    const double t = to_turns();
    return two_pi * (t > 0.5 ? t - 1.0 : t);
}

std::string FixedPointPhase::to_hex() const {
    static const char* digits = "0123456789abcdef";
    std::string s(32, '0');
    unsigned __int128 v = v_;
    for (int i = 31; i >= 0; --i) {
        s[static_cast<std::size_t>(i)] = digits[static_cast<unsigned>(v & 0xf)];
        v >>= 4;
    }
    return s;
}

}  // namespace qmaps
