#pragma once

#include <cmath>
#include <cstdint>
#include <string>

namespace qmaps {

// Phase in turns, modulo 1, held as a 128-bit fixed-point fraction
// (value = v / 2^128, v in [0, 2^128)).  Addition and multiplication by
// integers and powers of two wrap around exactly, so collected gate phases
// beta * 2^k mod 1 keep full precision even when k is far beyond the double
// mantissa (plain doubles lose all phase information once beta * 2^k has no
// fractional bits left, which happens already at modest register sizes).
// Representation error on entry from a double is at most 2^-128; a
// subsequent shift by k bits amplifies it to at most 2^(k-128).
class FixedPointPhase {
public:
    FixedPointPhase() : v_(0) {}

    // Fraction of x modulo 1.  Every double maps to its exact image
    // (truncated below 2^-128).
    static FixedPointPhase from_double(double x) {
        double frac = x - std::floor(x);
        if (frac >= 1.0) frac = 0.0;  // floor rounding at the boundary
        FixedPointPhase p;
        if (frac == 0.0) return p;
        int exp = 0;
        const double mant = std::frexp(frac, &exp);  // frac = mant * 2^exp
        const auto m = static_cast<unsigned __int128>(
            static_cast<std::uint64_t>(std::ldexp(mant, 53)));
        const int shift = 128 + exp - 53;  // v = m * 2^shift
        if (shift >= 0)
            p.v_ = m << shift;  // frac < 1 guarantees no overflow
        else if (shift > -128)
            p.v_ = m >> (-shift);
        return p;
    }

    // num / 2^log2_den mod 1, exact for any sign of num; log2_den <= 127.
    static FixedPointPhase from_dyadic(std::int64_t num, int log2_den);

    FixedPointPhase& operator+=(const FixedPointPhase& o) {
        v_ += o.v_;  // wraps mod 2^128
        return *this;
    }

    // this * 2^k mod 1 (k >= 128 gives exactly 0: the true product is an
    // integer number of turns).
    FixedPointPhase shifted(unsigned k) const {
        FixedPointPhase p;
        p.v_ = (k >= 128) ? 0 : (v_ << k);
        return p;
    }

    FixedPointPhase times(std::uint64_t m) const {
        FixedPointPhase p;
        p.v_ = v_ * static_cast<unsigned __int128>(m);
        return p;
    }

    // Nearest double in [0, 1).
    double to_turns() const {
        const auto hi = static_cast<std::uint64_t>(v_ >> 64);
        const auto lo = static_cast<std::uint64_t>(v_);
        return static_cast<double>(hi) * 0x1.0p-64 + static_cast<double>(lo) * 0x1.0p-128;
    }

    // Radians in (-pi, pi].
    double to_radians() const;

    // 32 hex digits, most significant first.
    std::string to_hex() const;

    bool operator==(const FixedPointPhase& o) const { return v_ == o.v_; }

    unsigned __int128 raw() const { return v_; }

private:
    unsigned __int128 v_;
};

}  // namespace qmaps
