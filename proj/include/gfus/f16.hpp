#pragma once

#include <array>
#include <cstdint>

namespace gfus {

// GF(16) as F2[t]/(t^4+t+1), elements stored as 4-bit masks. The modulus is
// fixed so serialized values are bit-exact across runs.
struct F16 {
    std::uint8_t v = 0;

    friend F16 operator+(F16 a, F16 b) { return F16{static_cast<std::uint8_t>(a.v ^ b.v)}; }
    friend bool operator==(F16 a, F16 b) { return a.v == b.v; }
    friend bool operator!=(F16 a, F16 b) { return a.v != b.v; }

    friend F16 operator*(F16 a, F16 b) {
        std::uint16_t acc = 0, x = a.v;
        for (int i = 0; i < 4; ++i)
            if ((b.v >> i) & 1) acc ^= x << i;
        for (int i = 7; i >= 4; --i)
            if ((acc >> i) & 1) acc ^= 0b10011u << (i - 4);
        return F16{static_cast<std::uint8_t>(acc & 0xf)};
    }

    F16 pow(int e) const {
        F16 r{1}, b = *this;
        for (; e > 0; e >>= 1, b = b * b)
            if (e & 1) r = r * b;
        return r;
    }

    // Frobenius x -> x^4 generates Gal(F16/F4)
    F16 frob2() const { return pow(4); }
};

}  // namespace gfus
