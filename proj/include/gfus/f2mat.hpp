#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "gfus/common.hpp"

namespace gfus {

// Square matrix over F2, dim <= 4, rows as bitmasks.
struct F2Matrix {
    int dim = 0;
    std::array<std::uint8_t, 4> rows{};

    static F2Matrix identity(int d) {
        F2Matrix m;
        m.dim = d;
        for (int i = 0; i < d; ++i) m.rows[i] = static_cast<std::uint8_t>(1u << i);
        return m;
    }

    bool operator==(const F2Matrix& o) const { return dim == o.dim && rows == o.rows; }

    // row vector * matrix
    std::uint8_t apply(std::uint8_t v) const {
        std::uint8_t out = 0;
        for (int i = 0; i < dim; ++i)
            if ((v >> i) & 1) out ^= rows[i];
        return out;
    }

    friend F2Matrix operator*(const F2Matrix& a, const F2Matrix& b) {
        F2Matrix m;
        m.dim = a.dim;
        for (int i = 0; i < a.dim; ++i) m.rows[i] = b.apply(a.rows[i]);
        return m;
    }

    bool invertible() const {
        std::array<std::uint8_t, 4> r = rows;
        int rank = 0;
        for (int col = 0; col < dim; ++col) {
            int piv = -1;
            for (int i = rank; i < dim; ++i)
                if ((r[i] >> col) & 1) {
                    piv = i;
                    break;
                }
            if (piv < 0) continue;
            std::swap(r[rank], r[piv]);
            for (int i = 0; i < dim; ++i)
                if (i != rank && ((r[i] >> col) & 1)) r[i] ^= r[rank];
            ++rank;
        }
        return rank == dim;
    }

    std::uint32_t key() const {
        std::uint32_t k = 0;
        for (int i = 0; i < dim; ++i) k |= std::uint32_t(rows[i]) << (8 * i);
        return k;
    }
};

inline long f2_matrix_order(const F2Matrix& m) {
    if (!m.invertible()) throw Singular("f2_matrix_order: matrix is singular");
    F2Matrix id = F2Matrix::identity(m.dim), x = m;
    long k = 1;
    while (!(x == id)) {
        x = x * m;
        ++k;
    }
    return k;
}

// All invertible dim x dim matrices over F2, ascending bit-pattern order.
inline std::vector<F2Matrix> gl_elements(int dim) {
    std::vector<F2Matrix> out;
    const std::uint32_t total = 1u << (dim * dim);
    for (std::uint32_t bits = 0; bits < total; ++bits) {
        F2Matrix m;
        m.dim = dim;
        for (int i = 0; i < dim; ++i) m.rows[i] = static_cast<std::uint8_t>((bits >> (i * dim)) & ((1u << dim) - 1));
        if (m.invertible()) out.push_back(m);
    }
    return out;
}

}  // namespace gfus
