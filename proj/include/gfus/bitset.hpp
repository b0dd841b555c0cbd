#pragma once

#include <cstdint>
#include <functional>
#include <vector>

#include "gfus/common.hpp"

namespace gfus {

// Dynamic bitset over a group's carrier. Element sets are the working
// representation for subgroups, cosets and orbits.
class ElementSet {
  public:
    ElementSet() : n_(0) {}
    explicit ElementSet(int n) : n_(n), w_((n + 63) / 64, 0) {}

    int universe() const { return n_; }

    bool test(int i) const { return (w_[i >> 6] >> (i & 63)) & 1; }
    void set(int i) { w_[i >> 6] |= std::uint64_t(1) << (i & 63); }
    void reset(int i) { w_[i >> 6] &= ~(std::uint64_t(1) << (i & 63)); }

    int count() const {
        int c = 0;
        for (auto x : w_) c += __builtin_popcountll(x);
        return c;
    }
    bool empty() const {
        for (auto x : w_)
            if (x) return false;
        return true;
    }

    bool operator==(const ElementSet& o) const { return n_ == o.n_ && w_ == o.w_; }
    bool operator!=(const ElementSet& o) const { return !(*this == o); }
    // lexicographic by word; gives a canonical order on subgroups of one group
    bool operator<(const ElementSet& o) const { return w_ < o.w_; }

    ElementSet& operator&=(const ElementSet& o) {
        for (size_t i = 0; i < w_.size(); ++i) w_[i] &= o.w_[i];
        return *this;
    }
    ElementSet& operator|=(const ElementSet& o) {
        for (size_t i = 0; i < w_.size(); ++i) w_[i] |= o.w_[i];
        return *this;
    }

    bool contains(const ElementSet& o) const {
        for (size_t i = 0; i < w_.size(); ++i)
            if (o.w_[i] & ~w_[i]) return false;
        return true;
    }

    std::vector<elt> elements() const {
        std::vector<elt> out;
        out.reserve(count());
        for (size_t wi = 0; wi < w_.size(); ++wi) {
            std::uint64_t x = w_[wi];
            while (x) {
                int b = __builtin_ctzll(x);
                out.push_back(static_cast<elt>(wi * 64 + b));
                x &= x - 1;
            }
        }
        return out;
    }

    std::size_t hash() const {
        std::size_t h = std::hash<int>()(n_);
        for (auto x : w_) h ^= std::hash<std::uint64_t>()(x) + 0x9e3779b97f4a7c15ull + (h << 6) + (h >> 2);
        return h;
    }

  private:
    int n_;
    std::vector<std::uint64_t> w_;
};

struct ElementSetHash {
    std::size_t operator()(const ElementSet& s) const { return s.hash(); }
};

}  // namespace gfus
