#pragma once

#include <optional>
#include <set>
#include <string>

#include "gfus/f16.hpp"
#include "gfus/invariants.hpp"

namespace gfus {

enum class Family {
    Cyclic,       // C_{2^n}
    C_nm,         // C_{2^n} x C_{2^m}
    Dihedral,     // D_{2^n}
    Semidihedral, // SD_{2^n}
    Quaternion,   // Q_{2^n}
    Modular,      // Mod_n, order 2^n
    Wreathed,     // C_{2^n} wr C_2, order 2^{2n+1}
    Q_nm,         // Q_{2^n} x Q_{2^m}
    QC_nm,        // Q_{2^n} x C_{2^m}
    QD_nm,        // Q_{2^n} x D_{2^m}
    QCstar_nm,    // Q_{2^n} * C_{2^m}
    QDstar_nm,    // Q_{2^n} * D_{2^m}
    X_n,
    Y_n,
    Q8wrC2,
    Suz,
};

struct FamilySpec {
    Family family;
    int n = 0;
    int m = 0;

    bool operator==(const FamilySpec&) const = default;

    std::string text() const {
        switch (family) {
            case Family::Cyclic: return "C:" + std::to_string(n);
            case Family::C_nm: return "C:" + std::to_string(n) + "," + std::to_string(m);
            case Family::Dihedral: return "D:" + std::to_string(n);
            case Family::Semidihedral: return "SD:" + std::to_string(n);
            case Family::Quaternion: return "Q:" + std::to_string(n);
            case Family::Modular: return "mod:" + std::to_string(n);
            case Family::Wreathed: return "wr:" + std::to_string(n);
            case Family::Q_nm: return "Q:" + std::to_string(n) + "," + std::to_string(m);
            case Family::QC_nm: return "QC:" + std::to_string(n) + "," + std::to_string(m);
            case Family::QD_nm: return "QD:" + std::to_string(n) + "," + std::to_string(m);
            case Family::QCstar_nm: return "QCstar:" + std::to_string(n) + "," + std::to_string(m);
            case Family::QDstar_nm: return "QDstar:" + std::to_string(n) + "," + std::to_string(m);
            case Family::X_n: return "X:" + std::to_string(n);
            case Family::Y_n: return "Y:" + std::to_string(n);
            case Family::Q8wrC2: return "q8wrc2";
            case Family::Suz: return "suz";
        }
        return "?";
    }
};

namespace detail {

inline long pw2(int e) { return 1L << e; }

inline Word wpow(int gen, long e) { return e ? Word{{gen, e}} : Word{}; }

// Q_{2^n} block starting at generator index base: gens (s, r) with
// s^2 = r^{2^{n-2}}, r^s = r^{-1}. Caller appends names/orders first.
inline void quaternion_block(PcPresentation& p, int base, int n) {
    p.power_rels[base] = wpow(base + 1, pw2(n - 2));
    p.conj_rels[{base, base + 1}] = wpow(base + 1, pw2(n - 1) - 1);
}

}  // namespace detail

inline Group build(const FamilySpec& fs, long order_cap = Caps::defaults().order);

// Carrier {(a,b) in F16^2 : b + b^4 = a^5} with (a,b)(c,d) = (a+c, b+d+a^4 c);
// the Sylow 2-subgroup of PSU3(4). Certified against Higman's constraints.
inline Group suz(long order_cap = Caps::defaults().order) {
    std::vector<std::pair<F16, F16>> carrier;
    int idx[16][16];
    for (auto& row : idx)
        for (auto& v : row) v = -1;
    for (int a = 0; a < 16; ++a)
        for (int b = 0; b < 16; ++b) {
            F16 alpha{static_cast<std::uint8_t>(a)}, beta{static_cast<std::uint8_t>(b)};
            if (beta + beta.pow(4) == alpha.pow(5)) {
                idx[a][b] = static_cast<int>(carrier.size());
                carrier.emplace_back(alpha, beta);
            }
        }
    if (carrier.size() != 64) throw ConstructionInvalid("suz carrier size is not 64");
    const int N = 64;
    std::vector<elt> table(static_cast<size_t>(N) * N);
    for (int i = 0; i < N; ++i)
        for (int j = 0; j < N; ++j) {
            auto [a, b] = carrier[i];
            auto [c, d] = carrier[j];
            F16 x = a + c, y = b + d + a.pow(4) * c;
            int k = idx[x.v][y.v];
            if (k < 0) throw ConstructionInvalid("suz carrier is not closed under the product");
            table[static_cast<size_t>(i) * N + j] = static_cast<elt>(k);
        }
    Group G = Group::from_table(N, std::move(table), Source::carrier, order_cap);
    if (!higman_check(G)) throw ConstructionInvalid("suz fails the Higman certification");
    return G;
}

inline Group build(const FamilySpec& fs, long order_cap) {
    using detail::pw2;
    using detail::wpow;
    auto bad = [&](const char* why) { return ParamOutOfRange(std::string(fs.text()) + ": " + why); };
    PcPresentation p;
    p.name = fs.text();
    switch (fs.family) {
        case Family::Cyclic:
            if (fs.n < 1) throw bad("n >= 1");
            p.gens = {"a"};
            p.rel_orders = {pw2(fs.n)};
            break;
        case Family::C_nm:
            if (fs.n < 1 || fs.m < 1) throw bad("n,m >= 1");
            p.gens = {"a", "b"};
            p.rel_orders = {pw2(fs.n), pw2(fs.m)};
            break;
        case Family::Dihedral:
            if (fs.n < 2) throw bad("n >= 2");
            p.gens = {"s", "r"};
            p.rel_orders = {2, pw2(fs.n - 1)};
            p.conj_rels[{0, 1}] = wpow(1, pw2(fs.n - 1) - 1);
            break;
        case Family::Semidihedral:
            if (fs.n < 4) throw bad("n >= 4");
            p.gens = {"s", "r"};
            p.rel_orders = {2, pw2(fs.n - 1)};
            p.conj_rels[{0, 1}] = wpow(1, pw2(fs.n - 2) - 1);
            break;
        case Family::Quaternion:
            if (fs.n < 3) throw bad("n >= 3");
            p.gens = {"s", "r"};
            p.rel_orders = {2, pw2(fs.n - 1)};
            detail::quaternion_block(p, 0, fs.n);
            break;
        case Family::Modular:
            if (fs.n < 4) throw bad("n >= 4");
            p.gens = {"y", "x"};
            p.rel_orders = {2, pw2(fs.n - 1)};
            p.conj_rels[{0, 1}] = wpow(1, pw2(fs.n - 2) + 1);
            break;
        case Family::Wreathed:
            // n = 1 is allowed and gives D8
            if (fs.n < 1) throw bad("n >= 1");
            p.gens = {"t", "a", "b"};
            p.rel_orders = {2, pw2(fs.n), pw2(fs.n)};
            p.conj_rels[{0, 1}] = {{2, 1}};
            p.conj_rels[{0, 2}] = {{1, 1}};
            break;
        case Family::Q_nm:
            if (fs.n < 3 || fs.m < 3) throw bad("n,m >= 3");
            p.gens = {"s", "r", "u", "w"};
            p.rel_orders = {2, pw2(fs.n - 1), 2, pw2(fs.m - 1)};
            detail::quaternion_block(p, 0, fs.n);
            detail::quaternion_block(p, 2, fs.m);
            break;
        case Family::QC_nm:
            if (fs.n < 3 || fs.m < 1) throw bad("n >= 3, m >= 1");
            p.gens = {"b", "a", "c"};
            p.rel_orders = {2, pw2(fs.n - 1), pw2(fs.m)};
            detail::quaternion_block(p, 0, fs.n);
            break;
        case Family::QD_nm:
            if (fs.n < 3 || fs.m < 2) throw bad("n >= 3, m >= 2");
            p.gens = {"s", "r", "u", "w"};
            p.rel_orders = {2, pw2(fs.n - 1), 2, pw2(fs.m - 1)};
            detail::quaternion_block(p, 0, fs.n);
            p.conj_rels[{2, 3}] = wpow(3, pw2(fs.m - 1) - 1);
            break;
        case Family::QCstar_nm: {
            // Q_{2^n} * C_{2^m}, identifying the central involutions:
            // a^{2^{n-2}} = b^2 = c^{2^{m-1}}, a^b = a^{-1}
            if (fs.n < 3 || fs.m < 2) throw bad("n >= 3, m >= 2");
            long z = pw2(fs.m - 1);
            p.gens = {"b", "a", "c"};
            p.rel_orders = {2, pw2(fs.n - 2), pw2(fs.m)};
            p.power_rels[0] = wpow(2, z);
            p.power_rels[1] = wpow(2, z);
            p.conj_rels[{0, 1}] = {{1, pw2(fs.n - 2) - 1}, {2, z}};
            break;
        }
        case Family::QDstar_nm: {
            // Q_{2^n} * D_{2^m}, identifying the central involutions
            if (fs.n < 3 || fs.m < 3) throw bad("n >= 3, m >= 3");
            if (fs.n != 3) {
                // general case falls back to the explicit central product
                Group Q = build({Family::Quaternion, fs.n}, order_cap);
                Group D = build({Family::Dihedral, fs.m}, order_cap);
                elt zq = Q.power(Q.named_gen("r"), pw2(fs.n - 2));
                elt zd = D.power(D.named_gen("r"), pw2(fs.m - 2));
                return central_product(Q, zq, D, zd, order_cap);
            }
            p.gens = {"b", "a", "u", "w"};
            long z = pw2(fs.m - 2);
            p.rel_orders = {2, 2, 2, pw2(fs.m - 1)};
            p.power_rels[0] = wpow(3, z);            // b^2 = w^{2^{m-2}}
            p.power_rels[1] = wpow(3, z);            // a^2 = w^{2^{m-2}}
            p.conj_rels[{0, 1}] = {{1, 1}, {3, z}};  // a^b = a^{-1}
            p.conj_rels[{2, 3}] = wpow(3, pw2(fs.m - 1) - 1);
            break;
        }
        case Family::X_n:
        case Family::Y_n: {
            if (fs.n < 6) throw bad("n >= 6");
            const bool X = fs.family == Family::X_n;
            p.gens = {"d", "b", "a", "c"};
            p.rel_orders = {2, 2, 4, pw2(fs.n - 4)};
            p.power_rels[0] = X ? wpow(3, pw2(fs.n - 5))               // d^2 = c^{2^{n-5}}
                                : Word{{2, 2}, {3, pw2(fs.n - 5)}};    // d^2 = a^2 c^{2^{n-5}}
            p.power_rels[1] = wpow(2, 2);                              // b^2 = a^2
            p.conj_rels[{1, 2}] = wpow(2, 3);                          // a^b = a^{-1}
            p.conj_rels[{0, 3}] = X ? Word{{2, 2}, {3, pw2(fs.n - 4) - 1}}  // c^d = c^{-1} a^2
                                    : wpow(3, pw2(fs.n - 4) - 1);           // c^d = c^{-1}
            break;
        }
        case Family::Q8wrC2:
            p.gens = {"t", "b1", "a1", "b2", "a2"};
            p.rel_orders = {2, 2, 4, 2, 4};
            p.power_rels[1] = wpow(2, 2);
            p.power_rels[3] = wpow(4, 2);
            p.conj_rels[{0, 1}] = {{3, 1}};
            p.conj_rels[{0, 2}] = {{4, 1}};
            p.conj_rels[{0, 3}] = {{1, 1}};
            p.conj_rels[{0, 4}] = {{2, 1}};
            p.conj_rels[{1, 2}] = wpow(2, 3);
            p.conj_rels[{3, 4}] = wpow(4, 3);
            break;
        case Family::Suz:
            return suz(order_cap);
    }
    return Group::collect(p, order_cap);
}

enum class InvolutionBucket { One, Three, MoreThanThree };

struct ExpectedFingerprint {
    long order = 0;
    InvolutionBucket involutions = InvolutionBucket::One;
    int rank = 1;
    // odd automorphism orders the theorems assert; nullopt = no claim made
    std::optional<std::set<int>> odd_orders;
};

inline InvolutionBucket bucket_of(int count) {
    if (count == 1) return InvolutionBucket::One;
    if (count == 3) return InvolutionBucket::Three;
    return InvolutionBucket::MoreThanThree;
}

inline ExpectedFingerprint expected_fingerprint(const FamilySpec& fs) {
    using B = InvolutionBucket;
    auto mk = [](long order, B b, int rank, std::optional<std::set<int>> odd) {
        return ExpectedFingerprint{order, b, rank, std::move(odd)};
    };
    const long n = fs.n, m = fs.m;
    auto bad = [&](const char* why) { return ParamOutOfRange(std::string(fs.text()) + ": " + why); };
    switch (fs.family) {
        case Family::Cyclic:
            if (n < 1) throw bad("n >= 1");
            return mk(detail::pw2(n), B::One, 1, std::set<int>{});
        case Family::C_nm:
            if (n < 1 || m < 1) throw bad("n,m >= 1");
            return mk(detail::pw2(n + m), B::Three, 2, n == m ? std::set<int>{3} : std::set<int>{});
        case Family::Dihedral:
            if (n < 2) throw bad("n >= 2");
            if (n == 2) return mk(4, B::Three, 2, std::set<int>{3});  // V4 = C_{1,1}
            return mk(detail::pw2(n), B::MoreThanThree, 2, std::set<int>{});
        case Family::Semidihedral:
            if (n < 4) throw bad("n >= 4");
            return mk(detail::pw2(n), B::MoreThanThree, 2, std::set<int>{});
        case Family::Quaternion:
            if (n < 3) throw bad("n >= 3");
            return mk(detail::pw2(n), B::One, 1, n == 3 ? std::set<int>{3} : std::set<int>{});
        case Family::Modular:
            if (n < 4) throw bad("n >= 4");
            return mk(detail::pw2(n), B::Three, 2, std::set<int>{});
        case Family::Wreathed:
            if (n < 1) throw bad("n >= 1");
            if (n == 1) return mk(8, B::MoreThanThree, 2, std::set<int>{});
            return mk(detail::pw2(2 * n + 1), B::MoreThanThree, 2, std::set<int>{});
        case Family::Q_nm:
            if (n < 3 || m < 3) throw bad("n,m >= 3");
            return mk(detail::pw2(n + m), B::Three, 2,
                      (n == 3 || m == 3) ? std::set<int>{3} : std::set<int>{});
        case Family::QC_nm:
            if (n < 3 || m < 1) throw bad("n >= 3, m >= 1");
            return mk(detail::pw2(n + m), B::Three, 2, n == 3 ? std::set<int>{3} : std::set<int>{});
        case Family::QD_nm:
            if (n < 3 || m < 2) throw bad("n >= 3, m >= 2");
            // outside the theorems' rank-2 hypothesis; no odd-order claim
            return mk(detail::pw2(n + m), B::MoreThanThree, 3, std::nullopt);
        case Family::QCstar_nm:
            if (n < 3 || m < 2) throw bad("n >= 3, m >= 2");
            return mk(detail::pw2(n + m - 1), B::MoreThanThree, 2, n == 3 ? std::set<int>{3} : std::set<int>{});
        case Family::QDstar_nm:
            if (n < 3 || m < 3) throw bad("n >= 3, m >= 3");
            if (n == 3 && m == 3) return mk(32, B::MoreThanThree, 2, std::set<int>{3, 5});
            return mk(detail::pw2(n + m - 1), B::MoreThanThree, 2, n == 3 ? std::set<int>{3} : std::set<int>{});
        case Family::X_n:
            if (n < 6) throw bad("n >= 6");
            return mk(detail::pw2(n), B::Three, 2, std::set<int>{3});
        case Family::Y_n:
            if (n < 6) throw bad("n >= 6");
            return mk(detail::pw2(n), B::Three, 2, std::set<int>{3});
        case Family::Q8wrC2:
            return mk(128, B::MoreThanThree, 2, std::set<int>{3});
        case Family::Suz:
            return mk(64, B::Three, 2, std::set<int>{3, 5});
    }
    throw bad("unknown family");
}

}  // namespace gfus
