#pragma once

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <string>
#include <vector>

#include "gfus/subgroup.hpp"

namespace gfus {

inline Subgroup center(const Group& G) {
    Subgroup Z;
    Z.parent = &G;
    Z.members = ElementSet(G.order());
    for (int x = 0; x < G.order(); ++x) {
        bool ok = true;
        for (int y = 0; y < G.order() && ok; ++y)
            if (G.mul(static_cast<elt>(x), static_cast<elt>(y)) != G.mul(static_cast<elt>(y), static_cast<elt>(x)))
                ok = false;
        if (ok) Z.members.set(x);
    }
    Z.gens = subgroup_from_set(G, Z.members).gens;
    return Z;
}

inline Subgroup derived(const Group& G) {
    std::vector<elt> comms;
    for (int a = 0; a < G.order(); ++a)
        for (int b = 0; b < G.order(); ++b) comms.push_back(G.comm(static_cast<elt>(a), static_cast<elt>(b)));
    std::sort(comms.begin(), comms.end());
    comms.erase(std::unique(comms.begin(), comms.end()), comms.end());
    return subgroup_generated(G, comms);
}

// For p-groups, Phi(G) = G' U_1(G).
inline Subgroup frattini(const Group& G) {
    const int p = G.prime();
    std::vector<elt> gens;
    for (int a = 0; a < G.order(); ++a)
        for (int b = 0; b < G.order(); ++b) gens.push_back(G.comm(static_cast<elt>(a), static_cast<elt>(b)));
    for (int a = 0; a < G.order(); ++a) gens.push_back(G.power(static_cast<elt>(a), p));
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    return subgroup_generated(G, gens);
}

inline Subgroup omega(const Group& G, int k) {
    const int p = G.prime();
    long pk = 1;
    for (int i = 0; i < k; ++i) pk *= p;
    std::vector<elt> gens;
    for (int x = 0; x < G.order(); ++x)
        if (G.power(static_cast<elt>(x), pk) == 0) gens.push_back(static_cast<elt>(x));
    return subgroup_generated(G, gens);
}

inline Subgroup agemo(const Group& G, int k) {
    const int p = G.prime();
    long pk = 1;
    for (int i = 0; i < k; ++i) pk *= p;
    std::vector<elt> gens;
    for (int x = 0; x < G.order(); ++x) gens.push_back(G.power(static_cast<elt>(x), pk));
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    return subgroup_generated(G, gens);
}

inline int count_involutions(const Group& G) {
    int c = 0;
    for (int x = 1; x < G.order(); ++x)
        if (G.elt_order(static_cast<elt>(x)) == 2) ++c;
    return c;
}

inline int exponent(const Group& G) {
    long e = 1;
    for (int x = 0; x < G.order(); ++x) e = std::lcm(e, static_cast<long>(G.elt_order(static_cast<elt>(x))));
    return static_cast<int>(e);
}

inline int nilpotency_class(const Group& G) {
    if (G.order() == 1) return 0;
    ElementSet gamma = G.full_set();
    int c = 0;
    while (gamma.count() > 1) {
        std::vector<elt> comms;
        for (elt a : gamma.elements())
            for (int b = 0; b < G.order(); ++b) comms.push_back(G.comm(a, static_cast<elt>(b)));
        std::sort(comms.begin(), comms.end());
        comms.erase(std::unique(comms.begin(), comms.end()), comms.end());
        ElementSet next = closure_set(G, comms);
        if (next == gamma) throw GroupError("group is not nilpotent");
        gamma = next;
        ++c;
    }
    return c;
}

// Largest r with an elementary abelian subgroup of order p^r, by backtracking
// over commuting order-p elements. No subgroup enumeration, so this works at
// orders where all_subgroups is capped.
inline int p_rank(const Group& G, int p = 0) {
    if (p == 0) p = G.prime();
    if (G.order() == 1) return 0;
    std::vector<elt> ps;
    for (int x = 1; x < G.order(); ++x)
        if (G.elt_order(static_cast<elt>(x)) == p) ps.push_back(static_cast<elt>(x));
    if (ps.empty()) return 0;
    int best = 1;
    ElementSet cur(G.order());
    cur.set(0);
    auto logp = [&](long n) {
        int k = 0;
        while (n > 1) {
            n /= p;
            ++k;
        }
        return k;
    };
    // candidates must commute with all chosen generators and lie outside the
    // current closure
    auto rec = [&](auto&& self, const ElementSet& span, int rank, const std::vector<elt>& cands) -> void {
        best = std::max(best, rank);
        if (cands.empty()) return;
        if (rank + static_cast<int>(cands.size()) <= best) return;
        // when the remaining candidates pairwise commute they span an
        // elementary abelian extension; no branching needed
        bool clique = true;
        for (size_t i = 0; i < cands.size() && clique; ++i)
            for (size_t j = i + 1; j < cands.size(); ++j)
                if (G.mul(cands[i], cands[j]) != G.mul(cands[j], cands[i])) {
                    clique = false;
                    break;
                }
        if (clique) {
            std::vector<elt> seed = span.elements();
            seed.insert(seed.end(), cands.begin(), cands.end());
            ElementSet cl = closure_set(G, seed);
            best = std::max(best, rank + logp(cl.count() / span.count()));
            return;
        }
        for (size_t ci = 0; ci < cands.size(); ++ci) {
            elt x = cands[ci];
            if (span.test(x)) continue;
            // extend span by x (cosets; the span stays abelian)
            ElementSet nspan = span;
            elt xp = x;
            for (int t = 1; t < p; ++t) {
                for (elt s : span.elements()) nspan.set(G.mul(s, xp));
                xp = G.mul(xp, x);
            }
            std::vector<elt> ncands;
            for (size_t cj = ci + 1; cj < cands.size(); ++cj) {
                elt y = cands[cj];
                if (nspan.test(y)) continue;
                if (G.mul(x, y) == G.mul(y, x)) ncands.push_back(y);
            }
            self(self, nspan, rank + 1, ncands);
        }
    };
    rec(rec, cur, 0, ps);
    return best;
}

// Index-p subgroups, as kernels of the nonzero functionals on G/Phi(G).
inline std::vector<Subgroup> maximal_subgroups(const Group& G) {
    const int p = G.prime();
    Subgroup Phi = frattini(G);
    QuotientResult qr = quotient_by(G, Phi.members.elements(), G.order());
    const Group& V = qr.group;  // elementary abelian
    // coordinates on V: greedy basis, then decode every element by brute span
    std::vector<elt> basis;
    ElementSet span(V.order());
    span.set(0);
    for (int x = 1; x < V.order(); ++x) {
        if (span.test(x)) continue;
        basis.push_back(static_cast<elt>(x));
        std::vector<elt> cur = span.elements();
        for (elt s : cur) {
            elt y = s;
            for (int t = 1; t < p; ++t) {
                y = V.mul(y, static_cast<elt>(x));
                span.set(y);
            }
        }
    }
    const int d = static_cast<int>(basis.size());
    std::vector<std::vector<int>> coords(V.order());
    {
        std::vector<int> e(d, 0);
        for (;;) {
            elt v = 0;
            for (int i = 0; i < d; ++i) v = V.mul(v, V.power(basis[i], e[i]));
            coords[v] = e;
            int i = d - 1;
            while (i >= 0 && ++e[i] == p) e[i--] = 0;
            if (i < 0) break;
        }
    }
    // nonzero functionals up to scalar: first nonzero coefficient equal 1
    std::vector<Subgroup> out;
    std::vector<int> f(d, 0);
    for (;;) {
        int i = d - 1;
        while (i >= 0 && ++f[i] == p) f[i--] = 0;
        if (i < 0) break;
        int lead = 0;
        while (lead < d && f[lead] == 0) ++lead;
        if (lead >= d || f[lead] != 1) continue;
        Subgroup M;
        M.parent = &G;
        M.members = ElementSet(G.order());
        for (int x = 0; x < G.order(); ++x) {
            const auto& c = coords[qr.proj[x]];
            int s = 0;
            for (int j = 0; j < d; ++j) s += f[j] * c[j];
            if (s % p == 0) M.members.set(x);
        }
        M.gens = subgroup_from_set(G, M.members).gens;
        out.push_back(std::move(M));
    }
    std::sort(out.begin(), out.end(), [](const Subgroup& a, const Subgroup& b) { return a.members < b.members; });
    return out;
}

inline int generator_count(const Group& G) {
    if (G.order() == 1) return 0;
    Subgroup Phi = frattini(G);
    int idx = G.order() / Phi.order();
    const int p = G.prime();
    int d = 0;
    while (idx > 1) {
        idx /= p;
        ++d;
    }
    return d;
}

inline bool is_abelian(const Group& G) {
    for (int a = 0; a < G.order(); ++a)
        for (int b = a + 1; b < G.order(); ++b)
            if (G.mul(static_cast<elt>(a), static_cast<elt>(b)) != G.mul(static_cast<elt>(b), static_cast<elt>(a)))
                return false;
    return true;
}

// Type of an abelian p-group from its power statistics: the number of cyclic
// factors of order >= p^k is log_p |Omega_k| - log_p |Omega_{k-1}|.
inline std::vector<long> abelian_type(const Group& A) {
    if (A.order() == 1) return {};
    const int p = A.prime();
    auto logp = [&](long n) {
        int k = 0;
        while (n > 1) {
            n /= p;
            ++k;
        }
        return k;
    };
    std::vector<int> s{0};  // s[k] = log_p #{x : x^{p^k} = 1}
    for (int k = 1;; ++k) {
        long pk = 1;
        for (int i = 0; i < k; ++i) pk *= p;
        long cnt = 0;
        for (int x = 0; x < A.order(); ++x)
            if (A.power(static_cast<elt>(x), pk) == 0) ++cnt;
        s.push_back(logp(cnt));
        if (cnt == A.order()) break;
    }
    std::vector<long> factors;
    const int e = static_cast<int>(s.size()) - 1;
    for (int k = e; k >= 1; --k) {
        int atleast_k = s[k] - s[k - 1];
        int atleast_k1 = (k + 1 <= e) ? s[k + 1] - s[k] : 0;
        int exactly_k = atleast_k - atleast_k1;
        long pk = 1;
        for (int i = 0; i < k; ++i) pk *= p;
        for (int t = 0; t < exactly_k; ++t) factors.push_back(pk);
    }
    return factors;  // descending
}

struct InvariantFingerprint {
    long order = 1;
    int exponent = 1;
    int nilpotency_class = 0;
    int num_involutions = 0;
    int p_rank = 0;
    std::vector<long> abelianization;  // invariant factors, descending
    long center_order = 1;
    std::vector<long> center_type;
    long frattini_order = 1;
    long derived_order = 1;
    int d = 0;  // generator count
    std::vector<std::pair<int, long>> order_histogram;

    bool operator==(const InvariantFingerprint&) const = default;

    // Canonical single-line form; field order is fixed so records diff cleanly.
    std::string to_line() const {
        std::ostringstream os;
        auto vec = [&](const std::vector<long>& v) {
            std::string s = "[";
            for (size_t i = 0; i < v.size(); ++i) s += (i ? "," : "") + std::to_string(v[i]);
            return s + "]";
        };
        os << "order=" << order << " exp=" << exponent << " class=" << nilpotency_class << " inv=" << num_involutions
           << " rank=" << p_rank << " d=" << d << " ab=" << vec(abelianization) << " z=" << center_order
           << vec(center_type) << " phi=" << frattini_order << " der=" << derived_order << " hist=[";
        for (size_t i = 0; i < order_histogram.size(); ++i)
            os << (i ? "," : "") << order_histogram[i].first << ":" << order_histogram[i].second;
        os << "]";
        return os.str();
    }
};

inline InvariantFingerprint fingerprint(const Group& G) {
    InvariantFingerprint f;
    f.order = G.order();
    f.exponent = exponent(G);
    f.nilpotency_class = nilpotency_class(G);
    f.num_involutions = count_involutions(G);
    f.p_rank = p_rank(G);
    Subgroup D = derived(G);
    f.derived_order = D.order();
    QuotientResult ab = quotient_by(G, D.members.elements(), G.order());
    f.abelianization = abelian_type(ab.group);
    Subgroup Z = center(G);
    f.center_order = Z.order();
    Group Zg = Group::from_table(
        Z.order(),
        [&] {
            auto mem = Z.members.elements();
            std::vector<int> pos(G.order(), -1);
            for (int i = 0; i < static_cast<int>(mem.size()); ++i) pos[mem[i]] = i;
            std::vector<elt> t(mem.size() * mem.size());
            for (size_t a = 0; a < mem.size(); ++a)
                for (size_t b = 0; b < mem.size(); ++b) t[a * mem.size() + b] = static_cast<elt>(pos[G.mul(mem[a], mem[b])]);
            return t;
        }(),
        Source::quotient, G.order());
    f.center_type = abelian_type(Zg);
    f.frattini_order = frattini(G).order();
    f.d = generator_count(G);
    std::map<int, long> hist;
    for (int x = 0; x < G.order(); ++x) ++hist[G.elt_order(static_cast<elt>(x))];
    f.order_histogram.assign(hist.begin(), hist.end());
    return f;
}

// Omega_1 = Z = Phi = G', exponent 4, class 2 (Higman's constraints on Suzuki
// 2-groups).
inline bool higman_check(const Group& G) {
    Subgroup O = omega(G, 1), Z = center(G), P = frattini(G), D = derived(G);
    return O.members == Z.members && Z.members == P.members && P.members == D.members && exponent(G) == 4 &&
           nilpotency_class(G) == 2;
}

// Special p-group: Z = G' = Phi, elementary abelian.
inline bool special_check(const Group& G) {
    Subgroup Z = center(G), P = frattini(G), D = derived(G);
    if (!(Z.members == P.members && P.members == D.members)) return false;
    if (Z.order() == 1) return false;
    const int p = G.prime();
    for (elt x : Z.members.elements())
        if (x != 0 && G.elt_order(x) != p) return false;
    return true;
}

inline bool is_cyclic(const Group& G) {
    for (int x = 0; x < G.order(); ++x)
        if (G.elt_order(static_cast<elt>(x)) == G.order()) return true;
    return G.order() == 1;
}

inline bool is_homocyclic(const Group& G) {
    if (!is_abelian(G)) return false;
    auto t = abelian_type(G);
    for (auto f : t)
        if (f != t[0]) return false;
    return true;
}

// Cyclic normal subgroup with cyclic quotient, scanning cyclic subgroups by
// descending order.
inline bool is_metacyclic(const Group& G) {
    if (is_cyclic(G)) return true;
    std::vector<ElementSet> cyclics;
    for (int x = 0; x < G.order(); ++x) {
        ElementSet c(G.order());
        elt y = 0;
        do {
            c.set(y);
            y = G.mul(y, static_cast<elt>(x));
        } while (y != 0);
        cyclics.push_back(c);
    }
    std::sort(cyclics.begin(), cyclics.end(),
              [](const ElementSet& a, const ElementSet& b) { return a.count() > b.count(); });
    cyclics.erase(std::unique(cyclics.begin(), cyclics.end()), cyclics.end());
    for (const auto& c : cyclics) {
        if (!is_normal(G, c)) continue;
        QuotientResult q = quotient_by(G, c.elements(), G.order());
        if (is_cyclic(q.group)) return true;
    }
    return false;
}

namespace detail {
// cyclic maximal subgroup <r> plus an element s outside with s^-1 r s = r^e
inline bool has_cyclic_maximal_with(const Group& G, int e_num, bool s_squares_to_half, int min_log) {
    int n = G.order();
    if (n < (1 << min_log)) return false;
    for (int r = 0; r < n; ++r) {
        if (G.elt_order(static_cast<elt>(r)) * 2 != n) continue;
        long half = G.elt_order(static_cast<elt>(r));
        long e = (e_num == -1) ? half - 1 : (e_num == -2) ? half / 2 - 1 : half / 2 + 1;
        elt target = G.power(static_cast<elt>(r), e);
        for (int s = 0; s < n; ++s) {
            elt sp = static_cast<elt>(s);
            // s outside <r>
            bool inside = false;
            elt y = 0;
            do {
                if (y == sp) inside = true;
                y = G.mul(y, static_cast<elt>(r));
            } while (y != 0 && !inside);
            if (inside) continue;
            if (G.conj(static_cast<elt>(r), sp) != target) continue;
            elt s2 = G.mul(sp, sp);
            if (s_squares_to_half) {
                if (s2 == G.power(static_cast<elt>(r), half / 2)) return true;
            } else {
                if (s2 == 0) return true;
            }
        }
    }
    return false;
}
}  // namespace detail

inline bool is_dihedral(const Group& G) {
    if (G.order() == 4) return !is_cyclic(G);  // V4, the degenerate D4
    return G.order() >= 8 && detail::has_cyclic_maximal_with(G, -1, false, 3);
}
inline bool is_semidihedral(const Group& G) { return G.order() >= 16 && detail::has_cyclic_maximal_with(G, -2, false, 4); }
inline bool is_quaternion(const Group& G) { return G.order() >= 8 && detail::has_cyclic_maximal_with(G, -1, true, 3); }

}  // namespace gfus
