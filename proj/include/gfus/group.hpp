#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <numeric>
#include <string>
#include <utility>
#include <vector>

#include "gfus/bitset.hpp"
#include "gfus/common.hpp"

namespace gfus {

// One factor g^e of a relation word. Exponents are kept in [0, rel_order).
struct Term {
    int gen;
    long exp;
};
using Word = std::vector<Term>;

enum class Source { presentation, product, quotient, corpus, carrier };

// Polycyclic presentation. Generators are ordered so that the tail subgroups
// G_i = <g_i, ..., g_k> form a subnormal chain:
//   - power_rels[i] is a word in generators > i equal to g_i^{rel_orders[i]},
//   - conj_rels[{i,j}] (i < j) is a word in generators > i equal to g_j^{g_i}.
// Missing entries mean the identity word / trivial conjugation.
struct PcPresentation {
    std::string name;
    std::vector<std::string> gens;
    std::vector<long> rel_orders;
    std::map<int, Word> power_rels;
    std::map<std::pair<int, int>, Word> conj_rels;

    int ngens() const { return static_cast<int>(gens.size()); }

    long claimed_order() const {
        long n = 1;
        for (long o : rel_orders) n *= o;
        return n;
    }

    static bool is_prime_power(long n) {
        if (n < 2) return false;
        long p = 2;
        while (p * p <= n && n % p != 0) ++p;
        if (p * p > n) return true;  // n prime
        while (n % p == 0) n /= p;
        return n == 1;
    }

    void validate() const {
        const int k = ngens();
        if (k == 0) throw InconsistentPresentation("presentation has no generators");
        if (static_cast<int>(rel_orders.size()) != k)
            throw InconsistentPresentation("rel_orders size mismatch");
        for (long o : rel_orders)
            if (!is_prime_power(o))
                throw InconsistentPresentation("relative order " + std::to_string(o) + " is not a prime power >= 2");
        auto check_word = [&](const Word& w, int min_gen) {
            for (const auto& t : w) {
                if (t.gen < 0 || t.gen >= k) throw InconsistentPresentation("relation references unknown generator");
                if (t.gen < min_gen) throw InconsistentPresentation("relation word violates generator order");
                if (t.exp < 0 || t.exp >= rel_orders[t.gen])
                    throw InconsistentPresentation("relation exponent out of range");
            }
        };
        for (const auto& [i, w] : power_rels) {
            if (i < 0 || i >= k) throw InconsistentPresentation("power relation on unknown generator");
            check_word(w, i + 1);
        }
        for (const auto& [ij, w] : conj_rels) {
            if (ij.first < 0 || ij.second <= ij.first || ij.second >= k)
                throw InconsistentPresentation("conjugation relation indices out of order");
            check_word(w, ij.first + 1);
        }
    }
};

// Finite group as an immutable multiplication table. Identity has index 0.
class Group {
  public:
    Group() = default;

    int order() const { return order_; }
    elt id() const { return 0; }
    elt mul(elt a, elt b) const { return mul_[static_cast<size_t>(a) * order_ + b]; }
    elt inv(elt a) const { return inv_[a]; }
    elt conj(elt x, elt g) const { return mul(mul(inv(g), x), g); }  // g^-1 x g
    elt comm(elt a, elt b) const { return mul(mul(inv(a), inv(b)), mul(a, b)); }
    int elt_order(elt a) const { return elt_order_[a]; }
    Source source() const { return source_; }

    elt power(elt a, long e) const {
        long o = elt_order_[a];
        e %= o;
        if (e < 0) e += o;
        elt r = 0, b = a;
        for (; e > 0; e >>= 1, b = mul(b, b))
            if (e & 1) r = mul(r, b);
        return r;
    }

    // Least prime dividing the order; for p-groups this is the prime p.
    int prime() const {
        int n = order_;
        for (int p = 2; p * p <= n; ++p)
            if (n % p == 0) return p;
        return n;
    }

    bool is_p_group() const {
        int n = order_, p = prime();
        if (n == 1) return true;
        while (n % p == 0) n /= p;
        return n == 1;
    }

    ElementSet full_set() const {
        ElementSet s(order_);
        for (int i = 0; i < order_; ++i) s.set(i);
        return s;
    }

    // Presentation provenance, when built from one.
    bool has_presentation() const { return !pc_.gens.empty(); }
    const PcPresentation& presentation() const { return pc_; }
    const std::vector<elt>& pc_gen_elements() const { return pc_gen_elts_; }

    elt named_gen(const std::string& name) const {
        for (size_t i = 0; i < pc_.gens.size(); ++i)
            if (pc_.gens[i] == name) return pc_gen_elts_[i];
        throw GroupError("no generator named " + name);
    }

    // Normal-form exponents of an element of a presentation-built group.
    std::vector<long> exponents(elt x) const {
        std::vector<long> e(pc_.ngens());
        long r = x;
        for (int i = pc_.ngens() - 1; i >= 0; --i) {
            e[i] = r % pc_.rel_orders[i];
            r /= pc_.rel_orders[i];
        }
        return e;
    }

    std::string element_name(elt x) const {
        if (!has_presentation()) return std::to_string(static_cast<int>(x));
        if (x == 0) return "1";
        std::string s;
        auto e = exponents(x);
        for (int i = 0; i < pc_.ngens(); ++i) {
            if (e[i] == 0) continue;
            if (!s.empty()) s += ' ';
            s += pc_.gens[i];
            if (e[i] > 1) s += '^' + std::to_string(e[i]);
        }
        return s;
    }

    // A small generating set (the pc generators when present, else computed greedily).
    std::vector<elt> small_gens() const {
        if (!pc_gen_elts_.empty()) return pc_gen_elts_;
        std::vector<elt> gens;
        ElementSet have(order_);
        have.set(0);
        int covered = 1;
        for (int x = 1; x < order_ && covered < order_; ++x) {
            if (have.test(x)) continue;
            gens.push_back(static_cast<elt>(x));
            // close
            std::vector<elt> frontier = have.elements();
            std::vector<elt> work = frontier;
            for (size_t qi = 0; qi < work.size(); ++qi) {
                elt a = work[qi];
                for (elt g : gens) {
                    for (elt b : {mul(a, g), mul(g, a)}) {
                        if (!have.test(b)) {
                            have.set(b);
                            ++covered;
                            work.push_back(b);
                        }
                    }
                }
            }
        }
        return gens;
    }

    static Group from_table(int order, std::vector<elt> table, Source src, long order_cap);
    static Group collect(const PcPresentation& pres, long order_cap = Caps::defaults().order);

    friend Group direct_product(const Group& G, const Group& H, long order_cap);

  private:
    int order_ = 1;
    std::vector<elt> mul_{0};
    std::vector<elt> inv_{0};
    std::vector<int> elt_order_{1};
    Source source_ = Source::presentation;
    PcPresentation pc_;
    std::vector<elt> pc_gen_elts_;

    void finish_tables();
    void check_table(bool full_assoc) const;
};

namespace detail {

// Collection from the left: rewrite an arbitrary positive word into the
// normal form g_1^{e_1} ... g_k^{e_k}. Terminates for consistent polycyclic
// presentations; a step budget guards against pathological input.
class Collector {
  public:
    explicit Collector(const PcPresentation& p) : p_(p) {}

    std::vector<long> collect(std::vector<Term> w) const {
        long steps = 0;
        const long budget = 2'000'000;
        size_t t = 0;
        while (t < w.size()) {
            if (++steps > budget)
                throw InconsistentPresentation("collection did not terminate within budget");
            Term& cur = w[t];
            if (cur.exp == 0) {
                w.erase(w.begin() + t);
                if (t > 0) --t;
                continue;
            }
            long o = p_.rel_orders[cur.gen];
            if (cur.exp >= o) {
                // g^e = g^{e-o} . (g^o)
                cur.exp -= o;
                Word pw;
                auto it = p_.power_rels.find(cur.gen);
                if (it != p_.power_rels.end()) pw = it->second;
                w.insert(w.begin() + t + 1, pw.begin(), pw.end());
                continue;
            }
            if (t + 1 < w.size()) {
                Term& nxt = w[t + 1];
                if (nxt.gen == cur.gen) {
                    cur.exp += nxt.exp;
                    w.erase(w.begin() + t + 1);
                    continue;
                }
                if (nxt.gen < cur.gen) {
                    // descent g_j^a g_i^b -> g_i (g_j^{g_i})^a g_i^{b-1}
                    int i = nxt.gen, j = cur.gen;
                    long a = cur.exp, b = nxt.exp;
                    Word cw;
                    auto it = p_.conj_rels.find({i, j});
                    if (it != p_.conj_rels.end())
                        cw = it->second;
                    else
                        cw = {{j, 1}};  // commuting pair
                    std::vector<Term> repl;
                    repl.push_back({i, 1});
                    for (long r = 0; r < a; ++r) repl.insert(repl.end(), cw.begin(), cw.end());
                    if (b > 1) repl.push_back({i, b - 1});
                    w.erase(w.begin() + t, w.begin() + t + 2);
                    w.insert(w.begin() + t, repl.begin(), repl.end());
                    if (t > 0) --t;
                    continue;
                }
            }
            ++t;
        }
        std::vector<long> exps(p_.ngens(), 0);
        for (const auto& term : w) exps[term.gen] = term.exp;
        return exps;
    }

  private:
    const PcPresentation& p_;
};

}  // namespace detail

inline void Group::finish_tables() {
    inv_.assign(order_, 0);
    std::vector<bool> seen(order_);
    for (int a = 0; a < order_; ++a) {
        bool found = false;
        for (int b = 0; b < order_; ++b)
            if (mul(static_cast<elt>(a), static_cast<elt>(b)) == 0) {
                inv_[a] = static_cast<elt>(b);
                found = true;
                break;
            }
        if (!found) throw InconsistentPresentation("element without inverse");
    }
    elt_order_.assign(order_, 1);
    for (int a = 1; a < order_; ++a) {
        elt x = static_cast<elt>(a);
        int k = 1;
        while (x != 0) {
            x = mul(x, static_cast<elt>(a));
            ++k;
            if (k > order_) throw InconsistentPresentation("element order exceeds group order");
        }
        elt_order_[a] = k;
    }
}

inline void Group::check_table(bool full_assoc) const {
    for (int x = 0; x < order_; ++x) {
        if (mul(0, static_cast<elt>(x)) != x || mul(static_cast<elt>(x), 0) != x)
            throw InconsistentPresentation("identity axiom fails");
    }
    // rows and columns are permutations
    for (int a = 0; a < order_; ++a) {
        std::vector<bool> row(order_), col(order_);
        for (int b = 0; b < order_; ++b) {
            elt r = mul(static_cast<elt>(a), static_cast<elt>(b));
            elt c = mul(static_cast<elt>(b), static_cast<elt>(a));
            if (row[r] || col[c]) throw InconsistentPresentation("multiplication table is not a Latin square");
            row[r] = col[c] = true;
        }
    }
    if (full_assoc) {
        for (int a = 0; a < order_; ++a)
            for (int b = 0; b < order_; ++b)
                for (int c = 0; c < order_; ++c)
                    if (mul(mul(static_cast<elt>(a), static_cast<elt>(b)), static_cast<elt>(c)) !=
                        mul(static_cast<elt>(a), mul(static_cast<elt>(b), static_cast<elt>(c))))
                        throw InconsistentPresentation("associativity fails");
    }
}

inline Group Group::from_table(int order, std::vector<elt> table, Source src, long order_cap) {
    if (order < 1 || static_cast<long>(order) > order_cap)
        throw UnsupportedOrder("order " + std::to_string(order) + " exceeds cap");
    if (static_cast<long long>(order) * order != static_cast<long long>(table.size()))
        throw InconsistentPresentation("table size mismatch");
    Group G;
    G.order_ = order;
    G.mul_ = std::move(table);
    G.source_ = src;
    G.check_table(order <= 256);
    G.finish_tables();
    return G;
}

inline Group Group::collect(const PcPresentation& pres, long order_cap) {
    pres.validate();
    long n = pres.claimed_order();
    if (n > order_cap) throw UnsupportedOrder("presented order " + std::to_string(n) + " exceeds cap");
    const int N = static_cast<int>(n);
    const int k = pres.ngens();
    detail::Collector coll(pres);

    // strides for the mixed-radix normal-form index; e_k is least significant
    std::vector<long> stride(k);
    long s = 1;
    for (int i = k - 1; i >= 0; --i) {
        stride[i] = s;
        s *= pres.rel_orders[i];
    }
    auto index_of = [&](const std::vector<long>& e) {
        long idx = 0;
        for (int i = 0; i < k; ++i) idx += e[i] * stride[i];
        return static_cast<elt>(idx);
    };
    auto word_of = [&](elt x) {
        std::vector<Term> w;
        long r = x;
        for (int i = 0; i < k; ++i) {
            long e = r / stride[i];
            r %= stride[i];
            if (e) w.push_back({i, e});
        }
        return w;
    };

    // sigma[i][x] = x * g_i, by collection (the memoized conjugation data
    // lives in the presentation's relation words)
    std::vector<std::vector<elt>> sigma(k, std::vector<elt>(N));
    for (int i = 0; i < k; ++i)
        for (int x = 0; x < N; ++x) {
            auto w = word_of(static_cast<elt>(x));
            w.push_back({i, 1});
            sigma[i][x] = index_of(coll.collect(std::move(w)));
        }

    // full table by peeling the last nonzero exponent of y:
    //   x*y = (x*y') * g_j  with  y = y' g_j
    Group G;
    G.order_ = N;
    G.mul_.assign(static_cast<size_t>(N) * N, 0);
    for (int x = 0; x < N; ++x) G.mul_[static_cast<size_t>(x) * N] = static_cast<elt>(x);
    for (int y = 1; y < N; ++y) {
        int j = k - 1;
        long r = y;
        for (int i = k - 1; i >= 0; --i) {
            if ((y / stride[i]) % pres.rel_orders[i] != 0) {
                j = i;
                break;
            }
        }
        (void)r;
        int yprev = y - static_cast<int>(stride[j]);
        for (int x = 0; x < N; ++x)
            G.mul_[static_cast<size_t>(x) * N + y] = sigma[j][G.mul_[static_cast<size_t>(x) * N + yprev]];
    }
    G.source_ = Source::presentation;
    G.pc_ = pres;
    G.pc_gen_elts_.resize(k);
    for (int i = 0; i < k; ++i) G.pc_gen_elts_[i] = static_cast<elt>(stride[i]);

    // consistency: identity + Latin square
    G.check_table(false);
    // generator-wise associativity implies full associativity for a table
    // built by the peeling recurrence above
    for (int i = 0; i < k; ++i) {
        const auto& sg = sigma[i];
        for (int x = 0; x < N; ++x)
            for (int y = 0; y < N; ++y)
                if (sg[G.mul(static_cast<elt>(x), static_cast<elt>(y))] !=
                    G.mul(static_cast<elt>(x), sg[y]))
                    throw InconsistentPresentation("presentation is inconsistent (associativity)");
    }
    G.finish_tables();
    // every defining relation must hold as an element identity
    auto eval_word = [&](const Word& w) {
        elt r = 0;
        for (const auto& t : w) r = G.mul(r, G.power(G.pc_gen_elts_[t.gen], t.exp));
        return r;
    };
    for (int i = 0; i < k; ++i) {
        Word pw;
        auto it = pres.power_rels.find(i);
        if (it != pres.power_rels.end()) pw = it->second;
        if (G.power(G.pc_gen_elts_[i], pres.rel_orders[i]) != eval_word(pw))
            throw InconsistentPresentation("power relation fails for generator " + pres.gens[i]);
    }
    for (int i = 0; i < k; ++i)
        for (int j = i + 1; j < k; ++j) {
            Word cw;
            auto it = pres.conj_rels.find({i, j});
            if (it != pres.conj_rels.end())
                cw = it->second;
            else
                cw = {{j, 1}};
            if (G.conj(G.pc_gen_elts_[j], G.pc_gen_elts_[i]) != eval_word(cw))
                throw InconsistentPresentation("conjugation relation fails for pair (" + pres.gens[i] + "," +
                                               pres.gens[j] + ")");
        }
    return G;
}

inline Group direct_product(const Group& G, const Group& H, long order_cap = Caps::defaults().order) {
    long n = static_cast<long>(G.order()) * H.order();
    if (n > order_cap) throw UnsupportedOrder("direct product order exceeds cap");
    const int N = static_cast<int>(n), nh = H.order();
    std::vector<elt> table(static_cast<size_t>(N) * N);
    for (int a = 0; a < N; ++a)
        for (int b = 0; b < N; ++b) {
            elt g = G.mul(static_cast<elt>(a / nh), static_cast<elt>(b / nh));
            elt h = H.mul(static_cast<elt>(a % nh), static_cast<elt>(b % nh));
            table[static_cast<size_t>(a) * N + b] = static_cast<elt>(g * nh + h);
        }
    Group D;
    D = Group::from_table(N, std::move(table), Source::product, order_cap);
    return D;
}

struct QuotientResult {
    Group group;
    std::vector<elt> proj;  // element of G -> element of G/N
};

// Coset table of G/N together with the canonical projection. Cosets are
// indexed by their minimal representative, so the identity coset is 0.
inline QuotientResult quotient_by(const Group& G, const std::vector<elt>& N_members, long order_cap) {
    const int n = G.order();
    // normality check
    ElementSet Nset(n);
    for (elt x : N_members) Nset.set(x);
    if (!Nset.test(0)) throw NotNormal("subgroup does not contain the identity");
    for (int g = 0; g < n; ++g)
        for (elt x : N_members)
            if (!Nset.test(G.conj(x, static_cast<elt>(g)))) throw NotNormal("subgroup is not normal");

    std::vector<int> coset_min(n, -1);
    for (int x = 0; x < n; ++x) {
        if (coset_min[x] >= 0) continue;
        int m = x;
        std::vector<int> members;
        for (elt u : N_members) {
            int y = G.mul(static_cast<elt>(x), u);
            members.push_back(y);
            m = std::min(m, y);
        }
        for (int y : members) coset_min[y] = m;
    }
    std::vector<int> reps;
    for (int x = 0; x < n; ++x)
        if (coset_min[x] == x) reps.push_back(x);
    std::sort(reps.begin(), reps.end());
    const int q = static_cast<int>(reps.size());
    std::vector<elt> proj(n);
    std::vector<int> rep_index(n, -1);
    for (int i = 0; i < q; ++i) rep_index[reps[i]] = i;
    for (int x = 0; x < n; ++x) proj[x] = static_cast<elt>(rep_index[coset_min[x]]);

    std::vector<elt> table(static_cast<size_t>(q) * q);
    for (int a = 0; a < q; ++a)
        for (int b = 0; b < q; ++b)
            table[static_cast<size_t>(a) * q + b] = proj[G.mul(static_cast<elt>(reps[a]), static_cast<elt>(reps[b]))];
    Group Q = Group::from_table(q, std::move(table), Source::quotient, order_cap);
    // projection must be a homomorphism; this certifies well-definedness
    for (int x = 0; x < n; ++x)
        for (int y = 0; y < n; ++y)
            if (proj[G.mul(static_cast<elt>(x), static_cast<elt>(y))] != Q.mul(proj[x], proj[y]))
                throw NotNormal("projection is not a homomorphism");
    return {std::move(Q), std::move(proj)};
}

// (G x H) / <(zg, zh)> for central involutions zg, zh.
inline Group central_product(const Group& G, elt zg, const Group& H, elt zh,
                             long order_cap = Caps::defaults().order) {
    auto central_involution = [](const Group& K, elt z) {
        if (K.elt_order(z) != 2) return false;
        for (int x = 0; x < K.order(); ++x)
            if (K.mul(z, static_cast<elt>(x)) != K.mul(static_cast<elt>(x), z)) return false;
        return true;
    };
    if (!central_involution(G, zg) || !central_involution(H, zh))
        throw NotCentralInvolution("central_product arguments must be central involutions");
    Group D = direct_product(G, H, order_cap * 2);
    elt pair = static_cast<elt>(static_cast<int>(zg) * H.order() + zh);
    QuotientResult qr = quotient_by(D, {0, pair}, order_cap);
    Group out = std::move(qr.group);
    return out;
}

}  // namespace gfus
