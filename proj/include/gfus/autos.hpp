#pragma once

#include <algorithm>
#include <array>
#include <functional>
#include <map>
#include <optional>
#include <set>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gfus/f2mat.hpp"
#include "gfus/invariants.hpp"

namespace gfus {

// Element permutation respecting multiplication.
struct Automorphism {
    const Group* G = nullptr;
    std::vector<elt> perm;

    elt operator()(elt x) const { return perm[x]; }

    bool verify() const {
        for (int a = 0; a < G->order(); ++a)
            for (int b = 0; b < G->order(); ++b)
                if (perm[G->mul(static_cast<elt>(a), static_cast<elt>(b))] != G->mul(perm[a], perm[b])) return false;
        return perm[0] == 0;
    }

    long order() const {
        std::vector<elt> cur = perm;
        long k = 1;
        auto is_id = [&](const std::vector<elt>& v) {
            for (size_t i = 0; i < v.size(); ++i)
                if (v[i] != i) return false;
            return true;
        };
        while (!is_id(cur)) {
            std::vector<elt> nxt(cur.size());
            for (size_t i = 0; i < cur.size(); ++i) nxt[i] = perm[cur[i]];
            cur = std::move(nxt);
            ++k;
        }
        return k;
    }

    Automorphism then(const Automorphism& o) const {  // x -> o(this(x))
        Automorphism r{G, std::vector<elt>(perm.size())};
        for (size_t i = 0; i < perm.size(); ++i) r.perm[i] = o.perm[perm[i]];
        return r;
    }

    Automorphism inverse() const {
        Automorphism r{G, std::vector<elt>(perm.size())};
        for (size_t i = 0; i < perm.size(); ++i) r.perm[perm[i]] = static_cast<elt>(i);
        return r;
    }

    static Automorphism identity(const Group& G) {
        Automorphism a{&G, std::vector<elt>(G.order())};
        for (int i = 0; i < G.order(); ++i) a.perm[i] = static_cast<elt>(i);
        return a;
    }

    static Automorphism inner(const Group& G, elt g) {
        Automorphism a{&G, std::vector<elt>(G.order())};
        for (int i = 0; i < G.order(); ++i) a.perm[i] = G.conj(static_cast<elt>(i), g);
        return a;
    }
};

// Polycyclic generating sequence along a chief-like series: every tail
// subgroup is normal in G, every layer has index p, and the first `top`
// generators lift a basis of G/Phi(G).
struct Pcgs {
    const Group* G = nullptr;
    int p = 2;
    std::vector<elt> gens;
    std::vector<ElementSet> tails;  // tails[i] = <gens[i..k)>, tails[k] trivial
    int top = 0;

    int length() const { return static_cast<int>(gens.size()); }

    // exponents of x along the chain
    std::vector<int> decompose(elt x) const {
        const int k = length();
        std::vector<int> e(k, 0);
        for (int i = 0; i < k; ++i) {
            elt cur = x;
            int t = 0;
            while (!tails[i + 1].test(cur)) {
                cur = G->mul(G->inv(gens[i]), cur);
                ++t;
                if (t > p) throw GroupError("pcgs decomposition failed");
            }
            e[i] = t;
            x = cur;
        }
        return e;
    }
};

namespace detail {

// G-invariant Frattini-like subgroup of a normal subgroup N: <[N,G], N^p>.
inline ElementSet invariant_frattini(const Group& G, const ElementSet& N) {
    std::vector<elt> gens;
    for (elt x : N.elements()) {
        for (int g = 0; g < G.order(); ++g) gens.push_back(G.comm(x, static_cast<elt>(g)));
        gens.push_back(G.power(x, G.prime()));
    }
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    return closure_set(G, gens);
}

}  // namespace detail

inline Pcgs make_pcgs(const Group& G) {
    Pcgs pc;
    pc.G = &G;
    pc.p = G.prime();
    ElementSet cur = G.full_set();
    while (cur.count() > 1) {
        ElementSet M = detail::invariant_frattini(G, cur);
        // peel the elementary abelian layer cur/M one dimension at a time;
        // every intermediate subgroup contains [cur,G] so is normal in G
        std::vector<elt> layer_basis;
        ElementSet span = M;
        for (int x = 0; x < G.order(); ++x) {
            if (!cur.test(x) || span.test(x)) continue;
            layer_basis.push_back(static_cast<elt>(x));
            std::vector<elt> seed = span.elements();
            seed.push_back(static_cast<elt>(x));
            span = closure_set(G, seed);
        }
        for (size_t i = 0; i < layer_basis.size(); ++i) {
            pc.gens.push_back(layer_basis[i]);
            pc.tails.push_back(ElementSet());  // placeholder, filled below
        }
        // tails for this layer
        size_t base = pc.gens.size() - layer_basis.size();
        for (size_t i = 0; i < layer_basis.size(); ++i) {
            std::vector<elt> seed = M.elements();
            for (size_t j = i + 1; j < layer_basis.size(); ++j) seed.push_back(layer_basis[j]);
            pc.tails[base + i] = closure_set(G, seed);
        }
        if (pc.top == 0) pc.top = static_cast<int>(layer_basis.size());
        cur = M;
    }
    // prepend the full group, append the trivial tail
    std::vector<ElementSet> tails;
    tails.push_back(G.full_set());
    for (auto& t : pc.tails) tails.push_back(std::move(t));
    pc.tails = std::move(tails);
    if (G.order() == 1) pc.tails = {G.full_set()};
    return pc;
}

namespace detail {

// invariant class of an element under any automorphism: order plus membership
// in the fixed characteristic subgroups (center, derived, Frattini, Omega_1,
// agemo_1)
struct CharPattern {
    std::vector<int> klass;  // per element

    static CharPattern of(const Group& G) {
        Subgroup Z = center(G), D = derived(G), F = frattini(G), O = omega(G, 1), A = agemo(G, 1);
        CharPattern cp;
        cp.klass.resize(G.order());
        for (int x = 0; x < G.order(); ++x) {
            int k = G.elt_order(static_cast<elt>(x));
            k = k * 32 + (Z.members.test(x) ? 16 : 0) + (D.members.test(x) ? 8 : 0) + (F.members.test(x) ? 4 : 0) +
                (O.members.test(x) ? 2 : 0) + (A.members.test(x) ? 1 : 0);
            cp.klass[x] = k;
        }
        return cp;
    }
};

struct PcgsRelations {
    // power_word[i], conj_word[i][j] as exponent vectors over the pcgs
    std::vector<std::vector<int>> power_word;
    std::vector<std::vector<std::vector<int>>> conj_word;

    static PcgsRelations of(const Group& G, const Pcgs& pc) {
        const int k = pc.length();
        PcgsRelations R;
        R.power_word.resize(k);
        R.conj_word.assign(k, std::vector<std::vector<int>>(k));
        for (int i = 0; i < k; ++i) {
            R.power_word[i] = pc.decompose(G.power(pc.gens[i], pc.p));
            for (int j = i + 1; j < k; ++j) R.conj_word[i][j] = pc.decompose(G.conj(pc.gens[j], pc.gens[i]));
        }
        return R;
    }
};

// Backtracking over images of a pcgs, deepest generator first, checking the
// polycyclic relations incrementally. If every relation holds the assignment
// extends to a homomorphism; injectivity is enforced by image growth.
struct HomSearch {
    const Group* G;
    const Group* H;
    const Pcgs* pc;
    const PcgsRelations* rel;
    std::vector<std::vector<elt>> candidates;  // per level
    long budget = Caps::defaults().budget;
    long nodes = 0;
    bool exhausted_budget = false;

    std::vector<elt> images;        // per level
    std::vector<ElementSet> img;    // img[j] = image subgroup of tails[j]
    std::function<bool(const std::vector<elt>&)> sink;  // return true to stop

    elt eval(const std::vector<int>& word, int from_level) const {
        elt r = 0;
        for (int i = from_level; i < pc->length(); ++i)
            if (word[i]) r = H->mul(r, H->power(images[i], word[i]));
        return r;
    }

    bool run() {
        const int k = pc->length();
        images.assign(k, 0);
        img.assign(k + 1, ElementSet(H->order()));
        img[k].set(0);
        return descend(k - 1);
    }

    bool descend(int j) {
        if (j < 0) return sink(images);
        const int p = pc->p;
        for (elt t : candidates[j]) {
            if (++nodes > budget) {
                exhausted_budget = true;
                return true;
            }
            if (img[j + 1].test(t)) continue;
            images[j] = t;
            // power relation: t^p = image of g_j^p
            if (H->power(t, p) != eval(rel->power_word[j], j)) continue;
            // conjugation relations with all deeper generators
            bool ok = true;
            for (int m = j + 1; m < pc->length() && ok; ++m) {
                if (H->conj(images[m], t) != eval(rel->conj_word[j][m], j)) ok = false;
                // orders of products are preserved by injective homomorphisms
                if (ok && H->elt_order(H->mul(t, images[m])) != G->elt_order(G->mul(pc->gens[j], pc->gens[m])))
                    ok = false;
            }
            if (!ok) continue;
            // extend the image subgroup by the coset chain
            ElementSet ni = img[j + 1];
            elt tp = t;
            for (int s = 1; s < p; ++s) {
                for (elt y : img[j + 1].elements()) ni.set(H->mul(y, tp));
                tp = H->mul(tp, t);
            }
            img[j] = std::move(ni);
            if (descend(j - 1)) return true;
        }
        return false;
    }
};

}  // namespace detail

// Full automorphism group: exact order plus a verified generating set. For
// abelian groups the order comes from the cyclic-decomposition formula and the
// generators are constructed; otherwise the group is enumerated by pruned
// backtracking on pcgs images.
struct AutGroup {
    long order = 1;
    std::vector<Automorphism> all;   // materialized when feasible
    std::vector<Automorphism> gens;  // small generating set
    bool materialized = false;
};

namespace detail {

// basis of an abelian p-group: independent generators, descending order
inline std::vector<elt> abelian_basis(const Group& G) {
    std::vector<long> type = abelian_type(G);  // descending
    std::vector<elt> basis;
    long have = 1;
    for (long want : type) {
        bool found = false;
        for (int x = 1; x < G.order() && !found; ++x) {
            if (G.elt_order(static_cast<elt>(x)) != want) continue;
            std::vector<elt> seed = basis;
            seed.push_back(static_cast<elt>(x));
            if (closure_set(G, seed).count() == have * want) {
                basis.push_back(static_cast<elt>(x));
                have *= want;
                found = true;
            }
        }
        if (!found) throw GroupError("abelian basis extraction failed");
    }
    return basis;
}

inline long hillar_rhea_order(const Group& G) {
    std::vector<long> type = abelian_type(G);  // descending; formula wants ascending
    std::sort(type.begin(), type.end());
    const int n = static_cast<int>(type.size());
    if (n == 0) return 1;
    const long p = G.prime();
    std::vector<int> e(n);
    for (int i = 0; i < n; ++i) {
        long t = type[i];
        while (t > 1) {
            t /= p;
            ++e[i];
        }
    }
    auto powl = [&](long b, long x) {
        long r = 1;
        while (x-- > 0) r *= b;
        return r;
    };
    long result = 1;
    for (int k = 0; k < n; ++k) {
        int dk = k;
        while (dk + 1 < n && e[dk + 1] == e[k]) ++dk;
        result *= powl(p, dk + 1) - powl(p, k);
    }
    for (int j = 0; j < n; ++j) {
        int dj = j;
        while (dj + 1 < n && e[dj + 1] == e[j]) ++dj;
        result *= powl(powl(p, e[j]), n - (dj + 1));
    }
    for (int i = 0; i < n; ++i) {
        int ci = i;
        while (ci - 1 >= 0 && e[ci - 1] == e[i]) --ci;
        result *= powl(powl(p, e[i] - 1), n - (ci + 1) + 1);
    }
    return result;
}

// automorphism of an abelian group from images of a basis
inline std::optional<Automorphism> abelian_map(const Group& G, const std::vector<elt>& basis,
                                               const std::vector<elt>& images) {
    // exponent coordinates of every element over the basis
    const int n = static_cast<int>(basis.size());
    std::vector<long> ords(n);
    for (int i = 0; i < n; ++i) ords[i] = G.elt_order(basis[i]);
    Automorphism a{&G, std::vector<elt>(G.order(), 0)};
    std::vector<bool> hit(G.order(), false);
    std::vector<long> e(n, 0);
    for (;;) {
        elt src = 0, dst = 0;
        for (int i = 0; i < n; ++i) {
            src = G.mul(src, G.power(basis[i], e[i]));
            dst = G.mul(dst, G.power(images[i], e[i]));
        }
        a.perm[src] = dst;
        hit[dst] = true;
        int i = n - 1;
        while (i >= 0 && ++e[i] == ords[i]) e[i--] = 0;
        if (i < 0) break;
    }
    for (bool h : hit)
        if (!h) return std::nullopt;  // not surjective
    return a;
}

inline std::vector<Automorphism> abelian_aut_gens(const Group& G) {
    std::vector<elt> basis = abelian_basis(G);
    const int n = static_cast<int>(basis.size());
    const long p = G.prime();
    std::vector<Automorphism> gens;
    auto push = [&](const std::vector<elt>& images) {
        auto a = abelian_map(G, basis, images);
        if (a && a->verify()) gens.push_back(*a);
    };
    for (int i = 0; i < n; ++i) {
        long oi = G.elt_order(basis[i]);
        // unit maps x_i -> x_i^u for generators u of (Z/o_i)^*
        std::vector<long> units;
        if (p == 2) {
            if (oi >= 4) units.push_back(oi - 1);
            if (oi >= 8) units.push_back(5);
        } else if (oi > 2) {
            for (long r = 2; r < oi; ++r) {
                // primitive root test
                long x = r % oi, k = 1;
                bool coprime = std::gcd(x, oi) == 1;
                if (!coprime) continue;
                while (x != 1) {
                    x = (x * r) % oi;
                    ++k;
                }
                if (k == oi - oi / p) {
                    units.push_back(r);
                    break;
                }
            }
        }
        for (long u : units) {
            std::vector<elt> im = basis;
            im[i] = G.power(basis[i], u);
            push(im);
        }
        for (int j = 0; j < n; ++j) {
            if (i == j) continue;
            long oj = G.elt_order(basis[j]);
            long shift = oi > oj ? oi / oj : 1;
            std::vector<elt> im = basis;
            im[i] = G.mul(basis[i], G.power(basis[j], shift));
            push(im);
        }
    }
    if (gens.empty()) gens.push_back(Automorphism::identity(G));
    return gens;
}

struct PermKey {
    std::size_t operator()(const std::vector<elt>& v) const {
        std::size_t h = 1469598103934665603ull;
        for (elt x : v) h = (h ^ x) * 1099511628211ull;
        return h;
    }
};

// closure of a set of permutations under composition; empty result if the
// closure would exceed `limit`
inline std::vector<Automorphism> perm_closure(const Group& G, std::vector<Automorphism> gens, long limit) {
    std::unordered_set<std::vector<elt>, PermKey> seen;
    std::vector<Automorphism> out;
    auto idp = Automorphism::identity(G);
    seen.insert(idp.perm);
    out.push_back(idp);
    for (auto& g : gens)
        if (seen.insert(g.perm).second) out.push_back(g);
    for (size_t i = 0; i < out.size(); ++i) {
        for (const auto& g : gens) {
            auto c = out[i].then(g);
            if (seen.insert(c.perm).second) {
                if (static_cast<long>(out.size()) >= limit) return {};
                out.push_back(std::move(c));
            }
        }
    }
    return out;
}

}  // namespace detail

inline AutGroup automorphism_group(const Group& G, const Caps& caps = Caps::defaults()) {
    if (static_cast<long>(G.order()) > caps.aut) throw CapExceeded("automorphism search cap exceeded");
    AutGroup A;
    if (G.order() == 1) {
        A.all = {Automorphism::identity(G)};
        A.gens = {};
        A.materialized = true;
        return A;
    }
    if (is_abelian(G)) {
        A.order = detail::hillar_rhea_order(G);
        A.gens = detail::abelian_aut_gens(G);
        if (A.order <= 100'000) {
            A.all = detail::perm_closure(G, A.gens, A.order + 1);
            A.materialized = !A.all.empty();
            if (A.materialized && static_cast<long>(A.all.size()) != A.order)
                throw GroupError("abelian automorphism generators do not generate (internal error)");
        }
        return A;
    }
    Pcgs pc = make_pcgs(G);
    auto rels = detail::PcgsRelations::of(G, pc);
    auto pattern = detail::CharPattern::of(G);
    detail::HomSearch hs;
    hs.G = &G;
    hs.H = &G;
    hs.pc = &pc;
    hs.rel = &rels;
    hs.budget = caps.budget;
    hs.candidates.resize(pc.length());
    for (int j = 0; j < pc.length(); ++j) {
        for (int x = 0; x < G.order(); ++x)
            if (pattern.klass[x] == pattern.klass[pc.gens[j]]) hs.candidates[j].push_back(static_cast<elt>(x));
    }
    std::vector<Automorphism> all;
    hs.sink = [&](const std::vector<elt>& images) {
        Automorphism a{&G, std::vector<elt>(G.order())};
        // transport every element along its pcgs decomposition
        for (int x = 0; x < G.order(); ++x) {
            auto e = pc.decompose(static_cast<elt>(x));
            elt y = 0;
            for (int i = 0; i < pc.length(); ++i)
                if (e[i]) y = G.mul(y, G.power(images[i], e[i]));
            a.perm[x] = y;
        }
        all.push_back(std::move(a));
        return false;  // keep enumerating
    };
    hs.run();
    if (hs.exhausted_budget) throw CapExceeded("automorphism enumeration exceeded the node budget");
    A.order = static_cast<long>(all.size());
    A.all = std::move(all);
    A.materialized = true;
    // extract a small generating set by closure
    std::unordered_set<std::vector<elt>, detail::PermKey> have;
    std::vector<Automorphism> closed{Automorphism::identity(G)};
    have.insert(closed[0].perm);
    for (const auto& a : A.all) {
        if (have.count(a.perm)) continue;
        A.gens.push_back(a);
        for (size_t i = 0; i < closed.size(); ++i)
            for (const auto& g : A.gens) {
                auto c = closed[i].then(g);
                if (have.insert(c.perm).second) closed.push_back(std::move(c));
            }
        if (static_cast<long>(closed.size()) == A.order) break;
    }
    return A;
}

inline bool is_characteristic(const Group& G, const Subgroup& S, const Caps& caps = Caps::defaults()) {
    AutGroup A = automorphism_group(G, caps);
    for (const auto& a : A.gens) {
        ElementSet img(G.order());
        for (elt x : S.members.elements()) img.set(a(x));
        if (!(img == S.members)) return false;
    }
    return true;
}

inline bool is_transitive_on_maximals(const Group& G, const Caps& caps = Caps::defaults()) {
    auto maxs = maximal_subgroups(G);
    if (maxs.size() <= 1) return true;
    AutGroup A = automorphism_group(G, caps);
    std::map<ElementSet, int> index;
    for (int i = 0; i < static_cast<int>(maxs.size()); ++i) index[maxs[i].members] = i;
    std::vector<bool> seen(maxs.size(), false);
    std::vector<int> work{0};
    seen[0] = true;
    size_t cnt = 1;
    for (size_t qi = 0; qi < work.size(); ++qi) {
        for (const auto& a : A.gens) {
            ElementSet img(G.order());
            for (elt x : maxs[work[qi]].members.elements()) img.set(a(x));
            int j = index.at(img);
            if (!seen[j]) {
                seen[j] = true;
                ++cnt;
                work.push_back(j);
            }
        }
    }
    return cnt == maxs.size();
}

// Isomorphism test: fingerprint prescreen, then pcgs-image backtracking.
struct IsoResult {
    bool isomorphic = false;
    std::vector<elt> witness;  // map G -> H when isomorphic
};

inline IsoResult is_isomorphic(const Group& G, const Group& H, const Caps& caps = Caps::defaults()) {
    IsoResult r;
    if (G.order() != H.order()) return r;
    if (static_cast<long>(G.order()) > caps.iso) throw CapExceeded("isomorphism cap exceeded");
    if (fingerprint(G).to_line() != fingerprint(H).to_line()) return r;
    Pcgs pc = make_pcgs(G);
    auto rels = detail::PcgsRelations::of(G, pc);
    auto patG = detail::CharPattern::of(G);
    auto patH = detail::CharPattern::of(H);
    // class sizes must agree
    std::map<int, int> cg, ch;
    for (int x = 0; x < G.order(); ++x) ++cg[patG.klass[x]];
    for (int x = 0; x < H.order(); ++x) ++ch[patH.klass[x]];
    if (cg != ch) return r;
    detail::HomSearch hs;
    hs.G = &G;
    hs.H = &H;
    hs.pc = &pc;
    hs.rel = &rels;
    hs.budget = caps.budget;
    hs.candidates.resize(pc.length());
    for (int j = 0; j < pc.length(); ++j)
        for (int x = 0; x < H.order(); ++x)
            if (patH.klass[x] == patG.klass[pc.gens[j]]) hs.candidates[j].push_back(static_cast<elt>(x));
    std::vector<elt> witness;
    hs.sink = [&](const std::vector<elt>& images) {
        witness.assign(G.order(), 0);
        for (int x = 0; x < G.order(); ++x) {
            auto e = pc.decompose(static_cast<elt>(x));
            elt y = 0;
            for (int i = 0; i < pc.length(); ++i)
                if (e[i]) y = H.mul(y, H.power(images[i], e[i]));
            witness[x] = y;
        }
        return true;  // first witness suffices
    };
    bool found = hs.run();
    if (hs.exhausted_budget) throw CapExceeded("isomorphism search exceeded the node budget");
    if (found) {
        r.isomorphic = true;
        r.witness = std::move(witness);
    }
    return r;
}

// Report of the odd-order-automorphism decision.
struct AutReport {
    std::string fingerprint_line;
    std::optional<long> aut_order;
    std::set<int> odd_orders;
    std::map<int, std::vector<std::pair<int, elt>>> witnesses;  // q -> (pcgs index, image)
    std::set<int> undecided;  // primes whose lift search ran out of budget
    std::optional<bool> transitive_on_maximals;
    long nodes_used = 0;
};

// Existence of an order-q automorphism for q in {3,5,7}: enumerate the
// order-q matrices of GL_d(2) as candidate actions on G/Phi(G) and backtrack
// lifts. Sound by Burnside: an odd-order automorphism acting trivially on
// G/Phi(G) is trivial, and an order-q automorphism induces an order-q matrix.
inline AutReport find_odd_automorphism(const Group& G, const Caps& caps = Caps::defaults()) {
    AutReport rep;
    rep.fingerprint_line = fingerprint(G).to_line();
    if (G.order() == 1) return rep;
    if (G.prime() != 2) throw CapExceeded("odd-automorphism decision is for 2-groups");
    Pcgs pc = make_pcgs(G);
    const int d = pc.top;
    if (d > 4) throw CapExceeded("d(G) > 4 is outside the GL_4(2) menu");
    auto rels = detail::PcgsRelations::of(G, pc);
    auto pattern = detail::CharPattern::of(G);
    Subgroup Phi = frattini(G);

    static const std::array<long, 5> gl_order = {1, 1, 6, 168, 20160};
    std::vector<int> menu;
    for (int q : {3, 5, 7})
        if (gl_order[d] % q == 0) menu.push_back(q);

    for (int q : menu) {
        auto mats = gl_elements(d);
        std::set<std::uint32_t> done;
        bool found = false, undecided = false;
        for (const auto& M : mats) {
            if (found) break;
            if (f2_matrix_order(M) != q) continue;
            if (done.count(M.key())) continue;
            // powers of M lift equivalently
            F2Matrix P = M;
            for (int t = 1; t < q; ++t) {
                done.insert(P.key());
                P = P * M;
            }
            // candidate images: g_i must map into the coset rep(M row i) * Phi
            detail::HomSearch hs;
            hs.G = &G;
            hs.H = &G;
            hs.pc = &pc;
            hs.rel = &rels;
            hs.budget = caps.budget;
            hs.candidates.resize(pc.length());
            bool feasible = true;
            for (int j = 0; j < pc.length(); ++j) {
                if (j < d) {
                    elt cos = 0;
                    for (int m = 0; m < d; ++m)
                        if ((M.rows[j] >> m) & 1) cos = G.mul(cos, pc.gens[m]);
                    for (elt f : Phi.members.elements()) {
                        elt t = G.mul(cos, f);
                        if (pattern.klass[t] == pattern.klass[pc.gens[j]]) hs.candidates[j].push_back(t);
                    }
                    std::sort(hs.candidates[j].begin(), hs.candidates[j].end());
                } else {
                    for (int x = 0; x < G.order(); ++x)
                        if (pattern.klass[x] == pattern.klass[pc.gens[j]]) hs.candidates[j].push_back(static_cast<elt>(x));
                }
                if (hs.candidates[j].empty()) feasible = false;
            }
            if (!feasible) continue;
            std::vector<elt> hit;
            hs.sink = [&](const std::vector<elt>& images) {
                hit = images;
                return true;
            };
            bool ok = hs.run();
            rep.nodes_used += hs.nodes;
            if (hs.exhausted_budget) {
                undecided = true;
                continue;
            }
            if (!ok) continue;
            // build the automorphism, reduce to odd order
            Automorphism a{&G, std::vector<elt>(G.order())};
            for (int x = 0; x < G.order(); ++x) {
                auto e = pc.decompose(static_cast<elt>(x));
                elt y = 0;
                for (int i = 0; i < pc.length(); ++i)
                    if (e[i]) y = G.mul(y, G.power(hit[i], e[i]));
                a.perm[x] = y;
            }
            long o = a.order();
            while (o % 2 == 0) {
                a = a.then(a);
                o = a.order();
            }
            if (o % q != 0 || !a.verify()) throw GroupError("odd-automorphism witness failed verification");
            // power down to exact order q
            while (o != q) {
                Automorphism b = a;
                for (long t = 1; t < o / q; ++t) b = b.then(a);
                a = b;
                o = a.order();
            }
            found = true;
            rep.odd_orders.insert(q);
            std::vector<std::pair<int, elt>> wit;
            for (int i = 0; i < pc.length(); ++i) wit.emplace_back(i, a(pc.gens[i]));
            rep.witnesses[q] = std::move(wit);
        }
        if (!found && undecided) rep.undecided.insert(q);
    }
    return rep;
}

// [G, phi] = < x^{-1} phi(x) >
inline Subgroup commutator_subgroup_with(const Group& G, const Automorphism& phi) {
    std::vector<elt> gens;
    for (int x = 0; x < G.order(); ++x) gens.push_back(G.mul(G.inv(static_cast<elt>(x)), phi(static_cast<elt>(x))));
    std::sort(gens.begin(), gens.end());
    gens.erase(std::unique(gens.begin(), gens.end()), gens.end());
    return subgroup_generated(G, gens);
}

struct Gl4ScanReport {
    long total = 0;
    long order3 = 0, order3_free = 0, order3_three = 0;
    long order5 = 0, order5_free = 0;
    bool all_pass = true;
};

// Prop-6.10 style scan over all of GL_4(2): order-3 elements fix 0 or 3
// nonzero vectors, any fixed triple spanning a 2-dimensional subspace;
// order-5 elements fix none.
inline Gl4ScanReport gl4_fixed_point_scan() {
    Gl4ScanReport rep;
    for (const auto& M : gl_elements(4)) {
        ++rep.total;
        long o = f2_matrix_order(M);
        if (o != 3 && o != 5) continue;
        std::vector<std::uint8_t> fixed;
        for (std::uint8_t v = 1; v < 16; ++v)
            if (M.apply(v) == v) fixed.push_back(v);
        if (o == 3) {
            ++rep.order3;
            if (fixed.empty())
                ++rep.order3_free;
            else if (fixed.size() == 3 && (fixed[0] ^ fixed[1] ^ fixed[2]) == 0)
                ++rep.order3_three;  // three nonzero points closing a 2-dim subspace
            else
                rep.all_pass = false;
        } else {
            ++rep.order5;
            if (fixed.empty())
                ++rep.order5_free;
            else
                rep.all_pass = false;
        }
    }
    return rep;
}

}  // namespace gfus
