#pragma once

#include <algorithm>
#include <map>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gfus/group.hpp"

namespace gfus {

// Subgroup of a parent group: membership bitset plus a small generating set.
struct Subgroup {
    const Group* parent = nullptr;
    ElementSet members;
    std::vector<elt> gens;

    int order() const { return members.count(); }
    bool contains(elt x) const { return members.test(x); }
    bool operator==(const Subgroup& o) const { return parent == o.parent && members == o.members; }
};

inline ElementSet closure_set(const Group& G, std::vector<elt> seed) {
    ElementSet S(G.order());
    S.set(0);
    std::vector<elt> work{0};
    for (elt g : seed)
        if (!S.test(g)) {
            S.set(g);
            work.push_back(g);
        }
    // product closure; two-sided to be safe for arbitrary seeds
    for (size_t i = 0; i < work.size(); ++i) {
        elt a = work[i];
        for (size_t j = 0; j < work.size(); ++j) {
            for (elt c : {G.mul(a, work[j]), G.mul(work[j], a)}) {
                if (!S.test(c)) {
                    S.set(c);
                    work.push_back(c);
                }
            }
        }
    }
    return S;
}

inline Subgroup subgroup_generated(const Group& G, std::vector<elt> gens) {
    Subgroup S;
    S.parent = &G;
    S.members = closure_set(G, gens);
    S.gens = std::move(gens);
    return S;
}

inline Subgroup subgroup_from_set(const Group& G, const ElementSet& members) {
    Subgroup S;
    S.parent = &G;
    S.members = members;
    // recover a small generating set greedily
    ElementSet have(G.order());
    have.set(0);
    for (elt x : members.elements()) {
        if (have.test(x)) continue;
        S.gens.push_back(x);
        std::vector<elt> work = have.elements();
        have.set(x);
        work.push_back(x);
        for (size_t i = 0; i < work.size(); ++i)
            for (size_t j = 0; j < work.size(); ++j) {
                elt c = G.mul(work[i], work[j]);
                if (!have.test(c)) {
                    have.set(c);
                    work.push_back(c);
                }
            }
    }
    return S;
}

inline Subgroup trivial_subgroup(const Group& G) {
    Subgroup S;
    S.parent = &G;
    S.members = ElementSet(G.order());
    S.members.set(0);
    return S;
}

inline Subgroup full_subgroup(const Group& G) {
    Subgroup S;
    S.parent = &G;
    S.members = G.full_set();
    S.gens = G.small_gens();
    return S;
}

inline Subgroup centralizer(const Group& G, const Subgroup& S) {
    Subgroup C;
    C.parent = &G;
    C.members = ElementSet(G.order());
    const auto& gens = S.gens.empty() ? S.members.elements() : S.gens;
    for (int x = 0; x < G.order(); ++x) {
        bool ok = true;
        for (elt g : gens)
            if (G.mul(static_cast<elt>(x), g) != G.mul(g, static_cast<elt>(x))) {
                ok = false;
                break;
            }
        if (ok) C.members.set(x);
    }
    C.gens = subgroup_from_set(G, C.members).gens;
    return C;
}

inline ElementSet conjugate_set(const Group& G, const ElementSet& S, elt g) {
    ElementSet T(G.order());
    for (elt x : S.elements()) T.set(G.conj(x, g));
    return T;
}

inline Subgroup normalizer(const Group& G, const Subgroup& S) {
    Subgroup N;
    N.parent = &G;
    N.members = ElementSet(G.order());
    const auto gens = S.gens.empty() ? S.members.elements() : S.gens;
    for (int x = 0; x < G.order(); ++x) {
        bool ok = true;
        for (elt g : gens)
            if (!S.members.test(G.conj(g, static_cast<elt>(x)))) {
                ok = false;
                break;
            }
        if (ok) N.members.set(x);
    }
    N.gens = subgroup_from_set(G, N.members).gens;
    return N;
}

inline bool is_normal(const Group& G, const ElementSet& S) {
    for (int g = 0; g < G.order(); ++g)
        for (elt x : S.elements())
            if (!S.test(G.conj(x, static_cast<elt>(g)))) return false;
    return true;
}

// All subgroups of a p-group, by layered cyclic extension: every subgroup of
// order p^{s+1} is an extension of one of its (normal) maximal subgroups, so
// extending every order-p^s subgroup H by x in N_G(H) with x^p in H is
// exhaustive.
struct SubgroupList {
    std::vector<ElementSet> all;                  // every subgroup, canonical order
    std::vector<int> class_of;                    // subgroup index -> conjugacy class id
    std::vector<std::vector<int>> classes;        // class id -> member subgroup indices
    std::vector<int> class_rep;                   // class id -> representative (min bitset)
};

inline std::vector<ElementSet> all_subgroup_sets(const Group& G, long cap) {
    if (static_cast<long>(G.order()) > cap) throw CapExceeded("subgroup enumeration cap exceeded");
    if (!G.is_p_group()) throw CapExceeded("subgroup enumeration requires a p-group");
    const int p = G.prime();
    std::unordered_set<ElementSet, ElementSetHash> seen;
    std::vector<ElementSet> layer;
    ElementSet triv(G.order());
    triv.set(0);
    seen.insert(triv);
    layer.push_back(triv);
    std::vector<ElementSet> out{triv};
    while (!layer.empty()) {
        std::vector<ElementSet> next;
        for (const auto& H : layer) {
            Subgroup S = subgroup_from_set(G, H);
            Subgroup N = normalizer(G, S);
            for (elt x : N.members.elements()) {
                if (H.test(x)) continue;
                if (!H.test(G.power(x, p))) continue;
                // K = union of cosets H x^t
                ElementSet K = H;
                elt xp = x;
                for (int t = 1; t < p; ++t) {
                    for (elt h : H.elements()) K.set(G.mul(h, xp));
                    xp = G.mul(xp, x);
                }
                if (seen.insert(K).second) next.push_back(K);
            }
        }
        for (const auto& K : next) out.push_back(K);
        layer = std::move(next);
    }
    std::sort(out.begin(), out.end(), [](const ElementSet& a, const ElementSet& b) {
        if (a.count() != b.count()) return a.count() < b.count();
        return a < b;
    });
    return out;
}

inline SubgroupList all_subgroups(const Group& G, long cap = Caps::defaults().subgroups) {
    SubgroupList L;
    L.all = all_subgroup_sets(G, cap);
    std::unordered_map<ElementSet, int, ElementSetHash> index;
    for (int i = 0; i < static_cast<int>(L.all.size()); ++i) index[L.all[i]] = i;
    L.class_of.assign(L.all.size(), -1);
    std::vector<elt> gens = G.small_gens();
    for (int i = 0; i < static_cast<int>(L.all.size()); ++i) {
        if (L.class_of[i] >= 0) continue;
        int cid = static_cast<int>(L.classes.size());
        std::vector<int> orbit{i};
        L.class_of[i] = cid;
        for (size_t qi = 0; qi < orbit.size(); ++qi) {
            for (elt g : gens) {
                ElementSet img = conjugate_set(G, L.all[orbit[qi]], g);
                int j = index.at(img);
                if (L.class_of[j] < 0) {
                    L.class_of[j] = cid;
                    orbit.push_back(j);
                }
            }
        }
        std::sort(orbit.begin(), orbit.end());
        L.class_rep.push_back(orbit.front());
        L.classes.push_back(std::move(orbit));
    }
    return L;
}

}  // namespace gfus
