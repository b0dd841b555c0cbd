#pragma once

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "gfus/autos.hpp"

namespace gfus {

// ---------------------------------------------------------------------------
// subgroup table

struct SubgroupTable {
    const Group* G = nullptr;
    std::vector<ElementSet> sets;
    std::unordered_map<ElementSet, int, ElementSetHash> index;
    std::vector<std::vector<elt>> members;
    std::vector<ElementSet> normalizer;
    std::vector<ElementSet> centralizer;
    std::vector<int> pclass_of;
    std::vector<std::vector<int>> pclasses;
    int full_id = -1;

    int id(const ElementSet& s) const {
        auto it = index.find(s);
        if (it == index.end()) throw GroupError("subgroup missing from table");
        return it->second;
    }

    static SubgroupTable build(const Group& G, long cap) {
        SubgroupTable T;
        T.G = &G;
        T.sets = all_subgroup_sets(G, cap);
        for (int i = 0; i < static_cast<int>(T.sets.size()); ++i) T.index[T.sets[i]] = i;
        T.members.resize(T.sets.size());
        T.normalizer.resize(T.sets.size());
        T.centralizer.resize(T.sets.size());
        for (int i = 0; i < static_cast<int>(T.sets.size()); ++i) {
            T.members[i] = T.sets[i].elements();
            Subgroup S = subgroup_from_set(G, T.sets[i]);
            T.normalizer[i] = gfus::normalizer(G, S).members;
            T.centralizer[i] = gfus::centralizer(G, S).members;
            if (T.sets[i].count() == G.order()) T.full_id = i;
        }
        // P-conjugacy classes
        T.pclass_of.assign(T.sets.size(), -1);
        std::vector<elt> gens = G.small_gens();
        for (int i = 0; i < static_cast<int>(T.sets.size()); ++i) {
            if (T.pclass_of[i] >= 0) continue;
            int cid = static_cast<int>(T.pclasses.size());
            std::vector<int> orbit{i};
            T.pclass_of[i] = cid;
            for (size_t qi = 0; qi < orbit.size(); ++qi)
                for (elt g : gens) {
                    int j = T.id(conjugate_set(G, T.sets[orbit[qi]], g));
                    if (T.pclass_of[j] < 0) {
                        T.pclass_of[j] = cid;
                        orbit.push_back(j);
                    }
                }
            std::sort(orbit.begin(), orbit.end());
            T.pclasses.push_back(std::move(orbit));
        }
        return T;
    }
};

// ---------------------------------------------------------------------------
// morphisms

// Injective homomorphism from a subgroup into P. val has length |P| and holds
// 0xffff outside the domain.
struct Morphism {
    int src = -1;
    int img = -1;
    std::vector<elt> val;

    static constexpr elt none = 0xffff;
};

namespace fdetail {

struct MorphKey {
    std::size_t operator()(const std::vector<elt>& v) const {
        std::size_t h = 1469598103934665603ull;
        for (elt x : v) h = (h ^ x) * 1099511628211ull;
        return h;
    }
};

// A generating morphism: an automorphism of its domain subgroup of P.
struct Move {
    ElementSet domain;       // subgroup of P
    std::vector<elt> map;    // full-length; valid on domain
};

}  // namespace fdetail

// ---------------------------------------------------------------------------
// fusion systems

// Fusion system given by generating data: Aut_F(P) generators (containing
// Inn(P)) and per-essential-class automizer generators. The closure is
// materialized on demand.
struct FusionClosure {
    SubgroupTable subs;
    std::vector<int> elt_class;                   // element -> F-class id
    std::vector<std::vector<elt>> elt_classes;    // class id -> members (ascending)
    std::vector<int> fclass_of;                   // subgroup id -> F-class id
    std::vector<std::vector<int>> fclasses;       // F-class id -> subgroup ids
    std::vector<int> frep;                        // F-class id -> rep subgroup id
    std::vector<Morphism> to_rep;                 // subgroup id -> iso onto its rep
    std::vector<std::vector<Morphism>> rep_maps;  // F-class id -> all morphisms rep -> P
    long total_morphisms = 0;
};

struct FusionSystem {
    std::shared_ptr<const Group> owner;  // set when the system owns its base group
    const Group* P = nullptr;
    int p = 2;
    std::vector<std::vector<elt>> autP_gens;                                  // full perms of P
    std::vector<std::pair<ElementSet, std::vector<std::vector<elt>>>> essentials;  // (U, automizer gens)
    std::shared_ptr<const FusionClosure> closure;

    const FusionClosure& C() const {
        if (!closure) throw GroupError("fusion closure not materialized; call generate()");
        return *closure;
    }
};

inline FusionSystem trivial_system(const Group& P) {
    FusionSystem F;
    F.P = &P;
    F.p = P.prime();
    for (elt g : P.small_gens()) F.autP_gens.push_back(Automorphism::inner(P, g).perm);
    if (F.autP_gens.empty()) F.autP_gens.push_back(Automorphism::identity(P).perm);
    return F;
}

namespace fdetail {

inline std::vector<Move> moves_of(const FusionSystem& F) {
    const Group& P = *F.P;
    std::vector<Move> moves;
    auto add = [&](const ElementSet& dom, const std::vector<elt>& m) {
        moves.push_back({dom, m});
        // inverse move
        std::vector<elt> inv(P.order(), Morphism::none);
        for (elt x : dom.elements()) inv[m[x]] = x;
        moves.push_back({dom, std::move(inv)});
    };
    for (const auto& g : F.autP_gens) add(P.full_set(), g);
    for (const auto& [U, gens] : F.essentials)
        for (const auto& g : gens) add(U, g);
    return moves;
}

inline Morphism inclusion(const SubgroupTable& T, int sid) {
    Morphism m;
    m.src = m.img = sid;
    m.val.assign(T.G->order(), Morphism::none);
    for (elt x : T.members[sid]) m.val[x] = x;
    return m;
}

// image m2 o m1 (apply m1 then m2); caller guarantees img(m1) inside dom(m2)
inline Morphism compose(const SubgroupTable& T, const Morphism& m1, const std::vector<elt>& m2) {
    Morphism r;
    r.src = m1.src;
    r.val.assign(T.G->order(), Morphism::none);
    ElementSet img(T.G->order());
    for (elt x : T.members[m1.src]) {
        elt y = m2[m1.val[x]];
        r.val[x] = y;
        img.set(y);
    }
    r.img = T.id(img);
    return r;
}

}  // namespace fdetail

// Materialize the closure: F-conjugacy of elements and subgroups plus every
// morphism out of each class representative, by orbit closure over the
// generating morphisms (Alperin-style generation).
inline FusionSystem generate(FusionSystem F, long cap = Caps::defaults().fusion) {
    const Group& P = *F.P;
    if (static_cast<long>(P.order()) > cap) throw CapExceeded("fusion cap exceeded");
    auto C = std::make_shared<FusionClosure>();
    C->subs = SubgroupTable::build(P, cap);
    const auto& T = C->subs;
    auto moves = fdetail::moves_of(F);

    // element-level classes: union-find under all moves
    std::vector<int> uf(P.order());
    for (int i = 0; i < P.order(); ++i) uf[i] = i;
    std::function<int(int)> find = [&](int x) { return uf[x] == x ? x : uf[x] = find(uf[x]); };
    auto unite = [&](int a, int b) {
        a = find(a);
        b = find(b);
        if (a != b) uf[std::max(a, b)] = std::min(a, b);
    };
    for (const auto& mv : moves)
        for (elt x : mv.domain.elements()) unite(x, mv.map[x]);
    C->elt_class.assign(P.order(), -1);
    std::map<int, int> root_to_class;
    for (int x = 0; x < P.order(); ++x) {
        int r = find(x);
        auto [it, fresh] = root_to_class.try_emplace(r, static_cast<int>(C->elt_classes.size()));
        if (fresh) C->elt_classes.emplace_back();
        C->elt_class[x] = it->second;
        C->elt_classes[it->second].push_back(static_cast<elt>(x));
    }

    // subgroup-level classes with transporters
    const int ns = static_cast<int>(T.sets.size());
    C->fclass_of.assign(ns, -1);
    C->to_rep.resize(ns);
    for (int s = 0; s < ns; ++s) {
        if (C->fclass_of[s] >= 0) continue;
        int cid = static_cast<int>(C->fclasses.size());
        C->fclasses.emplace_back();
        C->frep.push_back(s);
        C->fclass_of[s] = cid;
        C->fclasses[cid].push_back(s);
        // BFS from the representative; record iso rep -> member, invert at the end
        std::vector<Morphism> from_rep(ns);
        from_rep[s] = fdetail::inclusion(T, s);
        std::vector<int> work{s};
        for (size_t qi = 0; qi < work.size(); ++qi) {
            int cur = work[qi];
            for (const auto& mv : moves) {
                if (!mv.domain.contains(T.sets[cur])) continue;
                Morphism nm = fdetail::compose(T, from_rep[cur], mv.map);
                if (C->fclass_of[nm.img] < 0) {
                    C->fclass_of[nm.img] = cid;
                    C->fclasses[cid].push_back(nm.img);
                    from_rep[nm.img] = nm;
                    work.push_back(nm.img);
                }
            }
        }
        std::sort(C->fclasses[cid].begin(), C->fclasses[cid].end());
        for (int m : C->fclasses[cid]) {
            // invert rep -> m into m -> rep
            Morphism inv;
            inv.src = m;
            inv.img = s;
            inv.val.assign(P.order(), Morphism::none);
            for (elt x : T.members[s]) inv.val[from_rep[m].val[x]] = x;
            C->to_rep[m] = std::move(inv);
        }
    }

    // all morphisms out of each representative
    C->rep_maps.resize(C->fclasses.size());
    for (size_t cid = 0; cid < C->fclasses.size(); ++cid) {
        int rep = C->frep[cid];
        std::unordered_set<std::vector<elt>, fdetail::MorphKey> seen;
        std::vector<Morphism>& out = C->rep_maps[cid];
        Morphism inc = fdetail::inclusion(T, rep);
        seen.insert(inc.val);
        out.push_back(inc);
        for (size_t qi = 0; qi < out.size(); ++qi) {
            Morphism cur = out[qi];  // copy: out may reallocate
            for (const auto& mv : moves) {
                if (!mv.domain.contains(T.sets[cur.img])) continue;
                Morphism nm = fdetail::compose(T, cur, mv.map);
                if (seen.insert(nm.val).second) out.push_back(std::move(nm));
            }
        }
        C->total_morphisms += static_cast<long>(out.size());
    }
    F.closure = C;
    return F;
}

// Hom_F(S, P) for an arbitrary subgroup id, via the class representative.
inline std::vector<Morphism> morphisms_from(const FusionSystem& F, int sid) {
    const auto& C = F.C();
    int cid = C.fclass_of[sid];
    std::vector<Morphism> out;
    for (const auto& m : C.rep_maps[cid]) out.push_back(fdetail::compose(C.subs, C.to_rep[sid], m.val));
    return out;
}

// Aut_F(Q) for a subgroup id, as full-length maps fixing Q setwise.
inline std::vector<Morphism> f_automizer(const FusionSystem& F, int sid) {
    std::vector<Morphism> out;
    for (auto& m : morphisms_from(F, sid))
        if (m.img == sid) out.push_back(std::move(m));
    return out;
}

// Aut_P(Q): conjugation maps restricted to Q.
inline std::vector<std::vector<elt>> p_automizer(const FusionSystem& F, int sid) {
    const auto& C = F.C();
    const Group& P = *F.P;
    std::unordered_set<std::vector<elt>, fdetail::MorphKey> seen;
    std::vector<std::vector<elt>> out;
    for (elt g : C.subs.normalizer[sid].elements()) {
        std::vector<elt> m(P.order(), Morphism::none);
        for (elt x : C.subs.members[sid]) m[x] = P.conj(x, g);
        if (seen.insert(m).second) out.push_back(std::move(m));
    }
    return out;
}

struct SaturationVerdict {
    bool saturated = true;
    struct ClassWitness {
        int class_id;
        int representative;      // subgroup id checked
        bool fully_automized;
        bool receptive;
    };
    std::vector<ClassWitness> witnesses;
    struct Failure {
        int class_id;
        std::string axiom;
        int subgroup;  // source of the non-extending morphism, when relevant
    };
    std::optional<Failure> first_failure;
};

// Saturation: every F-class must contain a fully normalized representative
// that is fully automized and receptive.
inline SaturationVerdict is_saturated(const FusionSystem& F) {
    const auto& C = F.C();
    const Group& P = *F.P;
    const int p = F.p;
    SaturationVerdict v;
    for (size_t cid = 0; cid < C.fclasses.size(); ++cid) {
        // fully normalized members
        int best = 0;
        for (int s : C.fclasses[cid]) best = std::max(best, C.subs.normalizer[s].count());
        bool class_ok = false;
        SaturationVerdict::ClassWitness wit{static_cast<int>(cid), -1, false, false};
        for (int q : C.fclasses[cid]) {
            if (C.subs.normalizer[q].count() != best) continue;
            // fully automized: Aut_P(q) is a Sylow p-subgroup of Aut_F(q)
            auto autP = p_automizer(F, q);
            auto autF = f_automizer(F, q);
            long ap = static_cast<long>(autP.size()), af = static_cast<long>(autF.size());
            bool automized = af % ap == 0 && ((af / ap) % p != 0);
            if (!automized) {
                wit = {static_cast<int>(cid), q, false, false};
                continue;
            }
            // receptive: every F-iso onto q extends along its N_phi
            std::unordered_set<std::vector<elt>, fdetail::MorphKey> autP_set(autP.begin(), autP.end());
            bool receptive = true;
            int bad_src = -1;
            for (int s : C.fclasses[cid]) {
                if (!receptive) break;
                // Iso_F(s, q) = { a o t : a in Aut_F(q) } with t: s -> q
                Morphism t = fdetail::compose(C.subs, C.to_rep[s], C.to_rep[C.frep[cid]].val);
                // t maps s -> rep; compose with rep -> q isos
                std::vector<Morphism> rep_to_q;
                for (const auto& m : C.rep_maps[cid])
                    if (m.img == q) rep_to_q.push_back(m);
                for (const auto& m : rep_to_q) {
                    Morphism phi = fdetail::compose(C.subs, t, m.val);
                    // N_phi = { g in N_P(s) : phi c_g phi^{-1} in Aut_P(q) }
                    std::vector<elt> phi_inv(P.order(), Morphism::none);
                    for (elt x : C.subs.members[s]) phi_inv[phi.val[x]] = x;
                    ElementSet nphi(P.order());
                    for (elt g : C.subs.normalizer[s].elements()) {
                        std::vector<elt> rho(P.order(), Morphism::none);
                        for (elt y : C.subs.members[q]) rho[y] = phi.val[P.conj(phi_inv[y], g)];
                        if (autP_set.count(rho)) nphi.set(g);
                    }
                    int nid = C.subs.id(nphi);
                    bool extended = false;
                    for (const auto& psi : morphisms_from(F, nid)) {
                        bool restricts = true;
                        for (elt x : C.subs.members[s])
                            if (psi.val[x] != phi.val[x]) {
                                restricts = false;
                                break;
                            }
                        if (restricts) {
                            extended = true;
                            break;
                        }
                    }
                    if (!extended) {
                        receptive = false;
                        bad_src = s;
                        break;
                    }
                }
            }
            wit = {static_cast<int>(cid), q, true, receptive};
            if (receptive) {
                class_ok = true;
                break;
            } else if (!v.first_failure) {
                v.first_failure = {static_cast<int>(cid), "extension", bad_src};
            }
        }
        v.witnesses.push_back(wit);
        if (!class_ok) {
            v.saturated = false;
            if (!v.first_failure) v.first_failure = {static_cast<int>(cid), wit.representative >= 0 && !wit.fully_automized ? "sylow" : "extension", wit.representative};
        }
    }
    return v;
}

// ---------------------------------------------------------------------------
// small-group helpers for automizer analysis (the groups here have order
// <= a few hundred and need not be p-groups)

namespace fdetail {

inline std::vector<ElementSet> all_subgroups_small(const Group& G) {
    std::set<ElementSet> subs;
    ElementSet triv(G.order());
    triv.set(0);
    subs.insert(triv);
    for (int x = 1; x < G.order(); ++x) {
        ElementSet c(G.order());
        elt y = 0;
        do {
            c.set(y);
            y = G.mul(y, static_cast<elt>(x));
        } while (y != 0);
        subs.insert(c);
    }
    bool changed = true;
    while (changed) {
        changed = false;
        std::vector<ElementSet> cur(subs.begin(), subs.end());
        for (size_t i = 0; i < cur.size(); ++i)
            for (size_t j = i + 1; j < cur.size(); ++j) {
                if (cur[i].contains(cur[j]) || cur[j].contains(cur[i])) continue;
                std::vector<elt> seed = cur[i].elements();
                for (elt x : cur[j].elements()) seed.push_back(x);
                ElementSet join = closure_set(G, seed);
                if (subs.insert(join).second) changed = true;
            }
    }
    return {subs.begin(), subs.end()};
}

inline bool p_core_trivial(const Group& G, int p, const std::vector<ElementSet>& subs) {
    for (const auto& H : subs) {
        int n = H.count();
        if (n == 1) continue;
        bool ppow = true;
        while (n > 1) {
            if (n % p) {
                ppow = false;
                break;
            }
            n /= p;
        }
        if (ppow && is_normal(G, H)) return false;
    }
    return true;
}

inline bool has_strongly_p_embedded(const Group& G, int p) {
    if (G.order() % p != 0) return false;
    auto subs = all_subgroups_small(G);
    for (const auto& H : subs) {
        if (H.count() == G.order()) continue;
        if (H.count() % p != 0) continue;
        bool ok = true;
        for (int g = 0; g < G.order() && ok; ++g) {
            if (H.test(g)) continue;
            ElementSet K = conjugate_set(G, H, static_cast<elt>(g));
            K &= H;
            if (K.count() % p == 0) ok = false;
        }
        if (ok) return true;
    }
    return false;
}

// Group value from a closed list of permutation maps (composition table).
struct PermGroupTable {
    Group group;
    std::vector<std::vector<elt>> elems;  // index -> permutation
    std::unordered_map<std::vector<elt>, int, MorphKey> index;
};

inline PermGroupTable group_from_perms(std::vector<std::vector<elt>> perms, long order_cap) {
    PermGroupTable R;
    std::sort(perms.begin(), perms.end());
    perms.erase(std::unique(perms.begin(), perms.end()), perms.end());
    // identity first
    for (size_t i = 0; i < perms.size(); ++i) {
        bool isid = true;
        for (size_t x = 0; x < perms[i].size(); ++x)
            if (perms[i][x] != static_cast<elt>(x) && perms[i][x] != Morphism::none) {
                isid = false;
                break;
            }
        if (isid) {
            std::swap(perms[0], perms[i]);
            break;
        }
    }
    R.elems = std::move(perms);
    for (int i = 0; i < static_cast<int>(R.elems.size()); ++i) R.index[R.elems[i]] = i;
    const int n = static_cast<int>(R.elems.size());
    std::vector<elt> table(static_cast<size_t>(n) * n);
    for (int a = 0; a < n; ++a)
        for (int b = 0; b < n; ++b) {
            // composition: apply a then b, on the common domain
            std::vector<elt> c(R.elems[a].size(), Morphism::none);
            for (size_t x = 0; x < c.size(); ++x)
                if (R.elems[a][x] != Morphism::none) c[x] = R.elems[b][R.elems[a][x]];
            auto it = R.index.find(c);
            if (it == R.index.end()) throw GroupError("permutation set is not closed");
            table[static_cast<size_t>(a) * n + b] = static_cast<elt>(it->second);
        }
    R.group = Group::from_table(n, std::move(table), Source::product, order_cap);
    return R;
}

}  // namespace fdetail

// ---------------------------------------------------------------------------
// derived invariants of a materialized system

inline int essential_rank(const FusionSystem& F);

// F-centric: every F-conjugate contains its centralizer.
inline bool is_f_centric(const FusionSystem& F, int cid) {
    const auto& C = F.C();
    for (int s : C.fclasses[cid])
        if (!C.subs.sets[s].contains(C.subs.centralizer[s])) return false;
    return true;
}

// F-essential classes of a (saturated) system: F-centric with Out_F(Q)
// containing a strongly p-embedded subgroup.
inline std::vector<int> essential_classes(const FusionSystem& F) {
    const auto& C = F.C();
    const Group& P = *F.P;
    std::vector<int> out;
    for (size_t cid = 0; cid < C.fclasses.size(); ++cid) {
        if (!is_f_centric(F, static_cast<int>(cid))) continue;
        // fully normalized representative
        int rep = -1, best = -1;
        for (int s : C.fclasses[cid])
            if (C.subs.normalizer[s].count() > best) {
                best = C.subs.normalizer[s].count();
                rep = s;
            }
        auto autF = f_automizer(F, rep);
        if (autF.size() <= 1) continue;
        std::vector<std::vector<elt>> perms;
        for (auto& m : autF) perms.push_back(m.val);
        fdetail::PermGroupTable A = fdetail::group_from_perms(std::move(perms), 1 << 12);
        // Inn(rep)
        std::vector<elt> inn_ids;
        for (elt u : C.subs.members[rep]) {
            std::vector<elt> m(P.order(), Morphism::none);
            for (elt x : C.subs.members[rep]) m[x] = P.conj(x, u);
            inn_ids.push_back(static_cast<elt>(A.index.at(m)));
        }
        std::sort(inn_ids.begin(), inn_ids.end());
        inn_ids.erase(std::unique(inn_ids.begin(), inn_ids.end()), inn_ids.end());
        QuotientResult outq = quotient_by(A.group, inn_ids, 1 << 12);
        if (fdetail::has_strongly_p_embedded(outq.group, F.p)) out.push_back(static_cast<int>(cid));
    }
    return out;
}

inline int essential_rank(const FusionSystem& F) { return static_cast<int>(essential_classes(F).size()); }

// Z(F): the elements of Z(P) fixed by every morphism defined at them, i.e.
// with singleton F-class.
inline Subgroup fusion_center(const FusionSystem& F) {
    const auto& C = F.C();
    const Group& P = *F.P;
    Subgroup Z = center(P);
    ElementSet zf(P.order());
    for (elt z : Z.members.elements())
        if (C.elt_classes[C.elt_class[z]].size() == 1) zf.set(z);
    ElementSet closed = closure_set(P, zf.elements());
    if (!(closed == zf)) throw GroupError("fusion center is not a subgroup (internal error)");
    return subgroup_from_set(P, zf);
}

inline bool is_strongly_closed(const FusionSystem& F, const ElementSet& Z) {
    const auto& C = F.C();
    for (elt z : Z.elements())
        for (elt y : C.elt_classes[C.elt_class[z]])
            if (!Z.test(y)) return false;
    return true;
}

// Aschbacher criterion: Q (strongly F-closed) is normal in F iff it has a
// central series of strongly F-closed subgroups. Decides F = N_F(Q).
inline bool resistance_check(const FusionSystem& F, const ElementSet& Q) {
    const auto& C = F.C();
    const Group& P = *F.P;
    if (!is_strongly_closed(F, Q)) return false;
    // strongly closed subgroups inside Q
    std::vector<int> sc;
    for (int s = 0; s < static_cast<int>(C.subs.sets.size()); ++s)
        if (Q.contains(C.subs.sets[s]) && is_strongly_closed(F, C.subs.sets[s])) sc.push_back(s);
    int qid = C.subs.id(Q);
    std::vector<bool> reach(C.subs.sets.size(), false);
    ElementSet triv(P.order());
    triv.set(0);
    reach[C.subs.id(triv)] = true;
    bool changed = true;
    while (changed) {
        changed = false;
        for (int s : sc) {
            if (reach[s]) continue;
            for (int z : sc) {
                if (!reach[z] || !C.subs.sets[s].contains(C.subs.sets[z])) continue;
                // central step: [s, Q] <= z
                bool central = true;
                for (elt a : C.subs.members[s]) {
                    for (elt q : Q.elements())
                        if (!C.subs.sets[z].test(P.comm(a, q))) {
                            central = false;
                            break;
                        }
                    if (!central) break;
                }
                if (central) {
                    reach[s] = true;
                    changed = true;
                    break;
                }
            }
        }
    }
    return reach[qid];
}

// Induced system on P/Z for Z <= Z(F) strongly F-closed: automizer data is
// pushed through the canonical projection.
inline FusionSystem quotient_fusion(const FusionSystem& F, const ElementSet& Z,
                                    long cap = Caps::defaults().fusion) {
    const Group& P = *F.P;
    Subgroup ZF = fusion_center(F);
    if (!ZF.members.contains(Z)) throw NotCentralInF("subgroup is not central in F");
    if (!is_strongly_closed(F, Z)) throw NotCentralInF("subgroup is not strongly F-closed");
    QuotientResult qr = quotient_by(P, Z.elements(), P.order());
    auto owner = std::make_shared<Group>(std::move(qr.group));
    const auto& proj = qr.proj;
    FusionSystem Q;
    Q.owner = owner;
    Q.P = owner.get();
    Q.p = F.p;
    auto push_map = [&](const ElementSet& dom, const std::vector<elt>& m) {
        std::vector<elt> out(owner->order(), Morphism::none);
        for (elt x : dom.elements()) out[proj[x]] = proj[m[x]];
        return out;
    };
    for (const auto& g : F.autP_gens) Q.autP_gens.push_back(push_map(P.full_set(), g));
    for (const auto& [U, gens] : F.essentials) {
        ElementSet Ubar(owner->order());
        for (elt x : U.elements()) Ubar.set(proj[x]);
        std::vector<std::vector<elt>> pushed;
        for (const auto& g : gens) pushed.push_back(push_map(U, g));
        Q.essentials.emplace_back(std::move(Ubar), std::move(pushed));
    }
    return generate(std::move(Q), cap);
}

// ---------------------------------------------------------------------------
// enumeration of all saturated fusion systems on P

struct AutomizerChoice {
    std::vector<std::vector<elt>> gens;  // full-length maps on U
    long order = 0;
};

struct EssentialCandidate {
    int rep;  // subgroup id (fully P-normalized representative)
    std::vector<AutomizerChoice> automizers;
};

namespace fdetail {

// Materialized automorphism group of a subgroup U of P, as perms of P
// restricted to U.
struct SubAut {
    std::vector<std::vector<elt>> all;
    PermGroupTable table;
};

inline SubAut subgroup_aut(const Group& P, const std::vector<elt>& mem, const Caps& caps) {
    // U as a standalone group
    const int r = static_cast<int>(mem.size());
    std::vector<int> pos(P.order(), -1);
    for (int i = 0; i < r; ++i) pos[mem[i]] = i;
    std::vector<elt> table(static_cast<size_t>(r) * r);
    for (int a = 0; a < r; ++a)
        for (int b = 0; b < r; ++b) table[static_cast<size_t>(a) * r + b] = static_cast<elt>(pos[P.mul(mem[a], mem[b])]);
    Group U = Group::from_table(r, std::move(table), Source::product, caps.order);
    Caps c2 = caps;
    c2.aut = std::max<long>(c2.aut, r);
    AutGroup A = automorphism_group(U, c2);
    if (!A.materialized) throw CapExceeded("automizer automorphism group too large to materialize");
    SubAut out;
    for (const auto& a : A.all) {
        std::vector<elt> m(P.order(), Morphism::none);
        for (int i = 0; i < r; ++i) m[mem[i]] = mem[a.perm[i]];
        out.all.push_back(std::move(m));
    }
    out.table = group_from_perms(out.all, 1 << 12);
    return out;
}

}  // namespace fdetail

// Proper subgroup classes that can carry essential automizers: the entire
// P-class is self-centralizing and Aut(U) is not a p-group. Automizer choices
// A satisfy Aut_P(U) in Syl_p(A), A strictly larger, and O_p(A/Inn(U)) = 1,
// listed up to N_{Aut(U)}(Aut_P(U))-conjugacy.
inline std::vector<EssentialCandidate> essential_candidates(const Group& P, const Caps& caps = Caps::defaults()) {
    if (static_cast<long>(P.order()) > caps.fusion) throw CapExceeded("fusion cap exceeded");
    const int p = P.prime();
    SubgroupTable T = SubgroupTable::build(P, caps.fusion);
    std::vector<EssentialCandidate> out;
    for (const auto& pcls : T.pclasses) {
        if (T.sets[pcls[0]].count() == P.order() || T.sets[pcls[0]].count() == 1) continue;
        bool centric = true;
        for (int s : pcls)
            if (!T.sets[s].contains(T.centralizer[s])) {
                centric = false;
                break;
            }
        if (!centric) continue;
        // fully P-normalized representative
        int rep = pcls[0], best = -1;
        for (int s : pcls)
            if (T.normalizer[s].count() > best) {
                best = T.normalizer[s].count();
                rep = s;
            }
        fdetail::SubAut A = fdetail::subgroup_aut(P, T.members[rep], caps);
        const Group& AG = A.table.group;
        // Aut(U) must not be a p-group
        {
            long n = AG.order();
            while (n % p == 0) n /= p;
            if (n == 1) continue;
        }
        // Aut_P(U) and Inn(U) inside AG
        auto to_id = [&](const std::vector<elt>& m) { return static_cast<elt>(A.table.index.at(m)); };
        std::set<elt> autP_ids, inn_ids;
        for (elt g : T.normalizer[rep].elements()) {
            std::vector<elt> m(P.order(), Morphism::none);
            for (elt x : T.members[rep]) m[x] = P.conj(x, g);
            autP_ids.insert(to_id(m));
        }
        for (elt u : T.members[rep]) {
            std::vector<elt> m(P.order(), Morphism::none);
            for (elt x : T.members[rep]) m[x] = P.conj(x, u);
            inn_ids.insert(to_id(m));
        }
        ElementSet autP_set(AG.order()), inn_set(AG.order());
        for (elt i : autP_ids) autP_set.set(i);
        for (elt i : inn_ids) inn_set.set(i);
        long ap = autP_set.count();
        auto subs = fdetail::all_subgroups_small(AG);
        // normalizer of Aut_P(U) in Aut(U) for the conjugacy dedupe
        ElementSet nau(AG.order());
        for (int g = 0; g < AG.order(); ++g)
            if (conjugate_set(AG, autP_set, static_cast<elt>(g)) == autP_set) nau.set(g);
        std::vector<ElementSet> picked;
        EssentialCandidate cand;
        cand.rep = rep;
        for (const auto& H : subs) {
            if (!H.contains(autP_set) || H.count() == ap) continue;
            long idx = H.count() / ap;
            if (H.count() % ap != 0 || idx % p == 0) continue;
            // Aut_P must be the full p-part
            long ppart = 1, n = H.count();
            while (n % p == 0) {
                ppart *= p;
                n /= p;
            }
            {
                long m = ap;
                long app = 1;
                while (m % p == 0) {
                    app *= p;
                    m /= p;
                }
                if (app != ppart || m != 1) continue;
            }
            // O_p(H / Inn(U)) must be trivial
            {
                std::vector<elt> hmem = H.elements();
                std::vector<int> hpos(AG.order(), -1);
                for (int i = 0; i < static_cast<int>(hmem.size()); ++i) hpos[hmem[i]] = i;
                std::vector<elt> ht(hmem.size() * hmem.size());
                for (size_t a = 0; a < hmem.size(); ++a)
                    for (size_t b = 0; b < hmem.size(); ++b)
                        ht[a * hmem.size() + b] = static_cast<elt>(hpos[AG.mul(hmem[a], hmem[b])]);
                Group Hg = Group::from_table(static_cast<int>(hmem.size()), std::move(ht), Source::product, 1 << 12);
                std::vector<elt> inn_in_h;
                for (elt i : inn_ids) inn_in_h.push_back(static_cast<elt>(hpos[i]));
                QuotientResult q = quotient_by(Hg, inn_in_h, 1 << 12);
                auto qsubs = fdetail::all_subgroups_small(q.group);
                if (!fdetail::p_core_trivial(q.group, p, qsubs)) continue;
            }
            // dedupe under N_{Aut(U)}(Aut_P(U))
            bool dup = false;
            for (const auto& prev : picked) {
                for (elt g : nau.elements())
                    if (conjugate_set(AG, H, g) == prev) {
                        dup = true;
                        break;
                    }
                if (dup) break;
            }
            if (dup) continue;
            picked.push_back(H);
            AutomizerChoice ch;
            ch.order = H.count();
            // generators of H as maps on U
            Subgroup hs = subgroup_from_set(AG, H);
            for (elt g : hs.gens) ch.gens.push_back(A.table.elems[g]);
            if (ch.gens.empty()) ch.gens.push_back(A.table.elems[0]);
            cand.automizers.push_back(std::move(ch));
        }
        if (!cand.automizers.empty()) out.push_back(std::move(cand));
    }
    return out;
}

}  // namespace gfus
