#pragma once

// Tensor products of blueprints over a common base (dually: fibre products
// of affine objects) and directed colimits of finite diagrams of B-algebras.

#include <map>
#include <set>
#include <string>
#include <tuple>
#include <vector>

#include "blue/localize.hpp"

namespace blue {

struct TensorProduct {
    BlueprintPtr blueprint;      // B (x)_D C
    BlueprintMorphism left_leg;  // B -> T
    BlueprintMorphism right_leg; // C -> T
};

// B (x)_D C along f: D->B and g: D->C. Atoms are the disjoint union, monoid
// relations come from both sides plus the identifications f(d) = g(d), and
// the pre-addition is generated by both images; the result is
// proper-quotiented.
inline TensorProduct tensor_blueprints(const BlueprintMorphism& f, const BlueprintMorphism& g,
                                       const SearchBounds& bounds = {}) {
    const BlueprintPtr& B = f.target;
    const BlueprintPtr& C = g.target;
    const BlueprintPtr& D = f.source;
    if (!(B->monoid.base == C->monoid.base))
        throw Error(ErrorCode::BaseMismatch,
                    "tensor of blueprints over different coefficient bases (" +
                        B->monoid.base.name() + " vs " + C->monoid.base.name() + ")");

    MonoidPresentation p;
    p.base = B->monoid.base;
    std::vector<std::uint32_t> bmap, cmap;
    std::set<std::string> used;
    for (auto& a : B->monoid.atoms) {
        bmap.push_back(static_cast<std::uint32_t>(p.atoms.size()));
        p.atoms.push_back(a);
        used.insert(a);
    }
    for (auto& a : C->monoid.atoms) {
        std::string name = a;
        while (used.count(name)) name += "'";
        cmap.push_back(static_cast<std::uint32_t>(p.atoms.size()));
        p.atoms.push_back(name);
        used.insert(name);
    }
    auto remap = [&](const Monomial& m, const std::vector<std::uint32_t>& map) {
        if (m.zero) return m;
        Monomial r;
        r.coeff = m.coeff;
        for (auto& [a, e] : m.exps) r.exps.push_back({map[a], e});
        std::sort(r.exps.begin(), r.exps.end());
        return r;
    };
    auto remap_sum = [&](const FormalSum& s, const std::vector<std::uint32_t>& map) {
        FormalSum r;
        for (auto& t : s.terms) r.terms.push_back(remap(t, map));
        return r;
    };

    for (auto& [l, r] : B->monoid.relations) p.relations.push_back({remap(l, bmap), remap(r, bmap)});
    for (auto& [l, r] : C->monoid.relations) p.relations.push_back({remap(l, cmap), remap(r, cmap)});
    for (std::uint32_t d = 0; d < D->monoid.atoms.size(); ++d)
        p.relations.push_back({remap(f.atom_images[d], bmap), remap(g.atom_images[d], cmap)});

    // carry localization markers so fraction equality keeps working
    if (B->monoid.loc || C->monoid.loc) {
        LocalizationMarker marker;
        if (B->monoid.loc)
            for (std::size_t i = 0; i < B->monoid.loc->s_generators.size(); ++i) {
                marker.s_generators.push_back(remap(B->monoid.loc->s_generators[i], bmap));
                marker.inverse_atoms.push_back(bmap[B->monoid.loc->inverse_atoms[i]]);
            }
        if (C->monoid.loc)
            for (std::size_t i = 0; i < C->monoid.loc->s_generators.size(); ++i) {
                marker.s_generators.push_back(remap(C->monoid.loc->s_generators[i], cmap));
                marker.inverse_atoms.push_back(cmap[C->monoid.loc->inverse_atoms[i]]);
            }
        p.loc = marker;
    }

    std::vector<std::pair<FormalSum, FormalSum>> rels;
    for (auto& [l, r] : B->preadd) rels.push_back({remap_sum(l, bmap), remap_sum(r, bmap)});
    for (auto& [l, r] : C->preadd) rels.push_back({remap_sum(l, cmap), remap_sum(r, cmap)});

    auto T = std::make_shared<Blueprint>(make_blueprint(std::move(p), std::move(rels), bounds));
    T->parent = B;

    TensorProduct out;
    out.blueprint = T;
    out.left_leg.source = B;
    out.left_leg.target = T;
    for (std::uint32_t i = 0; i < B->monoid.atoms.size(); ++i)
        out.left_leg.atom_images.push_back(normalize(T->monoid, Monomial::atom(bmap[i])));
    out.right_leg.source = C;
    out.right_leg.target = T;
    for (std::uint32_t i = 0; i < C->monoid.atoms.size(); ++i)
        out.right_leg.atom_images.push_back(normalize(T->monoid, Monomial::atom(cmap[i])));
    return out;
}

// Factorize a commuting cone (p: B->X, q: C->X with p.f == q.g) through the
// tensor product; the factorization is unique because atoms generate.
inline MorphismOrVerdict tensor_factorize(const TensorProduct& t, const BlueprintMorphism& p,
                                          const BlueprintMorphism& q,
                                          const SearchBounds& bounds = {}) {
    std::map<std::string, Monomial> images;
    const auto& T = *t.blueprint;
    for (std::uint32_t i = 0; i < t.left_leg.atom_images.size(); ++i) {
        const Monomial& img = t.left_leg.atom_images[i];
        if (img.exps.size() == 1 && img.exps[0].second == 1 && img.coeff == 1)
            images[T.monoid.atoms[img.exps[0].first]] = p.atom_images[i];
    }
    for (std::uint32_t i = 0; i < t.right_leg.atom_images.size(); ++i) {
        const Monomial& img = t.right_leg.atom_images[i];
        if (img.exps.size() == 1 && img.exps[0].second == 1 && img.coeff == 1)
            images[T.monoid.atoms[img.exps[0].first]] = q.atom_images[i];
    }
    // atoms produced by identifications (merged away) need no image; atoms of
    // T not hit by either leg cannot exist by construction
    for (auto& a : T.monoid.atoms)
        if (!images.count(a))
            return Verdict::make_unknown("factorization",
                                         json{{"missing_atom_image", a}});
    return make_morphism(t.blueprint, p.target, images, bounds);
}

// ---------------------------------------------------------------------------
// Directed colimits

struct DirectedDiagram {
    std::vector<BlueprintPtr> objects;
    std::vector<std::tuple<std::size_t, std::size_t, BlueprintMorphism>> arrows;  // i -> j
};

struct Colimit {
    BlueprintPtr blueprint;
    std::vector<BlueprintMorphism> canonical;  // iota_i : D_i -> colim
};

namespace detail {

// reachability with composite morphisms; nullopt when two parallel paths
// disagree (diagram not commutative)
inline std::optional<std::vector<std::vector<std::optional<BlueprintMorphism>>>> path_closure(
    const DirectedDiagram& d, const SearchBounds& bounds) {
    std::size_t n = d.objects.size();
    std::vector<std::vector<std::optional<BlueprintMorphism>>> reach(
        n, std::vector<std::optional<BlueprintMorphism>>(n));
    for (std::size_t i = 0; i < n; ++i) reach[i][i] = identity_morphism(d.objects[i]);
    bool grown = true;
    std::size_t guard = 0;
    while (grown && guard++ < n * n + 4) {
        grown = false;
        for (auto& [s, t, m] : d.arrows) {
            for (std::size_t i = 0; i < n; ++i) {
                if (!reach[i][s]) continue;
                BlueprintMorphism comp = compose(m, *reach[i][s]);
                if (!reach[i][t]) {
                    reach[i][t] = comp;
                    grown = true;
                } else {
                    if (!morphisms_equal(*reach[i][t], comp, bounds).proved()) return std::nullopt;
                }
            }
        }
    }
    return reach;
}

}  // namespace detail

// The colimit of a finite directed commutative diagram, represented through
// the compatible-tuple construction truncated to the diagram; for a finite
// directed diagram the tuples project isomorphically onto the top object, so
// the colimit is materialized there with the canonical maps composed to it.
inline Colimit directed_colimit(const DirectedDiagram& d, const SearchBounds& bounds = {}) {
    if (d.objects.empty()) throw Error(ErrorCode::NotDirected, "empty diagram");
    auto reach = detail::path_closure(d, bounds);
    if (!reach) throw Error(ErrorCode::NotDirected, "diagram does not commute");
    std::size_t n = d.objects.size();
    // directedness: every pair has an upper bound
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            bool ok = false;
            for (std::size_t k = 0; k < n && !ok; ++k)
                if ((*reach)[i][k] && (*reach)[j][k]) ok = true;
            if (!ok)
                throw Error(ErrorCode::NotDirected,
                            "objects " + std::to_string(i) + " and " + std::to_string(j) +
                                " have no upper bound");
        }
    // a finite directed diagram has a top object
    std::size_t top = n;
    for (std::size_t k = 0; k < n && top == n; ++k) {
        bool all = true;
        for (std::size_t i = 0; i < n; ++i)
            if (!(*reach)[i][k]) all = false;
        if (all) top = k;
    }
    if (top == n) throw Error(ErrorCode::NotDirected, "no top object");

    Colimit c;
    c.blueprint = d.objects[top];
    for (std::size_t i = 0; i < n; ++i) c.canonical.push_back(*(*reach)[i][top]);
    return c;
}

}  // namespace blue
