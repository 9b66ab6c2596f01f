#pragma once

// Morphisms of blueprints: multiplicative on monoids, relation-preserving on
// pre-additions (validated within bounds at construction).

#include <map>
#include <memory>
#include <string>
#include <variant>
#include <vector>

#include "blue/blueprint.hpp"
#include "blue/relate.hpp"

namespace blue {

inline bool coeff_embeddable(const CoeffBase& from, const CoeffBase& to) {
    switch (from.kind) {
        case BaseKind::Unit: return true;
        case BaseKind::Nat: return to.kind != BaseKind::Unit;
        case BaseKind::Int: return to.kind == BaseKind::Int || to.kind == BaseKind::IntMod;
        case BaseKind::IntMod:
            return to.kind == BaseKind::IntMod && from.modulus % to.modulus == 0;
    }
    return false;
}

struct BlueprintMorphism {
    BlueprintPtr source;
    BlueprintPtr target;
    std::vector<Monomial> atom_images;  // indexed by source atom

    Monomial apply(const Monomial& m) const {
        if (m.zero) return Monomial::make_zero();
        const auto& tb = target->monoid.base;
        Monomial r = Monomial::constant(tb.normalize(m.coeff));
        if (tb.is_zero_value(r.coeff)) return Monomial::make_zero();
        for (auto& [a, e] : m.exps)
            for (std::uint32_t k = 0; k < e; ++k) r = raw_mul(tb, r, atom_images.at(a));
        return normalize(target->monoid, r);
    }

    FormalSum apply(const FormalSum& s) const {
        FormalSum r;
        for (auto& t : s.terms) r.terms.push_back(apply(t));
        return normalize_sum(target->monoid, r);
    }
};

// Composition g . f  (apply f first).
inline BlueprintMorphism compose(const BlueprintMorphism& g, const BlueprintMorphism& f) {
    BlueprintMorphism c;
    c.source = f.source;
    c.target = g.target;
    for (auto& img : f.atom_images) c.atom_images.push_back(g.apply(img));
    return c;
}

inline BlueprintMorphism identity_morphism(const BlueprintPtr& b) {
    BlueprintMorphism m;
    m.source = b;
    m.target = b;
    for (std::uint32_t i = 0; i < b->monoid.atoms.size(); ++i)
        m.atom_images.push_back(Monomial::atom(i));
    return m;
}

// Are f and g provably equal as morphisms (same atom images up to the word
// problem of the common target)?
inline Verdict morphisms_equal(const BlueprintMorphism& f, const BlueprintMorphism& g,
                               const SearchBounds& bounds = {}) {
    if (f.atom_images.size() != g.atom_images.size())
        return Verdict::make_refuted(json{{"kind", "arity_mismatch"}});
    for (std::size_t i = 0; i < f.atom_images.size(); ++i) {
        Verdict v = monoid_eq(f.target->monoid, f.atom_images[i], g.atom_images[i], bounds);
        if (!v.proved()) {
            json ev{{"kind", "atom_image_differs"},
                    {"atom", f.source->monoid.atoms[i]},
                    {"left", f.target->monoid.monomial_string(f.atom_images[i])},
                    {"right", f.target->monoid.monomial_string(g.atom_images[i])}};
            return v.refuted() ? Verdict::make_refuted(std::move(ev))
                               : Verdict::make_unknown("monoid_eq", std::move(ev));
        }
    }
    return Verdict::make_proved(json{{"kind", "atom_images_agree"}});
}

// Validates the atom assignment as a blueprint morphism. Returns either the
// morphism or the verdict explaining the failure.
using MorphismOrVerdict = std::variant<BlueprintMorphism, Verdict>;

inline MorphismOrVerdict make_morphism(const BlueprintPtr& b, const BlueprintPtr& c,
                                       const std::map<std::string, Monomial>& images,
                                       const SearchBounds& bounds = {}) {
    if (!coeff_embeddable(b->monoid.base, c->monoid.base))
        return Verdict::make_refuted(json{{"kind", "base_not_embeddable"},
                                          {"from", b->monoid.base.name()},
                                          {"to", c->monoid.base.name()}});
    BlueprintMorphism f;
    f.source = b;
    f.target = c;
    for (auto& name : b->monoid.atoms) {
        auto it = images.find(name);
        if (it == images.end())
            throw Error(ErrorCode::UndeclaredAtom, "no image for atom '" + name + "'");
        c->monoid.check_well_formed(it->second);
        f.atom_images.push_back(it->second);
    }
    // every generating monoid relation must map to a provable equality
    for (auto& [l, r] : b->monoid.relations) {
        Verdict v = monoid_eq(c->monoid, f.apply(l), f.apply(r), bounds);
        if (!v.proved()) {
            json ev{{"kind", "monoid_relation_not_preserved"},
                    {"relation", b->monoid.monomial_string(l) + " = " +
                                     b->monoid.monomial_string(r)},
                    {"image", c->monoid.monomial_string(f.apply(l)) + " vs " +
                                  c->monoid.monomial_string(f.apply(r))},
                    {"detail", v.evidence}};
            return v.refuted() ? Verdict::make_refuted(std::move(ev))
                               : Verdict::make_unknown("monoid_eq", std::move(ev));
        }
    }
    // every generating pre-addition relation must map into the target's
    for (auto& [l, r] : b->preadd) {
        Verdict v = related(*c, f.apply(l), f.apply(r), bounds);
        if (!v.proved()) {
            json ev{{"kind", "preaddition_relation_not_preserved"},
                    {"relation", b->sum_string(l) + " == " + b->sum_string(r)},
                    {"image", c->sum_string(f.apply(l)) + " vs " + c->sum_string(f.apply(r))},
                    {"detail", v.evidence}};
            return v.refuted() ? Verdict::make_refuted(std::move(ev))
                               : Verdict::make_unknown("related", std::move(ev));
        }
    }
    return f;
}

inline const BlueprintMorphism& expect_morphism(const MorphismOrVerdict& mv,
                                                const char* what = "morphism") {
    if (auto* m = std::get_if<BlueprintMorphism>(&mv)) return *m;
    throw Error(ErrorCode::Internal,
                std::string(what) + " failed validation: " +
                    std::get<Verdict>(mv).evidence.dump());
}

}  // namespace blue
