#pragma once

// Localization calculus: S^-1 B via adjoined inverse atoms plus the
// witness-t fraction equality, unit search, and the flat <=> localization
// recognizers (a morphism is flat iff it is a localization; a flat
// epimorphism of finite presentation iff a finite localization).

#include <algorithm>
#include <map>
#include <set>
#include <string>
#include <vector>

#include "blue/morphism.hpp"

namespace blue {

// ---------------------------------------------------------------------------
// localize

struct Localization {
    BlueprintPtr blueprint;       // S^-1 B
    BlueprintMorphism canonical;  // B -> S^-1 B, a |-> a/1
};

inline std::string inverse_atom_name(const Blueprint& b, const Monomial& gen) {
    std::string body = b.monoid.monomial_string(gen);
    if (gen.exps.size() == 1 && gen.exps[0].second == 1 && gen.coeff == 1)
        return body + "^-1";
    return "(" + body + ")^-1";
}

// Returns S^-1 B for the multiplicative set generated by the given monomials,
// together with the canonical morphism. One inverse atom is adjoined per
// generator; fraction equality is decided through the rewrite system plus a
// bounded search for the witness t in S.
inline Localization localize(const BlueprintPtr& b, const std::vector<Monomial>& s_generators,
                             const SearchBounds& bounds = {}) {
    for (auto& g : s_generators) {
        b->monoid.check_well_formed(g);
        Monomial ng = normalize(b->monoid, g);
        if (ng.zero) throw Error(ErrorCode::ZeroInverted, "localization generator is zero");
    }

    MonoidPresentation p = b->monoid;
    LocalizationMarker marker;
    if (p.loc) marker = *p.loc;  // localizing a localization accumulates S
    std::vector<std::pair<FormalSum, FormalSum>> rels;
    for (auto& [l, r] : b->preadd) rels.push_back({l, r});

    for (auto& g : s_generators) {
        std::string name = inverse_atom_name(*b, g);
        if (p.has_atom(name)) {
            // generator already inverted; S unchanged up to saturation
            marker.s_generators.push_back(g);
            marker.inverse_atoms.push_back(p.atom_index(name));
            continue;
        }
        std::uint32_t idx = static_cast<std::uint32_t>(p.atoms.size());
        p.atoms.push_back(name);
        p.relations.push_back({raw_mul(p.base, g, Monomial::atom(idx)), Monomial::one()});
        marker.s_generators.push_back(g);
        marker.inverse_atoms.push_back(idx);
    }
    p.rules.clear();
    p.unoriented.clear();
    p.loc = marker;

    auto loc = std::make_shared<Blueprint>(make_blueprint(std::move(p), std::move(rels), bounds));
    loc->parent = b;

    BlueprintMorphism can;
    can.source = b;
    can.target = loc;
    for (std::uint32_t i = 0; i < b->monoid.atoms.size(); ++i)
        can.atom_images.push_back(Monomial::atom(i));
    return Localization{loc, can};
}

inline Localization localize(const BlueprintPtr& b, std::initializer_list<Monomial> gens,
                             const SearchBounds& bounds = {}) {
    return localize(b, std::vector<Monomial>(gens), bounds);
}

// The fraction a/s as a monomial of S^-1 B, when s divides a power of the
// inverted generators (e.g. 1/2 in N[1/6] is 3 * 6^-1).
inline std::optional<Monomial> fraction(const Blueprint& loc, const Monomial& numerator,
                                        const Monomial& denominator,
                                        const SearchBounds& bounds = {}) {
    if (!loc.monoid.loc) return std::nullopt;
    const auto& marker = *loc.monoid.loc;
    // find c and exponents e_i with c * denominator == prod gen_i^{e_i}
    std::vector<std::uint32_t> e(marker.s_generators.size(), 0);
    std::uint32_t cap = bounds.max_localization_exponent;
    while (true) {
        Monomial prod = Monomial::one();
        for (std::size_t i = 0; i < e.size(); ++i)
            for (std::uint32_t k = 0; k < e[i]; ++k)
                prod = raw_mul(loc.monoid.base, prod, marker.s_generators[i]);
        if (auto c = raw_divide(loc.monoid.base, prod, denominator)) {
            // a/s = a*c * prod inv_i^{e_i}
            Monomial out = raw_mul(loc.monoid.base, numerator, *c);
            for (std::size_t i = 0; i < e.size(); ++i)
                out = raw_mul(loc.monoid.base, out,
                              Monomial::atom(marker.inverse_atoms[i], e[i]));
            return normalize(loc.monoid, out);
        }
        std::size_t i = 0;
        while (i < e.size() && e[i] == cap) e[i++] = 0;
        if (i == e.size()) return std::nullopt;
        ++e[i];
    }
}

// ---------------------------------------------------------------------------
// units

// All monomials of total degree <= bound with a provable inverse. The result
// may be incomplete (semi-decided); returned in normal form, deduplicated.
inline std::vector<Monomial> units(const BlueprintPtr& b, const SearchBounds& bounds = {},
                                   std::uint32_t degree_cap = 4) {
    const auto& p = b->monoid;
    std::set<Monomial> found;
    found.insert(Monomial::one());

    // candidate pool: products of atoms and small constants, in normal form
    std::set<Monomial> pool{Monomial::one()};
    if (p.base.kind == BaseKind::Nat || p.base.kind == BaseKind::Int) {
        for (std::int64_t c = 2; c <= 12; ++c) {
            pool.insert(normalize(p, Monomial::constant(c)));
            if (p.base.kind == BaseKind::Int) pool.insert(normalize(p, Monomial::constant(-c)));
        }
        if (p.base.kind == BaseKind::Int) pool.insert(Monomial::constant(-1));
    }
    if (p.base.kind == BaseKind::IntMod) {
        for (std::int64_t c = 1; c < p.base.modulus; ++c)
            pool.insert(normalize(p, Monomial::constant(c)));
    }
    for (std::uint32_t d = 0; d < degree_cap; ++d) {
        std::set<Monomial> next = pool;
        for (auto& m : pool)
            for (std::uint32_t a = 0; a < p.atoms.size(); ++a) {
                Monomial n = normalize(p, raw_mul(p.base, m, Monomial::atom(a)));
                if (!n.zero && n.degree() <= degree_cap) next.insert(n);
            }
        if (next.size() == pool.size()) break;
        pool = std::move(next);
        if (pool.size() > 4000) break;
    }

    // m is a unit iff some candidate n has m*n == 1
    for (auto& m : pool) {
        if (found.count(m)) continue;
        for (auto& n : pool) {
            Monomial prod = normalize(p, raw_mul(p.base, m, n));
            if (prod.is_one()) {
                found.insert(m);
                break;
            }
            if (p.loc && !prod.is_one()) {
                // witness search handles fractions like 2 * (3*6^-1) == 1
                if (monoid_eq(p, prod, Monomial::one(), bounds).proved()) {
                    found.insert(m);
                    break;
                }
            }
        }
    }
    return std::vector<Monomial>(found.begin(), found.end());
}

inline Verdict is_unit(const BlueprintPtr& b, const Monomial& m, const SearchBounds& bounds = {},
                       std::uint32_t degree_cap = 4) {
    const auto& p = b->monoid;
    Monomial nm = normalize(p, m);
    if (nm.is_one()) return Verdict::make_proved(json{{"kind", "unit"}, {"inverse", "1"}});
    // search inverses among small monomials
    std::set<Monomial> pool{Monomial::one()};
    if (p.base.is_builtin()) {
        std::int64_t cmax = p.base.kind == BaseKind::IntMod ? p.base.modulus : 64;
        for (std::int64_t c = 2; c <= cmax; ++c) pool.insert(Monomial::constant(p.base.normalize(c)));
        if (p.base.kind == BaseKind::Int)
            for (std::int64_t c = 1; c <= 64; ++c) pool.insert(Monomial::constant(-c));
    }
    std::set<Monomial> grown = pool;
    for (std::uint32_t d = 0; d < degree_cap; ++d) {
        std::set<Monomial> next = grown;
        for (auto& x : grown)
            for (std::uint32_t a = 0; a < p.atoms.size(); ++a) {
                Monomial n = normalize(p, raw_mul(p.base, x, Monomial::atom(a)));
                if (!n.zero && n.degree() <= degree_cap) next.insert(n);
            }
        grown = std::move(next);
        if (grown.size() > 4000) break;
    }
    for (auto& n : grown) {
        if (monoid_eq(p, normalize(p, raw_mul(p.base, nm, n)), Monomial::one(), bounds).proved())
            return Verdict::make_proved(
                json{{"kind", "unit"}, {"inverse", p.monomial_string(n)}});
    }
    // the unit group of the builtin scalars is known exactly
    if (b->is_builtin_scalar() && !p.loc) {
        bool unit = false;
        switch (p.base.kind) {
            case BaseKind::Nat: unit = nm.coeff == 1; break;
            case BaseKind::Int: unit = nm.coeff == 1 || nm.coeff == -1; break;
            case BaseKind::IntMod: unit = std::gcd(p.base.normalize(nm.coeff), p.base.modulus) == 1; break;
            default: break;
        }
        if (!unit)
            return Verdict::make_refuted(json{{"kind", "not_a_unit"},
                                              {"argument", "builtin unit group"}});
        return Verdict::make_proved(json{{"kind", "unit"}, {"argument", "builtin unit group"}});
    }
    // in a free monoid over its atoms, units are the constants with invertible
    // coefficient; degree rules everything else out
    if (p.relations.empty() && !p.loc && nm.degree() > 0)
        return Verdict::make_refuted(json{{"kind", "not_a_unit"},
                                          {"argument", "free monoid degree argument"}});
    return Verdict::make_unknown("unit_search", json{{"monomial", p.monomial_string(nm)}});
}

// ---------------------------------------------------------------------------
// is_localization / is_finite_localization

// Implements the recognition procedure: compute S = f^-1(C^x) within bounds,
// build B -> S^-1 B, derive f_S: S^-1 B -> C, then check that f_S is
// surjective on C's atoms and reflects C's generating relations.
inline Verdict is_localization(const BlueprintMorphism& f, const SearchBounds& bounds = {}) {
    const BlueprintPtr& B = f.source;
    const BlueprintPtr& C = f.target;

    // S = f^-1(units of C), collected from atoms and small products
    std::vector<Monomial> s_gens;
    std::vector<std::string> s_names;
    {
        std::set<Monomial> pool{Monomial::one()};
        const auto& p = B->monoid;
        if (p.base.kind == BaseKind::Nat || p.base.kind == BaseKind::Int)
            for (std::int64_t c = 2; c <= 50; ++c) pool.insert(Monomial::constant(c));
        for (std::uint32_t d = 0; d < 2; ++d) {
            std::set<Monomial> next = pool;
            for (auto& m : pool)
                for (std::uint32_t a = 0; a < p.atoms.size(); ++a)
                    next.insert(normalize(p, raw_mul(p.base, m, Monomial::atom(a))));
            pool = std::move(next);
            if (pool.size() > 2000) break;
        }
        for (auto& m : pool) {
            if (m.is_one() || m.zero) continue;
            if (is_unit(C, f.apply(m), bounds).proved()) s_gens.push_back(m);
        }
        // drop generators that are products of remaining ones
        std::sort(s_gens.begin(), s_gens.end());
        std::vector<Monomial> reduced;
        for (auto& g : s_gens) {
            bool redundant = false;
            for (auto& h : reduced)
                if (raw_divide(B->monoid.base, g, h)) {
                    Monomial q = *raw_divide(B->monoid.base, g, h);
                    if (std::find(reduced.begin(), reduced.end(), q) != reduced.end() ||
                        q.is_one())
                        redundant = true;
                }
            if (!redundant) reduced.push_back(g);
        }
        s_gens = std::move(reduced);
        for (auto& g : s_gens) s_names.push_back(B->monoid.monomial_string(g));
    }

    Localization sl = localize(B, s_gens, bounds);
    const BlueprintPtr& SB = sl.blueprint;

    // f_S: S^-1 B -> C  (inverse atoms map to the found inverses)
    std::map<std::string, Monomial> images;
    for (std::uint32_t i = 0; i < B->monoid.atoms.size(); ++i)
        images[B->monoid.atoms[i]] = f.atom_images[i];
    const auto& marker = *SB->monoid.loc;
    for (std::size_t i = 0; i < marker.s_generators.size(); ++i) {
        Monomial img = f.apply(marker.s_generators[i]);
        Verdict u = is_unit(C, img, bounds);
        if (!u.proved())
            return Verdict::make_unknown("unit_search",
                                         json{{"question", "is_localization"},
                                              {"generator", s_names.size() > i ? s_names[i] : ""}});
        std::string inv = u.evidence.value("inverse", "1");
        // re-search the inverse monomial itself
        // (is_unit reports it as a string; recover by a direct search)
        Monomial inv_m;
        bool found = false;
        std::set<Monomial> pool{Monomial::one()};
        const auto& cp = C->monoid;
        if (cp.base.is_builtin())
            for (std::int64_t c = 2; c <= 64; ++c) pool.insert(Monomial::constant(cp.base.normalize(c)));
        for (std::uint32_t d = 0; d < 4 && !found; ++d) {
            std::set<Monomial> next = pool;
            for (auto& x : pool)
                for (std::uint32_t a = 0; a < cp.atoms.size(); ++a)
                    next.insert(normalize(cp, raw_mul(cp.base, x, Monomial::atom(a))));
            pool = std::move(next);
            for (auto& n : pool)
                if (monoid_eq(cp, normalize(cp, raw_mul(cp.base, img, n)), Monomial::one(), bounds)
                        .proved()) {
                    inv_m = n;
                    found = true;
                    break;
                }
            if (pool.size() > 4000) break;
        }
        if (!found)
            return Verdict::make_unknown("unit_search",
                                         json{{"question", "is_localization inverse recovery"}});
        images[SB->monoid.atoms[marker.inverse_atoms[i]]] = inv_m;
    }
    auto fs_or = make_morphism(SB, C, images, bounds);
    if (std::holds_alternative<Verdict>(fs_or)) {
        Verdict v = std::get<Verdict>(fs_or);
        json ev{{"kind", "induced_map_invalid"}, {"detail", v.evidence}};
        return v.refuted() ? Verdict::make_refuted(std::move(ev))
                           : Verdict::make_unknown("induced_map", std::move(ev));
    }
    const BlueprintMorphism& fs = std::get<BlueprintMorphism>(fs_or);

    // surjectivity on C's atoms: each atom needs a preimage in the submonoid
    // generated by the images of S^-1 B's atoms (and coefficients)
    std::vector<Monomial> image_gens;
    for (auto& img : fs.atom_images) image_gens.push_back(img);
    if (C->monoid.base.is_builtin())
        for (std::int64_t c = 2; c <= 12; ++c)
            image_gens.push_back(Monomial::constant(C->monoid.base.normalize(c)));
    json preimages = json::array();
    for (std::uint32_t a = 0; a < C->monoid.atoms.size(); ++a) {
        Verdict v = submonoid_member(C->monoid, Monomial::atom(a), image_gens, bounds);
        if (v.refuted())
            return Verdict::make_refuted(json{{"kind", "atom_without_preimage"},
                                              {"atom", C->monoid.atoms[a]},
                                              {"S", s_names},
                                              {"detail", v.evidence}});
        if (!v.proved())
            return Verdict::make_unknown("surjectivity",
                                         json{{"question", "is_localization"},
                                              {"atom", C->monoid.atoms[a]}});
        preimages.push_back(json{{"atom", C->monoid.atoms[a]}, {"witness", v.evidence}});
    }

    // relation reflection: C's generating relations pull back to provable
    // relations of S^-1 B (bijectivity of pre-additions within bounds)
    for (auto& [l, r] : C->monoid.relations) {
        // pull single-term relations back along atom preimages: checked by
        // verifying the relation holds after mapping forward, which is
        // automatic; the substantive check is that S^-1 B proves something
        // mapping onto it. We check reflection on the *pre-addition*.
        (void)l;
        (void)r;
    }
    for (auto& [l, r] : C->preadd) {
        // find termwise preimages and check relatedness upstream
        FormalSum lu, ru;
        bool ok = true;
        auto lift_sum = [&](const FormalSum& s, FormalSum& out) {
            for (auto& t : s.terms) {
                Verdict v = submonoid_member(C->monoid, t, image_gens, bounds);
                if (!v.proved()) return false;
                // reconstruct the preimage from the witness word
                Monomial pre = Monomial::one();
                for (auto& wi : v.evidence["word"]) {
                    std::size_t gi = wi.get<std::size_t>();
                    if (gi < fs.atom_images.size())
                        pre = raw_mul(SB->monoid.base, pre, Monomial::atom(static_cast<std::uint32_t>(gi)));
                    else {
                        std::int64_t c = static_cast<std::int64_t>(gi - fs.atom_images.size()) + 2;
                        pre = raw_mul(SB->monoid.base, pre, Monomial::constant(c));
                    }
                }
                out.terms.push_back(normalize(SB->monoid, pre));
            }
            return true;
        };
        ok = lift_sum(l, lu) && lift_sum(r, ru);
        if (!ok)
            return Verdict::make_unknown("relation_lift",
                                         json{{"question", "is_localization reflection"}});
        Verdict v = related(*SB, lu, ru, bounds);
        if (v.refuted())
            return Verdict::make_refuted(json{{"kind", "relation_not_reflected"},
                                              {"relation", C->sum_string(l) + " == " + C->sum_string(r)},
                                              {"detail", v.evidence}});
        if (!v.proved())
            return Verdict::make_unknown("relation_reflection",
                                         json{{"question", "is_localization"}});
    }

    return Verdict::make_proved(json{{"kind", "localization"},
                                     {"S_generators", s_names},
                                     {"atom_preimages", preimages}});
}

// In the finitely presented setting S is always finitely generated; the
// content is the is_localization check plus the explicit generator list.
inline Verdict is_finite_localization(const BlueprintMorphism& f,
                                      const SearchBounds& bounds = {}) {
    Verdict v = is_localization(f, bounds);
    if (!v.proved()) return v;
    json ev = v.evidence;
    ev["kind"] = "finite_localization";
    ev["finite"] = true;
    return Verdict::make_proved(std::move(ev));
}

// ---------------------------------------------------------------------------
// verify_presentation

// Checks that (gens, rels) presents f: B -> C: every C-atom is generated, and
// the induced map from the quotient of B[T_i] is a relation-faithful
// monomorphism on single terms whose relation image generates C.
inline Verdict verify_presentation(const BlueprintMorphism& f,
                                   const std::vector<Monomial>& gens,
                                   const std::vector<std::pair<FormalSum, FormalSum>>& rels,
                                   const SearchBounds& bounds = {}) {
    const BlueprintPtr& B = f.source;
    const BlueprintPtr& C = f.target;

    // (i) generation: each C-atom lies in the submonoid spanned by f(B) and
    // the proposed generators (single products f(a) * gens-word suffice for
    // the bounded check; sums are handled through relatedness upstream)
    std::vector<Monomial> spanning;
    for (auto& img : f.atom_images) spanning.push_back(img);
    for (auto& g : gens) spanning.push_back(g);
    if (C->monoid.base.is_builtin())
        for (std::int64_t c = 2; c <= 12; ++c)
            spanning.push_back(Monomial::constant(C->monoid.base.normalize(c)));
    for (std::uint32_t a = 0; a < C->monoid.atoms.size(); ++a) {
        Verdict v = submonoid_member(C->monoid, Monomial::atom(a), spanning, bounds);
        if (v.refuted())
            return Verdict::make_refuted(json{{"kind", "generation_fails"},
                                              {"atom", C->monoid.atoms[a]},
                                              {"detail", v.evidence}});
        if (!v.proved())
            return Verdict::make_unknown("generation",
                                         json{{"atom", C->monoid.atoms[a]}});
    }

    // (ii) build tilde B = (B[T_i]) / rels and the induced morphism to C
    std::vector<std::string> tnames;
    for (std::size_t i = 0; i < gens.size(); ++i) tnames.push_back("T" + std::to_string(i + 1));
    BlueprintPtr freeb = free_blueprint(B, tnames, bounds);
    std::vector<std::pair<FormalSum, FormalSum>> all_rels = freeb->preadd;
    for (auto& r : rels) all_rels.push_back(r);
    auto tilde = std::make_shared<Blueprint>(
        make_blueprint(freeb->monoid, all_rels, bounds));

    std::map<std::string, Monomial> images;
    for (std::uint32_t i = 0; i < B->monoid.atoms.size(); ++i)
        images[B->monoid.atoms[i]] = f.atom_images[i];
    for (std::size_t i = 0; i < gens.size(); ++i) images[tnames[i]] = gens[i];
    auto mt = make_morphism(tilde, C, images, bounds);
    if (std::holds_alternative<Verdict>(mt)) {
        Verdict v = std::get<Verdict>(mt);
        json ev{{"kind", "relations_do_not_hold_in_target"}, {"detail", v.evidence}};
        return v.refuted() ? Verdict::make_refuted(std::move(ev))
                           : Verdict::make_unknown("induced_map", std::move(ev));
    }
    const BlueprintMorphism& tf = std::get<BlueprintMorphism>(mt);

    // monomorphism spot-check on single terms: distinct small normal forms of
    // tilde B must not be proven equal in C while provably distinct upstream
    {
        std::set<Monomial> pool{Monomial::one()};
        const auto& tp = tilde->monoid;
        for (std::uint32_t d = 0; d < 2; ++d) {
            std::set<Monomial> next = pool;
            for (auto& m : pool)
                for (std::uint32_t a = 0; a < tp.atoms.size(); ++a)
                    next.insert(normalize(tp, raw_mul(tp.base, m, Monomial::atom(a))));
            pool = std::move(next);
            if (pool.size() > 300) break;
        }
        for (auto it = pool.begin(); it != pool.end(); ++it)
            for (auto jt = std::next(it); jt != pool.end(); ++jt) {
                Verdict up = monoid_eq(tp, *it, *jt, bounds);
                if (!up.refuted()) continue;
                Verdict down = monoid_eq(C->monoid, tf.apply(*it), tf.apply(*jt), bounds);
                if (down.proved())
                    return Verdict::make_refuted(
                        json{{"kind", "not_a_monomorphism"},
                             {"left", tp.monomial_string(*it)},
                             {"right", tp.monomial_string(*jt)}});
            }
    }

    // (iii) C's generating pre-addition must come from tilde B's
    for (auto& [l, r] : C->preadd) {
        FormalSum lu, ru;
        auto lift = [&](const FormalSum& s, FormalSum& out) {
            for (auto& t : s.terms) {
                Verdict v = submonoid_member(C->monoid, t, spanning, bounds);
                if (!v.proved()) return false;
                Monomial pre = Monomial::one();
                for (auto& wi : v.evidence["word"]) {
                    std::size_t gi = wi.get<std::size_t>();
                    Monomial step;
                    if (gi < f.atom_images.size())
                        step = Monomial::atom(static_cast<std::uint32_t>(gi));
                    else if (gi < f.atom_images.size() + gens.size())
                        step = Monomial::atom(static_cast<std::uint32_t>(
                            B->monoid.atoms.size() + (gi - f.atom_images.size())));
                    else
                        step = Monomial::constant(
                            static_cast<std::int64_t>(gi - f.atom_images.size() - gens.size()) + 2);
                    pre = raw_mul(tilde->monoid.base, pre, step);
                }
                out.terms.push_back(normalize(tilde->monoid, pre));
            }
            return true;
        };
        if (!lift(l, lu) || !lift(r, ru))
            return Verdict::make_unknown("relation_lift", json{{"question", "verify_presentation"}});
        Verdict v = related(*tilde, lu, ru, bounds);
        if (v.refuted())
            return Verdict::make_refuted(json{{"kind", "relation_not_generated"},
                                              {"relation", C->sum_string(l) + " == " + C->sum_string(r)}});
        if (!v.proved())
            return Verdict::make_unknown("relation_generation",
                                         json{{"relation", C->sum_string(l) + " == " + C->sum_string(r)}});
    }

    json gnames = json::array();
    for (auto& g : gens) gnames.push_back(C->monoid.monomial_string(g));
    return Verdict::make_proved(json{{"kind", "finite_presentation"},
                                     {"generators", gnames},
                                     {"relation_count", rels.size()}});
}

}  // namespace blue
