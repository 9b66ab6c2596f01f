#pragma once

// Blueprints: a monoid with zero carrying a pre-addition, stored as a proper
// presentation (single-term consequences are pushed into the monoid
// congruence at construction time, iterated to a bounded fixpoint).

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "blue/core.hpp"
#include "blue/monoid.hpp"

namespace blue {

// ---------------------------------------------------------------------------
// Formal sums (finite multisets of monomials; zero terms stripped)

struct FormalSum {
    std::vector<Monomial> terms;

    static FormalSum of(std::initializer_list<Monomial> ms) {
        FormalSum s;
        s.terms.assign(ms);
        return s;
    }
    static FormalSum single(Monomial m) {
        FormalSum s;
        s.terms.push_back(std::move(m));
        return s;
    }
    static FormalSum empty() { return FormalSum{}; }

    bool is_empty() const { return terms.empty(); }
    std::size_t size() const { return terms.size(); }

    std::uint32_t max_degree() const {
        std::uint32_t d = 0;
        for (auto& t : terms) d = std::max(d, t.degree());
        return d;
    }

    static int cmp(const FormalSum& a, const FormalSum& b) {
        if (a.terms.size() != b.terms.size()) return a.terms.size() < b.terms.size() ? -1 : 1;
        for (std::size_t i = 0; i < a.terms.size(); ++i) {
            int c = Monomial::cmp(a.terms[i], b.terms[i]);
            if (c != 0) return c;
        }
        return 0;
    }
    bool operator==(const FormalSum& o) const { return cmp(*this, o) == 0; }
    bool operator<(const FormalSum& o) const { return cmp(*this, o) < 0; }
};

// Normal form of a sum: monoid-normalize each term, strip zeros, collect
// coefficients per exponent vector over builtin bases, sort.
inline FormalSum normalize_sum(const MonoidPresentation& p, const FormalSum& s,
                               std::uint64_t step_cap = 100000) {
    std::vector<Monomial> ts;
    ts.reserve(s.terms.size());
    for (auto& t : s.terms) {
        Monomial n = normalize(p, t, nullptr, step_cap);
        if (!n.zero) ts.push_back(std::move(n));
    }
    if (p.base.is_builtin()) {
        std::map<std::vector<std::pair<std::uint32_t, std::uint32_t>>, std::int64_t> classes;
        for (auto& t : ts) classes[t.exps] = p.base.add(classes.count(t.exps) ? classes[t.exps] : 0, t.coeff);
        ts.clear();
        for (auto& [e, c] : classes) {
            if (p.base.is_zero_value(c)) continue;
            Monomial m;
            m.coeff = p.base.normalize(c);
            m.exps = e;
            ts.push_back(std::move(m));
        }
    }
    std::sort(ts.begin(), ts.end());
    FormalSum r;
    r.terms = std::move(ts);
    return r;
}

inline FormalSum sum_add(const FormalSum& a, const FormalSum& b) {
    FormalSum r = a;
    r.terms.insert(r.terms.end(), b.terms.begin(), b.terms.end());
    return r;
}

inline FormalSum sum_scale(const CoeffBase& base, const Monomial& m, const FormalSum& s) {
    FormalSum r;
    for (auto& t : s.terms) r.terms.push_back(raw_mul(base, m, t));
    return r;
}

inline FormalSum sum_mul(const CoeffBase& base, const FormalSum& a, const FormalSum& b) {
    FormalSum r;
    for (auto& x : a.terms)
        for (auto& y : b.terms) r.terms.push_back(raw_mul(base, x, y));
    return r;
}

// ---------------------------------------------------------------------------
// Blueprint

struct Blueprint {
    MonoidPresentation monoid;
    // Generating pre-addition relations, normalized, with single-term pairs
    // already absorbed into the monoid congruence.
    std::vector<std::pair<FormalSum, FormalSum>> preadd;
    // Properness certificate: the identifications that were absorbed.
    std::vector<std::pair<Monomial, Monomial>> identifications;
    // Saturation cache: relations derived while certifying properness
    // (append-only; consumed by the prime-ideal additive-closure check).
    std::vector<std::pair<FormalSum, FormalSum>> saturated;
    // Provenance for localizations / tensors.
    std::shared_ptr<const Blueprint> parent;

    std::string sum_string(const FormalSum& s) const {
        if (s.terms.empty()) return "0";
        std::ostringstream os;
        for (std::size_t i = 0; i < s.terms.size(); ++i) {
            if (i) os << " + ";
            os << monoid.monomial_string(s.terms[i]);
        }
        return os.str();
    }

    bool is_builtin_scalar() const {
        return monoid.base.is_builtin() && monoid.atoms.empty();
    }
};

using BlueprintPtr = std::shared_ptr<const Blueprint>;

// ---------------------------------------------------------------------------
// Proper quotient

namespace detail {

struct SumUnionFind {
    std::vector<FormalSum> reps;
    std::map<FormalSum, std::size_t> index;
    std::vector<std::size_t> up;

    std::size_t node(const FormalSum& s) {
        auto it = index.find(s);
        if (it != index.end()) return it->second;
        std::size_t id = reps.size();
        reps.push_back(s);
        up.push_back(id);
        index.emplace(s, id);
        return id;
    }
    std::size_t find(std::size_t i) {
        while (up[i] != i) i = up[i] = up[up[i]];
        return i;
    }
    bool unite(std::size_t a, std::size_t b) {
        a = find(a);
        b = find(b);
        if (a == b) return false;
        up[a] = b;
        return true;
    }
};

}  // namespace detail

// Builds the proper blueprint generated by `relations` over `monoid`:
// repeatedly saturates for single-term consequences, merges them into the
// monoid congruence, and renormalizes, until a bounded fixpoint.
inline Blueprint make_blueprint(MonoidPresentation monoid,
                                std::vector<std::pair<FormalSum, FormalSum>> relations,
                                const SearchBounds& bounds = {}) {
    for (auto& [l, r] : relations) {
        for (auto& t : l.terms) monoid.check_well_formed(t);
        for (auto& t : r.terms) monoid.check_well_formed(t);
    }

    Blueprint bp;
    std::vector<std::pair<Monomial, Monomial>> idents;
    const std::uint32_t outer_cap = 16;
    std::uint32_t outer = 0;

    while (true) {
        if (outer++ > outer_cap)
            throw Error(ErrorCode::BoundExhausted,
                        "proper quotient did not reach a fixpoint within iteration cap");
        finalize(monoid, bounds);

        // renormalize the original generators against the current monoid and
        // split off single-term consequences
        std::vector<std::pair<FormalSum, FormalSum>> gens;
        std::vector<std::pair<Monomial, Monomial>> merges;
        for (auto& [l, r] : relations) {
            FormalSum ln = normalize_sum(monoid, l, bounds.max_steps);
            FormalSum rn = normalize_sum(monoid, r, bounds.max_steps);
            if (ln == rn) continue;
            if (ln.size() <= 1 && rn.size() <= 1) {
                Monomial a = ln.is_empty() ? Monomial::make_zero() : ln.terms[0];
                Monomial b = rn.is_empty() ? Monomial::make_zero() : rn.terms[0];
                merges.push_back({a, b});
            } else {
                gens.push_back({ln, rn});
            }
        }

        if (merges.empty()) {
            // bounded saturation: look for single-term consequences reachable
            // by transitivity and small additive/multiplicative combinations
            detail::SumUnionFind uf;
            std::vector<std::pair<std::size_t, std::size_t>> pairs;
            for (auto& [l, r] : gens) {
                auto a = uf.node(l), b = uf.node(r);
                pairs.push_back({a, b});
                uf.unite(a, b);
            }
            std::uint64_t budget = std::min<std::uint64_t>(bounds.max_steps, 20000);
            std::size_t grown = 1;
            std::uint32_t rounds = 0;
            while (grown && rounds++ < 4 && budget > 0) {
                grown = 0;
                std::size_t n = pairs.size();
                for (std::size_t i = 0; i < n && budget; ++i) {
                    for (std::size_t j = i; j < n && budget; ++j) {
                        --budget;
                        const auto& [a1, b1] = pairs[i];
                        const auto& [a2, b2] = pairs[j];
                        FormalSum l = normalize_sum(
                            monoid, sum_add(uf.reps[a1], uf.reps[a2]), bounds.max_steps);
                        FormalSum r = normalize_sum(
                            monoid, sum_add(uf.reps[b1], uf.reps[b2]), bounds.max_steps);
                        if (l.size() > bounds.max_sum_length || r.size() > bounds.max_sum_length)
                            continue;
                        auto x = uf.node(l), y = uf.node(r);
                        if (uf.unite(x, y)) {
                            pairs.push_back({x, y});
                            ++grown;
                        }
                    }
                }
                // multiply relations by single atoms (one layer per round)
                for (std::size_t i = 0; i < n && budget; ++i) {
                    for (std::uint32_t a = 0; a < monoid.atoms.size() && budget; ++a) {
                        --budget;
                        Monomial m = Monomial::atom(a);
                        FormalSum l = normalize_sum(
                            monoid, sum_scale(monoid.base, m, uf.reps[pairs[i].first]),
                            bounds.max_steps);
                        FormalSum r = normalize_sum(
                            monoid, sum_scale(monoid.base, m, uf.reps[pairs[i].second]),
                            bounds.max_steps);
                        if (l.max_degree() > bounds.max_degree ||
                            r.max_degree() > bounds.max_degree)
                            continue;
                        auto x = uf.node(l), y = uf.node(r);
                        if (uf.unite(x, y)) {
                            pairs.push_back({x, y});
                            ++grown;
                        }
                    }
                }
            }
            // single-term members of a common class become identifications
            std::map<std::size_t, std::vector<FormalSum>> classes;
            for (std::size_t i = 0; i < uf.reps.size(); ++i)
                if (uf.reps[i].size() <= 1) classes[uf.find(i)].push_back(uf.reps[i]);
            for (auto& [root, singles] : classes) {
                for (std::size_t i = 1; i < singles.size(); ++i) {
                    Monomial a = singles[0].is_empty() ? Monomial::make_zero()
                                                       : singles[0].terms[0];
                    Monomial b = singles[i].is_empty() ? Monomial::make_zero()
                                                       : singles[i].terms[0];
                    if (!(a == b)) merges.push_back({a, b});
                }
            }
            if (merges.empty()) {
                bp.monoid = monoid;
                bp.preadd = gens;
                bp.identifications = idents;
                bp.saturated.clear();
                for (auto& [x, y] : pairs) {
                    FormalSum l = uf.reps[x], r = uf.reps[y];
                    if (!(l == r)) bp.saturated.push_back({l, r});
                }
                std::sort(bp.saturated.begin(), bp.saturated.end(),
                          [](const auto& a, const auto& b) {
                              int c = FormalSum::cmp(a.first, b.first);
                              if (c != 0) return c < 0;
                              return FormalSum::cmp(a.second, b.second) < 0;
                          });
                bp.saturated.erase(std::unique(bp.saturated.begin(), bp.saturated.end(),
                                               [](const auto& a, const auto& b) {
                                                   return a.first == b.first &&
                                                          a.second == b.second;
                                               }),
                                   bp.saturated.end());
                return bp;
            }
        }

        for (auto& [a, b] : merges) {
            monoid.relations.push_back({a, b});
            idents.push_back({a, b});
        }
        // the original generator list is renormalized on the next pass
    }
}

// Convenience overload with raw relation pairs.
inline Blueprint make_blueprint(MonoidPresentation monoid,
                                std::initializer_list<std::pair<FormalSum, FormalSum>> rels,
                                const SearchBounds& bounds = {}) {
    return make_blueprint(std::move(monoid),
                          std::vector<std::pair<FormalSum, FormalSum>>(rels), bounds);
}

// ---------------------------------------------------------------------------
// Stock blueprints

inline BlueprintPtr f1_blueprint() {
    MonoidPresentation p;
    finalize(p);
    auto bp = std::make_shared<Blueprint>();
    bp->monoid = std::move(p);
    return bp;
}

inline BlueprintPtr f1_poly(std::vector<std::string> atoms) {
    MonoidPresentation p;
    p.atoms = std::move(atoms);
    finalize(p);
    auto bp = std::make_shared<Blueprint>();
    bp->monoid = std::move(p);
    return bp;
}

inline BlueprintPtr builtin_blueprint(CoeffBase base) {
    MonoidPresentation p;
    p.base = base;
    finalize(p);
    auto bp = std::make_shared<Blueprint>();
    bp->monoid = std::move(p);
    return bp;
}

inline BlueprintPtr nat_blueprint() { return builtin_blueprint({BaseKind::Nat, 0}); }
inline BlueprintPtr int_blueprint() { return builtin_blueprint({BaseKind::Int, 0}); }
inline BlueprintPtr intmod_blueprint(std::int64_t n) {
    return builtin_blueprint({BaseKind::IntMod, n});
}

// The free blueprint B[T_1,...,T_n]: atoms extended, pre-addition generated
// by the image of B's generators.
inline BlueprintPtr free_blueprint(const BlueprintPtr& b, const std::vector<std::string>& vars,
                                   const SearchBounds& bounds = {}) {
    MonoidPresentation p = b->monoid;
    for (auto& v : vars) {
        if (p.has_atom(v)) throw Error(ErrorCode::NameClash, "variable '" + v + "' already an atom");
        p.atoms.push_back(v);
    }
    p.rules.clear();
    p.unoriented.clear();
    auto bp = std::make_shared<Blueprint>(make_blueprint(p, b->preadd, bounds));
    return bp;
}

}  // namespace blue
