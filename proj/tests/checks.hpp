#pragma once

// Randomized whole-family checks shared by the property tests and the
// acceptance runner. Each returns a tally instead of asserting.

#include "saito/orbifold.hpp"

#include "support.hpp"

#include <map>
#include <sstream>

namespace saito::checks {

struct Tally {
    int cases = 0;
    int failures = 0;
    std::string first_failure;

    void record(bool ok, const std::string& what) {
        ++cases;
        if (ok) return;
        if (failures++ == 0) first_failure = what;
    }
};

inline const FamilySpec& family(int f, int k) {
    static std::map<std::pair<int, int>, FamilySpec> cache;
    auto it = cache.find({f, k});
    if (it == cache.end()) it = cache.emplace(std::make_pair(f, k), build_family(f, k)).first;
    return it->second;
}

inline std::string cell(int f, int k) { return "family " + std::to_string(f) + " k " + std::to_string(k); }

// (1, k <= 5), (2, k <= 4), (3, k <= 3), (4, 4..6), (5, k <= 3)
inline std::vector<std::pair<int, int>> verification_grid() {
    std::vector<std::pair<int, int>> out;
    for (int k = 1; k <= 5; ++k) out.push_back({1, k});
    for (int k = 1; k <= 4; ++k) out.push_back({2, k});
    for (int k = 1; k <= 3; ++k) out.push_back({3, k});
    for (int k = 4; k <= 6; ++k) out.push_back({4, k});
    for (int k = 1; k <= 3; ++k) out.push_back({5, k});
    return out;
}

// k in 1..5 for families 1, 2, 3, 5 and 4..6 for family 4.
inline std::vector<std::pair<int, int>> milnor_grid() {
    std::vector<std::pair<int, int>> out;
    for (int f : {1, 2, 3, 5})
        for (int k = 1; k <= 5; ++k) out.push_back({f, k});
    for (int k = 4; k <= 6; ++k) out.push_back({4, k});
    return out;
}

inline std::vector<const Unfolding*> unfoldings(const FamilySpec& F) { return {F.FG.get(), F.Fbar.get(), F.Ffix.get()}; }

// Coordinates get exponents up to 3, parameters at most 1, z in [-1, 1].
inline Poly random_rep(std::mt19937_64& rng, const Unfolding& U, int terms) {
    std::vector<std::size_t> vars = U.jac.sing.vars;
    std::vector<int> bounds(vars.size(), 3);
    for (std::size_t p : U.params) {
        vars.push_back(p);
        bounds.push_back(1);
    }
    return testing::random_poly(rng, U.table, vars, bounds, terms, -1, 1);
}

inline bool free_of(const Poly& p, const std::vector<std::size_t>& vars) {
    for (const auto& [m, c] : p.terms())
        for (std::size_t v : vars)
            if (m[v] != 0) return false;
    return true;
}

inline Tally certificates(const std::vector<std::pair<int, int>>& cells, int per_unfolding, unsigned seed) {
    std::mt19937_64 rng(seed);
    Tally t;
    for (auto [f, k] : cells)
        for (const Unfolding* U : unfoldings(family(f, k)))
            for (int i = 0; i < per_unfolding; ++i) {
                Poly rep = random_rep(rng, *U, 4);
                auto r = reduce_to_basis(*U, rep);
                bool ok = check_certificate(*U, rep, r);
                for (const auto& c : r.coords) ok = ok && free_of(c, U->jac.sing.vars);
                t.record(ok, cell(f, k) + ": " + format_poly(rep));
            }
    return t;
}

inline Tally exact_forms(const std::vector<std::pair<int, int>>& cells, int per_unfolding, unsigned seed) {
    std::mt19937_64 rng(seed);
    Tally t;
    for (auto [f, k] : cells)
        for (const Unfolding* U : unfoldings(family(f, k)))
            for (int i = 0; i < per_unfolding; ++i) {
                std::vector<Poly> eta;
                for (std::size_t j = 0; j < U->jac.sing.vars.size(); ++j) eta.push_back(random_rep(rng, *U, 2));
                auto r = reduce_to_basis(*U, d_image(*U, eta));
                bool ok = std::all_of(r.coords.begin(), r.coords.end(), [](const Poly& c) { return c.is_zero(); });
                t.record(ok, cell(f, k) + ": eta[0] = " + format_poly(eta[0]));
            }
    return t;
}

inline Tally flatness(const std::vector<std::pair<int, int>>& cells) {
    Tally t;
    for (auto [f, k] : cells) {
        const auto& F = family(f, k);
        const auto& A = F.bar_connection;
        for (std::size_t a = 0; a < A.size(); ++a)
            for (std::size_t b = a + 1; b < A.size(); ++b)
                t.record(is_zero_matrix(flatness_defect(*F.Fbar, a, A[a], b, A[b])),
                         cell(f, k) + ": " + F.bar_params[a] + ", " + F.bar_params[b]);
    }
    return t;
}

inline OrbifoldClass at_origin(const FamilySpec& F, const OrbifoldClass& c) {
    std::map<std::string, Poly> sub;
    for (const auto& name : F.orb_params) sub.emplace(name, Poly(F.orb_table));
    return apply_substitution(F, c, sub);
}

// The z^-1 part of the connection at v = 0 against the orbifold product of the
// direction's basis element with a random sector combination.
inline Tally residues(const std::vector<std::pair<int, int>>& cells, int per_cell, unsigned seed) {
    std::mt19937_64 rng(seed);
    Tally t;
    const GroupElement id = GroupElement::identity(3);
    for (auto [f, k] : cells) {
        const auto& F = family(f, k);
        auto A = F.algebra();
        for (int i = 0; i < per_cell; ++i) {
            Sector s = i % 2 ? Sector::g : Sector::id;
            std::size_t n = s == Sector::id ? F.k_id : F.k_g;
            Poly rep(F.orb_table);
            OrbifoldClass c = F.zero();
            for (std::size_t j = 0; j < n; ++j) {
                Poly a = Poly::constant(F.orb_table, testing::random_rational(rng, 3));
                rep += a * F.basis_poly(s, j);
                c += F.unit(s, j) * a;
            }
            Direction d{i % 3 == 0 ? Sector::g : Sector::id, 0};
            d.index = static_cast<std::size_t>(i / 3) % (d.sector == Sector::id ? F.k_id : F.k_g);
            SectorElement lhs{d.sector == Sector::g ? F.g : id, F.basis_poly(d.sector, d.index)};
            SectorElement rhs{s == Sector::g ? F.g : id, rep};
            auto expected = times_z_inverse(F, class_of(F, A.product(lhs, rhs)));
            auto residue = at_origin(F, z_inverse_part(F, orbifold_gm(F, d, c)));
            t.record(residue == expected, cell(f, k) + ": " + direction_name(d) + " on " + format_class(F, c));
        }
    }
    return t;
}

inline int max_degree(const Poly& p, const std::vector<std::size_t>& vars) {
    int d = 0;
    for (const auto& [m, c] : p.terms()) {
        int s = 0;
        for (std::size_t v : vars) s += m[v];
        d = std::max(d, s);
    }
    return d;
}

// Normal forms of f and f^g against the degree-wise dense oracle, and of the
// resolution polynomial (not quasi-homogeneous) against truncated ideal
// membership of p - nf(p). Algebras with mu > 12 are skipped.
inline Tally oracle_normal_forms(const std::vector<std::pair<int, int>>& cells, int per_algebra, unsigned seed) {
    std::mt19937_64 rng(seed);
    Tally t;
    for (auto [f, k] : cells) {
        const auto& F = family(f, k);
        for (const JacobianAlgebra* jac : {F.jac_f.get(), F.jac_fg.get()}) {
            const auto& s = jac->sing;
            if (jac->mu > 12 || s.vars.empty()) continue;
            testing::DenseJacobianOracle oracle(s);
            std::vector<int> bounds(s.vars.size(), 4);
            for (int i = 0; i < per_algebra; ++i) {
                Poly p = testing::random_poly(rng, s.poly.table(), s.vars, bounds, 5);
                t.record(jac->nf(p) == oracle.normal_form(p, jac->basis), cell(f, k) + ": " + format_poly(p));
            }
        }
        const auto& jb = *F.jac_fbar;
        if (jb.mu > 12) continue;
        std::vector<Poly> gens;
        for (std::size_t v : jb.sing.vars) gens.push_back(partial(jb.sing.poly, v));
        std::vector<int> bounds(jb.sing.vars.size(), 2);
        for (int i = 0; i < per_algebra; ++i) {
            Poly p = testing::random_poly(rng, jb.sing.poly.table(), jb.sing.vars, bounds, 4);
            Poly r = jb.nf(p);
            bool standard = true;
            for (const auto& [m, c] : r.terms())
                standard = standard && std::find(jb.basis.begin(), jb.basis.end(), m) != jb.basis.end();
            int base = std::max(max_degree(p, jb.sing.vars), max_degree(r, jb.sing.vars));
            // Membership at any truncation certifies it, so widen until it shows up.
            bool member = false;
            for (int extra = 2; extra <= 8 && !member; extra += 2)
                member = testing::TruncatedIdealOracle(gens, jb.sing.vars, base + extra).contains(p - r);
            t.record(standard && member, cell(f, k) + " resolution: " + format_poly(p));
        }
    }
    return t;
}

}  // namespace saito::checks
