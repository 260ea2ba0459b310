#pragma once

#include "saito/local_algebra.hpp"

#include <algorithm>
#include <functional>
#include <map>
#include <random>
#include <vector>

namespace saito::testing {

inline Rational random_rational(std::mt19937_64& rng, int span = 5) {
    std::uniform_int_distribution<int> num(-span, span), den(1, 3);
    Rational r(num(rng), den(rng));
    r.canonicalize();
    return r;
}

// Random polynomial in the given variables. `bounds[i]` caps the exponent of vars[i].
inline Poly random_poly(std::mt19937_64& rng, const TablePtr& t, const std::vector<std::size_t>& vars,
                        const std::vector<int>& bounds, int terms, int zmin = 0, int zmax = 0) {
    Poly p(t);
    std::uniform_int_distribution<int> zexp(zmin, zmax);
    for (int i = 0; i < terms; ++i) {
        Monomial m(t->size(), 0);
        for (std::size_t j = 0; j < vars.size(); ++j) m[vars[j]] = std::uniform_int_distribution<int>(0, bounds[j])(rng);
        if (zmin != 0 || zmax != 0) m[t->laurent()] = zexp(rng);
        p.add_term(m, random_rational(rng));
    }
    return p;
}

// Dense rational linear algebra: reduced row echelon form and a solver for
// A x = b where A is given by columns.
class DenseSystem {
public:
    DenseSystem(std::size_t rows, std::vector<std::vector<Rational>> columns) : rows_(rows), cols_(std::move(columns)) {}

    // Some x with A x = b, or nullopt.
    std::optional<std::vector<Rational>> solve(const std::vector<Rational>& b) const {
        std::size_t n = cols_.size();
        std::vector<std::vector<Rational>> a(rows_, std::vector<Rational>(n + 1, 0));
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t i = 0; i < rows_; ++i) a[i][j] = cols_[j][i];
        for (std::size_t i = 0; i < rows_; ++i) a[i][n] = b[i];
        std::vector<std::size_t> pivots;
        std::size_t r = 0;
        for (std::size_t c = 0; c < n && r < rows_; ++c) {
            std::size_t p = r;
            while (p < rows_ && a[p][c] == 0) ++p;
            if (p == rows_) continue;
            std::swap(a[p], a[r]);
            Rational inv = 1 / a[r][c];
            for (auto& x : a[r]) x *= inv;
            for (std::size_t i = 0; i < rows_; ++i) {
                if (i == r || a[i][c] == 0) continue;
                Rational f = a[i][c];
                for (std::size_t j = c; j <= n; ++j) a[i][j] -= f * a[r][j];
            }
            pivots.push_back(c);
            ++r;
        }
        for (std::size_t i = r; i < rows_; ++i)
            if (a[i][n] != 0) return std::nullopt;
        std::vector<Rational> x(n, 0);
        for (std::size_t i = 0; i < r; ++i) x[pivots[i]] = a[i][n];
        return x;
    }

    std::size_t rank() const {
        auto a = cols_;
        std::size_t rk = 0;
        std::vector<bool> used(cols_.size(), false);
        for (std::size_t i = 0; i < rows_; ++i) {
            std::size_t c = 0;
            while (c < a.size() && (used[c] || a[c][i] == 0)) ++c;
            if (c == a.size()) continue;
            used[c] = true;
            ++rk;
            for (std::size_t d = 0; d < a.size(); ++d) {
                if (d == c || a[d][i] == 0) continue;
                Rational f = a[d][i] / a[c][i];
                for (std::size_t t = 0; t < rows_; ++t) a[d][t] -= f * a[c][t];
            }
        }
        return rk;
    }

private:
    std::size_t rows_;
    std::vector<std::vector<Rational>> cols_;
};

// Quotient of the polynomial ring by the Jacobian ideal of a quasi-homogeneous
// polynomial, computed one weighted degree at a time with dense linear algebra
// (no Groebner bases). Multiplication-by-generator images m * df/dx_i span the
// ideal in each degree.
class DenseJacobianOracle {
public:
    explicit DenseJacobianOracle(const Singularity& s) : s_(s), table_(s.poly.table()) {
        for (std::size_t v : s.vars) partials_.push_back(partial(s.poly, v));
    }

    // Monomials in the singularity's variables of exact weighted degree d.
    std::vector<Monomial> monomials_of_degree(const Rational& d) const {
        std::vector<Monomial> out;
        Monomial m(table_->size(), 0);
        std::function<void(std::size_t, Rational)> rec = [&](std::size_t i, Rational left) {
            if (i == s_.vars.size()) {
                if (left == 0) out.push_back(m);
                return;
            }
            const Rational& w = (*s_.weights)[i];
            for (int e = 0; Rational(e) * w <= left; ++e) {
                m[s_.vars[i]] = e;
                rec(i + 1, left - Rational(e) * w);
            }
            m[s_.vars[i]] = 0;
        };
        rec(0, d);
        return out;
    }

    // Ideal generators of weighted degree d.
    std::vector<Poly> ideal_span(const Rational& d) const {
        std::vector<Poly> gens;
        for (std::size_t i = 0; i < partials_.size(); ++i) {
            if (partials_[i].is_zero()) continue;
            Rational wi = 1 - (*s_.weights)[i];
            if (wi > d) continue;
            for (const auto& m : monomials_of_degree(d - wi)) gens.push_back(Poly::monomial(table_, m) * partials_[i]);
        }
        return gens;
    }

    std::size_t quotient_dimension(const Rational& d) const {
        auto mons = monomials_of_degree(d);
        auto gens = ideal_span(d);
        return mons.size() - DenseSystem(mons.size(), columns(mons, gens)).rank();
    }

    // The combination of `standard` congruent to p, degree by degree. Throws if
    // the standard monomials fail to span a complement.
    Poly normal_form(const Poly& p, const std::vector<Monomial>& standard) const {
        std::map<Rational, Poly> pieces;
        for (const auto& [m, c] : p.terms()) {
            Rational d = 0;
            for (std::size_t i = 0; i < s_.vars.size(); ++i) d += Rational(m[s_.vars[i]]) * (*s_.weights)[i];
            auto [it, fresh] = pieces.try_emplace(d, Poly(table_));
            it->second.add_term(m, c);
        }
        Poly out(table_);
        for (const auto& [d, piece] : pieces) {
            auto mons = monomials_of_degree(d);
            std::vector<Poly> cols;
            std::vector<Monomial> std_here;
            for (const auto& m : standard) {
                Rational dm = 0;
                for (std::size_t i = 0; i < s_.vars.size(); ++i) dm += Rational(m[s_.vars[i]]) * (*s_.weights)[i];
                if (dm == d) {
                    std_here.push_back(m);
                    cols.push_back(Poly::monomial(table_, m));
                }
            }
            auto gens = ideal_span(d);
            cols.insert(cols.end(), gens.begin(), gens.end());
            DenseSystem sys(mons.size(), columns(mons, cols));
            DenseSystem ideal_only(mons.size(), columns(mons, gens));
            if (sys.rank() != std_here.size() + ideal_only.rank()) throw std::runtime_error("standard monomials are dependent");
            auto x = sys.solve(vectorize(mons, piece));
            if (!x) throw std::runtime_error("standard monomials do not span the quotient");
            for (std::size_t j = 0; j < std_here.size(); ++j)
                if ((*x)[j] != 0) out.add_term(std_here[j], (*x)[j]);
        }
        return out;
    }

private:
    static std::vector<Rational> vectorize(const std::vector<Monomial>& mons, const Poly& p) {
        std::vector<Rational> v(mons.size(), 0);
        for (const auto& [m, c] : p.terms()) {
            auto it = std::find(mons.begin(), mons.end(), m);
            if (it == mons.end()) throw std::runtime_error("term outside the degree piece");
            v[static_cast<std::size_t>(it - mons.begin())] = c;
        }
        return v;
    }

    static std::vector<std::vector<Rational>> columns(const std::vector<Monomial>& mons, const std::vector<Poly>& ps) {
        std::vector<std::vector<Rational>> cols;
        for (const auto& p : ps) cols.push_back(vectorize(mons, p));
        return cols;
    }

    Singularity s_;
    TablePtr table_;
    std::vector<Poly> partials_;
};

}  // namespace saito::testing

namespace saito::testing {

// Membership in the span of m * g over monomials m keeping the total degree
// in the listed variables at most `bound`. A positive answer certifies ideal
// membership; it needs no quasi-homogeneity.
class TruncatedIdealOracle {
public:
    TruncatedIdealOracle(std::vector<Poly> generators, std::vector<std::size_t> vars, int bound)
        : vars_(std::move(vars)), bound_(bound) {
        table_ = generators.front().table();
        std::vector<Monomial> shifts = box(bound);
        for (const auto& g : generators)
            for (const auto& m : shifts) {
                Poly p = Poly::monomial(table_, m) * g;
                if (degree(p) <= bound_) span_.push_back(p);
            }
        mons_ = box(bound);
    }

    bool contains(const Poly& p) const {
        if (p.is_zero()) return true;
        if (degree(p) > bound_) return false;
        std::vector<std::vector<Rational>> cols;
        for (const auto& q : span_) cols.push_back(vectorize(q));
        return DenseSystem(mons_.size(), cols).solve(vectorize(p)).has_value();
    }

private:
    int degree(const Poly& p) const {
        int d = 0;
        for (const auto& [m, c] : p.terms()) {
            int s = 0;
            for (std::size_t v : vars_) s += m[v];
            d = std::max(d, s);
        }
        return d;
    }

    std::vector<Monomial> box(int bound) const {
        std::vector<Monomial> out;
        Monomial m(table_->size(), 0);
        std::function<void(std::size_t, int)> rec = [&](std::size_t i, int left) {
            if (i == vars_.size()) {
                out.push_back(m);
                return;
            }
            for (int e = 0; e <= left; ++e) {
                m[vars_[i]] = e;
                rec(i + 1, left - e);
            }
            m[vars_[i]] = 0;
        };
        rec(0, bound);
        return out;
    }

    std::vector<Rational> vectorize(const Poly& p) const {
        std::vector<Rational> v(mons_.size(), 0);
        for (const auto& [m, c] : p.terms()) {
            auto it = std::find(mons_.begin(), mons_.end(), m);
            if (it == mons_.end()) throw std::runtime_error("term outside the truncation box");
            v[static_cast<std::size_t>(it - mons_.begin())] = c;
        }
        return v;
    }

    std::vector<std::size_t> vars_;
    int bound_;
    TablePtr table_;
    std::vector<Poly> span_;
    std::vector<Monomial> mons_;
};

}  // namespace saito::testing
