#pragma once

#include "saito/polynomial.hpp"

#include <string>
#include <vector>

namespace saito {

// Diagonal symmetry x_i -> e[phase_i] x_i with phases reduced into [0, 1).
class GroupElement {
public:
    GroupElement() = default;
    explicit GroupElement(std::vector<Rational> phases);

    static GroupElement identity(std::size_t n);
    // Accepts "1/2(0,1,1)", "(0,1/2,1/2)" and "id:3".
    static GroupElement parse(std::string_view text);

    const std::vector<Rational>& phases() const { return phases_; }
    std::size_t dimension() const { return phases_.size(); }
    bool is_identity() const;

    GroupElement compose(const GroupElement& h) const;
    GroupElement inverse() const;
    // Smallest n > 0 with g^n = id.
    int order() const;

    std::vector<std::size_t> fixed_indices() const;
    std::vector<std::size_t> moved_indices() const;
    std::size_t fixed_count() const { return fixed_indices().size(); }
    Rational age() const;

    std::string str() const;

    bool operator==(const GroupElement& h) const { return phases_ == h.phases_; }
    bool operator!=(const GroupElement& h) const { return !(*this == h); }
    bool operator<(const GroupElement& h) const { return phases_ < h.phases_; }

private:
    std::vector<Rational> phases_;
};

class SymmetryGroup {
public:
    // Closure of the generators under composition.
    static SymmetryGroup generate(const std::vector<GroupElement>& generators);

    const std::vector<GroupElement>& elements() const { return elements_; }
    std::size_t order() const { return elements_.size(); }
    bool contains(const GroupElement& g) const;
    const GroupElement& identity() const { return elements_.front(); }

private:
    explicit SymmetryGroup(std::vector<GroupElement> elements);
    std::vector<GroupElement> elements_;
};

class UnsupportedGroup : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Per-monomial test: sum phase_i * e_i must be an integer on every coordinate term.
bool is_symmetry(const Poly& f, const GroupElement& g);

// The product constant in its closed form (1/|G|^2)(-1)^{(N-N_g)(N-N_g-1)/2} e[-age/2].
// Throws UnsupportedGroup when e[-age/2] is not real.
Rational c_constant_formula(const GroupElement& g, std::size_t group_order);

// Value used throughout the explicit family computations: -1/|G|^2 for g != id.
Rational c_constant(const GroupElement& g, std::size_t group_order);

// Composite grading of a monomial. Variables without a grading label are
// graded trivially; laurent and coordinate variables always are.
GroupElement monomial_grading(const Monomial& m, const VarTable& table, std::size_t n);

}  // namespace saito
