#pragma once

#include "saito/polynomial.hpp"
#include "saito/symmetry.hpp"

#include <optional>
#include <vector>

namespace saito {

// Weight vectors compared in sequence, ties broken by reverse lexicographic
// order on `vars`. Only the exponents of `vars` take part; everything else
// in a monomial is a coefficient symbol.
struct MonomialOrder {
    std::vector<std::size_t> vars;
    std::vector<std::vector<Rational>> weights;

    // Positive when a > b, negative when a < b, zero when equal on `vars`.
    int compare(const Monomial& a, const Monomial& b) const;
    bool divides(const Monomial& a, const Monomial& b) const;
    Monomial restrict(const Monomial& m, std::size_t table_size) const;
};

MonomialOrder make_order(const VarTable& table, const std::vector<std::string>& vars,
                         const std::vector<std::vector<Rational>>& weights);

// Largest monomial of p restricted to the order's variables.
std::optional<Monomial> leading_monomial(const Poly& p, const MonomialOrder& order);
// Coefficient of a restricted monomial, as a polynomial in the remaining variables.
Poly coefficient_of(const Poly& p, const Monomial& restricted, const MonomialOrder& order);

struct GroebnerBasis {
    MonomialOrder order;
    std::vector<Poly> generators;
    std::vector<Poly> basis;
    // basis[j] = sum_i cofactors[j][i] * generators[i]
    std::vector<std::vector<Poly>> cofactors;
    std::vector<Monomial> leading;
};

class GroebnerError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Generators must have rational coefficients on the order's variables only.
GroebnerBasis buchberger_with_cofactors(const std::vector<Poly>& generators, const MonomialOrder& order);

struct Division {
    std::vector<Poly> quotients;
    Poly remainder;
};

// Full multivariate division. Each divisor's leading coefficient must be a
// nonzero rational; the other variables ride along as coefficient symbols.
Division divide(const Poly& p, const std::vector<Poly>& divisors, const MonomialOrder& order);

Division normal_form(const Poly& p, const GroebnerBasis& gb);

struct Singularity {
    Poly poly;
    std::vector<std::size_t> vars;
    std::optional<std::vector<Rational>> weights;
    MonomialOrder order;
};

class DegenerateSingularity : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

Singularity make_singularity(const Poly& poly, const MonomialOrder& order,
                             std::optional<std::vector<Rational>> weights = std::nullopt);

bool is_quasi_homogeneous(const Poly& poly, const std::vector<std::size_t>& vars, const std::vector<Rational>& weights);

struct JacobianAlgebra {
    Singularity sing;
    GroebnerBasis gb;
    std::vector<Monomial> basis;
    std::size_t mu = 0;

    Poly nf(const Poly& p) const { return normal_form(p, gb).remainder; }
    std::optional<std::size_t> basis_index(const Monomial& restricted) const;
};

JacobianAlgebra jacobian_algebra(const Singularity& s);

Rational qh_milnor(const std::vector<Rational>& weights);

Poly determinant(const std::vector<std::vector<Poly>>& m, const TablePtr& table);
Poly hessian_minor(const Poly& f, const std::vector<std::size_t>& vars);
Poly hessian(const Singularity& s);

// f restricted to Fix(g). When Fix(g) = 0 the result is the unit convention:
// poly = 1 with no variables.
Singularity restrict_to_fix(const Singularity& s, const GroupElement& g,
                            const std::vector<std::vector<Rational>>& fix_weights);

struct HgData {
    Rational m;
    Poly minor;
    Poly H;
};

class NormalizationFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// Solves (1/mu_{f^g}) [hess(f^g) m minor] = (1/mu_f) [hess(f)] in Jac(f) for m.
// `source` is f or F^G; the minor is taken over the moved coordinates of g.
HgData compute_Hg(const Poly& source, const GroupElement& g, const JacobianAlgebra& jac_f,
                  const JacobianAlgebra& jac_fg);

struct SectorElement {
    GroupElement sector;
    Poly rep;
};

struct OrbifoldAlgebra {
    const JacobianAlgebra* jac_f = nullptr;
    const JacobianAlgebra* jac_fg = nullptr;
    GroupElement g;
    std::size_t group_order = 2;
    std::vector<Monomial> B_id;
    std::vector<Monomial> B_g;
    Rational m;
    Poly H;
    Rational c;

    // Drops non-invariant monomials of a Jac(f) normal form.
    Poly project_invariant(const Poly& nf) const;
    Poly restrict_fix(const Poly& p) const;
    SectorElement product(const SectorElement& a, const SectorElement& b) const;
};

}  // namespace saito
