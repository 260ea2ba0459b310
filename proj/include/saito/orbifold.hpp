#pragma once

#include "saito/brieskorn.hpp"

#include <map>
#include <memory>
#include <optional>
#include <string>
#include <vector>

namespace saito {

// Sum over sectors of coefficient polynomials times basis classes. Coefficients
// live on the family's orbifold table and never involve coordinates.
struct OrbifoldClass {
    std::vector<Poly> id;
    std::vector<Poly> g;

    bool is_zero() const;
    OrbifoldClass& operator+=(const OrbifoldClass& o);
    OrbifoldClass& operator-=(const OrbifoldClass& o);
    OrbifoldClass& operator*=(const Poly& c);
    friend OrbifoldClass operator+(OrbifoldClass a, const OrbifoldClass& b) { return a += b; }
    friend OrbifoldClass operator-(OrbifoldClass a, const OrbifoldClass& b) { return a -= b; }
    friend OrbifoldClass operator*(OrbifoldClass a, const Poly& c) { return a *= c; }
    bool operator==(const OrbifoldClass& o) const;
};

enum class Sector { id, g };

struct Direction {
    Sector sector = Sector::id;
    std::size_t index = 0;
};

// Accepts "v_id0", "v_id^0", "v_g1", "v_g^1".
Direction parse_direction(std::string_view text);
std::string direction_name(const Direction& d);

// Sign action on the resolution side: y3 -> -y3 and every g-direction parameter flips.
struct Involution {
    std::map<std::string, int> signs;
};

struct FamilySpec {
    int family = 0;
    int k = 0;
    std::size_t k_id = 0;
    std::size_t k_g = 0;

    TablePtr bar_table;  // y1..y3, sb*, vb*, z
    TablePtr orb_table;  // x1..x3, v_id*, v_g*, z

    GroupElement g;
    SymmetryGroup G = SymmetryGroup::generate({GroupElement::identity(3)});
    Poly f, fbar;
    std::vector<Rational> f_weights;

    std::shared_ptr<const JacobianAlgebra> jac_f;
    std::shared_ptr<const JacobianAlgebra> jac_fg;
    std::shared_ptr<const JacobianAlgebra> jac_fbar;

    std::shared_ptr<const Unfolding> Fbar;  // lattice = id sections then g sections
    std::shared_ptr<const Unfolding> FG;    // lattice = standard monomials of Jac(f)
    std::shared_ptr<const Unfolding> Ffix;  // F^G restricted to Fix(g); lattice = B_g

    std::vector<Monomial> B_id;  // on orb_table
    std::vector<Monomial> B_g;   // on orb_table, fixed coordinates only
    // FG lattice index -> B_id index
    std::vector<std::optional<std::size_t>> fg_to_bid;

    std::vector<std::string> bar_params;  // sb0.., vb0..
    std::vector<std::string> orb_params;  // v_id0.., v_g0..

    HgData hg;    // H_g from f
    Poly HgF;     // H_g^F from F^G
    Rational cg;  // adopted
    Rational cg_formula;
    std::optional<Involution> p;

    OrbifoldAlgebra algebra() const;

    // Connection matrices of the resolution unfolding, one per parameter.
    std::vector<Matrix> bar_connection;

    OrbifoldClass zero() const;
    OrbifoldClass unit(Sector s, std::size_t i) const;
    Poly basis_poly(Sector s, std::size_t i) const;
};

struct FamilyBounds {
    int min_k;
};
FamilyBounds family_bounds(int family);

class FamilyError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

FamilySpec build_family(int family, int k, int round_cap = default_round_cap);

OrbifoldClass psi_forward(const FamilySpec& F, const LatticeCoordinates& c);
LatticeCoordinates psi_inverse(const FamilySpec& F, const OrbifoldClass& c);

std::size_t bar_param_index(const FamilySpec& F, const Direction& d);

OrbifoldClass orbifold_gm(const FamilySpec& F, const Direction& d, const OrbifoldClass& c);

enum class Projection { Pi_id, Pi_g, pi_id };
OrbifoldClass sector_project(const FamilySpec& F, const OrbifoldClass& c, Projection which);

// "mixed" when the composite gradings of the terms disagree, "0" for zero.
std::string grading_of(const FamilySpec& F, const OrbifoldClass& c);
std::string direction_grading(const FamilySpec& F, const Direction& d);

enum class TildeKind { sector_exchange, product_rescale };
std::map<std::string, Poly> tilde_change(const FamilySpec& F, TildeKind kind);
OrbifoldClass apply_substitution(const FamilySpec& F, const OrbifoldClass& c, const std::map<std::string, Poly>& sub);

// Class of a polynomial in x and v_id inside the identity sector via F^G reduction.
OrbifoldClass lift_id(const FamilySpec& F, const Poly& rep);
// Connection of F^G on a representative, landing in the identity sector.
OrbifoldClass gm_FG(const FamilySpec& F, std::size_t alpha, const Poly& rep);
// Connection of F^G restricted to Fix(g), landing in the g sector.
OrbifoldClass gm_fix(const FamilySpec& F, std::size_t alpha, const Poly& rep);
// Jacobian-level restriction of identity-sector data into the g sector.
OrbifoldClass restrict_to_g(const FamilySpec& F, const OrbifoldClass& c);
OrbifoldClass z_inverse_part(const FamilySpec& F, const OrbifoldClass& c);
OrbifoldClass times_z_inverse(const FamilySpec& F, const OrbifoldClass& c);
OrbifoldClass set_vg_zero(const FamilySpec& F, const OrbifoldClass& c);

// Parity of an F-bar lattice coordinate vector under the involution: keeps
// terms with the requested sign.
LatticeCoordinates parity_part(const FamilySpec& F, const LatticeCoordinates& c, int sign);

// Coordinates of a sector element whose representative is already in normal form.
OrbifoldClass class_of(const FamilySpec& F, const SectorElement& e);

std::string format_class(const FamilySpec& F, const OrbifoldClass& c);
OrbifoldClass parse_class(const FamilySpec& F, std::string_view text);

struct ReportEntry {
    int family = 0;
    int k = 0;
    std::string clause;
    std::string kind;  // "displayed" or "supplementary"
    std::string lhs;
    std::string rhs;
    bool equal = false;
    std::string residual;
    std::optional<Rational> theta;
    Rational cg;
    Rational cg_formula;
    Rational mg;
};

std::vector<ReportEntry> verify_family(const FamilySpec& F);

}  // namespace saito
