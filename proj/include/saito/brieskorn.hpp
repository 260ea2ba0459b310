#pragma once

#include "saito/local_algebra.hpp"

#include <vector>

namespace saito {

// F = f + sum_a s_a phi_a over a table holding coordinates, the s_a and z.
struct Unfolding {
    TablePtr table;
    JacobianAlgebra jac;
    std::vector<std::size_t> params;
    std::vector<Poly> sections;
    Poly F;
    std::vector<Poly> dF;
    // lifted[j] = sum_i jac.gb.cofactors[j][i] * dF[i]
    std::vector<Poly> lifted;
    // Reduced coordinates refer to these; each is an exact combination of
    // standard monomials of the base Jacobian algebra.
    std::vector<Poly> lattice;
    // to_lattice[i][a]: standard monomial i = sum_a to_lattice[i][a] lattice[a].
    std::vector<std::vector<Rational>> to_lattice;

    std::size_t mu() const { return lattice.size(); }
    std::size_t param_position(std::size_t table_index) const;
};

class ReductionFailure : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// `lattice` defaults to `sections` when empty.
Unfolding make_unfolding(const Singularity& base, const std::vector<std::string>& params, const std::vector<Poly>& sections,
                         std::vector<Poly> lattice = {});

using LatticeCoordinates = std::vector<Poly>;

struct Reduction {
    LatticeCoordinates coords;
    // rep - sum_a coords[a] lattice[a] = sum_i (z d_i eta[i] + eta[i] d_i F)
    std::vector<Poly> eta;
    int rounds = 0;
};

constexpr int default_round_cap = 64;

Reduction reduce_to_basis(const Unfolding& U, const Poly& rep, int round_cap = default_round_cap);

Poly reassemble(const Unfolding& U, const LatticeCoordinates& c);

// The D_F image of the (N-1)-form with coefficients eta.
Poly d_image(const Unfolding& U, const std::vector<Poly>& eta);

bool check_certificate(const Unfolding& U, const Poly& rep, const Reduction& r);

// rep - psi * dF/dx_i - z * d psi/dx_i, which is D_F-equivalent to rep.
Poly rewrite_step(const Unfolding& U, const Poly& rep, std::size_t coordinate, const Poly& psi);

// Chain-level representative of the connection: d rep/ds + z^-1 rep dF/ds.
Poly gauss_manin_chain(const Unfolding& U, std::size_t param, const Poly& rep);

Reduction gauss_manin(const Unfolding& U, std::size_t param, const Poly& rep, int round_cap = default_round_cap);
LatticeCoordinates gauss_manin(const Unfolding& U, std::size_t param, const LatticeCoordinates& c,
                               int round_cap = default_round_cap);

// Column j holds the coordinates of the connection applied to lattice[j].
using Matrix = std::vector<std::vector<Poly>>;

Matrix connection_matrix(const Unfolding& U, std::size_t param, int round_cap = default_round_cap);

// d_a A_b - d_b A_a + A_a A_b - A_b A_a
Matrix flatness_defect(const Unfolding& U, std::size_t pa, const Matrix& A, std::size_t pb, const Matrix& B);

Matrix mat_mul(const Matrix& a, const Matrix& b, const TablePtr& table);
bool is_zero_matrix(const Matrix& m);

}  // namespace saito
