#include "checks.hpp"

#include <doctest.h>

using namespace saito;

namespace {

const std::vector<std::pair<int, int>> small_grid{{1, 1}, {1, 3}, {2, 2}, {2, 3}, {3, 1}, {3, 2}, {4, 4}, {5, 1}, {5, 2}};

void require_clean(const checks::Tally& t, int min_cases) {
    INFO(t.first_failure);
    CHECK(t.failures == 0);
    CHECK(t.cases >= min_cases);
}

}  // namespace

TEST_CASE("reduction certificates hold for random representatives") {
    require_clean(checks::certificates(small_grid, 8, 11), 200);
}

TEST_CASE("exact forms reduce to zero") { require_clean(checks::exact_forms(small_grid, 8, 12), 200); }

TEST_CASE("reduction is linear") {
    std::mt19937_64 rng(13);
    for (auto [f, k] : small_grid) {
        const auto& F = checks::family(f, k);
        for (const Unfolding* U : checks::unfoldings(F))
            for (int i = 0; i < 8; ++i) {
                Poly a = checks::random_rep(rng, *U, 3), b = checks::random_rep(rng, *U, 3);
                Poly s = Poly::constant(U->table, testing::random_rational(rng));
                auto ra = reduce_to_basis(*U, a), rb = reduce_to_basis(*U, b), rs = reduce_to_basis(*U, a + s * b);
                for (std::size_t j = 0; j < U->mu(); ++j) CHECK(rs.coords[j] == ra.coords[j] + s * rb.coords[j]);
            }
    }
}

TEST_CASE("connection is flat on the verification grid") {
    require_clean(checks::flatness(checks::verification_grid()), 1);
}

TEST_CASE("residue at the origin is the orbifold product") {
    require_clean(checks::residues(small_grid, 24, 14), 200);
}

TEST_CASE("normal forms agree with the oracles") {
    require_clean(checks::oracle_normal_forms(checks::milnor_grid(), 10, 15), 200);
}
