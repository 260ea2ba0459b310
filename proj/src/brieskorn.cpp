#include "saito/brieskorn.hpp"

#include <algorithm>

namespace saito {

namespace {

std::vector<std::vector<Rational>> invert(std::vector<std::vector<Rational>> a) {
    std::size_t n = a.size();
    std::vector<std::vector<Rational>> inv(n, std::vector<Rational>(n, 0));
    for (std::size_t i = 0; i < n; ++i) inv[i][i] = 1;
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        while (piv < n && a[piv][col] == 0) ++piv;
        if (piv == n) throw std::invalid_argument("lattice sections do not form a basis");
        std::swap(a[piv], a[col]);
        std::swap(inv[piv], inv[col]);
        Rational p = a[col][col];
        for (std::size_t j = 0; j < n; ++j) {
            a[col][j] /= p;
            inv[col][j] /= p;
        }
        for (std::size_t r = 0; r < n; ++r) {
            if (r == col || a[r][col] == 0) continue;
            Rational f = a[r][col];
            for (std::size_t j = 0; j < n; ++j) {
                a[r][j] -= f * a[col][j];
                inv[r][j] -= f * inv[col][j];
            }
        }
    }
    return inv;
}

}  // namespace

std::size_t Unfolding::param_position(std::size_t table_index) const {
    auto it = std::find(params.begin(), params.end(), table_index);
    if (it == params.end()) throw std::invalid_argument("not an unfolding parameter: " + (*table)[table_index].name);
    return static_cast<std::size_t>(it - params.begin());
}

Unfolding make_unfolding(const Singularity& base, const std::vector<std::string>& params, const std::vector<Poly>& sections,
                         std::vector<Poly> lattice) {
    if (params.size() != sections.size()) throw std::invalid_argument("parameters and sections differ in length");
    Unfolding U;
    U.table = base.poly.table();
    U.jac = jacobian_algebra(base);
    U.F = base.poly;
    for (std::size_t a = 0; a < params.size(); ++a) {
        std::size_t p = U.table->index(params[a]);
        if ((*U.table)[p].kind != VarKind::parameter) throw std::invalid_argument(params[a] + " is not a parameter");
        U.params.push_back(p);
        U.sections.push_back(sections[a]);
        U.F += Poly::var(U.table, params[a]) * sections[a];
    }
    for (std::size_t v : base.vars) U.dF.push_back(partial(U.F, v));
    const auto& gb = U.jac.gb;
    for (std::size_t j = 0; j < gb.basis.size(); ++j) {
        Poly g(U.table);
        for (std::size_t i = 0; i < U.dF.size(); ++i) g += gb.cofactors[j][i] * U.dF[i];
        auto lm = leading_monomial(g, gb.order);
        if (!lm || gb.order.compare(*lm, gb.leading[j]) != 0)
            throw ReductionFailure("lifted basis element changes its leading monomial");
        auto lc = coefficient_of(g, *lm, gb.order).as_constant();
        if (!lc || *lc == 0) throw ReductionFailure("lifted basis element has a non-rational leading coefficient");
        U.lifted.push_back(g);
    }
    U.lattice = lattice.empty() ? U.sections : std::move(lattice);
    std::size_t mu = U.jac.mu;
    if (U.lattice.size() != mu) throw std::invalid_argument("lattice size differs from the Milnor number");
    // Column a of S: lattice[a] in standard monomials, exactly.
    std::vector<std::vector<Rational>> S(mu, std::vector<Rational>(mu, 0));
    for (std::size_t a = 0; a < mu; ++a) {
        for (const auto& [m, c] : U.lattice[a].terms()) {
            auto i = U.jac.basis_index(m);
            bool pure = true;
            for (std::size_t t = 0; t < m.size(); ++t)
                if (m[t] != 0 && std::find(base.vars.begin(), base.vars.end(), t) == base.vars.end()) pure = false;
            if (!i || !pure) throw std::invalid_argument("lattice element is not a combination of standard monomials");
            S[*i][a] += c;
        }
    }
    auto inv = invert(S);
    // std monomial i = sum_a inv[a][i] lattice[a]
    U.to_lattice.assign(mu, std::vector<Rational>(mu, 0));
    for (std::size_t i = 0; i < mu; ++i)
        for (std::size_t a = 0; a < mu; ++a) U.to_lattice[i][a] = inv[a][i];
    return U;
}

Reduction reduce_to_basis(const Unfolding& U, const Poly& rep, int round_cap) {
    const TablePtr& table = U.table;
    const auto& order = U.jac.gb.order;
    std::size_t N = U.dF.size();
    Reduction out;
    out.eta.assign(N, Poly(table));
    out.coords.assign(U.mu(), Poly(table));
    Poly acc(table);
    Poly P = rep;
    Poly z = Poly::var(table, (*table)[table->laurent()].name);
    while (!P.is_zero()) {
        if (out.rounds >= round_cap)
            throw ReductionFailure("round cap " + std::to_string(round_cap) + " exceeded; pending " + format_poly(P));
        ++out.rounds;
        Division d = U.lifted.empty() ? Division{{}, P} : divide(P, U.lifted, order);
        acc += d.remainder;
        Poly next(table);
        for (std::size_t i = 0; i < N; ++i) {
            Poly h(table);
            for (std::size_t j = 0; j < d.quotients.size(); ++j)
                if (!d.quotients[j].is_zero() && !U.jac.gb.cofactors[j][i].is_zero()) h += d.quotients[j] * U.jac.gb.cofactors[j][i];
            if (h.is_zero()) continue;
            out.eta[i] += h;
            next -= z * partial(h, U.jac.sing.vars[i]);
        }
        P = next;
    }
    for (const auto& [m, c] : acc.terms()) {
        Monomial restricted = order.restrict(m, m.size());
        auto i = U.jac.basis_index(restricted);
        if (!i) throw ReductionFailure("remainder outside the standard monomials");
        Monomial rest = m;
        for (std::size_t v : order.vars) rest[v] = 0;
        for (std::size_t a = 0; a < U.mu(); ++a)
            if (U.to_lattice[*i][a] != 0) out.coords[a].add_term(rest, c * U.to_lattice[*i][a]);
    }
    if (auto in = z_range(rep)) {
        for (const auto& c : out.coords) {
            auto r = z_range(c);
            if (r && (r->first < in->first || r->second > in->second + out.rounds))
                throw ReductionFailure("reduced coordinate leaves the expected z-window");
        }
    }
    return out;
}

Poly reassemble(const Unfolding& U, const LatticeCoordinates& c) {
    Poly r(U.table);
    for (std::size_t a = 0; a < c.size(); ++a)
        if (!c[a].is_zero()) r += c[a] * U.lattice[a];
    return r;
}

Poly d_image(const Unfolding& U, const std::vector<Poly>& eta) {
    Poly z = Poly::var(U.table, (*U.table)[U.table->laurent()].name);
    Poly r(U.table);
    for (std::size_t i = 0; i < eta.size(); ++i) {
        if (eta[i].is_zero()) continue;
        r += z * partial(eta[i], U.jac.sing.vars[i]) + eta[i] * U.dF[i];
    }
    return r;
}

bool check_certificate(const Unfolding& U, const Poly& rep, const Reduction& r) {
    return rep - reassemble(U, r.coords) == d_image(U, r.eta);
}

Poly rewrite_step(const Unfolding& U, const Poly& rep, std::size_t coordinate, const Poly& psi) {
    Poly z = Poly::var(U.table, (*U.table)[U.table->laurent()].name);
    return rep - psi * U.dF.at(coordinate) - z * partial(psi, U.jac.sing.vars.at(coordinate));
}

Poly gauss_manin_chain(const Unfolding& U, std::size_t param, const Poly& rep) {
    std::size_t p = U.params.at(param);
    return partial(rep, p) + shift_z(rep * U.sections[param], -1);
}

Reduction gauss_manin(const Unfolding& U, std::size_t param, const Poly& rep, int round_cap) {
    return reduce_to_basis(U, gauss_manin_chain(U, param, rep), round_cap);
}

LatticeCoordinates gauss_manin(const Unfolding& U, std::size_t param, const LatticeCoordinates& c, int round_cap) {
    return gauss_manin(U, param, reassemble(U, c), round_cap).coords;
}

Matrix connection_matrix(const Unfolding& U, std::size_t param, int round_cap) {
    std::size_t mu = U.mu();
    Matrix A(mu, std::vector<Poly>(mu, Poly(U.table)));
    for (std::size_t j = 0; j < mu; ++j) {
        auto col = gauss_manin(U, param, U.lattice[j], round_cap).coords;
        for (std::size_t i = 0; i < mu; ++i) A[i][j] = col[i];
    }
    return A;
}

Matrix mat_mul(const Matrix& a, const Matrix& b, const TablePtr& table) {
    std::size_t n = a.size(), m = b.empty() ? 0 : b[0].size(), k = b.size();
    Matrix r(n, std::vector<Poly>(m, Poly(table)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t t = 0; t < k; ++t) {
            if (a[i][t].is_zero()) continue;
            for (std::size_t j = 0; j < m; ++j)
                if (!b[t][j].is_zero()) r[i][j] += a[i][t] * b[t][j];
        }
    return r;
}

Matrix flatness_defect(const Unfolding& U, std::size_t pa, const Matrix& A, std::size_t pb, const Matrix& B) {
    std::size_t ia = U.params.at(pa), ib = U.params.at(pb);
    Matrix AB = mat_mul(A, B, U.table), BA = mat_mul(B, A, U.table);
    std::size_t n = A.size();
    Matrix r(n, std::vector<Poly>(n, Poly(U.table)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) r[i][j] = partial(B[i][j], ia) - partial(A[i][j], ib) + AB[i][j] - BA[i][j];
    return r;
}

bool is_zero_matrix(const Matrix& m) {
    for (const auto& row : m)
        for (const auto& e : row)
            if (!e.is_zero()) return false;
    return true;
}

}  // namespace saito
