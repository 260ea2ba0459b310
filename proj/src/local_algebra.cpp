#include "saito/local_algebra.hpp"

#include <algorithm>
#include <functional>

namespace saito {

int MonomialOrder::compare(const Monomial& a, const Monomial& b) const {
    for (const auto& w : weights) {
        Rational wa = 0, wb = 0;
        for (std::size_t i = 0; i < vars.size(); ++i) {
            wa += w[i] * a[vars[i]];
            wb += w[i] * b[vars[i]];
        }
        if (wa != wb) return wa > wb ? 1 : -1;
    }
    for (std::size_t i = vars.size(); i-- > 0;) {
        int ea = a[vars[i]], eb = b[vars[i]];
        if (ea != eb) return ea < eb ? 1 : -1;
    }
    return 0;
}

bool MonomialOrder::divides(const Monomial& a, const Monomial& b) const {
    for (std::size_t v : vars)
        if (a[v] > b[v]) return false;
    return true;
}

Monomial MonomialOrder::restrict(const Monomial& m, std::size_t table_size) const {
    Monomial r(table_size, 0);
    for (std::size_t v : vars) r[v] = m[v];
    return r;
}

MonomialOrder make_order(const VarTable& table, const std::vector<std::string>& vars,
                         const std::vector<std::vector<Rational>>& weights) {
    MonomialOrder o;
    for (const auto& v : vars) o.vars.push_back(table.index(v));
    for (const auto& w : weights) {
        if (w.size() != vars.size()) throw std::invalid_argument("weight vector length mismatch");
        o.weights.push_back(w);
    }
    return o;
}

std::optional<Monomial> leading_monomial(const Poly& p, const MonomialOrder& order) {
    std::optional<Monomial> best;
    for (const auto& [m, c] : p.terms()) {
        if (!best || order.compare(m, *best) > 0) best = order.restrict(m, m.size());
    }
    return best;
}

Poly coefficient_of(const Poly& p, const Monomial& restricted, const MonomialOrder& order) {
    Poly r(p.table());
    for (const auto& [m, c] : p.terms()) {
        bool match = true;
        for (std::size_t v : order.vars)
            if (m[v] != restricted[v]) {
                match = false;
                break;
            }
        if (!match) continue;
        Monomial rest = m;
        for (std::size_t v : order.vars) rest[v] = 0;
        r.add_term(rest, c);
    }
    return r;
}

namespace {

Monomial mono_div(const Monomial& a, const Monomial& b) {
    Monomial r(a.size());
    for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] - b[i];
    return r;
}

Rational rational_lead(const Poly& g, const Monomial& lm, const MonomialOrder& order) {
    auto c = coefficient_of(g, lm, order).as_constant();
    if (!c || *c == 0) throw GroebnerError("leading coefficient is not a nonzero rational");
    return *c;
}

struct Reducer {
    const MonomialOrder& order;
    std::vector<Poly>& G;
    std::vector<std::vector<Poly>>& C;
    std::size_t n;

    // Full reduction of s with cofactor tracking, skipping index `skip`.
    std::pair<Poly, std::vector<Poly>> run(Poly s, std::vector<Poly> sc, std::size_t skip = static_cast<std::size_t>(-1)) {
        Poly r(s.table());
        while (!s.is_zero()) {
            Monomial lm = *leading_monomial(s, order);
            Rational lc = *coefficient_of(s, lm, order).as_constant();
            bool reduced = false;
            for (std::size_t j = 0; j < G.size(); ++j) {
                if (j == skip) continue;
                Monomial gl = *leading_monomial(G[j], order);
                if (!order.divides(gl, lm)) continue;
                Rational glc = rational_lead(G[j], gl, order);
                Poly t = Poly::monomial(s.table(), mono_div(lm, gl), lc / glc);
                s -= t * G[j];
                for (std::size_t i = 0; i < n; ++i) sc[i] -= t * C[j][i];
                reduced = true;
                break;
            }
            if (!reduced) {
                Poly head = Poly::monomial(s.table(), lm, lc);
                r += head;
                s -= head;
            }
        }
        return {r, sc};
    }
};

}  // namespace

GroebnerBasis buchberger_with_cofactors(const std::vector<Poly>& generators, const MonomialOrder& order) {
    if (generators.empty()) throw GroebnerError("no generators");
    const TablePtr& table = generators.front().table();
    std::size_t n = generators.size();
    for (const auto& g : generators) {
        for (const auto& [m, c] : g.terms()) {
            for (std::size_t i = 0; i < m.size(); ++i) {
                if (m[i] != 0 && std::find(order.vars.begin(), order.vars.end(), i) == order.vars.end())
                    throw GroebnerError("generator involves a coefficient symbol");
            }
        }
    }
    std::vector<Poly> G;
    std::vector<std::vector<Poly>> C;
    for (std::size_t i = 0; i < n; ++i) {
        if (generators[i].is_zero()) continue;
        G.push_back(generators[i]);
        std::vector<Poly> row(n, Poly(table));
        row[i] = Poly::constant(table, 1);
        C.push_back(row);
    }
    GroebnerBasis out;
    out.order = order;
    out.generators = generators;
    if (G.empty()) return out;

    Reducer red{order, G, C, n};
    std::vector<std::pair<std::size_t, std::size_t>> pairs;
    for (std::size_t i = 0; i < G.size(); ++i)
        for (std::size_t j = 0; j < i; ++j) pairs.emplace_back(i, j);
    while (!pairs.empty()) {
        auto [i, j] = pairs.back();
        pairs.pop_back();
        Monomial a = *leading_monomial(G[i], order), b = *leading_monomial(G[j], order);
        bool coprime = true;
        Monomial l(a.size(), 0);
        for (std::size_t v : order.vars) {
            l[v] = std::max(a[v], b[v]);
            if (a[v] > 0 && b[v] > 0) coprime = false;
        }
        if (coprime) continue;
        Rational ca = rational_lead(G[i], a, order), cb = rational_lead(G[j], b, order);
        Poly ta = Poly::monomial(table, mono_div(l, a), Rational(1) / ca);
        Poly tb = Poly::monomial(table, mono_div(l, b), Rational(1) / cb);
        Poly s = ta * G[i] - tb * G[j];
        std::vector<Poly> sc(n, Poly(table));
        for (std::size_t t = 0; t < n; ++t) sc[t] = ta * C[i][t] - tb * C[j][t];
        auto [r, rc] = red.run(s, sc);
        if (!r.is_zero()) {
            G.push_back(r);
            C.push_back(rc);
            for (std::size_t t = 0; t + 1 < G.size(); ++t) pairs.emplace_back(G.size() - 1, t);
        }
    }

    std::vector<std::size_t> keep;
    for (std::size_t i = 0; i < G.size(); ++i) {
        Monomial li = *leading_monomial(G[i], order);
        bool redundant = false;
        for (std::size_t j = 0; j < G.size() && !redundant; ++j) {
            if (j == i) continue;
            Monomial lj = *leading_monomial(G[j], order);
            if (order.divides(lj, li) && (order.compare(li, lj) != 0 || j < i)) redundant = true;
        }
        if (!redundant) keep.push_back(i);
    }
    std::vector<Poly> G2;
    std::vector<std::vector<Poly>> C2;
    for (std::size_t i : keep) {
        G2.push_back(G[i]);
        C2.push_back(C[i]);
    }
    Reducer red2{order, G2, C2, n};
    std::vector<Poly> G3;
    std::vector<std::vector<Poly>> C3;
    for (std::size_t idx = 0; idx < G2.size(); ++idx) {
        Monomial lm = *leading_monomial(G2[idx], order);
        Rational lc = rational_lead(G2[idx], lm, order);
        Poly head = Poly::monomial(table, lm, lc);
        Poly tail = G2[idx] - head;
        auto [r, rc] = red2.run(tail, std::vector<Poly>(n, Poly(table)), idx);
        Poly g = head + r;
        std::vector<Poly> c(n, Poly(table));
        for (std::size_t t = 0; t < n; ++t) c[t] = (C2[idx][t] + rc[t]) * (Rational(1) / lc);
        G3.push_back(g * (Rational(1) / lc));
        C3.push_back(c);
    }
    // Deterministic order: ascending leading monomial.
    std::vector<std::size_t> perm(G3.size());
    for (std::size_t i = 0; i < perm.size(); ++i) perm[i] = i;
    std::vector<Monomial> leads;
    for (const auto& g : G3) leads.push_back(*leading_monomial(g, order));
    std::sort(perm.begin(), perm.end(), [&](std::size_t a, std::size_t b) { return order.compare(leads[a], leads[b]) < 0; });
    for (std::size_t i : perm) {
        out.basis.push_back(G3[i]);
        out.cofactors.push_back(C3[i]);
        out.leading.push_back(leads[i]);
    }
    return out;
}

Division divide(const Poly& p, const std::vector<Poly>& divisors, const MonomialOrder& order) {
    const TablePtr& table = p.table();
    std::vector<Monomial> lms;
    std::vector<Rational> lcs;
    for (const auto& d : divisors) {
        auto lm = leading_monomial(d, order);
        if (!lm) throw GroebnerError("zero divisor in division");
        lms.push_back(*lm);
        lcs.push_back(rational_lead(d, *lm, order));
    }
    Division out{std::vector<Poly>(divisors.size(), Poly(table)), Poly(table)};
    Poly s = p;
    while (!s.is_zero()) {
        Monomial lm = *leading_monomial(s, order);
        Poly coeff = coefficient_of(s, lm, order);
        Poly head = coeff * Poly::monomial(table, lm);
        bool reduced = false;
        for (std::size_t j = 0; j < divisors.size(); ++j) {
            if (!order.divides(lms[j], lm)) continue;
            Poly t = coeff * Poly::monomial(table, mono_div(lm, lms[j]), Rational(1) / lcs[j]);
            out.quotients[j] += t;
            s -= t * divisors[j];
            reduced = true;
            break;
        }
        if (!reduced) {
            out.remainder += head;
            s -= head;
        }
    }
    return out;
}

Division normal_form(const Poly& p, const GroebnerBasis& gb) {
    if (gb.basis.empty()) return Division{{}, p};
    return divide(p, gb.basis, gb.order);
}

bool is_quasi_homogeneous(const Poly& poly, const std::vector<std::size_t>& vars, const std::vector<Rational>& weights) {
    for (const auto& [m, c] : poly.terms()) {
        Rational w = 0;
        for (std::size_t i = 0; i < vars.size(); ++i) w += weights[i] * m[vars[i]];
        if (w != 1) return false;
    }
    return true;
}

Singularity make_singularity(const Poly& poly, const MonomialOrder& order, std::optional<std::vector<Rational>> weights) {
    for (const auto& [m, c] : poly.terms())
        for (std::size_t i = 0; i < m.size(); ++i)
            if (m[i] != 0 && std::find(order.vars.begin(), order.vars.end(), i) == order.vars.end())
                throw std::invalid_argument("singularity polynomial involves a non-coordinate variable");
    if (weights) {
        if (weights->size() != order.vars.size()) throw std::invalid_argument("weights length mismatch");
        for (const auto& w : *weights)
            if (w <= 0) throw std::invalid_argument("weights must be positive");
        if (!is_quasi_homogeneous(poly, order.vars, *weights)) throw std::invalid_argument("polynomial is not quasi-homogeneous");
    }
    return Singularity{poly, order.vars, std::move(weights), order};
}

std::optional<std::size_t> JacobianAlgebra::basis_index(const Monomial& restricted) const {
    for (std::size_t i = 0; i < basis.size(); ++i)
        if (sing.order.compare(basis[i], restricted) == 0) return i;
    return std::nullopt;
}

JacobianAlgebra jacobian_algebra(const Singularity& s) {
    JacobianAlgebra J{s, {}, {}, 0};
    const TablePtr& table = s.poly.table();
    J.gb.order = s.order;
    if (s.vars.empty()) {
        J.basis.push_back(Monomial(table->size(), 0));
        J.mu = 1;
        return J;
    }
    std::vector<Poly> gens;
    for (std::size_t v : s.vars) gens.push_back(partial(s.poly, v));
    J.gb = buchberger_with_cofactors(gens, s.order);
    std::vector<int> bound(s.vars.size(), -1);
    for (const auto& lm : J.gb.leading) {
        std::size_t nonzero = 0, which = 0;
        for (std::size_t i = 0; i < s.vars.size(); ++i)
            if (lm[s.vars[i]] > 0) {
                ++nonzero;
                which = i;
            }
        if (nonzero == 0) {
            throw DegenerateSingularity("Jacobian ideal is the unit ideal");
        }
        if (nonzero == 1 && (bound[which] < 0 || lm[s.vars[which]] < bound[which])) bound[which] = lm[s.vars[which]];
    }
    for (int b : bound)
        if (b < 0) throw DegenerateSingularity("singularity is not isolated: infinite standard monomial set");
    Monomial m(table->size(), 0);
    std::function<void(std::size_t)> rec = [&](std::size_t i) {
        if (i == s.vars.size()) {
            for (const auto& lm : J.gb.leading)
                if (s.order.divides(lm, m)) return;
            J.basis.push_back(m);
            return;
        }
        for (int e = 0; e < bound[i]; ++e) {
            m[s.vars[i]] = e;
            rec(i + 1);
        }
        m[s.vars[i]] = 0;
    };
    rec(0);
    std::sort(J.basis.begin(), J.basis.end(), [&](const Monomial& a, const Monomial& b) { return s.order.compare(a, b) < 0; });
    J.mu = J.basis.size();
    return J;
}

Rational qh_milnor(const std::vector<Rational>& weights) {
    Rational r = 1;
    for (const auto& w : weights) r *= Rational(1) / w - 1;
    return r;
}

Poly determinant(const std::vector<std::vector<Poly>>& m, const TablePtr& table) {
    std::size_t n = m.size();
    if (n == 0) return Poly::constant(table, 1);
    if (n == 1) return m[0][0];
    Poly r(table);
    for (std::size_t col = 0; col < n; ++col) {
        if (m[0][col].is_zero()) continue;
        std::vector<std::vector<Poly>> sub;
        for (std::size_t i = 1; i < n; ++i) {
            std::vector<Poly> row;
            for (std::size_t j = 0; j < n; ++j)
                if (j != col) row.push_back(m[i][j]);
            sub.push_back(row);
        }
        Poly term = m[0][col] * determinant(sub, table);
        if (col % 2) r -= term;
        else r += term;
    }
    return r;
}

Poly hessian_minor(const Poly& f, const std::vector<std::size_t>& vars) {
    std::vector<std::vector<Poly>> m(vars.size(), std::vector<Poly>(vars.size()));
    for (std::size_t i = 0; i < vars.size(); ++i) {
        Poly di = partial(f, vars[i]);
        for (std::size_t j = 0; j < vars.size(); ++j) m[i][j] = partial(di, vars[j]);
    }
    return determinant(m, f.table());
}

Poly hessian(const Singularity& s) { return hessian_minor(s.poly, s.vars); }

Singularity restrict_to_fix(const Singularity& s, const GroupElement& g, const std::vector<std::vector<Rational>>& fix_weights) {
    if (g.dimension() != s.vars.size()) throw std::invalid_argument("group element dimension mismatch");
    if (!is_symmetry(s.poly, g)) throw std::invalid_argument("group element is not a symmetry");
    std::vector<std::size_t> moved, fixed;
    for (std::size_t i : g.moved_indices()) moved.push_back(s.vars[i]);
    for (std::size_t i : g.fixed_indices()) fixed.push_back(s.vars[i]);
    MonomialOrder o{fixed, fix_weights};
    if (fixed.empty()) {
        o.weights.clear();
        return Singularity{Poly::constant(s.poly.table(), 1), {}, std::nullopt, o};
    }
    Poly r = set_zero(s.poly, moved);
    std::optional<std::vector<Rational>> w;
    if (s.weights) {
        std::vector<Rational> ww;
        for (std::size_t i : g.fixed_indices()) ww.push_back((*s.weights)[i]);
        w = ww;
    }
    Singularity out = make_singularity(r, o, w);
    // A finite standard monomial set certifies nondegeneracy.
    (void)jacobian_algebra(out);
    return out;
}

HgData compute_Hg(const Poly& source, const GroupElement& g, const JacobianAlgebra& jac_f, const JacobianAlgebra& jac_fg) {
    const TablePtr& table = source.table();
    std::vector<std::size_t> moved;
    for (std::size_t i : g.moved_indices()) moved.push_back(jac_f.sing.vars[i]);
    if (moved.empty()) return HgData{1, Poly::constant(table, 1), Poly::constant(table, 1)};
    Poly minor_f = hessian_minor(jac_f.sing.poly, moved);
    Poly hess_fg = jac_fg.sing.vars.empty() ? Poly::constant(table, 1) : hessian(jac_fg.sing);
    Poly lhs = jac_f.nf(hess_fg * minor_f) * Rational(Rational(1) / static_cast<long>(jac_fg.mu));
    Poly rhs = jac_f.nf(hessian(jac_f.sing)) * Rational(Rational(1) / static_cast<long>(jac_f.mu));
    if (lhs.is_zero()) throw NormalizationFailure("hessian ratio has a vanishing left side");
    const auto& [m0, c0] = *lhs.terms().begin();
    Rational m = rhs.coefficient(m0) / c0;
    if (m == 0 || !(lhs * m == rhs)) throw NormalizationFailure("hessian ratio equation is inconsistent");
    Poly minor = hessian_minor(source, moved);
    return HgData{m, minor, minor * m};
}

Poly OrbifoldAlgebra::project_invariant(const Poly& nf) const {
    Poly r(nf.table());
    for (const auto& [m, c] : nf.terms())
        if (is_symmetry(Poly::monomial(nf.table(), m), g)) r.add_term(m, c);
    return r;
}

Poly OrbifoldAlgebra::restrict_fix(const Poly& p) const {
    std::vector<std::size_t> moved;
    for (std::size_t i : g.moved_indices()) moved.push_back(jac_f->sing.vars[i]);
    return set_zero(p, moved);
}

SectorElement OrbifoldAlgebra::product(const SectorElement& a, const SectorElement& b) const {
    bool a_id = a.sector.is_identity(), b_id = b.sector.is_identity();
    if ((!a_id && a.sector != g) || (!b_id && b.sector != g)) throw std::invalid_argument("unsupported sector pair");
    GroupElement id = GroupElement::identity(g.dimension());
    if (a_id && b_id) return {id, project_invariant(jac_f->nf(a.rep * b.rep))};
    if (a_id) return {g, jac_fg->nf(restrict_fix(a.rep) * b.rep)};
    if (b_id) return {g, jac_fg->nf(a.rep * restrict_fix(b.rep))};
    if (g.compose(g) != id) throw std::invalid_argument("unsupported sector pair");
    return {id, project_invariant(jac_f->nf(a.rep * b.rep * H)) * c};
}

}  // namespace saito
