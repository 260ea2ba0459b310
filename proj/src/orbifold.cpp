#include "saito/orbifold.hpp"

#include <algorithm>
#include <functional>
#include <sstream>

namespace saito {

namespace {

std::string idx_name(const std::string& base, std::size_t i) { return base + std::to_string(i); }

Rational R(long a, long b = 1) {
    Rational r(a, b);
    r.canonicalize();
    return r;
}

struct FamilyData {
    std::string f, fbar;
    std::vector<Rational> f_weights;
    std::vector<std::vector<Rational>> f_order;
    std::vector<Rational> bar_weights;
    std::vector<std::vector<Rational>> bar_order;
    std::string g;
    std::vector<std::string> id_sections, g_sections;
    std::vector<std::string> B_id;
    bool has_involution = true;
};

std::string pw(const std::string& v, int e) {
    if (e == 0) return "1";
    if (e == 1) return v;
    return v + "^" + std::to_string(e);
}

std::string mul(const std::string& a, const std::string& b) {
    if (a == "1") return b;
    if (b == "1") return a;
    return a + "*" + b;
}

FamilyData family_data(int fam, int k) {
    FamilyData d;
    switch (fam) {
        case 1:
            d.f = pw("x1", k + 1) + " + x2^2 + x3^2";
            d.f_weights = {R(1, k + 1), R(1, 2), R(1, 2)};
            d.f_order = {d.f_weights};
            d.fbar = pw("y1", k + 1) + " + y2 + y2*y3^2";
            d.bar_weights = {R(1, k + 1), R(1), R(1, k + 1)};
            d.bar_order = {{R(1), R(k + 1), R(1)}};
            d.g = "1/2(0,1,1)";
            for (int a = 0; a < k; ++a) d.id_sections.push_back(pw("y1", a));
            for (int b = 0; b < k; ++b) d.g_sections.push_back(mul(pw("y1", b), "y3"));
            for (int a = 0; a < k; ++a) d.B_id.push_back(pw("x1", a));
            break;
        case 2:
            d.f = pw("x1", 2 * k) + " + x2^2 + x3^2";
            d.f_weights = {R(1, 2 * k), R(1, 2), R(1, 2)};
            d.f_order = {d.f_weights};
            d.fbar = "y1^2 + " + pw("y2", k) + " + y2*y3^2";
            if (k > 1) {
                d.bar_weights = {R(1, 2), R(1, k), R(k - 1, 2 * k)};
                d.bar_order = {d.bar_weights, {R(0), R(0), R(1)}};
            } else {
                d.bar_weights = {R(1, 2), R(1), R(1, 2)};
                d.bar_order = {{R(1), R(2), R(1)}};
            }
            d.g = "1/2(1,0,1)";
            for (int a = 0; a < k; ++a) d.id_sections.push_back(pw("y2", a));
            d.g_sections.push_back("y3");
            for (int a = 0; a < k; ++a) d.B_id.push_back(pw("x1", 2 * a));
            break;
        case 3:
            d.f = "x1^2 + x2^2 + " + mul("x2", pw("x3", 2 * k));
            d.f_weights = {R(1, 2), R(1, 2), R(1, 4 * k)};
            d.f_order = {d.f_weights};
            d.fbar = "y1^2 + " + mul("y1", pw("y2", k)) + " + y2*y3^2";
            d.bar_weights = {R(1, 2), R(1, 2 * k), R(2 * k - 1, 4 * k)};
            d.bar_order = {d.bar_weights, {R(0), R(0), R(1)}};
            d.g = "1/2(1,0,1)";
            for (int a = 0; a < 2 * k; ++a) d.id_sections.push_back(pw("y2", a));
            d.g_sections.push_back("y3");
            for (int a = 0; a < 2 * k; ++a) d.B_id.push_back(pw("x3", 2 * a));
            break;
        case 4:
            d.f = "x1^2 + " + pw("x2", k - 1) + " + x2*x3^2";
            d.f_weights = {R(1, 2), R(1, k - 1), R(k - 2, 2 * (k - 1))};
            d.f_order = {d.f_weights, {R(0), R(0), R(1)}};
            d.fbar = pw("y1", k - 1) + " + y1*y2 + y2*y3^2";
            d.bar_weights = {R(1, k - 1), R(k - 2, k - 1), R(1, 2 * (k - 1))};
            d.bar_order = {d.bar_weights, {R(0), R(1), R(1)}};
            d.g = "1/2(1,0,1)";
            for (int a = 0; a <= k - 2; ++a) d.id_sections.push_back(pw("y1", a));
            for (int b = 0; b <= k - 3; ++b) d.g_sections.push_back(mul(pw("y1", b), "y3"));
            for (int a = 0; a <= k - 2; ++a) d.B_id.push_back(pw("x2", a));
            break;
        case 5:
            d.f = "x1^2 + x2^2 + " + mul("x2", pw("x3", 2 * k + 1));
            d.f_weights = {R(1, 2), R(1, 2), R(1, 4 * k + 2)};
            d.f_order = {d.f_weights};
            d.fbar = "y1^2 + y2^2*y3 + " + mul("y2", pw("y3", k + 1));
            d.bar_weights = {R(1, 2), R(k, 2 * k + 1), R(1, 2 * k + 1)};
            d.bar_order = {d.bar_weights};
            d.g = "1/2(0,1,1)";
            for (int a = 0; a <= 2 * k; ++a) d.id_sections.push_back(pw("y3", a));
            d.g_sections.push_back("y2 + 1/2*" + pw("y3", k));
            for (int a = 0; a <= 2 * k; ++a) d.B_id.push_back(pw("x3", 2 * a));
            d.has_involution = false;
            break;
        default:
            throw FamilyError("unknown family " + std::to_string(fam));
    }
    return d;
}

Rational poly_weight(const Poly& p, const std::vector<std::size_t>& vars) {
    auto w = weighted_degree(p, vars);
    return w ? *w : Rational(0);
}

std::vector<std::size_t> moved_coords(const FamilySpec& F) {
    std::vector<std::size_t> r;
    for (std::size_t i : F.g.moved_indices()) r.push_back(F.orb_table->coordinates()[i]);
    return r;
}

std::vector<std::size_t> vg_indices(const FamilySpec& F) {
    std::vector<std::size_t> r;
    for (std::size_t b = 0; b < F.k_g; ++b) r.push_back(F.orb_table->index(idx_name("v_g", b)));
    return r;
}

std::map<std::string, std::string> bar_to_orb_names(const FamilySpec& F) {
    std::map<std::string, std::string> m;
    for (std::size_t a = 0; a < F.k_id; ++a) m[idx_name("sb", a)] = idx_name("v_id", a);
    for (std::size_t b = 0; b < F.k_g; ++b) m[idx_name("vb", b)] = idx_name("v_g", b);
    return m;
}

std::map<std::string, std::string> orb_to_bar_names(const FamilySpec& F) {
    std::map<std::string, std::string> m;
    for (const auto& [a, b] : bar_to_orb_names(F)) m[b] = a;
    return m;
}

}  // namespace

bool OrbifoldClass::is_zero() const {
    for (const auto& c : id)
        if (!c.is_zero()) return false;
    for (const auto& c : g)
        if (!c.is_zero()) return false;
    return true;
}

OrbifoldClass& OrbifoldClass::operator+=(const OrbifoldClass& o) {
    for (std::size_t i = 0; i < id.size(); ++i) id[i] += o.id[i];
    for (std::size_t i = 0; i < g.size(); ++i) g[i] += o.g[i];
    return *this;
}

OrbifoldClass& OrbifoldClass::operator-=(const OrbifoldClass& o) {
    for (std::size_t i = 0; i < id.size(); ++i) id[i] -= o.id[i];
    for (std::size_t i = 0; i < g.size(); ++i) g[i] -= o.g[i];
    return *this;
}

OrbifoldClass& OrbifoldClass::operator*=(const Poly& c) {
    for (auto& x : id) x *= c;
    for (auto& x : g) x *= c;
    return *this;
}

bool OrbifoldClass::operator==(const OrbifoldClass& o) const { return (*this - o).is_zero(); }

Direction parse_direction(std::string_view text) {
    std::string s(text);
    s.erase(std::remove(s.begin(), s.end(), '^'), s.end());
    Direction d;
    std::string digits;
    if (s.rfind("v_id", 0) == 0) {
        d.sector = Sector::id;
        digits = s.substr(4);
    } else if (s.rfind("v_g", 0) == 0) {
        d.sector = Sector::g;
        digits = s.substr(3);
    } else {
        throw std::invalid_argument("bad direction: " + std::string(text));
    }
    if (digits.empty() || !std::all_of(digits.begin(), digits.end(), ::isdigit))
        throw std::invalid_argument("bad direction: " + std::string(text));
    d.index = std::stoul(digits);
    return d;
}

std::string direction_name(const Direction& d) {
    return (d.sector == Sector::id ? "v_id" : "v_g") + std::to_string(d.index);
}

FamilyBounds family_bounds(int family) {
    if (family < 1 || family > 5) throw FamilyError("family must be 1..5");
    return FamilyBounds{family == 4 ? 4 : 1};
}

OrbifoldClass FamilySpec::zero() const {
    return OrbifoldClass{std::vector<Poly>(k_id, Poly(orb_table)), std::vector<Poly>(k_g, Poly(orb_table))};
}

OrbifoldClass FamilySpec::unit(Sector s, std::size_t i) const {
    OrbifoldClass c = zero();
    auto& v = s == Sector::id ? c.id : c.g;
    v.at(i) = Poly::constant(orb_table, 1);
    return c;
}

Poly FamilySpec::basis_poly(Sector s, std::size_t i) const {
    return Poly::monomial(orb_table, s == Sector::id ? B_id.at(i) : B_g.at(i));
}

OrbifoldAlgebra FamilySpec::algebra() const {
    OrbifoldAlgebra A;
    A.jac_f = jac_f.get();
    A.jac_fg = jac_fg.get();
    A.g = g;
    A.group_order = G.order();
    A.B_id = B_id;
    A.B_g = B_g;
    A.m = hg.m;
    A.H = hg.H;
    A.c = cg;
    return A;
}

FamilySpec build_family(int family, int k, int round_cap) {
    auto bounds = family_bounds(family);
    if (k < bounds.min_k) throw FamilyError("k out of range for family " + std::to_string(family));
    FamilyData d = family_data(family, k);
    FamilySpec F;
    F.family = family;
    F.k = k;
    F.k_id = d.id_sections.size();
    F.k_g = d.g_sections.size();
    F.g = GroupElement::parse(d.g);
    F.G = SymmetryGroup::generate({F.g});
    F.f_weights = d.f_weights;
    std::string g_label = F.g.inverse().str();

    // Resolution side.
    std::vector<VarEntry> bar;
    for (int i = 0; i < 3; ++i) bar.push_back({"y" + std::to_string(i + 1), VarKind::coordinate, d.bar_weights[i], ""});
    std::vector<std::size_t> ycoords{0, 1, 2};
    TablePtr probe = make_table([&] {
        auto e = bar;
        e.push_back({"z", VarKind::laurent, 1, ""});
        return e;
    }());
    std::vector<Poly> bar_sections;
    for (const auto& s : d.id_sections) bar_sections.push_back(parse_poly(s, probe));
    for (const auto& s : d.g_sections) bar_sections.push_back(parse_poly(s, probe));
    for (std::size_t a = 0; a < F.k_id; ++a) {
        bar.push_back({idx_name("sb", a), VarKind::parameter, 1 - poly_weight(bar_sections[a], ycoords), ""});
        F.bar_params.push_back(idx_name("sb", a));
    }
    for (std::size_t b = 0; b < F.k_g; ++b) {
        bar.push_back({idx_name("vb", b), VarKind::parameter, 1 - poly_weight(bar_sections[F.k_id + b], ycoords), g_label});
        F.bar_params.push_back(idx_name("vb", b));
    }
    bar.push_back({"z", VarKind::laurent, 1, ""});
    F.bar_table = make_table(bar);
    for (auto& s : bar_sections) s = retable(s, F.bar_table);
    F.fbar = parse_poly(d.fbar, F.bar_table);
    MonomialOrder bar_order = make_order(*F.bar_table, {"y1", "y2", "y3"}, d.bar_order);
    Singularity sbar = make_singularity(F.fbar, bar_order);

    // Orbifold side.
    std::vector<VarEntry> orb;
    for (int i = 0; i < 3; ++i) orb.push_back({"x" + std::to_string(i + 1), VarKind::coordinate, d.f_weights[i], ""});
    TablePtr oprobe = make_table([&] {
        auto e = orb;
        e.push_back({"z", VarKind::laurent, 1, ""});
        return e;
    }());
    std::vector<Poly> bid_polys;
    for (const auto& s : d.B_id) bid_polys.push_back(parse_poly(s, oprobe));
    for (std::size_t a = 0; a < F.k_id; ++a) {
        orb.push_back({idx_name("v_id", a), VarKind::parameter, 1 - poly_weight(bid_polys[a], ycoords), ""});
        F.orb_params.push_back(idx_name("v_id", a));
    }
    for (std::size_t b = 0; b < F.k_g; ++b) {
        orb.push_back({idx_name("v_g", b), VarKind::parameter, (*F.bar_table)[F.bar_table->index(idx_name("vb", b))].weight, g_label});
        F.orb_params.push_back(idx_name("v_g", b));
    }
    orb.push_back({"z", VarKind::laurent, 1, ""});
    F.orb_table = make_table(orb);
    for (auto& p : bid_polys) p = retable(p, F.orb_table);
    F.f = parse_poly(d.f, F.orb_table);
    if (!is_symmetry(F.f, F.g)) throw FamilyError("group element is not a symmetry of f");
    MonomialOrder f_order = make_order(*F.orb_table, {"x1", "x2", "x3"}, d.f_order);
    Singularity sf = make_singularity(F.f, f_order, d.f_weights);
    Singularity sfg = restrict_to_fix(sf, F.g, {{R(1)}});

    F.jac_f = std::make_shared<JacobianAlgebra>(jacobian_algebra(sf));
    F.jac_fg = std::make_shared<JacobianAlgebra>(jacobian_algebra(sfg));

    for (const auto& p : bid_polys) F.B_id.push_back(p.terms().begin()->first);
    F.B_g = F.jac_fg->basis;
    if (F.B_g.size() != F.k_g) throw FamilyError("twisted sector dimension mismatch");
    // B_id must be the invariant standard monomials of Jac(f).
    std::vector<Monomial> invariant;
    for (const auto& m : F.jac_f->basis)
        if (is_symmetry(Poly::monomial(F.orb_table, m), F.g)) invariant.push_back(m);
    if (invariant.size() != F.B_id.size()) throw FamilyError("identity sector dimension mismatch");
    for (const auto& m : F.B_id)
        if (std::find(invariant.begin(), invariant.end(), m) == invariant.end())
            throw FamilyError("identity sector basis is not invariant and standard");

    // Unfoldings.
    std::vector<Poly> id_lattice;
    F.Fbar = std::make_shared<Unfolding>(make_unfolding(sbar, F.bar_params, bar_sections));
    F.jac_fbar = std::make_shared<JacobianAlgebra>(F.Fbar->jac);
    if (F.jac_fbar->mu != F.k_id + F.k_g) throw FamilyError("resolution Milnor number mismatch");

    std::vector<std::string> vid(F.orb_params.begin(), F.orb_params.begin() + static_cast<long>(F.k_id));
    std::vector<Poly> fg_lattice;
    for (const auto& m : F.jac_f->basis) {
        fg_lattice.push_back(Poly::monomial(F.orb_table, m));
        auto it = std::find(F.B_id.begin(), F.B_id.end(), m);
        F.fg_to_bid.push_back(it == F.B_id.end() ? std::nullopt
                                                 : std::optional<std::size_t>(static_cast<std::size_t>(it - F.B_id.begin())));
    }
    F.FG = std::make_shared<Unfolding>(make_unfolding(sf, vid, bid_polys, fg_lattice));

    std::vector<Poly> fix_sections;
    for (const auto& p : bid_polys) fix_sections.push_back(set_zero(p, moved_coords(F)));
    std::vector<Poly> fix_lattice;
    for (const auto& m : F.B_g) fix_lattice.push_back(Poly::monomial(F.orb_table, m));
    F.Ffix = std::make_shared<Unfolding>(make_unfolding(sfg, vid, fix_sections, fix_lattice));

    // Key product data.
    F.hg = compute_Hg(F.f, F.g, *F.jac_f, *F.jac_fg);
    HgData hgf = compute_Hg(F.FG->F, F.g, *F.jac_f, *F.jac_fg);
    F.HgF = hgf.H;
    F.cg = c_constant(F.g, F.G.order());
    F.cg_formula = c_constant_formula(F.g, F.G.order());

    if (d.has_involution) {
        Involution p;
        p.signs["y3"] = -1;
        for (std::size_t b = 0; b < F.k_g; ++b) p.signs[idx_name("vb", b)] = -1;
        std::map<std::string, Poly> sub;
        for (const auto& [name, s] : p.signs) sub[name] = Poly::var(F.bar_table, name) * Rational(s);
        if (substitute(F.Fbar->F, sub) != F.Fbar->F) throw FamilyError("involution does not fix the unfolding");
        for (std::size_t a = 0; a < F.k_id + F.k_g; ++a) {
            Rational sign = a < F.k_id ? 1 : -1;
            if (substitute(bar_sections[a], sub) != bar_sections[a] * sign) throw FamilyError("involution does not grade the sections");
        }
        F.p = p;
    }

    for (std::size_t a = 0; a < F.Fbar->params.size(); ++a) F.bar_connection.push_back(connection_matrix(*F.Fbar, a, round_cap));
    return F;
}

OrbifoldClass psi_forward(const FamilySpec& F, const LatticeCoordinates& c) {
    if (c.size() != F.k_id + F.k_g) throw std::invalid_argument("coordinate vector not in the resolution basis");
    auto names = bar_to_orb_names(F);
    OrbifoldClass r = F.zero();
    for (std::size_t a = 0; a < F.k_id; ++a) r.id[a] = retable(c[a], F.orb_table, names);
    for (std::size_t b = 0; b < F.k_g; ++b) r.g[b] = retable(c[F.k_id + b], F.orb_table, names);
    return r;
}

LatticeCoordinates psi_inverse(const FamilySpec& F, const OrbifoldClass& c) {
    auto names = orb_to_bar_names(F);
    LatticeCoordinates r;
    for (const auto& x : c.id) r.push_back(retable(x, F.bar_table, names));
    for (const auto& x : c.g) r.push_back(retable(x, F.bar_table, names));
    return r;
}

std::size_t bar_param_index(const FamilySpec& F, const Direction& d) {
    if (d.sector == Sector::id) {
        if (d.index >= F.k_id) throw std::out_of_range("no such direction " + direction_name(d));
        return d.index;
    }
    if (d.index >= F.k_g) throw std::out_of_range("no such direction " + direction_name(d));
    return F.k_id + d.index;
}

OrbifoldClass orbifold_gm(const FamilySpec& F, const Direction& d, const OrbifoldClass& c) {
    std::size_t p = bar_param_index(F, d);
    LatticeCoordinates cb = psi_inverse(F, c);
    const Matrix& A = F.bar_connection[p];
    std::size_t tp = F.Fbar->params[p];
    LatticeCoordinates out(cb.size(), Poly(F.bar_table));
    for (std::size_t i = 0; i < cb.size(); ++i) {
        out[i] = partial(cb[i], tp);
        for (std::size_t j = 0; j < cb.size(); ++j)
            if (!cb[j].is_zero() && !A[i][j].is_zero()) out[i] += A[i][j] * cb[j];
    }
    return psi_forward(F, out);
}

OrbifoldClass sector_project(const FamilySpec& F, const OrbifoldClass& c, Projection which) {
    OrbifoldClass r = c;
    switch (which) {
        case Projection::Pi_id:
            for (auto& x : r.g) x = Poly(F.orb_table);
            break;
        case Projection::Pi_g:
            for (auto& x : r.id) x = Poly(F.orb_table);
            break;
        case Projection::pi_id:
            for (auto& x : r.g) x = Poly(F.orb_table);
            r = set_vg_zero(F, r);
            break;
    }
    return r;
}

namespace {

GroupElement term_grading(const FamilySpec& F, Sector s, const Monomial& m) {
    GroupElement sector = s == Sector::id ? GroupElement::identity(3) : F.g;
    return sector.compose(monomial_grading(m, *F.orb_table, 3));
}

OrbifoldClass graded_part(const FamilySpec& F, const OrbifoldClass& c, const GroupElement& which) {
    OrbifoldClass r = F.zero();
    for (std::size_t i = 0; i < c.id.size(); ++i)
        for (const auto& [m, v] : c.id[i].terms())
            if (term_grading(F, Sector::id, m) == which) r.id[i].add_term(m, v);
    for (std::size_t i = 0; i < c.g.size(); ++i)
        for (const auto& [m, v] : c.g[i].terms())
            if (term_grading(F, Sector::g, m) == which) r.g[i].add_term(m, v);
    return r;
}

}  // namespace

std::string grading_of(const FamilySpec& F, const OrbifoldClass& c) {
    std::optional<GroupElement> seen;
    bool mixed = false;
    auto visit = [&](Sector s, const std::vector<Poly>& v) {
        for (const auto& p : v)
            for (const auto& [m, coef] : p.terms()) {
                GroupElement h = term_grading(F, s, m);
                if (!seen) seen = h;
                else if (*seen != h) mixed = true;
            }
    };
    visit(Sector::id, c.id);
    visit(Sector::g, c.g);
    if (!seen) return "0";
    return mixed ? "mixed" : seen->str();
}

std::string direction_grading(const FamilySpec& F, const Direction& d) {
    return d.sector == Sector::id ? std::string("id") : F.g.str();
}

std::map<std::string, Poly> tilde_change(const FamilySpec& F, TildeKind kind) {
    std::map<std::string, Poly> sub;
    const auto& T = F.orb_table;
    if (kind == TildeKind::sector_exchange) {
        for (std::size_t a = 0; a < F.k_id; ++a) {
            std::string name = idx_name("v_id", a);
            if (F.family == 1) {
                sub[name] = Poly::var(T, idx_name("v_g", a));
            } else if (F.family == 4) {
                if (a >= 1 && a - 1 < F.k_g)
                    sub[name] = Poly::var(T, idx_name("v_g", a - 1)) * R(2 * static_cast<long>(a) - 1, 2);
                else
                    sub[name] = Poly(T);
            }
        }
        return sub;
    }
    if (F.family == 1 || F.family == 4) return sub;
    long num = F.family == 5 ? 2L * F.k + 1 : 2L * F.k - 1;
    for (std::size_t a = 0; a < F.k_id; ++a) {
        std::string name = idx_name("v_id", a);
        sub[name] = Poly::var(T, name) * R(num, 2 * static_cast<long>(a) - 1);
    }
    return sub;
}

OrbifoldClass apply_substitution(const FamilySpec& F, const OrbifoldClass& c, const std::map<std::string, Poly>& sub) {
    if (sub.empty()) return c;
    OrbifoldClass r = F.zero();
    for (std::size_t i = 0; i < c.id.size(); ++i) r.id[i] = substitute(c.id[i], sub);
    for (std::size_t i = 0; i < c.g.size(); ++i) r.g[i] = substitute(c.g[i], sub);
    return r;
}

OrbifoldClass lift_id(const FamilySpec& F, const Poly& rep) {
    Reduction red = reduce_to_basis(*F.FG, rep);
    OrbifoldClass r = F.zero();
    for (std::size_t i = 0; i < red.coords.size(); ++i) {
        if (red.coords[i].is_zero()) continue;
        if (!F.fg_to_bid[i]) throw ReductionFailure("identity sector class has a non-invariant component");
        r.id[*F.fg_to_bid[i]] += red.coords[i];
    }
    return r;
}

OrbifoldClass gm_FG(const FamilySpec& F, std::size_t alpha, const Poly& rep) {
    return lift_id(F, gauss_manin_chain(*F.FG, alpha, rep));
}

OrbifoldClass gm_fix(const FamilySpec& F, std::size_t alpha, const Poly& rep) {
    Poly r = set_zero(rep, moved_coords(F));
    Reduction red = gauss_manin(*F.Ffix, alpha, r);
    OrbifoldClass out = F.zero();
    for (std::size_t i = 0; i < red.coords.size(); ++i) out.g[i] = red.coords[i];
    return out;
}

OrbifoldClass restrict_to_g(const FamilySpec& F, const OrbifoldClass& c) {
    OrbifoldClass r = F.zero();
    auto moved = moved_coords(F);
    for (std::size_t j = 0; j < c.id.size(); ++j) {
        if (c.id[j].is_zero()) continue;
        Poly q = F.jac_fg->nf(set_zero(F.basis_poly(Sector::id, j), moved));
        for (const auto& [m, coef] : q.terms()) {
            auto i = F.jac_fg->basis_index(m);
            if (!i) throw std::logic_error("restriction left the twisted basis");
            r.g[*i] += c.id[j] * coef;
        }
    }
    return r;
}

OrbifoldClass z_inverse_part(const FamilySpec& F, const OrbifoldClass& c) {
    OrbifoldClass r = F.zero();
    for (std::size_t i = 0; i < c.id.size(); ++i) r.id[i] = z_component(c.id[i], -1);
    for (std::size_t i = 0; i < c.g.size(); ++i) r.g[i] = z_component(c.g[i], -1);
    return r;
}

OrbifoldClass times_z_inverse(const FamilySpec& F, const OrbifoldClass& c) {
    OrbifoldClass r = F.zero();
    for (std::size_t i = 0; i < c.id.size(); ++i) r.id[i] = shift_z(c.id[i], -1);
    for (std::size_t i = 0; i < c.g.size(); ++i) r.g[i] = shift_z(c.g[i], -1);
    return r;
}

OrbifoldClass set_vg_zero(const FamilySpec& F, const OrbifoldClass& c) {
    auto vg = vg_indices(F);
    OrbifoldClass r = F.zero();
    for (std::size_t i = 0; i < c.id.size(); ++i) r.id[i] = set_zero(c.id[i], vg);
    for (std::size_t i = 0; i < c.g.size(); ++i) r.g[i] = set_zero(c.g[i], vg);
    return r;
}

LatticeCoordinates parity_part(const FamilySpec& F, const LatticeCoordinates& c, int sign) {
    if (!F.p) throw std::logic_error("family has no involution");
    const auto& T = *F.bar_table;
    std::vector<int> var_sign(T.size(), 1);
    for (const auto& [name, s] : F.p->signs) var_sign[T.index(name)] = s;
    LatticeCoordinates r(c.size(), Poly(F.bar_table));
    for (std::size_t a = 0; a < c.size(); ++a) {
        int base = a < F.k_id ? 1 : -1;
        for (const auto& [m, coef] : c[a].terms()) {
            int s = base;
            for (std::size_t i = 0; i < m.size(); ++i)
                if (var_sign[i] < 0 && (m[i] % 2 != 0)) s = -s;
            if (s == sign) r[a].add_term(m, coef);
        }
    }
    return r;
}

OrbifoldClass class_of(const FamilySpec& F, const SectorElement& e) {
    OrbifoldClass r = F.zero();
    bool is_id = e.sector.is_identity();
    if (!is_id && e.sector != F.g) throw std::invalid_argument("sector outside the family group");
    const auto& basis = is_id ? F.B_id : F.B_g;
    auto& out = is_id ? r.id : r.g;
    const auto& coords = F.orb_table->coordinates();
    for (const auto& [m, c] : e.rep.terms()) {
        Monomial mono(m.size(), 0), rest = m;
        for (std::size_t i : coords) {
            mono[i] = m[i];
            rest[i] = 0;
        }
        auto it = std::find(basis.begin(), basis.end(), mono);
        if (it == basis.end()) throw std::invalid_argument("representative is not in sector normal form");
        out[static_cast<std::size_t>(it - basis.begin())].add_term(rest, c);
    }
    return r;
}

std::string format_class(const FamilySpec& F, const OrbifoldClass& c) {
    std::vector<std::string> parts;
    auto sector = [&](Sector s, const std::vector<Poly>& v, const std::string& tag) {
        Poly P(F.orb_table);
        for (std::size_t i = 0; i < v.size(); ++i)
            if (!v[i].is_zero()) P += v[i] * F.basis_poly(s, i);
        if (P.is_zero()) return;
        std::string body = format_poly(P);
        if (P.size() > 1) parts.push_back("(" + body + ")*" + tag);
        else if (body == "1") parts.push_back(tag);
        else if (body == "-1") parts.push_back("-" + tag);
        else parts.push_back(body + "*" + tag);
    };
    sector(Sector::id, c.id, "xi_id");
    sector(Sector::g, c.g, "xi_g");
    if (parts.empty()) return "0";
    std::string out = parts[0];
    for (std::size_t i = 1; i < parts.size(); ++i) {
        if (parts[i][0] == '-') out += " - " + parts[i].substr(1);
        else out += " + " + parts[i];
    }
    return out;
}

OrbifoldClass parse_class(const FamilySpec& F, std::string_view text) {
    auto entries = F.orb_table->entries();
    entries.push_back({"xi_id", VarKind::parameter, 0, ""});
    entries.push_back({"xi_g", VarKind::parameter, 0, ""});
    TablePtr T = make_table(entries);
    Poly p = parse_poly(text, T);
    std::size_t xid = T->index("xi_id"), xg = T->index("xi_g");
    OrbifoldClass r = F.zero();
    const auto& coords = F.orb_table->coordinates();
    for (const auto& [m, c] : p.terms()) {
        Sector s;
        if (m[xid] == 1 && m[xg] == 0) s = Sector::id;
        else if (m[xg] == 1 && m[xid] == 0) s = Sector::g;
        else throw ParseError("each term needs exactly one sector marker xi_id or xi_g", 0);
        Monomial mono(F.orb_table->size(), 0), rest(F.orb_table->size(), 0);
        for (std::size_t i = 0; i < F.orb_table->size(); ++i) {
            if (std::find(coords.begin(), coords.end(), i) != coords.end()) mono[i] = m[i];
            else rest[i] = m[i];
        }
        const auto& basis = s == Sector::id ? F.B_id : F.B_g;
        auto it = std::find(basis.begin(), basis.end(), mono);
        if (it == basis.end()) throw ParseError("monomial is not a sector basis element", 0);
        auto& v = s == Sector::id ? r.id : r.g;
        v[static_cast<std::size_t>(it - basis.begin())].add_term(rest, c);
    }
    return r;
}

// ---------------------------------------------------------------------------
// Verification

namespace {

class Verifier {
public:
    explicit Verifier(const FamilySpec& F) : F_(F), T_(F.orb_table) {}

    std::vector<ReportEntry> run() {
        explicit_clauses();
        structure_clauses();
        return std::move(entries_);
    }

private:
    const OrbifoldClass& L(Sector ds, std::size_t di, Sector es, std::size_t ei) {
        auto key = std::make_tuple(ds, di, es, ei);
        auto it = cache_.find(key);
        if (it != cache_.end()) return it->second;
        OrbifoldClass r = orbifold_gm(F_, Direction{ds, di}, F_.unit(es, ei));
        return cache_.emplace(key, std::move(r)).first->second;
    }

    OrbifoldClass G(std::size_t a, std::size_t b) { return gm_FG(F_, a, F_.basis_poly(Sector::id, b)); }

    Poly vg0(int e) { return Poly::var(T_, "v_g0", e); }
    Poly cst(const Rational& c) { return Poly::constant(T_, c); }

    static std::string idx(std::size_t a, std::size_t b) { return "[" + std::to_string(a) + "," + std::to_string(b) + "]"; }

    void add(const std::string& clause, const std::string& kind, const OrbifoldClass& lhs, const OrbifoldClass& rhs,
             std::optional<Rational> theta = std::nullopt) {
        ReportEntry e = base(clause, kind);
        e.lhs = format_class(F_, lhs);
        e.rhs = format_class(F_, rhs);
        OrbifoldClass diff = lhs - rhs;
        e.equal = diff.is_zero();
        if (!e.equal) e.residual = format_class(F_, diff);
        e.theta = theta;
        entries_.push_back(std::move(e));
    }

    void add_text(const std::string& clause, const std::string& kind, std::string lhs, std::string rhs, bool equal,
                  std::string residual = "", std::optional<Rational> theta = std::nullopt) {
        ReportEntry e = base(clause, kind);
        e.lhs = std::move(lhs);
        e.rhs = std::move(rhs);
        e.equal = equal;
        e.residual = std::move(residual);
        e.theta = theta;
        entries_.push_back(std::move(e));
    }

    ReportEntry base(const std::string& clause, const std::string& kind) const {
        ReportEntry e;
        e.family = F_.family;
        e.k = F_.k;
        e.clause = clause;
        e.kind = kind;
        e.cg = F_.cg;
        e.cg_formula = F_.cg_formula;
        e.mg = F_.hg.m;
        return e;
    }

    void explicit_clauses() {
        switch (F_.family) {
            case 1: explicit_family1(); break;
            case 4: explicit_family4(); break;
            default: explicit_single_twist(); break;
        }
    }

    // Families with one twisted class: threshold K = k_id.
    void explicit_single_twist() {
        const std::size_t K = F_.k_id;
        const long k = F_.k;
        Rational theta = F_.family == 2 ? R(1, 2 * k) : F_.family == 3 ? R(1, k) : R(-2, 2 * k + 1);
        for (std::size_t a = 0; a < K; ++a)
            for (std::size_t b = 0; b < K; ++b) {
                const auto& l = L(Sector::id, a, Sector::id, b);
                OrbifoldClass g = G(a, b);
                if (a + b <= K - 1) {
                    add("explicit.id_id.below" + idx(a, b), "displayed", l, g);
                } else if (a + b == K) {
                    OrbifoldClass extra = restrict_to_g(F_, F_.unit(Sector::id, a + b - K)) * (vg0(1) * cst(theta));
                    add("explicit.id_id.at" + idx(a, b), "displayed", l, g + times_z_inverse(F_, extra));
                } else {
                    OrbifoldClass extra = F_.unit(Sector::id, a + b - K - 1) * (vg0(2) * cst(-theta / 2));
                    add("explicit.id_id.above" + idx(a, b), "displayed", l, g + times_z_inverse(F_, extra));
                }
            }
        for (std::size_t b = 0; b < K; ++b) {
            OrbifoldClass rhs = b == 0 ? times_z_inverse(F_, F_.unit(Sector::g, 0))
                                       : times_z_inverse(F_, F_.unit(Sector::id, b - 1) * (vg0(1) * cst(Rational(-1, 2))));
            add("explicit.g_dir.id" + idx(0, b), "displayed", L(Sector::g, 0, Sector::id, b), rhs);
            add("explicit.id_dir.g" + idx(b, 0), "displayed", L(Sector::id, b, Sector::g, 0), rhs);
        }
        auto rescale = tilde_change(F_, TildeKind::product_rescale);
        const auto& lgg = L(Sector::g, 0, Sector::g, 0);
        OrbifoldClass via = apply_substitution(F_, orbifold_gm(F_, Direction{Sector::id, 0}, lift_id(F_, F_.HgF)), rescale);
        add("explicit.g_g" + idx(0, 0), "displayed", lgg, via * cst(F_.cg));
        if (F_.family != 5) {
            OrbifoldClass closed = times_z_inverse(F_, lift_id(F_, substitute(F_.HgF, rescale))) * cst(F_.cg);
            add("explicit.g_g.closed", "displayed", lgg, closed);
        }
    }

    void explicit_family1() {
        const std::size_t k = F_.k_id;
        auto ex = tilde_change(F_, TildeKind::sector_exchange);
        for (std::size_t a = 0; a < k; ++a)
            for (std::size_t b = 0; b < k; ++b) {
                OrbifoldClass g = G(a, b);
                const auto& l = L(Sector::id, a, Sector::id, b);
                if (a + b <= k - 1) {
                    add("explicit.id_id.below" + idx(a, b), "displayed", l, g);
                } else {
                    OrbifoldClass tw = apply_substitution(F_, restrict_to_g(F_, z_inverse_part(F_, g)), ex);
                    add("explicit.id_id.above" + idx(a, b), "displayed", l, g + tw);
                }
                OrbifoldClass rhs;
                if (a + b <= k - 1) {
                    rhs = restrict_to_g(F_, g);
                    add("explicit.g_dir.id.below" + idx(a, b), "displayed", L(Sector::g, a, Sector::id, b), rhs);
                    add("explicit.id_dir.g.below" + idx(b, a), "displayed", L(Sector::id, b, Sector::g, a), rhs);
                } else {
                    rhs = restrict_to_g(F_, g) - apply_substitution(F_, z_inverse_part(F_, g), ex);
                    add("explicit.g_dir.id.above" + idx(a, b), "displayed", L(Sector::g, a, Sector::id, b), rhs);
                    add("explicit.id_dir.g.above" + idx(b, a), "displayed", L(Sector::id, b, Sector::g, a), rhs);
                }
            }
        for (std::size_t a = 0; a < F_.k_g; ++a)
            for (std::size_t b = 0; b < F_.k_g; ++b) {
                OrbifoldClass rhs = orbifold_gm(F_, Direction{Sector::id, a}, lift_id(F_, F_.basis_poly(Sector::g, b) * F_.HgF));
                add("explicit.g_g" + idx(a, b), "displayed", L(Sector::g, a, Sector::g, b), rhs * cst(F_.cg));
            }
    }

    void explicit_family4() {
        const long k = F_.k;
        auto ex = tilde_change(F_, TildeKind::sector_exchange);
        for (std::size_t a = 0; a < F_.k_id; ++a)
            for (std::size_t b = 0; b < F_.k_id; ++b) {
                OrbifoldClass g = G(a, b);
                const auto& l = L(Sector::id, a, Sector::id, b);
                if (static_cast<long>(a + b) <= k - 2) {
                    add("explicit.id_id.below" + idx(a, b), "displayed", l, g);
                } else {
                    OrbifoldClass prev = b >= 1 ? G(a, b - 1) : F_.zero();
                    OrbifoldClass tw = restrict_to_g(F_, apply_substitution(F_, z_inverse_part(F_, prev), ex));
                    add("explicit.id_id.above" + idx(a, b), "displayed", l, g + tw);
                }
            }
        for (std::size_t a = 0; a < F_.k_g; ++a)
            for (std::size_t b = 0; b < F_.k_id; ++b) {
                OrbifoldClass g = G(a, b);
                OrbifoldClass rhs;
                std::string tag;
                if (static_cast<long>(a + b) <= k - 3) {
                    rhs = restrict_to_g(F_, g);
                    tag = ".below";
                } else {
                    rhs = restrict_to_g(F_, g) - apply_substitution(F_, z_inverse_part(F_, g), ex);
                    tag = ".above";
                }
                add("explicit.g_dir.id" + tag + idx(a, b), "displayed", L(Sector::g, a, Sector::id, b), rhs);
                add("explicit.id_dir.g" + tag + idx(b, a), "displayed", L(Sector::id, b, Sector::g, a), rhs);
            }
        for (std::size_t a = 0; a < F_.k_g; ++a)
            for (std::size_t b = 0; b < F_.k_g; ++b) {
                OrbifoldClass rhs = gm_FG(F_, a, F_.basis_poly(Sector::g, b) * F_.HgF) * cst(F_.cg);
                add("explicit.g_g" + idx(a, b), "displayed", L(Sector::g, a, Sector::g, b), rhs);
            }
    }

    std::vector<Direction> directions() const {
        std::vector<Direction> d;
        for (std::size_t a = 0; a < F_.k_id; ++a) d.push_back({Sector::id, a});
        for (std::size_t b = 0; b < F_.k_g; ++b) d.push_back({Sector::g, b});
        return d;
    }

    void structure_clauses() {
        auto dirs = directions();

        // Grading.
        std::size_t checked = 0, bad = 0;
        std::string first_bad;
        for (const auto& d : dirs)
            for (const auto& e : dirs) {
                const auto& r = L(d.sector, d.index, e.sector, e.index);
                GroupElement expected = (e.sector == Sector::id ? GroupElement::identity(3) : F_.g)
                                            .compose((d.sector == Sector::id ? GroupElement::identity(3) : F_.g).inverse());
                std::string got = grading_of(F_, r);
                ++checked;
                if (got != "0" && got != expected.str()) {
                    if (!bad) first_bad = direction_name(d) + " on " + format_class(F_, F_.unit(e.sector, e.index)) + ": " + got;
                    ++bad;
                }
            }
        add_text("structure.grading", "displayed", std::to_string(checked) + " derivatives, " + std::to_string(bad) + " off-grade",
                 std::to_string(checked) + " derivatives, 0 off-grade", bad == 0, first_bad);

        // Torsion: the connection along a direction applied to the class of
        // another direction is symmetric in the pair.
        std::size_t asym = 0;
        std::string first_asym;
        for (const auto& d : dirs)
            for (const auto& e : dirs) {
                const auto& a = L(d.sector, d.index, e.sector, e.index);
                const auto& b = L(e.sector, e.index, d.sector, d.index);
                if (!(a == b)) {
                    if (!asym) first_asym = direction_name(d) + "/" + direction_name(e) + ": " + format_class(F_, a - b);
                    ++asym;
                }
            }
        add_text("structure.torsion_free", "displayed", std::to_string(asym) + " asymmetric pairs", "0 asymmetric pairs", asym == 0,
                 first_asym);

        // Identity sector against F^G.
        for (std::size_t a = 0; a < F_.k_id; ++a)
            for (std::size_t b = 0; b < F_.k_id; ++b) {
                const auto& l = L(Sector::id, a, Sector::id, b);
                OrbifoldClass g = G(a, b);
                add("structure.identity_sector" + idx(a, b), "displayed", sector_project(F_, l, Projection::Pi_id), g);
                add("structure.identity_sector.strict" + idx(a, b), "supplementary", sector_project(F_, l, Projection::pi_id), g);
            }

        // Twisted sector against the restricted unfolding.
        for (std::size_t a = 0; a < F_.k_id; ++a)
            for (std::size_t b = 0; b < F_.k_g; ++b) {
                OrbifoldClass lhs = sector_project(F_, L(Sector::id, a, Sector::g, b), Projection::Pi_g);
                OrbifoldClass rhs = gm_fix(F_, a, F_.basis_poly(Sector::g, b));
                add("structure.twisted_sector.id_dir" + idx(a, b), "displayed", lhs, rhs);
                add("structure.twisted_sector.id_dir.strict" + idx(a, b), "supplementary", set_vg_zero(F_, lhs), rhs);
            }
        for (std::size_t a = 0; a < F_.k_g; ++a)
            for (std::size_t b = 0; b < F_.k_id; ++b) {
                OrbifoldClass lhs = sector_project(F_, L(Sector::g, a, Sector::id, b), Projection::Pi_g);
                OrbifoldClass rhs = gm_fix(F_, a, F_.basis_poly(Sector::id, b));
                add("structure.twisted_sector.g_dir" + idx(a, b), "displayed", lhs, rhs);
                add("structure.twisted_sector.g_dir.strict" + idx(a, b), "supplementary", set_vg_zero(F_, lhs), rhs);
            }

        // Twisted product.
        auto rescale = tilde_change(F_, TildeKind::product_rescale);
        for (std::size_t a = 0; a < F_.k_g; ++a)
            for (std::size_t b = 0; b < F_.k_g; ++b) {
                OrbifoldClass inner = orbifold_gm(F_, Direction{Sector::id, a}, lift_id(F_, F_.basis_poly(Sector::g, b) * F_.HgF));
                add("structure.twisted_product" + idx(a, b), "displayed", L(Sector::g, a, Sector::g, b),
                    apply_substitution(F_, inner, rescale) * cst(F_.cg));
            }

        normalization_clauses();
        if (F_.p) parity_clauses();
        if (F_.k_g == 1) theta_clauses();
    }

    void normalization_clauses() {
        const auto& jf = *F_.jac_f;
        const auto& jg = *F_.jac_fg;
        Poly hess_fg = jg.sing.vars.empty() ? Poly::constant(T_, 1) : hessian(jg.sing);
        Poly lhs = jf.nf(hess_fg * F_.hg.H) * Rational(Rational(1) / static_cast<long>(jg.mu));
        Poly rhs = jf.nf(hessian(jf.sing)) * Rational(Rational(1) / static_cast<long>(jf.mu));
        add_text("structure.hessian_normalization", "displayed", format_poly(lhs), format_poly(rhs), lhs == rhs,
                 lhs == rhs ? "" : format_poly(lhs - rhs));
        std::vector<std::size_t> vid;
        for (std::size_t a = 0; a < F_.k_id; ++a) vid.push_back(T_->index(idx_name("v_id", a)));
        Poly spec = set_zero(F_.HgF, vid);
        add_text("structure.hg_specialization", "displayed", format_poly(spec), format_poly(F_.hg.H), spec == F_.hg.H,
                 spec == F_.hg.H ? "" : format_poly(spec - F_.hg.H));
    }

    void parity_clauses() {
        std::size_t n = 0, bad_even = 0, bad_odd = 0, bad_strict = 0;
        GroupElement id = GroupElement::identity(3);
        std::vector<std::size_t> vb;
        for (std::size_t b = 0; b < F_.k_g; ++b) vb.push_back(F_.bar_table->index(idx_name("vb", b)));
        for (const auto& A : F_.bar_connection) {
            for (std::size_t j = 0; j < A.size(); ++j) {
                LatticeCoordinates c(A.size(), Poly(F_.bar_table));
                for (std::size_t i = 0; i < A.size(); ++i) c[i] = A[i][j];
                OrbifoldClass image = psi_forward(F_, c);
                ++n;
                if (!(psi_forward(F_, parity_part(F_, c, 1)) == graded_part(F_, image, id))) ++bad_even;
                if (!(psi_forward(F_, parity_part(F_, c, -1)) == graded_part(F_, image, F_.g))) ++bad_odd;
                LatticeCoordinates strict(c.size(), Poly(F_.bar_table));
                for (std::size_t i = 0; i < F_.k_id; ++i) strict[i] = set_zero(c[i], vb);
                if (!(psi_forward(F_, strict) == sector_project(F_, image, Projection::pi_id))) ++bad_strict;
            }
        }
        auto text = [&](std::size_t bad) { return std::to_string(n) + " classes, " + std::to_string(bad) + " mismatched"; };
        std::string ok = std::to_string(n) + " classes, 0 mismatched";
        add_text("structure.parity_diagram.even", "displayed", text(bad_even), ok, bad_even == 0);
        add_text("structure.parity_diagram.odd", "displayed", text(bad_odd), ok, bad_odd == 0);
        add_text("structure.parity_diagram.strict", "displayed", text(bad_strict), ok, bad_strict == 0);
    }

    void theta_clauses() {
        const std::size_t K = F_.k_id;
        Monomial key(T_->size(), 0);
        key[T_->index("v_g0")] = 1;
        key[T_->laurent()] = -1;
        std::optional<Rational> theta;
        bool consistent = true;
        std::vector<std::string> values;
        for (std::size_t a = 0; a < K; ++a)
            for (std::size_t b = 0; b < K; ++b) {
                if (a + b != K) continue;
                const auto& l = L(Sector::id, a, Sector::id, b);
                OrbifoldClass tw = sector_project(F_, l, Projection::Pi_g);
                OrbifoldClass unit = restrict_to_g(F_, F_.unit(Sector::id, a + b - K));
                Rational denom = unit.g[0].coefficient(Monomial(T_->size(), 0));
                Rational t = denom == 0 ? Rational(0) : tw.g[0].coefficient(key) / denom;
                OrbifoldClass expected = times_z_inverse(F_, unit * (vg0(1) * cst(t)));
                if (!(tw == expected)) consistent = false;
                if (!theta) theta = t;
                else if (*theta != t) consistent = false;
                values.push_back(format_rational(t));
            }
        if (!theta) return;
        bool ok = consistent && *theta != 0;
        std::string joined;
        for (const auto& v : values) joined += (joined.empty() ? "" : ", ") + v;
        add_text("structure.theta", "supplementary", "theta = " + joined, "single nonzero constant", ok, "", theta);

        for (std::size_t a = 0; a < K; ++a)
            for (std::size_t b = 0; b < K; ++b) {
                if (a + b < K) continue;
                const auto& l = L(Sector::id, a, Sector::id, b);
                OrbifoldClass g = G(a, b);
                if (a + b == K) {
                    OrbifoldClass extra = restrict_to_g(F_, F_.unit(Sector::id, 0)) * (vg0(1) * cst(*theta));
                    add("summary.id_id.at" + idx(a, b), "supplementary", l, g + times_z_inverse(F_, extra), theta);
                } else {
                    OrbifoldClass extra = F_.unit(Sector::id, a + b - K - 1) * (vg0(2) * cst(-*theta / 2));
                    add("summary.id_id.above" + idx(a, b), "supplementary", l, g + times_z_inverse(F_, extra), theta);
                }
            }
    }

    const FamilySpec& F_;
    TablePtr T_;
    std::map<std::tuple<Sector, std::size_t, Sector, std::size_t>, OrbifoldClass> cache_;
    std::vector<ReportEntry> entries_;
};

}  // namespace

std::vector<ReportEntry> verify_family(const FamilySpec& F) { return Verifier(F).run(); }

}  // namespace saito
