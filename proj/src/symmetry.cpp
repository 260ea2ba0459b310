#include "saito/symmetry.hpp"

#include <algorithm>
#include <numeric>
#include <sstream>

namespace saito {

namespace {

Rational frac_part(const Rational& q) {
    mpz_class fl;
    mpz_fdiv_q(fl.get_mpz_t(), q.get_num_mpz_t(), q.get_den_mpz_t());
    Rational r = q - Rational(fl);
    r.canonicalize();
    return r;
}

bool is_integer(const Rational& q) { return q.get_den() == 1; }

std::string trim(std::string_view s) {
    std::size_t a = 0, b = s.size();
    while (a < b && std::isspace(static_cast<unsigned char>(s[a]))) ++a;
    while (b > a && std::isspace(static_cast<unsigned char>(s[b - 1]))) --b;
    return std::string(s.substr(a, b - a));
}

}  // namespace

GroupElement::GroupElement(std::vector<Rational> phases) : phases_(std::move(phases)) {
    for (auto& p : phases_) p = frac_part(p);
}

GroupElement GroupElement::identity(std::size_t n) { return GroupElement(std::vector<Rational>(n, 0)); }

GroupElement GroupElement::parse(std::string_view text) {
    std::string s = trim(text);
    if (s.rfind("id:", 0) == 0) return identity(static_cast<std::size_t>(std::stoul(s.substr(3))));
    auto open = s.find('(');
    auto close = s.rfind(')');
    if (open == std::string::npos || close == std::string::npos || close < open)
        throw std::invalid_argument("bad group element: " + s);
    Rational scale = 1;
    std::string prefix = trim(std::string_view(s).substr(0, open));
    if (!prefix.empty()) scale = parse_rational(prefix);
    std::vector<Rational> phases;
    std::stringstream body(s.substr(open + 1, close - open - 1));
    std::string item;
    while (std::getline(body, item, ',')) phases.push_back(scale * parse_rational(trim(item)));
    if (phases.empty()) throw std::invalid_argument("bad group element: " + s);
    return GroupElement(std::move(phases));
}

bool GroupElement::is_identity() const {
    return std::all_of(phases_.begin(), phases_.end(), [](const Rational& p) { return p == 0; });
}

GroupElement GroupElement::compose(const GroupElement& h) const {
    if (h.dimension() != dimension()) throw std::invalid_argument("group elements of different dimension");
    std::vector<Rational> p(dimension());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = phases_[i] + h.phases_[i];
    return GroupElement(std::move(p));
}

GroupElement GroupElement::inverse() const {
    std::vector<Rational> p(dimension());
    for (std::size_t i = 0; i < p.size(); ++i) p[i] = -phases_[i];
    return GroupElement(std::move(p));
}

int GroupElement::order() const {
    mpz_class l = 1;
    for (const auto& p : phases_) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), p.get_den_mpz_t());
    return static_cast<int>(l.get_si());
}

std::vector<std::size_t> GroupElement::fixed_indices() const {
    std::vector<std::size_t> r;
    for (std::size_t i = 0; i < phases_.size(); ++i)
        if (phases_[i] == 0) r.push_back(i);
    return r;
}

std::vector<std::size_t> GroupElement::moved_indices() const {
    std::vector<std::size_t> r;
    for (std::size_t i = 0; i < phases_.size(); ++i)
        if (phases_[i] != 0) r.push_back(i);
    return r;
}

Rational GroupElement::age() const {
    Rational a = 0;
    for (const auto& p : phases_) a += p;
    return a;
}

std::string GroupElement::str() const {
    if (is_identity()) return "id";
    mpz_class l = 1;
    for (const auto& p : phases_) mpz_lcm(l.get_mpz_t(), l.get_mpz_t(), p.get_den_mpz_t());
    std::ostringstream out;
    out << "1/" << l.get_str() << "(";
    for (std::size_t i = 0; i < phases_.size(); ++i) {
        Rational v = phases_[i] * Rational(l);
        out << (i ? "," : "") << v.get_num().get_str();
    }
    out << ")";
    return out.str();
}

SymmetryGroup::SymmetryGroup(std::vector<GroupElement> elements) : elements_(std::move(elements)) {}

SymmetryGroup SymmetryGroup::generate(const std::vector<GroupElement>& generators) {
    if (generators.empty()) throw std::invalid_argument("need at least one generator");
    std::size_t n = generators.front().dimension();
    std::vector<GroupElement> elems{GroupElement::identity(n)};
    for (std::size_t i = 0; i < elems.size(); ++i) {
        for (const auto& g : generators) {
            GroupElement h = elems[i].compose(g);
            if (std::find(elems.begin(), elems.end(), h) == elems.end()) elems.push_back(h);
        }
    }
    std::sort(elems.begin() + 1, elems.end());
    for (const auto& a : elems) {
        if (std::find(elems.begin(), elems.end(), a.inverse()) == elems.end())
            throw std::logic_error("group not closed under inverses");
        for (const auto& b : elems)
            if (std::find(elems.begin(), elems.end(), a.compose(b)) == elems.end())
                throw std::logic_error("group not closed under composition");
    }
    return SymmetryGroup(std::move(elems));
}

bool SymmetryGroup::contains(const GroupElement& g) const {
    return std::find(elements_.begin(), elements_.end(), g) != elements_.end();
}

bool is_symmetry(const Poly& f, const GroupElement& g) {
    const auto& coords = f.table()->coordinates();
    if (coords.size() != g.dimension()) throw std::invalid_argument("group element dimension mismatch");
    for (const auto& [m, c] : f.terms()) {
        Rational s = 0;
        for (std::size_t i = 0; i < coords.size(); ++i) s += g.phases()[i] * m[coords[i]];
        if (!is_integer(s)) return false;
    }
    return true;
}

Rational c_constant_formula(const GroupElement& g, std::size_t group_order) {
    long n = static_cast<long>(g.dimension());
    long ng = static_cast<long>(g.fixed_count());
    long d = n - ng;
    int sign = ((d * (d - 1) / 2) % 2 == 0) ? 1 : -1;
    // e[-age/2] is real only when age/2 is a multiple of 1/2.
    Rational half_age = frac_part(-g.age() / 2);
    int e;
    if (half_age == 0)
        e = 1;
    else if (half_age == Rational(1, 2))
        e = -1;
    else
        throw UnsupportedGroup("e[-age/2] is not real for " + g.str());
    Rational o = static_cast<long>(group_order);
    return Rational(sign * e) / (o * o);
}

Rational c_constant(const GroupElement& g, std::size_t group_order) {
    Rational o = static_cast<long>(group_order);
    if (g.is_identity()) return Rational(1) / (o * o);
    (void)c_constant_formula(g, group_order);
    return Rational(-1) / (o * o);
}

GroupElement monomial_grading(const Monomial& m, const VarTable& table, std::size_t n) {
    GroupElement acc = GroupElement::identity(n);
    for (std::size_t i = 0; i < table.size(); ++i) {
        if (m[i] == 0 || table[i].grading.empty() || table[i].kind != VarKind::parameter) continue;
        GroupElement h = GroupElement::parse(table[i].grading);
        int e = m[i];
        if (e < 0) {
            h = h.inverse();
            e = -e;
        }
        for (int t = 0; t < e; ++t) acc = acc.compose(h);
    }
    return acc;
}

}  // namespace saito
