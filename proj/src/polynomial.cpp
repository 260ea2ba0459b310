#include "saito/polynomial.hpp"

#include <algorithm>
#include <cctype>
#include <set>
#include <sstream>

namespace saito {

VarTable::VarTable(std::vector<VarEntry> entries) : entries_(std::move(entries)) {
    std::set<std::string> seen;
    int laurent_count = 0;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& e = entries_[i];
        if (!seen.insert(e.name).second) throw std::invalid_argument("duplicate variable name: " + e.name);
        if (e.weight < 0) throw std::invalid_argument("negative weight for " + e.name);
        switch (e.kind) {
            case VarKind::coordinate:
                if (e.weight <= 0) throw std::invalid_argument("coordinate weight must be positive: " + e.name);
                coordinates_.push_back(i);
                break;
            case VarKind::parameter:
                parameters_.push_back(i);
                break;
            case VarKind::laurent:
                laurent_ = i;
                ++laurent_count;
                break;
        }
    }
    if (laurent_count != 1) throw std::invalid_argument("a variable table needs exactly one laurent variable");
}

std::optional<std::size_t> VarTable::find(std::string_view name) const {
    for (std::size_t i = 0; i < entries_.size(); ++i)
        if (entries_[i].name == name) return i;
    return std::nullopt;
}

std::size_t VarTable::index(std::string_view name) const {
    auto i = find(name);
    if (!i) throw std::out_of_range("unknown variable: " + std::string(name));
    return *i;
}

bool VarTable::operator==(const VarTable& other) const {
    if (entries_.size() != other.entries_.size()) return false;
    for (std::size_t i = 0; i < entries_.size(); ++i) {
        const auto& a = entries_[i];
        const auto& b = other.entries_[i];
        if (a.name != b.name || a.kind != b.kind || a.weight != b.weight || a.grading != b.grading) return false;
    }
    return true;
}

TablePtr make_table(std::vector<VarEntry> entries) {
    return std::make_shared<const VarTable>(std::move(entries));
}

Poly Poly::constant(const TablePtr& table, const Rational& c) {
    Poly p(table);
    p.add_term(Monomial(table->size(), 0), c);
    return p;
}

Poly Poly::var(const TablePtr& table, std::string_view name, int exponent) {
    Monomial m(table->size(), 0);
    std::size_t i = table->index(name);
    if (exponent < 0 && i != table->laurent())
        throw std::invalid_argument("negative exponent on non-laurent variable " + std::string(name));
    m[i] = exponent;
    return monomial(table, m);
}

Poly Poly::monomial(const TablePtr& table, const Monomial& m, const Rational& c) {
    Poly p(table);
    p.add_term(m, c);
    return p;
}

Rational Poly::coefficient(const Monomial& m) const {
    auto it = terms_.find(m);
    return it == terms_.end() ? Rational(0) : it->second;
}

std::optional<Rational> Poly::as_constant() const {
    if (terms_.empty()) return Rational(0);
    if (terms_.size() != 1) return std::nullopt;
    const auto& [m, c] = *terms_.begin();
    if (std::any_of(m.begin(), m.end(), [](int e) { return e != 0; })) return std::nullopt;
    return c;
}

void Poly::add_term(const Monomial& m, const Rational& c) {
    if (c == 0) return;
    if (!table_ || m.size() != table_->size()) throw std::invalid_argument("monomial does not match table");
    auto [it, inserted] = terms_.try_emplace(m, c);
    if (!inserted) {
        it->second += c;
        if (it->second == 0) terms_.erase(it);
    }
}

void Poly::check_table(const Poly& q) const {
    if (table_ == q.table_) return;
    if (!table_ || !q.table_ || !(*table_ == *q.table_)) throw TableMismatch();
}

Poly& Poly::operator+=(const Poly& q) {
    if (!table_) table_ = q.table_;
    check_table(q);
    for (const auto& [m, c] : q.terms_) add_term(m, c);
    return *this;
}

Poly& Poly::operator-=(const Poly& q) {
    if (!table_) table_ = q.table_;
    check_table(q);
    for (const auto& [m, c] : q.terms_) add_term(m, -c);
    return *this;
}

Poly operator*(const Poly& p, const Poly& q) {
    p.check_table(q);
    Poly r(p.table_ ? p.table_ : q.table_);
    Monomial m;
    for (const auto& [a, ca] : p.terms_) {
        for (const auto& [b, cb] : q.terms_) {
            m.resize(a.size());
            for (std::size_t i = 0; i < a.size(); ++i) m[i] = a[i] + b[i];
            r.add_term(m, ca * cb);
        }
    }
    return r;
}

Poly& Poly::operator*=(const Poly& q) {
    *this = *this * q;
    return *this;
}

Poly& Poly::operator*=(const Rational& c) {
    if (c == 0) {
        terms_.clear();
        return *this;
    }
    for (auto& [m, v] : terms_) v *= c;
    return *this;
}

Poly Poly::operator-() const {
    Poly r = *this;
    for (auto& [m, v] : r.terms_) v = -v;
    return r;
}

bool Poly::operator==(const Poly& q) const {
    if (terms_.empty() && q.terms_.empty()) return true;
    check_table(q);
    return terms_ == q.terms_;
}

Poly partial(const Poly& p, std::size_t var) {
    if (var == p.table()->laurent()) throw std::invalid_argument("differentiation in the laurent variable is not supported");
    Poly r(p.table());
    for (const auto& [m, c] : p.terms()) {
        if (m[var] == 0) continue;
        Monomial mm = m;
        --mm[var];
        r.add_term(mm, c * m[var]);
    }
    return r;
}

Poly partial(const Poly& p, std::string_view var) { return partial(p, p.table()->index(var)); }

Poly substitute(const Poly& p, const std::map<std::string, Poly>& images) {
    const auto& table = p.table();
    std::vector<std::optional<Poly>> img(table->size());
    std::optional<Rational> z_scale;
    for (const auto& [name, q] : images) {
        std::size_t i = table->index(name);
        if (i == table->laurent()) {
            Poly zq = retable(q, table);
            Monomial zm(table->size(), 0);
            zm[i] = 1;
            if (zq.size() != 1 || zq.terms().begin()->first != zm)
                throw std::invalid_argument("the laurent variable may only be rescaled");
            z_scale = zq.terms().begin()->second;
        } else {
            img[i] = q.table() == table ? q : retable(q, table);
        }
    }
    Poly r(table);
    for (const auto& [m, c] : p.terms()) {
        Monomial rest(table->size(), 0);
        Poly term = Poly::constant(table, c);
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            if (i == table->laurent()) {
                rest[i] = m[i];
                if (z_scale) {
                    Rational s = 1;
                    int e = m[i] < 0 ? -m[i] : m[i];
                    for (int t = 0; t < e; ++t) s *= *z_scale;
                    term *= m[i] < 0 ? Rational(1 / s) : s;
                }
            } else if (img[i]) {
                if (m[i] < 0) throw std::invalid_argument("cannot substitute a negative power");
                for (int t = 0; t < m[i]; ++t) term *= *img[i];
            } else {
                rest[i] = m[i];
            }
        }
        r += term * Poly::monomial(table, rest);
    }
    return r;
}

Poly retable(const Poly& p, const TablePtr& dest, const std::map<std::string, std::string>& rename) {
    if (p.table() == dest && rename.empty()) return p;
    const auto& src = *p.table();
    std::vector<std::size_t> map(src.size());
    for (std::size_t i = 0; i < src.size(); ++i) {
        std::string name = src[i].name;
        if (auto it = rename.find(name); it != rename.end()) name = it->second;
        if (i == src.laurent()) {
            map[i] = dest->laurent();
            continue;
        }
        auto j = dest->find(name);
        map[i] = j ? *j : static_cast<std::size_t>(-1);
    }
    Poly r(dest);
    for (const auto& [m, c] : p.terms()) {
        Monomial mm(dest->size(), 0);
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            if (map[i] == static_cast<std::size_t>(-1))
                throw std::invalid_argument("variable " + src[i].name + " has no counterpart in target table");
            mm[map[i]] += m[i];
        }
        r.add_term(mm, c);
    }
    return r;
}

Poly shift_z(const Poly& p, int e) {
    Poly r(p.table());
    std::size_t zi = p.table()->laurent();
    for (const auto& [m, c] : p.terms()) {
        Monomial mm = m;
        mm[zi] += e;
        r.add_term(mm, c);
    }
    return r;
}

Poly z_component(const Poly& p, int e) {
    Poly r(p.table());
    std::size_t zi = p.table()->laurent();
    for (const auto& [m, c] : p.terms())
        if (m[zi] == e) r.add_term(m, c);
    return r;
}

Poly set_zero(const Poly& p, const std::vector<std::size_t>& vars) {
    Poly r(p.table());
    for (const auto& [m, c] : p.terms())
        if (std::all_of(vars.begin(), vars.end(), [&](std::size_t i) { return m[i] == 0; })) r.add_term(m, c);
    return r;
}

namespace {

Rational monomial_weight(const VarTable& table, const Monomial& m, const std::vector<std::size_t>& vars) {
    Rational w = 0;
    for (std::size_t i : vars) w += table[i].weight * m[i];
    return w;
}

std::vector<std::size_t> all_indices(const VarTable& table) {
    std::vector<std::size_t> v(table.size());
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = i;
    return v;
}

}  // namespace

std::optional<Rational> weighted_degree(const Poly& p, const std::vector<std::size_t>& vars) {
    std::optional<Rational> best;
    for (const auto& [m, c] : p.terms()) {
        Rational w = monomial_weight(*p.table(), m, vars);
        if (!best || w > *best) best = w;
    }
    return best;
}

std::optional<Rational> weighted_degree(const Poly& p) {
    if (!p.table()) return std::nullopt;
    return weighted_degree(p, all_indices(*p.table()));
}

std::optional<std::pair<int, int>> z_range(const Poly& p) {
    if (p.is_zero()) return std::nullopt;
    std::size_t zi = p.table()->laurent();
    int lo = p.terms().begin()->first[zi], hi = lo;
    for (const auto& [m, c] : p.terms()) {
        lo = std::min(lo, m[zi]);
        hi = std::max(hi, m[zi]);
    }
    return std::make_pair(lo, hi);
}

bool canonical_before(const VarTable& table, const Monomial& a, const Monomial& b) {
    Rational wa = 0, wb = 0;
    for (std::size_t i = 0; i < table.size(); ++i) {
        wa += table[i].weight * a[i];
        wb += table[i].weight * b[i];
    }
    if (wa != wb) return wa > wb;
    // Reverse lexicographic: the monomial with the smaller last differing exponent comes first.
    for (std::size_t i = table.size(); i-- > 0;)
        if (a[i] != b[i]) return a[i] < b[i];
    return false;
}

ParseError::ParseError(const std::string& what, std::size_t pos)
    : std::runtime_error(what + " at position " + std::to_string(pos)), pos_(pos) {}

std::string format_rational(const Rational& q) {
    return q.get_den() == 1 ? q.get_num().get_str() : q.get_num().get_str() + "/" + q.get_den().get_str();
}

Rational parse_rational(std::string_view text) {
    Rational q;
    if (q.set_str(std::string(text), 10) != 0) throw std::invalid_argument("bad rational: " + std::string(text));
    if (q.get_den() == 0) throw std::invalid_argument("zero denominator: " + std::string(text));
    q.canonicalize();
    return q;
}

namespace {

// expr   := ['+'|'-'] term (('+'|'-') term)*
// term   := factor ('*' factor | factor)*    juxtaposition only after a number
// factor := atom ('^' ['-'] digits)?         negative powers only on z
// atom   := digits ['/' digits] | name | '(' expr ')'
class Parser {
public:
    Parser(std::string_view s, const TablePtr& t) : s_(s), table_(t) {}

    Poly parse() {
        skip();
        if (at_end()) throw ParseError("empty polynomial", pos_);
        Poly result = expr();
        skip();
        if (!at_end()) throw ParseError(peek() == ')' ? "unbalanced ')'" : "expected '+' or '-'", pos_);
        return result;
    }

private:
    bool at_end() const { return pos_ >= s_.size(); }
    char peek() const { return s_[pos_]; }
    void skip() {
        while (!at_end() && std::isspace(static_cast<unsigned char>(peek()))) ++pos_;
    }
    bool starts_atom() const {
        return !at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '(');
    }

    std::string digits() {
        std::size_t start = pos_;
        while (!at_end() && std::isdigit(static_cast<unsigned char>(peek()))) ++pos_;
        if (start == pos_) throw ParseError("expected digits", pos_);
        return std::string(s_.substr(start, pos_ - start));
    }

    Poly expr() {
        Poly result(table_);
        skip();
        bool first = true;
        while (true) {
            skip();
            Rational sign = 1;
            if (!at_end() && (peek() == '+' || peek() == '-')) {
                if (peek() == '-') sign = -1;
                ++pos_;
                skip();
            } else if (!first) {
                break;
            }
            first = false;
            result += term() * sign;
            skip();
            if (at_end() || (peek() != '+' && peek() != '-')) break;
        }
        return result;
    }

    Poly term() {
        bool numeric = false;
        Poly result = factor(numeric);
        while (true) {
            skip();
            if (!at_end() && peek() == '*') {
                ++pos_;
                skip();
            } else if (!(numeric && starts_atom() && !std::isdigit(static_cast<unsigned char>(peek())))) {
                break;
            }
            bool n = false;
            result *= factor(n);
            numeric = false;
        }
        return result;
    }

    Poly factor(bool& numeric) {
        skip();
        std::size_t start = pos_;
        if (at_end()) throw ParseError("expected variable name", pos_);
        Poly base(table_);
        std::optional<std::size_t> var;
        if (std::isdigit(static_cast<unsigned char>(peek()))) {
            std::string num = digits();
            skip();
            Rational coef(mpz_class(num), 1);
            if (!at_end() && peek() == '/') {
                ++pos_;
                skip();
                std::string den = digits();
                if (mpz_class(den) == 0) throw ParseError("zero denominator", start);
                coef = Rational(mpz_class(num), mpz_class(den));
                coef.canonicalize();
            }
            base = Poly::constant(table_, coef);
            numeric = true;
        } else if (peek() == '(') {
            ++pos_;
            base = expr();
            skip();
            if (at_end() || peek() != ')') throw ParseError("expected ')'", pos_);
            ++pos_;
        } else if (std::isalpha(static_cast<unsigned char>(peek()))) {
            while (!at_end() && (std::isalnum(static_cast<unsigned char>(peek())) || peek() == '_')) ++pos_;
            std::string name(s_.substr(start, pos_ - start));
            var = table_->find(name);
            if (!var) throw ParseError("unknown variable '" + name + "'", start);
            base = Poly::var(table_, name);
        } else {
            throw ParseError("expected variable name", pos_);
        }
        skip();
        if (at_end() || peek() != '^') return base;
        ++pos_;
        skip();
        int sign = 1;
        if (!at_end() && peek() == '-') {
            sign = -1;
            ++pos_;
        }
        std::size_t epos = pos_;
        int e = sign * std::stoi(digits());
        numeric = false;
        if (var) {
            if (e < 0 && *var != table_->laurent()) throw ParseError("negative exponent on '" + (*table_)[*var].name + "'", epos);
            Monomial m(table_->size(), 0);
            m[*var] = e;
            return Poly::monomial(table_, m);
        }
        if (e < 0) throw ParseError("negative exponent on a compound factor", epos);
        Poly r = Poly::constant(table_, 1);
        for (int i = 0; i < e; ++i) r *= base;
        return r;
    }

    std::string_view s_;
    TablePtr table_;
    std::size_t pos_ = 0;
};

}  // namespace

Poly parse_poly(std::string_view text, const TablePtr& table) { return Parser(text, table).parse(); }

std::string format_poly(const Poly& p) {
    if (p.is_zero()) return "0";
    const auto& table = *p.table();
    std::vector<const Poly::Terms::value_type*> terms;
    for (const auto& t : p.terms()) terms.push_back(&t);
    std::sort(terms.begin(), terms.end(),
              [&](auto* a, auto* b) { return canonical_before(table, a->first, b->first); });
    std::ostringstream out;
    bool first = true;
    for (const auto* t : terms) {
        const auto& [m, c] = *t;
        Rational mag = abs(c);
        if (first) {
            if (c < 0) out << "-";
        } else {
            out << (c < 0 ? " - " : " + ");
        }
        first = false;
        std::vector<std::string> factors;
        for (std::size_t i = 0; i < m.size(); ++i) {
            if (m[i] == 0) continue;
            factors.push_back(m[i] == 1 ? table[i].name : table[i].name + "^" + std::to_string(m[i]));
        }
        if (factors.empty()) {
            out << format_rational(mag);
            continue;
        }
        if (mag != 1) out << format_rational(mag) << "*";
        for (std::size_t i = 0; i < factors.size(); ++i) out << (i ? "*" : "") << factors[i];
    }
    return out.str();
}

}  // namespace saito
