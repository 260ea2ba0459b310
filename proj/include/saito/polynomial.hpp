#pragma once

#include <gmpxx.h>

#include <cstddef>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace saito {

using Rational = mpq_class;

enum class VarKind { coordinate, parameter, laurent };

struct VarEntry {
    std::string name;
    VarKind kind = VarKind::coordinate;
    Rational weight = 0;
    // Text form of a group element ("1/2(1,0,1)"); empty means identity.
    std::string grading;
};

class VarTable {
public:
    explicit VarTable(std::vector<VarEntry> entries);

    std::size_t size() const { return entries_.size(); }
    const VarEntry& operator[](std::size_t i) const { return entries_[i]; }
    const std::vector<VarEntry>& entries() const { return entries_; }

    std::optional<std::size_t> find(std::string_view name) const;
    std::size_t index(std::string_view name) const;
    std::size_t laurent() const { return laurent_; }
    const std::vector<std::size_t>& coordinates() const { return coordinates_; }
    const std::vector<std::size_t>& parameters() const { return parameters_; }

    bool operator==(const VarTable& other) const;

private:
    std::vector<VarEntry> entries_;
    std::size_t laurent_ = 0;
    std::vector<std::size_t> coordinates_;
    std::vector<std::size_t> parameters_;
};

using TablePtr = std::shared_ptr<const VarTable>;

TablePtr make_table(std::vector<VarEntry> entries);

// Exponent vector aligned with a VarTable.
using Monomial = std::vector<int>;

class TableMismatch : public std::logic_error {
public:
    TableMismatch() : std::logic_error("polynomials live over different variable tables") {}
};

class Poly {
public:
    using Terms = std::map<Monomial, Rational>;

    Poly() = default;
    explicit Poly(TablePtr table) : table_(std::move(table)) {}

    static Poly constant(const TablePtr& table, const Rational& c);
    static Poly var(const TablePtr& table, std::string_view name, int exponent = 1);
    static Poly monomial(const TablePtr& table, const Monomial& m, const Rational& c = 1);

    const TablePtr& table() const { return table_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    std::size_t size() const { return terms_.size(); }

    Rational coefficient(const Monomial& m) const;
    // The constant term when the polynomial is a pure rational, else nullopt.
    std::optional<Rational> as_constant() const;

    void add_term(const Monomial& m, const Rational& c);

    Poly& operator+=(const Poly& q);
    Poly& operator-=(const Poly& q);
    Poly& operator*=(const Poly& q);
    Poly& operator*=(const Rational& c);

    friend Poly operator+(Poly p, const Poly& q) { return p += q; }
    friend Poly operator-(Poly p, const Poly& q) { return p -= q; }
    friend Poly operator*(const Poly& p, const Poly& q);
    friend Poly operator*(Poly p, const Rational& c) { return p *= c; }
    friend Poly operator*(const Rational& c, Poly p) { return p *= c; }
    Poly operator-() const;

    bool operator==(const Poly& q) const;
    bool operator!=(const Poly& q) const { return !(*this == q); }

private:
    void check_table(const Poly& q) const;

    TablePtr table_;
    Terms terms_;
};

Poly partial(const Poly& p, std::size_t var);
Poly partial(const Poly& p, std::string_view var);

// Simultaneous substitution var -> image. The laurent variable may only map to
// a scalar multiple of itself.
Poly substitute(const Poly& p, const std::map<std::string, Poly>& images);

// Moves p onto another table, matching variables by name (after renaming).
Poly retable(const Poly& p, const TablePtr& dest, const std::map<std::string, std::string>& rename = {});

// Multiplies by z^e.
Poly shift_z(const Poly& p, int e);

// Terms whose z-exponent equals e.
Poly z_component(const Poly& p, int e);

// Sets every listed variable to zero.
Poly set_zero(const Poly& p, const std::vector<std::size_t>& vars);

// Weighted degree over the given variables; nullopt encodes minus infinity.
std::optional<Rational> weighted_degree(const Poly& p, const std::vector<std::size_t>& vars);
std::optional<Rational> weighted_degree(const Poly& p);

// Minimal and maximal z-exponent; nullopt for zero.
std::optional<std::pair<int, int>> z_range(const Poly& p);

class ParseError : public std::runtime_error {
public:
    ParseError(const std::string& what, std::size_t pos);
    std::size_t position() const { return pos_; }

private:
    std::size_t pos_;
};

Poly parse_poly(std::string_view text, const TablePtr& table);
std::string format_poly(const Poly& p);
std::string format_rational(const Rational& q);
Rational parse_rational(std::string_view text);

// Canonical printing order: larger weighted degree first, ties by reverse
// lexicographic order on the table.
bool canonical_before(const VarTable& table, const Monomial& a, const Monomial& b);

}  // namespace saito
