#pragma once

// Free graded-commutative algebra over a table of generators, and graded
// derivations on it.
//
// A term is an exponent vector indexed by the table. Odd generators occur
// with exponent 0 or 1 and are read as an ordered product in table order;
// even generators commute with everything. Every product is normalised on
// the spot, so two elements are equal iff their term maps are equal.

#include "psm/expression.hpp"
#include "psm/polynomial.hpp"
#include "psm/rational.hpp"

#include <algorithm>
#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace psm {

enum class Family {
    coordinate,          // x^i
    parameter,           // constants such as a, a_i
    form,                // X~^i
    antifield,           // y_i
    antifield_form,      // Y~_i
    ghost,               // gamma^a
    ghost_curvature,     // Gamma^a
    poisson_form,        // X*^i
    poisson_antifield_form,  // Y*_i
    fundamental_form,    // X^i
    fundamental_antifield_form,  // Y_i
    generic,
};

struct Generator {
    std::string name;
    int degree = 0;
    Family family = Family::generic;
    int index = -1;  // coordinate index i or Lie basis index a

    bool odd() const { return degree % 2 != 0; }
};

class GeneratorTable {
public:
    explicit GeneratorTable(std::vector<Generator> gens) : gens_(std::move(gens)) {
        for (std::size_t i = 0; i < gens_.size(); ++i) {
            if (gens_[i].degree < 0) throw std::invalid_argument("negative generator degree");
            if (!is_identifier(gens_[i].name)) throw std::invalid_argument("invalid generator name '" + gens_[i].name + "'");
            if (!index_.emplace(gens_[i].name, i).second)
                throw std::invalid_argument("duplicate generator '" + gens_[i].name + "'");
        }
    }

    std::size_t size() const { return gens_.size(); }
    const Generator& operator[](std::size_t i) const { return gens_[i]; }
    const std::vector<Generator>& generators() const { return gens_; }

    std::optional<std::size_t> find(std::string_view name) const {
        auto it = index_.find(std::string(name));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }
    std::size_t index_of(std::string_view name) const {
        auto i = find(name);
        if (!i) throw std::invalid_argument("unknown generator '" + std::string(name) + "'");
        return *i;
    }
    /// Position of the generator of `family` carrying `index`.
    std::size_t of(Family family, int index) const {
        for (std::size_t i = 0; i < gens_.size(); ++i)
            if (gens_[i].family == family && gens_[i].index == index) return i;
        throw std::invalid_argument("generator family/index not present in table");
    }
    bool has(Family family) const {
        for (const auto& g : gens_)
            if (g.family == family) return true;
        return false;
    }
    std::vector<std::size_t> indices(Family family) const {
        std::vector<std::size_t> out;
        for (std::size_t i = 0; i < gens_.size(); ++i)
            if (gens_[i].family == family) out.push_back(i);
        return out;
    }
    std::vector<std::string> names() const {
        std::vector<std::string> out;
        for (const auto& g : gens_) out.push_back(g.name);
        return out;
    }

    bool operator==(const GeneratorTable& o) const {
        if (gens_.size() != o.gens_.size()) return false;
        for (std::size_t i = 0; i < gens_.size(); ++i)
            if (gens_[i].name != o.gens_[i].name || gens_[i].degree != o.gens_[i].degree) return false;
        return true;
    }

private:
    std::vector<Generator> gens_;
    std::map<std::string, std::size_t> index_;
};

using TablePtr = std::shared_ptr<const GeneratorTable>;

struct TableLayout {
    std::vector<std::string> coordinates;
    std::vector<std::string> parameters;
    std::vector<std::string> lie_basis;
    bool with_variants = false;
};

/// Standard table: x, X~, y, Y~, gamma, Gamma, [X*, Y*, X, Y], parameters.
inline TablePtr make_table(const TableLayout& layout) {
    std::vector<Generator> g;
    const auto& xs = layout.coordinates;
    auto each_coord = [&](const std::string& prefix, int degree, Family f) {
        for (std::size_t i = 0; i < xs.size(); ++i)
            g.push_back({prefix.empty() ? xs[i] : prefix + "_" + xs[i], degree, f, static_cast<int>(i)});
    };
    auto each_basis = [&](const std::string& prefix, int degree, Family f) {
        for (std::size_t a = 0; a < layout.lie_basis.size(); ++a)
            g.push_back({prefix + "_" + layout.lie_basis[a], degree, f, static_cast<int>(a)});
    };
    each_coord("", 0, Family::coordinate);
    each_coord("X", 1, Family::form);
    each_coord("y", 1, Family::antifield);
    each_coord("Y", 2, Family::antifield_form);
    each_basis("g", 1, Family::ghost);
    each_basis("G", 2, Family::ghost_curvature);
    if (layout.with_variants) {
        each_coord("Xs", 1, Family::poisson_form);
        each_coord("Ys", 2, Family::poisson_antifield_form);
        each_coord("Xf", 1, Family::fundamental_form);
        each_coord("Yf", 2, Family::fundamental_antifield_form);
    }
    for (std::size_t i = 0; i < layout.parameters.size(); ++i)
        g.push_back({layout.parameters[i], 0, Family::parameter, static_cast<int>(i)});
    return std::make_shared<const GeneratorTable>(std::move(g));
}

class SuperPolynomial {
public:
    using Terms = std::map<Exponents, Rational>;

    SuperPolynomial() = default;
    explicit SuperPolynomial(TablePtr table) : table_(std::move(table)) {}

    static SuperPolynomial constant(TablePtr table, const Rational& c) {
        SuperPolynomial p(table);
        p.add_term(Exponents(p.table_->size(), 0), c);
        return p;
    }
    static SuperPolynomial generator(TablePtr table, std::size_t i) {
        SuperPolynomial p(table);
        Exponents e(p.table_->size(), 0);
        e.at(i) = 1;
        p.add_term(e, 1);
        return p;
    }
    static SuperPolynomial generator(TablePtr table, std::string_view name) {
        std::size_t i = table->index_of(name);
        return generator(table, i);
    }
    /// Commutative polynomial read inside the table; its variables must be
    /// degree-0 generators of the same name.
    static SuperPolynomial lift(TablePtr table, const Polynomial& p) {
        SuperPolynomial r(table);
        const auto& vars = *p.variables();
        std::vector<std::size_t> map(vars.size());
        for (std::size_t i = 0; i < vars.size(); ++i) {
            map[i] = table->index_of(vars[i].name);
            if ((*table)[map[i]].degree != 0) throw std::invalid_argument("lifted variable is not of degree 0");
        }
        for (const auto& [e, c] : p.terms()) {
            Exponents f(table->size(), 0);
            for (std::size_t i = 0; i < e.size(); ++i) f[map[i]] += e[i];
            r.add_term(f, c);
        }
        return r;
    }

    const TablePtr& table() const { return table_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }

    void add_term(const Exponents& e, const Rational& c) {
        if (psm::is_zero(c)) return;
        if (!table_ || e.size() != table_->size()) throw std::invalid_argument("exponent vector length mismatch");
        auto [it, inserted] = terms_.emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (psm::is_zero(it->second)) terms_.erase(it);
        }
    }

    int term_degree(const Exponents& e) const {
        int d = 0;
        for (std::size_t i = 0; i < e.size(); ++i) d += e[i] * (*table_)[i].degree;
        return d;
    }
    /// Degree if homogeneous and nonzero.
    std::optional<int> degree() const {
        std::optional<int> d;
        for (const auto& [e, c] : terms_) {
            int t = term_degree(e);
            if (d && *d != t) return std::nullopt;
            d = t;
        }
        return d;
    }
    bool homogeneous_of(int degree) const {
        for (const auto& [e, c] : terms_)
            if (term_degree(e) != degree) return false;
        return true;
    }
    /// Number of factors from `family` in each term; nullopt if mixed.
    std::optional<int> family_degree(Family family) const {
        std::optional<int> d;
        for (const auto& [e, c] : terms_) {
            int t = 0;
            for (std::size_t i = 0; i < e.size(); ++i)
                if ((*table_)[i].family == family) t += e[i];
            if (d && *d != t) return std::nullopt;
            d = t;
        }
        return d;
    }
    /// Part of the element with exactly `k` factors from `family`.
    SuperPolynomial family_part(Family family, int k) const {
        SuperPolynomial r(table_);
        for (const auto& [e, c] : terms_) {
            int t = 0;
            for (std::size_t i = 0; i < e.size(); ++i)
                if ((*table_)[i].family == family) t += e[i];
            if (t == k) r.terms_.emplace(e, c);
        }
        return r;
    }
    /// True if only generators from the listed families occur.
    bool uses_only(const std::vector<Family>& families) const {
        for (const auto& [e, c] : terms_)
            for (std::size_t i = 0; i < e.size(); ++i)
                if (e[i] && std::find(families.begin(), families.end(), (*table_)[i].family) == families.end())
                    return false;
        return true;
    }

    SuperPolynomial operator-() const {
        SuperPolynomial r(*this);
        for (auto& [e, c] : r.terms_) c = -c;
        return r;
    }
    SuperPolynomial& operator+=(const SuperPolynomial& o) {
        adopt(o);
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    SuperPolynomial& operator-=(const SuperPolynomial& o) {
        adopt(o);
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    friend SuperPolynomial operator+(SuperPolynomial a, const SuperPolynomial& b) { return a += b; }
    friend SuperPolynomial operator-(SuperPolynomial a, const SuperPolynomial& b) { return a -= b; }
    friend SuperPolynomial operator*(const Rational& s, const SuperPolynomial& p) {
        SuperPolynomial r(p.table_);
        if (psm::is_zero(s)) return r;
        for (const auto& [e, c] : p.terms_) r.terms_.emplace(e, s * c);
        return r;
    }
    friend SuperPolynomial operator*(const SuperPolynomial& a, const SuperPolynomial& b) { return graded_product(a, b); }

    friend SuperPolynomial graded_product(const SuperPolynomial& a, const SuperPolynomial& b) {
        if (a.table_ && b.table_) check_same(a, b);
        SuperPolynomial r(a.table_ ? a.table_ : b.table_);
        if (a.terms_.empty() || b.terms_.empty()) return r;
        const auto& t = *r.table_;
        std::vector<std::size_t> odd;
        for (std::size_t i = 0; i < t.size(); ++i)
            if (t[i].odd()) odd.push_back(i);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                bool vanishes = false;
                int inversions = 0, odd_in_a_after = 0;
                // walk odd generators from the top so that for each odd j in b
                // we know how many odd i > j sit in a
                for (auto it = odd.rbegin(); it != odd.rend(); ++it) {
                    std::size_t k = *it;
                    if (ea[k] && eb[k]) {
                        vanishes = true;
                        break;
                    }
                    if (eb[k]) inversions += odd_in_a_after;
                    if (ea[k]) ++odd_in_a_after;
                }
                if (vanishes) continue;
                Exponents e(ea);
                for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
                Rational c = ca * cb;
                if (inversions % 2) c = -c;
                r.add_term(e, c);
            }
        return r;
    }

    bool operator==(const SuperPolynomial& o) const { return terms_ == o.terms_; }
    bool operator!=(const SuperPolynomial& o) const { return !(*this == o); }

    /// Derivative with respect to an even generator.
    SuperPolynomial partial_even(std::size_t g) const {
        if ((*table_)[g].odd()) throw std::invalid_argument("partial_even on odd generator");
        SuperPolynomial r(table_);
        for (const auto& [e, c] : terms_) {
            if (!e[g]) continue;
            Exponents f(e);
            f[g] -= 1;
            r.add_term(f, c * e[g]);
        }
        return r;
    }
    /// Left derivative with respect to an odd generator.
    SuperPolynomial left_derivative(std::size_t g) const {
        if (!(*table_)[g].odd()) throw std::invalid_argument("left_derivative on even generator");
        SuperPolynomial r(table_);
        for (const auto& [e, c] : terms_) {
            if (!e[g]) continue;
            int before = 0;
            for (std::size_t i = 0; i < g; ++i)
                if (e[i] && (*table_)[i].odd()) ++before;
            Exponents f(e);
            f[g] = 0;
            r.add_term(f, before % 2 ? Rational(-c) : c);
        }
        return r;
    }

    /// Same element inside another table containing every generator used.
    SuperPolynomial embed(const TablePtr& target) const {
        if (table_ == target) return *this;
        SuperPolynomial r(target);
        std::vector<std::optional<std::size_t>> map(table_->size());
        for (const auto& [e, c] : terms_) {
            // re-multiply so odd factors land in the target's canonical order
            SuperPolynomial t = constant(target, c);
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (!e[i]) continue;
                if (!map[i]) map[i] = target->index_of((*table_)[i].name);
                for (int k = 0; k < e[i]; ++k) t = t * generator(target, *map[i]);
            }
            r += t;
        }
        return r;
    }

    /// Coefficient of a monomial in the given generators (all other factors
    /// must be of degree 0), returned as an element of degree 0.
    SuperPolynomial coefficient_of(const std::vector<std::size_t>& odd_factors) const {
        SuperPolynomial r(table_);
        Exponents mask(table_->size(), 0);
        for (auto i : odd_factors) mask[i] = 1;
        for (const auto& [e, c] : terms_) {
            bool match = true;
            Exponents f(e);
            for (std::size_t i = 0; i < e.size(); ++i) {
                if ((*table_)[i].degree == 0) continue;
                if (e[i] != mask[i]) {
                    match = false;
                    break;
                }
                f[i] = 0;
            }
            if (match) r.add_term(f, c);
        }
        return r;
    }

    std::string to_string() const { return format_terms(terms_, table_ ? table_->names() : std::vector<std::string>{}); }

private:
    TablePtr table_;
    Terms terms_;

    static void check_same(const SuperPolynomial& a, const SuperPolynomial& b) {
        if (a.table_ != b.table_ && !(*a.table_ == *b.table_))
            throw std::invalid_argument("superpolynomials over different generator tables");
    }
    void adopt(const SuperPolynomial& o) {
        if (!table_)
            table_ = o.table_;
        else if (o.table_)
            check_same(*this, o);
    }
};

inline SuperPolynomial operator*(const SuperPolynomial& p, const Rational& s) { return s * p; }

inline SuperPolynomial parse_super(std::string_view text, const TablePtr& table) {
    ExpressionBuilder<SuperPolynomial> b;
    b.identifier = [&](std::string_view name) -> std::optional<SuperPolynomial> {
        auto i = table->find(name);
        if (!i) return std::nullopt;
        return SuperPolynomial::generator(table, *i);
    };
    b.constant = [&](const Rational& c) { return SuperPolynomial::constant(table, c); };
    return parse_with(text, b);
}

class Derivation {
public:
    Derivation() = default;
    Derivation(TablePtr table, int degree, std::string label)
        : table_(std::move(table)), degree_(degree), label_(std::move(label)), actions_(table_->size()) {}

    const TablePtr& table() const { return table_; }
    int degree() const { return degree_; }
    const std::string& label() const { return label_; }
    void relabel(std::string label) { label_ = std::move(label); }

    /// Sets the image of generator g; its degree must be deg g + deg D.
    void set(std::size_t g, SuperPolynomial value) {
        if (!value.is_zero()) {
            if (value.table() != table_ && !(*value.table() == *table_))
                throw std::invalid_argument("derivation action over a different table");
            if (!value.homogeneous_of((*table_)[g].degree + degree_))
                throw std::invalid_argument("derivation " + label_ + " on " + (*table_)[g].name + ": image has wrong degree");
        }
        actions_.at(g) = SuperPolynomial(table_) + value;
    }
    void set(std::string_view name, SuperPolynomial value) { set(table_->index_of(name), std::move(value)); }

    bool defined_on(std::size_t g) const {
        return actions_[g].has_value() || (*table_)[g].family == Family::parameter;
    }
    SuperPolynomial on(std::size_t g) const {
        if ((*table_)[g].family == Family::parameter) return SuperPolynomial(table_);
        if (!actions_[g]) throw std::invalid_argument("derivation " + label_ + " has no action on " + (*table_)[g].name);
        return *actions_[g];
    }

    SuperPolynomial apply(const SuperPolynomial& a) const {
        SuperPolynomial r(table_);
        const auto& t = *table_;
        bool odd_d = degree_ % 2 != 0;
        for (const auto& [e, c] : a.terms()) {
            int odd_before = 0;
            for (std::size_t g = 0; g < e.size(); ++g) {
                if (!e[g]) continue;
                if (t[g].family == Family::parameter) continue;
                SuperPolynomial dg = on(g);
                if (t[g].odd()) {
                    Exponents left(e.size(), 0), right(e.size(), 0);
                    for (std::size_t i = 0; i < e.size(); ++i) {
                        if (i == g || !e[i]) continue;
                        if (t[i].odd())
                            (i < g ? left : right)[i] = e[i];
                        else
                            left[i] = e[i];
                    }
                    Rational coef = (odd_d && odd_before % 2) ? Rational(-c) : c;
                    SuperPolynomial l(table_), rr(table_);
                    l.add_term(left, coef);
                    rr.add_term(right, 1);
                    r += (l * dg) * rr;
                    ++odd_before;
                } else {
                    Exponents rest(e);
                    rest[g] -= 1;
                    SuperPolynomial mono(table_);
                    Rational coef = c * e[g];
                    // even generators commute, so rest may be split as
                    // (even part) * (odd part) with the odd part ordered
                    Exponents even_part(e.size(), 0), odd_part(e.size(), 0);
                    for (std::size_t i = 0; i < e.size(); ++i) (t[i].odd() ? odd_part : even_part)[i] = rest[i];
                    SuperPolynomial ev(table_), od(table_);
                    ev.add_term(even_part, coef);
                    od.add_term(odd_part, 1);
                    r += (ev * dg) * od;
                }
            }
        }
        return r;
    }
    SuperPolynomial operator()(const SuperPolynomial& a) const { return apply(a); }

    friend Derivation operator+(const Derivation& a, const Derivation& b) { return combine(a, b, 1, "(" + a.label_ + " + " + b.label_ + ")"); }
    friend Derivation operator-(const Derivation& a, const Derivation& b) { return combine(a, b, -1, "(" + a.label_ + " - " + b.label_ + ")"); }
    Derivation scaled(const Rational& s) const {
        Derivation r(table_, degree_, to_string(s) + "*" + label_);
        for (std::size_t g = 0; g < actions_.size(); ++g)
            if (actions_[g]) r.actions_[g] = s * *actions_[g];
        return r;
    }
    static Derivation zero(TablePtr table, int degree, std::string label = "0") {
        Derivation r(table, degree, std::move(label));
        for (std::size_t g = 0; g < r.actions_.size(); ++g) r.actions_[g] = SuperPolynomial(table);
        return r;
    }

private:
    TablePtr table_;
    int degree_ = 0;
    std::string label_;
    std::vector<std::optional<SuperPolynomial>> actions_;

    static Derivation combine(const Derivation& a, const Derivation& b, int sign, std::string label) {
        if (a.degree_ != b.degree_) throw std::invalid_argument("adding derivations of different degree");
        if (a.table_ != b.table_ && !(*a.table_ == *b.table_)) throw std::invalid_argument("derivations over different tables");
        Derivation r(a.table_, a.degree_, std::move(label));
        for (std::size_t g = 0; g < a.actions_.size(); ++g)
            if (a.actions_[g] && b.actions_[g])
                r.actions_[g] = sign > 0 ? *a.actions_[g] + *b.actions_[g] : *a.actions_[g] - *b.actions_[g];
        return r;
    }
};

/// [D1, D2] = D1 D2 - (-1)^{|D1||D2|} D2 D1, evaluated on every generator where
/// both compositions are defined.
inline Derivation derivation_commutator(const Derivation& d1, const Derivation& d2) {
    if (d1.table() != d2.table() && !(*d1.table() == *d2.table()))
        throw std::invalid_argument("commutator of derivations over different tables");
    Derivation r(d1.table(), d1.degree() + d2.degree(), "[" + d1.label() + ", " + d2.label() + "]");
    bool sign = (d1.degree() % 2 != 0) && (d2.degree() % 2 != 0);
    const auto& t = *d1.table();
    for (std::size_t g = 0; g < t.size(); ++g) {
        if (t[g].family == Family::parameter || !d1.defined_on(g) || !d2.defined_on(g)) continue;
        SuperPolynomial a = d1.apply(d2.on(g));
        SuperPolynomial b = d2.apply(d1.on(g));
        r.set(g, sign ? a + b : a - b);
    }
    return r;
}

struct GeneratorResidual {
    std::size_t generator;
    SuperPolynomial residual;
};

/// Generators (from `subset`, or all where both are defined) on which the
/// two derivations differ, with the difference d1(g) - d2(g).
inline std::vector<GeneratorResidual> compare_on_generators(const Derivation& d1, const Derivation& d2,
                                                            const std::vector<std::size_t>& subset = {}) {
    std::vector<GeneratorResidual> out;
    const auto& t = *d1.table();
    std::vector<std::size_t> gens = subset;
    if (gens.empty())
        for (std::size_t g = 0; g < t.size(); ++g)
            if (t[g].family != Family::parameter && d1.defined_on(g) && d2.defined_on(g)) gens.push_back(g);
    for (auto g : gens) {
        SuperPolynomial diff = d1.on(g) - d2.on(g);
        if (!diff.is_zero()) out.push_back({g, diff});
    }
    return out;
}

/// Algebra homomorphism fixing every generator not in `subst`.
inline SuperPolynomial substitute_generators(const SuperPolynomial& a, const std::map<std::size_t, SuperPolynomial>& subst) {
    const auto& table = a.table();
    for (const auto& [g, img] : subst)
        if (!img.homogeneous_of((*table)[g].degree))
            throw std::invalid_argument("substitution for " + (*table)[g].name + " does not preserve degree");
    SuperPolynomial r(table);
    for (const auto& [e, c] : a.terms()) {
        SuperPolynomial t = SuperPolynomial::constant(table, c);
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (!e[i]) continue;
            auto it = subst.find(i);
            SuperPolynomial f = it != subst.end() ? it->second : SuperPolynomial::generator(table, i);
            for (int k = 0; k < e[i]; ++k) t = t * f;
        }
        r += t;
    }
    return r;
}

inline SuperPolynomial substitute_generators(const SuperPolynomial& a, const std::map<std::string, SuperPolynomial>& subst) {
    std::map<std::size_t, SuperPolynomial> by_index;
    for (const auto& [name, img] : subst) by_index.emplace(a.table()->index_of(name), img);
    return substitute_generators(a, by_index);
}

}  // namespace psm
