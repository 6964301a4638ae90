#pragma once

// Commutative polynomials with exact rational coefficients over an ordered
// list of named variables. Variables are coordinates (differentiable) or
// parameters (constants that stay symbolic).

#include "psm/expression.hpp"
#include "psm/rational.hpp"

#include <map>
#include <memory>
#include <optional>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace psm {

enum class VariableKind { coordinate, parameter };

struct Variable {
    std::string name;
    VariableKind kind;
};

class VariableSet {
public:
    VariableSet(const std::vector<std::string>& coordinates, const std::vector<std::string>& parameters) {
        for (const auto& c : coordinates) add(c, VariableKind::coordinate);
        for (const auto& p : parameters) add(p, VariableKind::parameter);
    }

    std::size_t size() const { return vars_.size(); }
    const Variable& operator[](std::size_t i) const { return vars_[i]; }
    const std::vector<Variable>& variables() const { return vars_; }

    std::optional<std::size_t> find(std::string_view name) const {
        auto it = index_.find(std::string(name));
        if (it == index_.end()) return std::nullopt;
        return it->second;
    }
    std::size_t index_of(std::string_view name) const {
        auto i = find(name);
        if (!i) throw std::invalid_argument("unknown variable '" + std::string(name) + "'");
        return *i;
    }

    std::vector<std::string> names() const {
        std::vector<std::string> out;
        for (const auto& v : vars_) out.push_back(v.name);
        return out;
    }
    std::vector<std::string> coordinates() const { return names_of(VariableKind::coordinate); }
    std::vector<std::string> parameters() const { return names_of(VariableKind::parameter); }

    bool operator==(const VariableSet& o) const {
        if (vars_.size() != o.vars_.size()) return false;
        for (std::size_t i = 0; i < vars_.size(); ++i)
            if (vars_[i].name != o.vars_[i].name || vars_[i].kind != o.vars_[i].kind) return false;
        return true;
    }

private:
    std::vector<Variable> vars_;
    std::map<std::string, std::size_t> index_;

    void add(const std::string& name, VariableKind kind) {
        if (!is_identifier(name)) throw std::invalid_argument("invalid variable name '" + name + "'");
        if (index_.count(name)) throw std::invalid_argument("duplicate variable '" + name + "'");
        index_[name] = vars_.size();
        vars_.push_back({name, kind});
    }
    std::vector<std::string> names_of(VariableKind k) const {
        std::vector<std::string> out;
        for (const auto& v : vars_)
            if (v.kind == k) out.push_back(v.name);
        return out;
    }
};

using VariableSetPtr = std::shared_ptr<const VariableSet>;

inline VariableSetPtr make_variables(const std::vector<std::string>& coordinates,
                                     const std::vector<std::string>& parameters = {}) {
    return std::make_shared<const VariableSet>(coordinates, parameters);
}

class Polynomial {
public:
    using Terms = std::map<Exponents, Rational>;

    Polynomial() = default;
    explicit Polynomial(VariableSetPtr vars) : vars_(std::move(vars)) {}

    static Polynomial constant(VariableSetPtr vars, const Rational& c) {
        Polynomial p(vars);
        p.add_term(Exponents(p.vars_->size(), 0), c);
        return p;
    }
    static Polynomial variable(VariableSetPtr vars, std::string_view name) {
        Polynomial p(vars);
        Exponents e(p.vars_->size(), 0);
        e[p.vars_->index_of(name)] = 1;
        p.add_term(e, Rational(1));
        return p;
    }

    const VariableSetPtr& variables() const { return vars_; }
    const Terms& terms() const { return terms_; }
    bool is_zero() const { return terms_.empty(); }
    bool is_constant() const {
        return terms_.empty() || (terms_.size() == 1 && total_degree(terms_.begin()->first) == 0);
    }
    Rational constant_term() const {
        if (!vars_) return 0;
        auto it = terms_.find(Exponents(vars_->size(), 0));
        return it == terms_.end() ? Rational(0) : it->second;
    }
    int degree() const {
        int d = -1;
        for (const auto& [e, c] : terms_) d = std::max(d, static_cast<int>(total_degree(e)));
        return d;
    }

    void add_term(const Exponents& e, const Rational& c) {
        if (psm::is_zero(c)) return;
        if (!vars_ || e.size() != vars_->size()) throw std::invalid_argument("exponent vector length mismatch");
        auto [it, inserted] = terms_.emplace(e, c);
        if (!inserted) {
            it->second += c;
            if (psm::is_zero(it->second)) terms_.erase(it);
        }
    }

    Polynomial operator-() const {
        Polynomial r(*this);
        for (auto& [e, c] : r.terms_) c = -c;
        return r;
    }
    Polynomial& operator+=(const Polynomial& o) {
        adopt(o);
        for (const auto& [e, c] : o.terms_) add_term(e, c);
        return *this;
    }
    Polynomial& operator-=(const Polynomial& o) {
        adopt(o);
        for (const auto& [e, c] : o.terms_) add_term(e, -c);
        return *this;
    }
    friend Polynomial operator+(Polynomial a, const Polynomial& b) { return a += b; }
    friend Polynomial operator-(Polynomial a, const Polynomial& b) { return a -= b; }

    friend Polynomial operator*(const Polynomial& a, const Polynomial& b) {
        Polynomial r(a.vars_ ? a.vars_ : b.vars_);
        if (a.vars_ && b.vars_) check_same(a, b);
        for (const auto& [ea, ca] : a.terms_)
            for (const auto& [eb, cb] : b.terms_) {
                Exponents e(ea);
                for (std::size_t i = 0; i < e.size(); ++i) e[i] += eb[i];
                r.add_term(e, ca * cb);
            }
        return r;
    }
    friend Polynomial operator*(const Rational& s, const Polynomial& p) {
        Polynomial r(p.vars_);
        if (psm::is_zero(s)) return r;
        for (const auto& [e, c] : p.terms_) r.terms_.emplace(e, s * c);
        return r;
    }

    bool operator==(const Polynomial& o) const { return terms_ == o.terms_; }
    bool operator!=(const Polynomial& o) const { return !(*this == o); }

    Polynomial pow(unsigned k) const {
        Polynomial r = constant(vars_, 1);
        for (unsigned i = 0; i < k; ++i) r = r * *this;
        return r;
    }

    /// Partial derivative with respect to a coordinate; parameters are constants.
    Polynomial partial(std::string_view name) const {
        std::size_t i = vars_->index_of(name);
        if ((*vars_)[i].kind != VariableKind::coordinate)
            throw std::invalid_argument("cannot differentiate with respect to parameter '" + std::string(name) + "'");
        return partial_index(i);
    }
    Polynomial partial_index(std::size_t i) const {
        Polynomial r(vars_);
        for (const auto& [e, c] : terms_) {
            if (e[i] == 0) continue;
            Exponents f(e);
            f[i] -= 1;
            r.add_term(f, c * e[i]);
        }
        return r;
    }

    /// Every variable occurring in the polynomial must be assigned.
    Rational evaluate(const std::map<std::string, Rational>& point) const {
        std::vector<std::optional<Rational>> value(vars_ ? vars_->size() : 0);
        for (std::size_t i = 0; i < value.size(); ++i) {
            auto it = point.find((*vars_)[i].name);
            if (it != point.end()) value[i] = it->second;
        }
        Rational sum = 0;
        for (const auto& [e, c] : terms_) {
            Rational t = c;
            for (std::size_t i = 0; i < e.size(); ++i) {
                if (e[i] == 0) continue;
                if (!value[i]) throw std::invalid_argument("missing assignment for '" + (*vars_)[i].name + "'");
                Rational p;
                mpz_pow_ui(p.get_num_mpz_t(), value[i]->get_num_mpz_t(), e[i]);
                mpz_pow_ui(p.get_den_mpz_t(), value[i]->get_den_mpz_t(), e[i]);
                t *= p;
            }
            sum += t;
        }
        return sum;
    }

    /// Replaces variables by polynomials over `target`; unmapped variables must
    /// exist in `target` under the same name.
    Polynomial substitute(const std::map<std::string, Polynomial>& images, VariableSetPtr target) const {
        std::vector<Polynomial> img;
        for (std::size_t i = 0; i < vars_->size(); ++i) {
            const auto& name = (*vars_)[i].name;
            auto it = images.find(name);
            img.push_back(it != images.end() ? it->second : variable(target, name));
        }
        Polynomial r(target);
        for (const auto& [e, c] : terms_) {
            Polynomial t = constant(target, c);
            for (std::size_t i = 0; i < e.size(); ++i)
                if (e[i]) t = t * img[i].pow(e[i]);
            r += t;
        }
        return r;
    }
    Polynomial substitute(const std::map<std::string, Polynomial>& images) const { return substitute(images, vars_); }

    /// Same polynomial over a larger variable set containing every name used.
    Polynomial embed(const VariableSetPtr& target) const {
        Polynomial r(target);
        for (const auto& [e, c] : terms_) {
            Exponents f(target->size(), 0);
            for (std::size_t i = 0; i < e.size(); ++i)
                if (e[i]) f[target->index_of((*vars_)[i].name)] = e[i];
            r.add_term(f, c);
        }
        return r;
    }

    std::string to_string() const { return format_terms(terms_, vars_ ? vars_->names() : std::vector<std::string>{}); }

private:
    VariableSetPtr vars_;
    Terms terms_;

    static unsigned total_degree(const Exponents& e) {
        unsigned s = 0;
        for (auto v : e) s += v;
        return s;
    }
    static void check_same(const Polynomial& a, const Polynomial& b) {
        if (a.vars_ != b.vars_ && !(*a.vars_ == *b.vars_))
            throw std::invalid_argument("polynomials over different variable sets");
    }
    void adopt(const Polynomial& o) {
        if (!vars_)
            vars_ = o.vars_;
        else if (o.vars_)
            check_same(*this, o);
    }
};

inline Polynomial operator*(const Polynomial& p, const Rational& s) { return s * p; }

inline Polynomial parse_expression(std::string_view text, const VariableSetPtr& vars) {
    ExpressionBuilder<Polynomial> b;
    b.identifier = [&](std::string_view name) -> std::optional<Polynomial> {
        if (!vars->find(name)) return std::nullopt;
        return Polynomial::variable(vars, name);
    };
    b.constant = [&](const Rational& c) { return Polynomial::constant(vars, c); };
    return parse_with(text, b);
}

}  // namespace psm
