#pragma once

// Multivectors as superpolynomials in (x, y), the Schouten bracket, and the
// Poisson-geometric checks built on it.
//
// A p-vector beta is represented by (1/p!) beta^{i1..ip} y_i1 ... y_ip, i.e.
// by the sum over increasing index tuples. A p-form sigma uses X~ instead
// of y in the same way.

#include "psm/polynomial.hpp"
#include "psm/report.hpp"
#include "psm/supergraded.hpp"

#include <functional>
#include <sstream>
#include <string>
#include <vector>

namespace psm {

using Matrix = std::vector<std::vector<Polynomial>>;

enum class BivectorChoice { varpi, theta, pi };

inline std::string to_string(BivectorChoice c) {
    switch (c) {
        case BivectorChoice::varpi: return "varpi";
        case BivectorChoice::theta: return "theta";
        default: return "pi";
    }
}

struct PoissonModel {
    std::string name;
    VariableSetPtr vars;
    Matrix varpi;
    Matrix theta;

    PoissonModel() = default;
    PoissonModel(std::string model_name, const std::vector<std::string>& coordinates,
                 const std::vector<std::string>& parameters = {})
        : name(std::move(model_name)), vars(make_variables(coordinates, parameters)) {
        std::size_t n = coordinates.size();
        varpi.assign(n, std::vector<Polynomial>(n, Polynomial(vars)));
        theta = varpi;
    }

    std::size_t dimension() const { return varpi.size(); }
    std::vector<std::string> coordinates() const { return vars->coordinates(); }
    std::vector<std::string> parameters() const { return vars->parameters(); }

    /// Sets the (i,j) entry and its antisymmetric partner.
    static void set_entry(Matrix& m, std::size_t i, std::size_t j, const Polynomial& p) {
        if (i == j) {
            if (!p.is_zero()) throw std::invalid_argument("diagonal bivector entry must vanish");
            return;
        }
        m.at(i).at(j) = p;
        m.at(j).at(i) = -p;
    }
    void set_varpi(std::size_t i, std::size_t j, const Polynomial& p) { set_entry(varpi, i, j, p); }
    void set_theta(std::size_t i, std::size_t j, const Polynomial& p) { set_entry(theta, i, j, p); }
    void set_varpi(const std::string& a, const std::string& b, const std::string& expr) {
        set_varpi(vars->index_of(a), vars->index_of(b), parse_expression(expr, vars));
    }
    void set_theta(const std::string& a, const std::string& b, const std::string& expr) {
        set_theta(vars->index_of(a), vars->index_of(b), parse_expression(expr, vars));
    }

    Matrix pi() const {
        Matrix m = varpi;
        for (std::size_t i = 0; i < m.size(); ++i)
            for (std::size_t j = 0; j < m.size(); ++j) m[i][j] += theta[i][j];
        return m;
    }
    Matrix bivector(BivectorChoice c) const {
        switch (c) {
            case BivectorChoice::varpi: return varpi;
            case BivectorChoice::theta: return theta;
            default: return pi();
        }
    }
    bool has_theta() const {
        for (const auto& row : theta)
            for (const auto& p : row)
                if (!p.is_zero()) return true;
        return false;
    }

    /// Plain (x, X~, y, Y~, parameters) table.
    TablePtr table() const { return make_table({coordinates(), parameters(), {}, false}); }

    bool operator==(const PoissonModel& o) const {
        return name == o.name && *vars == *o.vars && varpi == o.varpi && theta == o.theta;
    }
};

inline bool is_antisymmetric(const Matrix& m) {
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j)
            if (m[i][j] != -m[j][i]) return false;
    return true;
}

// Element builders.

inline SuperPolynomial function_element(const Polynomial& f, const TablePtr& t) { return SuperPolynomial::lift(t, f); }

inline SuperPolynomial antifield(const TablePtr& t, std::size_t i) {
    return SuperPolynomial::generator(t, t->of(Family::antifield, static_cast<int>(i)));
}
inline SuperPolynomial form_generator(const TablePtr& t, std::size_t i) {
    return SuperPolynomial::generator(t, t->of(Family::form, static_cast<int>(i)));
}

/// sum_{i<j} m^{ij} y_i y_j
inline SuperPolynomial bivector_element(const Matrix& m, const TablePtr& t) {
    SuperPolynomial r(t);
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = i + 1; j < m.size(); ++j)
            if (!m[i][j].is_zero()) r += function_element(m[i][j], t) * antifield(t, i) * antifield(t, j);
    return r;
}

/// v^i y_i
inline SuperPolynomial vector_element(const std::vector<Polynomial>& v, const TablePtr& t) {
    SuperPolynomial r(t);
    for (std::size_t i = 0; i < v.size(); ++i)
        if (!v[i].is_zero()) r += function_element(v[i], t) * antifield(t, i);
    return r;
}

/// Components v^i of a y-degree-1 element.
inline std::vector<SuperPolynomial> vector_components(const SuperPolynomial& v, std::size_t n) {
    std::vector<SuperPolynomial> out;
    const auto& t = v.table();
    for (std::size_t i = 0; i < n; ++i) out.push_back(v.coefficient_of({t->of(Family::antifield, static_cast<int>(i))}));
    return out;
}

namespace detail {

inline void require_multivector(const SuperPolynomial& a) {
    if (!a.uses_only({Family::coordinate, Family::parameter, Family::antifield, Family::ghost_curvature}))
        throw std::invalid_argument("schouten bracket needs elements of x and y only");
}

}  // namespace detail

/// Schouten bracket as the odd bracket on functions of (x, y):
///   [A,B] = sum_i (-1)^{p-1} (dA/dy_i)(dB/dx^i) - (dA/dx^i)(dB/dy_i)
/// with left derivatives in y and p the y-degree of A. Inhomogeneous inputs
/// are split by y-degree.
inline SuperPolynomial schouten_bracket(const SuperPolynomial& A, const SuperPolynomial& B) {
    detail::require_multivector(A);
    detail::require_multivector(B);
    const auto& t = A.table() ? A.table() : B.table();
    if (!t) return SuperPolynomial();
    SuperPolynomial r(t);
    auto ys = t->indices(Family::antifield);
    auto xs = t->indices(Family::coordinate);
    for (int p = 0; p <= static_cast<int>(ys.size()); ++p) {
        SuperPolynomial Ap = A.family_part(Family::antifield, p);
        if (Ap.is_zero()) continue;
        for (std::size_t i = 0; i < ys.size(); ++i) {
            SuperPolynomial dAy = p > 0 ? Ap.left_derivative(ys[i]) : SuperPolynomial(t);
            SuperPolynomial dAx = Ap.partial_even(xs[i]);
            if (!dAy.is_zero()) {
                SuperPolynomial term = dAy * B.partial_even(xs[i]);
                r += (p - 1) % 2 ? -term : term;
            }
            if (!dAx.is_zero()) r -= dAx * B.left_derivative(ys[i]);
        }
    }
    return r;
}

/// {f,g} = m^{ij} d_i f d_j g
inline Polynomial poisson_bracket(const Polynomial& f, const Polynomial& g, const Matrix& m) {
    Polynomial r(f.variables());
    auto coords = f.variables()->coordinates();
    std::vector<Polynomial> df, dg;
    for (const auto& c : coords) {
        df.push_back(f.partial(c));
        dg.push_back(g.partial(c));
    }
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j)
            if (!m[i][j].is_zero() && !df[i].is_zero() && !dg[j].is_zero()) r += m[i][j] * df[i] * dg[j];
    return r;
}

/// u_f^i = -m^{ij} d_j f
inline std::vector<Polynomial> hamilton_components(const Polynomial& f, const Matrix& m) {
    auto coords = f.variables()->coordinates();
    std::vector<Polynomial> u(m.size(), Polynomial(f.variables()));
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = 0; j < m.size(); ++j)
            if (!m[i][j].is_zero()) u[i] -= m[i][j] * f.partial(coords[j]);
    return u;
}

/// u_f = -[m, f] as a y-degree-1 element.
inline SuperPolynomial hamilton_vector_field(const Polynomial& f, const Matrix& m, const TablePtr& t) {
    return -schouten_bracket(bivector_element(m, t), function_element(f, t));
}

/// q Z = [m, Z]
inline SuperPolynomial lichnerowicz_differential(const SuperPolynomial& Z, const Matrix& m) {
    return schouten_bracket(bivector_element(m, Z.table()), Z);
}

namespace detail {

inline std::string slot(const std::vector<std::string>& names, std::initializer_list<std::size_t> idx) {
    std::string s = "(";
    bool first = true;
    for (auto i : idx) {
        if (!first) s += ",";
        s += names[i];
        first = false;
    }
    return s + ")";
}

/// Reports the y_i y_j y_k coefficients of a y-degree-3 element, scaled.
inline void report_triples(CheckReport& r, const std::string& relation, const SuperPolynomial& e, const Rational& scale,
                           const std::vector<std::string>& coords) {
    const auto& t = e.table();
    std::size_t n = coords.size();
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j)
            for (std::size_t k = j + 1; k < n; ++k) {
                auto c = e.coefficient_of({t->of(Family::antifield, static_cast<int>(i)), t->of(Family::antifield, static_cast<int>(j)),
                                           t->of(Family::antifield, static_cast<int>(k))});
                if (!c.is_zero()) r.fail(relation, slot(coords, {i, j, k}), scale * c);
            }
}

}  // namespace detail

/// [m,m] = 0. The y_iy_jy_k coefficient of [m,m] is twice the Jacobiator
/// m^{il}d_l m^{jk} + cyclic; failures report the Jacobiator itself.
inline CheckReport is_poisson_check(const Matrix& m, const VariableSetPtr& vars, const std::string& label) {
    CheckReport r{"[" + label + "," + label + "] = 0", true, {}};
    auto t = make_table({vars->coordinates(), vars->parameters(), {}, false});
    auto b = bivector_element(m, t);
    detail::report_triples(r, "Jacobiator", schouten_bracket(b, b), Rational(1, 2), vars->coordinates());
    return r;
}

/// [a,b] = 0 for two bivectors; failures report the y_iy_jy_k coefficient,
/// which is the cyclic sum a^{il}d_l b^{jk} + b^{il}d_l a^{jk} + cyclic.
inline CheckReport compatibility_check(const Matrix& a, const Matrix& b, const VariableSetPtr& vars, const std::string& label) {
    CheckReport r{label, true, {}};
    auto t = make_table({vars->coordinates(), vars->parameters(), {}, false});
    detail::report_triples(r, "compatibility", schouten_bracket(bivector_element(a, t), bivector_element(b, t)), Rational(1),
                           vars->coordinates());
    return r;
}

/// [varpi,varpi], [theta,theta], [varpi,theta], [pi,pi].
inline std::vector<CheckReport> model_structure_check(const PoissonModel& model) {
    std::vector<CheckReport> out;
    CheckReport anti{"antisymmetry", is_antisymmetric(model.varpi) && is_antisymmetric(model.theta), {}};
    if (!anti.passed) anti.fail("antisymmetry", "bivector", "entries not antisymmetric");
    out.push_back(is_poisson_check(model.varpi, model.vars, "varpi"));
    out.push_back(is_poisson_check(model.theta, model.vars, "theta"));
    out.push_back(compatibility_check(model.varpi, model.theta, model.vars, "[varpi,theta] = 0"));
    out.push_back(is_poisson_check(model.pi(), model.vars, "pi"));
    if (!anti.passed) out.insert(out.begin(), anti);
    return out;
}

/// Casimir condition m^{ij} d_j f = 0 for every i.
inline CheckReport verify_casimir(const Polynomial& f, const Matrix& m, const std::string& label = "pi") {
    CheckReport r{"casimir of " + label, true, {}};
    auto coords = f.variables()->coordinates();
    auto t = make_table({coords, f.variables()->parameters(), {}, false});
    auto u = hamilton_components(f, m);
    for (std::size_t i = 0; i < u.size(); ++i)
        if (!u[i].is_zero()) r.fail(label + "^{ij} d_j f", coords[i], function_element(-u[i], t));
    return r;
}

/// Vector field v is Poisson for m iff [v, m] = 0, i.e.
/// v^k d_k m^{ij} - d_k v^i m^{kj} - d_k v^j m^{ik} = 0.
inline CheckReport poisson_vector_field_check(const std::vector<Polynomial>& v, const Matrix& m, const VariableSetPtr& vars,
                                              const std::string& label) {
    CheckReport r{label, true, {}};
    auto t = make_table({vars->coordinates(), vars->parameters(), {}, false});
    auto br = schouten_bracket(bivector_element(m, t), vector_element(v, t));
    auto coords = vars->coordinates();
    for (std::size_t i = 0; i < coords.size(); ++i)
        for (std::size_t j = i + 1; j < coords.size(); ++j) {
            auto c = br.coefficient_of({t->of(Family::antifield, static_cast<int>(i)), t->of(Family::antifield, static_cast<int>(j))});
            if (!c.is_zero()) r.fail("L_v " + std::string("bivector"), detail::slot(coords, {i, j}), -c);
        }
    return r;
}

namespace detail {

/// Reduced row echelon form in place; returns pivot columns.
inline std::vector<std::size_t> rref(std::vector<std::vector<Rational>>& a, std::size_t cols) {
    std::vector<std::size_t> pivots;
    std::size_t row = 0;
    for (std::size_t c = 0; c < cols && row < a.size(); ++c) {
        std::size_t p = row;
        while (p < a.size() && sgn(a[p][c]) == 0) ++p;
        if (p == a.size()) continue;
        std::swap(a[p], a[row]);
        Rational inv = 1 / a[row][c];
        for (auto& v : a[row]) v *= inv;
        for (std::size_t r = 0; r < a.size(); ++r) {
            if (r == row || sgn(a[r][c]) == 0) continue;
            Rational f = a[r][c];
            for (std::size_t k = c; k < cols; ++k) a[r][k] -= f * a[row][k];
        }
        pivots.push_back(c);
        ++row;
    }
    a.resize(row);
    return pivots;
}

/// Coordinate monomials of total degree <= d, constant first.
inline std::vector<Exponents> coordinate_monomials(const VariableSetPtr& vars, int d) {
    std::vector<std::size_t> coords;
    for (std::size_t i = 0; i < vars->size(); ++i)
        if ((*vars)[i].kind == VariableKind::coordinate) coords.push_back(i);
    std::vector<Exponents> out;
    for (int deg = 0; deg <= d; ++deg) {
        std::vector<Exponents> level;
        Exponents e(vars->size(), 0);
        std::function<void(std::size_t, int)> rec = [&](std::size_t k, int left) {
            if (k == coords.size()) {
                if (left == 0) level.push_back(e);
                return;
            }
            for (int v = left; v >= 0; --v) {
                e[coords[k]] = static_cast<std::uint16_t>(v);
                rec(k + 1, left - v);
            }
            e[coords[k]] = 0;
        };
        rec(0, deg);
        out.insert(out.end(), level.begin(), level.end());
    }
    return out;
}

}  // namespace detail

/// Basis of the polynomials f of degree <= max_degree in the coordinates with
/// m^{ij} d_j f = 0 identically in coordinates and parameters. Coefficients
/// are plain rationals, so each basis element is a Casimir for every
/// parameter value.
inline std::vector<Polynomial> casimir_search(const Matrix& m, const VariableSetPtr& vars, int max_degree) {
    if (max_degree < 0) throw std::invalid_argument("max_degree must be non-negative");
    auto monos = detail::coordinate_monomials(vars, max_degree);
    std::size_t cols = monos.size();
    std::map<std::pair<std::size_t, Exponents>, std::size_t> row_of;
    std::vector<std::vector<Rational>> rows;
    for (std::size_t c = 0; c < cols; ++c) {
        Polynomial f(vars);
        f.add_term(monos[c], 1);
        auto u = hamilton_components(f, m);
        for (std::size_t i = 0; i < u.size(); ++i)
            for (const auto& [e, coef] : u[i].terms()) {
                auto key = std::make_pair(i, e);
                auto it = row_of.find(key);
                if (it == row_of.end()) {
                    it = row_of.emplace(key, rows.size()).first;
                    rows.emplace_back(cols, Rational(0));
                }
                rows[it->second][c] = coef;
            }
    }
    auto pivots = detail::rref(rows, cols);
    std::vector<bool> is_pivot(cols, false);
    for (auto p : pivots) is_pivot[p] = true;
    std::vector<Polynomial> basis;
    for (std::size_t free = 0; free < cols; ++free) {
        if (is_pivot[free]) continue;
        Polynomial f(vars);
        f.add_term(monos[free], 1);
        for (std::size_t r = 0; r < pivots.size(); ++r)
            if (sgn(rows[r][free]) != 0) f.add_term(monos[pivots[r]], -rows[r][free]);
        basis.push_back(f);
    }
    return basis;
}

enum class ElementKind { function, multivector, form, mixed };

/// function: only x and parameters; multivector: x and y of a single
/// y-degree; form: x and X~ of a single X~-degree.
inline ElementKind classify(const SuperPolynomial& e) {
    if (e.uses_only({Family::coordinate, Family::parameter})) return ElementKind::function;
    if (e.uses_only({Family::coordinate, Family::parameter, Family::antifield}) && e.family_degree(Family::antifield))
        return ElementKind::multivector;
    if (e.uses_only({Family::coordinate, Family::parameter, Family::form}) && e.family_degree(Family::form))
        return ElementKind::form;
    return ElementKind::mixed;
}

struct Multivector {
    SuperPolynomial value;
    int degree = 0;

    static Multivector from(const SuperPolynomial& e) {
        auto k = classify(e);
        if (k != ElementKind::function && k != ElementKind::multivector)
            throw std::invalid_argument("not a homogeneous multivector: " + e.to_string());
        return {e, e.family_degree(Family::antifield).value_or(0)};
    }
};

struct FormField {
    SuperPolynomial value;
    int degree = 0;

    static FormField from(const SuperPolynomial& e) {
        auto k = classify(e);
        if (k != ElementKind::function && k != ElementKind::form)
            throw std::invalid_argument("not a homogeneous form: " + e.to_string());
        return {e, e.family_degree(Family::form).value_or(0)};
    }
};

}  // namespace psm
