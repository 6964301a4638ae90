#pragma once

// Finite-dimensional Lie algebras and their actions on a Poisson model,
// either by Hamilton functions h_a or by Poisson vector fields v_a.

#include "psm/poisson.hpp"

#include <string>
#include <vector>

namespace psm {

struct LieAlgebra {
    std::vector<std::string> basis;
    // structure[a][b][c] = c^c_{ab}, i.e. [t_a, t_b] = c^c_{ab} t_c
    std::vector<std::vector<std::vector<Rational>>> structure;

    LieAlgebra() = default;
    explicit LieAlgebra(std::vector<std::string> names) : basis(std::move(names)) {
        std::size_t m = basis.size();
        structure.assign(m, std::vector<std::vector<Rational>>(m, std::vector<Rational>(m, Rational(0))));
    }

    std::size_t dimension() const { return basis.size(); }
    const Rational& c(std::size_t a, std::size_t b, std::size_t k) const { return structure[a][b][k]; }
    std::size_t index_of(const std::string& name) const {
        for (std::size_t i = 0; i < basis.size(); ++i)
            if (basis[i] == name) return i;
        throw std::invalid_argument("unknown Lie basis element '" + name + "'");
    }
    /// Sets c^k_{ab} and c^k_{ba} = -c^k_{ab}.
    void set_bracket(std::size_t a, std::size_t b, std::size_t k, const Rational& v) {
        structure.at(a).at(b).at(k) = v;
        if (a != b) structure[b][a][k] = -v;
    }

    static LieAlgebra abelian(std::size_t m) {
        std::vector<std::string> names;
        for (std::size_t a = 1; a <= m; ++a) names.push_back("t" + std::to_string(a));
        return LieAlgebra(names);
    }
    static LieAlgebra so3() {
        LieAlgebra L({"t1", "t2", "t3"});
        L.set_bracket(0, 1, 2, 1);
        L.set_bracket(1, 2, 0, 1);
        L.set_bracket(2, 0, 1, 1);
        return L;
    }

    bool operator==(const LieAlgebra& o) const { return basis == o.basis && structure == o.structure; }
};

enum class ActionKind { hamilton, poisson_vf };

struct ActionSpec {
    ActionKind kind = ActionKind::hamilton;
    std::vector<Polynomial> h;               // Hamilton functions
    std::vector<std::vector<Polynomial>> v;  // Poisson vector fields, v[a][i] = v_a^i

    static ActionSpec hamilton(std::vector<Polynomial> functions) { return {ActionKind::hamilton, std::move(functions), {}}; }
    static ActionSpec poisson(std::vector<std::vector<Polynomial>> fields) { return {ActionKind::poisson_vf, {}, std::move(fields)}; }

    std::size_t size() const { return kind == ActionKind::hamilton ? h.size() : v.size(); }
    bool operator==(const ActionSpec& o) const { return kind == o.kind && h == o.h && v == o.v; }
};

/// v_a^i; for Hamilton actions v_a = u_{h_a} = -varpi^{ij} d_j h_a.
inline std::vector<std::vector<Polynomial>> action_vector_fields(const PoissonModel& model, const ActionSpec& action) {
    if (action.kind == ActionKind::poisson_vf) return action.v;
    std::vector<std::vector<Polynomial>> out;
    for (const auto& h : action.h) out.push_back(hamilton_components(h, model.varpi));
    return out;
}

inline CheckReport verify_lie_algebra(const LieAlgebra& L) {
    CheckReport r{"lie algebra", true, {}};
    std::size_t m = L.dimension();
    auto t = make_table({L.basis, {}, {}, false});
    auto num = [&](const Rational& q) { return SuperPolynomial::constant(t, q); };
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = a; b < m; ++b)
            for (std::size_t k = 0; k < m; ++k) {
                Rational s = L.c(a, b, k) + L.c(b, a, k);
                if (sgn(s) != 0) r.fail("antisymmetry c^k_{ab} + c^k_{ba}", L.basis[a] + "," + L.basis[b] + ";" + L.basis[k], num(s));
            }
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t b = 0; b < m; ++b)
            for (std::size_t c = 0; c < m; ++c)
                for (std::size_t d = 0; d < m; ++d) {
                    Rational s = 0;
                    for (std::size_t e = 0; e < m; ++e)
                        s += L.c(a, b, e) * L.c(e, c, d) + L.c(b, c, e) * L.c(e, a, d) + L.c(c, a, e) * L.c(e, b, d);
                    if (sgn(s) != 0)
                        r.fail("jacobi", L.basis[a] + "," + L.basis[b] + "," + L.basis[c] + ";" + L.basis[d], num(s));
                }
    return r;
}

/// Hamilton: {h_a,h_b}_varpi = c^c_{ab} h_c and pi^{ij} d_j h_a = 0.
/// Poisson vector fields: [v_a,v_b] = c^c_{ab} v_c and [varpi, v_a] = 0.
inline std::vector<CheckReport> verify_action(const PoissonModel& model, const LieAlgebra& L, const ActionSpec& A) {
    if (A.size() != L.dimension()) throw std::invalid_argument("action has " + std::to_string(A.size()) +
                                                               " entries for a Lie algebra of dimension " +
                                                               std::to_string(L.dimension()));
    std::vector<CheckReport> out;
    auto t = model.table();
    std::size_t m = L.dimension();
    if (A.kind == ActionKind::hamilton) {
        CheckReport hom{"hamilton homomorphism {h_a,h_b} = c^c_ab h_c", true, {}};
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = a + 1; b < m; ++b) {
                Polynomial res = poisson_bracket(A.h[a], A.h[b], model.varpi);
                for (std::size_t k = 0; k < m; ++k) res -= L.c(a, b, k) * A.h[k];
                if (!res.is_zero()) hom.fail("{h_a,h_b} - c^c_ab h_c", L.basis[a] + "," + L.basis[b], function_element(res, t));
            }
        out.push_back(hom);
        CheckReport cas{"hamilton functions are pi-Casimirs", true, {}};
        Matrix pi = model.pi();
        for (std::size_t a = 0; a < m; ++a) {
            CheckReport one = verify_casimir(A.h[a], pi, "pi");
            for (const auto& w : one.witnesses) {
                cas.passed = false;
                cas.witnesses.push_back({w.relation + " (h_" + L.basis[a] + ")", w.subject, w.residual, w.value});
            }
        }
        out.push_back(cas);
    } else {
        CheckReport hom{"vector field homomorphism [v_a,v_b] = c^c_ab v_c", true, {}};
        std::vector<SuperPolynomial> v;
        for (const auto& comps : A.v) {
            if (comps.size() != model.dimension()) throw std::invalid_argument("vector field has wrong number of components");
            v.push_back(vector_element(comps, t));
        }
        for (std::size_t a = 0; a < m; ++a)
            for (std::size_t b = a + 1; b < m; ++b) {
                SuperPolynomial res = schouten_bracket(v[a], v[b]);
                for (std::size_t k = 0; k < m; ++k) res -= L.c(a, b, k) * v[k];
                hom.expect_zero("[v_a,v_b] - c^c_ab v_c", L.basis[a] + "," + L.basis[b], res);
            }
        out.push_back(hom);
        CheckReport pvf{"action vector fields are Poisson", true, {}};
        for (std::size_t a = 0; a < m; ++a) {
            CheckReport one = poisson_vector_field_check(A.v[a], model.varpi, model.vars, "v");
            for (const auto& w : one.witnesses) {
                pvf.passed = false;
                pvf.witnesses.push_back({"L_v varpi (v_" + L.basis[a] + ")", w.subject, w.residual, w.value});
            }
        }
        out.push_back(pvf);
    }
    return out;
}

/// Affine Lie-Poisson data: varpi^{ij} = c^{ij}_k x^k, theta^{ij} = a^{ij}.
struct KksData {
    std::vector<std::string> coordinates;
    std::vector<std::string> parameters;
    std::vector<std::vector<std::vector<Rational>>> c;  // c[i][j][k] = c^{ij}_k
    std::vector<std::vector<std::string>> a;            // a^{ij}, constants or parameter expressions

    explicit KksData(std::vector<std::string> coords, std::vector<std::string> params = {})
        : coordinates(std::move(coords)), parameters(std::move(params)) {
        std::size_t n = coordinates.size();
        c.assign(n, std::vector<std::vector<Rational>>(n, std::vector<Rational>(n, Rational(0))));
        a.assign(n, std::vector<std::string>(n, "0"));
    }
    void set_c(std::size_t i, std::size_t j, std::size_t k, const Rational& v) {
        c.at(i).at(j).at(k) = v;
        c[j][i][k] = -v;
    }
    void set_a(std::size_t i, std::size_t j, const std::string& expr) {
        a.at(i).at(j) = expr;
        a[j][i] = "-(" + expr + ")";
    }
};

namespace detail {

inline Matrix cocycle_matrix(const KksData& d, const VariableSetPtr& vars) {
    std::size_t n = d.coordinates.size();
    Matrix a(n, std::vector<Polynomial>(n, Polynomial(vars)));
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j) {
            a[i][j] = parse_expression(d.a[i][j], vars);
            for (const auto& x : vars->coordinates())
                if (!a[i][j].partial(x).is_zero()) throw std::invalid_argument("cocycle entries must be constant");
        }
    return a;
}

}  // namespace detail

inline PoissonModel build_kks_model(const KksData& d, const std::string& name = "affine_kks") {
    std::size_t n = d.coordinates.size();
    PoissonModel model(name, d.coordinates, d.parameters);
    Matrix a = detail::cocycle_matrix(d, model.vars);
    if (!is_antisymmetric(a)) throw std::invalid_argument("cocycle a^{ij} is not antisymmetric");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                if (d.c[i][j][k] != -d.c[j][i][k]) throw std::invalid_argument("structure constants c^{ij}_k are not antisymmetric");
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = i + 1; j < n; ++j) {
            Polynomial w(model.vars);
            for (std::size_t k = 0; k < n; ++k) w += d.c[i][j][k] * Polynomial::variable(model.vars, d.coordinates[k]);
            model.set_varpi(i, j, w);
            model.set_theta(i, j, a[i][j]);
        }
    return model;
}

/// c^{ij}_m c^{mk}_l + cyclic(i,j,k) = 0
inline CheckReport kks_jacobi_check(const KksData& d) {
    CheckReport r{"structure constants of the dual Lie algebra", true, {}};
    std::size_t n = d.coordinates.size();
    auto t = make_table({d.coordinates, d.parameters, {}, false});
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k)
                for (std::size_t l = 0; l < n; ++l) {
                    Rational s = 0;
                    for (std::size_t m = 0; m < n; ++m)
                        s += d.c[i][j][m] * d.c[m][k][l] + d.c[j][k][m] * d.c[m][i][l] + d.c[k][i][m] * d.c[m][j][l];
                    if (sgn(s) != 0)
                        r.fail("c c + cyclic", detail::slot(d.coordinates, {i, j, k, l}), SuperPolynomial::constant(t, s));
                }
    return r;
}

/// c^{ij}_m a^{mk} + cyclic(i,j,k) = 0
inline CheckReport kks_cocycle_check(const KksData& d) {
    CheckReport r{"cocycle condition", true, {}};
    std::size_t n = d.coordinates.size();
    auto vars = make_variables(d.coordinates, d.parameters);
    auto t = make_table({d.coordinates, d.parameters, {}, false});
    Matrix a = detail::cocycle_matrix(d, vars);
    for (std::size_t i = 0; i < n; ++i)
        for (std::size_t j = 0; j < n; ++j)
            for (std::size_t k = 0; k < n; ++k) {
                Polynomial s(vars);
                for (std::size_t m = 0; m < n; ++m)
                    s += d.c[i][j][m] * a[m][k] + d.c[j][k][m] * a[m][i] + d.c[k][i][m] * a[m][j];
                if (!s.is_zero()) r.fail("c a + cyclic", detail::slot(d.coordinates, {i, j, k}), function_element(s, t));
            }
    return r;
}

}  // namespace psm
