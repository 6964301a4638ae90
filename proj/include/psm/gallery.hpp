#pragma once

// Bundled models: the three worked examples, a few small contexts, and one
// negative control per check.

#include "psm/poisson.hpp"
#include "psm/symmetry.hpp"

#include <map>
#include <string>
#include <vector>

namespace psm {

struct ModelBundle {
    PoissonModel model;
    LieAlgebra lie;
    ActionSpec action;
    std::string description;
    bool valid = true;  // false for negative controls

    bool operator==(const ModelBundle& o) const { return model == o.model && lie == o.lie && action == o.action; }
};

namespace gallery {

inline std::vector<Polynomial> parse_all(const PoissonModel& m, const std::vector<std::string>& exprs) {
    std::vector<Polynomial> out;
    for (const auto& e : exprs) out.push_back(parse_expression(e, m.vars));
    return out;
}

inline PoissonModel so3_model(const std::string& name) {
    PoissonModel m(name, {"x1", "x2", "x3"});
    m.set_varpi("x1", "x2", "x3");
    m.set_varpi("x2", "x3", "x1");
    m.set_varpi("x3", "x1", "x2");
    return m;
}

inline const char* r2_casimir = "1/2*(x1^2 + x2^2) - 1/3*x3*(x3^2 - 3/4)";

inline ModelBundle r2gravity() {
    PoissonModel m = so3_model("r2gravity");
    m.set_theta("x1", "x2", "1/2 - (x3 + 1/2)^2");
    return {m, LieAlgebra::abelian(1), ActionSpec::hamilton(parse_all(m, {r2_casimir})),
            "R^2 gravity: so(3) bracket deformed in the (x1,x2) entry", true};
}

inline ModelBundle sklyanin() {
    PoissonModel m("sklyanin", {"x1", "x2", "x3", "y"}, {"a1", "a2", "a3"});
    m.set_varpi("x1", "x2", "x3*y");
    m.set_varpi("x2", "x3", "x1*y");
    m.set_varpi("x3", "x1", "x2*y");
    m.set_theta("x1", "y", "2*(a2 - a3)*x2*x3");
    m.set_theta("x2", "y", "2*(a3 - a1)*x1*x3");
    m.set_theta("x3", "y", "2*(a1 - a2)*x1*x2");
    auto h = parse_all(m, {"1/2*(a1*x1^2 + a2*x2^2 + a3*x3^2) - 1/4*y^2", "1/2*(x1^2 + x2^2 + x3^2)"});
    return {m, LieAlgebra::abelian(2), ActionSpec::hamilton(h), "Sklyanin structure with its two Casimirs", true};
}

/// c^{01}_2 = c^{02}_3 = 1, cocycle a^{01} = a.
inline KksData affine_kks_data() {
    KksData d({"x0", "x1", "x2", "x3"}, {"a"});
    d.set_c(0, 1, 2, 1);
    d.set_c(0, 2, 3, 1);
    d.set_a(0, 1, "a");
    return d;
}

inline const char* kks_casimir = "x1*x3 - 1/2*(x2 + a)^2";

inline ModelBundle affine_kks() {
    PoissonModel m = build_kks_model(affine_kks_data(), "affine_kks");
    return {m, LieAlgebra::abelian(1), ActionSpec::hamilton(parse_all(m, {kks_casimir})),
            "affine Lie-Poisson structure on a 4-dimensional dual, with cocycle a", true};
}

inline ModelBundle so3_casimir() {
    PoissonModel m = so3_model("so3_casimir");
    return {m, LieAlgebra::abelian(1), ActionSpec::hamilton(parse_all(m, {"x1^2 + x2^2 + x3^2"})),
            "so(3) with pi = varpi and the quadratic Casimir as Hamilton function", true};
}

inline ModelBundle so3_rotation() {
    PoissonModel m = so3_model("so3_rotation");
    std::vector<std::vector<Polynomial>> v;
    for (const char* x : {"x1", "x2", "x3"}) v.push_back(hamilton_components(parse_expression(x, m.vars), m.varpi));
    return {m, LieAlgebra::so3(), ActionSpec::poisson(v), "so(3) acting by the Hamilton fields of x1, x2, x3", true};
}

inline ModelBundle n1_free() {
    PoissonModel m("n1_free", {"x1"});
    return {m, LieAlgebra(), ActionSpec::hamilton({}), "one coordinate, zero bivector, no symmetry", true};
}

inline ModelBundle trivial() {
    PoissonModel m("trivial", {"x1", "x2"});
    return {m, LieAlgebra::abelian(1), ActionSpec::hamilton(parse_all(m, {"0"})), "zero bivectors and zero action", true};
}

// Negative controls.

inline ModelBundle broken_jacobi() {
    PoissonModel m("broken_jacobi", {"x1", "x2", "x3"});
    m.set_varpi("x1", "x2", "x3");
    m.set_varpi("x2", "x3", "x1");
    m.set_varpi("x3", "x1", "x1");
    return {m, LieAlgebra::abelian(1), ActionSpec::hamilton(parse_all(m, {"0"})),
            "so(3)-like bracket with {x3,x1} = x1; the Jacobi identity fails", false};
}

inline ModelBundle r2gravity_bad_action() {
    ModelBundle b = r2gravity();
    b.model.name = "r2gravity_bad_action";
    b.action = ActionSpec::hamilton(parse_all(b.model, {"x1"}));
    b.description = "R^2 gravity with h_1 = x1, which is not a pi-Casimir";
    b.valid = false;
    return b;
}

inline ModelBundle r2gravity_incompatible_theta() {
    ModelBundle b = r2gravity();
    b.model.name = "r2gravity_incompatible_theta";
    b.model.theta = Matrix(3, std::vector<Polynomial>(3, Polynomial(b.model.vars)));
    b.model.set_theta("x1", "x2", "x1");
    b.action = ActionSpec::hamilton(parse_all(b.model, {"0"}));
    b.description = "so(3) with theta^{12} = x1, which does not Schouten-commute with varpi";
    b.valid = false;
    return b;
}

inline KksData kks_bad_cocycle_data() {
    KksData d = affine_kks_data();
    d.set_a(2, 3, "1");
    return d;
}

inline ModelBundle kks_bad_cocycle() {
    PoissonModel m = build_kks_model(kks_bad_cocycle_data(), "kks_bad_cocycle");
    return {m, LieAlgebra::abelian(1), ActionSpec::hamilton(parse_all(m, {"0"})),
            "affine Lie-Poisson data with a^{23} = 1, not a cocycle", false};
}

inline ModelBundle bad_lie() {
    PoissonModel m("bad_lie", {"x1"});
    LieAlgebra L({"t1", "t2", "t3"});
    L.set_bracket(0, 1, 2, 1);
    L.set_bracket(0, 2, 0, 1);
    return {m, L, ActionSpec::hamilton(parse_all(m, {"0", "0", "0"})),
            "brackets [t1,t2] = t3, [t1,t3] = t1 violating the Jacobi identity", false};
}

inline ModelBundle so3_bad_vf() {
    PoissonModel m = so3_model("so3_bad_vf");
    return {m, LieAlgebra::abelian(1), ActionSpec::poisson({parse_all(m, {"x1", "0", "0"})}),
            "so(3) with the dilation-like field x1 d/dx1, not Poisson", false};
}

inline std::vector<ModelBundle> all() {
    return {r2gravity(),      sklyanin(),           affine_kks(),    so3_casimir(),
            so3_rotation(),   n1_free(),            trivial(),       broken_jacobi(),
            r2gravity_bad_action(), r2gravity_incompatible_theta(), kks_bad_cocycle(), bad_lie(),
            so3_bad_vf()};
}

inline ModelBundle by_name(const std::string& name) {
    for (auto& b : all())
        if (b.model.name == name) return b;
    throw std::invalid_argument("no bundled model named '" + name + "'");
}

}  // namespace gallery
}  // namespace psm
