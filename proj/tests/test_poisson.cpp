#include "oracles.hpp"
#include "psm/gallery.hpp"
#include "psm/poisson.hpp"

#include <gtest/gtest.h>

using namespace psm;
using oracle::ratio;

namespace {

PoissonModel so3() { return gallery::so3_model("so3"); }

SuperPolynomial fn(const TablePtr& t, const PoissonModel& m, const std::string& e) {
    return function_element(parse_expression(e, m.vars), t);
}

std::vector<std::pair<std::string, Matrix>> bundled_bivectors() {
    std::vector<std::pair<std::string, Matrix>> out;
    for (const auto& b : gallery::all())
        if (b.valid) {
            out.push_back({b.model.name + ".varpi", b.model.varpi});
            out.push_back({b.model.name + ".pi", b.model.pi()});
        }
    return out;
}

PoissonModel random_2d(std::mt19937& rng) {
    PoissonModel m("plane", {"x1", "x2"});
    m.set_varpi(0, 1, oracle::random_poly(rng, m.vars, 3));
    m.set_theta(0, 1, oracle::random_poly(rng, m.vars, 3));
    return m;
}

SuperPolynomial random_multivector(std::mt19937& rng, const PoissonModel& m, const TablePtr& t, int p) {
    SuperPolynomial r(t);
    std::size_t n = m.dimension();
    std::uniform_int_distribution<std::size_t> pick(0, n - 1);
    for (int k = 0; k < 3; ++k) {
        SuperPolynomial term = function_element(oracle::random_poly(rng, m.vars, 2, 2), t);
        for (int q = 0; q < p; ++q) term = term * antifield(t, pick(rng));
        r += term;
    }
    return r;
}

}  // namespace

TEST(Schouten, FunctionsCommute) {
    auto m = so3();
    auto t = m.table();
    EXPECT_TRUE(schouten_bracket(fn(t, m, "x1*x2"), fn(t, m, "x3^2")).is_zero());
}

TEST(Schouten, So3WithCoordinate) {
    auto m = so3();
    auto t = m.table();
    auto r = schouten_bracket(bivector_element(m.varpi, t), fn(t, m, "x3"));
    EXPECT_EQ(r, parse_super("-x2*y_x1 + x1*y_x2", t));
    EXPECT_EQ(lichnerowicz_differential(fn(t, m, "x3"), m.varpi), r);
    EXPECT_TRUE(lichnerowicz_differential(SuperPolynomial::constant(t, 1), m.varpi).is_zero());
    EXPECT_TRUE(lichnerowicz_differential(bivector_element(m.varpi, t), m.varpi).is_zero());
}

TEST(Schouten, ConventionLockOnBundledModels) {
    for (const auto& b : gallery::all()) {
        const auto& m = b.model;
        auto t = m.table();
        auto coords = m.coordinates();
        std::size_t n = m.dimension();
        Matrix pi = m.pi();
        auto P = bivector_element(pi, t), W = bivector_element(m.varpi, t), T = bivector_element(m.theta, t);
        auto pp = schouten_bracket(P, P), wt = schouten_bracket(W, T);
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j)
                for (std::size_t k = j + 1; k < n; ++k) {
                    std::vector<std::size_t> yy{t->of(Family::antifield, int(i)), t->of(Family::antifield, int(j)),
                                                t->of(Family::antifield, int(k))};
                    EXPECT_EQ(pp.coefficient_of(yy), function_element(Rational(2) * oracle::jacobiator(pi, i, j, k, coords), t))
                        << m.name;
                    EXPECT_EQ(wt.coefficient_of(yy),
                              function_element(oracle::cyclic(m.varpi, m.theta, i, j, k, coords) +
                                                   oracle::cyclic(m.theta, m.varpi, i, j, k, coords),
                                               t))
                        << m.name;
                }
        // Hamilton fields and Poisson-field condition
        Polynomial f = parse_expression(coords[0] + "^2*" + coords.back(), m.vars);
        auto u = hamilton_components(f, m.varpi);
        auto uf = hamilton_vector_field(f, m.varpi, t);
        for (std::size_t i = 0; i < n; ++i) {
            Polynomial lit(m.vars);
            for (std::size_t j = 0; j < n; ++j) lit -= m.varpi[i][j] * f.partial(coords[j]);
            EXPECT_EQ(u[i], lit);
            EXPECT_EQ(vector_components(uf, n)[i], function_element(lit, t));
        }
        std::vector<Polynomial> v;
        for (std::size_t i = 0; i < n; ++i) v.push_back(parse_expression(coords[i] + "*" + coords[(i + 1) % n], m.vars));
        auto wv = schouten_bracket(W, vector_element(v, t));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = i + 1; j < n; ++j) {
                auto c = wv.coefficient_of({t->of(Family::antifield, int(i)), t->of(Family::antifield, int(j))});
                EXPECT_EQ(c, function_element(-oracle::lie_derivative(v, m.varpi, i, j, coords), t)) << m.name;
            }
    }
}

TEST(Schouten, VectorFieldsGiveLieBracket) {
    auto m = so3();
    auto t = m.table();
    // [x1 d2, x2 d3] = x1 d3
    auto a = vector_element({Polynomial(m.vars), parse_expression("x1", m.vars), Polynomial(m.vars)}, t);
    auto b = vector_element({Polynomial(m.vars), Polynomial(m.vars), parse_expression("x2", m.vars)}, t);
    EXPECT_EQ(schouten_bracket(a, b), parse_super("x1*y_x3", t));
}

TEST(PoissonBracket, Examples) {
    auto m = so3();
    EXPECT_EQ(poisson_bracket(parse_expression("x1", m.vars), parse_expression("x2", m.vars), m.varpi),
              parse_expression("x3", m.vars));
    auto r2 = gallery::r2gravity().model;
    Polynomial f = parse_expression(gallery::r2_casimir, r2.vars);
    EXPECT_TRUE(poisson_bracket(f, f, r2.pi()).is_zero());
    auto sk = gallery::sklyanin().model;
    EXPECT_EQ(poisson_bracket(parse_expression("x1", sk.vars), parse_expression("y", sk.vars), sk.theta),
              parse_expression("2*(a2 - a3)*x2*x3", sk.vars));
}

TEST(PoissonBracket, AntisymmetryAndJacobiOnBundledModels) {
    std::mt19937 rng(17);
    for (const auto& [name, m] : bundled_bivectors()) {
        auto vars = m[0][0].variables();
        for (int k = 0; k < 5; ++k) {
            auto f = oracle::random_poly(rng, vars, 2), g = oracle::random_poly(rng, vars, 2), h = oracle::random_poly(rng, vars, 2);
            EXPECT_EQ(poisson_bracket(f, g, m), -poisson_bracket(g, f, m)) << name;
            auto jac = poisson_bracket(f, poisson_bracket(g, h, m), m) + poisson_bracket(g, poisson_bracket(h, f, m), m) +
                       poisson_bracket(h, poisson_bracket(f, g, m), m);
            EXPECT_TRUE(jac.is_zero()) << name;
        }
    }
}

TEST(HamiltonField, Examples) {
    auto m = so3();
    auto u = hamilton_components(parse_expression("x3", m.vars), m.varpi);
    EXPECT_EQ(u[0], parse_expression("x2", m.vars));
    EXPECT_EQ(u[1], parse_expression("-x1", m.vars));
    EXPECT_TRUE(u[2].is_zero());
    for (const auto& c : hamilton_components(parse_expression("7", m.vars), m.varpi)) EXPECT_TRUE(c.is_zero());
    auto k = gallery::affine_kks().model;
    auto uk = hamilton_components(parse_expression("x1", k.vars), k.varpi);
    EXPECT_EQ(uk[0], parse_expression("-x2", k.vars));
    for (int i = 1; i < 4; ++i) EXPECT_TRUE(uk[i].is_zero());
}

TEST(HamiltonField, BracketOfHamiltonFields) {
    std::mt19937 rng(23);
    for (const auto& [name, m] : bundled_bivectors()) {
        auto vars = m[0][0].variables();
        auto t = make_table({vars->coordinates(), vars->parameters(), {}, false});
        for (int k = 0; k < 4; ++k) {
            auto f = oracle::random_poly(rng, vars, 2), g = oracle::random_poly(rng, vars, 2);
            auto lhs = schouten_bracket(hamilton_vector_field(f, m, t), hamilton_vector_field(g, m, t));
            EXPECT_EQ(lhs, hamilton_vector_field(poisson_bracket(f, g, m), m, t)) << name;
        }
    }
}

TEST(Lichnerowicz, SquaresToZero) {
    std::mt19937 rng(29);
    for (const auto& b : gallery::all()) {
        if (!b.valid) continue;
        auto t = b.model.table();
        for (const auto& m : {b.model.varpi, b.model.pi()})
            for (int p = 0; p <= 2; ++p) {
                auto z = random_multivector(rng, b.model, t, p);
                EXPECT_TRUE(lichnerowicz_differential(lichnerowicz_differential(z, m), m).is_zero()) << b.model.name;
            }
    }
}

TEST(Lichnerowicz, PoissonFieldsCommuteWithQ) {
    std::mt19937 rng(31);
    auto b = gallery::so3_rotation();
    auto t = b.model.table();
    auto W = bivector_element(b.model.varpi, t);
    for (const auto& v : b.action.v) {
        auto u = vector_element(v, t);
        EXPECT_TRUE(schouten_bracket(u, W).is_zero());
        for (int p = 0; p <= 2; ++p) {
            auto beta = random_multivector(rng, b.model, t, p);
            auto lhs = schouten_bracket(u, schouten_bracket(W, beta)) - schouten_bracket(W, schouten_bracket(u, beta));
            EXPECT_TRUE(lhs.is_zero());
        }
    }
}

TEST(Casimir, Verify) {
    auto r2 = gallery::r2gravity().model;
    EXPECT_TRUE(verify_casimir(parse_expression(gallery::r2_casimir, r2.vars), r2.pi()).passed);
    EXPECT_TRUE(verify_casimir(parse_expression("1", r2.vars), r2.pi()).passed);
    auto bad = verify_casimir(parse_expression("x1", r2.vars), r2.pi());
    ASSERT_FALSE(bad.passed);
    EXPECT_EQ(bad.witnesses.front().subject, "x2");
    EXPECT_EQ(bad.witnesses.front().residual, "-1/4 + x3^2");

    auto sk = gallery::sklyanin();
    for (const auto& h : sk.action.h) EXPECT_TRUE(verify_casimir(h, sk.model.pi()).passed) << h.to_string();
    const auto& f2 = sk.action.h[1];
    EXPECT_TRUE(verify_casimir(f2, sk.model.varpi, "varpi").passed);
    EXPECT_TRUE(verify_casimir(f2, sk.model.theta, "theta").passed);
    EXPECT_FALSE(verify_casimir(sk.action.h[0], sk.model.varpi, "varpi").passed);

    auto k = gallery::affine_kks().model;
    for (const char* g : {"1", "x3"}) {
        auto f = parse_expression(std::string("(") + gallery::kks_casimir + ")*" + g, k.vars);
        EXPECT_TRUE(verify_casimir(f, k.pi()).passed) << g;
    }
}

TEST(Casimir, SearchMatchesDenseOracle) {
    auto r2 = gallery::r2gravity().model;
    auto basis = casimir_search(r2.pi(), r2.vars, 3);
    ASSERT_EQ(basis.size(), 2u);
    EXPECT_EQ(oracle::casimir_dimension(r2.pi(), r2.vars, 3), 2u);
    for (const auto& b : basis) EXPECT_TRUE(verify_casimir(b, r2.pi()).passed);
    auto coords = r2.coordinates();
    auto with_f = basis;
    with_f.push_back(parse_expression(gallery::r2_casimir, r2.vars));
    EXPECT_EQ(oracle::rank(oracle::coefficient_rows(with_f, coords, 3)), 2u);
    EXPECT_TRUE(basis.front() == Polynomial::constant(r2.vars, 1));

    auto s3 = so3();
    auto b3 = casimir_search(s3.varpi, s3.vars, 2);
    ASSERT_EQ(b3.size(), 2u);
    EXPECT_EQ(oracle::casimir_dimension(s3.varpi, s3.vars, 2), 2u);
    auto with_c = b3;
    with_c.push_back(parse_expression("x1^2 + x2^2 + x3^2", s3.vars));
    EXPECT_EQ(oracle::rank(oracle::coefficient_rows(with_c, s3.coordinates(), 2)), 2u);

    PoissonModel zero("zero", {"x1", "x2", "x3", "x4"});
    EXPECT_EQ(casimir_search(zero.varpi, zero.vars, 1).size(), 5u);
    EXPECT_THROW(casimir_search(zero.varpi, zero.vars, -1), std::invalid_argument);
}

TEST(Casimir, SearchWithParametersMatchesOracle) {
    for (const auto& b : {gallery::sklyanin(), gallery::affine_kks()}) {
        auto basis = casimir_search(b.model.pi(), b.model.vars, 2);
        EXPECT_EQ(basis.size(), oracle::casimir_dimension(b.model.pi(), b.model.vars, 2, 5)) << b.model.name;
        for (const auto& f : basis) EXPECT_TRUE(verify_casimir(f, b.model.pi()).passed);
    }
}

TEST(Structure, BundledModels) {
    for (const auto& name : {"r2gravity", "sklyanin", "affine_kks", "so3_casimir"}) {
        auto reports = model_structure_check(gallery::by_name(name).model);
        EXPECT_EQ(reports.size(), 4u);
        EXPECT_TRUE(all_passed(reports)) << name;
    }
    auto broken = model_structure_check(gallery::broken_jacobi().model);
    ASSERT_FALSE(broken[0].passed);
    EXPECT_EQ(broken[0].witnesses.front().subject, "(x1,x2,x3)");
    EXPECT_EQ(broken[0].witnesses.front().residual, "-x3");
    auto inc = model_structure_check(gallery::r2gravity_incompatible_theta().model);
    EXPECT_TRUE(inc[0].passed);
    EXPECT_TRUE(inc[1].passed);
    EXPECT_FALSE(inc[2].passed);
}

TEST(Structure, NonAntisymmetricInputReported) {
    auto m = so3();
    m.varpi[0][1] = parse_expression("x1", m.vars);
    auto reports = model_structure_check(m);
    EXPECT_EQ(reports.front().name, "antisymmetry");
    EXPECT_FALSE(reports.front().passed);
}

TEST(Structure, PlanarModelsAlwaysPass) {
    std::mt19937 rng(2024);
    for (int k = 0; k < 50; ++k) {
        auto m = random_2d(rng);
        EXPECT_TRUE(all_passed(model_structure_check(m))) << m.varpi[0][1].to_string() << " / " << m.theta[0][1].to_string();
    }
}

TEST(Classify, Kinds) {
    auto m = so3();
    auto t = m.table();
    EXPECT_EQ(classify(parse_super("x1^2", t)), ElementKind::function);
    EXPECT_EQ(classify(parse_super("x1*y_x2*y_x3", t)), ElementKind::multivector);
    EXPECT_EQ(classify(parse_super("X_x1*X_x2", t)), ElementKind::form);
    EXPECT_EQ(classify(parse_super("X_x1*y_x2", t)), ElementKind::mixed);
    EXPECT_EQ(classify(parse_super("y_x1 + y_x1*y_x2", t)), ElementKind::mixed);
    EXPECT_EQ(Multivector::from(parse_super("y_x1*y_x2", t)).degree, 2);
    EXPECT_THROW(FormField::from(parse_super("y_x1", t)), std::invalid_argument);
}

TEST(Schouten, RejectsForms) {
    auto m = so3();
    auto t = m.table();
    EXPECT_THROW(schouten_bracket(parse_super("X_x1", t), parse_super("x1", t)), std::invalid_argument);
}
