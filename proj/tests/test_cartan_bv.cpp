#include "oracles.hpp"
#include "psm/gallery.hpp"
#include "psm/operation.hpp"

#include <gtest/gtest.h>

using namespace psm;

namespace {

OperationContext context(const ModelBundle& b, bool variants = false) {
    OperationOptions o;
    o.allow_invalid = !b.valid;
    o.with_variants = variants;
    return OperationContext::build(b.model, b.lie, b.action, o);
}

const OperationContext& r2() {
    static OperationContext c = context(gallery::r2gravity());
    return c;
}

std::vector<std::string> relations(const CheckReport& r) {
    std::vector<std::string> out;
    for (const auto& w : r.witnesses)
        if (out.empty() || out.back() != w.relation) out.push_back(w.relation);
    return out;
}

bool mentions(const CheckReport& r, const std::string& needle) {
    for (const auto& w : r.witnesses)
        if (w.relation.find(needle) != std::string::npos) return true;
    return false;
}

SuperPolynomial random_element(std::mt19937& rng, const OperationContext& c, int degree) {
    auto gens = c.standard_generators();
    std::uniform_int_distribution<std::size_t> pick(0, gens.size() - 1);
    std::uniform_int_distribution<int> coef(-3, 3);
    SuperPolynomial r = c.zero();
    for (int k = 0; k < 3; ++k) {
        SuperPolynomial term = SuperPolynomial::constant(c.table, coef(rng));
        int have = 0, guard = 0;
        while (have < degree && guard++ < 60) {
            std::size_t g = gens[pick(rng)];
            int dg = (*c.table)[g].degree;
            if (dg == 0) {
                if (coef(rng) > 1) term = term * SuperPolynomial::generator(c.table, g);
                continue;
            }
            if (have + dg > degree) continue;
            term = term * SuperPolynomial::generator(c.table, g);
            have += dg;
        }
        if (have == degree) r += term;
    }
    return r;
}

}  // namespace

TEST(Context, GeneratorRules) {
    const auto& c = r2();
    // s y_1 = Y_1 + 1/2 d_1 varpi^{jk} y_j y_k - d_1 omega^j y_j, varpi^{23} = x1
    SuperPolynomial expect = c.Y(0) + c.parse("y_x2*y_x3");
    for (std::size_t j = 0; j < 3; ++j) expect -= c.dx(c.omega(j), 0) * c.y(j);
    EXPECT_EQ(c.s(c.y(0)), expect);
    // s x^1 = X~^1 + varpi^{1j} y_j + gamma v^1, v^1 = -(x3*x2 - x2*(1/4 - x3^2)) by hand
    EXPECT_EQ(c.s(c.x(0)), c.parse("X_x1 + x3*y_x2 - x2*y_x3 + (-x2*x3 + 1/4*x2 - x2*x3^2)*g_t1"));
    EXPECT_EQ(c.j[0](c.gamma(0)), c.one());
    EXPECT_TRUE(c.w(c.gamma(0)).is_zero());
    EXPECT_TRUE(c.w(c.Gamma(0)).is_zero());
    EXPECT_EQ(c.d(c.gamma(0)), c.Gamma(0));
    EXPECT_EQ(c.Phi_Gamma(), c.parse(std::string("G_t1*(") + gallery::r2_casimir + ")"));
}

TEST(Context, HamiltonVectorFieldMatchesComposite) {
    const auto& c = r2();
    // omega^i = -varpi^{ij} d_j (gamma^a h_a)
    for (std::size_t i = 0; i < 3; ++i) {
        SuperPolynomial lit = c.zero();
        for (std::size_t j = 0; j < 3; ++j) lit -= c.varpi(i, j) * c.dx(c.phi_gamma(), j);
        EXPECT_EQ(c.omega(i), lit);
    }
}

TEST(Context, PreconditionsEnforced) {
    auto b = gallery::broken_jacobi();
    try {
        OperationContext::build(b.model, b.lie, b.action);
        FAIL();
    } catch (const PreconditionError& e) {
        EXPECT_FALSE(all_passed(e.reports()));
    }
    for (const auto& bad : gallery::all()) {
        if (bad.valid) continue;
        EXPECT_THROW(OperationContext::build(bad.model, bad.lie, bad.action), PreconditionError) << bad.model.name;
    }
}

TEST(Context, DerivationsObeyLeibniz) {
    std::mt19937 rng(3);
    const auto& c = r2();
    std::vector<const Derivation*> ds{&c.s, &c.d, &c.w, &c.k, &c.k_pi, &c.h, &c.j[0], &c.l[0], &c.contraction[0]};
    for (const auto* D : ds)
        for (int k = 0; k < 6; ++k) {
            int da = k % 3, db = (k + 1) % 3;
            auto a = random_element(rng, c, da), b = random_element(rng, c, db);
            int sign = (D->degree() % 2 != 0 && da % 2 != 0) ? -1 : 1;
            EXPECT_EQ((*D)(a * b), (*D)(a) * b + Rational(sign) * (a * (*D)(b))) << D->label();
            EXPECT_TRUE((*D)(a).homogeneous_of(da + D->degree()) || (*D)(a).is_zero()) << D->label();
        }
}

TEST(Cartan, ValidContexts) {
    for (const char* name : {"r2gravity", "sklyanin", "affine_kks", "so3_casimir", "so3_rotation", "trivial", "n1_free"}) {
        auto c = context(gallery::by_name(name));
        auto r = cartan_check(c);
        EXPECT_TRUE(r.passed) << name << "\n" << r;
    }
}

TEST(Cartan, BrokenJacobiFailsOnlyInSS) {
    auto c = context(gallery::broken_jacobi());
    auto r = cartan_check(c);
    ASSERT_FALSE(r.passed);
    EXPECT_EQ(relations(r), std::vector<std::string>{"[s,s]"});
    bool on_y = false;
    for (const auto& w : r.witnesses) on_y = on_y || w.subject.rfind("y_", 0) == 0;
    EXPECT_TRUE(on_y);
}

TEST(Cartan, ResidualsReverify) {
    auto c = context(gallery::broken_jacobi());
    auto ss = derivation_commutator(c.s, c.s);
    for (const auto& w : cartan_check(c).witnesses) {
        ASSERT_TRUE(w.value.has_value());
        EXPECT_EQ(ss(SuperPolynomial::generator(c.table, c.table->index_of(w.subject))), *w.value);
        EXPECT_EQ(c.s(c.s(SuperPolynomial::generator(c.table, c.table->index_of(w.subject)))) * Rational(2), *w.value);
    }
}

TEST(Horizontality, JAnnihilatesAllButGhosts) {
    for (const char* name : {"r2gravity", "sklyanin", "so3_rotation"}) {
        auto c = context(gallery::by_name(name));
        for (std::size_t a = 0; a < c.m(); ++a)
            for (auto g : c.standard_generators()) {
                const auto& gen = (*c.table)[g];
                auto img = c.j[a].on(g);
                if (gen.family == Family::ghost) {
                    EXPECT_EQ(img, gen.index == int(a) ? c.one() : c.zero());
                } else {
                    EXPECT_TRUE(img.is_zero()) << gen.name;
                }
            }
    }
}

TEST(Auxiliary, ValidContexts) {
    for (const char* name : {"r2gravity", "sklyanin", "affine_kks", "so3_casimir", "trivial"}) {
        auto c = context(gallery::by_name(name));
        for (const auto& r : auxiliary_relations_check(c)) EXPECT_TRUE(r.passed) << name << "\n" << r;
    }
    auto rot = context(gallery::so3_rotation());
    for (const auto& r : auxiliary_relations_check(rot)) EXPECT_TRUE(r.passed) << r;
}

TEST(Auxiliary, IncompatibleThetaBreaksWS) {
    auto c = context(gallery::r2gravity_incompatible_theta());
    auto reps = auxiliary_relations_check(c);
    EXPECT_TRUE(reps[0].passed);
    EXPECT_TRUE(mentions(reps[1], "[w_pi,s]"));
}

TEST(Auxiliary, WSquaredTracksPreconditions) {
    for (const auto& b : gallery::all()) {
        if (b.action.kind != ActionKind::hamilton) continue;
        auto c = context(b);
        auto ww = compare_on_generators(derivation_commutator(c.w, c.w), Derivation::zero(c.table, 2), c.standard_generators());
        Matrix pi = b.model.pi();
        bool poisson = is_poisson_check(pi, b.model.vars, "pi").passed;
        bool casimir = true;
        for (const auto& h : b.action.h) casimir = casimir && verify_casimir(h, pi).passed;
        EXPECT_EQ(ww.empty(), poisson && casimir) << b.model.name;
        // [w,d] = 0 holds whatever the data
        EXPECT_TRUE(compare_on_generators(derivation_commutator(c.w, c.d), Derivation::zero(c.table, 2), c.standard_generators()).empty())
            << b.model.name;
    }
}

TEST(Auxiliary, DegenerateContextWMatchesS) {
    auto c = context(gallery::so3_casimir());
    for (std::size_t i = 0; i < c.n(); ++i) EXPECT_EQ(c.w(c.x(i)), c.s(c.x(i)));
}

TEST(Lagrangian, Element) {
    const auto& c = r2();
    auto L = lagrangian_element(c);
    EXPECT_TRUE(L.homogeneous_of(2));
    SuperPolynomial expect = c.parse("y_x1*X_x1 + y_x2*X_x2 + y_x3*X_x3 + (1/4 - x3^2)*y_x1*y_x2 + x1*y_x2*y_x3 + x2*y_x3*y_x1");
    EXPECT_EQ(L, expect - c.Phi_Gamma());

    auto n1 = context(gallery::n1_free());
    EXPECT_EQ(lagrangian_element(n1), n1.parse("y_x1*X_x1"));

    auto sk = context(gallery::sklyanin());
    EXPECT_EQ(sk.Phi_Gamma(), sk.parse("G_t1*(1/2*(a1*x1^2 + a2*x2^2 + a3*x3^2) - 1/4*y^2) + G_t2*1/2*(x1^2 + x2^2 + x3^2)"));
    EXPECT_THROW(lagrangian_element(context(gallery::so3_rotation())), std::invalid_argument);
}

TEST(Lagrangian, ClassCheck) {
    for (const char* name : {"r2gravity", "sklyanin", "affine_kks", "so3_casimir", "trivial", "n1_free"})
        EXPECT_TRUE(lagrangian_class_check(context(gallery::by_name(name))).passed) << name;
    auto bad = lagrangian_class_check(context(gallery::r2gravity_bad_action()));
    ASSERT_FALSE(bad.passed);
    EXPECT_TRUE(mentions(bad, "s L - d Xi"));
}

TEST(Lagrangian, Degeneration) {
    auto c = context(gallery::so3_casimir());
    EXPECT_TRUE(degeneration_check(c).passed);
    EXPECT_FALSE(degeneration_check(r2()).passed);
}

TEST(Obstruction, MatchesLiteralFormulaEverywhere) {
    for (const auto& b : gallery::all()) {
        if (b.action.kind != ActionKind::hamilton) continue;
        auto c = context(b);
        auto got = integrability_obstruction(c);
        auto lit = obstruction_formula(c);
        EXPECT_EQ(got, lit) << b.model.name;
        bool zero = true;
        for (const auto& e : got) zero = zero && e.is_zero();
        EXPECT_EQ(zero, b.valid || b.model.name == "bad_lie") << b.model.name;
    }
}

TEST(Obstruction, Examples) {
    for (const auto& e : integrability_obstruction(r2())) EXPECT_TRUE(e.is_zero());
    auto bad = context(gallery::r2gravity_bad_action());
    auto res = integrability_obstruction(bad);
    // pi^{21} d_1 (Gamma x1) = -(1/4 - x3^2) Gamma
    EXPECT_EQ(res[1], bad.parse("-(1/4 - x3^2)*G_t1"));
    auto br = context(gallery::broken_jacobi());
    auto jac = integrability_obstruction(br);
    // Jacobiator^{123} = -x3: -1/2 (J^{123} y_2 y_3 + J^{132} y_3 y_2) on the first row
    EXPECT_EQ(jac[0], br.parse("x3*y_x2*y_x3"));
}

TEST(Observables, MultivectorClass) {
    const auto& c = r2();
    auto pi = c.pi_element();
    auto eq = equivariant_class_check(c, pi);
    EXPECT_TRUE(eq.passed()) << eq.conditions;
    ASSERT_TRUE(eq.consequences.has_value());
    auto bv = bv_observable_check(c, pi);
    EXPECT_TRUE(bv.passed()) << bv.conditions << *bv.consequences;
    auto one = c.one();
    EXPECT_TRUE(equivariant_class_check(c, one).passed());
    EXPECT_TRUE(bv_observable_check(c, one).passed());
    // the Hamilton function itself is a degree 0 observable
    EXPECT_TRUE(bv_observable_check(c, c.lift(c.action.h[0])).passed());
    // x1 fails [pi, x1] = 0 but the identity still holds
    auto x1 = bv_observable_check(c, c.x(0));
    EXPECT_FALSE(x1.conditions.passed);
    EXPECT_TRUE(x1.consequences->passed);
}

TEST(Observables, ConstantClosedForms) {
    for (const char* name : {"r2gravity", "sklyanin"}) {
        auto c = context(gallery::by_name(name));
        for (const char* s : {"3", "2*X_x1 - 1/3*X_x2", "5/2*X_x1*X_x2", "X_x1*X_x3 - X_x2*X_x3"}) {
            auto sigma = c.parse(s);
            auto eq = equivariant_class_check(c, sigma);
            EXPECT_TRUE(eq.passed()) << name << " " << s << eq.conditions;
            auto bv = bv_observable_check(c, sigma);
            if (sigma.family_degree(Family::form).value_or(0) <= 1) {
                EXPECT_TRUE(bv.passed()) << name << " " << s << bv.conditions;
            } else {
                EXPECT_TRUE(bv.consequences->passed);
            }
        }
    }
}

TEST(Observables, NonClosedFormFails) {
    const auto& c = r2();
    auto sigma = c.parse("x1*X_x2");
    auto bv = bv_observable_check(c, sigma);
    ASSERT_FALSE(bv.conditions.passed);
    EXPECT_FALSE(bv.conditions.witnesses.front().residual.empty());
    EXPECT_EQ(*bv.conditions.witnesses.front().value, c.k_pi(c.parse("X_x1*X_x2")));
    EXPECT_TRUE(bv.consequences->passed);
}

TEST(Observables, MixedRejected) {
    const auto& c = r2();
    EXPECT_THROW(equivariant_class_check(c, c.parse("X_x1*y_x2")), std::invalid_argument);
    EXPECT_THROW(bv_observable_check(c, c.parse("Y_x1")), std::invalid_argument);
}

TEST(Shift, Consistency) {
    for (const char* name : {"r2gravity", "sklyanin", "affine_kks", "trivial", "so3_rotation"}) {
        auto r = shift_consistency_check(context(gallery::by_name(name)));
        EXPECT_TRUE(r.passed) << name << "\n" << r;
    }
    auto b = gallery::r2gravity();
    OperationOptions o;
    o.with_variants = true;
    o.shift_sign = -1;
    auto wrong = shift_consistency_check(OperationContext::build(b.model, b.lie, b.action, o));
    ASSERT_FALSE(wrong.passed);
    bool on_xs = false;
    for (const auto& w : wrong.witnesses) on_xs = on_xs || (w.relation == "X* shift: s" && w.subject.rfind("Xs_", 0) == 0);
    EXPECT_TRUE(on_xs);
}
