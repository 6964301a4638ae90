#include "oracles.hpp"
#include "psm/gallery.hpp"
#include "psm/symmetry.hpp"

#include <gtest/gtest.h>

using namespace psm;

TEST(LieAlgebra, Verify) {
    EXPECT_TRUE(verify_lie_algebra(LieAlgebra::abelian(1)).passed);
    EXPECT_TRUE(verify_lie_algebra(LieAlgebra::so3()).passed);
    LieAlgebra bad(std::vector<std::string>{"t1"});
    bad.structure[0][0][0] = 1;
    auto r = verify_lie_algebra(bad);
    ASSERT_FALSE(r.passed);
    EXPECT_NE(r.witnesses.front().relation.find("antisymmetry"), std::string::npos);
    auto nj = verify_lie_algebra(gallery::bad_lie().lie);
    ASSERT_FALSE(nj.passed);
    EXPECT_EQ(nj.witnesses.front().relation, "jacobi");
}

TEST(LieAlgebra, So3JacobiByDirectSummation) {
    auto L = LieAlgebra::so3();
    // epsilon_{abe} epsilon_{ecd} summed cyclically, by hand
    auto eps = [](int a, int b, int c) { return (a - b) * (b - c) * (c - a) / 2; };
    for (int a = 0; a < 3; ++a)
        for (int b = 0; b < 3; ++b)
            for (int c = 0; c < 3; ++c) {
                EXPECT_EQ(L.c(a, b, c), Rational(eps(a, b, c)));
                for (int d = 0; d < 3; ++d) {
                    int s = 0;
                    for (int e = 0; e < 3; ++e) s += eps(a, b, e) * eps(e, c, d) + eps(b, c, e) * eps(e, a, d) + eps(c, a, e) * eps(e, b, d);
                    EXPECT_EQ(s, 0);
                }
            }
}

TEST(Action, HamiltonExamples) {
    auto r2 = gallery::r2gravity();
    auto ok = verify_action(r2.model, r2.lie, r2.action);
    ASSERT_EQ(ok.size(), 2u);
    EXPECT_TRUE(all_passed(ok));

    auto bad = gallery::r2gravity_bad_action();
    auto rep = verify_action(bad.model, bad.lie, bad.action);
    EXPECT_TRUE(rep[0].passed);
    ASSERT_FALSE(rep[1].passed);
    EXPECT_EQ(rep[1].witnesses.front().subject, "x2");
    // pi^{21} d_1 x1 = -(1/4 - x3^2)
    EXPECT_EQ(rep[1].witnesses.front().residual, "-1/4 + x3^2");

    auto zero = r2;
    zero.action = ActionSpec::hamilton({Polynomial(r2.model.vars)});
    EXPECT_TRUE(all_passed(verify_action(zero.model, zero.lie, zero.action)));

    auto sk = gallery::sklyanin();
    EXPECT_TRUE(all_passed(verify_action(sk.model, sk.lie, sk.action)));
    EXPECT_THROW(verify_action(sk.model, LieAlgebra::abelian(3), sk.action), std::invalid_argument);
}

TEST(Action, HomomorphismFailureReported) {
    auto m = gallery::so3_model("so3");
    // x1, x2 with an abelian algebra: {x1,x2} = x3 != 0
    ActionSpec a = ActionSpec::hamilton({parse_expression("x1", m.vars), parse_expression("x2", m.vars)});
    auto rep = verify_action(m, LieAlgebra::abelian(2), a);
    ASSERT_FALSE(rep[0].passed);
    EXPECT_EQ(rep[0].witnesses.front().residual, "x3");
}

TEST(Action, PoissonVectorFields) {
    auto rot = gallery::so3_rotation();
    EXPECT_TRUE(all_passed(verify_action(rot.model, rot.lie, rot.action)));
    auto bad = gallery::so3_bad_vf();
    auto rep = verify_action(bad.model, bad.lie, bad.action);
    EXPECT_TRUE(rep[0].passed);
    EXPECT_FALSE(rep[1].passed);
    // wrong structure constants: the rotation fields are not abelian
    auto wrong = verify_action(rot.model, LieAlgebra::abelian(3), rot.action);
    EXPECT_FALSE(wrong[0].passed);
}

TEST(Action, InducedFieldsRepresentTheAlgebra) {
    for (const auto& b : gallery::all()) {
        if (!b.valid) continue;
        auto t = b.model.table();
        auto v = action_vector_fields(b.model, b.action);
        std::vector<SuperPolynomial> u;
        for (const auto& comps : v) u.push_back(vector_element(comps, t));
        for (std::size_t a = 0; a < u.size(); ++a)
            for (std::size_t c = 0; c < u.size(); ++c) {
                SuperPolynomial rhs(t);
                for (std::size_t k = 0; k < u.size(); ++k) rhs += b.lie.c(a, c, k) * u[k];
                EXPECT_EQ(schouten_bracket(u[a], u[c]), rhs) << b.model.name;
            }
    }
}

TEST(Action, HamiltonActionPreservesPi) {
    for (const auto& b : gallery::all()) {
        if (!b.valid || b.action.kind != ActionKind::hamilton) continue;
        auto t = b.model.table();
        auto P = bivector_element(b.model.pi(), t);
        for (const auto& comps : action_vector_fields(b.model, b.action))
            EXPECT_TRUE(schouten_bracket(vector_element(comps, t), P).is_zero()) << b.model.name;
    }
}

TEST(Kks, ModelAndConditions) {
    auto d = gallery::affine_kks_data();
    auto m = build_kks_model(d);
    EXPECT_EQ(poisson_bracket(parse_expression("x0", m.vars), parse_expression("x1", m.vars), m.pi()),
              parse_expression("x2 + a", m.vars));
    EXPECT_TRUE(kks_jacobi_check(d).passed);
    EXPECT_TRUE(kks_cocycle_check(d).passed);
    EXPECT_TRUE(all_passed(model_structure_check(m)));

    auto bad = gallery::kks_bad_cocycle_data();
    EXPECT_FALSE(kks_cocycle_check(bad).passed);
    auto rep = model_structure_check(build_kks_model(bad));
    EXPECT_TRUE(rep[0].passed);
    EXPECT_TRUE(rep[1].passed);
    EXPECT_FALSE(rep[2].passed);

    KksData zero = d;
    zero.a.assign(4, std::vector<std::string>(4, "0"));
    auto mz = build_kks_model(zero);
    EXPECT_FALSE(mz.has_theta());
    EXPECT_TRUE(model_structure_check(mz)[2].passed);
}

TEST(Kks, StructureCheckEquivalentToLiteralConditions) {
    // Jacobi of c alone: so3 dual is a Lie algebra, a perturbed one is not
    KksData good({"x1", "x2", "x3"});
    good.set_c(0, 1, 2, 1);
    good.set_c(1, 2, 0, 1);
    good.set_c(2, 0, 1, 1);
    KksData broken = good;
    broken.set_c(2, 0, 0, 1);
    for (const auto& d : {good, broken}) {
        auto m = build_kks_model(d);
        EXPECT_EQ(kks_jacobi_check(d).passed, model_structure_check(m)[0].passed);
    }
    EXPECT_TRUE(kks_jacobi_check(good).passed);
    EXPECT_FALSE(kks_jacobi_check(broken).passed);
    // constant a^{12} = 1 on the so(3) dual
    KksData coc = good;
    coc.set_a(0, 1, "1");
    EXPECT_EQ(kks_cocycle_check(coc).passed, model_structure_check(build_kks_model(coc))[2].passed);
    for (const auto& d : {gallery::affine_kks_data(), gallery::kks_bad_cocycle_data()})
        EXPECT_EQ(kks_cocycle_check(d).passed, model_structure_check(build_kks_model(d))[2].passed);
}

TEST(Kks, RejectsBadInput) {
    KksData d({"x1", "x2"});
    d.c[0][1][0] = 1;  // no antisymmetric partner
    EXPECT_THROW(build_kks_model(d), std::invalid_argument);
    KksData e({"x1", "x2"});
    e.a[0][1] = "x1";
    e.a[1][0] = "-x1";
    EXPECT_THROW(build_kks_model(e), std::invalid_argument);
}
