#pragma once

// The equivariant operation of a Lie algebra acting on a Poisson model:
// derivations j(t_a), l(t_a), s, d on the generators x, X~, y, Y~, gamma,
// Gamma, the BV derivation w_pi, the auxiliary k, k_pi, h, q, and every
// identity check built from them.
//
// Composites: omega^i = gamma^a v_a^i, Omega^i = Gamma^a v_a^i,
// phi_gamma = gamma^a h_a, Phi_Gamma = Gamma^a h_a.

#include "psm/poisson.hpp"
#include "psm/report.hpp"
#include "psm/supergraded.hpp"
#include "psm/symmetry.hpp"

#include <map>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace psm {

class PreconditionError : public std::runtime_error {
public:
    explicit PreconditionError(std::vector<CheckReport> reports)
        : std::runtime_error(summary(reports)), reports_(std::move(reports)) {}
    const std::vector<CheckReport>& reports() const { return reports_; }

private:
    std::vector<CheckReport> reports_;
    static std::string summary(const std::vector<CheckReport>& reports) {
        std::string s = "model preconditions fail:";
        for (const auto& r : reports)
            if (!r.passed) s += " " + r.name + ";";
        return s;
    }
};

struct OperationOptions {
    bool allow_invalid = false;
    bool with_variants = false;
    int shift_sign = 1;  // sign of the varpi term in X* = X - varpi y; -1 is a negative control
};

class OperationContext {
public:
    PoissonModel model;
    LieAlgebra lie;
    ActionSpec action;
    OperationOptions options;
    TablePtr table;
    std::vector<CheckReport> preconditions;

    // named derivations
    Derivation s, d, w, k, k_pi, h, q;
    std::vector<Derivation> j, l, contraction;

    static OperationContext build(const PoissonModel& model, const LieAlgebra& L, const ActionSpec& action,
                                  OperationOptions options = {}) {
        OperationContext c;
        c.model = model;
        c.lie = L;
        c.action = action;
        c.options = options;
        c.preconditions = model_structure_check(model);
        c.preconditions.push_back(verify_lie_algebra(L));
        for (auto& r : verify_action(model, L, action)) c.preconditions.push_back(std::move(r));
        if (!options.allow_invalid && !all_passed(c.preconditions)) throw PreconditionError(c.preconditions);
        c.table = make_table({model.coordinates(), model.parameters(), L.basis, options.with_variants});
        c.assemble();
        return c;
    }

    bool hamilton() const { return action.kind == ActionKind::hamilton; }
    std::size_t n() const { return model.dimension(); }
    std::size_t m() const { return lie.dimension(); }

    // generators and composites
    const SuperPolynomial& x(std::size_t i) const { return x_[i]; }
    const SuperPolynomial& X(std::size_t i) const { return X_[i]; }
    const SuperPolynomial& y(std::size_t i) const { return y_[i]; }
    const SuperPolynomial& Y(std::size_t i) const { return Y_[i]; }
    const SuperPolynomial& gamma(std::size_t a) const { return g_[a]; }
    const SuperPolynomial& Gamma(std::size_t a) const { return G_[a]; }
    const SuperPolynomial& omega(std::size_t i) const { return omega_[i]; }
    const SuperPolynomial& Omega(std::size_t i) const { return Omega_[i]; }
    const SuperPolynomial& Phi_Gamma() const { return Phi_; }
    const SuperPolynomial& phi_gamma() const { return phi_; }
    const SuperPolynomial& varpi(std::size_t i, std::size_t jj) const { return varpi_[i][jj]; }
    const SuperPolynomial& pi(std::size_t i, std::size_t jj) const { return pi_[i][jj]; }
    const SuperPolynomial& v(std::size_t a, std::size_t i) const { return v_[a][i]; }
    SuperPolynomial lift(const Polynomial& p) const { return SuperPolynomial::lift(table, p.embed(model.vars)); }
    SuperPolynomial zero() const { return SuperPolynomial(table); }
    SuperPolynomial one() const { return SuperPolynomial::constant(table, 1); }
    SuperPolynomial parse(const std::string& text) const { return parse_super(text, table); }
    SuperPolynomial dx(const SuperPolynomial& f, std::size_t i) const { return f.partial_even(xi_[i]); }

    SuperPolynomial varpi_element() const { return bivector_element(model.varpi, table); }
    SuperPolynomial pi_element() const { return bivector_element(model.pi(), table); }

    /// x, X~, y, Y~, gamma, Gamma in table order.
    std::vector<std::size_t> standard_generators() const {
        std::vector<std::size_t> out;
        for (std::size_t g = 0; g < table->size(); ++g) {
            Family f = (*table)[g].family;
            if (f == Family::coordinate || f == Family::form || f == Family::antifield || f == Family::antifield_form ||
                f == Family::ghost || f == Family::ghost_curvature)
                out.push_back(g);
        }
        return out;
    }
    std::string basis(std::size_t a) const { return lie.basis[a]; }

    /// Bivector-shaped parts of s and w_pi, with (Xg, Yg) the form and
    /// antifield-form generators they are written in.
    struct CoreRules {
        std::vector<SuperPolynomial> on_x, on_X, on_y, on_Y;
    };
    CoreRules core_rules(const std::vector<std::vector<SuperPolynomial>>& B, const std::vector<SuperPolynomial>& Xg,
                         const std::vector<SuperPolynomial>& Yg) const {
        CoreRules r;
        std::size_t N = n();
        Rational half(1, 2);
        for (std::size_t i = 0; i < N; ++i) {
            SuperPolynomial ex = zero(), eX = zero(), ey = zero(), eY = zero();
            for (std::size_t a = 0; a < N; ++a) {
                ex += B[i][a] * y_[a];
                eX -= B[i][a] * Yg[a];
                for (std::size_t b = 0; b < N; ++b) {
                    eX -= dx(B[i][b], a) * Xg[a] * y_[b];
                    ey += half * (dx(B[a][b], i) * y_[a] * y_[b]);
                    eY += dx(B[a][b], i) * y_[a] * Yg[b];
                    for (std::size_t c = 0; c < N; ++c) {
                        SuperPolynomial dd = dx(dx(B[b][c], a), i);
                        if (!dd.is_zero()) eY -= half * (dd * Xg[a] * y_[b] * y_[c]);
                    }
                }
            }
            r.on_x.push_back(ex);
            r.on_X.push_back(eX);
            r.on_y.push_back(ey);
            r.on_Y.push_back(eY);
        }
        return r;
    }

    /// Weil rules on gamma and Gamma for s, j(t_a), l(t_a).
    void weil_s(Derivation& D) const {
        for (std::size_t a = 0; a < m(); ++a) {
            SuperPolynomial sg = G_[a], sG = zero();
            for (std::size_t b = 0; b < m(); ++b)
                for (std::size_t c = 0; c < m(); ++c) {
                    const Rational& k_ = lie.c(b, c, a);
                    if (sgn(k_) == 0) continue;
                    sg -= (k_ / 2) * (g_[b] * g_[c]);
                    sG -= k_ * (g_[b] * G_[c]);
                }
            D.set(gi_[a], sg);
            D.set(Gi_[a], sG);
        }
    }
    void weil_j(Derivation& D, std::size_t a) const {
        for (std::size_t b = 0; b < m(); ++b) {
            D.set(gi_[b], a == b ? one() : zero());
            D.set(Gi_[b], zero());
        }
    }
    void weil_l(Derivation& D, std::size_t a) const {
        for (std::size_t b = 0; b < m(); ++b) {
            SuperPolynomial lg = zero(), lG = zero();
            for (std::size_t c = 0; c < m(); ++c) {
                const Rational& k_ = lie.c(a, c, b);
                if (sgn(k_) == 0) continue;
                lg -= k_ * g_[c];
                lG -= k_ * G_[c];
            }
            D.set(gi_[b], lg);
            D.set(Gi_[b], lG);
        }
    }
    /// Lie derivative along v_a on (x, Xg, y, Yg).
    void vector_l(Derivation& D, std::size_t a, const std::vector<std::size_t>& Xi, const std::vector<SuperPolynomial>& Xg,
                  const std::vector<std::size_t>& Yi, const std::vector<SuperPolynomial>& Yg) const {
        for (std::size_t i = 0; i < n(); ++i) {
            SuperPolynomial lX = zero(), ly = zero(), lY = zero();
            for (std::size_t jj = 0; jj < n(); ++jj) {
                lX += dx(v_[a][i], jj) * Xg[jj];
                ly -= dx(v_[a][jj], i) * y_[jj];
                lY -= dx(v_[a][jj], i) * Yg[jj];
                for (std::size_t kk = 0; kk < n(); ++kk) lY -= dx(dx(v_[a][kk], jj), i) * Xg[jj] * y_[kk];
            }
            D.set(xi_[i], v_[a][i]);
            D.set(Xi[i], lX);
            D.set(yi_[i], ly);
            D.set(Yi[i], lY);
        }
    }

    std::vector<std::size_t> indices(Family f) const { return table->indices(f); }
    std::vector<SuperPolynomial> gens(Family f) const {
        std::vector<SuperPolynomial> out;
        for (auto i : table->indices(f)) out.push_back(SuperPolynomial::generator(table, i));
        return out;
    }
    const std::vector<std::vector<SuperPolynomial>>& varpi_lifted() const { return varpi_; }
    const std::vector<std::vector<SuperPolynomial>>& pi_lifted() const { return pi_; }

private:
    std::vector<std::size_t> xi_, Xi_, yi_, Yi_, gi_, Gi_;
    std::vector<SuperPolynomial> x_, X_, y_, Y_, g_, G_, omega_, Omega_, h_;
    std::vector<std::vector<SuperPolynomial>> varpi_, pi_, v_;
    SuperPolynomial Phi_, phi_;

    void assemble() {
        xi_ = table->indices(Family::coordinate);
        Xi_ = table->indices(Family::form);
        yi_ = table->indices(Family::antifield);
        Yi_ = table->indices(Family::antifield_form);
        gi_ = table->indices(Family::ghost);
        Gi_ = table->indices(Family::ghost_curvature);
        x_ = gens(Family::coordinate);
        X_ = gens(Family::form);
        y_ = gens(Family::antifield);
        Y_ = gens(Family::antifield_form);
        g_ = gens(Family::ghost);
        G_ = gens(Family::ghost_curvature);

        std::size_t N = n(), M = m();
        Matrix pim = model.pi();
        varpi_.assign(N, std::vector<SuperPolynomial>(N));
        pi_.assign(N, std::vector<SuperPolynomial>(N));
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t jj = 0; jj < N; ++jj) {
                varpi_[i][jj] = lift(model.varpi[i][jj]);
                pi_[i][jj] = lift(pim[i][jj]);
            }
        auto fields = action_vector_fields(model, action);
        v_.assign(M, std::vector<SuperPolynomial>(N));
        for (std::size_t a = 0; a < M; ++a)
            for (std::size_t i = 0; i < N; ++i) v_[a][i] = lift(fields[a][i]);
        h_.clear();
        Phi_ = zero();
        phi_ = zero();
        if (hamilton())
            for (std::size_t a = 0; a < M; ++a) {
                h_.push_back(lift(action.h[a]));
                Phi_ += G_[a] * h_[a];
                phi_ += g_[a] * h_[a];
            }
        omega_.assign(N, zero());
        Omega_.assign(N, zero());
        for (std::size_t i = 0; i < N; ++i)
            for (std::size_t a = 0; a < M; ++a) {
                omega_[i] += g_[a] * v_[a][i];
                Omega_[i] += G_[a] * v_[a][i];
            }

        // s
        s = Derivation(table, 1, "s");
        CoreRules cs = core_rules(varpi_, X_, Y_);
        for (std::size_t i = 0; i < N; ++i) {
            SuperPolynomial sX = cs.on_X[i] - Omega_[i], sy = Y_[i] + cs.on_y[i], sY = cs.on_Y[i];
            for (std::size_t jj = 0; jj < N; ++jj) {
                sX += dx(omega_[i], jj) * X_[jj];
                sy -= dx(omega_[jj], i) * y_[jj];
                sY += dx(Omega_[jj], i) * y_[jj];
                sY -= dx(omega_[jj], i) * Y_[jj];
                for (std::size_t kk = 0; kk < N; ++kk) sY -= dx(dx(omega_[kk], jj), i) * X_[jj] * y_[kk];
            }
            s.set(xi_[i], X_[i] + cs.on_x[i] + omega_[i]);
            s.set(Xi_[i], sX);
            s.set(yi_[i], sy);
            s.set(Yi_[i], sY);
        }
        weil_s(s);

        // j(t_a), l(t_a)
        j.clear();
        l.clear();
        contraction.clear();
        for (std::size_t a = 0; a < M; ++a) {
            Derivation ja(table, -1, "j(" + lie.basis[a] + ")");
            for (std::size_t i = 0; i < N; ++i)
                for (auto idx : {xi_[i], Xi_[i], yi_[i], Yi_[i]}) ja.set(idx, zero());
            weil_j(ja, a);
            j.push_back(ja);

            Derivation la(table, 0, "l(" + lie.basis[a] + ")");
            vector_l(la, a, Xi_, X_, Yi_, Y_);
            weil_l(la, a);
            l.push_back(la);

            Derivation ia = Derivation::zero(table, -1, "i(v_" + lie.basis[a] + ")");
            for (std::size_t i = 0; i < N; ++i) ia.set(Xi_[i], v_[a][i]);
            contraction.push_back(ia);
        }

        // d
        d = Derivation::zero(table, 1, "d");
        for (std::size_t i = 0; i < N; ++i) {
            d.set(xi_[i], X_[i]);
            d.set(yi_[i], Y_[i]);
        }
        for (std::size_t a = 0; a < M; ++a) d.set(gi_[a], G_[a]);

        // w_pi
        w = Derivation::zero(table, 1, "w_pi");
        CoreRules cw = core_rules(pi_, X_, Y_);
        for (std::size_t i = 0; i < N; ++i) {
            SuperPolynomial wY = cw.on_Y[i];
            for (std::size_t jj = 0; jj < N; ++jj) wY += dx(dx(Phi_, jj), i) * X_[jj];
            w.set(xi_[i], X_[i] + cw.on_x[i]);
            w.set(Xi_[i], cw.on_X[i]);
            w.set(yi_[i], Y_[i] + cw.on_y[i] - dx(Phi_, i));
            w.set(Yi_[i], wY);
        }

        // k, k_pi, h
        k = Derivation::zero(table, 0, "k");
        k_pi = Derivation::zero(table, 0, "k_pi");
        h = Derivation::zero(table, 0, "h");
        for (std::size_t i = 0; i < N; ++i) {
            k.set(Xi_[i], cs.on_x[i]);
            k_pi.set(Xi_[i], cw.on_x[i]);
            SuperPolynomial hX = zero();
            for (std::size_t jj = 0; jj < N; ++jj) hX += varpi_[i][jj] * (y_[jj] - dx(phi_, jj));
            h.set(Xi_[i], hX);
        }

        // q, on x and y only
        q = Derivation(table, 1, "q");
        for (std::size_t i = 0; i < N; ++i) {
            q.set(xi_[i], -cs.on_x[i]);
            q.set(yi_[i], -cs.on_y[i]);
        }
    }
};

// ---------------------------------------------------------------------------
// Checks

namespace detail {

inline void compare_into(CheckReport& r, const OperationContext& c, const Derivation& lhs, const Derivation& rhs,
                         const std::string& relation, const std::vector<std::size_t>& gens) {
    for (const auto& res : compare_on_generators(lhs, rhs, gens)) r.fail(relation, (*c.table)[res.generator].name, res.residual);
}

inline Derivation lie_combination(const OperationContext& c, const std::vector<Derivation>& D, std::size_t a, std::size_t b,
                                  int degree) {
    Derivation r = Derivation::zero(c.table, degree, "c^c_ab");
    for (std::size_t k = 0; k < c.m(); ++k)
        if (sgn(c.lie.c(a, b, k)) != 0) r = r + D[k].scaled(c.lie.c(a, b, k));
    return r;
}

}  // namespace detail

/// [j,j] = 0, [l_a,j_b] = c j, [l_a,l_b] = c l, [s,j] = l, [s,l] = 0, [s,s] = 0.
inline CheckReport cartan_check(const OperationContext& c) {
    CheckReport r{"cartan relations", true, {}};
    auto gens = c.standard_generators();
    auto zero = [&](int deg) { return Derivation::zero(c.table, deg); };
    for (std::size_t a = 0; a < c.m(); ++a)
        for (std::size_t b = 0; b < c.m(); ++b) {
            std::string ab = c.basis(a) + "," + c.basis(b);
            detail::compare_into(r, c, derivation_commutator(c.j[a], c.j[b]), zero(-2), "[j,j](" + ab + ")", gens);
            detail::compare_into(r, c, derivation_commutator(c.l[a], c.j[b]), detail::lie_combination(c, c.j, a, b, -1),
                                 "[l,j](" + ab + ") - c j", gens);
            detail::compare_into(r, c, derivation_commutator(c.l[a], c.l[b]), detail::lie_combination(c, c.l, a, b, 0),
                                 "[l,l](" + ab + ") - c l", gens);
        }
    for (std::size_t a = 0; a < c.m(); ++a) {
        detail::compare_into(r, c, derivation_commutator(c.s, c.j[a]), c.l[a], "[s,j(" + c.basis(a) + ")] - l", gens);
        detail::compare_into(r, c, derivation_commutator(c.s, c.l[a]), zero(1), "[s,l(" + c.basis(a) + ")]", gens);
    }
    detail::compare_into(r, c, derivation_commutator(c.s, c.s), zero(2), "[s,s]", gens);
    return r;
}

/// [d,d] = [d,j] = [d,l] = [d,s] = 0 and, for Hamilton actions,
/// [w,w] = [w,j] = [w,l] = [w,s] = [w,d] = 0.
inline std::vector<CheckReport> auxiliary_relations_check(const OperationContext& c) {
    auto gens = c.standard_generators();
    auto zero = [&](int deg) { return Derivation::zero(c.table, deg); };
    CheckReport dr{"differential relations", true, {}};
    detail::compare_into(dr, c, derivation_commutator(c.d, c.d), zero(2), "[d,d]", gens);
    for (std::size_t a = 0; a < c.m(); ++a) {
        detail::compare_into(dr, c, derivation_commutator(c.d, c.j[a]), zero(0), "[d,j(" + c.basis(a) + ")]", gens);
        detail::compare_into(dr, c, derivation_commutator(c.d, c.l[a]), zero(1), "[d,l(" + c.basis(a) + ")]", gens);
    }
    detail::compare_into(dr, c, derivation_commutator(c.d, c.s), zero(2), "[d,s]", gens);

    // Without Hamilton functions w_pi carries no Phi_Gamma and only [w,w], [w,d] are asserted.
    CheckReport wr{c.hamilton() ? "BV derivation relations" : "BV derivation relations ([w,w], [w,d] only)", true, {}};
    detail::compare_into(wr, c, derivation_commutator(c.w, c.w), zero(2), "[w_pi,w_pi]", gens);
    detail::compare_into(wr, c, derivation_commutator(c.w, c.d), zero(2), "[w_pi,d]", gens);
    if (!c.hamilton()) return {dr, wr};
    for (std::size_t a = 0; a < c.m(); ++a) {
        detail::compare_into(wr, c, derivation_commutator(c.w, c.j[a]), zero(0), "[w_pi,j(" + c.basis(a) + ")]", gens);
        detail::compare_into(wr, c, derivation_commutator(c.w, c.l[a]), zero(1), "[w_pi,l(" + c.basis(a) + ")]", gens);
    }
    detail::compare_into(wr, c, derivation_commutator(c.w, c.s), zero(2), "[w_pi,s]", gens);
    return {dr, wr};
}

inline void require_hamilton(const OperationContext& c, const char* what) {
    if (!c.hamilton()) throw std::invalid_argument(std::string(what) + " needs a Hamilton action");
}

/// L_pi = y_i X~^i + 1/2 pi^{ij} y_i y_j - Phi_Gamma
inline SuperPolynomial lagrangian_element(const OperationContext& c) {
    require_hamilton(c, "the Lagrangian");
    SuperPolynomial L = c.zero();
    for (std::size_t i = 0; i < c.n(); ++i) L += c.y(i) * c.X(i);
    return L + c.pi_element() - c.Phi_Gamma();
}

/// Xi = y_i X~^i - Phi_Gamma + 1/2 pi^{ij} y_i y_j - 1/2 varpi^{ij} y_i y_j
inline SuperPolynomial lagrangian_potential(const OperationContext& c) {
    require_hamilton(c, "the Lagrangian");
    SuperPolynomial Xi = c.zero();
    for (std::size_t i = 0; i < c.n(); ++i) Xi += c.y(i) * c.X(i);
    return Xi - c.Phi_Gamma() + c.pi_element() - c.varpi_element();
}

/// j(t_a) L = 0, l(t_a) L = 0, s L - d Xi = 0.
inline CheckReport lagrangian_class_check(const OperationContext& c) {
    CheckReport r{"lagrangian class", true, {}};
    SuperPolynomial L = lagrangian_element(c);
    for (std::size_t a = 0; a < c.m(); ++a) {
        r.expect_zero("j(" + c.basis(a) + ") L", "L", c.j[a](L));
        r.expect_zero("l(" + c.basis(a) + ") L", "L", c.l[a](L));
    }
    r.expect_zero("s L - d Xi", "L", c.s(L) - c.d(lagrangian_potential(c)));
    return r;
}

/// Applies d to the field equations X~^i + pi^{ij} y_j and substitutes the
/// equations themselves: X~^j -> -pi^{jk} y_k,
/// Y~_j -> -1/2 d_j pi^{kl} y_k y_l + d_j Phi_Gamma (Gamma standing for d gamma).
inline std::vector<SuperPolynomial> integrability_obstruction(const OperationContext& c) {
    require_hamilton(c, "the field equations");
    std::map<std::size_t, SuperPolynomial> on_shell;
    auto Xi = c.indices(Family::form), Yi = c.indices(Family::antifield_form);
    for (std::size_t jj = 0; jj < c.n(); ++jj) {
        SuperPolynomial ex = c.zero(), ey = c.dx(c.Phi_Gamma(), jj);
        for (std::size_t k = 0; k < c.n(); ++k) {
            ex -= c.pi(jj, k) * c.y(k);
            for (std::size_t l = 0; l < c.n(); ++l) ey -= Rational(1, 2) * (c.dx(c.pi(k, l), jj) * c.y(k) * c.y(l));
        }
        on_shell.emplace(Xi[jj], ex);
        on_shell.emplace(Yi[jj], ey);
    }
    std::vector<SuperPolynomial> out;
    for (std::size_t i = 0; i < c.n(); ++i) {
        SuperPolynomial eq = c.X(i);
        for (std::size_t jj = 0; jj < c.n(); ++jj) eq += c.pi(i, jj) * c.y(jj);
        out.push_back(substitute_generators(c.d(eq), on_shell));
    }
    return out;
}

/// pi^{ij} d_j Phi_Gamma - 1/2 (pi^{il} d_l pi^{jk} + cyclic) y_j y_k, literally.
inline std::vector<SuperPolynomial> obstruction_formula(const OperationContext& c) {
    require_hamilton(c, "the field equations");
    std::size_t N = c.n();
    std::vector<SuperPolynomial> out;
    for (std::size_t i = 0; i < N; ++i) {
        SuperPolynomial e = c.zero();
        for (std::size_t jj = 0; jj < N; ++jj) e += c.pi(i, jj) * c.dx(c.Phi_Gamma(), jj);
        for (std::size_t jj = 0; jj < N; ++jj)
            for (std::size_t k = 0; k < N; ++k) {
                SuperPolynomial jac = c.zero();
                for (std::size_t l = 0; l < N; ++l)
                    jac += c.pi(i, l) * c.dx(c.pi(jj, k), l) + c.pi(jj, l) * c.dx(c.pi(k, i), l) +
                           c.pi(k, l) * c.dx(c.pi(i, jj), l);
                if (!jac.is_zero()) e -= Rational(1, 2) * (jac * c.y(jj) * c.y(k));
            }
        out.push_back(e);
    }
    return out;
}

inline CheckReport obstruction_check(const OperationContext& c) {
    CheckReport r{"field equations integrable", true, {}};
    auto res = integrability_obstruction(c);
    auto coords = c.model.coordinates();
    for (std::size_t i = 0; i < res.size(); ++i) r.expect_zero("d(field equation) on shell", coords[i], res[i]);
    return r;
}

// Observables.

struct ObservableReports {
    ElementKind kind = ElementKind::function;
    CheckReport conditions;
    std::optional<CheckReport> consequences;

    bool passed() const { return conditions.passed && (!consequences || consequences->passed); }
};

namespace detail {

inline ElementKind observable_kind(const OperationContext& c, const SuperPolynomial& O) {
    if (O.table() != c.table && !(*O.table() == *c.table)) throw std::invalid_argument("observable over a different table");
    ElementKind k = classify(O);
    if (k == ElementKind::mixed)
        throw std::invalid_argument("observable must be a multivector in (x,y) or a form in (x,X~): " + O.to_string());
    return k == ElementKind::function ? ElementKind::multivector : k;
}

}  // namespace detail

/// Multivector beta: [h_a,beta] = 0 and [varpi,beta] = 0 imply j beta = 0,
/// l beta = 0, s beta = d beta. Form sigma: k d sigma = 0 implies j sigma = 0,
/// l(t_a) sigma = d i(v_a) sigma, s sigma = d(sigma - h sigma).
inline ObservableReports equivariant_class_check(const OperationContext& c, const SuperPolynomial& O) {
    ObservableReports out;
    out.kind = detail::observable_kind(c, O);
    out.conditions = CheckReport{"equivariant class conditions", true, {}};
    CheckReport cons{"equivariant class (mod d)", true, {}};
    if (out.kind == ElementKind::multivector) {
        if (c.hamilton())
            for (std::size_t a = 0; a < c.m(); ++a)
                out.conditions.expect_zero("[h_" + c.basis(a) + ",beta]", "beta", schouten_bracket(c.lift(c.action.h[a]), O));
        else
            for (std::size_t a = 0; a < c.m(); ++a)
                out.conditions.expect_zero("l(" + c.basis(a) + ") beta", "beta", c.l[a](O));
        out.conditions.expect_zero("q beta", "beta", schouten_bracket(c.varpi_element(), O));
        if (!out.conditions.passed) return out;
        for (std::size_t a = 0; a < c.m(); ++a) {
            cons.expect_zero("j(" + c.basis(a) + ") beta", "beta", c.j[a](O));
            cons.expect_zero("l(" + c.basis(a) + ") beta", "beta", c.l[a](O));
        }
        cons.expect_zero("s beta - d beta", "beta", c.s(O) - c.d(O));
    } else {
        require_hamilton(c, "form observables");
        SuperPolynomial dO = c.d(O);
        out.conditions.expect_zero("k d sigma", "sigma", c.k(dO));
        if (!out.conditions.passed) return out;
        for (std::size_t a = 0; a < c.m(); ++a) {
            cons.expect_zero("j(" + c.basis(a) + ") sigma", "sigma", c.j[a](O));
            cons.expect_zero("l(" + c.basis(a) + ") sigma - d i(v) sigma", "sigma", c.l[a](O) - c.d(c.contraction[a](O)));
        }
        cons.expect_zero("s sigma - d(sigma - h sigma)", "sigma", c.s(O) - c.d(O - c.h(O)));
    }
    out.consequences = cons;
    return out;
}

/// Multivector beta: [h_a,beta] = 0, [pi,beta] = 0, together with the identity
/// w_pi beta = d beta - [pi,beta] + [Phi_Gamma,beta]. Form sigma:
/// k_pi d sigma = 0, with w_pi sigma = d(sigma - k_pi sigma) + k_pi d sigma.
inline ObservableReports bv_observable_check(const OperationContext& c, const SuperPolynomial& O) {
    ObservableReports out;
    out.kind = detail::observable_kind(c, O);
    out.conditions = CheckReport{"BV observable conditions", true, {}};
    CheckReport ident{"BV variation identity", true, {}};
    if (out.kind == ElementKind::multivector) {
        if (c.hamilton())
            for (std::size_t a = 0; a < c.m(); ++a)
                out.conditions.expect_zero("[h_" + c.basis(a) + ",beta]", "beta", schouten_bracket(c.lift(c.action.h[a]), O));
        SuperPolynomial piO = schouten_bracket(c.pi_element(), O);
        out.conditions.expect_zero("q_pi beta", "beta", piO);
        ident.expect_zero("w_pi beta - (d beta - [pi,beta] + [Phi_Gamma,beta])", "beta",
                          c.w(O) - (c.d(O) - piO + schouten_bracket(c.Phi_Gamma(), O)));
    } else {
        SuperPolynomial dO = c.d(O);
        SuperPolynomial kd = c.k_pi(dO);
        out.conditions.expect_zero("k_pi d sigma", "sigma", kd);
        ident.expect_zero("w_pi sigma - (d(sigma - k_pi sigma) + k_pi d sigma)", "sigma", c.w(O) - (c.d(O - c.k_pi(O)) + kd));
    }
    out.consequences = ident;
    return out;
}

/// Rebuilds the operation on the fundamental generators X, Y and on the
/// Poisson generators X*, Y* and checks that the shifts
///   X* = X - varpi y,  Y*_i = Y_i - 1/2 d_i varpi^{jk} y_j y_k,
///   X~ = X* - omega,   Y~_i = Y*_i + d_i omega^j y_j
/// intertwine j(t_a), l(t_a) and s generator by generator.
inline CheckReport shift_consistency_check(const OperationContext& ctx) {
    if (!ctx.table->has(Family::poisson_form)) {
        OperationOptions opt = ctx.options;
        opt.allow_invalid = true;
        opt.with_variants = true;
        return shift_consistency_check(OperationContext::build(ctx.model, ctx.lie, ctx.action, opt));
    }
    const auto& c = ctx;
    CheckReport r{"generator shifts", true, {}};
    std::size_t N = c.n(), M = c.m();
    auto Xsi = c.indices(Family::poisson_form), Ysi = c.indices(Family::poisson_antifield_form);
    auto Xfi = c.indices(Family::fundamental_form), Yfi = c.indices(Family::fundamental_antifield_form);
    auto Xs = c.gens(Family::poisson_form), Ys = c.gens(Family::poisson_antifield_form);
    auto Xf = c.gens(Family::fundamental_form), Yf = c.gens(Family::fundamental_antifield_form);
    auto xi = c.indices(Family::coordinate), yi = c.indices(Family::antifield);
    auto gi = c.indices(Family::ghost), Gi = c.indices(Family::ghost_curvature);
    auto Xi = c.indices(Family::form), Yi = c.indices(Family::antifield_form);

    // Poisson (P) and fundamental (F) rule sets, tensored with the Weil rules.
    auto core = c.core_rules(c.varpi_lifted(), Xs, Ys);
    Derivation sP(c.table, 1, "s*"), sF(c.table, 1, "s_fund");
    std::vector<Derivation> jP, lP, jF, lF;
    for (std::size_t i = 0; i < N; ++i) {
        sP.set(xi[i], Xs[i] + core.on_x[i]);
        sP.set(Xsi[i], core.on_X[i]);
        sP.set(yi[i], Ys[i] + core.on_y[i]);
        sP.set(Ysi[i], core.on_Y[i]);
        sF.set(xi[i], Xf[i]);
        sF.set(Xfi[i], c.zero());
        sF.set(yi[i], Yf[i]);
        sF.set(Yfi[i], c.zero());
    }
    c.weil_s(sP);
    c.weil_s(sF);
    for (std::size_t a = 0; a < M; ++a) {
        Derivation jp(c.table, -1, "j*(" + c.basis(a) + ")"), jf(c.table, -1, "j_fund(" + c.basis(a) + ")");
        for (std::size_t i = 0; i < N; ++i) {
            SuperPolynomial jy = c.zero();
            for (std::size_t k = 0; k < N; ++k) jy -= c.dx(c.v(a, k), i) * c.y(k);
            jp.set(xi[i], c.zero());
            jp.set(Xsi[i], c.v(a, i));
            jp.set(yi[i], c.zero());
            jp.set(Ysi[i], jy);
            jf.set(xi[i], c.zero());
            jf.set(Xfi[i], c.v(a, i));
            jf.set(yi[i], c.zero());
            jf.set(Yfi[i], jy);
        }
        c.weil_j(jp, a);
        c.weil_j(jf, a);
        jP.push_back(jp);
        jF.push_back(jf);
        Derivation lp(c.table, 0, "l*(" + c.basis(a) + ")"), lf(c.table, 0, "l_fund(" + c.basis(a) + ")");
        c.vector_l(lp, a, Xsi, Xs, Ysi, Ys);
        c.vector_l(lf, a, Xfi, Xf, Yfi, Yf);
        c.weil_l(lp, a);
        c.weil_l(lf, a);
        lP.push_back(lp);
        lF.push_back(lf);
    }

    // equivariant -> Poisson, Poisson -> fundamental
    std::map<std::size_t, SuperPolynomial> to_poisson, to_fund;
    for (std::size_t i = 0; i < N; ++i) {
        SuperPolynomial Ysh = Ys[i], Yfh = Yf[i], Xfh = Xf[i];
        for (std::size_t jj = 0; jj < N; ++jj) {
            Ysh += c.dx(c.omega(jj), i) * c.y(jj);
            Xfh -= Rational(c.options.shift_sign) * (c.varpi(i, jj) * c.y(jj));
            for (std::size_t k = 0; k < N; ++k) Yfh -= Rational(1, 2) * (c.dx(c.varpi(jj, k), i) * c.y(jj) * c.y(k));
        }
        to_poisson.emplace(Xi[i], Xs[i] - c.omega(i));
        to_poisson.emplace(Yi[i], Ysh);
        to_fund.emplace(Xsi[i], Xfh);
        to_fund.emplace(Ysi[i], Yfh);
    }

    auto intertwine = [&](const Derivation& src, const Derivation& dst, const std::map<std::size_t, SuperPolynomial>& phi,
                          const std::vector<std::size_t>& gens, const std::string& relation) {
        for (auto g : gens) {
            SuperPolynomial image = phi.count(g) ? phi.at(g) : SuperPolynomial::generator(c.table, g);
            SuperPolynomial res = substitute_generators(src.on(g), phi) - dst(image);
            r.expect_zero(relation, (*c.table)[g].name, res);
        }
    };
    std::vector<std::size_t> eq_gens, p_gens;
    for (std::size_t i = 0; i < N; ++i) {
        for (auto g : {xi[i], Xi[i], yi[i], Yi[i]}) eq_gens.push_back(g);
        for (auto g : {xi[i], Xsi[i], yi[i], Ysi[i]}) p_gens.push_back(g);
    }
    for (std::size_t a = 0; a < M; ++a)
        for (auto g : {gi[a], Gi[a]}) {
            eq_gens.push_back(g);
            p_gens.push_back(g);
        }
    for (std::size_t a = 0; a < M; ++a) {
        intertwine(c.j[a], jP[a], to_poisson, eq_gens, "X~ shift: j(" + c.basis(a) + ")");
        intertwine(c.l[a], lP[a], to_poisson, eq_gens, "X~ shift: l(" + c.basis(a) + ")");
        intertwine(jP[a], jF[a], to_fund, p_gens, "X* shift: j(" + c.basis(a) + ")");
        intertwine(lP[a], lF[a], to_fund, p_gens, "X* shift: l(" + c.basis(a) + ")");
    }
    intertwine(c.s, sP, to_poisson, eq_gens, "X~ shift: s");
    intertwine(sP, sF, to_fund, p_gens, "X* shift: s");
    return r;
}

/// In a context with pi = varpi and a Casimir action, j(t_a) and l(t_a)
/// vanish on x, X~, y, Y~; on the Weil generators only j(t_a) gamma^b = delta
/// and the coadjoint l(t_a) survive.
inline CheckReport degeneration_check(const OperationContext& c) {
    CheckReport r{"trivialised action", true, {}};
    std::vector<std::size_t> gens;
    for (auto f : {Family::coordinate, Family::form, Family::antifield, Family::antifield_form})
        for (auto g : c.indices(f)) gens.push_back(g);
    for (std::size_t a = 0; a < c.m(); ++a) {
        for (auto g : gens) {
            r.expect_zero("j(" + c.basis(a) + ")", (*c.table)[g].name, c.j[a].on(g));
            r.expect_zero("l(" + c.basis(a) + ")", (*c.table)[g].name, c.l[a].on(g));
        }
    }
    return r;
}

}  // namespace psm
