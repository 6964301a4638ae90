#pragma once

// De Rham superfields on a 2D chart (z1, z2), affine superchains with exact
// rational vertices, exact integration, and the evaluation of generator
// polynomials on field configurations.
//
// Sign ledger. A superfield of intrinsic degree k is
//   psi0 + zeta^a psi1_a + zeta^1 zeta^2 psi2
// with odd zeta^1, zeta^2 in that order. Components of ghost number k - p
// must be even, so a superfield is an ordinary polynomial differential form
// and the product is the wedge product:
//   (AB)2 = A0 B2 + A2 B0 + A1_1 B1_2 - A1_2 B1_1.
// Integration pairs zeta^1 zeta^2 with the standard orientation dz1 dz2.
// With these choices the n = 1 action of x -> z2, y -> z1 zeta^1 over the
// unit square is +1/2.

#include "psm/operation.hpp"
#include "psm/polynomial.hpp"

#include <array>
#include <algorithm>
#include <istream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

namespace psm {

inline VariableSetPtr chart_variables() {
    static VariableSetPtr v = make_variables({"z1", "z2"});
    return v;
}

struct Superfield {
    int degree = 0;
    Polynomial psi0, psi2;
    std::array<Polynomial, 2> psi1;

    explicit Superfield(int k = 0)
        : degree(k), psi0(chart_variables()), psi2(chart_variables()), psi1{Polynomial(chart_variables()), Polynomial(chart_variables())} {}

    static Superfield make(int k, const Polynomial& p0, const Polynomial& p1a, const Polynomial& p1b, const Polynomial& p2) {
        Superfield s(k);
        s.psi0 = p0.embed(chart_variables());
        s.psi1 = {p1a.embed(chart_variables()), p1b.embed(chart_variables())};
        s.psi2 = p2.embed(chart_variables());
        s.validate();
        return s;
    }
    static Superfield parse(int k, const std::string& p0, const std::string& p1a, const std::string& p1b, const std::string& p2) {
        auto v = chart_variables();
        return make(k, parse_expression(p0, v), parse_expression(p1a, v), parse_expression(p1b, v), parse_expression(p2, v));
    }
    static Superfield constant(int k, const Rational& c) {
        Superfield s(k);
        s.psi0 = Polynomial::constant(chart_variables(), c);
        s.validate();
        return s;
    }

    bool component_allowed(int p) const { return (degree - p) % 2 == 0; }
    void validate() const {
        if (!component_allowed(0) && !psi0.is_zero())
            throw std::invalid_argument("degree " + std::to_string(degree) + " superfield cannot have a 0-form component");
        if (!component_allowed(1) && !(psi1[0].is_zero() && psi1[1].is_zero()))
            throw std::invalid_argument("degree " + std::to_string(degree) + " superfield cannot have a 1-form component");
        if (!component_allowed(2) && !psi2.is_zero())
            throw std::invalid_argument("degree " + std::to_string(degree) + " superfield cannot have a 2-form component");
    }
    bool is_zero() const { return psi0.is_zero() && psi1[0].is_zero() && psi1[1].is_zero() && psi2.is_zero(); }

    // zero lies in every degree
    bool operator==(const Superfield& o) const {
        if (is_zero() && o.is_zero()) return true;
        return degree == o.degree && psi0 == o.psi0 && psi1 == o.psi1 && psi2 == o.psi2;
    }
    Superfield& operator+=(const Superfield& o) {
        psi0 += o.psi0;
        psi1[0] += o.psi1[0];
        psi1[1] += o.psi1[1];
        psi2 += o.psi2;
        return *this;
    }
    friend Superfield operator*(const Superfield& a, const Superfield& b) {
        Superfield r(a.degree + b.degree);
        r.psi0 = a.psi0 * b.psi0;
        r.psi1[0] = a.psi0 * b.psi1[0] + a.psi1[0] * b.psi0;
        r.psi1[1] = a.psi0 * b.psi1[1] + a.psi1[1] * b.psi0;
        r.psi2 = a.psi0 * b.psi2 + a.psi2 * b.psi0 + a.psi1[0] * b.psi1[1] - a.psi1[1] * b.psi1[0];
        return r;
    }
    friend Superfield operator*(const Rational& c, const Superfield& a) {
        Superfield r(a.degree);
        r.psi0 = c * a.psi0;
        r.psi1 = {c * a.psi1[0], c * a.psi1[1]};
        r.psi2 = c * a.psi2;
        return r;
    }

    std::string to_string() const {
        return "deg " + std::to_string(degree) + ": (" + psi0.to_string() + "; " + psi1[0].to_string() + ", " + psi1[1].to_string() +
               "; " + psi2.to_string() + ")";
    }
};

/// d = zeta^a d/dz^a
inline Superfield superfield_d(const Superfield& s) {
    Superfield r(s.degree + 1);
    r.psi1 = {s.psi0.partial("z1"), s.psi0.partial("z2")};
    r.psi2 = s.psi1[1].partial("z1") - s.psi1[0].partial("z2");
    return r;
}

// Chains.

using Point = std::array<Rational, 2>;

struct Simplex {
    std::vector<Point> vertices;  // 1, 2 or 3 points
    int dimension() const { return static_cast<int>(vertices.size()) - 1; }
    bool operator<(const Simplex& o) const { return vertices < o.vertices; }
    bool operator==(const Simplex& o) const { return vertices == o.vertices; }
};

/// Integer combinations of points, segments and triangles, kept in canonical
/// form: sorted vertices (orientation absorbed into the weight), no zero
/// weights, simplices with a repeated vertex dropped.
class Superchain {
public:
    Superchain() = default;

    void add(std::vector<Point> vertices, long weight = 1) {
        if (vertices.empty() || vertices.size() > 3) throw std::invalid_argument("simplices have 1 to 3 vertices");
        // sort with sign of the permutation
        int sign = 1;
        for (std::size_t i = 0; i < vertices.size(); ++i)
            for (std::size_t j = 0; j + 1 < vertices.size() - i; ++j)
                if (vertices[j + 1] < vertices[j]) {
                    std::swap(vertices[j], vertices[j + 1]);
                    sign = -sign;
                }
        for (std::size_t i = 0; i + 1 < vertices.size(); ++i)
            if (vertices[i] == vertices[i + 1]) return;
        auto& w = terms_[Simplex{vertices}];
        w += sign * weight;
        if (w == 0) terms_.erase(Simplex{vertices});
    }
    void point(const Point& p, long w = 1) { add({p}, w); }
    void segment(const Point& p, const Point& q, long w = 1) { add({p, q}, w); }
    void triangle(const Point& p, const Point& q, const Point& r, long w = 1) { add({p, q, r}, w); }

    const std::map<Simplex, long>& terms() const { return terms_; }
    bool empty() const { return terms_.empty(); }
    bool pure(int dim) const {
        for (const auto& [s, w] : terms_)
            if (s.dimension() != dim) return false;
        return true;
    }
    Superchain part(int dim) const {
        Superchain c;
        for (const auto& [s, w] : terms_)
            if (s.dimension() == dim) c.terms_.emplace(s, w);
        return c;
    }
    Superchain& operator+=(const Superchain& o) {
        for (const auto& [s, w] : o.terms_) add(s.vertices, w);
        return *this;
    }
    friend Superchain operator+(Superchain a, const Superchain& b) { return a += b; }
    friend Superchain operator-(Superchain a, const Superchain& b) {
        for (const auto& [s, w] : b.terms_) a.add(s.vertices, -w);
        return a;
    }
    bool operator==(const Superchain& o) const { return terms_ == o.terms_; }

    static Rational area2(const Point& a, const Point& b, const Point& c) {
        return (b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]);
    }

    static Superchain unit_square() {
        Superchain c;
        c.triangle({0, 0}, {1, 0}, {1, 1});
        c.triangle({0, 0}, {1, 1}, {0, 1});
        return c;
    }

private:
    std::map<Simplex, long> terms_;
};

/// (dC)_0 = d C_1, (dC)_1 = d C_2, (dC)_2 = 0
inline Superchain boundary(const Superchain& c) {
    Superchain r;
    for (const auto& [s, w] : c.terms()) {
        const auto& v = s.vertices;
        if (s.dimension() == 1) {
            r.point(v[1], w);
            r.point(v[0], -w);
        } else if (s.dimension() == 2) {
            r.segment(v[1], v[2], w);
            r.segment(v[0], v[2], -w);
            r.segment(v[0], v[1], w);
        }
    }
    return r;
}

inline bool is_cycle(const Superchain& c) { return boundary(c).empty(); }

namespace detail {

/// a! b! / (a + b + 2)!, the integral of s^a t^b over the standard simplex.
inline Rational simplex_moment(unsigned a, unsigned b) {
    mpz_class fa, fb, fn;
    mpz_fac_ui(fa.get_mpz_t(), a);
    mpz_fac_ui(fb.get_mpz_t(), b);
    mpz_fac_ui(fn.get_mpz_t(), a + b + 2);
    Rational r(mpz_class(fa * fb), fn);
    r.canonicalize();
    return r;
}

inline VariableSetPtr simplex_variables() {
    static VariableSetPtr v = make_variables({"s", "t"});
    return v;
}

}  // namespace detail

inline Rational integrate_segment(const std::array<Polynomial, 2>& psi1, const Point& p, const Point& q) {
    auto st = detail::simplex_variables();
    auto s = Polynomial::variable(st, "s");
    std::map<std::string, Polynomial> along{{"z1", Polynomial::constant(st, p[0]) + (q[0] - p[0]) * s},
                                            {"z2", Polynomial::constant(st, p[1]) + (q[1] - p[1]) * s}};
    Polynomial f = (q[0] - p[0]) * psi1[0].substitute(along, st) + (q[1] - p[1]) * psi1[1].substitute(along, st);
    Rational r = 0;
    for (const auto& [e, c] : f.terms()) r += c / Rational(e[0] + 1);
    return r;
}

inline Rational integrate_triangle(const Polynomial& psi2, const Point& a, const Point& b, const Point& c) {
    auto st = detail::simplex_variables();
    auto s = Polynomial::variable(st, "s"), t = Polynomial::variable(st, "t");
    std::map<std::string, Polynomial> map{
        {"z1", Polynomial::constant(st, a[0]) + (b[0] - a[0]) * s + (c[0] - a[0]) * t},
        {"z2", Polynomial::constant(st, a[1]) + (b[1] - a[1]) * s + (c[1] - a[1]) * t}};
    Polynomial f = psi2.substitute(map, st);
    Rational r = 0;
    for (const auto& [e, coef] : f.terms()) r += coef * detail::simplex_moment(e[0], e[1]);
    return Superchain::area2(a, b, c) * r;
}

/// Points pair with psi0, segments with psi1, triangles with psi2.
inline Rational integrate(const Superfield& f, const Superchain& c) {
    Rational total = 0;
    for (const auto& [s, w] : c.terms()) {
        const auto& v = s.vertices;
        Rational x;
        switch (s.dimension()) {
            case 0: x = f.psi0.evaluate({{"z1", v[0][0]}, {"z2", v[0][1]}}); break;
            case 1: x = integrate_segment(f.psi1, v[0], v[1]); break;
            default: x = integrate_triangle(f.psi2, v[0], v[1], v[2]); break;
        }
        total += Rational(w) * x;
    }
    return total;
}

inline CheckReport stokes_check(const Superfield& f, const Superchain& c) {
    CheckReport r{"stokes", true, {}};
    Rational lhs = integrate(superfield_d(f), c), rhs = integrate(f, boundary(c));
    if (lhs != rhs) r.fail("int_C dPsi - int_dC Psi", "chain", to_string(lhs - rhs));
    return r;
}

// Chain files: one simplex per line, optional leading integer weight,
//   [w] point z1 z2 | [w] segment z1 z2 z1' z2' | [w] triangle z1 z2 z1' z2' z1'' z2''
// '#' starts a comment.

inline Superchain parse_chain(std::istream& in) {
    Superchain c;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (auto h = line.find('#'); h != std::string::npos) line.erase(h);
        std::istringstream ls(line);
        std::vector<std::string> tok;
        for (std::string t; ls >> t;) tok.push_back(t);
        if (tok.empty()) continue;
        auto fail = [&](const std::string& msg) { throw ParseError("line " + std::to_string(lineno) + ": " + msg, 0); };
        long weight = 1;
        std::size_t k = 0;
        if (tok[0] != "point" && tok[0] != "segment" && tok[0] != "triangle") {
            try {
                std::size_t used = 0;
                weight = std::stol(tok[0], &used);
                if (used != tok[0].size()) fail("bad weight '" + tok[0] + "'");
            } catch (const std::logic_error&) {
                fail("bad weight '" + tok[0] + "'");
            }
            k = 1;
        }
        if (k >= tok.size()) fail("missing simplex kind");
        std::size_t n = tok[k] == "point" ? 1 : tok[k] == "segment" ? 2 : tok[k] == "triangle" ? 3 : 0;
        if (n == 0) fail("unknown simplex kind '" + tok[k] + "'");
        if (tok.size() != k + 1 + 2 * n) fail(tok[k] + " needs " + std::to_string(2 * n) + " coordinates");
        std::vector<Point> v;
        for (std::size_t i = 0; i < n; ++i) {
            try {
                v.push_back({parse_rational(tok[k + 1 + 2 * i]), parse_rational(tok[k + 2 + 2 * i])});
            } catch (const std::invalid_argument& e) {
                fail(e.what());
            }
        }
        c.add(v, weight);
    }
    return c;
}

inline Superchain parse_chain(const std::string& text) {
    std::istringstream in(text);
    return parse_chain(in);
}

inline std::string format_chain(const Superchain& c) {
    std::ostringstream os;
    for (const auto& [s, w] : c.terms()) {
        os << w << (s.dimension() == 0 ? " point" : s.dimension() == 1 ? " segment" : " triangle");
        for (const auto& p : s.vertices) os << " " << to_string(p[0]) << " " << to_string(p[1]);
        os << "\n";
    }
    return os.str();
}

// Field configurations.

/// Superfields for x^i, y_i and gamma^a; X~, Y~ and Gamma are the de Rham
/// differentials of these. Parameters take rational values.
struct FieldConfiguration {
    std::map<std::string, Superfield> fields;  // keyed by generator name (x1, y_x1, g_t1)
    std::map<std::string, Rational> parameters;

    void assign(const std::string& generator, const Superfield& f) { fields.insert_or_assign(generator, f); }
};

namespace detail {

inline Superfield generator_image(const GeneratorTable& t, std::size_t g, const FieldConfiguration& cfg) {
    const Generator& gen = t[g];
    auto lookup = [&](Family base, int expected_degree) {
        const std::string& name = t[t.of(base, gen.index)].name;
        auto it = cfg.fields.find(name);
        if (it == cfg.fields.end()) throw std::invalid_argument("no superfield assigned to " + name);
        if (it->second.degree != expected_degree)
            throw std::invalid_argument("superfield for " + name + " must have degree " + std::to_string(expected_degree));
        return it->second;
    };
    switch (gen.family) {
        case Family::coordinate: return lookup(Family::coordinate, 0);
        case Family::antifield: return lookup(Family::antifield, 1);
        case Family::ghost: return lookup(Family::ghost, 1);
        case Family::form: return superfield_d(lookup(Family::coordinate, 0));
        case Family::antifield_form: return superfield_d(lookup(Family::antifield, 1));
        case Family::ghost_curvature: return superfield_d(lookup(Family::ghost, 1));
        case Family::parameter: {
            auto it = cfg.parameters.find(gen.name);
            if (it == cfg.parameters.end()) throw std::invalid_argument("no value for parameter " + gen.name);
            return Superfield::constant(0, it->second);
        }
        default: throw std::invalid_argument("generator " + gen.name + " has no worldsheet realization");
    }
}

}  // namespace detail

/// Replaces every generator by its superfield and multiplies out.
inline Superfield evaluate_configuration(const SuperPolynomial& element, const FieldConfiguration& cfg) {
    if (element.is_zero()) return Superfield(0);
    auto deg = element.degree();
    if (!deg) throw std::invalid_argument("element is not homogeneous");
    Superfield r(*deg);
    const auto& t = *element.table();
    std::map<std::size_t, Superfield> cache;
    for (const auto& [e, c] : element.terms()) {
        Superfield term = Superfield::constant(0, c);
        for (std::size_t i = 0; i < e.size(); ++i) {
            if (!e[i]) continue;
            auto it = cache.find(i);
            if (it == cache.end()) it = cache.emplace(i, detail::generator_image(t, i, cfg)).first;
            for (int k = 0; k < e[i]; ++k) term = term * it->second;
        }
        term.degree = *deg;
        r += term;
    }
    return r;
}

/// Integral of the top component of the Lagrangian over a 2-chain.
inline Rational action_value(const OperationContext& ctx, const FieldConfiguration& cfg, const Superchain& c) {
    if (!c.pure(2)) throw std::invalid_argument("the action is integrated over a chain of triangles");
    return integrate(evaluate_configuration(lagrangian_element(ctx), cfg), c);
}

inline Rational pair_observable(const SuperPolynomial& O, const FieldConfiguration& cfg, const Superchain& z) {
    if (!is_cycle(z)) throw std::invalid_argument("observables are paired with supercycles only");
    return integrate(evaluate_configuration(O, cfg), z);
}

// Bundled chains.

namespace chains {

inline Superchain unit_square() { return Superchain::unit_square(); }

/// Fan of four triangles around (1/2, 1/3) with a slanted outer boundary.
inline Superchain triangle_fan() {
    Superchain c;
    Point o{Rational(1, 2), Rational(1, 3)};
    std::vector<Point> rim{{0, 0}, {2, 0}, {Rational(3, 2), Rational(5, 4)}, {Rational(-1, 2), 1}};
    for (std::size_t i = 0; i < rim.size(); ++i) c.triangle(o, rim[i], rim[(i + 1) % rim.size()]);
    return c;
}

inline Superchain square_loop() { return boundary(unit_square()); }

/// Boundary of a 3-simplex with planar vertices: a closed 2-chain.
inline Superchain flat_tetrahedron() {
    Point p0{0, 0}, p1{3, 0}, p2{1, 2}, p3{Rational(1, 2), Rational(1, 2)};
    Superchain c;
    c.triangle(p1, p2, p3);
    c.triangle(p0, p2, p3, -1);
    c.triangle(p0, p1, p3);
    c.triangle(p0, p1, p2, -1);
    return c;
}

/// A point, a loop and a closed 2-chain together.
inline Superchain mixed_cycle() {
    Superchain c = flat_tetrahedron();
    c += boundary(triangle_fan());
    c.point({Rational(1, 2), 0}, 2);
    return c;
}

inline std::map<std::string, Superchain> all() {
    return {{"unit_square", unit_square()},
            {"triangle_fan", triangle_fan()},
            {"square_loop", square_loop()},
            {"flat_tetrahedron", flat_tetrahedron()},
            {"mixed_cycle", mixed_cycle()}};
}

}  // namespace chains

}  // namespace psm
