#pragma once

// Test-only oracles. They work on plain Polynomials and dense rational
// matrices and never call the Schouten bracket or the RREF in the library.

#include "psm/poisson.hpp"

#include <random>

namespace psm {

// readable gtest failure output
inline void PrintTo(const Polynomial& p, std::ostream* os) { *os << p.to_string(); }
inline void PrintTo(const SuperPolynomial& p, std::ostream* os) { *os << p.to_string(); }

}  // namespace psm

namespace oracle {

using psm::Matrix;
using psm::Polynomial;
using psm::Rational;

inline Rational ratio(long n, long d) {
    Rational r(n, d);
    r.canonicalize();
    return r;
}

inline Polynomial d(const Polynomial& p, const std::vector<std::string>& coords, std::size_t i) { return p.partial(coords[i]); }

/// a^{il} d_l b^{jk} + cyclic(i,j,k)
inline Polynomial cyclic(const Matrix& a, const Matrix& b, std::size_t i, std::size_t j, std::size_t k,
                         const std::vector<std::string>& coords) {
    Polynomial s(a[0][0].variables());
    for (std::size_t l = 0; l < a.size(); ++l)
        s += a[i][l] * d(b[j][k], coords, l) + a[j][l] * d(b[k][i], coords, l) + a[k][l] * d(b[i][j], coords, l);
    return s;
}

inline Polynomial jacobiator(const Matrix& m, std::size_t i, std::size_t j, std::size_t k, const std::vector<std::string>& coords) {
    return cyclic(m, m, i, j, k, coords);
}

/// v^k d_k m^{ij} - d_k v^i m^{kj} - d_k v^j m^{ik}
inline Polynomial lie_derivative(const std::vector<Polynomial>& v, const Matrix& m, std::size_t i, std::size_t j,
                                 const std::vector<std::string>& coords) {
    Polynomial s(m[0][0].variables());
    for (std::size_t k = 0; k < m.size(); ++k)
        s += v[k] * d(m[i][j], coords, k) - d(v[i], coords, k) * m[k][j] - d(v[j], coords, k) * m[i][k];
    return s;
}

/// Rank of a dense rational matrix by plain Gaussian elimination.
inline std::size_t rank(std::vector<std::vector<Rational>> a) {
    std::size_t r = 0, cols = a.empty() ? 0 : a[0].size();
    for (std::size_t c = 0; c < cols && r < a.size(); ++c) {
        std::size_t p = r;
        while (p < a.size() && a[p][c] == 0) ++p;
        if (p == a.size()) continue;
        std::swap(a[p], a[r]);
        for (std::size_t q = r + 1; q < a.size(); ++q) {
            if (a[q][c] == 0) continue;
            Rational f = a[q][c] / a[r][c];
            for (std::size_t k = c; k < cols; ++k) a[q][k] -= f * a[r][k];
        }
        ++r;
    }
    return r;
}

/// All monomials of degree <= dmax in the coordinates, as exponent maps.
inline std::vector<std::map<std::string, int>> monomials(const std::vector<std::string>& coords, int dmax) {
    std::vector<std::map<std::string, int>> out{{}};
    for (const auto& x : coords) {
        std::vector<std::map<std::string, int>> next;
        for (const auto& m : out) {
            int used = 0;
            for (const auto& [_, e] : m) used += e;
            for (int e = 0; used + e <= dmax; ++e) {
                auto mm = m;
                if (e) mm[x] = e;
                next.push_back(mm);
            }
        }
        out = next;
    }
    return out;
}

inline Polynomial monomial(const psm::VariableSetPtr& vars, const std::map<std::string, int>& m) {
    Polynomial p = Polynomial::constant(vars, 1);
    for (const auto& [x, e] : m) p = p * Polynomial::variable(vars, x).pow(e);
    return p;
}

/// Dimension of the Casimir space of degree <= dmax, from the rank of the
/// dense system m^{ij} d_j f = 0 sampled at random rational points (random
/// parameter values included).
inline std::size_t casimir_dimension(const Matrix& m, const psm::VariableSetPtr& vars, int dmax, unsigned seed = 1) {
    auto coords = vars->coordinates();
    auto monos = monomials(coords, dmax);
    std::mt19937 rng(seed);
    std::uniform_int_distribution<int> num(-9, 9), den(1, 4);
    std::vector<std::vector<Rational>> rows;
    std::size_t points = 2 * monos.size() + 4;
    for (std::size_t p = 0; p < points; ++p) {
        std::map<std::string, Rational> at;
        for (const auto& n : vars->names()) at[n] = ratio(num(rng), den(rng));
        for (std::size_t i = 0; i < m.size(); ++i) {
            std::vector<Rational> row;
            for (const auto& mono : monos) {
                Polynomial f = monomial(vars, mono);
                Polynomial c(vars);
                for (std::size_t j = 0; j < m.size(); ++j) c += m[i][j] * f.partial(coords[j]);
                row.push_back(c.evaluate(at));
            }
            rows.push_back(row);
        }
    }
    return monos.size() - rank(rows);
}

/// Coefficient vectors of polynomials over the monomial list.
inline std::vector<std::vector<Rational>> coefficient_rows(const std::vector<Polynomial>& ps, const std::vector<std::string>& coords,
                                                           int dmax) {
    auto monos = monomials(coords, dmax);
    std::vector<std::vector<Rational>> rows;
    for (const auto& p : ps) {
        std::vector<Rational> row;
        for (const auto& mono : monos) {
            psm::Exponents e(p.variables()->size(), 0);
            for (const auto& [x, k] : mono) e[p.variables()->index_of(x)] = static_cast<std::uint16_t>(k);
            auto it = p.terms().find(e);
            row.push_back(it == p.terms().end() ? Rational(0) : it->second);
        }
        rows.push_back(row);
    }
    return rows;
}

inline Polynomial random_poly(std::mt19937& rng, const psm::VariableSetPtr& v, int max_degree, int max_terms = 4) {
    std::uniform_int_distribution<int> coef(-4, 4), den(1, 3), deg(0, max_degree), nterms(0, max_terms);
    std::vector<std::size_t> coords;
    for (std::size_t i = 0; i < v->size(); ++i)
        if ((*v)[i].kind == psm::VariableKind::coordinate) coords.push_back(i);
    std::uniform_int_distribution<std::size_t> pick(0, coords.size() - 1);
    Polynomial p(v);
    int n = nterms(rng);
    for (int k = 0; k < n; ++k) {
        psm::Exponents e(v->size(), 0);
        int dd = deg(rng);
        for (int j = 0; j < dd; ++j) e[coords[pick(rng)]] += 1;
        p.add_term(e, ratio(coef(rng), den(rng)));
    }
    return p;
}

}  // namespace oracle
