#pragma once

// Outcome of a named identity check.

#include "psm/supergraded.hpp"

#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace psm {

struct Witness {
    std::string relation;  // e.g. "[s,s]" or "pi^{ij} d_j f"
    std::string subject;   // generator or index slot the residual belongs to
    std::string residual;  // printed in the expression grammar
    std::optional<SuperPolynomial> value;
};

struct CheckReport {
    std::string name;
    bool passed = true;
    std::vector<Witness> witnesses;

    void fail(std::string relation, std::string subject, const SuperPolynomial& residual) {
        passed = false;
        witnesses.push_back({std::move(relation), std::move(subject), residual.to_string(), residual});
    }
    void fail(std::string relation, std::string subject, std::string residual) {
        passed = false;
        witnesses.push_back({std::move(relation), std::move(subject), std::move(residual), std::nullopt});
    }
    /// Records `residual` as a failure unless it is zero.
    void expect_zero(const std::string& relation, const std::string& subject, const SuperPolynomial& residual) {
        if (!residual.is_zero()) fail(relation, subject, residual);
    }
    void absorb(const CheckReport& other) {
        if (!other.passed) passed = false;
        for (const auto& w : other.witnesses) {
            Witness copy = w;
            copy.relation = other.name + ": " + w.relation;
            witnesses.push_back(std::move(copy));
        }
    }
};

inline bool all_passed(const std::vector<CheckReport>& reports) {
    for (const auto& r : reports)
        if (!r.passed) return false;
    return true;
}

inline std::ostream& operator<<(std::ostream& os, const CheckReport& r) {
    os << (r.passed ? "PASS " : "FAIL ") << r.name << "\n";
    for (const auto& w : r.witnesses)
        os << "  " << w.relation << " [" << w.subject << "] = " << w.residual << "\n";
    return os;
}

}  // namespace psm
