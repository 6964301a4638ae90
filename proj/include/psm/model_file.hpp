#pragma once

// .psm model files: sectioned key = value text.
//
//   [model]    name, coordinates, parameters, dimension, description, control
//   [varpi]    xi.xj = "expr"
//   [theta]    xi.xj = "expr"
//   [liealg]   basis = t1, t2 ; c.ta.tb.tc = "rational"
//   [action]   kind = hamilton|poisson ; ta = "expr" | ta.xi = "expr"
//
// Unlisted bivector entries are 0 and xj.xi is filled in as -(xi.xj).

#include "psm/gallery.hpp"

#include <fstream>
#include <set>
#include <sstream>

namespace psm {

class ModelFileError : public std::runtime_error {
public:
    ModelFileError(std::size_t line, std::size_t column, const std::string& message)
        : std::runtime_error("line " + std::to_string(line) + ", column " + std::to_string(column) + ": " + message),
          line_(line),
          column_(column) {}
    std::size_t line() const { return line_; }
    std::size_t column() const { return column_; }

private:
    std::size_t line_, column_;
};

namespace detail {

struct Entry {
    std::size_t line = 0;
    std::size_t key_column = 1;
    std::size_t value_column = 1;  // first character of the value text (inside quotes)
    std::string key;
    std::string value;
};

inline std::string trim(const std::string& s) {
    auto b = s.find_first_not_of(" \t\r");
    if (b == std::string::npos) return "";
    return s.substr(b, s.find_last_not_of(" \t\r") - b + 1);
}

inline std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char ch : s) {
        if (ch == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += ch;
        }
    }
    out.push_back(cur);
    return out;
}

inline std::vector<std::string> name_list(const Entry& e) {
    std::vector<std::string> out;
    if (trim(e.value).empty()) return out;
    for (auto& part : split(e.value, ',')) {
        auto n = trim(part);
        if (!is_identifier(n)) throw ModelFileError(e.line, e.value_column, "invalid name '" + n + "'");
        out.push_back(n);
    }
    return out;
}

inline std::map<std::string, std::vector<Entry>> read_sections(std::istream& in) {
    static const std::set<std::string> known{"model", "varpi", "theta", "liealg", "action"};
    std::map<std::string, std::vector<Entry>> sections;
    std::string line, current;
    std::size_t n = 0;
    while (std::getline(in, line)) {
        ++n;
        std::string body;
        bool quoted = false;
        for (char ch : line) {
            if (ch == '"') quoted = !quoted;
            if (ch == '#' && !quoted) break;
            body += ch;
        }
        if (trim(body).empty()) continue;
        auto first = body.find_first_not_of(" \t");
        if (body[first] == '[') {
            auto close = body.find(']', first);
            if (close == std::string::npos) throw ModelFileError(n, first + 1, "unterminated section header");
            current = trim(body.substr(first + 1, close - first - 1));
            if (!known.count(current)) throw ModelFileError(n, first + 2, "unknown section [" + current + "]");
            if (!trim(body.substr(close + 1)).empty()) throw ModelFileError(n, close + 2, "text after section header");
            if (sections.count(current)) throw ModelFileError(n, first + 1, "section [" + current + "] repeated");
            sections[current];
            continue;
        }
        if (current.empty()) throw ModelFileError(n, first + 1, "entry outside of any section");
        auto eq = body.find('=');
        if (eq == std::string::npos) throw ModelFileError(n, first + 1, "expected key = value");
        Entry e;
        e.line = n;
        e.key = trim(body.substr(0, eq));
        e.key_column = first + 1;
        if (e.key.empty()) throw ModelFileError(n, first + 1, "empty key");
        auto vstart = body.find_first_not_of(" \t", eq + 1);
        if (vstart == std::string::npos) {
            e.value_column = body.size() + 1;
        } else if (body[vstart] == '"') {
            auto close = body.find('"', vstart + 1);
            if (close == std::string::npos) throw ModelFileError(n, vstart + 1, "unterminated string");
            if (!trim(body.substr(close + 1)).empty()) throw ModelFileError(n, close + 2, "text after closing quote");
            e.value = body.substr(vstart + 1, close - vstart - 1);
            e.value_column = vstart + 2;
        } else {
            e.value = trim(body.substr(vstart));
            e.value_column = vstart + 1;
        }
        for (const auto& other : sections[current])
            if (other.key == e.key) throw ModelFileError(n, first + 1, "duplicate key '" + e.key + "' in [" + current + "]");
        sections[current].push_back(e);
    }
    return sections;
}

inline Polynomial parse_value(const Entry& e, const VariableSetPtr& vars) {
    try {
        return parse_expression(e.value, vars);
    } catch (const ParseError& err) {
        throw ModelFileError(e.line, e.value_column + err.position(), err.message());
    } catch (const std::invalid_argument& err) {
        throw ModelFileError(e.line, e.value_column, err.what());
    }
}

inline void read_bivector(const std::vector<Entry>& entries, PoissonModel& m, Matrix& target) {
    std::set<std::pair<std::size_t, std::size_t>> seen;
    for (const auto& e : entries) {
        auto parts = split(e.key, '.');
        if (parts.size() != 2) throw ModelFileError(e.line, e.key_column, "bivector keys have the form xi.xj");
        std::size_t idx[2];
        for (int k = 0; k < 2; ++k) {
            auto i = m.vars->find(parts[k]);
            if (!i || (*m.vars)[*i].kind != VariableKind::coordinate)
                throw ModelFileError(e.line, e.key_column, "unknown coordinate '" + parts[k] + "'");
            idx[k] = *i;
        }
        if (idx[0] == idx[1]) throw ModelFileError(e.line, e.key_column, "diagonal entry " + e.key);
        auto key = std::minmax(idx[0], idx[1]);
        if (!seen.insert(key).second) throw ModelFileError(e.line, e.key_column, "entry " + e.key + " given twice");
        PoissonModel::set_entry(target, idx[0], idx[1], parse_value(e, m.vars));
    }
}

inline const Entry* find_entry(const std::vector<Entry>& entries, const std::string& key) {
    for (const auto& e : entries)
        if (e.key == key) return &e;
    return nullptr;
}

}  // namespace detail

inline ModelBundle load_model(std::istream& in) {
    auto sections = detail::read_sections(in);
    if (!sections.count("model")) throw ModelFileError(1, 1, "missing [model] section");
    const auto& head = sections.at("model");
    static const std::set<std::string> model_keys{"name", "coordinates", "parameters", "dimension", "description", "control"};
    for (const auto& e : head)
        if (!model_keys.count(e.key)) throw ModelFileError(e.line, e.key_column, "unknown key '" + e.key + "' in [model]");
    auto* name = detail::find_entry(head, "name");
    auto* coords = detail::find_entry(head, "coordinates");
    if (!name || name->value.empty()) throw ModelFileError(head.empty() ? 1 : head.front().line, 1, "[model] needs a name");
    if (!coords) throw ModelFileError(name->line, 1, "[model] needs coordinates");
    auto coordinate_names = detail::name_list(*coords);
    if (coordinate_names.empty()) throw ModelFileError(coords->line, coords->value_column, "at least one coordinate is required");
    std::vector<std::string> parameter_names;
    if (auto* p = detail::find_entry(head, "parameters")) parameter_names = detail::name_list(*p);

    ModelBundle b;
    try {
        b.model = PoissonModel(name->value, coordinate_names, parameter_names);
    } catch (const std::invalid_argument& err) {
        throw ModelFileError(coords->line, coords->value_column, err.what());
    }
    if (auto* d = detail::find_entry(head, "dimension")) {
        std::size_t dim = 0;
        try {
            dim = std::stoul(d->value);
        } catch (const std::exception&) {
            throw ModelFileError(d->line, d->value_column, "dimension must be a non-negative integer");
        }
        if (dim != coordinate_names.size())
            throw ModelFileError(d->line, d->value_column,
                                 "dimension mismatch: " + std::to_string(dim) + " declared, " +
                                     std::to_string(coordinate_names.size()) + " coordinates");
    }
    if (auto* d = detail::find_entry(head, "description")) b.description = d->value;
    b.valid = true;
    if (auto* c = detail::find_entry(head, "control")) {
        if (c->value == "negative") b.valid = false;
        else if (c->value != "none") throw ModelFileError(c->line, c->value_column, "control is 'negative' or 'none'");
    }

    if (sections.count("varpi")) detail::read_bivector(sections.at("varpi"), b.model, b.model.varpi);
    if (sections.count("theta")) detail::read_bivector(sections.at("theta"), b.model, b.model.theta);

    if (sections.count("liealg")) {
        const auto& lie = sections.at("liealg");
        auto* basis = detail::find_entry(lie, "basis");
        if (!basis) throw ModelFileError(lie.empty() ? 1 : lie.front().line, 1, "[liealg] needs a basis");
        b.lie = LieAlgebra(detail::name_list(*basis));
        std::set<std::string> seen_names;
        for (const auto& t : b.lie.basis) {
            if (!seen_names.insert(t).second) throw ModelFileError(basis->line, basis->value_column, "duplicate basis element " + t);
            if (b.model.vars->find(t)) throw ModelFileError(basis->line, basis->value_column, "basis element " + t + " clashes with a variable");
        }
        for (const auto& e : lie) {
            if (&e == basis) continue;
            auto parts = detail::split(e.key, '.');
            if (parts.size() != 4 || parts[0] != "c") throw ModelFileError(e.line, e.key_column, "structure constants have the form c.ta.tb.tc");
            std::size_t idx[3];
            for (int k = 0; k < 3; ++k) {
                auto it = std::find(b.lie.basis.begin(), b.lie.basis.end(), parts[k + 1]);
                if (it == b.lie.basis.end()) throw ModelFileError(e.line, e.key_column, "unknown basis element '" + parts[k + 1] + "'");
                idx[k] = static_cast<std::size_t>(it - b.lie.basis.begin());
            }
            Rational v;
            try {
                v = parse_rational(e.value);
            } catch (const std::exception& err) {
                throw ModelFileError(e.line, e.value_column, std::string("invalid rational: ") + err.what());
            }
            // stored as given; a one-sided entry is caught by the antisymmetry check
            b.lie.structure[idx[0]][idx[1]][idx[2]] = v;
        }
    }

    ActionSpec action;
    std::size_t m = b.lie.dimension();
    if (sections.count("action")) {
        const auto& act = sections.at("action");
        auto* kind = detail::find_entry(act, "kind");
        if (kind && kind->value == "poisson") action.kind = ActionKind::poisson_vf;
        else if (kind && kind->value != "hamilton") throw ModelFileError(kind->line, kind->value_column, "kind is 'hamilton' or 'poisson'");
        Polynomial zero(b.model.vars);
        if (action.kind == ActionKind::hamilton) action.h.assign(m, zero);
        else action.v.assign(m, std::vector<Polynomial>(b.model.dimension(), zero));
        for (const auto& e : act) {
            if (&e == kind) continue;
            auto parts = detail::split(e.key, '.');
            auto it = std::find(b.lie.basis.begin(), b.lie.basis.end(), parts[0]);
            if (it == b.lie.basis.end()) throw ModelFileError(e.line, e.key_column, "unknown basis element '" + parts[0] + "'");
            std::size_t a = static_cast<std::size_t>(it - b.lie.basis.begin());
            if (action.kind == ActionKind::hamilton) {
                if (parts.size() != 1) throw ModelFileError(e.line, e.key_column, "Hamilton actions use keys ta");
                action.h[a] = detail::parse_value(e, b.model.vars);
            } else {
                if (parts.size() != 2) throw ModelFileError(e.line, e.key_column, "vector field actions use keys ta.xi");
                auto i = b.model.vars->find(parts[1]);
                if (!i || (*b.model.vars)[*i].kind != VariableKind::coordinate)
                    throw ModelFileError(e.line, e.key_column, "unknown coordinate '" + parts[1] + "'");
                action.v[a][*i] = detail::parse_value(e, b.model.vars);
            }
        }
    } else {
        action.h.assign(m, Polynomial(b.model.vars));
    }
    b.action = action;
    return b;
}

inline ModelBundle load_model_text(const std::string& text) {
    std::istringstream in(text);
    return load_model(in);
}

inline ModelBundle load_model_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ModelFileError(0, 0, "cannot open " + path);
    return load_model(in);
}

namespace detail {

inline std::string join(const std::vector<std::string>& v) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + v[i];
    return s;
}

inline void write_bivector(std::ostream& os, const char* section, const Matrix& m, const std::vector<std::string>& coords) {
    os << "\n[" << section << "]\n";
    for (std::size_t i = 0; i < m.size(); ++i)
        for (std::size_t j = i + 1; j < m.size(); ++j)
            if (!m[i][j].is_zero()) os << coords[i] << "." << coords[j] << " = \"" << m[i][j].to_string() << "\"\n";
}

}  // namespace detail

/// Canonical text: load_model(write_model(b)) == b.
inline std::string write_model(const ModelBundle& b) {
    std::ostringstream os;
    auto coords = b.model.coordinates();
    os << "[model]\n";
    os << "name = " << b.model.name << "\n";
    if (!b.description.empty()) os << "description = \"" << b.description << "\"\n";
    if (!b.valid) os << "control = negative\n";
    os << "dimension = " << coords.size() << "\n";
    os << "coordinates = " << detail::join(coords) << "\n";
    if (!b.model.parameters().empty()) os << "parameters = " << detail::join(b.model.parameters()) << "\n";
    detail::write_bivector(os, "varpi", b.model.varpi, coords);
    detail::write_bivector(os, "theta", b.model.theta, coords);
    os << "\n[liealg]\nbasis = " << detail::join(b.lie.basis) << "\n";
    std::size_t m = b.lie.dimension();
    for (std::size_t a = 0; a < m; ++a)
        for (std::size_t c = 0; c < m; ++c)
            for (std::size_t k = 0; k < m; ++k)
                if (sgn(b.lie.c(a, c, k)) != 0)
                    os << "c." << b.lie.basis[a] << "." << b.lie.basis[c] << "." << b.lie.basis[k] << " = \"" << b.lie.c(a, c, k)
                       << "\"\n";
    os << "\n[action]\n";
    if (b.action.kind == ActionKind::hamilton) {
        os << "kind = hamilton\n";
        for (std::size_t a = 0; a < b.action.h.size(); ++a)
            if (!b.action.h[a].is_zero()) os << b.lie.basis.at(a) << " = \"" << b.action.h[a].to_string() << "\"\n";
    } else {
        os << "kind = poisson\n";
        for (std::size_t a = 0; a < b.action.v.size(); ++a)
            for (std::size_t i = 0; i < coords.size(); ++i)
                if (!b.action.v[a][i].is_zero())
                    os << b.lie.basis.at(a) << "." << coords[i] << " = \"" << b.action.v[a][i].to_string() << "\"\n";
    }
    return os.str();
}

}  // namespace psm
