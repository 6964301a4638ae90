#pragma once

// Command dispatch for the psm tool. run_command never exits the process;
// it writes the report and returns 0 (all PASS), 1 (some FAIL) or 2 (load,
// parse or usage error).

#include "psm/gallery.hpp"
#include "psm/model_file.hpp"
#include "psm/operation.hpp"
#include "psm/worldsheet.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <random>

namespace psm {

namespace cli {

using Json = nlohmann::ordered_json;

class UsageError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

/// What a command produced: named values, then check reports.
struct Outcome {
    std::string command;
    std::string subject;
    std::vector<std::pair<std::string, std::string>> values;
    std::vector<CheckReport> reports;

    void value(std::string key, std::string v) { values.emplace_back(std::move(key), std::move(v)); }
    void add(CheckReport r) { reports.push_back(std::move(r)); }
    void add(const std::vector<CheckReport>& rs) {
        for (const auto& r : rs) reports.push_back(r);
    }
    bool passed() const { return all_passed(reports); }
};

inline Json to_json(const CheckReport& r) {
    Json w = Json::array();
    for (const auto& x : r.witnesses) w.push_back({{"relation", x.relation}, {"subject", x.subject}, {"residual", x.residual}});
    return {{"name", r.name}, {"passed", r.passed}, {"witnesses", w}};
}

inline Json to_json(const Outcome& o, int code) {
    Json values = Json::object();
    for (const auto& [k, v] : o.values) values[k] = v;
    Json reports = Json::array();
    for (const auto& r : o.reports) reports.push_back(to_json(r));
    return {{"command", o.command}, {"subject", o.subject}, {"exit_code", code}, {"passed", code == 0}, {"values", values}, {"reports", reports}};
}

inline void print_text(std::ostream& os, const Outcome& o) {
    if (!o.subject.empty()) os << "# " << o.command << " " << o.subject << "\n";
    for (const auto& [k, v] : o.values) os << k << " = " << v << "\n";
    for (const auto& r : o.reports) os << r;
}

inline std::string strip(const std::string& source, const std::string& ext) {
    std::string stem = std::filesystem::path(source).filename().string();
    if (stem.size() > ext.size() && stem.compare(stem.size() - ext.size(), ext.size(), ext) == 0) stem.resize(stem.size() - ext.size());
    return stem;
}

/// A path to a .psm file, or the name of a bundled model (with or without
/// the .psm suffix) when no such file exists.
inline ModelBundle resolve_model(const std::string& source) {
    if (std::filesystem::exists(source)) return load_model_file(source);
    std::string stem = strip(source, ".psm");
    for (auto& b : gallery::all())
        if (b.model.name == stem) return b;
    throw UsageError("no model file or bundled model '" + source + "'");
}

inline Superchain resolve_chain(const std::string& source) {
    if (std::filesystem::exists(source)) {
        std::ifstream in(source);
        return parse_chain(in);
    }
    auto all = chains::all();
    auto it = all.find(strip(source, ".chain"));
    if (it == all.end()) throw UsageError("no chain file or bundled chain '" + source + "'");
    return it->second;
}

inline BivectorChoice bivector_choice(const std::string& s) {
    if (s == "varpi") return BivectorChoice::varpi;
    if (s == "theta") return BivectorChoice::theta;
    if (s == "pi") return BivectorChoice::pi;
    throw UsageError("--bivector is varpi, theta or pi");
}

/// "k;psi0;psi1_1;psi1_2;psi2" in the chart variables z1, z2.
inline Superfield parse_superfield_text(const std::string& source) {
    auto parts = detail::split(source, ';');
    if (parts.size() != 5) throw UsageError("superfield '" + source + "' needs the form k;psi0;psi1_1;psi1_2;psi2");
    int k = 0;
    try {
        k = std::stoi(parts[0]);
    } catch (const std::exception&) {
        throw UsageError("superfield degree '" + parts[0] + "' is not an integer");
    }
    return Superfield::parse(k, parts[1], parts[2], parts[3], parts[4]);
}

inline FieldConfiguration parse_configuration(const std::vector<std::string>& sets, const std::vector<std::string>& params) {
    FieldConfiguration cfg;
    for (const auto& s : sets) {
        auto eq = s.find('=');
        if (eq == std::string::npos) throw UsageError("--set expects name=k;psi0;psi1_1;psi1_2;psi2");
        cfg.assign(detail::trim(s.substr(0, eq)), parse_superfield_text(s.substr(eq + 1)));
    }
    for (const auto& p : params) {
        auto eq = p.find('=');
        if (eq == std::string::npos) throw UsageError("--param expects name=rational");
        cfg.parameters[detail::trim(p.substr(0, eq))] = parse_rational(detail::trim(p.substr(eq + 1)));
    }
    return cfg;
}

struct Options {
    std::string model;
    std::string expr;
    std::string bivector = "pi";
    std::string chain;
    std::string field;
    std::string directory = "models";
    std::vector<std::string> sets, params;
    int max_degree = 2;
    int samples = 100;
    unsigned seed = 1;
    bool json = false;
    bool allow_invalid = false;
};

/// Context for the operation commands. Failing preconditions end the command
/// with their reports unless --allow-invalid is given.
inline std::optional<OperationContext> context(const Options& o, Outcome& out) {
    ModelBundle b = resolve_model(o.model);
    out.subject = b.model.name;
    OperationOptions opt;
    opt.allow_invalid = true;
    auto c = OperationContext::build(b.model, b.lie, b.action, opt);
    if (!o.allow_invalid && !all_passed(c.preconditions)) {
        out.value("preconditions", "FAIL (use --allow-invalid to continue)");
        for (const auto& r : c.preconditions)
            if (!r.passed) out.add(r);
        return std::nullopt;
    }
    c.options.allow_invalid = o.allow_invalid;
    return c;
}

inline void cmd_check(const Options& o, Outcome& out) {
    ModelBundle b = resolve_model(o.model);
    out.subject = b.model.name;
    const auto& m = b.model;
    out.add(is_poisson_check(m.varpi, m.vars, "varpi"));
    out.add(is_poisson_check(m.pi(), m.vars, "pi"));
    CheckReport comp{"compatibility [theta,theta] = 0, [varpi,theta] = 0", true, {}};
    comp.absorb(is_poisson_check(m.theta, m.vars, "theta"));
    comp.absorb(compatibility_check(m.varpi, m.theta, m.vars, "[varpi,theta] = 0"));
    out.add(comp);
    auto action = verify_action(m, b.lie, b.action);
    out.add(action[1]);
    out.add(verify_lie_algebra(b.lie));
    out.add(action[0]);
}

inline void cmd_cartan(const Options& o, Outcome& out) {
    auto c = context(o, out);
    if (!c) return;
    out.add(cartan_check(*c));
    out.add(auxiliary_relations_check(*c));
    out.add(shift_consistency_check(*c));
}

inline void cmd_lagrangian(const Options& o, Outcome& out) {
    auto c = context(o, out);
    if (!c) return;
    out.value("L_pi", lagrangian_element(*c).to_string());
    out.value("Xi", lagrangian_potential(*c).to_string());
    out.add(lagrangian_class_check(*c));
    if (!c->model.has_theta()) out.add(degeneration_check(*c));
}

inline void cmd_obstruction(const Options& o, Outcome& out) {
    auto c = context(o, out);
    if (!c) return;
    auto res = integrability_obstruction(*c);
    auto formula = obstruction_formula(*c);
    auto coords = c->model.coordinates();
    CheckReport agree{"obstruction equals the closed formula", true, {}};
    for (std::size_t i = 0; i < res.size(); ++i) {
        out.value("obstruction[" + coords[i] + "]", res[i].to_string());
        agree.expect_zero("obstruction - formula", coords[i], res[i] - formula[i]);
    }
    out.add(agree);
    out.add(obstruction_check(*c));
}

inline void cmd_casimir(const std::string& mode, const Options& o, Outcome& out) {
    ModelBundle b = resolve_model(o.model);
    out.subject = b.model.name;
    auto choice = bivector_choice(o.bivector);
    Matrix m = b.model.bivector(choice);
    out.value("bivector", to_string(choice));
    if (mode == "verify") {
        if (o.expr.empty()) throw UsageError("casimir verify needs --expr");
        Polynomial f = parse_expression(o.expr, b.model.vars);
        out.value("f", f.to_string());
        out.add(verify_casimir(f, m, to_string(choice)));
        return;
    }
    auto basis = casimir_search(m, b.model.vars, o.max_degree);
    out.value("max_degree", std::to_string(o.max_degree));
    out.value("dimension", std::to_string(basis.size()));
    for (std::size_t k = 0; k < basis.size(); ++k) out.value("casimir[" + std::to_string(k) + "]", basis[k].to_string());
    CheckReport r{"search results verify as Casimirs", true, {}};
    for (const auto& f : basis) r.absorb(verify_casimir(f, m, to_string(choice)));
    out.add(r);
}

inline void cmd_observable(const Options& o, Outcome& out) {
    if (o.expr.empty()) throw UsageError("observable needs --expr");
    auto c = context(o, out);
    if (!c) return;
    SuperPolynomial O = c->parse(o.expr);
    out.value("observable", O.to_string());
    for (auto rep : {equivariant_class_check(*c, O), bv_observable_check(*c, O)}) {
        out.add(rep.conditions);
        if (rep.consequences) out.add(*rep.consequences);
    }
}

namespace detail {

inline Polynomial random_chart_poly(std::mt19937& rng) {
    std::uniform_int_distribution<int> num(-4, 4), den(1, 3), deg(0, 4), pick(0, 1), nterms(0, 4);
    auto vars = chart_variables();
    Polynomial p(vars);
    for (int k = nterms(rng); k > 0; --k) {
        Exponents e(vars->size(), 0);
        for (int j = deg(rng); j > 0; --j) e[pick(rng)] += 1;
        Rational c(num(rng), den(rng));
        c.canonicalize();
        p.add_term(e, c);
    }
    return p;
}

inline Superfield random_superfield(std::mt19937& rng) {
    int k = std::uniform_int_distribution<int>(0, 2)(rng);
    Polynomial zero(chart_variables());
    if (k % 2 == 0) return Superfield::make(k, random_chart_poly(rng), zero, zero, random_chart_poly(rng));
    return Superfield::make(k, zero, random_chart_poly(rng), random_chart_poly(rng), zero);
}

}  // namespace detail

inline void cmd_worldsheet(const std::string& mode, const Options& o, Outcome& out) {
    if (mode == "stokes") {
        std::map<std::string, Superchain> targets;
        if (!o.chain.empty()) targets[o.chain] = resolve_chain(o.chain);
        else targets = chains::all();
        out.subject = o.chain.empty() ? "bundled chains" : o.chain;
        if (!o.field.empty()) {
            Superfield f = parse_superfield_text(o.field);
            for (const auto& [name, c] : targets) {
                out.value("integral of d psi over " + name, to_string(integrate(superfield_d(f), c)));
                CheckReport r = stokes_check(f, c);
                r.name += " on " + name;
                out.add(r);
            }
            return;
        }
        std::mt19937 rng(o.seed);
        CheckReport r{"Stokes on random superfields", true, {}};
        int count = 0;
        for (int k = 0; k < o.samples; ++k)
            for (const auto& [name, c] : targets) {
                Superfield f = detail::random_superfield(rng);
                CheckReport one = stokes_check(f, c);
                if (!one.passed) r.fail("stokes", name, f.to_string());
                ++count;
            }
        out.value("pairs", std::to_string(count));
        out.add(r);
        return;
    }
    if (o.chain.empty()) throw UsageError("worldsheet " + mode + " needs --chain");
    Superchain chain = resolve_chain(o.chain);
    auto c = context(o, out);
    if (!c) return;
    FieldConfiguration cfg = parse_configuration(o.sets, o.params);
    if (mode == "action") {
        out.value("S", to_string(action_value(*c, cfg, chain)));
        return;
    }
    if (o.expr.empty()) throw UsageError("worldsheet pair needs --expr");
    SuperPolynomial O = c->parse(o.expr);
    out.value("observable", O.to_string());
    out.value("pairing", to_string(pair_observable(O, cfg, chain)));
    CheckReport exact{"exact part pairs to zero", true, {}};
    Rational dz = pair_observable(c->d(O), cfg, chain);
    if (sgn(dz) != 0) exact.fail("<d O, Z>", o.chain, to_string(dz));
    out.add(exact);
}

inline void cmd_examples(const std::string& mode, const Options& o, Outcome& out) {
    if (mode == "list") {
        out.subject = "gallery";
        for (const auto& b : gallery::all())
            out.value(b.model.name, std::string(b.valid ? "" : "[negative control] ") + b.description);
        for (const auto& [name, c] : chains::all())
            out.value("chain " + name, std::string(is_cycle(c) ? "cycle, " : "") + std::to_string(c.terms().size()) + " simplices");
        return;
    }
    namespace fs = std::filesystem;
    fs::path dir(o.directory);
    fs::create_directories(dir / "chains");
    out.subject = dir.string();
    for (const auto& b : gallery::all()) {
        fs::path p = dir / (b.model.name + ".psm");
        std::ofstream(p) << write_model(b);
        out.value("wrote", p.string());
    }
    for (const auto& [name, c] : chains::all()) {
        fs::path p = dir / "chains" / (name + ".chain");
        std::ofstream(p) << format_chain(c);
        out.value("wrote", p.string());
    }
}

}  // namespace cli

/// argv without the program name.
inline int run_command(const std::vector<std::string>& args, std::ostream& os, std::ostream& es) {
    using namespace cli;
    CLI::App app{"Poisson sigma model symbolic checks", "psm"};
    app.require_subcommand(1);
    Options o;
    bool json = false;
    app.add_flag("--json", json, "machine-readable report");

    auto model_cmd = [&](const std::string& name, const std::string& help) {
        auto* sub = app.add_subcommand(name, help);
        sub->add_option("model", o.model, "model file or bundled model name")->required();
        sub->add_flag("--json", json, "machine-readable report");
        sub->add_flag("--allow-invalid", o.allow_invalid, "continue when model preconditions fail");
        return sub;
    };
    auto* check = model_cmd("check", "Poisson, compatibility, Lie algebra and action checks");
    auto* cartan = model_cmd("cartan", "Cartan relations, BV derivation relations, generator shifts");
    auto* lagrangian = model_cmd("lagrangian", "print L_pi and check its class");
    auto* obstruction = model_cmd("obstruction", "integrability of the field equations");
    auto* observable = model_cmd("observable", "equivariant class and BV observable checks");
    observable->add_option("--expr", o.expr, "element in the generator grammar")->required();

    auto* casimir = app.add_subcommand("casimir", "verify or search for Casimir functions");
    casimir->require_subcommand(1);
    std::string sub_mode;
    for (const char* mode : {"verify", "search"}) {
        auto* s = casimir->add_subcommand(mode);
        s->add_option("model", o.model)->required();
        s->add_option("--bivector", o.bivector, "varpi, theta or pi");
        s->add_flag("--json", json);
        if (std::string(mode) == "verify") s->add_option("--expr", o.expr)->required();
        else s->add_option("--max-degree", o.max_degree)->check(CLI::NonNegativeNumber);
        s->callback([&sub_mode, mode] { sub_mode = mode; });
    }

    auto* worldsheet = app.add_subcommand("worldsheet", "superfields on the plane and superchains");
    worldsheet->require_subcommand(1);
    for (const char* mode : {"stokes", "action", "pair"}) {
        auto* s = worldsheet->add_subcommand(mode);
        s->add_option("--chain", o.chain, "chain file or bundled chain name");
        s->add_flag("--json", json);
        if (std::string(mode) == "stokes") {
            s->add_option("--field", o.field, "k;psi0;psi1_1;psi1_2;psi2");
            s->add_option("--samples", o.samples)->check(CLI::PositiveNumber);
            s->add_option("--seed", o.seed);
        } else {
            s->add_option("model", o.model)->required();
            s->add_option("--set", o.sets, "name=k;psi0;psi1_1;psi1_2;psi2");
            s->add_option("--param", o.params, "name=rational");
            s->add_flag("--allow-invalid", o.allow_invalid);
            if (std::string(mode) == "pair") s->add_option("--expr", o.expr)->required();
        }
        s->callback([&sub_mode, mode] { sub_mode = mode; });
    }

    auto* examples = app.add_subcommand("examples", "bundled models and chains");
    examples->require_subcommand(1);
    examples->add_subcommand("list")->callback([&sub_mode] { sub_mode = "list"; });
    auto* exp = examples->add_subcommand("export");
    exp->add_option("directory", o.directory, "target directory");
    exp->callback([&sub_mode] { sub_mode = "export"; });
    for (auto* s : {examples->get_subcommand("list"), exp}) s->add_flag("--json", json);

    try {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    } catch (const CLI::CallForHelp& e) {
        os << app.help();
        return 0;
    } catch (const CLI::ParseError& e) {
        es << "usage error: " << e.what() << "\n";
        return 2;
    }

    Outcome out;
    try {
        if (check->parsed()) out.command = "check", cmd_check(o, out);
        else if (cartan->parsed()) out.command = "cartan", cmd_cartan(o, out);
        else if (lagrangian->parsed()) out.command = "lagrangian", cmd_lagrangian(o, out);
        else if (obstruction->parsed()) out.command = "obstruction", cmd_obstruction(o, out);
        else if (observable->parsed()) out.command = "observable", cmd_observable(o, out);
        else if (casimir->parsed()) out.command = "casimir " + sub_mode, cmd_casimir(sub_mode, o, out);
        else if (worldsheet->parsed()) out.command = "worldsheet " + sub_mode, cmd_worldsheet(sub_mode, o, out);
        else out.command = "examples " + sub_mode, cmd_examples(sub_mode, o, out);
    } catch (const ModelFileError& e) {
        es << "model file error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        es << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        es << "error: " << e.what() << "\n";
        return 2;
    }
    int code = out.passed() ? 0 : 1;
    if (json) os << to_json(out, code).dump(2) << "\n";
    else print_text(os, out);
    return code;
}

}  // namespace psm
