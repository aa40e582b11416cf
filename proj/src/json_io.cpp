#include "freechaos/json_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace freechaos {

namespace {

std::map<int, double> label_map_from_json(const json& j, const char* who) {
    std::map<int, double> out;
    if (!j.is_object()) throw std::invalid_argument(std::string(who) + ": expected an object");
    for (const auto& [key, value] : j.items()) {
        std::size_t pos = 0;
        int label = 0;
        try {
            label = std::stoi(key, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string(who) + ": bad label '" + key + "'");
        }
        if (pos != key.size() || label < 1)
            throw std::invalid_argument(std::string(who) + ": bad label '" + key + "'");
        out[label] = value.get<double>();
    }
    return out;
}

json label_map_to_json(const std::map<int, double>& m) {
    json out = json::object();
    for (const auto& [label, value] : m) out[std::to_string(label)] = value;
    return out;
}

} // namespace

json kernel_to_json(const StepKernel& k) {
    json entries = json::array();
    for (const auto& [idx, val] : k.entries())
        entries.push_back(json{{"idx", idx}, {"val", val}});
    return json{{"t_max", k.grid().t_max},
                {"cells", k.grid().cells},
                {"order", k.order()},
                {"entries", std::move(entries)}};
}

StepKernel kernel_from_json(const json& j) {
    const Grid grid(j.at("t_max").get<double>(), j.at("cells").get<int>());
    StepKernel k(grid, j.at("order").get<int>());
    for (const auto& e : j.at("entries"))
        k.set(e.at("idx").get<Index>(), e.at("val").get<double>());
    return k;
}

json limit_spec_to_json(const LimitSpec& spec) {
    if (const auto* ff = std::get_if<FreeFamilySpec>(&spec)) {
        std::map<int, double> lambdas, alphas;
        for (const auto& [label, p] : ff->params) {
            lambdas[label] = p.lambda;
            alphas[label] = p.alpha;
        }
        return json{{"kind", "free_family"},
                    {"centered", ff->centered},
                    {"lambda", label_map_to_json(lambdas)},
                    {"alphas", label_map_to_json(alphas)}};
    }
    const auto& ep = std::get<EqualParamSpec>(spec);
    return json{{"kind", "equal_param"},
                {"centered", ep.centered},
                {"lambda", ep.lambda},
                {"alphas", label_map_to_json(ep.alphas)}};
}

LimitSpec limit_spec_from_json(const json& j) {
    const std::string kind = j.at("kind").get<std::string>();
    const bool centered = j.value("centered", true);
    if (kind == "free_family") {
        FreeFamilySpec ff;
        ff.centered = centered;
        auto lambdas = label_map_from_json(j.at("lambda"), "limit_spec.lambda");
        std::map<int, double> alphas;
        if (j.contains("alphas")) alphas = label_map_from_json(j.at("alphas"), "limit_spec.alphas");
        for (const auto& [label, lam] : lambdas) {
            double a = 1.0;
            if (auto it = alphas.find(label); it != alphas.end()) a = it->second;
            ff.params[label] = {lam, a};
        }
        return ff;
    }
    if (kind == "equal_param") {
        EqualParamSpec ep;
        ep.centered = centered;
        ep.lambda = j.at("lambda").get<double>();
        ep.alphas = label_map_from_json(j.at("alphas"), "limit_spec.alphas");
        return ep;
    }
    throw std::invalid_argument("limit_spec: unknown kind '" + kind + "'");
}

FamilyConfig family_config_from_json(const json& j) {
    FamilyConfig cfg;
    cfg.builder = j.at("builder").get<std::string>();
    cfg.q = j.value("q", 2);
    if (j.contains("lambda")) {
        if (j.at("lambda").is_object()) {
            cfg.lambda_map = label_map_from_json(j.at("lambda"), "family.lambda");
            cfg.lambda_is_map = true;
        } else {
            cfg.lambda_scalar = j.at("lambda").get<double>();
        }
    }
    if (j.contains("alpha")) cfg.alpha = label_map_from_json(j.at("alpha"), "family.alpha");
    if (j.contains("n_list")) cfg.n_list = j.at("n_list").get<std::vector<int>>();
    if (j.contains("max_order")) cfg.max_order = j.at("max_order").get<int>();
    if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
    return cfg;
}

KernelFamily build_family(const FamilyConfig& cfg) {
    if (cfg.builder == "exact_wigner" || cfg.builder == "perturbed_wigner") {
        std::map<int, int> ranks;
        if (cfg.lambda_is_map) {
            for (const auto& [label, lam] : cfg.lambda_map) {
                const int rank = static_cast<int>(std::lround(lam));
                if (std::abs(lam - rank) > 0.0 || rank < 1)
                    throw std::invalid_argument(
                        "build_family: exact Wigner ranks must be positive integers");
                ranks[label] = rank;
            }
        } else {
            const int rank = static_cast<int>(std::lround(cfg.lambda_scalar));
            if (std::abs(cfg.lambda_scalar - rank) > 0.0 || rank < 1)
                throw std::invalid_argument(
                    "build_family: exact Wigner ranks must be positive integers");
            ranks[1] = rank;
        }
        KernelFamily base = family_exact_wigner(ranks, cfg.q);
        return cfg.builder == "exact_wigner" ? base : family_perturbed_wigner(base);
    }
    if (cfg.builder == "poisson_spread") {
        if (cfg.lambda_is_map)
            throw std::invalid_argument("build_family: poisson_spread takes a scalar lambda");
        return family_poisson_spread(cfg.lambda_scalar, cfg.q);
    }
    if (cfg.builder == "counterexample") {
        if (cfg.lambda_is_map)
            throw std::invalid_argument("build_family: counterexample takes a scalar lambda");
        return family_counterexample(cfg.lambda_scalar);
    }
    if (cfg.builder == "exact_wigner_equal" || cfg.builder == "poisson_spread_equal") {
        std::map<int, double> alphas = cfg.alpha;
        if (alphas.empty()) alphas[1] = 1.0;
        if (cfg.lambda_is_map)
            throw std::invalid_argument("build_family: equal-parameter builders take a scalar lambda");
        if (cfg.builder == "exact_wigner_equal") {
            const int rank = static_cast<int>(std::lround(cfg.lambda_scalar));
            if (std::abs(cfg.lambda_scalar - rank) > 0.0 || rank < 1)
                throw std::invalid_argument("build_family: exact_wigner_equal needs integer lambda");
            return family_exact_wigner_equal(rank, alphas);
        }
        return family_poisson_spread_equal(cfg.lambda_scalar, alphas);
    }
    throw std::invalid_argument("build_family: unknown builder '" + cfg.builder + "'");
}

json manifest_to_json(const RunManifest& m) {
    return json{{"command", m.command}, {"inputs", m.inputs},   {"seed", m.seed},
                {"tolerance", m.tolerance}, {"out", m.out_path}, {"version", m.version}};
}

json report_to_json(const ConvergenceReport& report, const RunManifest& manifest) {
    json conditions = json::array();
    for (const auto& c : report.conditions)
        conditions.push_back(json{{"name", c.name},
                                  {"i", c.i},
                                  {"j", c.j},
                                  {"n", c.n},
                                  {"computed", c.computed},
                                  {"target", c.target},
                                  {"residual", c.residual}});
    json norms = json::array();
    for (const auto& c : report.norms)
        norms.push_back(json{{"kind", c.kind},
                             {"i", c.i},
                             {"j", c.j},
                             {"n", c.n},
                             {"r", c.r},
                             {"value", c.value}});
    json errors = json::array();
    for (const auto& e : report.moment_errors)
        errors.push_back(json{{"chi", e.chi},
                              {"n", e.n},
                              {"computed", e.computed},
                              {"target", e.target},
                              {"error", e.error}});
    // runtime goes to the log, not the payload: identical manifests must
    // produce byte-identical reports
    return json{{"manifest", manifest_to_json(manifest)},
                {"theorem", report.theorem},
                {"builder", report.builder},
                {"uniform_support", report.uniform_support},
                {"conditions", std::move(conditions)},
                {"contraction_norms", std::move(norms)},
                {"moment_errors", std::move(errors)},
                {"verdict", report.pass ? "pass" : "fail"}};
}

std::string moment_error_csv(const ConvergenceReport& report) {
    std::ostringstream os;
    os << "chi,n,computed,target,error\n";
    os.precision(17);
    for (const auto& e : report.moment_errors) {
        for (std::size_t k = 0; k < e.chi.size(); ++k) {
            if (k) os << '.';
            os << e.chi[k];
        }
        os << ',' << e.n << ',' << e.computed << ',' << e.target << ',' << e.error << '\n';
    }
    return os.str();
}

json oracle_to_json(const std::vector<MomentEstimate>& estimates, const SimConfig& cfg,
                    const RunManifest& manifest) {
    json rows = json::array();
    for (const auto& e : estimates)
        rows.push_back(json{{"order", e.order},
                            {"estimate", e.estimate},
                            {"stderr", e.stderr_},
                            {"target", e.target}});
    return json{{"manifest", manifest_to_json(manifest)},
                {"model", to_string(cfg.model)},
                {"lambda", cfg.lambda},
                {"size", cfg.size},
                {"trials", cfg.trials},
                {"estimates", std::move(rows)}};
}

std::string tool_version() { return "0.1.0"; }

json read_json_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open '" + path + "'");
    json j;
    try {
        in >> j;
    } catch (const json::parse_error& e) {
        throw std::invalid_argument("malformed JSON in '" + path + "': " + e.what());
    }
    return j;
}

void write_text_file(const std::string& path, const std::string& text) {
    std::ofstream out(path);
    if (!out) throw std::invalid_argument("cannot open '" + path + "' for writing");
    out << text;
}

} // namespace freechaos
