#include <cmath>
#include <cstdlib>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "freechaos/json_io.hpp"

namespace {

using namespace freechaos;

int g_log_level = 1; // 0 silent, 1 info, 2 debug

void log_info(const std::string& msg) {
    if (g_log_level >= 1) std::cerr << "freechaos: " << msg << "\n";
}

void emit(const json& payload, const std::string& out_path) {
    const std::string text = payload.dump(2) + "\n";
    if (out_path.empty())
        std::cout << text;
    else
        write_text_file(out_path, text);
}

struct GlobalOpts {
    std::uint64_t seed = 12345;
    int threads = 1;
    double tolerance = 1e-9;
    std::string out;
};

RunManifest make_manifest(const std::string& command, const std::vector<std::string>& inputs,
                          const GlobalOpts& g) {
    return RunManifest{command, inputs, g.seed, g.tolerance, g.out, tool_version()};
}

std::vector<int> parse_int_list(const std::string& text, const char* who) {
    std::vector<int> out;
    std::string token;
    std::istringstream in(text);
    while (std::getline(in, token, ',')) {
        std::size_t pos = 0;
        int v = 0;
        try {
            v = std::stoi(token, &pos);
        } catch (const std::exception&) {
            throw std::invalid_argument(std::string(who) + ": bad integer '" + token + "'");
        }
        if (pos != token.size())
            throw std::invalid_argument(std::string(who) + ": bad integer '" + token + "'");
        out.push_back(v);
    }
    if (out.empty()) throw std::invalid_argument(std::string(who) + ": empty list");
    return out;
}

int run_contract(const GlobalOpts& g, const std::string& op, int r,
                 const std::vector<std::string>& files) {
    if (op == "mirror") {
        if (files.size() != 1)
            throw std::invalid_argument("contract --op mirror takes exactly one kernel file");
        emit(kernel_to_json(mirror_adjoint(kernel_from_json(read_json_file(files[0])))), g.out);
        return 0;
    }
    if (files.size() != 2)
        throw std::invalid_argument("contract takes exactly two kernel files");
    const StepKernel f = kernel_from_json(read_json_file(files[0]));
    const StepKernel gk = kernel_from_json(read_json_file(files[1]));
    if (op == "arc") {
        emit(kernel_to_json(arc_contract(f, gk, r)), g.out);
    } else if (op == "star") {
        emit(kernel_to_json(star_contract(f, gk, r)), g.out);
    } else if (op == "inner") {
        emit(json{{"value", inner(f, gk)}}, g.out);
    } else {
        throw std::invalid_argument("contract: unknown op '" + op + "'");
    }
    return 0;
}

int run_moment(const GlobalOpts& g, std::string flavor_name, const std::string& path,
               std::vector<std::string> files, const std::string& request_path) {
    if (!request_path.empty()) {
        // request document: { "flavor": ..., "kernels": [paths...], "m": int }
        const json req = read_json_file(request_path);
        flavor_name = req.at("flavor").get<std::string>();
        files = req.at("kernels").get<std::vector<std::string>>();
        if (req.contains("m") && req.at("m").get<std::size_t>() != files.size())
            throw std::invalid_argument("moment request: m does not match the kernel list");
    }
    if (files.empty())
        throw std::invalid_argument("moment: no kernels given (pass files or --request)");
    const Flavor flavor = flavor_from_string(flavor_name);
    std::vector<StepKernel> kernels;
    kernels.reserve(files.size());
    for (const auto& f : files) kernels.push_back(kernel_from_json(read_json_file(f)));

    json out{{"flavor", flavor_name}, {"m", kernels.size()}, {"path", path}};
    if (path == "words" || path == "both") {
        const MomentValue mv = moment_by_words(flavor, kernels);
        out["value"] = mv.value;
        out["word_count"] = mv.word_count;
    }
    if (path == "product" || path == "both") {
        const double pv = moment_by_products(flavor, kernels);
        if (path == "product") {
            out["value"] = pv;
            out["word_count"] = 0;
        } else {
            out["value_product"] = pv;
            out["difference"] = std::abs(out["value"].get<double>() - pv);
        }
    }
    if (path != "words" && path != "product" && path != "both")
        throw std::invalid_argument("moment: unknown path '" + path + "'");
    emit(out, g.out);
    return 0;
}

int run_partitions(const GlobalOpts& g, CLI::App* cmd, int nc_n, int nc2_n, int ncge2_n,
                   bool count_only, const std::string& words_class, int q, int m,
                   const std::string& word_text, const std::string& partition_text,
                   const std::vector<int>& count_r) {
    json out;
    if (cmd->count("--nc")) {
        auto list = enumerate_nc(nc_n);
        out["n"] = nc_n;
        out["count"] = list.size();
        if (!count_only) {
            json items = json::array();
            for (const auto& p : list) items.push_back(format_partition(p));
            out["partitions"] = std::move(items);
        }
    } else if (cmd->count("--nc2")) {
        auto list = enumerate_nc2(nc2_n);
        out["n"] = nc2_n;
        out["count"] = list.size();
        if (!count_only) {
            json items = json::array();
            for (const auto& p : list) items.push_back(format_partition(p));
            out["partitions"] = std::move(items);
        }
    } else if (cmd->count("--nc-ge2")) {
        auto list = enumerate_nc_ge2(ncge2_n);
        out["n"] = ncge2_n;
        out["count"] = list.size();
        if (!count_only) {
            json items = json::array();
            for (const auto& p : list) items.push_back(format_partition(p));
            out["partitions"] = std::move(items);
        }
    } else if (!words_class.empty()) {
        WordClass which;
        if (words_class == "A") which = WordClass::A;
        else if (words_class == "B") which = WordClass::B;
        else if (words_class == "D") which = WordClass::D;
        else if (words_class == "E") which = WordClass::E;
        else throw std::invalid_argument("partitions: unknown word class '" + words_class + "'");
        auto list = enumerate_words(q, m, which);
        out["q"] = q;
        out["m"] = m;
        out["class"] = words_class;
        out["count"] = list.size();
        json items = json::array();
        for (const auto& w : list) items.push_back(w.r);
        out["words"] = std::move(items);
    } else if (!word_text.empty()) {
        const std::vector<int> r = parse_int_list(word_text, "partitions --word");
        ContractionWord w{q, static_cast<int>(r.size()) + 1, r};
        out["q"] = q;
        out["word"] = r;
        out["partition"] = format_partition(word_to_partition(w));
    } else if (!partition_text.empty()) {
        const SetPartition p = parse_partition(partition_text);
        const ContractionWord w = partition_to_word(p, q);
        out["q"] = q;
        out["partition"] = format_partition(p);
        out["word"] = w.r;
    } else if (!count_r.empty()) {
        if (count_r.size() != 2)
            throw std::invalid_argument("partitions --count-r takes M,J");
        out["m"] = count_r[0];
        out["j"] = count_r[1];
        out["count"] = count_R(count_r[0], count_r[1]);
    } else {
        throw std::invalid_argument("partitions: nothing to do (see --help)");
    }
    emit(out, g.out);
    return 0;
}

int run_verify(const GlobalOpts& g, const std::string& config_path, const std::string& theorem_name,
               const std::string& csv_path, long word_budget) {
    const json cfg_json = read_json_file(config_path);
    const FamilyConfig cfg = family_config_from_json(cfg_json);
    const KernelFamily family = build_family(cfg);

    VerifyOptions opts;
    opts.max_order = cfg.max_order;
    opts.n_list = cfg.n_list;
    opts.tol.absolute = g.tolerance;
    if (cfg_json.contains("rate_mode")) opts.tol.rate_mode = cfg_json.at("rate_mode").get<bool>();
    if (cfg_json.contains("rate_factor"))
        opts.tol.rate_factor = cfg_json.at("rate_factor").get<double>();
    opts.word_budget = word_budget;
    opts.threads = g.threads;

    const ConvergenceReport report = verify(family, theorem_from_string(theorem_name), opts);
    const RunManifest manifest = make_manifest("verify", {config_path}, g);
    emit(report_to_json(report, manifest), g.out);
    if (!csv_path.empty()) write_text_file(csv_path, moment_error_csv(report));
    log_info("verdict: " + std::string(report.pass ? "pass" : "fail") + " (" +
             std::to_string(report.runtime_ms) + " ms)");
    return report.pass ? 0 : 1;
}

int run_oracle(const GlobalOpts& g, const std::string& model_name, double lambda, int size,
               int trials, const std::string& orders_text) {
    SimConfig cfg;
    cfg.model = model_from_string(model_name);
    cfg.lambda = lambda;
    cfg.size = size;
    cfg.trials = trials;
    cfg.seed = g.seed;
    cfg.threads = g.threads;
    cfg.orders = parse_int_list(orders_text, "oracle --orders");

    const auto estimates = estimate_moments(cfg);
    const RunManifest manifest = make_manifest("oracle", {}, g);
    emit(oracle_to_json(estimates, cfg, manifest), g.out);
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    if (const char* level = std::getenv("FREECHAOS_LOG")) {
        const std::string l = level;
        g_log_level = l == "debug" ? 2 : l == "silent" ? 0 : 1;
    }

    CLI::App app{"free Wigner/Poisson chaos contraction calculus and limit certification"};
    app.require_subcommand(1);
    app.fallthrough(); // global flags are accepted after the subcommand too

    GlobalOpts g;
    app.add_option("--seed", g.seed, "RNG seed");
    app.add_option("--threads", g.threads, "worker thread cap");
    app.add_option("--tolerance", g.tolerance, "absolute tolerance for verdicts");
    app.add_option("--out", g.out, "write the report to this path instead of stdout");

    auto* contract = app.add_subcommand("contract", "arc/star contraction of kernel files");
    std::string contract_op = "arc";
    int contract_r = 0;
    std::vector<std::string> contract_files;
    contract->add_option("--op", contract_op, "arc|star|mirror|inner");
    contract->add_option("--r", contract_r, "contraction index");
    contract->add_option("files", contract_files, "kernel JSON files")->required();

    auto* moment = app.add_subcommand("moment", "moment of a kernel list");
    std::string moment_flavor = "wigner";
    std::string moment_path = "words";
    std::string moment_request;
    std::vector<std::string> moment_files;
    moment->add_option("--flavor", moment_flavor, "wigner|poisson");
    moment->add_option("--path", moment_path, "words|product|both");
    moment->add_option("--request", moment_request, "moment request JSON document");
    moment->add_option("files", moment_files, "kernel JSON files");

    auto* partitions = app.add_subcommand("partitions", "non-crossing enumeration and bijections");
    int nc_n = 0, nc2_n = 0, ncge2_n = 0;
    bool count_only = false;
    std::string words_class, word_text, partition_text;
    int pq = 2, pm = 2;
    std::vector<int> count_r;
    partitions->add_option("--nc", nc_n, "enumerate NC(n)");
    partitions->add_option("--nc2", nc2_n, "enumerate NC2(n)");
    partitions->add_option("--nc-ge2", ncge2_n, "enumerate NC_{>=2}(n)");
    partitions->add_flag("--count", count_only, "counts only");
    bool bijection = false;
    partitions->add_flag("--bijection", bijection,
                         "map --word or --partition across the word/partition bijection");
    partitions->add_option("--words", words_class, "enumerate word class A|B|D|E");
    partitions->add_option("--q", pq, "kernel order q");
    partitions->add_option("--m", pm, "factor count m");
    partitions->add_option("--word", word_text, "word r1,r2,... to map to a partition");
    partitions->add_option("--partition", partition_text, "partition text to map to a word");
    partitions->add_option("--count-r", count_r, "M J: count NC_{>=2}(M) with J blocks")
        ->expected(2);

    auto* verify_cmd = app.add_subcommand("verify", "run a convergence certification");
    std::string verify_config, verify_theorem = "2.7", verify_csv;
    long word_budget = 20000000;
    verify_cmd->add_option("--config", verify_config, "family config JSON")->required();
    verify_cmd->add_option("--theorem", verify_theorem, "2.7|3.3|4.2|4.4");
    verify_cmd->add_option("--csv", verify_csv, "also write the moment-error table as CSV");
    verify_cmd->add_option("--word-budget", word_budget, "resource guard on enumerated words");

    auto* oracle = app.add_subcommand("oracle", "random-matrix Monte Carlo cross-check");
    std::string oracle_model = "semicircle";
    double oracle_lambda = 1.0;
    int oracle_size = 400, oracle_trials = 200;
    std::string oracle_orders = "1,2,3,4";
    oracle->add_option("--model", oracle_model, "semicircle|free_poisson");
    oracle->add_option("--lambda", oracle_lambda, "free Poisson rate");
    oracle->add_option("--size", oracle_size, "matrix size N");
    oracle->add_option("--trials", oracle_trials, "Monte Carlo trials");
    oracle->add_option("--orders", oracle_orders, "comma-separated moment orders");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        if (e.get_exit_code() == 0) return app.exit(e); // --help
        app.exit(e);
        return 2;
    }

    try {
        if (contract->parsed()) return run_contract(g, contract_op, contract_r, contract_files);
        if (moment->parsed())
            return run_moment(g, moment_flavor, moment_path, moment_files, moment_request);
        if (partitions->parsed())
            return run_partitions(g, partitions, nc_n, nc2_n, ncge2_n, count_only, words_class,
                                  pq, pm, word_text, partition_text, count_r);
        if (verify_cmd->parsed())
            return run_verify(g, verify_config, verify_theorem, verify_csv, word_budget);
        if (oracle->parsed())
            return run_oracle(g, oracle_model, oracle_lambda, oracle_size, oracle_trials,
                              oracle_orders);
    } catch (const ResourceError& e) {
        std::cerr << "freechaos: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "freechaos: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "freechaos: error: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
