#pragma once

#include <string>

#include <json.hpp>

#include "freechaos/harness.hpp"
#include "freechaos/matrix_oracle.hpp"

namespace freechaos {

using nlohmann::json;

// Kernel schema: { "t_max", "cells", "order", "entries": [{"idx": [...], "val": v}] }.
// Entries are emitted in canonical index order; round trips are lossless for
// finite doubles.
json kernel_to_json(const StepKernel& k);
StepKernel kernel_from_json(const json& j);

json limit_spec_to_json(const LimitSpec& spec);
LimitSpec limit_spec_from_json(const json& j);

// Family config: { "builder", "q", "lambda", "alpha", "labels", "n_list",
// "max_order", "seed" }. "lambda" is a per-label object for the free-family
// builders and a scalar for the equal-parameter and single-label ones.
struct FamilyConfig {
    std::string builder;
    int q = 2;
    std::map<int, double> lambda_map;
    double lambda_scalar = 1.0;
    bool lambda_is_map = false;
    std::map<int, double> alpha;
    std::vector<int> n_list = {4, 16, 64};
    int max_order = 6;
    std::uint64_t seed = 12345;
};

FamilyConfig family_config_from_json(const json& j);
KernelFamily build_family(const FamilyConfig& cfg);

struct RunManifest {
    std::string command;
    std::vector<std::string> inputs;
    std::uint64_t seed = 12345;
    double tolerance = 1e-9;
    std::string out_path;
    std::string version;
};

json manifest_to_json(const RunManifest& m);

json report_to_json(const ConvergenceReport& report, const RunManifest& manifest);
std::string moment_error_csv(const ConvergenceReport& report);

json oracle_to_json(const std::vector<MomentEstimate>& estimates, const SimConfig& cfg,
                    const RunManifest& manifest);

std::string tool_version();

json read_json_file(const std::string& path);
void write_text_file(const std::string& path, const std::string& text);

} // namespace freechaos
