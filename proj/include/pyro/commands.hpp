#pragma once

#include <cstdint>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace pyro {

/// CLI entry points, exposed as functions so they are directly testable.
/// Exit codes: 0 success, 1 usage, 2 validation/config, 3 numerical failure.

struct PredictOptions {
    std::string model_dir;
    std::vector<std::string> z_literals;  // comma-separated values, one per query
    std::string z_csv;                    // alternative: CSV of query points
    std::vector<std::string> methods = {"mf"};
    std::string hf_reference;  // snapshot file used as the error reference
    bool run_hf = false;       // simulate the HF reference per query instead
};

int cmd_offline(const std::string& config_path, std::ostream& log);
int cmd_predict(const PredictOptions& opts, std::ostream& log);
int cmd_uq(const std::string& model_dir, int count, uint64_t seed, bool with_hf,
           std::ostream& log);

/// Like cmd_uq, but falls back to the uq_seed stored in the model's
/// configuration when no seed is given.
int cmd_uq_with_default_seed(const std::string& model_dir, int count,
                             std::optional<uint64_t> seed, bool with_hf, std::ostream& log);
int cmd_report(const std::string& output_dir, std::ostream& log);

/// Map an exception to the documented exit code and print a diagnostic.
int report_error(const std::exception& e, std::ostream& log);

}  // namespace pyro
