#pragma once

#include "pyro/grid.hpp"
#include "pyro/mapping.hpp"
#include "pyro/params.hpp"
#include "pyro/sampling.hpp"

#include <cstdint>
#include <string>

namespace pyro {

struct FidelitySetup {
    Grid grid;
    PhysicalParams phys;
};

/// Validated run configuration. Parsed strictly from JSON: unknown keys are
/// rejected anywhere in the document.
struct RunConfig {
    int dim = 1;
    FidelitySetup lf;
    FidelitySetup hf;
    ParamBox box;
    int sample_count = 0;  // M, LF training ensemble size
    int node_count = 0;    // m, HF collocation nodes
    double beta = 1.0;
    double lambda = 1e-6;
    IndicatorParams indicator;
    IgnitionSpec ignition;
    double t_scale = 1500.0;
    uint64_t seed = 0;
    uint64_t uq_seed = 0;
    std::string output_dir;
    int parallelism = 1;

    void validate() const;

    static RunConfig from_json_text(const std::string& text, const std::string& origin);
    static RunConfig from_json_file(const std::string& path);
    std::string to_json_text() const;
};

}  // namespace pyro
