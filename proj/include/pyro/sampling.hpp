#pragma once

#include "pyro/params.hpp"

#include <cstdint>
#include <string>
#include <vector>

namespace pyro {

struct ParamDim {
    std::string name;
    double lower = 0.0;
    double upper = 0.0;
};

/// Axis-aligned box of uncertain inputs.
struct ParamBox {
    std::vector<ParamDim> dims;

    size_t size() const { return dims.size(); }

    void validate() const {
        if (dims.empty()) throw Error(ErrorCode::InvalidArgument, "parameter box is empty");
        for (const auto& d : dims)
            if (!(d.lower < d.upper))
                throw Error(ErrorCode::InvalidArgument,
                            "parameter box: lower must be < upper for '" + d.name + "'");
    }

    bool contains(const ParamVector& z) const {
        for (const auto& d : dims) {
            const double v = z.get(d.name);
            if (v < d.lower || v > d.upper) return false;
        }
        return true;
    }

    std::vector<std::string> names() const {
        std::vector<std::string> out;
        out.reserve(dims.size());
        for (const auto& d : dims) out.push_back(d.name);
        return out;
    }
};

/// Row-major sample matrix with parameter names, seed, and method tag.
struct SampleSet {
    std::vector<std::string> names;
    std::vector<double> data;  // rows * names.size()
    int rows = 0;
    uint64_t seed = 0;
    std::string method = "lhs";

    ParamVector row(int i) const {
        std::vector<double> vals(names.size());
        for (size_t j = 0; j < names.size(); ++j) vals[j] = data[size_t(i) * names.size() + j];
        return ParamVector(names, std::move(vals));
    }

    double value(int i, size_t j) const { return data[size_t(i) * names.size() + j]; }
};

/// Latin hypercube sample: one point per equal-width stratum in every
/// dimension, uniform placement within the stratum, deterministic per seed.
SampleSet lhs_sample(const ParamBox& box, int count, uint64_t seed);

void write_sample_csv(const std::string& path, const SampleSet& s);
SampleSet read_sample_csv(const std::string& path);

}  // namespace pyro
