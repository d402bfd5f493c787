#include "pyro/sampling.hpp"

#include "pyro/csv.hpp"
#include "pyro/rng.hpp"

#include <numeric>

namespace pyro {

SampleSet lhs_sample(const ParamBox& box, int count, uint64_t seed) {
    box.validate();
    if (count < 1) throw Error(ErrorCode::InvalidArgument, "lhs_sample: count must be >= 1");

    const size_t d = box.size();
    SampleSet out;
    out.names = box.names();
    out.rows = count;
    out.seed = seed;
    out.data.assign(size_t(count) * d, 0.0);

    Rng rng(seed);
    std::vector<int> perm(count);
    for (size_t j = 0; j < d; ++j) {
        // Fisher-Yates stratum permutation, then a uniform offset per stratum.
        std::iota(perm.begin(), perm.end(), 0);
        for (int i = count - 1; i > 0; --i)
            std::swap(perm[i], perm[size_t(rng.below(uint64_t(i) + 1))]);
        const double width = (box.dims[j].upper - box.dims[j].lower) / count;
        for (int i = 0; i < count; ++i) {
            const double u = rng.uniform01();
            out.data[size_t(i) * d + j] = box.dims[j].lower + (perm[i] + u) * width;
        }
    }
    return out;
}

void write_sample_csv(const std::string& path, const SampleSet& s) {
    CsvTable t;
    t.header = s.names;
    t.rows.reserve(s.rows);
    for (int i = 0; i < s.rows; ++i) {
        std::vector<std::string> row;
        row.reserve(s.names.size());
        for (size_t j = 0; j < s.names.size(); ++j) row.push_back(fmt17(s.value(i, j)));
        t.rows.push_back(std::move(row));
    }
    write_csv(path, t);
}

SampleSet read_sample_csv(const std::string& path) {
    const CsvTable t = read_csv(path);
    SampleSet s;
    s.names = t.header;
    s.rows = int(t.rows.size());
    s.method = "csv";
    s.data.reserve(t.rows.size() * t.header.size());
    for (size_t r = 0; r < t.rows.size(); ++r)
        for (const auto& cell : t.rows[r])
            s.data.push_back(parse_double(cell, path + " row " + std::to_string(r + 2)));
    return s;
}

}  // namespace pyro
