#pragma once
#include <cstdint>
#include <string>
#include <vector>

namespace gml {

// One record: level, N, seed, trial, eigenvalue count, then little-endian doubles.
struct SpectrumRecord {
    std::int32_t level = 0;
    std::int32_t N = 0;
    std::uint64_t seed = 0;
    std::uint64_t trial = 0;
    std::vector<double> eigenvalues;
};

void write_spectra(const std::string& path, const std::vector<SpectrumRecord>& records);
std::vector<SpectrumRecord> read_spectra(const std::string& path);

}  // namespace gml
