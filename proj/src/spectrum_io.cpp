#include "gml/spectrum_io.hpp"

#include <bit>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace gml {

namespace {

constexpr char kMagic[8] = {'G', 'M', 'L', 'S', 'P', 'E', 'C', '1'};

template <class T>
void put(std::ostream& os, T v) {
    static_assert(std::endian::native == std::endian::little, "little-endian host assumed");
    char buf[sizeof(T)];
    std::memcpy(buf, &v, sizeof(T));
    os.write(buf, sizeof(T));
}

template <class T>
T get(std::istream& is) {
    char buf[sizeof(T)];
    if (!is.read(buf, sizeof(T))) throw std::runtime_error("read_spectra: truncated file");
    T v;
    std::memcpy(&v, buf, sizeof(T));
    return v;
}

}  // namespace

void write_spectra(const std::string& path, const std::vector<SpectrumRecord>& records) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw std::runtime_error("write_spectra: cannot open " + path);
    os.write(kMagic, sizeof kMagic);
    put<std::uint64_t>(os, records.size());
    for (const auto& r : records) {
        put(os, r.level);
        put(os, r.N);
        put(os, r.seed);
        put(os, r.trial);
        put<std::uint64_t>(os, r.eigenvalues.size());
        for (double x : r.eigenvalues) put(os, x);
    }
    if (!os) throw std::runtime_error("write_spectra: write failed for " + path);
}

std::vector<SpectrumRecord> read_spectra(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw std::runtime_error("read_spectra: cannot open " + path);
    char magic[8];
    if (!is.read(magic, 8) || std::memcmp(magic, kMagic, 8) != 0) throw std::runtime_error("read_spectra: bad magic");
    const auto n = get<std::uint64_t>(is);
    std::vector<SpectrumRecord> out(n);
    for (auto& r : out) {
        r.level = get<std::int32_t>(is);
        r.N = get<std::int32_t>(is);
        r.seed = get<std::uint64_t>(is);
        r.trial = get<std::uint64_t>(is);
        r.eigenvalues.resize(get<std::uint64_t>(is));
        for (double& x : r.eigenvalues) x = get<double>(is);
    }
    return out;
}

}  // namespace gml
