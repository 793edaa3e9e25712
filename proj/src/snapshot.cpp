#include "ob/snapshot.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>

#include "ob/errors.hpp"
#include "ob/fft.hpp"

namespace ob {
namespace {

constexpr char kMagic[8] = {'O', 'B', 'F', 'L', 'D', '0', '0', '1'};

template <typename T>
void put(std::ostream& os, T v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T get(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    return v;
}

}  // namespace

void write_snapshot(const std::string& path, const SpectralField& f, double time, const std::string& name) {
    std::ofstream os(path, std::ios::binary);
    if (!os) throw IoFailure("cannot open for writing: " + path);
    const GridSpec& g = f.grid();
    os.write(kMagic, 8);
    put<std::uint32_t>(os, 1);  // version
    put<std::uint32_t>(os, static_cast<std::uint32_t>(g.dim));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(g.n));
    put<std::uint32_t>(os, static_cast<std::uint32_t>(f.rank()));
    put<double>(os, g.L);
    put<double>(os, g.dealias_fraction);
    put<double>(os, time);
    put<std::uint32_t>(os, static_cast<std::uint32_t>(name.size()));
    os.write(name.data(), static_cast<std::streamsize>(name.size()));
    for (int c = 0; c < f.rank(); ++c) {
        RealSamples s = fft::to_phys(g, f.comp(c));
        os.write(reinterpret_cast<const char*>(s.data()), static_cast<std::streamsize>(s.size() * sizeof(double)));
    }
    if (!os) throw IoFailure("short write: " + path);
}

Snapshot read_snapshot(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is) throw IoFailure("cannot open for reading: " + path);
    char magic[8];
    is.read(magic, 8);
    if (!is || std::memcmp(magic, kMagic, 8) != 0) throw IoFailure("bad snapshot magic: " + path);
    const auto version = get<std::uint32_t>(is);
    if (version != 1) throw IoFailure("unsupported snapshot version");
    GridSpec g;
    g.dim = static_cast<int>(get<std::uint32_t>(is));
    g.n = static_cast<int>(get<std::uint32_t>(is));
    const int rank = static_cast<int>(get<std::uint32_t>(is));
    g.L = get<double>(is);
    g.dealias_fraction = get<double>(is);
    const double time = get<double>(is);
    const auto name_len = get<std::uint32_t>(is);
    std::string name(name_len, '\0');
    is.read(name.data(), name_len);
    g.validate();
    std::vector<RealSamples> comps(rank, RealSamples(g.points()));
    for (auto& s : comps)
        is.read(reinterpret_cast<char*>(s.data()), static_cast<std::streamsize>(s.size() * sizeof(double)));
    if (!is) throw IoFailure("short read: " + path);
    return {from_phys_all(g, comps), time, name};
}

}  // namespace ob
