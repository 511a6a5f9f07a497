#include "magma/snapshot.hpp"

#include <algorithm>
#include <array>
#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "magma/error.hpp"

namespace magma {
namespace {

constexpr std::array<char, 16> kMagic{'M', 'A', 'G', 'M', 'A', 'F', 'L', 'D'};

template <class T>
void put(std::ostream& out, T value) {
    static_assert(std::is_trivially_copyable_v<T>);
    std::array<char, sizeof(T)> bytes;
    std::memcpy(bytes.data(), &value, sizeof(T));
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    out.write(bytes.data(), sizeof(T));
}

template <class T>
T get(std::istream& in) {
    std::array<char, sizeof(T)> bytes;
    if (!in.read(bytes.data(), sizeof(T))) throw IoError("snapshot: unexpected end of stream");
    if constexpr (std::endian::native == std::endian::big) std::reverse(bytes.begin(), bytes.end());
    T value;
    std::memcpy(&value, bytes.data(), sizeof(T));
    return value;
}

}  // namespace

void write_snapshot(std::ostream& out, const Field& f) {
    const auto& grid = f.grid();
    out.write(kMagic.data(), kMagic.size());
    put<std::uint32_t>(out, kSnapshotVersion);
    put<std::uint32_t>(out, static_cast<std::uint32_t>(grid.dim()));
    for (auto n : grid.n_points()) put<std::uint64_t>(out, n);
    for (auto l : grid.lengths()) put<double>(out, l);
    for (double v : f.values()) put<double>(out, v);
    if (!out) throw IoError("snapshot: write failed");
}

Field read_snapshot(std::istream& in) {
    std::array<char, 16> magic{};
    if (!in.read(magic.data(), magic.size()) || magic != kMagic) throw IoError("snapshot: bad magic");
    const auto version = get<std::uint32_t>(in);
    if (version != kSnapshotVersion) throw IoError("snapshot: unsupported version " + std::to_string(version));
    const auto d = get<std::uint32_t>(in);
    if (d == 0 || d > 16) throw IoError("snapshot: implausible dimension");
    std::vector<std::size_t> n(d);
    std::vector<double> lengths(d);
    for (auto& v : n) v = static_cast<std::size_t>(get<std::uint64_t>(in));
    for (auto& v : lengths) v = get<double>(in);
    TorusGrid grid(std::move(n), std::move(lengths));
    std::vector<double> values(grid.size());
    for (auto& v : values) v = get<double>(in);
    return Field(std::move(grid), std::move(values));
}

void save_snapshot(const std::filesystem::path& path, const Field& f) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw IoError("cannot open " + path.string() + " for writing");
    write_snapshot(out, f);
}

Field load_snapshot(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw IoError("cannot open " + path.string());
    return read_snapshot(in);
}

}  // namespace magma
