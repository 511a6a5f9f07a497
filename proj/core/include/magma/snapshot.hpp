#ifndef MAGMA_SNAPSHOT_HPP
#define MAGMA_SNAPSHOT_HPP

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "magma/grid.hpp"

namespace magma {

// Binary field snapshot, little endian:
//   char[16]  "MAGMAFLD" zero padded
//   u32       version (1)
//   u32       d
//   u64[d]    n_points
//   f64[d]    lengths
//   f64[...]  values, row-major, last axis fastest
inline constexpr std::uint32_t kSnapshotVersion = 1;

void write_snapshot(std::ostream& out, const Field& f);
Field read_snapshot(std::istream& in);

void save_snapshot(const std::filesystem::path& path, const Field& f);
Field load_snapshot(const std::filesystem::path& path);

}  // namespace magma

#endif  // MAGMA_SNAPSHOT_HPP
