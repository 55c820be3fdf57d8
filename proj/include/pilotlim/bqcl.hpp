#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>

#include "pilotlim/grid.hpp"

namespace pilotlim {

/// BQCL snapshot layout (little-endian):
///   "BQCL" | u32 version | u32 n | f64 x_min | f64 dx | f64 time
///   | f64 hbar | f64 mass | n × (f64 re, f64 im)
inline constexpr std::uint32_t kBqclVersion = 1;
inline constexpr std::size_t kBqclHeaderBytes = 4 + 4 + 4 + 5 * 8;

struct Snapshot {
    ComplexField field;
    Units units;
};

void write_bqcl(std::ostream& out, const ComplexField& field, const Units& units);
void write_bqcl(const std::filesystem::path& path, const ComplexField& field, const Units& units);

Snapshot read_bqcl(std::istream& in);
Snapshot read_bqcl(const std::filesystem::path& path);

}  // namespace pilotlim
