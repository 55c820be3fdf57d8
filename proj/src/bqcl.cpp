#include "pilotlim/bqcl.hpp"

#include <array>
#include <bit>
#include <cstring>
#include <fstream>
#include <istream>
#include <ostream>

#include "pilotlim/error.hpp"

namespace pilotlim {
namespace {

template <class T>
void put_le(std::ostream& out, T value) {
    static_assert(sizeof(T) == 4 || sizeof(T) == 8);
    using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
    auto bits = std::bit_cast<U>(value);
    std::array<char, sizeof(T)> bytes{};
    for (std::size_t i = 0; i < sizeof(T); ++i) {
        bytes[i] = static_cast<char>((bits >> (8 * i)) & 0xffu);
    }
    out.write(bytes.data(), bytes.size());
}

template <class T>
T get_le(std::istream& in) {
    using U = std::conditional_t<sizeof(T) == 4, std::uint32_t, std::uint64_t>;
    std::array<unsigned char, sizeof(T)> bytes{};
    in.read(reinterpret_cast<char*>(bytes.data()), bytes.size());
    if (!in) fail(ErrorKind::io, "BQCL: truncated stream");
    U bits = 0;
    for (std::size_t i = 0; i < sizeof(T); ++i) bits |= static_cast<U>(bytes[i]) << (8 * i);
    return std::bit_cast<T>(bits);
}

}  // namespace

void write_bqcl(std::ostream& out, const ComplexField& field, const Units& units) {
    out.write("BQCL", 4);
    put_le<std::uint32_t>(out, kBqclVersion);
    put_le<std::uint32_t>(out, static_cast<std::uint32_t>(field.size()));
    put_le<double>(out, field.grid.x_min());
    put_le<double>(out, field.grid.dx());
    put_le<double>(out, field.time);
    put_le<double>(out, units.hbar);
    put_le<double>(out, units.mass);
    for (const auto& z : field.values) {
        put_le<double>(out, z.real());
        put_le<double>(out, z.imag());
    }
    if (!out) fail(ErrorKind::io, "BQCL: write failed");
}

void write_bqcl(const std::filesystem::path& path, const ComplexField& field, const Units& units) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::io, "BQCL: cannot open " + path.string() + " for writing");
    write_bqcl(out, field, units);
}

Snapshot read_bqcl(std::istream& in) {
    char magic[4] = {};
    in.read(magic, 4);
    if (!in || std::memcmp(magic, "BQCL", 4) != 0) fail(ErrorKind::io, "BQCL: bad magic");
    const auto version = get_le<std::uint32_t>(in);
    if (version != kBqclVersion) {
        fail(ErrorKind::io, "BQCL: unsupported version " + std::to_string(version));
    }
    const auto n = get_le<std::uint32_t>(in);
    const double x_min = get_le<double>(in);
    const double dx = get_le<double>(in);
    const double time = get_le<double>(in);
    Units units;
    units.hbar = get_le<double>(in);
    units.mass = get_le<double>(in);
    auto grid = Grid1D::from_spacing(x_min, dx, n);
    std::vector<Complex> values(n);
    for (auto& z : values) {
        const double re = get_le<double>(in);
        const double im = get_le<double>(in);
        z = {re, im};
    }
    return Snapshot{ComplexField(grid, std::move(values), time), units};
}

Snapshot read_bqcl(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) fail(ErrorKind::io, "BQCL: cannot open " + path.string());
    return read_bqcl(in);
}

}  // namespace pilotlim
