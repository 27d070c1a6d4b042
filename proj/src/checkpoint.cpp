#include "fene/checkpoint.hpp"

#include <cstdint>
#include <cstring>
#include <fstream>
#include <stdexcept>

namespace fene {

namespace {

constexpr char kMagic[8] = {'F', 'E', 'N', 'E', 'C', 'K', 'P', '1'};

template <typename T>
void write_pod(std::ostream& os, const T& v) {
    os.write(reinterpret_cast<const char*>(&v), sizeof(T));
}

template <typename T>
T read_pod(std::istream& is) {
    T v{};
    is.read(reinterpret_cast<char*>(&v), sizeof(T));
    return v;
}

void write_doubles(std::ostream& os, const double* p, std::int64_t n) {
    os.write(reinterpret_cast<const char*>(p), n * sizeof(double));
}

void read_doubles(std::istream& is, double* p, std::int64_t n) {
    is.read(reinterpret_cast<char*>(p), n * sizeof(double));
}

} // namespace

void save_checkpoint(const std::string& path, const MicroMacroState& state, const TorusGrid& grid,
                     const std::string& config_echo) {
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("save_checkpoint: cannot open " + path);
    os.write(kMagic, sizeof(kMagic));
    write_pod<std::int32_t>(os, grid.m());
    write_pod<std::int32_t>(os, state.c.q());
    write_pod(os, grid.l_box());
    write_pod(os, state.t);
    write_pod<std::int64_t>(os, static_cast<std::int64_t>(config_echo.size()));
    os.write(config_echo.data(), static_cast<std::streamsize>(config_echo.size()));

    const std::int64_t n = static_cast<std::int64_t>(grid.m()) * grid.m();
    const std::int64_t qn = static_cast<std::int64_t>(state.c.q()) * n;
    write_doubles(os, reinterpret_cast<const double*>(state.u.c1.data()), 2 * n);
    write_doubles(os, reinterpret_cast<const double*>(state.u.c2.data()), 2 * n);
    write_doubles(os, reinterpret_cast<const double*>(state.c.spec.data()), 2 * qn);
    write_doubles(os, state.c.phys.data(), qn);
    if (!os)
        throw std::runtime_error("save_checkpoint: write failed for " + path);
}

LoadedCheckpoint load_checkpoint(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw std::runtime_error("load_checkpoint: cannot open " + path);
    char magic[8];
    is.read(magic, sizeof(magic));
    if (!is || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
        throw std::runtime_error("load_checkpoint: bad magic/version in " + path);

    LoadedCheckpoint out;
    out.m = read_pod<std::int32_t>(is);
    out.q = read_pod<std::int32_t>(is);
    out.l_box = read_pod<double>(is);
    out.state.t = read_pod<double>(is);
    const auto len = read_pod<std::int64_t>(is);
    out.config_echo.resize(static_cast<size_t>(len));
    is.read(out.config_echo.data(), len);

    const std::int64_t n = static_cast<std::int64_t>(out.m) * out.m;
    const std::int64_t qn = static_cast<std::int64_t>(out.q) * n;
    out.state.u.c1.resize(out.m, out.m);
    out.state.u.c2.resize(out.m, out.m);
    out.state.c.spec.resize(out.q, n);
    out.state.c.phys.resize(out.q, n);
    read_doubles(is, reinterpret_cast<double*>(out.state.u.c1.data()), 2 * n);
    read_doubles(is, reinterpret_cast<double*>(out.state.u.c2.data()), 2 * n);
    read_doubles(is, reinterpret_cast<double*>(out.state.c.spec.data()), 2 * qn);
    read_doubles(is, out.state.c.phys.data(), qn);
    if (!is)
        throw std::runtime_error("load_checkpoint: truncated file " + path);
    return out;
}

} // namespace fene
