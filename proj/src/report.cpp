#include "fene/report.hpp"

#include <array>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace fene {

namespace {

constexpr int kColumns = 19;

std::array<double, kColumns> to_row(const DiagnosticsRecord& r) {
    return {r.t,       r.u_l2,    r.u_h1,        r.u_hs, r.grad_u_hsm1, r.psi_L2, r.psi_1L2,
            r.psi_sL2, r.grad_psi_sL2, r.psi_sH1dot, r.E1, r.E2, r.f, r.g,
            r.split_u, r.split_psi, r.du_residual, r.mass_max, r.div_max};
}

DiagnosticsRecord from_row(const std::array<double, kColumns>& v) {
    DiagnosticsRecord r;
    r.t = v[0];
    r.u_l2 = v[1];
    r.u_h1 = v[2];
    r.u_hs = v[3];
    r.grad_u_hsm1 = v[4];
    r.psi_L2 = v[5];
    r.psi_1L2 = v[6];
    r.psi_sL2 = v[7];
    r.grad_psi_sL2 = v[8];
    r.psi_sH1dot = v[9];
    r.E1 = v[10];
    r.E2 = v[11];
    r.f = v[12];
    r.g = v[13];
    r.split_u = v[14];
    r.split_psi = v[15];
    r.du_residual = v[16];
    r.mass_max = v[17];
    r.div_max = v[18];
    return r;
}

void append_double(std::string& out, double v) {
    char buf[32];
    const int len = std::snprintf(buf, sizeof(buf), "%.17g", v);
    out.append(buf, static_cast<size_t>(len));
}

} // namespace

std::string records_to_csv(const std::vector<DiagnosticsRecord>& records) {
    std::string out(kRecordCsvHeader);
    out.push_back('\n');
    for (const auto& r : records) {
        const auto row = to_row(r);
        for (int i = 0; i < kColumns; ++i) {
            if (i) out.push_back(',');
            append_double(out, row[i]);
        }
        out.push_back('\n');
    }
    return out;
}

std::vector<DiagnosticsRecord> records_from_csv(const std::string& csv) {
    std::istringstream is(csv);
    std::string line;
    if (!std::getline(is, line) || line != kRecordCsvHeader)
        throw std::runtime_error("records_from_csv: header does not match the v1 schema");
    std::vector<DiagnosticsRecord> out;
    while (std::getline(is, line)) {
        if (line.empty()) continue;
        std::array<double, kColumns> row{};
        const char* p = line.data();
        const char* end = line.data() + line.size();
        for (int i = 0; i < kColumns; ++i) {
            auto [next, ec] = std::from_chars(p, end, row[i]);
            if (ec != std::errc{})
                throw std::runtime_error("records_from_csv: bad number in row " + std::to_string(out.size()));
            p = next;
            if (i + 1 < kColumns) {
                if (p >= end || *p != ',')
                    throw std::runtime_error("records_from_csv: wrong column count in row " +
                                             std::to_string(out.size()));
                ++p;
            }
        }
        out.push_back(from_row(row));
    }
    return out;
}

std::string records_to_long_csv(const std::vector<DiagnosticsRecord>& records) {
    static constexpr std::array<const char*, kColumns - 1> names = {
        "u_l2", "u_h1", "u_hs", "grad_u_hsm1", "psi_L2", "psi_1L2", "psi_sL2", "grad_psi_sL2",
        "psi_sH1dot", "E1", "E2", "f", "g", "split_u", "split_psi", "du_residual", "mass_max", "div_max"};
    std::string out = "t,series,value\n";
    for (const auto& r : records) {
        const auto row = to_row(r);
        for (size_t i = 0; i < names.size(); ++i) {
            append_double(out, r.t);
            out.push_back(',');
            out += names[i];
            out.push_back(',');
            append_double(out, row[i + 1]);
            out.push_back('\n');
        }
    }
    return out;
}

std::string validate_records(const std::vector<DiagnosticsRecord>& records) {
    double prev_e1 = -1.0, prev_e2 = -1.0;
    for (size_t i = 0; i < records.size(); ++i) {
        const auto& r = records[i];
        if (!r.all_finite()) return "record " + std::to_string(i) + " contains a non-finite value";
        for (double v : {r.u_l2, r.u_h1, r.u_hs, r.grad_u_hsm1, r.psi_L2, r.psi_1L2, r.psi_sL2, r.grad_psi_sL2,
                         r.psi_sH1dot, r.E1, r.E2})
            if (v < 0.0) return "record " + std::to_string(i) + " contains a negative norm";
        if (r.E1 < prev_e1 || r.E2 < prev_e2)
            return "running energy integral decreased at record " + std::to_string(i);
        prev_e1 = r.E1;
        prev_e2 = r.E2;
    }
    return {};
}

void write_text_file(const std::string& path, const std::string& content) {
    std::ofstream os(path, std::ios::binary);
    if (!os)
        throw std::runtime_error("cannot open for writing: " + path);
    os.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!os)
        throw std::runtime_error("write failed: " + path);
}

std::string read_text_file(const std::string& path) {
    std::ifstream is(path, std::ios::binary);
    if (!is)
        throw std::runtime_error("cannot open: " + path);
    std::stringstream ss;
    ss << is.rdbuf();
    return ss.str();
}

} // namespace fene
