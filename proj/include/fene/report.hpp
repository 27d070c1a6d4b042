#pragma once

#include <string>
#include <vector>

#include "fene/diagnostics.hpp"

namespace fene {

/// Records as CSV with the fixed column order (the header line is the
/// schema contract); doubles are printed with 17 significant digits so the
/// round trip is exact.
std::string records_to_csv(const std::vector<DiagnosticsRecord>& records);
std::vector<DiagnosticsRecord> records_from_csv(const std::string& csv);

/// Plot-ready long format: t,series,value.
std::string records_to_long_csv(const std::vector<DiagnosticsRecord>& records);

/// Validates a stream (finite, nonnegative norms, nondecreasing running
/// integrals); returns an empty string when healthy, else a description.
std::string validate_records(const std::vector<DiagnosticsRecord>& records);

void write_text_file(const std::string& path, const std::string& content);
std::string read_text_file(const std::string& path);

} // namespace fene
