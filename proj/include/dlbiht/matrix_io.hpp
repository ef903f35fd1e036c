#pragma once

#include <filesystem>
#include <iosfwd>
#include <span>

#include "dlbiht/types.hpp"

namespace dlbiht {

// Plain-text matrix format: a header line "rows cols", then one line per row
// with whitespace-separated values printed at 17 significant digits, which
// round-trips IEEE doubles exactly.

void write_matrix(std::ostream& os, const Matrix& m);
Matrix read_matrix(std::istream& is);

void save_matrix(const std::filesystem::path& path, const Matrix& m);
Matrix load_matrix(const std::filesystem::path& path);

/// One-column trace file (cost histories) in the same format.
void save_trace(const std::filesystem::path& path, std::span<const double> values);

}  // namespace dlbiht
