#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <string_view>

#include "laoa/synthesis.hpp"

namespace laoa {

// Text format:
//   aoa-matrix 1 <rows> <cols> <Z|X>
//   <re>:<im> <re>:<im> ...      (one line per row)
// Lines starting with '#' are comments. Values use the shortest decimal form
// that parses back to the same double, so a write/read cycle is bit-exact.

/// Shortest decimal representation that parses back to the same double.
std::string format_double(double v);

/// Parses a whole token as a double. Returns false on junk or trailing text.
bool parse_double(std::string_view token, double& out);

void write_matrix(std::ostream& out, const SnapshotMatrix& snap);
SnapshotMatrix read_matrix(std::istream& in);

void write_matrix_file(const SnapshotMatrix& snap, const std::filesystem::path& path);
SnapshotMatrix read_matrix_file(const std::filesystem::path& path);

}  // namespace laoa
