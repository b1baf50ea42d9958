#pragma once

#include "wcep/matrix.hpp"

#include <json.hpp>

#include <filesystem>
#include <string>

namespace wcep {

/// Malformed matrix or report payload.
class ParseError : public Error {
 public:
  using Error::Error;
};

// Matrix file format:
//   {"rows": n, "cols": m, "data": [[re, im], ...]}
// with `data` row-major and of length n * m. No other keys are accepted.

nlohmann::json matrix_to_json(const CMatrix& a);
CMatrix matrix_from_json(const nlohmann::json& j);

/// Serializes with 17 significant digits so values re-parse bit-identically.
std::string dump_matrix(const CMatrix& a);
CMatrix parse_matrix(const std::string& text);

CMatrix read_matrix_file(const std::filesystem::path& path);
void write_matrix_file(const std::filesystem::path& path, const CMatrix& a);

}  // namespace wcep
