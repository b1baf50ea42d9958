#include "wcep/matrix_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

namespace wcep {

using nlohmann::json;

json matrix_to_json(const CMatrix& a) {
  if (!all_finite(a)) throw ParseError("cannot serialize non-finite entries");
  json data = json::array();
  for (Eigen::Index i = 0; i < a.rows(); ++i) {
    for (Eigen::Index j = 0; j < a.cols(); ++j) {
      data.push_back(json::array({a(i, j).real(), a(i, j).imag()}));
    }
  }
  return json{{"rows", a.rows()}, {"cols", a.cols()}, {"data", std::move(data)}};
}

namespace {

Eigen::Index positive_dimension(const json& j, const char* key) {
  const auto it = j.find(key);
  if (it == j.end()) throw ParseError(std::string("missing key \"") + key + "\"");
  if (!it->is_number_integer()) {
    throw ParseError(std::string("\"") + key + "\" must be an integer");
  }
  const auto v = it->get<long long>();
  if (v <= 0) throw ParseError(std::string("\"") + key + "\" must be positive");
  return static_cast<Eigen::Index>(v);
}

double finite_number(const json& v) {
  if (!v.is_number()) throw ParseError("matrix entries must be numbers");
  const double d = v.get<double>();
  if (!std::isfinite(d)) throw ParseError("matrix entries must be finite");
  return d;
}

}  // namespace

CMatrix matrix_from_json(const json& j) {
  if (!j.is_object()) throw ParseError("matrix must be a JSON object");
  for (const auto& [key, _] : j.items()) {
    if (key != "rows" && key != "cols" && key != "data") {
      throw ParseError("unexpected key \"" + key + "\"");
    }
  }
  const Eigen::Index rows = positive_dimension(j, "rows");
  const Eigen::Index cols = positive_dimension(j, "cols");
  const auto it = j.find("data");
  if (it == j.end()) throw ParseError("missing key \"data\"");
  if (!it->is_array()) throw ParseError("\"data\" must be an array");
  if (static_cast<Eigen::Index>(it->size()) != rows * cols) {
    throw ParseError("\"data\" length must equal rows * cols");
  }
  CMatrix a(rows, cols);
  for (Eigen::Index k = 0; k < rows * cols; ++k) {
    const json& entry = (*it)[static_cast<std::size_t>(k)];
    if (!entry.is_array() || entry.size() != 2) {
      throw ParseError("each entry must be a [re, im] pair");
    }
    a(k / cols, k % cols) = Complex(finite_number(entry[0]), finite_number(entry[1]));
  }
  return a;
}

std::string dump_matrix(const CMatrix& a) { return matrix_to_json(a).dump(); }

CMatrix parse_matrix(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw ParseError(std::string("invalid JSON: ") + e.what());
  }
  return matrix_from_json(j);
}

CMatrix read_matrix_file(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ParseError("cannot open " + path.string());
  std::stringstream buf;
  buf << in.rdbuf();
  try {
    return parse_matrix(buf.str());
  } catch (const ParseError& e) {
    throw ParseError(path.string() + ": " + e.what());
  }
}

void write_matrix_file(const std::filesystem::path& path, const CMatrix& a) {
  std::ofstream out(path);
  if (!out) throw ParseError("cannot write " + path.string());
  out << dump_matrix(a) << '\n';
  if (!out) throw ParseError("write failed for " + path.string());
}

}  // namespace wcep
