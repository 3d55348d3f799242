#pragma once

// Wire formats. Matrices are JSON arrays of rows with complex entries
// encoded as [re, im]; CSV outputs start with '#'-prefixed manifest lines
// followed by a column header and rows printed with 17 significant digits,
// so that re-running a command with the same inputs reproduces the body
// byte for byte.

#include "symsep/core.hpp"
#include "symsep/decompose.hpp"
#include "symsep/groundstate.hpp"
#include "symsep/range.hpp"

#include <json.hpp>

#include <cstdio>
#include <ctime>
#include <fstream>
#include <optional>

namespace symsep {

// Malformed or incomplete JSON input; distinct from validation failures of
// structurally well-formed data.
struct json_schema_error : std::runtime_error {
  using std::runtime_error::runtime_error;
};

namespace jsonio {

using nlohmann::json;

inline const json& field(const json& j, const std::string& key,
                         const std::string& where) {
  if (!j.is_object() || !j.contains(key)) {
    throw json_schema_error(where + ": missing key '" + key + "'");
  }
  return j.at(key);
}

inline int int_field(const json& j, const std::string& key,
                     const std::string& where) {
  const json& v = field(j, key, where);
  if (!v.is_number_integer()) {
    throw json_schema_error(where + ": key '" + key + "' must be an integer");
  }
  return v.get<int>();
}

inline Complex complex_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() ||
      !j[1].is_number()) {
    throw json_schema_error(where + ": complex entries are [re, im] pairs");
  }
  return Complex(j[0].get<double>(), j[1].get<double>());
}

inline json complex_to_json(const Complex& z) {
  return json::array({z.real(), z.imag()});
}

inline Matrix matrix_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) {
    throw json_schema_error(where + ": matrix must be a nonempty array of "
                            "rows");
  }
  const std::size_t rows = j.size();
  std::size_t cols = 0;
  Matrix m;
  for (std::size_t r = 0; r < rows; ++r) {
    const json& row = j[r];
    if (!row.is_array() || row.empty()) {
      throw json_schema_error(where + ": matrix rows must be nonempty "
                              "arrays");
    }
    if (r == 0) {
      cols = row.size();
      m.resize(static_cast<Eigen::Index>(rows),
               static_cast<Eigen::Index>(cols));
    } else if (row.size() != cols) {
      throw json_schema_error(where + ": ragged matrix rows");
    }
    for (std::size_t c = 0; c < cols; ++c) {
      m(static_cast<Eigen::Index>(r), static_cast<Eigen::Index>(c)) =
          complex_from_json(row[c], where);
    }
  }
  return m;
}

inline json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) {
      row.push_back(complex_to_json(m(r, c)));
    }
    rows.push_back(std::move(row));
  }
  return rows;
}

inline Vector vector_from_json(const json& j, const std::string& where) {
  if (!j.is_array() || j.empty()) {
    throw json_schema_error(where + ": vector must be a nonempty array");
  }
  Vector v(static_cast<Eigen::Index>(j.size()));
  for (std::size_t i = 0; i < j.size(); ++i) {
    v(static_cast<Eigen::Index>(i)) = complex_from_json(j[i], where);
  }
  return v;
}

inline json vector_to_json(const Vector& v) {
  json out = json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) {
    out.push_back(complex_to_json(v(i)));
  }
  return out;
}

// {"n":., "N":., "terms":[{"weight":., "factors":[vector, ...]} ...]}
inline SeparableDecomposition separable_decomposition_from_json(
    const json& j) {
  const std::string where = "separable decomposition";
  const int n = int_field(j, "n", where);
  const int N = int_field(j, "N", where);
  const json& terms = field(j, "terms", where);
  if (!terms.is_array() || terms.empty()) {
    throw json_schema_error(where + ": key 'terms' must be a nonempty array");
  }
  std::vector<PureProductTerm> out;
  for (const json& t : terms) {
    const json& w = field(t, "weight", where);
    if (!w.is_number()) {
      throw json_schema_error(where + ": key 'weight' must be a number");
    }
    const json& factors = field(t, "factors", where);
    if (!factors.is_array()) {
      throw json_schema_error(where + ": key 'factors' must be an array");
    }
    PureProductTerm term;
    term.weight = w.get<double>();
    for (const json& f : factors) {
      term.factors.emplace_back(vector_from_json(f, where));
    }
    out.push_back(std::move(term));
  }
  return SeparableDecomposition(n, N, std::move(out));
}

inline json separable_decomposition_to_json(const SeparableDecomposition& d) {
  json terms = json::array();
  for (const PureProductTerm& t : d.terms()) {
    json factors = json::array();
    for (const PureState& f : t.factors) {
      factors.push_back(vector_to_json(f.amplitudes()));
    }
    terms.push_back(json{{"weight", t.weight}, {"factors", factors}});
  }
  return json{{"n", d.n()}, {"N", d.N()}, {"terms", terms}};
}

inline json symmetric_decomposition_to_json(
    const SymmetricProductDecomposition& d) {
  json terms = json::array();
  for (const SymmetricProductTerm& t : d.terms()) {
    terms.push_back(json{{"weight", t.weight},
                         {"vector", vector_to_json(t.state.amplitudes())}});
  }
  return json{{"n", d.n()}, {"N", d.N()}, {"terms", terms}};
}

inline SymmetricProductDecomposition symmetric_decomposition_from_json(
    const json& j) {
  const std::string where = "symmetric product decomposition";
  const int n = int_field(j, "n", where);
  const int N = int_field(j, "N", where);
  const json& terms = field(j, "terms", where);
  if (!terms.is_array() || terms.empty()) {
    throw json_schema_error(where + ": key 'terms' must be a nonempty array");
  }
  std::vector<SymmetricProductTerm> out;
  for (const json& t : terms) {
    const json& w = field(t, "weight", where);
    if (!w.is_number()) {
      throw json_schema_error(where + ": key 'weight' must be a number");
    }
    out.push_back(SymmetricProductTerm{
        w.get<double>(),
        PureState(vector_from_json(field(t, "vector", where), where))});
  }
  return SymmetricProductDecomposition(n, N, std::move(out));
}

// {"n":., "k":., "terms":[{"name":., "matrix":.} ...], "x":[...]}
inline KLocalSpec klocal_spec_from_json(const json& j) {
  const std::string where = "k-local spec";
  const int n = int_field(j, "n", where);
  const int k = int_field(j, "k", where);
  const json& terms = field(j, "terms", where);
  if (!terms.is_array() || terms.empty()) {
    throw json_schema_error(where + ": key 'terms' must be a nonempty array");
  }
  std::vector<KLocalTerm> ops;
  for (const json& t : terms) {
    const json& name = field(t, "name", where);
    if (!name.is_string()) {
      throw json_schema_error(where + ": key 'name' must be a string");
    }
    ops.push_back(KLocalTerm{
        name.get<std::string>(),
        HermitianOperator(matrix_from_json(field(t, "matrix", where),
                                           where))});
  }
  const json& xj = field(j, "x", where);
  if (!xj.is_array()) {
    throw json_schema_error(where + ": key 'x' must be an array");
  }
  std::vector<double> x;
  for (const json& v : xj) {
    if (!v.is_number()) {
      throw json_schema_error(where + ": coefficients must be numbers");
    }
    x.push_back(v.get<double>());
  }
  return KLocalSpec(n, k, std::move(ops), std::move(x));
}

// {"n":., "k":., "observables":[{"name":., "matrix":.} ...]}
inline ObservableTuple observable_tuple_from_json(const json& j) {
  const std::string where = "observable tuple";
  const int n = int_field(j, "n", where);
  const int k = int_field(j, "k", where);
  const json& obs = field(j, "observables", where);
  if (!obs.is_array() || obs.empty()) {
    throw json_schema_error(where +
                            ": key 'observables' must be a nonempty array");
  }
  std::vector<HermitianOperator> ops;
  for (const json& t : obs) {
    field(t, "name", where);
    ops.push_back(HermitianOperator(
        matrix_from_json(field(t, "matrix", where), where)));
  }
  return ObservableTuple(n, k, std::move(ops));
}

// {"n":., "N":., "matrix":.}
struct WitnessInput {
  int n = 0;
  int N = 0;
  DensityMatrix rho;
};

inline WitnessInput witness_input_from_json(const json& j) {
  const std::string where = "witness input";
  const int n = int_field(j, "n", where);
  const int N = int_field(j, "N", where);
  Matrix m = matrix_from_json(field(j, "matrix", where), where);
  return WitnessInput{n, N, DensityMatrix(std::move(m))};
}

}  // namespace jsonio

// Provenance header recorded verbatim at the top of every output file.
struct RunManifest {
  std::string command;
  std::string input_path;
  std::string output_path;
  std::uint64_t seed = 0;
  std::string tolerances;  // "default" or the overridden values
  std::string timestamp;   // ISO 8601, UTC

  static std::string now_utc() {
    std::time_t t = std::time(nullptr);
    char buf[32];
    std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", std::gmtime(&t));
    return buf;
  }

  std::vector<std::string> lines() const {
    return {"command: " + command,
            "input: " + input_path,
            "output: " + output_path,
            "seed: " + std::to_string(seed),
            "tolerances: " + tolerances,
            "timestamp: " + timestamp};
  }

  nlohmann::json to_json() const {
    return nlohmann::json{{"command", command},
                          {"input", input_path},
                          {"output", output_path},
                          {"seed", seed},
                          {"tolerances", tolerances},
                          {"timestamp", timestamp}};
  }
};

// 17 significant digits: enough to reproduce any double exactly.
inline std::string format_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

class CsvWriter {
 public:
  CsvWriter(const std::string& path, const RunManifest& manifest)
      : out_(path) {
    if (!out_) {
      throw validation_error("cannot open output file: " + path);
    }
    for (const std::string& line : manifest.lines()) {
      out_ << "# " << line << "\n";
    }
  }

  void header(const std::vector<std::string>& columns) {
    for (std::size_t i = 0; i < columns.size(); ++i) {
      out_ << (i ? "," : "") << columns[i];
    }
    out_ << "\n";
  }

  void row(const std::vector<std::string>& cells) {
    for (std::size_t i = 0; i < cells.size(); ++i) {
      out_ << (i ? "," : "") << cells[i];
    }
    out_ << "\n";
  }

 private:
  std::ofstream out_;
};

}  // namespace symsep
