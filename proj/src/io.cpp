#include "qmoney/io.hpp"

#include <fstream>
#include <sstream>

#include <json.hpp>

namespace qmoney::io {

namespace {

using nlohmann::json;

const json& field(const json& doc, const char* name) {
  if (!doc.is_object() || !doc.contains(name)) throw ParseError(std::string("missing field '") + name + "'");
  return doc.at(name);
}

Complex parse_complex(const json& entry) {
  if (entry.is_number()) return {entry.get<double>(), 0.0};
  if (!entry.is_array() || entry.size() != 2 || !entry[0].is_number() || !entry[1].is_number()) {
    throw ParseError("complex entries must be [re, im] pairs");
  }
  return {entry[0].get<double>(), entry[1].get<double>()};
}

ComplexVector parse_vector(const json& arr) {
  if (!arr.is_array() || arr.empty()) throw ParseError("expected a non-empty amplitude list");
  ComplexVector v(static_cast<Eigen::Index>(arr.size()));
  for (std::size_t i = 0; i < arr.size(); ++i) v(static_cast<Eigen::Index>(i)) = parse_complex(arr[i]);
  return v;
}

ComplexMatrix parse_matrix(const json& rows, const char* name) {
  if (!rows.is_array() || rows.empty()) throw ParseError(std::string("'") + name + "' must be a non-empty matrix");
  const auto n = static_cast<Eigen::Index>(rows.size());
  ComplexMatrix m(n, n);
  for (Eigen::Index r = 0; r < n; ++r) {
    const json& row = rows[static_cast<std::size_t>(r)];
    if (!row.is_array()) throw ParseError(std::string("'") + name + "' rows must be arrays");
    if (static_cast<Eigen::Index>(row.size()) != n) {
      throw DimensionError(std::string("'") + name + "' is not square");
    }
    for (Eigen::Index c = 0; c < n; ++c) m(r, c) = parse_complex(row[static_cast<std::size_t>(c)]);
  }
  return m;
}

json matrix_json(const ComplexMatrix& m) {
  json rows = json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    json row = json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back({m(r, c).real(), m(r, c).imag()});
    rows.push_back(std::move(row));
  }
  return rows;
}

json parse_json(const std::string& text) {
  try {
    return json::parse(text);
  } catch (const json::parse_error& e) {
    throw ParseError(e.what());
  }
}

std::size_t parse_dimension(const json& doc) {
  const json& d = field(doc, "dimension");
  if (!d.is_number_integer() || d.get<long long>() < 1) throw ParseError("'dimension' must be a positive integer");
  return d.get<std::size_t>();
}

ComplexMatrix parse_basis(const json& doc, const char* name, std::size_t d) {
  const json& vectors = field(doc, name);
  if (!vectors.is_array() || vectors.size() != d) {
    throw DimensionError(std::string("'") + name + "' must list exactly 'dimension' vectors");
  }
  const auto n = static_cast<Eigen::Index>(d);
  ComplexMatrix b(n, n);
  for (std::size_t j = 0; j < d; ++j) {
    const ComplexVector v = parse_vector(vectors[j]);
    if (v.size() != n) throw DimensionError(std::string("'") + name + "' vector has the wrong length");
    b.col(static_cast<Eigen::Index>(j)) = v;
  }
  return b;
}

}  // namespace

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ParseError("cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ParseError("cannot write " + path.string());
  out << text;
}

SchemeDescription parse_scheme(const std::string& text) {
  const json doc = parse_json(text);
  const std::size_t d = parse_dimension(doc);
  if (doc.contains("states")) {
    const json& states = doc.at("states");
    if (!states.is_array() || states.empty()) throw ParseError("'states' must be a non-empty list");
    std::vector<schemes::EnsembleItem> items;
    for (const json& s : states) {
      const json& w = field(s, "weight");
      if (!w.is_number()) throw ParseError("'weight' must be a number");
      ComplexVector v = parse_vector(field(s, "amplitudes"));
      if (static_cast<std::size_t>(v.size()) != d) throw DimensionError("state length differs from 'dimension'");
      items.push_back({w.get<double>(), std::move(v)});
    }
    return schemes::Ensemble(d, std::move(items));
  }
  if (doc.contains("basis0") || doc.contains("basis1")) {
    return schemes::TicketScheme(schemes::BasisPair(parse_basis(doc, "basis0", d), parse_basis(doc, "basis1", d)));
  }
  throw ParseError("scheme needs either 'states' or 'basis0'/'basis1'");
}

SchemeDescription load_scheme(const std::filesystem::path& path) { return parse_scheme(read_file(path)); }

sdp::CloningSdp CertificateFile::problem() const {
  const std::size_t in = dual_y.dim();
  if (q.dim() % in != 0) throw DimensionError("dual_y dimension does not divide the dimension of q");
  return sdp::CloningSdp(q, {q.dim() / in, in}, 1);
}

CertificateFile parse_certificate(const std::string& text) {
  const json doc = parse_json(text);
  const ComplexMatrix q = parse_matrix(field(doc, "q"), "q");
  const ComplexMatrix x = parse_matrix(field(doc, "primal_x"), "primal_x");
  const ComplexMatrix y = parse_matrix(field(doc, "dual_y"), "dual_y");
  if (x.rows() != q.rows()) throw DimensionError("primal_x and q differ in dimension");
  if (q.rows() % y.rows() != 0) throw DimensionError("dual_y dimension does not divide the dimension of q");
  CertificateFile c{HermitianOperator(q), HermitianOperator(x), HermitianOperator(y), 1e-7, std::nullopt};
  if (doc.contains("tolerance")) {
    if (!doc.at("tolerance").is_number() || !(doc.at("tolerance").get<double>() > 0.0)) {
      throw ParseError("'tolerance' must be a positive number");
    }
    c.tolerance = doc.at("tolerance").get<double>();
  }
  if (doc.contains("value")) {
    if (!doc.at("value").is_number()) throw ParseError("'value' must be a number");
    c.value = doc.at("value").get<double>();
  }
  return c;
}

CertificateFile load_certificate(const std::filesystem::path& path) { return parse_certificate(read_file(path)); }

std::string dump_certificate(const CertificateFile& c) {
  json doc;
  doc["q"] = matrix_json(c.q.matrix());
  doc["primal_x"] = matrix_json(c.primal_x.matrix());
  doc["dual_y"] = matrix_json(c.dual_y.matrix());
  doc["tolerance"] = c.tolerance;
  if (c.value) doc["value"] = *c.value;
  return doc.dump(1) + "\n";
}

}  // namespace qmoney::io
