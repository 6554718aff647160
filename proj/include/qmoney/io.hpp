#pragma once

#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <variant>

#include "qmoney/linalg.hpp"
#include "qmoney/schemes.hpp"
#include "qmoney/sdp.hpp"

namespace qmoney::io {

using linalg::HermitianOperator;

/// Malformed or unreadable input document.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Scheme document:
///   {"dimension": d, "states": [{"weight": p, "amplitudes": [[re, im], ...]}, ...]}
/// or
///   {"dimension": d, "basis0": [[[re, im], ...], ...], "basis1": [...]}
/// where each basis entry is one basis vector.
using SchemeDescription = std::variant<schemes::Ensemble, schemes::TicketScheme>;

SchemeDescription parse_scheme(const std::string& text);
SchemeDescription load_scheme(const std::filesystem::path& path);

/// Certificate document: "q", "primal_x", "dual_y" as rows of [re, im]
/// entries, plus "tolerance" and the claimed "value". The input dimension is
/// read off dual_y and the output dimension off q.
struct CertificateFile {
  HermitianOperator q;
  HermitianOperator primal_x;
  HermitianOperator dual_y;
  double tolerance = 1e-7;
  std::optional<double> value;

  sdp::CloningSdp problem() const;
};

CertificateFile parse_certificate(const std::string& text);
CertificateFile load_certificate(const std::filesystem::path& path);
std::string dump_certificate(const CertificateFile& c);

std::string read_file(const std::filesystem::path& path);
void write_file(const std::filesystem::path& path, const std::string& text);

}  // namespace qmoney::io
