#pragma once

#include <stdexcept>
#include <string>
#include <string_view>

namespace fspec {

enum class ErrorKind {
  dimension,
  positivity,
  symmetry,
  shape,
  domain,
  alignment,
  absolute_continuity,
  not_positive_type,
  coverage,
  sample_size,
  not_invertible,
  index,
  parse,
  io,
};

// Stable, kebab-case names; the CLI prints these verbatim.
constexpr std::string_view kind_name(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::dimension: return "dimension";
    case ErrorKind::positivity: return "positivity";
    case ErrorKind::symmetry: return "symmetry";
    case ErrorKind::shape: return "shape";
    case ErrorKind::domain: return "domain";
    case ErrorKind::alignment: return "alignment";
    case ErrorKind::absolute_continuity: return "absolute-continuity";
    case ErrorKind::not_positive_type: return "not-positive-type";
    case ErrorKind::coverage: return "coverage";
    case ErrorKind::sample_size: return "sample-size";
    case ErrorKind::not_invertible: return "non-invertible";
    case ErrorKind::index: return "index";
    case ErrorKind::parse: return "parse";
    case ErrorKind::io: return "io";
  }
  return "unknown";
}

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, const std::string& what)
      : std::runtime_error(std::string(kind_name(kind)) + ": " + what), kind_(kind) {}

  [[nodiscard]] ErrorKind kind() const noexcept { return kind_; }

 private:
  ErrorKind kind_;
};

}  // namespace fspec
