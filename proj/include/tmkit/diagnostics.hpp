#ifndef TMKIT_DIAGNOSTICS_HPP
#define TMKIT_DIAGNOSTICS_HPP

#include <string>

#include "tmkit/model.hpp"

namespace tmkit {

enum class Severity { Error, Warning };

inline const char* to_string(Severity s) {
  return s == Severity::Error ? "error" : "warning";
}

/// A parse- or build-time finding, always anchored to a source span.
struct Diagnostic {
  Severity severity = Severity::Error;
  std::string code;
  std::string message;
  SourceSpan span;

  std::string render() const {
    return code + " " + to_string(severity) + " " + std::to_string(span.line) +
           ":" + std::to_string(span.column) + " " + message;
  }
};

}  // namespace tmkit

#endif  // TMKIT_DIAGNOSTICS_HPP
