#pragma once

#include <stdexcept>
#include <string>

namespace lct {

// Every recoverable toolkit failure is an Error with a stable kind tag so
// callers (CLI, pipeline stages, tests) can dispatch without string matching.
enum class ErrorKind {
  SyntaxError,
  UndeclaredObservable,
  UnknownMnemonic,
  UnresolvedLabel,
  CandidateExplosion,
  Timeout,
  UnknownBaseRelation,
  UnknownModel,
  DialectMismatch,
  AmbiguousMapping,
  MissingBinding,
  NameCollision,
  ToolNotFound,
  CompileFailed,
  DisassembleFailed,
  UnmappedAddress,
  UnsupportedConstruct,
  UnsupportedShape,
  BadConfig,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string message)
      : std::runtime_error(std::move(message)), kind_(kind) {}
  ErrorKind kind() const { return kind_; }

 private:
  ErrorKind kind_;
};

inline const char* error_kind_name(ErrorKind k) {
  switch (k) {
    case ErrorKind::SyntaxError: return "SyntaxError";
    case ErrorKind::UndeclaredObservable: return "UndeclaredObservable";
    case ErrorKind::UnknownMnemonic: return "UnknownMnemonic";
    case ErrorKind::UnresolvedLabel: return "UnresolvedLabel";
    case ErrorKind::CandidateExplosion: return "CandidateExplosion";
    case ErrorKind::Timeout: return "Timeout";
    case ErrorKind::UnknownBaseRelation: return "UnknownBaseRelation";
    case ErrorKind::UnknownModel: return "UnknownModel";
    case ErrorKind::DialectMismatch: return "DialectMismatch";
    case ErrorKind::AmbiguousMapping: return "AmbiguousMapping";
    case ErrorKind::MissingBinding: return "MissingBinding";
    case ErrorKind::NameCollision: return "NameCollision";
    case ErrorKind::ToolNotFound: return "ToolNotFound";
    case ErrorKind::CompileFailed: return "CompileFailed";
    case ErrorKind::DisassembleFailed: return "DisassembleFailed";
    case ErrorKind::UnmappedAddress: return "UnmappedAddress";
    case ErrorKind::UnsupportedConstruct: return "UnsupportedConstruct";
    case ErrorKind::UnsupportedShape: return "UnsupportedShape";
    case ErrorKind::BadConfig: return "BadConfig";
  }
  return "Error";
}

inline Error syntax_error(int line, int col, const std::string& expected) {
  return Error(ErrorKind::SyntaxError, "syntax error at line " +
                                           std::to_string(line) + ", column " +
                                           std::to_string(col) + ": expected " +
                                           expected);
}

}  // namespace lct
