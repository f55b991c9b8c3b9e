#pragma once

#include <stdexcept>
#include <string>
#include <string_view>
#include <utility>

namespace abelquot {

enum class ErrorCode {
  Parse,          // malformed JSON
  Schema,         // JSON well-formed but not a scenario
  InvalidTorsion, // bad rational coordinates
  InfiniteOrder,  // linear part not of finite order
  CapExceeded,    // group closure exceeded the element cap
  Precondition,   // operation called outside its contract
  Io,             // input or output file unusable
  Internal,       // an invariant that should always hold failed
};

inline std::string_view error_tag(ErrorCode c) {
  switch (c) {
    case ErrorCode::Parse: return "E_PARSE";
    case ErrorCode::Schema: return "E_SCHEMA";
    case ErrorCode::InvalidTorsion: return "E_TORSION";
    case ErrorCode::InfiniteOrder: return "E_INFINITE_ORDER";
    case ErrorCode::CapExceeded: return "E_CAP_EXCEEDED";
    case ErrorCode::Precondition: return "E_PRECONDITION";
    case ErrorCode::Io: return "E_IO";
    case ErrorCode::Internal: return "E_INTERNAL";
  }
  return "E_UNKNOWN";
}

/// Process exit status for each error class; 0 and 1 are reserved for
/// success and check failures.
inline int exit_status(ErrorCode c) {
  switch (c) {
    case ErrorCode::Parse: return 2;
    case ErrorCode::Schema: return 3;
    case ErrorCode::InvalidTorsion: return 4;
    case ErrorCode::InfiniteOrder: return 5;
    case ErrorCode::CapExceeded: return 6;
    case ErrorCode::Precondition: return 7;
    case ErrorCode::Io: return 8;
    case ErrorCode::Internal: return 70;
  }
  return 70;
}

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what) : std::runtime_error(what), code_(code) {}
  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

struct PreconditionError : Error {
  explicit PreconditionError(const std::string& what) : Error(ErrorCode::Precondition, what) {}
};

struct InternalError : Error {
  explicit InternalError(const std::string& what) : Error(ErrorCode::Internal, what) {}
};

/// A structural statement about the normalized group failed to hold.
struct LemmaViolation : InternalError {
  LemmaViolation(std::string lemma_name, const std::string& detail)
      : InternalError(lemma_name + ": " + detail), lemma(std::move(lemma_name)) {}
  std::string lemma;
};

}  // namespace abelquot
