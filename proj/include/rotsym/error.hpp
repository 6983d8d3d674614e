#pragma once

#include <stdexcept>
#include <string>

namespace rotsym {

// Error taxonomy mirrored by the C API status codes and the CLI exit codes.
enum class ErrorCode {
  Config = 2,      // bad options, malformed spec file, mismatched groups
  Data = 3,        // malformed dataset/table files, size mismatches
  Degenerate = 4,  // numeric degeneracy (dispersed data, singular moments)
  NonConvergence = 5,
  Internal = 6,
};

class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& what)
      : std::runtime_error(what), code_(code) {}

  ErrorCode code() const { return code_; }

 private:
  ErrorCode code_;
};

inline Error config_error(const std::string& what) { return Error(ErrorCode::Config, what); }
inline Error data_error(const std::string& what) { return Error(ErrorCode::Data, what); }
inline Error degenerate_error(const std::string& what) { return Error(ErrorCode::Degenerate, what); }

}  // namespace rotsym
