#pragma once

#include <stdexcept>
#include <string>

namespace pf {

enum class Errc {
  invalid_parameter,
  invalid_input,
  invalid_config,
  io,
};

const char* errc_name(Errc code);

class Error : public std::runtime_error {
 public:
  Error(Errc code, const std::string& what)
      : std::runtime_error(std::string(errc_name(code)) + ": " + what),
        code_(code) {}

  Errc code() const noexcept { return code_; }

 private:
  Errc code_;
};

inline const char* errc_name(Errc code) {
  switch (code) {
    case Errc::invalid_parameter: return "invalid-parameter";
    case Errc::invalid_input: return "invalid-input";
    case Errc::invalid_config: return "invalid-config";
    case Errc::io: return "io";
  }
  return "unknown";
}

}  // namespace pf
