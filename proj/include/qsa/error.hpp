#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace qsa {

/// Domain error carrying a stable machine-readable code such as
/// "UnknownAtom" or "NotDominated". The CLI maps these to exit code 2.
class Error : public std::runtime_error {
  public:
    Error(std::string code, std::string detail)
        : std::runtime_error(code + ": " + detail),
          code_(std::move(code)),
          detail_(std::move(detail)) {}

    const std::string& code() const { return code_; }
    const std::string& detail() const { return detail_; }

  private:
    std::string code_;
    std::string detail_;
};

[[noreturn]] inline void fail(std::string code, const std::string& detail) {
    throw Error(std::move(code), detail);
}

} // namespace qsa
