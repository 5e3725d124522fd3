#pragma once

#include <stdexcept>
#include <string>

namespace qmdslab {

// All library failures carry a stable kind string ("NotPrime", "BadDim", ...)
// so callers and the CLI can dispatch without parsing messages.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& msg)
      : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}

  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

[[noreturn]] inline void fail(const std::string& kind, const std::string& msg) {
  throw Error(kind, msg);
}

}  // namespace qmdslab
