#pragma once

#include <cstdint>
#include <cstdlib>
#include <stdexcept>
#include <string>
#include <utility>

namespace trektoric {

// Every error carries a stable machine-readable code alongside the human text.
class Error : public std::runtime_error {
 public:
  Error(std::string code, const std::string& what)
      : std::runtime_error(code + ": " + what), code_(std::move(code)) {}
  const std::string& code() const { return code_; }

 private:
  std::string code_;
};

inline Error make_error(const std::string& code, const std::string& what) {
  return Error(code, what);
}

class ResourceLimitExceeded : public Error {
 public:
  explicit ResourceLimitExceeded(const std::string& what)
      : Error("ResourceLimitExceeded", what) {}
};

// Work budget: a simple step counter shared by the heavy engines.  All caps
// scale with the TREKTORIC_BUDGET environment variable (default 1.0) so the
// same limits can be loosened or tightened without rebuilding.
class Budget {
 public:
  explicit Budget(std::uint64_t steps = default_steps()) : remaining_(steps) {}

  static double scale() {
    if (const char* s = std::getenv("TREKTORIC_BUDGET")) {
      double v = std::atof(s);
      if (v > 0) return v;
    }
    return 1.0;
  }

  static std::uint64_t default_steps() {
    return static_cast<std::uint64_t>(50'000'000.0 * scale());
  }

  static std::uint64_t scaled(std::uint64_t base) {
    return static_cast<std::uint64_t>(static_cast<double>(base) * scale());
  }

  void charge(std::uint64_t steps, const char* site) {
    if (steps > remaining_)
      throw ResourceLimitExceeded(std::string("work budget exhausted in ") +
                                  site);
    remaining_ -= steps;
  }

  std::uint64_t remaining() const { return remaining_; }

 private:
  std::uint64_t remaining_;
};

}  // namespace trektoric
