#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace swarm {

// Invalid or inconsistent run configuration. Collects every violated
// constraint so a bad file is reported in one pass.
class ConfigError : public std::runtime_error {
 public:
  explicit ConfigError(std::vector<std::string> issues)
      : std::runtime_error(join(issues)), issues_(std::move(issues)) {}
  explicit ConfigError(const std::string& issue)
      : ConfigError(std::vector<std::string>{issue}) {}

  const std::vector<std::string>& issues() const { return issues_; }

 private:
  static std::string join(const std::vector<std::string>& issues) {
    std::string out = "invalid configuration:";
    for (const auto& s : issues) {
      out += "\n  - " + s;
    }
    return out;
  }
  std::vector<std::string> issues_;
};

// A simulation invariant broke mid-run. Always a bug, never an outcome;
// the run aborts with this diagnostic.
class InvariantViolation : public std::logic_error {
 public:
  explicit InvariantViolation(const std::string& what) : std::logic_error(what) {}
};

}  // namespace swarm
