#pragma once

#include <stdexcept>
#include <string>
#include <utility>

namespace germfold {

// Status codes shared by the C API and the CLI exit contract:
// 0 pass, 1 property failure, 2 validation failure, 3 hypothesis/obstruction,
// 4 numeric non-convergence.
enum class errc : int {
  ok = 0,
  property_failure = 1,
  validation = 2,
  obstructed = 3,
  no_convergence = 4,
  bad_argument = 5,
  internal = 6,
};

// Domain error carrying a stable machine-readable tag (e.g.
// "NotWeightedHomogeneous") next to the human message.
class Error : public std::runtime_error {
 public:
  Error(errc code, std::string name, const std::string& detail)
      : std::runtime_error(detail.empty() ? name : name + ": " + detail),
        code_(code),
        name_(std::move(name)) {}

  errc code() const noexcept { return code_; }
  const std::string& name() const noexcept { return name_; }

 private:
  errc code_;
  std::string name_;
};

[[noreturn]] inline void fail(errc code, std::string name,
                              const std::string& detail = "") {
  throw Error(code, std::move(name), detail);
}

}  // namespace germfold
