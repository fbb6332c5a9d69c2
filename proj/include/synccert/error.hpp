#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace synccert {

/// Base class for every error raised by the library.
class Error : public std::runtime_error {
  public:
    using std::runtime_error::runtime_error;
};

/// Integration produced a non-finite state. Carries the index of the failing step.
class BlowUpError : public Error {
  public:
    BlowUpError(std::int64_t step, double time)
        : Error("blow-up at step " + std::to_string(step) + " (t = " + std::to_string(time) +
                "): step too large for stiffness; require dt <~ gamma"),
          step_(step) {}

    [[nodiscard]] std::int64_t step() const noexcept { return step_; }

  private:
    std::int64_t step_;
};

}  // namespace synccert
