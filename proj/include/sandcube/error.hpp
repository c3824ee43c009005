#ifndef SANDCUBE_ERROR_HPP_
#define SANDCUBE_ERROR_HPP_

#include <stdexcept>
#include <string>
#include <string_view>

namespace sandcube {

enum class Errc {
  Overflow,
  OutOfDomain,
  Unsupported,
  BackgroundTooLarge,
  BudgetExhausted,
  HypothesisNotMet,
  IoError,
  PaletteOverflow,
  CorruptCheckpoint,
  InvalidArgument,
};

std::string_view to_string(Errc code);

// Single exception type for the library; callers branch on code().
class Error : public std::runtime_error {
public:
  Error(Errc code, const std::string& what)
    : std::runtime_error(std::string(to_string(code)) + ": " + what), code_(code) {}

  Errc code() const noexcept { return code_; }

private:
  Errc code_;
};

} // namespace sandcube

#endif
