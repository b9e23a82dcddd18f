#ifndef ERT_ERROR_HPP
#define ERT_ERROR_HPP

#include <stdexcept>
#include <string>

namespace ert {

// Errors fall into two families so that front ends can map them to exit
// codes: configuration problems (bad inputs, malformed files) and compute
// problems (degenerate geometry hit during evaluation).
enum class ErrorKind { config, compute };

class Error : public std::runtime_error {
 public:
  Error(ErrorKind kind, std::string code, const std::string& what)
      : std::runtime_error(what), kind_(kind), code_(std::move(code)) {}

  ErrorKind kind() const noexcept { return kind_; }
  // Short machine-readable tag, e.g. "domain" or "parse".
  const std::string& code() const noexcept { return code_; }

 private:
  ErrorKind kind_;
  std::string code_;
};

#define ERT_DEFINE_ERROR(Name, kind, tag)                              \
  class Name : public Error {                                          \
   public:                                                             \
    explicit Name(const std::string& what)                             \
        : Error(ErrorKind::kind, tag, what) {}                         \
  };

ERT_DEFINE_ERROR(DomainError, config, "domain")
ERT_DEFINE_ERROR(ConfigError, config, "config")
ERT_DEFINE_ERROR(ParseError, config, "parse")
ERT_DEFINE_ERROR(SupportViolation, config, "support")
ERT_DEFINE_ERROR(GridTooCoarse, config, "grid")
ERT_DEFINE_ERROR(SingularPointError, compute, "singular")
ERT_DEFINE_ERROR(DegenerateWeightError, compute, "degenerate")
ERT_DEFINE_ERROR(DegenerateError, compute, "degenerate")
ERT_DEFINE_ERROR(OverflowGuardError, compute, "overflow")
ERT_DEFINE_ERROR(BracketError, compute, "bracket")

#undef ERT_DEFINE_ERROR

}  // namespace ert

#endif  // ERT_ERROR_HPP
