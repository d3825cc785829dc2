#pragma once
#include <complex>
#include <stdexcept>
#include <string>
#include <vector>

namespace regulab {

using real = long double;
using cplx = std::complex<real>;

inline constexpr real kPi = 3.141592653589793238462643383279502884L;
inline const cplx kI{0.0L, 1.0L};
inline const cplx kTwoPiI{0.0L, 2.0L * kPi};

// Error taxonomy shared by all modules. The kind string is what the CLI
// and the reports print.
class Error : public std::runtime_error {
 public:
  Error(std::string kind, const std::string& msg)
      : std::runtime_error(kind + ": " + msg), kind_(std::move(kind)) {}
  const std::string& kind() const { return kind_; }

 private:
  std::string kind_;
};

inline Error shape_error(const std::string& m) { return Error("shape-error", m); }
inline Error invariant_violation(const std::string& m) { return Error("invariant-violation", m); }
inline Error unsupported_input(const std::string& m) { return Error("unsupported-input", m); }
inline Error domain_error(const std::string& m) { return Error("domain-error", m); }
inline Error convergence_error(const std::string& m) { return Error("convergence-error", m); }

inline cplx root_of_unity(long k, long n) {
  real a = 2 * kPi * static_cast<real>(k) / static_cast<real>(n);
  return {std::cos(a), std::sin(a)};
}

}  // namespace regulab
