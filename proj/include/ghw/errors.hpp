#ifndef GHW_ERRORS_HPP
#define GHW_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace ghw {

// Scattering amplitude too small for a finite logarithmic derivative
// (reflection zero, or T = 0 in total reflection).
struct SingularAmplitude : std::runtime_error {
  explicit SingularAmplitude(const std::string& what) : std::runtime_error(what) {}
};

// Quadrature grid fails its self-convergence check.
struct GridTooCoarse : std::runtime_error {
  explicit GridTooCoarse(const std::string& what) : std::runtime_error(what) {}
};

// Too much spectral power falls on evanescent transmitted plane waves.
struct EvanescentLeakage : std::runtime_error {
  explicit EvanescentLeakage(const std::string& what) : std::runtime_error(what) {}
};

// Channel norm below floor (e.g. transmission deep in total reflection).
struct NormCollapse : std::runtime_error {
  explicit NormCollapse(const std::string& what) : std::runtime_error(what) {}
};

}  // namespace ghw

#endif
