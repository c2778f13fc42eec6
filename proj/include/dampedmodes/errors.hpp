#pragma once

#include <complex>
#include <stdexcept>
#include <string>

namespace dampedmodes {

/// Root of every domain failure raised by the library.
class Error : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Malformed or schema-violating configuration input.
class ConfigError : public Error {
 public:
  using Error::Error;
};

/// Frequency too close to a spectral band for a stable/unstable eigen split.
class BandCollision : public Error {
 public:
  using Error::Error;
};

/// Surface impedance pole: the decaying solution has vanishing flux at the interface.
class PoleDetected : public Error {
 public:
  using Error::Error;
};

class ContinuationBreakdown : public Error {
 public:
  ContinuationBreakdown(const std::string& what, double last_kappa, std::complex<double> last_omega)
      : Error(what), last_kappa(last_kappa), last_omega(last_omega) {}
  double last_kappa;
  std::complex<double> last_omega;
};

class WindowInvaded : public Error {
 public:
  WindowInvaded(const std::string& what, std::complex<double> band_point)
      : Error(what), band_point(band_point) {}
  std::complex<double> band_point;
};

class ParityAmbiguous : public Error {
 public:
  using Error::Error;
};

class RatioInconsistent : public Error {
 public:
  using Error::Error;
};

class NoSignChange : public Error {
 public:
  using Error::Error;
};

class PhaseRefinementExhausted : public Error {
 public:
  using Error::Error;
};

class PoleOnContour : public Error {
 public:
  using Error::Error;
};

class Diverged : public Error {
 public:
  using Error::Error;
};

class StepOutOfWindow : public Error {
 public:
  using Error::Error;
};

class StepUnderflow : public Error {
 public:
  StepUnderflow(const std::string& what, double last_delta) : Error(what), last_delta(last_delta) {}
  double last_delta;
};

class NotARoot : public Error {
 public:
  NotARoot(const std::string& what, double mismatch) : Error(what), mismatch(mismatch) {}
  double mismatch;
};

}  // namespace dampedmodes
