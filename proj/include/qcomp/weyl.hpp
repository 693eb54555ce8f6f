#pragma once

#include <functional>
#include <string>

namespace qcomp {

enum class EndpointClass { LimitPoint, LimitCircle, Inconclusive };
std::string to_string(EndpointClass c);

struct EndpointClassification {
  EndpointClass cls = EndpointClass::Inconclusive;
  double p1 = 0.0;  // Frobenius exponents, p1 >= p2 (real parts if complex)
  double p2 = 0.0;
  bool oscillatory = false;
  std::string note;
};

// Closed form for -u'' + c/t^2 u at t = 0.
EndpointClassification classify_inverse_square(double c);

struct EndpointOptions {
  double floor_ratio = 1e-6;  // integrate down to floor_ratio * eps
  double tol = 1e-11;
  // Inconclusive band around the square-integrability threshold p2 = -1/2.
  double guard = 0.002;
  // An estimate this close to -1/2 is read as exactly -1/2 (the
  // logarithmically divergent, limit-point case).
  double resolution = 1e-6;
};

// Numerical classification of -u'' + W u at t = 0 from the sampled
// potential on (0, eps].
EndpointClassification classify_endpoint(const std::function<double(double)>& W, double eps,
                                         const EndpointOptions& opt = {});

}  // namespace qcomp
