#pragma once

namespace qcomp {

// Modified Bessel functions of real order nu >= 0 and argument z > 0,
// with first derivatives in z.
struct BesselIK {
  double i = 0, di = 0;  // I_nu(z), I'_nu(z)
  double k = 0, dk = 0;  // K_nu(z), K'_nu(z)
  // Set when z > 700.  I and I' are then multiplied by e^{-z}, K and K'
  // by e^{z}.
  bool log_scaled = false;
};

BesselIK bessel_ik(double nu, double z);

// Always scaled: i, di carry e^{-z}; k, dk carry e^{z}.
BesselIK bessel_ik_scaled(double nu, double z);

}  // namespace qcomp
