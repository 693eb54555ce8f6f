#include "qcomp/bessel.hpp"

#include <cmath>
#include <numbers>
#include <string>

#include "qcomp/errors.hpp"

namespace qcomp {

namespace {

constexpr double kEps = 1e-16;
constexpr int kMaxIter = 100000;

// Taylor coefficients of 1/Gamma(z) at 0: 1/Gamma(z) = sum_k c[k] z^k.
constexpr double kRecipGamma[] = {
    0.0,
    1.0,
    0.5772156649015328606065,
    -0.655878071520253881077,
    -0.042002635034095235529,
    0.1665386113822914895017,
    -0.04219773455554433674821,
    -0.009621971527876973562115,
    0.007218943246663099542395,
    -0.001165167591859065112114,
    -0.0002152416741149509728157,
    0.0001280502823881161861532,
    -0.00002013485478078823865569,
    -0.000001250493482142670657345,
    0.000001133027231981695882374,
    -2.05633841697760710345e-7,
    6.116095104481415817862e-9,
    5.002007644469222930056e-9,
    -1.181274570487020144588e-9,
    1.043426711691100510492e-10,
    7.78226343990507125405e-12,
    -3.696805618642205708188e-12,
    5.100370287454475979015e-13,
    -2.058326053566506783222e-14,
    -5.34812253942301798237e-15,
    1.226778628238260790159e-15,
    -1.181259301697458769514e-16,
    1.18669225475160033258e-18,
    1.412380655318031781556e-18,
    -2.298745684435370206592e-19,
    1.714406321927337433384e-20,
};

// Temme's auxiliary gamma quantities for |mu| <= 1/2:
//   gam1 = (1/G(1-mu) - 1/G(1+mu)) / (2 mu),  gam2 = (1/G(1-mu) + 1/G(1+mu)) / 2
// evaluated from the even/odd parts of the 1/Gamma series, so there is no
// cancellation as mu -> 0.
void temme_gammas(double mu, double& gam1, double& gam2, double& gampl, double& gammi) {
  constexpr int n = sizeof(kRecipGamma) / sizeof(double);
  double even = 0.0, odd = 0.0;
  double m2 = mu * mu;
  // 1/Gamma(1+mu) = sum_{k>=1} c_k mu^{k-1}
  for (int k = n - 1; k >= 1; --k) {
    if (k % 2 == 0) even = even * m2 + kRecipGamma[k];
    else odd = odd * m2 + kRecipGamma[k];
  }
  gam1 = -even;
  gam2 = odd;
  gampl = odd + mu * even;
  gammi = odd - mu * even;
}

// K_nu(z) e^{z} and K_{nu+1}(z) e^{z}.
void bessel_k_scaled(double nu, double z, double& k0, double& k1) {
  const double pi = std::numbers::pi;
  int nl = static_cast<int>(nu + 0.5);
  double mu = nu - nl, mu2 = mu * mu;
  double xi = 1.0 / z, xi2 = 2.0 * xi;
  double kmu, kmu1;
  if (z < 2.0) {
    double x2 = 0.5 * z, pimu = pi * mu;
    double fact = std::fabs(pimu) < kEps ? 1.0 : pimu / std::sin(pimu);
    double d = -std::log(x2), e = mu * d;
    double fact2 = std::fabs(e) < kEps ? 1.0 : std::sinh(e) / e;
    double gam1, gam2, gampl, gammi;
    temme_gammas(mu, gam1, gam2, gampl, gammi);
    double ff = fact * (gam1 * std::cosh(e) + gam2 * fact2 * d);
    double sum = ff;
    e = std::exp(e);
    double p = 0.5 * e / gampl, q = 0.5 / (e * gammi);
    double c = 1.0, sum1 = p;
    d = x2 * x2;
    for (int i = 1; i <= kMaxIter; ++i) {
      ff = (i * ff + p + q) / (i * static_cast<double>(i) - mu2);
      c *= d / i;
      p /= i - mu;
      q /= i + mu;
      double del = c * ff;
      sum += del;
      sum1 += c * (p - i * ff);
      if (std::fabs(del) < std::fabs(sum) * kEps) break;
    }
    double scale = std::exp(z);
    kmu = sum * scale;
    kmu1 = sum1 * xi2 * scale;
  } else {
    // Steed's continued fraction CF2
    double b = 2.0 * (1.0 + z), d = 1.0 / b, h = d, delh = d;
    double q1 = 0.0, q2 = 1.0, a1 = 0.25 - mu2;
    double q = a1, c = a1, a = -a1;
    double s = 1.0 + q * delh;
    for (int i = 2; i <= kMaxIter; ++i) {
      a -= 2 * (i - 1);
      c = -a * c / i;
      double qnew = (q1 - b * q2) / a;
      q1 = q2;
      q2 = qnew;
      q += c * qnew;
      b += 2.0;
      d = 1.0 / (b + a * d);
      delh = (b * d - 1.0) * delh;
      h += delh;
      double dels = q * delh;
      s += dels;
      if (std::fabs(dels / s) < kEps) break;
    }
    h = a1 * h;
    kmu = std::sqrt(pi / (2.0 * z)) / s;
    kmu1 = kmu * (mu + z + 0.5 - h) * xi;
  }
  for (int i = 1; i <= nl; ++i) {
    double next = (mu + i) * xi2 * kmu1 + kmu;
    kmu = kmu1;
    kmu1 = next;
  }
  k0 = kmu;
  k1 = kmu1;
}

double series_switch(double nu) { return std::min(600.0, std::max(25.0, 1.5 * nu * nu)); }

// I_nu(z) e^{-z}.  Power series below the switch point, Hankel
// asymptotic expansion above it.
double bessel_i_scaled(double nu, double z) {
  if (z <= series_switch(nu)) {
    double x2 = 0.5 * z, q = x2 * x2;
    double term = std::exp(nu * std::log(x2) - std::lgamma(nu + 1.0) - z);
    double sum = term;
    for (int k = 1; k <= kMaxIter; ++k) {
      term *= q / (k * (k + nu));
      sum += term;
      if (term < sum * kEps) break;
    }
    return sum;
  }
  double mu = 4.0 * nu * nu;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k <= kMaxIter; ++k) {
    double odd = 2.0 * k - 1.0;
    double next = -term * (mu - odd * odd) / (8.0 * k * z);
    if (std::fabs(next) >= std::fabs(term) && k > nu) break;  // series turned divergent
    term = next;
    sum += term;
    if (std::fabs(term) < std::fabs(sum) * kEps) break;
  }
  return sum / std::sqrt(2.0 * std::numbers::pi * z);
}

void check_args(double nu, double z) {
  if (!(z > 0.0) || !std::isfinite(z))
    throw DomainError("Bessel argument must be positive, got " + std::to_string(z));
  if (!(nu >= 0.0) || !std::isfinite(nu))
    throw DomainError("Bessel order must be >= 0, got " + std::to_string(nu));
}

}  // namespace

BesselIK bessel_ik_scaled(double nu, double z) {
  check_args(nu, z);
  BesselIK r;
  r.log_scaled = true;
  double i0 = bessel_i_scaled(nu, z), i1 = bessel_i_scaled(nu + 1.0, z);
  double k0, k1;
  bessel_k_scaled(nu, z, k0, k1);
  r.i = i0;
  r.di = i1 + nu / z * i0;
  r.k = k0;
  r.dk = -k1 + nu / z * k0;
  return r;
}

BesselIK bessel_ik(double nu, double z) {
  BesselIK r = bessel_ik_scaled(nu, z);
  if (z > 700.0) return r;
  double up = std::exp(z), down = std::exp(-z);
  r.i *= up;
  r.di *= up;
  r.k *= down;
  r.dk *= down;
  r.log_scaled = false;
  return r;
}

}  // namespace qcomp
