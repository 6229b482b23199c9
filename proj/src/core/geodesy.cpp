#include "geodesy.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "error.hpp"

namespace cellscape {
namespace {

constexpr double kA = 6378137.0;             // WGS84 semi-major axis
constexpr double kF = 1.0 / 298.257223563;   // flattening
constexpr double kK0 = 0.9996;
constexpr double kFalseEasting = 500000.0;
const double kN = kF / (2.0 - kF);           // third flattening
const double kE = std::sqrt(kF * (2.0 - kF));

double rect_radius() {
  const double n2 = kN * kN;
  return kA / (1.0 + kN) * (1.0 + n2 / 4.0 + n2 * n2 / 64.0 + n2 * n2 * n2 / 256.0);
}

// Karney (2011), series in the third flattening, order 6.
struct Series {
  double alpha[6];
  double beta[6];
};

Series make_series() {
  const double n = kN, n2 = n * n, n3 = n2 * n, n4 = n3 * n, n5 = n4 * n, n6 = n5 * n;
  Series s;
  s.alpha[0] = n / 2 - 2 * n2 / 3 + 5 * n3 / 16 + 41 * n4 / 180 - 127 * n5 / 288 + 7891 * n6 / 37800;
  s.alpha[1] = 13 * n2 / 48 - 3 * n3 / 5 + 557 * n4 / 1440 + 281 * n5 / 630 - 1983433 * n6 / 1935360;
  s.alpha[2] = 61 * n3 / 240 - 103 * n4 / 140 + 15061 * n5 / 26880 + 167603 * n6 / 181440;
  s.alpha[3] = 49561 * n4 / 161280 - 179 * n5 / 168 + 6601661 * n6 / 7257600;
  s.alpha[4] = 34729 * n5 / 80640 - 3418889 * n6 / 1995840;
  s.alpha[5] = 212378941 * n6 / 129060480;
  s.beta[0] = n / 2 - 2 * n2 / 3 + 37 * n3 / 96 - n4 / 360 - 81 * n5 / 512 + 96199 * n6 / 604800;
  s.beta[1] = n2 / 48 + n3 / 15 - 437 * n4 / 1440 + 46 * n5 / 105 - 1118711 * n6 / 3870720;
  s.beta[2] = 17 * n3 / 480 - 37 * n4 / 840 - 209 * n5 / 4480 + 5569 * n6 / 90720;
  s.beta[3] = 4397 * n4 / 161280 - 11 * n5 / 504 - 830251 * n6 / 7257600;
  s.beta[4] = 4583 * n5 / 161280 - 108847 * n6 / 3991680;
  s.beta[5] = 20648693 * n6 / 638668800;
  return s;
}

const Series& series() {
  static const Series s = make_series();
  return s;
}

}  // namespace

UtmPoint latlon_to_utm(double lat_deg, double lon_deg) {
  require_input(lat_deg > -80.0 && lat_deg < 84.0,
                "latitude out of UTM range (-80, 84): " + std::to_string(lat_deg));
  require_input(lon_deg >= -180.0 && lon_deg <= 180.0,
                "longitude out of range [-180, 180]: " + std::to_string(lon_deg));
  const double phi = lat_deg * M_PI / 180.0;
  double dlon = lon_deg - kUtmCentralMeridianDeg;
  if (dlon > 180.0) dlon -= 360.0;
  if (dlon < -180.0) dlon += 360.0;
  const double lam = dlon * M_PI / 180.0;

  const double s = std::sin(phi);
  // Conformal latitude via tau' = sinh(asinh-style Gauss-Schreiber form).
  const double t = std::sinh(std::atanh(s) - kE * std::atanh(kE * s));
  const double xi_p = std::atan2(t, std::cos(lam));
  const double eta_p = std::asinh(std::sin(lam) / std::hypot(t, std::cos(lam)));

  const Series& sr = series();
  double xi = xi_p, eta = eta_p;
  for (int j = 1; j <= 6; ++j) {
    xi += sr.alpha[j - 1] * std::sin(2.0 * j * xi_p) * std::cosh(2.0 * j * eta_p);
    eta += sr.alpha[j - 1] * std::cos(2.0 * j * xi_p) * std::sinh(2.0 * j * eta_p);
  }
  const double A = rect_radius();
  return {kFalseEasting + kK0 * A * eta, kK0 * A * xi};
}

void utm_to_latlon(const UtmPoint& p, double& lat_deg, double& lon_deg) {
  const double A = rect_radius();
  const double xi = p.northing / (kK0 * A);
  const double eta = (p.easting - kFalseEasting) / (kK0 * A);

  const Series& sr = series();
  double xi_p = xi, eta_p = eta;
  for (int j = 1; j <= 6; ++j) {
    xi_p -= sr.beta[j - 1] * std::sin(2.0 * j * xi) * std::cosh(2.0 * j * eta);
    eta_p -= sr.beta[j - 1] * std::cos(2.0 * j * xi) * std::sinh(2.0 * j * eta);
  }

  const double sh = std::sinh(eta_p);
  const double tau_p = std::sin(xi_p) / std::hypot(sh, std::cos(xi_p));
  const double lam = std::atan2(sh, std::cos(xi_p));

  // Invert the conformal latitude with Newton's method on tau.
  double tau = tau_p;
  for (int it = 0; it < 8; ++it) {
    const double sig = std::sinh(kE * std::atanh(kE * tau / std::hypot(1.0, tau)));
    const double tau_pi = tau * std::hypot(1.0, sig) - sig * std::hypot(1.0, tau);
    const double dtau = (tau_p - tau_pi) * (1.0 + (1.0 - kE * kE) * tau * tau) /
                        ((1.0 - kE * kE) * std::hypot(1.0, tau_pi) * std::hypot(1.0, tau));
    tau += dtau;
    if (std::abs(dtau) < 1e-16 * (1.0 + std::abs(tau))) break;
  }

  lat_deg = std::atan(tau) * 180.0 / M_PI;
  lon_deg = kUtmCentralMeridianDeg + lam * 180.0 / M_PI;
}

double great_circle_km(double lat1, double lon1, double lat2, double lon2) {
  const double d2r = M_PI / 180.0;
  const double dphi = (lat2 - lat1) * d2r;
  const double dlam = (lon2 - lon1) * d2r;
  const double a = std::sin(dphi / 2) * std::sin(dphi / 2) +
                   std::cos(lat1 * d2r) * std::cos(lat2 * d2r) *
                       std::sin(dlam / 2) * std::sin(dlam / 2);
  return 2.0 * kEarthMeanRadiusKm * std::asin(std::min(1.0, std::sqrt(a)));
}

}  // namespace cellscape
