#include "stcausal/geo.hpp"

#include <algorithm>
#include <cmath>

namespace stcausal {

double haversine_km(double lat1, double lon1, double lat2, double lon2) {
  const double rad = M_PI / 180.0;
  double phi1 = lat1 * rad, phi2 = lat2 * rad;
  double dphi = (lat2 - lat1) * rad;
  double dlam = (lon2 - lon1) * rad;
  double s1 = std::sin(dphi / 2.0), s2 = std::sin(dlam / 2.0);
  double h = s1 * s1 + std::cos(phi1) * std::cos(phi2) * s2 * s2;
  h = std::clamp(h, 0.0, 1.0);
  return 2.0 * kEarthRadiusKm * std::asin(std::sqrt(h));
}

}  // namespace stcausal
