#pragma once

namespace stcausal {

inline constexpr double kEarthRadiusKm = 6371.0;

// Great-circle distance between two (lat, lon) points in degrees.
double haversine_km(double lat1, double lon1, double lat2, double lon2);

}  // namespace stcausal
