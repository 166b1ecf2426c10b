#pragma once

#include <cstdint>
#include <vector>

#include <Eigen/Dense>

namespace stcausal {

// Lloyd's iteration with k-means++ seeding; deterministic given the seed.
// Converges when assignments are stable or after 100 iterations.
std::vector<int> kmeans_init(const Eigen::MatrixXd& rows, int k, std::uint64_t seed);

}  // namespace stcausal
