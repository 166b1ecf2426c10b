#pragma once

#include <span>
#include <vector>

#include <Eigen/Dense>

#include "stcausal/types.hpp"

namespace stcausal {

// Diff series of a dataset with O(1) hourly lookup.
class DiffTable {
 public:
  void add(DiffSeries d);
  const DiffSeries* find(int sensor, int category) const;
  int index_of(int sensor, int category) const;  // -1 when absent
  // NaN when the hour is absent or the diff is missing.
  double value_at(int sensor, int category, Timestamp t) const;
  double value_by_index(int idx, Timestamp t) const;

  const std::vector<DiffSeries>& all() const { return series_; }

 private:
  struct Hourly {
    Timestamp t0 = 0;
    std::vector<double> v;
  };
  std::vector<DiffSeries> series_;
  std::vector<Hourly> hourly_;
  std::map<std::pair<int, int>, int> index_;
};

struct NeighborRef {
  int sensor = -1;
  int category = -1;  // c_{m_n}
  bool operator==(const NeighborRef&) const = default;
};

// Regressor layout for one target: the local block holds the listed
// categories at the target sensor (all M present ones), lags 1..L,
// category-major; the ST block follows with lags 1..L per neighbor.
struct ParentSpec {
  int target_sensor = -1;
  int target_category = -1;
  std::vector<int> local_categories;  // sorted; M entries on full data
  int lag_hours = 0;                  // L
  std::vector<NeighborRef> neighbors;

  int local_dim() const {
    return static_cast<int>(local_categories.size()) * lag_hours;
  }
  int st_dim() const { return static_cast<int>(neighbors.size()) * lag_hours; }
  int dim() const { return local_dim() + st_dim(); }
  // ci indexes into local_categories.
  int local_col(int ci, int lag) const { return ci * lag_hours + (lag - 1); }
  int st_col(int neighbor, int lag) const {
    return local_dim() + neighbor * lag_hours + (lag - 1);
  }
  bool operator==(const ParentSpec&) const = default;
};

// The categories with diff data at a sensor, in index order.
std::vector<int> local_categories_for(const DiffTable& diffs, int sensor);

struct DesignRows {
  std::vector<Timestamp> t;
  Eigen::VectorXd p;  // response diff at t
  Eigen::MatrixXd q;  // regressors, ParentSpec layout
  Eigen::MatrixXd e;  // environmental vector at t (0 columns when no meteo)
  Eigen::Index rows() const { return p.size(); }
};

// One row per window timestamp with a complete lag context; rows with any
// missing lag, response, or environment value are dropped.
// Throws Errc::NoUsableRows when nothing survives.
DesignRows build_design_rows(const DiffTable& diffs, const ParentSpec& spec,
                             const MeteoSeries* meteo, std::span<const Timestamp> windows);

}  // namespace stcausal
