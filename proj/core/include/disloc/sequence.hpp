#pragma once

#include <functional>
#include <vector>

#include "disloc/energy.hpp"
#include "disloc/grid_function.hpp"

namespace disloc {

/// Materialized finite sequence u_k, k in [k0, k1], with the uniform energy
/// bound checked at load time.
class FunctionSequence {
public:
  static FunctionSequence from_members(int k0, std::vector<GridFunction> members,
                                       const EnergySpec& spec);
  static FunctionSequence from_generator(
      int k0, int k1, const std::function<GridFunction(int)>& gen,
      const EnergySpec& spec);

  int k0() const { return k0_; }
  int k1() const { return k0_ + static_cast<int>(members_.size()) - 1; }
  int size() const { return static_cast<int>(members_.size()); }
  const GridFunction& at(int k) const {
    return members_.at(static_cast<std::size_t>(k - k0_));
  }
  const std::vector<GridFunction>& members() const { return members_; }
  /// max_k F(u_k), recorded at load.
  double energy_sup() const { return energy_sup_; }

private:
  int k0_ = 1;
  std::vector<GridFunction> members_;
  double energy_sup_ = 0.0;
};

} // namespace disloc
