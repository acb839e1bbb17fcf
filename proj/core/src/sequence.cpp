#include "disloc/sequence.hpp"

#include <stdexcept>

namespace disloc {

FunctionSequence FunctionSequence::from_members(int k0,
                                                std::vector<GridFunction> members,
                                                const EnergySpec& spec) {
  if (members.empty())
    throw std::invalid_argument("FunctionSequence: empty index range");
  FunctionSequence s;
  s.k0_ = k0;
  s.members_ = std::move(members);
  double sup = 0.0;
  for (const auto& u : s.members_) {
    const double f = eval_F(u, spec); // throws on non-finite energy
    sup = std::max(sup, f);
  }
  s.energy_sup_ = sup;
  return s;
}

FunctionSequence FunctionSequence::from_generator(
    int k0, int k1, const std::function<GridFunction(int)>& gen,
    const EnergySpec& spec) {
  if (k1 < k0)
    throw std::invalid_argument("FunctionSequence: empty index range");
  std::vector<GridFunction> members;
  members.reserve(static_cast<std::size_t>(k1 - k0 + 1));
  for (int k = k0; k <= k1; ++k) members.push_back(gen(k));
  return from_members(k0, std::move(members), spec);
}

} // namespace disloc
