#include "ringstab/params.hpp"

#include <stdexcept>
#include <string>

namespace ringstab {

ParameterSetting ParameterSetting::create(int L, std::vector<double> p, Matrix q,
                                          std::set<int> zero_rate_types) {
  ParameterSetting ps;
  ps.L = L;
  ps.p = std::move(p);
  ps.q = std::move(q);
  ps.zero_rate_types = std::move(zero_rate_types);
  ps.validate();
  return ps;
}

void ParameterSetting::validate() const {
  if (L < 1) throw std::invalid_argument("ParameterSetting: L must be >= 1");
  if (static_cast<int>(p.size()) != L)
    throw std::invalid_argument("ParameterSetting: p has length " + std::to_string(p.size()) +
                                ", expected L = " + std::to_string(L));
  if (q.rows() != static_cast<std::size_t>(L) || q.cols() != static_cast<std::size_t>(L))
    throw std::invalid_argument("ParameterSetting: q must be L x L");
  for (int i = 0; i < L; ++i) {
    if (!(p[i] >= 0.0 && p[i] < 1.0))
      throw std::invalid_argument("ParameterSetting: p[" + std::to_string(i) +
                                  "] must lie in [0,1)");
  }
  for (int i = 0; i < L; ++i) {
    for (int j = 0; j < L; ++j) {
      const double v = q(i, j);
      if (!(v >= 0.0 && v <= 1.0))
        throw std::invalid_argument("ParameterSetting: q[" + std::to_string(i) + "][" +
                                    std::to_string(j) + "] must lie in [0,1]");
    }
  }
  for (int type : zero_rate_types) {
    if (type < 1 || type > L)
      throw std::invalid_argument("ParameterSetting: zero_rate_types entry " +
                                  std::to_string(type) + " is not a type label in 1..L");
    if (p[type - 1] != 0.0)
      throw std::invalid_argument("ParameterSetting: zero-rate type " + std::to_string(type) +
                                  " must have p = 0");
  }
  for (int type = 1; type <= L; ++type) {
    if (zero_rate(type)) continue;
    double survive_lap = 1.0;
    for (int cell = 0; cell < L; ++cell) survive_lap *= 1.0 - hazard(cell, type);
    // Departure requirement: a full lap must lose mass, otherwise a type-`type`
    // vehicle can circulate forever and its visit counts diverge.
    if (!(survive_lap < 1.0))
      throw std::invalid_argument("ParameterSetting: type " + std::to_string(type) +
                                  " has no positive departure hazard on any cell "
                                  "(declare it in zero_rate_types or raise some q)");
  }
}

}  // namespace ringstab
