#pragma once

#include <cstddef>
#include <cstdint>
#include <set>
#include <vector>

namespace ringstab {

/// Dense row-major matrix of doubles. Just enough surface for the small
/// (L x L and class-space sized) systems this library works with.
class Matrix {
 public:
  Matrix() = default;
  Matrix(std::size_t rows, std::size_t cols, double value = 0.0)
      : rows_(rows), cols_(cols), data_(rows * cols, value) {}

  double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
  double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

  std::size_t rows() const { return rows_; }
  std::size_t cols() const { return cols_; }
  const std::vector<double>& data() const { return data_; }

  bool operator==(const Matrix& other) const = default;

 private:
  std::size_t rows_ = 0;
  std::size_t cols_ = 0;
  std::vector<double> data_;
};

/// Parameters of the ring: L cells, one entry queue per cell.
///
/// p[i] is the per-step arrival probability at the queue of cell i (0-based),
/// each in [0,1). q(i, j-1) is the probability that a vehicle of type j
/// (the label of its entry cell, 1-based, so j in 1..L) departs from cell i.
///
/// Every type j outside zero_rate_types must be removable: the product of
/// (1 - q(i, j-1)) over all cells i must be < 1. Types listed in
/// zero_rate_types are exempt but must have p[j-1] == 0; they exist so that
/// permanently circulating vehicles (used by the slotted-ring mapping) can be
/// expressed.
struct ParameterSetting {
  int L = 0;
  std::vector<double> p;
  Matrix q;
  std::set<int> zero_rate_types;

  /// Validates and returns the setting; throws std::invalid_argument on any
  /// violated constraint (dimensions, ranges, departure requirement).
  static ParameterSetting create(int L, std::vector<double> p, Matrix q,
                                 std::set<int> zero_rate_types = {});

  /// Departure hazard of a type-`type` vehicle (1-based label) at cell
  /// `cell` (0-based).
  double hazard(int cell, int type) const { return q(static_cast<std::size_t>(cell), static_cast<std::size_t>(type - 1)); }

  bool zero_rate(int type) const { return zero_rate_types.count(type) > 0; }

  /// Throws std::invalid_argument if any invariant fails.
  void validate() const;
};

/// Flat index of class (station i, tag j) with i in [0,L) and j in [0,L].
/// Tag 0 is the entry queue of station i; tag j >= 1 is a ring vehicle that
/// entered at cell j (1-based label). The class space has dimension L*(L+1).
inline std::size_t class_index(int L, int station, int tag) {
  return static_cast<std::size_t>(station) * static_cast<std::size_t>(L + 1) +
         static_cast<std::size_t>(tag);
}

inline std::size_t class_count(int L) {
  return static_cast<std::size_t>(L) * static_cast<std::size_t>(L + 1);
}

}  // namespace ringstab
