#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

#include "sparsepot/special_functions.hpp"
#include "sparsepot/step_model.hpp"

namespace sparsepot {

struct Piece {
  double a = 0.0;
  double b = 0.0;
  cplx value;
};

/// Finitely many sorted, disjoint intervals carrying complex constants.
/// Adjacent pieces may touch (b_i == a_{i+1}); overlaps are rejected.
class PiecewisePotential {
 public:
  PiecewisePotential() = default;

  /// Validates; SchemaError names the offending piece index.
  explicit PiecewisePotential(std::vector<Piece> pieces);

  static PiecewisePotential from_bump(const StepBump& bump);
  static PiecewisePotential from_bumps(const std::vector<StepBump>& bumps);

  /// Parses {"pieces":[{"a":..,"b":..,"re":..,"im":..},...]}.
  static PiecewisePotential from_json(std::string_view text);
  std::string to_json() const;

  const std::vector<Piece>& pieces() const noexcept { return pieces_; }
  std::size_t size() const noexcept { return pieces_.size(); }
  bool empty() const noexcept { return pieces_.empty(); }

  double left() const;
  double right() const;

  cplx operator()(double x) const;

  /// First n pieces (the truncation V^(n) when each piece is one bump).
  PiecewisePotential prefix(std::size_t n) const;

  /// x -> lambda^2 V(lambda x). Eigenvalues scale by lambda^2.
  PiecewisePotential scaled(double lambda) const;

  /// (sum_j |v_j|^q |b_j - a_j|)^{1/q}; max |v_j| for q = inf.
  double norm_lq(double q) const;

 private:
  std::vector<Piece> pieces_;
};

PiecewisePotential load_potential(const std::string& path);
void save_potential(const PiecewisePotential& pot, const std::string& path);

}  // namespace sparsepot
