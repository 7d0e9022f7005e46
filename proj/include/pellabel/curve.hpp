#ifndef PELLABEL_CURVE_HPP
#define PELLABEL_CURVE_HPP

#include <cstddef>
#include <string>
#include <vector>

#include "pellabel/errors.hpp"
#include "pellabel/poly.hpp"

namespace pellabel {

/// Ordered band endpoints a0 < b0 < a1 < ... < ag < bg of a totally real
/// hyperelliptic curve y^2 = D(x), D = prod (x - a_i)(x - b_i).
/// Bands E_j = [a_j, b_j] (D <= 0), gaps T_j = [b_{j-1}, a_j] (D > 0).
template <typename Real>
class CurveConfig {
 public:
  static constexpr double kDefaultSeparationFloor = 1e-9;

  /// Default: the unit interval (genus 0).
  CurveConfig() : e_{Real(0), Real(1)} {}

  explicit CurveConfig(std::vector<Real> endpoints,
                       Real separation_floor = Real(kDefaultSeparationFloor))
      : e_(std::move(endpoints)) {
    if (e_.size() < 2 || e_.size() % 2 != 0)
      throw validation_error("curve needs an even number (>= 2) of endpoints");
    for (size_t i = 1; i < e_.size(); ++i) {
      if (!(e_[i] - e_[i - 1] > separation_floor))
        throw validation_error(
            "curve endpoints must be strictly increasing with gaps above " +
            std::to_string(double(separation_floor)));
    }
  }

  int genus() const { return static_cast<int>(e_.size()) / 2 - 1; }
  const std::vector<Real>& endpoints() const { return e_; }

  Real band_lo(int j) const { return e_[static_cast<size_t>(2 * j)]; }      // a_j
  Real band_hi(int j) const { return e_[static_cast<size_t>(2 * j + 1)]; }  // b_j
  Real gap_lo(int j) const { return e_[static_cast<size_t>(2 * j - 1)]; }   // b_{j-1}, j in 1..g
  Real gap_hi(int j) const { return e_[static_cast<size_t>(2 * j)]; }       // a_j

  Poly<Real> divisor_poly() const { return Poly<Real>::from_roots(e_); }

  /// Smallest distance between consecutive endpoints.
  Real min_gap() const {
    Real best = e_[1] - e_[0];
    for (size_t i = 2; i < e_.size(); ++i) best = std::min(best, e_[i] - e_[i - 1]);
    return best;
  }

 private:
  std::vector<Real> e_;
};

}  // namespace pellabel

#endif
