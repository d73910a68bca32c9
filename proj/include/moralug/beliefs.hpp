#pragma once

#include <functional>
#include <string>
#include <vector>

namespace moralug {

/// Belief over opponents' offers or rejection thresholds, supported on [0, w/2].
///
/// Continuous kinds (ScaledBeta, UniformOnHalf) carry a density. AlwaysAccept
/// is a point mass at 0 and Empirical is a step CDF over a sample; for both,
/// integrals against dF reduce to finite sums.
class BeliefDistribution {
 public:
  enum class Kind { ScaledBeta, UniformOnHalf, AlwaysAccept, Empirical };

  static BeliefDistribution scaled_beta(double a, double b, double upper);
  static BeliefDistribution uniform_on_half(double upper);
  static BeliefDistribution always_accept(double upper);
  /// `bin_width` <= 0 selects the default upper/50 (that is, w/100).
  static BeliefDistribution empirical(std::vector<double> sample, double upper,
                                      double bin_width = 0.0);

  Kind kind() const { return kind_; }
  double upper() const { return upper_; }
  double beta_a() const { return a_; }
  double beta_b() const { return b_; }
  const std::vector<double>& sample() const { return sample_; }
  double bin_width() const { return bin_width_; }

  bool is_continuous() const { return kind_ == Kind::ScaledBeta || kind_ == Kind::UniformOnHalf; }
  /// Limiting cases outside the smooth-belief assumptions.
  bool is_degenerate() const { return kind_ == Kind::AlwaysAccept; }

  /// F(x). Throws std::domain_error for x < 0; returns 1 for x >= upper.
  double cdf(double x) const;
  /// Density; 0 outside [0, upper]. Empirical returns a histogram density.
  double pdf(double x) const;
  /// Integral of h over [lo, upper] against dF, with atoms at y >= lo included.
  double integrate_from(const std::function<double(double)>& h, double lo,
                        double abs_tol = 1e-10) const;

  std::string describe() const;

 private:
  BeliefDistribution(Kind kind, double upper) : kind_(kind), upper_(upper) {}

  Kind kind_;
  double upper_;
  double a_ = 0.0;
  double b_ = 0.0;
  std::vector<double> sample_;
  double bin_width_ = 0.0;
};

}  // namespace moralug
