#include "moralug/beliefs.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

#include <boost/math/distributions/beta.hpp>

#include "moralug/numerics.hpp"

namespace moralug {

namespace {
void require_upper(double upper) {
  if (!(upper > 0.0) || !std::isfinite(upper)) {
    throw std::invalid_argument("belief support upper bound must be positive");
  }
}
}  // namespace

BeliefDistribution BeliefDistribution::scaled_beta(double a, double b, double upper) {
  require_upper(upper);
  if (!(a > 0.0) || !(b > 0.0)) throw std::invalid_argument("beta shape parameters must be positive");
  BeliefDistribution d(Kind::ScaledBeta, upper);
  d.a_ = a;
  d.b_ = b;
  return d;
}

BeliefDistribution BeliefDistribution::uniform_on_half(double upper) {
  require_upper(upper);
  return BeliefDistribution(Kind::UniformOnHalf, upper);
}

BeliefDistribution BeliefDistribution::always_accept(double upper) {
  require_upper(upper);
  return BeliefDistribution(Kind::AlwaysAccept, upper);
}

BeliefDistribution BeliefDistribution::empirical(std::vector<double> sample, double upper,
                                                 double bin_width) {
  require_upper(upper);
  if (sample.empty()) throw std::invalid_argument("empirical belief needs a non-empty sample");
  for (double s : sample) {
    if (!(s >= 0.0 && s <= upper)) {
      throw std::invalid_argument("empirical belief sample outside [0, w/2]");
    }
  }
  std::sort(sample.begin(), sample.end());
  BeliefDistribution d(Kind::Empirical, upper);
  d.sample_ = std::move(sample);
  d.bin_width_ = bin_width > 0.0 ? bin_width : upper / 50.0;
  return d;
}

double BeliefDistribution::cdf(double x) const {
  if (x < 0.0) throw std::domain_error("belief cdf evaluated at negative money");
  if (x >= upper_) return 1.0;
  switch (kind_) {
    case Kind::ScaledBeta:
      return boost::math::cdf(boost::math::beta_distribution<>(a_, b_), x / upper_);
    case Kind::UniformOnHalf:
      return x / upper_;
    case Kind::AlwaysAccept:
      return 1.0;
    case Kind::Empirical: {
      const auto it = std::upper_bound(sample_.begin(), sample_.end(), x);
      return static_cast<double>(it - sample_.begin()) / static_cast<double>(sample_.size());
    }
  }
  return 1.0;
}

double BeliefDistribution::pdf(double x) const {
  if (x < 0.0 || x > upper_) return 0.0;
  switch (kind_) {
    case Kind::ScaledBeta: {
      const double t = x / upper_;
      // boost rejects t in {0,1} when the density is unbounded there
      if ((t == 0.0 && a_ < 1.0) || (t == 1.0 && b_ < 1.0)) return INFINITY;
      return boost::math::pdf(boost::math::beta_distribution<>(a_, b_), t) / upper_;
    }
    case Kind::UniformOnHalf:
      return 1.0 / upper_;
    case Kind::AlwaysAccept:
      return 0.0;
    case Kind::Empirical: {
      const double bin = std::min(std::floor(x / bin_width_), std::ceil(upper_ / bin_width_) - 1.0);
      const double left = bin * bin_width_;
      const double right = std::min(left + bin_width_, upper_);
      const auto lo = std::lower_bound(sample_.begin(), sample_.end(), left);
      // last bin is closed on the right so the sample point upper is counted
      const auto hi = (right >= upper_) ? sample_.end()
                                        : std::lower_bound(sample_.begin(), sample_.end(), right);
      const double mass = static_cast<double>(hi - lo) / static_cast<double>(sample_.size());
      return mass / (right - left);
    }
  }
  return 0.0;
}

double BeliefDistribution::integrate_from(const std::function<double(double)>& h, double lo,
                                          double abs_tol) const {
  lo = std::max(lo, 0.0);
  switch (kind_) {
    case Kind::ScaledBeta:
    case Kind::UniformOnHalf:
      if (lo >= upper_) return 0.0;
      return numerics::integrate([&](double y) { return h(y) * pdf(y); }, lo, upper_, abs_tol);
    case Kind::AlwaysAccept:
      return lo <= 0.0 ? h(0.0) : 0.0;
    case Kind::Empirical: {
      double sum = 0.0;
      for (auto it = std::lower_bound(sample_.begin(), sample_.end(), lo); it != sample_.end(); ++it) {
        sum += h(*it);
      }
      return sum / static_cast<double>(sample_.size());
    }
  }
  return 0.0;
}

std::string BeliefDistribution::describe() const {
  std::ostringstream os;
  switch (kind_) {
    case Kind::ScaledBeta:
      os << "ScaledBeta(" << a_ << "," << b_ << ") on [0," << upper_ << "]";
      break;
    case Kind::UniformOnHalf:
      os << "Uniform on [0," << upper_ << "]";
      break;
    case Kind::AlwaysAccept:
      os << "AlwaysAccept";
      break;
    case Kind::Empirical:
      os << "Empirical(n=" << sample_.size() << ") on [0," << upper_ << "]";
      break;
  }
  return os.str();
}

}  // namespace moralug
