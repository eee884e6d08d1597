#include <boost/math/special_functions/beta.hpp>

#include "entropic/errors.hpp"
#include "entropic/pairs.hpp"

namespace entropic {

std::pair<double, double> clopper_pearson(std::size_t k, std::size_t n, double alpha) {
  if (n == 0 || k > n) throw ValidationError("clopper_pearson: need 0 <= k <= n and n > 0");
  if (!(alpha > 0.0 && alpha < 1.0)) throw ValidationError("clopper_pearson: alpha must be in (0, 1)");
  const double kk = static_cast<double>(k);
  const double nn = static_cast<double>(n);
  const double low = k == 0 ? 0.0 : boost::math::ibeta_inv(kk, nn - kk + 1.0, alpha / 2.0);
  const double high = k == n ? 1.0 : boost::math::ibeta_inv(kk + 1.0, nn - kk, 1.0 - alpha / 2.0);
  return {low, high};
}

}  // namespace entropic
