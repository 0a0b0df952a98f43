#include "nrfdr/special.hpp"

#include "nrfdr/core.hpp"

#include <boost/math/distributions/chi_squared.hpp>
#include <boost/math/distributions/normal.hpp>

#include <cmath>

namespace nrfdr {

double normal_cdf(double x) {
    return 0.5 * std::erfc(-x * M_SQRT1_2);
}

double normal_sf(double x) {
    return 0.5 * std::erfc(x * M_SQRT1_2);
}

double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) {
        throw InputError("normal_quantile: p must lie in (0,1)");
    }
    const boost::math::normal_distribution<double> dist;
    return boost::math::quantile(dist, p);
}

double chi_squared_sf(double x, int dof) {
    if (dof < 1) throw InputError("chi_squared_sf: dof must be >= 1");
    if (x <= 0.0) return 1.0;
    const boost::math::chi_squared_distribution<double> dist(dof);
    return boost::math::cdf(boost::math::complement(dist, x));
}

double chi_squared_isf(double p, int dof) {
    if (dof < 1) throw InputError("chi_squared_isf: dof must be >= 1");
    if (!(p > 0.0 && p < 1.0)) {
        throw InputError("chi_squared_isf: p must lie in (0,1)");
    }
    const boost::math::chi_squared_distribution<double> dist(dof);
    return boost::math::quantile(boost::math::complement(dist, p));
}

}  // namespace nrfdr
