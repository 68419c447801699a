#include "chsolve/profile.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <istream>
#include <memory>
#include <sstream>

#include "chsolve/errors.hpp"

namespace chsolve {

namespace {

struct Samples {
  std::vector<double> x;
  std::vector<double> u;
  std::vector<double> ux;
};

// Cubic Hermite through (x_k, u_k) with slopes m_k; value or derivative.
double hermite(const Samples& d, double s, bool derivative) {
  const auto& xs = d.x;
  if (s < xs.front() || s > xs.back()) return 0.0;
  auto it = std::upper_bound(xs.begin(), xs.end(), s);
  const auto i = it == xs.end() ? xs.size() - 1 : static_cast<std::size_t>(it - xs.begin());
  const double h = xs[i] - xs[i - 1];
  const double a = (s - xs[i - 1]) / h;
  const double u0 = d.u[i - 1];
  const double u1 = d.u[i];
  const double m0 = d.ux[i - 1] * h;
  const double m1 = d.ux[i] * h;
  if (derivative) {
    const double b = 1.0 - a;
    return (6.0 * a * b * (u1 - u0) + b * (1.0 - 3.0 * a) * m0 + a * (3.0 * a - 2.0) * m1) / h;
  }
  const double a2 = a * a;
  const double a3 = a2 * a;
  return (2.0 * a3 - 3.0 * a2 + 1.0) * u0 + (a3 - 2.0 * a2 + a) * m0 + (-2.0 * a3 + 3.0 * a2) * u1 +
         (a3 - a2) * m1;
}

// Second-order differences on a non-uniform grid; one-sided at the ends.
std::vector<double> second_order_gradient(const std::vector<double>& x, const std::vector<double>& u) {
  const std::size_t n = x.size();
  std::vector<double> g(n);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double hl = x[i] - x[i - 1];
    const double hr = x[i + 1] - x[i];
    g[i] = (-hr / (hl * (hl + hr))) * u[i - 1] + ((hr - hl) / (hl * hr)) * u[i] +
           (hl / (hr * (hl + hr))) * u[i + 1];
  }
  {
    const double h1 = x[1] - x[0];
    const double h2 = x[2] - x[1];
    g[0] = -(2.0 * h1 + h2) / (h1 * (h1 + h2)) * u[0] + (h1 + h2) / (h1 * h2) * u[1] -
           h1 / (h2 * (h1 + h2)) * u[2];
  }
  {
    const double h1 = x[n - 2] - x[n - 3];
    const double h2 = x[n - 1] - x[n - 2];
    g[n - 1] = h2 / (h1 * (h1 + h2)) * u[n - 3] - (h1 + h2) / (h1 * h2) * u[n - 2] +
               (2.0 * h2 + h1) / (h2 * (h1 + h2)) * u[n - 1];
  }
  return g;
}

}  // namespace

InitialProfile zero_profile(Interval support) {
  return {[](double) { return 0.0; }, [](double) { return 0.0; }, support};
}

InitialProfile sampled_profile(std::vector<double> x, std::vector<double> u) {
  if (x.size() != u.size()) throw InvalidInput("sampled profile: column lengths differ");
  if (x.size() < 3) throw InvalidInput("sampled profile: need at least three samples");
  for (std::size_t i = 0; i < x.size(); ++i) {
    if (!std::isfinite(x[i]) || !std::isfinite(u[i]))
      throw InvalidInput("sampled profile: non-finite sample at row " + std::to_string(i));
    if (i > 0 && !(x[i] > x[i - 1]))
      throw InvalidInput("sampled profile: x must be strictly increasing");
  }
  auto data = std::make_shared<Samples>();
  data->ux = second_order_gradient(x, u);
  data->x = std::move(x);
  data->u = std::move(u);
  const Interval support{data->x.front(), data->x.back()};
  return {[data](double s) { return hermite(*data, s, false); },
          [data](double s) { return hermite(*data, s, true); }, support};
}

InitialProfile read_profile(std::istream& in) {
  std::vector<double> xs;
  std::vector<double> us;
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t\r");
    if (first == std::string::npos || line[first] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream row(line);
    double a = 0.0;
    double b = 0.0;
    if (!(row >> a >> b)) throw InvalidInput("profile: cannot parse line " + std::to_string(lineno));
    xs.push_back(a);
    us.push_back(b);
  }
  return sampled_profile(std::move(xs), std::move(us));
}

InitialProfile read_profile_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InvalidInput("profile: cannot open " + path);
  return read_profile(in);
}

double h1_norm_squared(const InitialProfile& profile, double pad, int n_fine) {
  const double lo = profile.support_hint.lo - pad;
  const double hi = profile.support_hint.hi + pad;
  const double h = (hi - lo) / (n_fine - 1);
  double sum = 0.0;
  for (int k = 0; k < n_fine; ++k) {
    const double s = lo + k * h;
    const double a = profile.u0(s);
    const double b = profile.u0x(s);
    const double w = (k == 0 || k == n_fine - 1) ? 0.5 * h : h;
    sum += w * (a * a + b * b);
  }
  return sum;
}

}  // namespace chsolve
