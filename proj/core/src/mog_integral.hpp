#pragma once

#include <algorithm>
#include <vector>

#include "mogfade/mog.hpp"
#include "mogfade/quadrature.hpp"

namespace mogfade::internal {

// int_0^inf h(x) f_mog(x) dx in the envelope domain, split at mu_i +- 8 eta_i
// so that narrow components are never stepped over.
inline double integrate_against_mog(const MoGModel& model, const quad::Integrand& h) {
  std::vector<double> cuts{0.0};
  for (const auto& c : model.components()) {
    for (double k : {-8.0, -3.0, 0.0, 3.0, 8.0}) {
      const double x = c.mean + k * c.std;
      if (x > 0.0) cuts.push_back(x);
    }
  }
  std::sort(cuts.begin(), cuts.end());
  cuts.erase(std::unique(cuts.begin(), cuts.end()), cuts.end());
  auto integrand = [&](double x) { return h(x) * mog_envelope_pdf(model, x); };
  quad::Options opts;
  opts.abs_tol = 1e-15;
  opts.rel_tol = 1e-12;
  opts.max_intervals = 4000;
  double total = 0.0;
  if (cuts.size() > 1) total += quad::integrate_pieces(integrand, cuts, opts).value;
  total += quad::integrate_to_infinity_or_throw(integrand, cuts.back(), opts);
  return total;
}

}  // namespace mogfade::internal
