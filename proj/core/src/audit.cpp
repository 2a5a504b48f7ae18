#include "entrywise/ensembles.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace entrywise {

double Phi::operator()(double x) const {
  if (x < 0.0) throw std::domain_error("phi: argument must be nonnegative");
  if (kind == PhiKind::kLinear) return scale * x;
  if (x == 0.0) return 0.0;
  return scale / std::max(1.0, std::log(1.0 / x));
}

AssumptionAudit audit(const EnsembleSpec& spec, std::optional<double> spectral_constant) {
  validate(spec);
  const PopulationModel pop = population(spec);
  AssumptionAudit out;

  if (const auto* z = std::get_if<Z2Sync>(&spec)) {
    const double n = static_cast<double>(z->n);
    out.gamma = std::max(3.0 / std::sqrt(std::log(n)), 1.0 / std::sqrt(n));
    out.phi = Phi{PhiKind::kLinear, 1.0};
  } else if (const auto* m = std::get_if<Sbm2>(&spec)) {
    const double n = static_cast<double>(m->n);
    const double margin = std::min(m->b, (m->a - m->b) / 2.0);
    out.spectral_constant = spectral_constant.value_or(2.0 * std::sqrt((m->a + m->b) / 2.0));
    out.gamma = out.spectral_constant / (margin * std::sqrt(std::log(n)));
    out.phi = Phi{PhiKind::kLogInverse, (2.0 * m->a + 4.0) / margin};
  } else {
    throw std::invalid_argument("audit: only z2 and sbm2 ensembles carry assumption parameters");
  }

  out.incoherence_lhs = pop.a_star_two_to_inf;
  out.incoherence_rhs = out.gamma * pop.gap;
  out.incoherence_ok = out.incoherence_lhs <= out.incoherence_rhs;
  out.scaling_value = 32.0 * pop.kappa * std::max(out.gamma, out.phi(out.gamma));
  out.scaling_ok = out.scaling_value <= 1.0;
  return out;
}

}  // namespace entrywise
