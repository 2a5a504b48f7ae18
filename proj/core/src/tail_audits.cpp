#include "entrywise/diagnostics.hpp"

#include <algorithm>
#include <cmath>
#include <sstream>
#include <stdexcept>

namespace entrywise {

namespace {

// Binomial(m, p) by inversion against a precomputed CDF table.
class BinomialTable {
 public:
  BinomialTable(std::size_t m, double p) {
    if (p <= 0.0) {
      cdf_.assign(1, 1.0);
      return;
    }
    if (p >= 1.0) {
      cdf_.assign(m + 1, 0.0);
      cdf_[m] = 1.0;
      return;
    }
    const double md = static_cast<double>(m);
    const double log_p = std::log(p), log_q = std::log1p(-p);
    double acc = 0.0;
    cdf_.reserve(m + 1);
    for (std::size_t k = 0; k <= m; ++k) {
      const double kd = static_cast<double>(k);
      const double log_pmf =
          std::lgamma(md + 1.0) - std::lgamma(kd + 1.0) - std::lgamma(md - kd + 1.0) + kd * log_p + (md - kd) * log_q;
      acc += std::exp(log_pmf);
      cdf_.push_back(acc);
      if (kd > md * p && 1.0 - acc < 1e-17) break;
    }
    cdf_.back() = 1.0;
  }

  std::size_t draw(Rng& rng) const {
    const double u = rng.uniform();
    return static_cast<std::size_t>(std::lower_bound(cdf_.begin(), cdf_.end(), u) - cdf_.begin());
  }

 private:
  std::vector<double> cdf_;
};

double standard_error(double p_hat, std::size_t samples) {
  return std::sqrt(p_hat * (1.0 - p_hat) / static_cast<double>(samples));
}

std::string format_parameters(std::initializer_list<std::pair<const char*, double>> kv) {
  std::ostringstream out;
  bool first = true;
  for (const auto& [k, v] : kv) {
    if (!first) out << ' ';
    out << k << '=' << v;
    first = false;
  }
  return out.str();
}

}  // namespace

bool within_slack(double empirical, double std_error, double bound) {
  const double rel_se = empirical > 0.0 ? std_error / empirical : 0.0;
  return empirical <= bound * (1.0 + 3.0 * rel_se) + 3.0 * std_error;
}

TailAudit tail_audit_binom_diff(double a, double b, double epsilon, std::size_t n, std::size_t samples, Seed seed) {
  if (!(a > b) || !(b > 0.0)) throw std::invalid_argument("tail_audit_binom_diff: requires a > b > 0");
  if (samples < 10000) throw std::invalid_argument("tail_audit_binom_diff: samples must be at least 1e4");
  if (n < 2 || n % 2 != 0) throw std::invalid_argument("tail_audit_binom_diff: n must be even and at least 2");
  const double nd = static_cast<double>(n);
  const double log_n = std::log(nd);
  const double p = a * log_n / nd, q = b * log_n / nd;
  if (p > 1.0) throw std::invalid_argument("tail_audit_binom_diff: a log n / n exceeds 1");

  const BinomialTable w(n / 2, p), z(n / 2, q);
  Rng rng(seed);
  const double threshold = epsilon * log_n;
  std::size_t hits = 0;
  for (std::size_t t = 0; t < samples; ++t) {
    const double diff = static_cast<double>(w.draw(rng)) - static_cast<double>(z.draw(rng));
    hits += diff <= threshold;
  }

  TailAudit out;
  out.name = "binom-diff";
  out.parameters = format_parameters({{"a", a}, {"b", b}, {"eps", epsilon}, {"n", nd}});
  out.samples = samples;
  out.empirical = static_cast<double>(hits) / static_cast<double>(samples);
  out.std_error = standard_error(out.empirical, samples);
  const double root_gap = std::sqrt(a) - std::sqrt(b);
  out.bound = std::pow(nd, -root_gap * root_gap / 2.0 + epsilon * std::log(a / b) / 2.0);
  out.pass = within_slack(out.empirical, out.std_error, out.bound);
  return out;
}

TailAudit tail_audit_row_concentration(const Vector& w, double p, double alpha, std::size_t samples, Seed seed) {
  if (!(p > 0.0) || p > 1.0) throw std::invalid_argument("tail_audit_row_concentration: p must lie in (0, 1]");
  if (!(alpha >= 0.0)) throw std::invalid_argument("tail_audit_row_concentration: alpha must be nonnegative");
  if (samples == 0) throw std::invalid_argument("tail_audit_row_concentration: samples must be positive");
  if (w.size() == 0) throw std::invalid_argument("tail_audit_row_concentration: w is empty");
  const double n = static_cast<double>(w.size());

  TailAudit out;
  out.name = "row-concentration";
  out.parameters = format_parameters({{"n", n}, {"p", p}, {"alpha", alpha}});
  out.samples = samples;
  out.bound = 2.0 * std::exp(-alpha * n * p);

  const double w_inf = w.cwiseAbs().maxCoeff();
  if (w_inf == 0.0) {
    out.pass = true;
    return out;
  }
  const double w_two = w.norm();
  const double threshold = (2.0 + alpha) * p * n / std::max(1.0, std::log(std::sqrt(n) * w_inf / w_two)) * w_inf;
  const double centre = p * w.sum();

  Rng rng(seed);
  const double log1m_p = std::log1p(-p);
  const std::uint64_t len = static_cast<std::uint64_t>(w.size());
  std::size_t hits = 0;
  for (std::size_t t = 0; t < samples; ++t) {
    double s = 0.0;
    if (p >= 1.0) {
      s = w.sum();
    } else {
      for (std::uint64_t i = rng.geometric(log1m_p); i < len;) {
        s += w[static_cast<Eigen::Index>(i)];
        const std::uint64_t skip = rng.geometric(log1m_p);
        if (skip >= len - i) break;
        i += skip + 1;
      }
    }
    hits += std::abs(s - centre) >= threshold;
  }
  out.empirical = static_cast<double>(hits) / static_cast<double>(samples);
  out.std_error = standard_error(out.empirical, samples);
  out.pass = within_slack(out.empirical, out.std_error, out.bound);
  return out;
}

std::vector<std::string> tail_audit_presets() {
  return {"binom-diff-default", "row-concentration-default", "row-concentration-spiky"};
}

TailAudit run_tail_audit_preset(const std::string& name, std::uint64_t seed) {
  if (name == "binom-diff-default") {
    TailAudit out = tail_audit_binom_diff(6.0, 2.0, 0.0, 2000, 100000, Seed{seed, 1});
    out.name = name;
    return out;
  }
  if (name == "row-concentration-default" || name == "row-concentration-spiky") {
    constexpr Eigen::Index n = 1000;
    const double p = std::log(static_cast<double>(n)) / static_cast<double>(n);
    Vector w = Vector::Zero(n);
    if (name == "row-concentration-default")
      w.setOnes();
    else
      w[0] = 1.0;
    TailAudit out = tail_audit_row_concentration(w, p, 1.0, 100000, Seed{seed, name == "row-concentration-spiky" ? 3u : 2u});
    out.name = name;
    out.parameters += name == "row-concentration-default" ? " w=ones" : " w=e1";
    return out;
  }
  throw std::invalid_argument("unknown tail audit preset: " + name);
}

}  // namespace entrywise
