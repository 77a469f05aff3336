#include "mamc/theory.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "mamc/ensemble.hpp"

namespace mamc {

namespace {

constexpr double kSqrt3 = 1.7320508075688772;

double draw_unit(DistKind kind, RandomStream& rng) {
  switch (kind) {
    case DistKind::Normal:
      return rng.normal();
    case DistKind::Uniform:
      return rng.uniform(-kSqrt3, kSqrt3);  // unit variance
    case DistKind::LogNormal:
      return rng.normal();  // scaled and exponentiated by the caller
  }
  throw std::logic_error("unreachable");
}

// Per-row extremes and quantile of one ensemble.
struct RowStats {
  std::vector<double> vmin, vq, vmax;
};

RowStats row_stats(const SyntheticEnsemble& m, double q) {
  RowStats rs;
  rs.vmin.resize(static_cast<std::size_t>(m.n_actors));
  rs.vq.resize(static_cast<std::size_t>(m.n_actors));
  rs.vmax.resize(static_cast<std::size_t>(m.n_actors));
  std::vector<double> row(static_cast<std::size_t>(m.n_critics));
  for (int i = 0; i < m.n_actors; ++i) {
    for (int j = 0; j < m.n_critics; ++j) row[static_cast<std::size_t>(j)] = m.at(i, j);
    rs.vmin[static_cast<std::size_t>(i)] = *std::min_element(row.begin(), row.end());
    rs.vmax[static_cast<std::size_t>(i)] = *std::max_element(row.begin(), row.end());
    rs.vq[static_cast<std::size_t>(i)] = quantile_inplace(row, q);
  }
  return rs;
}

}  // namespace

void SyntheticEnsemble::validate() const {
  if (n_actors < 1 || n_critics < 1) throw std::invalid_argument("ensemble dims must be >= 1");
  if (values.size() != static_cast<std::size_t>(n_actors) * static_cast<std::size_t>(n_critics)) {
    throw std::invalid_argument("ensemble value count does not match dims");
  }
  for (double v : values) {
    if (!std::isfinite(v)) throw std::invalid_argument("ensemble entries must be finite");
  }
}

SyntheticEnsemble draw_ensemble(int n_actors, int n_critics, const DistSpec& dist,
                                RandomStream& rng) {
  if (n_actors < 1 || n_critics < 1) throw std::invalid_argument("ensemble dims must be >= 1");
  if (dist.rho < 0.0 || dist.rho > 1.0) throw std::invalid_argument("rho must lie in [0, 1]");
  if (dist.stddev < 0.0) throw std::invalid_argument("stddev must be non-negative");

  SyntheticEnsemble m;
  m.n_actors = n_actors;
  m.n_critics = n_critics;
  m.values.resize(static_cast<std::size_t>(n_actors) * static_cast<std::size_t>(n_critics));

  const double wc = std::sqrt(dist.rho);        // common-factor weight
  const double wi = std::sqrt(1.0 - dist.rho);  // idiosyncratic weight
  for (int i = 0; i < n_actors; ++i) {
    const double common = dist.rho > 0.0 ? draw_unit(dist.kind, rng) : 0.0;
    for (int j = 0; j < n_critics; ++j) {
      const double unit = wc * common + wi * draw_unit(dist.kind, rng);
      double v = dist.mean + dist.stddev * unit;
      if (dist.kind == DistKind::LogNormal) v = std::exp(v);
      m.values[static_cast<std::size_t>(i) * n_critics + j] = v;
    }
  }
  return m;
}

double lemma1_violation(const SyntheticEnsemble& m, double q) {
  m.validate();
  RowStats rs = row_stats(m, q);
  const double lo = *std::min_element(rs.vq.begin(), rs.vq.end());
  const double hi = *std::max_element(rs.vq.begin(), rs.vq.end());
  const double mid = quantile_inplace(rs.vq, 0.5);
  return std::max(lo - mid, mid - hi);
}

bool check_lemma1(const SyntheticEnsemble& m, double q) { return lemma1_violation(m, q) <= 0.0; }

double lemma2_violation(const SyntheticEnsemble& m, double q) {
  m.validate();
  RowStats rs = row_stats(m, q);
  const double lo = quantile_inplace(rs.vmin, 0.5);
  const double mid = quantile_inplace(rs.vq, 0.5);
  const double hi = quantile_inplace(rs.vmax, 0.5);
  return std::max(lo - mid, mid - hi);
}

bool check_lemma2(const SyntheticEnsemble& m, double q) { return lemma2_violation(m, q) <= 0.0; }

ErrorReport check_theorem_3_4(const std::vector<SyntheticEnsemble>& ensembles, double q,
                              const std::vector<double>& reference) {
  if (ensembles.empty()) throw std::invalid_argument("ensemble batch must be non-empty");
  if (reference.size() != ensembles.size()) {
    throw std::invalid_argument("one reference value per ensemble required");
  }

  // Per-state terms are accumulated series-by-series in one fixed order, so
  // the pointwise inequalities survive the floating-point averaging.
  double s_cmin = 0.0, s_mid = 0.0, s_cmax = 0.0, s_amin = 0.0, s_amax = 0.0;
  for (std::size_t b = 0; b < ensembles.size(); ++b) {
    const SyntheticEnsemble& m = ensembles[b];
    m.validate();
    RowStats rs = row_stats(m, q);
    const double ref = reference[b];
    const double amin = *std::min_element(rs.vq.begin(), rs.vq.end()) - ref;
    const double amax = *std::max_element(rs.vq.begin(), rs.vq.end()) - ref;
    const double mid = quantile_inplace(rs.vq, 0.5) - ref;
    const double cmin = quantile_inplace(rs.vmin, 0.5) - ref;
    const double cmax = quantile_inplace(rs.vmax, 0.5) - ref;
    s_cmin += cmin;
    s_mid += mid;
    s_cmax += cmax;
    s_amin += amin;
    s_amax += amax;
  }

  const double n = static_cast<double>(ensembles.size());
  ErrorReport rep;
  rep.critic_e_min = s_cmin / n;
  rep.critic_e_mid = s_mid / n;
  rep.critic_e_max = s_cmax / n;
  rep.actor_e_min = s_amin / n;
  rep.actor_e_mid = rep.critic_e_mid;
  rep.actor_e_max = s_amax / n;
  rep.max_violation = std::max({rep.critic_e_min - rep.critic_e_mid,
                                rep.critic_e_mid - rep.critic_e_max,
                                rep.actor_e_min - rep.actor_e_mid,
                                rep.actor_e_mid - rep.actor_e_max});
  rep.pass = rep.max_violation <= 0.0;
  return rep;
}

VarianceReport mc_variance_check(const DistSpec& dist, int n_actors, int n_critics, double q,
                                 long long replications, RandomStream& rng) {
  if (replications < 1000) throw std::invalid_argument("replications must be at least 1000");
  if (n_actors < 1 || n_critics < 1) throw std::invalid_argument("ensemble dims must be >= 1");

  const std::size_t na = static_cast<std::size_t>(n_actors);
  double s_med = 0.0, ss_med = 0.0;
  std::vector<double> s_actor(na, 0.0), ss_actor(na, 0.0);
  double s_entry = 0.0, ss_entry = 0.0;
  double s_v_all = 0.0, ss_v_all = 0.0;

  std::vector<double> row(static_cast<std::size_t>(n_critics));
  std::vector<double> v(na);
  for (long long r = 0; r < replications; ++r) {
    const SyntheticEnsemble m = draw_ensemble(n_actors, n_critics, dist, rng);
    for (double x : m.values) {
      s_entry += x;
      ss_entry += x * x;
    }
    for (int i = 0; i < n_actors; ++i) {
      for (int j = 0; j < n_critics; ++j) row[static_cast<std::size_t>(j)] = m.at(i, j);
      const double vi = quantile_inplace(row, q);
      v[static_cast<std::size_t>(i)] = vi;
      s_actor[static_cast<std::size_t>(i)] += vi;
      ss_actor[static_cast<std::size_t>(i)] += vi * vi;
      s_v_all += vi;
      ss_v_all += vi * vi;
    }
    const double med = quantile_inplace(v, 0.5);
    s_med += med;
    ss_med += med * med;
  }

  const auto variance = [](double s, double ss, double n) {
    const double mean = s / n;
    return std::max(0.0, ss / n - mean * mean);
  };

  const double nrep = static_cast<double>(replications);
  VarianceReport rep;
  rep.var_median_actors = variance(s_med, ss_med, nrep);
  rep.var_single_actor = variance(s_v_all, ss_v_all, nrep * static_cast<double>(n_actors));
  rep.var_quantile_critics = rep.var_single_actor;
  rep.var_single_critic =
      variance(s_entry, ss_entry, nrep * static_cast<double>(n_actors) * n_critics);
  rep.var_per_actor.resize(na);
  for (std::size_t i = 0; i < na; ++i) {
    rep.var_per_actor[i] = variance(s_actor[i], ss_actor[i], nrep);
  }

  const double n_entries = nrep * static_cast<double>(n_actors) * n_critics;
  const double mean_entry = s_entry / n_entries;
  const double mean_v = s_v_all / (nrep * static_cast<double>(n_actors));
  // "Bounded away from zero" relative to the mean's own standard error, so a
  // centered generator reports the ratio as undefined instead of noise.
  rep.c_q_defined = std::abs(mean_entry) > 5.0 * std::sqrt(rep.var_single_critic / n_entries);
  if (rep.c_q_defined) {
    rep.c_q_estimate = mean_v / mean_entry;
    rep.epsilon_c = rep.c_q_estimate != 0.0
                        ? static_cast<double>(n_critics) / (rep.c_q_estimate * rep.c_q_estimate)
                        : std::numeric_limits<double>::quiet_NaN();
  } else {
    rep.c_q_estimate = std::numeric_limits<double>::quiet_NaN();
    rep.epsilon_c = std::numeric_limits<double>::quiet_NaN();
  }
  rep.epsilon_a = static_cast<double>(n_actors);

  rep.degenerate = rep.var_single_critic == 0.0;
  rep.actor_pass = true;
  for (double vi : rep.var_per_actor) {
    if (rep.var_median_actors > vi) rep.actor_pass = false;
  }
  rep.critic_pass = rep.var_quantile_critics <= rep.var_single_critic;
  return rep;
}

}  // namespace mamc
