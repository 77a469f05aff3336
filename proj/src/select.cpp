#include "mamc/select.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mamc {

namespace {

// Critic values for one actor at one state, shared by skill and creativity.
std::vector<double> critic_values(const MlpSpec& actor_spec, const ParamVector& actor,
                                  const MlpSpec& critic_spec,
                                  const std::vector<ParamVector>& critics,
                                  std::span<const double> state) {
  const std::vector<double> action = forward_one(actor_spec, actor, state);
  std::vector<double> sa(state.begin(), state.end());
  sa.insert(sa.end(), action.begin(), action.end());
  std::vector<double> values;
  values.reserve(critics.size());
  for (const ParamVector& theta : critics) {
    values.push_back(forward_one(critic_spec, theta, sa)[0]);
  }
  return values;
}

bool dominates(const std::array<double, 2>& a, const std::array<double, 2>& b) {
  return a[0] >= b[0] && a[1] >= b[1] && (a[0] > b[0] || a[1] > b[1]);
}

}  // namespace

double skill(const MlpSpec& actor_spec, const ParamVector& actor, const MlpSpec& critic_spec,
             const std::vector<ParamVector>& critics, const std::vector<Transition>& batch,
             double q) {
  if (batch.empty()) throw std::invalid_argument("empty evaluation batch");
  double total = 0.0;
  for (const Transition& t : batch) {
    total += quantile(critic_values(actor_spec, actor, critic_spec, critics, t.state), q);
  }
  return total / static_cast<double>(batch.size());
}

double creativity(const MlpSpec& actor_spec, const ParamVector& actor, const MlpSpec& critic_spec,
                  const std::vector<ParamVector>& critics, const std::vector<Transition>& batch,
                  double q) {
  if (batch.empty()) throw std::invalid_argument("empty evaluation batch");
  double total = 0.0;
  for (const Transition& t : batch) {
    const std::vector<double> values =
        critic_values(actor_spec, actor, critic_spec, critics, t.state);
    const double qhat = quantile(values, q);
    for (double v : values) total += std::abs(v - qhat);
  }
  return total / (static_cast<double>(batch.size()) * static_cast<double>(critics.size()));
}

ParetoFronts nondominated_sort(const std::vector<std::array<double, 2>>& points) {
  const int n = static_cast<int>(points.size());
  if (n == 0) throw std::invalid_argument("no points to sort");
  ParetoFronts out;
  out.front.assign(static_cast<std::size_t>(n), -1);

  std::vector<int> dominated_by(static_cast<std::size_t>(n), 0);
  std::vector<std::vector<int>> dominated(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      if (i == j) continue;
      if (dominates(points[static_cast<std::size_t>(i)], points[static_cast<std::size_t>(j)])) {
        dominated[static_cast<std::size_t>(i)].push_back(j);
      } else if (dominates(points[static_cast<std::size_t>(j)],
                           points[static_cast<std::size_t>(i)])) {
        dominated_by[static_cast<std::size_t>(i)] += 1;
      }
    }
  }

  std::vector<int> current;
  for (int i = 0; i < n; ++i) {
    if (dominated_by[static_cast<std::size_t>(i)] == 0) current.push_back(i);
  }
  int level = 0;
  while (!current.empty()) {
    std::vector<int> next;
    for (int i : current) {
      out.front[static_cast<std::size_t>(i)] = level;
      for (int j : dominated[static_cast<std::size_t>(i)]) {
        if (--dominated_by[static_cast<std::size_t>(j)] == 0) next.push_back(j);
      }
    }
    std::sort(current.begin(), current.end());
    out.fronts.push_back(std::move(current));
    std::sort(next.begin(), next.end());
    current = std::move(next);
    level += 1;
  }
  return out;
}

std::vector<double> crowding_distance(const std::vector<std::array<double, 2>>& points,
                                      const std::vector<int>& front) {
  const std::size_t n = front.size();
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> dist(n, 0.0);
  if (n == 0) return dist;
  if (n <= 2) {
    std::fill(dist.begin(), dist.end(), inf);
    return dist;
  }

  std::vector<std::size_t> order(n);
  for (int obj = 0; obj < 2; ++obj) {
    for (std::size_t k = 0; k < n; ++k) order[k] = k;
    std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
      const double va = points[static_cast<std::size_t>(front[a])][static_cast<std::size_t>(obj)];
      const double vb = points[static_cast<std::size_t>(front[b])][static_cast<std::size_t>(obj)];
      if (va != vb) return va < vb;
      return front[a] < front[b];
    });
    const double lo = points[static_cast<std::size_t>(front[order.front()])][static_cast<std::size_t>(obj)];
    const double hi = points[static_cast<std::size_t>(front[order.back()])][static_cast<std::size_t>(obj)];
    const double range = hi - lo;
    if (range == 0.0) continue;  // objective carries no ordering information
    dist[order.front()] = inf;
    dist[order.back()] = inf;
    for (std::size_t k = 1; k + 1 < n; ++k) {
      const double prev =
          points[static_cast<std::size_t>(front[order[k - 1]])][static_cast<std::size_t>(obj)];
      const double next =
          points[static_cast<std::size_t>(front[order[k + 1]])][static_cast<std::size_t>(obj)];
      dist[order[k]] += (next - prev) / range;
    }
  }
  return dist;
}

std::vector<int> select_explore(const FactorScores& scores, int n_select) {
  const int n = static_cast<int>(scores.skill.size());
  if (scores.creativity.size() != scores.skill.size()) {
    throw std::invalid_argument("factor score lengths differ");
  }
  if (n == 0) throw std::invalid_argument("no actors to select from");
  if (n_select < 1 || n_select > n) throw std::invalid_argument("n_select out of range");

  std::vector<std::array<double, 2>> points(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    points[static_cast<std::size_t>(i)] = {scores.skill[static_cast<std::size_t>(i)],
                                           scores.creativity[static_cast<std::size_t>(i)]};
  }
  const ParetoFronts pf = nondominated_sort(points);

  std::vector<double> crowd(static_cast<std::size_t>(n), 0.0);
  for (const std::vector<int>& front : pf.fronts) {
    const std::vector<double> d = crowding_distance(points, front);
    for (std::size_t k = 0; k < front.size(); ++k) {
      crowd[static_cast<std::size_t>(front[k])] = d[k];
    }
  }

  std::vector<int> order(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) order[static_cast<std::size_t>(i)] = i;
  std::sort(order.begin(), order.end(), [&](int a, int b) {
    const int fa = pf.front[static_cast<std::size_t>(a)];
    const int fb = pf.front[static_cast<std::size_t>(b)];
    if (fa != fb) return fa < fb;
    const double ca = crowd[static_cast<std::size_t>(a)];
    const double cb = crowd[static_cast<std::size_t>(b)];
    if (ca != cb) return ca > cb;
    return a < b;
  });

  std::vector<int> selected(order.begin(), order.begin() + n_select);
  std::sort(selected.begin(), selected.end());
  return selected;
}

int select_exploit(const FactorScores& scores) {
  if (scores.skill.empty()) throw std::invalid_argument("no actors to select from");
  int best = 0;
  for (int i = 1; i < static_cast<int>(scores.skill.size()); ++i) {
    if (scores.skill[static_cast<std::size_t>(i)] > scores.skill[static_cast<std::size_t>(best)]) {
      best = i;
    }
  }
  return best;
}

}  // namespace mamc
