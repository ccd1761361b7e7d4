#include "calib/pav.hpp"

#include <algorithm>
#include <cmath>
#include <cstdint>

#include "calib/errors.hpp"

namespace calib {

namespace {

long long cross(const std::array<long long, 2>& o, const std::array<long long, 2>& a,
                const std::array<long long, 2>& b) {
  return (a[0] - o[0]) * (b[1] - o[1]) - (a[1] - o[1]) * (b[0] - o[0]);
}

double cross(const std::pair<double, double>& o, const std::pair<double, double>& a,
             const std::pair<double, double>& b) {
  return (a.first - o.first) * (b.second - o.second) -
         (a.second - o.second) * (b.first - o.first);
}

}  // namespace

CumulativeDiagram make_diagram(const SortedGroups& groups) {
  CumulativeDiagram diagram;
  diagram.points.reserve(groups.total + 1);
  diagram.points.push_back({0, 0});
  long long i = 0, s = 0;
  for (const auto& g : groups.groups) {
    for (std::size_t k = 0; k < g.count; ++k) {
      ++i;
      if (k < g.positives) ++s;
      diagram.points.push_back({i, s});
    }
  }
  return diagram;
}

IsotonicFit fit_pav(const ScoredDataset& dataset) {
  const SortedGroups groups = group_by_score(dataset);

  // Block boundary points of the diagram; ties are indivisible, so the
  // hull is built over these alone.
  std::vector<std::array<long long, 2>> boundary;
  boundary.reserve(groups.groups.size() + 1);
  boundary.push_back({0, 0});
  long long count = 0, positives = 0;
  for (const auto& g : groups.groups) {
    count += static_cast<long long>(g.count);
    positives += static_cast<long long>(g.positives);
    boundary.push_back({count, positives});
  }

  // Lower hull, monotone stack; collinear middle points are dropped.
  std::vector<std::size_t> hull;
  for (std::size_t p = 0; p < boundary.size(); ++p) {
    while (hull.size() >= 2 &&
           cross(boundary[hull[hull.size() - 2]], boundary[hull.back()], boundary[p]) <= 0)
      hull.pop_back();
    hull.push_back(p);
  }

  IsotonicFit fit;
  fit.z.reserve(groups.total);
  fit.hull_vertices.reserve(hull.size());
  for (std::size_t h : hull)
    fit.hull_vertices.push_back(static_cast<std::size_t>(boundary[h][0]));

  for (std::size_t seg = 0; seg + 1 < hull.size(); ++seg) {
    const auto& a = boundary[hull[seg]];
    const auto& b = boundary[hull[seg + 1]];
    const double slope =
        static_cast<double>(b[1] - a[1]) / static_cast<double>(b[0] - a[0]);
    for (long long k = a[0]; k < b[0]; ++k) fit.z.push_back(slope);
  }
  return fit;
}

LinkFunction build_link(const IsotonicFit& fit, const ScoredDataset& dataset) {
  if (fit.z.size() != dataset.size())
    throw Error(Errc::fit_dataset_mismatch, "fit holds " + std::to_string(fit.z.size()) +
                                                " values for a dataset of " +
                                                std::to_string(dataset.size()));
  const SortedGroups groups = group_by_score(dataset);

  LinkFunction link;
  link.knots.reserve(groups.groups.size());
  std::size_t offset = 0;
  for (const auto& g : groups.groups) {
    link.knots.emplace_back(g.score, fit.z[offset]);
    offset += g.count;
  }
  return link;
}

double LinkFunction::evaluate(double score) const {
  if (score <= knots.front().first) return knots.front().second;
  if (score >= knots.back().first) return knots.back().second;
  const auto it = std::upper_bound(
      knots.begin(), knots.end(), score,
      [](double s, const std::pair<double, double>& k) { return s < k.first; });
  const auto& hi = *it;
  const auto& lo = *(it - 1);
  if (score == lo.first) return lo.second;
  const double t = (score - lo.first) / (hi.first - lo.first);
  return std::clamp(lo.second + t * (hi.second - lo.second), lo.second, hi.second);
}

std::vector<double> apply_link(const LinkFunction& link, std::span<const double> scores) {
  for (double s : scores)
    if (!(s >= 0.0 && s <= 1.0))
      throw Error(Errc::score_out_of_range, "score " + std::to_string(s));
  std::vector<double> out;
  out.reserve(scores.size());
  for (double s : scores) out.push_back(link.evaluate(s));
  return out;
}

double calibration_objective(std::span<const double> z, std::span<const int> labels) {
  if (z.size() != labels.size())
    throw Error(Errc::length_mismatch, "calibration_objective inputs differ in length");
  if (z.empty()) throw Error(Errc::empty_input, "calibration_objective");

  double pre = 0.0, max_pre = 0.0, min_pre = 0.0;
  for (std::size_t i = 0; i < z.size(); ++i) {
    pre += static_cast<double>(labels[i]) - z[i];
    max_pre = std::max(max_pre, pre);
    min_pre = std::min(min_pre, pre);
  }
  return (max_pre - min_pre) / static_cast<double>(z.size());
}

ConvergenceDiagnostics convergence_diagnostics(const DiscreteDistribution& dist,
                                               const LinkFunction& link,
                                               std::span<const double> grid) {
  validate_distribution(dist);
  if (grid.empty()) throw Error(Errc::empty_grid, "convergence_diagnostics");

  const std::size_t m = dist.atoms.size();
  std::vector<double> mass_pre(m + 1, 0.0), pos_pre(m + 1, 0.0), link_pre(m + 1, 0.0);
  for (std::size_t j = 0; j < m; ++j) {
    const auto& atom = dist.atoms[j];
    mass_pre[j + 1] = mass_pre[j] + atom.mass;
    pos_pre[j + 1] = pos_pre[j] + atom.mass * atom.positive_rate;
    link_pre[j + 1] = link_pre[j] + atom.mass * link.evaluate(atom.f_value);
  }

  ConvergenceDiagnostics diag;
  diag.grid.assign(grid.begin(), grid.end());
  diag.F.reserve(grid.size());
  diag.G.reserve(grid.size());
  diag.G_e.reserve(grid.size());
  for (double t : grid) {
    const std::size_t j =
        std::upper_bound(dist.atoms.begin(), dist.atoms.end(), t,
                         [](double v, const DiscreteAtom& a) { return v < a.f_value; }) -
        dist.atoms.begin();
    diag.F.push_back(mass_pre[j]);
    diag.G.push_back(pos_pre[j]);
    diag.G_e.push_back(link_pre[j]);
  }

  // Convex minorant of the curve through (0,0) and the grid's (F, G)
  // points, then evaluated at each F(t).
  std::vector<std::pair<double, double>> pts;
  pts.emplace_back(0.0, 0.0);
  for (std::size_t i = 0; i < grid.size(); ++i) {
    if (diag.F[i] > pts.back().first) pts.emplace_back(diag.F[i], diag.G[i]);
  }

  std::vector<std::size_t> hull;
  for (std::size_t p = 0; p < pts.size(); ++p) {
    while (hull.size() >= 2 && cross(pts[hull[hull.size() - 2]], pts[hull.back()], pts[p]) <= 0.0)
      hull.pop_back();
    hull.push_back(p);
  }

  auto hull_at = [&](double x) {
    if (x <= pts[hull.front()].first) return pts[hull.front()].second;
    if (x >= pts[hull.back()].first) return pts[hull.back()].second;
    std::size_t seg = 0;
    while (seg + 1 < hull.size() && pts[hull[seg + 1]].first < x) ++seg;
    const auto& a = pts[hull[seg]];
    const auto& b = pts[hull[seg + 1]];
    if (x == b.first) return b.second;
    const double t = (x - a.first) / (b.first - a.first);
    return a.second + t * (b.second - a.second);
  };

  diag.cvF.reserve(grid.size());
  for (double f : diag.F) diag.cvF.push_back(hull_at(f));
  return diag;
}

}  // namespace calib
