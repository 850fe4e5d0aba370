#include "scholarmetrics/impact.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <set>
#include <unordered_map>

#include "scholarmetrics/error.hpp"

namespace scholarmetrics::impact {

std::uint64_t h_index(std::span<const std::uint64_t> citation_counts) {
  std::vector<std::uint64_t> sorted(citation_counts.begin(), citation_counts.end());
  std::sort(sorted.begin(), sorted.end(), std::greater<>());
  std::uint64_t h = 0;
  while (h < sorted.size() && sorted[h] >= h + 1) ++h;
  return h;
}

PowerLawFit fit_power_law(std::span<const double> counts) {
  std::vector<double> ys;
  ys.reserve(counts.size());
  for (double c : counts) {
    if (c > 0.0 && std::isfinite(c)) ys.push_back(c);
  }
  if (ys.size() < 2) {
    throw Error(ErrorKind::InsufficientData, "power-law fit needs at least two positive counts");
  }
  std::sort(ys.begin(), ys.end(), std::greater<>());

  const auto n = static_cast<double>(ys.size());
  std::vector<double> lx(ys.size()), ly(ys.size());
  double mx = 0.0, my = 0.0;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    lx[i] = std::log(static_cast<double>(i + 1));
    ly[i] = std::log(ys[i]);
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < ys.size(); ++i) {
    const double dx = lx[i] - mx;
    const double dy = ly[i] - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  const double slope = sxy / sxx;
  const double intercept = my - slope * mx;

  PowerLawFit fit;
  fit.alpha = -slope;
  fit.C = std::exp(intercept);
  fit.n_points = ys.size();
  const bool constant = std::all_of(ys.begin(), ys.end(), [&](double v) { return v == ys.front(); });
  if (!constant && syy > 0.0) {
    double ss_res = 0.0;
    for (std::size_t i = 0; i < ys.size(); ++i) {
      const double r = ly[i] - (intercept + slope * lx[i]);
      ss_res += r * r;
    }
    fit.r2 = 1.0 - ss_res / syy;
  }
  return fit;
}

PowerLawFit fit_power_law(std::span<const std::uint64_t> counts) {
  std::vector<double> as_real(counts.begin(), counts.end());
  return fit_power_law(std::span<const double>(as_real));
}

std::optional<std::int64_t> days_to_n_citations(const WorkRecord& work, std::uint64_t n) {
  if (n == 0 || !work.pub_date || work.citer_events.size() < n) return std::nullopt;
  std::vector<Date> dates;
  dates.reserve(work.citer_events.size());
  for (const auto& e : work.citer_events) dates.push_back(e.date);
  std::nth_element(dates.begin(), dates.begin() + static_cast<std::ptrdiff_t>(n - 1), dates.end());
  return std::max<std::int64_t>(1, days_between(*work.pub_date, dates[n - 1]));
}

double citation_velocity(std::uint64_t threshold, std::int64_t days) {
  if (days < 1) throw Error(ErrorKind::InvalidArgument, "days must be >= 1");
  return static_cast<double>(threshold) * kDaysPerYear / static_cast<double>(days);
}

std::optional<VelocityRecord> velocity_record(const WorkRecord& work, std::uint64_t threshold) {
  auto days = days_to_n_citations(work, threshold);
  if (!days) return std::nullopt;
  return VelocityRecord{work.work_id, threshold, *days, citation_velocity(threshold, *days)};
}

std::vector<const WorkRecord*> top_cited(std::span<const WorkRecord* const> works,
                                         int top_percent) {
  if (top_percent < 1 || top_percent > 100) {
    throw Error(ErrorKind::InvalidArgument, "top_percent must be within [1, 100]");
  }
  if (works.empty()) return {};
  std::vector<std::uint64_t> counts;
  counts.reserve(works.size());
  for (const auto* w : works) counts.push_back(w->citation_count);
  std::sort(counts.begin(), counts.end(), std::greater<>());
  const std::size_t k = std::max<std::size_t>(
      1, (static_cast<std::size_t>(top_percent) * works.size() + 99) / 100);
  const std::uint64_t cutoff = counts[k - 1];
  std::vector<const WorkRecord*> out;
  for (const auto* w : works) {
    if (w->citation_count >= cutoff) out.push_back(w);
  }
  return out;
}

std::vector<std::int64_t> velocity_distribution(const Corpus& corpus, const TimeWindow& window,
                                                Subfield subfield, std::uint64_t n, Cohort cohort,
                                                int top_percent) {
  auto scope = corpus.targets(subfield, window);
  if (cohort == Cohort::TopCited) scope = top_cited(scope, top_percent);
  std::vector<std::int64_t> days;
  for (const auto* w : scope) {
    if (auto d = days_to_n_citations(*w, n)) days.push_back(*d);
  }
  return days;
}

double shannon_entropy(std::span<const double> proportions) {
  double sum = 0.0;
  for (double p : proportions) {
    if (!(p >= 0.0) || !std::isfinite(p)) {
      throw Error(ErrorKind::InvalidDistribution, "proportions must be finite and nonnegative");
    }
    sum += p;
  }
  if (std::abs(sum - 1.0) > 1e-6) {
    throw Error(ErrorKind::InvalidDistribution, "proportions must sum to 1");
  }
  double h = 0.0;
  for (double p : proportions) {
    if (p > 0.0) h -= p * std::log(p);
  }
  return std::max(0.0, h);
}

std::string_view to_string(Direction d) noexcept {
  return d == Direction::Cited ? "cited" : "citing";
}

std::map<std::string, std::uint64_t> neighbor_disciplines(const WorkRecord& work,
                                                          const Corpus& corpus,
                                                          Direction direction) {
  std::map<std::string, std::uint64_t> counts;
  auto tally = [&](const std::string& id) {
    if (const WorkRecord* n = corpus.find_work(id)) {
      if (const std::string* d = n->primary_discipline()) ++counts[*d];
    }
  };
  if (direction == Direction::Cited) {
    for (const auto& id : work.referenced_ids) tally(id);
  } else {
    for (const auto& e : work.citer_events) tally(e.work_id);
  }
  return counts;
}

std::optional<double> work_interdisciplinarity(const WorkRecord& work, const Corpus& corpus,
                                               Direction direction) {
  auto counts = neighbor_disciplines(work, corpus, direction);
  std::uint64_t total = 0;
  for (const auto& [_, c] : counts) total += c;
  if (total == 0) return std::nullopt;
  std::vector<double> p;
  p.reserve(counts.size());
  for (const auto& [_, c] : counts) p.push_back(static_cast<double>(c) / static_cast<double>(total));
  return shannon_entropy(p);
}

FlowMatrix make_flow_matrix(std::vector<Subfield> subfields, std::vector<std::uint64_t> sizes,
                            std::vector<std::vector<double>> observed) {
  const std::size_t k = subfields.size();
  if (sizes.size() != k || observed.size() != k) {
    throw Error(ErrorKind::InvalidArgument, "flow matrix dimensions disagree");
  }
  FlowMatrix m;
  m.subfields = std::move(subfields);
  m.sizes = std::move(sizes);
  m.observed = std::move(observed);
  for (const auto& row : m.observed) {
    if (row.size() != k) throw Error(ErrorKind::InvalidArgument, "flow matrix is not square");
    for (double c : row) m.total_citations += c;
  }
  for (auto n : m.sizes) m.total_papers += n;
  if (m.total_papers == 0) throw Error(ErrorKind::InsufficientData, "no papers in scope");
  if (m.total_citations <= 0.0) throw Error(ErrorKind::InsufficientData, "no citations in scope");

  const double total_n = static_cast<double>(m.total_papers);
  m.expected.assign(k, std::vector<double>(k, 0.0));
  m.ratio.assign(k, std::vector<std::optional<double>>(k));
  for (std::size_t i = 0; i < k; ++i) {
    for (std::size_t j = 0; j < k; ++j) {
      const double e = (static_cast<double>(m.sizes[i]) / total_n) *
                       (static_cast<double>(m.sizes[j]) / total_n) * m.total_citations;
      m.expected[i][j] = e;
      if (e > 0.0) m.ratio[i][j] = m.observed[i][j] / e;
    }
  }
  return m;
}

FlowMatrix observed_expected_matrix(const Corpus& corpus, std::optional<TimeWindow> window,
                                    std::span<const Subfield> subfields) {
  std::vector<Subfield> order(subfields.begin(), subfields.end());
  std::unordered_map<std::string, std::size_t> slot;  // work id -> subfield position
  std::vector<std::uint64_t> sizes(order.size(), 0);
  std::vector<const WorkRecord*> scope;
  for (const WorkRecord* w : corpus.targets(std::nullopt, window)) {
    if (!w->subfield) continue;
    auto it = std::find(order.begin(), order.end(), *w->subfield);
    if (it == order.end()) continue;
    auto pos = static_cast<std::size_t>(it - order.begin());
    slot.emplace(w->work_id, pos);
    ++sizes[pos];
    scope.push_back(w);
  }

  std::set<std::pair<std::string, std::string>> edges;
  for (const WorkRecord* w : scope) {
    for (const auto& ref : w->referenced_ids) {
      if (slot.contains(ref)) edges.emplace(w->work_id, ref);
    }
    for (const auto& e : w->citer_events) {
      if (slot.contains(e.work_id)) edges.emplace(e.work_id, w->work_id);
    }
  }
  std::vector<std::vector<double>> observed(order.size(), std::vector<double>(order.size(), 0.0));
  for (const auto& [from, to] : edges) observed[slot.at(from)][slot.at(to)] += 1.0;
  return make_flow_matrix(std::move(order), std::move(sizes), std::move(observed));
}

}  // namespace scholarmetrics::impact
