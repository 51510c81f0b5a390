#include "comlab/structure.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <sstream>

namespace comlab {

namespace {

std::string tuple_to_string(const RawStructure& raw,
                            std::span<const std::string> labels) {
  (void)raw;
  std::ostringstream os;
  os << "(";
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (i) os << ",";
    os << labels[i];
  }
  os << ")";
  return os.str();
}

}  // namespace

bool Hyperrectangle::contains(const Stimulus& x) const {
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    if (!std::binary_search(subsets[i].begin(), subsets[i].end(),
                            x.values[i])) {
      return false;
    }
  }
  return true;
}

bool Hyperrectangle::contains(const Hyperrectangle& other) const {
  for (std::size_t i = 0; i < subsets.size(); ++i) {
    if (!std::includes(subsets[i].begin(), subsets[i].end(),
                       other.subsets[i].begin(), other.subsets[i].end())) {
      return false;
    }
  }
  return true;
}

bool Hyperrectangle::is_cell() const {
  return std::all_of(subsets.begin(), subsets.end(),
                     [](const auto& b) { return b.size() == 1; });
}

std::optional<Hyperrectangle> intersect(const Hyperrectangle& a,
                                        const Hyperrectangle& b) {
  Hyperrectangle out;
  out.subsets.resize(a.subsets.size());
  for (std::size_t i = 0; i < a.subsets.size(); ++i) {
    std::set_intersection(a.subsets[i].begin(), a.subsets[i].end(),
                          b.subsets[i].begin(), b.subsets[i].end(),
                          std::back_inserter(out.subsets[i]));
    if (out.subsets[i].empty()) return std::nullopt;
  }
  return out;
}

Hyperrectangle axis_union(const Hyperrectangle& a, const Hyperrectangle& b) {
  Hyperrectangle out;
  out.subsets.resize(a.subsets.size());
  for (std::size_t i = 0; i < a.subsets.size(); ++i) {
    std::set_union(a.subsets[i].begin(), a.subsets[i].end(),
                   b.subsets[i].begin(), b.subsets[i].end(),
                   std::back_inserter(out.subsets[i]));
  }
  return out;
}

std::size_t InformationStructure::cell_index(std::span<const int> tuple) const {
  std::size_t idx = 0;
  for (std::size_t i = 0; i < strides_.size(); ++i) {
    idx += static_cast<std::size_t>(tuple[i]) * strides_[i];
  }
  return idx;
}

std::span<const double> InformationStructure::cell_outcome_probs(
    std::span<const int> tuple) const {
  const std::size_t base = cell_index(tuple) * outcome_labels_.size();
  return {outcome_probs_.data() + base, outcome_labels_.size()};
}

Hyperrectangle InformationStructure::full_space() const {
  Hyperrectangle h;
  h.subsets.resize(signal_labels_.size());
  for (std::size_t i = 0; i < signal_labels_.size(); ++i) {
    h.subsets[i].resize(signal_labels_[i].size());
    for (std::size_t v = 0; v < signal_labels_[i].size(); ++v) {
      h.subsets[i][v] = static_cast<int>(v);
    }
  }
  return h;
}

int InformationStructure::signal_index(int agent,
                                       const std::string& label) const {
  const auto& labels = signal_labels_[agent];
  auto it = std::find(labels.begin(), labels.end(), label);
  if (it == labels.end()) {
    throw ValidationError("unknown signal label '" + label + "' for agent " +
                          std::to_string(agent));
  }
  return static_cast<int>(it - labels.begin());
}

int InformationStructure::outcome_index(const std::string& label) const {
  auto it = std::find(outcome_labels_.begin(), outcome_labels_.end(), label);
  if (it == outcome_labels_.end()) {
    throw ValidationError("unknown outcome label '" + label + "'");
  }
  return static_cast<int>(it - outcome_labels_.begin());
}

void InformationStructure::for_each_cell_in(
    const Hyperrectangle& rect,
    const std::function<void(std::span<const int>, double,
                             std::span<const double>)>& fn) const {
  const int n = agent_count();
  std::vector<int> pos(n, 0);
  std::vector<int> tuple(n);
  for (;;) {
    for (int i = 0; i < n; ++i) tuple[i] = rect.subsets[i][pos[i]];
    const std::size_t idx = cell_index(tuple);
    fn(tuple, weights_[idx],
       std::span<const double>(
           outcome_probs_.data() + idx * outcome_labels_.size(),
           outcome_labels_.size()));
    int axis = n - 1;
    while (axis >= 0) {
      if (++pos[axis] < static_cast<int>(rect.subsets[axis].size())) break;
      pos[axis] = 0;
      --axis;
    }
    if (axis < 0) break;
  }
}

InformationStructure validate_structure(const RawStructure& raw) {
  if (raw.agents.empty()) throw ValidationError("structure has no agents");
  for (std::size_t i = 0; i < raw.agents.size(); ++i) {
    if (raw.agents[i].empty()) {
      throw ValidationError("agent " + std::to_string(i) +
                            " has an empty signal space");
    }
  }
  if (raw.outcomes.empty()) throw ValidationError("empty outcome space");

  InformationStructure s;
  s.name_ = raw.name;
  s.signal_labels_ = raw.agents;
  s.outcome_labels_ = raw.outcomes;

  const std::size_t n_outcomes = raw.outcomes.size();
  std::size_t total = 1;
  s.strides_.assign(raw.agents.size(), 0);
  for (std::size_t i = raw.agents.size(); i-- > 0;) {
    s.strides_[i] = total;
    total *= raw.agents[i].size();
  }

  s.weights_.assign(total, 0.0);
  s.outcome_probs_.assign(total * n_outcomes, 0.0);
  std::vector<char> seen(total, 0);

  std::vector<int> tuple(raw.agents.size());
  for (std::size_t c = 0; c < raw.cells.size(); ++c) {
    const RawCell& cell = raw.cells[c];
    if (cell.signals.size() != raw.agents.size()) {
      throw ValidationError("cell " + std::to_string(c) + " " +
                            tuple_to_string(raw, cell.signals) +
                            ": wrong signal arity");
    }
    for (std::size_t i = 0; i < cell.signals.size(); ++i) {
      const auto& labels = raw.agents[i];
      auto it = std::find(labels.begin(), labels.end(), cell.signals[i]);
      if (it == labels.end()) {
        throw ValidationError("cell " + std::to_string(c) +
                              ": unknown signal label '" + cell.signals[i] +
                              "' for agent " + std::to_string(i));
      }
      tuple[i] = static_cast<int>(it - labels.begin());
    }
    const std::size_t idx = s.cell_index(tuple);
    if (seen[idx]) {
      throw ValidationError("duplicate cell " +
                            tuple_to_string(raw, cell.signals));
    }
    seen[idx] = 1;
    if (!(cell.weight >= 0.0) || !std::isfinite(cell.weight)) {
      throw ValidationError("cell " + tuple_to_string(raw, cell.signals) +
                            ": negative or non-finite weight");
    }
    if (cell.outcome_probs.size() != n_outcomes) {
      throw ValidationError("cell " + tuple_to_string(raw, cell.signals) +
                            ": outcome_probs arity mismatch");
    }
    double psum = 0.0;
    for (double p : cell.outcome_probs) {
      if (!(p >= 0.0) || !std::isfinite(p)) {
        throw ValidationError("cell " + tuple_to_string(raw, cell.signals) +
                              ": negative outcome probability");
      }
      psum += p;
    }
    if (cell.weight > 0.0 && std::abs(psum - 1.0) > norm_tolerance) {
      throw ValidationError("cell " + tuple_to_string(raw, cell.signals) +
                            ": outcome_probs sum to " + std::to_string(psum));
    }
    s.weights_[idx] = cell.weight;
    if (psum > 0.0) {
      for (std::size_t w = 0; w < n_outcomes; ++w) {
        s.outcome_probs_[idx * n_outcomes + w] = cell.outcome_probs[w] / psum;
      }
    }
  }

  const std::size_t missing =
      static_cast<std::size_t>(std::count(seen.begin(), seen.end(), 0));
  if (missing > 0) {
    // Name one missing tuple to make the message actionable.
    const std::size_t idx = static_cast<std::size_t>(
        std::find(seen.begin(), seen.end(), 0) - seen.begin());
    std::size_t rem = idx;
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < raw.agents.size(); ++i) {
      labels.push_back(raw.agents[i][rem / s.strides_[i]]);
      rem %= s.strides_[i];
    }
    throw ValidationError(std::to_string(missing) +
                          " missing cell(s), e.g. " +
                          tuple_to_string(raw, labels));
  }

  double wsum = 0.0;
  for (double w : s.weights_) wsum += w;
  if (!(wsum > 0.0)) throw ValidationError("total cell weight is zero");
  for (double& w : s.weights_) w /= wsum;
  s.normalization_factor_ = 1.0 / wsum;
  return s;
}

double rect_prob(const InformationStructure& s, const Hyperrectangle& h) {
  double mass = 0.0;
  s.for_each_cell_in(h, [&](std::span<const int>, double w,
                            std::span<const double>) { mass += w; });
  return mass;
}

double rect_cond_prob(const InformationStructure& s,
                      const Hyperrectangle& inner,
                      const Hyperrectangle& outer) {
  const double denom = rect_prob(s, outer);
  if (!(denom > 0.0)) throw DomainError("conditioning on a zero-mass rectangle");
  auto common = intersect(inner, outer);
  if (!common) return 0.0;
  return rect_prob(s, *common) / denom;
}

OutcomeDistribution posterior_global(const InformationStructure& s,
                                     const Hyperrectangle& h) {
  OutcomeDistribution q;
  q.probs.assign(s.outcome_count(), 0.0);
  double mass = 0.0;
  s.for_each_cell_in(
      h, [&](std::span<const int>, double w, std::span<const double> probs) {
        if (w <= 0.0) return;
        mass += w;
        for (std::size_t k = 0; k < probs.size(); ++k) {
          q.probs[k] += w * probs[k];
        }
      });
  if (!(mass > 0.0)) throw DomainError("posterior of a zero-mass rectangle");
  for (double& v : q.probs) v /= mass;
  return q;
}

OutcomeDistribution posterior_local(const InformationStructure& s,
                                    const Hyperrectangle& h, int agent,
                                    int value) {
  const auto& b = h.subsets[agent];
  if (!std::binary_search(b.begin(), b.end(), value)) {
    throw DomainError("signal value outside the rectangle's subset");
  }
  Hyperrectangle restricted = h;
  restricted.subsets[agent] = {value};
  return posterior_global(s, restricted);
}

OutcomeDistribution posterior_ground_truth(const InformationStructure& s,
                                           const Stimulus& x) {
  if (!(s.cell_weight(x.values) > 0.0)) {
    throw DomainError("stimulus has zero probability");
  }
  auto probs = s.cell_outcome_probs(x.values);
  OutcomeDistribution q;
  q.probs.assign(probs.begin(), probs.end());
  return q;
}

AgentSlice agent_slice(const InformationStructure& s, const Hyperrectangle& h,
                       int agent) {
  AgentSlice out;
  out.values = h.subsets[agent];
  out.mass.assign(out.values.size(), 0.0);
  out.posterior.assign(out.values.size(), OutcomeDistribution{});

  const int n_outcomes = s.outcome_count();
  std::vector<std::vector<double>> sums(
      out.values.size(), std::vector<double>(n_outcomes, 0.0));
  std::vector<int> value_pos(s.signal_space_size(agent), -1);
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    value_pos[out.values[i]] = static_cast<int>(i);
  }

  double rect_mass = 0.0;
  std::vector<double> global(n_outcomes, 0.0);
  s.for_each_cell_in(
      h, [&](std::span<const int> tuple, double w,
             std::span<const double> probs) {
        if (w <= 0.0) return;
        const int pos = value_pos[tuple[agent]];
        rect_mass += w;
        out.mass[pos] += w;
        for (int k = 0; k < n_outcomes; ++k) {
          sums[pos][k] += w * probs[k];
          global[k] += w * probs[k];
        }
      });
  if (!(rect_mass > 0.0)) throw DomainError("zero-mass rectangle");

  out.rect_mass = rect_mass;
  out.global.probs.resize(n_outcomes);
  for (int k = 0; k < n_outcomes; ++k) out.global.probs[k] = global[k] / rect_mass;
  for (std::size_t i = 0; i < out.values.size(); ++i) {
    if (out.mass[i] > 0.0) {
      out.posterior[i].probs.resize(n_outcomes);
      for (int k = 0; k < n_outcomes; ++k) {
        out.posterior[i].probs[k] = sums[i][k] / out.mass[i];
      }
    }
    out.mass[i] /= rect_mass;
  }
  return out;
}

double cond_mutual_info_signal(const InformationStructure& s, int agent,
                               const Hyperrectangle& h) {
  const AgentSlice slice = agent_slice(s, h, agent);
  double mi = 0.0;
  for (std::size_t i = 0; i < slice.values.size(); ++i) {
    if (slice.mass[i] > 0.0) {
      mi += slice.mass[i] * kl_divergence_bits(slice.posterior[i], slice.global);
    }
  }
  return mi < 0.0 ? 0.0 : mi;
}

double regret_bits(const InformationStructure& s, const Hyperrectangle& h) {
  const OutcomeDistribution q_h = posterior_global(s, h);
  const double mass = rect_prob(s, h);
  double total = 0.0;
  s.for_each_cell_in(
      h, [&](std::span<const int>, double w, std::span<const double> probs) {
        if (w <= 0.0) return;
        total += (w / mass) *
                 kl_divergence_bits(probs, std::span<const double>(q_h.probs));
      });
  return total < 0.0 ? 0.0 : total;
}

}  // namespace comlab
