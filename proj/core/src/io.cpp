#include "comlab/io.hpp"

#include <algorithm>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace comlab::io {

using nlohmann::json;

std::string format_number(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  // Prefer the shortest representation that still round-trips.
  for (int prec = 1; prec < 17; ++prec) {
    char shorter[40];
    std::snprintf(shorter, sizeof(shorter), "%.*g", prec, v);
    if (std::strtod(shorter, nullptr) == v) return shorter;
  }
  return buf;
}

namespace {

std::string join_labels(const std::vector<std::string>& labels,
                        const std::vector<int>& idx, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < idx.size(); ++i) {
    if (i) out += sep;
    out += labels[idx[i]];
  }
  return out;
}

}  // namespace

std::string block_to_string(const InformationStructure& s, int agent,
                            const std::vector<int>& block) {
  return "{" + join_labels(s.signal_labels(agent), block, "|") + "}";
}

std::string rect_to_string(const InformationStructure& s,
                           const Hyperrectangle& h) {
  std::string out;
  for (int i = 0; i < s.agent_count(); ++i) {
    if (i) out += "x";
    out += block_to_string(s, i, h.subsets[i]);
  }
  return out;
}

std::string stimulus_to_string(const InformationStructure& s,
                               const Stimulus& x) {
  std::string out;
  for (int i = 0; i < s.agent_count(); ++i) {
    if (i) out += ",";
    out += s.signal_labels(i)[x.values[i]];
  }
  return out;
}

Stimulus parse_stimulus(const InformationStructure& s,
                        const std::string& text) {
  std::vector<std::string> parts;
  std::string cur;
  for (char c : text) {
    if (c == ',') {
      parts.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  parts.push_back(cur);
  if (static_cast<int>(parts.size()) != s.agent_count()) {
    throw ValidationError("stimulus needs " + std::to_string(s.agent_count()) +
                          " comma-separated signal labels");
  }
  Stimulus x;
  for (int i = 0; i < s.agent_count(); ++i) {
    x.values.push_back(s.signal_index(i, parts[i]));
  }
  return x;
}

namespace {

json parse_json(const std::string& text, const char* what) {
  json doc = json::parse(text, nullptr, false);
  if (doc.is_discarded()) {
    throw ValidationError(std::string(what) + ": malformed JSON");
  }
  return doc;
}

void check_version(const json& doc, const char* what) {
  if (!doc.contains("v") || !doc["v"].is_number_integer() ||
      doc["v"].get<int>() != 1) {
    throw ValidationError(std::string(what) + ": missing or unsupported 'v'");
  }
}

}  // namespace

RawStructure scenario_from_text(const std::string& text) {
  const json doc = parse_json(text, "scenario");
  check_version(doc, "scenario");
  RawStructure raw;
  raw.name = doc.value("name", std::string());
  try {
    raw.agents = doc.at("agents").get<std::vector<std::vector<std::string>>>();
    raw.outcomes = doc.at("outcomes").get<std::vector<std::string>>();
  } catch (const json::exception& e) {
    throw ValidationError(std::string("scenario: bad agents/outcomes: ") +
                          e.what());
  }
  if (!doc.contains("cells") || !doc["cells"].is_array()) {
    throw ValidationError("scenario: missing 'cells' array");
  }
  std::size_t index = 0;
  for (const json& c : doc["cells"]) {
    RawCell cell;
    try {
      cell.signals = c.at("signals").get<std::vector<std::string>>();
      cell.weight = c.at("weight").get<double>();
      cell.outcome_probs = c.at("outcome_probs").get<std::vector<double>>();
    } catch (const json::exception& e) {
      throw ValidationError("scenario: cell " + std::to_string(index) + ": " +
                            e.what());
    }
    raw.cells.push_back(std::move(cell));
    ++index;
  }
  return raw;
}

InformationStructure load_scenario(const std::string& path) {
  return validate_structure(scenario_from_text(read_file(path)));
}

std::string scenario_to_text(const InformationStructure& s) {
  json doc;
  doc["v"] = 1;
  if (!s.name().empty()) doc["name"] = s.name();
  json agents = json::array();
  for (int i = 0; i < s.agent_count(); ++i) agents.push_back(s.signal_labels(i));
  doc["agents"] = agents;
  doc["outcomes"] = s.outcome_labels();
  json cells = json::array();
  s.for_each_cell_in(
      s.full_space(),
      [&](std::span<const int> tuple, double w, std::span<const double> probs) {
        json cell;
        std::vector<std::string> labels;
        for (std::size_t i = 0; i < tuple.size(); ++i) {
          labels.push_back(s.signal_labels(static_cast<int>(i))[tuple[i]]);
        }
        cell["signals"] = labels;
        cell["weight"] = w;
        cell["outcome_probs"] = std::vector<double>(probs.begin(), probs.end());
        cells.push_back(std::move(cell));
      });
  doc["cells"] = std::move(cells);
  return doc.dump(2) + "\n";
}

void save_scenario(const InformationStructure& s, const std::string& path) {
  write_file(path, scenario_to_text(s));
}

namespace {

std::vector<int> labels_to_indices(const InformationStructure& s, int agent,
                                   const json& arr) {
  std::vector<int> out;
  for (const json& v : arr) {
    out.push_back(s.signal_index(agent, v.get<std::string>()));
  }
  std::sort(out.begin(), out.end());
  return out;
}

}  // namespace

Protocol protocol_from_text(const std::string& text,
                            const InformationStructure& s) {
  const json doc = parse_json(text, "protocol");
  check_version(doc, "protocol");
  Protocol p;
  if (!doc.contains("order")) throw ValidationError("protocol: missing 'order'");
  const json& order = doc["order"];
  if (order.is_array()) {
    p.order.random = false;
    for (const json& v : order) {
      const int agent = v.get<int>();
      if (agent < 0 || agent >= s.agent_count()) {
        throw ValidationError("protocol: order references unknown agent " +
                              std::to_string(agent));
      }
      p.order.sequence.push_back(agent);
    }
    if (p.order.sequence.empty()) {
      throw ValidationError("protocol: explicit order is empty");
    }
  } else if (order.is_object() && order.value("random", false)) {
    p.order.random = true;
    p.order.seed = order.value("seed", std::uint64_t{0});
  } else {
    throw ValidationError(
        "protocol: order must be an agent list or {\"random\": true}");
  }
  p.max_rounds = doc.value("max_rounds", 64);
  p.beta = doc.value("beta", 1.0);
  const double stop_tolerance = doc.value("stop_tolerance", 1e-9);

  if (!doc.contains("policies") || !doc["policies"].is_array()) {
    throw ValidationError("protocol: missing 'policies' array");
  }
  p.policies.assign(s.agent_count(), Policy{});
  std::vector<bool> seen(s.agent_count(), false);
  for (const json& pol : doc["policies"]) {
    const int agent = pol.at("agent").get<int>();
    if (agent < 0 || agent >= s.agent_count()) {
      throw ValidationError("protocol: policy for unknown agent " +
                            std::to_string(agent));
    }
    if (seen[agent]) {
      throw ValidationError("protocol: duplicate policy for agent " +
                            std::to_string(agent));
    }
    seen[agent] = true;
    Policy policy;
    policy.stop_tolerance = pol.value("stop_tolerance", stop_tolerance);
    const std::string kind = pol.at("kind").get<std::string>();
    if (kind == "silent") {
      policy.kind = Policy::Kind::Silent;
    } else if (kind == "full-reveal") {
      policy.kind = Policy::Kind::FullReveal;
    } else if (kind == "threshold") {
      policy.kind = Policy::Kind::Threshold;
      policy.tau = pol.at("tau").get<double>();
      policy.outcome = s.outcome_index(pol.at("outcome").get<std::string>());
      policy.strict = pol.value("strict", false);
    } else if (kind == "partition-table") {
      policy.kind = Policy::Kind::PartitionTable;
      for (const json& entry : pol.at("table")) {
        Policy::TableEntry te;
        const json& rect = entry.at("rect");
        if (static_cast<int>(rect.size()) != s.agent_count()) {
          throw ValidationError("protocol: table rect arity mismatch");
        }
        for (int i = 0; i < s.agent_count(); ++i) {
          te.rect.subsets.push_back(labels_to_indices(s, i, rect[i]));
        }
        for (const json& block : entry.at("blocks")) {
          te.blocks.push_back(labels_to_indices(s, agent, block));
        }
        policy.table.push_back(std::move(te));
      }
    } else {
      throw ValidationError("protocol: unknown policy kind '" + kind + "'");
    }
    p.policies[agent] = std::move(policy);
  }
  for (int i = 0; i < s.agent_count(); ++i) {
    if (!seen[i]) {
      throw ValidationError("protocol: no policy for agent " +
                            std::to_string(i));
    }
  }
  return p;
}

Protocol load_protocol(const std::string& path,
                       const InformationStructure& s) {
  return protocol_from_text(read_file(path), s);
}

std::string protocol_to_text(const Protocol& p, const InformationStructure& s) {
  json doc;
  doc["v"] = 1;
  if (p.order.random) {
    doc["order"] = {{"random", true}, {"seed", p.order.seed}};
  } else {
    doc["order"] = p.order.sequence;
  }
  doc["max_rounds"] = p.max_rounds;
  doc["beta"] = p.beta;
  json policies = json::array();
  for (int agent = 0; agent < static_cast<int>(p.policies.size()); ++agent) {
    const Policy& policy = p.policies[agent];
    json pol;
    pol["agent"] = agent;
    pol["stop_tolerance"] = policy.stop_tolerance;
    switch (policy.kind) {
      case Policy::Kind::Silent:
        pol["kind"] = "silent";
        break;
      case Policy::Kind::FullReveal:
        pol["kind"] = "full-reveal";
        break;
      case Policy::Kind::Threshold:
        pol["kind"] = "threshold";
        pol["tau"] = policy.tau;
        pol["outcome"] = s.outcome_labels()[policy.outcome];
        pol["strict"] = policy.strict;
        break;
      case Policy::Kind::PartitionTable: {
        pol["kind"] = "partition-table";
        json table = json::array();
        for (const auto& te : policy.table) {
          json entry;
          json rect = json::array();
          for (int i = 0; i < s.agent_count(); ++i) {
            json axis = json::array();
            for (int v : te.rect.subsets[i]) axis.push_back(s.signal_labels(i)[v]);
            rect.push_back(std::move(axis));
          }
          entry["rect"] = std::move(rect);
          json blocks = json::array();
          for (const auto& b : te.blocks) {
            json block = json::array();
            for (int v : b) block.push_back(s.signal_labels(agent)[v]);
            blocks.push_back(std::move(block));
          }
          entry["blocks"] = std::move(blocks);
          table.push_back(std::move(entry));
        }
        pol["table"] = std::move(table);
        break;
      }
      case Policy::Kind::TargetPartition:
        throw ValidationError(
            "target-partition policies are constructed in memory, not saved");
    }
    policies.push_back(std::move(pol));
  }
  doc["policies"] = std::move(policies);
  return doc.dump(2) + "\n";
}

std::string heatmap_csv(const InformationStructure& s) {
  if (s.agent_count() != 2 || s.outcome_count() != 2) {
    throw DomainError("heatmaps require 2 agents and a binary target");
  }
  std::ostringstream os;
  std::vector<int> tuple(2);
  for (int x = 0; x < s.signal_space_size(0); ++x) {
    tuple[0] = x;
    for (int y = 0; y < s.signal_space_size(1); ++y) {
      tuple[1] = y;
      if (y) os << ",";
      os << format_number(s.cell_outcome_probs(tuple)[1]);
    }
    os << "\n";
  }
  return os.str();
}

std::string transcript_csv(const InformationStructure& s,
                           const Transcript& t) {
  std::ostringstream os;
  os << "t,speaker,block,rect";
  for (const auto& w : s.outcome_labels()) os << ",q@" << w;
  for (const auto& w : s.outcome_labels()) os << ",reward_bits@" << w;
  os << ",cost_bits\n";
  // Round 0: the empty board.
  os << "0,,," << rect_to_string(s, t.initial_rect);
  for (double q : t.prior.probs) os << "," << format_number(q);
  for (std::size_t i = 0; i < t.prior.probs.size(); ++i) os << ",0";
  os << ",0\n";
  for (const auto& r : t.rounds) {
    os << r.round << "," << r.speaker << ","
       << block_to_string(s, r.speaker, r.block) << ","
       << rect_to_string(s, r.rect);
    for (double q : r.belief.probs) os << "," << format_number(q);
    for (double v : r.reward_bits) os << "," << format_number(v);
    os << "," << format_number(r.cost_bits) << "\n";
  }
  return os.str();
}

std::string consensus_csv(const InformationStructure& s,
                          const std::vector<ConsensusRectangle>& rects) {
  std::ostringstream os;
  os << "rect,mass,regret";
  for (const auto& w : s.outcome_labels()) os << ",q@" << w;
  for (int i = 0; i < s.agent_count(); ++i) os << ",mi@agent" << i;
  os << "\n";
  for (const auto& r : rects) {
    os << rect_to_string(s, r.rect) << "," << format_number(r.mass) << ","
       << format_number(r.regret);
    for (double q : r.belief.probs) os << "," << format_number(q);
    for (double mi : r.per_agent_mi) os << "," << format_number(mi);
    os << "\n";
  }
  return os.str();
}

std::string witnesses_csv(const InformationStructure& s,
                          const std::vector<MultistabilityWitness>& ws) {
  std::ostringstream os;
  os << "h,h_prime,tv";
  for (const auto& w : s.outcome_labels()) os << ",q_h@" << w;
  for (const auto& w : s.outcome_labels()) os << ",q_h_prime@" << w;
  os << ",overlap_h_prime_given_h,overlap_h_given_h_prime,epsilon,d\n";
  for (const auto& w : ws) {
    os << rect_to_string(s, w.h) << "," << rect_to_string(s, w.h_prime) << ","
       << format_number(w.tv);
    for (double q : w.belief.probs) os << "," << format_number(q);
    for (double q : w.belief_prime.probs) os << "," << format_number(q);
    os << "," << format_number(w.overlap_prime_given_h) << ","
       << format_number(w.overlap_h_given_prime) << ","
       << format_number(w.epsilon) << "," << format_number(w.d) << "\n";
  }
  return os.str();
}

std::string switching_matrix_csv(const InformationStructure& s,
                                 const std::vector<ConsensusRectangle>& rects,
                                 const std::vector<std::vector<double>>& cost) {
  std::ostringstream os;
  os << "rect";
  for (const auto& r : rects) os << "," << rect_to_string(s, r.rect);
  os << "\n";
  for (std::size_t i = 0; i < rects.size(); ++i) {
    os << rect_to_string(s, rects[i].rect);
    for (std::size_t j = 0; j < rects.size(); ++j) {
      os << "," << format_number(cost[i][j]);
    }
    os << "\n";
  }
  return os.str();
}

std::string move_to_string(const InformationStructure& s,
                           const PartitionMove& move) {
  std::ostringstream os;
  if (move.kind == PartitionMove::Kind::Split) {
    os << "split leaf " << move.leaf << " agent " << move.agent << " block "
       << block_to_string(s, move.agent, move.block);
  } else {
    os << "merge leaves " << move.leaf << "+" << move.other_leaf << " agent "
       << move.agent;
  }
  return os.str();
}

std::string search_trace_csv(const InformationStructure& s,
                             const SearchResult& result) {
  std::ostringstream os;
  os << "step,move,leaves,objective,accuracy,cost\n";
  for (std::size_t i = 0; i < result.trace.size(); ++i) {
    const SearchStep& step = result.trace[i];
    os << i << ","
       << (step.move ? move_to_string(s, *step.move) : std::string("start"))
       << "," << step.leaf_count << "," << format_number(step.objective) << ","
       << format_number(step.accuracy) << "," << format_number(step.cost)
       << "\n";
  }
  return os.str();
}

std::string partition_csv(const InformationStructure& s,
                          const ProtocolPartition& part) {
  std::ostringstream os;
  os << "leaf,rect,mass";
  for (const auto& w : s.outcome_labels()) os << ",q@" << w;
  os << "\n";
  for (std::size_t i = 0; i < part.leaves.size(); ++i) {
    os << i << "," << rect_to_string(s, part.leaves[i]) << ","
       << format_number(part.masses[i]);
    for (double q : part.beliefs[i].probs) os << "," << format_number(q);
    os << "\n";
  }
  return os.str();
}

std::string market_log_csv(const InformationStructure& s,
                           const MarketSession& session) {
  std::ostringstream os;
  os << "turn,trader,announced,clipped";
  for (const auto& w : s.outcome_labels()) os << ",s_before@" << w;
  for (const auto& w : s.outcome_labels()) os << ",s_after@" << w;
  os << ",cash_cost";
  for (const auto& w : s.outcome_labels()) os << ",price_after@" << w;
  os << "\n";
  for (const auto& t : session.trades) {
    os << t.turn << "," << t.trader_index << "," << (t.announced ? 1 : 0)
       << "," << (t.price_clipped ? 1 : 0);
    for (double v : t.record.s_before) os << "," << format_number(v);
    for (double v : t.record.s_after) os << "," << format_number(v);
    os << "," << format_number(t.record.cash_cost);
    for (double v : t.price_after.probs) os << "," << format_number(v);
    os << "\n";
  }
  return os.str();
}

std::string timing_table_csv(const TimingTable& table) {
  std::ostringstream os;
  os << "strategy1,strategy2,profit1,profit2\n";
  for (std::size_t i = 0; i < table.grid.size(); ++i) {
    for (std::size_t j = 0; j < table.grid.size(); ++j) {
      os << table.grid[i].label() << "," << table.grid[j].label() << ","
         << format_number(table.profits[i][j][0]) << ","
         << format_number(table.profits[i][j][1]) << "\n";
    }
  }
  return os.str();
}

std::string liquidity_csv(const std::vector<LiquidityRow>& rows) {
  std::ostringstream os;
  os << "alpha,convergence_turn,max_tv_jump,turns\n";
  for (const auto& r : rows) {
    os << format_number(r.alpha) << "," << r.convergence_turn << ","
       << format_number(r.max_tv_jump) << "," << r.turns_executed << "\n";
  }
  return os.str();
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open for writing: " + path);
  out << content;
  if (!out) throw ValidationError("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open: " + path);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

}  // namespace comlab::io
