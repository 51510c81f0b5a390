#ifndef COMLAB_IO_HPP
#define COMLAB_IO_HPP

#include <string>
#include <vector>

#include "comlab/complexity.hpp"
#include "comlab/consensus.hpp"
#include "comlab/market.hpp"
#include "comlab/optimize.hpp"
#include "comlab/protocol.hpp"
#include "comlab/structure.hpp"
#include "comlab/switching.hpp"

namespace comlab::io {

// Shortest decimal that round-trips a double.
std::string format_number(double v);

// "{1|2}x{0|1|2}" with declared labels; the block form is one axis.
std::string rect_to_string(const InformationStructure& s,
                           const Hyperrectangle& h);
std::string block_to_string(const InformationStructure& s, int agent,
                            const std::vector<int>& block);
std::string stimulus_to_string(const InformationStructure& s,
                               const Stimulus& x);

// Comma-separated signal labels, e.g. "2,1".
Stimulus parse_stimulus(const InformationStructure& s, const std::string& text);

// Scenario files: JSON documents with fields v, name, agents, outcomes,
// cells (see scenarios/SCHEMA.md). Weights may be unnormalized.
RawStructure scenario_from_text(const std::string& text);
InformationStructure load_scenario(const std::string& path);
std::string scenario_to_text(const InformationStructure& s);
void save_scenario(const InformationStructure& s, const std::string& path);

// Protocol files: JSON documents with order, beta, max_rounds,
// stop_tolerance and per-agent policies.
Protocol protocol_from_text(const std::string& text,
                            const InformationStructure& s);
Protocol load_protocol(const std::string& path, const InformationStructure& s);
std::string protocol_to_text(const Protocol& p, const InformationStructure& s);

// CSV exports. Column contracts are documented in scenarios/SCHEMA.md; all
// numbers use round-trip formatting so files parse back losslessly.
std::string heatmap_csv(const InformationStructure& s);
std::string transcript_csv(const InformationStructure& s, const Transcript& t);
std::string consensus_csv(const InformationStructure& s,
                          const std::vector<ConsensusRectangle>& rects);
std::string witnesses_csv(const InformationStructure& s,
                          const std::vector<MultistabilityWitness>& ws);
std::string switching_matrix_csv(const InformationStructure& s,
                                 const std::vector<ConsensusRectangle>& rects,
                                 const std::vector<std::vector<double>>& cost);
std::string move_to_string(const InformationStructure& s,
                           const PartitionMove& move);
std::string search_trace_csv(const InformationStructure& s,
                             const SearchResult& result);
std::string partition_csv(const InformationStructure& s,
                          const ProtocolPartition& part);
std::string market_log_csv(const InformationStructure& s,
                           const MarketSession& session);
std::string timing_table_csv(const TimingTable& table);
std::string liquidity_csv(const std::vector<LiquidityRow>& rows);

void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace comlab::io

#endif
