#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <span>
#include <string>
#include <vector>

namespace fpx {

using Count = std::int64_t;

struct AlterRecord {
  std::string alter_id;
  int rank = 0;  // 1 = most contacted
  Count contact_volume = 0;
  std::optional<Count> outdegree;  // empty: unavailable, still holds its rank

  bool available() const { return outdegree.has_value(); }
  friend bool operator==(const AlterRecord&, const AlterRecord&) = default;
};

struct EgoRecord {
  std::string ego_id;
  Count outdegree = 0;
  std::vector<AlterRecord> alters;  // ascending rank

  std::size_t available_count() const;
  friend bool operator==(const EgoRecord&, const EgoRecord&) = default;
};

struct EgoDataset {
  std::vector<EgoRecord> egos;

  std::size_t dyad_count() const;
  friend bool operator==(const EgoDataset&, const EgoDataset&) = default;
};

struct Violation {
  std::string ego_id;
  std::string description;
};

struct ValidationReport {
  std::size_t n_egos = 0;
  std::size_t n_dyads = 0;
  std::size_t n_dyads_with_degree = 0;
  std::vector<Violation> violations;

  bool ok() const { return violations.empty(); }
};

struct ParsedDataset {
  EgoDataset dataset;
  ValidationReport report;
};

struct VolumePair {
  std::string alter_id;
  Count contact_volume = 0;
};

struct RankCount {
  int rank = 0;
  std::size_t count = 0;
  friend bool operator==(const RankCount&, const RankCount&) = default;
};

inline constexpr const char* kDyadHeader =
    "ego_id,ego_outdegree,alter_id,contact_volume,alter_outdegree";
inline constexpr const char* kDyadHeaderRanked =
    "ego_id,ego_outdegree,alter_id,contact_volume,alter_outdegree,rank";

/// Checks every record invariant and tallies the dataset.
ValidationReport validate(const EgoDataset& dataset);

/// Reads a dyad CSV. Egos appear in order of first occurrence. When the
/// rank column is absent, ranks come from rank_alters. Throws ParseError on
/// malformed rows and Error(validation) on a duplicate (ego_id, rank).
ParsedDataset parse_dyad_csv(std::istream& in);
ParsedDataset read_dyad_csv(const std::string& path);

/// Always writes the ranked header so that reparsing is lossless.
void write_dyad_csv(std::ostream& out, const EgoDataset& dataset);
void write_dyad_csv(const std::string& path, const EgoDataset& dataset);

/// Descending volume, ties by ascending alter_id, ranks 1..n.
std::vector<AlterRecord> rank_alters(std::span<const VolumePair> pairs);

/// Sorts in place with the rank_alters order and renumbers ranks 1..n.
void assign_ranks(std::vector<AlterRecord>& alters);

std::vector<RankCount> dyads_per_rank(const EgoDataset& dataset, bool only_available);

}  // namespace fpx
