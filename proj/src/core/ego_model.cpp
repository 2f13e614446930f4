#include "fpx/ego_model.hpp"

#include <algorithm>
#include <istream>
#include <map>
#include <ostream>
#include <unordered_map>
#include <unordered_set>

#include "fpx/csv.hpp"
#include "fpx/error.hpp"

namespace fpx {

std::size_t EgoRecord::available_count() const {
  return static_cast<std::size_t>(
      std::count_if(alters.begin(), alters.end(), [](const AlterRecord& a) { return a.available(); }));
}

std::size_t EgoDataset::dyad_count() const {
  std::size_t n = 0;
  for (const auto& ego : egos) n += ego.alters.size();
  return n;
}

ValidationReport validate(const EgoDataset& dataset) {
  ValidationReport report;
  report.n_egos = dataset.egos.size();
  std::unordered_set<std::string> seen;
  for (const auto& ego : dataset.egos) {
    auto flag = [&](std::string what) { report.violations.push_back({ego.ego_id, std::move(what)}); };
    if (!seen.insert(ego.ego_id).second) flag("duplicate ego_id");
    if (ego.outdegree < 0) flag("negative ego outdegree");
    for (std::size_t i = 0; i < ego.alters.size(); ++i) {
      const auto& alter = ego.alters[i];
      ++report.n_dyads;
      if (alter.available()) ++report.n_dyads_with_degree;
      if (alter.rank < 1) flag("alter " + alter.alter_id + ": rank < 1");
      if (alter.contact_volume < 1) flag("alter " + alter.alter_id + ": contact_volume < 1");
      if (alter.outdegree && *alter.outdegree < 0) flag("alter " + alter.alter_id + ": negative outdegree");
      if (i == 0) continue;
      const auto& prev = ego.alters[i - 1];
      if (alter.rank <= prev.rank)
        flag("ranks not strictly ascending at rank " + std::to_string(alter.rank));
      if (alter.contact_volume > prev.contact_volume)
        flag("contact_volume increases from rank " + std::to_string(prev.rank) + " to rank " +
             std::to_string(alter.rank));
    }
  }
  return report;
}

namespace {

bool volume_order(const AlterRecord& a, const AlterRecord& b) {
  if (a.contact_volume != b.contact_volume) return a.contact_volume > b.contact_volume;
  return a.alter_id < b.alter_id;
}

Count parse_count(std::string_view field, std::size_t line, const char* name) {
  auto value = csv::to_int(field);
  if (!value) throw ParseError(line, std::string("non-numeric ") + name + " '" + std::string(field) + "'");
  if (*value < 0) throw ParseError(line, std::string("negative ") + name);
  return *value;
}

}  // namespace

void assign_ranks(std::vector<AlterRecord>& alters) {
  std::sort(alters.begin(), alters.end(), volume_order);
  for (std::size_t i = 0; i < alters.size(); ++i) alters[i].rank = static_cast<int>(i + 1);
}

std::vector<AlterRecord> rank_alters(std::span<const VolumePair> pairs) {
  std::vector<AlterRecord> alters;
  alters.reserve(pairs.size());
  for (const auto& p : pairs) alters.push_back({p.alter_id, 0, p.contact_volume, std::nullopt});
  assign_ranks(alters);
  return alters;
}

ParsedDataset parse_dyad_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw ParseError(1, "missing header");
  std::string_view header = csv::chomp(line);
  if (header.starts_with("\xEF\xBB\xBF")) header.remove_prefix(3);
  bool ranked = false;
  if (header == kDyadHeaderRanked) {
    ranked = true;
  } else if (header != kDyadHeader) {
    throw ParseError(1, "unexpected header '" + std::string(header) + "'");
  }
  const std::size_t n_fields = ranked ? 6 : 5;

  ParsedDataset parsed;
  auto& egos = parsed.dataset.egos;
  std::unordered_map<std::string, std::size_t> index;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    const auto row = csv::chomp(line);
    if (row.empty()) continue;
    const auto fields = csv::split(row);
    if (fields.size() != n_fields)
      throw ParseError(line_no, "expected " + std::to_string(n_fields) + " columns, got " +
                                    std::to_string(fields.size()));
    if (fields[0].empty()) throw ParseError(line_no, "empty ego_id");
    if (fields[2].empty()) throw ParseError(line_no, "empty alter_id");

    const Count ego_k = parse_count(fields[1], line_no, "ego_outdegree");
    AlterRecord alter;
    alter.alter_id = std::string(fields[2]);
    auto volume = csv::to_int(fields[3]);
    if (!volume) throw ParseError(line_no, "non-numeric contact_volume '" + std::string(fields[3]) + "'");
    alter.contact_volume = *volume;
    if (!fields[4].empty()) alter.outdegree = parse_count(fields[4], line_no, "alter_outdegree");
    if (ranked) {
      auto rank = csv::to_int(fields[5]);
      if (!rank) throw ParseError(line_no, "non-numeric rank '" + std::string(fields[5]) + "'");
      alter.rank = static_cast<int>(*rank);
    }

    const std::string ego_id(fields[0]);
    auto [it, inserted] = index.try_emplace(ego_id, egos.size());
    if (inserted) {
      egos.push_back({ego_id, ego_k, {}});
    } else if (egos[it->second].outdegree != ego_k) {
      throw ParseError(line_no, "ego " + ego_id + " has conflicting ego_outdegree");
    }
    egos[it->second].alters.push_back(std::move(alter));
  }

  for (auto& ego : egos) {
    if (!ranked) {
      assign_ranks(ego.alters);
      continue;
    }
    std::stable_sort(ego.alters.begin(), ego.alters.end(),
                     [](const AlterRecord& a, const AlterRecord& b) { return a.rank < b.rank; });
    for (std::size_t i = 1; i < ego.alters.size(); ++i)
      if (ego.alters[i].rank == ego.alters[i - 1].rank)
        fail(ErrorKind::validation,
             "ego " + ego.ego_id + ": duplicate rank " + std::to_string(ego.alters[i].rank));
  }
  parsed.report = validate(parsed.dataset);
  return parsed;
}

ParsedDataset read_dyad_csv(const std::string& path) {
  auto in = csv::open_in(path);
  return parse_dyad_csv(in);
}

void write_dyad_csv(std::ostream& out, const EgoDataset& dataset) {
  out << kDyadHeaderRanked << '\n';
  for (const auto& ego : dataset.egos)
    for (const auto& a : ego.alters) {
      out << ego.ego_id << ',' << ego.outdegree << ',' << a.alter_id << ',' << a.contact_volume << ',';
      if (a.outdegree) out << *a.outdegree;
      out << ',' << a.rank << '\n';
    }
}

void write_dyad_csv(const std::string& path, const EgoDataset& dataset) {
  auto out = csv::open_out(path);
  write_dyad_csv(out, dataset);
  if (!out) fail(ErrorKind::io, "write failed: " + path);
}

std::vector<RankCount> dyads_per_rank(const EgoDataset& dataset, bool only_available) {
  std::map<int, std::size_t> counts;
  int max_rank = 0;
  for (const auto& ego : dataset.egos)
    for (const auto& a : ego.alters) {
      if (a.rank < 1) continue;
      max_rank = std::max(max_rank, a.rank);
      if (!only_available || a.available()) ++counts[a.rank];
    }
  std::vector<RankCount> result;
  result.reserve(static_cast<std::size_t>(max_rank));
  for (int r = 1; r <= max_rank; ++r) {
    auto it = counts.find(r);
    result.push_back({r, it == counts.end() ? 0 : it->second});
  }
  return result;
}

}  // namespace fpx
