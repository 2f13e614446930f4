#include "fpx/report.hpp"

#include <filesystem>

#include "fpx/csv.hpp"
#include "fpx/error.hpp"

namespace fpx {

void write_report(std::span<const std::string> inputs, const std::string& out_path) {
  require(!inputs.empty(), "report needs at least one input CSV");
  auto out = csv::open_out(out_path);
  out << "source,row,column,value\n";
  for (const auto& path : inputs) {
    auto in = csv::open_in(path);
    const auto source = std::filesystem::path(path).filename().string();
    std::string line;
    if (!std::getline(in, line)) throw ParseError(1, path + ": empty file");
    std::vector<std::string> header;
    for (auto f : csv::split(csv::chomp(line))) header.emplace_back(f);
    std::size_t row = 0, line_no = 1;
    while (std::getline(in, line)) {
      ++line_no;
      const auto text = csv::chomp(line);
      if (text.empty()) continue;
      const auto fields = csv::split(text);
      if (fields.size() != header.size())
        throw ParseError(line_no, path + ": expected " + std::to_string(header.size()) + " columns");
      ++row;
      for (std::size_t c = 0; c < fields.size(); ++c)
        out << source << ',' << row << ',' << header[c] << ',' << fields[c] << '\n';
    }
  }
  if (!out) fail(ErrorKind::io, "write failed: " + out_path);
}

}  // namespace fpx
