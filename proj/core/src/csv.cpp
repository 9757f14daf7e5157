#include "semiclassical/csv.hpp"

#include <charconv>
#include <cmath>

#include "semiclassical/error.hpp"

namespace scl {

namespace {

std::vector<std::string> split(std::string_view line) {
  std::vector<std::string> out;
  while (true) {
    const auto comma = line.find(',');
    out.emplace_back(line.substr(0, comma));
    if (comma == std::string_view::npos) break;
    line.remove_prefix(comma + 1);
  }
  return out;
}

}  // namespace

std::string format_number(double v) {
  if (std::isnan(v)) return "nan";
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  char buf[64];
  const auto r = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, r.ptr);
}

CsvWriter::CsvWriter(const std::filesystem::path& path, std::vector<std::string> header)
    : out_(path, std::ios::binary), path_(path), columns_(header.size()) {
  if (!out_) throw InvalidArgument("cannot write " + path.string());
  for (std::size_t i = 0; i < header.size(); ++i) out_ << (i ? "," : "") << header[i];
  out_ << '\n';
}

void CsvWriter::row(const std::vector<Cell>& cells) {
  if (cells.size() != columns_) throw InvalidArgument("row width does not match the header of " + path_.string());
  for (std::size_t i = 0; i < cells.size(); ++i) {
    if (i) out_ << ',';
    std::visit(
        [&](const auto& c) {
          using T = std::decay_t<decltype(c)>;
          if constexpr (std::is_same_v<T, double>)
            out_ << format_number(c);
          else
            out_ << c;
        },
        cells[i]);
  }
  out_ << '\n';
  if (!out_) throw InvalidArgument("write failed for " + path_.string());
  ++rows_;
}

std::size_t CsvTable::column_index(std::string_view name) const {
  for (std::size_t i = 0; i < header.size(); ++i)
    if (header[i] == name) return i;
  throw InvalidArgument("no column '" + std::string(name) + "'");
}

std::vector<double> CsvTable::numbers(std::string_view column) const {
  const std::size_t c = column_index(column);
  std::vector<double> out;
  out.reserve(rows.size());
  for (const auto& r : rows) {
    const std::string& s = r[c];
    double v = 0.0;
    if (s == "nan") {
      v = std::nan("");
    } else if (s == "inf" || s == "-inf") {
      v = s[0] == '-' ? -INFINITY : INFINITY;
    } else {
      const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
      if (res.ec != std::errc{} || res.ptr != s.data() + s.size())
        throw InvalidArgument("not a number in column '" + std::string(column) + "': " + s);
    }
    out.push_back(v);
  }
  return out;
}

std::vector<std::string> CsvTable::strings(std::string_view column) const {
  const std::size_t c = column_index(column);
  std::vector<std::string> out;
  out.reserve(rows.size());
  for (const auto& r : rows) out.push_back(r[c]);
  return out;
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InvalidArgument("cannot read " + path.string());
  CsvTable t;
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("empty CSV file " + path.string());
  t.header = split(line);
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    auto cells = split(line);
    if (cells.size() != t.header.size()) throw InvalidArgument("ragged row in " + path.string());
    t.rows.push_back(std::move(cells));
  }
  return t;
}

}  // namespace scl
