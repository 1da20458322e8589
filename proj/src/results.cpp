#include <array>
#include <charconv>
#include <cmath>
#include <fstream>

#include "ipdmem/io.hpp"

namespace ipdmem {

ResultsTable to_table(const SweepResult& sweep) {
  ResultsTable table;
  table.rows.reserve(sweep.cells.size());
  for (const SweepCell& cell : sweep.cells) {
    table.rows.push_back({std::string(to_string(sweep.mode)), std::string(to_string(cell.strategy)), cell.mu,
                          cell.rho ? format_number(*cell.rho) : std::string("cooperators"), cell.phi_mean,
                          cell.phi_sd, cell.realizations, cell.seed});
  }
  return table;
}

std::string format_number(double value) {
  if (std::isnan(value)) return "nan";
  std::array<char, 64> buffer{};
  const auto [end, ec] = std::to_chars(buffer.data(), buffer.data() + buffer.size(), value);
  return std::string(buffer.data(), end);
}

std::string format_results(const ResultsTable& table) {
  std::string out(kResultsHeader);
  out += '\n';
  for (const ResultsRow& row : table.rows) {
    out += row.mode;
    out += ',';
    out += row.strategy;
    out += ',';
    out += format_number(row.mu);
    out += ',';
    out += row.group;
    out += ',';
    out += format_number(row.phi_mean);
    out += ',';
    out += format_number(row.phi_sd);
    out += ',';
    out += std::to_string(row.realizations);
    out += ',';
    out += std::to_string(row.seed);
    out += '\n';
  }
  return out;
}

void write_results(const ResultsTable& table, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw std::runtime_error("cannot open '" + path.string() + "' for writing");
  out << format_results(table);
  out.flush();
  if (!out) throw std::runtime_error("write to '" + path.string() + "' failed");
}

namespace {

template <typename T>
T parse_field(std::string_view field, std::size_t line_no) {
  if constexpr (std::is_floating_point_v<T>) {
    if (field == "nan") return std::nan("");
  }
  T value{};
  const auto [end, ec] = std::from_chars(field.data(), field.data() + field.size(), value);
  if (ec != std::errc{} || end != field.data() + field.size() || field.empty())
    throw std::runtime_error("results line " + std::to_string(line_no) + ": bad field '" + std::string(field) +
                             "'");
  return value;
}

}  // namespace

ResultsTable parse_results(std::string_view csv) {
  ResultsTable table;
  std::size_t line_no = 0;
  while (!csv.empty()) {
    const auto eol = csv.find('\n');
    std::string_view line = csv.substr(0, eol);
    csv.remove_prefix(eol == std::string_view::npos ? csv.size() : eol + 1);
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
    if (line_no == 1) {
      if (line != kResultsHeader) throw std::runtime_error("results: unexpected header '" + std::string(line) + "'");
      continue;
    }
    if (line.empty()) continue;

    std::array<std::string_view, 8> fields;
    std::size_t count = 0;
    while (count < fields.size()) {
      const auto comma = line.find(',');
      fields[count++] = line.substr(0, comma);
      if (comma == std::string_view::npos) {
        line = {};
        break;
      }
      line.remove_prefix(comma + 1);
    }
    if (count != fields.size() || !line.empty())
      throw std::runtime_error("results line " + std::to_string(line_no) + ": expected 8 fields");

    table.rows.push_back({std::string(fields[0]), std::string(fields[1]), parse_field<double>(fields[2], line_no),
                          std::string(fields[3]), parse_field<double>(fields[4], line_no),
                          parse_field<double>(fields[5], line_no), parse_field<std::size_t>(fields[6], line_no),
                          parse_field<std::uint64_t>(fields[7], line_no)});
  }
  if (line_no == 0) throw std::runtime_error("results: empty input");
  return table;
}

}  // namespace ipdmem
