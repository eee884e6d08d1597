#include <charconv>
#include <cstdio>
#include <istream>
#include <ostream>
#include <string>
#include <string_view>

#include "entropic/coupling.hpp"
#include "entropic/errors.hpp"

namespace entropic {

namespace {

constexpr std::string_view kHeader = "marginal_dims";

template <typename T>
std::vector<T> parse_list(std::string_view text, std::size_t line_no) {
  std::vector<T> out;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t comma = std::min(text.find(',', pos), text.size());
    T value{};
    const auto [ptr, ec] = std::from_chars(text.data() + pos, text.data() + comma, value);
    if (ec != std::errc{} || ptr != text.data() + comma)
      throw IoError("coupling: bad index list on line " + std::to_string(line_no));
    out.push_back(value);
    pos = comma + 1;
  }
  return out;
}

}  // namespace

void write_coupling(std::ostream& out, const Coupling& coupling) {
  out << kHeader << '\t';
  const auto& dims = coupling.marginal_dims();
  for (std::size_t i = 0; i < dims.size(); ++i) out << (i ? "," : "") << dims[i];
  out << '\n';
  char buf[32];
  for (std::size_t a = 0; a < coupling.atom_count(); ++a) {
    std::snprintf(buf, sizeof buf, "%.17g", coupling.mass(a));
    out << buf << '\t';
    const auto cell = coupling.cell(a);
    for (std::size_t i = 0; i < cell.size(); ++i) out << (i ? "," : "") << cell[i];
    out << '\n';
  }
}

Coupling read_coupling(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw IoError("coupling: missing header line");
  const std::string_view header(line);
  if (header.substr(0, kHeader.size()) != kHeader || header.size() <= kHeader.size() + 1 ||
      header[kHeader.size()] != '\t')
    throw IoError("coupling: header must be 'marginal_dims<TAB>d1,...,dm'");
  auto dims = parse_list<std::size_t>(header.substr(kHeader.size() + 1), 1);

  std::vector<double> masses;
  std::vector<std::uint32_t> cells;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    const std::size_t tab = line.find('\t');
    if (tab == std::string::npos) throw IoError("coupling: missing tab on line " + std::to_string(line_no));
    double mass = 0.0;
    const auto [ptr, ec] = std::from_chars(line.data(), line.data() + tab, mass);
    if (ec != std::errc{} || ptr != line.data() + tab)
      throw IoError("coupling: bad mass on line " + std::to_string(line_no));
    auto cell = parse_list<std::uint32_t>(std::string_view(line).substr(tab + 1), line_no);
    if (cell.size() != dims.size())
      throw IoError("coupling: arity mismatch on line " + std::to_string(line_no));
    masses.push_back(mass);
    cells.insert(cells.end(), cell.begin(), cell.end());
  }
  return Coupling(std::move(dims), std::move(masses), std::move(cells));
}

}  // namespace entropic
