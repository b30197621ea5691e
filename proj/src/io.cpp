#include "carleson/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "carleson/errors.hpp"

namespace carleson {

namespace {

std::string read_text(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError(path.string() + ": cannot open");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

bool parse_row(const std::string& line, std::vector<double>& out) {
  out.clear();
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t end = line.find(',', pos);
    if (end == std::string::npos) end = line.size();
    std::string cell = line.substr(pos, end - pos);
    const auto first = cell.find_first_not_of(" \t\r");
    const auto last = cell.find_last_not_of(" \t\r");
    if (first == std::string::npos) return false;
    cell = cell.substr(first, last - first + 1);
    double v = 0.0;
    const auto res = std::from_chars(cell.data(), cell.data() + cell.size(), v);
    if (res.ec != std::errc{} || res.ptr != cell.data() + cell.size()) return false;
    out.push_back(v);
    pos = end + 1;
  }
  return true;
}

}  // namespace

std::vector<Point> read_points_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError(path.string() + ": cannot open");
  std::vector<Point> pts;
  std::string line;
  std::vector<double> row;
  std::size_t lineno = 0;
  bool first_content = true;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos || line[0] == '#') continue;
    const bool ok = parse_row(line, row);
    if (!ok && first_content) {
      first_content = false;
      continue;
    }
    first_content = false;
    const std::string where = path.string() + ":" + std::to_string(lineno);
    if (!ok) throw ValidationError(where + ": expected comma-separated numbers");
    if (row.empty() || row.size() % 2 != 0) {
      throw ValidationError(where + ": a point needs an even number of reals");
    }
    if (!pts.empty() && row.size() != 2 * pts.front().dim()) {
      throw ValidationError(where + ": dimension differs from the first point");
    }
    pts.push_back(Point::from_real(row));
  }
  return pts;
}

void write_points_csv(const std::filesystem::path& path, const std::vector<Point>& pts) {
  CsvTable t;
  if (!pts.empty()) {
    for (std::size_t j = 0; j < pts.front().dim(); ++j) {
      t.header.push_back("re" + std::to_string(j + 1));
      t.header.push_back("im" + std::to_string(j + 1));
    }
  }
  for (const auto& p : pts) {
    std::vector<std::string> row;
    for (double v : p.to_real()) row.push_back(format_double(v));
    t.add(std::move(row));
  }
  t.write(path);
}

std::size_t line_of_offset(const std::string& text, std::size_t offset) {
  std::size_t line = 1;
  for (std::size_t i = 0; i < offset && i < text.size(); ++i) {
    if (text[i] == '\n') ++line;
  }
  return line;
}

nlohmann::json read_json_file(const std::filesystem::path& path) {
  const std::string text = read_text(path);
  try {
    return nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    const std::size_t offset = e.byte > 0 ? e.byte - 1 : 0;
    const std::size_t line = line_of_offset(text, offset);
    const std::size_t start = text.rfind('\n', offset == 0 ? 0 : offset - 1);
    const std::size_t col = start == std::string::npos ? offset + 1 : offset - start;
    std::string msg = e.what();
    const auto colon = msg.find("]: ");
    if (colon != std::string::npos) msg = msg.substr(colon + 3);
    throw ValidationError(path.string() + ":" + std::to_string(line) + ":" + std::to_string(col) +
                          ": " + msg);
  }
}

std::string format_double(double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

std::string CsvTable::str() const {
  std::ostringstream os;
  auto emit = [&](const std::vector<std::string>& row) {
    for (std::size_t i = 0; i < row.size(); ++i) os << (i ? "," : "") << row[i];
    os << '\n';
  };
  if (!header.empty()) emit(header);
  for (const auto& r : rows) emit(r);
  return os.str();
}

void CsvTable::write(const std::filesystem::path& path) const {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError(path.string() + ": cannot write");
  out << str();
}

}  // namespace carleson
