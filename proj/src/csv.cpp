#include "fqnm/csv.hpp"

#include <array>
#include <charconv>
#include <chrono>
#include <cmath>
#include <ctime>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include "fqnm/errors.hpp"

namespace fqnm {

namespace {

template <typename T>
std::string chars(T x) {
  std::array<char, 64> buf{};
  const auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  return std::string(buf.data(), res.ptr);
}

bool needs_quoting(std::string_view s) {
  return s.find_first_of(",\"\n") != std::string_view::npos;
}

std::string quoted(std::string_view s) {
  if (!needs_quoting(s)) return std::string(s);
  std::string out = "\"";
  for (const char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

}  // namespace

std::string format_number(double x) {
  if (std::isnan(x)) return "nan";
  if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
  return chars(x);
}

std::string format_number(std::int64_t x) { return chars(x); }
std::string format_number(std::uint64_t x) { return chars(x); }

std::string iso_timestamp() {
  const std::time_t now = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm utc{};
  gmtime_r(&now, &utc);
  std::array<char, 32> buf{};
  std::strftime(buf.data(), buf.size(), "%Y-%m-%dT%H:%M:%SZ", &utc);
  return buf.data();
}

CsvTable::CsvTable(std::vector<std::string> columns) : columns_(std::move(columns)) {
  if (columns_.empty()) throw ConfigError("CsvTable: no columns");
}

void CsvTable::meta(std::string_view key, std::string_view value) {
  std::string line(key);
  line += ": ";
  for (const char c : value) line += c == '\n' ? ' ' : c;
  meta_.push_back(std::move(line));
}

CsvTable::Row& CsvTable::Row::operator<<(double x) {
  cells_.push_back(format_number(x));
  return *this;
}

CsvTable::Row& CsvTable::Row::operator<<(std::int64_t x) {
  cells_.push_back(format_number(x));
  return *this;
}

CsvTable::Row& CsvTable::Row::operator<<(std::uint64_t x) {
  cells_.push_back(format_number(x));
  return *this;
}

CsvTable::Row& CsvTable::Row::operator<<(std::string_view s) {
  cells_.push_back(quoted(s));
  return *this;
}

CsvTable::Row::~Row() noexcept(false) {
  if (cells_.size() != table_.columns_.size()) {
    if (std::uncaught_exceptions() > 0) return;
    throw std::logic_error("CsvTable: row has " + std::to_string(cells_.size()) +
                           " cells, expected " + std::to_string(table_.columns_.size()));
  }
  table_.rows_.push_back(std::move(cells_));
}

std::size_t CsvTable::column(std::string_view name) const {
  for (std::size_t i = 0; i < columns_.size(); ++i) {
    if (columns_[i] == name) return i;
  }
  throw std::out_of_range("CsvTable: no column " + std::string(name));
}

void CsvTable::write(std::ostream& os) const {
  for (const auto& m : meta_) os << "# " << m << '\n';
  for (std::size_t i = 0; i < columns_.size(); ++i) os << (i ? "," : "") << columns_[i];
  os << '\n';
  for (const auto& r : rows_) {
    for (std::size_t i = 0; i < r.size(); ++i) os << (i ? "," : "") << r[i];
    os << '\n';
  }
}

void CsvTable::write(const std::filesystem::path& path) const {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::ofstream os(path, std::ios::binary);
  if (!os) throw ConfigError("cannot open " + path.string() + " for writing");
  write(os);
  if (!os) throw ConfigError("failed writing " + path.string());
}

std::string CsvTable::str() const {
  std::ostringstream os;
  write(os);
  return os.str();
}

}  // namespace fqnm
