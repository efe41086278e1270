#pragma once

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <string>
#include <string_view>
#include <vector>

namespace fqnm {

/// Shortest round-trip decimal form ("." separator, no locale).
std::string format_number(double x);
std::string format_number(std::int64_t x);
std::string format_number(std::uint64_t x);
inline std::string format_number(int x) { return format_number(static_cast<std::int64_t>(x)); }

/// Current UTC time as 2026-01-31T12:00:00Z.
std::string iso_timestamp();

/// Comma-separated table with '#'-prefixed metadata lines above the header.
class CsvTable {
 public:
  explicit CsvTable(std::vector<std::string> columns);

  /// Adds a "# key: value" line.
  void meta(std::string_view key, std::string_view value);

  class Row {
   public:
    Row& operator<<(double x);
    Row& operator<<(std::int64_t x);
    Row& operator<<(std::uint64_t x);
    Row& operator<<(int x) { return *this << static_cast<std::int64_t>(x); }
    Row& operator<<(std::string_view s);
    Row& operator<<(const char* s) { return *this << std::string_view(s); }
    Row& operator<<(const std::string& s) { return *this << std::string_view(s); }
    ~Row() noexcept(false);

   private:
    friend class CsvTable;
    explicit Row(CsvTable& table) : table_(table) {}
    CsvTable& table_;
    std::vector<std::string> cells_;
  };

  /// Appends a row; the row is committed when the returned object is destroyed
  /// and must have exactly one cell per column.
  Row row() { return Row(*this); }

  const std::vector<std::string>& columns() const noexcept { return columns_; }
  std::size_t rows() const noexcept { return rows_.size(); }
  const std::vector<std::string>& row_cells(std::size_t i) const { return rows_.at(i); }
  /// Column index by name; throws std::out_of_range.
  std::size_t column(std::string_view name) const;

  void write(std::ostream& os) const;
  void write(const std::filesystem::path& path) const;
  std::string str() const;

 private:
  std::vector<std::string> columns_;
  std::vector<std::string> meta_;
  std::vector<std::vector<std::string>> rows_;
};

}  // namespace fqnm
