#pragma once

#include <cstdint>
#include <ostream>
#include <span>
#include <string>
#include <string_view>

namespace parq {

// Shortest round-trip decimal form, '.' separator, independent of the
// global locale.
std::string format_number(double x);

// Comma-separated row terminated by a single '\n'.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  CsvWriter& field(std::string_view text);
  CsvWriter& field(double x);
  CsvWriter& field(std::uint64_t x);
  CsvWriter& fields(std::span<const double> xs);
  void end_row();

 private:
  void separator();

  std::ostream& out_;
  bool row_started_ = false;
};

}  // namespace parq
