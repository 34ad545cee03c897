#include "parq/csv.hpp"

#include <array>
#include <charconv>
#include <cstdint>

namespace parq {

std::string format_number(double x) {
  std::array<char, 64> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  (void)ec;
  return std::string(buf.data(), end);
}

void CsvWriter::separator() {
  if (row_started_) {
    out_.put(',');
  }
  row_started_ = true;
}

CsvWriter& CsvWriter::field(std::string_view text) {
  separator();
  out_.write(text.data(), static_cast<std::streamsize>(text.size()));
  return *this;
}

CsvWriter& CsvWriter::field(double x) { return field(std::string_view(format_number(x))); }

CsvWriter& CsvWriter::field(std::uint64_t x) {
  std::array<char, 24> buf{};
  auto [end, ec] = std::to_chars(buf.data(), buf.data() + buf.size(), x);
  (void)ec;
  return field(std::string_view(buf.data(), static_cast<std::size_t>(end - buf.data())));
}

CsvWriter& CsvWriter::fields(std::span<const double> xs) {
  for (double x : xs) field(x);
  return *this;
}

void CsvWriter::end_row() {
  out_.put('\n');
  row_started_ = false;
}

}  // namespace parq
