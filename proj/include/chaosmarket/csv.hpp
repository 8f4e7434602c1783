#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>

namespace chaosmarket {

/// Shortest round-trip decimal form, '.' separator, no locale.  Non-finite
/// values print as nan / inf / -inf.
std::string format_number(double value);

/// Minimal CSV row writer: comma separated, '\n' terminated.
class CsvWriter {
 public:
  explicit CsvWriter(std::ostream& out) : out_(out) {}

  void header(std::initializer_list<std::string_view> columns);
  CsvWriter& cell(double value);
  CsvWriter& cell(long long value);
  CsvWriter& cell(std::string_view text);
  void end_row();

 private:
  void separator();
  std::ostream& out_;
  bool row_started_ = false;
};

}  // namespace chaosmarket
