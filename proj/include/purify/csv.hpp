#pragma once

#include <initializer_list>
#include <ostream>
#include <string>
#include <string_view>

namespace purify::cli {

/// Shortest-form rendering with 12 significant digits, '.' decimal point,
/// independent of the global locale.
std::string format_number(double value);

/// Writes comma-separated rows terminated by LF.
class CsvWriter {
  public:
    explicit CsvWriter(std::ostream& out) : out_(out) {}

    void header(std::initializer_list<std::string_view> columns);
    void row(std::initializer_list<double> values);

  private:
    std::ostream& out_;
};

}  // namespace purify::cli
