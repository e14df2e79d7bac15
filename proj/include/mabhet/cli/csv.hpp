#pragma once

#include <cstdint>
#include <fstream>
#include <optional>
#include <string>
#include <vector>

namespace mabhet::cli {

/// Shortest decimal text that parses back to the same double; locale free.
std::string FormatNumber(double v);
std::string FormatNumber(std::optional<double> v);
std::string FormatInteger(std::uint64_t v);

/// Header-first CSV file. Every row is flushed so that a run stopped by an
/// error leaves the rows written so far on disk.
class CsvWriter
{
  public:
    CsvWriter(const std::string& path, std::vector<std::string> columns);

    void Row(const std::vector<std::string>& fields);
    const std::vector<std::string>& columns() const noexcept { return columns_; }

  private:
    std::ofstream out_;
    std::vector<std::string> columns_;
};

} // namespace mabhet::cli
