#include "mabhet/cli/csv.hpp"

#include "mabhet/errors.hpp"

#include <charconv>
#include <cmath>

namespace mabhet::cli {

namespace {

std::string
Escape(const std::string& field)
{
    if (field.find_first_of(",\"\n\r") == std::string::npos)
    {
        return field;
    }
    std::string out = "\"";
    for (char c : field)
    {
        if (c == '"')
        {
            out += '"';
        }
        out += c;
    }
    return out + "\"";
}

} // namespace

std::string
FormatNumber(double v)
{
    if (std::isnan(v))
    {
        return "nan";
    }
    if (std::isinf(v))
    {
        return v > 0 ? "inf" : "-inf";
    }
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

std::string
FormatNumber(std::optional<double> v)
{
    return v ? FormatNumber(*v) : std::string();
}

std::string
FormatInteger(std::uint64_t v)
{
    char buf[32];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

CsvWriter::CsvWriter(const std::string& path, std::vector<std::string> columns)
    : out_(path, std::ios::binary | std::ios::trunc),
      columns_(std::move(columns))
{
    if (!out_)
    {
        throw Error("cannot open " + path + " for writing");
    }
    Row(columns_);
}

void
CsvWriter::Row(const std::vector<std::string>& fields)
{
    for (std::size_t i = 0; i < fields.size(); ++i)
    {
        if (i > 0)
        {
            out_ << ',';
        }
        out_ << Escape(fields[i]);
    }
    out_ << '\n';
    out_.flush();
}

} // namespace mabhet::cli
