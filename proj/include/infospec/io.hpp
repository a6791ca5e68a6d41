#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include <json.hpp>

namespace infospec {

// 17 significant digits (round-trips a double); "inf", "-inf", "nan" otherwise.
std::string format_double(double x);

// JSON numbers cannot hold non-finite values; those become strings.
nlohmann::json json_number(double x);

// FNV-1a 64 over the compact dump of `config` (object keys are sorted), as
// 16 hex digits.
std::string config_hash(const nlohmann::json& config);

// CSV with a leading "# infospec <version> config=<hash>" comment line.
class CsvWriter {
public:
    CsvWriter(std::ostream& os, const nlohmann::json& config, const std::vector<std::string>& columns);

    CsvWriter& operator<<(double x);
    CsvWriter& operator<<(int x);
    CsvWriter& operator<<(const std::string& s);
    void end_row();

private:
    void sep();

    std::ostream& os_;
    size_t cols_;
    size_t at_ = 0;
};

}  // namespace infospec
