#include "infospec/io.hpp"

#include <cmath>
#include <cstdint>
#include <cstdio>
#include <ostream>

#include "infospec/common.hpp"

namespace infospec {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

nlohmann::json json_number(double x) {
    if (std::isfinite(x)) return x;
    return format_double(x);
}

std::string config_hash(const nlohmann::json& config) {
    const std::string s = config.dump();
    std::uint64_t h = 1469598103934665603ULL;
    for (unsigned char c : s) {
        h ^= c;
        h *= 1099511628211ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

CsvWriter::CsvWriter(std::ostream& os, const nlohmann::json& config, const std::vector<std::string>& columns)
    : os_(os), cols_(columns.size()) {
    os_ << "# infospec " << kVersion << " config=" << config_hash(config) << "\n";
    for (size_t i = 0; i < columns.size(); ++i) os_ << (i ? "," : "") << columns[i];
    os_ << "\n";
}

void CsvWriter::sep() {
    if (at_ == cols_) throw InputError("too many CSV fields in row");
    if (at_++) os_ << ",";
}

CsvWriter& CsvWriter::operator<<(double x) {
    sep();
    os_ << format_double(x);
    return *this;
}

CsvWriter& CsvWriter::operator<<(int x) {
    sep();
    os_ << x;
    return *this;
}

CsvWriter& CsvWriter::operator<<(const std::string& s) {
    sep();
    os_ << s;
    return *this;
}

void CsvWriter::end_row() {
    if (at_ != cols_) throw InputError("short CSV row");
    os_ << "\n";
    at_ = 0;
}

}  // namespace infospec
