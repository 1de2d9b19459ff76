#include "sml/csv.hpp"

#include <cmath>
#include <cstdio>
#include <stdexcept>

namespace sml {

std::string format_double(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

CsvWriter::CsvWriter(const std::string& path, const std::vector<std::string>& header)
    : out_(path) {
    if (!out_) throw std::runtime_error("cannot open CSV for writing: " + path);
    bool first = true;
    for (const auto& h : header) {
        if (!first) out_ << ',';
        out_ << h;
        first = false;
    }
    out_ << '\n';
}

void CsvWriter::write_cell(double v, bool first) {
    if (!first) out_ << ',';
    out_ << format_double(v);
}

void CsvWriter::write_cell(long long v, bool first) {
    if (!first) out_ << ',';
    out_ << v;
}

void CsvWriter::write_cell(const std::string& v, bool first) {
    if (!first) out_ << ',';
    out_ << v;
}

double binomial_ci_halfwidth(double p_hat, long long n) {
    if (n <= 0) return 0.0;
    return 1.96 * std::sqrt(std::max(0.0, p_hat * (1.0 - p_hat)) / static_cast<double>(n));
}

}  // namespace sml
