#pragma once
// Deterministic CSV emission. Doubles are printed with "%.17g" so outputs
// are byte-identical across runs and worker counts.

#include <fstream>
#include <string>
#include <vector>

namespace sml {

std::string format_double(double v);

class CsvWriter {
public:
    CsvWriter(const std::string& path, const std::vector<std::string>& header);

    template <typename... Cells>
    void row(const Cells&... cells) {
        bool first = true;
        ((write_cell(cells, first), first = false), ...);
        out_ << '\n';
    }

private:
    void write_cell(double v, bool first);
    void write_cell(long long v, bool first);
    void write_cell(int v, bool first) { write_cell(static_cast<long long>(v), first); }
    void write_cell(const std::string& v, bool first);
    void write_cell(const char* v, bool first) { write_cell(std::string(v), first); }

    std::ofstream out_;
};

// Binomial confidence half-width z * sqrt(p(1-p)/n) with z = 1.96.
double binomial_ci_halfwidth(double p_hat, long long n);

}  // namespace sml
