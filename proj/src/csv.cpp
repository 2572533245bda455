#include "dampwave/csv.hpp"

#include <array>
#include <cmath>
#include <stdexcept>

namespace dampwave {

std::string format_double(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    std::array<char, 64> buf{};
    auto res = std::to_chars(buf.data(), buf.data() + buf.size(), x);
    return std::string(buf.data(), res.ptr);
}

CsvWriter::CsvWriter(std::vector<std::string> header) : width_(header.size()) {
    if (header.empty()) throw std::invalid_argument("csv: empty header");
    push(std::move(header));
    rows_ = 0;
}

void CsvWriter::push(std::vector<std::string> cells) {
    if (cells.size() != width_)
        throw std::logic_error("csv: row has " + std::to_string(cells.size()) + " cells, header has " +
                               std::to_string(width_));
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (i) out_ += ',';
        out_ += cells[i];
    }
    out_ += '\n';
    ++rows_;
}

}  // namespace dampwave
