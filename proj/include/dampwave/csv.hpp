#pragma once

#include <charconv>
#include <string>
#include <string_view>
#include <type_traits>
#include <vector>

namespace dampwave {

// Shortest decimal string that parses back to the same double.
std::string format_double(double x);

// Ordered CSV emitter; every row must match the header width.
class CsvWriter {
public:
    explicit CsvWriter(std::vector<std::string> header);

    template <typename... Cells>
    void row(const Cells&... cells) {
        std::vector<std::string> r;
        r.reserve(sizeof...(cells));
        (r.push_back(cell(cells)), ...);
        push(std::move(r));
    }

    void push(std::vector<std::string> cells);
    std::size_t rows() const { return rows_; }
    const std::string& str() const { return out_; }

private:
    static std::string cell(double x) { return format_double(x); }
    static std::string cell(const std::string& s) { return s; }
    static std::string cell(std::string_view s) { return std::string(s); }
    static std::string cell(const char* s) { return s; }
    template <typename I, typename = std::enable_if_t<std::is_integral_v<I>>>
    static std::string cell(I i) {
        return std::to_string(i);
    }

    std::size_t width_;
    std::size_t rows_ = 0;
    std::string out_;
};

}  // namespace dampwave
