#include "tncap/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <stdexcept>
#include <system_error>

namespace tncap::csv {

std::string format(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    if (ec != std::errc()) throw std::runtime_error("format double failed");
    return std::string(buf, ptr);
}

std::string format(std::int64_t v) { return std::to_string(v); }
std::string format(std::uint64_t v) { return std::to_string(v); }

Writer::Writer(std::vector<std::string> header) : columns_(header.size()) {
    for (std::size_t i = 0; i < header.size(); ++i) {
        if (i) out_ += ',';
        out_ += header[i];
    }
    out_ += '\n';
}

Writer& Writer::cell(double v) { return cell(format(v)); }
Writer& Writer::cell(std::int64_t v) { return cell(format(v)); }
Writer& Writer::cell(std::uint64_t v) { return cell(format(v)); }
Writer& Writer::cell(int v) { return cell(std::string(std::to_string(v))); }

Writer& Writer::cell(const std::string& v) {
    if (in_row_) out_ += ',';
    out_ += v;
    ++in_row_;
    return *this;
}

void Writer::end_row() {
    if (in_row_ != columns_)
        throw std::logic_error("csv row has wrong number of cells");
    out_ += '\n';
    in_row_ = 0;
}

void write_file(const std::string& path, const std::string& contents) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open for write: " + path);
    f << contents;
    if (!f) throw std::runtime_error("write failed: " + path);
}

}  // namespace tncap::csv
