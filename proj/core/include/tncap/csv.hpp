#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace tncap::csv {

// Locale-independent formatting ('.' decimal, shortest round-trip doubles).
std::string format(double v);
std::string format(std::int64_t v);
std::string format(std::uint64_t v);

// Minimal CSV assembler: header row plus cells joined by commas.
class Writer {
  public:
    explicit Writer(std::vector<std::string> header);

    Writer& cell(double v);
    Writer& cell(std::int64_t v);
    Writer& cell(std::uint64_t v);
    Writer& cell(int v);
    Writer& cell(const std::string& v);
    void end_row();

    const std::string& str() const { return out_; }

  private:
    std::string out_;
    std::size_t columns_ = 0;
    std::size_t in_row_ = 0;
};

void write_file(const std::string& path, const std::string& contents);

}  // namespace tncap::csv
