#include "qtrack/csv.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <system_error>

#include "qtrack/errors.hpp"

namespace qtrack {

std::string format_double(double v) {
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[64];
    auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, ptr);
}

std::string format_int(std::int64_t v) { return std::to_string(v); }

void write_text_atomic(const std::filesystem::path& path,
                       const std::string& content) {
    std::filesystem::path tmp = path;
    tmp += ".tmp";
    {
        std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
        if (!out)
            throw ConfigError("cannot open " + tmp.string() + " for writing");
        out.write(content.data(),
                  static_cast<std::streamsize>(content.size()));
        if (!out) throw ConfigError("write failed: " + tmp.string());
    }
    std::error_code ec;
    std::filesystem::rename(tmp, path, ec);
    if (ec)
        throw ConfigError("cannot move " + tmp.string() + " to " +
                          path.string() + ": " + ec.message());
}

} // namespace qtrack
