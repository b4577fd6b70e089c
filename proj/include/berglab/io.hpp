#ifndef BERGLAB_IO_HPP
#define BERGLAB_IO_HPP

#include <charconv>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "berglab/corrector.hpp"
#include "berglab/errors.hpp"
#include "berglab/invariant_function.hpp"

namespace berglab {

// Locale-independent numeric formatting: 17 significant digits, '.' decimal
// separator, enough to round-trip any double.
inline std::string format_number(double value) {
    char buf[64];
    const auto result = std::to_chars(buf, buf + sizeof(buf), value,
                                      std::chars_format::general, 17);
    return std::string(buf, result.ptr);
}

// FNV-1a content checksum for the run manifest.
inline std::uint64_t fnv1a(std::string_view data) {
    std::uint64_t hash = 0xcbf29ce484222325ULL;
    for (unsigned char c : data) {
        hash ^= c;
        hash *= 0x100000001b3ULL;
    }
    return hash;
}

inline std::string fnv1a_hex(std::string_view data) {
    char buf[17];
    const std::uint64_t h = fnv1a(data);
    static const char* digits = "0123456789abcdef";
    for (int i = 0; i < 16; ++i) buf[15 - i] = digits[(h >> (4 * i)) & 0xF];
    buf[16] = '\0';
    return std::string(buf, 16);
}

// Row-oriented CSV builder.  Content is assembled in memory so the checksum
// covers exactly the bytes written.
class CsvBuilder {
public:
    explicit CsvBuilder(const std::vector<std::string>& columns) {
        for (std::size_t i = 0; i < columns.size(); ++i) {
            if (i) out_ += ',';
            out_ += columns[i];
        }
        out_ += '\n';
        columns_ = columns.size();
    }

    void row(const std::vector<std::string>& cells) {
        for (std::size_t i = 0; i < cells.size(); ++i) {
            if (i) out_ += ',';
            out_ += cells[i];
        }
        out_ += '\n';
    }

    const std::string& content() const { return out_; }

private:
    std::string out_;
    std::size_t columns_ = 0;
};

inline void write_file(const std::filesystem::path& path, std::string_view content) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw config_error("cannot open '" + path.string() + "' for writing");
    out.write(content.data(), static_cast<std::streamsize>(content.size()));
    if (!out) throw config_error("write failed for '" + path.string() + "'");
}

inline std::string read_file(const std::filesystem::path& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw config_error("cannot open '" + path.string() + "'");
    std::ostringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// Plain-text potential serialization: one "index value" pair per line,
// '#' starts a comment.
inline std::string potential_to_kv(const InvariantFunction& f) {
    std::string out = "# legendre coefficients (index value)\n";
    for (int k = 0; k <= f.degree(); ++k) {
        if (f.coefficient(k) == 0.0 && k > 0) continue;
        out += std::to_string(k) + " " + format_number(f.coefficient(k)) + "\n";
    }
    return out;
}

inline InvariantFunction potential_from_kv(std::istream& in) {
    InvariantFunction f;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        std::istringstream ss(line);
        int k;
        double value;
        if (!(ss >> k)) continue; // blank line
        if (k < 0 || !(ss >> value))
            throw config_error("potential line " + std::to_string(lineno) +
                               ": expected 'index value'");
        f.set_coefficient(k, f.coefficient(k) + value);
    }
    return f;
}

// Corrector state serialization: base potential plus one coefficient vector
// per correction order.
inline std::string state_to_kv(const ApproxState& state) {
    std::string out = "# corrector state\nlevel " + std::to_string(state.level) + "\n";
    for (int k = 0; k <= state.base.potential().degree(); ++k) {
        const double c = state.base.potential().coefficient(k);
        if (c == 0.0) continue;
        out += "base " + std::to_string(k) + " " + format_number(c) + "\n";
    }
    for (std::size_t ord = 0; ord < state.corrections.size(); ++ord) {
        const InvariantFunction& f = state.corrections[ord];
        for (int k = 0; k <= f.degree(); ++k) {
            const double c = f.coefficient(k);
            if (c == 0.0) continue;
            out += "correction " + std::to_string(ord + 1) + " " + std::to_string(k) + " " +
                   format_number(c) + "\n";
        }
    }
    return out;
}

} // namespace berglab

#endif
