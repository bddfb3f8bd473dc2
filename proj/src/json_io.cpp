#include "nctefa/json_io.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>

#include "nctefa/errors.hpp"

namespace nctefa {

namespace {

void dump_value(const nlohmann::json& j, std::string& out, int indent, int step) {
    using value_t = nlohmann::json::value_t;
    const std::string pad(static_cast<std::size_t>(indent + step), ' ');
    const std::string close_pad(static_cast<std::size_t>(indent), ' ');
    switch (j.type()) {
        case value_t::object: {
            if (j.empty()) {
                out += "{}";
                return;
            }
            out += "{\n";
            bool first = true;
            for (auto it = j.begin(); it != j.end(); ++it) {
                if (!first) out += ",\n";
                first = false;
                out += pad;
                out += nlohmann::json(it.key()).dump();
                out += ": ";
                dump_value(it.value(), out, indent + step, step);
            }
            out += "\n" + close_pad + "}";
            return;
        }
        case value_t::array: {
            if (j.empty()) {
                out += "[]";
                return;
            }
            out += "[\n";
            bool first = true;
            for (const auto& v : j) {
                if (!first) out += ",\n";
                first = false;
                out += pad;
                dump_value(v, out, indent + step, step);
            }
            out += "\n" + close_pad + "]";
            return;
        }
        case value_t::number_float: {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "%.17g", j.get<double>());
            out += buf;
            return;
        }
        default:
            out += j.dump();
            return;
    }
}

} // namespace

std::string dump_json_17g(const nlohmann::json& j, int indent_step) {
    std::string out;
    dump_value(j, out, 0, indent_step);
    out += "\n";
    return out;
}

void write_json_file(const nlohmann::json& j, const std::string& path) {
    std::ofstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open for writing: " + path);
    f << dump_json_17g(j);
    if (!f) throw DataError("write failed: " + path);
}

nlohmann::json read_json_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open: " + path);
    nlohmann::json j;
    try {
        f >> j;
    } catch (const nlohmann::json::parse_error& e) {
        throw DataError("malformed JSON in " + path + ": " + e.what());
    }
    return j;
}

std::string read_file_bytes(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw DataError("cannot open: " + path);
    std::ostringstream ss;
    ss << f.rdbuf();
    return ss.str();
}

std::string fnv1a64_hex(const std::string& bytes) {
    std::uint64_t h = 0xCBF29CE484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001B3ULL;
    }
    char buf[20];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace nctefa
