#include "json_writer.hpp"

#include <cmath>
#include <cstdio>

namespace tju::cli {

std::string format_number(double value) {
    if (!std::isfinite(value)) {
        return std::isnan(value) ? "nan" : (value > 0 ? "inf" : "-inf");
    }
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.11e", value);
    return buf;
}

namespace {

void write(const nlohmann::ordered_json &v, std::string &out, int depth) {
    const std::string pad(static_cast<std::size_t>(2 * (depth + 1)), ' ');
    const std::string close_pad(static_cast<std::size_t>(2 * depth), ' ');
    switch (v.type()) {
    case nlohmann::ordered_json::value_t::object: {
        if (v.empty()) {
            out += "{}";
            return;
        }
        out += "{\n";
        bool first = true;
        for (auto it = v.begin(); it != v.end(); ++it) {
            if (!first) {
                out += ",\n";
            }
            first = false;
            out += pad + nlohmann::ordered_json(it.key()).dump() + ": ";
            write(it.value(), out, depth + 1);
        }
        out += "\n" + close_pad + "}";
        return;
    }
    case nlohmann::ordered_json::value_t::array: {
        if (v.empty()) {
            out += "[]";
            return;
        }
        out += "[\n";
        for (std::size_t i = 0; i < v.size(); ++i) {
            if (i) {
                out += ",\n";
            }
            out += pad;
            write(v[i], out, depth + 1);
        }
        out += "\n" + close_pad + "]";
        return;
    }
    case nlohmann::ordered_json::value_t::number_float: {
        // JSON has no nan/inf; emit null rather than invalid text
        const double d = v.get<double>();
        out += std::isfinite(d) ? format_number(d) : "null";
        return;
    }
    default:
        out += v.dump();
    }
}

} // namespace

std::string to_json_text(const nlohmann::ordered_json &value) {
    std::string out;
    write(value, out, 0);
    out += "\n";
    return out;
}

} // namespace tju::cli
