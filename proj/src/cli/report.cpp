#include <cmath>
#include <cstdio>

#include "drmo/cli.hpp"

namespace drmo::cli {

std::string digest(std::string_view bytes) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return std::string("fnv1a64:") + buf;
}

Json number(double x) {
    if (std::isnan(x)) return "nan";
    if (std::isinf(x)) return x > 0 ? "inf" : "-inf";
    return x;
}

Json numbers(const std::vector<double>& xs) {
    Json out = Json::array();
    for (double x : xs) out.push_back(number(x));
    return out;
}

namespace {

bool scalar(const Json& v) { return !v.is_object() && !v.is_array(); }

std::string show(const Json& v) { return v.is_string() ? v.get<std::string>() : v.dump(); }

bool flat_array(const Json& v) {
    if (!v.is_array()) return false;
    for (const auto& x : v)
        if (!scalar(x)) return false;
    return true;
}

bool flat_object(const Json& v) {
    if (!v.is_object()) return false;
    for (const auto& [_, x] : v.items())
        if (!scalar(x) && !flat_array(x)) return false;
    return true;
}

// Arrays of messages read better one per line; numeric arrays may carry
// "inf" or "-inf" strings and stay inline.
bool text_list(const Json& v) {
    for (const auto& x : v) {
        if (!x.is_string()) return false;
        const auto& t = x.get_ref<const std::string&>();
        if (t == "inf" || t == "-inf" || t == "nan") return false;
    }
    return !v.empty();
}

std::string inline_array(const Json& v) {
    std::string s = "[";
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? ", " : "") + show(v[i]);
    return s + "]";
}

std::string inline_object(const Json& v) {
    std::string s;
    for (const auto& [k, x] : v.items()) {
        if (!s.empty()) s += ", ";
        s += k + ": " + (x.is_array() ? inline_array(x) : show(x));
    }
    return s;
}

void emit(std::string& out, const std::string& key, const Json& v, std::size_t depth) {
    const std::string pad(2 * depth, ' ');
    if (scalar(v)) {
        out += pad + key + ": " + show(v) + "\n";
    } else if (flat_array(v) && !text_list(v)) {
        out += pad + key + ": " + inline_array(v) + "\n";
    } else if (v.is_array()) {
        out += pad + key + ":\n";
        for (std::size_t i = 0; i < v.size(); ++i) {
            const Json& x = v[i];
            if (scalar(x))
                out += pad + "  - " + show(x) + "\n";
            else if (flat_array(x))
                out += pad + "  " + inline_array(x) + "\n";
            else if (flat_object(x))
                out += pad + "  - " + inline_object(x) + "\n";
            else
                emit(out, "[" + std::to_string(i) + "]", x, depth + 1);
        }
    } else {
        out += pad + key + ":\n";
        for (const auto& [k, x] : v.items()) emit(out, k, x, depth + 1);
    }
}

}  // namespace

std::string render_text(const Json& report) {
    std::string out;
    for (const auto& [k, v] : report.items()) emit(out, k, v, 0);
    return out;
}

}  // namespace drmo::cli
