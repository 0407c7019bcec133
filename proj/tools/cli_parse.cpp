#include "cli_parse.hpp"

#include <cmath>
#include <numbers>

namespace ktinv::cli {

namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t");
    return s.substr(b, e - b + 1);
}

double parse_decimal(const std::string& s) {
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(s, &used);
    } catch (const std::exception&) {
        throw UsageError("not a number: '" + s + "'");
    }
    if (used != s.size() || !std::isfinite(v)) throw UsageError("not a number: '" + s + "'");
    return v;
}

double parse_unsigned(const std::string& s) {
    if (s.rfind("sqrt(", 0) == 0 && s.size() > 6 && s.back() == ')') {
        const double arg = parse_decimal(s.substr(5, s.size() - 6));
        if (arg < 0.0) throw UsageError("sqrt of a negative number: '" + s + "'");
        return std::sqrt(arg);
    }
    if (s == "pi") return std::numbers::pi;
    if (s.rfind("pi/", 0) == 0) {
        const double m = parse_decimal(s.substr(3));
        if (m == 0.0) throw UsageError("division by zero: '" + s + "'");
        return std::numbers::pi / m;
    }
    const auto slash = s.find('/');
    if (slash != std::string::npos) {
        const double p = parse_decimal(s.substr(0, slash));
        const double q = parse_decimal(s.substr(slash + 1));
        if (q == 0.0) throw UsageError("division by zero: '" + s + "'");
        return p / q;
    }
    return parse_decimal(s);
}

std::vector<double> parse_reals(const std::string& list, std::size_t expected, const std::string& what) {
    const auto parts = split(list, ',');
    if (parts.size() != expected)
        throw UsageError(what + " expects " + std::to_string(expected) + " comma-separated values");
    std::vector<double> out;
    for (const auto& p : parts) out.push_back(parse_real(p));
    return out;
}

}  // namespace

std::vector<std::string> split(const std::string& s, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : s) {
        if (c == sep) {
            out.push_back(trim(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(trim(cur));
    return out;
}

double parse_real(const std::string& token) {
    const std::string s = trim(token);
    if (s.empty()) throw UsageError("empty number");
    if (s[0] == '-') return -parse_unsigned(s.substr(1));
    if (s[0] == '+') return parse_unsigned(s.substr(1));
    return parse_unsigned(s);
}

KValue parse_k(const std::string& token) {
    const std::string s = trim(token);
    return {parse_real(s), s};
}

std::vector<KValue> parse_k_list(const std::string& list) {
    std::vector<KValue> out;
    for (const auto& t : split(list, ',')) out.push_back(parse_k(t));
    return out;
}

KtParams parse_tensor(const std::string& literal) {
    const std::string s = trim(literal);
    if (s == "metric") return metric_kt();
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw UsageError("unknown tensor literal: '" + s + "'");
    const std::string kind = s.substr(0, colon);
    const std::string args = s.substr(colon + 1);
    if (kind == "polar") {
        const auto v = parse_reals(args, 2, "polar");
        return polar_kt_at(v[0], v[1]);
    }
    if (kind == "eh") return eh_canonical_kt(parse_reals(args, 1, "eh")[0]);
    if (kind == "cart") return cartesian_rotated_kt(parse_reals(args, 1, "cart")[0]);
    if (kind == "raw") {
        const auto v = parse_reals(args, 6, "raw");
        return KtParams(v[0], v[1], v[2], v[3], v[4], v[5]);
    }
    throw UsageError("unknown tensor literal: '" + s + "'");
}

SE2Element parse_group_element(const std::string& literal) {
    const auto v = parse_reals(literal, 3, "group element");
    return {v[0], v[1], v[2]};
}

}  // namespace ktinv::cli
