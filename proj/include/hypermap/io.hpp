#pragma once

#include "hypermap/collection.hpp"
#include "hypermap/medial.hpp"

#include <json.hpp>

#include <algorithm>
#include <cctype>
#include <map>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace hypermap {

/// Parse failure with a 1-based source position (line 0 when the whole document is at fault).
class ParseError : public std::invalid_argument {
public:
    ParseError(int line, int column, const std::string& message)
        : std::invalid_argument(position(line, column) + message), line_(line), column_(column)
    {
    }

    int line() const noexcept { return line_; }
    int column() const noexcept { return column_; }

private:
    static std::string position(int line, int column)
    {
        if (line <= 0) {
            return "";
        }
        return "line " + std::to_string(line) + ", column " + std::to_string(column) + ": ";
    }

    int line_;
    int column_;
};

/// A hypermap as written in an input file. Points missing from a permutation are fixed.
/// Cycles are stored on the points 1..n; `labels[i - 1]` is the label point i had in
/// the input, empty when the input already used 1..n.
struct HypermapDocument {
    std::optional<std::string> name;
    int n = 0;
    std::vector<Cycle> sigma;
    std::vector<Cycle> alpha;
    std::vector<int> labels;

    int label(Point i) const { return labels.empty() ? i : labels[static_cast<std::size_t>(i - 1)]; }

    HypermapCollection collection() const { return HypermapCollection::from_cycles(n, sigma, alpha); }

    static HypermapDocument from_collection(const HypermapCollection& h, std::optional<std::string> name = std::nullopt)
    {
        return {std::move(name), h.size(), h.sigma().cycles(), h.alpha().cycles(), {}};
    }
};

namespace detail {

struct Located {
    int value;
    int line;
    int column;
};

struct LocatedCycles {
    std::vector<std::vector<Located>> cycles;
    int line = 0;
};

inline std::string trim(std::string_view s)
{
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) {
        ++b;
    }
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) {
        --e;
    }
    return std::string(s.substr(b, e - b));
}

// Parses "(1 4)(2 5)(3)" starting at byte `offset` of line `line`; "()" is allowed.
inline std::vector<std::vector<Located>> parse_cycle_text(std::string_view text, int line, int offset)
{
    std::vector<std::vector<Located>> cycles;
    std::size_t k = 0;
    auto col = [&](std::size_t at) { return offset + static_cast<int>(at) + 1; };
    auto skip_space = [&] {
        while (k < text.size() && std::isspace(static_cast<unsigned char>(text[k]))) {
            ++k;
        }
    };
    skip_space();
    if (k == text.size()) {
        throw ParseError(line, col(k), "expected cycles like (1 2 3)");
    }
    while (k < text.size()) {
        if (text[k] != '(') {
            throw ParseError(line, col(k), std::string("expected '(' but found '") + text[k] + "'");
        }
        ++k;
        std::vector<Located> cycle;
        while (true) {
            skip_space();
            if (k == text.size()) {
                throw ParseError(line, col(k), "unterminated cycle, expected ')'");
            }
            if (text[k] == ')') {
                ++k;
                break;
            }
            if (text[k] == ',') {
                ++k;
                continue;
            }
            if (text[k] == '-' || !std::isdigit(static_cast<unsigned char>(text[k]))) {
                throw ParseError(line, col(k), std::string("expected a positive integer but found '") + text[k] + "'");
            }
            const std::size_t start = k;
            long long value = 0;
            while (k < text.size() && std::isdigit(static_cast<unsigned char>(text[k]))) {
                value = value * 10 + (text[k] - '0');
                if (value > 65535) {
                    throw ParseError(line, col(start), "point label too large");
                }
                ++k;
            }
            if (value == 0) {
                throw ParseError(line, col(start), "points are numbered from 1");
            }
            cycle.push_back({static_cast<int>(value), line, col(start)});
        }
        if (!cycle.empty()) {
            cycles.push_back(std::move(cycle));
        }
        skip_space();
    }
    return cycles;
}

inline std::vector<Cycle> check_cycles(const LocatedCycles& in, int n, const char* which)
{
    std::vector<bool> seen(static_cast<std::size_t>(n) + 1, false);
    std::vector<Cycle> out;
    for (const auto& cycle : in.cycles) {
        Cycle c;
        for (const Located& p : cycle) {
            if (p.value < 1 || p.value > n) {
                throw ParseError(p.line, p.column,
                                 std::string(which) + ": point " + std::to_string(p.value) + " out of range 1.." + std::to_string(n));
            }
            if (seen[static_cast<std::size_t>(p.value)]) {
                throw ParseError(p.line, p.column, std::string(which) + ": point " + std::to_string(p.value) + " appears twice");
            }
            seen[static_cast<std::size_t>(p.value)] = true;
            c.push_back(p.value);
        }
        out.push_back(std::move(c));
    }
    return out;
}

inline int max_label(const LocatedCycles& c)
{
    int m = 0;
    for (const auto& cycle : c.cycles) {
        for (const Located& p : cycle) {
            m = std::max(m, p.value);
        }
    }
    return m;
}

// Without an explicit n the point set is whatever labels occur; unless those are
// exactly 1..max they are renumbered in increasing order and the map is returned.
inline std::vector<int> normalize_labels(LocatedCycles& sigma, LocatedCycles& alpha)
{
    std::vector<int> used;
    for (const LocatedCycles* c : {&sigma, &alpha}) {
        for (const auto& cycle : c->cycles) {
            for (const Located& p : cycle) {
                used.push_back(p.value);
            }
        }
    }
    std::sort(used.begin(), used.end());
    used.erase(std::unique(used.begin(), used.end()), used.end());
    if (used.empty() || used.back() == static_cast<int>(used.size())) {
        return {};
    }
    for (LocatedCycles* c : {&sigma, &alpha}) {
        for (auto& cycle : c->cycles) {
            for (Located& p : cycle) {
                p.value = static_cast<int>(std::lower_bound(used.begin(), used.end(), p.value) - used.begin()) + 1;
            }
        }
    }
    return used;
}

inline std::pair<int, int> line_column(std::string_view text, std::size_t byte)
{
    int line = 1;
    int column = 1;
    for (std::size_t k = 0; k < byte && k < text.size(); ++k) {
        if (text[k] == '\n') {
            ++line;
            column = 1;
        } else {
            ++column;
        }
    }
    return {line, column};
}

inline HypermapDocument parse_json_document(std::string_view text)
{
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(text);
    } catch (const nlohmann::json::parse_error& e) {
        const auto [line, column] = line_column(text, e.byte > 0 ? e.byte - 1 : 0);
        // Keep nlohmann's reason but not its own position prefix.
        std::string what = e.what();
        if (auto pos = what.find("syntax error"); pos != std::string::npos) {
            what = what.substr(pos);
        }
        throw ParseError(line, column, "malformed JSON: " + what);
    }
    if (!j.is_object()) {
        throw ParseError(1, 1, "expected a JSON object with fields n, sigma, alpha");
    }
    for (const auto& [key, value] : j.items()) {
        if (key != "n" && key != "sigma" && key != "alpha" && key != "name") {
            throw ParseError(0, 0, "unknown field \"" + key + "\"");
        }
    }
    auto read_cycles = [&](const char* key) {
        if (!j.contains(key)) {
            throw ParseError(0, 0, std::string("missing field \"") + key + "\"");
        }
        const nlohmann::json& arr = j.at(key);
        if (!arr.is_array()) {
            throw ParseError(0, 0, std::string("field \"") + key + "\" must be an array of arrays of integers");
        }
        LocatedCycles out;
        for (std::size_t c = 0; c < arr.size(); ++c) {
            if (!arr[c].is_array()) {
                throw ParseError(0, 0, std::string(key) + "[" + std::to_string(c) + "] must be an array of integers");
            }
            std::vector<Located> cycle;
            for (std::size_t e = 0; e < arr[c].size(); ++e) {
                const nlohmann::json& v = arr[c][e];
                const std::string where = std::string(key) + "[" + std::to_string(c) + "][" + std::to_string(e) + "]";
                if (!v.is_number_integer()) {
                    throw ParseError(0, 0, where + " must be an integer");
                }
                const long long value = v.get<long long>();
                if (value < 1 || value > 65535) {
                    throw ParseError(0, 0, where + ": point " + std::to_string(value) + " out of range");
                }
                cycle.push_back({static_cast<int>(value), 0, 0});
            }
            if (!cycle.empty()) {
                out.cycles.push_back(std::move(cycle));
            }
        }
        return out;
    };
    LocatedCycles sigma = read_cycles("sigma");
    LocatedCycles alpha = read_cycles("alpha");
    HypermapDocument doc;
    if (j.contains("name")) {
        if (!j["name"].is_string()) {
            throw ParseError(0, 0, "field \"name\" must be a string");
        }
        doc.name = j["name"].get<std::string>();
    }
    if (j.contains("n")) {
        if (!j["n"].is_number_integer() || j["n"].get<long long>() < 0 || j["n"].get<long long>() > 65535) {
            throw ParseError(0, 0, "field \"n\" must be a nonnegative integer");
        }
        doc.n = j["n"].get<int>();
    } else {
        doc.labels = normalize_labels(sigma, alpha);
        doc.n = std::max(max_label(sigma), max_label(alpha));
    }
    // JSON values carry no source position; name the offending element instead.
    auto check = [&](const LocatedCycles& c, const char* which) {
        std::vector<bool> seen(static_cast<std::size_t>(doc.n) + 1, false);
        std::vector<Cycle> out;
        for (std::size_t ci = 0; ci < c.cycles.size(); ++ci) {
            Cycle cycle;
            for (std::size_t e = 0; e < c.cycles[ci].size(); ++e) {
                const int p = c.cycles[ci][e].value;
                const std::string where = std::string(which) + "[" + std::to_string(ci) + "][" + std::to_string(e) + "]";
                if (p > doc.n) {
                    throw ParseError(0, 0, where + ": point " + std::to_string(p) + " out of range 1.." + std::to_string(doc.n));
                }
                if (seen[static_cast<std::size_t>(p)]) {
                    throw ParseError(0, 0, where + ": point " + std::to_string(p) + " appears twice");
                }
                seen[static_cast<std::size_t>(p)] = true;
                cycle.push_back(p);
            }
            out.push_back(std::move(cycle));
        }
        return out;
    };
    doc.sigma = check(sigma, "sigma");
    doc.alpha = check(alpha, "alpha");
    return doc;
}

inline HypermapDocument parse_text_document(std::string_view text)
{
    std::optional<LocatedCycles> sigma;
    std::optional<LocatedCycles> alpha;
    std::optional<int> n;
    std::optional<std::string> name;
    int line_no = 0;
    std::size_t pos = 0;
    while (pos <= text.size()) {
        const std::size_t end = std::min(text.find('\n', pos), text.size());
        std::string_view line = text.substr(pos, end - pos);
        ++line_no;
        pos = end + 1;
        if (!line.empty() && line.back() == '\r') {
            line.remove_suffix(1);
        }
        if (const std::size_t hash = line.find('#'); hash != std::string_view::npos) {
            line = line.substr(0, hash);
        }
        if (trim(line).empty()) {
            continue;
        }
        const std::size_t colon = line.find(':');
        if (colon == std::string_view::npos) {
            const std::size_t first = line.find_first_not_of(" \t");
            throw ParseError(line_no, static_cast<int>(first) + 1, "expected 'key: value' (keys: sigma, alpha, n, name)");
        }
        const std::string key = trim(line.substr(0, colon));
        const std::string_view value = line.substr(colon + 1);
        const int value_offset = static_cast<int>(colon) + 1;
        const int key_column = static_cast<int>(line.find_first_not_of(" \t")) + 1;
        auto once = [&](bool present) {
            if (present) {
                throw ParseError(line_no, key_column, "field '" + key + "' given twice");
            }
        };
        if (key == "sigma" || key == "alpha") {
            auto& slot = key == "sigma" ? sigma : alpha;
            once(slot.has_value());
            slot = LocatedCycles{parse_cycle_text(value, line_no, value_offset), line_no};
        } else if (key == "n") {
            once(n.has_value());
            const std::string v = trim(value);
            if (v.empty() || !std::all_of(v.begin(), v.end(), [](char c) { return std::isdigit(static_cast<unsigned char>(c)); }) ||
                v.size() > 5) {
                throw ParseError(line_no, value_offset + 1, "n must be a nonnegative integer");
            }
            n = std::stoi(v);
        } else if (key == "name") {
            once(name.has_value());
            name = trim(value);
        } else {
            throw ParseError(line_no, key_column, "unknown field '" + key + "' (keys: sigma, alpha, n, name)");
        }
    }
    if (!sigma) {
        throw ParseError(line_no, 1, "missing 'sigma:' line");
    }
    if (!alpha) {
        throw ParseError(line_no, 1, "missing 'alpha:' line");
    }
    HypermapDocument doc;
    doc.name = name;
    if (n) {
        doc.n = *n;
    } else {
        doc.labels = normalize_labels(*sigma, *alpha);
        doc.n = std::max(max_label(*sigma), max_label(*alpha));
    }
    doc.sigma = check_cycles(*sigma, doc.n, "sigma");
    doc.alpha = check_cycles(*alpha, doc.n, "alpha");
    return doc;
}

} // namespace detail

/// Reads either the cycle text format
///
///     name: example      (optional)
///     n: 5               (optional; without it the labels that occur are the points)
///     sigma: (1 4)(2 5)(3)
///     alpha: (1 2 3)(4 5)
///
/// or a JSON object {"n": 5, "sigma": [[1,4],[2,5],[3]], "alpha": [[1,2,3],[4,5]]}.
/// Throws ParseError.
inline HypermapDocument parse_hypermap(std::string_view text)
{
    const std::size_t first = text.find_first_not_of(" \t\r\n");
    if (first != std::string_view::npos && text[first] == '{') {
        return detail::parse_json_document(text);
    }
    return detail::parse_text_document(text);
}

inline std::string format_cycles(const std::vector<Cycle>& cycles, const std::vector<int>& labels = {})
{
    std::string s;
    for (const Cycle& c : cycles) {
        s += '(';
        for (std::size_t k = 0; k < c.size(); ++k) {
            const int p = labels.empty() ? c[k] : labels[static_cast<std::size_t>(c[k] - 1)];
            s += (k ? " " : "") + std::to_string(p);
        }
        s += ')';
    }
    return s.empty() ? "()" : s;
}

/// Canonical text form, in the input's labels; parse_hypermap(print_hypermap(d)) == d up
/// to the order in which cycles were written.
inline std::string print_hypermap(const HypermapDocument& doc)
{
    const HypermapCollection h = doc.collection();
    std::string s;
    if (doc.name) {
        s += "name: " + *doc.name + "\n";
    }
    if (doc.labels.empty()) {
        s += "n: " + std::to_string(doc.n) + "\n";
    }
    s += "sigma: " + format_cycles(h.sigma().cycles(), doc.labels) + "\n";
    s += "alpha: " + format_cycles(h.alpha().cycles(), doc.labels) + "\n";
    return s;
}

inline nlohmann::json to_json(const HypermapDocument& doc)
{
    const HypermapCollection h = doc.collection();
    auto relabeled = [&](const Permutation& p) {
        std::vector<std::vector<int>> out;
        for (const Cycle& c : p.cycles()) {
            std::vector<int> cycle;
            for (Point i : c) {
                cycle.push_back(doc.label(i));
            }
            out.push_back(std::move(cycle));
        }
        return out;
    };
    nlohmann::json j;
    if (doc.name) {
        j["name"] = *doc.name;
    }
    if (doc.labels.empty()) {
        j["n"] = doc.n;
    }
    j["sigma"] = relabeled(h.sigma());
    j["alpha"] = relabeled(h.alpha());
    return j;
}

/// A document for h that keeps doc's name and labels (h acts on the same points).
inline HypermapDocument with_collection(const HypermapDocument& doc, const HypermapCollection& h)
{
    HypermapDocument out = HypermapDocument::from_collection(h, doc.name);
    out.labels = doc.labels;
    return out;
}

/// An edge list with the original vertex labels; vertex k of `graph` is labels[k].
struct DigraphDocument {
    EulerianDigraph graph;
    std::vector<long long> labels;
};

/// One `tail head` pair of integers per line; '#' starts a comment. Throws ParseError.
inline DigraphDocument parse_edge_list(std::string_view text)
{
    std::vector<std::pair<long long, long long>> raw;
    std::istringstream in{std::string(text)};
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (const std::size_t hash = line.find('#'); hash != std::string::npos) {
            line.erase(hash);
        }
        std::vector<std::pair<long long, int>> fields;
        std::size_t k = 0;
        while (k < line.size()) {
            if (std::isspace(static_cast<unsigned char>(line[k]))) {
                ++k;
                continue;
            }
            const std::size_t start = k;
            while (k < line.size() && !std::isspace(static_cast<unsigned char>(line[k]))) {
                ++k;
            }
            const std::string token = line.substr(start, k - start);
            std::size_t used = 0;
            long long value = 0;
            try {
                value = std::stoll(token, &used);
            } catch (const std::exception&) {
                used = 0;
            }
            if (used != token.size()) {
                throw ParseError(line_no, static_cast<int>(start) + 1, "expected an integer vertex but found '" + token + "'");
            }
            fields.emplace_back(value, static_cast<int>(start) + 1);
        }
        if (fields.empty()) {
            continue;
        }
        if (fields.size() != 2) {
            throw ParseError(line_no, fields.size() > 2 ? fields[2].second : static_cast<int>(line.size()) + 1,
                             "expected exactly two vertices 'tail head'");
        }
        raw.emplace_back(fields[0].first, fields[1].first);
    }
    DigraphDocument doc;
    for (const auto& [t, h] : raw) {
        doc.labels.push_back(t);
        doc.labels.push_back(h);
    }
    std::sort(doc.labels.begin(), doc.labels.end());
    doc.labels.erase(std::unique(doc.labels.begin(), doc.labels.end()), doc.labels.end());
    auto index = [&](long long v) {
        return static_cast<int>(std::lower_bound(doc.labels.begin(), doc.labels.end(), v) - doc.labels.begin());
    };
    doc.graph.vertex_count = static_cast<int>(doc.labels.size());
    for (const auto& [t, h] : raw) {
        doc.graph.edges.emplace_back(index(t), index(h));
    }
    return doc;
}

inline std::string print_edge_list(const EulerianDigraph& d)
{
    std::string s;
    for (const auto& [t, h] : d.edges) {
        s += std::to_string(t) + " " + std::to_string(h) + "\n";
    }
    return s;
}

} // namespace hypermap
