#include "sigkit/score_file.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <iostream>
#include <iterator>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sigkit/errors.hpp"

namespace sigkit {

namespace {

std::string trim(const std::string& s) {
    std::size_t b = 0;
    std::size_t e = s.size();
    while (b < e && std::isspace(static_cast<unsigned char>(s[b]))) ++b;
    while (e > b && std::isspace(static_cast<unsigned char>(s[e - 1]))) --e;
    return s.substr(b, e - b);
}

std::vector<std::string> split_csv_line(const std::string& line) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        const std::size_t comma = line.find(',', start);
        cells.push_back(trim(line.substr(start, comma - start)));
        if (comma == std::string::npos) break;
        start = comma + 1;
    }
    return cells;
}

std::optional<double> try_parse_number(const std::string& cell) {
    double v = 0.0;
    const char* begin = cell.data();
    const char* end = begin + cell.size();
    const auto res = std::from_chars(begin, end, v);
    if (res.ec != std::errc() || res.ptr != end) return std::nullopt;
    return v;
}

double parse_score_cell(const std::string& cell, std::size_t line_no, std::size_t col) {
    const auto v = try_parse_number(cell);
    if (!v) throw ParseError("expected a number, got '" + cell + "'", line_no, col);
    if (!std::isfinite(*v)) {
        throw NonFiniteScore("line " + std::to_string(line_no) +
                             ": non-finite score '" + cell + "'");
    }
    return *v;
}

ScoreFile parse_csv(const std::string& text) {
    ScoreFile file;
    file.source_format = ScoreFormat::csv;

    std::vector<std::pair<std::size_t, std::string>> lines;  // (line number, content)
    {
        std::istringstream in(text);
        std::string line;
        std::size_t line_no = 0;
        while (std::getline(in, line)) {
            ++line_no;
            if (!line.empty() && line.back() == '\r') line.pop_back();
            if (trim(line).empty()) continue;
            lines.emplace_back(line_no, line);
        }
    }
    if (lines.empty()) throw ParseError("no data", 1, 1);

    const std::vector<std::string> first = split_csv_line(lines.front().second);
    const bool headerless = std::all_of(first.begin(), first.end(), [](const auto& c) {
        return try_parse_number(c).has_value();
    });

    if (headerless) {
        if (first.size() != 1) {
            throw ParseError("headerless input must be a single column; give columns a header row",
                             lines.front().first, 1);
        }
        std::vector<double> values;
        for (const auto& [line_no, line] : lines) {
            const std::vector<std::string> cells = split_csv_line(line);
            if (cells.size() != 1) {
                throw ParseError("headerless input must be a single column", line_no, 2);
            }
            if (cells[0].empty()) continue;
            values.push_back(parse_score_cell(cells[0], line_no, 1));
        }
        if (values.empty()) throw ParseError("group 'default' has no values", 1, 1);
        file.groups.emplace_back("default", std::move(values));
        return file;
    }

    std::vector<std::string> names;
    std::set<std::string> seen;
    for (std::size_t i = 0; i < first.size(); ++i) {
        const std::string name = first[i];
        if (name.empty()) {
            throw ParseError("empty group name in header", lines.front().first, i + 1);
        }
        if (!seen.insert(name).second) {
            throw DuplicateGroup("duplicate group name '" + name + "'");
        }
        names.push_back(name);
    }
    std::vector<std::vector<double>> columns(names.size());
    for (std::size_t r = 1; r < lines.size(); ++r) {
        const auto& [line_no, line] = lines[r];
        const std::vector<std::string> cells = split_csv_line(line);
        if (cells.size() > names.size()) {
            throw ParseError("row has more cells than header columns", line_no,
                             names.size() + 1);
        }
        for (std::size_t c = 0; c < cells.size(); ++c) {
            if (cells[c].empty()) continue;
            columns[c].push_back(parse_score_cell(cells[c], line_no, c + 1));
        }
    }
    for (std::size_t c = 0; c < names.size(); ++c) {
        if (columns[c].empty()) {
            throw ParseError("group '" + names[c] + "' has no values", lines.front().first,
                             c + 1);
        }
        file.groups.emplace_back(names[c], std::move(columns[c]));
    }
    return file;
}

// Byte offset -> (line, column), both 1-based, for json error reporting.
std::pair<std::size_t, std::size_t> position_at(const std::string& text,
                                                std::size_t byte) {
    std::size_t line = 1;
    std::size_t col = 1;
    for (std::size_t i = 0; i < byte && i < text.size(); ++i) {
        if (text[i] == '\n') {
            ++line;
            col = 1;
        } else {
            ++col;
        }
    }
    return {line, col};
}

ScoreFile parse_json(const std::string& text) {
    using json = nlohmann::ordered_json;

    // The parser itself keeps the last value for repeated keys, so duplicates
    // are caught from the key events at depth 1.
    std::set<std::string> keys;
    const auto callback = [&](int depth, json::parse_event_t event, json& parsed) {
        if (event == json::parse_event_t::key && depth == 1) {
            const std::string key = parsed.get<std::string>();
            if (!keys.insert(key).second) {
                throw DuplicateGroup("duplicate group name '" + key + "'");
            }
        }
        return true;
    };

    json doc;
    try {
        doc = json::parse(text, callback);
    } catch (const json::parse_error& e) {
        const auto [line, col] = position_at(text, e.byte > 0 ? e.byte - 1 : 0);
        throw ParseError(e.what(), line, col);
    } catch (const json::out_of_range&) {
        // Literals like 1e999 overflow a double at parse time.
        throw NonFiniteScore("score value overflows a double");
    }

    ScoreFile file;
    file.source_format = ScoreFormat::json;

    const auto read_array = [](const std::string& name, const json& arr) {
        if (!arr.is_array()) {
            throw ParseError("group '" + name + "' must be an array of numbers", 1, 1);
        }
        std::vector<double> values;
        values.reserve(arr.size());
        for (const auto& v : arr) {
            if (!v.is_number()) {
                throw ParseError("group '" + name + "' must contain only numbers", 1, 1);
            }
            const double x = v.get<double>();
            if (!std::isfinite(x)) {
                throw NonFiniteScore("group '" + name + "' contains a non-finite score");
            }
            values.push_back(x);
        }
        if (values.empty()) throw ParseError("group '" + name + "' has no values", 1, 1);
        return values;
    };

    if (doc.is_array()) {
        file.groups.emplace_back("default", read_array("default", doc));
        return file;
    }
    if (!doc.is_object()) {
        throw ParseError("top level must be an object of groups or an array", 1, 1);
    }
    if (doc.empty()) throw ParseError("no groups", 1, 1);
    for (const auto& [name, arr] : doc.items()) {
        file.groups.emplace_back(name, read_array(name, arr));
    }
    return file;
}

}  // namespace

const std::vector<double>* ScoreFile::find(const std::string& name) const {
    for (const auto& [group_name, values] : groups) {
        if (group_name == name) return &values;
    }
    return nullptr;
}

ScoreFile parse_scores(const std::string& text, std::optional<ScoreFormat> hint) {
    ScoreFormat format;
    if (hint) {
        format = *hint;
    } else {
        std::size_t i = 0;
        while (i < text.size() && std::isspace(static_cast<unsigned char>(text[i]))) ++i;
        format = (i < text.size() && (text[i] == '{' || text[i] == '['))
                     ? ScoreFormat::json
                     : ScoreFormat::csv;
    }
    return format == ScoreFormat::json ? parse_json(text) : parse_csv(text);
}

ScoreFile load_scores(const std::string& path, std::optional<ScoreFormat> hint) {
    std::string text;
    if (path == "-") {
        text.assign(std::istreambuf_iterator<char>(std::cin),
                    std::istreambuf_iterator<char>());
    } else {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw Error("cannot open score file '" + path + "'");
        text.assign(std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>());
    }
    if (!hint) {
        if (path.ends_with(".json")) hint = ScoreFormat::json;
        else if (path.ends_with(".csv")) hint = ScoreFormat::csv;
    }
    return parse_scores(text, hint);
}

}  // namespace sigkit
