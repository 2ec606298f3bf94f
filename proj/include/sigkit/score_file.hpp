#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sigkit {

enum class ScoreFormat { csv, json };

// Parsed score input: ordered, uniquely named, non-empty groups with values
// kept in file order (positionally paired tests rely on that order).
struct ScoreFile {
    std::vector<std::pair<std::string, std::vector<double>>> groups;
    ScoreFormat source_format = ScoreFormat::csv;

    const std::vector<double>* find(const std::string& name) const;
};

// CSV: one headerless numeric column (group "default"), or a header row with
// one group per column; blank cells are ignored, so columns may be ragged.
// JSON: object of name -> array of numbers, or a bare array ("default").
// Without a hint the format is sniffed from the first non-space character.
ScoreFile parse_scores(const std::string& text,
                       std::optional<ScoreFormat> hint = std::nullopt);

// Reads path ("-" for stdin) and parses; without a hint, a .json or .csv
// extension decides before falling back to sniffing.
ScoreFile load_scores(const std::string& path,
                      std::optional<ScoreFormat> hint = std::nullopt);

}  // namespace sigkit
