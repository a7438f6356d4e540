#include "sapfocs/dataset.hpp"

#include <algorithm>
#include <array>
#include <cctype>
#include <sstream>
#include <unordered_set>

#include <nlohmann/json.hpp>

#include "sapfocs/errors.hpp"

namespace sapfocs {

namespace {

// Benchmark part codes. The five datasets are prefixes of one another; they are
// transcribed separately so the nesting can be asserted rather than assumed.
constexpr std::array<std::array<int, 9>, 5> kP1{{
    {0, 0, 1, 0, 0, 9, 1, 3, 6},
    {0, 0, 1, 0, 1, 2, 6, 5, 6},
    {0, 0, 2, 0, 0, 6, 2, 1, 7},
    {0, 0, 2, 3, 0, 4, 1, 6, 9},
    {0, 0, 3, 0, 0, 8, 0, 3, 5},
}};

constexpr std::array<std::array<int, 9>, 10> kP2{{
    {0, 0, 1, 0, 0, 9, 1, 3, 6},
    {0, 0, 1, 0, 1, 2, 6, 5, 6},
    {0, 0, 2, 0, 0, 6, 2, 1, 7},
    {0, 0, 2, 3, 0, 4, 1, 6, 9},
    {0, 0, 3, 0, 0, 8, 0, 3, 5},
    {0, 1, 1, 0, 0, 7, 7, 8, 9},
    {0, 1, 1, 0, 2, 4, 4, 8, 1},
    {0, 1, 2, 3, 0, 0, 9, 5, 9},
    {0, 2, 1, 0, 4, 8, 4, 4, 2},
    {0, 2, 1, 3, 0, 4, 4, 8, 2},
}};

constexpr std::array<std::array<int, 9>, 15> kP3{{
    {0, 0, 1, 0, 0, 9, 1, 3, 6},
    {0, 0, 1, 0, 1, 2, 6, 5, 6},
    {0, 0, 2, 0, 0, 6, 2, 1, 7},
    {0, 0, 2, 3, 0, 4, 1, 6, 9},
    {0, 0, 3, 0, 0, 8, 0, 3, 5},
    {0, 1, 1, 0, 0, 7, 7, 8, 9},
    {0, 1, 1, 0, 2, 4, 4, 8, 1},
    {0, 1, 2, 3, 0, 0, 9, 5, 9},
    {0, 2, 1, 0, 4, 8, 4, 4, 2},
    {0, 2, 1, 3, 0, 4, 4, 8, 2},
    {0, 2, 2, 0, 4, 6, 8, 8, 8},
    {0, 2, 3, 0, 4, 7, 5, 6, 7},
    {1, 0, 0, 0, 0, 9, 2, 8, 1},
    {1, 0, 1, 0, 0, 7, 6, 6, 0},
    {1, 1, 0, 0, 0, 1, 8, 3, 8},
}};

constexpr std::array<std::array<int, 9>, 20> kP4{{
    {0, 0, 1, 0, 0, 9, 1, 3, 6},
    {0, 0, 1, 0, 1, 2, 6, 5, 6},
    {0, 0, 2, 0, 0, 6, 2, 1, 7},
    {0, 0, 2, 3, 0, 4, 1, 6, 9},
    {0, 0, 3, 0, 0, 8, 0, 3, 5},
    {0, 1, 1, 0, 0, 7, 7, 8, 9},
    {0, 1, 1, 0, 2, 4, 4, 8, 1},
    {0, 1, 2, 3, 0, 0, 9, 5, 9},
    {0, 2, 1, 0, 4, 8, 4, 4, 2},
    {0, 2, 1, 3, 0, 4, 4, 8, 2},
    {0, 2, 2, 0, 4, 6, 8, 8, 8},
    {0, 2, 3, 0, 4, 7, 5, 6, 7},
    {1, 0, 0, 0, 0, 9, 2, 8, 1},
    {1, 0, 1, 0, 0, 7, 6, 6, 0},
    {1, 1, 0, 0, 0, 1, 8, 3, 8},
    {1, 1, 1, 0, 0, 4, 0, 2, 1},
    {1, 2, 0, 3, 0, 9, 6, 3, 2},
    {2, 0, 0, 0, 0, 9, 3, 5, 6},
    {2, 3, 0, 0, 0, 4, 8, 7, 2},
    {2, 5, 0, 0, 0, 8, 5, 3, 4},
}};

constexpr std::array<std::array<int, 9>, 27> kP5{{
    {0, 0, 1, 0, 0, 9, 1, 3, 6},
    {0, 0, 1, 0, 1, 2, 6, 5, 6},
    {0, 0, 2, 0, 0, 6, 2, 1, 7},
    {0, 0, 2, 3, 0, 4, 1, 6, 9},
    {0, 0, 3, 0, 0, 8, 0, 3, 5},
    {0, 1, 1, 0, 0, 7, 7, 8, 9},
    {0, 1, 1, 0, 2, 4, 4, 8, 1},
    {0, 1, 2, 3, 0, 0, 9, 5, 9},
    {0, 2, 1, 0, 4, 8, 4, 4, 2},
    {0, 2, 1, 3, 0, 4, 4, 8, 2},
    {0, 2, 2, 0, 4, 6, 8, 8, 8},
    {0, 2, 3, 0, 4, 7, 5, 6, 7},
    {1, 0, 0, 0, 0, 9, 2, 8, 1},
    {1, 0, 1, 0, 0, 7, 6, 6, 0},
    {1, 1, 0, 0, 0, 1, 8, 3, 8},
    {1, 1, 1, 0, 0, 4, 0, 2, 1},
    {1, 2, 0, 3, 0, 9, 6, 3, 2},
    {2, 0, 0, 0, 0, 9, 3, 5, 6},
    {2, 3, 0, 0, 0, 4, 8, 7, 2},
    {2, 5, 0, 0, 0, 8, 5, 3, 4},
    {7, 0, 0, 0, 3, 0, 7, 8, 0},
    {7, 0, 0, 3, 3, 3, 4, 5, 9},
    {7, 0, 0, 5, 3, 8, 3, 3, 5},
    {7, 0, 0, 6, 3, 0, 1, 7, 4},
    {2, 0, 8, 0, 1, 1, 1, 5, 5},
    {1, 5, 1, 0, 0, 2, 6, 4, 3},
    {6, 5, 4, 4, 3, 6, 0, 7, 0},
}};

template <std::size_t N>
PartCodeMatrix from_table(const std::array<std::array<int, 9>, N>& table) {
    PartCodeMatrix m;
    m.part_ids.reserve(N);
    m.codes.reserve(N);
    for (std::size_t i = 0; i < N; ++i) {
        m.part_ids.push_back("p" + std::to_string(i + 1));
        m.codes.emplace_back(table[i].begin(), table[i].end());
    }
    for (int k = 1; k <= 9; ++k) m.attribute_names.push_back("a" + std::to_string(k));
    return m;
}

std::vector<std::string> split_line(std::string_view line, char delim) {
    std::vector<std::string> cells;
    std::size_t start = 0;
    while (true) {
        std::size_t pos = line.find(delim, start);
        std::string cell(line.substr(start, pos == std::string_view::npos ? pos : pos - start));
        // trim surrounding whitespace
        auto notspace = [](unsigned char c) { return !std::isspace(c); };
        cell.erase(cell.begin(), std::find_if(cell.begin(), cell.end(), notspace));
        cell.erase(std::find_if(cell.rbegin(), cell.rend(), notspace).base(), cell.end());
        cells.push_back(std::move(cell));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    return cells;
}

// A cell is numeric-ish if it parses as an integer (possibly out of range).
bool looks_numeric(const std::string& cell) {
    if (cell.empty()) return false;
    std::size_t i = (cell[0] == '-' || cell[0] == '+') ? 1 : 0;
    if (i == cell.size()) return false;
    return std::all_of(cell.begin() + i, cell.end(),
                       [](unsigned char c) { return std::isdigit(c); });
}

int parse_digit_cell(const std::string& cell, std::size_t row, std::size_t col) {
    auto pos = "(" + std::to_string(row) + "," + std::to_string(col) + ")";
    if (cell.empty())
        throw validation_error("empty cell at " + pos);
    if (!looks_numeric(cell))
        throw validation_error("non-integer cell '" + cell + "' at " + pos);
    long v = std::stol(cell);
    if (v < 0 || v > 9)
        throw validation_error("digit out of range at " + pos + ": " + cell);
    return static_cast<int>(v);
}

} // namespace

PartCodeMatrix builtin_dataset(BuiltinId id) {
    switch (id) {
        case BuiltinId::P1: return from_table(kP1);
        case BuiltinId::P2: return from_table(kP2);
        case BuiltinId::P3: return from_table(kP3);
        case BuiltinId::P4: return from_table(kP4);
        case BuiltinId::P5: return from_table(kP5);
    }
    throw validation_error("unknown builtin dataset id");
}

BuiltinId parse_builtin_id(std::string_view name) {
    std::string up(name);
    std::transform(up.begin(), up.end(), up.begin(),
                   [](unsigned char c) { return std::toupper(c); });
    if (up == "P1") return BuiltinId::P1;
    if (up == "P2") return BuiltinId::P2;
    if (up == "P3") return BuiltinId::P3;
    if (up == "P4") return BuiltinId::P4;
    if (up == "P5") return BuiltinId::P5;
    throw validation_error("unknown builtin dataset '" + std::string(name) +
                           "' (expected P1..P5)");
}

std::string builtin_id_name(BuiltinId id) {
    switch (id) {
        case BuiltinId::P1: return "P1";
        case BuiltinId::P2: return "P2";
        case BuiltinId::P3: return "P3";
        case BuiltinId::P4: return "P4";
        case BuiltinId::P5: return "P5";
    }
    return "?";
}

void validate(const PartCodeMatrix& m) {
    if (m.rows() < 2)
        throw validation_error("matrix must have at least 2 parts, got " +
                               std::to_string(m.rows()));
    const std::size_t k = m.codes.front().size();
    if (k < 1) throw validation_error("matrix must have at least 1 attribute");
    if (m.part_ids.size() != m.codes.size())
        throw validation_error("part id count does not match row count");
    if (m.attribute_names.size() != k)
        throw validation_error("attribute name count does not match column count");
    for (std::size_t r = 0; r < m.codes.size(); ++r) {
        if (m.codes[r].size() != k)
            throw validation_error("ragged row " + std::to_string(r + 1) + ": expected " +
                                   std::to_string(k) + " cells, got " +
                                   std::to_string(m.codes[r].size()));
        for (std::size_t c = 0; c < k; ++c) {
            int v = m.codes[r][c];
            if (v < 0 || v > 9)
                throw validation_error("digit out of range at (" + std::to_string(r + 1) +
                                       "," + std::to_string(c + 1) + "): " +
                                       std::to_string(v));
        }
    }
    std::unordered_set<std::string> ids(m.part_ids.begin(), m.part_ids.end());
    if (ids.size() != m.part_ids.size()) {
        for (std::size_t r = 0; r < m.part_ids.size(); ++r)
            for (std::size_t q = r + 1; q < m.part_ids.size(); ++q)
                if (m.part_ids[r] == m.part_ids[q])
                    throw validation_error("duplicate part id '" + m.part_ids[r] +
                                           "' at rows " + std::to_string(r + 1) + " and " +
                                           std::to_string(q + 1));
    }
}

PartCodeMatrix parse_matrix(std::string_view text, const ParseOptions& options) {
    std::vector<std::vector<std::string>> grid;
    std::size_t start = 0;
    while (start <= text.size()) {
        std::size_t pos = text.find('\n', start);
        std::string_view line =
            text.substr(start, pos == std::string_view::npos ? pos : pos - start);
        if (!line.empty() && line.back() == '\r') line.remove_suffix(1);
        bool blank = line.find_first_not_of(" \t") == std::string_view::npos;
        if (!blank) grid.push_back(split_line(line, options.delimiter));
        if (pos == std::string_view::npos) break;
        start = pos + 1;
    }
    if (grid.empty()) throw validation_error("empty input");

    using Flag = ParseOptions::Flag;
    // Header sniff: a first row whose non-leading cells are not all digits.
    bool header;
    if (options.header == Flag::Auto) {
        const auto& first = grid.front();
        header = !std::all_of(first.begin() + (first.size() > 1 ? 1 : 0), first.end(),
                              [](const std::string& c) { return looks_numeric(c); });
    } else {
        header = options.header == Flag::Yes;
    }
    // Label sniff: a first column that is not numeric in the data rows.
    bool labels;
    std::size_t data_begin = header ? 1 : 0;
    if (data_begin >= grid.size()) throw validation_error("no data rows");
    if (options.part_column == Flag::Auto) {
        labels = std::any_of(grid.begin() + data_begin, grid.end(),
                             [](const std::vector<std::string>& row) {
                                 return !row.empty() && !looks_numeric(row.front());
                             });
    } else {
        labels = options.part_column == Flag::Yes;
    }

    PartCodeMatrix m;
    std::size_t first_data_cells = grid[data_begin].size();
    if (first_data_cells <= (labels ? 1u : 0u))
        throw validation_error("row 1 has no data cells");
    std::size_t k = first_data_cells - (labels ? 1 : 0);

    if (header) {
        const auto& h = grid.front();
        std::size_t off = h.size() == k + (labels ? 1 : 0) ? (labels ? 1 : 0) : 0;
        for (std::size_t c = off; c < h.size(); ++c) m.attribute_names.push_back(h[c]);
        if (m.attribute_names.size() != k)
            throw validation_error("header has " + std::to_string(m.attribute_names.size()) +
                                   " names for " + std::to_string(k) + " data columns");
    } else {
        for (std::size_t c = 1; c <= k; ++c)
            m.attribute_names.push_back("a" + std::to_string(c));
    }

    for (std::size_t r = data_begin; r < grid.size(); ++r) {
        const auto& row = grid[r];
        std::size_t rnum = r - data_begin + 1;
        if (row.size() != k + (labels ? 1 : 0))
            throw validation_error("ragged row " + std::to_string(rnum) + ": expected " +
                                   std::to_string(k + (labels ? 1 : 0)) + " cells, got " +
                                   std::to_string(row.size()));
        if (labels)
            m.part_ids.push_back(row.front());
        else
            m.part_ids.push_back("p" + std::to_string(rnum));
        std::vector<int> digits;
        digits.reserve(k);
        for (std::size_t c = 0; c < k; ++c)
            digits.push_back(parse_digit_cell(row[c + (labels ? 1 : 0)], rnum, c + 1));
        m.codes.push_back(std::move(digits));
    }

    validate(m);
    return m;
}

std::string render_csv(const PartCodeMatrix& m) {
    std::ostringstream out;
    out << "part";
    for (const auto& a : m.attribute_names) out << ',' << a;
    out << '\n';
    for (int r = 0; r < m.rows(); ++r) {
        out << m.part_ids[r];
        for (int v : m.codes[r]) out << ',' << v;
        out << '\n';
    }
    return out.str();
}

std::string render_json(const PartCodeMatrix& m) {
    nlohmann::json j;
    j["attributes"] = m.attribute_names;
    auto& parts = j["parts"] = nlohmann::json::array();
    for (int r = 0; r < m.rows(); ++r)
        parts.push_back({{"id", m.part_ids[r]}, {"code", m.codes[r]}});
    return j.dump(2) + "\n";
}

} // namespace sapfocs
