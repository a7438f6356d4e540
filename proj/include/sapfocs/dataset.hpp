#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace sapfocs {

/// A part-attribute code matrix: one row of single-digit attribute codes per part.
struct PartCodeMatrix {
    std::vector<std::string> part_ids;         // unique, one per row
    std::vector<std::string> attribute_names;  // one per column
    std::vector<std::vector<int>> codes;       // m x K, every cell in [0, 9]

    int rows() const { return static_cast<int>(codes.size()); }
    int cols() const { return codes.empty() ? 0 : static_cast<int>(codes.front().size()); }

    bool operator==(const PartCodeMatrix&) const = default;
};

/// The five bundled benchmark datasets. They are nested prefixes of each other:
/// P1 (5x9) ⊂ P2 (10x9) ⊂ P3 (15x9) ⊂ P4 (20x9) ⊂ P5 (27x9).
enum class BuiltinId { P1, P2, P3, P4, P5 };

PartCodeMatrix builtin_dataset(BuiltinId id);

/// Parse "P1".."P5" (case-insensitive). Throws validation_error otherwise.
BuiltinId parse_builtin_id(std::string_view name);
std::string builtin_id_name(BuiltinId id);

struct ParseOptions {
    char delimiter = ',';
    // Tri-state switches; Auto sniffs the content.
    enum class Flag { Auto, Yes, No };
    Flag header = Flag::Auto;       // first row holds attribute names
    Flag part_column = Flag::Auto;  // first column holds part labels
};

/// Parse a delimited-text code matrix. Cells must be single integers in [0, 9];
/// violations are reported with their row/column position. Requires at least
/// two rows and one column after header/label handling.
PartCodeMatrix parse_matrix(std::string_view text, const ParseOptions& options = {});

/// Canonical CSV form: header "part,a1,...,aK" followed by one row per part.
/// parse_matrix(render_csv(m)) == m for every valid matrix.
std::string render_csv(const PartCodeMatrix& m);

/// JSON form: {"parts":[{"id":"p1","code":[...]}, ...], "attributes":[...]}.
std::string render_json(const PartCodeMatrix& m);

/// Validate invariants (cell range, rectangular shape, unique ids, m >= 2).
/// Throws validation_error describing the first violation.
void validate(const PartCodeMatrix& m);

} // namespace sapfocs
