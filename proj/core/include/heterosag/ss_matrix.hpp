#pragma once

#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace heterosag {

/// One cell of the segment selection matrix: either Star (the column's group
/// runs secure aggregation alone on that segment) or the label of the
/// coalition, identified by its lowest member column. The star is
/// deliberately not a number; it never participates in pair matching.
using Cell = std::optional<int>;

inline constexpr Cell kStar = std::nullopt;

/// Z x Z segment selection matrix. Rows are segment levels, columns are
/// groups (uniform layout) or (group, subgroup) pairs (hetero layout).
struct SSMatrix {
  int size = 0;                              // Z
  bool hetero_labels = false;                // print (g,d) instead of g
  std::vector<int> column_group;             // column -> g
  std::vector<int> column_subgroup;          // column -> d
  std::vector<std::vector<Cell>> cells;      // [row][column]

  std::pair<int, int> column_id(int c) const {
    return {column_group[c], column_subgroup[c]};
  }
  std::string cell_text(int row, int col) const;
  std::string to_text() const;               // paper layout, '*' literal
  std::string to_csv() const;
};

/// Algorithm 1: the G x G matrix for uniform groups.
SSMatrix build_ss_matrix(int groups);

/// Algorithm 2: the Z x Z matrix for subgroup counts L_0..L_{G-1}.
/// The inner pair cursor starts at the column's own subgroup index; starting
/// at zero, as the listing literally reads, self-pairs (g, d>=1) in the last
/// group and collides for L_g >= 3.
SSMatrix build_ss_matrix_hetero(const std::vector<int>& subgroup_counts);

/// The coalition of columns jointly encoding one (level, cell) set, tagged
/// with the quantizer it uses (the lowest member group).
struct Coalition {
  std::vector<int> columns;
  int quantizer_group = 0;
};

struct CoalitionPlan {
  int levels = 0;
  std::vector<std::vector<Coalition>> at_level;       // [level][k]
  std::vector<std::vector<int>> coalition_of_column;  // [level][column] -> k
};

CoalitionPlan coalition_plan(const SSMatrix& matrix);

/// Appendix-B property check. p4 is the operational form the robustness
/// argument actually uses: for every even-size column subset S in the
/// quantified range, at most one row is fully paired inside S.
struct PropertyReport {
  bool pairing = true;  // every label appears exactly twice in its row
  bool p1 = true;       // exactly one star per column
  bool p2 = true;       // two columns share a paired label in <= 1 row
  bool p3 = true;       // star placement (odd: one per row; even: odd-row pairs)
  bool p4 = true;
  std::vector<std::string> violations;

  bool all() const { return pairing && p1 && p2 && p3 && p4; }
};

PropertyReport verify_properties(const SSMatrix& matrix);

}  // namespace heterosag
