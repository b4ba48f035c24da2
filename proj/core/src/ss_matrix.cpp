#include "heterosag/ss_matrix.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace heterosag {

namespace {

void place_pair(SSMatrix& m, int row, int c1, int c2, int label) {
  for (int c : {c1, c2}) {
    Cell& cell = m.cells[row][c];
    if (cell.has_value() && *cell != label) {
      throw std::logic_error("SS matrix construction collided at (" +
                             std::to_string(row) + "," + std::to_string(c) + ")");
    }
    cell = label;
  }
}

}  // namespace

std::string SSMatrix::cell_text(int row, int col) const {
  const Cell& c = cells[row][col];
  if (!c.has_value()) return "*";
  if (!hetero_labels) return std::to_string(column_group[*c]);
  return "(" + std::to_string(column_group[*c]) + "," +
         std::to_string(column_subgroup[*c]) + ")";
}

std::string SSMatrix::to_text() const {
  std::ostringstream out;
  std::size_t width = 1;
  for (int l = 0; l < size; ++l)
    for (int c = 0; c < size; ++c) width = std::max(width, cell_text(l, c).size());
  for (int l = 0; l < size; ++l) {
    for (int c = 0; c < size; ++c) {
      std::string t = cell_text(l, c);
      out << std::string(width - t.size(), ' ') << t << (c + 1 == size ? "" : " ");
    }
    out << '\n';
  }
  return out.str();
}

std::string SSMatrix::to_csv() const {
  std::ostringstream out;
  out << "level";
  for (int c = 0; c < size; ++c) {
    out << ",";
    if (hetero_labels)
      out << column_group[c] << ":" << column_subgroup[c];
    else
      out << column_group[c];
  }
  out << '\n';
  for (int l = 0; l < size; ++l) {
    out << l;
    for (int c = 0; c < size; ++c) {
      const Cell& cell = cells[l][c];
      out << ",";
      if (!cell.has_value())
        out << "*";
      else if (hetero_labels)
        out << column_group[*cell] << ":" << column_subgroup[*cell];
      else
        out << column_group[*cell];
    }
    out << '\n';
  }
  return out.str();
}

SSMatrix build_ss_matrix(int groups) {
  if (groups < 2) throw std::invalid_argument("build_ss_matrix: need G >= 2");
  SSMatrix m;
  m.size = groups;
  m.hetero_labels = false;
  m.column_group.resize(groups);
  std::iota(m.column_group.begin(), m.column_group.end(), 0);
  m.column_subgroup.assign(groups, 0);
  m.cells.assign(groups, std::vector<Cell>(groups, kStar));
  for (int g = 0; g <= groups - 2; ++g) {
    for (int r = 0; r <= groups - g - 2; ++r) {
      const int l = 2 * g + r;
      place_pair(m, l % groups, g, g + r + 1, g);
    }
  }
  return m;
}

SSMatrix build_ss_matrix_hetero(const std::vector<int>& subgroup_counts) {
  if (subgroup_counts.empty()) {
    throw std::invalid_argument("build_ss_matrix_hetero: empty subgroup list");
  }
  for (int lg : subgroup_counts) {
    if (lg < 1) throw std::invalid_argument("build_ss_matrix_hetero: L_g >= 1");
  }
  const int G = static_cast<int>(subgroup_counts.size());
  const int Z = std::accumulate(subgroup_counts.begin(), subgroup_counts.end(), 0);
  if (Z < 2) throw std::invalid_argument("build_ss_matrix_hetero: need Z >= 2");

  std::vector<int> prefix(G + 1, 0);  // Z_{g-1}
  for (int g = 0; g < G; ++g) prefix[g + 1] = prefix[g] + subgroup_counts[g];

  SSMatrix m;
  m.size = Z;
  m.hetero_labels = true;
  m.column_group.resize(Z);
  m.column_subgroup.resize(Z);
  for (int g = 0; g < G; ++g) {
    for (int d = 0; d < subgroup_counts[g]; ++d) {
      m.column_group[prefix[g] + d] = g;
      m.column_subgroup[prefix[g] + d] = d;
    }
  }
  m.cells.assign(Z, std::vector<Cell>(Z, kStar));

  for (int g = 0; g < G; ++g) {
    const int dmax = subgroup_counts[g] - 1 - (g == G - 1 ? 1 : 0);
    for (int d = 0; d <= dmax; ++d) {
      int i = 0;
      int s = d;  // pair cursor starts at the column's own subgroup
      for (int r = 0; r <= Z - prefix[g] - d - 2; ++r) {
        const int row = (2 * (prefix[g] + d) + r) % Z;
        int span = 0;
        for (int l = 0; l <= i; ++l) span += subgroup_counts[g + l];
        if ((d + r + 1) % span == 0) {
          i += 1;
          s = 0;
        } else {
          s += 1;
        }
        place_pair(m, row, prefix[g] + d, prefix[g + i] + s, prefix[g] + d);
      }
    }
  }
  return m;
}

CoalitionPlan coalition_plan(const SSMatrix& matrix) {
  CoalitionPlan plan;
  plan.levels = matrix.size;
  plan.at_level.resize(matrix.size);
  plan.coalition_of_column.assign(matrix.size,
                                  std::vector<int>(matrix.size, -1));
  for (int l = 0; l < matrix.size; ++l) {
    std::map<int, std::vector<int>> by_label;
    for (int c = 0; c < matrix.size; ++c) {
      const Cell& cell = matrix.cells[l][c];
      if (cell.has_value())
        by_label[*cell].push_back(c);
      else
        by_label[-1 - c].push_back(c);  // each star is its own coalition
    }
    for (auto& [label, cols] : by_label) {
      Coalition co;
      co.columns = cols;
      co.quantizer_group = matrix.column_group[cols.front()];
      for (int c : cols) {
        co.quantizer_group = std::min(co.quantizer_group, matrix.column_group[c]);
      }
      const int idx = static_cast<int>(plan.at_level[l].size());
      for (int c : cols) plan.coalition_of_column[l][c] = idx;
      plan.at_level[l].push_back(std::move(co));
    }
  }
  return plan;
}

namespace {

std::string coords(int row, int col) {
  return "(" + std::to_string(row) + "," + std::to_string(col) + ")";
}

}  // namespace

PropertyReport verify_properties(const SSMatrix& matrix) {
  PropertyReport rep;
  const int Z = matrix.size;

  // Pairing: every label names its own column and appears exactly twice.
  for (int l = 0; l < Z; ++l) {
    std::map<int, std::vector<int>> by_label;
    for (int c = 0; c < Z; ++c) {
      if (matrix.cells[l][c].has_value()) by_label[*matrix.cells[l][c]].push_back(c);
    }
    for (const auto& [label, cols] : by_label) {
      if (cols.size() != 2 || cols.front() != label) {
        rep.pairing = false;
        rep.violations.push_back("pairing: label " + std::to_string(label) +
                                 " occurs " + std::to_string(cols.size()) +
                                 " time(s) in row " + std::to_string(l));
      }
    }
  }

  // Property 1: exactly one star per column.
  for (int c = 0; c < Z; ++c) {
    int stars = 0;
    for (int l = 0; l < Z; ++l) stars += !matrix.cells[l][c].has_value();
    if (stars != 1) {
      rep.p1 = false;
      rep.violations.push_back("P1: column " + std::to_string(c) + " has " +
                               std::to_string(stars) + " stars");
    }
  }

  // Property 2: any two columns carry an equal label in at most one row.
  for (int c1 = 0; c1 < Z; ++c1) {
    for (int c2 = c1 + 1; c2 < Z; ++c2) {
      int shared = 0, last_row = -1;
      for (int l = 0; l < Z; ++l) {
        const Cell& a = matrix.cells[l][c1];
        const Cell& b = matrix.cells[l][c2];
        if (a.has_value() && b.has_value() && *a == *b) {
          ++shared;
          last_row = l;
        }
      }
      if (shared > 1) {
        rep.p2 = false;
        rep.violations.push_back("P2: columns " + std::to_string(c1) + "," +
                                 std::to_string(c2) + " pair in " +
                                 std::to_string(shared) + " rows, e.g. row " +
                                 std::to_string(last_row));
      }
    }
  }

  // Property 3: star placement.
  for (int l = 0; l < Z; ++l) {
    std::vector<int> stars;
    for (int c = 0; c < Z; ++c) {
      if (!matrix.cells[l][c].has_value()) stars.push_back(c);
    }
    bool ok;
    if (Z % 2 == 1) {
      ok = stars.size() == 1;
    } else if (l % 2 == 0) {
      ok = stars.empty();
    } else {
      ok = stars.size() == 2 && stars[1] - stars[0] == Z / 2;
    }
    if (!ok) {
      rep.p3 = false;
      rep.violations.push_back("P3: row " + std::to_string(l) + " has " +
                               std::to_string(stars.size()) + " star(s)" +
                               (stars.size() == 2
                                    ? " at columns " + std::to_string(stars[0]) +
                                          "," + std::to_string(stars[1])
                                    : ""));
    }
  }

  // Property 4, operational form (the claim Theorem 1's Case 3 relies on):
  // for every even-size column subset S with |S| = 2n, n >= 2 and
  // |S| <= Z - i (i = 2 for even Z, 1 for odd), at most one row consists,
  // restricted to S, purely of label pairs inside S.
  if (Z <= 20) {
    const int i0 = (Z % 2 == 0) ? 2 : 1;
    std::vector<std::uint32_t> pair_masks_done;
    for (std::uint32_t S = 1; S < (1u << Z); ++S) {
      const int sz = __builtin_popcount(S);
      if (sz < 4 || sz % 2 != 0 || sz > Z - i0) continue;
      int fully_paired = 0, example = -1;
      for (int l = 0; l < Z; ++l) {
        bool pure = true;
        for (int c = 0; c < Z && pure; ++c) {
          if (!(S >> c & 1)) continue;
          const Cell& cell = matrix.cells[l][c];
          if (!cell.has_value()) {
            pure = false;
            break;
          }
          // partner of c in this row
          int partner = -1;
          for (int c2 = 0; c2 < Z; ++c2) {
            if (c2 != c && matrix.cells[l][c2] == cell) partner = c2;
          }
          if (partner < 0 || !(S >> partner & 1)) pure = false;
        }
        if (pure) {
          ++fully_paired;
          if (example < 0) example = l;
        }
      }
      if (fully_paired > 1) {
        rep.p4 = false;
        std::string cols;
        for (int c = 0; c < Z; ++c)
          if (S >> c & 1) cols += (cols.empty() ? "" : ",") + std::to_string(c);
        rep.violations.push_back("P4: columns {" + cols + "} fully pair in " +
                                 std::to_string(fully_paired) +
                                 " rows, first at row " + std::to_string(example));
      }
    }
  }
  return rep;
}

}  // namespace heterosag
