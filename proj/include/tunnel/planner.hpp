// 8-connected grid planning with A*.
#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace tunnel {

struct Cell {
    int row = 0;
    int col = 0;
    bool operator==(const Cell&) const = default;
};

/// Row-major occupancy grid; cell index = row * cols + col.
class PlanGrid {
public:
    PlanGrid(int rows, int cols);

    int rows() const { return rows_; }
    int cols() const { return cols_; }
    bool in_bounds(Cell c) const { return c.row >= 0 && c.row < rows_ && c.col >= 0 && c.col < cols_; }
    std::size_t index(Cell c) const { return static_cast<std::size_t>(c.row) * cols_ + c.col; }
    Cell cell(std::size_t index) const { return {static_cast<int>(index / cols_), static_cast<int>(index % cols_)}; }
    bool blocked(Cell c) const { return blocked_[index(c)] != 0; }
    void set_blocked(Cell c, bool value = true) { blocked_[index(c)] = value ? 1 : 0; }
    std::size_t blocked_count() const;

private:
    int rows_;
    int cols_;
    std::vector<std::uint8_t> blocked_;
};

enum class PlanStatus { Found, StartBlocked, GoalBlocked, Unreachable };
std::string to_string(PlanStatus status);

/// Step cost is 1 orthogonally and sqrt(2) diagonally; the total is kept as
/// exact step counts so equal-cost paths compare equal.
struct PlanResult {
    PlanStatus status = PlanStatus::Unreachable;
    std::vector<Cell> cells;  // start .. goal inclusive
    int orthogonal_steps = 0;
    int diagonal_steps = 0;
    std::size_t expanded = 0;

    bool found() const { return status == PlanStatus::Found; }
    double cost() const;
};

/// Diagonal moves may not cut a blocked corner: both orthogonal neighbours
/// of a diagonal step must be free.
bool can_step(const PlanGrid& grid, Cell from, Cell to);

/// A* with the Euclidean heuristic. Among equal f the lower cell index is
/// expanded first, which makes the returned path deterministic. Throws
/// UsageError for out-of-range cells.
PlanResult astar_plan(const PlanGrid& grid, Cell start, Cell goal);

}  // namespace tunnel
