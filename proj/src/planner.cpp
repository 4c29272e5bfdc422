#include "tunnel/planner.hpp"

#include "tunnel/error.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <queue>

namespace tunnel {

PlanGrid::PlanGrid(int rows, int cols) : rows_(rows), cols_(cols) {
    if (rows < 1 || cols < 1) throw UsageError("PlanGrid: dimensions must be positive");
    blocked_.assign(static_cast<std::size_t>(rows) * static_cast<std::size_t>(cols), 0);
}

std::size_t PlanGrid::blocked_count() const {
    return static_cast<std::size_t>(std::count(blocked_.begin(), blocked_.end(), std::uint8_t{1}));
}

std::string to_string(PlanStatus s) {
    switch (s) {
        case PlanStatus::Found: return "found";
        case PlanStatus::StartBlocked: return "start_blocked";
        case PlanStatus::GoalBlocked: return "goal_blocked";
        case PlanStatus::Unreachable: return "unreachable";
    }
    return "?";
}

double PlanResult::cost() const { return orthogonal_steps + diagonal_steps * std::sqrt(2.0); }

bool can_step(const PlanGrid& grid, Cell from, Cell to) {
    if (!grid.in_bounds(to) || grid.blocked(to)) return false;
    if (from.row != to.row && from.col != to.col) {
        if (grid.blocked({from.row, to.col}) || grid.blocked({to.row, from.col})) return false;
    }
    return true;
}

namespace {

constexpr int kMoves[8][2] = {{-1, -1}, {-1, 0}, {-1, 1}, {0, -1}, {0, 1}, {1, -1}, {1, 0}, {1, 1}};

struct Entry {
    double f;
    std::size_t index;
    bool operator>(const Entry& o) const { return f > o.f || (f == o.f && index > o.index); }
};

}  // namespace

PlanResult astar_plan(const PlanGrid& grid, Cell start, Cell goal) {
    if (!grid.in_bounds(start) || !grid.in_bounds(goal)) throw UsageError("astar_plan: cell outside the grid");
    PlanResult out;
    if (grid.blocked(start)) {
        out.status = PlanStatus::StartBlocked;
        return out;
    }
    if (grid.blocked(goal)) {
        out.status = PlanStatus::GoalBlocked;
        return out;
    }

    const std::size_t n = static_cast<std::size_t>(grid.rows()) * grid.cols();
    const double inf = std::numeric_limits<double>::infinity();
    std::vector<double> g(n, inf);
    std::vector<std::size_t> parent(n, n);
    std::vector<std::uint8_t> closed(n, 0);
    auto h = [&](Cell c) { return std::hypot(c.row - goal.row, c.col - goal.col); };

    std::priority_queue<Entry, std::vector<Entry>, std::greater<>> open;
    const std::size_t s = grid.index(start), t = grid.index(goal);
    g[s] = 0.0;
    open.push({h(start), s});
    while (!open.empty()) {
        const auto [f, u] = open.top();
        open.pop();
        if (closed[u]) continue;
        closed[u] = 1;
        ++out.expanded;
        if (u == t) break;
        const Cell cu = grid.cell(u);
        for (const auto& m : kMoves) {
            const Cell cv{cu.row + m[0], cu.col + m[1]};
            if (!can_step(grid, cu, cv)) continue;
            const std::size_t v = grid.index(cv);
            if (closed[v]) continue;
            const double step = (m[0] != 0 && m[1] != 0) ? std::sqrt(2.0) : 1.0;
            if (g[u] + step < g[v]) {
                g[v] = g[u] + step;
                parent[v] = u;
                open.push({g[v] + h(cv), v});
            }
        }
    }
    if (!closed[t]) return out;

    out.status = PlanStatus::Found;
    for (std::size_t v = t; v != n; v = parent[v]) out.cells.push_back(grid.cell(v));
    std::reverse(out.cells.begin(), out.cells.end());
    for (std::size_t k = 1; k < out.cells.size(); ++k) {
        const bool diagonal = out.cells[k].row != out.cells[k - 1].row && out.cells[k].col != out.cells[k - 1].col;
        (diagonal ? out.diagonal_steps : out.orthogonal_steps) += 1;
    }
    return out;
}

}  // namespace tunnel
