#pragma once

// Solver-internal LP relaxation of a placement model.
//
// Identical tasks (same cluster, demand, ratio and split limit) are pooled into
// a class; a single-allocation class then needs only an integer count of tasks
// per processing node. Devices whose usage sets coincide are merged into one
// fixed-charge group with a single activation column.
//
// Interchangeable processing nodes (the VNs of a cluster, the cloud servers)
// collapse into one slot whose group column counts how many members are on.
// Any solution of the pooled LP spreads back onto members evenly, so nothing
// is lost; pools that fail the interchangeability checks stay as single nodes.

#include <cstddef>
#include <vector>

#include "vecfog/dual_simplex.hpp"
#include "vecfog/milp_model.hpp"

namespace vecfog::detail {

struct TaskClass {
  std::vector<std::size_t> members;  // ascending task positions
  int cluster = 1;
  double omega = 0.0;
  double drr = 0.0;
  int split_limit = 1;

  bool counted() const { return split_limit == 1; }
  double demand() const { return omega * static_cast<double>(members.size()); }
};

struct Slot {
  std::vector<std::size_t> members;  // processing node positions, ascending
  int group = -1;                    // counting group of a pool
  int per_member = 0;                // whole tasks one member holds (counted pools)

  bool pooled() const { return members.size() > 1; }
};

struct Group {
  std::vector<DeviceId> devices;
  double cost = 0.0;         // watts once active, per member for pools
  std::vector<int> columns;  // allocation columns whose path touches the group
  int column = -1;           // activation column in the LP
  bool has_pn = false;
  double pn_capacity = 0.0;  // per member
  double count = 1.0;        // upper bound of the activation column
};

struct Relaxation {
  static constexpr double kScale = 1e-3;  // LP allocation unit: thousand MIPS

  LpProblem lp;
  std::vector<TaskClass> classes;
  std::vector<Slot> slot;
  std::size_t slots = 0;
  std::vector<Group> groups;
  std::vector<int> branch_order;  // groups, in branching priority
  double epsilon = 0.0;           // positive allocation floor, LP units

  int x(std::size_t c, std::size_t q) const { return static_cast<int>(c * slots + q); }
  std::size_t x_columns() const { return classes.size() * slots; }
};

// `aggregate` pools identical tasks and interchangeable nodes; without it
// every task is its own class and every node its own slot.
Relaxation build_relaxation(const MilpModel& model, bool aggregate);

}  // namespace vecfog::detail
