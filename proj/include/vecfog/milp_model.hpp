#pragma once

#include <memory>
#include <string>
#include <vector>

#include "vecfog/topology.hpp"
#include "vecfog/workload.hpp"

namespace vecfog {

enum class VarType { Continuous, Binary };

// X_sd (MIPS), delta_sd, delta_d, Psi_i.
enum class VarRole { Allocation, SplitOn, NodeOn, TrafficOn };

struct Variable {
  std::string name;
  VarType type = VarType::Continuous;
  VarRole role = VarRole::Allocation;
  double lower = 0.0;
  double upper = 0.0;
  double cost = 0.0;  // watts per unit
  int task = -1;      // position in MilpModel::tasks, or -1
  DeviceId device;
};

// Identity rows define a derived expression (flows, aggregated traffic); they
// hold for every assignment and are exported as comments or free rows.
enum class Sense { LessEqual, GreaterEqual, Equal, Identity };

struct Term {
  int var = 0;
  double coef = 0.0;
};

struct Constraint {
  std::string label;  // "C24", "C33", ...
  std::string name;
  Sense sense = Sense::LessEqual;
  std::vector<Term> terms;
  double rhs = 0.0;
};

struct MilpModel {
  std::shared_ptr<const Topology> topology;
  std::vector<Task> tasks;
  std::vector<DeviceId> pns;              // available processing nodes, id order
  std::vector<DeviceId> traffic_devices;  // network devices on some usable path
  std::vector<Variable> variables;
  std::vector<Constraint> constraints;
  double objective_constant = 0.0;

  // Lower bound of a positive allocation and of a positive device traffic.
  double epsilon_mips = 1.0;
  double epsilon_traffic = 0.0;

  int x(std::size_t s, std::size_t k) const { return static_cast<int>(s * pns.size() + k); }
  int split(std::size_t s, std::size_t k) const {
    return static_cast<int>((tasks.size() + s) * pns.size() + k);
  }
  int node(std::size_t k) const { return static_cast<int>(2 * tasks.size() * pns.size() + k); }
  int traffic(std::size_t j) const {
    return static_cast<int>((2 * tasks.size() + 1) * pns.size() + j);
  }

  // Objective of a full variable vector (watts).
  double objective(const std::vector<double>& values) const;
  std::size_t constraint_count(const std::string& label) const;
};

MilpModel build_model(const Topology& topology, const std::vector<Task>& tasks,
                      const AvailabilityMask& mask);

enum class ModelFormat { Lp, Mps };

// LP (CPLEX text) or fixed MPS. MPS names are mangled to 8 characters; the
// mangling table is appended as comment lines.
std::string export_model(const MilpModel& model, ModelFormat format);

// Flat matrix view of an exported document, enough to compare round trips.
struct ParsedModel {
  struct Row {
    std::string name;
    Sense sense = Sense::LessEqual;
    std::vector<std::pair<std::string, double>> terms;  // sorted by name
    double rhs = 0.0;
  };
  std::vector<std::pair<std::string, double>> objective;  // sorted by name
  std::vector<Row> rows;                                  // constraint rows, file order
  std::vector<std::string> binaries;                      // sorted
  std::vector<std::tuple<std::string, double, double>> bounds;  // sorted by name
};

ParsedModel read_lp(const std::string& text);
ParsedModel read_mps(const std::string& text);
// Canonical parsed form of a model without going through text.
ParsedModel to_parsed(const MilpModel& model);

}  // namespace vecfog
