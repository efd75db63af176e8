#include <algorithm>
#include <cmath>
#include <limits>

#include "vecfog/errors.hpp"
#include "vecfog/solver.hpp"

namespace vecfog {

double ResidualReport::max_residual() const {
  double worst = integrality;
  for (const auto& [label, v] : max_violation) worst = std::max(worst, v);
  return worst;
}

ResidualReport verify(const Solution& solution, const MilpModel& model) {
  ResidualReport rep;
  if (solution.values.size() != model.variables.size()) return rep;
  const auto& v = solution.values;

  for (std::size_t j = 0; j < model.variables.size(); ++j) {
    const Variable& var = model.variables[j];
    double out = 0.0;
    if (v[j] < var.lower) out = var.lower - v[j];
    if (v[j] > var.upper) out = v[j] - var.upper;
    rep.max_violation["bounds"] = std::max(rep.max_violation["bounds"], out);
    if (var.type == VarType::Binary) {
      rep.integrality = std::max(rep.integrality, std::fabs(v[j] - std::round(v[j])));
    }
  }
  for (const Constraint& c : model.constraints) {
    double act = 0.0;
    for (const Term& t : c.terms) act += t.coef * v[static_cast<std::size_t>(t.var)];
    double viol = 0.0;
    switch (c.sense) {
      case Sense::LessEqual:
        viol = std::max(0.0, act - c.rhs);
        break;
      case Sense::GreaterEqual:
        viol = std::max(0.0, c.rhs - act);
        break;
      case Sense::Equal:
        viol = std::fabs(act - c.rhs);
        break;
      case Sense::Identity:
        break;
    }
    double& slot = rep.max_violation[c.label];
    slot = std::max(slot, viol);
  }

  std::vector<std::vector<double>> alloc(model.tasks.size(),
                                         std::vector<double>(model.pns.size(), 0.0));
  for (std::size_t s = 0; s < model.tasks.size(); ++s) {
    for (std::size_t k = 0; k < model.pns.size(); ++k) {
      alloc[s][k] = std::max(0.0, v[static_cast<std::size_t>(model.x(s, k))]);
    }
  }
  try {
    const double recomputed =
        total_power(*model.topology,
                    assignment_from_allocation(*model.topology, model.tasks, model.pns, alloc))
            .total;
    const double objective = model.objective(v);
    rep.objective_delta = std::fabs(objective - recomputed) / std::max(1.0, std::fabs(recomputed));
  } catch (const CapacityExceeded&) {
    // Overloaded devices have no defined power; the capacity rows already say why.
    rep.objective_delta = std::numeric_limits<double>::quiet_NaN();
  }
  return rep;
}

}  // namespace vecfog
