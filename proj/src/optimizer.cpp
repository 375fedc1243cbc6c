#include "fogsched/optimizer.hpp"

#include <iomanip>

namespace fogsched {

void write_trace_csv(std::ostream& out, const std::string& algorithm, const std::vector<TracePoint>& trace) {
  out << "algorithm,iteration,best_fitness\n" << std::setprecision(17);
  for (const auto& p : trace) out << algorithm << ',' << p.iteration << ',' << p.best_fitness << '\n';
}

}  // namespace fogsched
