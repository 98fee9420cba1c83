#include "collapse/trace_io.hpp"

#include <ostream>

namespace collapse {

nlohmann::json trace_to_json(const TraceParams& params, const Epoch1Trace& epoch1, const Epoch2Trace& epoch2) {
  const ColexCodec codec(params.n, params.d + 1);
  nlohmann::json steps = nlohmann::json::array();
  for (const Epoch2Step& s : epoch2.steps) {
    steps.push_back({{"i", s.index},
                     {"mark", s.mark},
                     {"tau", codec.unrank(to_index(s.tau), params.d)},
                     {"sigma", codec.unrank(to_index(s.sigma), params.d + 1)},
                     {"Y", s.newly_free},
                     {"W", s.lost_isolated},
                     {"X", s.free_after}});
  }
  nlohmann::json e2 = {{"X0", epoch2.initial_free},
                       {"steps", std::move(steps)},
                       {"S", epoch2.new_free_histogram},
                       {"rounds", epoch2.rounds},
                       {"skipped_marked", epoch2.skipped_marked},
                       {"core_faces", epoch2.core_facets},
                       {"collapsible", epoch2.collapsible}};
  if (epoch2.first_affected_steps) e2["first_affected_steps"] = *epoch2.first_affected_steps;
  return {{"params", {{"n", params.n}, {"d", params.d}, {"r", params.phases}, {"seed", params.seed}}},
          {"epoch1",
           {{"B", epoch1.nonisolated},
            {"collapses", epoch1.collapses},
            {"L", epoch1.time_zero.nonisolated},
            {"X0", epoch1.time_zero.free},
            {"D", epoch1.time_zero.degree_counts}}},
          {"epoch2", std::move(e2)}};
}

void write_trace_csv(const Epoch2Trace& epoch2, std::ostream& out) {
  out << "i,mark,Y,W,X\n";
  for (const Epoch2Step& s : epoch2.steps) {
    out << s.index << ',' << s.mark << ',' << s.newly_free << ',' << s.lost_isolated << ',' << s.free_after
        << '\n';
  }
}

}  // namespace collapse
