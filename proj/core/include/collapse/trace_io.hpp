#pragma once

#include <cstdint>
#include <iosfwd>

#include <nlohmann/json.hpp>

#include "collapse/engine.hpp"

namespace collapse {

struct TraceParams {
  std::uint32_t n = 0;
  std::uint32_t d = 0;
  std::uint32_t phases = 0;
  std::uint64_t seed = 0;
};

/// {params, epoch1: {B, L, X0, D, ...}, epoch2: {steps: [{i, mark, tau, sigma, Y, W, X}], S, core_faces, collapsible}}
/// with tau and sigma written as vertex lists.
nlohmann::json trace_to_json(const TraceParams& params, const Epoch1Trace& epoch1, const Epoch2Trace& epoch2);

/// One row per epoch-2 step: i,mark,Y,W,X.
void write_trace_csv(const Epoch2Trace& epoch2, std::ostream& out);

}  // namespace collapse
