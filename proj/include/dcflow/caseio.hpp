#pragma once

#include "dcflow/conditions.hpp"
#include "dcflow/harness.hpp"
#include "dcflow/network.hpp"
#include "dcflow/solve.hpp"
#include "dcflow/zbus.hpp"

#include <nlohmann/json_fwd.hpp>

#include <iosfwd>
#include <string>

namespace dcflow {

/// Case schema:
///   { "buses": [{"id":0,"type":"V","v":1.0},
///               {"id":1,"type":"P","i0":1.0,"p0":-1.0,"g0":1.0}],
///     "lines": [{"from":0,"to":1,"g":10.0}],
///     "band":  {"v_min":0.9,"v_max":1.1},
///     "q": 2 }
/// Band voltages are squared internally; band and q are optional and default
/// to 0.9-1.1 and 2. Malformed input raises ParseError; the result is parsed
/// only, call validate()/derive() afterwards.
Network parse_case(const nlohmann::json& j);
Network parse_case_text(const std::string& text);
Network load_case(const std::string& path);

nlohmann::json case_to_json(const Network& net);

nlohmann::json report_to_json(const ConditionReport& report);

/// Includes voltages at full round-trip precision so the residual can be
/// recomputed from the emitted document.
nlohmann::json result_to_json(const SolveResult& result, const std::string& method);
nlohmann::json diagnostics_to_json(const ZbusDiagnostics& diag);

nlohmann::json mc_summary_to_json(const McSummary& summary);

/// Fixed-point solvers: "iter,inf_norm_diff" rows; energy solver:
/// "iter,energy,grad_inf" rows.
void write_trace_csv(std::ostream& os, const SolveResult& result);

} // namespace dcflow
