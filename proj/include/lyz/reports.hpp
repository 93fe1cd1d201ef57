#pragma once

#include <string>

#include "json.hpp"

#include "lyz/argument_calculus.hpp"
#include "lyz/cone_suite.hpp"
#include "lyz/continuity_driver.hpp"
#include "lyz/dhym_solver.hpp"
#include "lyz/hessian_suite.hpp"
#include "lyz/weak_solutions.hpp"

namespace lyz {

// Reports carry no timing so that reruns are byte-identical. Non-finite
// numbers serialize as null.
nlohmann::json to_json(const NamedCheck& c);
nlohmann::json to_json(const BracketFit& b);
nlohmann::json to_json(const CriticalResidual& r);
nlohmann::json to_json(const TraceRow& r);
nlohmann::json to_json(const ContinuityTrace& t);
nlohmann::json to_json(const SuiteReport& r);
nlohmann::json to_json(const WeakLabReport& r);
nlohmann::json to_json(const ConeSuiteReport& r);
nlohmann::json solve_summary(const SolverState& s);

// Summary of a finished path: phase table, bracket, critical residual, HMW maximum.
nlohmann::json path_summary(const HermitianField& chi, const ContinuityTrace& trace);

std::string dump_report(const nlohmann::json& j);

// One line per check for terminal display.
std::string render_report(const nlohmann::json& j);

}  // namespace lyz
