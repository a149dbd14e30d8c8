#pragma once

// CSV and JSON serialization. Floats use the shortest round-trip form.

#include <ostream>
#include <string>

#include <json.hpp>

#include "liouville/algebra.hpp"
#include "liouville/ode.hpp"
#include "liouville/shooting.hpp"
#include "liouville/verify.hpp"

namespace liouville::io {

using Json = nlohmann::ordered_json;

/// Shortest representation that parses back to the same double; "nan",
/// "inf", "-inf" for non-finite values.
std::string format_double(double x);

/// Columns t, r, v1, v2, rv1p, rv2p, f1, f2, psi0, psi1, psi2, r0q, r1q, hq.
void write_trajectory_csv(std::ostream& os, const ode::Trajectory& traj);

/// Columns alpha, beta1, beta2, err1, err2, residual, converged.
void write_sweep_csv(std::ostream& os, const shooting::SweepResult& result);

/// Columns beta1, beta2, solvable: the arc b2 = phi1^+(b1) on
/// [beta_under_1, beta_over_1].
void write_curve_csv(std::ostream& os, const SystemParams& params, int samples);

Json to_json(const FluxPair& flux);
Json to_json(const algebra::ConditionReport& report);
Json to_json(const algebra::SolvabilityReport& report);
Json to_json(const algebra::FluxBoundsReport& report);
Json to_json(const shooting::SweepResult& result);
Json to_json(const shooting::LimitsReport& report);
Json to_json(const verify::Normalization& norm);
Json to_json(const verify::InfinityReport& report);

/// Every ThresholdSet field keyed by symbol name (tau0_1, beta_over_2, ...).
Json thresholds_json(const SystemParams& params);

/// Only the couplings that depend on N alone.
Json coupling_thresholds_json(double bigN);

Json trajectory_summary_json(const ode::Trajectory& traj);

}  // namespace liouville::io
