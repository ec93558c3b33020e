#pragma once

#include <iosfwd>
#include <string>

#include "emvac/config.hpp"

namespace emvac {

inline constexpr const char* kVersion = "0.1.0";

// Each runner reads its parameters from cfg, writes one CSV table to out
// (a '#' metadata block, a header row, then %.17g data rows; no
// timestamps, so identical configs produce identical bytes), and returns
// a process exit code. Configuration and numerical failures propagate as
// the Error subclasses; the CLI maps them to exit codes.
int run_ldos(const RunConfig& cfg, std::ostream& out);
int run_emission(const RunConfig& cfg, std::ostream& out);
int run_renorm(const RunConfig& cfg, std::ostream& out);
int run_vacuum_energy(const RunConfig& cfg, std::ostream& out);

// Monte-Carlo cross-check of the analytic self-propagator; returns 4
// when the ensemble disagrees with the closed form beyond tolerance.
int run_cdm_validate(const RunConfig& cfg, std::ostream& out);

// Fast internal consistency sweep; prints one line per check.
int run_selftest(std::ostream& out);

// Shared [quadrature] section reader with library defaults.
QuadratureSpec quad_spec_from(const RunConfig& cfg);

}  // namespace emvac
