#pragma once

#include "dyadic/bmo.hpp"
#include "dyadic/kernel.hpp"
#include "dyadic/lattice.hpp"
#include "dyadic/lusin.hpp"
#include "dyadic/seqspace.hpp"
#include "dyadic/square_function.hpp"

#include <json.hpp>

#include <iosfwd>
#include <string>
#include <vector>

namespace dyadic {

enum ExitCode : int { kExitOk = 0, kExitInternal = 1, kExitUsage = 2, kExitData = 3, kExitInfeasible = 4 };

/// Runs one subcommand; `args` excludes the program name. Returns the exit code.
int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err);

nlohmann::json lattice_to_json(const DyadicLattice1D& L);
nlohmann::json bmo_report_to_json(const BmoReport& r);
nlohmann::json slope_fit_to_json(const SlopeFit& fit);
nlohmann::json sequence_to_json(const DyadicSequence& s);
nlohmann::json quadrature_to_json(const ConeQuadrature& q);
nlohmann::json h1_report_to_json(const H1Report& r);

} // namespace dyadic
