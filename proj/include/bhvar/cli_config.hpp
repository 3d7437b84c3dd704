// cli_config.hpp — strict JSON config parsing and the batch runners behind
// the CLI subcommands. One config document per run, no prompts; CSV for time
// series, JSON for structured reports.

#pragma once

#include "bhvar/identity_suite.hpp"
#include "bhvar/integrator.hpp"
#include "bhvar/mf_dynamics.hpp"
#include "bhvar/serialize.hpp"

#include <optional>
#include <string>

namespace bhvar {

enum class Scheme { Gutzwiller, Dnls, Sum, Exact };

struct RunConfig {
    BHParams model;
    Scheme scheme{Scheme::Dnls};

    // Exactly one of these is set, matching the scheme.
    std::optional<GlauberState> initial_coherent;   // dnls
    std::optional<SuMState> initial_sum;            // sum, exact
    std::optional<GutzwillerState> initial_table;   // gutzwiller

    int n_max{30};  // gutzwiller truncation
    IntegratorConfig integrator;

    std::string csv_path{"trajectory.csv"};
    std::string summary_path{"summary.json"};
    std::optional<std::string> snapshots_path;

    int dim_cap{kDefaultDimCap};
};

// BHVAR_DIM_CAP env override of the sector dimension cap.
int dim_cap_from_env();

// Strict parse: unknown keys are rejected, defaults filled, scheme/state
// compatibility and the exact-scheme capacity bound checked up front.
// Errors carry the offending key path.
RunConfig parse_config(const json& doc, int dim_cap = dim_cap_from_env());
RunConfig load_config(const std::string& path, int dim_cap = dim_cap_from_env());

struct EvolveSummary {
    json summary;
    bool ok{true};
};

// Writes the trajectory CSV (time, energy, N_bar, site_1..site_M), the
// summary JSON and optional JSON-lines snapshots. Deterministic for a fixed
// config.
EvolveSummary run_evolution(const RunConfig& config);

// Sector-weight report of a Glauber state along a direction.
json run_weights(const json& doc, int dim_cap = dim_cap_from_env());

// Site<->momentum duality report for a coherent or number-preserving state.
json run_dual(const json& doc, int dim_cap = dim_cap_from_env());

// Localized-family / superposition report: Gram residual, orthonormality,
// per-site densities, per-class momentum weights.
json run_cat(const json& doc, int dim_cap = dim_cap_from_env());

json report_to_json(const std::vector<CheckResult>& results);

// 17-significant-digit CSV float format shared by all writers.
std::string format_csv_double(double value);

}  // namespace bhvar
