#pragma once

#include <iosfwd>
#include <limits>
#include <optional>
#include <string>
#include <vector>

#include "fracldg/manufactured.hpp"

namespace fracldg {

enum class SweepAxis { K, Dt, Theta };

/// One experiment: a manufactured case swept along exactly one axis.
struct RunSpec {
    CaseId case_id = CaseId::Ex1Diffusion;
    double beta = 1.2;
    int degree = 1;  // N
    SweepAxis axis = SweepAxis::K;
    std::vector<double> values;

    double T = 0.5;
    int num_cells = 20;  // K when not swept
    double dt = 1e-3;    // when not swept
    int num_nodes = 50;  // S = 1/theta when not swept

    std::string weight = "gamma3";
    ForcingMode forcing_mode = ForcingMode::DiscreteConsistent;
    FluxOrientation flux = FluxOrientation::Left;
    int field = 1;  // error column for the coupled case: u1 or u2
    std::string format = "csv";
    std::string out;
    int jobs = 1;
};

struct ErrorRow {
    double value = 0.0;
    double l2_error = 0.0;
    double order = std::numeric_limits<double>::quiet_NaN();
    double l2_error_u2 = 0.0;  // coupled case only
    double walltime_s = 0.0;
};

struct ErrorTable {
    RunSpec spec;
    std::vector<ErrorRow> rows;
    std::vector<std::string> failures;  // diagnostics of aborted rows
};

/// order_i = log(e_{i-1}/e_i) / log(res_i/res_{i-1}); first entry is NaN.
std::vector<double> estimate_order(const std::vector<double>& errors,
                                   const std::vector<double>& resolutions);

/// Final-time L2 errors of one solver run against the exact solution
/// (complex cases: root-sum-square of the component errors).
struct CaseRunResult {
    double err_u1 = 0.0;
    double err_u2 = 0.0;  // coupled case only
};
CaseRunResult run_manufactured(CaseId id, double beta, int num_cells, int degree, double T,
                               double dt, int num_nodes, const std::string& weight,
                               ForcingMode mode, FluxOrientation flux = FluxOrientation::Left);

/// Execute the sweep (rows run concurrently up to spec.jobs, aggregation in
/// spec order). Failed rows are dropped with a diagnostic kept in `failures`.
ErrorTable run_sweep(const RunSpec& spec);

void emit_csv(const ErrorTable& table, std::ostream& os);
void emit_markdown(const ErrorTable& table, std::ostream& os);
/// Writes spec.format to spec.out (or stdout when empty).
void emit_table(const ErrorTable& table);

/// Parse a CSV previously written by emit_csv (round-trip inverse).
ErrorTable parse_csv(std::istream& is);

/// Flat key=value config file; unknown keys are rejected.
RunSpec parse_config(std::istream& is);

std::string case_name(CaseId id);
std::optional<CaseId> case_from_name(const std::string& name);
std::string axis_name(SweepAxis axis);

}  // namespace fracldg
