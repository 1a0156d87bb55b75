#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "aoii/metrics.hpp"

namespace aoii {

struct GridAxis {
    double lo = 0;
    double hi = 0;
    int count = 1;
    bool log_spaced = true;

    std::vector<double> points() const;
};

// Policy grid to evaluate analytically, optionally under a sampling-rate
// budget. `axes` holds one axis per source state (mean thresholds for
// push, request rates for pull).
struct SweepSpec {
    enum class Model { Push, Pull };
    Model model = Model::Push;
    int erlang_k = 1; // push only
    std::vector<GridAxis> axes;
    std::optional<double> budget; // max average sampling rate
};

void validate(const SweepSpec &spec, int states);

struct SweepRow {
    std::vector<double> params; // one value per state
    double aoii = 0;
    double rate = 0;
    bool feasible = false;
    std::string error; // nonempty when this point failed to evaluate
};

struct SweepResult {
    std::vector<SweepRow> rows;           // deterministic grid order
    std::optional<std::size_t> argmin;    // best feasible row, if any
};

// Index of the best feasible row: minimum AoII, ties broken by smaller
// rate, then by lexicographic parameter order. Pure function of the rows.
std::optional<std::size_t> select_argmin(const std::vector<SweepRow> &rows,
                                         std::optional<double> budget);

// Evaluates analyze() at every grid point (last axis fastest). Degenerate
// points are kept in the result with their error message.
SweepResult sweep(const GeneratorMatrix &q, const SweepSpec &spec,
                  const ChannelModel &channel);

// Returns the argmin row of the sweep; throws NoFeasiblePolicy when no
// grid point evaluates successfully within the budget.
SweepRow optimize_under_budget(const GeneratorMatrix &q, const SweepSpec &spec,
                               const ChannelModel &channel);

// CSV emission (columns: model,param_1..param_N,aoii,rate,feasible,error).
void write_sweep_csv(std::ostream &out, const SweepResult &result,
                     SweepSpec::Model model, int states);

} // namespace aoii
