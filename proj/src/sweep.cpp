#include "aoii/sweep.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <sstream>

#include "aoii/errors.hpp"
#include "aoii/format.hpp"

namespace aoii {

std::vector<double> GridAxis::points() const {
    std::vector<double> out;
    out.reserve(count);
    if (count == 1) {
        out.push_back(lo);
        return out;
    }
    for (int i = 0; i < count; ++i) {
        const double f = double(i) / double(count - 1);
        out.push_back(log_spaced ? lo * std::pow(hi / lo, f)
                                 : lo + (hi - lo) * f);
    }
    return out;
}

void validate(const SweepSpec &spec, int states) {
    std::vector<Violation> violations;
    auto fail = [&](const std::string &d) {
        violations.push_back({ViolationCode::InvalidParameter, -1, -1, d});
    };
    if (static_cast<int>(spec.axes.size()) != states) {
        std::ostringstream os;
        os << "expected " << states << " grid axes (one per state), got "
           << spec.axes.size();
        fail(os.str());
    }
    for (std::size_t i = 0; i < spec.axes.size(); ++i) {
        const GridAxis &ax = spec.axes[i];
        std::ostringstream os;
        os << "axis " << i << ": ";
        if (ax.count < 1)
            fail(os.str() + "point count must be >= 1");
        if (!(ax.lo > 0) || !std::isfinite(ax.lo))
            fail(os.str() + "lower bound must be strictly positive");
        if (ax.count > 1 && (!(ax.hi >= ax.lo) || !std::isfinite(ax.hi)))
            fail(os.str() + "upper bound must be finite and >= lower bound");
    }
    if (spec.model == SweepSpec::Model::Push && spec.erlang_k < 1)
        fail("erlang order must be >= 1");
    if (spec.budget && !(*spec.budget > 0))
        fail("budget must be strictly positive when present");
    if (!violations.empty())
        throw ValidationError(std::move(violations));
}

std::optional<std::size_t> select_argmin(const std::vector<SweepRow> &rows,
                                         std::optional<double> budget) {
    std::optional<std::size_t> best;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const SweepRow &r = rows[i];
        if (!r.error.empty() || !std::isfinite(r.aoii) ||
            !std::isfinite(r.rate))
            continue;
        if (budget && r.rate > *budget)
            continue;
        if (!best) {
            best = i;
            continue;
        }
        const SweepRow &b = rows[*best];
        if (r.aoii < b.aoii ||
            (r.aoii == b.aoii &&
             (r.rate < b.rate || (r.rate == b.rate && r.params < b.params))))
            best = i;
    }
    return best;
}

SweepResult sweep(const GeneratorMatrix &q, const SweepSpec &spec,
                  const ChannelModel &channel) {
    validate(spec, q.size());
    validate(channel);

    const int n = q.size();
    std::vector<std::vector<double>> axis_points;
    std::size_t total = 1;
    for (const GridAxis &ax : spec.axes) {
        axis_points.push_back(ax.points());
        total *= axis_points.back().size();
    }

    SweepResult result;
    result.rows.reserve(total);
    std::vector<std::size_t> idx(n, 0);
    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (std::size_t flat = 0; flat < total; ++flat) {
        SweepRow row;
        row.params.resize(n);
        for (int i = 0; i < n; ++i)
            row.params[i] = axis_points[i][idx[i]];

        try {
            Vec p = Vec::Zero(n);
            for (int i = 0; i < n; ++i)
                p[i] = row.params[i];
            SystemMetrics m;
            if (spec.model == SweepSpec::Model::Push)
                m = analyze(q, PushPolicy{spec.erlang_k, p}, channel);
            else
                m = analyze(q, PullPolicy{p}, channel);
            row.aoii = m.aoii;
            row.rate = m.rate;
            row.feasible = !spec.budget || row.rate <= *spec.budget;
        } catch (const Error &e) {
            row.aoii = nan;
            row.rate = nan;
            row.feasible = false;
            row.error = e.what();
        }
        result.rows.push_back(std::move(row));

        // Advance the mixed-radix counter, last axis fastest.
        for (int i = n - 1; i >= 0; --i) {
            if (++idx[i] < axis_points[i].size())
                break;
            idx[i] = 0;
        }
    }
    result.argmin = select_argmin(result.rows, spec.budget);
    return result;
}

SweepRow optimize_under_budget(const GeneratorMatrix &q, const SweepSpec &spec,
                               const ChannelModel &channel) {
    SweepResult result = sweep(q, spec, channel);
    if (!result.argmin) {
        double min_rate = std::numeric_limits<double>::infinity();
        for (const SweepRow &r : result.rows)
            if (r.error.empty() && std::isfinite(r.rate))
                min_rate = std::min(min_rate, r.rate);
        std::ostringstream os;
        if (std::isinf(min_rate)) {
            os << "no grid point evaluated successfully";
        } else {
            os << "minimum achievable rate " << g17(min_rate);
            if (spec.budget)
                os << " exceeds budget " << g17(*spec.budget);
        }
        throw NoFeasiblePolicy(os.str());
    }
    return result.rows[*result.argmin];
}

namespace {

std::string csv_escape(const std::string &s) {
    if (s.find_first_of(",\"\n") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    out += '"';
    return out;
}

} // namespace

void write_sweep_csv(std::ostream &out, const SweepResult &result,
                     SweepSpec::Model model, int states) {
    out << "# aoii-sweep-csv v1\n";
    out << "model";
    for (int i = 0; i < states; ++i)
        out << ",param_" << (i + 1);
    out << ",aoii,rate,feasible,error\n";
    const char *name = model == SweepSpec::Model::Push ? "push" : "pull";
    for (const SweepRow &r : result.rows) {
        out << name;
        for (double p : r.params)
            out << ',' << g17(p);
        out << ',' << g17(r.aoii) << ',' << g17(r.rate) << ','
            << (r.feasible ? 1 : 0) << ',' << csv_escape(r.error) << '\n';
    }
}

} // namespace aoii
