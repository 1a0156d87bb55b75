#include "doctest.h"

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "aoii/errors.hpp"
#include "aoii/sweep.hpp"
#include "aoii/sources.hpp"

using namespace aoii;

namespace {

SweepSpec pull_spec(std::vector<GridAxis> axes,
                    std::optional<double> budget = std::nullopt) {
    SweepSpec spec;
    spec.model = SweepSpec::Model::Pull;
    spec.axes = std::move(axes);
    spec.budget = budget;
    return spec;
}

std::vector<std::string> split_lines(const std::string &text) {
    std::vector<std::string> lines;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line))
        lines.push_back(line);
    return lines;
}

} // namespace

TEST_CASE("axis point generation") {
    GridAxis single{2.5, 9.0, 1, true};
    REQUIRE(single.points() == std::vector<double>{2.5});

    GridAxis log3{0.1, 10.0, 3, true};
    const std::vector<double> lp = log3.points();
    REQUIRE(lp.size() == 3);
    CHECK(lp[0] == doctest::Approx(0.1).epsilon(1e-14));
    CHECK(lp[1] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(lp[2] == doctest::Approx(10.0).epsilon(1e-14));

    GridAxis lin5{1.0, 3.0, 5, false};
    const std::vector<double> xp = lin5.points();
    REQUIRE(xp.size() == 5);
    CHECK(xp.front() == 1.0);
    CHECK(xp.back() == 3.0);
    CHECK(xp[2] == doctest::Approx(2.0).epsilon(1e-14));
}

TEST_CASE("grid enumeration order and feasibility") {
    const GeneratorMatrix q = bench::q3();
    SweepSpec spec = pull_spec({GridAxis{0.5, 1.0, 2, false},
                                GridAxis{0.25, 0.75, 3, false}});
    const SweepResult res = sweep(q, spec, ChannelModel{1.0});
    REQUIRE(res.rows.size() == 6);

    // Last axis varies fastest.
    CHECK(res.rows[0].params == std::vector<double>{0.5, 0.25});
    CHECK(res.rows[1].params == std::vector<double>{0.5, 0.5});
    CHECK(res.rows[2].params == std::vector<double>{0.5, 0.75});
    CHECK(res.rows[3].params == std::vector<double>{1.0, 0.25});
    CHECK(res.rows[5].params == std::vector<double>{1.0, 0.75});

    for (const SweepRow &row : res.rows) {
        CHECK(row.error.empty());
        CHECK(row.feasible); // no budget: every evaluated row qualifies
        CHECK(std::isfinite(row.aoii));
    }
    REQUIRE(res.argmin.has_value());
    // Faster requests can only help the age on this source.
    CHECK(res.rows[*res.argmin].params == std::vector<double>{1.0, 0.75});
}

TEST_CASE("budget filters the argmin") {
    const GeneratorMatrix q = bench::q3();
    SweepSpec spec = pull_spec({GridAxis{0.25, 2.0, 4, false},
                                GridAxis{0.25, 2.0, 4, false}});
    const SweepResult unconstrained = sweep(q, spec, ChannelModel{1.0});
    REQUIRE(unconstrained.argmin.has_value());

    double mid_rate = 0;
    for (const SweepRow &row : unconstrained.rows)
        mid_rate += row.rate;
    mid_rate /= double(unconstrained.rows.size());

    spec.budget = mid_rate;
    const SweepResult constrained = sweep(q, spec, ChannelModel{1.0});
    REQUIRE(constrained.argmin.has_value());
    const SweepRow &best = constrained.rows[*constrained.argmin];
    CHECK(best.rate <= mid_rate);
    CHECK(best.aoii >=
          unconstrained.rows[*unconstrained.argmin].aoii - 1e-15);

    // Re-selecting from the stored rows reproduces the argmin.
    CHECK(select_argmin(constrained.rows, spec.budget) == constrained.argmin);
    CHECK(select_argmin(unconstrained.rows, std::nullopt) ==
          unconstrained.argmin);

    for (const SweepRow &row : constrained.rows)
        CHECK(row.feasible == (row.rate <= mid_rate));
}

TEST_CASE("argmin tie-breaking is deterministic") {
    std::vector<SweepRow> rows(4);
    rows[0] = {{2.0, 1.0}, 0.5, 0.9, true, ""};
    rows[1] = {{1.0, 2.0}, 0.5, 0.4, true, ""};
    rows[2] = {{1.0, 1.0}, 0.5, 0.4, true, ""};
    rows[3] = {{3.0, 1.0}, 0.7, 0.1, true, ""};

    // Equal AoII: prefer the smaller rate, then lexicographic parameters.
    CHECK(select_argmin(rows, std::nullopt) == std::size_t{2});

    rows[2].params = {1.0, 3.0};
    CHECK(select_argmin(rows, std::nullopt) == std::size_t{1});

    rows[1].error = "failed";
    rows[2].error = "failed";
    CHECK(select_argmin(rows, std::nullopt) == std::size_t{0});

    CHECK(select_argmin(rows, 0.05) == std::nullopt);
}

TEST_CASE("failed grid points are kept with their message") {
    const GeneratorMatrix q = bench::q3();
    SweepSpec spec;
    spec.model = SweepSpec::Model::Push;
    spec.erlang_k = 3;
    // When both thresholds hit the huge end the sync chain collapses to
    // identity; with only one huge threshold the point is still solvable.
    spec.axes = {GridAxis{1.0, 1e9, 2, true}, GridAxis{1.0, 1e9, 2, true}};
    const SweepResult res = sweep(q, spec, ChannelModel{1.0});
    REQUIRE(res.rows.size() == 4);
    CHECK(res.rows[0].error.empty());
    CHECK(res.rows[1].error.empty());
    CHECK(res.rows[2].error.empty());
    CHECK(!res.rows[3].error.empty());
    CHECK(!res.rows[3].feasible);
    CHECK(std::isnan(res.rows[3].aoii));
    REQUIRE(res.argmin.has_value());
    CHECK(*res.argmin == 0); // sampling in both cycles beats starving either
}

TEST_CASE("age falls as the uniform request rate grows") {
    const GeneratorMatrix q = bench::q3();
    SweepSpec spec = pull_spec({GridAxis{0.1, 10.0, 20, true},
                                GridAxis{0.1, 10.0, 20, true}});
    const SweepResult res = sweep(q, spec, ChannelModel{1.0});
    // Diagonal of the grid: both axes share the same point list.
    double prev_aoii = std::numeric_limits<double>::infinity();
    double prev_rate = -1.0;
    for (int i = 0; i < 20; ++i) {
        const SweepRow &row = res.rows[std::size_t(i) * 20 + std::size_t(i)];
        REQUIRE(row.error.empty());
        CHECK(row.aoii < prev_aoii);
        CHECK(row.rate > prev_rate);
        prev_aoii = row.aoii;
        prev_rate = row.rate;
    }
}

TEST_CASE("CSV snapshot") {
    SweepResult res;
    res.rows.push_back({{0.5, 1.5}, 0.25, 0.75, true, ""});
    res.rows.push_back({{2.0, 1.0}, std::nan(""), std::nan(""), false,
                        "reducible, \"see\" notes"});
    res.argmin = 0;

    std::ostringstream out;
    write_sweep_csv(out, res, SweepSpec::Model::Pull, 2);
    const std::vector<std::string> lines = split_lines(out.str());
    REQUIRE(lines.size() == 4);
    CHECK(lines[0] == "# aoii-sweep-csv v1");
    CHECK(lines[1] == "model,param_1,param_2,aoii,rate,feasible,error");
    CHECK(lines[2].substr(0, 5) == "pull,");
    CHECK(lines[2].find(",1,") != std::string::npos); // feasible flag
    // Embedded quotes are doubled and the field is quoted.
    CHECK(lines[3].find("\"reducible, \"\"see\"\" notes\"") !=
          std::string::npos);
}

TEST_CASE("optimize returns the argmin row or refuses") {
    const GeneratorMatrix q = bench::q3();
    SweepSpec spec = pull_spec({GridAxis{0.25, 1.0, 3, false},
                                GridAxis{0.25, 1.0, 3, false}});

    const SweepRow best = optimize_under_budget(q, spec, ChannelModel{1.0});
    CHECK(best.params == std::vector<double>{1.0, 1.0});

    spec.budget = 1e-6;
    CHECK_THROWS_AS(optimize_under_budget(q, spec, ChannelModel{1.0}),
                    NoFeasiblePolicy);
    try {
        optimize_under_budget(q, spec, ChannelModel{1.0});
    } catch (const NoFeasiblePolicy &e) {
        CHECK(std::string(e.what()).find("budget") != std::string::npos);
    }
}

TEST_CASE("specification validation") {
    const int states = 2;
    SweepSpec spec = pull_spec({GridAxis{0.1, 1.0, 2, true}});
    CHECK_THROWS_AS(validate(spec, states), ValidationError); // axis count

    spec = pull_spec({GridAxis{0.1, 1.0, 2, true}, GridAxis{0.0, 1.0, 2, true}});
    CHECK_THROWS_AS(validate(spec, states), ValidationError); // lo <= 0

    spec = pull_spec({GridAxis{0.1, 1.0, 2, true}, GridAxis{1.0, 0.5, 2, true}});
    CHECK_THROWS_AS(validate(spec, states), ValidationError); // hi < lo

    spec = pull_spec({GridAxis{0.1, 1.0, 0, true}, GridAxis{0.1, 1.0, 2, true}});
    CHECK_THROWS_AS(validate(spec, states), ValidationError); // empty axis

    spec = pull_spec({GridAxis{0.1, 1.0, 2, true}, GridAxis{0.1, 1.0, 2, true}});
    spec.budget = 0.0;
    CHECK_THROWS_AS(validate(spec, states), ValidationError); // budget > 0

    spec.budget.reset();
    CHECK_NOTHROW(validate(spec, states));

    SweepSpec push = spec;
    push.model = SweepSpec::Model::Push;
    push.erlang_k = 0;
    CHECK_THROWS_AS(validate(push, states), ValidationError);
    push.erlang_k = 2;
    CHECK_NOTHROW(validate(push, states));
}
