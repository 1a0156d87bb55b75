#include "aoii/simulate.hpp"

#include <cmath>
#include <limits>
#include <ostream>
#include <random>
#include <sstream>
#include <vector>

#include "aoii/errors.hpp"

namespace aoii {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Stream seeding: replication r uses mt19937_64(splitmix64(seed + r)).
std::uint64_t splitmix64(std::uint64_t x) {
    x += 0x9E3779B97F4A7C15ULL;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ULL;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBULL;
    return x ^ (x >> 31);
}

struct CycleRec {
    double duration;
    double area;
    double samples;
    std::int16_t start; // sync value opening the cycle
    std::int16_t end;   // sync value closing it
};

struct RepOutcome {
    std::vector<CycleRec> cycles; // collected (post-warmup) only
    bool cap_hit = false;
};

enum class Model { Push, Pull };
enum class Event { Jump, Complete, Stage, Pull };

const char *event_name(Event e) {
    switch (e) {
    case Event::Jump:
        return "jump";
    case Event::Complete:
        return "complete";
    case Event::Stage:
        return "stage";
    case Event::Pull:
        return "pull";
    }
    return "?";
}

class Runner {
  public:
    Runner(const GeneratorMatrix &q, Model model, const PushPolicy *push,
           const PullPolicy *pull, double mu, const SimConfig &cfg,
           std::uint64_t stream_seed)
        : q_(q), model_(model), push_(push), pull_(pull), mu_(mu), cfg_(cfg),
          rng_(splitmix64(stream_seed)) {}

    RepOutcome run() {
        const bool by_cycles = cfg_.horizon.kind == Horizon::Kind::Cycles;
        const std::uint64_t target =
            by_cycles ? cfg_.horizon.cycle_target : 0;
        const std::uint64_t discard =
            by_cycles
                ? std::max<std::uint64_t>(
                      1, static_cast<std::uint64_t>(
                             std::llround(cfg_.warmup * double(target))))
                : 0;
        const double time_limit = by_cycles ? kInf : cfg_.horizon.time_target;
        const double warm_time = by_cycles ? 0 : cfg_.warmup * time_limit;
        const std::uint64_t event_cap =
            by_cycles ? 200 * (target + discard) + 1000000 : ~0ULL;

        RepOutcome out;
        if (by_cycles)
            out.cycles.reserve(target);

        std::uint64_t events = 0;
        std::uint64_t completed = 0;
        while (true) {
            if (by_cycles && ++events > event_cap) {
                out.cap_hit = true;
                break;
            }
            step();
            if (!by_cycles && t_ >= time_limit)
                break;
            if (cycle_closed_) {
                cycle_closed_ = false;
                ++completed;
                const bool past_warmup = by_cycles
                                             ? completed > discard
                                             : (completed > 1 &&
                                                closed_.start_time >= warm_time);
                if (past_warmup)
                    out.cycles.push_back(closed_.rec);
                if (by_cycles && out.cycles.size() == target)
                    break;
            }
        }
        return out;
    }

  private:
    void step() {
        // Competing exponential clocks; draws happen in the fixed priority
        // order jump > completion > stage/pull, and ties resolve the same
        // way (strict < below).
        double t_jump = draw_exp(q_.sigma(x_));
        double t_complete = kInf, t_stage = kInf, t_pull = kInf;

        if (model_ == Model::Push) {
            if (!insync_) {
                if (stage_ == push_->k)
                    t_complete = draw_exp(mu_);
                else
                    t_stage = draw_exp(push_->stage_rate(xhat_));
            }
        } else {
            const bool transmitting = insync_ ? in_transmitting_ : out_transmitting_;
            if (transmitting)
                t_complete = draw_exp(mu_);
            else
                t_pull = draw_exp(pull_->request_rate[xhat_]);
        }

        double dt = t_jump;
        Event ev = Event::Jump;
        if (t_complete < dt) {
            dt = t_complete;
            ev = Event::Complete;
        }
        if (t_stage < dt) {
            dt = t_stage;
            ev = Event::Stage;
        }
        if (t_pull < dt) {
            dt = t_pull;
            ev = Event::Pull;
        }

        if (!insync_) {
            const double age0 = t_ - desync_time_;
            const double age1 = age0 + dt;
            cycle_area_ += 0.5 * (age1 * age1 - age0 * age0);
        }
        t_ += dt;

        switch (ev) {
        case Event::Jump:
            handle_jump();
            break;
        case Event::Stage:
            ++stage_;
            if (stage_ == push_->k)
                cycle_samples_ += 1; // threshold crossed, transmission starts
            break;
        case Event::Pull:
            if (insync_)
                in_transmitting_ = true;
            else
                out_transmitting_ = true;
            cycle_samples_ += 1;
            break;
        case Event::Complete:
            if (model_ == Model::Pull && insync_) {
                in_transmitting_ = false; // redundant confirmation delivered
            } else {
                xhat_ = x_; // delivered sample always equals the current state
                close_cycle();
            }
            break;
        }

        if (cfg_.trace) {
            const double age = insync_ ? 0.0 : t_ - desync_time_;
            (*cfg_.trace) << t_ << ',' << event_name(ev) << ',' << x_ << ','
                          << xhat_ << ',' << age << '\n';
        }
    }

    void handle_jump() {
        x_ = draw_next_state();
        if (insync_) {
            // Sync breaks: the excursion starts with no transmission in
            // flight (an in-sync pull transmission is dropped) and the
            // threshold clock restarted.
            insync_ = false;
            desync_time_ = t_;
            stage_ = 0;
            in_transmitting_ = false;
            out_transmitting_ = false;
        } else if (x_ == xhat_) {
            close_cycle(); // natural return, self-transition of the SP chain
        } else {
            if (model_ == Model::Push && stage_ == push_->k) {
                cycle_samples_ += 1; // preempt and immediately resample
            }
            if (model_ == Model::Pull && out_transmitting_) {
                out_transmitting_ = false; // preempted; wait for a new pull
            }
            // Push threshold stage persists: AoII is not reset by a
            // mid-excursion source change.
        }
    }

    void close_cycle() {
        if (cfg_.check_invariants) {
            const double excursion = t_ - desync_time_;
            const double expected = 0.5 * excursion * excursion;
            if (std::abs(cycle_area_ - expected) >
                1e-9 * std::max(1.0, expected)) {
                std::ostringstream os;
                os << "AoII area " << cycle_area_
                   << " differs from excursion^2/2 = " << expected;
                throw std::logic_error(os.str());
            }
        }
        closed_.rec = CycleRec{t_ - cycle_start_, cycle_area_, cycle_samples_,
                               static_cast<std::int16_t>(cycle_value_),
                               static_cast<std::int16_t>(xhat_)};
        closed_.start_time = cycle_start_;
        cycle_closed_ = true;

        cycle_value_ = xhat_;
        cycle_start_ = t_;
        cycle_area_ = 0;
        cycle_samples_ = 0;
        insync_ = true;
        stage_ = 0;
        in_transmitting_ = false;
        out_transmitting_ = false;
    }

    double draw_exp(double rate) {
        if (!(rate > 0))
            return kInf;
        std::exponential_distribution<double> d(rate);
        return d(rng_);
    }

    int draw_next_state() {
        const double sigma = q_.sigma(x_);
        std::uniform_real_distribution<double> u01(0.0, 1.0);
        const double u = u01(rng_) * sigma;
        double acc = 0;
        int last = x_ == 0 ? 1 : 0;
        for (int j = 0; j < q_.size(); ++j) {
            if (j == x_)
                continue;
            const double r = q_.rate(x_, j);
            if (r <= 0)
                continue;
            acc += r;
            last = j;
            if (u < acc)
                return j;
        }
        return last; // round-off guard: leftover mass goes to the last exit
    }

    const GeneratorMatrix &q_;
    Model model_;
    const PushPolicy *push_;
    const PullPolicy *pull_;
    double mu_;
    const SimConfig &cfg_;
    std::mt19937_64 rng_;

    int x_ = 0, xhat_ = 0;
    bool insync_ = true;
    int stage_ = 0;               // push: Erlang stage, == k while transmitting
    bool in_transmitting_ = false;  // pull, in-sync
    bool out_transmitting_ = false; // pull, out-of-sync
    double t_ = 0;
    double desync_time_ = 0;

    int cycle_value_ = 0;
    double cycle_start_ = 0;
    double cycle_area_ = 0;
    double cycle_samples_ = 0;

    struct Closed {
        CycleRec rec{};
        double start_time = 0;
    };
    Closed closed_;
    bool cycle_closed_ = false;
};

// Ratio-estimator standard error from batch sums (x_b, t_b):
// se = sqrt(B/(B-1) * sum z_b^2) / sum t, with z_b = x_b - theta * t_b.
double ratio_se(const std::vector<std::pair<double, double>> &batches,
                double theta) {
    const std::size_t b = batches.size();
    if (b < 2)
        return std::numeric_limits<double>::quiet_NaN();
    double zz = 0, total_t = 0;
    for (const auto &[xb, tb] : batches) {
        const double z = xb - theta * tb;
        zz += z * z;
        total_t += tb;
    }
    if (!(total_t > 0))
        return std::numeric_limits<double>::quiet_NaN();
    return std::sqrt(zz * double(b) / double(b - 1)) / total_t;
}

SimResult aggregate(const std::vector<RepOutcome> &reps, int n) {
    SimResult out;
    out.pi_hat = RowVec::Zero(n);
    out.area_hat = Vec::Zero(n);
    out.duration_hat = Vec::Zero(n);
    out.samples_hat = Vec::Zero(n);
    out.sp_transition_counts = Mat::Zero(n, n);

    double sum_area = 0, sum_time = 0, sum_samples = 0;
    std::vector<std::uint64_t> counts(n, 0);
    for (const auto &rep : reps) {
        out.degenerate = out.degenerate || rep.cap_hit;
        for (const auto &c : rep.cycles) {
            sum_area += c.area;
            sum_time += c.duration;
            sum_samples += c.samples;
            counts[c.start] += 1;
            out.area_hat[c.start] += c.area;
            out.duration_hat[c.start] += c.duration;
            out.samples_hat[c.start] += c.samples;
            out.sp_transition_counts(c.start, c.end) += 1;
            ++out.cycles;
        }
    }

    const double nan = std::numeric_limits<double>::quiet_NaN();
    for (int i = 0; i < n; ++i) {
        if (counts[i] > 0) {
            out.pi_hat[i] = double(counts[i]) / double(out.cycles);
            out.area_hat[i] /= double(counts[i]);
            out.duration_hat[i] /= double(counts[i]);
            out.samples_hat[i] /= double(counts[i]);
        } else {
            out.area_hat[i] = out.duration_hat[i] = out.samples_hat[i] = nan;
        }
    }

    if (out.cycles == 0 || !(sum_time > 0)) {
        out.aoii_hat = out.rate_hat = out.aoii_se = out.rate_se = nan;
        out.degenerate = true;
        return out;
    }
    out.aoii_hat = sum_area / sum_time;
    out.rate_hat = sum_samples / sum_time;
    if (sum_samples == 0)
        out.degenerate = true;

    // Batches for the standard errors: one batch per replication when
    // several are run, otherwise contiguous slices of the cycle stream.
    std::vector<std::pair<double, double>> area_batches, sample_batches;
    if (reps.size() >= 2) {
        for (const auto &rep : reps) {
            double a = 0, t = 0, s = 0;
            for (const auto &c : rep.cycles) {
                a += c.area;
                t += c.duration;
                s += c.samples;
            }
            area_batches.emplace_back(a, t);
            sample_batches.emplace_back(s, t);
        }
    } else {
        const auto &cycles = reps.front().cycles;
        const std::uint64_t c = cycles.size();
        const std::uint64_t b =
            std::min<std::uint64_t>(64, std::max<std::uint64_t>(2, c / 64));
        for (std::uint64_t i = 0; i < b; ++i) {
            const std::uint64_t lo = i * c / b;
            const std::uint64_t hi = (i + 1) * c / b;
            double a = 0, t = 0, s = 0;
            for (std::uint64_t j = lo; j < hi; ++j) {
                a += cycles[j].area;
                t += cycles[j].duration;
                s += cycles[j].samples;
            }
            area_batches.emplace_back(a, t);
            sample_batches.emplace_back(s, t);
        }
    }
    out.aoii_se = ratio_se(area_batches, out.aoii_hat);
    out.rate_se = ratio_se(sample_batches, out.rate_hat);
    return out;
}

SimResult run_model(const GeneratorMatrix &q, Model model,
                    const PushPolicy *push, const PullPolicy *pull,
                    const ChannelModel &channel, const SimConfig &cfg) {
    validate(channel);
    validate(cfg);
    if (model == Model::Push)
        validate(*push, q.size());
    else
        validate(*pull, q.size());

    std::vector<RepOutcome> reps;
    reps.reserve(cfg.replications);
    for (int r = 0; r < cfg.replications; ++r) {
        Runner runner(q, model, push, pull, channel.mu, cfg, cfg.seed + r);
        reps.push_back(runner.run());
    }
    return aggregate(reps, q.size());
}

} // namespace

void validate(const SimConfig &cfg) {
    std::vector<Violation> violations;
    auto fail = [&](const std::string &d) {
        violations.push_back({ViolationCode::InvalidParameter, -1, -1, d});
    };
    if (cfg.horizon.kind == Horizon::Kind::Cycles) {
        if (cfg.horizon.cycle_target < 1)
            fail("cycle target must be >= 1");
    } else if (!(cfg.horizon.time_target > 0) ||
               !std::isfinite(cfg.horizon.time_target)) {
        fail("time horizon must be strictly positive and finite");
    }
    if (!(cfg.warmup >= 0 && cfg.warmup <= 0.5))
        fail("warmup fraction must lie in [0, 0.5]");
    if (cfg.replications < 1)
        fail("replications must be >= 1");
    if (!violations.empty())
        throw ValidationError(std::move(violations));
}

SimResult simulate_push(const GeneratorMatrix &q, const PushPolicy &policy,
                        const ChannelModel &channel, const SimConfig &cfg) {
    return run_model(q, Model::Push, &policy, nullptr, channel, cfg);
}

SimResult simulate_pull(const GeneratorMatrix &q, const PullPolicy &policy,
                        const ChannelModel &channel, const SimConfig &cfg) {
    return run_model(q, Model::Pull, nullptr, &policy, channel, cfg);
}

} // namespace aoii
