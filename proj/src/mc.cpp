#include "epa/mc.hpp"

#include "epa/empirical.hpp"
#include "epa/errors.hpp"
#include "epa/lrv.hpp"
#include "epa/parallel.hpp"
#include "epa/series.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <numbers>
#include <stdexcept>

namespace epa::mc {

namespace {

constexpr int kCrBurnIn = 10000;

std::vector<double> ma_weights(int h) {
    std::vector<double> theta(static_cast<std::size_t>(h));
    for (int k = 0; k < h; ++k) theta[static_cast<std::size_t>(k)] = std::pow(0.5, k);
    return theta;
}

void check_spec(const DgpSpec& spec) {
    if (spec.h < 1 || spec.R < 1 || spec.R_tilde < 1 || spec.P < 2) {
        throw std::invalid_argument("DGP spec needs h, R, R_tilde >= 1 and P >= 2");
    }
    if (spec.family == Family::cr && spec.mu != 0.0) {
        throw std::invalid_argument("CR designs have mu = 0");
    }
}

// Rolling means and targets at origins R_tilde-1, ..., R_tilde-2+P of y.
ForecastPaths forecasts_from(const std::vector<double>& y, int h, int R_tilde, std::size_t P) {
    const auto w = static_cast<std::size_t>(R_tilde);
    const auto uh = static_cast<std::size_t>(h);
    ForecastPaths out;
    out.target.resize(P);
    out.f1.assign(P, 0.0);
    out.f2.resize(P);
    double window = 0.0;
    for (std::size_t k = 0; k < w; ++k) window += y[k];
    for (std::size_t i = 0; i < P; ++i) {
        const std::size_t origin = w - 1 + i;
        if (i > 0) window += y[origin] - y[origin - w];
        out.f2[i] = window / static_cast<double>(w);
        out.target[i] = y[origin + uh];
    }
    return out;
}

struct CellPlan {
    std::vector<McMethod> methods;
    std::vector<double> critical_values;
    int h = 1;
    int M_nw = 0;
    int M_llsw = 0;
    int B = 0;
    std::size_t max_lag = 0;
    double hln = 1.0;
    std::shared_ptr<const std::vector<double>> cosines;  // B x P, scaled by sqrt(2/P)
};

std::shared_ptr<const std::vector<double>> cosine_table(std::size_t P, int B) {
    auto table = std::make_shared<std::vector<double>>(static_cast<std::size_t>(B) * P);
    const std::size_t period = 4 * P;
    const double scale = std::sqrt(2.0 / static_cast<double>(P));
    for (std::size_t j = 1; j <= static_cast<std::size_t>(B); ++j) {
        for (std::size_t t = 1; t <= P; ++t) {
            const std::size_t k = (j * (2 * t - 1)) % period;
            const double angle = std::numbers::pi * static_cast<double>(k) / (2.0 * static_cast<double>(P));
            (*table)[(j - 1) * P + (t - 1)] = scale * std::cos(angle);
        }
    }
    return table;
}

int im_blocks(McMethod method) {
    switch (method) {
        case McMethod::dm_im2: return 2;
        case McMethod::dm_im5: return 5;
        case McMethod::dm_im10: return 10;
        default: return 0;
    }
}

CellPlan plan_cell(const DgpSpec& spec, const std::vector<McMethod>& methods, double cl,
                   std::map<std::pair<std::size_t, int>, std::shared_ptr<const std::vector<double>>>& cache) {
    CellPlan plan;
    plan.methods = methods;
    plan.h = spec.h;
    const std::size_t P = spec.P;
    plan.M_nw = bandwidth(BandwidthRule::Kind::nw1994, P);
    plan.M_llsw = bandwidth(BandwidthRule::Kind::llsw, P);
    plan.B = bandwidth(BandwidthRule::Kind::ewc_default, P);
    for (McMethod m : methods) {
        double cv = 0.0;
        switch (m) {
            case McMethod::dm_r:
            case McMethod::dm_m:
                if (static_cast<std::size_t>(spec.h) > P) {
                    throw std::out_of_range("horizon h exceeds P in a DM-R/DM-M design");
                }
                plan.max_lag = std::max(plan.max_lag, static_cast<std::size_t>(spec.h - 1));
                if (m == McMethod::dm_r) {
                    cv = detail::normal_outcome(Method::dm_r, 0.0, cl, std::nullopt).critical_value;
                } else {
                    plan.hln = hln_correction(P, spec.h);
                    cv = detail::student_outcome(Method::dm_m, 0.0, cl, static_cast<int>(P) - 1, std::nullopt)
                             .critical_value;
                }
                break;
            case McMethod::dm_nw:
                plan.max_lag = std::max(plan.max_lag, static_cast<std::size_t>(plan.M_nw - 1));
                cv = detail::normal_outcome(Method::dm_nw, 0.0, cl, std::nullopt).critical_value;
                break;
            case McMethod::dm_nw_l:
                plan.max_lag = std::max(plan.max_lag, static_cast<std::size_t>(plan.M_llsw - 1));
                cv = detail::normal_outcome(Method::dm_nw_l, 0.0, cl, std::nullopt).critical_value;
                break;
            case McMethod::dm_fb:
                plan.max_lag = std::max(plan.max_lag, static_cast<std::size_t>(plan.M_llsw - 1));
                cv = detail::fixed_b_outcome(0.0, cl, plan.M_llsw, P).critical_value;
                break;
            case McMethod::dm_ewc: {
                auto& slot = cache[{P, plan.B}];
                if (!slot) slot = cosine_table(P, plan.B);
                plan.cosines = slot;
                cv = detail::student_outcome(Method::dm_ewc, 0.0, cl, plan.B, std::nullopt).critical_value;
                break;
            }
            case McMethod::dm_im2:
            case McMethod::dm_im5:
            case McMethod::dm_im10: {
                const int q = im_blocks(m);
                static_cast<void>(im_partition(P, q));
                cv = detail::student_outcome(Method::dm_im, 0.0, cl, q - 1, std::nullopt).critical_value;
                break;
            }
        }
        plan.critical_values.push_back(cv);
    }
    return plan;
}

// Writes |stat| into `abs_out` and the degenerate flag into `degenerate_out`, one per method.
void evaluate(const CellPlan& plan, const std::vector<double>& d_values, double* abs_out,
              char* degenerate_out) {
    const LossSeries d(d_values);
    const std::size_t P = d.size();
    const double root_p = std::sqrt(static_cast<double>(P));
    const Autocovariances ac = autocovariance(d, plan.max_lag);

    auto studentize = [&](double lrv, std::size_t slot) {
        if (lrv > 0.0) {
            abs_out[slot] = std::abs(root_p * ac.mean / std::sqrt(lrv));
        } else {
            abs_out[slot] = 0.0;
            degenerate_out[slot] = 1;
        }
    };

    for (std::size_t s = 0; s < plan.methods.size(); ++s) {
        abs_out[s] = 0.0;
        degenerate_out[s] = 0;
        switch (plan.methods[s]) {
            case McMethod::dm_r:
            case McMethod::dm_m: {
                double tail = 0.0;
                for (int j = 1; j < plan.h; ++j) tail += ac.gamma[static_cast<std::size_t>(j)];
                studentize(ac.gamma[0] + 2.0 * tail, s);
                if (plan.methods[s] == McMethod::dm_m) abs_out[s] *= plan.hln;
                break;
            }
            case McMethod::dm_nw:
                studentize(bartlett_from_autocovariances(ac.gamma, plan.M_nw), s);
                break;
            case McMethod::dm_nw_l:
            case McMethod::dm_fb:
                studentize(bartlett_from_autocovariances(ac.gamma, plan.M_llsw), s);
                break;
            case McMethod::dm_ewc: {
                const std::vector<double>& table = *plan.cosines;
                double sum = 0.0;
                for (int j = 0; j < plan.B; ++j) {
                    const double* row = table.data() + static_cast<std::size_t>(j) * P;
                    double lambda = 0.0;
                    for (std::size_t t = 0; t < P; ++t) lambda += row[t] * (d_values[t] - ac.mean);
                    sum += lambda * lambda;
                }
                studentize(sum / static_cast<double>(plan.B), s);
                break;
            }
            case McMethod::dm_im2:
            case McMethod::dm_im5:
            case McMethod::dm_im10:
                try {
                    abs_out[s] = std::abs(dm_test_im(d, im_blocks(plan.methods[s]), 0.05).stat);
                } catch (const DegenerateVarianceError&) {
                    degenerate_out[s] = 1;
                }
                break;
        }
    }
}

}  // namespace

std::string to_string(Family family) { return family == Family::ucr ? "ucr" : "cr"; }

Family parse_family(const std::string& name) {
    if (name == "ucr" || name == "UCR") return Family::ucr;
    if (name == "cr" || name == "CR") return Family::cr;
    throw std::invalid_argument("unknown DGP family '" + name + "' (expected ucr or cr)");
}

double calibrate_mu(int h, int R) {
    if (h < 1) throw std::invalid_argument("calibrate_mu needs h >= 1");
    if (R < h) {
        throw std::invalid_argument("calibrate_mu needs R >= h, got R = " + std::to_string(R) +
                                    ", h = " + std::to_string(h));
    }
    const std::vector<double> theta = ma_weights(h);
    auto gamma = [&](int j) {
        double g = 0.0;
        for (int k = 0; k + j < h; ++k) {
            g += theta[static_cast<std::size_t>(k)] * theta[static_cast<std::size_t>(k + j)];
        }
        return g;
    };
    const double r = static_cast<double>(R);
    double acc = r * gamma(0);
    for (int j = 1; j < h; ++j) acc += 2.0 * (r - j) * gamma(j);
    return std::sqrt(acc / (r * r));
}

DgpSpec make_spec(Family family, int h, int R, int R_tilde, std::size_t P) {
    DgpSpec spec{family, h, R, R_tilde, P, 0.0};
    if (family == Family::ucr) spec.mu = calibrate_mu(h, R);
    check_spec(spec);
    return spec;
}

ForecastPaths simulate_ucr(const DgpSpec& spec, Engine& rng) {
    check_spec(spec);
    if (spec.family != Family::ucr) throw std::invalid_argument("simulate_ucr needs a UCR spec");
    const auto h = static_cast<std::size_t>(spec.h);
    const std::size_t length = static_cast<std::size_t>(spec.R_tilde) + spec.P + h - 1;
    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> eps(length + h - 1);
    for (double& e : eps) e = normal(rng);
    const std::vector<double> theta = ma_weights(spec.h);
    std::vector<double> y(length);
    for (std::size_t i = 0; i < length; ++i) {
        double v = spec.mu;
        for (std::size_t k = 0; k < h; ++k) v += theta[k] * eps[i + h - 1 - k];
        y[i] = v;
    }
    return forecasts_from(y, spec.h, spec.R_tilde, spec.P);
}

ForecastPaths simulate_cr(const DgpSpec& spec, Engine& rng) {
    check_spec(spec);
    if (spec.family != Family::cr) throw std::invalid_argument("simulate_cr needs a CR spec");
    const auto h = static_cast<std::size_t>(spec.h);
    const auto R = static_cast<std::size_t>(spec.R);
    const std::size_t keep = static_cast<std::size_t>(spec.R_tilde) - 1 + spec.P + h;
    const std::size_t total = static_cast<std::size_t>(kCrBurnIn) + keep;
    const std::vector<double> theta = ma_weights(spec.h);
    const double weight = 1.0 / (2.0 * static_cast<double>(R));

    std::normal_distribution<double> normal(0.0, 1.0);
    std::vector<double> eps(total);
    std::vector<double> y(total, 0.0);
    double window = 0.0;  // y_{t-h} + ... + y_{t-h-R+1}
    for (std::size_t t = 0; t < total; ++t) {
        if (t >= h) window += y[t - h];
        if (t >= h + R) window -= y[t - h - R];
        eps[t] = normal(rng);
        double v = weight * window + eps[t];
        for (std::size_t k = 1; k < h && k <= t; ++k) v += theta[k] * eps[t - k];
        y[t] = v;
    }
    const std::vector<double> kept(y.begin() + kCrBurnIn, y.end());
    return forecasts_from(kept, spec.h, spec.R_tilde, spec.P);
}

ForecastPaths simulate(const DgpSpec& spec, Engine& rng) {
    return spec.family == Family::ucr ? simulate_ucr(spec, rng) : simulate_cr(spec, rng);
}

std::vector<double> loss_differential(const ForecastPaths& paths) {
    std::vector<double> d(paths.target.size());
    for (std::size_t i = 0; i < d.size(); ++i) {
        const double e1 = paths.target[i] - paths.f1[i];
        const double e2 = paths.target[i] - paths.f2[i];
        d[i] = e1 * e1 - e2 * e2;
    }
    return d;
}

std::string label(McMethod method) {
    switch (method) {
        case McMethod::dm_r: return "DM-R";
        case McMethod::dm_m: return "DM-M";
        case McMethod::dm_nw: return "DM-NW";
        case McMethod::dm_nw_l: return "DM-NW-L";
        case McMethod::dm_fb: return "DM-FB";
        case McMethod::dm_ewc: return "DM-EWC";
        case McMethod::dm_im2: return "DM-IM2";
        case McMethod::dm_im5: return "DM-IM5";
        case McMethod::dm_im10: return "DM-IM10";
    }
    return "DM-?";
}

McMethod parse_mc_method(const std::string& name) {
    for (McMethod m : all_methods()) {
        std::string lower = label(m);
        std::transform(lower.begin(), lower.end(), lower.begin(),
                       [](unsigned char c) { return c == '-' ? '_' : static_cast<char>(std::tolower(c)); });
        if (name == label(m) || name == lower) return m;
    }
    throw std::invalid_argument("unknown Monte Carlo method '" + name + "'");
}

const std::vector<McMethod>& all_methods() {
    static const std::vector<McMethod> methods{McMethod::dm_r,   McMethod::dm_m,   McMethod::dm_nw,
                                               McMethod::dm_nw_l, McMethod::dm_fb,  McMethod::dm_ewc,
                                               McMethod::dm_im2, McMethod::dm_im5, McMethod::dm_im10};
    return methods;
}

CellKey key_of(const DgpSpec& spec) { return {spec.family, spec.R, spec.R_tilde, spec.h, spec.P}; }

CellKey diagonal_of(const CellKey& key) {
    CellKey diag = key;
    diag.R_tilde = key.R;
    return diag;
}

const MethodTally& ExperimentResult::tally(const CellKey& key, McMethod method) const {
    const auto cell = cells.find(key);
    if (cell == cells.end()) throw std::out_of_range("no such cell in the experiment result");
    const auto pos = std::find(methods.begin(), methods.end(), method);
    if (pos == methods.end()) throw std::out_of_range("method " + label(method) + " was not run");
    return cell->second.tallies[static_cast<std::size_t>(pos - methods.begin())];
}

double ExperimentResult::rejection_rate(const CellKey& key, McMethod method) const {
    return static_cast<double>(tally(key, method).rejections) / static_cast<double>(n_reps);
}

ExperimentResult run_experiment(const std::vector<DgpSpec>& grid, const std::vector<McMethod>& methods,
                                std::size_t n_reps, double cl, std::uint64_t seed, unsigned workers) {
    if (n_reps < 100) throw std::invalid_argument("n_reps must be >= 100");
    if (methods.empty()) throw std::invalid_argument("no methods requested");
    detail::check_level(cl);
    if (std::find(methods.begin(), methods.end(), McMethod::dm_fb) != methods.end() && cl != 0.05) {
        throw UnsupportedLevelError(cl);
    }

    ExperimentResult result;
    result.methods = methods;
    result.n_reps = n_reps;
    result.seed = seed;
    result.cl = cl;

    std::map<std::pair<std::size_t, int>, std::shared_ptr<const std::vector<double>>> cosine_cache;
    const std::size_t nm = methods.size();
    for (const DgpSpec& spec : grid) {
        check_spec(spec);
        const CellKey key = key_of(spec);
        if (result.cells.count(key) != 0) throw std::invalid_argument("duplicate design in grid");
        const CellPlan plan = plan_cell(spec, methods, cl, cosine_cache);

        std::vector<double> abs_stats(n_reps * nm);
        std::vector<char> degenerate(n_reps * nm);
        parallel_for(n_reps, workers, [&](std::size_t rep) {
            Engine rng = make_stream(seed, {static_cast<std::uint64_t>(spec.family), static_cast<std::uint64_t>(spec.h),
                                            static_cast<std::uint64_t>(spec.R),
                                            static_cast<std::uint64_t>(spec.R_tilde),
                                            static_cast<std::uint64_t>(spec.P), rep});
            const std::vector<double> d = loss_differential(simulate(spec, rng));
            evaluate(plan, d, abs_stats.data() + rep * nm, degenerate.data() + rep * nm);
        });

        CellResult cell;
        cell.spec = spec;
        cell.tallies.resize(nm);
        for (std::size_t s = 0; s < nm; ++s) {
            MethodTally& tally = cell.tallies[s];
            tally.abs_stats.resize(n_reps);
            for (std::size_t rep = 0; rep < n_reps; ++rep) {
                const double a = abs_stats[rep * nm + s];
                tally.abs_stats[rep] = a;
                if (degenerate[rep * nm + s]) {
                    ++tally.degenerate;
                } else if (a > plan.critical_values[s]) {
                    ++tally.rejections;
                }
            }
        }
        result.cells.emplace(key, std::move(cell));
    }
    return result;
}

double size_corrected_critical_value(const ExperimentResult& result, const CellKey& key, McMethod method) {
    const CellKey diag = diagonal_of(key);
    if (result.cells.count(diag) == 0) {
        throw std::out_of_range("missing diagonal cell R = R_tilde = " + std::to_string(diag.R) +
                                " for size correction");
    }
    return epa::size_corrected_critical_value(result.tally(diag, method).abs_stats);
}

double size_corrected_power(const ExperimentResult& result, const CellKey& key, McMethod method) {
    const double c_star = size_corrected_critical_value(result, key, method);
    const std::vector<double>& stats = result.tally(key, method).abs_stats;
    const auto above = std::count_if(stats.begin(), stats.end(), [&](double a) { return a > c_star; });
    return static_cast<double>(above) / static_cast<double>(stats.size());
}

std::vector<DgpSpec> factorial_grid(const std::vector<Family>& families, const std::vector<int>& hs,
                                    const std::vector<int>& Rs, const std::vector<int>& R_tildes,
                                    const std::vector<std::size_t>& Ps) {
    std::vector<DgpSpec> grid;
    for (Family f : families) {
        for (int h : hs) {
            for (int R : Rs) {
                for (int Rt : R_tildes) {
                    for (std::size_t P : Ps) grid.push_back(make_spec(f, h, R, Rt, P));
                }
            }
        }
    }
    return grid;
}

}  // namespace epa::mc
