#pragma once

#include "epa/dm_tests.hpp"
#include "epa/random.hpp"

#include <compare>
#include <cstddef>
#include <cstdint>
#include <map>
#include <string>
#include <vector>

namespace epa::mc {

enum class Family { ucr, cr };

[[nodiscard]] std::string to_string(Family family);
[[nodiscard]] Family parse_family(const std::string& name);

/// One Monte Carlo design. `mu` is the UCR intercept and 0 for CR.
struct DgpSpec {
    Family family = Family::ucr;
    int h = 1;
    int R = 25;
    int R_tilde = 25;
    std::size_t P = 75;
    double mu = 0.0;
};

/// Builds a spec with mu set by calibrate_mu for UCR and 0 for CR.
[[nodiscard]] DgpSpec make_spec(Family family, int h, int R, int R_tilde, std::size_t P);

/// Intercept that equalizes expected squared loss of the zero forecast and the
/// R-window rolling mean under the MA(h-1) target with weights 0.5^k.
[[nodiscard]] double calibrate_mu(int h, int R);

/// Targets y_{t+h} and the two forecasts made at each of the P origins.
struct ForecastPaths {
    std::vector<double> target;
    std::vector<double> f1;
    std::vector<double> f2;
};

[[nodiscard]] ForecastPaths simulate_ucr(const DgpSpec& spec, Engine& rng);
[[nodiscard]] ForecastPaths simulate_cr(const DgpSpec& spec, Engine& rng);
[[nodiscard]] ForecastPaths simulate(const DgpSpec& spec, Engine& rng);

/// Squared-loss differential (target - f1)^2 - (target - f2)^2.
[[nodiscard]] std::vector<double> loss_differential(const ForecastPaths& paths);

enum class McMethod { dm_r, dm_m, dm_nw, dm_nw_l, dm_fb, dm_ewc, dm_im2, dm_im5, dm_im10 };

[[nodiscard]] std::string label(McMethod method);
[[nodiscard]] McMethod parse_mc_method(const std::string& name);
[[nodiscard]] const std::vector<McMethod>& all_methods();

struct CellKey {
    Family family = Family::ucr;
    int R = 0;
    int R_tilde = 0;
    int h = 0;
    std::size_t P = 0;

    friend auto operator<=>(const CellKey&, const CellKey&) = default;
    [[nodiscard]] bool diagonal() const noexcept { return R == R_tilde; }
};

[[nodiscard]] CellKey key_of(const DgpSpec& spec);
/// The R = R_tilde cell whose null distribution calibrates `key`.
[[nodiscard]] CellKey diagonal_of(const CellKey& key);

struct MethodTally {
    std::size_t rejections = 0;
    /// Replications with a nonpositive variance estimate; never rejections.
    std::size_t degenerate = 0;
    /// |stat| per replication in replication order, 0 for degenerate ones.
    std::vector<double> abs_stats;
};

struct CellResult {
    DgpSpec spec;
    /// Indexed like ExperimentResult::methods.
    std::vector<MethodTally> tallies;
};

struct ExperimentResult {
    std::vector<McMethod> methods;
    std::size_t n_reps = 0;
    std::uint64_t seed = 0;
    double cl = kDefaultLevel;
    std::map<CellKey, CellResult> cells;

    [[nodiscard]] const MethodTally& tally(const CellKey& key, McMethod method) const;
    [[nodiscard]] double rejection_rate(const CellKey& key, McMethod method) const;
};

/**
 * Simulates every spec n_reps times and applies each method at level cl.
 * Replication r of a design draws from make_stream(seed, {family, h, R, R_tilde, P, r}),
 * so results do not depend on the worker count or on grid order.
 */
[[nodiscard]] ExperimentResult run_experiment(const std::vector<DgpSpec>& grid,
                                              const std::vector<McMethod>& methods,
                                              std::size_t n_reps, double cl, std::uint64_t seed,
                                              unsigned workers = 0);

/// Critical value c* from the diagonal cell matching `key`.
[[nodiscard]] double size_corrected_critical_value(const ExperimentResult& result, const CellKey& key,
                                                   McMethod method);

/// Share of |stat| in cell `key` above c* of its diagonal cell.
[[nodiscard]] double size_corrected_power(const ExperimentResult& result, const CellKey& key,
                                          McMethod method);

/// Full factorial grid over the given sets (family-major, then h, R, R_tilde, P).
[[nodiscard]] std::vector<DgpSpec> factorial_grid(const std::vector<Family>& families,
                                                  const std::vector<int>& hs, const std::vector<int>& Rs,
                                                  const std::vector<int>& R_tildes,
                                                  const std::vector<std::size_t>& Ps);

inline const std::vector<int> kPaperHorizons{1, 3, 12};
inline const std::vector<int> kPaperWindows{25, 75, 125, 175};
inline const std::vector<std::size_t> kPaperSampleSizes{25, 75, 125, 175, 1000};

}  // namespace epa::mc
