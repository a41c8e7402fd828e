// Growth-path Monte Carlo: deterministic per-replicate streams simulate
// responses from block-mean designs whose dimensions follow a growth regime,
// and each grid point records the residual ratio statistic plus both Bayes
// factor evaluations.
#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "bfgrow/asymptotics.hpp"
#include "bfgrow/bayes_factor.hpp"
#include "bfgrow/designs.hpp"
#include "bfgrow/linear_model.hpp"
#include "bfgrow/rng.hpp"

namespace bfgrow {

/// One growth-path experiment: at each n in n_grid the dimensions (n, p, i)
/// are resolved from the regime, a block-mean design is built whose realized
/// separation equals delta_target exactly, and `replicates` independent
/// response vectors are scored. null_sampling draws responses from the
/// nested model instead (separation zero).
struct ExperimentConfig {
    GrowthRegime regime;
    double delta_target = 0.0;
    std::vector<std::int64_t> n_grid;
    std::int64_t replicates = 1;
    std::uint64_t seed = kDefaultSeed;
    bool null_sampling = false;
};

/// Scores of one simulated response at one grid point.
struct GridPointResult {
    std::int64_t n = 0;
    std::int64_t p = 0;
    std::int64_t i = 0;
    double delta = 0.0;    ///< realized separation of the generating design
    double log_bf = 0.0;   ///< log Bayes factor (quadrature)
    double log_bic = 0.0;  ///< log Schwarz approximation
    double bip = 0.0;      ///< residual ratio statistic
};

/// One replicate's trajectory across the n grid, tagged with its stream
/// identity for reproducibility.
struct TrajectoryRecord {
    std::uint64_t seed = 0;
    std::uint64_t stream_id = 0;
    std::vector<GridPointResult> points;
};

/// Concrete dimensions and group layout at one grid point. For regimes with
/// b = 1 the pair (n, p) is pinned to p = round(n/r), n = round(r*p) so the
/// ratio stays exact along the grid; otherwise p = round(n^b). The nested
/// dimension is round(n/s) when a = 1 and round(n^a) otherwise, floored at 1.
/// Group sizes divide n across p groups as evenly as possible.
struct GridGeometry {
    std::int64_t n = 0;
    std::int64_t p = 0;
    std::int64_t i = 0;
    std::vector<std::int64_t> group_sizes;
};

GridGeometry resolve_grid_point(const GrowthRegime& regime,
                                std::int64_t n_requested);

/// Group means realizing exactly the target separation on the geometry's
/// block design: zero on the first i groups and alternating +/- c beyond,
/// with c solved from the separation formula. Under null sampling the means
/// instead alternate +/- sigma on the first i groups and vanish beyond, so
/// the generating mean lies inside the nested span.
Eigen::VectorXd block_group_means(const GridGeometry& geometry,
                                  double delta_target, double sigma,
                                  bool null_sampling);

/// Separation of the block-mean design from its i-group prefix submodel:
/// sum over groups beyond the prefix of m_g * mu_g^2 / (n * sigma^2).
double block_distance(const GridGeometry& geometry, const Eigen::VectorXd& mu,
                      double sigma);

/// Residual sums of squares (reduced, full) of y on the block design,
/// computed from group sums in O(n) without forming the design matrix.
/// Matches the generic QR route on the equivalent indicator design.
std::pair<double, double> block_prefix_rss(const GridGeometry& geometry,
                                           const ResponseVector& y);

/// The geometry's block indicator design as an explicit matrix (test and
/// cross-check use; the runner never materializes it).
DesignMatrix block_indicator_design(const GridGeometry& geometry);

/// One response draw y = X beta + sigma * z with independent standard
/// normal z.
ResponseVector simulate_response(const TrueModelSpec& truth, RngStream& rng);

/// Runs the experiment, one trajectory per replicate, replicate index =
/// stream id. workers > 1 distributes replicates across threads; results are
/// bit-identical for any worker count because every replicate owns its
/// stream.
std::vector<TrajectoryRecord> run_experiment(const ExperimentConfig& cfg,
                                             int workers = 1);

}  // namespace bfgrow
