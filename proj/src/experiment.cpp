#include "bfgrow/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <exception>
#include <limits>
#include <string>
#include <thread>

namespace bfgrow {

GridGeometry resolve_grid_point(const GrowthRegime& regime,
                                std::int64_t n_requested) {
    if (n_requested < 2) {
        throw ConfigError("resolve_grid_point: grid n must be >= 2");
    }
    GridGeometry g;
    if (regime.full_dimension_linear()) {
        g.p = std::max<std::int64_t>(
            1, std::llround(static_cast<double>(n_requested) / *regime.r));
        g.n = std::llround(*regime.r * static_cast<double>(g.p));
    } else {
        g.n = n_requested;
        g.p = std::max<std::int64_t>(
            1, std::llround(std::pow(static_cast<double>(g.n), regime.b)));
    }
    if (regime.nested_dimension_linear()) {
        g.i = std::max<std::int64_t>(
            1, std::llround(static_cast<double>(g.n) / *regime.s));
    } else {
        g.i = std::max<std::int64_t>(
            1, std::llround(std::pow(static_cast<double>(g.n), regime.a)));
    }
    if (g.n <= g.p) {
        throw ConfigError("resolve_grid_point: n <= p at grid point n=" +
                          std::to_string(n_requested));
    }
    if (g.i >= g.p) {
        throw ConfigError(
            "resolve_grid_point: nested dimension reaches the full dimension "
            "at grid point n=" + std::to_string(n_requested));
    }
    const std::int64_t base = g.n / g.p;
    const std::int64_t extra = g.n % g.p;
    g.group_sizes.assign(static_cast<std::size_t>(g.p), base);
    for (std::int64_t k = 0; k < extra; ++k) {
        ++g.group_sizes[static_cast<std::size_t>(k)];
    }
    return g;
}

Eigen::VectorXd block_group_means(const GridGeometry& geometry,
                                  double delta_target, double sigma,
                                  bool null_sampling) {
    if (!(sigma > 0.0)) {
        throw DomainError("block_group_means: sigma must be positive");
    }
    if (!(delta_target >= 0.0)) {
        throw DomainError("block_group_means: delta_target must be >= 0");
    }
    Eigen::VectorXd mu = Eigen::VectorXd::Zero(geometry.p);
    if (null_sampling) {
        for (std::int64_t g = 0; g < geometry.i; ++g) {
            mu[g] = (g % 2 == 0) ? sigma : -sigma;
        }
        return mu;
    }
    double tail_weight = 0.0;
    for (std::int64_t g = geometry.i; g < geometry.p; ++g) {
        tail_weight += static_cast<double>(
            geometry.group_sizes[static_cast<std::size_t>(g)]);
    }
    const double c =
        sigma * std::sqrt(delta_target * static_cast<double>(geometry.n) /
                          tail_weight);
    for (std::int64_t g = geometry.i; g < geometry.p; ++g) {
        mu[g] = ((g - geometry.i) % 2 == 0) ? c : -c;
    }
    return mu;
}

double block_distance(const GridGeometry& geometry, const Eigen::VectorXd& mu,
                      double sigma) {
    if (mu.size() != geometry.p) {
        throw DimensionError(
            "block_distance: means length must equal the group count");
    }
    if (!(sigma > 0.0)) {
        throw DomainError("block_distance: sigma must be positive");
    }
    double ss = 0.0;
    for (std::int64_t g = geometry.i; g < geometry.p; ++g) {
        const double m = static_cast<double>(
            geometry.group_sizes[static_cast<std::size_t>(g)]);
        ss += m * mu[g] * mu[g];
    }
    return ss / (static_cast<double>(geometry.n) * sigma * sigma);
}

std::pair<double, double> block_prefix_rss(const GridGeometry& geometry,
                                           const ResponseVector& y) {
    if (y.size() != geometry.n) {
        throw DimensionError("block_prefix_rss: response length mismatch");
    }
    double reduced = 0.0;
    double full = 0.0;
    Eigen::Index offset = 0;
    for (std::int64_t g = 0; g < geometry.p; ++g) {
        const Eigen::Index m = static_cast<Eigen::Index>(
            geometry.group_sizes[static_cast<std::size_t>(g)]);
        const auto segment = y.segment(offset, m);
        const double within =
            (segment.array() - segment.mean()).square().sum();
        full += within;
        reduced += (g < geometry.i) ? within : segment.squaredNorm();
        offset += m;
    }
    return {reduced, full};
}

DesignMatrix block_indicator_design(const GridGeometry& geometry) {
    Eigen::MatrixXd x = Eigen::MatrixXd::Zero(geometry.n, geometry.p);
    Eigen::Index offset = 0;
    for (std::int64_t g = 0; g < geometry.p; ++g) {
        const Eigen::Index m = static_cast<Eigen::Index>(
            geometry.group_sizes[static_cast<std::size_t>(g)]);
        x.block(offset, g, m, 1).setOnes();
        offset += m;
    }
    return DesignMatrix(std::move(x));
}

ResponseVector simulate_response(const TrueModelSpec& truth, RngStream& rng) {
    ResponseVector y = truth.design.entries() * truth.coefficients;
    if (truth.sigma > 0.0) {
        for (Eigen::Index k = 0; k < y.size(); ++k) {
            y[k] += truth.sigma * rng.normal();
        }
    }
    return y;
}

namespace {

// All per-grid-point state the replicate loop needs, precomputed once.
struct PreparedPoint {
    GridGeometry geometry;
    Eigen::VectorXd mu;
    double delta = 0.0;
};

TrajectoryRecord run_one_replicate(const ExperimentConfig& cfg,
                                   const std::vector<PreparedPoint>& points,
                                   std::int64_t replicate) {
    RngStream rng(cfg.seed, static_cast<std::uint64_t>(replicate));
    TrajectoryRecord record;
    record.seed = cfg.seed;
    record.stream_id = static_cast<std::uint64_t>(replicate);
    record.points.reserve(points.size());
    for (const PreparedPoint& pt : points) {
        const GridGeometry& g = pt.geometry;
        // Draw y group by group (rows of the block design are ordered the
        // same way, so this matches simulate_response on that design).
        ResponseVector y(g.n);
        Eigen::Index row = 0;
        for (std::int64_t grp = 0; grp < g.p; ++grp) {
            const std::int64_t m =
                g.group_sizes[static_cast<std::size_t>(grp)];
            for (std::int64_t k = 0; k < m; ++k, ++row) {
                y[row] = pt.mu[grp] + rng.normal();
            }
        }
        const auto [reduced, full] = block_prefix_rss(g, y);
        if (!(reduced > 0.0)) {
            throw DegenerateFit(
                "run_experiment: zero reduced residual sum of squares");
        }
        GridPointResult res;
        res.n = g.n;
        res.p = g.p;
        res.i = g.i;
        res.delta = pt.delta;
        res.bip = std::clamp(full / reduced,
                             std::numeric_limits<double>::min(), 1.0);
        const double log_bip =
            std::min(0.0, std::log(full) - std::log(reduced));
        const BayesFactorResult bf = log_intrinsic_bf(g.n, g.p, g.i, log_bip);
        res.log_bf = bf.log_bf_intrinsic;
        res.log_bic = bf.log_bic;
        if (!std::isfinite(res.log_bf) || !std::isfinite(res.log_bic)) {
            throw DegenerateFit(
                "run_experiment: non-finite Bayes factor at n=" +
                std::to_string(g.n));
        }
        record.points.push_back(res);
    }
    return record;
}

}  // namespace

std::vector<TrajectoryRecord> run_experiment(const ExperimentConfig& cfg,
                                             int workers) {
    if (cfg.n_grid.empty()) {
        throw ConfigError("run_experiment: n_grid must be non-empty");
    }
    for (std::size_t k = 1; k < cfg.n_grid.size(); ++k) {
        if (cfg.n_grid[k] <= cfg.n_grid[k - 1]) {
            throw ConfigError(
                "run_experiment: n_grid must be strictly increasing");
        }
    }
    if (cfg.replicates < 1) {
        throw ConfigError("run_experiment: replicates must be >= 1");
    }
    if (!(cfg.delta_target >= 0.0) || !std::isfinite(cfg.delta_target)) {
        throw ConfigError("run_experiment: delta_target must be finite >= 0");
    }

    constexpr double kSigma = 1.0;  // separation absorbs the noise scale
    std::vector<PreparedPoint> points;
    points.reserve(cfg.n_grid.size());
    for (const std::int64_t n : cfg.n_grid) {
        PreparedPoint pt;
        pt.geometry = resolve_grid_point(cfg.regime, n);
        pt.mu = block_group_means(pt.geometry, cfg.delta_target, kSigma,
                                  cfg.null_sampling);
        pt.delta = block_distance(pt.geometry, pt.mu, kSigma);
        points.push_back(std::move(pt));
    }

    std::vector<TrajectoryRecord> records(
        static_cast<std::size_t>(cfg.replicates));
    const int thread_count = std::max(
        1, std::min<int>(workers, static_cast<int>(cfg.replicates)));
    if (thread_count == 1) {
        for (std::int64_t rep = 0; rep < cfg.replicates; ++rep) {
            records[static_cast<std::size_t>(rep)] =
                run_one_replicate(cfg, points, rep);
        }
        return records;
    }

    std::vector<std::thread> threads;
    std::vector<std::exception_ptr> failures(
        static_cast<std::size_t>(thread_count));
    for (int t = 0; t < thread_count; ++t) {
        threads.emplace_back([&, t]() {
            try {
                for (std::int64_t rep = t; rep < cfg.replicates;
                     rep += thread_count) {
                    records[static_cast<std::size_t>(rep)] =
                        run_one_replicate(cfg, points, rep);
                }
            } catch (...) {
                failures[static_cast<std::size_t>(t)] =
                    std::current_exception();
            }
        });
    }
    for (std::thread& th : threads) th.join();
    for (const std::exception_ptr& failure : failures) {
        if (failure) std::rethrow_exception(failure);
    }
    return records;
}

}  // namespace bfgrow
