#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "cyltda/directed_network.hpp"
#include "cyltda/persistence.hpp"

namespace cyltda {

/// Default statistic parameters (chosen by pilot calibration at the
/// intensity-2 scale; all overridable).
namespace stat_defaults {
inline constexpr double truncation = 1.5;      // feature-tracking horizon T
inline constexpr double cluster_radius = 0.5;  // r_C
}  // namespace stat_defaults

/// Sum of lifetimes of finite dim-q points with birth <= r_birth and
/// death <= r_death.
double apf(const PersistenceDiagram& diagram, int q, double r_birth, double r_death);

/// T_C: (1 / (sqrt(lambda) |W|)) * integral_0^{r_c/sqrt(lambda)} of the H0
/// death-counting function, evaluated in closed form. With adapt off the
/// statistic uses lambda = 1.
double cluster_deaths_statistic(const PersistenceDiagram& diagram, double r_c, double lambda,
                                double window_area, bool adapt);

/// Sum of branch lifetimes with (window-shifted) birth <= r_birth and
/// death <= r_death; essential branches excluded.
double directed_apf(const BranchDiagram& diagram, double r_birth, double r_death);

enum class StatKind { loop_apf, cluster_deaths, branch_apf };

/// A scalar statistic plus the pipeline that produces its diagram.
/// NaN thresholds resolve per kind: loop thresholds to the truncation,
/// branch thresholds to the window width, the cluster radius to 0.5.
struct StatisticSpec {
    StatKind kind = StatKind::loop_apf;
    int q = 1;
    double r_birth = std::numeric_limits<double>::quiet_NaN();
    double r_death = std::numeric_limits<double>::quiet_NaN();
    bool adapt_intensity = true;
    ComplexKind complex_kind = ComplexKind::cech;
    double truncation = stat_defaults::truncation;

    static StatisticSpec loop_lifetime_sum(ComplexKind kind = ComplexKind::cech, int q = 1);
    static StatisticSpec cluster_deaths(ComplexKind kind = ComplexKind::cech);
    static StatisticSpec branch_lifetime_sum();

    std::string label() const;
};

double evaluate_statistic(const StatisticSpec& spec, const PointPattern& pattern);

/// Evaluates several statistics on one pattern, computing each diagram once.
std::vector<double> evaluate_statistics(std::span<const StatisticSpec> specs,
                                        const PointPattern& pattern);

struct Calibration {
    double mean = 0.0;
    double sd = 1.0;
    std::int64_t n_cal = 0;
    std::uint64_t seed = 0;
};

/// Statistic values over n independent Poisson(intensity) realizations,
/// deterministic in (seed), independent of thread count.
std::vector<std::vector<double>> sample_null_statistics(std::span<const StatisticSpec> specs,
                                                        double intensity, const Window& window,
                                                        std::int64_t n, std::uint64_t seed,
                                                        int threads);

/// Sample mean and unbiased sd; throws on degenerate (zero-variance) input.
Calibration calibration_from_samples(std::span<const double> samples, std::uint64_t seed);

Calibration calibrate(const StatisticSpec& spec, double null_intensity, const Window& window,
                      std::int64_t n_cal, std::uint64_t seed, int threads);

struct TestReport {
    double statistic = 0.0;
    double z = 0.0;
    double p_value = 1.0;
    bool reject = false;
    double level = 0.05;
};

TestReport gof_test(const PointPattern& pattern, const StatisticSpec& spec,
                    const Calibration& calibration, double level);

/// Point-process model used as a table cell: the null or an alternative
/// pinned to a target intensity (the table row).
struct ModelSpec {
    enum class Kind { poisson, matern, strauss };
    Kind kind = Kind::poisson;
    double lambda = 2.0;      // row label: matched target intensity
    std::string column;       // column label, e.g. "Poi"
    double intensity = 2.0;   // poisson
    MaternParams matern;
    StraussParams strauss;

    static ModelSpec poisson_model(double lambda);
    static ModelSpec matern_model(double lambda);
    /// Strauss with gamma = 0.6, r = 0.5 and beta matched to the target
    /// intensity (the three studied pairings), default chain length.
    static ModelSpec strauss_model(double lambda, double beta, const Window& window);

    PointPattern sample(const Window& window, std::uint64_t seed) const;
};

struct ExperimentCell {
    double lambda = 0.0;
    std::string column;
    long rejections = 0;
    long n_reps = 0;
    double rate() const { return n_reps > 0 ? static_cast<double>(rejections) / static_cast<double>(n_reps) : 0.0; }
    double standard_error() const;
};

struct ExperimentTable {
    std::string statistic_label;
    std::vector<double> lambdas;       // row order
    std::vector<std::string> columns;  // column order
    std::vector<ExperimentCell> cells;

    const ExperimentCell* find(double lambda, const std::string& column) const;
};

struct CalibratedStatistic {
    StatisticSpec spec;
    Calibration calibration;
};

/// Runs n_reps tests per model cell for every calibrated statistic on shared
/// samples; rejection rates with binomial standard errors.
std::vector<ExperimentTable> rejection_experiment(const Window& window,
                                                  const std::vector<ModelSpec>& models,
                                                  const std::vector<CalibratedStatistic>& statistics,
                                                  long n_reps, double level, std::uint64_t seed,
                                                  int threads);

struct NormalityReport {
    double ks_distance = 0.0;
    double skewness = 0.0;
    double excess_kurtosis = 0.0;
};

/// Standardizes the samples and reports sup-distance to the standard normal
/// CDF, skewness and excess kurtosis. Requires >= 1000 samples.
NormalityReport normality_diagnostics(std::span<const double> samples);

struct HistogramData {
    std::vector<double> edges;   // size bins + 1
    std::vector<long> counts;    // size bins
};

HistogramData histogram(std::span<const double> samples, int bins);

/// (theoretical, empirical) quantile pairs of the standardized samples.
std::vector<std::pair<double, double>> qq_points(std::span<const double> samples);

struct VarianceRow {
    double x_length = 0.0;
    double variance = 0.0;
    double var_over_n = 0.0;
};

/// Empirical Var(statistic)/n over Poisson patterns in windows
/// [-n/2, n/2] x [0, height] for each n in x_lengths.
std::vector<VarianceRow> variance_scaling_check(
    const std::function<double(const PointPattern&)>& statistic, double height,
    std::span<const double> x_lengths, long n_reps, double intensity, std::uint64_t seed,
    int threads);

double normal_cdf(double x);
double normal_quantile(double p);

}  // namespace cyltda
