#include "cyltda/statistics.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <stdexcept>

#include "cyltda/parallel.hpp"
#include "cyltda/rng.hpp"

namespace cyltda {

double apf(const PersistenceDiagram& diagram, int q, double r_birth, double r_death) {
    if (r_birth > r_death) throw std::invalid_argument("apf: requires r_birth <= r_death");
    double sum = 0.0;
    for (const DiagramPoint& p : diagram.points)
        if (p.dim == q && !p.essential() && p.birth <= r_birth && p.death <= r_death)
            sum += p.death - p.birth;
    return sum;
}

double cluster_deaths_statistic(const PersistenceDiagram& diagram, double r_c, double lambda,
                                double window_area, bool adapt) {
    if (!(r_c > 0.0)) throw std::invalid_argument("cluster_deaths_statistic: r_c must be positive");
    if (!(window_area > 0.0))
        throw std::invalid_argument("cluster_deaths_statistic: window area must be positive");
    if (!adapt) lambda = 1.0;
    if (!(lambda > 0.0))
        throw std::invalid_argument("cluster_deaths_statistic: lambda must be positive");

    const double sqrt_lambda = std::sqrt(lambda);
    const double horizon = r_c / sqrt_lambda;
    double integral = 0.0;
    for (const DiagramPoint& p : diagram.points)
        if (p.dim == 0 && !p.essential() && p.death < horizon) integral += horizon - p.death;
    return integral / (sqrt_lambda * window_area);
}

double directed_apf(const BranchDiagram& diagram, double r_birth, double r_death) {
    if (r_birth > r_death) throw std::invalid_argument("directed_apf: requires r_birth <= r_death");
    const double shift = diagram.window.x_min;
    double sum = 0.0;
    for (const BranchPair& p : diagram.pairs) {
        if (p.essential()) continue;
        const double b = p.birth - shift;
        const double d = p.death - shift;
        if (b <= r_birth && d <= r_death) sum += d - b;
    }
    return sum;
}

StatisticSpec StatisticSpec::loop_lifetime_sum(ComplexKind kind, int q) {
    StatisticSpec s;
    s.kind = StatKind::loop_apf;
    s.q = q;
    s.complex_kind = kind;
    return s;
}

StatisticSpec StatisticSpec::cluster_deaths(ComplexKind kind) {
    StatisticSpec s;
    s.kind = StatKind::cluster_deaths;
    s.q = 0;
    s.complex_kind = kind;
    return s;
}

StatisticSpec StatisticSpec::branch_lifetime_sum() {
    StatisticSpec s;
    s.kind = StatKind::branch_apf;
    s.q = 0;
    return s;
}

std::string StatisticSpec::label() const {
    switch (kind) {
        case StatKind::branch_apf:
            return "tl_dsf";
        case StatKind::cluster_deaths:
            return complex_kind == ComplexKind::cech ? "tc" : "tc_vr";
        case StatKind::loop_apf:
            return complex_kind == ComplexKind::cech ? "tl_cech" : "tl_vr";
    }
    return "unknown";
}

namespace {

double resolve(double value, double fallback) { return std::isnan(value) ? fallback : value; }

double evaluate_on_diagram(const StatisticSpec& spec, const PersistenceDiagram& diagram,
                           const PointPattern& pattern) {
    if (spec.kind == StatKind::cluster_deaths) {
        const double lambda = spec.adapt_intensity ? estimate_intensity(pattern) : 1.0;
        return cluster_deaths_statistic(diagram, resolve(spec.r_birth, stat_defaults::cluster_radius),
                                        lambda, pattern.window.area(), spec.adapt_intensity);
    }
    return apf(diagram, spec.q, resolve(spec.r_birth, spec.truncation),
               resolve(spec.r_death, spec.truncation));
}

}  // namespace

std::vector<double> evaluate_statistics(std::span<const StatisticSpec> specs,
                                        const PointPattern& pattern) {
    std::vector<double> values(specs.size(), 0.0);

    // One diagram per distinct pipeline.
    std::map<std::pair<int, double>, PersistenceDiagram> complex_diagrams;
    bool branch_ready = false;
    BranchDiagram branch_diagram;

    for (std::size_t i = 0; i < specs.size(); ++i) {
        const StatisticSpec& spec = specs[i];
        if (spec.kind == StatKind::branch_apf) {
            if (!branch_ready) {
                branch_diagram = directed_persistence(build_dsf(pattern));
                branch_ready = true;
            }
            const double width = pattern.window.width();
            values[i] = directed_apf(branch_diagram, resolve(spec.r_birth, width),
                                     resolve(spec.r_death, width));
            continue;
        }
        const std::pair<int, double> key{static_cast<int>(spec.complex_kind), spec.truncation};
        auto it = complex_diagrams.find(key);
        if (it == complex_diagrams.end()) {
            it = complex_diagrams
                     .emplace(key, compute_persistence(
                                       build_complex(pattern, spec.complex_kind, spec.truncation)))
                     .first;
        }
        values[i] = evaluate_on_diagram(spec, it->second, pattern);
    }
    return values;
}

double evaluate_statistic(const StatisticSpec& spec, const PointPattern& pattern) {
    return evaluate_statistics(std::span<const StatisticSpec>(&spec, 1), pattern)[0];
}

std::vector<std::vector<double>> sample_null_statistics(std::span<const StatisticSpec> specs,
                                                        double intensity, const Window& window,
                                                        std::int64_t n, std::uint64_t seed,
                                                        int threads) {
    std::vector<std::vector<double>> out(specs.size(), std::vector<double>(static_cast<std::size_t>(n)));
    parallel_for(n, threads, [&](std::int64_t i) {
        const std::uint64_t rep_seed =
            Rng::derive(seed, {0xCA11B, static_cast<std::uint64_t>(i)}).bits();
        const PointPattern pattern = sample_poisson(window, intensity, rep_seed);
        const std::vector<double> values = evaluate_statistics(specs, pattern);
        for (std::size_t k = 0; k < specs.size(); ++k) out[k][static_cast<std::size_t>(i)] = values[k];
    });
    return out;
}

Calibration calibration_from_samples(std::span<const double> samples, std::uint64_t seed) {
    if (samples.size() < 100)
        throw std::invalid_argument("calibrate: need at least 100 calibration samples");
    double mean = 0.0;
    for (double x : samples) mean += x;
    mean /= static_cast<double>(samples.size());
    double ss = 0.0;
    for (double x : samples) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / static_cast<double>(samples.size() - 1));
    if (!(sd > 0.0)) throw std::runtime_error("calibrate: degenerate statistic (zero variance)");
    return Calibration{mean, sd, static_cast<std::int64_t>(samples.size()), seed};
}

Calibration calibrate(const StatisticSpec& spec, double null_intensity, const Window& window,
                      std::int64_t n_cal, std::uint64_t seed, int threads) {
    if (n_cal < 100) throw std::invalid_argument("calibrate: n_cal must be at least 100");
    const auto samples =
        sample_null_statistics(std::span<const StatisticSpec>(&spec, 1), null_intensity, window,
                               n_cal, seed, threads);
    return calibration_from_samples(samples[0], seed);
}

TestReport gof_test(const PointPattern& pattern, const StatisticSpec& spec,
                    const Calibration& calibration, double level) {
    if (!(calibration.sd > 0.0)) throw std::invalid_argument("gof_test: invalid calibration");
    if (!(level > 0.0 && level < 1.0)) throw std::invalid_argument("gof_test: level must be in (0, 1)");
    TestReport report;
    report.level = level;
    report.statistic = evaluate_statistic(spec, pattern);
    report.z = (report.statistic - calibration.mean) / calibration.sd;
    report.p_value = std::erfc(std::abs(report.z) / std::sqrt(2.0));
    report.reject = std::abs(report.z) > normal_quantile(1.0 - level / 2.0);
    return report;
}

ModelSpec ModelSpec::poisson_model(double lambda) {
    ModelSpec m;
    m.kind = Kind::poisson;
    m.lambda = lambda;
    m.column = "Poi";
    m.intensity = lambda;
    return m;
}

ModelSpec ModelSpec::matern_model(double lambda) {
    ModelSpec m;
    m.kind = Kind::matern;
    m.lambda = lambda;
    m.column = "MatC";
    m.matern = MaternParams{lambda, 0.5, 1.0};
    return m;
}

ModelSpec ModelSpec::strauss_model(double lambda, double beta, const Window& window) {
    ModelSpec m;
    m.kind = Kind::strauss;
    m.lambda = lambda;
    m.column = "Str";
    m.strauss = StraussParams{beta, 0.6, 0.5, default_strauss_steps(window, beta),
                              default_strauss_steps(window, beta) / 2};
    return m;
}

PointPattern ModelSpec::sample(const Window& window, std::uint64_t seed) const {
    switch (kind) {
        case Kind::poisson:
            return sample_poisson(window, intensity, seed);
        case Kind::matern:
            return sample_matern(window, matern, seed);
        case Kind::strauss:
            return sample_strauss(window, strauss, seed);
    }
    throw std::logic_error("ModelSpec: unknown kind");
}

double ExperimentCell::standard_error() const {
    if (n_reps <= 0) return 0.0;
    const double p = rate();
    return std::sqrt(p * (1.0 - p) / static_cast<double>(n_reps));
}

const ExperimentCell* ExperimentTable::find(double lambda, const std::string& column) const {
    for (const ExperimentCell& c : cells)
        if (c.lambda == lambda && c.column == column) return &c;
    return nullptr;
}

std::vector<ExperimentTable> rejection_experiment(const Window& window,
                                                  const std::vector<ModelSpec>& models,
                                                  const std::vector<CalibratedStatistic>& statistics,
                                                  long n_reps, double level, std::uint64_t seed,
                                                  int threads) {
    if (n_reps <= 0) throw std::invalid_argument("rejection_experiment: n_reps must be positive");

    std::vector<StatisticSpec> specs;
    specs.reserve(statistics.size());
    for (const auto& cs : statistics) specs.push_back(cs.spec);
    const double threshold = normal_quantile(1.0 - level / 2.0);

    std::vector<ExperimentTable> tables(statistics.size());
    for (std::size_t k = 0; k < statistics.size(); ++k)
        tables[k].statistic_label = statistics[k].spec.label();

    for (std::size_t m = 0; m < models.size(); ++m) {
        const ModelSpec& model = models[m];
        // rejected[rep * n_stats + k]
        std::vector<char> rejected(static_cast<std::size_t>(n_reps) * statistics.size(), 0);
        parallel_for(n_reps, threads, [&](std::int64_t rep) {
            const std::uint64_t rep_seed =
                Rng::derive(seed, {0x7E57, static_cast<std::uint64_t>(m), static_cast<std::uint64_t>(rep)})
                    .bits();
            const PointPattern pattern = model.sample(window, rep_seed);
            const std::vector<double> values = evaluate_statistics(specs, pattern);
            for (std::size_t k = 0; k < statistics.size(); ++k) {
                const double z =
                    (values[k] - statistics[k].calibration.mean) / statistics[k].calibration.sd;
                rejected[static_cast<std::size_t>(rep) * statistics.size() + k] =
                    std::abs(z) > threshold ? 1 : 0;
            }
        });
        for (std::size_t k = 0; k < statistics.size(); ++k) {
            ExperimentCell cell;
            cell.lambda = model.lambda;
            cell.column = model.column;
            cell.n_reps = n_reps;
            for (long rep = 0; rep < n_reps; ++rep)
                cell.rejections += rejected[static_cast<std::size_t>(rep) * statistics.size() + k];
            tables[k].cells.push_back(cell);
            if (std::find(tables[k].lambdas.begin(), tables[k].lambdas.end(), model.lambda) ==
                tables[k].lambdas.end())
                tables[k].lambdas.push_back(model.lambda);
            if (std::find(tables[k].columns.begin(), tables[k].columns.end(), model.column) ==
                tables[k].columns.end())
                tables[k].columns.push_back(model.column);
        }
    }
    return tables;
}

NormalityReport normality_diagnostics(std::span<const double> samples) {
    if (samples.size() < 1000)
        throw std::invalid_argument("normality_diagnostics: need at least 1000 samples");

    const auto n = static_cast<double>(samples.size());
    double mean = 0.0;
    for (double x : samples) mean += x;
    mean /= n;
    double m2 = 0.0, m3 = 0.0, m4 = 0.0;
    for (double x : samples) {
        const double d = x - mean;
        m2 += d * d;
        m3 += d * d * d;
        m4 += d * d * d * d;
    }
    m2 /= n;
    m3 /= n;
    m4 /= n;
    if (!(m2 > 0.0)) throw std::runtime_error("normality_diagnostics: degenerate sample variance");

    std::vector<double> z(samples.begin(), samples.end());
    const double sd = std::sqrt(m2);
    for (double& x : z) x = (x - mean) / sd;
    std::sort(z.begin(), z.end());

    double ks = 0.0;
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double cdf = normal_cdf(z[i]);
        ks = std::max(ks, std::max(cdf - static_cast<double>(i) / n,
                                   static_cast<double>(i + 1) / n - cdf));
    }

    NormalityReport report;
    report.ks_distance = ks;
    report.skewness = m3 / std::pow(m2, 1.5);
    report.excess_kurtosis = m4 / (m2 * m2) - 3.0;
    return report;
}

HistogramData histogram(std::span<const double> samples, int bins) {
    if (bins <= 0) throw std::invalid_argument("histogram: bins must be positive");
    if (samples.empty()) throw std::invalid_argument("histogram: empty sample");
    double lo = samples[0], hi = samples[0];
    for (double x : samples) {
        lo = std::min(lo, x);
        hi = std::max(hi, x);
    }
    if (hi == lo) hi = lo + 1.0;
    HistogramData h;
    h.edges.resize(static_cast<std::size_t>(bins) + 1);
    h.counts.assign(static_cast<std::size_t>(bins), 0);
    for (int b = 0; b <= bins; ++b)
        h.edges[static_cast<std::size_t>(b)] = lo + (hi - lo) * static_cast<double>(b) / bins;
    for (double x : samples) {
        auto b = static_cast<long>((x - lo) / (hi - lo) * bins);
        b = std::clamp<long>(b, 0, bins - 1);
        ++h.counts[static_cast<std::size_t>(b)];
    }
    return h;
}

std::vector<std::pair<double, double>> qq_points(std::span<const double> samples) {
    std::vector<double> z(samples.begin(), samples.end());
    double mean = 0.0;
    for (double x : z) mean += x;
    mean /= static_cast<double>(z.size());
    double ss = 0.0;
    for (double x : z) ss += (x - mean) * (x - mean);
    const double sd = std::sqrt(ss / static_cast<double>(z.size()));
    if (!(sd > 0.0)) throw std::runtime_error("qq_points: degenerate sample variance");
    for (double& x : z) x = (x - mean) / sd;
    std::sort(z.begin(), z.end());

    std::vector<std::pair<double, double>> qq(z.size());
    for (std::size_t i = 0; i < z.size(); ++i) {
        const double p = (static_cast<double>(i) + 0.5) / static_cast<double>(z.size());
        qq[i] = {normal_quantile(p), z[i]};
    }
    return qq;
}

std::vector<VarianceRow> variance_scaling_check(
    const std::function<double(const PointPattern&)>& statistic, double height,
    std::span<const double> x_lengths, long n_reps, double intensity, std::uint64_t seed,
    int threads) {
    if (x_lengths.size() < 2)
        throw std::invalid_argument("variance_scaling_check: need at least two window lengths");
    if (n_reps < 2) throw std::invalid_argument("variance_scaling_check: need n_reps >= 2");

    std::vector<VarianceRow> rows;
    for (std::size_t li = 0; li < x_lengths.size(); ++li) {
        const double n_x = x_lengths[li];
        const Window window = Window::centered(n_x, height);
        std::vector<double> values(static_cast<std::size_t>(n_reps));
        parallel_for(n_reps, threads, [&](std::int64_t rep) {
            const std::uint64_t rep_seed =
                Rng::derive(seed, {0x5CA1E, static_cast<std::uint64_t>(li), static_cast<std::uint64_t>(rep)})
                    .bits();
            values[static_cast<std::size_t>(rep)] = statistic(sample_poisson(window, intensity, rep_seed));
        });
        double mean = 0.0;
        for (double v : values) mean += v;
        mean /= static_cast<double>(n_reps);
        double ss = 0.0;
        for (double v : values) ss += (v - mean) * (v - mean);
        const double variance = ss / static_cast<double>(n_reps - 1);
        rows.push_back({n_x, variance, variance / n_x});
    }
    return rows;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

// Wichura's AS 241 (PPND16): double-precision inverse normal CDF.
double normal_quantile(double p) {
    if (!(p > 0.0 && p < 1.0)) throw std::invalid_argument("normal_quantile: p must be in (0, 1)");
    const double q = p - 0.5;
    if (std::abs(q) <= 0.425) {
        const double r = 0.180625 - q * q;
        return q *
               (((((((2.5090809287301226727e+3 * r + 3.3430575583588128105e+4) * r +
                     6.7265770927008700853e+4) * r + 4.5921953931549871457e+4) * r +
                   1.3731693765509461125e+4) * r + 1.9715909503065514427e+3) * r +
                 1.3314166789178437745e+2) * r + 3.3871328727963666080e+0) /
               (((((((5.2264952788528545610e+3 * r + 2.8729085735721942674e+4) * r +
                     3.9307895800092710610e+4) * r + 2.1213794301586595867e+4) * r +
                   5.3941960214247511077e+3) * r + 6.8718700749205790830e+2) * r +
                 4.2313330701600911252e+1) * r + 1.0);
    }
    double r = q < 0.0 ? p : 1.0 - p;
    r = std::sqrt(-std::log(r));
    double value;
    if (r <= 5.0) {
        r -= 1.6;
        value = (((((((7.74545014278341407640e-4 * r + 2.27238449892691845833e-2) * r +
                      2.41780725177450611770e-1) * r + 1.27045825245236838258e+0) * r +
                    3.64784832476320460504e+0) * r + 5.76949722146069140550e+0) * r +
                  4.63033784615654529590e+0) * r + 1.42343711074968357734e+0) /
                (((((((1.05075007164441684324e-9 * r + 5.47593808499534494600e-4) * r +
                      1.51986665636164571966e-2) * r + 1.48103976427480074590e-1) * r +
                    6.89767334985100004550e-1) * r + 1.67638483018380384940e+0) * r +
                  2.05319162663775882187e+0) * r + 1.0);
    } else {
        r -= 5.0;
        value = (((((((2.01033439929228813265e-7 * r + 2.71155556874348757815e-5) * r +
                      1.24266094738807843860e-3) * r + 2.65321895265761230930e-2) * r +
                    2.96560571828504891230e-1) * r + 1.78482653991729133580e+0) * r +
                  5.46378491116411436990e+0) * r + 6.65790464350110377720e+0) /
                (((((((2.04426310338993978564e-15 * r + 1.42151175831644588870e-7) * r +
                      1.84631831751005468180e-5) * r + 7.86869131145613259100e-4) * r +
                    1.48753612908506148525e-2) * r + 1.36929880922735805310e-1) * r +
                  5.99832206555887937690e-1) * r + 1.0);
    }
    return q < 0.0 ? -value : value;
}

}  // namespace cyltda
