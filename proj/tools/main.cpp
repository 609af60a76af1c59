// Command-line front end: sampling, diagram computation, rejection-rate
// experiments and normality diagnostics. Every command is a deterministic
// function of (config file + flags + seed); outputs carry no timestamps.

#include <bit>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "cyltda/betti_oracle.hpp"
#include "cyltda/io.hpp"
#include "cyltda/parallel.hpp"
#include "cyltda/rng.hpp"
#include "cyltda/statistics.hpp"

namespace {

using namespace cyltda;

std::vector<std::string> split_list(const std::string& s) {
    std::vector<std::string> out;
    std::stringstream ss(s);
    std::string item;
    while (std::getline(ss, item, ','))
        if (!item.empty()) out.push_back(item);
    return out;
}

std::vector<double> parse_doubles(const std::string& s) {
    std::vector<double> out;
    for (const std::string& item : split_list(s)) out.push_back(std::stod(item));
    return out;
}

/// "15x5" -> [-7.5, 7.5] x [0, 5].
Window parse_window(const std::string& s) {
    const auto x = s.find('x');
    if (x == std::string::npos || x == 0 || x + 1 >= s.size())
        throw CLI::ValidationError("--window", "expected LENGTHxHEIGHT, e.g. 15x5");
    try {
        const double len = std::stod(s.substr(0, x));
        const double h = std::stod(s.substr(x + 1));
        const Window w = Window::centered(len, h);
        validate_window(w);
        return w;
    } catch (const CLI::ValidationError&) {
        throw;
    } catch (const std::exception&) {
        throw CLI::ValidationError("--window", "expected LENGTHxHEIGHT, e.g. 15x5");
    }
}

StatisticSpec spec_from_label(const std::string& label, double truncation) {
    StatisticSpec s;
    if (label == "tl_dsf")
        s = StatisticSpec::branch_lifetime_sum();
    else if (label == "tc")
        s = StatisticSpec::cluster_deaths(ComplexKind::cech);
    else if (label == "tc_vr")
        s = StatisticSpec::cluster_deaths(ComplexKind::vietoris_rips);
    else if (label == "tl_cech")
        s = StatisticSpec::loop_lifetime_sum(ComplexKind::cech);
    else if (label == "tl_vr")
        s = StatisticSpec::loop_lifetime_sum(ComplexKind::vietoris_rips);
    else
        throw CLI::ValidationError("--stats", "unknown statistic: " + label);
    s.truncation = truncation;
    return s;
}

std::uint64_t lambda_tag(double lambda) { return std::bit_cast<std::uint64_t>(lambda); }

struct SampleOptions {
    std::string model = "poisson";
    std::string window = "15x5";
    std::string out = "pattern";
    std::uint64_t seed = 1;
    double intensity = 2.0;
    double kappa = 2.0, disk_radius = 0.5, mu = 1.0;
    double beta = 4.0, gamma = 0.6, r = 0.5;
    std::uint64_t steps = 0, burn_in = 0;  // 0: derive defaults
};

int run_sample(const SampleOptions& opt) {
    const Window window = parse_window(opt.window);
    PointPattern pattern;
    nlohmann::json params;
    if (opt.model == "poisson") {
        pattern = sample_poisson(window, opt.intensity, opt.seed);
        params = {{"intensity", opt.intensity}};
    } else if (opt.model == "matern") {
        const MaternParams mp{opt.kappa, opt.disk_radius, opt.mu};
        pattern = sample_matern(window, mp, opt.seed);
        params = {{"kappa", mp.kappa}, {"disk_radius", mp.disk_radius}, {"mu", mp.mu}};
    } else if (opt.model == "strauss") {
        StraussParams sp{opt.beta, opt.gamma, opt.r, opt.steps, opt.burn_in};
        if (sp.steps == 0) {
            sp.steps = default_strauss_steps(window, sp.beta);
            sp.burn_in = sp.steps / 2;
        }
        pattern = sample_strauss(window, sp, opt.seed);
        params = {{"beta", sp.beta},       {"gamma", sp.gamma}, {"r", sp.r},
                  {"steps", sp.steps},     {"burn_in", sp.burn_in}};
    } else {
        throw CLI::ValidationError("--model", "unknown model: " + opt.model);
    }
    write_pattern_csv(pattern, opt.out + ".csv");
    write_pattern_sidecar(pattern, opt.model, params.dump(), opt.out + ".json");
    std::cout << "wrote " << pattern.points.size() << " points to " << opt.out << ".csv\n";
    return 0;
}

struct DiagramOptions {
    std::string pipeline = "cech";
    std::string in;
    std::string out = "diagram.csv";
    std::string svg;
    std::string dump_complex;
    double truncation = 1.0;
    double radius = 1.0;
    int q = -1;  // -1: all dimensions
};

int run_diagram(const DiagramOptions& opt) {
    const PointPattern pattern = read_pattern_csv(opt.in);

    if (opt.pipeline == "dsf" || opt.pipeline == "gilbert") {
        const DirectedNetwork net = opt.pipeline == "dsf" ? build_dsf(pattern)
                                                          : build_gilbert(pattern, opt.radius);
        const BranchDiagram diagram = directed_persistence(net);
        write_branch_diagram_csv(diagram, opt.out);
        if (!opt.svg.empty()) write_text_file(opt.svg, branch_diagram_svg(diagram));
        std::cout << "wrote " << diagram.pairs.size() << " pairs to " << opt.out << '\n';
        return 0;
    }
    if (opt.pipeline != "cech" && opt.pipeline != "vr")
        throw CLI::ValidationError("--pipeline", "expected dsf, gilbert, cech or vr");

    const ComplexKind kind = opt.pipeline == "cech" ? ComplexKind::cech : ComplexKind::vietoris_rips;
    const FilteredComplex complex = build_complex(pattern, kind, opt.truncation);
    if (!opt.dump_complex.empty()) write_complex_dump(complex, opt.dump_complex);
    PersistenceDiagram diagram = compute_persistence(complex);
    if (opt.q >= 0)
        std::erase_if(diagram.points, [&](const DiagramPoint& p) { return p.dim != opt.q; });
    write_diagram_csv(diagram, opt.out);
    if (!opt.svg.empty()) write_text_file(opt.svg, diagram_svg(diagram));
    std::cout << "wrote " << diagram.points.size() << " points to " << opt.out << '\n';
    return 0;
}

struct ExperimentOptions {
    std::string out = "experiment";
    std::string window = "15x5";
    std::string stats = "tl_dsf,tc,tl_cech";
    std::string lambdas = "1.6,2.0,2.4";
    std::string models = "poi,matc,str";
    std::string strauss_betas = "";
    long n_reps = 1000;
    long n_cal = 10000;
    double level = 0.05;
    double truncation = stat_defaults::truncation;
    std::uint64_t seed = 42;
    int threads = 0;
};

double strauss_beta_for(double lambda, const std::vector<double>& lambdas,
                        const std::vector<double>& betas) {
    for (std::size_t i = 0; i < lambdas.size() && i < betas.size(); ++i)
        if (lambdas[i] == lambda) return betas[i];
    // Paired intensities from the simulation study.
    if (lambda == 1.6) return 2.7;
    if (lambda == 2.0) return 4.0;
    if (lambda == 2.4) return 5.4;
    throw CLI::ValidationError("--strauss-betas",
                               "no beta known for lambda " + format_double(lambda) +
                                   "; pass --strauss-betas matching --lambdas");
}

int run_experiment(const ExperimentOptions& opt) {
    const Window window = parse_window(opt.window);
    const std::vector<double> lambdas = parse_doubles(opt.lambdas);
    const std::vector<double> betas = parse_doubles(opt.strauss_betas);
    const std::vector<std::string> model_names = split_list(opt.models);
    const std::vector<std::string> stat_names = split_list(opt.stats);
    const int threads = opt.threads > 0 ? opt.threads : default_thread_count();

    std::vector<StatisticSpec> specs;
    for (const std::string& name : stat_names) specs.push_back(spec_from_label(name, opt.truncation));

    std::filesystem::create_directories(opt.out);
    const auto marker_path = [&](const std::string& name) {
        return (std::filesystem::path(opt.out) / name).string();
    };

    // Calibrations, one marker per lambda (all statistics share the samples).
    std::map<std::pair<double, std::string>, Calibration> calibrations;
    for (double lambda : lambdas) {
        const std::string marker = marker_path("cal_" + format_double(lambda) + ".json");
        nlohmann::json j;
        if (std::filesystem::exists(marker)) {
            std::ifstream in(marker);
            in >> j;
        }
        bool complete = !j.is_null();
        for (const std::string& name : stat_names)
            if (!j.contains(name)) complete = false;
        if (!complete) {
            const std::uint64_t cal_seed = Rng::derive(opt.seed, {0xCA1, lambda_tag(lambda)}).bits();
            const auto samples = sample_null_statistics(specs, lambda, window, opt.n_cal, cal_seed, threads);
            j = nlohmann::json::object();
            for (std::size_t k = 0; k < specs.size(); ++k) {
                const Calibration cal = calibration_from_samples(samples[k], cal_seed);
                j[stat_names[k]] = {{"mean", cal.mean}, {"sd", cal.sd}, {"n_cal", cal.n_cal}, {"seed", cal.seed}};
            }
            std::ofstream out(marker);
            out << j.dump(2) << '\n';
        }
        for (const std::string& name : stat_names)
            calibrations[{lambda, name}] = Calibration{j[name]["mean"], j[name]["sd"],
                                                       j[name]["n_cal"], j[name]["seed"]};
    }

    // Rejection cells, one marker per (lambda, model).
    std::vector<ExperimentTable> tables(specs.size());
    for (std::size_t k = 0; k < specs.size(); ++k) {
        tables[k].statistic_label = stat_names[k];
        tables[k].lambdas = lambdas;
        for (const std::string& name : model_names)
            tables[k].columns.push_back(name == "poi" ? "Poi" : name == "matc" ? "MatC" : "Str");
    }

    for (double lambda : lambdas) {
        for (const std::string& name : model_names) {
            ModelSpec model;
            if (name == "poi")
                model = ModelSpec::poisson_model(lambda);
            else if (name == "matc")
                model = ModelSpec::matern_model(lambda);
            else if (name == "str")
                model = ModelSpec::strauss_model(lambda, strauss_beta_for(lambda, lambdas, betas), window);
            else
                throw CLI::ValidationError("--models", "unknown model: " + name);

            const std::string marker =
                marker_path("cell_" + format_double(lambda) + "_" + model.column + ".json");
            nlohmann::json j;
            if (std::filesystem::exists(marker)) {
                std::ifstream in(marker);
                in >> j;
            }
            bool complete = !j.is_null() && j.value("n_reps", -1L) == opt.n_reps;
            for (const std::string& sname : stat_names)
                if (!j.contains("rejections") || !j["rejections"].contains(sname)) complete = false;

            if (!complete) {
                std::vector<CalibratedStatistic> stats;
                for (std::size_t k = 0; k < specs.size(); ++k)
                    stats.push_back({specs[k], calibrations.at({lambda, stat_names[k]})});
                const std::uint64_t cell_seed =
                    Rng::derive(opt.seed, {0xCE11, lambda_tag(lambda), std::hash<std::string>{}(model.column)})
                        .bits();
                const auto cell_tables =
                    rejection_experiment(window, {model}, stats, opt.n_reps, opt.level, cell_seed, threads);
                j = nlohmann::json::object();
                j["lambda"] = lambda;
                j["model"] = model.column;
                j["n_reps"] = opt.n_reps;
                j["rejections"] = nlohmann::json::object();
                for (std::size_t k = 0; k < specs.size(); ++k)
                    j["rejections"][stat_names[k]] = cell_tables[k].cells.at(0).rejections;
                std::ofstream out(marker);
                out << j.dump(2) << '\n';
            }
            for (std::size_t k = 0; k < specs.size(); ++k) {
                ExperimentCell cell;
                cell.lambda = lambda;
                cell.column = model.column;
                cell.n_reps = opt.n_reps;
                cell.rejections = j["rejections"][stat_names[k]];
                tables[k].cells.push_back(cell);
            }
        }
    }

    for (std::size_t k = 0; k < specs.size(); ++k) {
        write_experiment_table_csv(tables[k], marker_path("table_" + stat_names[k] + ".csv"));
        write_experiment_table_json(tables[k], marker_path("table_" + stat_names[k] + ".json"));
        std::cout << "table " << stat_names[k] << ":\n";
        for (const ExperimentCell& c : tables[k].cells) {
            char buf[64];
            std::snprintf(buf, sizeof(buf), "  lambda=%-4s %-4s %5.1f%% (se %.1f%%)\n",
                          format_double(c.lambda).c_str(), c.column.c_str(), c.rate() * 100.0,
                          c.standard_error() * 100.0);
            std::cout << buf;
        }
    }
    return 0;
}

struct DiagnosticsOptions {
    std::string stat = "tl_dsf";
    std::string window = "15x5";
    std::string out = "diagnostics";
    double lambda = 2.0;
    long n_reps = 10000;
    double truncation = stat_defaults::truncation;
    std::uint64_t seed = 42;
    int threads = 0;
    int bins = 40;
};

int run_diagnostics(const DiagnosticsOptions& opt) {
    const Window window = parse_window(opt.window);
    const StatisticSpec spec = spec_from_label(opt.stat, opt.truncation);
    const int threads = opt.threads > 0 ? opt.threads : default_thread_count();

    const std::uint64_t seed = Rng::derive(opt.seed, {0xD1A6, lambda_tag(opt.lambda)}).bits();
    const auto samples = sample_null_statistics(std::span<const StatisticSpec>(&spec, 1),
                                                opt.lambda, window, opt.n_reps, seed, threads);
    const Calibration cal = calibration_from_samples(samples[0], seed);
    std::vector<double> normalized = samples[0];
    for (double& x : normalized) x = (x - cal.mean) / cal.sd;

    const NormalityReport report = normality_diagnostics(normalized);
    const HistogramData hist = histogram(normalized, opt.bins);
    const auto qq = qq_points(normalized);

    write_histogram_csv(hist, opt.out + "_hist.csv");
    write_qq_csv(qq, opt.out + "_qq.csv");
    write_text_file(opt.out + "_hist.svg", histogram_svg(hist));
    write_text_file(opt.out + "_qq.svg", qq_svg(qq));

    std::cout << "ks_distance " << format_double(report.ks_distance) << '\n'
              << "skewness " << format_double(report.skewness) << '\n'
              << "excess_kurtosis " << format_double(report.excess_kurtosis) << '\n';
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"persistence-diagram statistics for point patterns in cylindrical windows"};
    app.require_subcommand(1);
    app.set_config("--config", "", "key=value config file with [subcommand] sections");

    SampleOptions sample_opt;
    CLI::App* sample = app.add_subcommand("sample", "draw a point pattern and write CSV + JSON sidecar");
    sample->add_option("--model", sample_opt.model, "poisson | matern | strauss");
    sample->add_option("--window", sample_opt.window, "window LENGTHxHEIGHT, centered in x")->required();
    sample->add_option("--seed", sample_opt.seed, "root seed");
    sample->add_option("--out", sample_opt.out, "output path prefix");
    sample->add_option("--intensity", sample_opt.intensity, "poisson intensity");
    sample->add_option("--kappa", sample_opt.kappa, "matern parent intensity");
    sample->add_option("--disk-radius", sample_opt.disk_radius, "matern offspring disk radius");
    sample->add_option("--mu", sample_opt.mu, "matern mean offspring count");
    sample->add_option("--beta", sample_opt.beta, "strauss reference intensity");
    sample->add_option("--gamma", sample_opt.gamma, "strauss interaction in [0,1]");
    sample->add_option("--r", sample_opt.r, "strauss interaction radius");
    sample->add_option("--steps", sample_opt.steps, "strauss chain length (0: library default)");
    sample->add_option("--burn-in", sample_opt.burn_in, "strauss burn-in (informational)");

    DiagramOptions diagram_opt;
    CLI::App* diagram = app.add_subcommand("diagram", "compute a persistence diagram from a pattern CSV");
    diagram->add_option("--pipeline", diagram_opt.pipeline, "dsf | gilbert | cech | vr");
    diagram->add_option("--in", diagram_opt.in, "pattern CSV (JSON sidecar picked up if present)")->required();
    diagram->add_option("--out", diagram_opt.out, "diagram CSV path");
    diagram->add_option("--svg", diagram_opt.svg, "also write an SVG scatter");
    diagram->add_option("--dump-complex", diagram_opt.dump_complex, "debug dump of the filtered complex");
    diagram->add_option("--T", diagram_opt.truncation, "filtration truncation");
    diagram->add_option("--radius", diagram_opt.radius, "gilbert connection radius");
    diagram->add_option("--q", diagram_opt.q, "restrict output to one homology dimension");

    ExperimentOptions experiment_opt;
    CLI::App* experiment = app.add_subcommand("experiment", "calibrate and run rejection-rate tables");
    experiment->add_option("--out", experiment_opt.out, "output directory (resumable cell markers)");
    experiment->add_option("--window", experiment_opt.window, "window LENGTHxHEIGHT");
    experiment->add_option("--stats", experiment_opt.stats, "comma list: tl_dsf,tc,tl_cech,tl_vr,tc_vr");
    experiment->add_option("--lambdas", experiment_opt.lambdas, "comma list of intensities");
    experiment->add_option("--models", experiment_opt.models, "comma list: poi,matc,str");
    experiment->add_option("--strauss-betas", experiment_opt.strauss_betas,
                           "strauss beta per lambda (defaults known for 1.6,2.0,2.4)");
    experiment->add_option("--n-reps", experiment_opt.n_reps, "test replications per cell");
    experiment->add_option("--n-cal", experiment_opt.n_cal, "calibration replications");
    experiment->add_option("--level", experiment_opt.level, "nominal test level");
    experiment->add_option("--T", experiment_opt.truncation, "filtration truncation");
    experiment->add_option("--seed", experiment_opt.seed, "root seed");
    experiment->add_option("--threads", experiment_opt.threads, "worker count (default: CYLTDA_THREADS)");

    DiagnosticsOptions diagnostics_opt;
    CLI::App* diagnostics = app.add_subcommand("diagnostics", "normality diagnostics of a null statistic");
    diagnostics->add_option("--stat", diagnostics_opt.stat, "tl_dsf | tc | tl_cech | tl_vr | tc_vr");
    diagnostics->add_option("--lambda", diagnostics_opt.lambda, "null intensity");
    diagnostics->add_option("--window", diagnostics_opt.window, "window LENGTHxHEIGHT");
    diagnostics->add_option("--n-reps", diagnostics_opt.n_reps, "null replications (>= 1000)");
    diagnostics->add_option("--out", diagnostics_opt.out, "output path prefix");
    diagnostics->add_option("--T", diagnostics_opt.truncation, "filtration truncation");
    diagnostics->add_option("--seed", diagnostics_opt.seed, "root seed");
    diagnostics->add_option("--threads", diagnostics_opt.threads, "worker count");
    diagnostics->add_option("--bins", diagnostics_opt.bins, "histogram bins");

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        std::cerr << app.help();
        return 2;
    }

    try {
        if (sample->parsed()) return run_sample(sample_opt);
        if (diagram->parsed()) return run_diagram(diagram_opt);
        if (experiment->parsed()) return run_experiment(experiment_opt);
        if (diagnostics->parsed()) {
            if (diagnostics_opt.n_reps < 1000) {
                std::cerr << "diagnostics: refusing n-reps below 1000 (too few for the "
                             "normality report); pass --n-reps 1000 or more\n";
                return 2;
            }
            return run_diagnostics(diagnostics_opt);
        }
    } catch (const CLI::ValidationError& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << '\n';
        return 1;
    }
    return 0;
}
