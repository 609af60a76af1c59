#include "cyltda/io.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

namespace cyltda {

namespace {

std::ofstream open_out(const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot open for writing: " + path);
    return out;
}

}  // namespace

std::string format_double(double value) {
    if (std::isinf(value)) return value > 0 ? "inf" : "-inf";
    char buf[40];
    for (int precision = 1; precision <= 17; ++precision) {
        std::snprintf(buf, sizeof(buf), "%.*g", precision, value);
        if (std::strtod(buf, nullptr) == value) break;
    }
    return buf;
}

void write_text_file(const std::string& path, const std::string& content) {
    open_out(path) << content;
}

void write_pattern_csv(const PointPattern& pattern, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "x,y\n";
    for (const Point& p : pattern.points)
        out << format_double(p.x) << ',' << format_double(p.y) << '\n';
}

void write_pattern_sidecar(const PointPattern& pattern, const std::string& model,
                           const std::string& params_json, const std::string& path) {
    nlohmann::json j;
    j["window"] = {{"x_min", pattern.window.x_min},
                   {"x_max", pattern.window.x_max},
                   {"y_min", pattern.window.y_min},
                   {"y_max", pattern.window.y_max}};
    j["seed"] = pattern.seed;
    j["model"] = model;
    j["params"] = params_json.empty() ? nlohmann::json::object() : nlohmann::json::parse(params_json);
    open_out(path) << j.dump(2) << '\n';
}

PointPattern read_pattern_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open pattern file: " + path);

    PointPattern pattern;
    std::string line;
    if (!std::getline(in, line) || line.rfind("x,y", 0) != 0)
        throw std::runtime_error("malformed pattern file (expected 'x,y' header): " + path);
    std::size_t line_no = 1;
    while (std::getline(in, line)) {
        ++line_no;
        if (line.empty()) continue;
        std::istringstream row(line);
        std::string xs, ys;
        if (!std::getline(row, xs, ',') || !std::getline(row, ys))
            throw std::runtime_error("malformed pattern row " + std::to_string(line_no) + ": " + path);
        try {
            std::size_t used = 0;
            const double x = std::stod(xs, &used);
            const double y = std::stod(ys);
            (void)used;
            pattern.points.push_back({x, y});
        } catch (const std::exception&) {
            throw std::runtime_error("malformed pattern row " + std::to_string(line_no) + ": " + path);
        }
    }

    const std::filesystem::path sidecar = std::filesystem::path(path).replace_extension(".json");
    if (std::filesystem::exists(sidecar)) {
        std::ifstream sc(sidecar);
        nlohmann::json j;
        sc >> j;
        pattern.window = Window{j.at("window").at("x_min"), j.at("window").at("x_max"),
                                j.at("window").at("y_min"), j.at("window").at("y_max")};
        pattern.seed = j.value("seed", 0ull);
    } else {
        Window w{0.0, 1.0, 0.0, 1.0};
        if (!pattern.points.empty()) {
            w = Window{pattern.points[0].x, pattern.points[0].x, pattern.points[0].y,
                       pattern.points[0].y};
            for (const Point& p : pattern.points) {
                w.x_min = std::min(w.x_min, p.x);
                w.x_max = std::max(w.x_max, p.x);
                w.y_min = std::min(w.y_min, p.y);
                w.y_max = std::max(w.y_max, p.y);
            }
            if (w.x_max == w.x_min) w.x_max = w.x_min + 1.0;
            if (w.y_max == w.y_min) w.y_max = w.y_min + 1.0;
        }
        pattern.window = w;
    }
    return pattern;
}

void write_branch_diagram_csv(const BranchDiagram& diagram, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "birth,death\n";
    for (const BranchPair& p : diagram.pairs)
        out << format_double(p.birth) << ',' << format_double(p.death) << '\n';
}

void write_diagram_csv(const PersistenceDiagram& diagram, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "dim,birth,death\n";
    for (const DiagramPoint& p : diagram.points)
        out << static_cast<int>(p.dim) << ',' << format_double(p.birth) << ','
            << format_double(p.death) << '\n';
}

void write_complex_dump(const FilteredComplex& complex, const std::string& path) {
    std::ofstream out = open_out(path);
    for (const Simplex& s : complex.simplices) {
        out << format_double(s.value) << ' ' << static_cast<int>(s.dim);
        for (int k = 0; k <= s.dim; ++k) out << ' ' << s.v[static_cast<std::size_t>(k)];
        out << '\n';
    }
}

namespace {

constexpr int kPlotSize = 420;
constexpr int kMargin = 40;

double plot_coord(double value, double lo, double hi) {
    return kMargin + (value - lo) / (hi - lo) * (kPlotSize - 2 * kMargin);
}

std::string svg_header() {
    std::ostringstream s;
    s << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << kPlotSize << "\" height=\""
      << kPlotSize << "\" viewBox=\"0 0 " << kPlotSize << ' ' << kPlotSize << "\">\n"
      << "<rect width=\"100%\" height=\"100%\" fill=\"white\"/>\n";
    return s.str();
}

std::string scatter_svg(const std::vector<std::pair<double, double>>& finite,
                        const std::vector<double>& essential_births) {
    double lo = 0.0, hi = 1.0;
    for (const auto& [b, d] : finite) {
        lo = std::min({lo, b, d});
        hi = std::max({hi, b, d});
    }
    for (double b : essential_births) {
        lo = std::min(lo, b);
        hi = std::max(hi, b);
    }
    if (hi == lo) hi = lo + 1.0;
    hi += 0.05 * (hi - lo);

    std::ostringstream s;
    s << svg_header();
    const double a0 = plot_coord(lo, lo, hi), a1 = plot_coord(hi, lo, hi);
    s << "<line x1=\"" << a0 << "\" y1=\"" << kPlotSize - a0 << "\" x2=\"" << a1 << "\" y2=\""
      << kPlotSize - a1 << "\" stroke=\"gray\" stroke-dasharray=\"4\"/>\n";
    s << "<line x1=\"" << a0 << "\" y1=\"" << kPlotSize - a0 << "\" x2=\"" << a1 << "\" y2=\""
      << kPlotSize - a0 << "\" stroke=\"black\"/>\n";
    s << "<line x1=\"" << a0 << "\" y1=\"" << kPlotSize - a0 << "\" x2=\"" << a0 << "\" y2=\""
      << kPlotSize - a1 << "\" stroke=\"black\"/>\n";
    for (const auto& [b, d] : finite)
        s << "<circle cx=\"" << plot_coord(b, lo, hi) << "\" cy=\"" << kPlotSize - plot_coord(d, lo, hi)
          << "\" r=\"3\" fill=\"steelblue\" fill-opacity=\"0.7\"/>\n";
    for (double b : essential_births)
        s << "<path d=\"M " << plot_coord(b, lo, hi) - 4 << ' ' << kMargin + 8 << " l 8 0 l -4 -8 z\""
          << " fill=\"firebrick\"/>\n";
    s << "</svg>\n";
    return s.str();
}

}  // namespace

std::string diagram_svg(const PersistenceDiagram& diagram) {
    std::vector<std::pair<double, double>> finite;
    std::vector<double> essentials;
    for (const DiagramPoint& p : diagram.points) {
        if (p.essential())
            essentials.push_back(p.birth);
        else
            finite.emplace_back(p.birth, p.death);
    }
    return scatter_svg(finite, essentials);
}

std::string branch_diagram_svg(const BranchDiagram& diagram) {
    std::vector<std::pair<double, double>> finite;
    std::vector<double> essentials;
    for (const BranchPair& p : diagram.pairs) {
        if (p.essential())
            essentials.push_back(p.birth);
        else
            finite.emplace_back(p.birth, p.death);
    }
    return scatter_svg(finite, essentials);
}

std::string histogram_svg(const HistogramData& hist) {
    long max_count = 1;
    for (long c : hist.counts) max_count = std::max(max_count, c);
    const double lo = hist.edges.front(), hi = hist.edges.back();

    std::ostringstream s;
    s << svg_header();
    for (std::size_t b = 0; b < hist.counts.size(); ++b) {
        const double x0 = plot_coord(hist.edges[b], lo, hi);
        const double x1 = plot_coord(hist.edges[b + 1], lo, hi);
        const double h = static_cast<double>(hist.counts[b]) / static_cast<double>(max_count) *
                         (kPlotSize - 2 * kMargin);
        s << "<rect x=\"" << x0 << "\" y=\"" << kPlotSize - kMargin - h << "\" width=\"" << x1 - x0
          << "\" height=\"" << h << "\" fill=\"steelblue\" stroke=\"white\"/>\n";
    }
    s << "<line x1=\"" << kMargin << "\" y1=\"" << kPlotSize - kMargin << "\" x2=\""
      << kPlotSize - kMargin << "\" y2=\"" << kPlotSize - kMargin << "\" stroke=\"black\"/>\n";
    s << "</svg>\n";
    return s.str();
}

std::string qq_svg(const std::vector<std::pair<double, double>>& qq) {
    double lo = -1.0, hi = 1.0;
    for (const auto& [t, e] : qq) {
        lo = std::min({lo, t, e});
        hi = std::max({hi, t, e});
    }
    std::ostringstream s;
    s << svg_header();
    const double a0 = plot_coord(lo, lo, hi), a1 = plot_coord(hi, lo, hi);
    s << "<line x1=\"" << a0 << "\" y1=\"" << kPlotSize - a0 << "\" x2=\"" << a1 << "\" y2=\""
      << kPlotSize - a1 << "\" stroke=\"gray\" stroke-dasharray=\"4\"/>\n";
    for (const auto& [t, e] : qq)
        s << "<circle cx=\"" << plot_coord(t, lo, hi) << "\" cy=\"" << kPlotSize - plot_coord(e, lo, hi)
          << "\" r=\"2\" fill=\"steelblue\" fill-opacity=\"0.6\"/>\n";
    s << "</svg>\n";
    return s.str();
}

void write_experiment_table_csv(const ExperimentTable& table, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "lambda";
    for (const std::string& c : table.columns) out << ',' << c;
    out << '\n';
    for (double lambda : table.lambdas) {
        out << format_double(lambda);
        for (const std::string& c : table.columns) {
            const ExperimentCell* cell = table.find(lambda, c);
            out << ',';
            if (cell) {
                char buf[32];
                std::snprintf(buf, sizeof(buf), "%.1f%%", cell->rate() * 100.0);
                out << buf;
            }
        }
        out << '\n';
    }
}

void write_experiment_table_json(const ExperimentTable& table, const std::string& path) {
    nlohmann::json j;
    j["statistic"] = table.statistic_label;
    j["cells"] = nlohmann::json::array();
    for (const ExperimentCell& c : table.cells)
        j["cells"].push_back({{"lambda", c.lambda},
                              {"model", c.column},
                              {"rate", c.rate()},
                              {"standard_error", c.standard_error()},
                              {"rejections", c.rejections},
                              {"n_reps", c.n_reps}});
    open_out(path) << j.dump(2) << '\n';
}

void write_histogram_csv(const HistogramData& hist, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "bin_left,bin_right,count\n";
    for (std::size_t b = 0; b < hist.counts.size(); ++b)
        out << format_double(hist.edges[b]) << ',' << format_double(hist.edges[b + 1]) << ','
            << hist.counts[b] << '\n';
}

void write_qq_csv(const std::vector<std::pair<double, double>>& qq, const std::string& path) {
    std::ofstream out = open_out(path);
    out << "theoretical,empirical\n";
    for (const auto& [t, e] : qq) out << format_double(t) << ',' << format_double(e) << '\n';
}

}  // namespace cyltda
