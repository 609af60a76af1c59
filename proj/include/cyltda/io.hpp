#pragma once

#include <string>

#include "cyltda/directed_network.hpp"
#include "cyltda/persistence.hpp"
#include "cyltda/statistics.hpp"

namespace cyltda {

/// Shortest round-trip decimal form of a double ("inf" for essentials).
std::string format_double(double value);

/// Pattern CSV with an `x,y` header, one point per line.
void write_pattern_csv(const PointPattern& pattern, const std::string& path);

/// JSON sidecar: {"window": {...}, "seed": ..., "model": ..., "params": {...}}.
void write_pattern_sidecar(const PointPattern& pattern, const std::string& model,
                           const std::string& params_json, const std::string& path);

/// Reads a pattern CSV; window from the sidecar if present next to it
/// (same path with .json extension), else the bounding box.
PointPattern read_pattern_csv(const std::string& path);

void write_branch_diagram_csv(const BranchDiagram& diagram, const std::string& path);
void write_diagram_csv(const PersistenceDiagram& diagram, const std::string& path);

/// Debug dump: one `value dim v0 v1 v2` line per simplex.
void write_complex_dump(const FilteredComplex& complex, const std::string& path);

/// Scatter plot, birth on x and death on y, with the diagonal drawn;
/// essential points are marked on the top border.
std::string diagram_svg(const PersistenceDiagram& diagram);
std::string branch_diagram_svg(const BranchDiagram& diagram);

std::string histogram_svg(const HistogramData& hist);
std::string qq_svg(const std::vector<std::pair<double, double>>& qq);

void write_text_file(const std::string& path, const std::string& content);

void write_experiment_table_csv(const ExperimentTable& table, const std::string& path);
void write_experiment_table_json(const ExperimentTable& table, const std::string& path);

void write_histogram_csv(const HistogramData& hist, const std::string& path);
void write_qq_csv(const std::vector<std::pair<double, double>>& qq, const std::string& path);

}  // namespace cyltda
