#pragma once

#include <optional>
#include <string>
#include <variant>
#include <vector>

#include "graphonlab/experiments.hpp"
#include "graphonlab/graphon.hpp"
#include "graphonlab/measures.hpp"
#include "graphonlab/sde.hpp"

namespace graphonlab {

inline constexpr const char* kToolVersion = "0.1.0";

// temp file + rename so partially written artifacts never appear
void atomic_write(const std::string& path, const std::string& content);

// versioned measure document {schema_version, dim, time_grid?, atoms, weights}
std::string measure_to_json(const DiscreteMeasure& mu);
std::string measure_to_json(const PathMeasure& mu);
using AnyMeasure = std::variant<DiscreteMeasure, PathMeasure>;
AnyMeasure measure_from_json(const std::string& text);
AnyMeasure load_measure(const std::string& path);

std::string measure_to_csv(const DiscreteMeasure& mu);
std::string measure_to_csv(const PathMeasure& mu);

// dense numeric CSV (one matrix row per line)
std::string matrix_to_csv(const SquareMatrix& m);
SquareMatrix matrix_from_csv(const std::string& text);
SquareMatrix load_matrix_csv(const std::string& path);

std::string plan_to_csv(const TransportPlan& plan);

std::string ensemble_to_json(const TrajectoryEnsemble& ens, const std::string& graphon_desc);
TrajectoryEnsemble ensemble_from_json(const std::string& text);

// experiment CSV: '#' provenance comments, then
// quantity,n,mean,stderr,nref_delta,seed rows (%.17g so reruns are
// byte-identical)
std::string report_to_csv(const ExperimentReport& report);

// self-contained log-log SVG with an optional guide curve
struct SvgSeries {
    std::string label;
    std::vector<double> xs;
    std::vector<double> ys;
};
std::string loglog_svg(const std::string& title, const std::vector<SvgSeries>& series);

}  // namespace graphonlab
