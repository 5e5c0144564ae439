#pragma once

#include <filesystem>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "disgan/classifier.hpp"
#include "disgan/dataset.hpp"
#include "disgan/gan.hpp"
#include "disgan/pipeline.hpp"

namespace disgan {

// ---- metrics ---------------------------------------------------------------

/// Area under the ROC curve via the Mann-Whitney rank sum, tied scores
/// sharing their mid-rank (so ties count 1/2). Throws unless both labels occur.
double auc(std::span<const double> scores, std::span<const int> labels);

/// Fraction of samples whose predicted label (+1 when score > threshold)
/// matches the true one.
double accuracy(std::span<const double> scores, std::span<const int> labels, double threshold = 0.0);
double error_rate(std::span<const double> scores, std::span<const int> labels, double threshold = 0.0);

struct SeedMetrics {
  std::uint64_t seed;
  double accuracy;
  double auc;
};

struct MetricReport {
  std::vector<SeedMetrics> per_seed;
  double accuracy_mean = 0.0, accuracy_std = 0.0;
  double auc_mean = 0.0, auc_std = 0.0;

  void add(SeedMetrics m);
};

/// Mean and sample standard deviation (0 for fewer than two values).
std::pair<double, double> mean_std(std::span<const double> xs);

/// Pearson correlation; empty when there are fewer than 3 points or either
/// side has zero variance.
std::optional<double> pearson(std::span<const double> xs, std::span<const double> ys);

// ---- class-difference maps -------------------------------------------------

struct ClassDifferenceMap {
  std::size_t source_index = 0;
  Domain domain = Domain::X;
  std::vector<double> values;  // |z - G(z, 0)| per dimension
};

/// X samples are projected with G_X2Y(x, 0), Y samples with G_Y2X(y, 0).
ClassDifferenceMap cdm(const GanBundle& bundle, std::span<const double> sample, Domain domain,
                       std::size_t source_index = 0);
std::vector<ClassDifferenceMap> cdm_all(const GanBundle& bundle, const Dataset& data);
void write_cdm_csv(const std::vector<ClassDifferenceMap>& maps, const std::filesystem::path& path);

// ---- distance reconstruction curves ---------------------------------------

struct CurvePoint {
  Mapping kind;
  std::size_t source_index;
  double target;         // conditioning magnitude
  double reconstructed;  // distance of the generated sample, measured by the frozen classifier
};

struct DistanceCurveReport {
  std::vector<CurvePoint> vertical;    // X2Y and Y2X
  std::vector<CurvePoint> horizontal;  // X2X and Y2Y
  std::optional<double> r_vertical;
  std::optional<double> r_horizontal;
};

/// For every eval sample, picks a random co-sample (seeded), conditions the
/// matching generator on the measured distance and re-measures it on the
/// generated output.
DistanceCurveReport distance_curve_report(const GanBundle& bundle, const Dataset& eval_set, std::uint64_t seed);
void write_curve_csv(const DistanceCurveReport& report, const std::filesystem::path& path);

// ---- plots -----------------------------------------------------------------

struct Segment {
  std::array<double, 2> a, b;
};

/// Zero-level set of the classifier score over a 2-D box, by marching
/// squares; each vertex is refined by bisection until |score| < 1e-12.
std::vector<Segment> hyperplane_segments(const AuxiliaryClassifier& aux, std::array<double, 2> lo,
                                         std::array<double, 2> hi, std::size_t grid = 120);

struct ScatterExport {
  bool svg_written = false;
  std::string notice;
  std::size_t csv_rows = 0;
  std::vector<Segment> hyperplane;
};

/// Writes <stem>.csv (every real and generated point), and for 2-D data
/// <stem>.svg plus <stem>_hyperplane.csv (segment endpoints at full precision).
ScatterExport export_scatter(const Dataset& data, const AugmentationArchive& archive, const AuxiliaryClassifier& aux,
                             const std::filesystem::path& stem);

}  // namespace disgan
