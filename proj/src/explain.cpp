#include "disgan/explain.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <numeric>
#include <stdexcept>

#include "disgan/geometry.hpp"

namespace disgan {

double auc(std::span<const double> scores, std::span<const int> labels) {
  if (scores.size() != labels.size()) throw std::invalid_argument("auc: scores and labels differ in length");
  std::vector<std::size_t> order(scores.size());
  std::iota(order.begin(), order.end(), 0);
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) { return scores[a] < scores[b]; });

  double pos_rank_sum = 0.0;
  std::size_t n_pos = 0, n_neg = 0;
  for (std::size_t i = 0; i < order.size();) {
    std::size_t j = i;
    while (j < order.size() && scores[order[j]] == scores[order[i]]) ++j;
    const double mid_rank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
    for (std::size_t k = i; k < j; ++k) {
      if (labels[order[k]] == 1) {
        pos_rank_sum += mid_rank;
        ++n_pos;
      } else if (labels[order[k]] == -1) {
        ++n_neg;
      } else {
        throw std::invalid_argument("auc: labels must be -1 or +1");
      }
    }
    i = j;
  }
  if (n_pos == 0 || n_neg == 0) throw std::invalid_argument("auc: both labels must be present");
  const double np = static_cast<double>(n_pos);
  const double u = pos_rank_sum - np * (np + 1.0) / 2.0;
  return u / (np * static_cast<double>(n_neg));
}

double accuracy(std::span<const double> scores, std::span<const int> labels, double threshold) {
  if (scores.empty() || scores.size() != labels.size()) {
    throw std::invalid_argument("accuracy: need equally sized, nonempty inputs");
  }
  std::size_t correct = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) correct += (scores[i] > threshold ? 1 : -1) == labels[i];
  return static_cast<double>(correct) / static_cast<double>(scores.size());
}

double error_rate(std::span<const double> scores, std::span<const int> labels, double threshold) {
  if (scores.empty() || scores.size() != labels.size()) {
    throw std::invalid_argument("error_rate: need equally sized, nonempty inputs");
  }
  std::size_t wrong = 0;
  for (std::size_t i = 0; i < scores.size(); ++i) wrong += (scores[i] > threshold ? 1 : -1) != labels[i];
  return static_cast<double>(wrong) / static_cast<double>(scores.size());
}

std::pair<double, double> mean_std(std::span<const double> xs) {
  if (xs.empty()) return {0.0, 0.0};
  const double n = static_cast<double>(xs.size());
  const double mean = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  if (xs.size() < 2) return {mean, 0.0};
  double ss = 0.0;
  for (double x : xs) ss += (x - mean) * (x - mean);
  return {mean, std::sqrt(ss / (n - 1.0))};
}

void MetricReport::add(SeedMetrics m) {
  per_seed.push_back(m);
  std::vector<double> acc, au;
  for (const auto& s : per_seed) {
    acc.push_back(s.accuracy);
    au.push_back(s.auc);
  }
  std::tie(accuracy_mean, accuracy_std) = mean_std(acc);
  std::tie(auc_mean, auc_std) = mean_std(au);
}

std::optional<double> pearson(std::span<const double> xs, std::span<const double> ys) {
  if (xs.size() != ys.size()) throw std::invalid_argument("pearson: inputs differ in length");
  if (xs.size() < 3) return std::nullopt;
  const double n = static_cast<double>(xs.size());
  const double mx = std::accumulate(xs.begin(), xs.end(), 0.0) / n;
  const double my = std::accumulate(ys.begin(), ys.end(), 0.0) / n;
  double sxy = 0.0, sxx = 0.0, syy = 0.0;
  for (std::size_t i = 0; i < xs.size(); ++i) {
    sxy += (xs[i] - mx) * (ys[i] - my);
    sxx += (xs[i] - mx) * (xs[i] - mx);
    syy += (ys[i] - my) * (ys[i] - my);
  }
  if (sxx <= 0.0 || syy <= 0.0) return std::nullopt;
  return std::clamp(sxy / std::sqrt(sxx * syy), -1.0, 1.0);
}

ClassDifferenceMap cdm(const GanBundle& bundle, std::span<const double> sample, Domain domain,
                       std::size_t source_index) {
  if (sample.size() != bundle.dim()) throw ShapeError("cdm: sample dimension differs from the bundle's");
  const Mapping m = domain == Domain::X ? Mapping::X2Y : Mapping::Y2X;
  const Tensor z({1, sample.size()}, std::vector<double>(sample.begin(), sample.end()));
  const Tensor projected = bundle.generate(m, z, {0.0});
  ClassDifferenceMap out{source_index, domain, std::vector<double>(sample.size())};
  for (std::size_t j = 0; j < sample.size(); ++j) out.values[j] = std::abs(sample[j] - projected[j]);
  return out;
}

std::vector<ClassDifferenceMap> cdm_all(const GanBundle& bundle, const Dataset& data) {
  std::vector<ClassDifferenceMap> out;
  std::size_t nx = 0, ny = 0;
  for (const auto& s : data.samples()) {
    const Domain d = domain_of(s.label);
    out.push_back(cdm(bundle, s.features, d, d == Domain::X ? ++nx : ++ny));
  }
  return out;
}

void write_cdm_csv(const std::vector<ClassDifferenceMap>& maps, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  const std::size_t dim = maps.empty() ? 0 : maps.front().values.size();
  out << "domain,source_idx";
  for (std::size_t j = 0; j < dim; ++j) out << ",cdm" << (j + 1);
  out << '\n';
  for (const auto& m : maps) {
    out << (m.domain == Domain::X ? "X" : "Y") << ',' << m.source_index;
    for (double v : m.values) out << ',' << format_double(v);
    out << '\n';
  }
}

DistanceCurveReport distance_curve_report(const GanBundle& bundle, const Dataset& eval_set, std::uint64_t seed) {
  if (!bundle.aux) throw std::invalid_argument("distance_curve_report: bundle has no auxiliary classifier");
  const auto& aux = *bundle.aux;
  const auto& geo = bundle.geometry;
  const auto xs = eval_set.domain(Domain::X);
  const auto ys = eval_set.domain(Domain::Y);
  Rng rng(seed);
  DistanceCurveReport rep;

  auto inter = [&](Mapping m, const std::vector<std::vector<double>>& src, const std::vector<std::vector<double>>& tgt) {
    if (tgt.empty()) return;
    const double sign = m == Mapping::X2Y ? 1.0 : -1.0;
    for (std::size_t i = 0; i < src.size(); ++i) {
      const double target = vertical_distance(aux, tgt[rng.index(tgt.size())], geo);
      const Tensor gen = bundle.generate(m, Tensor::row(src[i]), {sign * target});
      rep.vertical.push_back({m, i + 1, target, vertical_distance(aux, gen.values(), geo)});
    }
  };
  auto intra = [&](Mapping m, const std::vector<std::vector<double>>& src) {
    for (std::size_t i = 0; i < src.size(); ++i) {
      const double target = horizontal_distance(aux, src[i], src[rng.index(src.size())], geo).value;
      const Tensor gen = bundle.generate(m, Tensor::row(src[i]), {-target});
      rep.horizontal.push_back({m, i + 1, target, horizontal_distance(aux, src[i], gen.values(), geo).value});
    }
  };
  inter(Mapping::X2Y, xs, ys);
  inter(Mapping::Y2X, ys, xs);
  intra(Mapping::X2X, xs);
  intra(Mapping::Y2Y, ys);

  auto corr = [](const std::vector<CurvePoint>& pts) {
    std::vector<double> a, b;
    for (const auto& p : pts) {
      a.push_back(p.target);
      b.push_back(p.reconstructed);
    }
    return pearson(a, b);
  };
  rep.r_vertical = corr(rep.vertical);
  rep.r_horizontal = corr(rep.horizontal);
  return rep;
}

void write_curve_csv(const DistanceCurveReport& report, const std::filesystem::path& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << "kind,source_idx,target,reconstructed\n";
  for (const auto* pts : {&report.vertical, &report.horizontal}) {
    for (const auto& p : *pts) {
      out << to_string(p.kind) << ',' << p.source_index << ',' << format_double(p.target) << ','
          << format_double(p.reconstructed) << '\n';
    }
  }
}

namespace {

using Point = std::array<double, 2>;

Point refine_zero(const AuxiliaryClassifier& aux, Point p, double sp, Point q, double sq) {
  if (sp == 0.0) return p;
  if (sq == 0.0) return q;
  for (int it = 0; it < 200; ++it) {
    const Point mid{(p[0] + q[0]) / 2.0, (p[1] + q[1]) / 2.0};
    const double sm = aux.score(mid);
    if (std::abs(sm) < 1e-12 || mid == p || mid == q) return mid;
    if ((sm > 0.0) == (sp > 0.0)) {
      p = mid;
      sp = sm;
    } else {
      q = mid;
      sq = sm;
    }
  }
  return std::abs(sp) < std::abs(sq) ? p : q;
}

}  // namespace

std::vector<Segment> hyperplane_segments(const AuxiliaryClassifier& aux, Point lo, Point hi, std::size_t grid) {
  if (aux.input_dim() != 2) throw std::invalid_argument("hyperplane_segments: classifier must be 2-D");
  const std::size_t n = grid + 1;
  std::vector<Point> pts(n * n);
  std::vector<std::vector<double>> rows;
  rows.reserve(n * n);
  for (std::size_t r = 0; r < n; ++r)
    for (std::size_t c = 0; c < n; ++c) {
      Point p{lo[0] + (hi[0] - lo[0]) * static_cast<double>(c) / static_cast<double>(grid),
              lo[1] + (hi[1] - lo[1]) * static_cast<double>(r) / static_cast<double>(grid)};
      pts[r * n + c] = p;
      rows.push_back({p[0], p[1]});
    }
  const auto s = aux.scores(to_matrix(rows));

  std::vector<Segment> out;
  auto positive = [&](std::size_t k) { return s[k] >= 0.0; };
  for (std::size_t r = 0; r < grid; ++r) {
    for (std::size_t c = 0; c < grid; ++c) {
      // corners counter-clockwise, edges k: corner[k] -> corner[k+1]
      const std::array<std::size_t, 4> k{r * n + c, r * n + c + 1, (r + 1) * n + c + 1, (r + 1) * n + c};
      std::vector<Point> hits;
      for (std::size_t e = 0; e < 4; ++e) {
        const auto a = k[e], b = k[(e + 1) % 4];
        if (positive(a) != positive(b)) hits.push_back(refine_zero(aux, pts[a], s[a], pts[b], s[b]));
      }
      if (hits.size() == 2) out.push_back({hits[0], hits[1]});
      if (hits.size() == 4) {
        out.push_back({hits[0], hits[1]});
        out.push_back({hits[2], hits[3]});
      }
    }
  }
  return out;
}

namespace {

const char* kind_color(Mapping m) {
  switch (m) {
    case Mapping::X2Y:
      return "#ff7f0e";
    case Mapping::Y2X:
      return "#2ca02c";
    case Mapping::X2X:
      return "#9467bd";
    case Mapping::Y2Y:
      return "#8c564b";
  }
  return "#000000";
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "%.3f", v);
  return buf;
}

}  // namespace

ScatterExport export_scatter(const Dataset& data, const AugmentationArchive& archive, const AuxiliaryClassifier& aux,
                             const std::filesystem::path& stem) {
  ScatterExport result;
  const std::size_t dim = data.dim();
  if (!archive.samples.empty() && archive.dim != dim) throw ShapeError("archive dimension differs from the data's");

  auto csv_path = stem;
  csv_path += ".csv";
  {
    std::ofstream out(csv_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + csv_path.string());
    out << "source";
    for (std::size_t j = 0; j < dim; ++j) out << ",f" << (j + 1);
    out << ",label\n";
    for (const auto& s : data.samples()) {
      out << "real";
      for (double v : s.features) out << ',' << format_double(v);
      out << ',' << s.label << '\n';
      ++result.csv_rows;
    }
    for (const auto& g : archive.samples) {
      out << to_string(g.kind);
      for (double v : g.features) out << ',' << format_double(v);
      out << ',' << g.label << '\n';
      ++result.csv_rows;
    }
  }

  if (dim != 2) {
    result.notice = "SVG skipped: data has dimension " + std::to_string(dim) + ", plots need 2";
    return result;
  }

  Point lo{std::numeric_limits<double>::max(), std::numeric_limits<double>::max()};
  Point hi{std::numeric_limits<double>::lowest(), std::numeric_limits<double>::lowest()};
  auto extend = [&](const std::vector<double>& f) {
    for (int j = 0; j < 2; ++j) {
      lo[j] = std::min(lo[j], f[j]);
      hi[j] = std::max(hi[j], f[j]);
    }
  };
  for (const auto& s : data.samples()) extend(s.features);
  for (const auto& g : archive.samples) extend(g.features);
  for (int j = 0; j < 2; ++j) {
    const double pad = std::max(0.1 * (hi[j] - lo[j]), 0.5);
    lo[j] -= pad;
    hi[j] += pad;
  }
  result.hyperplane = hyperplane_segments(aux, lo, hi);

  auto hp_path = stem;
  hp_path += "_hyperplane.csv";
  {
    std::ofstream out(hp_path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + hp_path.string());
    out << "x1,y1,x2,y2\n";
    for (const auto& seg : result.hyperplane) {
      out << format_double(seg.a[0]) << ',' << format_double(seg.a[1]) << ',' << format_double(seg.b[0]) << ','
          << format_double(seg.b[1]) << '\n';
    }
  }

  constexpr double size = 640.0, margin = 40.0;
  auto px = [&](double x) { return margin + (x - lo[0]) / (hi[0] - lo[0]) * (size - 2 * margin); };
  auto py = [&](double y) { return size - margin - (y - lo[1]) / (hi[1] - lo[1]) * (size - 2 * margin); };

  auto svg_path = stem;
  svg_path += ".svg";
  std::ofstream svg(svg_path, std::ios::binary);
  if (!svg) throw std::runtime_error("cannot write " + svg_path.string());
  svg << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
      << "<svg xmlns=\"http://www.w3.org/2000/svg\" version=\"1.1\" width=\"" << size << "\" height=\"" << size
      << "\" viewBox=\"0 0 " << size << ' ' << size << "\">\n"
      << "<rect x=\"0\" y=\"0\" width=\"" << size << "\" height=\"" << size << "\" fill=\"white\"/>\n"
      << "<rect x=\"" << margin << "\" y=\"" << margin << "\" width=\"" << size - 2 * margin << "\" height=\""
      << size - 2 * margin << "\" fill=\"none\" stroke=\"#999999\"/>\n";

  svg << "<g id=\"real\" stroke=\"none\">\n";
  for (const auto& s : data.samples()) {
    svg << "<circle cx=\"" << num(px(s.features[0])) << "\" cy=\"" << num(py(s.features[1])) << "\" r=\"3\" fill=\""
        << (s.label == 1 ? "#d62728" : "#1f77b4") << "\"/>\n";
  }
  svg << "</g>\n<g id=\"generated\" fill=\"none\" stroke-width=\"1.2\">\n";
  for (const auto& g : archive.samples) {
    const double x = px(g.features[0]), y = py(g.features[1]);
    svg << "<rect x=\"" << num(x - 3) << "\" y=\"" << num(y - 3) << "\" width=\"6\" height=\"6\" stroke=\""
        << kind_color(g.kind) << "\"/>\n";
  }
  svg << "</g>\n<path id=\"hyperplane\" fill=\"none\" stroke=\"black\" stroke-width=\"1.5\" d=\"";
  for (const auto& seg : result.hyperplane) {
    svg << 'M' << num(px(seg.a[0])) << ' ' << num(py(seg.a[1])) << 'L' << num(px(seg.b[0])) << ' '
        << num(py(seg.b[1]));
  }
  svg << "\"/>\n<g font-family=\"sans-serif\" font-size=\"12\">\n";
  const double ly = 16;
  double lx = margin;
  for (auto [color, label] : std::initializer_list<std::pair<const char*, std::string>>{
           {"#1f77b4", "X (-1)"}, {"#d62728", "Y (+1)"}, {kind_color(Mapping::X2Y), "X2Y"},
           {kind_color(Mapping::Y2X), "Y2X"}, {kind_color(Mapping::X2X), "X2X"}, {kind_color(Mapping::Y2Y), "Y2Y"}}) {
    svg << "<rect x=\"" << lx << "\" y=\"" << ly - 9 << "\" width=\"10\" height=\"10\" fill=\"" << color
        << "\"/><text x=\"" << lx + 14 << "\" y=\"" << ly << "\">" << label << "</text>\n";
    lx += 90;
  }
  svg << "</g>\n</svg>\n";
  result.svg_written = true;
  return result;
}

}  // namespace disgan
