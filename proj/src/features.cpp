#include "pumpwatch/featurize/features.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "pumpwatch/util/numfmt.hpp"

namespace pumpwatch::featurize {

WindowStats window_stats(std::span<const double> values) {
  const double k = static_cast<double>(values.size());
  double sum = 0.0;
  for (double v : values) sum += v;
  const double mean = sum / k;
  double sq = 0.0;
  for (double v : values) {
    const double d = v - mean;
    sq += d * d;
  }
  return {mean, std::sqrt(sq / k)};
}

ChunkColumns ChunkColumns::from(const ChunkSeries& series) {
  ChunkColumns cols;
  const std::size_t n = series.chunks.size();
  cols.rush_volume.reserve(n);
  cols.n_trades.reserve(n);
  cols.quote_volume.reserve(n);
  cols.close.reserve(n);
  cols.price_max.reserve(n);
  cols.price_min.reserve(n);
  for (const Chunk& c : series.chunks) {
    cols.rush_volume.push_back(c.rush_volume);
    cols.n_trades.push_back(static_cast<double>(c.n_trades));
    cols.quote_volume.push_back(c.quote_volume);
    cols.close.push_back(c.close);
    cols.price_max.push_back(c.price_max);
    cols.price_min.push_back(c.price_min);
  }
  return cols;
}

FeatureVector features_from_window(const WindowView& window, std::int64_t chunk_start_ms) {
  FeatureVector f;
  f.chunk_start_ms = chunk_start_ms;
  const WindowStats rush = window_stats(window.rush_volume);
  f.std_rush_orders = rush.stddev;
  f.avg_rush_orders = rush.mean;
  f.std_trades = window_stats(window.n_trades).stddev;
  const WindowStats volumes = window_stats(window.quote_volume);
  f.std_volumes = volumes.stddev;
  f.avg_volumes = volumes.mean;
  const WindowStats price = window_stats(window.close);
  f.std_price = price.stddev;
  f.avg_price = price.mean;
  f.avg_price_max = window_stats(window.price_max).mean;
  f.avg_price_min = window_stats(window.price_min).mean;
  return f;
}

FeatureVector window_features(const ChunkColumns& cols, std::size_t end_index,
                              std::size_t k, std::int64_t chunk_start_ms) {
  const std::size_t begin = end_index + 1 - k;
  auto slice = [&](const std::vector<double>& col) {
    return std::span<const double>(col.data() + begin, k);
  };
  WindowView window{slice(cols.rush_volume), slice(cols.n_trades), slice(cols.quote_volume),
                    slice(cols.close),       slice(cols.price_max), slice(cols.price_min)};
  return features_from_window(window, chunk_start_ms);
}

std::vector<FeatureVector> moving_features(const ChunkSeries& series,
                                           const PipelineConfig& config) {
  config.validate();
  const std::size_t k = static_cast<std::size_t>(config.window_chunks());
  const std::size_t n = series.chunks.size();
  // Inclusive windows need k chunks before a vector exists, exclusive k+1.
  const std::size_t warmup = config.window_includes_current ? k - 1 : k;
  if (n <= warmup) {
    throw Error("series too short: " + std::to_string(n) + " chunks, window needs " +
                std::to_string(warmup + 1));
  }

  const ChunkColumns cols = ChunkColumns::from(series);
  std::vector<FeatureVector> out;
  out.reserve(n - warmup);
  for (std::size_t i = warmup; i < n; ++i) {
    const std::size_t end = config.window_includes_current ? i : i - 1;
    out.push_back(window_features(cols, end, k, series.chunks[i].start_ms));
  }
  return out;
}

LabelOutcome label_chunks(std::vector<FeatureVector>& vectors,
                          std::span<const PumpEvent> events,
                          const PipelineConfig& config) {
  LabelOutcome outcome;
  const std::int64_t width_ms = config.chunk_ms();
  for (const PumpEvent& e : events) {
    bool hit = false;
    for (FeatureVector& v : vectors) {
      if (e.signal_ts_ms >= v.chunk_start_ms && e.signal_ts_ms < v.chunk_start_ms + width_ms) {
        v.label = true;
        hit = true;
        break;
      }
    }
    if (hit) {
      outcome.applied += 1;
    } else {
      outcome.skipped.push_back(e);
    }
  }
  return outcome;
}

void write_feature_csv(const std::filesystem::path& path,
                       std::span<const FeatureVector> vectors) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open for writing: " + path.string());
  out << "chunk_start_ms";
  for (auto name : FeatureVector::feature_names()) out << ',' << name;
  out << ",label\n";
  for (const FeatureVector& v : vectors) {
    out << v.chunk_start_ms;
    for (double x : v.features()) out << ',' << format_double(x);
    out << ',' << (v.label ? 1 : 0) << '\n';
  }
  if (!out) throw Error("write failed: " + path.string());
}

std::vector<FeatureVector> read_feature_csv(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open: " + path.string());
  std::string line;
  if (!std::getline(in, line)) throw Error("empty feature file: " + path.string());

  std::vector<FeatureVector> out;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::vector<std::string_view> fields;
    std::string_view rest = line;
    while (true) {
      const auto pos = rest.find(',');
      fields.push_back(rest.substr(0, pos));
      if (pos == std::string_view::npos) break;
      rest.remove_prefix(pos + 1);
    }
    if (fields.size() != 2 + FeatureVector::kFeatureCount) {
      throw Error("malformed feature line " + std::to_string(line_no) + " in " + path.string());
    }
    FeatureVector v;
    v.chunk_start_ms = parse_int64(fields[0]);
    v.std_rush_orders = parse_double(fields[1]);
    v.avg_rush_orders = parse_double(fields[2]);
    v.std_trades = parse_double(fields[3]);
    v.std_volumes = parse_double(fields[4]);
    v.avg_volumes = parse_double(fields[5]);
    v.std_price = parse_double(fields[6]);
    v.avg_price = parse_double(fields[7]);
    v.avg_price_max = parse_double(fields[8]);
    v.avg_price_min = parse_double(fields[9]);
    v.label = parse_int64(fields[10]) != 0;
    out.push_back(v);
  }
  return out;
}

}  // namespace pumpwatch::featurize
