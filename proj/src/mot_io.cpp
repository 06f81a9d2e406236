#include "glmbtrack/mot_io.hpp"

#include <array>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

namespace glmb {

namespace {

std::vector<double> parse_csv_row(const std::string& line, int line_no, std::size_t min_fields) {
  std::vector<double> fields;
  std::size_t pos = 0;
  while (pos <= line.size()) {
    std::size_t comma = line.find(',', pos);
    const std::string cell =
        line.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    std::size_t consumed = 0;
    double value = 0.0;
    try {
      value = std::stod(cell, &consumed);
    } catch (const std::exception&) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": malformed field '" + cell +
                               "'");
    }
    while (consumed < cell.size() && std::isspace(static_cast<unsigned char>(cell[consumed]))) {
      ++consumed;
    }
    if (consumed != cell.size()) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": malformed field '" + cell +
                               "'");
    }
    fields.push_back(value);
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  if (fields.size() < min_fields) {
    throw std::runtime_error("line " + std::to_string(line_no) + ": expected at least " +
                             std::to_string(min_fields) + " fields, got " +
                             std::to_string(fields.size()));
  }
  return fields;
}

bool blank(const std::string& line) {
  for (char c : line) {
    if (!std::isspace(static_cast<unsigned char>(c))) return false;
  }
  return true;
}

std::string format_number(double v) {
  const long long rounded = std::llround(v);
  if (std::abs(v - static_cast<double>(rounded)) < 1e-9) {
    return std::to_string(rounded);
  }
  std::array<char, 64> buf{};
  std::snprintf(buf.data(), buf.size(), "%.2f", v);
  std::string s = buf.data();
  while (!s.empty() && s.back() == '0') s.pop_back();
  if (!s.empty() && s.back() == '.') s.pop_back();
  return s;
}

}  // namespace

std::vector<DetectionFrame> parse_detections(const std::string& path, double conf_thresh,
                                             ParseStats* stats) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open detection file: " + path);

  std::map<int, DetectionFrame> by_frame;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const auto f = parse_csv_row(line, line_no, 6);
    const int frame = static_cast<int>(f[0]);
    if (frame < 1) {
      throw std::runtime_error("line " + std::to_string(line_no) + ": frame index must be >= 1");
    }
    Detection det;
    det.box = Box{f[2], f[3], f[4], f[5]};
    det.confidence = f.size() > 6 ? f[6] : 1.0;
    if (det.box.width <= 0.0 || det.box.height <= 0.0) {
      if (stats) ++stats->dropped_nonpositive;
      continue;
    }
    if (det.confidence < conf_thresh) {
      if (stats) ++stats->dropped_low_confidence;
      continue;
    }
    auto& df = by_frame[frame];
    df.frame = frame;
    df.detections.push_back(det);
  }

  std::vector<DetectionFrame> out;
  out.reserve(by_frame.size());
  for (auto& [frame, df] : by_frame) out.push_back(std::move(df));
  return out;
}

std::vector<TrackRecord> parse_results(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open results file: " + path);

  std::vector<TrackRecord> out;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (blank(line)) continue;
    const auto f = parse_csv_row(line, line_no, 6);
    TrackRecord r;
    r.frame = static_cast<int>(f[0]);
    r.track_id = static_cast<int>(f[1]);
    r.box = Box{f[2], f[3], f[4], f[5]};
    r.confidence = f.size() > 6 ? f[6] : 1.0;
    out.push_back(r);
  }
  std::stable_sort(out.begin(), out.end(), [](const TrackRecord& a, const TrackRecord& b) {
    return std::tie(a.frame, a.track_id) < std::tie(b.frame, b.track_id);
  });
  return out;
}

std::string format_results(const std::vector<TrackRecord>& records) {
  std::string out;
  for (std::size_t i = 0; i < records.size(); ++i) {
    const auto& r = records[i];
    if (i > 0) {
      const auto& p = records[i - 1];
      if (std::tie(p.frame, p.track_id) >= std::tie(r.frame, r.track_id)) {
        throw std::invalid_argument("write_results: records not sorted by (frame, track_id)");
      }
    }
    out += std::to_string(r.frame);
    out += ',';
    out += std::to_string(r.track_id);
    out += ',';
    out += format_number(r.box.left);
    out += ',';
    out += format_number(r.box.top);
    out += ',';
    out += format_number(r.box.width);
    out += ',';
    out += format_number(r.box.height);
    out += ",1,-1,-1,-1\n";
  }
  return out;
}

void write_results(const std::vector<TrackRecord>& records, const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open output file: " + path);
  out << format_results(records);
  if (!out) throw std::runtime_error("write failed: " + path);
}

FeatureMode feature_mode_from_string(const std::string& s) {
  if (s == "none") return FeatureMode::none;
  if (s == "images") return FeatureMode::images;
  if (s == "features") return FeatureMode::features;
  if (s == "synthetic") return FeatureMode::synthetic;
  throw std::invalid_argument("unknown feature mode: " + s);
}

std::string to_string(FeatureMode mode) {
  switch (mode) {
    case FeatureMode::none:
      return "none";
    case FeatureMode::images:
      return "images";
    case FeatureMode::features:
      return "features";
    case FeatureMode::synthetic:
      return "synthetic";
  }
  return "none";
}

void write_features(const std::map<std::pair<int, int>, ColorHistogram>& table,
                    const std::string& path) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot open feature file: " + path);
  std::array<char, 32> buf{};
  for (const auto& [key, hist] : table) {
    out << key.first << ',' << key.second;
    for (double v : hist.bins) {
      std::snprintf(buf.data(), buf.size(), "%.9g", v);
      out << ',' << buf.data();
    }
    out << '\n';
  }
}

namespace {

class SentinelProvider : public FeatureProvider {
 public:
  ColorHistogram histogram(int, int, const Box&) override { return ColorHistogram(); }
};

class FileFeatureProvider : public FeatureProvider {
 public:
  explicit FileFeatureProvider(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open feature file: " + path);
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
      ++line_no;
      if (blank(line)) continue;
      const auto f = parse_csv_row(line, line_no, 2 + ColorHistogram::kSize);
      ColorHistogram h;
      for (int i = 0; i < ColorHistogram::kSize; ++i) h.bins[i] = f[2 + i];
      h.normalize();
      provider_.put(static_cast<int>(f[0]), static_cast<int>(f[1]), std::move(h));
    }
  }
  ColorHistogram histogram(int frame, int det_index, const Box& box) override {
    return provider_.histogram(frame, det_index, box);
  }

 private:
  MapFeatureProvider provider_;
};

}  // namespace

std::unique_ptr<FeatureProvider> make_image_provider(const std::string& root);  // image_provider.cpp

std::unique_ptr<FeatureProvider> frame_provider(FeatureMode mode, const std::string& root) {
  switch (mode) {
    case FeatureMode::none:
      return std::make_unique<SentinelProvider>();
    case FeatureMode::images:
      return make_image_provider(root);
    case FeatureMode::features:
    case FeatureMode::synthetic:
      return std::make_unique<FileFeatureProvider>(root);
  }
  return std::make_unique<SentinelProvider>();
}

}  // namespace glmb
