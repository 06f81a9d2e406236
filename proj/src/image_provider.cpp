#include "glmbtrack/mot_io.hpp"

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <filesystem>
#include <mutex>

#if GLMBTRACK_HAVE_OPENCV
#include <opencv2/imgcodecs.hpp>
#include <opencv2/imgproc.hpp>
#endif

namespace glmb {

namespace {

#if GLMBTRACK_HAVE_OPENCV

class ImageFeatureProvider : public FeatureProvider {
 public:
  explicit ImageFeatureProvider(std::string root) : root_(std::move(root)) {
    const std::filesystem::path img1 = std::filesystem::path(root_) / "img1";
    if (std::filesystem::is_directory(img1)) root_ = img1.string();
  }

  ColorHistogram histogram(int frame, int, const Box& box) override {
    std::lock_guard<std::mutex> lock(mutex_);
    if (frame != cached_frame_) {
      cached_ = cv::Mat();
      std::string tried;
      for (const char* ext : {".jpg", ".png", ".ppm"}) {
        std::array<char, 32> name{};
        std::snprintf(name.data(), name.size(), "%06d%s", frame, ext);
        const std::string path = (std::filesystem::path(root_) / name.data()).string();
        if (tried.empty()) tried = path;
        if (!std::filesystem::exists(path)) continue;
        cached_ = cv::imread(path, cv::IMREAD_COLOR);
        if (!cached_.empty()) break;
      }
      cached_frame_ = frame;
      if (cached_.empty()) {
        ++warnings_;
        std::fprintf(stderr, "warning: missing frame image %s\n", tried.c_str());
      }
    }
    if (cached_.empty()) return ColorHistogram();

    const int x0 = std::clamp(static_cast<int>(box.left), 0, cached_.cols);
    const int y0 = std::clamp(static_cast<int>(box.top), 0, cached_.rows);
    const int x1 = std::clamp(static_cast<int>(box.right()), 0, cached_.cols);
    const int y1 = std::clamp(static_cast<int>(box.bottom()), 0, cached_.rows);
    if (x1 <= x0 || y1 <= y0) return ColorHistogram();

    cv::Mat crop = cached_(cv::Rect(x0, y0, x1 - x0, y1 - y0));
    cv::Mat rgb;
    cv::cvtColor(crop, rgb, cv::COLOR_BGR2RGB);
    if (!rgb.isContinuous()) rgb = rgb.clone();
    return hsv_histogram(ImageRegion{rgb.cols, rgb.rows, rgb.ptr<std::uint8_t>()});
  }

  int warning_count() const override { return warnings_; }

 private:
  std::string root_;
  std::mutex mutex_;
  cv::Mat cached_;
  int cached_frame_ = -1;
  std::atomic<int> warnings_{0};
};

#else

class ImageFeatureProvider : public FeatureProvider {
 public:
  explicit ImageFeatureProvider(std::string) {
    std::fprintf(stderr, "warning: built without image support; appearance degraded\n");
  }
  ColorHistogram histogram(int, int, const Box&) override {
    ++warnings_;
    return ColorHistogram();
  }
  int warning_count() const override { return warnings_; }

 private:
  std::atomic<int> warnings_{0};
};

#endif

}  // namespace

std::unique_ptr<FeatureProvider> make_image_provider(const std::string& root) {
  return std::make_unique<ImageFeatureProvider>(root);
}

}  // namespace glmb
