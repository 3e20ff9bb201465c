#pragma once

// MNIST IDX ingestion and the poisoned 0-vs-1 ridge experiment.
//
// IDX layout: 4-byte big-endian magic (0x00000803 images, 0x00000801
// labels), one big-endian uint32 per dimension, then row-major bytes.

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "ridgepois/record.hpp"
#include "ridgepois/simulator.hpp"

namespace ridgepois {

inline constexpr std::uint32_t kIdxImageMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelMagic = 0x00000801;

struct IdxImages {
  std::uint32_t count = 0;
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  std::vector<std::uint8_t> pixels;  // count * rows * cols

  std::size_t pixels_per_image() const { return static_cast<std::size_t>(rows) * cols; }
};

IdxImages parse_idx_images(std::span<const std::uint8_t> bytes);
std::vector<std::uint8_t> parse_idx_labels(std::span<const std::uint8_t> bytes);

std::vector<std::uint8_t> serialize_idx_images(const IdxImages& images);
std::vector<std::uint8_t> serialize_idx_labels(std::span<const std::uint8_t> labels);

std::vector<std::uint8_t> read_file_bytes(const std::string& path);

enum class PixelScale { Raw, Unit };

std::string to_string(PixelScale scale);
PixelScale parse_pixel_scale(const std::string& text);

struct BinaryTask {
  Eigen::MatrixXd X;  // (rows*cols) x n, one image per column
  Eigen::VectorXd y;  // digit_neg -> -1, digit_pos -> +1
  PixelScale scale = PixelScale::Unit;
  int digit_neg = 0;
  int digit_pos = 1;

  std::uint64_t n() const { return static_cast<std::uint64_t>(X.cols()); }
  double c_effective() const { return static_cast<double>(X.rows()) / static_cast<double>(X.cols()); }
};

/// Keeps only the two digits, in input order. Throws CountMismatch when the
/// label and image counts differ, NoSamplesForDigit when either digit is absent.
BinaryTask build_binary_task(const IdxImages& images, std::span<const std::uint8_t> labels,
                             int digit_neg = 0, int digit_pos = 1,
                             PixelScale scale = PixelScale::Unit);

struct PatchTrigger {
  std::uint32_t row = 2;
  std::uint32_t col = 2;
  std::uint32_t size = 3;
  double intensity = 0.0;  // per-pixel value after rescaling
  Eigen::VectorXd v;       // flattened row-major, length rows*cols
  double v_norm_target = 1.0;
};

/// Constant size x size patch with top-left corner (row, col), scaled so
/// |v| = v_norm_target.
PatchTrigger make_patch_trigger(std::uint32_t row, std::uint32_t col, std::uint32_t size,
                                double v_norm_target, std::uint32_t image_rows = 28,
                                std::uint32_t image_cols = 28);

struct MnistOptions {
  bool swap_classes = false;  // poison digit_pos samples towards digit_neg
  Centering centering = Centering::Empirical;
  std::uint64_t m_test = 10000;
  bool include_intercept = false;
  unsigned threads = 1;
  std::uint64_t grid_index = 0;
};

/// One record per trial: subsample without replacement, poison the -1 class
/// at rate theta, center, solve, and join with predict() at c = p / subsample_n.
std::vector<SweepRecord> run_mnist_experiment(const BinaryTask& task, const PatchTrigger& trigger,
                                              double theta, double lambda, std::uint64_t subsample_n,
                                              std::uint64_t trials, std::uint64_t seed,
                                              const MnistOptions& options = {});

}  // namespace ridgepois
