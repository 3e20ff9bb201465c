#include "ridgepois/mnist.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iterator>
#include <numeric>

#include "ridgepois/error.hpp"
#include "ridgepois/parallel.hpp"
#include "ridgepois/rng.hpp"
#include "ridgepois/theory.hpp"

namespace ridgepois {

namespace {

std::uint32_t read_be32(std::span<const std::uint8_t> bytes, std::size_t offset) {
  if (bytes.size() < offset + 4) {
    throw Error(ErrorCode::TruncatedFile, "IDX header ends after " + std::to_string(bytes.size()) + " bytes");
  }
  return (std::uint32_t{bytes[offset]} << 24) | (std::uint32_t{bytes[offset + 1]} << 16) |
         (std::uint32_t{bytes[offset + 2]} << 8) | std::uint32_t{bytes[offset + 3]};
}

void write_be32(std::vector<std::uint8_t>& out, std::uint32_t value) {
  out.push_back(static_cast<std::uint8_t>(value >> 24));
  out.push_back(static_cast<std::uint8_t>(value >> 16));
  out.push_back(static_cast<std::uint8_t>(value >> 8));
  out.push_back(static_cast<std::uint8_t>(value));
}

void expect_magic(std::uint32_t got, std::uint32_t want) {
  if (got != want) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "expected magic 0x%08x, found 0x%08x", want, got);
    throw Error(ErrorCode::BadMagic, buf);
  }
}

}  // namespace

IdxImages parse_idx_images(std::span<const std::uint8_t> bytes) {
  expect_magic(read_be32(bytes, 0), kIdxImageMagic);
  IdxImages out;
  out.count = read_be32(bytes, 4);
  out.rows = read_be32(bytes, 8);
  out.cols = read_be32(bytes, 12);
  const std::size_t payload = static_cast<std::size_t>(out.count) * out.rows * out.cols;
  if (bytes.size() - 16 < payload) {
    throw Error(ErrorCode::TruncatedFile, "image payload shorter than the header declares");
  }
  out.pixels.assign(bytes.begin() + 16, bytes.begin() + 16 + static_cast<std::ptrdiff_t>(payload));
  return out;
}

std::vector<std::uint8_t> parse_idx_labels(std::span<const std::uint8_t> bytes) {
  expect_magic(read_be32(bytes, 0), kIdxLabelMagic);
  const std::uint32_t count = read_be32(bytes, 4);
  if (bytes.size() - 8 < count) {
    throw Error(ErrorCode::TruncatedFile, "label payload shorter than the header declares");
  }
  return {bytes.begin() + 8, bytes.begin() + 8 + count};
}

std::vector<std::uint8_t> serialize_idx_images(const IdxImages& images) {
  std::vector<std::uint8_t> out;
  out.reserve(16 + images.pixels.size());
  write_be32(out, kIdxImageMagic);
  write_be32(out, images.count);
  write_be32(out, images.rows);
  write_be32(out, images.cols);
  out.insert(out.end(), images.pixels.begin(), images.pixels.end());
  return out;
}

std::vector<std::uint8_t> serialize_idx_labels(std::span<const std::uint8_t> labels) {
  std::vector<std::uint8_t> out;
  out.reserve(8 + labels.size());
  write_be32(out, kIdxLabelMagic);
  write_be32(out, static_cast<std::uint32_t>(labels.size()));
  out.insert(out.end(), labels.begin(), labels.end());
  return out;
}

std::vector<std::uint8_t> read_file_bytes(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::IoError, "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::string to_string(PixelScale scale) { return scale == PixelScale::Raw ? "raw" : "unit"; }

PixelScale parse_pixel_scale(const std::string& text) {
  if (text == "raw") return PixelScale::Raw;
  if (text == "unit") return PixelScale::Unit;
  throw Error(ErrorCode::InvalidArgument, "unknown pixel scale '" + text + "'");
}

BinaryTask build_binary_task(const IdxImages& images, std::span<const std::uint8_t> labels,
                             int digit_neg, int digit_pos, PixelScale scale) {
  if (labels.size() != images.count) {
    throw Error(ErrorCode::CountMismatch, std::to_string(images.count) + " images but " +
                                              std::to_string(labels.size()) + " labels");
  }
  std::vector<std::size_t> keep;
  std::size_t neg = 0;
  std::size_t pos = 0;
  for (std::size_t i = 0; i < labels.size(); ++i) {
    if (labels[i] == digit_neg) {
      ++neg;
      keep.push_back(i);
    } else if (labels[i] == digit_pos) {
      ++pos;
      keep.push_back(i);
    }
  }
  if (neg == 0 || pos == 0) {
    throw Error(ErrorCode::NoSamplesForDigit,
                "no samples for digit " + std::to_string(neg == 0 ? digit_neg : digit_pos));
  }

  const std::size_t dim = images.pixels_per_image();
  const double factor = scale == PixelScale::Unit ? 1.0 / 255.0 : 1.0;
  BinaryTask task;
  task.scale = scale;
  task.digit_neg = digit_neg;
  task.digit_pos = digit_pos;
  task.X.resize(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(keep.size()));
  task.y.resize(static_cast<Eigen::Index>(keep.size()));
  for (std::size_t j = 0; j < keep.size(); ++j) {
    const std::uint8_t* src = images.pixels.data() + keep[j] * dim;
    for (std::size_t k = 0; k < dim; ++k) {
      task.X(static_cast<Eigen::Index>(k), static_cast<Eigen::Index>(j)) = factor * src[k];
    }
    task.y[static_cast<Eigen::Index>(j)] = labels[keep[j]] == digit_pos ? 1.0 : -1.0;
  }
  return task;
}

PatchTrigger make_patch_trigger(std::uint32_t row, std::uint32_t col, std::uint32_t size,
                                double v_norm_target, std::uint32_t image_rows,
                                std::uint32_t image_cols) {
  if (size == 0) throw Error(ErrorCode::InvalidArgument, "patch size must be positive");
  if (!(v_norm_target >= 0.0) || !std::isfinite(v_norm_target)) {
    throw Error(ErrorCode::InvalidArgument, "target |v| must be finite and nonnegative");
  }
  if (std::uint64_t{row} + size > image_rows || std::uint64_t{col} + size > image_cols) {
    throw Error(ErrorCode::PatchOutOfBounds, "patch of size " + std::to_string(size) + " at (" +
                                                 std::to_string(row) + "," + std::to_string(col) +
                                                 ") does not fit the image");
  }
  PatchTrigger t;
  t.row = row;
  t.col = col;
  t.size = size;
  t.v_norm_target = v_norm_target;
  t.intensity = v_norm_target / static_cast<double>(size);  // size^2 entries of equal value
  t.v = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(image_rows) * image_cols);
  for (std::uint32_t r = row; r < row + size; ++r) {
    for (std::uint32_t c = col; c < col + size; ++c) {
      t.v[static_cast<Eigen::Index>(r) * image_cols + c] = t.intensity;
    }
  }
  return t;
}

std::vector<SweepRecord> run_mnist_experiment(const BinaryTask& task, const PatchTrigger& trigger,
                                              double theta, double lambda, std::uint64_t subsample_n,
                                              std::uint64_t trials, std::uint64_t seed,
                                              const MnistOptions& options) {
  if (subsample_n == 0 || subsample_n > task.n()) {
    throw Error(ErrorCode::SubsampleTooLarge, "requested " + std::to_string(subsample_n) +
                                                  " samples, task has " + std::to_string(task.n()));
  }
  if (trigger.v.size() != task.X.rows()) {
    throw Error(ErrorCode::InvalidArgument, "trigger length does not match the image size");
  }
  const std::uint64_t p = static_cast<std::uint64_t>(task.X.rows());
  ModelParams params{static_cast<double>(p) / static_cast<double>(subsample_n), lambda, theta,
                     trigger.v.norm()};
  params.validate();
  const TheoryPrediction theory = predict(params);

  const std::string dataset = "mnist:" + std::to_string(task.digit_neg) + "v" +
                              std::to_string(task.digit_pos) + ":" + to_string(task.scale) +
                              ":patch" + std::to_string(trigger.size) + "@" +
                              std::to_string(trigger.row) + "," + std::to_string(trigger.col) +
                              (options.swap_classes ? ":swap" : "");

  std::vector<SweepRecord> out(trials);
  parallel_for(trials, options.threads, [&](std::size_t trial) {
    const std::uint64_t trial_seed = derive_seed(seed, options.grid_index, trial);

    // Partial Fisher-Yates: the first subsample_n entries are the draw.
    std::vector<Eigen::Index> order(task.n());
    std::iota(order.begin(), order.end(), Eigen::Index{0});
    CounterRng pick(derive_seed(trial_seed, Stream::Subsample));
    for (std::uint64_t i = 0; i < subsample_n; ++i) {
      const std::uint64_t j = i + pick.below(task.n() - i);
      std::swap(order[i], order[j]);
    }
    Eigen::MatrixXd X(task.X.rows(), static_cast<Eigen::Index>(subsample_n));
    Eigen::VectorXd y(static_cast<Eigen::Index>(subsample_n));
    for (std::uint64_t i = 0; i < subsample_n; ++i) {
      X.col(static_cast<Eigen::Index>(i)) = task.X.col(order[i]);
      y[static_cast<Eigen::Index>(i)] = task.y[order[i]];
    }
    if (options.swap_classes) y = -y;

    const PoisonedDataset data =
        apply_poison(std::move(X), std::move(y), theta, trigger.v, trial_seed, options.centering);
    const CenteredData centered = center(data, theta);
    const RidgeSolution sol = solve_ridge(centered.X_tilde, centered.w_tilde, lambda,
                                          centered.x_bar, centered.w_bar, &trigger.v);

    SweepRecord& rec = out[trial];
    rec.grid_index = options.grid_index;
    rec.trial_index = trial;
    rec.c_target = params.c;
    rec.c_effective = params.c;
    rec.lambda = lambda;
    rec.theta = theta;
    rec.v_norm = trigger.v.norm();
    rec.p = p;
    rec.n = subsample_n;
    rec.seed = trial_seed;
    rec.mu_emp = sol.mu_emp;
    rec.sigma2_emp = sol.sigma_sq_emp;
    rec.eta_emp_plugin = efficacy(sol.mu_emp, sol.sigma_sq_emp);
    rec.eta_emp_mc =
        empirical_efficacy(sol, trigger.v, options.m_test, trial_seed, options.include_intercept);
    rec.mu_theory = theory.mu;
    rec.sigma2_theory = theory.sigma_sq;
    rec.eta_theory = theory.eta;
    rec.C_theory = theory.C_align;
    rec.centering_mode = options.centering;
    rec.warning = conditioning_warning(params.c, lambda);
    rec.dataset = dataset;
  });
  return out;
}

}  // namespace ridgepois
