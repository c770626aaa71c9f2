#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include <Eigen/Core>

namespace riccinet::data {

/// Binary class tag. Class b is the positive class (target 1) for training.
enum class Label : std::uint8_t { A = 0, B = 1 };

enum class Split : std::uint8_t { Train, Test };

/// Labelled point cloud: one row of `points` per sample.
struct LabeledDataset {
  Eigen::MatrixXd points;
  std::vector<Label> labels;
  std::string name;
  Split split = Split::Train;
  /// Row index of each sample in the source it was drawn from (generator
  /// output or IDX file), used to check that train and test are disjoint.
  std::vector<std::size_t> source_index;

  std::size_t size() const { return labels.size(); }
  std::size_t dim() const { return static_cast<std::size_t>(points.cols()); }
  std::size_t count(Label l) const;
  /// Labels as 0/1 targets.
  Eigen::VectorXd targets() const;
  /// Throws InvalidArgument if the dataset breaks its invariants
  /// (row/label mismatch, an empty class, dimension < 2).
  void validate() const;
};

struct TrainTestSplit {
  LabeledDataset train;
  LabeledDataset test;
};

// ---------------------------------------------------------------------------
// Synthetic entangled manifolds (all in R^3)
//
//   A  nested spheres: class a on |x| = 1, class b on |x| = 2. Directions are
//      uniform on the sphere.
//   B  linked rings: class a on (cos t, sin t, 0), class b on
//      (1 + cos s, 0, sin s). The two unit circles lie in orthogonal planes,
//      each passes through the other's centre, and their linking number is 1.
//   C  intersecting planes: class a on z = 0 as (u, v, 0), class b on x = 0 as
//      (0, u, v), with u, v uniform in [-1, 1]. The planes share the y axis.
//
// Every point then receives isotropic Gaussian noise with standard deviation
// noise_scale. Rows alternate a, b, a, b, ... so that any prefix is balanced.
// ---------------------------------------------------------------------------
enum class Family : std::uint8_t { A, B, C };

struct SyntheticSpec {
  Family family = Family::A;
  std::size_t samples_per_class = 1000;
  double noise_scale = 0.05;
  std::uint64_t seed = 0;
};

std::string to_string(Family f);
Family parse_family(const std::string& s);

LabeledDataset generate_synthetic(const SyntheticSpec& spec);

/// Generates spec.samples_per_class points per class and splits each class
/// in half, giving disjoint train and test sets of samples_per_class points each.
TrainTestSplit synthetic_split(const SyntheticSpec& spec);

// ---------------------------------------------------------------------------
// IDX (MNIST / fashion-MNIST)
// ---------------------------------------------------------------------------
inline constexpr std::uint32_t kIdxImagesMagic = 0x00000803;
inline constexpr std::uint32_t kIdxLabelsMagic = 0x00000801;

struct IdxImages {
  std::uint32_t rows = 0;
  std::uint32_t cols = 0;
  /// count x (rows * cols), row-major pixel bytes.
  std::vector<std::uint8_t> pixels;
  std::size_t count() const { return rows * cols == 0 ? 0 : pixels.size() / (rows * cols); }
};

/// Images scaled to [0, 1] plus their digit labels, in file order.
struct RawImageSet {
  Eigen::MatrixXd images;
  std::vector<int> labels;
};

IdxImages read_idx_images(const std::string& path);
std::vector<std::uint8_t> read_idx_labels(const std::string& path);
void write_idx_images(const std::string& path, const IdxImages& images);
void write_idx_labels(const std::string& path, const std::vector<std::uint8_t>& labels);

RawImageSet load_idx_pair(const std::string& images_path, const std::string& labels_path);

/// Keeps rows labelled class_a (-> Label::A) or class_b (-> Label::B), in order.
LabeledDataset binary_filter(const RawImageSet& raw, int class_a, int class_b,
                             const std::string& name = {}, Split split = Split::Train);

// ---------------------------------------------------------------------------
// CSV: header x0,...,x{N-1},label with labels written as "a" / "b".
// ---------------------------------------------------------------------------
void write_csv(std::ostream& out, const LabeledDataset& ds);
void write_csv(const std::string& path, const LabeledDataset& ds);
LabeledDataset read_csv(std::istream& in, const std::string& name = {});
LabeledDataset read_csv(const std::string& path);

}  // namespace riccinet::data
