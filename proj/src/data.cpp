#include "riccinet/data.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <numbers>
#include <sstream>

#include "riccinet/error.hpp"
#include "riccinet/random.hpp"

namespace riccinet::data {

std::size_t LabeledDataset::count(Label l) const {
  std::size_t n = 0;
  for (Label x : labels) n += (x == l);
  return n;
}

Eigen::VectorXd LabeledDataset::targets() const {
  Eigen::VectorXd y(static_cast<Eigen::Index>(labels.size()));
  for (std::size_t i = 0; i < labels.size(); ++i)
    y[static_cast<Eigen::Index>(i)] = labels[i] == Label::B ? 1.0 : 0.0;
  return y;
}

void LabeledDataset::validate() const {
  if (static_cast<std::size_t>(points.rows()) != labels.size())
    throw InvalidArgument("dataset '" + name + "': row count does not match label count");
  if (points.cols() < 2) throw InvalidArgument("dataset '" + name + "': ambient dimension < 2");
  if (count(Label::A) == 0 || count(Label::B) == 0)
    throw InvalidArgument("dataset '" + name + "': both classes must be non-empty");
}

std::string to_string(Family f) {
  switch (f) {
    case Family::A: return "A";
    case Family::B: return "B";
    case Family::C: return "C";
  }
  return "?";
}

Family parse_family(const std::string& s) {
  if (s == "A" || s == "a") return Family::A;
  if (s == "B" || s == "b") return Family::B;
  if (s == "C" || s == "c") return Family::C;
  throw InvalidArgument("unknown synthetic family '" + s + "' (expected A, B or C)");
}

namespace {

Eigen::Vector3d unit_direction(Rng& rng) {
  for (;;) {
    Eigen::Vector3d v(standard_normal(rng), standard_normal(rng), standard_normal(rng));
    const double n = v.norm();
    if (n > 1e-12) return v / n;
  }
}

Eigen::Vector3d manifold_point(Family family, Label label, Rng& rng) {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  switch (family) {
    case Family::A: {
      const double radius = label == Label::A ? 1.0 : 2.0;
      return radius * unit_direction(rng);
    }
    case Family::B: {
      const double t = two_pi * uniform01(rng);
      if (label == Label::A) return {std::cos(t), std::sin(t), 0.0};
      return {1.0 + std::cos(t), 0.0, std::sin(t)};
    }
    case Family::C: {
      const double u = uniform(rng, -1.0, 1.0);
      const double v = uniform(rng, -1.0, 1.0);
      if (label == Label::A) return {u, v, 0.0};
      return {0.0, u, v};
    }
  }
  return Eigen::Vector3d::Zero();
}

}  // namespace

LabeledDataset generate_synthetic(const SyntheticSpec& spec) {
  if (spec.samples_per_class == 0) throw InvalidArgument("samples_per_class must be >= 1");
  if (!(spec.noise_scale >= 0.0)) throw InvalidArgument("noise_scale must be >= 0");

  Rng rng(spec.seed);
  const std::size_t n = 2 * spec.samples_per_class;
  LabeledDataset ds;
  ds.name = to_string(spec.family);
  ds.points.resize(static_cast<Eigen::Index>(n), 3);
  ds.labels.resize(n);
  ds.source_index.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const Label label = (i % 2 == 0) ? Label::A : Label::B;
    Eigen::Vector3d p = manifold_point(spec.family, label, rng);
    if (spec.noise_scale > 0.0) {
      for (int d = 0; d < 3; ++d) p[d] += spec.noise_scale * standard_normal(rng);
    }
    ds.points.row(static_cast<Eigen::Index>(i)) = p.transpose();
    ds.labels[i] = label;
    ds.source_index[i] = i;
  }
  return ds;
}

TrainTestSplit synthetic_split(const SyntheticSpec& spec) {
  if (spec.samples_per_class < 2)
    throw InvalidArgument("samples_per_class must be >= 2 to split into train and test");
  const LabeledDataset all = generate_synthetic(spec);
  // Rows alternate a, b; the first half of each class trains.
  const std::size_t train_per_class = (spec.samples_per_class + 1) / 2;
  std::vector<std::size_t> train_rows, test_rows;
  std::size_t seen[2] = {0, 0};
  for (std::size_t i = 0; i < all.size(); ++i) {
    auto& c = seen[static_cast<int>(all.labels[i])];
    (c < train_per_class ? train_rows : test_rows).push_back(i);
    ++c;
  }
  auto take = [&](const std::vector<std::size_t>& rows, Split split) {
    LabeledDataset out;
    out.name = all.name;
    out.split = split;
    out.points.resize(static_cast<Eigen::Index>(rows.size()), all.points.cols());
    for (std::size_t r = 0; r < rows.size(); ++r) {
      out.points.row(static_cast<Eigen::Index>(r)) = all.points.row(static_cast<Eigen::Index>(rows[r]));
      out.labels.push_back(all.labels[rows[r]]);
      out.source_index.push_back(rows[r]);
    }
    return out;
  };
  return {take(train_rows, Split::Train), take(test_rows, Split::Test)};
}

LabeledDataset binary_filter(const RawImageSet& raw, int class_a, int class_b,
                             const std::string& name, Split split) {
  if (class_a == class_b)
    throw InvalidArgument("binary_filter: classes must differ (got " + std::to_string(class_a) +
                          " twice)");
  std::vector<std::size_t> rows;
  bool has_a = false, has_b = false;
  for (std::size_t i = 0; i < raw.labels.size(); ++i) {
    if (raw.labels[i] == class_a) has_a = true;
    if (raw.labels[i] == class_b) has_b = true;
    if (raw.labels[i] == class_a || raw.labels[i] == class_b) rows.push_back(i);
  }
  if (!has_a) throw InvalidArgument("binary_filter: class " + std::to_string(class_a) + " not present");
  if (!has_b) throw InvalidArgument("binary_filter: class " + std::to_string(class_b) + " not present");

  LabeledDataset out;
  out.name = name;
  out.split = split;
  out.points.resize(static_cast<Eigen::Index>(rows.size()), raw.images.cols());
  out.labels.reserve(rows.size());
  out.source_index = rows;
  for (std::size_t r = 0; r < rows.size(); ++r) {
    out.points.row(static_cast<Eigen::Index>(r)) = raw.images.row(static_cast<Eigen::Index>(rows[r]));
    out.labels.push_back(raw.labels[rows[r]] == class_a ? Label::A : Label::B);
  }
  return out;
}

// --- CSV ---------------------------------------------------------------------

void write_csv(std::ostream& out, const LabeledDataset& ds) {
  const auto cols = ds.points.cols();
  for (Eigen::Index c = 0; c < cols; ++c) out << 'x' << c << ',';
  out << "label\n";
  char buf[32];
  for (Eigen::Index r = 0; r < ds.points.rows(); ++r) {
    for (Eigen::Index c = 0; c < cols; ++c) {
      std::snprintf(buf, sizeof buf, "%.17g", ds.points(r, c));
      out << buf << ',';
    }
    out << (ds.labels[static_cast<std::size_t>(r)] == Label::A ? 'a' : 'b') << '\n';
  }
}

void write_csv(const std::string& path, const LabeledDataset& ds) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  write_csv(out, ds);
}

LabeledDataset read_csv(std::istream& in, const std::string& name) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("csv: missing header");
  std::size_t cols = 0;
  {
    std::stringstream hs(line);
    std::string field;
    std::vector<std::string> header;
    while (std::getline(hs, field, ',')) header.push_back(field);
    if (header.empty() || header.back() != "label")
      throw InvalidArgument("csv: last header column must be 'label'");
    cols = header.size() - 1;
    for (std::size_t c = 0; c < cols; ++c)
      if (header[c] != "x" + std::to_string(c))
        throw InvalidArgument("csv: unexpected header column '" + header[c] + "'");
  }
  std::vector<double> values;
  LabeledDataset ds;
  ds.name = name;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (line.empty()) continue;
    std::stringstream ls(line);
    std::string field;
    for (std::size_t c = 0; c < cols; ++c) {
      if (!std::getline(ls, field, ','))
        throw InvalidArgument("csv line " + std::to_string(line_no) + ": too few fields");
      double v = 0.0;
      const auto [p, ec] = std::from_chars(field.data(), field.data() + field.size(), v);
      if (ec != std::errc() || p != field.data() + field.size())
        throw InvalidArgument("csv line " + std::to_string(line_no) + ": bad number '" + field + "'");
      values.push_back(v);
    }
    if (!std::getline(ls, field, ',') || (field != "a" && field != "b"))
      throw InvalidArgument("csv line " + std::to_string(line_no) + ": label must be a or b");
    ds.labels.push_back(field == "a" ? Label::A : Label::B);
  }
  const auto rows = static_cast<Eigen::Index>(ds.labels.size());
  ds.points = Eigen::Map<Eigen::Matrix<double, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>>(
      values.data(), rows, static_cast<Eigen::Index>(cols));
  ds.source_index.resize(ds.labels.size());
  for (std::size_t i = 0; i < ds.source_index.size(); ++i) ds.source_index[i] = i;
  return ds;
}

LabeledDataset read_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  return read_csv(in, path);
}

}  // namespace riccinet::data
