#include "riccinet/nn.hpp"

#include <cmath>
#include <fstream>
#include <numeric>
#include <sstream>

#include <json.hpp>

#include "riccinet/error.hpp"
#include "riccinet/random.hpp"

namespace riccinet::nn {

using Eigen::Index;
using Eigen::MatrixXd;
using Eigen::VectorXd;

void NetworkSpec::validate() const {
  if (layer_widths.empty()) throw InvalidArgument("network needs at least one hidden layer");
  for (std::size_t w : layer_widths)
    if (w == 0) throw InvalidArgument("hidden-layer widths must be >= 1");
  if (input_dim == 0) throw InvalidArgument("input_dim must be >= 1");
  if (!(learning_rate > 0.0)) throw InvalidArgument("learning_rate must be > 0");
  if (batch_size == 0) throw InvalidArgument("batch_size must be >= 1");
}

void TrainedNetwork::validate() const {
  if (weights.size() != biases.size() || weights.size() != spec.layer_widths.size() + 1)
    throw ShapeError(0, "layer count does not match spec");
  Index fan_in = static_cast<Index>(spec.input_dim);
  for (std::size_t l = 0; l < weights.size(); ++l) {
    const Index fan_out = l < spec.layer_widths.size() ? static_cast<Index>(spec.layer_widths[l]) : 1;
    if (weights[l].rows() != fan_in || weights[l].cols() != fan_out || biases[l].size() != fan_out)
      throw ShapeError(l + 1, "weights/biases do not match the declared widths");
    fan_in = fan_out;
  }
}

std::string to_string(WidthClass w) {
  switch (w) {
    case WidthClass::Narrow: return "narrow";
    case WidthClass::Wide: return "wide";
    case WidthClass::Bottleneck: return "bottleneck";
  }
  return "?";
}

std::string to_string(DepthClass d) { return d == DepthClass::Shallow ? "shallow" : "deep"; }

WidthClass parse_width(const std::string& s) {
  if (s == "narrow") return WidthClass::Narrow;
  if (s == "wide") return WidthClass::Wide;
  if (s == "bottleneck") return WidthClass::Bottleneck;
  throw InvalidArgument("unknown width class '" + s + "'");
}

DepthClass parse_depth(const std::string& s) {
  if (s == "shallow") return DepthClass::Shallow;
  if (s == "deep") return DepthClass::Deep;
  throw InvalidArgument("unknown depth class '" + s + "'");
}

std::vector<std::size_t> make_architecture(WidthClass width, DepthClass depth) {
  const std::size_t layers = depth == DepthClass::Shallow ? 5 : 11;
  switch (width) {
    case WidthClass::Narrow: return std::vector<std::size_t>(layers, 25);
    case WidthClass::Wide: return std::vector<std::size_t>(layers, 50);
    case WidthClass::Bottleneck: break;
  }
  constexpr std::size_t outer = 50, inner = 25;
  const std::size_t mid = layers / 2;
  std::vector<std::size_t> widths(layers);
  for (std::size_t i = 0; i < layers; ++i) {
    const std::size_t from_edge = i <= mid ? i : layers - 1 - i;
    // outer - (outer - inner) * from_edge / mid, floored
    widths[i] = outer - ((outer - inner) * from_edge + mid - 1) / mid;
  }
  return widths;
}

TrainedNetwork initialize(const NetworkSpec& spec) {
  spec.validate();
  Rng rng(spec.seed);
  TrainedNetwork net;
  net.spec = spec;
  std::size_t fan_in = spec.input_dim;
  for (std::size_t l = 0; l <= spec.layer_widths.size(); ++l) {
    const std::size_t fan_out = l < spec.layer_widths.size() ? spec.layer_widths[l] : 1;
    const double limit = std::sqrt(6.0 / static_cast<double>(fan_in + fan_out));
    MatrixXd w(static_cast<Index>(fan_in), static_cast<Index>(fan_out));
    for (Index r = 0; r < w.rows(); ++r)
      for (Index c = 0; c < w.cols(); ++c) w(r, c) = uniform(rng, -limit, limit);
    net.weights.push_back(std::move(w));
    net.biases.push_back(VectorXd::Zero(static_cast<Index>(fan_out)));
    fan_in = fan_out;
  }
  return net;
}

namespace {

double sigmoid(double z) {
  if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
  const double e = std::exp(z);
  return e / (1.0 + e);
}

// -[y log s(z) + (1-y) log(1-s(z))] written in terms of the logit.
double bce_from_logit(double z, double y) {
  return std::max(z, 0.0) - z * y + std::log1p(std::exp(-std::abs(z)));
}

void check_input(const TrainedNetwork& net, const MatrixXd& batch) {
  if (net.weights.empty()) throw ShapeError(0, "network has no layers");
  if (batch.cols() != net.weights.front().rows())
    throw ShapeError(1, "input has " + std::to_string(batch.cols()) + " columns, layer expects " +
                            std::to_string(net.weights.front().rows()));
  for (std::size_t l = 1; l < net.weights.size(); ++l)
    if (net.weights[l].rows() != net.weights[l - 1].cols())
      throw ShapeError(l + 1, "weight matrix does not chain with the previous layer");
}

// Logits of the output unit; optionally keeps every hidden pre-activation and activation.
VectorXd run(const TrainedNetwork& net, const MatrixXd& batch, std::vector<MatrixXd>* pre,
             std::vector<MatrixXd>* acts) {
  check_input(net, batch);
  MatrixXd x = batch;
  const std::size_t hidden = net.weights.size() - 1;
  for (std::size_t l = 0; l < hidden; ++l) {
    MatrixXd h = x * net.weights[l];
    h.rowwise() += net.biases[l].transpose();
    if (pre) pre->push_back(h);
    x = h.cwiseMax(0.0);
    if (acts) acts->push_back(x);
  }
  VectorXd z = x * net.weights.back();
  z.array() += net.biases.back()[0];
  return z;
}

}  // namespace

ForwardResult forward(const TrainedNetwork& net, const MatrixXd& batch) {
  ForwardResult out;
  const VectorXd z = run(net, batch, nullptr, &out.activations.per_layer);
  out.predictions = z.unaryExpr([](double v) { return sigmoid(v); });
  return out;
}

VectorXd predict(const TrainedNetwork& net, const MatrixXd& batch) {
  return run(net, batch, nullptr, nullptr).unaryExpr([](double v) { return sigmoid(v); });
}

double loss(const TrainedNetwork& net, const MatrixXd& batch, const VectorXd& targets) {
  const VectorXd z = run(net, batch, nullptr, nullptr);
  double total = 0.0;
  for (Index i = 0; i < z.size(); ++i) total += bce_from_logit(z[i], targets[i]);
  return total / static_cast<double>(z.size());
}

Gradients loss_and_gradient(const TrainedNetwork& net, const MatrixXd& batch,
                            const VectorXd& targets) {
  if (targets.size() != batch.rows()) throw ShapeError(0, "target count does not match batch rows");
  std::vector<MatrixXd> pre, acts;
  const VectorXd z = run(net, batch, &pre, &acts);
  const auto n = static_cast<double>(batch.rows());

  Gradients g;
  g.weights.resize(net.weights.size());
  g.biases.resize(net.biases.size());
  VectorXd dz(z.size());
  for (Index i = 0; i < z.size(); ++i) {
    g.loss += bce_from_logit(z[i], targets[i]);
    dz[i] = (sigmoid(z[i]) - targets[i]) / n;
  }
  g.loss /= n;

  const std::size_t hidden = net.weights.size() - 1;
  const MatrixXd& last = hidden == 0 ? batch : acts[hidden - 1];
  g.weights[hidden] = last.transpose() * dz;
  g.biases[hidden] = VectorXd::Constant(1, dz.sum());

  MatrixXd delta = dz * net.weights[hidden].transpose();  // dL/dA for the last hidden layer
  for (std::size_t l = hidden; l-- > 0;) {
    delta = delta.cwiseProduct((pre[l].array() > 0.0).cast<double>().matrix());
    const MatrixXd& input = l == 0 ? batch : acts[l - 1];
    g.weights[l] = input.transpose() * delta;
    g.biases[l] = delta.colwise().sum().transpose();
    if (l > 0) delta = delta * net.weights[l].transpose();
  }
  return g;
}

TrainedNetwork train(const NetworkSpec& spec, const data::LabeledDataset& train_set) {
  if (train_set.size() == 0) throw InvalidArgument("training set is empty");
  if (train_set.dim() != spec.input_dim)
    throw ShapeError(1, "training data has " + std::to_string(train_set.dim()) +
                            " columns, spec.input_dim is " + std::to_string(spec.input_dim));
  TrainedNetwork net = initialize(spec);
  const VectorXd y = train_set.targets();

  std::vector<MatrixXd> sq_w;
  std::vector<VectorXd> sq_b;
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    sq_w.push_back(MatrixXd::Zero(net.weights[l].rows(), net.weights[l].cols()));
    sq_b.push_back(VectorXd::Zero(net.biases[l].size()));
  }

  // Shuffling draws from its own stream so initial weights don't depend on epochs.
  Rng shuffle_rng(mix64(spec.seed ^ 0x53485546464c45ULL));
  std::vector<Index> order(train_set.size());
  std::iota(order.begin(), order.end(), Index{0});

  const double rho = spec.rms_decay;
  const double lr = spec.learning_rate;
  const double eps = spec.rms_epsilon;
  MatrixXd xb;
  VectorXd yb;
  for (std::size_t epoch = 0; epoch < spec.epochs; ++epoch) {
    shuffle(order.begin(), order.end(), shuffle_rng);
    std::size_t batch_no = 0;
    for (std::size_t start = 0; start < order.size(); start += spec.batch_size, ++batch_no) {
      const std::size_t end = std::min(order.size(), start + spec.batch_size);
      const auto m = static_cast<Index>(end - start);
      xb.resize(m, train_set.points.cols());
      yb.resize(m);
      for (Index r = 0; r < m; ++r) {
        xb.row(r) = train_set.points.row(order[start + static_cast<std::size_t>(r)]);
        yb[r] = y[order[start + static_cast<std::size_t>(r)]];
      }
      const Gradients g = loss_and_gradient(net, xb, yb);
      if (!std::isfinite(g.loss)) throw TrainingDiverged(epoch, batch_no);
      for (std::size_t l = 0; l < net.weights.size(); ++l) {
        sq_w[l] = rho * sq_w[l] + (1.0 - rho) * g.weights[l].cwiseAbs2();
        net.weights[l].array() -= lr * g.weights[l].array() / (sq_w[l].array().sqrt() + eps);
        sq_b[l] = rho * sq_b[l] + (1.0 - rho) * g.biases[l].cwiseAbs2();
        net.biases[l].array() -= lr * g.biases[l].array() / (sq_b[l].array().sqrt() + eps);
      }
    }
  }
  net.final_train_loss = loss(net, train_set.points, y);
  if (!std::isfinite(net.final_train_loss)) throw TrainingDiverged(spec.epochs, 0);
  return net;
}

double accuracy(const TrainedNetwork& net, const data::LabeledDataset& ds) {
  if (ds.size() == 0) return 0.0;
  const VectorXd p = predict(net, ds.points);
  std::size_t correct = 0;
  for (std::size_t i = 0; i < ds.size(); ++i) {
    const bool predicted_b = p[static_cast<Index>(i)] >= 0.5;
    correct += predicted_b == (ds.labels[i] == data::Label::B);
  }
  return static_cast<double>(correct) / static_cast<double>(ds.size());
}

// --- JSON ------------------------------------------------------------------

using nlohmann::json;

std::string to_json(const TrainedNetwork& net) {
  json j;
  j["format"] = "riccinet.network/1";
  const auto& s = net.spec;
  j["spec"] = {{"layer_widths", s.layer_widths}, {"input_dim", s.input_dim},
               {"seed", s.seed},                 {"learning_rate", s.learning_rate},
               {"epochs", s.epochs},             {"batch_size", s.batch_size},
               {"rms_decay", s.rms_decay},       {"rms_epsilon", s.rms_epsilon}};
  j["final_train_loss"] = net.final_train_loss;
  json layers = json::array();
  for (std::size_t l = 0; l < net.weights.size(); ++l) {
    const MatrixXd& w = net.weights[l];
    std::vector<double> flat;
    flat.reserve(static_cast<std::size_t>(w.size()));
    for (Index r = 0; r < w.rows(); ++r)
      for (Index c = 0; c < w.cols(); ++c) flat.push_back(w(r, c));
    layers.push_back({{"rows", w.rows()},
                      {"cols", w.cols()},
                      {"weights", flat},
                      {"biases", std::vector<double>(net.biases[l].data(),
                                                     net.biases[l].data() + net.biases[l].size())}});
  }
  j["layers"] = std::move(layers);
  return j.dump();
}

TrainedNetwork from_json(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::exception& e) {
    throw InvalidArgument(std::string("network json: ") + e.what());
  }
  if (j.value("format", "") != "riccinet.network/1")
    throw InvalidArgument("network json: unsupported format tag");
  TrainedNetwork net;
  const auto& s = j.at("spec");
  net.spec.layer_widths = s.at("layer_widths").get<std::vector<std::size_t>>();
  net.spec.input_dim = s.at("input_dim").get<std::size_t>();
  net.spec.seed = s.at("seed").get<std::uint64_t>();
  net.spec.learning_rate = s.at("learning_rate").get<double>();
  net.spec.epochs = s.at("epochs").get<std::size_t>();
  net.spec.batch_size = s.at("batch_size").get<std::size_t>();
  net.spec.rms_decay = s.at("rms_decay").get<double>();
  net.spec.rms_epsilon = s.at("rms_epsilon").get<double>();
  net.final_train_loss = j.at("final_train_loss").get<double>();
  for (const auto& layer : j.at("layers")) {
    const auto rows = layer.at("rows").get<Index>();
    const auto cols = layer.at("cols").get<Index>();
    const auto flat = layer.at("weights").get<std::vector<double>>();
    const auto bias = layer.at("biases").get<std::vector<double>>();
    if (static_cast<Index>(flat.size()) != rows * cols || static_cast<Index>(bias.size()) != cols)
      throw ShapeError(net.weights.size() + 1, "serialised array length does not match shape");
    MatrixXd w(rows, cols);
    for (Index r = 0; r < rows; ++r)
      for (Index c = 0; c < cols; ++c) w(r, c) = flat[static_cast<std::size_t>(r * cols + c)];
    net.weights.push_back(std::move(w));
    net.biases.push_back(Eigen::Map<const VectorXd>(bias.data(), cols));
  }
  net.validate();
  return net;
}

void save(const std::string& path, const TrainedNetwork& net) {
  std::ofstream out(path);
  if (!out) throw Error("cannot open '" + path + "' for writing");
  out << to_json(net) << '\n';
}

TrainedNetwork load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  return from_json(ss.str());
}

}  // namespace riccinet::nn
