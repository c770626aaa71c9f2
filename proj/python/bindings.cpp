#include <sstream>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "riccinet/config.hpp"
#include "riccinet/data.hpp"
#include "riccinet/error.hpp"
#include "riccinet/experiment.hpp"
#include "riccinet/graph.hpp"
#include "riccinet/nn.hpp"
#include "riccinet/ricci.hpp"
#include "riccinet/stats.hpp"

namespace py = pybind11;
using namespace riccinet;

namespace {

graph::NeighborGraph make_graph(std::size_t n, const std::vector<graph::Edge>& edges) {
  return graph::NeighborGraph(n, edges);
}

data::LabeledDataset make_dataset(const Eigen::MatrixXd& x, const std::vector<int>& y) {
  data::LabeledDataset ds;
  ds.points = x;
  for (int v : y) ds.labels.push_back(v ? data::Label::B : data::Label::A);
  return ds;
}

nn::LayerActivations make_acts(const std::vector<Eigen::MatrixXd>& layers) {
  return nn::LayerActivations{layers};
}

}  // namespace

PYBIND11_MODULE(_riccinet, m) {
  m.doc() = "k-NN graph curvature and Ricci-coefficient analysis of ReLU classifiers";

  auto base = py::register_exception<Error>(m, "RicciError", PyExc_RuntimeError);
  py::register_exception<DisconnectedGraph>(m, "DisconnectedGraph", base.ptr());
  py::register_exception<UndefinedCoefficient>(m, "UndefinedCoefficient", base.ptr());
  py::register_exception<InvalidArgument>(m, "InvalidArgument", base.ptr());

  // data
  m.def(
      "generate_synthetic",
      [](const std::string& family, std::size_t per_class, double noise, std::uint64_t seed) {
        const auto ds = data::generate_synthetic({data::parse_family(family), per_class, noise, seed});
        std::vector<int> labels;
        for (auto l : ds.labels) labels.push_back(static_cast<int>(l));
        return py::make_tuple(ds.points, labels);
      },
      py::arg("family"), py::arg("samples_per_class"), py::arg("noise_scale") = 0.05,
      py::arg("seed") = 0, "Synthetic dataset as (points, labels) with labels 0 = a, 1 = b.");

  // graph
  m.def(
      "knn_edges",
      [](const Eigen::MatrixXd& points, std::size_t k) { return graph::knn_graph(points, k).edges(); },
      py::arg("points"), py::arg("k"), "Sorted edge list of the symmetrised k-NN graph.");
  m.def(
      "is_connected",
      [](std::size_t n, const std::vector<graph::Edge>& e) { return graph::is_connected(make_graph(n, e)); },
      py::arg("n"), py::arg("edges"));
  m.def(
      "total_pairwise_distance",
      [](std::size_t n, const std::vector<graph::Edge>& e) {
        return graph::total_pairwise_distance(make_graph(n, e));
      },
      py::arg("n"), py::arg("edges"));
  m.def(
      "total_curvature",
      [](std::size_t n, const std::vector<graph::Edge>& e) { return graph::total_curvature(make_graph(n, e)); },
      py::arg("n"), py::arg("edges"));
  m.def(
      "forman_weighted",
      [](const std::vector<double>& vertex_weights,
         const std::vector<std::tuple<graph::Vertex, graph::Vertex, double>>& edges, graph::Vertex i,
         graph::Vertex j) {
        graph::WeightedGraph g(vertex_weights);
        for (const auto& [a, b, w] : edges) g.add_edge(a, b, w);
        return graph::forman_weighted(g, i, j);
      },
      py::arg("vertex_weights"), py::arg("edges"), py::arg("i"), py::arg("j"));

  // ricci
  py::class_<ricci::LayerGeometry>(m, "LayerGeometry")
      .def_readonly("k", &ricci::LayerGeometry::k)
      .def_readonly("total_distance", &ricci::LayerGeometry::total_distance)
      .def_readonly("total_curvature", &ricci::LayerGeometry::total_curvature)
      .def_readonly("eta", &ricci::LayerGeometry::eta)
      .def_readonly("disconnected_layer", &ricci::LayerGeometry::disconnected_layer)
      .def_property_readonly("excluded", &ricci::LayerGeometry::excluded);
  m.def(
      "layer_geometry",
      [](const std::vector<Eigen::MatrixXd>& layers, std::size_t k) {
        return ricci::layer_geometry(make_acts(layers), k);
      },
      py::arg("activations"), py::arg("k"));
  m.def("ricci_coefficient", &ricci::ricci_coefficient, py::arg("geometry"));
  m.def("aggregate_coefficient", &ricci::aggregate_coefficient, py::arg("geometries"));
  m.def("fisher_adjust", &ricci::fisher_adjust, py::arg("rho"), py::arg("depth"));

  // stats
  m.def(
      "pearson",
      [](const std::vector<double>& x, const std::vector<double>& y) { return stats::pearson(x, y); },
      py::arg("xs"), py::arg("ys"));
  m.def(
      "ols_fit",
      [](const Eigen::MatrixXd& design, const Eigen::VectorXd& response) {
        const auto r = stats::ols_fit(design, response);
        py::dict d;
        d["coefficients"] = r.coefficients;
        d["standard_errors"] = r.standard_errors;
        d["t_values"] = r.t_values;
        d["p_values"] = r.p_values;
        d["residual_df"] = r.residual_df;
        return d;
      },
      py::arg("design"), py::arg("response"));

  // nn
  m.def(
      "make_architecture",
      [](const std::string& w, const std::string& d) {
        return nn::make_architecture(nn::parse_width(w), nn::parse_depth(d));
      },
      py::arg("width_class"), py::arg("depth_class"));

  py::class_<nn::TrainedNetwork>(m, "Network")
      .def_property_readonly("layer_widths", [](const nn::TrainedNetwork& n) { return n.spec.layer_widths; })
      .def_readonly("final_train_loss", &nn::TrainedNetwork::final_train_loss)
      .def(
          "forward",
          [](const nn::TrainedNetwork& n, const Eigen::MatrixXd& x) {
            auto r = nn::forward(n, x);
            return py::make_tuple(r.predictions, r.activations.per_layer);
          },
          py::arg("batch"), "Returns (predictions, per-layer activations).")
      .def(
          "accuracy",
          [](const nn::TrainedNetwork& n, const Eigen::MatrixXd& x, const std::vector<int>& y) {
            return nn::accuracy(n, make_dataset(x, y));
          },
          py::arg("points"), py::arg("labels"))
      .def("to_json", &nn::to_json);
  m.def("network_from_json", &nn::from_json, py::arg("text"));
  m.def(
      "train",
      [](const std::vector<std::size_t>& widths, const Eigen::MatrixXd& x, const std::vector<int>& y,
         std::uint64_t seed, std::size_t epochs, double learning_rate, std::size_t batch_size) {
        nn::NetworkSpec spec;
        spec.layer_widths = widths;
        spec.input_dim = static_cast<std::size_t>(x.cols());
        spec.seed = seed;
        spec.epochs = epochs;
        spec.learning_rate = learning_rate;
        spec.batch_size = batch_size;
        py::gil_scoped_release release;
        return nn::train(spec, make_dataset(x, y));
      },
      py::arg("layer_widths"), py::arg("points"), py::arg("labels"), py::arg("seed") = 0,
      py::arg("epochs") = 100, py::arg("learning_rate") = 0.001, py::arg("batch_size") = 32);

  // experiment
  m.def(
      "run_experiment",
      [](const std::string& config_text) {
        std::istringstream in(config_text);
        const auto cfg = experiment::parse_config(in);
        experiment::ExperimentRecord rec;
        {
          py::gil_scoped_release release;
          rec = experiment::run_experiment(cfg);
        }
        const auto c = rec.counts();
        py::dict d;
        d["trained"] = c.trained;
        d["gated_out"] = c.gated_out;
        d["analysed"] = c.analysed;
        d["excluded"] = c.excluded;
        d["reconciled"] = c.reconciled();
        d["failures"] = rec.failures;
        return d;
      },
      py::arg("config_text"), "Runs the full pipeline from key-value config text.");
}
