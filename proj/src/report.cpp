#include "riccinet/report.hpp"

#include <charconv>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>

#include "riccinet/error.hpp"
#include "riccinet/stats.hpp"

namespace riccinet::report {

namespace fs = std::filesystem;
using experiment::NetworkRecord;

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

namespace {

std::string fmt_opt(const std::optional<double>& v) { return v ? fmt(*v) : std::string(); }

std::ofstream open_out(const fs::path& p) {
  fs::create_directories(p.parent_path());
  std::ofstream out(p);
  if (!out) throw Error("cannot open '" + p.string() + "' for writing");
  return out;
}

std::vector<std::string> split_fields(const std::string& line, std::size_t max_fields) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (out.size() + 1 < max_fields) {
    const auto comma = line.find(',', start);
    if (comma == std::string::npos) break;
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
  out.push_back(line.substr(start));
  return out;
}

template <typename T>
T to_number(const std::string& s) {
  T v{};
  const auto [p, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || p != s.data() + s.size())
    throw InvalidArgument("networks csv: bad number '" + s + "'");
  return v;
}

}  // namespace

std::vector<ScatterRow> scatter_rows(const ricci::LayerGeometry& geom) {
  if (geom.excluded())
    throw InvalidArgument("scatter data refused: network " + geom.network_id +
                          " is excluded (layer " + std::to_string(*geom.disconnected_layer + 1) +
                          " disconnected at k = " + std::to_string(geom.k) + ")");
  std::vector<ScatterRow> rows;
  for (std::size_t l = 0; l < geom.eta.size(); ++l)
    rows.push_back({l + 1, geom.total_curvature[l], geom.eta[l]});
  return rows;
}

void emit_scatter_data(std::ostream& out, const ricci::LayerGeometry& geom) {
  const auto rows = scatter_rows(geom);
  std::optional<double> rho;
  try {
    rho = ricci::ricci_coefficient(geom);
  } catch (const UndefinedCoefficient&) {
  }
  out << "layer,ric,eta,rho\n";
  for (const auto& r : rows) out << r.layer << ',' << fmt(r.curvature) << ',' << fmt(r.eta) << ',' << fmt_opt(rho) << '\n';
}

void emit_pca_layer(std::ostream& out, const pca::Projection& p,
                    const std::vector<data::Label>& labels) {
  out << "pc1,pc2,label\n";
  for (Eigen::Index i = 0; i < p.coordinates.rows(); ++i) {
    for (int c = 0; c < 2; ++c) {
      if (c < p.coordinates.cols()) out << fmt(p.coordinates(i, c));
      out << ',';
    }
    out << (labels[static_cast<std::size_t>(i)] == data::Label::A ? 'a' : 'b') << '\n';
  }
}

void write_ksweep_csv(std::ostream& out, const std::vector<experiment::GroupSweep>& sweeps) {
  out << "dataset,width_class,depth_class,k,aggregated_coefficient,n_networks_pooled,n_excluded,"
         "mean_network_coefficient,optimal\n";
  for (const auto& s : sweeps) {
    for (const auto& r : s.rows) {
      out << s.dataset << ',' << nn::to_string(s.width) << ',' << nn::to_string(s.depth) << ','
          << r.k << ',' << fmt_opt(r.aggregated) << ',' << r.pooled << ',' << r.excluded << ','
          << fmt_opt(r.mean_network_coefficient) << ',' << (s.optimal_k == r.k ? 1 : 0) << '\n';
    }
  }
}

void write_networks_csv(std::ostream& out, const std::vector<NetworkRecord>& records) {
  out << "network_id,dataset,width_class,depth_class,layers,replicate,seed,test_accuracy,threshold,"
         "status,k,rho,z_adjusted,reason\n";
  for (const auto& r : records) {
    out << r.id << ',' << r.dataset << ',' << nn::to_string(r.width) << ',' << nn::to_string(r.depth)
        << ',' << r.layers << ',' << r.replicate << ',' << r.seed << ',' << fmt(r.test_accuracy) << ','
        << fmt(r.threshold) << ',' << experiment::to_string(r.status) << ','
        << (r.k ? std::to_string(*r.k) : std::string()) << ',' << fmt_opt(r.rho) << ','
        << fmt_opt(r.z_adjusted) << ',' << r.reason << '\n';
  }
}

std::vector<NetworkRecord> read_networks_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line) || line.rfind("network_id,", 0) != 0)
    throw InvalidArgument("networks csv: missing header");
  std::vector<NetworkRecord> out;
  while (std::getline(in, line)) {
    if (line.empty()) continue;
    const auto f = split_fields(line, 14);
    if (f.size() != 14) throw InvalidArgument("networks csv: expected 14 fields in '" + line + "'");
    NetworkRecord r;
    r.id = f[0];
    r.dataset = f[1];
    r.width = nn::parse_width(f[2]);
    r.depth = nn::parse_depth(f[3]);
    r.layers = to_number<std::size_t>(f[4]);
    r.replicate = to_number<std::size_t>(f[5]);
    r.seed = to_number<std::uint64_t>(f[6]);
    r.test_accuracy = to_number<double>(f[7]);
    r.threshold = to_number<double>(f[8]);
    r.status = experiment::parse_status(f[9]);
    if (!f[10].empty()) r.k = to_number<std::size_t>(f[10]);
    if (!f[11].empty()) r.rho = to_number<double>(f[11]);
    if (!f[12].empty()) r.z_adjusted = to_number<double>(f[12]);
    r.reason = f[13];
    out.push_back(std::move(r));
  }
  return out;
}

void write_manifest(std::ostream& out, const experiment::ExperimentRecord& record) {
  const auto c = record.counts();
  out << "trained " << c.trained << '\n'
      << "gated_out " << c.gated_out << '\n'
      << "analysed " << c.analysed << '\n'
      << "excluded " << c.excluded << '\n'
      << "reconciled " << (c.reconciled() ? "yes" : "no") << '\n';
  std::size_t negative = 0;
  for (const auto& n : record.networks)
    if (n.status == experiment::NetworkStatus::Analysed && n.rho && *n.rho < 0.0) ++negative;
  out << "negative_rho " << negative << '\n';
  out << "regression " << (record.regression ? "ok" : "failed") << '\n';
  out << "failures " << record.failures.size() << '\n';
  for (const auto& f : record.failures) out << "  " << f << '\n';
  out << "warnings " << record.warnings.size() << '\n';
  for (const auto& w : record.warnings) out << "  " << w << '\n';
}

void write_all(const experiment::ExperimentConfig& cfg, const experiment::ExperimentRecord& record) {
  const fs::path dir = cfg.output_dir;
  {
    auto out = open_out(dir / "networks.csv");
    write_networks_csv(out, record.networks);
  }
  {
    auto out = open_out(dir / "ksweep.csv");
    write_ksweep_csv(out, record.sweeps);
  }
  if (record.regression) {
    auto out = open_out(dir / "regression.csv");
    stats::write_regression_csv(out, *record.regression);
  } else {
    fs::remove(dir / "regression.csv");
  }
  {
    auto out = open_out(dir / "manifest.txt");
    write_manifest(out, record);
  }
}

void write_plot_data(const experiment::ExperimentConfig& cfg, const experiment::DataStore& data,
                     const experiment::NetworkStore& networks,
                     const std::vector<NetworkRecord>& records,
                     const experiment::GeometryStore& geometries,
                     std::vector<std::string>& warnings) {
  const fs::path dir = cfg.output_dir;
  std::set<std::string> pca_done;
  for (const auto& rec : records) {
    if (rec.status != experiment::NetworkStatus::Analysed) continue;
    if (auto g = geometries.find(rec.id); g != geometries.end()) {
      auto out = open_out(dir / "scatter" / (rec.id + ".csv"));
      emit_scatter_data(out, g->second);
    }
    if (pca_done.insert(rec.group()).second) {
      const auto& test = data.at(rec.dataset).test;
      const auto acts = nn::forward(networks.at(rec.id), test.points).activations;
      const auto projections = pca::project_layers(acts);
      for (std::size_t l = 0; l < projections.size(); ++l) {
        if (!projections[l].warning.empty())
          warnings.push_back("pca " + rec.id + " layer " + std::to_string(l + 1) + ": " +
                             projections[l].warning);
        auto out = open_out(dir / "pca" / (rec.id + "_layer" + std::to_string(l + 1) + ".csv"));
        emit_pca_layer(out, projections[l], test.labels);
      }
    }
  }
}

}  // namespace riccinet::report
