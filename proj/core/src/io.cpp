#include "gpnet/io.hpp"

#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

namespace gpnet {

using nlohmann::json;

namespace {

json matrix_to_json(const Matrix& m) {
  json rows = json::array();
  for (int i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (int j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(std::move(row));
  }
  return rows;
}

Matrix matrix_from_json(const json& j) {
  if (!j.is_array() || j.empty()) throw std::invalid_argument("expected a matrix array");
  const int rows = static_cast<int>(j.size());
  const int cols = static_cast<int>(j[0].size());
  Matrix m(rows, cols);
  for (int i = 0; i < rows; ++i) {
    if (static_cast<int>(j[i].size()) != cols)
      throw std::invalid_argument("ragged matrix array");
    for (int c = 0; c < cols; ++c) m(i, c) = j[i][c].get<double>();
  }
  return m;
}

json kernel_to_json(const KernelSpec& k) {
  return json{{"family", k.family == KernelFamily::Gaussian ? "gaussian" : "spherical"},
              {"bandwidth", k.bandwidth}};
}

KernelSpec kernel_from_json(const json& j) {
  const std::string fam = j.at("family").get<std::string>();
  KernelSpec out{};
  if (fam == "gaussian")
    out.family = KernelFamily::Gaussian;
  else if (fam == "spherical")
    out.family = KernelFamily::Spherical;
  else
    throw std::invalid_argument("unknown kernel family: " + fam);
  out.bandwidth = j.at("bandwidth").get<double>();
  return out;
}

json corr_list_to_json(const std::vector<MaternParams>& corr) {
  json out = json::array();
  for (const auto& p : corr) out.push_back(json{{"nu", p.nu}, {"phi", p.phi}});
  return out;
}

std::vector<MaternParams> corr_list_from_json(const json& j) {
  std::vector<MaternParams> out;
  for (const auto& e : j)
    out.emplace_back(e.at("nu").get<double>(), e.at("phi").get<double>());
  return out;
}

}  // namespace

std::string model_to_json(const CrossCovModel& model) {
  json j;
  j["schema_version"] = kModelSchemaVersion;
  std::visit(
      [&](const auto& m) {
        using T = std::decay_t<decltype(m)>;
        if constexpr (std::is_same_v<T, SeparableModel>) {
          j["family"] = "separable";
          j["sigma"] = matrix_to_json(m.sigma.sigma());
          j["corr"] = json{{"nu", m.corr.nu}, {"phi", m.corr.phi}};
        } else if constexpr (std::is_same_v<T, ParsimoniousMaternModel>) {
          j["family"] = "parsimonious_matern";
          j["sigma"] = matrix_to_json(m.sigma().sigma());
          j["nu"] = m.nu();
          j["phi"] = m.phi();
          j["dim"] = m.dim();
        } else if constexpr (std::is_same_v<T, DiscretizedConvolutionModel>) {
          j["family"] = "discretized_convolution";
          j["sigma"] = matrix_to_json(m.sigma().sigma());
          json kernels = json::array();
          for (const auto& k : m.kernels()) kernels.push_back(kernel_to_json(k));
          j["kernels"] = std::move(kernels);
          j["knots"] = matrix_to_json(m.knots().coords());
          j["cell_area"] = std::vector<double>(m.cell_area().data(),
                                               m.cell_area().data() + m.cell_area().size());
        } else if constexpr (std::is_same_v<T, InsideOutModel>) {
          j["family"] = "inside_out";
          j["sigma"] = matrix_to_json(m.sigma().sigma());
          j["corr"] = corr_list_to_json(m.corr());
          j["reference"] = matrix_to_json(m.reference().coords());
        } else {  // LmcModel
          j["family"] = "lmc";
          j["loading"] = matrix_to_json(m.loading());
          j["corr"] = corr_list_to_json(m.corr());
        }
      },
      model);
  return j.dump(2);
}

CrossCovModel model_from_json(const std::string& text) {
  const json j = json::parse(text);
  const int ver = j.at("schema_version").get<int>();
  if (ver != kModelSchemaVersion)
    throw std::invalid_argument("unsupported model schema_version " + std::to_string(ver));
  const std::string family = j.at("family").get<std::string>();
  if (family == "separable") {
    return SeparableModel{
        SigmaPair::from_sigma(matrix_from_json(j.at("sigma"))),
        MaternParams{j.at("corr").at("nu").get<double>(), j.at("corr").at("phi").get<double>()}};
  }
  if (family == "parsimonious_matern") {
    return ParsimoniousMaternModel(SigmaPair::from_sigma(matrix_from_json(j.at("sigma"))),
                                   j.at("nu").get<std::vector<double>>(),
                                   j.at("phi").get<double>(), j.at("dim").get<int>());
  }
  if (family == "discretized_convolution") {
    std::vector<KernelSpec> kernels;
    for (const auto& k : j.at("kernels")) kernels.push_back(kernel_from_json(k));
    const std::vector<double> areas = j.at("cell_area").get<std::vector<double>>();
    Vector cell = Eigen::Map<const Vector>(areas.data(), areas.size());
    return DiscretizedConvolutionModel(SigmaPair::from_sigma(matrix_from_json(j.at("sigma"))),
                                       std::move(kernels),
                                       LocationSet(matrix_from_json(j.at("knots"))), cell);
  }
  if (family == "inside_out") {
    return InsideOutModel(SigmaPair::from_sigma(matrix_from_json(j.at("sigma"))),
                          corr_list_from_json(j.at("corr")),
                          LocationSet(matrix_from_json(j.at("reference"))));
  }
  if (family == "lmc") {
    return LmcModel(matrix_from_json(j.at("loading")), corr_list_from_json(j.at("corr")));
  }
  throw std::invalid_argument("unknown model family: " + family);
}

void write_model_json(const CrossCovModel& model, const std::string& path) {
  write_text_atomic(path, model_to_json(model) + "\n");
}

CrossCovModel read_model_json(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open model file: " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return model_from_json(ss.str());
}

std::string format_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

namespace {

std::vector<std::string> split_csv_line(const std::string& line) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : line) {
    if (c == ',') {
      out.push_back(cur);
      cur.clear();
    } else if (c != '\r') {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

}  // namespace

FieldCsv read_field_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open field CSV: " + path);
  std::string line;
  if (!std::getline(in, line)) throw std::runtime_error("empty field CSV: " + path);
  const std::vector<std::string> header = split_csv_line(line);
  int dim = 0;
  if (header.size() >= 2 && header[0] == "x" && header[1] == "y")
    dim = (header.size() >= 3 && header[2] == "z") ? 3 : 2;
  else if (!header.empty() && header[0] == "x")
    dim = 1;
  else
    throw std::runtime_error("field CSV header must start with x[,y[,z]]: " + path);
  const int q = static_cast<int>(header.size()) - dim;
  if (q < 1) throw std::runtime_error("field CSV has no component columns: " + path);

  std::vector<std::vector<double>> coords;
  std::vector<std::vector<double>> values;
  std::vector<std::vector<bool>> present;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    const std::vector<std::string> cells = split_csv_line(line);
    if (static_cast<int>(cells.size()) != dim + q)
      throw std::runtime_error("ragged row at line " + std::to_string(lineno) + " in " + path);
    std::vector<double> xyz(dim), vals(q, 0.0);
    std::vector<bool> pres(q, false);
    for (int k = 0; k < dim + q; ++k) {
      const std::string& cell = cells[k];
      if (k < dim) {
        std::size_t pos = 0;
        xyz[k] = std::stod(cell, &pos);
        if (pos != cell.size())
          throw std::runtime_error("non-numeric coordinate at line " + std::to_string(lineno));
      } else if (!cell.empty()) {
        std::size_t pos = 0;
        vals[k - dim] = std::stod(cell, &pos);
        if (pos != cell.size())
          throw std::runtime_error("non-numeric cell at line " + std::to_string(lineno));
        pres[k - dim] = true;
      }
    }
    coords.push_back(std::move(xyz));
    values.push_back(std::move(vals));
    present.push_back(std::move(pres));
  }
  const int n = static_cast<int>(coords.size());
  if (n == 0) throw std::runtime_error("field CSV has no data rows: " + path);
  Matrix cm(n, dim), vm(n, q);
  BoolMatrix mask(n, q);
  for (int a = 0; a < n; ++a) {
    for (int k = 0; k < dim; ++k) cm(a, k) = coords[a][k];
    for (int j = 0; j < q; ++j) {
      vm(a, j) = values[a][j];
      mask(a, j) = present[a][j];
    }
  }
  FieldCsv out{FieldSample(std::move(vm), LocationSet(std::move(cm)), std::move(mask)),
               std::vector<std::string>(header.begin() + dim, header.end()),
               {}};
  out.duplicate_rows = out.sample.locs.duplicate_points();
  return out;
}

void write_field_csv(const FieldSample& sample, const std::vector<std::string>& names,
                     const std::string& path) {
  const int dim = sample.locs.dim();
  if (dim < 1 || dim > 3) throw std::invalid_argument("write_field_csv: dim must be 1..3");
  if (static_cast<int>(names.size()) != sample.q())
    throw std::invalid_argument("write_field_csv: one name per component required");
  std::ostringstream ss;
  ss << "x";
  if (dim >= 2) ss << ",y";
  if (dim >= 3) ss << ",z";
  for (const auto& nm : names) ss << "," << nm;
  ss << "\n";
  for (int a = 0; a < sample.n(); ++a) {
    for (int k = 0; k < dim; ++k) {
      if (k) ss << ",";
      ss << format_full(sample.locs.coords()(a, k));
    }
    for (int j = 0; j < sample.q(); ++j) {
      ss << ",";
      if (sample.observed(a, j)) ss << format_full(sample.values(a, j));
    }
    ss << "\n";
  }
  write_text_atomic(path, ss.str());
}

void write_text_atomic(const std::string& path, const std::string& content) {
  namespace fs = std::filesystem;
  const fs::path target(path);
  if (target.has_parent_path()) fs::create_directories(target.parent_path());
  const fs::path tmp = target.parent_path() / (target.filename().string() + ".tmp");
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write: " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("write failed: " + tmp.string());
  }
  fs::rename(tmp, target);
}

std::string iso8601_utc_now() {
  const std::time_t now = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&now, &tm);
  char buf[32];
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

void write_manifest(const RunManifest& manifest, const std::string& out_dir) {
  json j;
  j["tool"] = manifest.tool;
  j["version"] = manifest.version;
  j["command"] = manifest.command;
  j["config"] = manifest.config_echo.empty() ? json::object() : json::parse(manifest.config_echo);
  j["master_seed"] = manifest.master_seed;
  j["started_at"] = manifest.started_at;
  j["finished_at"] = manifest.finished_at;
  j["divergence_notes"] = manifest.divergence_notes;
  write_text_atomic((std::filesystem::path(out_dir) / "manifest.json").string(),
                    j.dump(2) + "\n");
}

std::string graph_summary_to_json(const GraphSummary& g) {
  json j;
  j["nodes"] = g.q;
  json edges = json::array();
  for (const auto& [i, jdx] : g.edges)
    edges.push_back(json{{"i", i + 1}, {"j", jdx + 1}, {"weight", g.weights(i, jdx)}});
  j["edges"] = std::move(edges);
  j["colocated_pointwise"] = matrix_to_json(g.colocated_pointwise);
  j["colocated_process"] = matrix_to_json(g.colocated_process);
  return j.dump(2);
}

namespace {

std::string csv_path(const std::string& out_dir, const std::string& name) {
  return (std::filesystem::path(out_dir) / name).string();
}

}  // namespace

void write_roc_report(const RocStudyReport& report, const std::string& out_dir,
                      RunManifest manifest) {
  {
    std::ostringstream ss;
    ss << "replicate,ok,auc_spatial,auc_independent,sens_spatial,spec_spatial,"
          "sens_independent,spec_independent,note\n";
    for (const auto& rep : report.replicates) {
      ss << rep.id << "," << (rep.ok ? 1 : 0) << "," << format_full(rep.auc_spatial) << ","
         << format_full(rep.auc_independent) << "," << format_full(rep.sens_spatial) << ","
         << format_full(rep.spec_spatial) << "," << format_full(rep.sens_independent) << ","
         << format_full(rep.spec_independent) << "," << rep.note << "\n";
    }
    write_text_atomic(csv_path(out_dir, "auc.csv"), ss.str());
  }
  {
    std::ostringstream ss;
    ss << "replicate,arm,fpr,tpr\n";
    for (const auto& rep : report.replicates) {
      for (const auto& p : rep.roc_spatial)
        ss << rep.id << ",spatial," << format_full(p.fpr) << "," << format_full(p.tpr) << "\n";
      for (const auto& p : rep.roc_independent)
        ss << rep.id << ",independent," << format_full(p.fpr) << "," << format_full(p.tpr)
           << "\n";
    }
    write_text_atomic(csv_path(out_dir, "roc_points.csv"), ss.str());
  }
  {
    std::ostringstream ss;
    ss << "used,mean_auc_spatial,mean_auc_independent,mean_dsens,mean_dspec\n";
    ss << report.used << "," << format_full(report.mean_auc_spatial) << ","
       << format_full(report.mean_auc_independent) << "," << format_full(report.mean_dsens)
       << "," << format_full(report.mean_dspec) << "\n";
    write_text_atomic(csv_path(out_dir, "summary.csv"), ss.str());
  }
  write_manifest(manifest, out_dir);
}

void write_recovery_report(const RecoveryStudyReport& report, const std::string& out_dir,
                           RunManifest manifest) {
  {
    // Row layout mirrors the recovery table: parameter rows carry no CRPS
    // in a point-estimate pipeline; predictions carry both scores.
    std::ostringstream ss;
    ss << "metric,rmse_iox,rmse_pmatern,crps_iox,crps_pmatern\n";
    ss << "partial_correlations," << format_full(report.mean_iox.pcorr_rmse) << ","
       << format_full(report.mean_pm.pcorr_rmse) << ",,\n";
    ss << "marginal_variance," << format_full(report.mean_iox.margvar_rmse) << ","
       << format_full(report.mean_pm.margvar_rmse) << ",,\n";
    ss << "cross_covariance," << format_full(report.mean_iox.crosscov_rmse) << ","
       << format_full(report.mean_pm.crosscov_rmse) << ",,\n";
    ss << "predictions," << format_full(report.mean_iox.pred_rmse) << ","
       << format_full(report.mean_pm.pred_rmse) << ","
       << format_full(report.mean_iox.pred_crps) << ","
       << format_full(report.mean_pm.pred_crps) << "\n";
    write_text_atomic(csv_path(out_dir, "rmse_table.csv"), ss.str());
  }
  {
    std::ostringstream ss;
    ss << "replicate,ok,family,pcorr_rmse,margvar_rmse,crosscov_rmse,pred_rmse,pred_crps,"
          "note\n";
    for (const auto& rep : report.replicates) {
      auto row = [&](const char* fam, const FamilyScores& s) {
        ss << rep.id << "," << (rep.ok ? 1 : 0) << "," << fam << ","
           << format_full(s.pcorr_rmse) << "," << format_full(s.margvar_rmse) << ","
           << format_full(s.crosscov_rmse) << "," << format_full(s.pred_rmse) << ","
           << format_full(s.pred_crps) << "," << rep.note << "\n";
      };
      row("pmatern", rep.pm);
      row("iox", rep.iox);
    }
    write_text_atomic(csv_path(out_dir, "per_replicate.csv"), ss.str());
  }
  write_manifest(manifest, out_dir);
}

void write_geo_report(const GeoPipelineReport& report, const std::string& out_dir,
                      RunManifest manifest) {
  const int q = static_cast<int>(report.names.size());
  {
    std::ostringstream ss;
    ss << "outcome,rmspe_iox,rmspe_pmatern,rmspe_mean_baseline,crps_iox,crps_pmatern,"
          "test_entries\n";
    auto row = [&](const MetalScores& ms) {
      ss << ms.name << "," << format_full(ms.rmspe_iox) << "," << format_full(ms.rmspe_pm)
         << "," << format_full(ms.rmspe_mean_baseline) << "," << format_full(ms.crps_iox)
         << "," << format_full(ms.crps_pm) << "," << ms.test_entries << "\n";
    };
    for (const auto& ms : report.per_metal) row(ms);
    row(report.overall);
    write_text_atomic(csv_path(out_dir, "rmspe.csv"), ss.str());
  }
  {
    std::ostringstream ss;
    ss << "component,nu_hat,phi_hat,var_hat,phi_shared\n";
    for (int j = 0; j < q; ++j)
      ss << report.names[j] << "," << format_full(report.nu_hat[j]) << ","
         << format_full(report.phi_hat[j]) << "," << format_full(report.var_hat[j]) << ","
         << format_full(report.phi_shared) << "\n";
    write_text_atomic(csv_path(out_dir, "univariate.csv"), ss.str());
  }
  auto write_matrix = [&](const Matrix& m, const std::string& name) {
    std::ostringstream ss;
    ss << "component";
    for (int j = 0; j < q; ++j) ss << "," << report.names[j];
    ss << "\n";
    for (int i = 0; i < q; ++i) {
      ss << report.names[i];
      for (int j = 0; j < q; ++j) ss << "," << format_full(m(i, j));
      ss << "\n";
    }
    write_text_atomic(csv_path(out_dir, name), ss.str());
  };
  write_matrix(report.colocated_corr_pm, "colocated_corr.csv");
  write_matrix(report.pcorr_pm, "pcorr_pmatern.csv");
  write_matrix(report.pcorr_iox, "pcorr_iox.csv");
  {
    std::ostringstream ss;
    ss << "component_i,component_j,marginal_range,partial_range\n";
    for (int i = 0; i < q; ++i)
      for (int j = i + 1; j < q; ++j)
        ss << report.names[i] << "," << report.names[j] << ","
           << format_full(report.marginal_range(i, j)) << ","
           << format_full(report.partial_range(i, j)) << "\n";
    write_text_atomic(csv_path(out_dir, "ranges.csv"), ss.str());
  }
  write_text_atomic(csv_path(out_dir, "graph.json"),
                    graph_summary_to_json(report.graph_pm) + "\n");
  write_manifest(manifest, out_dir);
}

}  // namespace gpnet
