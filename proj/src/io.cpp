#include "latprof/io.hpp"

#include <algorithm>
#include <array>
#include <fstream>
#include <map>
#include <sstream>

#include "latprof/csv.hpp"

namespace latprof {

namespace {

nlohmann::json matrix_to_json(const Eigen::MatrixXd& m) {
  nlohmann::json rows = nlohmann::json::array();
  for (Eigen::Index r = 0; r < m.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < m.cols(); ++c) row.push_back(m(r, c));
    rows.push_back(std::move(row));
  }
  return rows;
}

nlohmann::json vector_to_json(const Eigen::VectorXd& v) {
  nlohmann::json out = nlohmann::json::array();
  for (Eigen::Index i = 0; i < v.size(); ++i) out.push_back(v[i]);
  return out;
}

[[noreturn]] void parse_fail(const std::string& what, int line_no) {
  throw ValidationError(what + " (line " + std::to_string(line_no) + ")");
}

}  // namespace

std::string cohort_to_csv(const Cohort& cohort) {
  std::string out = "id,t,state,true_class\n";
  for (const auto& seq : cohort) {
    for (int t = 0; t < seq.length(); ++t) {
      out += seq.id;
      out += ',';
      out += std::to_string(seq.t_start + t);
      out += ',';
      out += std::to_string(seq.states[t]);
      out += ',';
      if (seq.true_class) out += std::to_string(*seq.true_class);
      out += '\n';
    }
  }
  return out;
}

Cohort cohort_from_csv(std::istream& in) {
  std::string line;
  int line_no = 0;
  std::vector<std::string> order;
  std::map<std::string, std::vector<std::pair<int, int>>> rows;  // id -> (t, state)
  std::map<std::string, int> true_class;

  while (std::getline(in, line)) {
    ++line_no;
    line = normalize_line(std::move(line), line_no == 1);
    if (line.empty()) continue;
    if (line_no == 1) {
      if (line != "id,t,state,true_class") {
        parse_fail("cohort CSV: unexpected header '" + line + "'", line_no);
      }
      continue;
    }
    const auto fields = split_csv_line(line);
    if (fields.size() != 4) parse_fail("cohort CSV: expected 4 fields", line_no);
    const auto t = parse_int(fields[1]);
    const auto state = parse_int(fields[2]);
    if (!t || !state || *state < 1) {
      parse_fail("cohort CSV: bad t/state", line_no);
    }
    auto [it, inserted] = rows.try_emplace(fields[0]);
    if (inserted) order.push_back(fields[0]);
    it->second.emplace_back(static_cast<int>(*t), static_cast<int>(*state));
    if (!fields[3].empty()) {
      const auto tc = parse_int(fields[3]);
      if (!tc || *tc < 1) parse_fail("cohort CSV: bad true_class", line_no);
      auto [tc_it, tc_new] = true_class.try_emplace(fields[0], static_cast<int>(*tc));
      if (!tc_new && tc_it->second != static_cast<int>(*tc)) {
        parse_fail("cohort CSV: conflicting true_class for id " + fields[0], line_no);
      }
    }
  }

  Cohort cohort;
  cohort.reserve(order.size());
  for (const auto& id : order) {
    auto& obs = rows[id];
    std::stable_sort(obs.begin(), obs.end(),
                     [](const auto& a, const auto& b) { return a.first < b.first; });
    DiscreteSequence seq;
    seq.id = id;
    seq.t_start = obs.front().first;
    for (std::size_t i = 0; i < obs.size(); ++i) {
      if (obs[i].first != seq.t_start + static_cast<int>(i)) {
        throw ValidationError("cohort CSV: id " + id +
                              " has a gap or duplicate at t = " +
                              std::to_string(obs[i].first));
      }
      seq.states.push_back(obs[i].second);
    }
    if (auto it = true_class.find(id); it != true_class.end()) {
      seq.true_class = it->second;
    }
    cohort.push_back(std::move(seq));
  }
  return cohort;
}

std::string features_to_csv(const FeatureMatrix& fm) {
  std::string out = "id";
  for (const auto& name : FeatureMatrix::column_names()) out += "," + name;
  out += ",n_obs\n";
  for (Eigen::Index i = 0; i < fm.rows(); ++i) {
    out += fm.ids[i];
    for (int j = 0; j < FeatureMatrix::kNumColumns; ++j) {
      out += ',';
      out += format_double(fm.values(i, j));
    }
    out += ',';
    out += std::to_string(fm.n_obs[i]);
    out += '\n';
  }
  return out;
}

FeatureMatrix features_from_csv(std::istream& in) {
  std::string line;
  int line_no = 0;
  FeatureMatrix fm;
  std::vector<std::array<double, FeatureMatrix::kNumColumns>> rows;
  while (std::getline(in, line)) {
    ++line_no;
    line = normalize_line(std::move(line), line_no == 1);
    if (line.empty()) continue;
    if (line_no == 1) continue;  // header
    const auto fields = split_csv_line(line);
    if (fields.size() != FeatureMatrix::kNumColumns + 2) {
      parse_fail("feature CSV: wrong field count", line_no);
    }
    fm.ids.push_back(fields[0]);
    std::array<double, FeatureMatrix::kNumColumns> row{};
    for (int j = 0; j < FeatureMatrix::kNumColumns; ++j) {
      const auto v = parse_double(fields[j + 1]);
      if (!v) parse_fail("feature CSV: bad number", line_no);
      row[j] = *v;
    }
    rows.push_back(row);
    const auto n = parse_int(fields.back());
    if (!n) parse_fail("feature CSV: bad n_obs", line_no);
    fm.n_obs.push_back(static_cast<int>(*n));
  }
  fm.values.resize(static_cast<Eigen::Index>(rows.size()),
                   FeatureMatrix::kNumColumns);
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (int j = 0; j < FeatureMatrix::kNumColumns; ++j) {
      fm.values(static_cast<Eigen::Index>(i), j) = rows[i][j];
    }
  }
  return fm;
}

std::string id_table_to_csv(const std::vector<std::string>& ids,
                            const std::vector<std::string>& columns,
                            const Eigen::MatrixXd& values) {
  std::string out = "id";
  for (const auto& c : columns) out += "," + c;
  out += '\n';
  for (Eigen::Index i = 0; i < values.rows(); ++i) {
    out += ids[i];
    for (Eigen::Index j = 0; j < values.cols(); ++j) {
      out += ',';
      out += format_double(values(i, j));
    }
    out += '\n';
  }
  return out;
}

std::pair<std::vector<std::string>, Eigen::MatrixXd> id_table_from_csv(
    std::istream& in) {
  std::string line;
  int line_no = 0;
  std::vector<std::string> ids;
  std::vector<std::vector<double>> rows;
  std::size_t width = 0;
  while (std::getline(in, line)) {
    ++line_no;
    line = normalize_line(std::move(line), line_no == 1);
    if (line.empty()) continue;
    const auto fields = split_csv_line(line);
    if (line_no == 1) {
      width = fields.size() - 1;
      continue;
    }
    if (fields.size() != width + 1) {
      parse_fail("table CSV: wrong field count", line_no);
    }
    ids.push_back(fields[0]);
    std::vector<double> row;
    for (std::size_t j = 1; j < fields.size(); ++j) {
      const auto v = parse_double(fields[j]);
      if (!v) parse_fail("table CSV: bad number", line_no);
      row.push_back(*v);
    }
    rows.push_back(std::move(row));
  }
  Eigen::MatrixXd values(static_cast<Eigen::Index>(rows.size()),
                         static_cast<Eigen::Index>(width));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < width; ++j) {
      values(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  return {std::move(ids), std::move(values)};
}

std::string assignments_to_csv(const std::vector<std::string>& ids,
                               const std::vector<int>& labels) {
  std::string out = "id,cluster\n";
  for (std::size_t i = 0; i < ids.size(); ++i) {
    out += ids[i] + "," + std::to_string(labels[i]) + "\n";
  }
  return out;
}

std::pair<std::vector<std::string>, std::vector<int>> assignments_from_csv(
    std::istream& in) {
  std::string line;
  int line_no = 0;
  std::vector<std::string> ids;
  std::vector<int> labels;
  while (std::getline(in, line)) {
    ++line_no;
    line = normalize_line(std::move(line), line_no == 1);
    if (line.empty() || line_no == 1) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 2) parse_fail("assignment CSV: expected 2 fields", line_no);
    const auto label = parse_int(fields[1]);
    if (!label || *label < 1) parse_fail("assignment CSV: bad cluster", line_no);
    ids.push_back(fields[0]);
    labels.push_back(static_cast<int>(*label));
  }
  return {std::move(ids), std::move(labels)};
}

std::string tidy_to_csv(const std::vector<TidyRow>& rows) {
  std::string out = "setting,N,replicate,method,class,metric,value,status\n";
  for (const auto& r : rows) {
    out += r.setting + "," + std::to_string(r.n_total) + "," +
           std::to_string(r.replicate) + "," + r.method + "," +
           std::to_string(r.class_id) + "," + r.metric + "," +
           format_double(r.value) + "," + r.status + "\n";
  }
  return out;
}

std::vector<TidyRow> tidy_from_csv(std::istream& in) {
  std::string line;
  int line_no = 0;
  std::vector<TidyRow> rows;
  while (std::getline(in, line)) {
    ++line_no;
    line = normalize_line(std::move(line), line_no == 1);
    if (line.empty() || line_no == 1) continue;
    const auto fields = split_csv_line(line);
    if (fields.size() != 8) parse_fail("tidy CSV: expected 8 fields", line_no);
    TidyRow r;
    r.setting = fields[0];
    const auto n = parse_int(fields[1]);
    const auto rep = parse_int(fields[2]);
    const auto cls = parse_int(fields[4]);
    const auto val = parse_double(fields[6]);
    if (!n || !rep || !cls || !val) parse_fail("tidy CSV: bad numeric field", line_no);
    r.n_total = static_cast<int>(*n);
    r.replicate = static_cast<int>(*rep);
    r.method = fields[3];
    r.class_id = static_cast<int>(*cls);
    r.metric = fields[5];
    r.value = *val;
    r.status = fields[7];
    rows.push_back(std::move(r));
  }
  return rows;
}

nlohmann::json pca_to_json(const PcaModel& model) {
  nlohmann::json j;
  std::vector<std::string> names;
  for (int c : model.retained_cols) {
    names.push_back(FeatureMatrix::column_names()[c]);
  }
  j["retained_columns"] = names;
  j["center"] = vector_to_json(model.center);
  j["scale"] = vector_to_json(model.scale);
  j["scaled"] = model.scaled;
  j["loadings"] = matrix_to_json(model.loadings);
  j["variance_explained"] = vector_to_json(model.variance_explained);
  Eigen::VectorXd cum(model.variance_explained.size());
  double acc = 0.0;
  for (Eigen::Index i = 0; i < cum.size(); ++i) {
    acc += model.variance_explained[i];
    cum[i] = acc;
  }
  j["cumulative_variance"] = vector_to_json(cum);
  return j;
}

nlohmann::json hard_clustering_to_json(const HardClustering& hard) {
  nlohmann::json j;
  j["centroids"] = matrix_to_json(hard.centroids);
  j["inertia"] = hard.inertia;
  j["restarts_used"] = hard.restarts_used;
  return j;
}

nlohmann::json soft_clustering_to_json(const SoftClustering& soft) {
  nlohmann::json j;
  j["centroids"] = matrix_to_json(soft.centroids);
  j["fuzzifier"] = soft.fuzzifier;
  j["n_iter"] = soft.n_iter;
  j["converged"] = soft.converged;
  return j;
}

nlohmann::json lca_to_json(const LcaModel& model) {
  nlohmann::json j;
  j["priors"] = vector_to_json(model.priors);
  nlohmann::json items = nlohmann::json::array();
  for (const auto& m : model.item_probs) items.push_back(matrix_to_json(m));
  j["item_probs"] = std::move(items);
  j["loglik"] = model.loglik;
  j["n_iter"] = model.n_iter;
  j["converged"] = model.converged;
  return j;
}

nlohmann::json lta_to_json(const LtaModel& model) {
  nlohmann::json j;
  j["initial"] = vector_to_json(model.initial);
  j["transitions"] = matrix_to_json(model.transitions);
  j["emissions"] = matrix_to_json(model.emissions);
  j["loglik"] = model.loglik;
  j["n_iter"] = model.n_iter;
  j["converged"] = model.converged;
  return j;
}

nlohmann::json eval_report_to_json(const EvalReport& report) {
  nlohmann::json j;
  j["relabeling"] = report.relabeling;
  nlohmann::json per_class = nlohmann::json::array();
  for (std::size_t k = 0; k < report.per_class.size(); ++k) {
    const auto& m = report.per_class[k];
    per_class.push_back({{"class", k + 1},
                         {"precision", m.precision},
                         {"recall", m.recall},
                         {"accuracy", m.accuracy},
                         {"size_ratio", m.size_ratio}});
  }
  j["per_class"] = std::move(per_class);
  nlohmann::json confusion = nlohmann::json::array();
  for (Eigen::Index r = 0; r < report.confusion.rows(); ++r) {
    nlohmann::json row = nlohmann::json::array();
    for (Eigen::Index c = 0; c < report.confusion.cols(); ++c) {
      row.push_back(report.confusion(r, c));
    }
    confusion.push_back(std::move(row));
  }
  j["confusion"] = std::move(confusion);
  return j;
}

nlohmann::json jump_matrix_to_json(const JumpMatrix& jump) {
  nlohmann::json j;
  j["size"] = jump.size;
  j["probs"] = matrix_to_json(jump.probs);
  return j;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot open for writing: " + path);
  out << content;
  if (!out) throw ValidationError("write failed: " + path);
}

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw ValidationError("cannot open: " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace latprof
