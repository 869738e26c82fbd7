#ifndef LATPROF_IO_HPP
#define LATPROF_IO_HPP

#include <json.hpp>

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "latprof/clustering.hpp"
#include "latprof/eval.hpp"
#include "latprof/features.hpp"
#include "latprof/lca.hpp"
#include "latprof/lta.hpp"
#include "latprof/pca.hpp"
#include "latprof/types.hpp"

namespace latprof {

// One row of the tidy results table behind the simulation study:
// setting,N,replicate,method,class,metric,value,status
struct TidyRow {
  std::string setting;
  int n_total = 0;
  int replicate = 0;
  std::string method;
  int class_id = 0;
  std::string metric;
  double value = 0.0;
  std::string status = "ok";
};

// ---- cohort CSV: id,t,state,true_class (true_class empty for real data)
std::string cohort_to_csv(const Cohort& cohort);
Cohort cohort_from_csv(std::istream& in);

// ---- feature CSV: id,const,...,p_mode,n_obs
std::string features_to_csv(const FeatureMatrix& fm);
FeatureMatrix features_from_csv(std::istream& in);

// ---- generic id-keyed numeric table: id,<cols...>
std::string id_table_to_csv(const std::vector<std::string>& ids,
                            const std::vector<std::string>& columns,
                            const Eigen::MatrixXd& values);
std::pair<std::vector<std::string>, Eigen::MatrixXd> id_table_from_csv(
    std::istream& in);

// ---- hard assignment CSV: id,cluster
std::string assignments_to_csv(const std::vector<std::string>& ids,
                               const std::vector<int>& labels);
std::pair<std::vector<std::string>, std::vector<int>> assignments_from_csv(
    std::istream& in);

// ---- tidy results CSV
std::string tidy_to_csv(const std::vector<TidyRow>& rows);
std::vector<TidyRow> tidy_from_csv(std::istream& in);

// ---- JSON dumps
nlohmann::json pca_to_json(const PcaModel& model);
nlohmann::json hard_clustering_to_json(const HardClustering& hard);
nlohmann::json soft_clustering_to_json(const SoftClustering& soft);
nlohmann::json lca_to_json(const LcaModel& model);
nlohmann::json lta_to_json(const LtaModel& model);
nlohmann::json eval_report_to_json(const EvalReport& report);
nlohmann::json jump_matrix_to_json(const JumpMatrix& jump);

// ---- small file helpers
void write_file(const std::string& path, const std::string& content);
std::string read_file(const std::string& path);

}  // namespace latprof

#endif  // LATPROF_IO_HPP
