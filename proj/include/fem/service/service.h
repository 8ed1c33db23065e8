#pragma once

#include <cstdint>
#include <filesystem>
#include <memory>
#include <mutex>
#include <optional>
#include <set>
#include <string>
#include <unordered_map>
#include <vector>

#include "fem/common/jsonl.h"
#include "fem/map/evolution_map.h"
#include "fem/recsys/het_graph.h"
#include "fem/recsys/judgments.h"
#include "fem/recsys/l2r.h"
#include "fem/recsys/recommend.h"

namespace httplib {
class Server;
}

namespace fem::service {

using jsonl::Json;

struct ServiceConfig {
  std::filesystem::path map_dir;    // fem build output
  std::filesystem::path graph_dir;  // rec build-graph output
  std::filesystem::path oers;       // resource catalog
  std::filesystem::path state_dir;  // request log, feature store, judgment log
  std::filesystem::path model_dir;  // model_v<N>.json files
  std::optional<std::filesystem::path> initial_model;  // used when model_dir is empty
  std::string host = "127.0.0.1";
  int port = 8080;
  std::size_t threads = 8;
  std::size_t default_top_n = 10;
  double mu = 2000.0;
  recsys::TrainOptions train;

  // Relative paths resolve against `base`. Throws SchemaError on bad fields.
  static ServiceConfig FromJson(const Json& json, const std::filesystem::path& base = {});
  static ServiceConfig Load(const std::filesystem::path& file);
};

struct Reply {
  int status = 200;
  Json body;  // null for an empty body
};

// Holds the loaded artifacts and mutable state. Handlers are transport
// independent; Mount() binds them to an HTTP server.
class FemService {
 public:
  // Loads every artifact; throws ArtifactError with the failing path.
  explicit FemService(ServiceConfig config);
  ~FemService();

  Reply Project(const Json& body) const;
  Reply Recommend(const Json& body);
  Reply Subgraph(const std::string& formula, int depth) const;
  Reply Judge(const Json& body);
  Reply Retrain();
  Reply Metrics() const;

  void Mount(httplib::Server& server);

  std::shared_ptr<const recsys::L2RModel> model() const;
  const ServiceConfig& config() const { return config_; }

 private:
  struct LoggedRequest {
    std::vector<std::string> results;
    std::unordered_map<std::string, std::pair<std::string, int>> hosting;  // oer -> (formula, distance)
  };

  std::string NewRequestId(const std::string& payload_hash);
  void LoadState();

  ServiceConfig config_;
  map::FemGraph fem_;
  recsys::HetGraph graph_;
  std::vector<recsys::Oer> oers_;
  std::unique_ptr<recsys::Recommender> recommender_;

  mutable std::mutex model_mutex_;
  std::shared_ptr<const recsys::L2RModel> model_;
  int model_version_ = 0;
  std::optional<recsys::RankingMetrics> last_cv_;

  std::mutex retrain_mutex_;  // one retrain at a time

  mutable std::mutex state_mutex_;
  std::unordered_map<std::string, LoggedRequest> requests_;
  std::vector<recsys::FeatureRecord> features_;
  std::vector<recsys::Judgment> judgments_;
  std::uint64_t nonce_ = 0;
  std::uint64_t counter_ = 0;
};

// Appends one line and fsyncs before returning. Throws ArtifactError.
void AppendDurable(const std::filesystem::path& path, const std::string& line);

// Blocks serving `config` until SIGINT or SIGTERM.
void Serve(const ServiceConfig& config);

}  // namespace fem::service
