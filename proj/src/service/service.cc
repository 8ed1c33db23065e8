#include "fem/service/service.h"

#include <fcntl.h>
#include <unistd.h>

#include <algorithm>
#include <charconv>
#include <chrono>
#include <csignal>
#include <ctime>
#include <fstream>
#include <random>

#include "httplib.h"

#include "fem/common/errors.h"
#include "fem/common/hash.h"
#include "fem/common/log.h"
#include "fem/map/map_io.h"
#include "fem/service/api.h"

namespace fem::service {
namespace fs = std::filesystem;
namespace {

constexpr const char* kRequestLog = "requests.jsonl";
constexpr const char* kFeatureStore = "features.jsonl";
constexpr const char* kJudgmentLog = "judgments.jsonl";

std::string UtcTimestamp() {
  const auto now = std::chrono::system_clock::now();
  const std::time_t t = std::chrono::system_clock::to_time_t(now);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

Reply ErrorReply(int status, const std::string& message) { return {status, Json{{"error", message}}}; }

fs::path Resolve(const fs::path& base, const Json& json, const char* key, bool required) {
  if (!json.contains(key)) {
    if (required) throw SchemaError(std::string("service config needs '") + key + "'");
    return {};
  }
  fs::path p = json.at(key).get<std::string>();
  return p.is_relative() && !base.empty() ? base / p : p;
}

// model_v<N>.json -> N, or 0.
int ModelVersion(const fs::path& p) {
  const std::string name = p.filename().string();
  constexpr std::string_view prefix = "model_v", suffix = ".json";
  if (!name.starts_with(prefix) || !name.ends_with(suffix)) return 0;
  int v = 0;
  const char* first = name.data() + prefix.size();
  const char* last = name.data() + name.size() - suffix.size();
  auto [ptr, ec] = std::from_chars(first, last, v);
  return ec == std::errc() && ptr == last ? v : 0;
}

// Maps library errors raised by a handler onto HTTP replies.
template <typename Fn>
Reply Guard(Fn&& fn) {
  try {
    return fn();
  } catch (const NoParseError& e) {
    return {422, Json{{"error", e.what()}, {"offset", e.offset()}}};
  } catch (const ParseError& e) {
    return {422, Json{{"error", e.what()}, {"offset", e.offset()}}};
  } catch (const SchemaError& e) {
    return ErrorReply(400, e.what());
  } catch (const Json::exception& e) {
    return ErrorReply(400, e.what());
  } catch (const UnknownFormulaError& e) {
    return ErrorReply(404, e.what());
  } catch (const EmptyMapError& e) {
    return ErrorReply(503, e.what());
  } catch (const std::exception& e) {
    return ErrorReply(500, e.what());
  }
}

}  // namespace

ServiceConfig ServiceConfig::FromJson(const Json& j, const fs::path& base) {
  try {
    ServiceConfig c;
    c.map_dir = Resolve(base, j, "map", true);
    c.graph_dir = Resolve(base, j, "graph", true);
    c.oers = Resolve(base, j, "oers", true);
    c.state_dir = Resolve(base, j, "state", true);
    c.model_dir = Resolve(base, j, "models", true);
    if (auto m = Resolve(base, j, "model", false); !m.empty()) c.initial_model = m;
    c.host = j.value("host", c.host);
    c.port = j.value("port", c.port);
    c.threads = j.value("threads", c.threads);
    c.default_top_n = j.value("top_n", c.default_top_n);
    c.mu = j.value("mu", c.mu);
    if (j.contains("train")) {
      const auto& t = j["train"];
      c.train.folds = t.value("folds", c.train.folds);
      c.train.restarts = t.value("restarts", c.train.restarts);
      c.train.seed = t.value("seed", c.train.seed);
    }
    return c;
  } catch (const Json::exception& e) {
    throw SchemaError(std::string("bad service config: ") + e.what());
  }
}

ServiceConfig ServiceConfig::Load(const fs::path& file) {
  std::ifstream in(file);
  if (!in) throw ArtifactError("cannot open config " + file.string());
  Json j;
  try {
    j = Json::parse(in);
  } catch (const Json::parse_error& e) {
    throw ArtifactError("corrupt config " + file.string() + ": " + e.what());
  }
  return FromJson(j, file.parent_path());
}

void AppendDurable(const fs::path& path, const std::string& line) {
  const int fd = ::open(path.c_str(), O_WRONLY | O_CREAT | O_APPEND | O_CLOEXEC, 0644);
  if (fd < 0) throw ArtifactError("cannot open " + path.string() + " for append");
  std::string data = line + '\n';
  const char* p = data.data();
  std::size_t left = data.size();
  while (left > 0) {
    const ssize_t n = ::write(fd, p, left);
    if (n < 0) {
      if (errno == EINTR) continue;
      ::close(fd);
      throw ArtifactError("write failed on " + path.string());
    }
    p += n;
    left -= static_cast<std::size_t>(n);
  }
  const bool synced = ::fsync(fd) == 0;
  ::close(fd);
  if (!synced) throw ArtifactError("fsync failed on " + path.string());
}

FemService::FemService(ServiceConfig config) : config_(std::move(config)) {
  fem_ = map::ReadMap(config_.map_dir);
  graph_ = recsys::ReadHetGraph(config_.graph_dir);
  try {
    oers_ = recsys::LoadOers(config_.oers);
  } catch (const std::exception& e) {
    throw ArtifactError("cannot load resource catalog " + config_.oers.string() + ": " + e.what());
  }
  try {
    recommender_ = std::make_unique<recsys::Recommender>(fem_, graph_, oers_, recsys::OrfConfig::Default(),
                                                         config_.mu, recsys::KeywordVocabulary(graph_));
  } catch (const SchemaError& e) {
    throw ArtifactError(std::string("graph and catalog disagree: ") + e.what());
  }

  fs::create_directories(config_.state_dir);
  fs::create_directories(config_.model_dir);
  fs::path newest;
  for (const auto& entry : fs::directory_iterator(config_.model_dir)) {
    if (const int v = ModelVersion(entry.path()); v > model_version_) {
      model_version_ = v;
      newest = entry.path();
    }
  }
  const auto names = recommender_->orf().config().Names();
  recsys::L2RModel model = recsys::L2RModel::Uniform(projection::kFeatureCount, names);
  if (!newest.empty()) {
    model = recsys::LoadModel(newest);
  } else if (config_.initial_model) {
    model = recsys::LoadModel(*config_.initial_model);
  }
  if (model.ranking != names.size() || model.projecting != projection::kFeatureCount ||
      (!model.ranking_features.empty() && model.ranking_features != names)) {
    throw ArtifactError("model does not match the active ranking features");
  }
  model_ = std::make_shared<const recsys::L2RModel>(std::move(model));

  std::random_device rd;
  nonce_ = (static_cast<std::uint64_t>(rd()) << 32) ^ rd() ^
           static_cast<std::uint64_t>(std::chrono::steady_clock::now().time_since_epoch().count());
  LoadState();
  log::Info("service loaded " + std::to_string(fem_.size()) + " formulae, " + std::to_string(oers_.size()) +
            " resources, model v" + std::to_string(model_version_));
}

FemService::~FemService() = default;

void FemService::LoadState() {
  const auto dir = config_.state_dir;
  if (fs::exists(dir / kRequestLog)) {
    jsonl::ForEachRecord(dir / kRequestLog, [&](const Json& r, std::size_t) {
      auto& req = requests_[r.at("request_id").get<std::string>()];
      req.results = r.at("results").get<std::vector<std::string>>();
    });
  }
  if (fs::exists(dir / kFeatureStore)) {
    features_ = recsys::LoadFeatureStore(dir / kFeatureStore);
    for (const auto& f : features_) {
      if (auto it = requests_.find(f.request_id); it != requests_.end()) {
        it->second.hosting[f.oer_id] = {f.hosting_formula, f.distance};
      }
    }
  }
  if (fs::exists(dir / kJudgmentLog)) judgments_ = recsys::LoadJudgments(dir / kJudgmentLog);
  counter_ = requests_.size();
}

std::shared_ptr<const recsys::L2RModel> FemService::model() const {
  std::lock_guard lock(model_mutex_);
  return model_;
}

std::string FemService::NewRequestId(const std::string& payload_hash) {
  // Caller holds state_mutex_.
  for (;;) {
    const std::uint64_t n = counter_++;
    std::string id = "q" + ToHex(SplitMix64(nonce_ ^ SplitMix64(n) ^ Fnv1a64(payload_hash)));
    if (!requests_.contains(id)) return id;
  }
}

Reply FemService::Project(const Json& body) const {
  return Guard([&]() -> Reply {
    const auto query = QueryFromJson(body);
    const std::size_t top_n = body.value("top_n", std::size_t{0});
    const auto m = model();
    const auto weights = m->trained ? m->ProjectionWeights() : std::vector<double>{};
    const auto result = recommender_->projection().Project(query, top_n, weights);
    return {200, ProjectionToJson(fem_, result)};
  });
}

Reply FemService::Recommend(const Json& body) {
  return Guard([&]() -> Reply {
    const auto query = QueryFromJson(body);
    const std::size_t top_n = body.value("top_n", config_.default_top_n);
    const auto m = model();
    const auto rec = recommender_->Recommend(query, *m, top_n);

    const std::string payload_hash = ToHex(Fnv1a64(QueryToJson(query).dump()));
    LoggedRequest logged;
    std::vector<std::string> feature_lines;
    Json ids = Json::array();
    for (const auto& r : rec.results) {
      logged.results.push_back(r.oer_id);
      logged.hosting[r.oer_id] = {r.hosting_formula, r.distance};
      ids.push_back(r.oer_id);
    }

    std::lock_guard lock(state_mutex_);
    const std::string request_id = NewRequestId(payload_hash);
    for (const auto& r : rec.results) {
      recsys::FeatureRecord f{request_id, r.oer_id, r.hosting_formula, r.distance, r.joint};
      feature_lines.push_back(recsys::FeatureRecordToJson(f).dump());
      features_.push_back(std::move(f));
    }
    for (const auto& line : feature_lines) AppendDurable(config_.state_dir / kFeatureStore, line);
    AppendDurable(config_.state_dir / kRequestLog, Json{{"request_id", request_id},
                                                        {"query_hash", payload_hash},
                                                        {"timestamp", UtcTimestamp()},
                                                        {"results", ids}}
                                                       .dump());
    requests_.emplace(request_id, std::move(logged));
    return {200, Json{{"request_id", request_id},
                      {"anchor", fem_.vertex(rec.projection.anchor).id},
                      {"results", ResultsToJson(recommender_->orf(), rec.results)}}};
  });
}

Reply FemService::Subgraph(const std::string& formula, int depth) const {
  return Guard([&]() -> Reply {
    if (formula.empty()) return ErrorReply(400, "missing 'formula'");
    if (depth < 0) return ErrorReply(400, "depth must be non-negative");
    const auto v = fem_.Find(formula);
    if (!v) return ErrorReply(404, "unknown formula " + formula);
    return {200, SubgraphToJson(fem_, map::ExtractSubgraph(fem_, *v, depth))};
  });
}

Reply FemService::Judge(const Json& body) {
  return Guard([&]() -> Reply {
    if (!body.is_object()) return ErrorReply(400, "judgment must be a JSON object");
    recsys::Judgment j;
    j.request_id = body.at("request_id").get<std::string>();
    j.oer_id = body.at("oer_id").get<std::string>();
    j.rating = recsys::ParseRating(body.at("rating").get<std::string>());
    j.timestamp = UtcTimestamp();

    std::lock_guard lock(state_mutex_);
    const auto it = requests_.find(j.request_id);
    if (it == requests_.end()) return ErrorReply(404, "unknown request " + j.request_id);
    const auto host = it->second.hosting.find(j.oer_id);
    if (host == it->second.hosting.end()) {
      return ErrorReply(404, "resource " + j.oer_id + " was not recommended in request " + j.request_id);
    }
    j.hosting_formula = host->second.first;
    j.distance = host->second.second;
    AppendDurable(config_.state_dir / kJudgmentLog, recsys::JudgmentToJson(j).dump());
    judgments_.push_back(std::move(j));
    return {204, nullptr};
  });
}

Reply FemService::Retrain() {
  return Guard([&]() -> Reply {
    std::lock_guard retrain_lock(retrain_mutex_);
    std::vector<recsys::Judgment> judgments;
    std::vector<recsys::FeatureRecord> features;
    {
      std::lock_guard lock(state_mutex_);
      judgments = judgments_;
      features = features_;
    }
    const auto requests = recsys::JoinJudgments(judgments, features);
    recsys::TrainReport report;
    try {
      report = recsys::TrainL2R(requests, projection::kFeatureCount, recommender_->orf().config().Names(),
                                config_.train);
    } catch (const InsufficientDataError& e) {
      return {409, Json{{"error", e.what()}, {"required", e.required()}}};
    }
    int version = 0;
    {
      std::lock_guard lock(model_mutex_);
      version = model_version_ + 1;
    }
    report.model.version = version;
    recsys::SaveModel(config_.model_dir / ("model_v" + std::to_string(version) + ".json"), report.model);
    {
      std::lock_guard lock(model_mutex_);
      model_ = std::make_shared<const recsys::L2RModel>(std::move(report.model));
      model_version_ = version;
      last_cv_ = report.cv;
    }
    log::Info("retrained model v" + std::to_string(version) + " on " + std::to_string(requests.size()) +
              " requests");
    Json folds = Json::array();
    for (const auto& f : report.folds) {
      folds.push_back({{"fold", f.fold}, {"train", f.train_requests}, {"test", f.test_requests},
                       {"metrics", MetricsToJson(f.test)}});
    }
    return {200, Json{{"model_version", version},
                      {"requests", requests.size()},
                      {"cv_metrics", MetricsToJson(report.cv)},
                      {"folds", std::move(folds)}}};
  });
}

Reply FemService::Metrics() const {
  return Guard([&]() -> Reply {
    std::vector<recsys::Judgment> judgments;
    std::vector<recsys::FeatureRecord> features;
    std::size_t request_count = 0;
    {
      std::lock_guard lock(state_mutex_);
      judgments = judgments_;
      features = features_;
      request_count = requests_.size();
    }
    const auto requests = recsys::JoinJudgments(judgments, features);
    Json ajd = Json::object();
    Json counts = Json::object();
    for (auto r : {recsys::Rating::kGood, recsys::Rating::kOK, recsys::Rating::kBad}) {
      const std::string name(recsys::RatingName(r));
      counts[name] = std::count_if(judgments.begin(), judgments.end(), [r](const auto& j) { return j.rating == r; });
      try {
        ajd[name] = recsys::AverageJudgmentDistance(judgments, r);
      } catch (const NoJudgmentsOfTypeError&) {
        ajd[name] = nullptr;
      }
    }
    const auto m = model();
    Json body = {{"model_version", [&] { std::lock_guard l(model_mutex_); return model_version_; }()},
                 {"model_trained", m->trained},
                 {"requests", request_count},
                 {"judgments", judgments.size()},
                 {"judged_requests", requests.size()},
                 {"ratings", counts},
                 {"ajd", ajd},
                 {"evaluation", MetricsToJson(recsys::EvaluateWeights(requests, m->weights))}};
    {
      std::lock_guard lock(model_mutex_);
      if (last_cv_) body["cv_metrics"] = MetricsToJson(*last_cv_);
    }
    return {200, std::move(body)};
  });
}

void FemService::Mount(httplib::Server& server) {
  auto send = [](httplib::Response& res, const Reply& reply) {
    res.status = reply.status;
    if (!reply.body.is_null()) res.set_content(reply.body.dump(), "application/json");
  };
  auto parse = [](const httplib::Request& req, Json& out) {
    out = Json::parse(req.body, nullptr, false);
    return !out.is_discarded();
  };
  auto bad_json = [send](httplib::Response& res) { send(res, ErrorReply(400, "request body is not valid JSON")); };

  server.Get("/health", [send](const httplib::Request&, httplib::Response& res) {
    send(res, {200, Json{{"status", "ok"}}});
  });
  server.Post("/project", [=, this](const httplib::Request& req, httplib::Response& res) {
    Json body;
    if (!parse(req, body)) return bad_json(res);
    send(res, Project(body));
  });
  server.Post("/recommend", [=, this](const httplib::Request& req, httplib::Response& res) {
    Json body;
    if (!parse(req, body)) return bad_json(res);
    send(res, Recommend(body));
  });
  server.Get("/fem/subgraph", [=, this](const httplib::Request& req, httplib::Response& res) {
    int depth = map::kDefaultSubgraphDepth;
    if (req.has_param("depth")) {
      const auto raw = req.get_param_value("depth");
      auto [ptr, ec] = std::from_chars(raw.data(), raw.data() + raw.size(), depth);
      if (ec != std::errc() || ptr != raw.data() + raw.size()) {
        return send(res, ErrorReply(400, "depth must be an integer"));
      }
    }
    send(res, Subgraph(req.get_param_value("formula"), depth));
  });
  server.Post("/judgments", [=, this](const httplib::Request& req, httplib::Response& res) {
    Json body;
    if (!parse(req, body)) return bad_json(res);
    send(res, Judge(body));
  });
  server.Post("/admin/retrain", [=, this](const httplib::Request&, httplib::Response& res) { send(res, Retrain()); });
  server.Get("/metrics", [=, this](const httplib::Request&, httplib::Response& res) { send(res, Metrics()); });
}

namespace {
httplib::Server* g_server = nullptr;
extern "C" void StopServer(int) {
  if (g_server) g_server->stop();
}
}  // namespace

void Serve(const ServiceConfig& config) {
  FemService service(config);
  httplib::Server server;
  const std::size_t threads = std::max<std::size_t>(1, config.threads);
  server.new_task_queue = [threads] { return new httplib::ThreadPool(threads); };
  service.Mount(server);
  g_server = &server;
  std::signal(SIGINT, StopServer);
  std::signal(SIGTERM, StopServer);
  log::Info("listening on " + config.host + ":" + std::to_string(config.port));
  const bool ok = server.listen(config.host, config.port);
  g_server = nullptr;
  if (!ok && server.is_valid()) {
    throw ArtifactError("cannot listen on " + config.host + ":" + std::to_string(config.port));
  }
}

}  // namespace fem::service
