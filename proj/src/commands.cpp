#include "ctrack/commands.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <map>
#include <mutex>
#include <ostream>
#include <thread>
#include <type_traits>

#include "ctrack/analytic_denoiser.hpp"
#include "ctrack/errors.hpp"
#include "ctrack/metrics.hpp"
#include "ctrack/video_io.hpp"

namespace ctrack {

namespace fs = std::filesystem;

Image render_overlay(const Image& frame, const Track& track, int k, int tail, Rgb dot, Rgb trail) {
  Image out = frame;
  if (k < 0 || k >= track.length()) return out;
  auto plot = [&](double u, double v, Rgb c) {
    const int x = static_cast<int>(std::lround(u)), y = static_cast<int>(std::lround(v));
    if (out.contains(x, y)) out.at(x, y) = c;
  };
  for (int j = std::max(0, k - tail); j < k; ++j) {
    const auto& a = track.points[static_cast<std::size_t>(j)];
    const auto& b = track.points[static_cast<std::size_t>(j + 1)];
    const int n = std::max(1, static_cast<int>(std::ceil(4.0 * std::hypot(b.u - a.u, b.v - a.v))));
    for (int i = 0; i <= n; ++i) {
      const double s = static_cast<double>(i) / n;
      plot(a.u + s * (b.u - a.u), a.v + s * (b.v - a.v), trail);
    }
  }
  const auto& p = track.points[static_cast<std::size_t>(k)];
  if (p.visible) {
    for (auto [x, y] : disk_pixels(out.width(), out.height(), p.u, p.v, 1.5)) out.at(x, y) = dot;
  }
  return out;
}

namespace {

// Everything a command wants to write, flushed only on success.
class OutputSet {
 public:
  void json(fs::path rel, Json j) { json_.emplace_back(std::move(rel), std::move(j)); }
  void frames(fs::path rel, VideoTensor v) { frames_.emplace_back(std::move(rel), std::move(v)); }

  void flush(const fs::path& root) const {
    fs::create_directories(root);
    for (const auto& [rel, v] : frames_) write_frame_dir(v, root / rel);
    for (const auto& [rel, j] : json_) write_json_file(j, root / rel);
  }

 private:
  std::vector<std::pair<fs::path, Json>> json_;
  std::vector<std::pair<fs::path, VideoTensor>> frames_;
};

struct LoadedConfig {
  Json root;
  fs::path dir;
  fs::path out;
};

fs::path resolve(const fs::path& base, const std::string& p) {
  const fs::path path(p);
  return path.is_absolute() ? path : base / path;
}

const Json& section(const LoadedConfig& c, const char* name) {
  static const Json empty = Json::object();
  if (!c.root.contains(name)) return empty;
  if (!c.root[name].is_object()) throw InvalidArgument(std::string(name) + ": expected an object");
  return c.root[name];
}

void allow_keys(const Json& j, std::initializer_list<std::string_view> allowed, std::string_view where) {
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw InvalidArgument(std::string(where) + ": unknown key '" + key + "'");
  }
}

LoadedConfig load_config(const CommandOptions& options) {
  LoadedConfig c;
  c.root = read_json_file(options.config);
  if (!c.root.is_object()) throw FormatError(options.config.string() + ": expected a JSON object");
  allow_keys(c.root, {"schema", "output", "pipeline", "track", "evaluate", "synthesize", "diagnose"}, "config");
  if (c.root.contains("schema") && c.root["schema"] != kSchemaVersion)
    throw FormatError(options.config.string() + ": unsupported schema version");
  c.dir = options.config.has_parent_path() ? options.config.parent_path() : fs::path(".");
  if (options.out) {
    c.out = *options.out;
  } else if (c.root.contains("output")) {
    c.out = resolve(c.dir, c.root["output"].get<std::string>());
  } else {
    c.out = "ctrack_out";
  }
  return c;
}

PipelineConfig load_pipeline(const LoadedConfig& c) {
  PipelineConfig p = pipeline_from_json(section(c, "pipeline"));
  if (const char* url = std::getenv(kRemoteUrlEnv); url && *url) p.backend.url = url;
  p.validate();
  return p;
}

RemoteOptions remote_options(const BackendConfig& b) {
  RemoteOptions o;
  o.endpoint = b.url;
  o.timeout = std::chrono::milliseconds(b.timeout_ms);
  o.max_retries = b.retries;
  return o;
}

template <typename T>
T get_or(const Json& j, const char* key, T fallback, std::string_view where) {
  if (!j.contains(key)) return fallback;
  const Json& v = j[key];
  bool ok = true;
  if constexpr (std::is_same_v<T, bool>) ok = v.is_boolean();
  else if constexpr (std::is_unsigned_v<T>) ok = v.is_number_unsigned();
  else if constexpr (std::is_integral_v<T>) ok = v.is_number_integer();
  else if constexpr (std::is_floating_point_v<T>) ok = v.is_number();
  if (!ok) throw InvalidArgument(std::string(where) + "." + key + ": wrong type");
  try {
    return j[key].get<T>();
  } catch (const Json::exception&) {
    throw InvalidArgument(std::string(where) + "." + key + ": wrong type");
  }
}

// Runs f(i) for i in [0, n) on up to `workers` threads. The first failure is
// rethrown after all threads stop.
template <typename F>
void parallel_for(int n, int workers, F&& f) {
  std::atomic<int> next{0};
  std::atomic<bool> failed{false};
  std::exception_ptr error;
  std::mutex mutex;
  auto body = [&] {
    for (;;) {
      const int i = next.fetch_add(1);
      if (i >= n || failed.load()) return;
      try {
        f(i);
      } catch (...) {
        std::lock_guard lock(mutex);
        if (!error) error = std::current_exception();
        failed = true;
      }
    }
  };
  const int threads = std::max(1, std::min(workers, n));
  std::vector<std::thread> pool;
  for (int t = 1; t < threads; ++t) pool.emplace_back(body);
  body();
  for (auto& t : pool) t.join();
  if (error) std::rethrow_exception(error);
}

// ---------------------------------------------------------------------------
// track

struct TrackJob {
  std::string id;
  std::shared_ptr<const VideoTensor> video;
  Query query;
  std::optional<Track> gt;
  std::optional<SpatioTemporalMask> coverage;
};

std::string substitute(std::string cmd, const std::string& key, const std::string& value) {
  for (std::size_t pos = cmd.find(key); pos != std::string::npos; pos = cmd.find(key, pos + value.size()))
    cmd.replace(pos, key.size(), value);
  return cmd;
}

VideoTensor load_input_video(const fs::path& path, const std::string& preprocess, const std::string& tag) {
  if (preprocess.empty()) return load_video(path);
  if (!fs::exists(path)) throw IoError("no such video: " + path.string());
  const fs::path tmp = fs::temp_directory_path() / ("ctrack_pre_" + std::to_string(std::hash<std::string>{}(
                                                                          path.string() + tag)));
  fs::remove_all(tmp);
  fs::create_directories(tmp);
  const std::string cmd = substitute(substitute(preprocess, "{input}", path.string()), "{output}", tmp.string());
  const int rc = std::system(cmd.c_str());
  if (rc != 0) {
    fs::remove_all(tmp);
    throw IoError("preprocess command failed with status " + std::to_string(rc) + ": " + cmd);
  }
  try {
    VideoTensor v = read_frame_dir(tmp);
    fs::remove_all(tmp);
    return v;
  } catch (...) {
    fs::remove_all(tmp);
    throw;
  }
}

Query query_from(const Json& q) {
  if (!q.is_array() || q.size() != 3 || !q[0].is_number_integer() || !q[1].is_number() || !q[2].is_number())
    throw InvalidArgument("track.queries: expected [t, u, v] entries");
  return {q[0].get<int>(), q[1].get<double>(), q[2].get<double>()};
}

SpatioTemporalMask coverage_from_scene(const fs::path& path) {
  const SceneFile scene = scene_from_json(read_json_file(path));
  SceneConfig cfg = scene.config;
  return generate_scene(cfg, scene.seed).occluder_coverage;
}

std::vector<TrackJob> collect_jobs(const LoadedConfig& c, const PipelineConfig& pipe) {
  const Json& t = section(c, "track");
  allow_keys(t, {"video", "video_id", "queries", "ground_truth", "scene", "manifest", "preprocess", "overlay"},
             "track");
  const std::string preprocess = get_or<std::string>(t, "preprocess", "", "track");
  const bool oracle = pipe.backend.kind == BackendKind::oracle;
  std::vector<TrackJob> jobs;

  if (t.contains("manifest")) {
    if (t.contains("video")) throw InvalidArgument("track: give either 'video' or 'manifest', not both");
    const fs::path mpath = resolve(c.dir, t["manifest"].get<std::string>());
    const Json m = read_json_file(mpath);
    const fs::path mdir = mpath.parent_path();
    if (!m.contains("cases") || !m["cases"].is_array()) throw FormatError(mpath.string() + ": missing 'cases'");
    for (const Json& e : m["cases"]) {
      TrackJob job;
      job.id = e.at("id").get<std::string>();
      job.video = std::make_shared<const VideoTensor>(
          load_input_video(resolve(mdir, e.at("video").get<std::string>()), preprocess, job.id));
      Track gt = track_from_json(read_json_file(resolve(mdir, e.at("ground_truth").get<std::string>())));
      job.query = gt.query;
      if (oracle) {
        if (e.contains("scene")) job.coverage = coverage_from_scene(resolve(mdir, e["scene"].get<std::string>()));
        job.gt = std::move(gt);
      }
      jobs.push_back(std::move(job));
    }
    if (jobs.empty()) throw InvalidArgument(mpath.string() + ": manifest lists no cases");
    return jobs;
  }

  if (!t.contains("video")) throw InvalidArgument("track: missing 'video' or 'manifest'");
  const fs::path vpath = resolve(c.dir, t["video"].get<std::string>());
  const std::string video_id = get_or<std::string>(t, "video_id", vpath.stem().string(), "track");
  auto video = std::make_shared<const VideoTensor>(load_input_video(vpath, preprocess, video_id));

  std::vector<Track> gts;
  if (t.contains("ground_truth")) {
    const Json& g = t["ground_truth"];
    if (g.is_string()) {
      gts.push_back(track_from_json(read_json_file(resolve(c.dir, g.get<std::string>()))));
    } else if (g.is_array()) {
      for (const Json& p : g) gts.push_back(track_from_json(read_json_file(resolve(c.dir, p.get<std::string>()))));
    } else {
      throw InvalidArgument("track.ground_truth: expected a path or a list of paths");
    }
  }
  std::vector<Query> queries;
  if (t.contains("queries")) {
    if (!t["queries"].is_array()) throw InvalidArgument("track.queries: expected a list");
    for (const Json& q : t["queries"]) queries.push_back(query_from(q));
  } else {
    for (const auto& g : gts) queries.push_back(g.query);
  }
  if (queries.empty()) throw InvalidArgument("track: no queries");
  if (oracle && gts.size() != queries.size())
    throw InvalidArgument("track: the oracle backend needs one ground_truth track per query");

  std::optional<SpatioTemporalMask> coverage;
  if (oracle && t.contains("scene")) coverage = coverage_from_scene(resolve(c.dir, t["scene"].get<std::string>()));
  for (std::size_t i = 0; i < queries.size(); ++i) {
    TrackJob job;
    job.id = queries.size() == 1 ? video_id : video_id + "_q" + std::to_string(i);
    job.video = video;
    job.query = queries[i];
    if (oracle) {
      job.gt = gts[i];
      job.coverage = coverage;
    }
    jobs.push_back(std::move(job));
  }
  return jobs;
}

int cmd_track(const LoadedConfig& c, std::ostream& log) {
  const PipelineConfig pipe = load_pipeline(c);
  const std::vector<TrackJob> jobs = collect_jobs(c, pipe);
  const bool overlay = get_or<bool>(section(c, "track"), "overlay", true, "track");

  std::shared_ptr<const LatentCodec<double>> codec;
  if (pipe.backend.kind == BackendKind::remote) {
    const RemoteOptions opts = remote_options(pipe.backend);
    const HealthInfo info = RemoteDenoiser<double>(opts).health();
    log << "remote backend " << opts.endpoint << " model '" << info.model_name << "' status " << info.status << "\n";
    if (info.codec) codec = std::make_shared<RemoteCodec<double>>(opts);
  }

  std::vector<QueryResult> results(jobs.size());
  parallel_for(static_cast<int>(jobs.size()), pipe.workers, [&](int i) {
    const TrackJob& job = jobs[static_cast<std::size_t>(i)];
    PipelineConfig cfg = pipe;
    cfg.sampler.seed = pipe.sampler.seed + static_cast<std::uint64_t>(i);
    cfg.backend.drift_seed = pipe.backend.drift_seed + static_cast<std::uint64_t>(i);
    DenoiserFactory factory;
    switch (cfg.backend.kind) {
      case BackendKind::oracle: factory = oracle_factory(*job.gt, job.coverage, cfg.backend); break;
      case BackendKind::analytic: factory = analytic_factory(cfg.backend.analytic_sigma); break;
      case BackendKind::remote: factory = remote_factory(remote_options(cfg.backend)); break;
    }
    QueryResult r = track_query(*job.video, job.query, cfg, factory, codec);
    r.coarse.video_id = r.refined.video_id = job.id;
    results[static_cast<std::size_t>(i)] = std::move(r);
  });

  OutputSet out;
  Json run_jobs = Json::array();
  for (std::size_t i = 0; i < jobs.size(); ++i) {
    const auto& job = jobs[i];
    const auto& r = results[i];
    out.json(fs::path("tracks") / (job.id + ".json"), track_to_json(r.refined));
    out.json(fs::path("coarse") / (job.id + ".json"), track_to_json(r.coarse));
    if (overlay) {
      std::vector<Image> frames;
      for (int k = 0; k < job.video->frames(); ++k) frames.push_back(render_overlay(job.video->frame(k), r.refined, k));
      out.frames(fs::path("overlay") / job.id, VideoTensor(std::move(frames)));
    }
    run_jobs.push_back({{"id", job.id},
                        {"seed", pipe.sampler.seed + i},
                        {"query", Json::array({job.query.frame, job.query.u, job.query.v})}});
  }
  out.json("run.json", {{"schema", kSchemaVersion}, {"command", "track"}, {"pipeline", to_json(pipe)}, {"jobs", run_jobs}});
  out.flush(c.out);
  log << "tracked " << jobs.size() << " quer" << (jobs.size() == 1 ? "y" : "ies") << " -> " << c.out.string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// evaluate

std::map<std::string, fs::path> json_files(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::map<std::string, fs::path> out;
  for (const auto& e : fs::directory_iterator(dir)) {
    if (e.is_regular_file() && e.path().extension() == ".json") out.emplace(e.path().stem().string(), e.path());
  }
  return out;
}

Json metrics_row(const MetricsReport& m) {
  Json deltas = m.delta_avg ? Json(m.deltas) : Json::array();
  return {{"aj", m.aj},
          {"delta_avg", m.delta_avg ? Json(*m.delta_avg) : Json(nullptr)},
          {"oa", m.oa},
          {"deltas", deltas},
          {"jaccards", m.jaccards}};
}

int cmd_evaluate(const LoadedConfig& c, std::ostream& log, std::ostream& err) {
  const Json& e = section(c, "evaluate");
  allow_keys(e, {"tracks", "ground_truth", "thresholds"}, "evaluate");
  if (!e.contains("tracks") || !e.contains("ground_truth"))
    throw InvalidArgument("evaluate: 'tracks' and 'ground_truth' directories are required");
  const auto thresholds = get_or<std::vector<double>>(e, "thresholds", default_thresholds(), "evaluate");
  if (thresholds.empty()) throw InvalidArgument("evaluate.thresholds: empty");
  for (double t : thresholds)
    if (!(t > 0.0)) throw InvalidArgument("evaluate.thresholds: must be positive");

  const auto preds = json_files(resolve(c.dir, e["tracks"].get<std::string>()));
  const auto gts = json_files(resolve(c.dir, e["ground_truth"].get<std::string>()));
  if (preds.empty() || gts.empty()) throw IoError("evaluate: no track files to compare");

  Json rows = Json::array();
  Json skipped = Json::array();
  double aj = 0.0, oa = 0.0, delta = 0.0;
  int n = 0, n_delta = 0;
  for (const auto& [id, gt_path] : gts) {
    auto it = preds.find(id);
    if (it == preds.end()) {
      skipped.push_back({{"id", id}, {"reason", "no prediction"}});
      continue;
    }
    const Track gt = track_from_json(read_json_file(gt_path));
    const Track pred = track_from_json(read_json_file(it->second));
    if (pred.length() != gt.length()) {
      skipped.push_back({{"id", id}, {"reason", "length mismatch"}});
      continue;
    }
    const MetricsReport m = evaluate_track(pred, gt, thresholds);
    Json row = metrics_row(m);
    row["id"] = id;
    rows.push_back(std::move(row));
    aj += m.aj;
    oa += m.oa;
    if (m.delta_avg) {
      delta += *m.delta_avg;
      ++n_delta;
    }
    ++n;
  }
  for (const auto& [id, path] : preds) {
    if (!gts.count(id)) skipped.push_back({{"id", id}, {"reason", "no ground truth"}});
  }

  Json mean = nullptr;
  if (n > 0) {
    mean = {{"aj", aj / n}, {"delta_avg", n_delta ? Json(delta / n_delta) : Json(nullptr)}, {"oa", oa / n}, {"count", n}};
  }
  OutputSet out;
  out.json("report.json", {{"schema", kSchemaVersion},
                           {"thresholds", thresholds},
                           {"resolution", Json::array({kEvalResolution, kEvalResolution})},
                           {"videos", rows},
                           {"mean", mean},
                           {"skipped", skipped}});
  out.flush(c.out);
  if (n > 0) {
    char line[160];
    std::snprintf(line, sizeof(line), "AJ %.4f  delta_avg %.4f  OA %.4f  over %d videos\n", aj / n,
                  n_delta ? delta / n_delta : 0.0, oa / n, n);
    log << line;
  }
  for (const auto& s : skipped) err << "skipped " << s["id"].get<std::string>() << ": " << s["reason"].get<std::string>() << "\n";
  return skipped.empty() ? kExitOk : kExitValidation;
}

// ---------------------------------------------------------------------------
// synthesize

int cmd_synthesize(const LoadedConfig& c, std::ostream& log) {
  const Json& s = section(c, "synthesize");
  allow_keys(s, {"cases", "preset", "resolution", "frames", "seed"}, "synthesize");
  const int n = get_or<int>(s, "cases", 20, "synthesize");
  if (n < 1) throw InvalidArgument("synthesize.cases: must be >= 1");
  const Preset preset = parse_preset(get_or<std::string>(s, "preset", "mixed", "synthesize"));
  SuiteOptions opts;
  const auto res = get_or<std::vector<int>>(s, "resolution", {64, 64}, "synthesize");
  if (res.size() != 2) throw InvalidArgument("synthesize.resolution: expected [H, W]");
  opts.height = res[0];
  opts.width = res[1];
  opts.frames = get_or<int>(s, "frames", 17, "synthesize");
  opts.base_seed = get_or<std::uint64_t>(s, "seed", 1, "synthesize");
  const auto suite = make_suite(n, preset, opts);

  OutputSet out;
  Json cases = Json::array();
  for (const auto& sc : suite) {
    const fs::path dir = fs::path("cases") / sc.id;
    out.frames(dir / "frames", sc.video);
    out.json(dir / "scene.json", scene_to_json(sc.config, sc.seed));
    out.json(fs::path("gt") / (sc.id + ".json"), track_to_json(sc.gt_tracks.front()));
    cases.push_back({{"id", sc.id},
                     {"preset", std::string(to_string(sc.preset))},
                     {"seed", sc.seed},
                     {"video", (dir / "frames").generic_string()},
                     {"scene", (dir / "scene.json").generic_string()},
                     {"ground_truth", (fs::path("gt") / (sc.id + ".json")).generic_string()}});
  }
  out.json("manifest.json", {{"schema", kSchemaVersion},
                             {"preset", std::string(to_string(preset))},
                             {"seed", opts.base_seed},
                             {"resolution", Json::array({opts.height, opts.width})},
                             {"frames", opts.frames},
                             {"cases", cases}});
  out.flush(c.out);
  log << "wrote " << suite.size() << " cases -> " << c.out.string() << "\n";
  return kExitOk;
}

// ---------------------------------------------------------------------------
// diagnose

int cmd_diagnose(const LoadedConfig& c, std::ostream& log) {
  const PipelineConfig pipe = load_pipeline(c);
  if (pipe.backend.kind == BackendKind::remote)
    throw InvalidArgument("diagnose: diagnostics run only against the analytic and oracle backends");
  const Json& d = section(c, "diagnose");
  allow_keys(d, {"samples", "shape", "mean", "std", "lambdas", "contamination", "cases", "seed"}, "diagnose");
  const int samples = get_or<int>(d, "samples", 5000, "diagnose");
  const auto shape = get_or<std::vector<int>>(d, "shape", {8, 8, 1}, "diagnose");
  const double mu = get_or<double>(d, "mean", 0.3, "diagnose");
  const double sigma = get_or<double>(d, "std", pipe.backend.analytic_sigma, "diagnose");
  const auto lambdas = get_or<std::vector<double>>(d, "lambdas", {0.0, 1.0, 4.0, 8.0}, "diagnose");
  const double w = get_or<double>(d, "contamination", 0.5, "diagnose");
  const int n_cases = get_or<int>(d, "cases", 5, "diagnose");
  const auto seed = get_or<std::uint64_t>(d, "seed", pipe.sampler.seed, "diagnose");
  if (samples < 2 || shape.size() != 3 || shape[0] < 1 || shape[1] < 1 || shape[2] < 1)
    throw InvalidArgument("diagnose: need samples >= 2 and shape [H, W, C] with positive entries");
  if (!(sigma > 0.0)) throw InvalidArgument("diagnose.std: must be positive");
  if (n_cases < 1) throw InvalidArgument("diagnose.cases: must be >= 1");
  for (double l : lambdas) GuidanceConfig{l}.validate();
  if (!(w >= 0.0 && w < 1.0)) throw InvalidArgument("diagnose.contamination: must be in [0,1)");

  // Moments: independent samples stacked along the frame axis; the analytic
  // denoiser acts elementwise.
  const auto schedule = pipe.make_schedule();
  const Shape s{samples, shape[0], shape[1], shape[2]};
  const AnalyticGaussianDenoiser<double> analytic(LatentVideo<double>::Constant(s, mu), sigma, schedule);
  SamplerConfig sampler = pipe.sampler;
  sampler.seed = seed;
  SamplerStreams streams(seed);
  const Conditioning none{};
  const auto x = sample_from_noise(s, none, none, analytic, schedule, sampler, GuidanceConfig{0.0}, streams);
  const double mean = x.array().mean();
  const double var = (x.array() - mean).square().sum() / static_cast<double>(x.size() - 1);
  const double mean_err = std::abs(mean - mu) / sigma;
  const double var_err = std::abs(var - sigma * sigma) / (sigma * sigma);

  Json sweep = Json::array();
  SuiteOptions so;
  so.base_seed = seed + 1;
  const auto suite = make_suite(n_cases, Preset::mixed, so);
  for (double lambda : lambdas) {
    int kept = 0, total = 0;
    for (std::size_t i = 0; i < suite.size(); ++i) {
      const auto& sc = suite[i];
      PipelineConfig cfg = pipe;
      cfg.guidance.lambda = lambda;
      cfg.backend.contamination = w;
      cfg.backend.drift = false;
      cfg.sampler.seed = seed + i;
      PointPromptingSession session(sc.video, sc.gt_tracks[0].query, cfg,
                                    oracle_factory(sc.gt_tracks[0], sc.occluder_coverage, cfg.backend));
      const VideoTensor gen = session.regenerate();
      const TrackerParams& tp = session.tracker_params();
      for (int k = 1; k < gen.frames(); ++k) {
        const auto& p = sc.gt_tracks[0].points[static_cast<std::size_t>(k)];
        if (!p.visible) continue;
        ++total;
        kept += detect_marker_pixels(gen.frame(k), {p.u, p.v}, cfg.marker.radius + 1.0, tp).empty() ? 0 : 1;
      }
    }
    sweep.push_back({{"lambda", lambda}, {"retention", total ? static_cast<double>(kept) / total : 0.0}, {"frames", total}});
  }

  OutputSet out;
  out.json("diagnostics.json",
           {{"schema", kSchemaVersion},
            {"moments",
             {{"samples", samples},
              {"shape", shape},
              {"target_mean", mu},
              {"target_std", sigma},
              {"mean", mean},
              {"variance", var},
              {"mean_error_in_std", mean_err},
              {"variance_relative_error", var_err},
              {"tolerance", {{"mean_error_in_std", 0.05}, {"variance_relative_error", 0.1}}},
              {"pass", mean_err <= 0.05 && var_err <= 0.1}}},
            {"guidance_sweep", {{"contamination", w}, {"cases", n_cases}, {"points", sweep}}},
            {"pipeline", to_json(pipe)}});
  out.flush(c.out);
  char line[160];
  std::snprintf(line, sizeof(line), "moments: mean error %.4f std, variance error %.2f%%\n", mean_err, 100.0 * var_err);
  log << line;
  for (const auto& p : sweep) {
    std::snprintf(line, sizeof(line), "lambda %-5g retention %.3f\n", p["lambda"].get<double>(),
                  p["retention"].get<double>());
    log << line;
  }
  return kExitOk;
}

}  // namespace

int run_command(std::string_view name, const CommandOptions& options, std::ostream& log, std::ostream& err) {
  try {
    const LoadedConfig c = load_config(options);
    if (name == "track") return cmd_track(c, log);
    if (name == "evaluate") return cmd_evaluate(c, log, err);
    if (name == "synthesize") return cmd_synthesize(c, log);
    if (name == "diagnose") return cmd_diagnose(c, log);
    err << "unknown command: " << name << "\n";
    return kExitBadInput;
  } catch (const IoError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const FormatError& e) {
    err << "input error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const DenoiserError& e) {
    err << "backend error: " << e.what() << "\n";
    return kExitBackend;
  } catch (const NumericError& e) {
    err << "backend error: " << e.what() << "\n";
    return kExitBackend;
  } catch (const InvalidArgument& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const Json::exception& e) {
    err << "validation error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const fs::filesystem_error& e) {
    err << "input error: " << e.what() << "\n";
    return kExitBadInput;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace ctrack
