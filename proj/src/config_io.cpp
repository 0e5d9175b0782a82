#include "ctrack/config_io.hpp"

#include <fstream>
#include <initializer_list>
#include <iterator>
#include <string_view>
#include <type_traits>

#include "ctrack/errors.hpp"
#include "ctrack/video_io.hpp"

namespace ctrack {

namespace fs = std::filesystem;

Json read_json_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string text((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

std::string dump_json(const Json& j) { return j.dump(2) + "\n"; }

void write_json_file(const Json& j, const fs::path& path) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out << dump_json(j);
}

namespace {

void require_object(const Json& j, std::string_view where) {
  if (!j.is_object()) throw InvalidArgument(std::string(where) + ": expected an object");
}

void check_keys(const Json& j, std::initializer_list<std::string_view> allowed, std::string_view where) {
  require_object(j, where);
  for (const auto& [key, value] : j.items()) {
    bool known = false;
    for (auto a : allowed) known = known || key == a;
    if (!known) throw InvalidArgument(std::string(where) + ": unknown key '" + key + "'");
  }
}

template <typename T>
void read(const Json& j, const char* key, T& out, std::string_view where) {
  if (!j.contains(key)) return;
  const Json& v = j.at(key);
  bool ok = true;
  if constexpr (std::is_same_v<T, bool>) ok = v.is_boolean();
  else if constexpr (std::is_unsigned_v<T>) ok = v.is_number_unsigned();
  else if constexpr (std::is_integral_v<T>) ok = v.is_number_integer();
  else if constexpr (std::is_floating_point_v<T>) ok = v.is_number();
  if (!ok) throw InvalidArgument(std::string(where) + "." + key + ": wrong type");
  try {
    out = j.at(key).get<T>();
  } catch (const Json::exception&) {
    throw InvalidArgument(std::string(where) + "." + key + ": wrong type");
  }
}

template <typename T>
T required(const Json& j, const char* key, std::string_view where) {
  if (!j.contains(key)) throw InvalidArgument(std::string(where) + ": missing '" + key + "'");
  T out{};
  read(j, key, out, where);
  return out;
}

void check_schema(const Json& j, std::string_view where) {
  if (!j.contains("schema")) return;
  if (!j["schema"].is_number_integer() || j["schema"].get<int>() != kSchemaVersion)
    throw FormatError(std::string(where) + ": unsupported schema version");
}

SigmaMode parse_sigma_mode(const std::string& s) {
  if (s == "beta") return SigmaMode::beta;
  if (s == "beta_tilde") return SigmaMode::beta_tilde;
  throw InvalidArgument("sampler.sigma_mode: expected 'beta' or 'beta_tilde'");
}

BackendKind parse_backend(const std::string& s) {
  if (s == "analytic") return BackendKind::analytic;
  if (s == "oracle") return BackendKind::oracle;
  if (s == "remote") return BackendKind::remote;
  throw InvalidArgument("backend.kind: expected 'analytic', 'oracle' or 'remote'");
}

std::string backend_name(BackendKind k) {
  switch (k) {
    case BackendKind::analytic: return "analytic";
    case BackendKind::oracle: return "oracle";
    case BackendKind::remote: return "remote";
  }
  return "unknown";
}

ColorSpace parse_color_space(const std::string& s) {
  if (s == "hsv") return ColorSpace::hsv;
  if (s == "lab") return ColorSpace::lab;
  throw InvalidArgument("tracker.color_space: expected 'hsv' or 'lab'");
}

Json point_json(Point2 p) { return Json::array({p.u, p.v}); }

Point2 point_from(const Json& j, std::string_view where) {
  if (!j.is_array() || j.size() != 2 || !j[0].is_number() || !j[1].is_number())
    throw InvalidArgument(std::string(where) + ": expected [u, v]");
  return {j[0].get<double>(), j[1].get<double>()};
}

Json rgb_json(Rgb c) { return Json::array({c.r, c.g, c.b}); }

Rgb rgb_from(const Json& j, std::string_view where) {
  if (!j.is_array() || j.size() != 3) throw InvalidArgument(std::string(where) + ": expected [r, g, b]");
  Rgb c;
  std::uint8_t* ch[] = {&c.r, &c.g, &c.b};
  for (int i = 0; i < 3; ++i) {
    if (!j[i].is_number_integer() || j[i].get<int>() < 0 || j[i].get<int>() > 255)
      throw InvalidArgument(std::string(where) + ": channel values must be integers in [0,255]");
    *ch[i] = static_cast<std::uint8_t>(j[i].get<int>());
  }
  return c;
}

}  // namespace

PipelineConfig pipeline_from_json(const Json& j) {
  PipelineConfig c;
  check_keys(j, {"backend", "schedule", "sampler", "guidance", "marker", "rebalance", "tracker", "refinement",
                 "workers"},
             "pipeline");
  read(j, "workers", c.workers, "pipeline");

  if (j.contains("backend")) {
    const Json& b = j["backend"];
    check_keys(b, {"kind", "url", "timeout_ms", "retries", "analytic_sigma", "contamination", "drift"}, "backend");
    if (b.contains("kind")) c.backend.kind = parse_backend(required<std::string>(b, "kind", "backend"));
    read(b, "url", c.backend.url, "backend");
    read(b, "timeout_ms", c.backend.timeout_ms, "backend");
    read(b, "retries", c.backend.retries, "backend");
    read(b, "analytic_sigma", c.backend.analytic_sigma, "backend");
    read(b, "contamination", c.backend.contamination, "backend");
    if (b.contains("drift")) {
      const Json& d = b["drift"];
      check_keys(d, {"enabled", "pixels", "prior", "seed"}, "backend.drift");
      read(d, "enabled", c.backend.drift, "backend.drift");
      read(d, "pixels", c.backend.drift_pixels, "backend.drift");
      read(d, "prior", c.backend.drift_prior, "backend.drift");
      read(d, "seed", c.backend.drift_seed, "backend.drift");
    }
  }
  if (j.contains("schedule")) {
    const Json& s = j["schedule"];
    check_keys(s, {"beta_start", "beta_end"}, "schedule");
    read(s, "beta_start", c.schedule.beta_start, "schedule");
    read(s, "beta_end", c.schedule.beta_end, "schedule");
  }
  if (j.contains("sampler")) {
    const Json& s = j["sampler"];
    check_keys(s, {"strength", "steps", "sigma_mode", "seed"}, "sampler");
    read(s, "strength", c.sampler.strength, "sampler");
    read(s, "steps", c.sampler.steps, "sampler");
    read(s, "seed", c.sampler.seed, "sampler");
    if (s.contains("sigma_mode")) c.sampler.sigma_mode = parse_sigma_mode(required<std::string>(s, "sigma_mode", "sampler"));
  }
  if (j.contains("guidance")) {
    check_keys(j["guidance"], {"lambda"}, "guidance");
    read(j["guidance"], "lambda", c.guidance.lambda, "guidance");
  }
  if (j.contains("marker")) {
    check_keys(j["marker"], {"hue", "radius"}, "marker");
    read(j["marker"], "hue", c.marker.hue, "marker");
    read(j["marker"], "radius", c.marker.radius, "marker");
  }
  if (j.contains("rebalance")) {
    const Json& r = j["rebalance"];
    check_keys(r, {"enabled", "hue_low", "hue_high", "s_axis", "v_axis", "saturation_cap"}, "rebalance");
    read(r, "enabled", c.rebalance, "rebalance");
    read(r, "hue_low", c.rebalance_params.hue_low, "rebalance");
    read(r, "hue_high", c.rebalance_params.hue_high, "rebalance");
    read(r, "s_axis", c.rebalance_params.s_axis, "rebalance");
    read(r, "v_axis", c.rebalance_params.v_axis, "rebalance");
    read(r, "saturation_cap", c.rebalance_params.saturation_cap, "rebalance");
  }
  if (j.contains("tracker")) {
    const Json& t = j["tracker"];
    check_keys(t, {"hue_below", "hue_above", "s_min", "s_max", "v_min", "v_max", "r_default", "r_max", "expansion",
                   "averaging_radius", "color_space", "lab_tolerance", "scale"},
               "tracker");
    read(t, "hue_below", c.tracker.hue_below, "tracker");
    read(t, "hue_above", c.tracker.hue_above, "tracker");
    read(t, "s_min", c.tracker.s_min, "tracker");
    read(t, "s_max", c.tracker.s_max, "tracker");
    read(t, "v_min", c.tracker.v_min, "tracker");
    read(t, "v_max", c.tracker.v_max, "tracker");
    read(t, "r_default", c.tracker.r_default, "tracker");
    read(t, "r_max", c.tracker.r_max, "tracker");
    read(t, "expansion", c.tracker.expansion, "tracker");
    read(t, "averaging_radius", c.tracker.averaging_radius, "tracker");
    read(t, "lab_tolerance", c.tracker.lab_tolerance, "tracker");
    read(t, "scale", c.scale_tracker, "tracker");
    if (t.contains("color_space")) c.tracker.color_space = parse_color_space(required<std::string>(t, "color_space", "tracker"));
  }
  if (j.contains("refinement")) {
    check_keys(j["refinement"], {"tube_radius", "rounds"}, "refinement");
    read(j["refinement"], "tube_radius", c.refinement.tube_radius, "refinement");
    read(j["refinement"], "rounds", c.refinement.rounds, "refinement");
  }
  return c;
}

Json to_json(const PipelineConfig& c) {
  Json j;
  j["workers"] = c.workers;
  j["backend"] = {{"kind", backend_name(c.backend.kind)},
                  {"url", c.backend.url},
                  {"timeout_ms", c.backend.timeout_ms},
                  {"retries", c.backend.retries},
                  {"analytic_sigma", c.backend.analytic_sigma},
                  {"contamination", c.backend.contamination},
                  {"drift",
                   {{"enabled", c.backend.drift},
                    {"pixels", c.backend.drift_pixels},
                    {"prior", c.backend.drift_prior},
                    {"seed", c.backend.drift_seed}}}};
  j["schedule"] = {{"beta_start", c.schedule.beta_start}, {"beta_end", c.schedule.beta_end}};
  j["sampler"] = {{"strength", c.sampler.strength},
                  {"steps", c.sampler.steps},
                  {"seed", c.sampler.seed},
                  {"sigma_mode", c.sampler.sigma_mode == SigmaMode::beta ? "beta" : "beta_tilde"}};
  j["guidance"] = {{"lambda", c.guidance.lambda}};
  j["marker"] = {{"hue", c.marker.hue}, {"radius", c.marker.radius}};
  j["rebalance"] = {{"enabled", c.rebalance},
                    {"hue_low", c.rebalance_params.hue_low},
                    {"hue_high", c.rebalance_params.hue_high},
                    {"s_axis", c.rebalance_params.s_axis},
                    {"v_axis", c.rebalance_params.v_axis},
                    {"saturation_cap", c.rebalance_params.saturation_cap}};
  j["tracker"] = {{"hue_below", c.tracker.hue_below},
                  {"hue_above", c.tracker.hue_above},
                  {"s_min", c.tracker.s_min},
                  {"s_max", c.tracker.s_max},
                  {"v_min", c.tracker.v_min},
                  {"v_max", c.tracker.v_max},
                  {"r_default", c.tracker.r_default},
                  {"r_max", c.tracker.r_max},
                  {"expansion", c.tracker.expansion},
                  {"averaging_radius", c.tracker.averaging_radius},
                  {"color_space", c.tracker.color_space == ColorSpace::hsv ? "hsv" : "lab"},
                  {"lab_tolerance", c.tracker.lab_tolerance},
                  {"scale", c.scale_tracker}};
  j["refinement"] = {{"tube_radius", c.refinement.tube_radius}, {"rounds", c.refinement.rounds}};
  return j;
}

Json track_to_json(const Track& t) {
  Json points = Json::array();
  Json visible = Json::array();
  for (const auto& p : t.points) {
    points.push_back(Json::array({p.u, p.v}));
    visible.push_back(p.visible);
  }
  return {{"schema", kSchemaVersion},
          {"video_id", t.video_id},
          {"query", Json::array({t.query.frame, t.query.u, t.query.v})},
          {"resolution", Json::array({t.height, t.width})},
          {"points", std::move(points)},
          {"visible", std::move(visible)}};
}

Track track_from_json(const Json& j) {
  check_keys(j, {"schema", "video_id", "query", "resolution", "points", "visible"}, "track");
  check_schema(j, "track");
  Track t;
  t.video_id = required<std::string>(j, "video_id", "track");
  const Json& q = j.at("query");
  if (!q.is_array() || q.size() != 3 || !q[0].is_number_integer() || !q[1].is_number() || !q[2].is_number())
    throw InvalidArgument("track.query: expected [t, u, v]");
  t.query = {q[0].get<int>(), q[1].get<double>(), q[2].get<double>()};
  if (!j.contains("resolution")) throw InvalidArgument("track: missing 'resolution'");
  const Json& r = j["resolution"];
  if (!r.is_array() || r.size() != 2 || !r[0].is_number_integer() || !r[1].is_number_integer())
    throw InvalidArgument("track.resolution: expected [H, W]");
  t.height = r[0].get<int>();
  t.width = r[1].get<int>();
  if (t.height <= 0 || t.width <= 0) throw InvalidArgument("track.resolution: must be positive");
  if (!j.contains("points") || !j.contains("visible") || !j["points"].is_array() || !j["visible"].is_array())
    throw InvalidArgument("track: 'points' and 'visible' must be arrays");
  const Json& pts = j["points"];
  const Json& vis = j["visible"];
  if (pts.size() != vis.size()) throw InvalidArgument("track: 'points' and 'visible' differ in length");
  for (std::size_t i = 0; i < pts.size(); ++i) {
    const Point2 p = point_from(pts[i], "track.points");
    if (!vis[i].is_boolean()) throw InvalidArgument("track.visible: expected booleans");
    t.points.push_back({p.u, p.v, vis[i].get<bool>()});
  }
  return t;
}

Json scene_to_json(const SceneConfig& c, std::uint64_t seed) {
  Json sprites = Json::array();
  for (const auto& s : c.sprites) {
    Json keys = Json::array();
    for (const auto& k : s.keyframes) keys.push_back(point_json(k));
    sprites.push_back({{"keyframes", std::move(keys)}, {"half_size", s.half_size}, {"color", rgb_json(s.base)}});
  }
  Json occluders = Json::array();
  for (const auto& o : c.occluders) {
    occluders.push_back({{"rect", Json::array({o.x, o.y, o.w, o.h})},
                         {"velocity", Json::array({o.vx, o.vy})},
                         {"color", rgb_json(o.color)}});
  }
  Json distractors = Json::array();
  for (const auto& d : c.distractors)
    distractors.push_back({{"rect", Json::array({d.x, d.y, d.w, d.h})}, {"color", rgb_json(d.color)}});
  return {{"schema", kSchemaVersion},
          {"seed", seed},
          {"resolution", Json::array({c.height, c.width})},
          {"frames", c.frames},
          {"sprites", std::move(sprites)},
          {"occluders", std::move(occluders)},
          {"distractors", std::move(distractors)}};
}

namespace {

std::array<double, 4> rect_from(const Json& j, std::string_view where) {
  if (!j.is_array() || j.size() != 4) throw InvalidArgument(std::string(where) + ": expected [x, y, w, h]");
  std::array<double, 4> r{};
  for (std::size_t i = 0; i < 4; ++i) {
    if (!j[i].is_number()) throw InvalidArgument(std::string(where) + ": expected numbers");
    r[i] = j[i].get<double>();
  }
  return r;
}

}  // namespace

SceneFile scene_from_json(const Json& j) {
  check_keys(j, {"schema", "seed", "resolution", "frames", "sprites", "occluders", "distractors"}, "scene");
  check_schema(j, "scene");
  SceneFile out;
  read(j, "seed", out.seed, "scene");
  SceneConfig& c = out.config;
  if (j.contains("resolution")) {
    const Json& r = j["resolution"];
    if (!r.is_array() || r.size() != 2) throw InvalidArgument("scene.resolution: expected [H, W]");
    c.height = r[0].get<int>();
    c.width = r[1].get<int>();
  }
  read(j, "frames", c.frames, "scene");
  if (j.contains("sprites")) {
    for (const Json& s : j["sprites"]) {
      check_keys(s, {"keyframes", "half_size", "color"}, "scene.sprites");
      Sprite sp;
      for (const Json& k : s.at("keyframes")) sp.keyframes.push_back(point_from(k, "scene.sprites.keyframes"));
      read(s, "half_size", sp.half_size, "scene.sprites");
      if (s.contains("color")) sp.base = rgb_from(s["color"], "scene.sprites.color");
      c.sprites.push_back(std::move(sp));
    }
  }
  if (j.contains("occluders")) {
    for (const Json& o : j["occluders"]) {
      check_keys(o, {"rect", "velocity", "color"}, "scene.occluders");
      Occluder oc;
      const auto r = rect_from(o.at("rect"), "scene.occluders.rect");
      oc.x = r[0], oc.y = r[1], oc.w = r[2], oc.h = r[3];
      if (o.contains("velocity")) {
        const Point2 v = point_from(o["velocity"], "scene.occluders.velocity");
        oc.vx = v.u, oc.vy = v.v;
      }
      if (o.contains("color")) oc.color = rgb_from(o["color"], "scene.occluders.color");
      c.occluders.push_back(oc);
    }
  }
  if (j.contains("distractors")) {
    for (const Json& d : j["distractors"]) {
      check_keys(d, {"rect", "color"}, "scene.distractors");
      Distractor ds;
      const auto r = rect_from(d.at("rect"), "scene.distractors.rect");
      ds.x = r[0], ds.y = r[1], ds.w = r[2], ds.h = r[3];
      if (d.contains("color")) ds.color = rgb_from(d["color"], "scene.distractors.color");
      c.distractors.push_back(ds);
    }
  }
  c.validate();
  return out;
}

}  // namespace ctrack
