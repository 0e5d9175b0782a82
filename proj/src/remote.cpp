#include "ctrack/remote.hpp"

#include <map>
#include <mutex>
#include <optional>
#include <thread>

#include "httplib.h"

#include "ctrack/errors.hpp"
#include "ctrack/video_io.hpp"
#include "ctrack/wire_protocol.hpp"

namespace ctrack {
namespace detail {

namespace {

std::uint64_t fnv1a(std::string_view bytes) {
  std::uint64_t h = 14695981039346656037ull;
  for (unsigned char c : bytes) {
    h ^= c;
    h *= 1099511628211ull;
  }
  return h;
}

}  // namespace

class RemoteSession {
 public:
  explicit RemoteSession(RemoteOptions options) : options_(std::move(options)) {
    if (options_.endpoint.empty()) throw InvalidArgument("RemoteDenoiser: empty endpoint");
    if (options_.max_retries < 0) throw InvalidArgument("RemoteDenoiser: max_retries must be >= 0");
  }

  const std::string& endpoint() const { return options_.endpoint; }

  std::string post(const std::string& path, const std::string& body, const std::string& content_type) {
    return with_retries([&](httplib::Client& cli) { return cli.Post(path, body, content_type); }, path);
  }

  std::string get(const std::string& path) {
    return with_retries([&](httplib::Client& cli) { return cli.Get(path); }, path);
  }

  HealthInfo health() {
    {
      std::lock_guard lock(mutex_);
      if (health_) return *health_;
    }
    const std::string body = get("/v1/health");
    HealthInfo info;
    try {
      const auto j = nlohmann::json::parse(body);
      info.status = j.value("status", std::string());
      info.model_name = j.value("model_name", std::string());
      info.protocol = j.value("protocol", std::string());
      if (j.contains("codec")) {
        info.codec = true;
        info.spatial_factor = j["codec"].value("spatial_factor", 1);
        info.temporal_factor = j["codec"].value("temporal_factor", 1);
      }
    } catch (const nlohmann::json::exception& e) {
      throw ProtocolError(std::string("malformed /v1/health response: ") + e.what(), options_.endpoint);
    }
    if (info.protocol != wire::kProtocolVersion)
      throw ProtocolError("server speaks protocol '" + info.protocol + "', client speaks '" +
                              std::string(wire::kProtocolVersion) + "'",
                          options_.endpoint);
    std::lock_guard lock(mutex_);
    health_ = info;
    return info;
  }

  std::string frame_id(const Conditioning& c) {
    const std::string png = encode_png(c.first_frame);
    const auto key = std::make_pair(fnv1a(png), c.tag);
    {
      std::lock_guard lock(mutex_);
      if (auto it = frames_.find(key); it != frames_.end()) return it->second;
    }
    const std::string body = post("/v1/frames?tag=" + std::string(to_string(c.tag)), png, "image/png");
    std::string id;
    try {
      id = nlohmann::json::parse(body).at("frame_id").get<std::string>();
    } catch (const nlohmann::json::exception& e) {
      throw ProtocolError(std::string("malformed /v1/frames response: ") + e.what(), options_.endpoint);
    }
    std::lock_guard lock(mutex_);
    frames_.emplace(key, id);
    return id;
  }

  wire::Message exchange(const std::string& path, const std::string& body) {
    const std::string response = post(path, body, "application/octet-stream");
    try {
      return wire::decode_message(response);
    } catch (ProtocolError& e) {
      throw ProtocolError(e.message(), options_.endpoint);
    }
  }

 private:
  template <typename Call>
  std::string with_retries(Call&& call, const std::string& path) {
    for (int attempt = 0;; ++attempt) {
      try {
        return attempt_once(call, path);
      } catch (const TransportError& e) {
        if (attempt >= options_.max_retries)
          throw TransportError(e.message() + " (after " + std::to_string(attempt + 1) + " attempts)",
                               options_.endpoint);
        std::this_thread::sleep_for(options_.backoff * (attempt + 1));
      }
    }
  }

  template <typename Call>
  std::string attempt_once(Call& call, const std::string& path) {
    auto cli = acquire();
    auto res = call(*cli);
    if (!res) {
      throw TransportError("request " + path + " failed: " + httplib::to_string(res.error()), options_.endpoint);
    }
    release(std::move(cli));
    if (res->status >= 500) {
      throw TransportError(path + " returned HTTP " + std::to_string(res->status), options_.endpoint);
    }
    if (res->status != 200) {
      throw ProtocolError(path + " returned HTTP " + std::to_string(res->status) + ": " + res->body,
                          options_.endpoint);
    }
    return std::move(res->body);
  }

  std::unique_ptr<httplib::Client> acquire() {
    {
      std::lock_guard lock(mutex_);
      if (!pool_.empty()) {
        auto cli = std::move(pool_.back());
        pool_.pop_back();
        return cli;
      }
    }
    auto cli = std::make_unique<httplib::Client>(options_.endpoint);
    if (!cli->is_valid()) throw ProtocolError("invalid endpoint URL", options_.endpoint);
    const auto secs = std::chrono::duration_cast<std::chrono::seconds>(options_.timeout);
    const auto usecs = std::chrono::duration_cast<std::chrono::microseconds>(options_.timeout - secs);
    cli->set_connection_timeout(secs.count(), usecs.count());
    cli->set_read_timeout(secs.count(), usecs.count());
    cli->set_write_timeout(secs.count(), usecs.count());
    cli->set_keep_alive(true);
    return cli;
  }

  void release(std::unique_ptr<httplib::Client> cli) {
    std::lock_guard lock(mutex_);
    pool_.push_back(std::move(cli));
  }

  RemoteOptions options_;
  std::mutex mutex_;
  std::vector<std::unique_ptr<httplib::Client>> pool_;
  std::optional<HealthInfo> health_;
  std::map<std::pair<std::uint64_t, ConditioningTag>, std::string> frames_;
};

}  // namespace detail

// ---------------------------------------------------------------------------

namespace {

template <typename Scalar>
LatentVideo<Scalar> tensor_from(const wire::Message& msg, const Shape& shape, const std::string& path,
                                const std::string& endpoint) {
  const auto floats = wire::read_f32_le(msg.payload);
  if (static_cast<Index>(floats.size()) != shape.size())
    throw ProtocolError(path + " payload size does not match its shape", endpoint);
  auto out = wire::from_f32<Scalar>(shape, floats);
  if (!out.all_finite()) throw NumericError("non-finite values in " + path + " response from " + endpoint);
  return out;
}

}  // namespace

template <typename Scalar>
RemoteDenoiser<Scalar>::RemoteDenoiser(RemoteOptions options)
    : session_(std::make_shared<detail::RemoteSession>(std::move(options))) {}

template <typename Scalar>
RemoteDenoiser<Scalar>::~RemoteDenoiser() = default;

template <typename Scalar>
HealthInfo RemoteDenoiser<Scalar>::health() const {
  return session_->health();
}

template <typename Scalar>
LatentVideo<Scalar> RemoteDenoiser<Scalar>::epsilon(const Latent& x_t, int t, const Conditioning& c) const {
  const Conditioning* one[] = {&c};
  return std::move(epsilon_batch(x_t, t, one).front());
}

template <typename Scalar>
std::vector<LatentVideo<Scalar>> RemoteDenoiser<Scalar>::epsilon_batch(
    const Latent& x_t, int t, std::span<const Conditioning* const> conditionings) const {
  session_->health();
  std::vector<wire::WireConditioning> wire_conds;
  wire_conds.reserve(conditionings.size());
  for (const Conditioning* c : conditionings) wire_conds.push_back({c->tag, session_->frame_id(*c)});

  const auto header = wire::epsilon_header(t, x_t.shape(), wire_conds);
  const auto values = wire::to_f32(x_t);
  const auto msg = session_->exchange("/v1/epsilon", wire::encode_message(header, values));

  Shape shape;
  try {
    shape = wire::validate_tensor_header(msg.header);
    if (msg.header.at("conditionings").size() != conditionings.size())
      throw ProtocolError("response carries a different number of conditionings");
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError(std::string("malformed /v1/epsilon response: ") + e.what(), session_->endpoint());
  } catch (const ProtocolError& e) {
    throw ProtocolError(e.message(), session_->endpoint());
  }
  if (!(shape == x_t.shape())) throw ProtocolError("response shape differs from request", session_->endpoint());

  const auto floats = wire::read_f32_le(msg.payload);
  const auto per = static_cast<std::size_t>(shape.size());
  if (floats.size() != per * conditionings.size())
    throw ProtocolError("response payload has " + std::to_string(floats.size()) + " values, expected " +
                            std::to_string(per * conditionings.size()),
                        session_->endpoint());

  std::vector<Latent> out;
  out.reserve(conditionings.size());
  for (std::size_t i = 0; i < conditionings.size(); ++i) {
    auto eps = wire::from_f32<Scalar>(shape, std::span<const float>(floats).subspan(i * per, per));
    if (!eps.all_finite())
      throw NumericError("non-finite values in /v1/epsilon response at step " + std::to_string(t) + " from " +
                         session_->endpoint());
    out.push_back(std::move(eps));
  }
  return out;
}

// ---------------------------------------------------------------------------

template <typename Scalar>
RemoteCodec<Scalar>::RemoteCodec(RemoteOptions options)
    : session_(std::make_shared<detail::RemoteSession>(std::move(options))), info_(session_->health()) {}

template <typename Scalar>
RemoteCodec<Scalar>::~RemoteCodec() = default;

template <typename Scalar>
int RemoteCodec<Scalar>::spatial_factor() const {
  return info_.spatial_factor;
}

template <typename Scalar>
int RemoteCodec<Scalar>::temporal_factor() const {
  return info_.temporal_factor;
}

template <typename Scalar>
LatentVideo<Scalar> RemoteCodec<Scalar>::encode(const LatentVideo<Scalar>& pixels) const {
  const nlohmann::json header = {{"protocol", std::string(wire::kProtocolVersion)},
                                 {"shape", wire::shape_to_json(pixels.shape())},
                                 {"dtype", std::string(wire::kDtype)}};
  const auto msg = session_->exchange("/v1/encode", wire::encode_message(header, wire::to_f32(pixels)));
  return tensor_from<Scalar>(msg, wire::validate_tensor_header(msg.header), "/v1/encode", session_->endpoint());
}

template <typename Scalar>
LatentVideo<Scalar> RemoteCodec<Scalar>::decode(const LatentVideo<Scalar>& latent, const Shape& pixel_shape) const {
  const nlohmann::json header = {{"protocol", std::string(wire::kProtocolVersion)},
                                 {"shape", wire::shape_to_json(latent.shape())},
                                 {"output_shape", wire::shape_to_json(pixel_shape)},
                                 {"dtype", std::string(wire::kDtype)}};
  const auto msg = session_->exchange("/v1/decode", wire::encode_message(header, wire::to_f32(latent)));
  const Shape shape = wire::validate_tensor_header(msg.header);
  if (!(shape == pixel_shape)) throw ProtocolError("/v1/decode returned an unexpected shape", session_->endpoint());
  return tensor_from<Scalar>(msg, shape, "/v1/decode", session_->endpoint());
}

template class RemoteDenoiser<float>;
template class RemoteDenoiser<double>;
template class RemoteCodec<float>;
template class RemoteCodec<double>;

}  // namespace ctrack
