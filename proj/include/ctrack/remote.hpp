#pragma once

#include <chrono>
#include <memory>
#include <string>

#include "ctrack/codec.hpp"
#include "ctrack/denoiser.hpp"

namespace ctrack {

struct RemoteOptions {
  std::string endpoint;  // e.g. http://127.0.0.1:8000
  std::chrono::milliseconds timeout{30000};
  int max_retries = 2;
  std::chrono::milliseconds backoff{100};
};

struct HealthInfo {
  std::string status;
  std::string model_name;
  std::string protocol;
  bool codec = false;  // server exposes /v1/encode and /v1/decode
  int spatial_factor = 1;
  int temporal_factor = 1;
};

namespace detail {
class RemoteSession;
}

/// Client for a denoiser server speaking wire protocol v1. Conditioning
/// frames are registered once per distinct content; both predictions for a
/// step travel in one request. Safe for concurrent calls.
template <typename Scalar>
class RemoteDenoiser final : public Denoiser<Scalar> {
 public:
  using Latent = LatentVideo<Scalar>;

  explicit RemoteDenoiser(RemoteOptions options);
  ~RemoteDenoiser() override;

  Latent epsilon(const Latent& x_t, int t, const Conditioning& c) const override;
  std::vector<Latent> epsilon_batch(const Latent& x_t, int t,
                                    std::span<const Conditioning* const> conditionings) const override;

  HealthInfo health() const;

 private:
  std::shared_ptr<detail::RemoteSession> session_;
};

/// Latent codec served by /v1/encode and /v1/decode.
template <typename Scalar>
class RemoteCodec final : public LatentCodec<Scalar> {
 public:
  explicit RemoteCodec(RemoteOptions options);
  ~RemoteCodec() override;

  LatentVideo<Scalar> encode(const LatentVideo<Scalar>& pixels) const override;
  LatentVideo<Scalar> decode(const LatentVideo<Scalar>& latent, const Shape& pixel_shape) const override;
  int spatial_factor() const override;
  int temporal_factor() const override;

 private:
  std::shared_ptr<detail::RemoteSession> session_;
  HealthInfo info_;
};

}  // namespace ctrack
