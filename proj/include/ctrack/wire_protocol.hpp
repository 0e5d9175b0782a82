#pragma once

// Denoiser wire protocol, version 1.
//
// Every tensor-carrying body (requests and responses of /v1/epsilon,
// /v1/encode, /v1/decode) is framed as
//
//   u32 little-endian header length N | N bytes of UTF-8 JSON | tensor bytes
//
// Tensor bytes are little-endian float32 in C order (F, H, W, C). Multiple
// tensors are concatenated in the order the header lists them.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include "json.hpp"

#include "ctrack/denoiser.hpp"
#include "ctrack/latent.hpp"

namespace ctrack::wire {

inline constexpr std::string_view kProtocolVersion = "1";
inline constexpr std::string_view kDtype = "f32";

struct Message {
  nlohmann::json header;
  std::string payload;
};

std::string encode_message(const nlohmann::json& header, std::span<const std::span<const float>> tensors);
std::string encode_message(const nlohmann::json& header, std::span<const float> tensor);
Message decode_message(std::string_view body);

void append_f32_le(std::string& out, std::span<const float> values);
std::vector<float> read_f32_le(std::string_view bytes);

nlohmann::json shape_to_json(const Shape& s);
Shape shape_from_json(const nlohmann::json& j);

struct WireConditioning {
  ConditioningTag tag;
  std::string frame_id;
};

nlohmann::json epsilon_header(int t, const Shape& shape, std::span<const WireConditioning> conditionings);

/// Checks protocol, dtype and shape fields and returns the declared shape.
Shape validate_tensor_header(const nlohmann::json& header);

template <typename Scalar>
std::vector<float> to_f32(const LatentVideo<Scalar>& x) {
  std::vector<float> out(static_cast<std::size_t>(x.size()));
  for (Index i = 0; i < x.size(); ++i) out[static_cast<std::size_t>(i)] = static_cast<float>(x.data()[i]);
  return out;
}

template <typename Scalar>
LatentVideo<Scalar> from_f32(const Shape& shape, std::span<const float> values) {
  if (static_cast<Index>(values.size()) != shape.size()) throw InvalidArgument("wire: tensor size does not match shape");
  LatentVideo<Scalar> out(shape);
  for (Index i = 0; i < shape.size(); ++i) out.data()[i] = static_cast<Scalar>(values[static_cast<std::size_t>(i)]);
  return out;
}

}  // namespace ctrack::wire
