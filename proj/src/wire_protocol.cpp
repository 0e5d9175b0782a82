#include "ctrack/wire_protocol.hpp"

#include <bit>
#include <cstring>

#include "ctrack/errors.hpp"

namespace ctrack::wire {

namespace {

void append_u32_le(std::string& out, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xFF));
}

std::uint32_t read_u32_le(std::string_view bytes) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(static_cast<unsigned char>(bytes[i])) << (8 * i);
  return v;
}

}  // namespace

void append_f32_le(std::string& out, std::span<const float> values) {
  out.reserve(out.size() + values.size() * 4);
  for (float f : values) append_u32_le(out, std::bit_cast<std::uint32_t>(f));
}

std::vector<float> read_f32_le(std::string_view bytes) {
  if (bytes.size() % 4 != 0) throw ProtocolError("wire: tensor payload is not a multiple of 4 bytes");
  std::vector<float> out(bytes.size() / 4);
  for (std::size_t i = 0; i < out.size(); ++i) out[i] = std::bit_cast<float>(read_u32_le(bytes.substr(i * 4, 4)));
  return out;
}

std::string encode_message(const nlohmann::json& header, std::span<const std::span<const float>> tensors) {
  const std::string text = header.dump();
  std::string out;
  append_u32_le(out, static_cast<std::uint32_t>(text.size()));
  out += text;
  for (const auto& t : tensors) append_f32_le(out, t);
  return out;
}

std::string encode_message(const nlohmann::json& header, std::span<const float> tensor) {
  const std::span<const float> one[] = {tensor};
  return encode_message(header, one);
}

Message decode_message(std::string_view body) {
  if (body.size() < 4) throw ProtocolError("wire: message shorter than its length prefix");
  const std::uint32_t n = read_u32_le(body);
  if (body.size() - 4 < n) throw ProtocolError("wire: truncated header");
  Message msg;
  try {
    msg.header = nlohmann::json::parse(body.substr(4, n));
  } catch (const nlohmann::json::exception& e) {
    throw ProtocolError(std::string("wire: malformed header: ") + e.what());
  }
  msg.payload = std::string(body.substr(4 + n));
  return msg;
}

nlohmann::json shape_to_json(const Shape& s) { return {s.frames, s.height, s.width, s.channels}; }

Shape shape_from_json(const nlohmann::json& j) {
  if (!j.is_array() || j.size() != 4) throw ProtocolError("wire: shape must be [F,H,W,C]");
  for (const auto& d : j)
    if (!d.is_number_integer()) throw ProtocolError("wire: shape entries must be integers");
  Shape s{j[0].get<Index>(), j[1].get<Index>(), j[2].get<Index>(), j[3].get<Index>()};
  if (s.frames < 0 || s.height < 0 || s.width < 0 || s.channels < 0) throw ProtocolError("wire: negative dimension");
  return s;
}

nlohmann::json epsilon_header(int t, const Shape& shape, std::span<const WireConditioning> conditionings) {
  nlohmann::json conds = nlohmann::json::array();
  for (const auto& c : conditionings) conds.push_back({{"tag", std::string(to_string(c.tag))}, {"frame_id", c.frame_id}});
  return {{"protocol", std::string(kProtocolVersion)},
          {"t", t},
          {"shape", shape_to_json(shape)},
          {"dtype", std::string(kDtype)},
          {"conditionings", conds}};
}

namespace {

std::string string_field(const nlohmann::json& header, const char* key) {
  const auto it = header.find(key);
  if (it == header.end() || !it->is_string()) return {};
  return it->get<std::string>();
}

}  // namespace

Shape validate_tensor_header(const nlohmann::json& header) {
  if (!header.is_object()) throw ProtocolError("wire: header is not an object");
  const std::string protocol = string_field(header, "protocol");
  if (protocol != kProtocolVersion) throw ProtocolError("wire: protocol version mismatch (got '" + protocol + "')");
  if (string_field(header, "dtype") != kDtype) throw ProtocolError("wire: unsupported dtype");
  if (!header.contains("shape")) throw ProtocolError("wire: header lacks shape");
  return shape_from_json(header["shape"]);
}

}  // namespace ctrack::wire
