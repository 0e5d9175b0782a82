#include "doctest.h"

#include "ctrack/errors.hpp"
#include "ctrack/wire_protocol.hpp"

using namespace ctrack;
using nlohmann::json;

TEST_CASE("framing is a little-endian length, the JSON header, then f32 LE values") {
  const float values[] = {1.0f, -2.5f};
  const std::string body = wire::encode_message(json::object(), values);
  const std::string expect("\x02\x00\x00\x00{}\x00\x00\x80\x3f\x00\x00\x20\xc0", 14);
  CHECK(body == expect);
}

TEST_CASE("round trip with several tensors") {
  const float a[] = {0.5f, 1e-20f, 3.0e30f};
  const float b[] = {-0.0f, 7.25f};
  const std::span<const float> both[] = {a, b};
  const json header = {{"protocol", "1"}, {"k", "\xc3\xa9"}};
  const auto msg = wire::decode_message(wire::encode_message(header, both));
  CHECK(msg.header == header);
  const auto floats = wire::read_f32_le(msg.payload);
  REQUIRE(floats.size() == 5);
  CHECK(floats[1] == 1e-20f);
  CHECK(floats[2] == 3.0e30f);
  CHECK(std::signbit(floats[3]));
  CHECK(floats[4] == 7.25f);
}

TEST_CASE("malformed bodies") {
  CHECK_THROWS_AS(wire::decode_message(std::string("\x01\x00", 2)), ProtocolError);
  CHECK_THROWS_AS(wire::decode_message(std::string("\x09\x00\x00\x00{}", 6)), ProtocolError);
  CHECK_THROWS_AS(wire::decode_message(std::string("\x02\x00\x00\x00{x", 6)), ProtocolError);
  CHECK_THROWS_AS(wire::read_f32_le("abc"), ProtocolError);
  CHECK(wire::read_f32_le("").empty());
}

TEST_CASE("epsilon header") {
  const wire::WireConditioning conds[] = {{ConditioningTag::edited, "a1"}, {ConditioningTag::unedited, "b2"}};
  const json h = wire::epsilon_header(17, {3, 4, 5, 3}, conds);
  CHECK(h["protocol"] == "1");
  CHECK(h["t"] == 17);
  CHECK(h["dtype"] == "f32");
  CHECK(h["shape"] == json::array({3, 4, 5, 3}));
  CHECK(h["conditionings"][0]["tag"] == "edited");
  CHECK(h["conditionings"][1]["frame_id"] == "b2");
  CHECK(wire::validate_tensor_header(h) == Shape{3, 4, 5, 3});
}

TEST_CASE("header validation") {
  const json good = {{"protocol", "1"}, {"dtype", "f32"}, {"shape", {1, 2, 3, 3}}};
  CHECK(wire::validate_tensor_header(good) == Shape{1, 2, 3, 3});
  auto bad = good;
  bad["protocol"] = "2";
  CHECK_THROWS_AS(wire::validate_tensor_header(bad), ProtocolError);
  bad["protocol"] = 1;
  CHECK_THROWS_AS(wire::validate_tensor_header(bad), ProtocolError);
  bad = good;
  bad["dtype"] = "f16";
  CHECK_THROWS_AS(wire::validate_tensor_header(bad), ProtocolError);
  bad = good;
  bad.erase("shape");
  CHECK_THROWS_AS(wire::validate_tensor_header(bad), ProtocolError);
  bad["shape"] = {1, 2, 3};
  CHECK_THROWS_AS(wire::validate_tensor_header(bad), ProtocolError);
  bad["shape"] = {1, 2, "3", 3};
  CHECK_THROWS_AS(wire::validate_tensor_header(bad), ProtocolError);
  bad["shape"] = {1, -2, 3, 3};
  CHECK_THROWS_AS(wire::validate_tensor_header(bad), ProtocolError);
  CHECK_THROWS_AS(wire::validate_tensor_header(json::array()), ProtocolError);
}

TEST_CASE("tensor conversion") {
  LatentVideod x({1, 1, 2, 1});
  x.data()[0] = 0.25;
  x.data()[1] = -4.0;
  const auto f = wire::to_f32(x);
  CHECK(f == std::vector<float>{0.25f, -4.0f});
  const auto y = wire::from_f32<double>({1, 1, 2, 1}, f);
  CHECK(y.data()[1] == -4.0);
  CHECK_THROWS_AS(wire::from_f32<double>({1, 1, 3, 1}, f), InvalidArgument);
}
