#pragma once

#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>

#include "ctrack/image.hpp"

namespace ctrack {

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

std::string encode_png(const Image& image);
Image decode_png(std::string_view bytes);
Image read_png(const std::filesystem::path& path);
void write_png(const Image& image, const std::filesystem::path& path);

/// Directory of PNG frames read in lexicographic filename order.
VideoTensor read_frame_dir(const std::filesystem::path& dir);
/// Writes frame_00000.png, frame_00001.png, ...
void write_frame_dir(const VideoTensor& video, const std::filesystem::path& dir);

// Raw tensor file, all integers little-endian u32:
//   "CTRV" | version (1) | F | H | W | C (3) | dtype (0 = u8, 1 = f32 in [-1,1])
// followed by channel-planar frames: for each frame the R plane, then G,
// then B, each row-major.
enum class RawDtype : std::uint32_t { u8 = 0, f32 = 1 };

void write_raw_video(const VideoTensor& video, const std::filesystem::path& path, RawDtype dtype = RawDtype::u8);
VideoTensor read_raw_video(const std::filesystem::path& path);

/// Frame directory or raw tensor file, picked by what the path is.
VideoTensor load_video(const std::filesystem::path& path);

}  // namespace ctrack
