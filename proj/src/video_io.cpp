#include "ctrack/video_io.hpp"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cstdio>
#include <cstring>
#include <fstream>
#include <iterator>

namespace ctrack {

namespace fs = std::filesystem;

std::string encode_png(const Image& image) {
  png_image desc{};
  desc.version = PNG_IMAGE_VERSION;
  desc.width = static_cast<png_uint_32>(image.width());
  desc.height = static_cast<png_uint_32>(image.height());
  desc.format = PNG_FORMAT_RGB;
  const void* pixels = image.pixels().data();
  png_alloc_size_t size = 0;
  if (!png_image_write_to_memory(&desc, nullptr, &size, 0, pixels, 0, nullptr))
    throw IoError(std::string("PNG encode failed: ") + desc.message);
  std::string out(size, '\0');
  if (!png_image_write_to_memory(&desc, out.data(), &size, 0, pixels, 0, nullptr))
    throw IoError(std::string("PNG encode failed: ") + desc.message);
  out.resize(size);
  return out;
}

Image decode_png(std::string_view bytes) {
  png_image desc{};
  desc.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&desc, bytes.data(), bytes.size()))
    throw IoError(std::string("PNG decode failed: ") + desc.message);
  desc.format = PNG_FORMAT_RGB;
  Image out(static_cast<int>(desc.width), static_cast<int>(desc.height));
  if (!png_image_finish_read(&desc, nullptr, out.pixels().data(), 0, nullptr)) {
    png_image_free(&desc);
    throw IoError(std::string("PNG decode failed: ") + desc.message);
  }
  return out;
}

Image read_png(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  const std::string bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
  return decode_png(bytes);
}

void write_png(const Image& image, const fs::path& path) {
  const std::string bytes = encode_png(image);
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
}

VideoTensor read_frame_dir(const fs::path& dir) {
  if (!fs::is_directory(dir)) throw IoError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir)) {
    if (entry.is_regular_file() && entry.path().extension() == ".png") files.push_back(entry.path());
  }
  if (files.empty()) throw IoError("no PNG frames in " + dir.string());
  std::sort(files.begin(), files.end());
  std::vector<Image> frames;
  frames.reserve(files.size());
  for (const auto& f : files) frames.push_back(read_png(f));
  try {
    return VideoTensor(std::move(frames));
  } catch (const InvalidArgument& e) {
    throw IoError(dir.string() + ": " + e.what());
  }
}

void write_frame_dir(const VideoTensor& video, const fs::path& dir) {
  fs::create_directories(dir);
  for (int k = 0; k < video.frames(); ++k) {
    char name[32];
    std::snprintf(name, sizeof(name), "frame_%05d.png", k);
    write_png(video.frame(k), dir / name);
  }
}

namespace {

constexpr char kMagic[4] = {'C', 'T', 'R', 'V'};

void put_u32(std::ostream& out, std::uint32_t v) {
  const char b[4] = {static_cast<char>(v & 0xFF), static_cast<char>((v >> 8) & 0xFF),
                     static_cast<char>((v >> 16) & 0xFF), static_cast<char>((v >> 24) & 0xFF)};
  out.write(b, 4);
}

std::uint32_t get_u32(std::istream& in) {
  unsigned char b[4];
  if (!in.read(reinterpret_cast<char*>(b), 4)) throw IoError("raw video: truncated header");
  return b[0] | (b[1] << 8) | (b[2] << 16) | (static_cast<std::uint32_t>(b[3]) << 24);
}

std::uint8_t channel(const Rgb& p, int c) { return c == 0 ? p.r : (c == 1 ? p.g : p.b); }

void set_channel(Rgb& p, int c, std::uint8_t v) { (c == 0 ? p.r : (c == 1 ? p.g : p.b)) = v; }

}  // namespace

void write_raw_video(const VideoTensor& video, const fs::path& path, RawDtype dtype) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot write " + path.string());
  out.write(kMagic, 4);
  put_u32(out, 1);
  put_u32(out, static_cast<std::uint32_t>(video.frames()));
  put_u32(out, static_cast<std::uint32_t>(video.height()));
  put_u32(out, static_cast<std::uint32_t>(video.width()));
  put_u32(out, 3);
  put_u32(out, static_cast<std::uint32_t>(dtype));
  for (const auto& frame : video.frame_list()) {
    for (int c = 0; c < 3; ++c) {
      for (const Rgb& p : frame.pixels()) {
        const std::uint8_t v = channel(p, c);
        if (dtype == RawDtype::u8) {
          out.put(static_cast<char>(v));
        } else {
          put_u32(out, std::bit_cast<std::uint32_t>(static_cast<float>(v / 127.5 - 1.0)));
        }
      }
    }
  }
}

VideoTensor read_raw_video(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  char magic[4];
  if (!in.read(magic, 4) || std::memcmp(magic, kMagic, 4) != 0) throw IoError(path.string() + ": not a CTRV file");
  if (get_u32(in) != 1) throw IoError(path.string() + ": unsupported version");
  const auto frames = get_u32(in), height = get_u32(in), width = get_u32(in), channels = get_u32(in);
  const auto dtype = static_cast<RawDtype>(get_u32(in));
  if (channels != 3) throw IoError(path.string() + ": expected 3 channels");
  if (dtype != RawDtype::u8 && dtype != RawDtype::f32) throw IoError(path.string() + ": unknown dtype");
  VideoTensor video(static_cast<int>(frames), static_cast<int>(width), static_cast<int>(height));
  for (auto& frame : video.frame_list()) {
    for (int c = 0; c < 3; ++c) {
      for (Rgb& p : frame.pixels()) {
        if (dtype == RawDtype::u8) {
          const int v = in.get();
          if (v == EOF) throw IoError(path.string() + ": truncated data");
          set_channel(p, c, static_cast<std::uint8_t>(v));
        } else {
          const float f = std::bit_cast<float>(get_u32(in));
          const double q = std::clamp((static_cast<double>(f) + 1.0) * 127.5, 0.0, 255.0);
          set_channel(p, c, static_cast<std::uint8_t>(std::lround(q)));
        }
      }
    }
  }
  return video;
}

VideoTensor load_video(const fs::path& path) {
  if (fs::is_directory(path)) return read_frame_dir(path);
  if (fs::is_regular_file(path)) return read_raw_video(path);
  throw IoError("no such video: " + path.string());
}

}  // namespace ctrack
