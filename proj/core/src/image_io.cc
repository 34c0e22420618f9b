/*
 * Copyright 2026 The repeat-xai Authors.
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     https://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

#include "repeat/image_io.h"

#include <png.h>

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <string>

#include "repeat/common.h"

namespace repeat {

namespace {

static_assert(std::endian::native == std::endian::little,
              "raw tensor I/O assumes a little-endian host");

constexpr std::size_t kRawHeaderBytes = 16;
constexpr uint8_t kPngSignature[8] = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1A, '\n'};

std::vector<uint8_t> ReadAllBytes(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<uint8_t> bytes((std::istreambuf_iterator<char>(in)),
                             std::istreambuf_iterator<char>());
  if (in.bad()) throw IoError("cannot read " + path.string());
  return bytes;
}

uint32_t ReadU32(const uint8_t* p) {
  uint32_t v;
  std::memcpy(&v, p, sizeof(v));
  return v;
}

void AppendU32(std::vector<uint8_t>& out, uint32_t v) {
  const auto* p = reinterpret_cast<const uint8_t*>(&v);
  out.insert(out.end(), p, p + sizeof(v));
}

RawTensor DecodeRaw(const std::vector<uint8_t>& bytes, const std::string& name) {
  if (bytes.size() < kRawHeaderBytes ||
      std::memcmp(bytes.data(), kRawMagic, sizeof(kRawMagic)) != 0) {
    throw FormatError(name + ": not a raw tensor (bad magic or short header)");
  }
  RawTensor t;
  const uint32_t channels = ReadU32(bytes.data() + 4);
  const uint32_t height = ReadU32(bytes.data() + 8);
  const uint32_t width = ReadU32(bytes.data() + 12);
  if (channels == 0 || height == 0 || width == 0) {
    throw ValidationError(name + ": zero tensor dimension");
  }
  const uint64_t count = uint64_t{channels} * height * width;
  if (bytes.size() != kRawHeaderBytes + count * sizeof(float)) {
    throw FormatError(name + ": payload size does not match header");
  }
  t.shape = {static_cast<int>(channels), static_cast<int>(height),
             static_cast<int>(width)};
  t.values.resize(count);
  std::memcpy(t.values.data(), bytes.data() + kRawHeaderBytes,
              count * sizeof(float));
  return t;
}

ImageTensor DecodePng(const std::vector<uint8_t>& bytes, const std::string& name) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  if (!png_image_begin_read_from_memory(&image, bytes.data(), bytes.size())) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw FormatError(name + ": " + msg);
  }
  const bool color = (image.format & PNG_FORMAT_FLAG_COLOR) != 0;
  image.format = color ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  if (image.width == 0 || image.height == 0) {
    png_image_free(&image);
    throw ValidationError(name + ": zero image dimension");
  }
  std::vector<uint8_t> pixels(PNG_IMAGE_SIZE(image));
  if (!png_image_finish_read(&image, nullptr, pixels.data(), 0, nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw FormatError(name + ": " + msg);
  }
  const int channels = color ? 3 : 1;
  const int height = static_cast<int>(image.height);
  const int width = static_cast<int>(image.width);
  // Interleaved -> channel-major.
  std::vector<double> data(pixels.size());
  const std::size_t plane = static_cast<std::size_t>(height) * width;
  for (std::size_t p = 0; p < plane; ++p) {
    for (int c = 0; c < channels; ++c) {
      data[c * plane + p] = pixels[p * channels + c] / 255.0;
    }
  }
  return ImageTensor({channels, height, width}, std::move(data));
}

void WritePng(const std::filesystem::path& path, int channels, int height,
              int width, const std::vector<uint8_t>& interleaved) {
  png_image image;
  std::memset(&image, 0, sizeof(image));
  image.version = PNG_IMAGE_VERSION;
  image.width = static_cast<png_uint_32>(width);
  image.height = static_cast<png_uint_32>(height);
  image.format = channels == 3 ? PNG_FORMAT_RGB : PNG_FORMAT_GRAY;
  if (!png_image_write_to_file(&image, path.c_str(), 0, interleaved.data(), 0,
                               nullptr)) {
    const std::string msg = image.message;
    png_image_free(&image);
    throw IoError("cannot write " + path.string() + ": " + msg);
  }
}

uint8_t ToByte(double v) {
  return static_cast<uint8_t>(std::lround(std::clamp(v, 0.0, 1.0) * 255.0));
}

}  // namespace

RawTensor ReadRawTensor(const std::filesystem::path& path) {
  return DecodeRaw(ReadAllBytes(path), path.string());
}

void WriteRawTensor(const std::filesystem::path& path, const RawTensor& tensor) {
  Require(tensor.values.size() == tensor.shape.size(),
          "raw tensor value count does not match its shape");
  std::vector<uint8_t> bytes(kRawMagic, kRawMagic + sizeof(kRawMagic));
  AppendU32(bytes, static_cast<uint32_t>(tensor.shape.channels));
  AppendU32(bytes, static_cast<uint32_t>(tensor.shape.height));
  AppendU32(bytes, static_cast<uint32_t>(tensor.shape.width));
  const auto* p = reinterpret_cast<const uint8_t*>(tensor.values.data());
  bytes.insert(bytes.end(), p, p + tensor.values.size() * sizeof(float));

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
  if (!out) throw IoError("cannot write " + path.string());
}

ImageTensor LoadImage(const std::filesystem::path& path) {
  const std::vector<uint8_t> bytes = ReadAllBytes(path);
  if (bytes.size() >= sizeof(kPngSignature) &&
      std::memcmp(bytes.data(), kPngSignature, sizeof(kPngSignature)) == 0) {
    return DecodePng(bytes, path.string());
  }
  RawTensor raw = DecodeRaw(bytes, path.string());
  if (raw.shape.channels != 1 && raw.shape.channels != 3) {
    throw FormatError(path.string() + ": image tensors need 1 or 3 channels");
  }
  std::vector<double> data(raw.values.begin(), raw.values.end());
  for (double v : data) {
    if (!(v >= 0.0 && v <= 1.0)) {
      throw FormatError(path.string() + ": image values must lie in [0, 1]");
    }
  }
  return ImageTensor(raw.shape, std::move(data));
}

ImageTensor LoadImage(const std::filesystem::path& path, int target_height,
                      int target_width) {
  Require(target_height > 0 && target_width > 0,
          "target size must be positive");
  return ResizeBilinear(LoadImage(path), target_height, target_width);
}

void SaveImageRaw(const ImageTensor& image, const std::filesystem::path& path) {
  RawTensor raw{image.shape(), {image.data().begin(), image.data().end()}};
  WriteRawTensor(path, raw);
}

void SaveImagePng(const ImageTensor& image, const std::filesystem::path& path) {
  const int channels = image.channels();
  const std::size_t plane = image.shape().pixels();
  std::vector<uint8_t> interleaved(image.shape().size());
  for (std::size_t p = 0; p < plane; ++p) {
    for (int c = 0; c < channels; ++c) {
      interleaved[p * channels + c] = ToByte(image.data()[c * plane + p]);
    }
  }
  WritePng(path, channels, image.height(), image.width(), interleaved);
}

std::array<uint8_t, 3> HeatmapColor(double t) {
  t = std::clamp(t, 0.0, 1.0);
  if (t <= 0.5) {
    const uint8_t ramp = ToByte(2.0 * t);
    return {ramp, ramp, 255};
  }
  const uint8_t ramp = ToByte(2.0 * (1.0 - t));
  return {255, ramp, ramp};
}

void SaveMap(const ScalarMap& map, const std::filesystem::path& path,
             MapFormat format) {
  if (format == MapFormat::kRaw) {
    RawTensor raw{{1, map.height(), map.width()},
                  {map.data().begin(), map.data().end()}};
    WriteRawTensor(path, raw);
    return;
  }
  const double lo = map.Min();
  const double hi = map.Max();
  std::vector<uint8_t> rgb;
  rgb.reserve(map.size() * 3);
  for (double v : map.data()) {
    const double t = hi > lo ? (v - lo) / (hi - lo) : 0.5;
    const auto color = HeatmapColor(t);
    rgb.insert(rgb.end(), color.begin(), color.end());
  }
  WritePng(path, 3, map.height(), map.width(), rgb);
}

ScalarMap LoadRawMap(const std::filesystem::path& path) {
  RawTensor raw = ReadRawTensor(path);
  if (raw.shape.channels != 1) {
    throw FormatError(path.string() + ": maps are single-channel tensors");
  }
  for (float v : raw.values) {
    if (!std::isfinite(v)) throw FormatError(path.string() + ": non-finite map value");
  }
  return ScalarMap(raw.shape.height, raw.shape.width,
                   std::vector<double>(raw.values.begin(), raw.values.end()));
}

}  // namespace repeat
