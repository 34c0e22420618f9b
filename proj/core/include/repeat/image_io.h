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

#ifndef REPEAT_IMAGE_IO_H_
#define REPEAT_IMAGE_IO_H_

#include <array>
#include <cstdint>
#include <filesystem>
#include <vector>

#include "repeat/tensor.h"

namespace repeat {

// Raw tensor file layout:
//   bytes 0..3   magic "RPT1"
//   bytes 4..15  u32 channels, height, width (little endian)
//   then channels*height*width IEEE-754 f32 values, little endian,
//   channel-major row-major.
inline constexpr char kRawMagic[4] = {'R', 'P', 'T', '1'};

struct RawTensor {
  ImageShape shape;
  std::vector<float> values;
};

RawTensor ReadRawTensor(const std::filesystem::path& path);
void WriteRawTensor(const std::filesystem::path& path, const RawTensor& tensor);

// Loads an 8-bit grayscale/RGB PNG (scaled by 1/255) or a raw tensor file and
// resizes it bilinearly to target_height x target_width. Raw tensors must
// have 1 or 3 channels and values in [0, 1]. The format is detected from the
// file signature, not the extension.
ImageTensor LoadImage(const std::filesystem::path& path, int target_height,
                      int target_width);

// Loads an image without resizing.
ImageTensor LoadImage(const std::filesystem::path& path);

void SaveImageRaw(const ImageTensor& image, const std::filesystem::path& path);
// 8-bit PNG; values are rounded to the nearest of 256 levels.
void SaveImagePng(const ImageTensor& image, const std::filesystem::path& path);

enum class MapFormat { kHeatmap, kRaw };

// kRaw writes the map as a one-channel raw tensor. Values are stored as f32,
// so a raw round trip reproduces the stored f32 values bit for bit.
// kHeatmap min-max normalizes and writes an 8-bit RGB PNG through
// HeatmapColor; a constant map renders as the mid color.
void SaveMap(const ScalarMap& map, const std::filesystem::path& path,
             MapFormat format);

// Reads a one-channel raw tensor as a map.
ScalarMap LoadRawMap(const std::filesystem::path& path);

// Diverging blue -> white -> red ramp for t in [0, 1]:
// 0 is pure blue (0, 0, 255), 0.5 white, 1 pure red (255, 0, 0).
std::array<uint8_t, 3> HeatmapColor(double t);

}  // namespace repeat

#endif  // REPEAT_IMAGE_IO_H_
