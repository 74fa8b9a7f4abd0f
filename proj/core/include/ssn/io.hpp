// Copyright 2026 The SSN-CPU Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.

#pragma once

#include <string>
#include <vector>

#include "ssn/cluster.hpp"
#include "ssn/featspace.hpp"
#include "ssn/metrics.hpp"

namespace ssn::io {

/// PNG (any bit depth / color type, alpha dropped) or binary PPM (P6).
RawImage read_image(const std::string& path);
void write_png(const std::string& path, const RawImage& img);
void write_ppm(const std::string& path, const RawImage& img);

/// Label maps: 16-bit binary PGM (P5, big-endian samples; 8-bit accepted
/// on read), or CSV with one line of comma-separated ids per image row.
LabelMap read_label_map(const std::string& path);
void write_label_pgm(const std::string& path, const LabelMap& labels);
void write_label_csv(const std::string& path, const LabelMap& labels);

/// Flow CSV: "# width=W height=H", a "u,v" header, then W*H rows.
Matrix read_flow_csv(const std::string& path, int* width, int* height);
void write_flow_csv(const std::string& path, const Matrix& flow, int width, int height);

/// Copy of img with superpixel boundary pixels painted in `color`.
RawImage boundary_overlay(const RawImage& img, const LabelMap& labels, const unsigned char color[3]);

/// Reads every file into memory; throws IoError.
std::string read_file(const std::string& path);
void write_file(const std::string& path, const std::string& contents);

bool has_extension(const std::string& path, const std::string& ext);

}  // namespace ssn::io
