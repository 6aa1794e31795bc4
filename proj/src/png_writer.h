// sepkit/png_writer.h

// Copyright 2026  The sepkit project authors

// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//  http://www.apache.org/licenses/LICENSE-2.0
//
// THIS CODE IS PROVIDED *AS IS* BASIS, WITHOUT WARRANTIES OR CONDITIONS OF ANY
// KIND, EITHER EXPRESS OR IMPLIED, INCLUDING WITHOUT LIMITATION ANY IMPLIED
// WARRANTIES OR CONDITIONS OF TITLE, FITNESS FOR A PARTICULAR PURPOSE,
// MERCHANTABLITY OR NON-INFRINGEMENT.
// See the Apache 2 License for the specific language governing permissions and
// limitations under the License.

#ifndef SEPKIT_SRC_PNG_WRITER_H_
#define SEPKIT_SRC_PNG_WRITER_H_

#include <filesystem>
#include <vector>

namespace sepkit {

// Minimal truecolor PNG encoder (zlib-deflated, filter 0 per scanline).
// rgb is row-major, 3 bytes per pixel.
void WritePngRgb(const std::filesystem::path& path, int width, int height,
                 const std::vector<unsigned char>& rgb);

}  // namespace sepkit

#endif  // SEPKIT_SRC_PNG_WRITER_H_
