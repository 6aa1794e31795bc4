// sepkit/png_writer.cc

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

#include "png_writer.h"

#include <zlib.h>

#include <cstring>
#include <fstream>

#include "sepkit/common.h"

namespace sepkit {

namespace {

void PutU32Be(std::vector<unsigned char>* out, uint32_t v) {
  out->push_back((v >> 24) & 0xff);
  out->push_back((v >> 16) & 0xff);
  out->push_back((v >> 8) & 0xff);
  out->push_back(v & 0xff);
}

void PutChunk(std::vector<unsigned char>* out, const char type[4],
              const std::vector<unsigned char>& body) {
  PutU32Be(out, static_cast<uint32_t>(body.size()));
  const size_t crc_start = out->size();
  out->insert(out->end(), type, type + 4);
  out->insert(out->end(), body.begin(), body.end());
  const uLong crc = crc32(0L, out->data() + crc_start,
                          static_cast<uInt>(out->size() - crc_start));
  PutU32Be(out, static_cast<uint32_t>(crc));
}

}  // namespace

void WritePngRgb(const std::filesystem::path& path, int width, int height,
                 const std::vector<unsigned char>& rgb) {
  if (width < 1 || height < 1 ||
      rgb.size() != static_cast<size_t>(width) * height * 3)
    throw ContractViolation("png: bad dimensions");

  // Filter byte 0 in front of each scanline.
  std::vector<unsigned char> raw;
  raw.reserve(static_cast<size_t>(height) * (1 + 3 * width));
  for (int y = 0; y < height; ++y) {
    raw.push_back(0);
    const unsigned char* row = rgb.data() + static_cast<size_t>(y) * width * 3;
    raw.insert(raw.end(), row, row + 3 * width);
  }

  uLongf comp_len = compressBound(static_cast<uLong>(raw.size()));
  std::vector<unsigned char> compressed(comp_len);
  if (compress2(compressed.data(), &comp_len, raw.data(),
                static_cast<uLong>(raw.size()), 6) != Z_OK)
    throw Error("png: deflate failed");
  compressed.resize(comp_len);

  std::vector<unsigned char> out = {0x89, 'P', 'N', 'G', '\r', '\n', 0x1a, '\n'};
  std::vector<unsigned char> ihdr;
  PutU32Be(&ihdr, static_cast<uint32_t>(width));
  PutU32Be(&ihdr, static_cast<uint32_t>(height));
  ihdr.push_back(8);   // bit depth
  ihdr.push_back(2);   // truecolor
  ihdr.push_back(0);
  ihdr.push_back(0);
  ihdr.push_back(0);
  PutChunk(&out, "IHDR", ihdr);
  PutChunk(&out, "IDAT", compressed);
  PutChunk(&out, "IEND", {});

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write " + path.string());
  f.write(reinterpret_cast<const char*>(out.data()),
          static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("png write failed: " + path.string());
}

}  // namespace sepkit
