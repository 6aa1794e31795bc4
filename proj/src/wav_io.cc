// sepkit/wav_io.cc

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

#include "sepkit/wav_io.h"

#include <cmath>
#include <cstdint>
#include <cstring>
#include <fstream>
#include <vector>

#include "sepkit/common.h"

namespace sepkit {

namespace {

uint32_t ReadU32(const unsigned char* p) {
  return static_cast<uint32_t>(p[0]) | (static_cast<uint32_t>(p[1]) << 8) |
         (static_cast<uint32_t>(p[2]) << 16) |
         (static_cast<uint32_t>(p[3]) << 24);
}

uint16_t ReadU16(const unsigned char* p) {
  return static_cast<uint16_t>(p[0] | (p[1] << 8));
}

void PutU32(std::vector<unsigned char>* out, uint32_t v) {
  out->push_back(v & 0xff);
  out->push_back((v >> 8) & 0xff);
  out->push_back((v >> 16) & 0xff);
  out->push_back((v >> 24) & 0xff);
}

void PutU16(std::vector<unsigned char>* out, uint16_t v) {
  out->push_back(v & 0xff);
  out->push_back((v >> 8) & 0xff);
}

}  // namespace

Waveform ReadWav(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open " + path.string());
  std::vector<unsigned char> buf((std::istreambuf_iterator<char>(in)),
                                 std::istreambuf_iterator<char>());
  if (buf.size() < 12 || std::memcmp(buf.data(), "RIFF", 4) != 0 ||
      std::memcmp(buf.data() + 8, "WAVE", 4) != 0)
    throw IoError("not a RIFF/WAVE file: " + path.string());

  int sample_rate = 0;
  int channels = 0;
  int bits = 0;
  bool have_fmt = false;
  const unsigned char* data = nullptr;
  size_t data_len = 0;

  size_t pos = 12;
  while (pos + 8 <= buf.size()) {
    const char* id = reinterpret_cast<const char*>(buf.data() + pos);
    const uint32_t len = ReadU32(buf.data() + pos + 4);
    const size_t body = pos + 8;
    if (body + len > buf.size())
      throw IoError("truncated chunk in " + path.string());
    if (std::memcmp(id, "fmt ", 4) == 0) {
      if (len < 16) throw IoError("short fmt chunk in " + path.string());
      const uint16_t format = ReadU16(buf.data() + body);
      channels = ReadU16(buf.data() + body + 2);
      sample_rate = static_cast<int>(ReadU32(buf.data() + body + 4));
      bits = ReadU16(buf.data() + body + 14);
      if (format != 1)
        throw IoError("only PCM wav supported: " + path.string());
      have_fmt = true;
    } else if (std::memcmp(id, "data", 4) == 0) {
      data = buf.data() + body;
      data_len = len;
    }
    pos = body + len + (len & 1);  // chunks are word-aligned
  }

  if (!have_fmt || data == nullptr)
    throw IoError("missing fmt/data chunk in " + path.string());
  if (channels != 1)
    throw IoError("only mono wav supported: " + path.string());
  if (bits != 16)
    throw IoError("only 16-bit wav supported: " + path.string());

  const size_t n = data_len / 2;
  Waveform w;
  w.sample_rate = sample_rate;
  w.samples.resize(n);
  for (size_t i = 0; i < n; ++i) {
    const int16_t v =
        static_cast<int16_t>(data[2 * i] | (data[2 * i + 1] << 8));
    w.samples[i] = static_cast<double>(v) / 32768.0;
  }
  return w;
}

void WriteWav(const std::filesystem::path& path, const Waveform& w) {
  ValidateWaveform(w, "WriteWav");
  const size_t n = w.samples.size();
  const uint32_t data_bytes = static_cast<uint32_t>(n * 2);

  std::vector<unsigned char> out;
  out.reserve(44 + data_bytes);
  out.insert(out.end(), {'R', 'I', 'F', 'F'});
  PutU32(&out, 36 + data_bytes);
  out.insert(out.end(), {'W', 'A', 'V', 'E', 'f', 'm', 't', ' '});
  PutU32(&out, 16);
  PutU16(&out, 1);  // PCM
  PutU16(&out, 1);  // mono
  PutU32(&out, static_cast<uint32_t>(w.sample_rate));
  PutU32(&out, static_cast<uint32_t>(w.sample_rate) * 2);
  PutU16(&out, 2);
  PutU16(&out, 16);
  out.insert(out.end(), {'d', 'a', 't', 'a'});
  PutU32(&out, data_bytes);

  for (size_t i = 0; i < n; ++i) {
    double v = w.samples[i];
    if (v > 1.0) v = 1.0;
    if (v < -1.0) v = -1.0;
    // Same 2^15 scale as the reader, so a round trip only rounds.
    long q = std::lround(v * 32768.0);
    if (q > 32767) q = 32767;
    if (q < -32768) q = -32768;
    PutU16(&out, static_cast<uint16_t>(static_cast<int16_t>(q)));
  }

  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw IoError("cannot write " + path.string());
  f.write(reinterpret_cast<const char*>(out.data()),
          static_cast<std::streamsize>(out.size()));
  if (!f) throw IoError("write failed: " + path.string());
}

}  // namespace sepkit
