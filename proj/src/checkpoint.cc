// sepkit/checkpoint.cc

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

#include "sepkit/checkpoint.h"

#include <cstring>
#include <fstream>

#include "sepkit/common.h"

namespace sepkit {

namespace {

constexpr char kMagic[8] = {'S', 'E', 'P', 'K', 'C', 'K', 'P', '1'};
constexpr int kFormatVersion = 1;

static_assert(sizeof(double) == 8);

}  // namespace

const std::vector<double>* Checkpoint::FindArray(const std::string& name) const {
  for (const auto& [n, data] : arrays)
    if (n == name) return &data;
  return nullptr;
}

void Checkpoint::Save(const std::filesystem::path& path) const {
  nlohmann::ordered_json header;
  header["format_version"] = kFormatVersion;
  header["config"] = nlohmann::ordered_json::parse(config.ToJson());
  header["metadata"] = metadata;
  nlohmann::ordered_json arr = nlohmann::ordered_json::array();
  for (const auto& [name, data] : arrays) {
    nlohmann::ordered_json a;
    a["name"] = name;
    a["size"] = data.size();
    arr.push_back(std::move(a));
  }
  header["arrays"] = std::move(arr);
  const std::string header_text = header.dump();

  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot write checkpoint: " + path.string());
  out.write(kMagic, sizeof(kMagic));
  const uint64_t hlen = header_text.size();
  out.write(reinterpret_cast<const char*>(&hlen), sizeof(hlen));
  out.write(header_text.data(), static_cast<std::streamsize>(hlen));
  for (const auto& [name, data] : arrays)
    out.write(reinterpret_cast<const char*>(data.data()),
              static_cast<std::streamsize>(data.size() * sizeof(double)));
  if (!out) throw IoError("checkpoint write failed: " + path.string());
}

Checkpoint Checkpoint::Load(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open checkpoint: " + path.string());

  char magic[8];
  in.read(magic, sizeof(magic));
  if (!in || std::memcmp(magic, kMagic, sizeof(kMagic)) != 0)
    throw CheckpointError("not a sepkit checkpoint: " + path.string());
  uint64_t hlen = 0;
  in.read(reinterpret_cast<char*>(&hlen), sizeof(hlen));
  if (!in || hlen > (1ull << 30))
    throw CheckpointError("corrupt checkpoint header: " + path.string());
  std::string header_text(hlen, '\0');
  in.read(header_text.data(), static_cast<std::streamsize>(hlen));
  if (!in) throw CheckpointError("truncated checkpoint: " + path.string());

  nlohmann::ordered_json header;
  try {
    header = nlohmann::ordered_json::parse(header_text);
  } catch (const nlohmann::json::exception& e) {
    throw CheckpointError("bad checkpoint header: " + std::string(e.what()));
  }
  if (header.at("format_version").get<int>() != kFormatVersion)
    throw CheckpointError("incompatible checkpoint version in " +
                          path.string());

  Checkpoint ckpt;
  ckpt.config = SeparatorConfig::FromJson(header.at("config").dump());
  ckpt.metadata = header.value("metadata", nlohmann::ordered_json::object());
  for (const auto& a : header.at("arrays")) {
    const std::string name = a.at("name").get<std::string>();
    const size_t size = a.at("size").get<size_t>();
    std::vector<double> data(size);
    in.read(reinterpret_cast<char*>(data.data()),
            static_cast<std::streamsize>(size * sizeof(double)));
    if (!in) throw CheckpointError("truncated checkpoint arrays: " +
                                   path.string());
    ckpt.arrays.emplace_back(name, std::move(data));
  }
  return ckpt;
}

Checkpoint MakeCheckpoint(Separator* model, nlohmann::ordered_json metadata) {
  Checkpoint ckpt;
  ckpt.config = model->config();
  ckpt.metadata = std::move(metadata);
  for (const ParamView& v : model->Params())
    ckpt.arrays.emplace_back(v.name,
                             std::vector<double>(v.value, v.value + v.size));
  return ckpt;
}

void LoadInto(Separator* model, const Checkpoint& ckpt) {
  if (!(ckpt.config == model->config()))
    throw CheckpointError("checkpoint config does not match model config");
  for (ParamView& v : model->Params()) {
    const std::vector<double>* data = ckpt.FindArray(v.name);
    if (data == nullptr)
      throw CheckpointError("checkpoint missing parameter: " + v.name);
    if (data->size() != v.size)
      throw CheckpointError("checkpoint size mismatch for: " + v.name);
    std::copy(data->begin(), data->end(), v.value);
  }
}

Separator RestoreSeparator(const Checkpoint& ckpt) {
  Separator model(ckpt.config, /*init_seed=*/0);
  LoadInto(&model, ckpt);
  return model;
}

}  // namespace sepkit
