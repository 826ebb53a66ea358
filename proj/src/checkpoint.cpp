// SPDX-License-Identifier: Apache-2.0
#include "semstyle/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <cstdio>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unistd.h>

namespace semstyle::checkpoint {

namespace {

using Json = nlohmann::ordered_json;

void put_u64(std::string& out, std::uint64_t v) {
  for (int i = 0; i < 8; ++i) out.push_back(static_cast<char>((v >> (8 * i)) & 0xff));
}

std::uint64_t get_u64(std::string_view in) {
  std::uint64_t v = 0;
  for (int i = 7; i >= 0; --i) v = (v << 8) | static_cast<unsigned char>(in[static_cast<std::size_t>(i)]);
  return v;
}

void put_f32(std::string& out, float f) {
  auto u = std::bit_cast<std::uint32_t>(f);
  for (int i = 0; i < 4; ++i) out.push_back(static_cast<char>((u >> (8 * i)) & 0xff));
}

float get_f32(const char* p) {
  std::uint32_t u = 0;
  for (int i = 3; i >= 0; --i) u = (u << 8) | static_cast<unsigned char>(p[i]);
  return std::bit_cast<float>(u);
}

[[noreturn]] void fail(ErrorKind kind, const std::string& origin, const std::string& what) {
  throw CheckpointError(kind, origin + ": " + what);
}

}  // namespace

std::string_view error_name(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::kIo: return "io-error";
    case ErrorKind::kBadMagic: return "bad-magic";
    case ErrorKind::kVersionMismatch: return "version-mismatch";
    case ErrorKind::kManifest: return "bad-manifest";
    case ErrorKind::kPayloadLength: return "payload-length-mismatch";
    case ErrorKind::kIncompatible: return "incompatible-model";
  }
  return "unknown";
}

CheckpointError::CheckpointError(ErrorKind kind, const std::string& message)
    : DataError("checkpoint " + std::string(error_name(kind)) + ": " + message), kind_(kind) {}

const Vocabulary& Checkpoint::vocabulary(std::string_view name) const {
  for (const auto& [n, v] : vocabularies)
    if (n == name) return v;
  throw CheckpointError(ErrorKind::kIncompatible, "no vocabulary named '" + std::string(name) + "'");
}

std::string serialize(const Checkpoint& ckpt) {
  Json manifest;
  manifest["format_version"] = kFormatVersion;
  manifest["kind"] = ckpt.kind;
  manifest["config"] = ckpt.config;
  Json vocabs = Json::object();
  for (const auto& [name, v] : ckpt.vocabularies) vocabs[name] = v.tokens();
  manifest["vocabularies"] = std::move(vocabs);
  Json tensors = Json::array();
  std::uint64_t total = 0;
  for (const auto& t : ckpt.tensors) {
    if (nn::Tensor<float>::element_count(t.shape) != t.values.size())
      throw ShapeError("tensor '" + t.name + "' values disagree with its shape");
    tensors.push_back(Json{{"name", t.name}, {"shape", t.shape}});
    total += t.values.size();
  }
  manifest["tensors"] = std::move(tensors);
  manifest["payload_values"] = total;

  const std::string text = manifest.dump(1) + "\n";
  std::string out(kMagic);
  put_u64(out, text.size());
  out += text;
  out.reserve(out.size() + 4 * total);
  for (const auto& t : ckpt.tensors)
    for (float f : t.values) put_f32(out, f);
  return out;
}

Checkpoint deserialize(std::string_view bytes, const std::string& origin) {
  const std::size_t head = kMagic.size() + 8;
  const std::string_view family = kMagic.substr(0, kMagic.size() - 1);
  if (bytes.size() < family.size() || bytes.substr(0, family.size()) != family)
    fail(ErrorKind::kBadMagic, origin, "expected magic '" + std::string(kMagic) + "'");
  if (bytes.size() < kMagic.size() || bytes.substr(0, kMagic.size()) != kMagic)
    fail(ErrorKind::kVersionMismatch, origin, "unsupported format revision, expected '" + std::string(kMagic) + "'");
  if (bytes.size() < head) fail(ErrorKind::kPayloadLength, origin, "file ends inside the header");
  const std::uint64_t mlen = get_u64(bytes.substr(kMagic.size(), 8));
  if (mlen > bytes.size() - head) fail(ErrorKind::kPayloadLength, origin, "file ends inside the manifest");

  Json manifest;
  try {
    manifest = Json::parse(bytes.substr(head, mlen));
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kManifest, origin, std::string("manifest is not valid JSON: ") + e.what());
  }

  Checkpoint ckpt;
  std::uint64_t declared = 0;
  try {
    if (manifest.at("format_version").get<int>() != kFormatVersion)
      fail(ErrorKind::kVersionMismatch, origin,
           "manifest version " + manifest.at("format_version").dump() + ", expected " + std::to_string(kFormatVersion));
    ckpt.kind = manifest.at("kind").get<std::string>();
    ckpt.config = manifest.at("config");
    for (const auto& [name, tokens] : manifest.at("vocabularies").items())
      ckpt.vocabularies.emplace_back(name, Vocabulary::from_tokens(tokens.get<std::vector<std::string>>()));
    for (const auto& t : manifest.at("tensors"))
      ckpt.tensors.push_back({t.at("name").get<std::string>(), t.at("shape").get<std::vector<std::size_t>>(), {}});
    declared = manifest.at("payload_values").get<std::uint64_t>();
  } catch (const nlohmann::json::exception& e) {
    fail(ErrorKind::kManifest, origin, std::string("malformed manifest: ") + e.what());
  } catch (const CheckpointError&) {
    throw;
  } catch (const DataError& e) {
    fail(ErrorKind::kManifest, origin, e.what());
  }

  std::uint64_t total = 0;
  for (const auto& t : ckpt.tensors) total += nn::Tensor<float>::element_count(t.shape);
  if (total != declared)
    fail(ErrorKind::kManifest, origin,
         "tensor shapes sum to " + std::to_string(total) + " values, manifest declares " + std::to_string(declared));
  const std::uint64_t have = bytes.size() - head - mlen;
  if (have != 4 * total)
    fail(ErrorKind::kPayloadLength, origin,
         "payload holds " + std::to_string(have) + " bytes, manifest requires " + std::to_string(4 * total));

  const char* p = bytes.data() + head + mlen;
  for (auto& t : ckpt.tensors) {
    t.values.resize(nn::Tensor<float>::element_count(t.shape));
    for (auto& v : t.values) {
      v = get_f32(p);
      p += 4;
    }
  }
  return ckpt;
}

void save(const Checkpoint& ckpt, const std::string& path) {
  const std::string bytes = serialize(ckpt);
  const std::string tmp = path + ".tmp" + std::to_string(::getpid());
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) fail(ErrorKind::kIo, path, "cannot open for writing");
    out.write(bytes.data(), static_cast<std::streamsize>(bytes.size()));
    out.flush();
    if (!out) {
      std::remove(tmp.c_str());
      fail(ErrorKind::kIo, path, "write failed");
    }
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) {
    std::remove(tmp.c_str());
    fail(ErrorKind::kIo, path, "rename failed: " + ec.message());
  }
}

Checkpoint load(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) fail(ErrorKind::kIo, path, "cannot open for reading");
  std::ostringstream ss;
  ss << in.rdbuf();
  return deserialize(ss.str(), path);
}

}  // namespace semstyle::checkpoint
