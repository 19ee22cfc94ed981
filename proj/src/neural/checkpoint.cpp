// SPDX-License-Identifier: Apache-2.0
#include "semcomm/neural/checkpoint.hpp"

#include <cstring>
#include <fstream>
#include <sstream>

#include "semcomm/rng.hpp"

namespace semcomm::neural {

namespace {

template <typename T>
const char* dtype_name() {
  return sizeof(T) == 4 ? "f32" : "f64";
}

}  // namespace

template <typename T>
void save_checkpoint(const TransceiverParams<T>& params, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(Errc::io, "cannot open checkpoint for writing: " + path);
  const auto tensors = params.parameters();
  std::size_t payload_bytes = 0;
  for (const auto* t : tensors) payload_bytes += t->size() * sizeof(T);

  out << "semcomm-checkpoint v1\n";
  out << "dtype " << dtype_name<T>() << '\n';
  const auto& c = params.config;
  out << "config " << c.vocab_size << ' ' << c.embedding_dim << ' ' << c.attention_dim << ' '
      << c.n_heads << ' ' << c.symbols_per_word << ' ' << c.max_len << ' '
      << (c.integration_dense ? 1 : 0) << '\n';
  out << "params " << tensors.size() << '\n';
  for (const auto* t : tensors)
    out << "param " << t->name() << ' ' << t->rows() << ' ' << t->cols() << '\n';
  out << "payload " << payload_bytes << '\n';

  std::uint64_t checksum = 14695981039346656037ULL;
  for (const auto* t : tensors) {
    const auto& v = t->values();
    const auto* bytes = reinterpret_cast<const char*>(v.data());
    const std::size_t n = v.size() * sizeof(T);
    out.write(bytes, static_cast<std::streamsize>(n));
    checksum = fnv1a64(bytes, n, checksum);
  }
  out.write(reinterpret_cast<const char*>(&checksum), sizeof checksum);
  if (!out) throw Error(Errc::io, "checkpoint write failed: " + path);
}

std::string checkpoint_dtype(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open checkpoint: " + path);
  std::string line;
  if (!std::getline(in, line) || line != "semcomm-checkpoint v1")
    throw Error(Errc::format, "not a semcomm checkpoint: " + path);
  if (!std::getline(in, line) || line.rfind("dtype ", 0) != 0)
    throw Error(Errc::format, "checkpoint missing dtype line");
  return line.substr(6);
}

template <typename T>
TransceiverParams<T> load_checkpoint(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::io, "cannot open checkpoint: " + path);
  std::string line;
  auto expect_line = [&](const char* what) {
    if (!std::getline(in, line)) throw Error(Errc::format, std::string("truncated checkpoint header: ") + what);
    return line;
  };
  if (expect_line("magic") != "semcomm-checkpoint v1")
    throw Error(Errc::format, "not a semcomm checkpoint: " + path);
  if (expect_line("dtype") != std::string("dtype ") + dtype_name<T>())
    throw Error(Errc::format, "checkpoint dtype mismatch");

  ModelConfig cfg;
  {
    std::istringstream ss(expect_line("config"));
    std::string tag;
    int dense = 0;
    ss >> tag >> cfg.vocab_size >> cfg.embedding_dim >> cfg.attention_dim >> cfg.n_heads >>
        cfg.symbols_per_word >> cfg.max_len >> dense;
    if (tag != "config" || !ss) throw Error(Errc::format, "bad checkpoint config line");
    cfg.integration_dense = dense != 0;
  }
  std::size_t n_params = 0;
  {
    std::istringstream ss(expect_line("params"));
    std::string tag;
    ss >> tag >> n_params;
    if (tag != "params" || !ss) throw Error(Errc::format, "bad checkpoint params line");
  }
  struct Entry {
    std::string name;
    std::size_t rows, cols;
  };
  std::vector<Entry> entries(n_params);
  for (auto& e : entries) {
    std::istringstream ss(expect_line("param"));
    std::string tag;
    ss >> tag >> e.name >> e.rows >> e.cols;
    if (tag != "param" || !ss) throw Error(Errc::format, "bad checkpoint param line");
  }
  std::size_t payload_bytes = 0;
  {
    std::istringstream ss(expect_line("payload"));
    std::string tag;
    ss >> tag >> payload_bytes;
    if (tag != "payload" || !ss) throw Error(Errc::format, "bad checkpoint payload line");
  }

  // Fresh parameter set with the stored config; values are overwritten.
  TransceiverParams<T> params = TransceiverParams<T>::init(cfg, 0);
  auto tensors = params.parameters();
  if (tensors.size() != entries.size())
    throw Error(Errc::format, "checkpoint parameter count mismatch");
  std::size_t expected_bytes = 0;
  for (std::size_t i = 0; i < tensors.size(); ++i) {
    if (tensors[i]->name() != entries[i].name || tensors[i]->rows() != entries[i].rows ||
        tensors[i]->cols() != entries[i].cols)
      throw Error(Errc::format, "checkpoint parameter layout mismatch at " + entries[i].name);
    expected_bytes += tensors[i]->size() * sizeof(T);
  }
  if (expected_bytes != payload_bytes)
    throw Error(Errc::format, "checkpoint payload size mismatch");

  std::uint64_t checksum = 14695981039346656037ULL;
  for (auto* t : tensors) {
    auto& v = t->mutable_values();
    const std::size_t n = v.size() * sizeof(T);
    in.read(reinterpret_cast<char*>(v.data()), static_cast<std::streamsize>(n));
    if (!in) throw Error(Errc::format, "truncated checkpoint payload");
    checksum = fnv1a64(v.data(), n, checksum);
  }
  std::uint64_t stored = 0;
  in.read(reinterpret_cast<char*>(&stored), sizeof stored);
  if (!in) throw Error(Errc::format, "checkpoint missing checksum");
  if (stored != checksum) throw Error(Errc::format, "checkpoint checksum mismatch");
  return params;
}

template void save_checkpoint(const TransceiverParams<float>&, const std::string&);
template void save_checkpoint(const TransceiverParams<double>&, const std::string&);
template TransceiverParams<float> load_checkpoint<float>(const std::string&);
template TransceiverParams<double> load_checkpoint<double>(const std::string&);

}  // namespace semcomm::neural
