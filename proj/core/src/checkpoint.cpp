#include "densepath/checkpoint.hpp"

#include <bit>
#include <cstdint>
#include <fstream>
#include <stdexcept>

namespace densepath {

namespace {

constexpr char kMagic[4] = {'D', 'P', 'C', 'K'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::ostream& os, std::uint32_t v) {
  unsigned char b[4];
  for (int i = 0; i < 4; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(b), 4);
}

void put_u64(std::ostream& os, std::uint64_t v) {
  unsigned char b[8];
  for (int i = 0; i < 8; ++i) b[i] = static_cast<unsigned char>((v >> (8 * i)) & 0xff);
  os.write(reinterpret_cast<const char*>(b), 8);
}

void put_f64(std::ostream& os, double v) { put_u64(os, std::bit_cast<std::uint64_t>(v)); }

void put_string(std::ostream& os, const std::string& s) {
  put_u32(os, static_cast<std::uint32_t>(s.size()));
  os.write(s.data(), static_cast<std::streamsize>(s.size()));
}

std::uint32_t get_u32(std::istream& is) {
  unsigned char b[4];
  is.read(reinterpret_cast<char*>(b), 4);
  if (!is) throw std::runtime_error("checkpoint: truncated file");
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(b[i]) << (8 * i);
  return v;
}

std::uint64_t get_u64(std::istream& is) {
  unsigned char b[8];
  is.read(reinterpret_cast<char*>(b), 8);
  if (!is) throw std::runtime_error("checkpoint: truncated file");
  std::uint64_t v = 0;
  for (int i = 0; i < 8; ++i) v |= static_cast<std::uint64_t>(b[i]) << (8 * i);
  return v;
}

double get_f64(std::istream& is) { return std::bit_cast<double>(get_u64(is)); }

std::string get_string(std::istream& is) {
  std::uint32_t n = get_u32(is);
  std::string s(n, '\0');
  is.read(s.data(), static_cast<std::streamsize>(n));
  if (!is) throw std::runtime_error("checkpoint: truncated file");
  return s;
}

}  // namespace

void save_checkpoint(const std::string& path, const ParamStore& params, const AdamState* adam,
                     const std::map<std::string, std::string>& metadata) {
  std::ofstream os(path, std::ios::binary);
  if (!os) throw std::runtime_error("checkpoint: cannot open " + path + " for writing");
  os.write(kMagic, 4);
  put_u32(os, kVersion);

  put_u32(os, static_cast<std::uint32_t>(metadata.size()));
  for (const auto& [k, v] : metadata) {
    put_string(os, k);
    put_string(os, v);
  }

  put_u32(os, static_cast<std::uint32_t>(params.count()));
  for (int i = 0; i < params.count(); ++i) {
    const auto& e = params.entry(i);
    put_string(os, e.name);
    put_u32(os, static_cast<std::uint32_t>(e.shape.size()));
    for (int d : e.shape) put_u32(os, static_cast<std::uint32_t>(d));
    for (double v : params.values_of(i)) put_f64(os, v);
  }

  if (adam != nullptr) {
    if (adam->m.size() != params.size() || adam->v.size() != params.size()) {
      throw std::invalid_argument("checkpoint: optimizer state size does not match parameters");
    }
    os.put(1);
    put_u64(os, static_cast<std::uint64_t>(adam->step_count));
    put_f64(os, adam->cfg.lr);
    put_f64(os, adam->cfg.beta1);
    put_f64(os, adam->cfg.beta2);
    put_f64(os, adam->cfg.eps);
    for (double v : adam->m) put_f64(os, v);
    for (double v : adam->v) put_f64(os, v);
  } else {
    os.put(0);
  }
  if (!os) throw std::runtime_error("checkpoint: write to " + path + " failed");
}

LoadedCheckpoint load_checkpoint(const std::string& path) {
  std::ifstream is(path, std::ios::binary);
  if (!is) throw std::runtime_error("checkpoint: cannot open " + path);
  char magic[4];
  is.read(magic, 4);
  if (!is || std::string(magic, 4) != std::string(kMagic, 4)) {
    throw std::runtime_error("checkpoint: bad magic in " + path);
  }
  LoadedCheckpoint ck;
  ck.version = get_u32(is);
  if (ck.version != kVersion) {
    throw std::runtime_error("checkpoint: unsupported version " + std::to_string(ck.version));
  }

  const std::uint32_t n_meta = get_u32(is);
  for (std::uint32_t i = 0; i < n_meta; ++i) {
    std::string k = get_string(is);
    ck.metadata[k] = get_string(is);
  }

  const std::uint32_t n_params = get_u32(is);
  for (std::uint32_t i = 0; i < n_params; ++i) {
    std::string name = get_string(is);
    const std::uint32_t ndim = get_u32(is);
    Shape shape(ndim);
    for (auto& d : shape) d = static_cast<int>(get_u32(is));
    int idx = ck.params.add(name, shape);
    for (double& v : ck.params.values_of(idx)) v = get_f64(is);
  }

  const int has_adam = is.get();
  if (has_adam == 1) {
    AdamState st;
    st.step_count = static_cast<std::int64_t>(get_u64(is));
    st.cfg.lr = get_f64(is);
    st.cfg.beta1 = get_f64(is);
    st.cfg.beta2 = get_f64(is);
    st.cfg.eps = get_f64(is);
    st.m.resize(ck.params.size());
    st.v.resize(ck.params.size());
    for (double& v : st.m) v = get_f64(is);
    for (double& v : st.v) v = get_f64(is);
    ck.adam = std::move(st);
  } else if (has_adam != 0) {
    throw std::runtime_error("checkpoint: corrupt optimizer flag");
  }
  return ck;
}

}  // namespace densepath
