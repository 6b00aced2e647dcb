#include "acrnn/checkpoint.hpp"

#include <bit>
#include <cstring>
#include <fstream>

#include "acrnn/errors.hpp"

namespace acrnn {

namespace {

constexpr char kMagic[4] = {'A', 'C', 'R', 'N'};
constexpr std::uint32_t kVersion = 1;

static_assert(sizeof(double) == 8);

template <typename T>
T to_little(T v) {
  if constexpr (std::endian::native == std::endian::little) return v;
  T out;
  auto* src = reinterpret_cast<const unsigned char*>(&v);
  auto* dst = reinterpret_cast<unsigned char*>(&out);
  for (std::size_t i = 0; i < sizeof(T); ++i) dst[i] = src[sizeof(T) - 1 - i];
  return out;
}

struct Writer {
  std::ofstream out;

  explicit Writer(const std::string& path) : out(path, std::ios::binary) {
    if (!out) throw IoError("cannot open " + path + " for writing");
  }

  template <typename T>
  void put(T v) {
    const T le = to_little(v);
    out.write(reinterpret_cast<const char*>(&le), sizeof(T));
  }

  void put_f64(double v) {
    const std::uint64_t bits = to_little(std::bit_cast<std::uint64_t>(v));
    out.write(reinterpret_cast<const char*>(&bits), sizeof(bits));
  }

  void put_tensor(const Tensor& t) {
    put<std::uint32_t>(static_cast<std::uint32_t>(t.rank()));
    for (std::size_t e : t.shape()) put<std::uint64_t>(e);
    for (std::size_t i = 0; i < t.size(); ++i) put_f64(t[i]);
  }
};

struct Reader {
  std::ifstream in;
  std::string path;

  explicit Reader(const std::string& p) : in(p, std::ios::binary), path(p) {
    if (!in) throw CheckpointError("cannot open " + p);
  }

  template <typename T>
  T get() {
    T v;
    in.read(reinterpret_cast<char*>(&v), sizeof(T));
    if (!in) throw CheckpointError(path + ": truncated file");
    return to_little(v);
  }

  double get_f64() { return std::bit_cast<double>(get<std::uint64_t>()); }

  Tensor get_tensor(const char* what) {
    const std::uint32_t rank = get<std::uint32_t>();
    if (rank > 8) throw CheckpointError(path + ": implausible tensor rank for " + what);
    std::vector<std::size_t> shape(rank);
    std::size_t count = 1;
    for (std::uint32_t i = 0; i < rank; ++i) {
      shape[i] = static_cast<std::size_t>(get<std::uint64_t>());
      if (shape[i] == 0 || shape[i] > (1ull << 32))
        throw CheckpointError(path + ": implausible extent for " + what);
      count *= shape[i];
    }
    std::vector<double> data(count);
    for (std::size_t i = 0; i < count; ++i) data[i] = get_f64();
    return Tensor(std::move(shape), std::move(data));
  }

  void expect_eof() {
    in.peek();
    if (!in.eof()) throw CheckpointError(path + ": trailing bytes after checkpoint data");
  }
};

}  // namespace

void save_checkpoint(const NetworkParams& params, const AdamState& adam, const std::string& path) {
  const auto tensors = params.tensors();
  if (adam.first_moment.size() != tensors.size() || adam.second_moment.size() != tensors.size())
    throw ShapeError("save_checkpoint: adam state does not match parameter list");

  Writer w(path);
  w.out.write(kMagic, 4);
  w.put<std::uint32_t>(kVersion);
  w.put<std::uint32_t>(static_cast<std::uint32_t>(params.config.input_dim));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(params.config.hidden_size));
  w.put<std::uint32_t>(static_cast<std::uint32_t>(params.config.num_layers));
  w.put<std::uint64_t>(adam.step_count);
  w.put_f64(adam.hyper.lr);
  w.put_f64(adam.hyper.beta1);
  w.put_f64(adam.hyper.beta2);
  w.put_f64(adam.hyper.epsilon);
  for (const Tensor* t : tensors) w.put_tensor(*t);
  for (const Tensor& t : adam.first_moment) w.put_tensor(t);
  for (const Tensor& t : adam.second_moment) w.put_tensor(t);
  if (!w.out) throw IoError("failed writing " + path);
}

Checkpoint load_checkpoint(const std::string& path) {
  Reader r(path);
  char magic[4];
  r.in.read(magic, 4);
  if (!r.in || std::memcmp(magic, kMagic, 4) != 0)
    throw CheckpointError(path + ": bad magic, not a checkpoint file");
  const std::uint32_t version = r.get<std::uint32_t>();
  if (version != kVersion)
    throw CheckpointError(path + ": unsupported format version " + std::to_string(version));

  Checkpoint ck;
  ck.params.config.input_dim = r.get<std::uint32_t>();
  ck.params.config.hidden_size = r.get<std::uint32_t>();
  ck.params.config.num_layers = r.get<std::uint32_t>();
  ck.params.config.validate();

  ck.adam.step_count = r.get<std::uint64_t>();
  ck.adam.hyper.lr = r.get_f64();
  ck.adam.hyper.beta1 = r.get_f64();
  ck.adam.hyper.beta2 = r.get_f64();
  ck.adam.hyper.epsilon = r.get_f64();

  ck.params.layers.resize(ck.params.config.num_layers);
  for (Tensor* t : ck.params.tensors()) *t = r.get_tensor("parameter");
  try {
    ck.params.validate();
  } catch (const Error& e) {
    throw CheckpointError(path + ": " + e.what());
  }

  const std::size_t count = ck.params.tensors().size();
  ck.adam.first_moment.reserve(count);
  ck.adam.second_moment.reserve(count);
  for (std::size_t i = 0; i < count; ++i) ck.adam.first_moment.push_back(r.get_tensor("adam m"));
  for (std::size_t i = 0; i < count; ++i) ck.adam.second_moment.push_back(r.get_tensor("adam s"));
  const auto tensors = ck.params.tensors();
  for (std::size_t i = 0; i < count; ++i)
    if (!ck.adam.first_moment[i].same_shape(*tensors[i]) ||
        !ck.adam.second_moment[i].same_shape(*tensors[i]))
      throw CheckpointError(path + ": adam moment shape mismatch at tensor " + std::to_string(i));
  r.expect_eof();
  return ck;
}

}  // namespace acrnn
