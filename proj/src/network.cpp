#include "acrnn/network.hpp"

#include <cmath>

#include "acrnn/errors.hpp"
#include "acrnn/kernels.hpp"

namespace acrnn {

void NetworkConfig::validate() const {
  if (input_dim == 0 || hidden_size == 0 || num_layers == 0)
    throw ConfigError("network config: input_dim, hidden_size and num_layers must be positive");
}

std::vector<Tensor*> NetworkParams::tensors() {
  std::vector<Tensor*> out;
  out.reserve(layers.size() * 8 + 2);
  for (LstmLayerParams& l : layers) {
    out.push_back(&l.w_input);
    out.push_back(&l.b_input);
    out.push_back(&l.w_forget);
    out.push_back(&l.b_forget);
    out.push_back(&l.w_output);
    out.push_back(&l.b_output);
    out.push_back(&l.w_candidate);
    out.push_back(&l.b_candidate);
  }
  out.push_back(&w_proj);
  out.push_back(&b_proj);
  return out;
}

std::vector<const Tensor*> NetworkParams::tensors() const {
  auto mutable_this = const_cast<NetworkParams*>(this);
  std::vector<Tensor*> ptrs = mutable_this->tensors();
  return {ptrs.begin(), ptrs.end()};
}

void NetworkParams::validate() const {
  config.validate();
  if (layers.size() != config.num_layers)
    throw ShapeError("network params: expected " + std::to_string(config.num_layers) +
                     " layers, got " + std::to_string(layers.size()));
  for (std::size_t l = 0; l < layers.size(); ++l) {
    const std::size_t in = (l == 0 ? config.input_dim : config.hidden_size) + config.hidden_size;
    for (const Tensor* w :
         {&layers[l].w_input, &layers[l].w_forget, &layers[l].w_output, &layers[l].w_candidate})
      if (w->shape() != std::vector<std::size_t>{in, config.hidden_size})
        throw ShapeError("network params: layer " + std::to_string(l) + " weight shape " +
                         w->shape_string());
    for (const Tensor* b :
         {&layers[l].b_input, &layers[l].b_forget, &layers[l].b_output, &layers[l].b_candidate})
      if (b->shape() != std::vector<std::size_t>{config.hidden_size})
        throw ShapeError("network params: layer " + std::to_string(l) + " bias shape " +
                         b->shape_string());
  }
  if (w_proj.shape() != std::vector<std::size_t>{config.hidden_size, config.input_dim} ||
      b_proj.shape() != std::vector<std::size_t>{config.input_dim})
    throw ShapeError("network params: readout shape " + w_proj.shape_string() + ", " +
                     b_proj.shape_string());
  for (const Tensor* t : tensors())
    if (!t->all_finite()) throw NonFiniteError("network params: non-finite values");
}

NetworkMemory NetworkMemory::zeros(const NetworkConfig& config, std::size_t batch) {
  NetworkMemory m;
  m.hidden.reserve(config.num_layers);
  m.cell.reserve(config.num_layers);
  for (std::size_t l = 0; l < config.num_layers; ++l) {
    m.hidden.emplace_back(Tensor::zeros({batch, config.hidden_size}));
    m.cell.emplace_back(Tensor::zeros({batch, config.hidden_size}));
  }
  return m;
}

NetworkParams init_params(const NetworkConfig& config, Rng& rng) {
  config.validate();
  NetworkParams params;
  params.config = config;
  const std::size_t h = config.hidden_size;

  auto fill_uniform = [&rng](Tensor& t, double bound) {
    for (std::size_t i = 0; i < t.size(); ++i) t[i] = rng.uniform(-bound, bound);
  };

  params.layers.resize(config.num_layers);
  for (std::size_t l = 0; l < config.num_layers; ++l) {
    const std::size_t in = (l == 0 ? config.input_dim : h) + h;
    const double bound = std::sqrt(6.0 / static_cast<double>(in + h));
    LstmLayerParams& layer = params.layers[l];
    for (Tensor* w : {&layer.w_input, &layer.w_forget, &layer.w_output, &layer.w_candidate}) {
      *w = Tensor({in, h});
      fill_uniform(*w, bound);
    }
    layer.b_input = Tensor::zeros({h});
    layer.b_forget = Tensor::full({h}, 1.0);
    layer.b_output = Tensor::zeros({h});
    layer.b_candidate = Tensor::zeros({h});
  }
  const double proj_bound = std::sqrt(6.0 / static_cast<double>(h + config.input_dim));
  params.w_proj = Tensor({h, config.input_dim});
  fill_uniform(params.w_proj, proj_bound);
  params.b_proj = Tensor::zeros({config.input_dim});
  return params;
}

namespace {

void require_rows_match(const Tensor& a, const Tensor& b, const char* what) {
  if (a.rows() != b.rows()) throw ShapeError(std::string(what) + ": batch mismatch " + shape_pair(a, b));
}

// gates = act(concat(x, h) * W + b)
void gate(const Tensor& z, const Tensor& w, const Tensor& b, bool use_tanh, Tensor& out) {
  if (z.cols() != w.rows())
    throw ShapeError("lstm gate: input width " + z.shape_string() + " vs weight " +
                     w.shape_string());
  out = Tensor({z.rows(), w.cols()});
  Tensor pre({z.rows(), w.cols()});
  kernels::matmul(z.data(), w.data(), pre.data(), z.rows(), z.cols(), w.cols());
  kernels::add_rowvec(pre.data(), b.data(), pre.data(), pre.rows(), pre.cols());
  if (use_tanh)
    kernels::tanh(pre.data(), out.data(), pre.size());
  else
    kernels::sigmoid(pre.data(), out.data(), pre.size());
}

}  // namespace

void lstm_cell_step(const Tensor& x, const Tensor& h, const Tensor& c,
                    const LstmLayerParams& params, Tensor& h_out, Tensor& c_out) {
  require_rows_match(x, h, "lstm_cell_step");
  require_rows_match(x, c, "lstm_cell_step");
  const std::size_t rows = x.rows(), xc = x.cols(), hc = h.cols();

  Tensor z({rows, xc + hc});
  for (std::size_t r = 0; r < rows; ++r) {
    double* dst = z.data() + r * (xc + hc);
    const double* xs = x.data() + r * xc;
    const double* hs = h.data() + r * hc;
    for (std::size_t i = 0; i < xc; ++i) dst[i] = xs[i];
    for (std::size_t i = 0; i < hc; ++i) dst[xc + i] = hs[i];
  }

  Tensor gi, gf, go, gg;
  gate(z, params.w_input, params.b_input, false, gi);
  gate(z, params.w_forget, params.b_forget, false, gf);
  gate(z, params.w_output, params.b_output, false, go);
  gate(z, params.w_candidate, params.b_candidate, true, gg);

  // Same kernel sequence as the tape path so the two stay bit-identical.
  Tensor keep({rows, hc}), write({rows, hc});
  kernels::mul(gf.data(), c.data(), keep.data(), keep.size());
  kernels::mul(gi.data(), gg.data(), write.data(), write.size());
  c_out = Tensor({rows, hc});
  kernels::add(keep.data(), write.data(), c_out.data(), c_out.size());

  h_out = Tensor({rows, hc});
  kernels::tanh(c_out.data(), h_out.data(), h_out.size());
  kernels::mul(go.data(), h_out.data(), h_out.data(), h_out.size());
}

Tensor network_step(const NetworkParams& params, NetworkMemory& memory, const Tensor& input) {
  if (input.cols() != params.config.input_dim)
    throw ShapeError("network_step: input width " + input.shape_string() + ", expected D=" +
                     std::to_string(params.config.input_dim));
  if (memory.hidden.size() != params.config.num_layers)
    throw ShapeError("network_step: memory layer count mismatch");

  Tensor x = input;
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    Tensor h_next, c_next;
    lstm_cell_step(x, memory.hidden[l], memory.cell[l], params.layers[l], h_next, c_next);
    memory.hidden[l] = std::move(h_next);
    memory.cell[l] = std::move(c_next);
    x = memory.hidden[l];
  }

  Tensor out({x.rows(), params.config.input_dim});
  kernels::matmul(x.data(), params.w_proj.data(), out.data(), x.rows(), x.cols(),
                  params.w_proj.cols());
  kernels::add_rowvec(out.data(), params.b_proj.data(), out.data(), out.rows(), out.cols());
  return out;
}

std::vector<double> network_step(const NetworkParams& params, NetworkMemory& memory,
                                 const std::vector<double>& frame) {
  Tensor out = network_step(params, memory, Tensor::row_vector(frame));
  return {out.data(), out.data() + out.size()};
}

std::vector<Var> ParamVars::ordered() const {
  std::vector<Var> out;
  out.reserve(layers.size() * 8 + 2);
  for (const LayerVars& l : layers) {
    out.push_back(l.w_input);
    out.push_back(l.b_input);
    out.push_back(l.w_forget);
    out.push_back(l.b_forget);
    out.push_back(l.w_output);
    out.push_back(l.b_output);
    out.push_back(l.w_candidate);
    out.push_back(l.b_candidate);
  }
  out.push_back(w_proj);
  out.push_back(b_proj);
  return out;
}

ParamVars insert_params(Tape& tape, const NetworkParams& params) {
  ParamVars vars;
  vars.layers.reserve(params.layers.size());
  for (const LstmLayerParams& l : params.layers) {
    LayerVars lv;
    lv.w_input = tape.leaf(l.w_input);
    lv.b_input = tape.leaf(l.b_input);
    lv.w_forget = tape.leaf(l.w_forget);
    lv.b_forget = tape.leaf(l.b_forget);
    lv.w_output = tape.leaf(l.w_output);
    lv.b_output = tape.leaf(l.b_output);
    lv.w_candidate = tape.leaf(l.w_candidate);
    lv.b_candidate = tape.leaf(l.b_candidate);
    vars.layers.push_back(lv);
  }
  vars.w_proj = tape.leaf(params.w_proj);
  vars.b_proj = tape.leaf(params.b_proj);
  return vars;
}

MemoryVars insert_zero_memory(Tape& tape, const NetworkConfig& config, std::size_t batch) {
  MemoryVars m;
  m.hidden.reserve(config.num_layers);
  m.cell.reserve(config.num_layers);
  for (std::size_t l = 0; l < config.num_layers; ++l) {
    m.hidden.push_back(tape.leaf(Tensor::zeros({batch, config.hidden_size})));
    m.cell.push_back(tape.leaf(Tensor::zeros({batch, config.hidden_size})));
  }
  return m;
}

Var network_step_tape(Tape& tape, const NetworkConfig& config, const ParamVars& params,
                      MemoryVars& memory, Var input) {
  Var x = input;
  for (std::size_t l = 0; l < params.layers.size(); ++l) {
    const LayerVars& p = params.layers[l];
    Var z = tape.concat(x, memory.hidden[l]);
    Var gi = tape.sigmoid(tape.add_rowvec(tape.matmul(z, p.w_input), p.b_input));
    Var gf = tape.sigmoid(tape.add_rowvec(tape.matmul(z, p.w_forget), p.b_forget));
    Var go = tape.sigmoid(tape.add_rowvec(tape.matmul(z, p.w_output), p.b_output));
    Var gg = tape.tanh(tape.add_rowvec(tape.matmul(z, p.w_candidate), p.b_candidate));
    Var c_next = tape.add(tape.mul(gf, memory.cell[l]), tape.mul(gi, gg));
    Var h_next = tape.mul(go, tape.tanh(c_next));
    memory.cell[l] = c_next;
    memory.hidden[l] = h_next;
    x = h_next;
  }
  (void)config;
  return tape.add_rowvec(tape.matmul(x, params.w_proj), params.b_proj);
}

}  // namespace acrnn
