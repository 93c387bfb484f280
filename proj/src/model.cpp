#include "rrs/model.hpp"

#include <algorithm>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "rrs/errors.hpp"
#include "rrs/rng.hpp"

namespace rrs {

namespace {

template <class T>
T activate(Activation a, const T& z) {
  return a == Activation::Tanh ? tanh_fn(z) : softplus_fn(z);
}

template <class T>
T activate_deriv(Activation a, const T& z) {
  if (a == Activation::Tanh) {
    T t = tanh_fn(z);
    return T(1.0) - t * t;
  }
  return sigmoid_fn(z);
}

template <class T>
std::vector<T> dense(const DenseLayer& L, const std::vector<T>& x) {
  std::vector<T> y(L.out);
  for (std::size_t o = 0; o < L.out; ++o) {
    T acc = T(L.bias[o]);
    const double* w = &L.weight[o * L.in];
    for (std::size_t i = 0; i < L.in; ++i) acc += T(w[i]) * x[i];
    y[o] = acc;
  }
  return y;
}

std::size_t conv_out_h(const TinyModel& m) { return m.input.height - m.kernel + 1; }
std::size_t conv_out_w(const TinyModel& m) { return m.input.width - m.kernel + 1; }

template <class T>
std::vector<T> conv_pre(const TinyModel& m, const std::vector<T>& x) {
  const std::size_t oh = conv_out_h(m), ow = conv_out_w(m), F = m.filters, K = m.kernel;
  const std::size_t C = m.input.channels, W = m.input.width;
  std::vector<T> z(oh * ow * F);
  for (std::size_t oi = 0; oi < oh; ++oi)
    for (std::size_t oj = 0; oj < ow; ++oj)
      for (std::size_t f = 0; f < F; ++f) {
        T acc = T(m.conv_bias[f]);
        for (std::size_t di = 0; di < K; ++di)
          for (std::size_t dj = 0; dj < K; ++dj)
            for (std::size_t ch = 0; ch < C; ++ch)
              acc += T(m.conv_weight[((f * K + di) * K + dj) * C + ch]) *
                     x[((oi + di) * W + (oj + dj)) * C + ch];
        z[(oi * ow + oj) * F + f] = acc;
      }
  return z;
}

template <class T>
std::vector<T> forward_t(const TinyModel& m, const std::vector<T>& x) {
  switch (m.architecture) {
    case Architecture::Linear:
      return dense(m.layers[0], x);
    case Architecture::Quadratic: {
      const std::size_t n = m.input_size();
      std::vector<T> s(m.n_classes);
      for (std::size_t c = 0; c < m.n_classes; ++c) {
        T acc = T(0.0);
        for (std::size_t i = 0; i < n; ++i) {
          T row = T(0.0);
          for (std::size_t j = 0; j < n; ++j) row += T(m.quad[c][i * n + j]) * x[j];
          acc += x[i] * row;
        }
        s[c] = acc;
      }
      return s;
    }
    case Architecture::Mlp: {
      std::vector<T> h = x;
      for (std::size_t l = 0; l + 1 < m.layers.size(); ++l) {
        h = dense(m.layers[l], h);
        for (auto& v : h) v = activate(m.activation, v);
      }
      return dense(m.layers.back(), h);
    }
    case Architecture::Conv: {
      std::vector<T> h = conv_pre(m, x);
      for (auto& v : h) v = activate(m.activation, v);
      return dense(m.layers.back(), h);
    }
  }
  return {};
}

template <class T>
std::vector<T> gradient_t(const TinyModel& m, const std::vector<T>& x, int label) {
  const std::size_t n = m.input_size();
  std::vector<T> g(n);
  switch (m.architecture) {
    case Architecture::Linear: {
      const auto& L = m.layers[0];
      for (std::size_t i = 0; i < n; ++i) g[i] = T(L.weight[label * L.in + i]);
      return g;
    }
    case Architecture::Quadratic: {
      const auto& A = m.quad[label];
      for (std::size_t i = 0; i < n; ++i) {
        T acc = T(0.0);
        for (std::size_t j = 0; j < n; ++j) acc += T(A[i * n + j] + A[j * n + i]) * x[j];
        g[i] = acc;
      }
      return g;
    }
    case Architecture::Mlp: {
      const std::size_t hidden = m.layers.size() - 1;
      std::vector<std::vector<T>> pre(hidden);
      std::vector<T> h = x;
      for (std::size_t l = 0; l < hidden; ++l) {
        pre[l] = dense(m.layers[l], h);
        h = pre[l];
        for (auto& v : h) v = activate(m.activation, v);
      }
      const auto& R = m.layers.back();
      std::vector<T> delta(R.in);
      for (std::size_t i = 0; i < R.in; ++i) delta[i] = T(R.weight[label * R.in + i]);
      for (std::size_t l = hidden; l-- > 0;) {
        const auto& L = m.layers[l];
        std::vector<T> dz(L.out);
        for (std::size_t o = 0; o < L.out; ++o) dz[o] = delta[o] * activate_deriv(m.activation, pre[l][o]);
        std::vector<T> prev(L.in, T(0.0));
        for (std::size_t o = 0; o < L.out; ++o) {
          const double* w = &L.weight[o * L.in];
          for (std::size_t i = 0; i < L.in; ++i) prev[i] += T(w[i]) * dz[o];
        }
        delta = std::move(prev);
      }
      return delta;
    }
    case Architecture::Conv: {
      const std::size_t oh = conv_out_h(m), ow = conv_out_w(m), F = m.filters, K = m.kernel;
      const std::size_t C = m.input.channels, W = m.input.width;
      std::vector<T> z = conv_pre(m, x);
      const auto& R = m.layers.back();
      std::fill(g.begin(), g.end(), T(0.0));
      for (std::size_t oi = 0; oi < oh; ++oi)
        for (std::size_t oj = 0; oj < ow; ++oj)
          for (std::size_t f = 0; f < F; ++f) {
            std::size_t o = (oi * ow + oj) * F + f;
            T dz = T(R.weight[label * R.in + o]) * activate_deriv(m.activation, z[o]);
            for (std::size_t di = 0; di < K; ++di)
              for (std::size_t dj = 0; dj < K; ++dj)
                for (std::size_t ch = 0; ch < C; ++ch)
                  g[((oi + di) * W + (oj + dj)) * C + ch] +=
                      T(m.conv_weight[((f * K + di) * K + dj) * C + ch]) * dz;
          }
      return g;
    }
  }
  return g;
}

DenseLayer random_layer(std::size_t in, std::size_t out, Rng& rng, double scale) {
  DenseLayer L;
  L.in = in;
  L.out = out;
  std::normal_distribution<double> nd(0.0, scale / std::sqrt(static_cast<double>(in)));
  L.weight.resize(in * out);
  for (auto& w : L.weight) w = nd(rng);
  L.bias.resize(out);
  for (auto& b : L.bias) b = 0.1 * nd(rng);
  return L;
}

void check_input(const TinyModel& m, std::size_t size) {
  if (size != m.input_size())
    throw DimMismatch("model expects " + std::to_string(m.input_size()) + " inputs, got " +
                      std::to_string(size));
}

void check_label(const TinyModel& m, int label) {
  if (label < 0 || static_cast<std::size_t>(label) >= m.n_classes)
    throw DomainError("label " + std::to_string(label) + " out of range");
}

}  // namespace

void TinyModel::validate() const {
  const std::size_t n = input_size();
  if (n == 0) throw ParameterError("model input dims must be positive");
  if (n_classes < 1) throw ParameterError("model needs at least one class");
  auto check_layer = [](const DenseLayer& L) {
    if (L.weight.size() != L.in * L.out || L.bias.size() != L.out)
      throw ParameterError("dense layer has inconsistent shapes");
    for (double w : L.weight)
      if (!std::isfinite(w)) throw ParameterError("non-finite weight");
  };
  switch (architecture) {
    case Architecture::Linear:
      if (layers.size() != 1 || layers[0].in != n || layers[0].out != n_classes)
        throw ParameterError("linear model shape mismatch");
      check_layer(layers[0]);
      break;
    case Architecture::Mlp: {
      if (layers.size() < 2) throw ParameterError("mlp needs a hidden layer");
      std::size_t in = n;
      for (const auto& L : layers) {
        if (L.in != in) throw ParameterError("mlp layer chain mismatch");
        check_layer(L);
        in = L.out;
      }
      if (in != n_classes) throw ParameterError("mlp readout must produce n_classes");
      break;
    }
    case Architecture::Conv:
      if (kernel < 1 || kernel > input.height || kernel > input.width || filters < 1)
        throw ParameterError("conv kernel does not fit the input");
      if (conv_weight.size() != filters * kernel * kernel * input.channels ||
          conv_bias.size() != filters)
        throw ParameterError("conv weights have inconsistent shapes");
      if (layers.size() != 1 ||
          layers[0].in != (input.height - kernel + 1) * (input.width - kernel + 1) * filters ||
          layers[0].out != n_classes)
        throw ParameterError("conv readout shape mismatch");
      check_layer(layers[0]);
      break;
    case Architecture::Quadratic:
      if (quad.size() != n_classes) throw ParameterError("quadratic model needs one matrix per class");
      for (const auto& A : quad)
        if (A.size() != n * n) throw ParameterError("quadratic matrix must be n x n");
      break;
  }
}

TinyModel TinyModel::linear(Dims input, std::size_t n_classes, std::uint64_t seed, double scale) {
  TinyModel m;
  m.architecture = Architecture::Linear;
  m.input = input;
  m.n_classes = n_classes;
  Rng rng = make_rng(seed, 0);
  m.layers.push_back(random_layer(input.size(), n_classes, rng, scale));
  m.validate();
  return m;
}

TinyModel TinyModel::mlp(Dims input, std::size_t n_classes, const std::vector<std::size_t>& hidden,
                         Activation act, std::uint64_t seed, double scale) {
  if (hidden.empty()) throw ParameterError("mlp needs at least one hidden layer");
  TinyModel m;
  m.architecture = Architecture::Mlp;
  m.activation = act;
  m.input = input;
  m.n_classes = n_classes;
  Rng rng = make_rng(seed, 0);
  std::size_t in = input.size();
  for (std::size_t h : hidden) {
    m.layers.push_back(random_layer(in, h, rng, scale));
    in = h;
  }
  m.layers.push_back(random_layer(in, n_classes, rng, scale));
  m.validate();
  return m;
}

TinyModel TinyModel::conv(Dims input, std::size_t n_classes, std::size_t filters,
                          std::size_t kernel, Activation act, std::uint64_t seed, double scale) {
  TinyModel m;
  m.architecture = Architecture::Conv;
  m.activation = act;
  m.input = input;
  m.n_classes = n_classes;
  m.filters = filters;
  m.kernel = kernel;
  if (kernel < 1 || kernel > input.height || kernel > input.width)
    throw ParameterError("conv kernel does not fit the input");
  Rng rng = make_rng(seed, 0);
  std::normal_distribution<double> nd(
      0.0, scale / std::sqrt(static_cast<double>(kernel * kernel * input.channels)));
  m.conv_weight.resize(filters * kernel * kernel * input.channels);
  for (auto& w : m.conv_weight) w = nd(rng);
  m.conv_bias.resize(filters);
  for (auto& b : m.conv_bias) b = 0.1 * nd(rng);
  std::size_t out = (input.height - kernel + 1) * (input.width - kernel + 1) * filters;
  m.layers.push_back(random_layer(out, n_classes, rng, scale));
  m.validate();
  return m;
}

TinyModel TinyModel::quadratic(Dims input, std::vector<std::vector<double>> matrices) {
  TinyModel m;
  m.architecture = Architecture::Quadratic;
  m.input = input;
  m.n_classes = matrices.size();
  m.quad = std::move(matrices);
  m.validate();
  return m;
}

std::vector<double> forward(const TinyModel& m, const std::vector<double>& x) {
  check_input(m, x.size());
  return forward_t(m, x);
}

std::vector<double> forward(const TinyModel& m, const Image& image) {
  if (!(image.dims == m.input)) throw DimMismatch("image dims do not match the model");
  return forward(m, image.pixels);
}

int predict(const TinyModel& m, const std::vector<double>& x) {
  auto s = forward(m, x);
  return static_cast<int>(std::max_element(s.begin(), s.end()) - s.begin());
}

std::vector<double> score_gradient(const TinyModel& m, const std::vector<double>& x, int label) {
  check_input(m, x.size());
  check_label(m, label);
  return gradient_t(m, x, label);
}

void score_gradient_hvp(const TinyModel& m, const std::vector<double>& x, int label,
                        const std::vector<double>& direction, std::vector<double>& grad,
                        std::vector<double>& hvp) {
  check_input(m, x.size());
  check_label(m, label);
  if (direction.size() != x.size()) throw DimMismatch("direction size mismatch");
  std::vector<Dual> xd(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) xd[i] = Dual(x[i], direction[i]);
  auto g = gradient_t(m, xd, label);
  grad.resize(g.size());
  hvp.resize(g.size());
  for (std::size_t i = 0; i < g.size(); ++i) {
    grad[i] = g[i].v;
    hvp[i] = g[i].d;
  }
}

namespace {

using nlohmann::json;

const char* arch_name(Architecture a) {
  switch (a) {
    case Architecture::Linear: return "linear";
    case Architecture::Mlp: return "mlp";
    case Architecture::Conv: return "conv";
    case Architecture::Quadratic: return "quadratic";
  }
  return "?";
}

Architecture parse_arch(const std::string& s) {
  if (s == "linear") return Architecture::Linear;
  if (s == "mlp") return Architecture::Mlp;
  if (s == "conv") return Architecture::Conv;
  if (s == "quadratic") return Architecture::Quadratic;
  throw ParameterError("unknown architecture '" + s + "'");
}

}  // namespace

std::string TinyModel::to_json() const {
  json j;
  j["architecture"] = arch_name(architecture);
  j["activation"] = activation == Activation::Tanh ? "tanh" : "softplus";
  j["input"] = {input.height, input.width, input.channels};
  j["n_classes"] = n_classes;
  json ls = json::array();
  for (const auto& L : layers) ls.push_back({{"in", L.in}, {"out", L.out}, {"weight", L.weight}, {"bias", L.bias}});
  j["layers"] = ls;
  if (architecture == Architecture::Conv) {
    j["filters"] = filters;
    j["kernel"] = kernel;
    j["conv_weight"] = conv_weight;
    j["conv_bias"] = conv_bias;
  }
  if (architecture == Architecture::Quadratic) j["quad"] = quad;
  return j.dump();
}

TinyModel TinyModel::from_json(const std::string& text) {
  TinyModel m;
  try {
    json j = json::parse(text);
    m.architecture = parse_arch(j.at("architecture").get<std::string>());
    std::string act = j.value("activation", "tanh");
    if (act == "tanh")
      m.activation = Activation::Tanh;
    else if (act == "softplus")
      m.activation = Activation::Softplus;
    else
      throw ParameterError("unknown activation '" + act + "'");
    auto dims = j.at("input").get<std::vector<std::size_t>>();
    if (dims.size() != 3) throw ParameterError("model input must be [h, w, c]");
    m.input = {dims[0], dims[1], dims[2]};
    m.n_classes = j.at("n_classes").get<std::size_t>();
    for (const auto& L : j.value("layers", json::array())) {
      DenseLayer d;
      d.in = L.at("in");
      d.out = L.at("out");
      d.weight = L.at("weight").get<std::vector<double>>();
      d.bias = L.at("bias").get<std::vector<double>>();
      m.layers.push_back(std::move(d));
    }
    m.filters = j.value("filters", std::size_t{0});
    m.kernel = j.value("kernel", std::size_t{0});
    m.conv_weight = j.value("conv_weight", std::vector<double>{});
    m.conv_bias = j.value("conv_bias", std::vector<double>{});
    m.quad = j.value("quad", std::vector<std::vector<double>>{});
  } catch (const json::exception& e) {
    throw ParameterError(std::string("bad model file: ") + e.what());
  }
  m.validate();
  return m;
}

void TinyModel::save(const std::string& path) const {
  std::ofstream f(path);
  if (!f) throw Error("cannot write " + path);
  f << to_json() << '\n';
}

TinyModel TinyModel::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw MissingFile(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return from_json(ss.str());
}

}  // namespace rrs
