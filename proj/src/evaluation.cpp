#include "rrs/evaluation.hpp"

#include <algorithm>
#include <charconv>
#include <chrono>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>

#include <json.hpp>

#include "rrs/certifier.hpp"
#include "rrs/errors.hpp"
#include "rrs/parallel.hpp"
#include "rrs/rng.hpp"
#include "rrs/scoring.hpp"
#include "rrs/smoother.hpp"

namespace rrs {

PointingScore pointing_score(const std::vector<double>& map, const std::vector<std::uint8_t>& mask,
                             std::size_t k, double tau) {
  if (map.size() != mask.size()) throw DomainError("pointing: mask size mismatch");
  if (std::none_of(mask.begin(), mask.end(), [](std::uint8_t b) { return b != 0; }))
    throw DomainError("pointing: empty object mask");
  if (!(tau > 0.0 && tau <= 1.0)) throw DomainError("pointing: tau must be in (0, 1]");
  auto top = top_k_set(map, k);
  std::size_t inside = 0;
  for (std::size_t i : top) inside += mask[i] != 0;
  PointingScore s;
  s.soft = static_cast<double>(inside) / static_cast<double>(k);
  s.hard = s.soft >= tau ? 1 : -1;
  return s;
}

SyntheticCase make_synthetic_case(const SyntheticSpec& spec, std::uint64_t seed) {
  const Dims d = spec.dims;
  if (d.size() == 0) throw ParameterError("synthetic dims must be positive");
  Rng rng = make_rng(seed, 1);
  std::uniform_real_distribution<double> u(0.0, 1.0);

  auto span = [&](std::size_t len) {
    std::size_t lo_len = std::max<std::size_t>(1, len / 4), hi_len = std::max(lo_len, len / 2);
    std::size_t size = lo_len + static_cast<std::size_t>(u(rng) * (hi_len - lo_len + 1));
    size = std::min(size, hi_len);
    std::size_t start = static_cast<std::size_t>(u(rng) * (len - size + 1));
    return std::pair{std::min(start, len - size), size};
  };
  auto [r0, rh] = span(d.height);
  auto [c0, cw] = span(d.width);

  SyntheticCase sc;
  sc.image.dims = d;
  sc.image.pixels.resize(d.size());
  sc.mask.assign(d.size(), 0);
  for (std::size_t i = 0; i < d.height; ++i)
    for (std::size_t j = 0; j < d.width; ++j) {
      bool in = i >= r0 && i < r0 + rh && j >= c0 && j < c0 + cw;
      for (std::size_t ch = 0; ch < d.channels; ++ch) {
        std::size_t idx = (i * d.width + j) * d.channels + ch;
        sc.mask[idx] = in;
        sc.image.pixels[idx] = in ? 0.6 + 0.4 * u(rng) : 0.3 * u(rng);
      }
    }

  sc.model = TinyModel::mlp(d, spec.n_classes, spec.hidden, spec.activation,
                            sub_seed(seed, 2), spec.weight_scale);
  auto& first = sc.model.layers.front();
  for (std::size_t o = 0; o < first.out; ++o)
    for (std::size_t i = 0; i < first.in; ++i)
      if (sc.mask[i]) first.weight[o * first.in + i] *= spec.object_gain;
  sc.image.label = predict(sc.model, sc.image.pixels);
  return sc;
}

void SweepSpec::validate() const {
  if (axis != "k" && axis != "sigma" && axis != "L" && axis != "T")
    throw ParameterError("sweep axis must be one of k, sigma, L, T");
  if (values.empty()) throw ParameterError("sweep needs at least one value");
  if (repetitions < 1) throw ParameterError("sweep needs repetitions >= 1");
  if (!(sigma > 0.0) || T < 1 || !(L >= 0.0) || !(d_prior >= 1.0) || !(eta > 0.0))
    throw ParameterError("invalid sweep base configuration");
  if (k < 1 || k > synthetic.dims.size()) throw ParameterError("sweep k out of range");
  for (double v : values) {
    if (axis == "k" && (v < 1 || v > static_cast<double>(synthetic.dims.size()) || v != std::floor(v)))
      throw ParameterError("k sweep values must be integers in [1, n]");
    if (axis == "sigma" && !(v > 0.0)) throw ParameterError("sigma values must be positive");
    if (axis == "L" && !(v >= 0.0)) throw ParameterError("L values must be >= 0");
    if (axis == "T" && (v < 1 || v != std::floor(v)))
      throw ParameterError("T values must be positive integers");
  }
}

namespace {

double json_number(const nlohmann::json& j) {
  if (j.is_string()) {
    auto s = j.get<std::string>();
    if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
    throw ParameterError("expected a number, got '" + s + "'");
  }
  return j.get<double>();
}

}  // namespace

SweepSpec SweepSpec::from_json(const std::string& text) {
  SweepSpec s;
  try {
    auto j = nlohmann::json::parse(text);
    s.axis = j.at("axis").get<std::string>();
    for (const auto& v : j.at("values")) s.values.push_back(json_number(v));
    s.repetitions = j.value("repetitions", s.repetitions);
    s.seed = j.value("seed", s.seed);
    s.k = j.value("k", s.k);
    s.sigma = j.value("sigma", s.sigma);
    s.T = j.value("T", s.T);
    if (j.contains("L")) s.L = json_number(j["L"]);
    if (j.contains("d_prior")) s.d_prior = json_number(j["d_prior"]);
    s.eta = j.value("eta", s.eta);
    s.k_star = j.value("k_star", s.k_star);
    s.lr = j.value("lr", s.lr);
    s.attack_iterations = j.value("attack_iterations", s.attack_iterations);
    s.tau = j.value("tau", s.tau);
    if (j.contains("image")) {
      auto d = j["image"].get<std::vector<std::size_t>>();
      if (d.size() != 3) throw ParameterError("image must be [h, w, c]");
      s.synthetic.dims = {d[0], d[1], d[2]};
    }
    s.synthetic.n_classes = j.value("n_classes", s.synthetic.n_classes);
    if (j.contains("hidden")) s.synthetic.hidden = j["hidden"].get<std::vector<std::size_t>>();
    if (j.contains("activation")) {
      auto a = j["activation"].get<std::string>();
      if (a == "tanh")
        s.synthetic.activation = Activation::Tanh;
      else if (a == "softplus")
        s.synthetic.activation = Activation::Softplus;
      else
        throw ParameterError("unknown activation '" + a + "'");
    }
    s.synthetic.weight_scale = j.value("weight_scale", s.synthetic.weight_scale);
    s.synthetic.object_gain = j.value("object_gain", s.synthetic.object_gain);
  } catch (const nlohmann::json::exception& e) {
    throw ParameterError(std::string("bad sweep spec: ") + e.what());
  }
  s.validate();
  return s;
}

SweepSpec SweepSpec::load(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw MissingFile(path);
  std::stringstream ss;
  ss << f.rdbuf();
  return from_json(ss.str());
}

SweepCell run_sweep_cell(const SweepSpec& spec, double value, std::size_t repetition) {
  SweepCell cell;
  auto t0 = std::chrono::steady_clock::now();
  try {
    std::size_t k = spec.k;
    double sigma = spec.sigma, L = spec.L;
    std::size_t T = spec.T;
    if (spec.axis == "k") k = static_cast<std::size_t>(value);
    if (spec.axis == "sigma") sigma = value;
    if (spec.axis == "L") L = value;
    if (spec.axis == "T") T = static_cast<std::size_t>(value);

    // common random numbers across axis values: the case and noise depend on
    // the repetition only
    const std::uint64_t cs = sub_seed(spec.seed, repetition);
    SyntheticCase sc = make_synthetic_case(spec.synthetic, cs);
    SimpleGradient g(sc.model);

    SmoothingConfig cfg;
    cfg.T = T;
    cfg.sigma = sigma;
    cfg.d_prior = spec.d_prior;
    cfg.seed = sub_seed(cs, 3);
    cfg.eta = spec.eta;
    cfg.k_star = spec.k_star > 0.0 ? spec.k_star : static_cast<double>(k);
    auto m = smooth(g, sc.image, cfg);

    AttackConfig ac;
    ac.k = k;
    ac.L = L;
    ac.d = spec.d_prior;
    ac.lr = spec.lr;
    ac.iterations = spec.attack_iterations;
    auto adv = topk_attack(g, sc.image, ac);
    Image xa = sc.image;
    xa.pixels = adv.x_adv;
    auto ma = smooth(g, xa, cfg);

    cell.beta_exp = top_k_overlap(m.scores, ma.scores, k);
    cell.beta_theory = certify_beta(m.scores, k, L, sigma, spec.d_prior).beta;
    cell.pointing = pointing_score(m.scores, sc.mask, k, spec.tau);
    cell.ok = true;
  } catch (const std::exception& e) {
    cell.error = e.what();
  }
  cell.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return cell;
}

std::vector<SweepRow> run_sweep(const SweepSpec& spec, unsigned threads,
                                std::vector<std::vector<SweepCell>>* cells_out) {
  spec.validate();
  const std::size_t V = spec.values.size(), R = spec.repetitions;
  std::vector<SweepCell> cells(V * R);
  parallel_for(V * R, threads, [&](std::size_t i) {
    cells[i] = run_sweep_cell(spec, spec.values[i / R], i % R);
  });
  std::vector<SweepRow> rows;
  if (cells_out) cells_out->assign(V, {});
  for (std::size_t v = 0; v < V; ++v) {
    SweepRow row;
    row.axis = spec.axis;
    row.value = spec.values[v];
    for (std::size_t r = 0; r < R; ++r) {
      const auto& c = cells[v * R + r];
      if (cells_out) (*cells_out)[v].push_back(c);
      row.seconds += c.seconds;
      if (!c.ok) {
        ++row.failed_cells;
        std::fprintf(stderr, "sweep cell %s=%g rep %zu failed: %s\n", spec.axis.c_str(),
                     spec.values[v], r, c.error.c_str());
        continue;
      }
      ++row.cells;
      row.beta_exp += c.beta_exp;
      row.beta_theory += c.beta_theory;
      row.point_hard += c.pointing.hard;
      row.point_soft += c.pointing.soft;
    }
    if (row.cells > 0) {
      double inv = 1.0 / static_cast<double>(row.cells);
      row.beta_exp *= inv;
      row.beta_theory *= inv;
      row.point_hard *= inv;
      row.point_soft *= inv;
    }
    rows.push_back(row);
  }
  return rows;
}

std::string sweep_csv(const std::vector<SweepRow>& rows, bool timing) {
  std::string out = "axis,value,beta_exp,beta_theory,point_hard,point_soft,seconds\n";
  auto num = [](double v) {
    char buf[32];
    auto res = std::to_chars(buf, buf + sizeof buf, v);
    return std::string(buf, res.ptr);
  };
  for (const auto& r : rows) {
    char secs[32];
    std::snprintf(secs, sizeof secs, "%.3f", timing ? r.seconds : 0.0);
    out += r.axis + ',' + num(r.value) + ',' + num(r.beta_exp) + ',' + num(r.beta_theory) + ',' +
           num(r.point_hard) + ',' + num(r.point_soft) + ',' + secs + '\n';
  }
  return out;
}

}  // namespace rrs
