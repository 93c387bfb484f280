#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <limits>
#include <string>

#include <CLI11.hpp>

#include "rrs/attack.hpp"
#include "rrs/certificate.hpp"
#include "rrs/certifier.hpp"
#include "rrs/concentration.hpp"
#include "rrs/errors.hpp"
#include "rrs/evaluation.hpp"
#include "rrs/interpreters.hpp"
#include "rrs/model.hpp"
#include "rrs/rrsm.hpp"
#include "rrs/scoring.hpp"
#include "rrs/selftest.hpp"
#include "rrs/smoother.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitInternal = 1;
constexpr int kExitValidation = 2;

double parse_norm(const std::string& s) {
  if (s == "inf" || s == "infinity") return std::numeric_limits<double>::infinity();
  std::size_t pos = 0;
  double d = 0.0;
  try {
    d = std::stod(s, &pos);
  } catch (const std::exception&) {
    pos = 0;
  }
  if (pos != s.size() || !(d >= 1.0)) throw rrs::DomainError("norm order must be a number >= 1 or 'inf'");
  return d;
}

rrs::Image load_image(const std::string& path, int label) {
  rrs::Image im;
  rrs::read_map(path, im.dims, im.pixels);
  im.label = label;
  return im;
}

void write_text(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw rrs::Error("cannot write " + path);
  f << text;
}

std::string fmt(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Certified top-k robustness for smoothed attribution maps"};
  app.require_subcommand(1);
  app.set_version_flag("--version", rrs::toolkit_version());
  unsigned threads = 1;
  app.add_option("--threads", threads, "Worker threads (results do not depend on this)")
      ->check(CLI::Range(1u, 1024u));

  // synth
  auto* synth = app.add_subcommand("synth", "Generate a synthetic image, object mask and tiny model");
  std::uint64_t synth_seed = 0;
  std::string synth_image, synth_mask, synth_model, synth_act = "tanh";
  rrs::SyntheticSpec syn;
  std::size_t hidden = 16;
  synth->add_option("--seed", synth_seed);
  synth->add_option("--out-image", synth_image)->required();
  synth->add_option("--out-mask", synth_mask);
  synth->add_option("--out-model", synth_model)->required();
  synth->add_option("--height", syn.dims.height)->check(CLI::PositiveNumber);
  synth->add_option("--width", syn.dims.width)->check(CLI::PositiveNumber);
  synth->add_option("--channels", syn.dims.channels)->check(CLI::PositiveNumber);
  synth->add_option("--classes", syn.n_classes)->check(CLI::PositiveNumber);
  synth->add_option("--hidden", hidden)->check(CLI::PositiveNumber);
  synth->add_option("--activation", synth_act)->check(CLI::IsMember({"tanh", "softplus"}));
  synth->add_option("--object-gain", syn.object_gain);

  // smooth
  auto* smooth_cmd = app.add_subcommand("smooth", "Smooth the simple-gradient map of an image");
  std::string sm_model, sm_image, sm_out, sm_dprior = "inf";
  int sm_label = -1;
  bool sm_signed = false;
  rrs::SmoothingConfig scfg;
  smooth_cmd->add_option("--model", sm_model)->required();
  smooth_cmd->add_option("--image", sm_image)->required();
  smooth_cmd->add_option("--out", sm_out)->required();
  smooth_cmd->add_option("--label", sm_label, "Class to explain (default: predicted)");
  smooth_cmd->add_option("--sigma", scfg.sigma)->check(CLI::PositiveNumber);
  smooth_cmd->add_option("--samples,-T", scfg.T)->check(CLI::PositiveNumber);
  smooth_cmd->add_option("--d-prior", sm_dprior);
  smooth_cmd->add_option("--seed", scfg.seed);
  smooth_cmd->add_option("--eta", scfg.eta)->check(CLI::PositiveNumber);
  smooth_cmd->add_option("--k-star", scfg.k_star, "Scoring-vector midpoint (default n/4)");
  smooth_cmd->add_flag("--signed", sm_signed, "Use signed gradients");

  // certify
  auto* cert = app.add_subcommand("certify", "Certify a smoothed map");
  std::string c_map, c_out, c_dprior = "inf";
  double c_sigma = 0.1, c_conf = 0.95, c_range = 1.0;
  std::size_t c_k = 1, c_samples = 0;
  double c_beta = 1.0, c_attack = 0.0;
  cert->add_option("--map", c_map)->required();
  cert->add_option("--out", c_out, "Certificate path (default stdout)");
  cert->add_option("--d-prior", c_dprior);
  cert->add_option("--sigma", c_sigma)->check(CLI::PositiveNumber);
  cert->add_option("--k", c_k)->required()->check(CLI::PositiveNumber);
  auto* beta_opt = cert->add_option("--beta", c_beta)->check(CLI::Range(0.0, 1.0));
  auto* attack_opt = cert->add_option("--attack-size", c_attack)->check(CLI::NonNegativeNumber);
  beta_opt->excludes(attack_opt);
  cert->add_option("--confidence", c_conf)->check(CLI::Range(0.0, 1.0));
  cert->add_option("--samples", c_samples, "Sample count behind the map; enables the finite-sample bound");
  cert->add_option("--range", c_range, "Per-coordinate sample range for the finite-sample bound")
      ->check(CLI::NonNegativeNumber);

  // attack
  auto* atk = app.add_subcommand("attack", "Top-k attack against the simple-gradient map");
  std::string a_model, a_image, a_out, a_trace, a_norm = "inf", a_grad = "analytic";
  int a_label = -1;
  bool a_signed = false;
  rrs::AttackConfig acfg;
  atk->add_option("--model", a_model)->required();
  atk->add_option("--image", a_image)->required();
  atk->add_option("--out", a_out)->required();
  atk->add_option("--trace", a_trace);
  atk->add_option("--label", a_label);
  atk->add_option("--k", acfg.k)->required()->check(CLI::PositiveNumber);
  atk->add_option("--attack-size,-L", acfg.L)->check(CLI::NonNegativeNumber);
  atk->add_option("--norm", a_norm);
  atk->add_option("--lr", acfg.lr)->check(CLI::PositiveNumber);
  atk->add_option("--iterations", acfg.iterations)->check(CLI::PositiveNumber);
  atk->add_option("--gradient", a_grad)->check(CLI::IsMember({"analytic", "fd"}));
  atk->add_flag("--enforce-label", acfg.enforce_label);
  atk->add_flag("--signed", a_signed);

  // eval
  auto* ev = app.add_subcommand("eval", "Evaluation metrics");
  ev->require_subcommand(1);
  auto* ov = ev->add_subcommand("overlap", "Top-k overlap of two maps");
  std::string ov_a, ov_b;
  std::size_t ov_k = 1;
  ov->add_option("a", ov_a)->required();
  ov->add_option("b", ov_b)->required();
  ov->add_option("--k", ov_k)->required()->check(CLI::PositiveNumber);
  auto* pt = ev->add_subcommand("pointing", "Generalized pointing game");
  std::string pt_map, pt_mask;
  std::size_t pt_k = 1;
  double pt_tau = 0.5;
  pt->add_option("--map", pt_map)->required();
  pt->add_option("--mask", pt_mask)->required();
  pt->add_option("--k", pt_k)->required()->check(CLI::PositiveNumber);
  pt->add_option("--tau", pt_tau);

  // sweep
  auto* sw = app.add_subcommand("sweep", "Run an experiment sweep");
  std::string sw_spec, sw_out;
  bool sw_timing = false;
  sw->add_option("--spec", sw_spec)->required();
  sw->add_option("--out", sw_out);
  sw->add_flag("--timing", sw_timing, "Record wall time (output is then not reproducible)");

  auto* st = app.add_subcommand("selftest", "Run the oracle suites");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kExitOk : kExitValidation;
  }

  try {
    if (*synth) {
      if (synth_act == "softplus") syn.activation = rrs::Activation::Softplus;
      syn.hidden = {hidden};
      auto sc = rrs::make_synthetic_case(syn, synth_seed);
      rrs::write_map(synth_image, sc.image.dims, sc.image.pixels);
      if (!synth_mask.empty())
        rrs::write_map(synth_mask, sc.image.dims,
                       std::vector<double>(sc.mask.begin(), sc.mask.end()));
      sc.model.save(synth_model);
      std::cout << "label " << sc.image.label << "\n";
    } else if (*smooth_cmd) {
      auto model = rrs::TinyModel::load(sm_model);
      auto im = load_image(sm_image, 0);
      if (!(im.dims == model.input)) throw rrs::DimMismatch("image dims do not match the model");
      im.label = sm_label >= 0 ? sm_label : rrs::predict(model, im.pixels);
      scfg.d_prior = parse_norm(sm_dprior);
      scfg.threads = threads;
      rrs::SimpleGradient g(model, sm_signed);
      auto m = rrs::smooth(g, im, scfg);
      rrs::write_map(sm_out, im.dims, m.scores);
    } else if (*cert) {
      const double d_prior = parse_norm(c_dprior);
      auto bytes = rrs::read_file_bytes(c_map);
      rrs::Dims dims;
      std::vector<float> f;
      rrs::decode_map(bytes, dims, f);
      std::vector<double> m(f.begin(), f.end());
      const std::size_t n = m.size();
      const bool finite = c_samples > 0;
      rrs::RobustnessCertificate c;
      if (*attack_opt) {
        c = finite ? rrs::certify_beta_finite(m, c_k, c_attack, c_sigma, d_prior, c_samples, c_conf, c_range)
                   : rrs::certify_beta(m, c_k, c_attack, c_sigma, d_prior);
      } else {
        auto spec = rrs::k0_and_boundary(c_k, c_beta, n);
        c = finite ? rrs::certify_max_attack_finite(m, spec, c_sigma, d_prior, c_samples, c_conf, c_range)
                   : rrs::certify_max_attack(m, spec, c_sigma, d_prior);
      }
      write_text(c_out, rrs::certificate_document(c, rrs::map_digest(bytes)));
    } else if (*atk) {
      auto model = rrs::TinyModel::load(a_model);
      auto im = load_image(a_image, 0);
      if (!(im.dims == model.input)) throw rrs::DimMismatch("image dims do not match the model");
      im.label = a_label >= 0 ? a_label : rrs::predict(model, im.pixels);
      acfg.d = parse_norm(a_norm);
      acfg.gradient = a_grad == "fd" ? rrs::GradientMode::FiniteDifference : rrs::GradientMode::Analytic;
      rrs::SimpleGradient g(model, a_signed);
      auto r = rrs::topk_attack(g, im, acfg);
      rrs::write_map(a_out, im.dims, r.x_adv);
      if (!a_trace.empty()) {
        std::string t = "iteration,objective,budget\n";
        for (std::size_t i = 0; i < r.objective_trace.size(); ++i)
          t += std::to_string(i) + "," + fmt(r.objective_trace[i]) + "," + fmt(r.budget_trace[i]) + "\n";
        write_text(a_trace, t);
      }
      std::cout << "overlap " << fmt(r.achieved_overlap) << "\nbest_iteration " << r.best_iteration
                << "\nlabel_flipped " << (r.label_flipped ? "true" : "false") << "\nstep " << r.step_rule
                << "\n";
    } else if (*ov) {
      rrs::Dims da, db;
      std::vector<double> a, b;
      rrs::read_map(ov_a, da, a);
      rrs::read_map(ov_b, db, b);
      if (!(da == db)) throw rrs::DimMismatch("maps have different dims");
      std::cout << fmt(rrs::top_k_overlap(a, b, ov_k)) << "\n";
    } else if (*pt) {
      rrs::Dims dm, dk;
      std::vector<double> m, mk;
      rrs::read_map(pt_map, dm, m);
      rrs::read_map(pt_mask, dk, mk);
      if (!(dm == dk)) throw rrs::DimMismatch("map and mask have different dims");
      std::vector<std::uint8_t> mask(mk.size());
      for (std::size_t i = 0; i < mk.size(); ++i) mask[i] = mk[i] > 0.5;
      auto s = rrs::pointing_score(m, mask, pt_k, pt_tau);
      std::cout << "hard " << s.hard << "\nsoft " << fmt(s.soft) << "\n";
    } else if (*sw) {
      auto spec = rrs::SweepSpec::load(sw_spec);
      auto rows = rrs::run_sweep(spec, threads);
      write_text(sw_out, rrs::sweep_csv(rows, sw_timing));
      for (const auto& r : rows)
        if (r.failed_cells > 0) return kExitInternal;
    } else if (*st) {
      bool ok = true;
      for (const auto& r : rrs::selftest::run_all(threads)) {
        std::printf("%s %s: %s (%.2fs)\n", r.pass ? "PASS" : "FAIL", r.name.c_str(), r.detail.c_str(),
                    r.seconds);
        ok = ok && r.pass;
      }
      return ok ? kExitOk : kExitInternal;
    }
  } catch (const rrs::DomainError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const rrs::ParameterError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const rrs::InfeasibleSpec& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const rrs::FormatError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
  return kExitOk;
}
