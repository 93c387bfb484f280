#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cmath>
#include <limits>

#include "rrs/attack.hpp"
#include "rrs/certificate.hpp"
#include "rrs/certifier.hpp"
#include "rrs/concentration.hpp"
#include "rrs/errors.hpp"
#include "rrs/evaluation.hpp"
#include "rrs/gnd.hpp"
#include "rrs/interpreters.hpp"
#include "rrs/model.hpp"
#include "rrs/rrsm.hpp"
#include "rrs/scoring.hpp"
#include "rrs/smoother.hpp"

namespace py = pybind11;
using namespace rrs;

namespace {

using Vec = std::vector<double>;

py::array_t<double> to_array(const Vec& v) {
  py::array_t<double> a(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

Vec to_vec(const py::array_t<double, py::array::c_style | py::array::forcecast>& a) {
  return Vec(a.data(), a.data() + a.size());
}

// float alpha, "1+" or "inf"
RenyiOrder order_of(const py::object& o) {
  if (py::isinstance<py::str>(o)) return RenyiOrder::parse(o.cast<std::string>());
  double a = o.cast<double>();
  if (std::isinf(a)) return RenyiOrder::infinity();
  return RenyiOrder::finite(a);
}

py::object order_to_py(const RenyiOrder& a) {
  if (a.is_finite()) return py::float_(a.value);
  return py::str(a.str());
}

py::dict certificate_dict(const RobustnessCertificate& c) {
  py::dict d;
  d["mode"] = c.mode == CertificateMode::MaxAttackSize ? "max_attack_size" : "max_beta";
  d["d_prior"] = c.d_prior;
  d["d_star"] = c.d_star;
  d["sigma"] = c.sigma;
  d["n"] = c.n;
  d["k"] = c.k;
  d["beta"] = c.beta;
  d["L"] = c.L;
  d["L_kl_row"] = c.kl_row_L ? py::object(py::float_(*c.kl_row_L)) : py::object(py::none());
  d["alpha_star"] = order_to_py(c.alpha_star);
  d["eps_robust"] = c.eps_robust;
  d["eps_lower"] = c.eps_lower ? py::object(py::float_(*c.eps_lower)) : py::object(py::none());
  d["confidence"] = c.confidence ? py::object(py::float_(*c.confidence)) : py::object(py::none());
  d["T"] = c.samples ? py::object(py::int_(c.samples)) : py::object(py::none());
  d["dimension_penalty_applied"] = c.dimension_penalty_applied;
  d["sup_at_alpha_cap"] = c.sup_at_cap;
  return d;
}

Image make_image(const py::array_t<double, py::array::c_style | py::array::forcecast>& pixels,
                 const Dims& dims, int label) {
  Image img{dims, to_vec(pixels), label};
  if (img.pixels.size() != dims.size()) throw DimMismatch("pixel count does not match dims");
  return img;
}

Dims dims_of(const py::tuple& t) {
  if (t.size() != 3) throw ParameterError("dims must be (height, width, channels)");
  return {t[0].cast<std::size_t>(), t[1].cast<std::size_t>(), t[2].cast<std::size_t>()};
}

py::tuple dims_tuple(const Dims& d) { return py::make_tuple(d.height, d.width, d.channels); }

}  // namespace

PYBIND11_MODULE(_rrs, m) {
  m.doc() = "Certifiably robust smoothed interpretation maps";
  m.attr("__version__") = toolkit_version();

  auto base = py::register_exception<Error>(m, "Error", PyExc_RuntimeError);
  py::register_exception<DomainError>(m, "DomainError", base.ptr());
  py::register_exception<ParameterError>(m, "ParameterError", base.ptr());
  py::register_exception<InfeasibleSpec>(m, "InfeasibleSpec", base.ptr());
  py::register_exception<NumericError>(m, "NumericError", base.ptr());
  py::register_exception<UnsupportedOperation>(m, "UnsupportedOperation", base.ptr());
  py::register_exception<InterpreterError>(m, "InterpreterError", base.ptr());
  auto fmt = py::register_exception<FormatError>(m, "FormatError", base.ptr());
  py::register_exception<MissingFile>(m, "MissingFile", fmt.ptr());
  py::register_exception<BadMagic>(m, "BadMagic", fmt.ptr());
  py::register_exception<UnsupportedVersion>(m, "UnsupportedVersion", fmt.ptr());
  py::register_exception<TruncatedFile>(m, "TruncatedFile", fmt.ptr());
  py::register_exception<DimMismatch>(m, "DimMismatch", fmt.ptr());
  py::register_exception<InvalidHeader>(m, "InvalidHeader", fmt.ptr());

  // noise and divergences
  m.def("sample_noise",
        [](double mu, double sigma, int b, std::size_t n, std::uint64_t seed) {
          return to_array(sample_noise({mu, sigma, b}, n, seed));
        },
        py::arg("mu"), py::arg("sigma"), py::arg("b"), py::arg("n"), py::arg("seed"));
  m.def("gnd_pdf", [](double mu, double sigma, int b, double x) { return pdf({mu, sigma, b}, x); },
        py::arg("mu"), py::arg("sigma"), py::arg("b"), py::arg("x"));
  m.def("eps_alpha_laplace",
        [](double t, const py::object& a) { return eps_alpha_laplace(t, order_of(a)); },
        py::arg("t"), py::arg("alpha"));
  m.def("eps_gaussian", &eps_gaussian, py::arg("t"), py::arg("alpha"));
  m.def("eps_kl_gnd", &eps_kl_gnd, py::arg("b"), py::arg("t"));
  m.def("numeric_renyi_divergence",
        [](int b, double sigma, double L, const py::object& a) {
          return numeric_renyi_divergence({0.0, sigma, b}, L, order_of(a));
        },
        py::arg("b"), py::arg("sigma"), py::arg("L"), py::arg("alpha"));
  m.def("invert_divergence",
        [](const std::string& family, double eps, const py::object& alpha, int b) {
          DivergenceKind kind;
          if (family == "laplace")
            kind = DivergenceKind::laplace(order_of(alpha));
          else if (family == "gaussian")
            kind = DivergenceKind::gaussian(alpha.cast<double>());
          else if (family == "kl_gnd")
            kind = DivergenceKind::kl_gnd(b);
          else
            throw ParameterError("family must be laplace, gaussian or kl_gnd");
          return invert_divergence(kind, eps);
        },
        py::arg("family"), py::arg("eps"), py::arg("alpha") = py::float_(2.0), py::arg("b") = 2);

  // ranking
  m.def("scoring_vector",
        [](std::size_t n, double k_star, double eta) {
          return to_array(build_scoring_vector(n, k_star, eta).weights);
        },
        py::arg("n"), py::arg("k_star"), py::arg("eta") = 1e-4);
  m.def("rank_rescale",
        [](py::array_t<double, py::array::c_style | py::array::forcecast> raw,
           py::array_t<double, py::array::c_style | py::array::forcecast> v) {
          ScoringVector sv;
          sv.weights = to_vec(v);
          return to_array(rank_rescale(to_vec(raw), sv));
        },
        py::arg("raw"), py::arg("v"));
  m.def("top_k_set", [](const Vec& map, std::size_t k) { return top_k_set(map, k); },
        py::arg("map"), py::arg("k"));
  m.def("top_k_overlap", &top_k_overlap, py::arg("a"), py::arg("b"), py::arg("k"));
  m.def("renyi_divergence",
        [](const Vec& p, const Vec& q, const py::object& a) {
          return renyi_robustness_divergence(p, q, order_of(a));
        },
        py::arg("p"), py::arg("q"), py::arg("alpha"));

  // certification
  m.def("k0", &k0_for, py::arg("k"), py::arg("beta"));
  m.def("select_shape", &select_shape, py::arg("d_prior"), py::arg("n"));
  m.def("eps_robust",
        [](const Vec& map, std::size_t k, double beta, const py::object& a) {
          return eps_robust(map, k0_and_boundary(k, beta, map.size()), order_of(a));
        },
        py::arg("map"), py::arg("k"), py::arg("beta"), py::arg("alpha"));
  m.def("worst_case_map",
        [](const Vec& map, std::size_t k, double beta, const py::object& a) {
          auto w = worst_case_map(map, k0_and_boundary(k, beta, map.size()), order_of(a));
          return py::make_tuple(to_array(w.m_tilde), w.eps_at_alpha);
        },
        py::arg("map"), py::arg("k"), py::arg("beta"), py::arg("alpha"));
  m.def("certify_max_attack",
        [](const Vec& map, std::size_t k, double beta, double sigma, double d_prior,
           std::size_t samples, double confidence, double range) {
          auto spec = k0_and_boundary(k, beta, map.size());
          if (samples == 0) return certificate_dict(certify_max_attack(map, spec, sigma, d_prior));
          return certificate_dict(
              certify_max_attack_finite(map, spec, sigma, d_prior, samples, confidence, range));
        },
        py::arg("map"), py::arg("k"), py::arg("beta"), py::arg("sigma"),
        py::arg("d_prior") = std::numeric_limits<double>::infinity(), py::arg("samples") = 0,
        py::arg("confidence") = 0.95, py::arg("range") = 1.0);
  m.def("certify_beta",
        [](const Vec& map, std::size_t k, double L, double sigma, double d_prior,
           std::size_t samples, double confidence, double range) {
          if (samples == 0) return certificate_dict(certify_beta(map, k, L, sigma, d_prior));
          return certificate_dict(
              certify_beta_finite(map, k, L, sigma, d_prior, samples, confidence, range));
        },
        py::arg("map"), py::arg("k"), py::arg("L"), py::arg("sigma"),
        py::arg("d_prior") = std::numeric_limits<double>::infinity(), py::arg("samples") = 0,
        py::arg("confidence") = 0.95, py::arg("range") = 1.0);
  m.def("hoeffding_radius", &hoeffding_radius, py::arg("n"), py::arg("T"), py::arg("confidence"),
        py::arg("range") = 1.0);

  // models and maps
  py::class_<TinyModel>(m, "TinyModel")
      .def_static("from_json", &TinyModel::from_json)
      .def_static("load", &TinyModel::load)
      .def_static("linear",
                  [](const py::tuple& dims, std::size_t classes, std::uint64_t seed, double scale) {
                    return TinyModel::linear(dims_of(dims), classes, seed, scale);
                  },
                  py::arg("dims"), py::arg("n_classes"), py::arg("seed"), py::arg("scale") = 1.0)
      .def_static("mlp",
                  [](const py::tuple& dims, std::size_t classes,
                     const std::vector<std::size_t>& hidden, const std::string& act,
                     std::uint64_t seed, double scale) {
                    Activation a = act == "softplus" ? Activation::Softplus : Activation::Tanh;
                    if (act != "tanh" && act != "softplus")
                      throw ParameterError("activation must be tanh or softplus");
                    return TinyModel::mlp(dims_of(dims), classes, hidden, a, seed, scale);
                  },
                  py::arg("dims"), py::arg("n_classes"), py::arg("hidden"),
                  py::arg("activation") = "tanh", py::arg("seed") = 0, py::arg("scale") = 1.0)
      .def("to_json", &TinyModel::to_json)
      .def("save", &TinyModel::save)
      .def_property_readonly("dims", [](const TinyModel& t) { return dims_tuple(t.input); })
      .def_property_readonly("n_classes", [](const TinyModel& t) { return t.n_classes; })
      .def("forward",
           [](const TinyModel& t, py::array_t<double, py::array::c_style | py::array::forcecast> x) {
             return to_array(forward(t, to_vec(x)));
           })
      .def("predict",
           [](const TinyModel& t, py::array_t<double, py::array::c_style | py::array::forcecast> x) {
             return predict(t, to_vec(x));
           });

  m.def("simple_gradient",
        [](const TinyModel& model, py::array_t<double, py::array::c_style | py::array::forcecast> x,
           int label, bool signed_attr) {
          return to_array(
              simple_gradient(model, make_image(x, model.input, label), label, signed_attr));
        },
        py::arg("model"), py::arg("pixels"), py::arg("label"), py::arg("signed") = false);

  m.def("smooth",
        [](const TinyModel& model, py::array_t<double, py::array::c_style | py::array::forcecast> x,
           int label, std::size_t T, double sigma, double d_prior, std::uint64_t seed,
           double eta, double k_star, unsigned threads, bool signed_attr) {
          SmoothingConfig cfg;
          cfg.T = T;
          cfg.sigma = sigma;
          cfg.d_prior = d_prior;
          cfg.seed = seed;
          cfg.eta = eta;
          cfg.k_star = k_star;
          cfg.threads = threads;
          SimpleGradient g(model, signed_attr);
          Image img = make_image(x, model.input, label);
          SmoothedMap out;
          {
            py::gil_scoped_release release;
            out = smooth(g, img, cfg);
          }
          return to_array(out.scores);
        },
        py::arg("model"), py::arg("pixels"), py::arg("label"), py::arg("T") = 50,
        py::arg("sigma") = 0.1, py::arg("d_prior") = std::numeric_limits<double>::infinity(),
        py::arg("seed") = 0, py::arg("eta") = 1e-4, py::arg("k_star") = 0.0,
        py::arg("threads") = 1, py::arg("signed") = false);

  m.def("topk_attack",
        [](const TinyModel& model, py::array_t<double, py::array::c_style | py::array::forcecast> x,
           int label, std::size_t k, double L, double d, double lr, std::size_t iterations,
           bool enforce_label) {
          AttackConfig cfg;
          cfg.k = k;
          cfg.L = L;
          cfg.d = d;
          cfg.lr = lr;
          cfg.iterations = iterations;
          cfg.enforce_label = enforce_label;
          auto r = topk_attack(SimpleGradient(model), make_image(x, model.input, label), cfg);
          py::dict out;
          out["x_adv"] = to_array(r.x_adv);
          out["objective_trace"] = to_array(r.objective_trace);
          out["budget_trace"] = to_array(r.budget_trace);
          out["overlap"] = r.achieved_overlap;
          out["best_iteration"] = r.best_iteration;
          out["label_flipped"] = r.label_flipped;
          out["step_rule"] = r.step_rule;
          return out;
        },
        py::arg("model"), py::arg("pixels"), py::arg("label"), py::arg("k"),
        py::arg("L") = 8.0 / 256.0, py::arg("d") = std::numeric_limits<double>::infinity(),
        py::arg("lr") = 0.5, py::arg("iterations") = 300, py::arg("enforce_label") = false);

  // evaluation
  m.def("pointing_score",
        [](const Vec& map, const std::vector<std::uint8_t>& mask, std::size_t k, double tau) {
          auto s = pointing_score(map, mask, k, tau);
          return py::make_tuple(s.hard, s.soft);
        },
        py::arg("map"), py::arg("mask"), py::arg("k"), py::arg("tau") = 0.5);
  m.def("synthetic_case",
        [](std::uint64_t seed) {
          auto c = make_synthetic_case({}, seed);
          py::dict out;
          out["pixels"] = to_array(c.image.pixels);
          out["dims"] = dims_tuple(c.image.dims);
          out["label"] = c.image.label;
          out["mask"] = c.mask;
          out["model"] = c.model;
          return out;
        },
        py::arg("seed"));
  m.def("run_sweep",
        [](const std::string& spec_json, unsigned threads) {
          auto spec = SweepSpec::from_json(spec_json);
          std::vector<SweepRow> rows;
          {
            py::gil_scoped_release release;
            rows = run_sweep(spec, threads);
          }
          return sweep_csv(rows);
        },
        py::arg("spec_json"), py::arg("threads") = 1,
        "Run a sweep described by a JSON spec and return the CSV text.");

  // files
  m.def("write_map",
        [](const std::string& path, const py::tuple& dims, const Vec& values) {
          write_map(path, dims_of(dims), values);
        },
        py::arg("path"), py::arg("dims"), py::arg("values"));
  m.def("read_map",
        [](const std::string& path) {
          Dims d;
          Vec v;
          read_map(path, d, v);
          return py::make_tuple(dims_tuple(d), to_array(v));
        },
        py::arg("path"));
  m.def("map_digest", [](const std::string& path) { return map_digest(read_file_bytes(path)); },
        py::arg("path"));
}
