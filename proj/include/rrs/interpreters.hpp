#pragma once

#include <functional>
#include <string>
#include <vector>

#include "rrs/image.hpp"
#include "rrs/model.hpp"

namespace rrs {

// Base interpretation g: R^n x classes -> R^n that can be evaluated at
// arbitrary (noisy) inputs. Implementations must be safe to call
// concurrently.
class Interpreter {
 public:
  virtual ~Interpreter() = default;
  virtual std::size_t input_size() const = 0;
  virtual std::vector<double> attribute(const std::vector<double>& x, int label) const = 0;
};

enum class GradientMode { Analytic, FiniteDifference };

class SimpleGradient : public Interpreter {
 public:
  explicit SimpleGradient(TinyModel model, bool signed_attribution = false);

  std::size_t input_size() const override { return model_.input_size(); }
  std::vector<double> attribute(const std::vector<double>& x, int label) const override;

  // D(z) = -sum_{i in B} g(z)_i.
  double objective(const std::vector<double>& z, int label,
                   const std::vector<std::size_t>& B) const;
  // Returns D(z) and writes its gradient in z.
  double objective_gradient(const std::vector<double>& z, int label,
                            const std::vector<std::size_t>& B, std::vector<double>& grad,
                            GradientMode mode = GradientMode::Analytic, double fd_step = 0.0) const;

  const TinyModel& model() const { return model_; }
  bool signed_attribution() const { return signed_; }

 private:
  TinyModel model_;
  bool signed_;
};

class ConstantInterpreter : public Interpreter {
 public:
  explicit ConstantInterpreter(std::vector<double> map) : map_(std::move(map)) {}
  std::size_t input_size() const override { return map_.size(); }
  std::vector<double> attribute(const std::vector<double>&, int) const override { return map_; }

 private:
  std::vector<double> map_;
};

class FunctionInterpreter : public Interpreter {
 public:
  using Fn = std::function<std::vector<double>(const std::vector<double>&, int)>;
  FunctionInterpreter(std::size_t n, Fn fn) : n_(n), fn_(std::move(fn)) {}
  std::size_t input_size() const override { return n_; }
  std::vector<double> attribute(const std::vector<double>& x, int label) const override {
    return fn_(x, label);
  }

 private:
  std::size_t n_;
  Fn fn_;
};

std::vector<double> simple_gradient(const TinyModel& model, const Image& image, int label,
                                    bool signed_attribution = false);

// Precomputed maps stored as <directory>/<image_id>.rrsm. These cannot be
// re-evaluated at noisy inputs, so they only feed certification and metrics.
struct SaliencyMap {
  Dims dims;
  std::vector<double> values;
};

SaliencyMap load_saliency(const std::string& directory, const std::string& image_id);
SaliencyMap load_saliency(const std::string& directory, const std::string& image_id,
                          const Dims& expected);

}  // namespace rrs
