#pragma once

#include <functional>
#include <memory>
#include <string>
#include <vector>

#include "anisocap/vec.hpp"

namespace anisocap {

/// An even norm F on R^N together with the calculus this library needs:
/// evaluation, the polar (dual) norm F°, minimal-section subgradients,
/// and the equivalence constants c, C with c|ξ| <= F(ξ) <= C|ξ|.
///
/// Values are immutable after construction; all member functions are pure
/// and safe to call concurrently.
class Anisotropy {
 public:
  enum class Kind { euclidean, l1, linf, weighted_l2, regularized, custom };

  static Anisotropy euclidean(int dim = 2);
  static Anisotropy l1(int dim = 2);
  static Anisotropy linf(int dim = 2);
  /// weights scale each axis: F(ξ) = sqrt(Σ (w_i ξ_i)^2), all w_i > 0.
  static Anisotropy weighted_l2(const std::vector<double>& weights);
  /// Samples the unit sphere of `fn` (an even norm evaluator) so that the
  /// polar, subgradients and prox machinery become available. `samples`
  /// controls the direction table size (default: 4096 in 2-D, 16384 in 3-D).
  static Anisotropy custom(std::function<double(const Vec&)> fn, int dim, int samples = 0);

  int dim() const { return dim_; }
  Kind kind() const { return kind_; }
  std::string name() const;
  bool strictly_convex() const;
  double equiv_lower() const { return c_; }   // c in c|ξ| <= F(ξ)
  double equiv_upper() const { return C_; }   // C in F(ξ) <= C|ξ|
  double reg_eps() const { return eps_; }
  const Anisotropy& base() const;             // regularized kinds only

  double eval(const Vec& xi) const;
  double polar(const Vec& x) const;
  /// Polar evaluation together with the achieved tolerance of the direction
  /// refinement (exact kinds report 0).
  std::pair<double, double> polar_with_tol(const Vec& x) const;
  /// Least-Euclidean-norm element of ∂F(ζ); returns 0 at ζ = 0.
  Vec subgrad(const Vec& zeta) const;
  /// Euclidean projection of x onto the scaled polar ball {F° <= tau}.
  Vec project_polar_ball(const Vec& x, double tau) const;

 private:
  Anisotropy() = default;
  friend Anisotropy regularize(const Anisotropy& a, double eps);

  Kind kind_ = Kind::euclidean;
  int dim_ = 2;
  std::vector<double> weights_;
  double eps_ = 0.0;                          // regularized: F = base + eps*|.|
  std::shared_ptr<const Anisotropy> base_;
  std::function<double(const Vec&)> fn_;      // custom evaluator
  std::vector<Vec> ball_pts_;                 // custom: sampled {F = 1} points
  std::vector<Vec> polar_pts_;                // custom: sampled {F° = 1} points
  double c_ = 1.0, C_ = 1.0;

  void build_custom_tables(int samples);
  double polar_sampled(const Vec& x, double* achieved_tol) const;
};

/// Parameters of the resolvent / Moreau-Yosida solves.
struct ProxConfig {
  double tolerance = 1e-10;  // optimality residual for resolvent solves
  int max_iters = 10000;
  double lambda = 0.1;       // Yosida parameter

  void validate() const;
};

// -- Norm calculus -----------------------------------------------------------

double eval_F(const Anisotropy& a, const Vec& xi);
double eval_polar(const Anisotropy& a, const Vec& x);
Vec subgrad_F(const Anisotropy& a, const Vec& zeta);

/// Minimal-section element of ∂F^p(ξ) = pF^{p-1}(ξ) ∂F(ξ), p > 1.
Vec subgrad_Fp(const Anisotropy& a, double p, const Vec& xi);

/// Resolvent J_{p,λ}(ξ): the unique minimizer of (1/2λ)|η-ξ|² + F^p(η).
Vec resolvent_Fp(const Anisotropy& a, double p, const ProxConfig& cfg, const Vec& xi);

/// Moreau-Yosida envelope (F^p)_λ(ξ) = min_η (1/2λ)|η-ξ|² + F^p(η).
double moreau_yosida_Fp(const Anisotropy& a, double p, const ProxConfig& cfg, const Vec& xi);

/// Yosida approximation (ξ - J_{p,λ}(ξ))/λ = ∇(F^p)_λ(ξ).
Vec yosida_grad_Fp(const Anisotropy& a, double p, const ProxConfig& cfg, const Vec& xi);

/// One resolvent solve yielding envelope value, gradient and minimizer at once.
struct ProxEval {
  Vec resolvent;
  Vec grad;
  double envelope = 0.0;
  double residual = 0.0;  // achieved optimality residual (dimensionless)
};
ProxEval prox_eval_Fp(const Anisotropy& a, double p, const ProxConfig& cfg, const Vec& xi);

/// Threshold K_λ = (λ c^p / (1 - 2^{-1/p})²)^{1/(2-p)}, for 1 < p < 2: above
/// it the envelope satisfies (F^p)_λ(ξ) >= (c^p/2)|ξ|^p.
double k_lambda(const Anisotropy& a, double p, double lambda);

/// The strictly convex norm F + ε|.| with constants (c+ε, C+ε).
Anisotropy regularize(const Anisotropy& a, double eps);

/// Least-norm point of the convex hull of `pts` (Wolfe's algorithm).
Vec min_norm_point(const std::vector<Vec>& pts);

}  // namespace anisocap
