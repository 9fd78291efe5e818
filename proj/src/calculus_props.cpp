#include "anisocap/calculus_props.hpp"

#include <cmath>
#include <random>
#include <stdexcept>

namespace anisocap {

namespace {

Vec random_dir(std::mt19937_64& rng, int dim) {
  std::normal_distribution<double> g(0.0, 1.0);
  Vec v = Vec::zero(dim);
  double n = 0.0;
  do {
    for (int i = 0; i < dim; ++i) v[i] = g(rng);
    n = v.norm();
  } while (n < 1e-12);
  return v * (1.0 / n);
}

// Bipolar evaluation F°°(ξ) = sup_d ξ·d / F°(d) over a cached direction
// table plus a local ternary refinement (2-D) of the best angle.
class Bipolar {
 public:
  Bipolar(const Anisotropy& a, int samples) : a_(a) {
    int dim = a.dim();
    if (dim == 2) {
      for (int k = 0; k < samples; ++k) {
        double th = 2.0 * M_PI * k / samples;
        dirs_.emplace_back(std::cos(th), std::sin(th));
      }
    } else {
      for (int k = 0; k < samples; ++k) {
        double z = 1.0 - 2.0 * (k + 0.5) / samples;
        double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
        double th = 2.39996 * k;
        dirs_.emplace_back(rho * std::cos(th), rho * std::sin(th), z);
      }
    }
    polar_.reserve(dirs_.size());
    for (const Vec& d : dirs_) polar_.push_back(a.polar(d));
  }

  double eval(const Vec& xi) const {
    double best = 0.0;
    std::size_t bk = 0;
    for (std::size_t k = 0; k < dirs_.size(); ++k) {
      double v = xi.dot(dirs_[k]) / polar_[k];
      if (v > best) {
        best = v;
        bk = k;
      }
    }
    if (a_.dim() == 2) {
      double th0 = 2.0 * M_PI * static_cast<double>(bk) / static_cast<double>(dirs_.size());
      double half = 2.0 * 2.0 * M_PI / static_cast<double>(dirs_.size());
      auto f = [&](double th) {
        Vec d(std::cos(th), std::sin(th));
        return xi.dot(d) / a_.polar(d);
      };
      double lo = th0 - half, hi = th0 + half;
      for (int it = 0; it < 60 && hi - lo > 1e-12; ++it) {
        double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
        if (f(m1) < f(m2))
          lo = m1;
        else
          hi = m2;
      }
      best = std::max(best, f(0.5 * (lo + hi)));
    } else {
      // shrinking grid search on the tangent plane: robust for cone maxima
      Vec d = dirs_[bk];
      Vec e = std::fabs(d[0]) < 0.9 ? Vec(1, 0, 0) : Vec(0, 1, 0);
      Vec u(d[1] * e[2] - d[2] * e[1], d[2] * e[0] - d[0] * e[2], d[0] * e[1] - d[1] * e[0]);
      u = u * (1.0 / u.norm());
      Vec v(d[1] * u[2] - d[2] * u[1], d[2] * u[0] - d[0] * u[2], d[0] * u[1] - d[1] * u[0]);
      auto f = [&](double al, double be) {
        Vec w = d + u * al + v * be;
        return xi.dot(w) / a_.polar(w);
      };
      double a0 = 0.0, b0 = 0.0;
      double half = 3.0 * std::sqrt(4.0 * M_PI / static_cast<double>(dirs_.size()));
      for (int round = 0; round < 14; ++round) {
        double ba = a0, bb = b0, bf = f(a0, b0);
        for (int i = -4; i <= 4; ++i) {
          for (int j = -4; j <= 4; ++j) {
            double fv = f(a0 + half * i / 4.0, b0 + half * j / 4.0);
            if (fv > bf) {
              bf = fv;
              ba = a0 + half * i / 4.0;
              bb = b0 + half * j / 4.0;
            }
          }
        }
        a0 = ba;
        b0 = bb;
        half *= 0.25;
      }
      best = std::max(best, f(a0, b0));
    }
    return best;
  }

 private:
  const Anisotropy& a_;
  std::vector<Vec> dirs_;
  std::vector<double> polar_;
};

void record(PropReport& rep, const std::string& name, double worst, double tol) {
  PropCheck c;
  c.name = name;
  c.worst = worst;
  c.tolerance = tol;
  c.pass = worst <= tol;
  rep.pass = rep.pass && c.pass;
  rep.checks.push_back(c);
}

}  // namespace

const PropCheck& PropReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw std::out_of_range("no such property check: " + name);
}

PropReport run_calculus_properties(const Anisotropy& a, double p, std::uint64_t seed, int npoints,
                                   int fd_points) {
  PropReport rep;
  rep.kind = a.name();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  const int dim = a.dim();
  const double C = a.equiv_upper();
  const double cc = a.equiv_lower();

  // Homogeneity and evenness.
  {
    double worst = 0.0;
    for (int k = 0; k < npoints; ++k) {
      Vec xi = random_dir(rng, dim) * std::exp(4.0 * (unif(rng) - 0.5));
      double lam = std::exp(6.0 * (unif(rng) - 0.5));
      double f1 = a.eval(xi * lam), f2 = lam * a.eval(xi);
      worst = std::max(worst, std::fabs(f1 - f2) / std::max(f1, 1e-300));
      worst = std::max(worst, std::fabs(a.eval(-xi) - a.eval(xi)) / std::max(a.eval(xi), 1e-300));
    }
    record(rep, "homogeneity_evenness", worst, 1e-12);
  }

  // Bipolarity |F°° - F| <= 1e-6 rel.
  {
    Bipolar bp(a, dim == 2 ? 8192 : 16384);
    double worst = 0.0;
    int n = std::min(npoints, a.kind() == Anisotropy::Kind::custom ? 100 : npoints);
    for (int k = 0; k < n; ++k) {
      Vec xi = random_dir(rng, dim) * std::exp(2.0 * (unif(rng) - 0.5));
      double f = a.eval(xi);
      worst = std::max(worst, std::fabs(bp.eval(xi) - f) / f);
    }
    record(rep, "bipolarity", worst, 1e-6);
  }

  // Subgradient characterization: δ·ζ = F(ζ), F°(δ) <= 1, |δ| <= C.
  {
    double worst_align = 0.0, worst_feas = 0.0, worst_norm = 0.0;
    for (int k = 0; k < npoints; ++k) {
      Vec z = random_dir(rng, dim) * std::exp(4.0 * (unif(rng) - 0.5));
      if (unif(rng) < 0.25) z[static_cast<int>(unif(rng) * dim)] = 0.0;  // hit the kinks too
      Vec d = a.subgrad(z);
      double f = a.eval(z);
      worst_align = std::max(worst_align, std::fabs(d.dot(z) - f) / std::max(f, 1e-300));
      worst_feas = std::max(worst_feas, a.polar(d) - 1.0);
      worst_norm = std::max(worst_norm, d.norm() - C);
    }
    record(rep, "subgrad_alignment", worst_align, 1e-12);
    record(rep, "subgrad_polar_feasible", worst_feas, 1e-8);
    record(rep, "subgrad_norm_bound", worst_norm, 1e-9);
  }

  // Envelope bounds, gradient bound, convexity consequence, K_λ lower bound.
  {
    ProxConfig cfg;
    cfg.lambda = 0.1;
    double worst_env = 0.0, worst_grad = 0.0, worst_cvx = 0.0, worst_kl = 0.0;
    double kl = (p > 1.0 && p < 2.0) ? k_lambda(a, p, cfg.lambda) : 0.0;
    for (int k = 0; k < npoints; ++k) {
      Vec xi = random_dir(rng, dim) * (0.05 + 10.0 * unif(rng));
      ProxEval pe = prox_eval_Fp(a, p, cfg, xi);
      double fp = std::pow(a.eval(xi), p);
      worst_env = std::max(worst_env, (pe.envelope - fp) / std::max(fp, 1e-300));
      double gb = p * std::pow(C, p) * std::pow(xi.norm(), p - 1.0);
      worst_grad = std::max(worst_grad, (pe.grad.norm() - gb) / std::max(gb, 1e-300));
      worst_cvx = std::max(worst_cvx, (pe.envelope - pe.grad.dot(xi)) / std::max(pe.envelope, 1e-300));
      if (p > 1.0 && p < 2.0 && xi.norm() >= kl) {
        double lb = 0.5 * std::pow(cc, p) * std::pow(xi.norm(), p);
        worst_kl = std::max(worst_kl, (lb - pe.envelope) / std::max(lb, 1e-300));
      }
    }
    record(rep, "envelope_upper_bound", worst_env, 1e-10);
    record(rep, "yosida_grad_bound", worst_grad, 1e-9);
    record(rep, "grad_dot_xi_geq_envelope", worst_cvx, 1e-10);
    if (p > 1.0 && p < 2.0) record(rep, "k_lambda_lower_bound", worst_kl, 1e-10);
  }

  // Finite differences of the envelope against the Yosida gradient.
  {
    ProxConfig cfg;
    cfg.lambda = 0.1;
    double worst = 0.0;
    int n = a.kind() == Anisotropy::Kind::custom ? std::min(fd_points, 20) : fd_points;
    for (int k = 0; k < n; ++k) {
      Vec xi = random_dir(rng, dim) * (0.1 + 9.9 * unif(rng));
      Vec g = prox_eval_Fp(a, p, cfg, xi).grad;
      double step = 4e-6 * (1.0 + xi.norm());
      Vec fd = Vec::zero(dim);
      for (int i = 0; i < dim; ++i) {
        Vec hp = xi, hm = xi;
        hp[i] += step;
        hm[i] -= step;
        fd[i] = (moreau_yosida_Fp(a, p, cfg, hp) - moreau_yosida_Fp(a, p, cfg, hm)) / (2.0 * step);
      }
      worst = std::max(worst, (fd - g).norm() / std::max(g.norm(), 1e-300));
    }
    record(rep, "fd_vs_yosida_grad", worst, 1e-4);
  }

  // Monotonicity of the Yosida map.
  {
    ProxConfig cfg;
    cfg.lambda = 0.1;
    double worst = 0.0;
    for (int k = 0; k < npoints / 2; ++k) {
      Vec xi = random_dir(rng, dim) * (0.05 + 5.0 * unif(rng));
      Vec eta = random_dir(rng, dim) * (0.05 + 5.0 * unif(rng));
      Vec gx = prox_eval_Fp(a, p, cfg, xi).grad;
      Vec gy = prox_eval_Fp(a, p, cfg, eta).grad;
      double m = (gx - gy).dot(xi - eta);
      double scale = std::max(1e-300, (gx - gy).norm() * (xi - eta).norm());
      worst = std::max(worst, -m / scale);
    }
    record(rep, "yosida_map_monotone", worst, 1e-12);
  }

  return rep;
}

}  // namespace anisocap
