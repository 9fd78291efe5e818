#include "anisocap/anisotropy.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace anisocap {

namespace {

constexpr double kGoldenAngle = 2.399963229728653;  // pi * (3 - sqrt(5))

// Quasi-uniform direction tables: golden-angle circle in 2-D, Fibonacci
// sphere in 3-D.
std::vector<Vec> direction_table(int dim, int samples) {
  std::vector<Vec> dirs;
  dirs.reserve(static_cast<std::size_t>(samples));
  if (dim == 2) {
    for (int k = 0; k < samples; ++k) {
      double th = std::fmod(k * kGoldenAngle, 2.0 * M_PI);
      dirs.emplace_back(std::cos(th), std::sin(th));
    }
  } else {
    for (int k = 0; k < samples; ++k) {
      double z = 1.0 - 2.0 * (k + 0.5) / samples;
      double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
      double th = k * kGoldenAngle;
      dirs.emplace_back(rho * std::cos(th), rho * std::sin(th), z);
    }
  }
  return dirs;
}

double sqr(double t) { return t * t; }

// Projection of x onto the l1 ball of radius tau (duality partner of linf).
Vec project_l1_ball(const Vec& x, double tau) {
  if (x.norm1() <= tau) return x;
  // Sort |x_i| descending and find the soft threshold.
  std::array<double, 3> ab{};
  int n = x.dim();
  for (int i = 0; i < n; ++i) ab[static_cast<std::size_t>(i)] = std::fabs(x[i]);
  std::sort(ab.begin(), ab.begin() + n, std::greater<double>());
  double cum = 0.0, theta = 0.0;
  for (int k = 0; k < n; ++k) {
    cum += ab[static_cast<std::size_t>(k)];
    double t = (cum - tau) / (k + 1);
    if (k == n - 1 || t >= ab[static_cast<std::size_t>(k + 1)]) {
      theta = t;
      break;
    }
  }
  Vec r = Vec::zero(n);
  for (int i = 0; i < n; ++i) {
    double m = std::fabs(x[i]) - theta;
    r[i] = m > 0 ? (x[i] > 0 ? m : -m) : 0.0;
  }
  return r;
}

Vec project_ellipsoid(const Vec& x, const std::vector<double>& semi_axes) {
  int n = x.dim();
  double inside = 0.0;
  for (int i = 0; i < n; ++i) inside += sqr(x[i] / semi_axes[static_cast<std::size_t>(i)]);
  if (inside <= 1.0) return x;
  auto phi = [&](double nu) {
    double s = 0.0;
    for (int i = 0; i < n; ++i) {
      double a2 = sqr(semi_axes[static_cast<std::size_t>(i)]);
      s += sqr(x[i]) * a2 / sqr(a2 + nu);
    }
    return s - 1.0;
  };
  double lo = 0.0, hi = 1.0;
  while (phi(hi) > 0.0) hi *= 2.0;
  for (int it = 0; it < 200 && (hi - lo) > 1e-16 * (1.0 + hi); ++it) {
    double mid = 0.5 * (lo + hi);
    (phi(mid) > 0.0 ? lo : hi) = mid;
  }
  double nu = 0.5 * (lo + hi);
  Vec r = Vec::zero(n);
  for (int i = 0; i < n; ++i) {
    double a2 = sqr(semi_axes[static_cast<std::size_t>(i)]);
    r[i] = x[i] * a2 / (a2 + nu);
  }
  return r;
}

// Solves the small equality-constrained least squares problem behind Wolfe's
// minor cycle: min |sum a_i s_i| with sum a_i = 1, via the bordered Gram
// system. Returns false if the system is numerically singular.
bool affine_min_norm(const std::vector<Vec>& s, std::vector<double>& alpha) {
  int m = static_cast<int>(s.size());
  int dim = m + 1;
  // Rows: [G 1; 1^T 0] [alpha; mu] = [0; 1]
  std::array<double, 36> A{};
  std::array<double, 6> b{};
  for (int i = 0; i < m; ++i) {
    for (int j = 0; j < m; ++j)
      A[static_cast<std::size_t>(i * dim + j)] = s[static_cast<std::size_t>(i)].dot(s[static_cast<std::size_t>(j)]);
    A[static_cast<std::size_t>(i * dim + m)] = 1.0;
    A[static_cast<std::size_t>(m * dim + i)] = 1.0;
    b[static_cast<std::size_t>(i)] = 0.0;
  }
  b[static_cast<std::size_t>(m)] = 1.0;
  // Gaussian elimination with partial pivoting.
  for (int c = 0; c < dim; ++c) {
    int piv = c;
    for (int r = c + 1; r < dim; ++r)
      if (std::fabs(A[static_cast<std::size_t>(r * dim + c)]) > std::fabs(A[static_cast<std::size_t>(piv * dim + c)])) piv = r;
    if (std::fabs(A[static_cast<std::size_t>(piv * dim + c)]) < 1e-300) return false;
    if (piv != c) {
      for (int j = 0; j < dim; ++j) std::swap(A[static_cast<std::size_t>(c * dim + j)], A[static_cast<std::size_t>(piv * dim + j)]);
      std::swap(b[static_cast<std::size_t>(c)], b[static_cast<std::size_t>(piv)]);
    }
    for (int r = c + 1; r < dim; ++r) {
      double f = A[static_cast<std::size_t>(r * dim + c)] / A[static_cast<std::size_t>(c * dim + c)];
      for (int j = c; j < dim; ++j) A[static_cast<std::size_t>(r * dim + j)] -= f * A[static_cast<std::size_t>(c * dim + j)];
      b[static_cast<std::size_t>(r)] -= f * b[static_cast<std::size_t>(c)];
    }
  }
  std::array<double, 6> sol{};
  for (int r = dim - 1; r >= 0; --r) {
    double acc = b[static_cast<std::size_t>(r)];
    for (int j = r + 1; j < dim; ++j) acc -= A[static_cast<std::size_t>(r * dim + j)] * sol[static_cast<std::size_t>(j)];
    sol[static_cast<std::size_t>(r)] = acc / A[static_cast<std::size_t>(r * dim + r)];
  }
  alpha.assign(static_cast<std::size_t>(m), 0.0);
  for (int i = 0; i < m; ++i) alpha[static_cast<std::size_t>(i)] = sol[static_cast<std::size_t>(i)];
  return true;
}

// Wolfe's min-norm-point over a finite point set given through a linear
// minimization oracle.
Vec min_norm_point_lmo(int dim, const std::function<Vec(const Vec&)>& lmo, const Vec& start) {
  std::vector<Vec> S{start};
  std::vector<double> w{1.0};
  Vec x = start;
  double scale = std::max(1.0, start.norm2());
  for (int major = 0; major < 200; ++major) {
    Vec v = lmo(x);
    scale = std::max(scale, v.norm2());
    if (x.dot(x) - x.dot(v) <= 1e-14 * scale) break;
    S.push_back(v);
    w.push_back(0.0);
    for (int minor = 0; minor < 50; ++minor) {
      std::vector<double> alpha;
      if (!affine_min_norm(S, alpha)) {
        S.pop_back();
        w.pop_back();
        return x;
      }
      bool ok = true;
      for (double av : alpha)
        if (av <= 1e-12) ok = false;
      if (ok) {
        w = alpha;
        break;
      }
      double theta = 1.0;
      for (std::size_t i = 0; i < w.size(); ++i)
        if (alpha[i] <= 1e-12 && w[i] > alpha[i]) theta = std::min(theta, w[i] / (w[i] - alpha[i]));
      for (std::size_t i = 0; i < w.size(); ++i) w[i] += theta * (alpha[i] - w[i]);
      for (std::size_t i = S.size(); i-- > 0;) {
        if (w[i] <= 1e-12) {
          S.erase(S.begin() + static_cast<std::ptrdiff_t>(i));
          w.erase(w.begin() + static_cast<std::ptrdiff_t>(i));
        }
      }
    }
    x = Vec::zero(dim);
    for (std::size_t i = 0; i < S.size(); ++i) x = x + S[i] * w[i];
  }
  return x;
}

}  // namespace

// -- Construction -------------------------------------------------------------

static void check_dim(int dim) {
  if (dim < 2 || dim > 3) throw std::invalid_argument("anisotropy: dimension must be 2 or 3");
}

Anisotropy Anisotropy::euclidean(int dim) {
  check_dim(dim);
  Anisotropy a;
  a.kind_ = Kind::euclidean;
  a.dim_ = dim;
  a.c_ = a.C_ = 1.0;
  return a;
}

Anisotropy Anisotropy::l1(int dim) {
  check_dim(dim);
  Anisotropy a;
  a.kind_ = Kind::l1;
  a.dim_ = dim;
  a.c_ = 1.0;
  a.C_ = std::sqrt(static_cast<double>(dim));
  return a;
}

Anisotropy Anisotropy::linf(int dim) {
  check_dim(dim);
  Anisotropy a;
  a.kind_ = Kind::linf;
  a.dim_ = dim;
  a.c_ = 1.0 / std::sqrt(static_cast<double>(dim));
  a.C_ = 1.0;
  return a;
}

Anisotropy Anisotropy::weighted_l2(const std::vector<double>& weights) {
  check_dim(static_cast<int>(weights.size()));
  for (double w : weights)
    if (!(w > 0.0)) throw std::invalid_argument("weighted-l2: weights must be positive");
  Anisotropy a;
  a.kind_ = Kind::weighted_l2;
  a.dim_ = static_cast<int>(weights.size());
  a.weights_ = weights;
  a.c_ = *std::min_element(weights.begin(), weights.end());
  a.C_ = *std::max_element(weights.begin(), weights.end());
  return a;
}

Anisotropy Anisotropy::custom(std::function<double(const Vec&)> fn, int dim, int samples) {
  check_dim(dim);
  if (!fn) throw std::invalid_argument("custom anisotropy: null evaluator");
  Anisotropy a;
  a.kind_ = Kind::custom;
  a.dim_ = dim;
  a.fn_ = std::move(fn);
  if (samples <= 0) samples = dim == 2 ? 4096 : 16384;
  a.build_custom_tables(samples);
  return a;
}

Anisotropy regularize(const Anisotropy& a, double eps) {
  if (!(eps > 0.0)) throw std::invalid_argument("regularize: eps must be positive");
  if (a.kind() == Anisotropy::Kind::regularized) return regularize(a.base(), a.reg_eps() + eps);
  Anisotropy r;
  r.kind_ = Anisotropy::Kind::regularized;
  r.dim_ = a.dim();
  r.eps_ = eps;
  r.base_ = std::make_shared<Anisotropy>(a);
  r.c_ = a.equiv_lower() + eps;
  r.C_ = a.equiv_upper() + eps;
  return r;
}

const Anisotropy& Anisotropy::base() const {
  if (!base_) throw std::logic_error("base(): not a regularized anisotropy");
  return *base_;
}

std::string Anisotropy::name() const {
  switch (kind_) {
    case Kind::euclidean: return "euclidean";
    case Kind::l1: return "l1";
    case Kind::linf: return "linf";
    case Kind::weighted_l2: return "weighted-l2";
    case Kind::regularized: return "regularized(" + base_->name() + "," + std::to_string(eps_) + ")";
    case Kind::custom: return "custom";
  }
  return "?";
}

bool Anisotropy::strictly_convex() const {
  switch (kind_) {
    case Kind::euclidean:
    case Kind::weighted_l2:
    case Kind::regularized: return true;
    default: return false;
  }
}

void Anisotropy::build_custom_tables(int samples) {
  auto dirs = direction_table(dim_, samples);
  ball_pts_.reserve(dirs.size());
  for (const Vec& d : dirs) {
    double f = fn_(d);
    if (!(f > 0.0) || !std::isfinite(f)) throw std::invalid_argument("custom anisotropy: evaluator not positive on the sphere");
    ball_pts_.push_back(d * (1.0 / f));
  }
  double fmin = std::numeric_limits<double>::infinity(), fmax = 0.0;
  for (std::size_t k = 0; k < dirs.size(); ++k) {
    double f = fn_(dirs[k]);
    fmin = std::min(fmin, f);
    fmax = std::max(fmax, f);
  }
  // Widened by 1%: the constants only feed bounds, not the evaluators.
  c_ = 0.99 * fmin;
  C_ = 1.01 * fmax;
  polar_pts_.reserve(dirs.size());
  for (const Vec& d : dirs) {
    double fp = polar_sampled(d, nullptr);
    polar_pts_.push_back(d * (1.0 / fp));
  }
}

// -- Evaluation ---------------------------------------------------------------

double Anisotropy::eval(const Vec& xi) const {
  require_dim(xi, dim_, "eval_F");
  switch (kind_) {
    case Kind::euclidean: return xi.norm();
    case Kind::l1: return xi.norm1();
    case Kind::linf: return xi.norm_inf();
    case Kind::weighted_l2: {
      double s = 0.0;
      for (int i = 0; i < dim_; ++i) s += sqr(weights_[static_cast<std::size_t>(i)] * xi[i]);
      return std::sqrt(s);
    }
    case Kind::regularized: return base_->eval(xi) + eps_ * xi.norm();
    case Kind::custom: return fn_(xi);
  }
  return 0.0;
}

double Anisotropy::polar_sampled(const Vec& x, double* achieved_tol) const {
  // sup over directions of x.d / F(d); the table provides the bracket and a
  // ternary refinement sharpens it.
  auto value = [&](const Vec& d) { return x.dot(d) / eval(d); };
  double best = -std::numeric_limits<double>::infinity();
  std::size_t best_k = 0;
  if (kind_ == Kind::custom) {
    for (std::size_t k = 0; k < ball_pts_.size(); ++k) {
      double v = x.dot(ball_pts_[k]);
      if (v > best) {
        best = v;
        best_k = k;
      }
    }
  } else {
    // regularized kinds sample on the fly (the table is custom-only)
    int samples = dim_ == 2 ? 4096 : 16384;
    auto dirs = direction_table(dim_, samples);
    for (std::size_t k = 0; k < dirs.size(); ++k) {
      double v = value(dirs[k]);
      if (v > best) {
        best = v;
        best_k = k;
      }
    }
  }
  if (!(best > 0.0)) {  // x = 0
    if (achieved_tol) *achieved_tol = 0.0;
    return 0.0;
  }

  int samples = kind_ == Kind::custom ? static_cast<int>(ball_pts_.size()) : (dim_ == 2 ? 4096 : 16384);
  double spread;
  if (dim_ == 2) {
    double th0 = std::fmod(best_k * kGoldenAngle, 2.0 * M_PI);
    double half = 16.0 * 2.0 * M_PI / samples;
    auto f = [&](double th) { return value(Vec(std::cos(th), std::sin(th))); };
    double lo = th0 - half, hi = th0 + half;
    for (int it = 0; it < 64 && (hi - lo) > 1e-13; ++it) {
      double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
      if (f(m1) < f(m2))
        lo = m1;
      else
        hi = m2;
    }
    double fl = f(lo), fm = f(0.5 * (lo + hi)), fh = f(hi);
    best = std::max({best, fl, fm, fh});
    spread = best - std::min({fl, fm, fh});
  } else {
    Vec d = kind_ == Kind::custom ? ball_pts_[best_k] : direction_table(dim_, samples)[best_k];
    d = d * (1.0 / d.norm());
    Vec e = std::fabs(d[0]) < 0.9 ? Vec(1, 0, 0) : Vec(0, 1, 0);
    Vec u = Vec(d[1] * e[2] - d[2] * e[1], d[2] * e[0] - d[0] * e[2], d[0] * e[1] - d[1] * e[0]);
    u = u * (1.0 / u.norm());
    Vec v(d[1] * u[2] - d[2] * u[1], d[2] * u[0] - d[0] * u[2], d[0] * u[1] - d[1] * u[0]);
    // shrinking grid search on the tangent plane: robust for cone maxima
    double half = 3.0 * std::sqrt(4.0 * M_PI / samples);
    auto f = [&](double al, double be) { return value(d + u * al + v * be); };
    double a0 = 0.0, b0 = 0.0;
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
    double fc = f(a0, b0);
    best = std::max(best, fc);
    spread = std::fabs(fc - f(a0 + half * 8.0, b0)) + std::fabs(fc - f(a0, b0 + half * 8.0));
  }
  if (achieved_tol) *achieved_tol = spread / std::max(best, 1e-300);
  return best;
}

double Anisotropy::polar(const Vec& x) const {
  require_dim(x, dim_, "eval_polar");
  switch (kind_) {
    case Kind::euclidean: return x.norm();
    case Kind::l1: return x.norm_inf();
    case Kind::linf: return x.norm1();
    case Kind::weighted_l2: {
      double s = 0.0;
      for (int i = 0; i < dim_; ++i) s += sqr(x[i] / weights_[static_cast<std::size_t>(i)]);
      return std::sqrt(s);
    }
    default: return polar_sampled(x, nullptr);
  }
}

std::pair<double, double> Anisotropy::polar_with_tol(const Vec& x) const {
  require_dim(x, dim_, "eval_polar");
  switch (kind_) {
    case Kind::euclidean:
    case Kind::l1:
    case Kind::linf:
    case Kind::weighted_l2: return {polar(x), 0.0};
    default: {
      double tol = 0.0;
      double v = polar_sampled(x, &tol);
      return {v, tol};
    }
  }
}

// -- Subgradients -------------------------------------------------------------

Vec Anisotropy::subgrad(const Vec& zeta) const {
  require_dim(zeta, dim_, "subgrad_F");
  const double nz = zeta.norm();
  if (nz == 0.0) return Vec::zero(dim_);
  switch (kind_) {
    case Kind::euclidean: return zeta * (1.0 / nz);
    case Kind::l1: {
      Vec d = Vec::zero(dim_);
      for (int i = 0; i < dim_; ++i) d[i] = zeta[i] > 0 ? 1.0 : (zeta[i] < 0 ? -1.0 : 0.0);
      return d;
    }
    case Kind::linf: {
      // Minimal section of conv{sign(ζ_i) e_i : i in argmax}: the uniform
      // average over the active axes.
      double m = zeta.norm_inf();
      Vec d = Vec::zero(dim_);
      int k = 0;
      for (int i = 0; i < dim_; ++i)
        if (std::fabs(zeta[i]) >= m * (1.0 - 1e-13)) ++k;
      for (int i = 0; i < dim_; ++i)
        if (std::fabs(zeta[i]) >= m * (1.0 - 1e-13)) d[i] = (zeta[i] > 0 ? 1.0 : -1.0) / k;
      return d;
    }
    case Kind::weighted_l2: {
      double f = eval(zeta);
      Vec d = Vec::zero(dim_);
      for (int i = 0; i < dim_; ++i) d[i] = sqr(weights_[static_cast<std::size_t>(i)]) * zeta[i] / f;
      return d;
    }
    case Kind::regularized:
      // δ·(ζ/|ζ|) is constant over ∂F_base(ζ), so the minimal section of the
      // sum is the sum of the minimal section and the smooth term.
      return base_->subgrad(zeta) + zeta * (eps_ / nz);
    case Kind::custom: {
      // ∂F(ζ) is the face of the polar ball exposed by ζ. Two regimes: on a
      // flat face the sampled vertices are near-active and their min-norm
      // point is the minimal section; at a polar-ball vertex the face is a
      // single point which sampling misses by O(spacing), so refine the
      // maximizing direction instead.
      double f = fn_(zeta);
      double bestdot = -std::numeric_limits<double>::infinity();
      std::size_t best_j = 0;
      double best_s = 1.0;
      for (std::size_t j = 0; j < polar_pts_.size(); ++j) {
        double dj = polar_pts_[j].dot(zeta);
        if (dj > bestdot) {
          bestdot = dj;
          best_j = j;
          best_s = 1.0;
        }
        if (-dj > bestdot) {
          bestdot = -dj;
          best_j = j;
          best_s = -1.0;
        }
      }
      std::vector<Vec> active;
      double cut = bestdot * (1.0 - 1e-7);
      for (const Vec& q : polar_pts_) {
        if (q.dot(zeta) >= cut) active.push_back(q);
        if (-q.dot(zeta) >= cut) active.push_back(-q);
      }
      Vec d = min_norm_point(active);
      double dz = d.dot(zeta);
      if (dz > 0) d = d * (f / dz);
      if (polar_sampled(d, nullptr) <= 1.0 + 1e-7 && std::fabs(d.dot(zeta) - f) <= 1e-7 * f) return d;

      // vertex regime: maximize q(dir)·ζ with q(dir) = dir / F°(dir)
      Vec dir = polar_pts_[best_j] * best_s;
      auto qdot = [&](const Vec& w) { return w.dot(zeta) / polar_sampled(w, nullptr); };
      if (dim_ == 2) {
        double th0 = std::atan2(dir[1], dir[0]);
        double half = 32.0 * 2.0 * M_PI / static_cast<double>(polar_pts_.size());
        auto g = [&](double th) { return qdot(Vec(std::cos(th), std::sin(th))); };
        double lo = th0 - half, hi = th0 + half;
        for (int it = 0; it < 70 && hi - lo > 1e-14; ++it) {
          double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
          if (g(m1) < g(m2))
            lo = m1;
          else
            hi = m2;
        }
        double th = 0.5 * (lo + hi);
        dir = Vec(std::cos(th), std::sin(th));
      }
      d = dir * (1.0 / polar_sampled(dir, nullptr));
      dz = d.dot(zeta);
      if (dz > 0) d = d * (f / dz);
      return d;
    }
  }
  return Vec::zero(dim_);
}

Vec min_norm_point(const std::vector<Vec>& pts) {
  if (pts.empty()) throw std::invalid_argument("min_norm_point: empty set");
  auto lmo = [&pts](const Vec& g) {
    const Vec* best = &pts.front();
    double bv = std::numeric_limits<double>::infinity();
    for (const Vec& p : pts) {
      double v = g.dot(p);
      if (v < bv) {
        bv = v;
        best = &p;
      }
    }
    return *best;
  };
  return min_norm_point_lmo(pts.front().dim(), lmo, pts.front());
}

// -- Polar ball projection ----------------------------------------------------

Vec Anisotropy::project_polar_ball(const Vec& x, double tau) const {
  require_dim(x, dim_, "project_polar_ball");
  if (tau <= 0.0) return Vec::zero(dim_);
  switch (kind_) {
    case Kind::euclidean: {
      double nx = x.norm();
      return nx <= tau ? x : x * (tau / nx);
    }
    case Kind::l1: {  // polar ball is the linf box
      Vec r = x;
      for (int i = 0; i < dim_; ++i) r[i] = std::clamp(r[i], -tau, tau);
      return r;
    }
    case Kind::linf: return project_l1_ball(x, tau);
    case Kind::weighted_l2: {
      std::vector<double> axes(weights_.size());
      for (std::size_t i = 0; i < weights_.size(); ++i) axes[i] = tau * weights_[i];
      return project_ellipsoid(x, axes);
    }
    case Kind::regularized: {
      // {F_eps° <= tau} is the base polar ball dilated by the eps*tau
      // Euclidean ball; project onto the base and offset along the residual.
      Vec y = base_->project_polar_ball(x, tau);
      Vec r = x - y;
      double d = r.norm();
      double rad = eps_ * tau;
      if (d <= rad) return x;
      return y + r * (rad / d);
    }
    case Kind::custom: {
      // Projection onto conv{±tau*q_j} through Wolfe's min-norm point of the
      // translated vertex set.
      double fp = polar(x);
      if (fp <= tau) return x;
      auto lmo = [&](const Vec& g) {
        double bv = 0.0;
        std::size_t bj = 0;
        for (std::size_t j = 0; j < polar_pts_.size(); ++j) {
          double v = std::fabs(g.dot(polar_pts_[j]));
          if (v > bv) {
            bv = v;
            bj = j;
          }
        }
        double s = g.dot(polar_pts_[bj]) > 0 ? -1.0 : 1.0;
        return polar_pts_[bj] * (s * tau) - x;
      };
      Vec w = min_norm_point_lmo(dim_, lmo, Vec::zero(dim_) - x);
      return x + w;
    }
  }
  return x;
}

// -- Prox machinery -----------------------------------------------------------

void ProxConfig::validate() const {
  if (!(tolerance > 0.0)) throw std::invalid_argument("ProxConfig: tolerance must be positive");
  if (!(lambda > 0.0)) throw std::invalid_argument("ProxConfig: lambda must be positive");
  if (max_iters <= 0) throw std::invalid_argument("ProxConfig: max_iters must be positive");
}

double eval_F(const Anisotropy& a, const Vec& xi) { return a.eval(xi); }
double eval_polar(const Anisotropy& a, const Vec& x) { return a.polar(x); }
Vec subgrad_F(const Anisotropy& a, const Vec& zeta) { return a.subgrad(zeta); }

Vec subgrad_Fp(const Anisotropy& a, double p, const Vec& xi) {
  if (!(p > 1.0)) throw std::invalid_argument("subgrad_Fp: requires p > 1");
  double f = a.eval(xi);
  if (f == 0.0) return Vec::zero(a.dim());
  return a.subgrad(xi) * (p * std::pow(f, p - 1.0));
}

ProxEval prox_eval_Fp(const Anisotropy& a, double p, const ProxConfig& cfg, const Vec& xi) {
  cfg.validate();
  if (!(p > 1.0)) throw std::invalid_argument("resolvent_Fp: requires p > 1");
  require_dim(xi, a.dim(), "resolvent_Fp");
  ProxEval out;
  out.resolvent = Vec::zero(a.dim());
  out.grad = Vec::zero(a.dim());
  if (xi.norm() == 0.0) return out;

  const double lam = cfg.lambda;
  const double fxi = a.eval(xi);
  // The minimizer solves η = prox_{τF}(ξ) = ξ - Π_{τB°}(ξ) at the unique τ
  // with τ = λ p F^{p-1}(η); τ - λ p F^{p-1}(η(τ)) is strictly increasing.
  double tau_hi = lam * p * std::pow(fxi, p - 1.0) * (1.0 + 1e-12) + 1e-300;
  double tau_lo = 0.0;
  auto eta_of = [&](double tau) { return xi - a.project_polar_ball(xi, tau); };
  auto gap = [&](double tau, const Vec& eta) { return tau - lam * p * std::pow(a.eval(eta), p - 1.0); };

  Vec eta = eta_of(tau_hi);
  double tau = tau_hi;
  double res = std::numeric_limits<double>::infinity();
  int it = 0;
  for (; it < cfg.max_iters; ++it) {
    tau = 0.5 * (tau_lo + tau_hi);
    eta = eta_of(tau);
    double g = gap(tau, eta);
    res = std::fabs(g) / tau_hi;
    if (res <= cfg.tolerance || (tau_hi - tau_lo) <= 1e-17 * tau_hi) break;
    (g < 0.0 ? tau_lo : tau_hi) = tau;
  }
  if (it >= cfg.max_iters)
    throw std::runtime_error("resolvent_Fp: iteration cap exceeded (residual " + std::to_string(res) + ")");
  out.resolvent = eta;
  out.grad = (xi - eta) * (1.0 / lam);
  out.envelope = (xi - eta).norm2() / (2.0 * lam) + std::pow(a.eval(eta), p);
  out.residual = res;
  return out;
}

Vec resolvent_Fp(const Anisotropy& a, double p, const ProxConfig& cfg, const Vec& xi) {
  return prox_eval_Fp(a, p, cfg, xi).resolvent;
}

double moreau_yosida_Fp(const Anisotropy& a, double p, const ProxConfig& cfg, const Vec& xi) {
  return prox_eval_Fp(a, p, cfg, xi).envelope;
}

Vec yosida_grad_Fp(const Anisotropy& a, double p, const ProxConfig& cfg, const Vec& xi) {
  return prox_eval_Fp(a, p, cfg, xi).grad;
}

double k_lambda(const Anisotropy& a, double p, double lambda) {
  if (!(p > 1.0 && p < 2.0)) throw std::invalid_argument("k_lambda: requires 1 < p < 2");
  if (!(lambda > 0.0)) throw std::invalid_argument("k_lambda: requires lambda > 0");
  double c = a.equiv_lower();
  double denom = sqr(1.0 - std::pow(2.0, -1.0 / p));
  return std::pow(lambda * std::pow(c, p) / denom, 1.0 / (2.0 - p));
}

}  // namespace anisocap
