#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "anisocap/anisotropy.hpp"
#include "anisocap/calculus_props.hpp"

using namespace anisocap;

namespace {

// Independent oracle for the polar: brute-force sup of x·ξ/F(ξ) over a dense
// uniform angle sweep with golden-section refinement around the best angle.
double brute_polar(const std::function<double(const Vec&)>& F, const Vec& x, int n = 200000) {
  double best = 0.0, best_th = 0.0;
  for (int k = 0; k < n; ++k) {
    double th = 2.0 * M_PI * k / n;
    Vec d(std::cos(th), std::sin(th));
    double v = x.dot(d) / F(d);
    if (v > best) {
      best = v;
      best_th = th;
    }
  }
  double lo = best_th - 2.0 * M_PI / n, hi = best_th + 2.0 * M_PI / n;
  auto f = [&](double th) {
    Vec d(std::cos(th), std::sin(th));
    return x.dot(d) / F(d);
  };
  for (int it = 0; it < 80; ++it) {
    double m1 = lo + (hi - lo) / 3.0, m2 = hi - (hi - lo) / 3.0;
    if (f(m1) < f(m2))
      lo = m1;
    else
      hi = m2;
  }
  return std::max(best, f(0.5 * (lo + hi)));
}

// Independent oracle for the Moreau-Yosida envelope: coarse-to-fine grid
// minimization of (1/2λ)|η-ξ|² + F^p(η) over a box around ξ.
double brute_moreau(const std::function<double(const Vec&)>& F, double p, double lambda,
                    const Vec& xi) {
  double cx = xi[0], cy = xi[1];
  double half = 2.0 * (1.0 + xi.norm());
  double best = std::pow(F(xi), p);  // η = ξ candidate
  Vec best_eta = xi;
  for (int round = 0; round < 8; ++round) {
    const int m = 81;
    for (int i = 0; i < m; ++i) {
      for (int j = 0; j < m; ++j) {
        Vec eta(cx - half + 2.0 * half * i / (m - 1), cy - half + 2.0 * half * j / (m - 1));
        double v = (eta - xi).norm2() / (2.0 * lambda) + std::pow(F(eta), p);
        if (v < best) {
          best = v;
          best_eta = eta;
        }
      }
    }
    cx = best_eta[0];
    cy = best_eta[1];
    half *= 2.5 / (m - 1);
  }
  return best;
}

double l1norm(const Vec& v) { return v.norm1(); }

}  // namespace

TEST_CASE("eval_F closed forms") {
  CHECK(eval_F(Anisotropy::l1(), Vec(1, -2)) == doctest::Approx(3.0));
  CHECK(eval_F(Anisotropy::euclidean(), Vec(3, 4)) == doctest::Approx(5.0));
  CHECK(eval_F(regularize(Anisotropy::l1(), 0.5), Vec(1, 0)) == doctest::Approx(1.5));
  CHECK(eval_F(Anisotropy::linf(), Vec(1, -2)) == doctest::Approx(2.0));
  CHECK(eval_F(Anisotropy::weighted_l2({2.0, 0.5}), Vec(1, 2)) == doctest::Approx(std::sqrt(5.0)));
  CHECK_THROWS(eval_F(Anisotropy::l1(3), Vec(1, 2)));
}

TEST_CASE("eval_polar closed forms and sampled kinds") {
  CHECK(eval_polar(Anisotropy::l1(), Vec(1, -2)) == doctest::Approx(2.0));
  CHECK(eval_polar(Anisotropy::euclidean(), Vec(3, 4)) == doctest::Approx(5.0));
  CHECK(eval_polar(Anisotropy::linf(), Vec(1, -2)) == doctest::Approx(3.0));

  auto reg = regularize(Anisotropy::l1(), 1.0);
  auto freg = [](const Vec& v) { return v.norm1() + v.norm(); };
  double oracle = brute_polar(freg, Vec(1, 0));
  CHECK(oracle == doctest::Approx(0.5).epsilon(1e-9));  // maximizer ξ = (t, 0)
  CHECK(eval_polar(reg, Vec(1, 0)) == doctest::Approx(0.5).epsilon(1e-8));

  // random cross-checks against the brute-force sup
  std::mt19937_64 rng(7);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 0; k < 10; ++k) {
    Vec x(u(rng), u(rng));
    CHECK(eval_polar(reg, x) == doctest::Approx(brute_polar(freg, x)).epsilon(1e-7));
  }
}

TEST_CASE("polar reports achieved refinement tolerance") {
  auto reg = regularize(Anisotropy::l1(), 0.3);
  auto [val, tol] = reg.polar_with_tol(Vec(0.7, -1.1));
  CHECK(val > 0.0);
  CHECK(tol <= 1e-8);
}

TEST_CASE("subgrad_F minimal sections") {
  auto l1 = Anisotropy::l1();
  Vec d = subgrad_F(l1, Vec(1, -2));
  CHECK(d[0] == doctest::Approx(1.0));
  CHECK(d[1] == doctest::Approx(-1.0));

  d = subgrad_F(l1, Vec(1, 0));  // minimal section of {1} x [-1,1]
  CHECK(d[0] == doctest::Approx(1.0));
  CHECK(d[1] == doctest::Approx(0.0));

  CHECK(subgrad_F(Anisotropy::euclidean(), Vec::zero(2)).norm() == 0.0);
  CHECK(subgrad_F(l1, Vec::zero(2)).norm() == 0.0);

  // linf at a tie: average of the active signed axes
  d = subgrad_F(Anisotropy::linf(), Vec(2, -2));
  CHECK(d[0] == doctest::Approx(0.5));
  CHECK(d[1] == doctest::Approx(-0.5));
}

TEST_CASE("subgrad_Fp") {
  Vec g = subgrad_Fp(Anisotropy::euclidean(), 2.0, Vec(3, 4));
  CHECK(g[0] == doctest::Approx(6.0));
  CHECK(g[1] == doctest::Approx(8.0));

  // l1, p=2 at the kink (1,0): finite differences of F² along axis 1 give the
  // smooth component; the kink component takes the minimal section, 0.
  auto F2 = [](const Vec& v) { return v.norm1() * v.norm1(); };
  double h = 1e-6;
  double fd0 = (F2(Vec(1 + h, 0)) - F2(Vec(1 - h, 0))) / (2 * h);
  CHECK(fd0 == doctest::Approx(2.0).epsilon(1e-6));
  g = subgrad_Fp(Anisotropy::l1(), 2.0, Vec(1, 0));
  CHECK(g[0] == doctest::Approx(2.0));
  CHECK(g[1] == doctest::Approx(0.0));

  CHECK(subgrad_Fp(Anisotropy::l1(), 1.5, Vec::zero(2)).norm() == 0.0);
  CHECK_THROWS(subgrad_Fp(Anisotropy::l1(), 1.0, Vec(1, 0)));
}

TEST_CASE("moreau_yosida_Fp") {
  ProxConfig cfg;
  cfg.lambda = 0.5;
  CHECK(moreau_yosida_Fp(Anisotropy::l1(), 2.0, cfg, Vec::zero(2)) == 0.0);

  // euclidean, p=2: closed-form quadratic oracle |ξ|²/(1+2λ)
  CHECK(moreau_yosida_Fp(Anisotropy::euclidean(), 2.0, cfg, Vec(1, 0)) ==
        doctest::Approx(1.0 / (1.0 + 2.0 * 0.5)).epsilon(1e-10));

  // l1, p=2, λ=0.1 at (1,1): grid-minimization oracle; symmetric stationary
  // point at η = (5/7, 5/7) gives 140/49.
  cfg.lambda = 0.1;
  double oracle = brute_moreau(l1norm, 2.0, 0.1, Vec(1, 1));
  CHECK(oracle == doctest::Approx(140.0 / 49.0).epsilon(1e-4));
  double env = moreau_yosida_Fp(Anisotropy::l1(), 2.0, cfg, Vec(1, 1));
  CHECK(env == doctest::Approx(140.0 / 49.0).epsilon(1e-9));
  CHECK(env <= 4.0);  // envelope below F²(ξ)
}

TEST_CASE("resolvent_Fp") {
  ProxConfig cfg;
  cfg.lambda = 0.5;
  CHECK(resolvent_Fp(Anisotropy::l1(), 1.5, cfg, Vec::zero(2)).norm() == 0.0);

  Vec r = resolvent_Fp(Anisotropy::euclidean(), 2.0, cfg, Vec(2, 0));  // ξ/(1+2λ)
  CHECK(r[0] == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(r[1] == doctest::Approx(0.0));

  cfg.lambda = 0.1;
  Vec j = resolvent_Fp(Anisotropy::l1(), 1.5, cfg, Vec(1, 1));
  CHECK(j[0] >= 0.0);
  CHECK(j[0] <= 1.0);
  CHECK(j[1] >= 0.0);
  CHECK(j[1] <= 1.0);
  CHECK(j.norm() <= Vec(1, 1).norm() + 1e-12);  // nonexpansive vs J(0) = 0
  CHECK(eval_F(Anisotropy::l1(), j) <= Anisotropy::l1().equiv_upper() * Vec(1, 1).norm() + 1e-12);
}

TEST_CASE("yosida_grad_Fp") {
  ProxConfig cfg;
  cfg.lambda = 0.5;
  CHECK(yosida_grad_Fp(Anisotropy::euclidean(), 2.0, cfg, Vec::zero(2)).norm() == 0.0);

  Vec g = yosida_grad_Fp(Anisotropy::euclidean(), 2.0, cfg, Vec(2, 0));
  CHECK(g[0] == doctest::Approx(2.0).epsilon(1e-10));  // 2ξ/(1+2λ)

  // λ -> 0 converges to the minimal section of ∂F^p
  Vec target = subgrad_Fp(Anisotropy::l1(), 1.5, Vec(1, -2));
  for (double lam : {1e-4, 1e-6}) {
    cfg.lambda = lam;
    Vec y = yosida_grad_Fp(Anisotropy::l1(), 1.5, cfg, Vec(1, -2));
    CHECK((y - target).norm() <= 50.0 * lam + 1e-10);
  }
}

TEST_CASE("k_lambda") {
  auto a = Anisotropy::euclidean();  // c = 1
  double v = k_lambda(a, 1.5, 0.01);
  double denom = std::pow(1.0 - std::pow(2.0, -2.0 / 3.0), 2.0);
  CHECK(v == doctest::Approx(std::pow(0.01 / denom, 2.0)));
  CHECK(v == doctest::Approx(0.00534).epsilon(2e-3));
  CHECK(k_lambda(a, 1.5, 1.0) == doctest::Approx(std::pow(1.0 / denom, 2.0)));
  // λ -> 0 drives the threshold to 0
  CHECK(k_lambda(a, 1.5, 1e-8) < 1e-10);
  CHECK_THROWS(k_lambda(a, 2.5, 0.1));
  CHECK_THROWS(k_lambda(a, 1.5, -1.0));
}

TEST_CASE("regularize") {
  auto reg = regularize(Anisotropy::l1(), 0.5);
  CHECK(reg.eval(Vec(1, 0)) == doctest::Approx(1.5));
  CHECK(reg.equiv_lower() == doctest::Approx(1.5));
  CHECK(reg.equiv_upper() == doctest::Approx(std::sqrt(2.0) + 0.5));
  CHECK(reg.strictly_convex());

  // uniform convergence on the unit sphere as ε -> 0
  auto l1 = Anisotropy::l1();
  for (double epsv : {1e-2, 1e-4}) {
    auto r = regularize(l1, epsv);
    double worst = 0.0;
    for (int k = 0; k < 256; ++k) {
      double th = 2.0 * M_PI * k / 256;
      Vec d(std::cos(th), std::sin(th));
      worst = std::max(worst, std::fabs(r.eval(d) - l1.eval(d)));
    }
    CHECK(worst <= epsv + 1e-15);
  }

  // Wulff shape of F_ε is the ε r-dilation of the base Wulff shape:
  // F_ε°(x) <= r  iff  dist(x, {F° <= r}) <= ε r.
  auto r = regularize(l1, 0.25);
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> u(-2.0, 2.0);
  for (int k = 0; k < 400; ++k) {
    Vec x(u(rng), u(rng));
    Vec pb = l1.project_polar_ball(x, 1.0);
    double dist = (x - pb).norm();
    bool in_dilated = dist <= 0.25 * 1.0 + 1e-12;
    bool in_reg = r.polar(x) <= 1.0 + 1e-7;
    CHECK(in_dilated == in_reg);
  }

  // flattening of nested regularization
  auto rr = regularize(r, 0.25);
  CHECK(rr.reg_eps() == doctest::Approx(0.5));
  CHECK(rr.base().kind() == Anisotropy::Kind::l1);
}

TEST_CASE("custom anisotropy from an evaluator") {
  // a skewed crystalline-ish norm given only as a callable
  auto fn = [](const Vec& v) { return std::max(std::fabs(v[0]) + 0.5 * std::fabs(v[1]), 0.8 * std::fabs(v[1])); };
  auto a = Anisotropy::custom(fn, 2, 1024);
  CHECK(a.eval(Vec(1, 1)) == doctest::Approx(1.5));
  CHECK(a.equiv_lower() <= 0.8);
  CHECK(a.equiv_upper() >= 1.0);

  double op = brute_polar(fn, Vec(1, -1), 100000);
  CHECK(a.polar(Vec(1, -1)) == doctest::Approx(op).epsilon(1e-6));

  std::mt19937_64 rng(3);
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  for (int k = 0; k < 30; ++k) {
    Vec z(u(rng), u(rng));
    if (z.norm() < 1e-6) continue;
    Vec d = a.subgrad(z);
    CHECK(d.dot(z) == doctest::Approx(a.eval(z)).epsilon(1e-8));
    CHECK(a.polar(d) <= 1.0 + 1e-6);
  }
}

TEST_CASE("min_norm_point") {
  Vec m = min_norm_point({Vec(1, 0), Vec(0, 1)});
  CHECK(m[0] == doctest::Approx(0.5).epsilon(1e-9));
  CHECK(m[1] == doctest::Approx(0.5).epsilon(1e-9));
  m = min_norm_point({Vec(1, 1), Vec(2, 1), Vec(1, 2)});
  CHECK((m - Vec(1, 1)).norm() <= 1e-9);
  m = min_norm_point({Vec(-1, -1), Vec(3, 0), Vec(0, 3)});  // hull contains 0
  CHECK(m.norm() <= 1e-6);
}

TEST_CASE("calculus property suite per kind") {
  struct Case {
    Anisotropy a;
    double p;
  };
  std::vector<Case> cases;
  cases.push_back({Anisotropy::euclidean(), 1.5});
  cases.push_back({Anisotropy::l1(), 1.5});
  cases.push_back({Anisotropy::linf(), 1.5});
  cases.push_back({Anisotropy::weighted_l2({2.0, 0.5}), 1.5});
  cases.push_back({regularize(Anisotropy::l1(), 0.1), 1.5});
  cases.push_back({Anisotropy::euclidean(), 3.0});

  for (auto& cse : cases) {
    auto rep = run_calculus_properties(cse.a, cse.p, 0, 300, 40);
    INFO("kind ", rep.kind, " p ", cse.p);
    for (const auto& chk : rep.checks) {
      INFO(chk.name, " worst ", chk.worst, " tol ", chk.tolerance);
      CHECK(chk.pass);
    }
  }
}

TEST_CASE("calculus property suite on a custom norm") {
  auto fn = [](const Vec& v) { return v.norm1() + 0.5 * v.norm(); };
  auto a = Anisotropy::custom(fn, 2);
  auto rep = run_calculus_properties(a, 1.5, 1, 60, 10);
  for (const auto& chk : rep.checks) {
    // custom kinds run at the sampled-hull tolerance
    double tol = std::max(chk.tolerance, 1e-6);
    INFO(chk.name, " worst ", chk.worst, " tol ", tol);
    CHECK(chk.worst <= tol);
  }
}

TEST_CASE("three dimensional calculus") {
  auto a = Anisotropy::l1(3);
  CHECK(a.eval(Vec(1, -2, 3)) == doctest::Approx(6.0));
  CHECK(a.polar(Vec(1, -2, 3)) == doctest::Approx(3.0));
  Vec d = a.subgrad(Vec(1, 0, -2));
  CHECK(d[0] == doctest::Approx(1.0));
  CHECK(d[1] == doctest::Approx(0.0));
  CHECK(d[2] == doctest::Approx(-1.0));

  auto rep = run_calculus_properties(Anisotropy::linf(3), 1.5, 5, 150, 20);
  for (const auto& chk : rep.checks) {
    INFO(chk.name, " worst ", chk.worst);
    CHECK(chk.pass);
  }
}
