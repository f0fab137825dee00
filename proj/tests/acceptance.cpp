// Acceptance suite. Random instances come from a generator independent of the
// library's Rng, and every quantity is recomputed here from first principles.

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <limits>
#include <random>
#include <string>
#include <sys/wait.h>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>
#include <Eigen/SVD>

#include "qcoh/channels.hpp"
#include "qcoh/coherence.hpp"
#include "qcoh/dilation.hpp"
#include "qcoh/instruments.hpp"

using namespace qcoh;
using Mat = Eigen::MatrixXcd;
using Vec = Eigen::VectorXcd;
using Clock = std::chrono::steady_clock;

namespace {

std::mt19937_64 gen(20240611);

double uniform(double lo, double hi) { return std::uniform_real_distribution<double>(lo, hi)(gen); }
int uniform_int(int lo, int hi) { return std::uniform_int_distribution<int>(lo, hi)(gen); }

Mat gaussian(int rows, int cols) {
  std::normal_distribution<double> n(0.0, 1.0);
  Mat m(rows, cols);
  for (int i = 0; i < rows; ++i)
    for (int j = 0; j < cols; ++j) m(i, j) = {n(gen), n(gen)};
  return m;
}

Vec unit(int d) {
  Vec v = gaussian(d, 1).col(0);
  return v / v.norm();
}

Mat haar(int d) {
  Eigen::HouseholderQR<Mat> qr(gaussian(d, d));
  Mat q = qr.householderQ();
  const Mat r = qr.matrixQR();
  for (int j = 0; j < d; ++j) q.col(j) *= r(j, j) / std::abs(r(j, j));
  return q;
}

Mat density(int d, int rank) {
  const Mat g = gaussian(d, rank);
  const Mat m = g * g.adjoint();
  return m / m.trace().real();
}

Mat herm(const Mat& m) { return 0.5 * (m + m.adjoint()); }

Eigen::VectorXd spectrum(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(herm(m));
  Eigen::VectorXd v = es.eigenvalues();
  std::sort(v.data(), v.data() + v.size(), std::greater<>());
  return v;
}

double xlog2x(double x) { return x > 1e-300 ? x * std::log2(x) : 0.0; }

double entropy(const Mat& m) {
  double s = 0.0;
  for (double l : spectrum(m)) s -= xlog2x(std::max(l, 0.0));
  return s;
}

double relent(const Mat& rho, const Mat& sigma) {
  Eigen::SelfAdjointEigenSolver<Mat> es(herm(sigma));
  double cross = 0.0;
  for (int k = 0; k < es.eigenvalues().size(); ++k) {
    const double w = (es.eigenvectors().col(k).adjoint() * rho * es.eigenvectors().col(k))(0, 0).real();
    const double l = es.eigenvalues()(k);
    if (l > 1e-13) {
      cross += w * std::log2(l);
    } else if (w > 1e-10) {
      return std::numeric_limits<double>::infinity();
    }
  }
  return -entropy(rho) - cross;
}

Mat kron(const Mat& a, const Mat& b) {
  Mat out(a.rows() * b.rows(), a.cols() * b.cols());
  for (int i = 0; i < a.rows(); ++i)
    for (int j = 0; j < a.cols(); ++j) out.block(i * b.rows(), j * b.cols(), b.rows(), b.cols()) = a(i, j) * b;
  return out;
}

Mat trace_out_second(const Mat& m, int da, int db) {
  Mat out = Mat::Zero(da, da);
  for (int i = 0; i < da; ++i)
    for (int j = 0; j < da; ++j)
      for (int k = 0; k < db; ++k) out(i, j) += m(i * db + k, j * db + k);
  return out;
}

Mat trace_out_first(const Mat& m, int da, int db) {
  Mat out = Mat::Zero(db, db);
  for (int k = 0; k < da; ++k) out += m.block(k * db, k * db, db, db);
  return out;
}

double mutual(const Mat& m, int da, int db) {
  return entropy(trace_out_second(m, da, db)) + entropy(trace_out_first(m, da, db)) - entropy(m);
}

Mat kraus_apply(const std::vector<Mat>& ks, const Mat& rho) {
  Mat out = Mat::Zero(ks.front().rows(), ks.front().rows());
  for (const auto& k : ks) out += k * rho * k.adjoint();
  return out;
}

double off_l1(const Mat& m) {
  double s = 0.0;
  for (int i = 0; i < m.rows(); ++i)
    for (int j = 0; j < m.cols(); ++j)
      if (i != j) s += std::abs(m(i, j));
  return s;
}

Mat dephase_in(const Mat& rho, const Mat& basis) {
  Mat out = Mat::Zero(rho.rows(), rho.cols());
  for (int k = 0; k < basis.cols(); ++k) {
    const Vec b = basis.col(k);
    out += (b.adjoint() * rho * b)(0, 0) * b * b.adjoint();
  }
  return out;
}

Mat sqrt_psd(const Mat& m) {
  Eigen::SelfAdjointEigenSolver<Mat> es(herm(m));
  Eigen::VectorXd r = es.eigenvalues().cwiseMax(0.0).cwiseSqrt();
  return es.eigenvectors() * r.asDiagonal() * es.eigenvectors().adjoint();
}

std::vector<int> random_profile(int d) {
  std::vector<int> p;
  int left = d;
  while (left > 0) {
    const int k = uniform_int(1, left);
    p.push_back(k);
    left -= k;
  }
  return p;
}

struct RandomObservable {
  Mat basis;
  std::vector<int> profile;
  std::vector<Mat> projectors;
  Observable obs;
};

RandomObservable random_observable(int d, std::vector<int> profile) {
  const Mat u = haar(d);
  RealVector values;
  std::vector<Mat> proj;
  int start = 0;
  for (std::size_t n = 0; n < profile.size(); ++n) {
    values.push_back(static_cast<double>(profile.size() - n) + uniform(0.0, 0.5));
    const Mat b = u.middleCols(start, profile[n]);
    proj.push_back(b * b.adjoint());
    start += profile[n];
  }
  return {u, profile, proj, Observable::from_grouped_basis(u, values, profile)};
}

Mat luders_oracle(const std::vector<Mat>& proj, const Mat& rho) {
  Mat out = Mat::Zero(rho.rows(), rho.cols());
  for (const auto& p : proj) out += p * rho * p;
  return out;
}

// vec(K X K^dagger) = (conj(K) (x) K) vec(X), column-major vec.
Mat superoperator(const std::vector<Mat>& ks) {
  const int d = static_cast<int>(ks.front().rows());
  Mat s = Mat::Zero(d * d, d * d);
  for (const auto& k : ks) s += kron(k.conjugate(), k);
  return s;
}

Mat nullspace(const Mat& m, double cut) {
  Eigen::JacobiSVD<Mat> svd(m, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  int rank = 0;
  for (int i = 0; i < sv.size(); ++i)
    if (sv(i) > cut) ++rank;
  return svd.matrixV().rightCols(m.cols() - rank);
}

std::vector<Mat> gio_kraus(const Mat& v) {
  std::vector<Mat> ks;
  for (int n = 0; n < v.rows(); ++n) ks.push_back(v.row(n).transpose().asDiagonal());
  return ks;
}

Mat gram(const Mat& v) {
  const int d = static_cast<int>(v.cols());
  Mat c(d, d);
  for (int i = 0; i < d; ++i)
    for (int j = 0; j < d; ++j) c(i, j) = v.col(i).dot(v.col(j));
  return c;
}

Mat unit_columns(int r, int d) {
  Mat v(r, d);
  for (int i = 0; i < d; ++i) v.col(i) = unit(r);
  return v;
}

KrausChannel wrap(const std::vector<Mat>& ks) { return KrausChannel(ks); }

struct Criterion {
  int number;
  std::string what;
  double worst = 0.0;
  bool ok = true;
  std::string detail;

  void at_most(double value, double tol) {
    worst = std::max(worst, value);
    if (!(value <= tol)) ok = false;
  }
};

int failures = 0;

void report(const Criterion& c) {
  std::printf("criterion %2d: %s  %s  worst=%.3e%s%s\n", c.number, c.ok ? "PASS" : "FAIL", c.what.c_str(), c.worst,
              c.detail.empty() ? "" : "  ", c.detail.c_str());
  std::fflush(stdout);
  if (!c.ok) ++failures;
}

void run_guarded(Criterion& c, const std::function<void(Criterion&)>& body) {
  try {
    body(c);
  } catch (const std::exception& e) {
    c.ok = false;
    c.detail = std::string("exception: ") + e.what();
  }
  report(c);
}

double seconds_since(Clock::time_point t0) {
  return std::chrono::duration<double>(Clock::now() - t0).count();
}

void criterion1(Criterion& c) {
  const auto t0 = Clock::now();
  for (int t = 0; t < 100; ++t) {
    const int d = uniform_int(2, 8);
    const int r = uniform_int(1, d);
    const Mat v = unit_columns(r, d);
    const KrausChannel ch = gio_from_vectors(v);
    const Mat cm = gram(v);
    c.at_most((correlation_matrix_of(ch).entries - cm).norm(), 1e-10);
    for (int s = 0; s < 5; ++s) {
      const Mat rho = density(d, uniform_int(1, d));
      const Mat schur = cm.transpose().cwiseProduct(rho);
      c.at_most((apply(ch, DensityMatrix(rho)).matrix() - schur).norm(), 1e-10);
      c.at_most((kraus_apply(gio_kraus(v), rho) - schur).norm(), 1e-10);
    }
  }
  const double secs = seconds_since(t0);
  if (secs > 5.0) c.ok = false;
  char buf[64];
  std::snprintf(buf, sizeof buf, "runtime=%.3fs (limit 5s)", secs);
  c.detail = buf;
}

void criterion2(Criterion& c) {
  for (int t = 0; t < 100; ++t) {
    const int d = uniform_int(2, 8);
    std::vector<Mat> ks;
    if (t % 2 == 0) {
      ks = gio_kraus(unit_columns(uniform_int(1, d), d));
    } else {
      const int m = uniform_int(2, 4);
      std::vector<double> w(m);
      double total = 0.0;
      for (auto& x : w) total += (x = uniform(0.05, 1.0));
      for (int k = 0; k < m; ++k) ks.push_back(std::sqrt(w[k] / total) * haar(d));
    }
    const KrausChannel ch = wrap(ks);
    if (!ch.unital()) c.ok = false;
    for (int s = 0; s < 3; ++s) {
      const Mat rho = density(d, uniform_int(1, d));
      const Mat out = apply(ch, DensityMatrix(rho)).matrix();
      const Eigen::VectorXd a = spectrum(out);
      const Eigen::VectorXd b = spectrum(rho);
      double pa = 0.0;
      double pb = 0.0;
      for (int k = 0; k < d; ++k) {
        pa += a(k);
        pb += b(k);
        c.at_most(pa - pb, 1e-9);
      }
      c.at_most(entropy(rho) - entropy(out), 1e-9);
    }
  }
}

void criterion3(Criterion& c) {
  double worst_pyth = 0.0;
  for (int t = 0; t < 20; ++t) {
    const int d = uniform_int(2, 6);
    const RandomObservable r = random_observable(d, random_profile(d));
    const Mat rho = density(d, uniform_int(1, d));
    const Mat lr = luders_oracle(r.projectors, rho);
    c.at_most((luders(DensityMatrix(rho), r.obs).matrix() - lr).norm(), 1e-10);
    const double dist_l = (rho - lr).norm();
    for (int s = 0; s < 200; ++s) {
      Mat sigma = Mat::Zero(d, d);
      int start = 0;
      for (int n : r.profile) {
        const Mat b = r.basis.middleCols(start, n);
        sigma += b * density(n, uniform_int(1, n)) * b.adjoint() * uniform(0.05, 1.0);
        start += n;
      }
      sigma /= sigma.trace().real();
      c.at_most(dist_l - (rho - sigma).norm(), 1e-12);
      if (s % 20 == 0) {
        Mat full = Mat::Zero(d, d);
        start = 0;
        for (int n : r.profile) {
          const Mat b = r.basis.middleCols(start, n);
          full += b * density(n, n) * b.adjoint() * uniform(0.05, 1.0);
          start += n;
        }
        full /= full.trace().real();
        const double lhs = relent(rho, full);
        const double rhs = relent(rho, lr) + relent(lr, full);
        worst_pyth = std::max(worst_pyth, std::abs(lhs - rhs));
      }
    }
  }
  if (!(worst_pyth <= 1e-8)) c.ok = false;
  char buf[64];
  std::snprintf(buf, sizeof buf, "pythagorean=%.3e (tol 1e-8)", worst_pyth);
  c.detail = buf;
}

void criterion4(Criterion& c) {
  double worst_opt = 0.0;
  for (int t = 0; t < 50; ++t) {
    const int d = uniform_int(2, 7);
    const RandomObservable r = random_observable(d, random_profile(d));
    const Mat rho_m = density(d, uniform_int(1, d));
    const DensityMatrix rho(rho_m);
    Mat fine(d, d);
    int start = 0;
    for (int n : r.profile) {
      fine.middleCols(start, n) = r.basis.middleCols(start, n) * haar(n);
      start += n;
    }
    const FineGraining fg = FineGraining::from_basis(r.obs, fine);

    const Mat in_fine = fine.adjoint() * rho_m * fine;
    double coarse_l1 = 0.0;
    std::vector<int> block;
    for (std::size_t n = 0; n < r.profile.size(); ++n) block.insert(block.end(), r.profile[n], static_cast<int>(n));
    for (int i = 0; i < d; ++i)
      for (int j = 0; j < d; ++j)
        if (block[i] != block[j]) coarse_l1 += std::abs(in_fine(i, j));
    const double fine_l1 = off_l1(in_fine);
    const Mat lr = luders_oracle(r.projectors, rho_m);
    const Mat dr = dephase_in(rho_m, fine);
    const double coarse_re = entropy(lr) - entropy(rho_m);
    const double fine_re = entropy(dr) - entropy(rho_m);

    c.at_most(std::abs(c_l1_coarse(rho, r.obs, fg) - coarse_l1), 1e-10);
    c.at_most(std::abs(c_l1(rho, fg.basis()) - fine_l1), 1e-10);
    c.at_most(std::abs(c_re_coarse(rho, r.obs) - coarse_re), 1e-8);
    c.at_most(coarse_l1 - fine_l1, 1e-10);
    c.at_most(coarse_re - fine_re, 1e-10);
    c.at_most(std::abs((fine_re - coarse_re) - relent(lr, dr)), 1e-8);
    c.at_most(std::abs(hierarchy_gap(rho, r.obs, fg) - relent(lr, dr)), 1e-8);

    Mat star(d, d);
    start = 0;
    for (int n : r.profile) {
      const Mat b = r.basis.middleCols(start, n);
      Eigen::SelfAdjointEigenSolver<Mat> es(herm(b.adjoint() * rho_m * b));
      star.middleCols(start, n) = b * es.eigenvectors();
      start += n;
    }
    worst_opt = std::max(worst_opt, std::abs(entropy(dephase_in(rho_m, star)) - entropy(lr)));
    worst_opt = std::max(worst_opt, std::abs(hierarchy_gap(rho, r.obs, optimal_fine_grain(r.obs, rho))));
  }
  if (!(worst_opt <= 1e-8)) c.ok = false;
  char buf[64];
  std::snprintf(buf, sizeof buf, "optimal gap=%.3e (tol 1e-8)", worst_opt);
  c.detail = buf;
}

void criterion5(Criterion& c) {
  double best_branch = 0.0;
  for (int t = 0; t < 50; ++t) {
    const int da = 2;
    const int db = t % 2 == 0 ? 2 : 3;
    std::vector<int> profile;
    if (db == 2) {
      profile = t % 4 == 0 ? std::vector<int>{2} : std::vector<int>{1, 1};
    } else {
      profile = t % 4 == 1 ? std::vector<int>{2, 1} : std::vector<int>{1, 1, 1};
    }
    const RandomObservable r = random_observable(db, profile);
    const Mat rho = density(da * db, uniform_int(1, da * db));
    const BipartiteState ab(da, db, DensityMatrix(rho));

    std::vector<Mat> lifted;
    for (const auto& p : r.projectors) lifted.push_back(kron(Mat::Identity(da, da), p));
    const Mat lb = luders_oracle(lifted, rho);
    const Mat rho_b = trace_out_first(rho, da, db);
    const double c_ab = entropy(lb) - entropy(rho);
    const double c_b = entropy(luders_oracle(r.projectors, rho_b)) - entropy(rho_b);
    const double info = mutual(rho, da, db);
    const double delta = info - mutual(lb, da, db);

    double holevo = 0.0;
    double branch = 0.0;
    const Mat rho_a = trace_out_second(rho, da, db);
    for (const auto& q : lifted) {
      const Mat cond = q * rho * q;
      const double p = cond.trace().real();
      if (p < 1e-12) continue;
      holevo += p * relent(trace_out_second(cond / p, da, db), rho_a);
      branch += p * mutual(cond / p, da, db);
    }
    if (profile.size() > 1 && profile.size() < static_cast<std::size_t>(db)) best_branch = std::max(best_branch, branch);

    c.at_most(std::abs(delta - (c_ab - c_b)), 1e-8);
    c.at_most(std::abs(luders_discord(ab, r.obs) - delta), 1e-8);
    c.at_most(std::abs(classical_correlation(ab, r.obs) + delta - info), 1e-8);
    c.at_most(std::abs(holevo + branch + delta - info), 1e-8);
    const ClassicalCorrelationTerms terms = classical_correlation_terms(ab, r.obs);
    c.at_most(std::abs(terms.residual - branch), 1e-8);
  }
  if (!(best_branch > 1e-3)) c.ok = false;
  char buf[96];
  std::snprintf(buf, sizeof buf, "max degenerate branch correlation=%.3e (need > 1e-3)", best_branch);
  c.detail = buf;
}

void criterion6(Criterion& c) {
  for (int t = 0; t < 30; ++t) {
    const int d = uniform_int(2, 6);
    const int r = uniform_int(1, d);
    Mat v = unit_columns(r, d);
    // Repeated dynamical vectors enlarge the fixed-point algebra.
    if (t % 3 == 0) v.col(d - 1) = v.col(0);
    const std::vector<Mat> ks = gio_kraus(v);
    const KrausChannel ch = wrap(ks);
    const Mat fixed = nullspace(superoperator(ks) - Mat::Identity(d * d, d * d), 1e-9);
    if (static_cast<int>(commutant(ch).size()) != fixed.cols()) {
      c.ok = false;
      c.detail = "commutant dimension differs from the fixed-point count";
    }
    for (int s = 0; s < 100; ++s) {
      const Vec coeffs = gaussian(static_cast<int>(fixed.cols()), 1).col(0);
      const Vec vx = fixed * coeffs;
      const Mat x = Eigen::Map<const Mat>(vx.data(), d, d);
      const Mat xx = x * x.adjoint();
      Mat lhs = Mat::Zero(d, d);
      for (const auto& k : ks) {
        const Mat comm = x * k - k * x;
        lhs += comm * comm.adjoint();
      }
      c.at_most((lhs - (kraus_apply(ks, xx) - xx)).norm(), 1e-10);
      c.at_most(fixed_point_check(ch, x).identity, 1e-10);
    }
  }
}

void criterion7(Criterion& c) {
  double worst_final = 0.0;
  for (int t = 0; t < 20; ++t) {
    const int d = uniform_int(2, 6);
    Mat v;
    if (t == 0) {
      v = Mat::Zero(2, 2);
      const double p = 0.95;
      v(0, 0) = std::sqrt(p);
      v(0, 1) = std::sqrt(p);
      v(1, 0) = std::sqrt(1 - p);
      v(1, 1) = -std::sqrt(1 - p);
    } else {
      for (;;) {
        v = unit_columns(d, d);
        const Mat g = gram(v);
        double off = 0.0;
        for (int i = 0; i < d; ++i)
          for (int j = 0; j < d; ++j)
            if (i != j) off = std::max(off, std::abs(g(i, j)));
        if (off <= 0.9) break;
      }
    }
    const int dim = static_cast<int>(v.cols());
    const Mat cm = gram(v);
    const KrausChannel ch = gio_from_vectors(v);
    const Mat rho0 = density(dim, dim);
    DensityMatrix rho(rho0);
    for (int n = 1; n <= 200; ++n) {
      rho = apply(ch, rho);
      Mat expect(dim, dim);
      for (int i = 0; i < dim; ++i)
        for (int j = 0; j < dim; ++j) expect(i, j) = std::pow(cm(j, i), n) * rho0(i, j);
      c.at_most((rho.matrix() - expect).norm(), 1e-9);
    }
    double off = 0.0;
    for (int i = 0; i < dim; ++i)
      for (int j = 0; j < dim; ++j)
        if (i != j) off = std::max(off, std::abs(rho.matrix()(i, j)));
    worst_final = std::max(worst_final, off);
    c.at_most(std::abs(max_offdiagonal(iterate(ch, DensityMatrix(rho0), 200).matrix(), computational_basis(dim)) - off),
              1e-12);
  }
  const double bound = std::pow(0.9, 200) + 1e-12;
  if (!(worst_final <= bound)) c.ok = false;
  char buf[96];
  std::snprintf(buf, sizeof buf, "final max off-diagonal=%.3e (bound %.3e)", worst_final, bound);
  c.detail = buf;
}

double model_gap(const DilationModel& m, const std::function<Mat(const Mat&)>& oracle, double& unitarity) {
  const int ds = m.system_dim;
  const int da = m.ancilla_dim;
  const Mat& u = m.joint_unitary;
  unitarity = std::max(unitarity, (u.adjoint() * u - Mat::Identity(ds * da, ds * da)).norm());
  const Mat a0 = m.apparatus_init * m.apparatus_init.adjoint();
  double worst = 0.0;
  for (int s = 0; s < 5; ++s) {
    const Mat rho = density(ds, uniform_int(1, ds));
    const Mat joint = u * kron(rho, a0) * u.adjoint();
    worst = std::max(worst, (trace_out_second(joint, ds, da) - oracle(rho)).norm());
    worst = std::max(worst, (apply(extract_kraus(m), DensityMatrix(rho)).matrix() - oracle(rho)).norm());
  }
  return worst;
}

void criterion8(Criterion& c) {
  double unitarity = 0.0;
  for (int t = 0; t < 10; ++t) {
    const int d = uniform_int(2, 6);
    const Mat basis = haar(d);
    c.at_most(model_gap(dilate_von_neumann(basis), [&](const Mat& rho) { return dephase_in(rho, basis); }, unitarity),
              1e-10);

    const RandomObservable r = random_observable(d, random_profile(d));
    c.at_most(model_gap(dilate_luders(r.obs, FineGraining::of(r.obs)),
                        [&](const Mat& rho) { return luders_oracle(r.projectors, rho); }, unitarity),
              1e-10);

    const Mat v = unit_columns(uniform_int(1, d), d);
    const Mat cm = gram(v);
    c.at_most(model_gap(dilate_gio(gio_from_vectors(v), computational_basis(d)),
                        [&](const Mat& rho) { return Mat(cm.transpose().cwiseProduct(rho)); }, unitarity),
              1e-10);

    // SIO: permutation times diagonal, with each column of the stacked diagonals a unit vector.
    const int k = uniform_int(1, d);
    const Mat w = unit_columns(k, d);
    std::vector<Mat> sio;
    for (int n = 0; n < k; ++n) {
      std::vector<int> perm(d);
      for (int i = 0; i < d; ++i) perm[i] = i;
      std::shuffle(perm.begin(), perm.end(), gen);
      Mat op = Mat::Zero(d, d);
      for (int i = 0; i < d; ++i) op(perm[i], i) = w(n, i);
      sio.push_back(op);
    }
    const KrausChannel sio_ch = wrap(sio);
    c.at_most(model_gap(dilate(sio_ch, computational_basis(d)), [&](const Mat& rho) { return kraus_apply(sio, rho); },
                        unitarity),
              1e-10);

    // IO: measure in the incoherent basis and prepare random incoherent states, mixed with the SIO.
    const double mix = uniform(0.2, 0.8);
    std::vector<Mat> io_ops;
    for (const auto& op : sio) io_ops.push_back(std::sqrt(1 - mix) * op);
    for (int i = 0; i < d; ++i) {
      Mat op = Mat::Zero(d, d);
      op(uniform_int(0, d - 1), i) = std::sqrt(mix);
      io_ops.push_back(op);
    }
    const KrausChannel io_ch = wrap(io_ops);
    c.at_most(model_gap(dilate(io_ch, computational_basis(d)),
                        [&](const Mat& rho) { return kraus_apply(io_ops, rho); }, unitarity),
              1e-10);
  }
  if (!(unitarity <= 1e-8)) c.ok = false;
  char buf[64];
  std::snprintf(buf, sizeof buf, "unitarity=%.3e (tol 1e-8)", unitarity);
  c.detail = buf;
}

void criterion9(Criterion& c) {
  for (int t = 0; t < 30; ++t) {
    const int d = uniform_int(2, 7);
    const RandomObservable r = random_observable(d, random_profile(d));
    const Vec psi = unit(d);
    const Mat rho = psi * psi.adjoint();
    std::vector<ComplexMatrix> theta;
    Mat theta_basis(d, d);
    int start = 0;
    for (int n : r.profile) {
      const Mat block = r.basis.middleCols(start, n) * haar(n);
      theta.push_back(block);
      theta_basis.middleCols(start, n) = block;
      start += n;
    }
    const Mat phi = r.obs.eigenbasis();
    const Mat rho1 = luders_oracle(r.projectors, rho);
    const Mat rho2 = apply(repeatable_instrument(r.obs, theta), DensityMatrix(rho)).matrix();

    c.at_most(std::abs(off_l1(phi.adjoint() * rho1 * phi) - off_l1(theta_basis.adjoint() * rho2 * theta_basis)),
              1e-10);
    const double re1 = entropy(dephase_in(rho1, phi)) - entropy(rho1);
    const double re2 = entropy(dephase_in(rho2, theta_basis)) - entropy(rho2);
    c.at_most(std::abs(re1 - re2), 1e-10);
    c.at_most(std::abs(entropy(rho1) - entropy(rho2)), 1e-10);
    c.at_most(std::abs(c_l1(DensityMatrix(rho2), theta_basis) - c_l1(DensityMatrix(rho1), phi)), 1e-10);
  }
}

void criterion10(Criterion& c) {
  const auto expect = [&](const KrausChannel& ch, IncoherenceClass want) {
    if (classify(ch) != want) {
      c.ok = false;
      c.detail += std::string(to_string(classify(ch))) + " instead of " + std::string(to_string(want)) + "; ";
    }
    for (const auto& k : ch.kraus_ops()) {
      const KrausFactor f = factor_kraus(k);
      c.at_most((f.index_map.matrix() * f.diagonal - k).cwiseAbs().maxCoeff(), 0.0);
    }
  };
  expect(complete_dephasing(computational_basis(2)), IncoherenceClass::GIO);
  expect(bit_flip(0.3), IncoherenceClass::SIO);
  Mat k1 = Mat::Zero(2, 2);
  Mat k2 = Mat::Zero(2, 2);
  k1(0, 0) = 1.0;
  k1(0, 1) = 1.0;
  k2(1, 0) = 1.0;
  k2(1, 1) = -1.0;
  k1 /= std::sqrt(2.0);
  k2 /= std::sqrt(2.0);
  expect(wrap({k1, k2}), IncoherenceClass::IO);
  expect(relabeling_example(), IncoherenceClass::IO);
}

void criterion11(Criterion& c) {
  double worst_proj = 0.0;
  for (int t = 0; t < 50; ++t) {
    const int d = t % 2 == 0 ? 2 : 3;
    const int outcomes = uniform_int(2, 5);
    std::vector<Mat> g;
    Mat s = Mat::Zero(d, d);
    for (int k = 0; k < outcomes; ++k) {
      g.push_back(gaussian(d, d));
      s += g.back().adjoint() * g.back();
    }
    const Mat s_inv_half = sqrt_psd(s).inverse();
    std::vector<Mat> effects;
    for (const auto& gk : g) effects.push_back(herm(s_inv_half * gk.adjoint() * gk * s_inv_half));
    const Povm m(effects);
    const Mat rho = density(d, uniform_int(1, d));
    const DensityMatrix rho_d(rho);

    Mat pinched = Mat::Zero(d, d);
    Mat modified = Mat::Zero(d, d);
    for (const auto& e : effects) {
      pinched += e * rho * e;
      const Mat r = sqrt_psd(e);
      modified += r * rho * r;
    }
    const double cg = relent(rho, pinched);
    const double cmod = relent(rho, modified);
    c.at_most(-cg, 1e-10);
    c.at_most(-cmod, 1e-10);
    c.at_most(-povm_coherence(rho_d, m), 1e-10);
    c.at_most(-povm_coherence_modified(rho_d, m), 1e-10);
    c.at_most(std::abs(povm_coherence(rho_d, m) - cg), 1e-8);

    const Mat basis = haar(d);
    std::vector<Mat> proj;
    for (int k = 0; k < d; ++k) proj.push_back(basis.col(k) * basis.col(k).adjoint());
    const Povm pm(proj);
    const double cre = entropy(dephase_in(rho, basis)) - entropy(rho);
    worst_proj = std::max(worst_proj, std::abs(povm_coherence(rho_d, pm) - cre));
    worst_proj = std::max(worst_proj, std::abs(povm_coherence_modified(rho_d, pm) - cre));
    worst_proj = std::max(worst_proj, std::abs(c_re(rho_d, basis) - cre));
  }
  if (!(worst_proj <= 1e-10)) c.ok = false;
  char buf[64];
  std::snprintf(buf, sizeof buf, "projective reduction=%.3e (tol 1e-10)", worst_proj);
  c.detail = buf;
}

struct Captured {
  int status;
  std::string out;
};

Captured capture(const std::string& cmd) {
  std::FILE* pipe = popen(cmd.c_str(), "r");
  if (pipe == nullptr) return {-1, ""};
  std::string out;
  std::array<char, 4096> buf{};
  while (std::size_t n = std::fread(buf.data(), 1, buf.size(), pipe)) out.append(buf.data(), n);
  const int raw = pclose(pipe);
  return {WIFEXITED(raw) ? WEXITSTATUS(raw) : -1, out};
}

void criterion12(Criterion& c) {
  const std::string cmd = std::string(QCOH_CLI) + " verify --seed 20240611";
  const auto t0 = Clock::now();
  const Captured first = capture(cmd);
  const double secs = seconds_since(t0);
  const Captured second = capture(cmd);
  const Captured json_a = capture(cmd + " --json");
  const Captured json_b = capture(cmd + " --json");
  std::string missing;
  for (int k = 1; k <= 11; ++k) {
    if (first.out.find("[criterion " + std::to_string(k) + "]") == std::string::npos) missing += std::to_string(k) + " ";
  }
  c.ok = first.status == 0 && second.status == 0 && first.out == second.out && json_a.out == json_b.out &&
         !first.out.empty() && missing.empty() && secs <= 60.0;
  char buf[160];
  std::snprintf(buf, sizeof buf, "runtime=%.2fs (limit 60s) exit=%d/%d identical=%s%s%s", secs, first.status,
                second.status, first.out == second.out && json_a.out == json_b.out ? "yes" : "no",
                missing.empty() ? "" : " missing criteria: ", missing.c_str());
  c.detail = buf;
  c.worst = secs;
}

}  // namespace

int main() {
  std::vector<std::pair<Criterion, std::function<void(Criterion&)>>> all = {
      {{1, "GIO action equals the Schur product with C^T"}, criterion1},
      {{2, "unital channels: majorization and entropy increase"}, criterion2},
      {{3, "Lueders map minimizes disturbance; Pythagorean identity"}, criterion3},
      {{4, "coherence hierarchy and relative-entropy gap"}, criterion4},
      {{5, "Lueders discord identity and decomposition"}, criterion5},
      {{6, "fixed points of unital GIO equal the commutant"}, criterion6},
      {{7, "dephasing limit and Schur power law"}, criterion7},
      {{8, "dilation round trips and unitarity"}, criterion8},
      {{9, "repeatable measurement residual coherence"}, criterion9},
      {{10, "classification truth table and exact factorization"}, criterion10},
      {{11, "POVM coherences and projective reduction"}, criterion11},
      {{12, "verify runs under a minute and is bit-reproducible"}, criterion12},
  };
  for (auto& [c, body] : all) run_guarded(c, body);
  std::printf("%d of 12 criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
