#include <Eigen/Cholesky>
#include <Eigen/QR>

#include <algorithm>
#include <cmath>
#include <sstream>

#include "graphla/errors.hpp"
#include "graphla/solvers.hpp"

namespace graphla {

bool SolveReport::flagged(const std::string& name) const {
  return std::find(flags.begin(), flags.end(), name) != flags.end();
}

std::string SolveReport::to_json() const {
  std::ostringstream os;
  os.precision(17);
  os << "{\"alpha\": " << alpha << ", \"residual_norm\": " << residual_norm
     << ", \"sweeps\": " << sweeps_used << ", \"subspace_dim\": " << subspace_dim_final
     << ", \"flags\": [";
  for (size_t i = 0; i < flags.size(); ++i) {
    if (i) os << ", ";
    os << '"' << flags[i] << '"';
  }
  os << "]}";
  return os.str();
}

namespace {

constexpr const char* kBracketExhausted = "bracket_exhausted";
constexpr const char* kNoiselessAlpha = "noiseless_alpha";
constexpr const char* kZeroData = "zero_data";

// Basis and the cached operator images; V stays orthonormal.
struct Subspace {
  Mat V;   // n x k
  Mat KV;  // m x k
  Mat LV;  // l x k
};

void append_column(Mat& m, const Vec& v) {
  m.conservativeResize(Eigen::NoChange, m.cols() + 1);
  m.col(m.cols() - 1) = v;
}

// Two-pass modified Gram-Schmidt; returns false when the direction is
// already (numerically) inside the span.
bool orthonormalize_against(const Mat& V, Vec& v) {
  const double initial = v.norm();
  if (initial == 0.0) return false;
  for (int pass = 0; pass < 2; ++pass)
    for (Index j = 0; j < V.cols(); ++j) v -= V.col(j).dot(v) * V.col(j);
  const double rem = v.norm();
  if (rem <= 1e-12 * initial) return false;
  v /= rem;
  return true;
}

struct SmallSolve {
  Vec z;
  double residual;  // ||KV z - y||
};

// Projected weighted least squares at a given alpha. gram_k = KV^T KV,
// rhs = KV^T y, gram_l = LV^T diag(w) LV are all k x k / k-sized.
SmallSolve solve_projected(const Mat& gram_k, const Vec& rhs, const Mat& gram_l,
                           const Mat& KV, const Vec& y, double alpha) {
  Mat sys = gram_k + alpha * gram_l;
  sys.diagonal().array() += 1e-14 * (sys.diagonal().maxCoeff() + 1.0);
  Eigen::LDLT<Mat> chol(sys);
  SmallSolve out;
  out.z = chol.solve(rhs);
  out.residual = (KV * out.z - y).norm();
  return out;
}

}  // namespace

SolveReport mmgks_solve(const L2L1Problem& problem, const MmgksConfig& cfg) {
  const LinOp& K = problem.K;
  const LinOp& L = problem.L;
  const Vec& y = problem.y;
  if (!K.valid() || !L.valid()) throw DimensionMismatch("mmgks: empty operator");
  if (y.size() != K.rows()) throw DimensionMismatch("mmgks: y size != K rows");
  if (L.cols() != K.cols()) throw DimensionMismatch("mmgks: L cols != K cols");
  if (cfg.subspace_dim < 2 || cfg.max_sweeps < 1 || cfg.tau <= 1.0)
    throw OutOfBounds("mmgks: invalid config");

  const Index n = K.cols();
  SolveReport report;

  Vec kty = K.apply_adjoint(y);
  const double scale = kty.lpNorm<Eigen::Infinity>();
  if (y.norm() == 0.0 || scale == 0.0) {
    report.x = Vec::Zero(n);
    report.alpha = 0.0;
    report.residual_norm = y.norm();
    report.flags.push_back(kZeroData);
    return report;
  }

  const double eps = cfg.eps_rel * y.cwiseAbs().maxCoeff();
  const double alpha_lo = cfg.bracket_lo * scale;
  const double alpha_hi = cfg.bracket_hi * scale;

  Subspace sub;
  sub.V = kty / kty.norm();
  sub.KV = K.apply(sub.V.col(0));
  sub.LV = L.apply(sub.V.col(0));

  Vec x = Vec::Zero(n);
  if (problem.x0.size() != 0) {
    if (problem.x0.size() != n) throw DimensionMismatch("mmgks: x0 size != K cols");
    Vec v0 = problem.x0;
    if (orthonormalize_against(sub.V, v0)) {
      append_column(sub.V, v0);
      append_column(sub.KV, K.apply(v0));
      append_column(sub.LV, L.apply(v0));
    }
    x = problem.x0;  // first majorization is built at the warm start
  }
  double alpha = cfg.fixed_alpha.value_or(alpha_lo);
  bool bracket_exhausted = false;
  int sweeps = 0;

  for (int sweep = 1; sweep <= cfg.max_sweeps; ++sweep) {
    sweeps = sweep;
    const Vec t = L.apply(x);
    const Vec w = (t.array().square() + eps * eps).rsqrt();

    const Mat gram_k = sub.KV.transpose() * sub.KV;
    const Vec rhs = sub.KV.transpose() * y;
    const Mat lw = sub.LV.array().colwise() * w.array();
    const Mat gram_l = sub.LV.transpose() * lw;

    auto at = [&](double a) {
      return solve_projected(gram_k, rhs, gram_l, sub.KV, y, a);
    };

    SmallSolve chosen;
    bracket_exhausted = false;
    if (cfg.fixed_alpha) {
      alpha = *cfg.fixed_alpha;
      chosen = at(alpha);
    } else if (problem.delta <= 0.0) {
      // Noiseless data: discrepancy has no target, fall back to a small
      // fixed penalty.
      alpha = 1e-6 * scale;
      chosen = at(alpha);
    } else {
      const double lo_target = problem.delta;
      const double hi_target = cfg.tau * problem.delta;
      SmallSolve s_lo = at(alpha_lo);
      SmallSolve s_hi = at(alpha_hi);
      if (s_lo.residual > hi_target) {
        alpha = alpha_lo;  // even the weakest penalty over-shoots the band
        chosen = s_lo;
        bracket_exhausted = true;
      } else if (s_hi.residual < lo_target) {
        alpha = alpha_hi;
        chosen = s_hi;
        bracket_exhausted = true;
      } else {
        double la = std::log(alpha_lo), lb = std::log(alpha_hi);
        double ra = s_lo.residual;
        chosen = s_lo;
        alpha = alpha_lo;
        if (ra >= lo_target && ra <= hi_target) {
          // lower endpoint already inside the band
        } else {
          for (int it = 0; it < 120; ++it) {
            const double lm = 0.5 * (la + lb);
            const double am = std::exp(lm);
            SmallSolve sm = at(am);
            if (sm.residual >= lo_target && sm.residual <= hi_target) {
              alpha = am;
              chosen = sm;
              break;
            }
            if (sm.residual > hi_target)
              lb = lm;
            else
              la = lm;
            if (it == 119) {  // interval collapsed without hitting the band
              alpha = am;
              chosen = sm;
              bracket_exhausted = true;
            }
          }
        }
      }
    }

    const Vec x_new = sub.V * chosen.z;
    if (!x_new.allFinite()) throw NonFinite("mmgks: iterate diverged");
    const double step = (x_new - x).norm();
    const double base = std::max(x_new.norm(), 1e-30);
    x = x_new;

    const Vec t_new = L.apply(x);
    const double fit = 0.5 * chosen.residual * chosen.residual;
    report.objective_l1.push_back(fit + alpha * t_new.lpNorm<1>());
    report.objective_smoothed.push_back(
        fit + alpha * (t_new.array().square() + eps * eps).sqrt().sum());

    if (step <= cfg.x_tol * base && sweep > 1) break;
    if (sub.V.cols() >= n) continue;  // basis already spans the full space

    // Gradient of the majorized quadratic at x seeds the next direction.
    Vec residual_ne =
        K.apply_adjoint(K.apply(x) - y) + alpha * L.apply_adjoint(w.cwiseProduct(L.apply(x)));
    if (orthonormalize_against(sub.V, residual_ne)) {
      append_column(sub.V, residual_ne);
      append_column(sub.KV, K.apply(residual_ne));
      append_column(sub.LV, L.apply(residual_ne));
    }

    if (sub.V.cols() > cfg.subspace_dim) {
      // Restart: keep the solution direction plus the 5 freshest basis
      // vectors, re-orthonormalized.
      const Index keep = std::min<Index>(5, sub.V.cols());
      Mat seed(n, keep + 1);
      seed.col(0) = x.norm() > 0 ? Vec(x / x.norm()) : Vec(sub.V.col(0));
      seed.rightCols(keep) = sub.V.rightCols(keep);
      Eigen::HouseholderQR<Mat> qr(seed);
      Mat q = qr.householderQ() * Mat::Identity(n, keep + 1);
      // Drop directions annihilated by rank loss (x is usually in the span
      // of recent vectors).
      Mat r = qr.matrixQR().topRows(keep + 1).triangularView<Eigen::Upper>();
      Mat fresh(n, 0);
      for (Index j = 0; j < keep + 1; ++j) {
        if (std::abs(r(j, j)) > 1e-12) append_column(fresh, q.col(j));
      }
      sub.V = fresh;
      sub.KV.resize(K.rows(), sub.V.cols());
      sub.LV.resize(L.rows(), sub.V.cols());
      for (Index j = 0; j < sub.V.cols(); ++j) {
        sub.KV.col(j) = K.apply(sub.V.col(j));
        sub.LV.col(j) = L.apply(sub.V.col(j));
      }
    }
  }

  report.x = x;
  report.alpha = alpha;
  report.residual_norm = (K.apply(x) - y).norm();
  report.sweeps_used = sweeps;
  report.subspace_dim_final = sub.V.cols();
  if (bracket_exhausted) report.flags.push_back(kBracketExhausted);
  if (!cfg.fixed_alpha && problem.delta <= 0.0) report.flags.push_back(kNoiselessAlpha);
  return report;
}

}  // namespace graphla
