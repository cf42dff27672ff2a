#include "homesched/qp_solver.hpp"

#include <algorithm>
#include <cmath>
#include <optional>
#include <sstream>

namespace homesched {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

struct Boxes {
  Eigen::VectorXd lo, hi;
};

// Per-variable bounds implied by single-coefficient inequality rows.
Boxes derive_boxes(const QuadraticProgram& qp) {
  const int n = qp.cols();
  Boxes bx{Eigen::VectorXd::Constant(n, -kInf), Eigen::VectorXd::Constant(n, kInf)};
  for (int i = 0; i < qp.rows(); ++i) {
    int nz = -1;
    bool single = true;
    for (int j = 0; j < n && single; ++j) {
      if (qp.a_ineq(i, j) != 0.0) {
        if (nz >= 0) single = false;
        nz = j;
      }
    }
    if (!single || nz < 0) continue;
    const double a = qp.a_ineq(i, nz);
    const double bound = qp.b_ineq(i) / a;
    if (a > 0.0)
      bx.hi(nz) = std::min(bx.hi(nz), bound);
    else
      bx.lo(nz) = std::max(bx.lo(nz), bound);
  }
  return bx;
}

// Interval propagation over the derived boxes; catches empty boxes and rows
// that cannot be satisfied by any point inside them.
std::optional<std::string> presolve_infeasible(const QuadraticProgram& qp, const Boxes& bx) {
  const int n = qp.cols();
  for (int j = 0; j < n; ++j) {
    if (bx.lo(j) - bx.hi(j) > 1e-9 * (1.0 + std::abs(bx.lo(j)) + std::abs(bx.hi(j)))) {
      std::ostringstream os;
      os << "presolve: empty bound interval for variable " << j << " [" << bx.lo(j) << ", "
         << bx.hi(j) << "]";
      return os.str();
    }
  }
  auto attainable = [&](const auto& row, double& lo, double& hi) {
    lo = 0.0;
    hi = 0.0;
    for (int j = 0; j < n; ++j) {
      const double a = row(j);
      if (a == 0.0) continue;
      const double at_min = a > 0.0 ? bx.lo(j) : bx.hi(j);
      const double at_max = a > 0.0 ? bx.hi(j) : bx.lo(j);
      if (std::isinf(at_min))
        lo = -kInf;
      else if (std::isfinite(lo))
        lo += a * at_min;
      if (std::isinf(at_max))
        hi = kInf;
      else if (std::isfinite(hi))
        hi += a * at_max;
    }
  };
  for (int i = 0; i < qp.rows(); ++i) {
    double lo, hi;
    attainable(qp.a_ineq.row(i), lo, hi);
    if (lo > qp.b_ineq(i) + 1e-9 * (1.0 + std::abs(qp.b_ineq(i)))) {
      std::ostringstream os;
      os << "presolve: inequality row " << i;
      if (i < static_cast<int>(qp.row_tags.size()))
        os << " (" << to_string(qp.row_tags[i].kind) << ", k=" << qp.row_tags[i].k << ")";
      os << " unsatisfiable: min lhs " << lo << " > rhs " << qp.b_ineq(i);
      return os.str();
    }
  }
  for (int i = 0; i < qp.eq_rows(); ++i) {
    double lo, hi;
    attainable(qp.a_eq.row(i), lo, hi);
    const double f = qp.b_eq(i);
    const double tol = 1e-9 * (1.0 + std::abs(f));
    if (lo > f + tol || hi < f - tol) {
      std::ostringstream os;
      os << "presolve: equality row " << i << " unsatisfiable: rhs " << f << " outside attainable ["
         << lo << ", " << hi << "]";
      return os.str();
    }
  }
  return std::nullopt;
}

Eigen::VectorXd initial_primal(const Boxes& bx) {
  const int n = static_cast<int>(bx.lo.size());
  Eigen::VectorXd x(n);
  for (int j = 0; j < n; ++j) {
    const bool has_lo = std::isfinite(bx.lo(j));
    const bool has_hi = std::isfinite(bx.hi(j));
    if (has_lo && has_hi)
      x(j) = 0.5 * (bx.lo(j) + bx.hi(j));
    else if (has_lo)
      x(j) = bx.lo(j) + 1.0;
    else if (has_hi)
      x(j) = bx.hi(j) - 1.0;
    else
      x(j) = 0.0;
  }
  return x;
}

// Largest alpha with v + alpha*dv >= 0 elementwise (may exceed 1).
double step_length(const Eigen::VectorXd& v, const Eigen::VectorXd& dv) {
  double alpha = kInf;
  for (int i = 0; i < v.size(); ++i) {
    if (dv(i) < 0.0) alpha = std::min(alpha, -v(i) / dv(i));
  }
  return alpha;
}

void fill_scaled_residuals(const QuadraticProgram& qp, QPResult& r, double bscale, double cscale) {
  const Eigen::VectorXd& x = r.primal;
  Eigen::VectorXd rd = qp.q_diag.cwiseProduct(x) + qp.c;
  if (qp.rows() > 0) rd += qp.a_ineq.transpose() * r.ineq_dual;
  if (qp.eq_rows() > 0) rd += qp.a_eq.transpose() * r.eq_dual;
  double rp = 0.0;
  if (qp.rows() > 0) rp = (qp.a_ineq * x - qp.b_ineq).maxCoeff();
  rp = std::max(rp, 0.0);
  if (qp.eq_rows() > 0) rp = std::max(rp, (qp.a_eq * x - qp.b_eq).cwiseAbs().maxCoeff());
  const double pobj = qp.objective(x);
  double dobj = -0.5 * x.cwiseProduct(qp.q_diag).dot(x);
  if (qp.rows() > 0) dobj -= qp.b_ineq.dot(r.ineq_dual);
  if (qp.eq_rows() > 0) dobj -= qp.b_eq.dot(r.eq_dual);
  r.r_primal = rp / bscale;
  r.r_dual = rd.cwiseAbs().maxCoeff() / cscale;
  r.gap = std::abs(pobj - dobj) / (1.0 + std::abs(pobj));
}

// Direct KKT solve for problems without inequality rows.
QPResult solve_equality_only(const QuadraticProgram& qp) {
  const int n = qp.cols();
  const int p = qp.eq_rows();
  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + p, n + p);
  kkt.topLeftCorner(n, n).diagonal() = qp.q_diag;
  if (p > 0) {
    kkt.topRightCorner(n, p) = qp.a_eq.transpose();
    kkt.bottomLeftCorner(p, n) = qp.a_eq;
  }
  Eigen::VectorXd rhs(n + p);
  rhs.head(n) = -qp.c;
  if (p > 0) rhs.tail(p) = qp.b_eq;
  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(kkt);
  Eigen::VectorXd sol = cod.solve(rhs);
  QPResult res;
  res.primal = sol.head(n);
  res.ineq_dual = Eigen::VectorXd::Zero(0);
  res.eq_dual = sol.tail(p);
  const double resid = (kkt * sol - rhs).cwiseAbs().maxCoeff();
  const double scale = 1.0 + rhs.cwiseAbs().maxCoeff();
  fill_scaled_residuals(qp, res, 1.0 + (p ? qp.b_eq.cwiseAbs().maxCoeff() : 0.0),
                        1.0 + qp.c.cwiseAbs().maxCoeff());
  if (resid <= 1e-8 * scale) {
    res.status = SolveStatus::Optimal;
  } else {
    res.status = SolveStatus::NumericalFailure;
    res.note = "singular KKT system (problem unbounded or degenerate)";
  }
  return res;
}

// Snap the converged iterate onto its active set by solving the
// equality-constrained problem; accepted only when it tightens every
// recomputed residual.
void try_polish(const QuadraticProgram& qp, QPResult& res) {
  const int n = qp.cols();
  const int m = qp.rows();
  const int p = qp.eq_rows();
  const Eigen::VectorXd slack = qp.b_ineq - qp.a_ineq * res.primal;

  std::vector<int> active;
  for (int i = 0; i < m; ++i) {
    if (res.ineq_dual(i) > slack(i)) active.push_back(i);
  }
  const int a = static_cast<int>(active.size());

  Eigen::MatrixXd kkt = Eigen::MatrixXd::Zero(n + a + p, n + a + p);
  kkt.topLeftCorner(n, n).diagonal() = qp.q_diag;
  for (int i = 0; i < a; ++i) {
    kkt.block(n + i, 0, 1, n) = qp.a_ineq.row(active[i]);
    kkt.block(0, n + i, n, 1) = qp.a_ineq.row(active[i]).transpose();
  }
  if (p > 0) {
    kkt.block(n + a, 0, p, n) = qp.a_eq;
    kkt.block(0, n + a, n, p) = qp.a_eq.transpose();
  }
  Eigen::VectorXd rhs(n + a + p);
  rhs.head(n) = -qp.c;
  for (int i = 0; i < a; ++i) rhs(n + i) = qp.b_ineq(active[i]);
  if (p > 0) rhs.tail(p) = qp.b_eq;

  Eigen::CompleteOrthogonalDecomposition<Eigen::MatrixXd> cod(kkt);
  Eigen::VectorXd sol = cod.solve(rhs);
  if (!sol.allFinite()) return;

  QPResult cand = res;
  cand.primal = sol.head(n);
  cand.ineq_dual = Eigen::VectorXd::Zero(m);
  for (int i = 0; i < a; ++i) {
    double lam = sol(n + i);
    if (lam < -1e-9) return;  // active-set guess was wrong
    cand.ineq_dual(active[i]) = std::max(lam, 0.0);
  }
  cand.eq_dual = sol.tail(p);

  const ResidualReport before = kkt_residuals(qp, res);
  const ResidualReport after = kkt_residuals(qp, cand);
  if (after.worst() <= std::max(before.worst(), 1e-14)) {
    res.primal = std::move(cand.primal);
    res.ineq_dual = std::move(cand.ineq_dual);
    res.eq_dual = std::move(cand.eq_dual);
  }
}

}  // namespace

const char* to_string(SolveStatus status) {
  switch (status) {
    case SolveStatus::Optimal: return "optimal";
    case SolveStatus::PrimalInfeasible: return "primal_infeasible";
    case SolveStatus::IterationLimit: return "iteration_limit";
    case SolveStatus::NumericalFailure: return "numerical_failure";
  }
  return "?";
}

double ResidualReport::worst() const {
  return std::max({stationarity, complementarity, primal_ineq, primal_eq, dual_feasibility});
}

ResidualReport kkt_residuals(const QuadraticProgram& qp, const QPResult& result) {
  ResidualReport rep;
  const Eigen::VectorXd& x = result.primal;
  Eigen::VectorXd rd = qp.q_diag.cwiseProduct(x) + qp.c;
  if (qp.rows() > 0 && result.ineq_dual.size() == qp.rows())
    rd += qp.a_ineq.transpose() * result.ineq_dual;
  if (qp.eq_rows() > 0 && result.eq_dual.size() == qp.eq_rows())
    rd += qp.a_eq.transpose() * result.eq_dual;
  rep.stationarity = rd.cwiseAbs().maxCoeff();
  if (qp.rows() > 0) {
    const Eigen::VectorXd h = qp.a_ineq * x - qp.b_ineq;
    rep.primal_ineq = std::max(h.maxCoeff(), 0.0);
    if (result.ineq_dual.size() == qp.rows()) {
      rep.complementarity = result.ineq_dual.cwiseProduct(h).cwiseAbs().maxCoeff();
      rep.dual_feasibility = std::max(-result.ineq_dual.minCoeff(), 0.0);
    }
  }
  if (qp.eq_rows() > 0) rep.primal_eq = (qp.a_eq * x - qp.b_eq).cwiseAbs().maxCoeff();
  return rep;
}

QPResult solve(const QuadraticProgram& qp, const SolverSettings& settings) {
  const int n = qp.cols();
  const int m = qp.rows();
  const int p = qp.eq_rows();

  QPResult res;
  if (n == 0 || qp.a_ineq.cols() != n || (p > 0 && qp.a_eq.cols() != n) ||
      qp.q_diag.size() != n) {
    res.note = "malformed problem dimensions";
    return res;
  }
  if (qp.q_diag.minCoeff() < 0.0) {
    res.note = "Q has a negative diagonal entry (not PSD)";
    return res;
  }

  const Boxes boxes = derive_boxes(qp);
  if (auto why = presolve_infeasible(qp, boxes)) {
    res.status = SolveStatus::PrimalInfeasible;
    res.note = *why;
    res.primal = initial_primal(boxes);
    res.ineq_dual = Eigen::VectorXd::Zero(m);
    res.eq_dual = Eigen::VectorXd::Zero(p);
    return res;
  }
  if (m == 0) return solve_equality_only(qp);

  const double bscale =
      1.0 + std::max(qp.b_ineq.cwiseAbs().maxCoeff(), p ? qp.b_eq.cwiseAbs().maxCoeff() : 0.0);
  const double cscale = 1.0 + qp.c.cwiseAbs().maxCoeff();

  Eigen::VectorXd x = initial_primal(boxes);
  Eigen::VectorXd s = (qp.b_ineq - qp.a_ineq * x).cwiseMax(1.0);
  Eigen::VectorXd lam = Eigen::VectorXd::Ones(m);
  Eigen::VectorXd nu = Eigen::VectorXd::Zero(p);

  const double init_dual_norm = 1.0;
  const double reg = 1e-12;
  Eigen::MatrixXd kkt(n + p, n + p);
  Eigen::MatrixXd kkt_reg(n + p, n + p);

  bool converged = false;
  int iter = 0;
  for (iter = 1; iter <= settings.max_iter; ++iter) {
    const Eigen::VectorXd r_dual = qp.q_diag.cwiseProduct(x) + qp.c +
                                   qp.a_ineq.transpose() * lam +
                                   (p ? (qp.a_eq.transpose() * nu).eval()
                                      : Eigen::VectorXd::Zero(n).eval());
    const Eigen::VectorXd r_prim = qp.a_ineq * x + s - qp.b_ineq;
    const Eigen::VectorXd r_eq =
        p ? (qp.a_eq * x - qp.b_eq).eval() : Eigen::VectorXd::Zero(0).eval();
    const double mu = s.dot(lam) / m;

    const double pobj = qp.objective(x);
    double dobj = -0.5 * x.cwiseProduct(qp.q_diag).dot(x) - qp.b_ineq.dot(lam);
    if (p > 0) dobj -= qp.b_eq.dot(nu);
    const double gap_rel = std::abs(pobj - dobj) / (1.0 + std::abs(pobj));
    const double rp_rel =
        std::max(r_prim.cwiseAbs().maxCoeff(), p ? r_eq.cwiseAbs().maxCoeff() : 0.0) / bscale;
    const double rd_rel = r_dual.cwiseAbs().maxCoeff() / cscale;

    if (rp_rel <= settings.tol_primal && rd_rel <= settings.tol_dual &&
        gap_rel <= settings.tol_gap) {
      converged = true;
      break;
    }

    // Infeasible problems drive the duals off to infinity along a Farkas ray.
    const double dual_norm = std::max(lam.cwiseAbs().maxCoeff(),
                                      p ? nu.cwiseAbs().maxCoeff() : 0.0);
    if (dual_norm > 1e6 * init_dual_norm) {
      Eigen::VectorXd yl = lam / dual_norm;
      Eigen::VectorXd yn = p ? (nu / dual_norm).eval() : Eigen::VectorXd::Zero(0).eval();
      Eigen::VectorXd at_y = qp.a_ineq.transpose() * yl;
      if (p > 0) at_y += qp.a_eq.transpose() * yn;
      double by = qp.b_ineq.dot(yl);
      if (p > 0) by += qp.b_eq.dot(yn);
      if (at_y.cwiseAbs().maxCoeff() <= settings.infeasibility_threshold &&
          by < -settings.infeasibility_threshold) {
        res.status = SolveStatus::PrimalInfeasible;
        res.note = "farkas certificate from diverging duals";
        res.farkas.resize(m + p);
        res.farkas.head(m) = yl;
        if (p > 0) res.farkas.tail(p) = yn;
        res.primal = x;
        res.ineq_dual = lam;
        res.eq_dual = nu;
        res.iterations = iter;
        fill_scaled_residuals(qp, res, bscale, cscale);
        return res;
      }
    }

    const Eigen::VectorXd d = (lam.array() / s.array()).min(1e14).matrix();
    kkt.setZero();
    kkt.topLeftCorner(n, n) = qp.a_ineq.transpose() * d.asDiagonal() * qp.a_ineq;
    kkt.topLeftCorner(n, n).diagonal() += qp.q_diag;
    if (p > 0) {
      kkt.topRightCorner(n, p) = qp.a_eq.transpose();
      kkt.bottomLeftCorner(p, n) = qp.a_eq;
    }
    kkt_reg = kkt;
    const double hscale = std::max(1.0, kkt.topLeftCorner(n, n).diagonal().maxCoeff());
    kkt_reg.topLeftCorner(n, n).diagonal().array() += reg * hscale;
    if (p > 0) kkt_reg.bottomRightCorner(p, p).diagonal().array() -= reg * hscale;

    Eigen::LDLT<Eigen::MatrixXd> ldlt(kkt_reg);
    if (ldlt.info() != Eigen::Success) {
      res.status = SolveStatus::NumericalFailure;
      res.note = "KKT factorization failed";
      res.primal = x;
      res.ineq_dual = lam;
      res.eq_dual = nu;
      res.iterations = iter;
      fill_scaled_residuals(qp, res, bscale, cscale);
      return res;
    }

    // Newton direction for a given complementarity target rc:
    //   dlam = (rc - lam.*r_prim)/s + D*A*dx pieces folded into the rhs.
    auto direction = [&](const Eigen::VectorXd& rc, Eigen::VectorXd& dx, Eigen::VectorXd& ds,
                         Eigen::VectorXd& dlam, Eigen::VectorXd& dnu) {
      Eigen::VectorXd rhs(n + p);
      rhs.head(n) =
          -r_dual + qp.a_ineq.transpose() * ((rc - lam.cwiseProduct(r_prim)).cwiseQuotient(s));
      if (p > 0) rhs.tail(p) = -r_eq;
      Eigen::VectorXd sol = ldlt.solve(rhs);
      sol += ldlt.solve(rhs - kkt * sol);  // one refinement pass against the true matrix
      dx = sol.head(n);
      dnu = p ? sol.tail(p).eval() : Eigen::VectorXd::Zero(0).eval();
      ds = -r_prim - qp.a_ineq * dx;
      dlam = (-rc - lam.cwiseProduct(ds)).cwiseQuotient(s);
    };

    Eigen::VectorXd dx_a, ds_a, dl_a, dn_a;
    direction(s.cwiseProduct(lam), dx_a, ds_a, dl_a, dn_a);

    const double tau = 0.995;
    const double ap_aff = std::min(1.0, step_length(s, ds_a));
    const double ad_aff = std::min(1.0, step_length(lam, dl_a));
    const double mu_aff = (s + ap_aff * ds_a).dot(lam + ad_aff * dl_a) / m;
    const double sigma = std::pow(std::clamp(mu_aff / mu, 0.0, 1.0), 3);

    Eigen::VectorXd rc = s.cwiseProduct(lam) + ds_a.cwiseProduct(dl_a) -
                         Eigen::VectorXd::Constant(m, sigma * mu);
    Eigen::VectorXd dx, ds, dlam, dnu;
    direction(rc, dx, ds, dlam, dnu);

    const double ap = std::min(1.0, tau * step_length(s, ds));
    const double ad = std::min(1.0, tau * step_length(lam, dlam));

    x += ap * dx;
    s += ap * ds;
    lam += ad * dlam;
    if (p > 0) nu += ad * dnu;

    if (!x.allFinite() || !s.allFinite() || !lam.allFinite() || (p > 0 && !nu.allFinite())) {
      res.status = SolveStatus::NumericalFailure;
      res.note = "non-finite iterate";
      res.primal = x;
      res.ineq_dual = lam;
      res.eq_dual = nu;
      res.iterations = iter;
      return res;
    }
  }

  res.primal = x;
  res.ineq_dual = lam;
  res.eq_dual = nu;
  res.iterations = std::min(iter, settings.max_iter);
  res.status = converged ? SolveStatus::Optimal : SolveStatus::IterationLimit;
  if (converged && settings.polish) try_polish(qp, res);
  fill_scaled_residuals(qp, res, bscale, cscale);
  return res;
}

}  // namespace homesched
