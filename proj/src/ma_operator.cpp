#include "mafd/ma_operator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace mafd {

namespace {

constexpr int kMaxDirections = 24;  // 2D width 3 uses 16, 3D width 1 uses 9

double arm_value(const ArmEnd& end, const GridFunction& u) {
  return end.node >= 0 ? u[end.node] : end.boundary_value;
}

double record_value(const DiffRecord& rec, const GridFunction& u, std::int64_t center) {
  return rec.w_plus * arm_value(rec.plus, u) + rec.w_center * u[center] +
         rec.w_minus * arm_value(rec.minus, u);
}

}  // namespace

double resolve_epsilon(const SchemeParams& params, const UniformGrid& grid) {
  if (params.epsilon >= 0.0) return params.epsilon;
  return 1e-8 / (2.0 * grid.h * grid.h);
}

double smooth_max(double a, double b, double delta) {
  const double d = a - b;
  return 0.5 * (a + b + std::sqrt(d * d + delta * delta));
}

double smooth_min(double a, double b, double delta) {
  const double d = a - b;
  return 0.5 * (a + b - std::sqrt(d * d + delta * delta));
}

BoundaryData BoundaryData::from_node_values(const GridFunction& u) {
  // Face-multilinear interpolation: at a boundary point the pinned axis has
  // local weight 0 or 1, so only that face's node values contribute.
  auto stored = std::make_shared<GridFunction>(u);
  return BoundaryData([stored](const Point& p) { return eval_multilinear(*stored, p); });
}

DiffRecord make_diff_record(const UniformGrid& grid, const BoundaryData& g, const Index& node,
                            const Direction& nu) {
  if (!grid.is_interior(node))
    throw std::invalid_argument("make_diff_record: node must be interior");

  const double nu_norm = std::sqrt(double(nu[0]) * nu[0] + double(nu[1]) * nu[1] +
                                   double(nu[2]) * nu[2]);
  DiffRecord rec;
  for (int sign = 0; sign < 2; ++sign) {
    const int s = sign == 0 ? 1 : -1;
    ArmEnd& end = sign == 0 ? rec.plus : rec.minus;
    Index far{0, 0, 0};
    bool inside = true;
    for (int k = 0; k < grid.dim; ++k) {
      far[k] = node[k] + s * nu[k];
      inside = inside && far[k] >= 0 && far[k] <= grid.n - 1;
    }
    if (inside) {
      end.node = grid.linear_index(far);
      end.unknown = grid.interior_index(far);
      end.t = nu_norm * grid.h;
      continue;
    }
    // Shorten to the exact boundary intersection, computed in index space:
    // position(tau) = node + tau * s * nu, tau in (0, 1).
    double tau = std::numeric_limits<double>::infinity();
    for (int k = 0; k < grid.dim; ++k) {
      const int step = s * nu[k];
      if (step > 0)
        tau = std::min(tau, double(grid.n - 1 - node[k]) / step);
      else if (step < 0)
        tau = std::min(tau, double(node[k]) / (-step));
    }
    Point p{0, 0, 0};
    for (int k = 0; k < grid.dim; ++k) {
      const double q = (node[k] + tau * s * nu[k]) * grid.h;
      p[k] = std::min(1.0, std::max(0.0, q));
    }
    end.node = -1;
    end.unknown = -1;
    end.t = tau * nu_norm * grid.h;
    end.boundary_value = g(p);
  }

  const double tp = rec.plus.t, tm = rec.minus.t;
  rec.w_plus = 2.0 / (tp * (tp + tm));
  rec.w_minus = 2.0 / (tm * (tp + tm));
  rec.w_center = -2.0 / (tp * tm);
  return rec;
}

DirectionalDifference second_directional_difference(const GridFunction& u, const BoundaryData& g,
                                                    const Index& node, const Direction& nu) {
  DirectionalDifference out;
  out.record = make_diff_record(u.grid, g, node, nu);
  out.value = record_value(out.record, u, u.grid.linear_index(node));
  return out;
}

DifferencePlan::DifferencePlan(const UniformGrid& grid, const StencilSet& stencil,
                               const BoundaryData& g)
    : grid_(grid), stencil_(stencil), ndirs_(stencil.directions.size()) {
  if (grid.dim != stencil.dim)
    throw std::invalid_argument("DifferencePlan: grid/stencil dimension mismatch");
  if (ndirs_ > kMaxDirections)
    throw std::invalid_argument("DifferencePlan: stencil too wide");
  const std::int64_t mi = grid.num_interior();
  records_.reserve(static_cast<std::size_t>(mi) * ndirs_);
  centers_.reserve(static_cast<std::size_t>(mi));
  for (std::int64_t i = 0; i < mi; ++i) {
    const Index node = grid.interior_multi_index(i);
    centers_.push_back(grid.linear_index(node));
    for (std::size_t d = 0; d < ndirs_; ++d)
      records_.push_back(make_diff_record(grid, g, node, stencil.directions[d]));
  }
}

double DifferencePlan::diff_value(const GridFunction& u, std::int64_t interior, int dir) const {
  return record_value(record(interior, dir), u, centers_[static_cast<std::size_t>(interior)]);
}

void DifferencePlan::diff_values(const GridFunction& u, std::int64_t interior, double* out) const {
  const std::int64_t center = centers_[static_cast<std::size_t>(interior)];
  const DiffRecord* recs = &records_[static_cast<std::size_t>(interior) * ndirs_];
  const double uc = u[center];
  for (std::size_t d = 0; d < ndirs_; ++d) {
    const DiffRecord& r = recs[d];
    out[d] = r.w_plus * arm_value(r.plus, u) + r.w_center * uc + r.w_minus * arm_value(r.minus, u);
  }
}

MonotoneResult ma_monotone(const DifferencePlan& plan, const GridFunction& u,
                           const GridFunction& f) {
  const std::int64_t mi = plan.grid().num_interior();
  MonotoneResult out;
  out.residual.resize(mi);
  out.active_basis.assign(static_cast<std::size_t>(mi), 0);
  double dvals[kMaxDirections];
  const auto& bases = plan.stencil().bases;
  const int dim = plan.grid().dim;
  for (std::int64_t i = 0; i < mi; ++i) {
    plan.diff_values(u, i, dvals);
    double best = std::numeric_limits<double>::infinity();
    int arg = 0;
    for (std::size_t b = 0; b < bases.size(); ++b) {
      double prod = 1.0;
      for (int j = 0; j < dim; ++j) prod *= std::max(0.0, dvals[bases[b][j]]);
      if (prod < best) {
        best = prod;
        arg = static_cast<int>(b);
      }
    }
    out.residual[i] = best - f[plan.center_node(i)];
    out.active_basis[static_cast<std::size_t>(i)] = arg;
  }
  return out;
}

Eigen::VectorXd ma_regularized(const DifferencePlan& plan, const GridFunction& u,
                               const GridFunction& f, double delta) {
  const std::int64_t mi = plan.grid().num_interior();
  Eigen::VectorXd res(mi);
  double dvals[kMaxDirections];
  const auto& bases = plan.stencil().bases;
  const int dim = plan.grid().dim;
  for (std::int64_t i = 0; i < mi; ++i) {
    plan.diff_values(u, i, dvals);
    double folded = 0.0;
    for (std::size_t b = 0; b < bases.size(); ++b) {
      double prod = 1.0;
      for (int j = 0; j < dim; ++j) prod *= smooth_max(dvals[bases[b][j]], 0.0, delta);
      folded = (b == 0) ? prod : smooth_min(folded, prod, delta);
    }
    res[i] = folded - f[plan.center_node(i)];
  }
  return res;
}

namespace {

// Adds the three-point stencil of direction `dir` at interior row i, scaled
// by coef, into the triplet list (interior columns only).
void add_direction_stencil(std::vector<Eigen::Triplet<double>>& trips, const DiffRecord& rec,
                           std::int64_t i, double coef, double& diag) {
  if (rec.plus.unknown >= 0)
    trips.emplace_back(static_cast<int>(i), static_cast<int>(rec.plus.unknown),
                       coef * rec.w_plus);
  if (rec.minus.unknown >= 0)
    trips.emplace_back(static_cast<int>(i), static_cast<int>(rec.minus.unknown),
                       coef * rec.w_minus);
  diag += coef * rec.w_center;
}

}  // namespace

Eigen::SparseMatrix<double> jacobian_monotone(const DifferencePlan& plan, const GridFunction& u,
                                              const std::vector<int>& active_basis,
                                              double epsilon) {
  const std::int64_t mi = plan.grid().num_interior();
  const int dim = plan.grid().dim;
  const auto& bases = plan.stencil().bases;
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(mi) * (2 * dim + 1));
  double dvals[kMaxDirections];
  for (std::int64_t i = 0; i < mi; ++i) {
    plan.diff_values(u, i, dvals);
    const auto& basis = bases[static_cast<std::size_t>(active_basis[static_cast<std::size_t>(i)])];
    double diag = 0.0;
    for (int j = 0; j < dim; ++j) {
      // Cofactor floor: |D| keeps the row at the natural curvature scale even
      // when a factor is negative (non-convex iterate). The literal cofactor
      // would then be negative, breaking monotonicity; clamping it to epsilon
      // alone makes the row ~1e-8 of its neighbors, and the linear solve
      // answers with a wild local spike that no damping can accept. Both
      // choices agree wherever the iterate is direction-convex, in particular
      // at and near solutions.
      double coef = 1.0;
      for (int k = 0; k < dim; ++k)
        if (k != j) coef *= std::max(std::abs(dvals[basis[k]]), epsilon);
      add_direction_stencil(trips, plan.record(i, basis[j]), i, coef, diag);
    }
    trips.emplace_back(static_cast<int>(i), static_cast<int>(i), diag);
  }
  Eigen::SparseMatrix<double> J(mi, mi);
  J.setFromTriplets(trips.begin(), trips.end());
  return J;
}

Eigen::SparseMatrix<double> jacobian_regularized(const DifferencePlan& plan,
                                                 const GridFunction& u, double delta) {
  const std::int64_t mi = plan.grid().num_interior();
  const int dim = plan.grid().dim;
  const auto& bases = plan.stencil().bases;
  const std::size_t nb = bases.size();
  std::vector<Eigen::Triplet<double>> trips;
  trips.reserve(static_cast<std::size_t>(mi) * nb * (2 * dim + 1) / 2);

  double dvals[kMaxDirections];
  std::vector<double> clamped(nb * static_cast<std::size_t>(dim));  // smooth_max per basis slot
  std::vector<double> prods(nb);       // per-basis product
  std::vector<double> dfirst(nb);      // fold partials wrt running value
  std::vector<double> dsecond(nb);     // fold partials wrt the new product
  std::vector<double> weight(nb);      // total weight of each basis product

  for (std::int64_t i = 0; i < mi; ++i) {
    plan.diff_values(u, i, dvals);
    for (std::size_t b = 0; b < nb; ++b) {
      double prod = 1.0;
      for (int j = 0; j < dim; ++j) {
        const double sm = smooth_max(dvals[bases[b][j]], 0.0, delta);
        clamped[b * dim + static_cast<std::size_t>(j)] = sm;
        prod *= sm;
      }
      prods[b] = prod;
    }
    // Forward left fold with smooth_min, recording both partial derivatives:
    // d smooth_min(a,b)/da = (1 - (a-b)/sqrt((a-b)^2+delta^2)) / 2, in (0,1).
    double folded = prods[0];
    for (std::size_t b = 1; b < nb; ++b) {
      const double d = folded - prods[b];
      const double root = std::sqrt(d * d + delta * delta);
      dfirst[b] = 0.5 * (1.0 - d / root);
      dsecond[b] = 0.5 * (1.0 + d / root);
      folded = 0.5 * (folded + prods[b] - root);
    }
    // Backward pass: weight of each product in the final fold value.
    double chain = 1.0;
    for (std::size_t b = nb; b-- > 1;) {
      weight[b] = chain * dsecond[b];
      chain *= dfirst[b];
    }
    weight[0] = chain;

    double diag = 0.0;
    for (std::size_t b = 0; b < nb; ++b) {
      for (int j = 0; j < dim; ++j) {
        double others = 1.0;
        for (int k = 0; k < dim; ++k)
          if (k != j) others *= clamped[b * dim + static_cast<std::size_t>(k)];
        const double a = dvals[bases[b][j]];
        const double dsm = 0.5 * (1.0 + a / std::sqrt(a * a + delta * delta));
        const double coef = weight[b] * others * dsm;
        add_direction_stencil(trips, plan.record(i, bases[b][j]), i, coef, diag);
      }
    }
    trips.emplace_back(static_cast<int>(i), static_cast<int>(i), diag);
  }
  Eigen::SparseMatrix<double> J(mi, mi);
  J.setFromTriplets(trips.begin(), trips.end());
  return J;
}

double max_abs_row_sum(const DifferencePlan& plan, const GridFunction& u,
                       const std::vector<int>& active_basis, double epsilon) {
  const std::int64_t mi = plan.grid().num_interior();
  const int dim = plan.grid().dim;
  const auto& bases = plan.stencil().bases;
  double dvals[kMaxDirections];
  double worst = 0.0;
  for (std::int64_t i = 0; i < mi; ++i) {
    plan.diff_values(u, i, dvals);
    const auto& basis = bases[static_cast<std::size_t>(active_basis[static_cast<std::size_t>(i)])];
    double off = 0.0, diag = 0.0;
    for (int j = 0; j < dim; ++j) {
      double coef = 1.0;
      for (int k = 0; k < dim; ++k)
        if (k != j) coef *= std::max(std::abs(dvals[basis[k]]), epsilon);
      const DiffRecord& rec = plan.record(i, basis[j]);
      if (rec.plus.unknown >= 0) off += coef * rec.w_plus;
      if (rec.minus.unknown >= 0) off += coef * rec.w_minus;
      diag += coef * rec.w_center;
    }
    worst = std::max(worst, off + std::abs(diag));
  }
  return worst;
}

Eigen::VectorXd interior_vector(const GridFunction& u) {
  const std::int64_t mi = u.grid.num_interior();
  Eigen::VectorXd v(mi);
  for (std::int64_t i = 0; i < mi; ++i)
    v[i] = u[u.grid.linear_index(u.grid.interior_multi_index(i))];
  return v;
}

GridFunction to_grid_function(const UniformGrid& grid, const Eigen::VectorXd& interior) {
  GridFunction out{grid, std::vector<double>(static_cast<std::size_t>(grid.num_nodes()), 0.0)};
  for (std::int64_t i = 0; i < grid.num_interior(); ++i)
    out[grid.linear_index(grid.interior_multi_index(i))] = interior[i];
  return out;
}

MonotoneResult ma_monotone(const GridFunction& u, const GridFunction& f, const BoundaryData& g,
                           const StencilSet& stencil, const SchemeParams&) {
  return ma_monotone(DifferencePlan(u.grid, stencil, g), u, f);
}

Eigen::VectorXd ma_regularized(const GridFunction& u, const GridFunction& f,
                               const BoundaryData& g, const StencilSet& stencil,
                               const SchemeParams& params) {
  return ma_regularized(DifferencePlan(u.grid, stencil, g), u, f, params.delta);
}

}  // namespace mafd
