#pragma once

#include <memory>
#include <variant>

#include "graphla/errors.hpp"
#include "graphla/types.hpp"

namespace graphla {

// Value-semantic linear map used wherever a solver only needs products
// with the operator and its transpose. Wraps a sparse matrix, a dense
// matrix, or a trace-wise block structure (the same 1D operator applied
// to every column of a flattened grid).
class LinOp {
 public:
  LinOp() = default;
  explicit LinOp(SpMat m) : impl_(std::make_shared<Storage>(std::move(m))) {}
  explicit LinOp(Mat m) : impl_(std::make_shared<Storage>(std::move(m))) {}

  static LinOp tracewise(SpMat trace_op, Index n_traces) {
    return LinOp(std::make_shared<Storage>(Blocks{std::move(trace_op), n_traces}));
  }

  Index rows() const;
  Index cols() const;
  Vec apply(const Vec& v) const;
  Vec apply_adjoint(const Vec& v) const;

  bool valid() const { return impl_ != nullptr; }

 private:
  struct Blocks {
    SpMat op;
    Index n;
  };
  using Storage = std::variant<SpMat, Mat, Blocks>;
  explicit LinOp(std::shared_ptr<const Storage> s) : impl_(std::move(s)) {}

  std::shared_ptr<const Storage> impl_;
};

inline Index LinOp::rows() const {
  return std::visit(
      [](const auto& s) -> Index {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Blocks>)
          return s.op.rows() * s.n;
        else
          return s.rows();
      },
      *impl_);
}

inline Index LinOp::cols() const {
  return std::visit(
      [](const auto& s) -> Index {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Blocks>)
          return s.op.cols() * s.n;
        else
          return s.cols();
      },
      *impl_);
}

inline Vec LinOp::apply(const Vec& v) const {
  if (v.size() != cols()) throw DimensionMismatch("LinOp::apply: size mismatch");
  return std::visit(
      [&](const auto& s) -> Vec {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Blocks>) {
          Eigen::Map<const Mat> x(v.data(), s.op.cols(), s.n);
          Mat y = s.op * x;
          return Eigen::Map<const Vec>(y.data(), y.size());
        } else {
          return s * v;
        }
      },
      *impl_);
}

inline Vec LinOp::apply_adjoint(const Vec& v) const {
  if (v.size() != rows())
    throw DimensionMismatch("LinOp::apply_adjoint: size mismatch");
  return std::visit(
      [&](const auto& s) -> Vec {
        using T = std::decay_t<decltype(s)>;
        if constexpr (std::is_same_v<T, Blocks>) {
          Eigen::Map<const Mat> y(v.data(), s.op.rows(), s.n);
          Mat x = s.op.transpose() * y;
          return Eigen::Map<const Vec>(x.data(), x.size());
        } else {
          return s.transpose() * v;
        }
      },
      *impl_);
}

}  // namespace graphla
