#ifndef HARDY_GRID_HPP
#define HARDY_GRID_HPP

#include "hardy/coefficient.hpp"

#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

namespace hardy
{

enum class EndpointKind { regular, singular, infinite };
enum class Side { left, right };
enum class Grading { uniform, log_left, log_right, log_both };

std::string_view to_string(EndpointKind k);
std::string_view to_string(Side s);
std::string_view to_string(Grading g);
EndpointKind endpoint_kind_from_string(std::string_view s);
Grading grading_from_string(std::string_view s);

//! open interval (a,b), -inf <= a < b <= inf, with endpoint metadata
struct Interval
{
  double a = 0.0;
  double b = 1.0;
  EndpointKind left = EndpointKind::regular;
  EndpointKind right = EndpointKind::regular;

  //! validates a<b and that infinite kinds match infinite bounds
  Interval(double a_, double b_, EndpointKind left_, EndpointKind right_);
  Interval() = default;

  //! `(a+b)/2` for finite intervals, `a+1` / `b-1` with one infinite end, 0 otherwise
  double reference_point() const;
  bool contains(double t) const { return t > a && t < b; }
  double endpoint(Side s) const { return s == Side::left ? a : b; }
  EndpointKind kind(Side s) const { return s == Side::left ? left : right; }
};

//! n strictly increasing nodes on [lo, hi]; log gradings are geometric in the
//! distance to the indicated endpoint(s), infinite ends are graded in log t.
std::vector<double> make_grid(const Interval& iv, std::pair<double, double> cutoffs, std::size_t n,
                              Grading grading);

//! Function tabulated on strictly increasing nodes.
//! Cubic Hermite interpolation when derivative data is present, else piecewise linear.
class GridFunction
{
public:
  GridFunction() = default;
  GridFunction(std::vector<double> nodes, std::vector<double> values, std::vector<double> derivs = {},
               EndpointKind left = EndpointKind::regular, EndpointKind right = EndpointKind::regular);

  //! samples `f` (and `df` when given) on the nodes
  static GridFunction sample(std::span<const double> nodes, const CoefficientFn& f,
                             const CoefficientFn* df = nullptr);

  double operator()(double x) const;
  //! derivative of the interpolant
  double derivative(double x) const;

  std::size_t size() const noexcept { return nodes_.size(); }
  const std::vector<double>& nodes() const noexcept { return nodes_; }
  const std::vector<double>& values() const noexcept { return values_; }
  const std::vector<double>& derivatives() const noexcept { return derivs_; }
  bool has_derivatives() const noexcept { return !derivs_.empty(); }
  double front() const { return nodes_.front(); }
  double back() const { return nodes_.back(); }
  EndpointKind left_tag() const noexcept { return left_; }
  EndpointKind right_tag() const noexcept { return right_; }

  //! nodes inside [lo, hi] only
  GridFunction restrict(double lo, double hi) const;
  GridFunction scaled(double factor) const;
  CoefficientFn as_coefficient(std::string label) const;

private:
  std::size_t locate(double x) const;

  std::vector<double> nodes_;
  std::vector<double> values_;
  std::vector<double> derivs_;
  EndpointKind left_ = EndpointKind::regular;
  EndpointKind right_ = EndpointKind::regular;
};

} // namespace hardy

#endif // HARDY_GRID_HPP
