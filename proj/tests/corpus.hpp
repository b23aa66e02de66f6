// Labeled integrands for the divergence classifier.
#ifndef HARDY_TESTS_CORPUS_HPP
#define HARDY_TESTS_CORPUS_HPP

#include "hardy/certify.hpp"

#include <cmath>
#include <limits>
#include <string>
#include <vector>

namespace corpus
{

struct Item
{
  std::string name;
  hardy::CoefficientFn f;
  hardy::Side side;
  hardy::Interval iv;
  hardy::VerdictKind truth;
};

inline std::vector<Item> items()
{
  using hardy::CoefficientFn;
  using hardy::EndpointKind;
  using hardy::Interval;
  using hardy::Side;
  using hardy::VerdictKind;
  const double inf = std::numeric_limits<double>::infinity();
  const Interval unit(0.0, 1.0, EndpointKind::singular, EndpointKind::singular);
  const Interval half(0.0, inf, EndpointKind::singular, EndpointKind::infinite);
  auto fn = [](auto f, const char* label) { return CoefficientFn(f, label); };
  return {
    {"1/t at 0", fn([](double t) { return 1.0 / t; }, "1/t"), Side::left, unit, VerdictKind::divergent},
    {"1/(t ln(1/t)) at 0", fn([](double t) { return 1.0 / (t * std::log(1.0 / t)); }, "1/(t ln(1/t))"), Side::left,
     unit, VerdictKind::divergent},
    {"t^-1.5 at 0", fn([](double t) { return std::pow(t, -1.5); }, "t^-1.5"), Side::left, unit,
     VerdictKind::divergent},
    {"1/(1-t) at 1", fn([](double t) { return 1.0 / (1.0 - t); }, "1/(1-t)"), Side::right, unit,
     VerdictKind::divergent},
    {"1 at inf", fn([](double) { return 1.0; }, "1"), Side::right, half, VerdictKind::divergent},
    {"1/t at inf", fn([](double t) { return 1.0 / t; }, "1/t"), Side::right, half, VerdictKind::divergent},
    {"1 at 0", fn([](double) { return 1.0; }, "1"), Side::left, unit, VerdictKind::convergent},
    {"t^-1/2 at 0", fn([](double t) { return 1.0 / std::sqrt(t); }, "t^-1/2"), Side::left, unit,
     VerdictKind::convergent},
    {"t^-1/2/(1+t) at 0", fn([](double t) { return 1.0 / (std::sqrt(t) * (1.0 + t)); }, "t^-1/2/(1+t)"),
     Side::left, unit, VerdictKind::convergent},
    {"1/(t ln^2(1/t)) at 0", fn([](double t) { const double l = std::log(1.0 / t); return 1.0 / (t * l * l); },
                                "1/(t ln^2(1/t))"),
     Side::left, unit, VerdictKind::convergent},
    {"exp(-t) at inf", fn([](double t) { return std::exp(-t); }, "exp(-t)"), Side::right, half,
     VerdictKind::convergent},
    {"1/t^2 at inf", fn([](double t) { return 1.0 / (t * t); }, "1/t^2"), Side::right, half,
     VerdictKind::convergent},
  };
}

} // namespace corpus

#endif // HARDY_TESTS_CORPUS_HPP
