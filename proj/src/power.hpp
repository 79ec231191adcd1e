#pragma once

#include <cmath>

namespace curveflow {

// x^e for a fixed exponent, with branch-free special cases for the exponents
// the flows hit most often (alpha in {1/2, 1, 2} gives e in {0, +-1/2, +-1, +-2, ...}).
class Power {
public:
  explicit Power(double e) : e_(e) {
    if (e == 0.0) kind_ = Kind::Zero;
    else if (e == 1.0) kind_ = Kind::One;
    else if (e == -1.0) kind_ = Kind::MinusOne;
    else if (e == 2.0) kind_ = Kind::Two;
    else if (e == -2.0) kind_ = Kind::MinusTwo;
    else if (e == 0.5) kind_ = Kind::Half;
    else if (e == -0.5) kind_ = Kind::MinusHalf;
    else if (e == 3.0) kind_ = Kind::Three;
    else if (e == 1.5) kind_ = Kind::ThreeHalves;
    else kind_ = Kind::General;
  }

  double operator()(double x) const {
    switch (kind_) {
      case Kind::Zero: return 1.0;
      case Kind::One: return x;
      case Kind::MinusOne: return 1.0 / x;
      case Kind::Two: return x * x;
      case Kind::MinusTwo: return 1.0 / (x * x);
      case Kind::Half: return std::sqrt(x);
      case Kind::MinusHalf: return 1.0 / std::sqrt(x);
      case Kind::Three: return x * x * x;
      case Kind::ThreeHalves: return x * std::sqrt(x);
      case Kind::General: break;
    }
    return std::pow(x, e_);
  }

private:
  enum class Kind { Zero, One, MinusOne, Two, MinusTwo, Half, MinusHalf, Three, ThreeHalves, General };
  double e_;
  Kind kind_;
};

}  // namespace curveflow
