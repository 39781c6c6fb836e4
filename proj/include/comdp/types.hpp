#pragma once

#include <Eigen/Dense>

namespace comdp {

using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;

// Tags whether a value function came from an exact evaluation or from the
// approximate (basis-restricted) one; downstream reporting keys off this.
enum class ValueKind { Exact, Approx };

struct ValueFunction {
  Vector values;
  ValueKind kind = ValueKind::Exact;
};

// Counter threaded through improvement routines so tests can assert the
// per-sweep work: one tick per one-step expectation evaluated.
struct OpCount {
  long long expectations = 0;
};

}  // namespace comdp
