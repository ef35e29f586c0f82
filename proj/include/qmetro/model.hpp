#pragma once

#include <stdexcept>
#include <string>

namespace qmetro {

enum class Model { single_mode, two_mode };

inline const char* to_string(Model m) {
    return m == Model::single_mode ? "single" : "two";
}

/// Point of a statistical model: theta = (Re alpha, Im alpha, r), r >= 0.
struct ModelPoint {
    Model model;
    double theta1 = 0.0;
    double theta2 = 0.0;
    double r = 0.0;

    ModelPoint(Model m, double t1, double t2, double squeezing)
        : model(m), theta1(t1), theta2(t2), r(squeezing) {
        if (!(std::isfinite(theta1) && std::isfinite(theta2) && std::isfinite(r)))
            throw std::invalid_argument("ModelPoint: parameters must be finite");
        if (r < 0.0)
            throw std::invalid_argument("ModelPoint: squeezing parameter must be non-negative");
    }

    int modes() const { return model == Model::single_mode ? 1 : 2; }
};

struct OptimizerError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

}  // namespace qmetro
