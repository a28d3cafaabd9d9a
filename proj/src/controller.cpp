#include "qtrack/controller.hpp"

#include <cmath>

#include "qtrack/errors.hpp"

namespace qtrack {

namespace {

double guarded_divisor(double leading, double epsilon_guard) {
    double mag = std::max(std::fabs(leading), epsilon_guard);
    return leading < 0.0 ? -mag : mag;
}

} // namespace

double adaptive_control(ParamVec theta_hat, double y_star_next, double u_prev,
                        double epsilon_guard) {
    double d = guarded_divisor(theta_hat.c1, epsilon_guard);
    return y_star_next / d - (theta_hat.c2 / d) * u_prev;
}

double oracle_control(ParamVec theta, double y_star_next, double u_prev) {
    if (theta.c1 == 0.0)
        throw ValidationError("ZeroLeadingCoefficient",
                              "oracle control needs theta(1) != 0");
    return y_star_next / theta.c1 - (theta.c2 / theta.c1) * u_prev;
}

void ControllerState::init(ParamVec theta_hat0, double y_star_1) {
    u_next = adaptive_control(theta_hat0, y_star_1, 0.0, epsilon_guard);
    guard_active = std::fabs(theta_hat0.c1) < epsilon_guard;
}

void ControllerState::schedule(ParamVec theta_hat, double y_star_next,
                               double u_curr) {
    u_next = adaptive_control(theta_hat, y_star_next, u_curr, epsilon_guard);
    guard_active = std::fabs(theta_hat.c1) < epsilon_guard;
}

StepResult closed_loop_step(PlantState& plant, EstimatorState& estimator,
                            ControllerState& controller,
                            const RealizedReference& reference,
                            const TrialStream& noise_stream) {
    std::int64_t k = plant.k;
    StepResult r;
    r.u = controller.u_next;
    r.guard_was_active = controller.guard_active;
    r.y_star = reference.at(k);

    Regressor phi{r.u, plant.u_prev};
    double w = plant.noise.sample(noise_stream,
                                  static_cast<std::uint64_t>(k));
    r.y = output(plant, r.u, w);
    r.level = quantize(plant.quantizer, r.y);
    r.s_bar = weighted_observation(plant.quantizer, r.level);

    estimator.update(phi, r.s_bar);
    r.theta_hat = estimator.theta_hat();
    r.err_sq = estimation_error(r.theta_hat, plant.theta);
    double d = r.y - r.y_star;
    r.track_sq = d * d;

    controller.schedule(r.theta_hat, reference.at(k + 1), r.u);
    plant.u_prev = r.u;
    plant.k = k + 1;
    return r;
}

} // namespace qtrack
