// Centres a design inside the quadratic well: minimize the empirical
// Chernoff bound on 5000 scenarios, then certify the failure probability
// of the result on fresh draws.
#include <iostream>

#include "probcert/chernoff_opt.hpp"

int main() {
    using namespace probcert;
    NormalScenarioSource scenarios(0.0, 0.5, 1, 1);
    const ChernoffObjective objective(QuadraticWellModel{}, ScenarioSet::draw(scenarios, 5000));

    OptimizationSettings settings;
    settings.theta0 = {0.8};
    const OptimizationOutcome out = minimize(objective, settings);
    std::cout << "theta* = " << out.theta_star[0] << ", lambda* = " << out.lambda_star << ", bound "
              << out.objective_trace.front() << " -> " << out.objective_trace.back() << " after "
              << out.iterations << " iterations (" << to_string(out.termination) << ")\n";

    NormalScenarioSource fresh(0.0, 0.5, 1, 2);
    const Certificate c = certify_probability(QuadraticWellModel{}, out.theta_star, validate_spec(0.01, 0.2, 0.05), fresh);
    std::cout << describe(c);
}
