// Plans a sample size, draws that many Bernoulli(0.3) values and prints the
// resulting certificate.
#include <iostream>

#include "probcert/estimator.hpp"
#include "probcert/sample_source.hpp"

int main() {
    using namespace probcert;
    const ErrorSpec spec = validate_spec(0.02, 0.2, 0.05);
    const SamplePlan plan = minimum_sample_size(spec);
    std::cout << "planned n = " << plan.n << "\n";

    BernoulliSource source(0.3, 12345);
    const Certificate c = estimate_with_plan(source, spec);
    std::cout << describe(c);
}
