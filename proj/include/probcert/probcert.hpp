#pragma once

// Umbrella header for the numerical core. The JSON and CLI layers
// (json_io.hpp, cli.hpp) are included separately.

#include "probcert/errors.hpp"
#include "probcert/summation.hpp"
#include "probcert/tail_bounds.hpp"
#include "probcert/sample_source.hpp"
#include "probcert/estimator.hpp"
#include "probcert/models.hpp"
#include "probcert/chernoff_opt.hpp"
#include "probcert/verification.hpp"
#include "probcert/text_io.hpp"
