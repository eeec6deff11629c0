#pragma once

#include <functional>
#include <string>
#include <vector>

#include "chirpex/analysis.hpp"

namespace chirpex {

struct CriterionResult {
    int id = 0;
    std::string title;
    bool passed = false;
    std::string detail;
    double seconds = 0.0;
};

struct AcceptanceOptions {
    unsigned threads = 0;  // sweep workers, 0 = hardware concurrency
};

// Runs every acceptance criterion in order. Never throws for a failing check; an exception
// inside a check is reported as that criterion failing.
std::vector<CriterionResult> run_acceptance(const AcceptanceOptions& options = {});

// "[PASS] 3 edge residual ... (detail) 0.01 s"
std::string format_result(const CriterionResult& result);

using PhaseDiffFn = std::function<double(double delta, const DispersionModel& model)>;

struct QuadratureCheck {
    double worst_relative_error = 0.0;
    bool passed = false;
};

// Compares `closed_form` with the quadrature oracle at Δ/T1 ∈ {0.1, 0.3, 0.5, 0.7, 0.9}.
QuadratureCheck check_against_quadrature(const DispersionModel& model, const PhaseDiffFn& closed_form,
                                         double tolerance = 0.05);

}  // namespace chirpex
