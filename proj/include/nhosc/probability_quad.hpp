#pragma once

namespace nhosc {

/// The four channel probabilities at one evolution point. No sum constraint is
/// imposed here: the G-metric framework genuinely violates it.
struct ProbabilityQuad {
    double p_aa = 0.0;
    double p_ab = 0.0;
    double p_ba = 0.0;
    double p_bb = 0.0;

    double sum_a() const { return p_aa + p_ab; }
    double sum_b() const { return p_ba + p_bb; }
};

}  // namespace nhosc
