#pragma once

// Sufficient stability and attractivity tests for second-order delay
// equations. Every checker is a pure function of scalar bounds; a negative
// verdict means "inconclusive", never "unstable".

#include <limits>
#include <optional>
#include <string>
#include <vector>

namespace ddestab {

enum class Relation { Less, LessEqual, Greater, GreaterEqual };

/// One inequality `left <relation> right` and whether it held.
struct Margin {
    std::string name;
    double left;
    Relation relation;
    double right;
    bool holds;
};

struct CriterionReport {
    std::string criterion;  // e.g. "lemma1", "theorem3"
    bool satisfied = false;
    std::optional<std::string> which_case;
    std::vector<std::string> holding_cases;  // every case that holds, in order
    std::vector<Margin> margins;
    std::string notes;
};

/// Exponential stability of x'' + a x' + b x + (delayed terms with bounds
/// alpha, beta) = 0:  4b > a^2 and
///   2(a + s)/(a s) alpha + 4/(a s) beta < 1,  s = sqrt(4b - a^2).
/// Throws DomainError unless a > 0, b > 0, alpha >= 0, beta >= 0.
CriterionReport lemma1_check(double a, double b, double alpha, double beta);

/// Global attractivity for damping ratio in [a0, A], restoring ratio in
/// [b0, B] and delayed-term bound C_sum. Case "1" or "2".
/// Throws DomainError unless 0 < a0 <= A and 0 < b0 <= B.
CriterionReport lemma2_check(double a0, double A, double b0, double B, double C_sum);

/// Delayed proportional control u = -b [x(t) - x(h(t))] applied to
/// x'' + a x' + b x(h(t)) = f(t, x(g(t))), |f| <= C |x|. Cases:
///   a) C < b <= a^2/4   b) a^2/4 <= b < a^2/2 - C   c) C < a sqrt(4b - a^2)/4
CriterionReport theorem3_check(double a, double b, double C);

/// Proportional state control u = -K (x - x*); same inequalities as
/// theorem3_check with b replaced by K.
CriterionReport theorem4_check(double a, double K, double C);

/// Interval of real numbers with open/closed ends; hi may be +infinity.
struct GainInterval {
    std::string label;  // "a", "b" or "c"
    double lo;
    bool lo_closed;
    double hi;
    bool hi_closed;

    bool contains(double k) const {
        const bool above = lo_closed ? k >= lo : k > lo;
        const bool below = hi_closed ? k <= hi : k < hi;
        return above && below;
    }
};

/// Threshold of case c: the K solving C = a sqrt(4K - a^2)/4.
double case_c_threshold(double a, double C);

/// K-intervals of proportional control stabilizing x'' + a x' + A sin(omega
/// x(h(t))) = -K (x - x*), one per nonempty case (C = A omega).
std::vector<GainInterval> corollary5_gain_range(double a, double A, double omega);

/// sup over v >= 0 of v^m / (1 + v^n), closed form; requires 0 <= m < n.
double rational_envelope_mu(int m, int n);

}  // namespace ddestab
