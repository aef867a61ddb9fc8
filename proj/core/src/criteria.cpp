#include "ddestab/criteria.hpp"

#include <cmath>

#include "ddestab/errors.hpp"

namespace ddestab {

namespace {

bool compare(double left, Relation rel, double right) {
    switch (rel) {
        case Relation::Less: return left < right;
        case Relation::LessEqual: return left <= right;
        case Relation::Greater: return left > right;
        case Relation::GreaterEqual: return left >= right;
    }
    return false;
}

Margin margin(std::string name, double left, Relation rel, double right) {
    return Margin{std::move(name), left, rel, right, compare(left, rel, right)};
}

bool finite_all(std::initializer_list<double> values) {
    for (double v : values)
        if (!std::isfinite(v)) return false;
    return true;
}

void note_cases(CriterionReport& r) {
    if (r.holding_cases.empty()) {
        r.notes = "no case holds; the criterion is inconclusive";
        return;
    }
    r.satisfied = true;
    r.which_case = r.holding_cases.front();
    if (r.holding_cases.size() > 1) {
        r.notes = "cases holding:";
        for (const auto& c : r.holding_cases) r.notes += " " + c;
    }
}

// Shared by the delayed-proportional and proportional-state tests.
CriterionReport three_case_check(std::string criterion, const char* gain_name, double a, double k, double C) {
    if (!(a > 0.0) || !(k > 0.0) || !(C >= 0.0) || !finite_all({a, k, C}))
        throw DomainError(criterion + " needs a > 0, " + gain_name + " > 0, C >= 0");
    const std::string g = gain_name;
    const double quarter = a * a / 4.0;
    const double half = a * a / 2.0;

    CriterionReport r;
    r.criterion = std::move(criterion);

    // a) C < k <= a^2/4
    const Margin a1 = margin("a: C < " + g, C, Relation::Less, k);
    const Margin a2 = margin("a: " + g + " <= a^2/4", k, Relation::LessEqual, quarter);
    // b) a^2/4 <= k < a^2/2 - C
    const Margin b1 = margin("b: a^2/4 <= " + g, quarter, Relation::LessEqual, k);
    const Margin b2 = margin("b: " + g + " < a^2/2 - C", k, Relation::Less, half - C);
    // c) 4k > a^2 and C < a sqrt(4k - a^2)/4
    const Margin c1 = margin("c: 4" + g + " > a^2", 4.0 * k, Relation::Greater, a * a);
    r.margins = {a1, a2, b1, b2, c1};
    bool c_holds = false;
    if (c1.holds) {
        const Margin c2 = margin("c: C < a sqrt(4" + g + " - a^2)/4", C, Relation::Less,
                                 a * std::sqrt(4.0 * k - a * a) / 4.0);
        r.margins.push_back(c2);
        c_holds = c2.holds;
    }

    if (a1.holds && a2.holds) r.holding_cases.push_back("a");
    if (b1.holds && b2.holds) r.holding_cases.push_back("b");
    if (c_holds) r.holding_cases.push_back("c");
    note_cases(r);
    return r;
}

}  // namespace

CriterionReport lemma1_check(double a, double b, double alpha, double beta) {
    if (!(a > 0.0) || !(b > 0.0) || !(alpha >= 0.0) || !(beta >= 0.0) || !finite_all({a, b, alpha, beta}))
        throw DomainError("lemma1_check needs a > 0, b > 0, alpha >= 0, beta >= 0");

    CriterionReport r;
    r.criterion = "lemma1";
    const Margin first = margin("4b > a^2", 4.0 * b, Relation::Greater, a * a);
    r.margins.push_back(first);
    if (!first.holds) {
        r.notes = "4b <= a^2: the delay-free part is not underdamped";
        return r;
    }
    const double s = std::sqrt(4.0 * b - a * a);
    const double lhs = 2.0 * (a + s) / (a * s) * alpha + 4.0 / (a * s) * beta;
    const Margin second = margin("2(a+s)/(a s) alpha + 4/(a s) beta < 1", lhs, Relation::Less, 1.0);
    r.margins.push_back(second);
    r.satisfied = second.holds;
    if (!r.satisfied) r.notes = "delayed-term bounds too large for the given a, b";
    return r;
}

CriterionReport lemma2_check(double a0, double A, double b0, double B, double C_sum) {
    if (!finite_all({a0, A, b0, B, C_sum}) || !(a0 > 0.0) || !(b0 > 0.0) || !(C_sum >= 0.0))
        throw DomainError("lemma2_check needs finite a0 > 0, b0 > 0, C_sum >= 0");
    if (a0 > A) throw DomainError("lemma2_check needs a0 <= A");
    if (b0 > B) throw DomainError("lemma2_check needs b0 <= B");

    CriterionReport r;
    r.criterion = "lemma2";
    // 1) B <= a0^2/4 and C_sum < b0 - (a0/2)(A - a0)
    const Margin m11 = margin("1: B <= a0^2/4", B, Relation::LessEqual, a0 * a0 / 4.0);
    const Margin m12 = margin("1: C_sum < b0 - (a0/2)(A - a0)", C_sum, Relation::Less, b0 - a0 / 2.0 * (A - a0));
    // 2) b0 >= (a0/2)(A - a0/2) and C_sum < a0^2/2 - B
    const Margin m21 = margin("2: b0 >= (a0/2)(A - a0/2)", b0, Relation::GreaterEqual, a0 / 2.0 * (A - a0 / 2.0));
    const Margin m22 = margin("2: C_sum < a0^2/2 - B", C_sum, Relation::Less, a0 * a0 / 2.0 - B);
    r.margins = {m11, m12, m21, m22};
    if (m11.holds && m12.holds) r.holding_cases.push_back("1");
    if (m21.holds && m22.holds) r.holding_cases.push_back("2");
    note_cases(r);
    return r;
}

CriterionReport theorem3_check(double a, double b, double C) { return three_case_check("theorem3", "b", a, b, C); }

CriterionReport theorem4_check(double a, double K, double C) { return three_case_check("theorem4", "K", a, K, C); }

double case_c_threshold(double a, double C) {
    if (!(a > 0.0) || !(C >= 0.0)) throw DomainError("case_c_threshold needs a > 0, C >= 0");
    return (16.0 * C * C / (a * a) + a * a) / 4.0;
}

std::vector<GainInterval> corollary5_gain_range(double a, double A, double omega) {
    if (!(a > 0.0) || !(A > 0.0) || !(omega > 0.0) || !finite_all({a, A, omega}))
        throw DomainError("corollary5_gain_range needs a, A, omega > 0");
    const double C = A * omega;
    const double quarter = a * a / 4.0;
    const double upper_b = a * a / 2.0 - C;

    std::vector<GainInterval> out;
    if (C < quarter) out.push_back({"a", C, false, quarter, true});
    if (quarter < upper_b) out.push_back({"b", quarter, true, upper_b, false});
    out.push_back({"c", case_c_threshold(a, C), false, std::numeric_limits<double>::infinity(), false});
    return out;
}

double rational_envelope_mu(int m, int n) {
    if (m < 0 || n <= m) throw DomainError("rational_envelope_mu needs 0 <= m < n");
    if (m == 0) return 1.0;
    const double md = m;
    const double nd = n;
    return std::pow(md, md / nd) / (nd * std::pow(nd - md, md / nd - 1.0));
}

}  // namespace ddestab
