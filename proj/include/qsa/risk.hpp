#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "qsa/measure.hpp"

namespace qsa {

/// Extended rational: a finite value or +infinity (used for penalties and
/// conjugates; unbounded conjugates are legal values, not errors).
struct ExtRat {
    bool infinite = false;
    Rat value;

    static ExtRat finite(Rat v) { return ExtRat{false, std::move(v)}; }
    static ExtRat infinity() { return ExtRat{true, Rat(0)}; }
};

enum class RiskKind { worst_case, entropic, scenario_penalty, acceptance_generated };

/// Convex monetary risk measure on a finite model. All kinds are monotone,
/// convex and cash-additive by construction; the entropic kind is the single
/// floating-point evaluation in the toolkit, everything else is exact.
struct RiskMeasureSpec {
    RiskKind kind = RiskKind::worst_case;

    // entropic
    Rat gamma = 1;
    std::string reference;

    // scenario_penalty: member name -> penalty; members missing from the map
    // count as +infinity. Not all penalties may be infinite.
    std::map<std::string, ExtRat> penalties;

    // acceptance_generated: acceptance set = down-closure of the convex hull
    // of the generators.
    std::vector<QsRandomVariable> generators;

    static RiskMeasureSpec worst_case_spec();
    static RiskMeasureSpec entropic_spec(Rat gamma, std::string reference);
    static RiskMeasureSpec scenario_penalty_spec(std::map<std::string, ExtRat> penalties);
    static RiskMeasureSpec acceptance_generated_spec(std::vector<QsRandomVariable> generators);
};

/// Exact rational for the rational kinds, double for entropic.
struct RiskValue {
    bool exact = true;
    Rat rational;
    double approx = 0.0;

    double as_double() const;
    static RiskValue from_rat(Rat r);
    static RiskValue from_double(double d);
};

RiskValue rho(const RiskMeasureSpec& spec, const MeasureFamily& family,
              const QsRandomVariable& x);

/// Half-space description of the acceptance set { X : rho(X) <= 0 } for the
/// polyhedral kinds: every accepted X satisfies <coeffs, X> <= bound over
/// the non-polar atoms. worst_case lists one row per non-polar atom,
/// scenario_penalty one row per finite penalty. The entropic and generated
/// kinds have no half-space list (Error("NotPolyhedral")); membership there
/// goes through rho itself.
struct AcceptanceHalfSpace {
    std::vector<Rat> coeffs; // indexed by atom
    Rat bound;
};
std::vector<AcceptanceHalfSpace> acceptance_halfspaces(const RiskMeasureSpec& spec,
                                                       const MeasureFamily& family);

struct ExtRiskValue {
    bool infinite = false;
    RiskValue value;
};

/// Dual penalty alpha(Q) = sup { E_Q[X] : rho(X) <= 0 }. Requires Q to be a
/// probability dominated by the family (Error("NotDominated") otherwise).
/// Entropic: relative entropy with respect to the reference member.
ExtRiskValue conjugate(const RiskMeasureSpec& spec, const MeasureFamily& family,
                       const Measure& q);

struct RepresentationReport {
    bool exact = true;
    Rat max_gap_rational;
    double max_gap = 0.0;
    int probes = 0;
    int grid_size = 0;
    std::string note;
};

/// For each probe computes rho(X) - max over the dual grid of
/// E_Q[X] - alpha(Q) and reports the largest gap. Weak duality makes every
/// gap nonnegative; a zero gap certifies the representation on the grid.
RepresentationReport verify_representation(const RiskMeasureSpec& spec,
                                           const MeasureFamily& family,
                                           const std::vector<QsRandomVariable>& probes,
                                           const std::vector<Measure>& dual_grid);

/// Monotone-chain instance of the Fatou inequality: the chain must be
/// ordered under qs_compare (Error("NotMonotone") otherwise); checks
/// rho(last) <= rho(Z) for every element Z dominating the last one.
bool verify_fatou_monotone(const RiskMeasureSpec& spec, const MeasureFamily& family,
                           const std::vector<QsRandomVariable>& chain);

// Dual grid builders.
std::vector<Measure> dirac_grid(const MeasureFamily& family);
std::vector<Measure> member_grid(const MeasureFamily& family);
/// All probability measures on the non-polar atoms whose weights are
/// multiples of 1/denominator.
std::vector<Measure> simplex_grid(const MeasureFamily& family, long denominator,
                                  long cap = 2000000);

} // namespace qsa
