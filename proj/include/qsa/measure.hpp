#pragma once

#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "qsa/rational.hpp"

namespace qsa {

/// Finite atomic sample space. The sigma-algebra is the power set of the
/// atoms; the atom order is fixed and canonical for serialization.
class SampleSpace {
  public:
    explicit SampleSpace(std::vector<std::string> atoms);

    const std::vector<std::string>& atoms() const { return atoms_; }
    int size() const { return static_cast<int>(atoms_.size()); }
    const std::string& label(int index) const { return atoms_[index]; }

    /// Index of a label; throws Error("UnknownAtom") for foreign labels.
    int index(const std::string& label) const;
    bool contains(const std::string& label) const;

    bool operator==(const SampleSpace& other) const { return atoms_ == other.atoms_; }

  private:
    std::vector<std::string> atoms_;
};

using SpacePtr = std::shared_ptr<const SampleSpace>;

SpacePtr make_space(std::vector<std::string> atoms);

/// Event as a sorted list of distinct atom indices.
using Event = std::vector<int>;

Event event_from_labels(const SampleSpace& space, const std::vector<std::string>& labels);
std::vector<std::string> event_labels(const SampleSpace& space, const Event& event);
Event event_complement(const SampleSpace& space, const Event& event);
Event event_intersection(const Event& a, const Event& b);
Event event_union(const Event& a, const Event& b);

/// Nonnegative measure with one exact-rational weight per atom.
class Measure {
  public:
    Measure(SpacePtr space, std::vector<Rat> weights);

    const SampleSpace& space() const { return *space_; }
    const SpacePtr& space_ptr() const { return space_; }
    const std::vector<Rat>& weights() const { return weights_; }
    const Rat& weight(int atom) const { return weights_[atom]; }

    Rat mass(const Event& event) const;
    Rat total() const;
    bool is_probability() const { return total() == 1; }
    bool is_zero() const;

    /// Atoms with strictly positive weight.
    Event positivity_set() const;

    bool operator==(const Measure& other) const;

  private:
    SpacePtr space_;
    std::vector<Rat> weights_;
};

Measure zero_measure(SpacePtr space);
Measure dirac(SpacePtr space, const std::string& atom);
Measure uniform_on(SpacePtr space, const std::vector<std::string>& atoms);
Measure scale(const Measure& mu, const Rat& factor);
Measure add(const Measure& mu, const Measure& nu);
/// Restriction to an event (weights outside set to zero).
Measure restrict_to(const Measure& mu, const Event& event);
/// Normalizes to a probability; throws Error("ZeroMass") on the zero measure.
Measure normalize(const Measure& mu);

/// Signed measure as a pair of mutually singular nonnegative parts, keeping
/// the Jordan decomposition explicit. Throws Error("InvalidSignedPair") if
/// both parts charge a common atom.
class SignedMeasure {
  public:
    SignedMeasure(Measure positive, Measure negative);

    /// Canonical decomposition of an arbitrary net weight vector.
    static SignedMeasure from_net(SpacePtr space, const std::vector<Rat>& net);

    const Measure& positive() const { return positive_; }
    const Measure& negative() const { return negative_; }
    Rat net(int atom) const { return positive_.weight(atom) - negative_.weight(atom); }
    const SampleSpace& space() const { return positive_.space(); }

  private:
    Measure positive_;
    Measure negative_;
};

/// Nonempty named family of probability measures on one space. Induces the
/// upper probability c(A) = max over members of the member mass of A.
class MeasureFamily {
  public:
    MeasureFamily(SpacePtr space, std::vector<std::pair<std::string, Measure>> members);

    const SampleSpace& space() const { return *space_; }
    const SpacePtr& space_ptr() const { return space_; }
    const std::vector<std::pair<std::string, Measure>>& members() const { return members_; }
    int size() const { return static_cast<int>(members_.size()); }
    const Measure& member(const std::string& name) const;
    bool has_member(const std::string& name) const;

    /// mask[atom] is true iff the singleton {atom} is polar.
    const std::vector<char>& polar_mask() const { return polar_mask_; }
    bool atom_is_polar(int atom) const { return polar_mask_[atom] != 0; }
    Event polar_atoms() const;
    Event non_polar_atoms() const;

  private:
    SpacePtr space_;
    std::vector<std::pair<std::string, Measure>> members_;
    std::vector<char> polar_mask_;
};

/// Random variable compared modulo polar atoms (the quasi-sure order).
class QsRandomVariable {
  public:
    QsRandomVariable(SpacePtr space, std::vector<Rat> values);

    const SampleSpace& space() const { return *space_; }
    const SpacePtr& space_ptr() const { return space_; }
    const std::vector<Rat>& values() const { return values_; }
    const Rat& value(int atom) const { return values_[atom]; }

    bool operator==(const QsRandomVariable& other) const;

  private:
    SpacePtr space_;
    std::vector<Rat> values_;
};

QsRandomVariable constant_rv(SpacePtr space, const Rat& value);
QsRandomVariable indicator(SpacePtr space, const Event& event);
QsRandomVariable rv_add(const QsRandomVariable& x, const QsRandomVariable& y);
QsRandomVariable rv_scale(const QsRandomVariable& x, const Rat& factor);
QsRandomVariable rv_shift(const QsRandomVariable& x, const Rat& constant);
/// Pointwise product, used for restrictions X * 1_A.
QsRandomVariable rv_multiply(const QsRandomVariable& x, const QsRandomVariable& y);

Rat expectation(const Measure& mu, const QsRandomVariable& x);

void require_same_space(const SampleSpace& a, const SampleSpace& b);

// --- quasi-sure structure -------------------------------------------------

Rat upper_prob(const MeasureFamily& family, const Event& event);
bool is_polar(const MeasureFamily& family, const Event& event);

enum class QsOrder { eq, leq, geq, incomparable };
const char* to_string(QsOrder order);

/// Classifies the pair under the quasi-sure order, comparing values on
/// non-polar atoms only.
QsOrder qs_compare(const MeasureFamily& family, const QsRandomVariable& x,
                   const QsRandomVariable& y);
bool qs_equal(const MeasureFamily& family, const QsRandomVariable& x,
              const QsRandomVariable& y);
bool qs_leq(const MeasureFamily& family, const QsRandomVariable& x,
            const QsRandomVariable& y);

// --- lattice operations ----------------------------------------------------

/// Atomwise minimum; on atomic spaces this is the setwise lattice meet.
Measure measure_meet(const Measure& mu, const Measure& nu);
Measure measure_join(const Measure& mu, const Measure& nu);
SignedMeasure signed_meet(const SignedMeasure& mu, const SignedMeasure& nu);
SignedMeasure signed_join(const SignedMeasure& mu, const SignedMeasure& nu);
/// Total variation norm: the sum of all weights of both parts.
Rat tv_norm(const SignedMeasure& mu);

// --- domination -------------------------------------------------------------

/// True iff every T-polar atom is S-polar (the positivity union of S is
/// contained in that of T).
bool dominates(const MeasureFamily& s, const MeasureFamily& t);
bool equivalent(const MeasureFamily& s, const MeasureFamily& t);

/// Atomwise sum of the members; its zero set is exactly the polar atom set.
Measure sum_measure(const MeasureFamily& family);

// --- case-study constructors ------------------------------------------------

struct ProductModel {
    SpacePtr space;
    MeasureFamily family;
};

/// Known states S_o with marginal pi (full support required) and novel states
/// S_n; the family pins the first marginal and concentrates the second on one
/// novel state per member. Throws Error("DegeneratePi") if pi has a zero.
ProductModel build_innovation_model(const SampleSpace& known, const SampleSpace& novel,
                                    const Measure& pi);

/// Family of Dirac measures on a nonempty prediction set Xi.
/// Throws Error("EmptyPredictionSet").
MeasureFamily build_typical_paths_model(SpacePtr space, const Event& xi);

/// Base probability copied onto disjoint slices indexed by Theta; members
/// have pairwise disjoint positivity sets.
ProductModel build_product_model(const Measure& base, const SampleSpace& theta);

} // namespace qsa
