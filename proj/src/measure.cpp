#include "qsa/measure.hpp"

#include <algorithm>
#include <set>

#include "qsa/error.hpp"

namespace qsa {

SampleSpace::SampleSpace(std::vector<std::string> atoms) : atoms_(std::move(atoms)) {
    if (atoms_.empty()) fail("EmptySpace", "a sample space needs at least one atom");
    std::set<std::string> seen;
    for (const auto& a : atoms_) {
        if (!seen.insert(a).second) fail("DuplicateAtom", "atom \"" + a + "\" listed twice");
    }
}

int SampleSpace::index(const std::string& label) const {
    for (int i = 0; i < size(); ++i) {
        if (atoms_[i] == label) return i;
    }
    fail("UnknownAtom", "atom \"" + label + "\" is not in the space");
}

bool SampleSpace::contains(const std::string& label) const {
    return std::find(atoms_.begin(), atoms_.end(), label) != atoms_.end();
}

SpacePtr make_space(std::vector<std::string> atoms) {
    return std::make_shared<const SampleSpace>(std::move(atoms));
}

Event event_from_labels(const SampleSpace& space, const std::vector<std::string>& labels) {
    std::set<int> indices;
    for (const auto& label : labels) indices.insert(space.index(label));
    return Event(indices.begin(), indices.end());
}

std::vector<std::string> event_labels(const SampleSpace& space, const Event& event) {
    std::vector<std::string> out;
    out.reserve(event.size());
    for (int atom : event) out.push_back(space.label(atom));
    return out;
}

Event event_complement(const SampleSpace& space, const Event& event) {
    Event out;
    std::size_t pos = 0;
    for (int i = 0; i < space.size(); ++i) {
        if (pos < event.size() && event[pos] == i) {
            ++pos;
        } else {
            out.push_back(i);
        }
    }
    return out;
}

Event event_intersection(const Event& a, const Event& b) {
    Event out;
    std::set_intersection(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

Event event_union(const Event& a, const Event& b) {
    Event out;
    std::set_union(a.begin(), a.end(), b.begin(), b.end(), std::back_inserter(out));
    return out;
}

Measure::Measure(SpacePtr space, std::vector<Rat> weights)
    : space_(std::move(space)), weights_(std::move(weights)) {
    if (static_cast<int>(weights_.size()) != space_->size())
        fail("WeightCount", "expected one weight per atom");
    for (const auto& w : weights_) {
        if (w < 0) fail("NegativeWeight", "measure weights must be nonnegative");
    }
}

Rat Measure::mass(const Event& event) const {
    Rat total = 0;
    for (int atom : event) total += weights_[atom];
    return total;
}

Rat Measure::total() const {
    Rat total = 0;
    for (const auto& w : weights_) total += w;
    return total;
}

bool Measure::is_zero() const {
    for (const auto& w : weights_) {
        if (w != 0) return false;
    }
    return true;
}

Event Measure::positivity_set() const {
    Event out;
    for (int i = 0; i < space_->size(); ++i) {
        if (weights_[i] > 0) out.push_back(i);
    }
    return out;
}

bool Measure::operator==(const Measure& other) const {
    return *space_ == *other.space_ && weights_ == other.weights_;
}

Measure zero_measure(SpacePtr space) {
    std::vector<Rat> weights(space->size(), Rat(0));
    return Measure(std::move(space), std::move(weights));
}

Measure dirac(SpacePtr space, const std::string& atom) {
    std::vector<Rat> weights(space->size(), Rat(0));
    weights[space->index(atom)] = 1;
    return Measure(std::move(space), std::move(weights));
}

Measure uniform_on(SpacePtr space, const std::vector<std::string>& atoms) {
    if (atoms.empty()) fail("EmptyEvent", "uniform measure needs a nonempty atom set");
    std::vector<Rat> weights(space->size(), Rat(0));
    const Rat share = Rat(1) / static_cast<long>(atoms.size());
    for (const auto& label : atoms) weights[space->index(label)] = share;
    return Measure(std::move(space), std::move(weights));
}

Measure scale(const Measure& mu, const Rat& factor) {
    if (factor < 0) fail("NegativeWeight", "scaling factor must be nonnegative");
    std::vector<Rat> weights = mu.weights();
    for (auto& w : weights) w *= factor;
    return Measure(mu.space_ptr(), std::move(weights));
}

Measure add(const Measure& mu, const Measure& nu) {
    require_same_space(mu.space(), nu.space());
    std::vector<Rat> weights = mu.weights();
    for (int i = 0; i < mu.space().size(); ++i) weights[i] += nu.weight(i);
    return Measure(mu.space_ptr(), std::move(weights));
}

Measure restrict_to(const Measure& mu, const Event& event) {
    std::vector<Rat> weights(mu.space().size(), Rat(0));
    for (int atom : event) weights[atom] = mu.weight(atom);
    return Measure(mu.space_ptr(), std::move(weights));
}

Measure normalize(const Measure& mu) {
    const Rat total = mu.total();
    if (total == 0) fail("ZeroMass", "cannot normalize the zero measure");
    std::vector<Rat> weights = mu.weights();
    for (auto& w : weights) w /= total;
    return Measure(mu.space_ptr(), std::move(weights));
}

SignedMeasure::SignedMeasure(Measure positive, Measure negative)
    : positive_(std::move(positive)), negative_(std::move(negative)) {
    require_same_space(positive_.space(), negative_.space());
    for (int i = 0; i < positive_.space().size(); ++i) {
        if (positive_.weight(i) > 0 && negative_.weight(i) > 0)
            fail("InvalidSignedPair",
                 "parts overlap at atom \"" + positive_.space().label(i) + "\"");
    }
}

SignedMeasure SignedMeasure::from_net(SpacePtr space, const std::vector<Rat>& net) {
    std::vector<Rat> pos(space->size(), Rat(0));
    std::vector<Rat> neg(space->size(), Rat(0));
    if (static_cast<int>(net.size()) != space->size())
        fail("WeightCount", "expected one net weight per atom");
    for (int i = 0; i < space->size(); ++i) {
        if (net[i] > 0) pos[i] = net[i];
        if (net[i] < 0) neg[i] = -net[i];
    }
    return SignedMeasure(Measure(space, std::move(pos)), Measure(space, std::move(neg)));
}

MeasureFamily::MeasureFamily(SpacePtr space,
                             std::vector<std::pair<std::string, Measure>> members)
    : space_(std::move(space)), members_(std::move(members)) {
    if (members_.empty()) fail("EmptyFamily", "a measure family needs at least one member");
    std::set<std::string> names;
    for (const auto& [name, measure] : members_) {
        require_same_space(*space_, measure.space());
        if (!measure.is_probability())
            fail("NotProbability", "family member \"" + name + "\" has total mass " +
                                       format_rational(measure.total()));
        if (!names.insert(name).second)
            fail("DuplicateMember", "member name \"" + name + "\" listed twice");
    }
    polar_mask_.assign(space_->size(), 1);
    for (const auto& [name, measure] : members_) {
        for (int i = 0; i < space_->size(); ++i) {
            if (measure.weight(i) > 0) polar_mask_[i] = 0;
        }
    }
}

const Measure& MeasureFamily::member(const std::string& name) const {
    for (const auto& [n, m] : members_) {
        if (n == name) return m;
    }
    fail("UnknownMember", "no family member named \"" + name + "\"");
}

bool MeasureFamily::has_member(const std::string& name) const {
    for (const auto& [n, m] : members_) {
        if (n == name) return true;
    }
    return false;
}

Event MeasureFamily::polar_atoms() const {
    Event out;
    for (int i = 0; i < space_->size(); ++i) {
        if (polar_mask_[i]) out.push_back(i);
    }
    return out;
}

Event MeasureFamily::non_polar_atoms() const {
    Event out;
    for (int i = 0; i < space_->size(); ++i) {
        if (!polar_mask_[i]) out.push_back(i);
    }
    return out;
}

QsRandomVariable::QsRandomVariable(SpacePtr space, std::vector<Rat> values)
    : space_(std::move(space)), values_(std::move(values)) {
    if (static_cast<int>(values_.size()) != space_->size())
        fail("ValueCount", "expected one value per atom");
}

bool QsRandomVariable::operator==(const QsRandomVariable& other) const {
    return *space_ == *other.space_ && values_ == other.values_;
}

QsRandomVariable constant_rv(SpacePtr space, const Rat& value) {
    std::vector<Rat> values(space->size(), value);
    return QsRandomVariable(std::move(space), std::move(values));
}

QsRandomVariable indicator(SpacePtr space, const Event& event) {
    std::vector<Rat> values(space->size(), Rat(0));
    for (int atom : event) values[atom] = 1;
    return QsRandomVariable(std::move(space), std::move(values));
}

QsRandomVariable rv_add(const QsRandomVariable& x, const QsRandomVariable& y) {
    require_same_space(x.space(), y.space());
    std::vector<Rat> values = x.values();
    for (int i = 0; i < x.space().size(); ++i) values[i] += y.value(i);
    return QsRandomVariable(x.space_ptr(), std::move(values));
}

QsRandomVariable rv_scale(const QsRandomVariable& x, const Rat& factor) {
    std::vector<Rat> values = x.values();
    for (auto& v : values) v *= factor;
    return QsRandomVariable(x.space_ptr(), std::move(values));
}

QsRandomVariable rv_shift(const QsRandomVariable& x, const Rat& constant) {
    std::vector<Rat> values = x.values();
    for (auto& v : values) v += constant;
    return QsRandomVariable(x.space_ptr(), std::move(values));
}

QsRandomVariable rv_multiply(const QsRandomVariable& x, const QsRandomVariable& y) {
    require_same_space(x.space(), y.space());
    std::vector<Rat> values = x.values();
    for (int i = 0; i < x.space().size(); ++i) values[i] *= y.value(i);
    return QsRandomVariable(x.space_ptr(), std::move(values));
}

Rat expectation(const Measure& mu, const QsRandomVariable& x) {
    require_same_space(mu.space(), x.space());
    Rat total = 0;
    for (int i = 0; i < mu.space().size(); ++i) {
        if (mu.weight(i) != 0) total += mu.weight(i) * x.value(i);
    }
    return total;
}

void require_same_space(const SampleSpace& a, const SampleSpace& b) {
    if (&a == &b) return;
    if (!(a == b)) fail("SpaceMismatch", "operands live on different sample spaces");
}

Rat upper_prob(const MeasureFamily& family, const Event& event) {
    for (int atom : event) {
        if (atom < 0 || atom >= family.space().size())
            fail("UnknownAtom", "event references an atom outside the space");
    }
    Rat best = 0;
    for (const auto& [name, measure] : family.members()) best = std::max(best, measure.mass(event));
    return best;
}

bool is_polar(const MeasureFamily& family, const Event& event) {
    return upper_prob(family, event) == 0;
}

const char* to_string(QsOrder order) {
    switch (order) {
        case QsOrder::eq: return "eq";
        case QsOrder::leq: return "leq";
        case QsOrder::geq: return "geq";
        case QsOrder::incomparable: return "incomparable";
    }
    return "?";
}

QsOrder qs_compare(const MeasureFamily& family, const QsRandomVariable& x,
                   const QsRandomVariable& y) {
    require_same_space(family.space(), x.space());
    require_same_space(family.space(), y.space());
    bool leq = true;
    bool geq = true;
    for (int i = 0; i < family.space().size(); ++i) {
        if (family.atom_is_polar(i)) continue;
        if (x.value(i) > y.value(i)) leq = false;
        if (x.value(i) < y.value(i)) geq = false;
    }
    if (leq && geq) return QsOrder::eq;
    if (leq) return QsOrder::leq;
    if (geq) return QsOrder::geq;
    return QsOrder::incomparable;
}

bool qs_equal(const MeasureFamily& family, const QsRandomVariable& x,
              const QsRandomVariable& y) {
    return qs_compare(family, x, y) == QsOrder::eq;
}

bool qs_leq(const MeasureFamily& family, const QsRandomVariable& x,
            const QsRandomVariable& y) {
    const QsOrder order = qs_compare(family, x, y);
    return order == QsOrder::leq || order == QsOrder::eq;
}

Measure measure_meet(const Measure& mu, const Measure& nu) {
    require_same_space(mu.space(), nu.space());
    std::vector<Rat> weights(mu.space().size());
    for (int i = 0; i < mu.space().size(); ++i)
        weights[i] = std::min(mu.weight(i), nu.weight(i));
    return Measure(mu.space_ptr(), std::move(weights));
}

Measure measure_join(const Measure& mu, const Measure& nu) {
    require_same_space(mu.space(), nu.space());
    std::vector<Rat> weights(mu.space().size());
    for (int i = 0; i < mu.space().size(); ++i)
        weights[i] = std::max(mu.weight(i), nu.weight(i));
    return Measure(mu.space_ptr(), std::move(weights));
}

SignedMeasure signed_meet(const SignedMeasure& mu, const SignedMeasure& nu) {
    require_same_space(mu.space(), nu.space());
    std::vector<Rat> net(mu.space().size());
    for (int i = 0; i < mu.space().size(); ++i) net[i] = std::min(mu.net(i), nu.net(i));
    return SignedMeasure::from_net(mu.positive().space_ptr(), net);
}

SignedMeasure signed_join(const SignedMeasure& mu, const SignedMeasure& nu) {
    require_same_space(mu.space(), nu.space());
    std::vector<Rat> net(mu.space().size());
    for (int i = 0; i < mu.space().size(); ++i) net[i] = std::max(mu.net(i), nu.net(i));
    return SignedMeasure::from_net(mu.positive().space_ptr(), net);
}

Rat tv_norm(const SignedMeasure& mu) {
    return mu.positive().total() + mu.negative().total();
}

bool dominates(const MeasureFamily& s, const MeasureFamily& t) {
    require_same_space(s.space(), t.space());
    for (int i = 0; i < s.space().size(); ++i) {
        if (t.atom_is_polar(i) && !s.atom_is_polar(i)) return false;
    }
    return true;
}

bool equivalent(const MeasureFamily& s, const MeasureFamily& t) {
    return dominates(s, t) && dominates(t, s);
}

Measure sum_measure(const MeasureFamily& family) {
    std::vector<Rat> weights(family.space().size(), Rat(0));
    for (const auto& [name, measure] : family.members()) {
        for (int i = 0; i < family.space().size(); ++i) weights[i] += measure.weight(i);
    }
    return Measure(family.space_ptr(), std::move(weights));
}

ProductModel build_innovation_model(const SampleSpace& known, const SampleSpace& novel,
                                    const Measure& pi) {
    require_same_space(known, pi.space());
    if (!pi.is_probability())
        fail("NotProbability", "the marginal on the known states must be a probability");
    for (int i = 0; i < known.size(); ++i) {
        if (pi.weight(i) == 0)
            fail("DegeneratePi", "the marginal must have full support; atom \"" +
                                     known.label(i) + "\" has weight 0");
    }
    std::vector<std::string> atoms;
    atoms.reserve(static_cast<std::size_t>(known.size()) * novel.size());
    for (const auto& s1 : known.atoms()) {
        for (const auto& s2 : novel.atoms()) atoms.push_back(s1 + "," + s2);
    }
    SpacePtr product = make_space(std::move(atoms));

    std::vector<std::pair<std::string, Measure>> members;
    for (int j = 0; j < novel.size(); ++j) {
        std::vector<Rat> weights(product->size(), Rat(0));
        for (int i = 0; i < known.size(); ++i) weights[i * novel.size() + j] = pi.weight(i);
        members.emplace_back(novel.label(j), Measure(product, std::move(weights)));
    }
    return ProductModel{product, MeasureFamily(product, std::move(members))};
}

MeasureFamily build_typical_paths_model(SpacePtr space, const Event& xi) {
    if (xi.empty()) fail("EmptyPredictionSet", "the prediction set must be nonempty");
    std::vector<std::pair<std::string, Measure>> members;
    for (int atom : xi) {
        if (atom < 0 || atom >= space->size())
            fail("UnknownAtom", "prediction set references an atom outside the space");
        members.emplace_back(space->label(atom), dirac(space, space->label(atom)));
    }
    return MeasureFamily(std::move(space), std::move(members));
}

ProductModel build_product_model(const Measure& base, const SampleSpace& theta) {
    if (!base.is_probability())
        fail("NotProbability", "the base measure must be a probability");
    std::vector<std::string> atoms;
    atoms.reserve(static_cast<std::size_t>(base.space().size()) * theta.size());
    for (int j = 0; j < theta.size(); ++j) {
        for (const auto& omega : base.space().atoms())
            atoms.push_back(omega + "," + theta.label(j));
    }
    SpacePtr product = make_space(std::move(atoms));

    const int slice = base.space().size();
    std::vector<std::pair<std::string, Measure>> members;
    for (int j = 0; j < theta.size(); ++j) {
        std::vector<Rat> weights(product->size(), Rat(0));
        for (int i = 0; i < slice; ++i) weights[j * slice + i] = base.weight(i);
        members.emplace_back(theta.label(j), Measure(product, std::move(weights)));
    }
    return ProductModel{product, MeasureFamily(product, std::move(members))};
}

} // namespace qsa
