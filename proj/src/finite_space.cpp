#include "covshift/finite_space.hpp"

#include "covshift/errors.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <map>
#include <numeric>
#include <set>
#include <utility>

namespace covshift::finite {

namespace {

void require_same_space(const FiniteSpace& a, const FiniteSpace& b, const char* what) {
    if (!(a == b)) {
        throw StructuralError(std::string(what) + ": operands live on different sample spaces");
    }
}

bool valid_id(std::string_view id) {
    if (id.empty()) {
        return false;
    }
    return std::none_of(id.begin(), id.end(), [](char c) {
        return c == ',' || c == ':' || c == '#' || std::isspace(static_cast<unsigned char>(c));
    });
}

struct CellMasses {
    double total = 0.0;
    double in_event = 0.0;
};

std::vector<CellMasses> cell_masses(const FiniteMeasure& m, const Event& a, const Partition& h) {
    std::vector<CellMasses> out(h.size());
    for (std::size_t c = 0; c < h.size(); ++c) {
        for (Outcome w : h.cell(c)) {
            out[c].total += m.mass(w);
            if (a.contains(w)) {
                out[c].in_event += m.mass(w);
            }
        }
    }
    return out;
}

Event cell_event(const Partition& h, std::size_t c) {
    return Event(h.space(), h.cell(c));
}

} // namespace

// ---------------------------------------------------------------------------
// FiniteSpace

FiniteSpace::FiniteSpace(std::vector<std::string> ids) {
    if (ids.size() < 2) {
        throw StructuralError("FiniteSpace: at least two outcomes are required");
    }
    std::set<std::string_view> seen;
    for (const auto& id : ids) {
        if (!valid_id(id)) {
            throw StructuralError("FiniteSpace: invalid outcome identifier '" + id + "'");
        }
        if (!seen.insert(id).second) {
            throw StructuralError("FiniteSpace: duplicate outcome identifier '" + id + "'");
        }
    }
    ids_ = std::make_shared<const std::vector<std::string>>(std::move(ids));
}

FiniteSpace FiniteSpace::of_size(std::size_t n) {
    std::vector<std::string> ids;
    ids.reserve(n);
    for (std::size_t i = 0; i < n; ++i) {
        ids.push_back(std::to_string(i));
    }
    return FiniteSpace(std::move(ids));
}

std::optional<Outcome> FiniteSpace::index_of(std::string_view id) const {
    const auto& v = *ids_;
    auto it = std::find(v.begin(), v.end(), id);
    if (it == v.end()) {
        return std::nullopt;
    }
    return static_cast<Outcome>(it - v.begin());
}

bool operator==(const FiniteSpace& a, const FiniteSpace& b) {
    return a.ids_ == b.ids_ || *a.ids_ == *b.ids_;
}

// ---------------------------------------------------------------------------
// Event

Event::Event(FiniteSpace space, std::vector<Outcome> members)
    : space_(std::move(space)), members_(space_.size(), 0) {
    for (Outcome w : members) {
        if (w >= space_.size()) {
            throw StructuralError("Event: outcome index out of range");
        }
        members_[w] = 1;
    }
}

Event Event::from_ids(FiniteSpace space, const std::vector<std::string>& ids) {
    std::vector<Outcome> members;
    for (const auto& id : ids) {
        auto i = space.index_of(id);
        if (!i) {
            throw StructuralError("Event: unknown outcome '" + id + "'");
        }
        members.push_back(*i);
    }
    return Event(std::move(space), std::move(members));
}

Event Event::empty(FiniteSpace space) {
    return Event(std::move(space), {});
}

Event Event::all(FiniteSpace space) {
    std::vector<Outcome> members(space.size());
    std::iota(members.begin(), members.end(), Outcome{0});
    return Event(std::move(space), std::move(members));
}

std::vector<Outcome> Event::members() const {
    std::vector<Outcome> out;
    for (Outcome w = 0; w < members_.size(); ++w) {
        if (members_[w] != 0) {
            out.push_back(w);
        }
    }
    return out;
}

std::size_t Event::count() const {
    return static_cast<std::size_t>(std::count(members_.begin(), members_.end(), char{1}));
}

Event Event::complement() const {
    Event out = *this;
    for (auto& m : out.members_) {
        m = m != 0 ? 0 : 1;
    }
    return out;
}

// ---------------------------------------------------------------------------
// FiniteMeasure

FiniteMeasure::FiniteMeasure(FiniteSpace space, std::vector<double> mass)
    : space_(std::move(space)), mass_(std::move(mass)) {
    if (mass_.size() != space_.size()) {
        throw StructuralError("FiniteMeasure: one mass per outcome is required");
    }
    double total = 0.0;
    for (double m : mass_) {
        if (!std::isfinite(m) || m < 0.0) {
            throw PreconditionError("FiniteMeasure: masses must be finite and non-negative");
        }
        total += m;
    }
    if (std::abs(total - 1.0) > kMassTol) {
        throw PreconditionError("FiniteMeasure: masses must sum to one");
    }
}

FiniteMeasure FiniteMeasure::uniform(FiniteSpace space) {
    const std::size_t n = space.size();
    return FiniteMeasure(std::move(space), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

double FiniteMeasure::prob(const Event& e) const {
    require_same_space(space_, e.space(), "FiniteMeasure::prob");
    double total = 0.0;
    for (Outcome w = 0; w < mass_.size(); ++w) {
        if (e.contains(w)) {
            total += mass_[w];
        }
    }
    return total;
}

double FiniteMeasure::prob(std::span<const Outcome> outcomes) const {
    double total = 0.0;
    for (Outcome w : outcomes) {
        total += mass_.at(w);
    }
    return total;
}

// ---------------------------------------------------------------------------
// Partition

Partition::Partition(FiniteSpace space, std::vector<std::vector<Outcome>> cells)
    : space_(std::move(space)), cells_(std::move(cells)), cell_of_(space_.size(), 0) {
    std::vector<char> seen(space_.size(), 0);
    for (auto& cell : cells_) {
        if (cell.empty()) {
            throw StructuralError("Partition: empty cell");
        }
        for (Outcome w : cell) {
            if (w >= space_.size()) {
                throw StructuralError("Partition: outcome index out of range");
            }
            if (seen[w] != 0) {
                throw StructuralError("Partition: cells overlap at outcome '" + space_.id(w) + "'");
            }
            seen[w] = 1;
        }
        std::sort(cell.begin(), cell.end());
    }
    if (std::find(seen.begin(), seen.end(), char{0}) != seen.end()) {
        throw StructuralError("Partition: cells do not cover the space");
    }
    std::sort(cells_.begin(), cells_.end(),
              [](const auto& x, const auto& y) { return x.front() < y.front(); });
    for (std::size_t c = 0; c < cells_.size(); ++c) {
        for (Outcome w : cells_[c]) {
            cell_of_[w] = c;
        }
    }
}

Partition Partition::from_labels(FiniteSpace space, std::span<const std::size_t> labels) {
    if (labels.size() != space.size()) {
        throw StructuralError("Partition: one label per outcome is required");
    }
    std::map<std::size_t, std::vector<Outcome>> by_label;
    for (Outcome w = 0; w < labels.size(); ++w) {
        by_label[labels[w]].push_back(w);
    }
    std::vector<std::vector<Outcome>> cells;
    cells.reserve(by_label.size());
    for (auto& [label, cell] : by_label) {
        cells.push_back(std::move(cell));
    }
    return Partition(std::move(space), std::move(cells));
}

Partition Partition::from_ids(FiniteSpace space,
                              const std::vector<std::vector<std::string>>& cells) {
    std::vector<std::vector<Outcome>> out;
    out.reserve(cells.size());
    for (const auto& cell : cells) {
        std::vector<Outcome> members;
        for (const auto& id : cell) {
            auto i = space.index_of(id);
            if (!i) {
                throw StructuralError("Partition: unknown outcome '" + id + "'");
            }
            members.push_back(*i);
        }
        out.push_back(std::move(members));
    }
    return Partition(std::move(space), std::move(out));
}

Partition Partition::singletons(FiniteSpace space) {
    std::vector<std::vector<Outcome>> cells(space.size());
    for (Outcome w = 0; w < space.size(); ++w) {
        cells[w] = {w};
    }
    return Partition(std::move(space), std::move(cells));
}

Partition Partition::trivial(FiniteSpace space) {
    std::vector<Outcome> all(space.size());
    std::iota(all.begin(), all.end(), Outcome{0});
    return Partition(std::move(space), {std::move(all)});
}

Partition Partition::generated_by(const Event& a) {
    auto in = a.members();
    auto out = a.complement().members();
    if (in.empty() || out.empty()) {
        return trivial(a.space());
    }
    return Partition(a.space(), {std::move(in), std::move(out)});
}

bool Partition::coarsens(const Partition& finer) const {
    if (!(space_ == finer.space())) {
        return false;
    }
    for (const auto& cell : finer.cells()) {
        const std::size_t c = cell_of_[cell.front()];
        for (Outcome w : cell) {
            if (cell_of_[w] != c) {
                return false;
            }
        }
    }
    return true;
}

bool Partition::measures(const Event& e) const {
    require_same_space(space_, e.space(), "Partition::measures");
    for (const auto& cell : cells_) {
        const bool first = e.contains(cell.front());
        for (Outcome w : cell) {
            if (e.contains(w) != first) {
                return false;
            }
        }
    }
    return true;
}

bool operator==(const Partition& a, const Partition& b) {
    return a.space_ == b.space_ && a.cells_ == b.cells_;
}

Partition join(const Partition& a, const Partition& b) {
    require_same_space(a.space(), b.space(), "join");
    const std::size_t n = a.space().size();
    std::vector<std::size_t> labels(n);
    for (Outcome w = 0; w < n; ++w) {
        labels[w] = a.cell_of(w) * b.size() + b.cell_of(w);
    }
    return Partition::from_labels(a.space(), labels);
}

// ---------------------------------------------------------------------------
// CellFunction, Reweighting, DriftFunction

CellFunction::CellFunction(Partition partition, std::vector<std::optional<double>> values)
    : partition_(std::move(partition)), values_(std::move(values)) {
    if (values_.size() != partition_.size()) {
        throw StructuralError("CellFunction: one value per cell is required");
    }
    for (const auto& v : values_) {
        if (v && !(*v >= 0.0 && *v <= 1.0)) {
            throw PreconditionError("CellFunction: defined values must lie in [0,1]");
        }
    }
}

Reweighting::Reweighting(FiniteMeasure base, Partition partition, std::vector<double> density)
    : base_(std::move(base)), partition_(std::move(partition)), density_(std::move(density)) {
    require_same_space(base_.space(), partition_.space(), "Reweighting");
    if (density_.size() != partition_.size()) {
        throw StructuralError("Reweighting: one density value per cell is required");
    }
    double expectation = 0.0;
    for (std::size_t c = 0; c < density_.size(); ++c) {
        if (!std::isfinite(density_[c]) || density_[c] < 0.0) {
            throw PreconditionError("Reweighting: density must be finite and non-negative");
        }
        expectation += density_[c] * base_.prob(partition_.cell(c));
    }
    if (std::abs(expectation - 1.0) > kMassTol) {
        throw PreconditionError("Reweighting: density must have expectation one under the base");
    }
}

Reweighting Reweighting::normalized(FiniteMeasure base, Partition partition,
                                    std::vector<double> weights) {
    require_same_space(base.space(), partition.space(), "Reweighting::normalized");
    if (weights.size() != partition.size()) {
        throw StructuralError("Reweighting: one weight per cell is required");
    }
    double expectation = 0.0;
    for (std::size_t c = 0; c < weights.size(); ++c) {
        expectation += weights[c] * base.prob(partition.cell(c));
    }
    if (!(expectation > 0.0)) {
        throw PreconditionError("Reweighting: weights have zero expectation under the base");
    }
    for (double& w : weights) {
        w /= expectation;
    }
    return Reweighting(std::move(base), std::move(partition), std::move(weights));
}

Reweighting Reweighting::random(FiniteMeasure base, Partition partition, std::mt19937_64& rng) {
    std::uniform_real_distribution<double> log_weight(-2.0, 2.0);
    std::vector<double> weights(partition.size());
    for (double& w : weights) {
        w = std::exp(log_weight(rng));
    }
    return normalized(std::move(base), std::move(partition), std::move(weights));
}

DriftFunction::DriftFunction(std::string name, std::function<double(double)> fn)
    : name_(std::move(name)), fn_(std::move(fn)) {
    double previous = -1.0;
    for (int k = 0; k <= 100; ++k) {
        const double y = fn_(k / 100.0);
        if (!(y >= 0.0 && y <= 1.0) || y < previous) {
            throw PreconditionError("DriftFunction '" + name_ +
                                    "' is not an increasing map into [0,1]");
        }
        previous = y;
    }
}

DriftFunction DriftFunction::identity() {
    return DriftFunction("identity", [](double x) { return x; });
}

DriftFunction DriftFunction::square() {
    return DriftFunction("square", [](double x) { return x * x; });
}

DriftFunction DriftFunction::clipped_affine(double slope, double intercept) {
    return DriftFunction("clipped_affine", [slope, intercept](double x) {
        return std::clamp(slope * x + intercept, 0.0, 1.0);
    });
}

// ---------------------------------------------------------------------------
// Operations

CellFunction conditional_prob(const FiniteMeasure& p, const Event& a, const Partition& h) {
    require_same_space(p.space(), a.space(), "conditional_prob");
    require_same_space(p.space(), h.space(), "conditional_prob");
    const auto masses = cell_masses(p, a, h);
    std::vector<std::optional<double>> values(h.size());
    for (std::size_t c = 0; c < h.size(); ++c) {
        if (masses[c].total > 0.0) {
            values[c] = std::min(1.0, masses[c].in_event / masses[c].total);
        }
    }
    return CellFunction(h, std::move(values));
}

bool is_absolutely_continuous(const FiniteMeasure& p, const FiniteMeasure& q, const Partition& h) {
    require_same_space(p.space(), q.space(), "is_absolutely_continuous");
    require_same_space(p.space(), h.space(), "is_absolutely_continuous");
    for (const auto& cell : h.cells()) {
        if (p.prob(cell) == 0.0 && q.prob(cell) > 0.0) {
            return false;
        }
    }
    return true;
}

bool is_covariate_shift(const FiniteMeasure& p, const FiniteMeasure& q, const Event& a,
                        const Partition& h, double tol) {
    require_same_space(p.space(), q.space(), "is_covariate_shift");
    require_same_space(p.space(), a.space(), "is_covariate_shift");
    require_same_space(p.space(), h.space(), "is_covariate_shift");
    if (!(tol >= 0.0)) {
        throw PreconditionError("is_covariate_shift: tolerance must be non-negative");
    }
    const auto pm = cell_masses(p, a, h);
    const auto qm = cell_masses(q, a, h);
    for (std::size_t c = 0; c < h.size(); ++c) {
        if (qm[c].total == 0.0) {
            continue;
        }
        if (pm[c].total == 0.0) {
            throw IndeterminateError("is_covariate_shift: cell containing outcome '" +
                                     h.space().id(h.cell(c).front()) +
                                     "' has target mass but no source mass");
        }
        const double p_post = pm[c].in_event / pm[c].total;
        const double q_post = qm[c].in_event / qm[c].total;
        if (std::abs(p_post - q_post) > tol) {
            return false;
        }
    }
    return true;
}

bool is_prior_probability_shift(const FiniteMeasure& p, const FiniteMeasure& q, const Event& a,
                                const Partition& h, double tol) {
    require_same_space(p.space(), q.space(), "is_prior_probability_shift");
    require_same_space(p.space(), a.space(), "is_prior_probability_shift");
    require_same_space(p.space(), h.space(), "is_prior_probability_shift");
    const double pa = p.prob(a);
    const double qa = q.prob(a);
    if (!(pa > 0.0 && pa < 1.0 && qa > 0.0 && qa < 1.0)) {
        throw PreconditionError("is_prior_probability_shift: class masses must lie in (0,1)");
    }
    const auto pm = cell_masses(p, a, h);
    const auto qm = cell_masses(q, a, h);
    for (std::size_t c = 0; c < h.size(); ++c) {
        const double p_pos = pm[c].in_event / pa;
        const double q_pos = qm[c].in_event / qa;
        const double p_neg = (pm[c].total - pm[c].in_event) / (1.0 - pa);
        const double q_neg = (qm[c].total - qm[c].in_event) / (1.0 - qa);
        if (std::abs(p_pos - q_pos) > tol || std::abs(p_neg - q_neg) > tol) {
            return false;
        }
    }
    return true;
}

bool is_sufficient(const FiniteMeasure& p, const Event& a, const Partition& g, const Partition& h,
                   double tol) {
    require_same_space(p.space(), a.space(), "is_sufficient");
    require_same_space(p.space(), h.space(), "is_sufficient");
    require_same_space(p.space(), g.space(), "is_sufficient");
    if (!g.coarsens(h)) {
        throw StructuralError("is_sufficient: G is not a coarsening of H");
    }
    const auto hm = cell_masses(p, a, h);
    const auto gm = cell_masses(p, a, g);
    for (std::size_t c = 0; c < h.size(); ++c) {
        if (hm[c].total == 0.0) {
            continue;
        }
        const std::size_t d = g.cell_of(h.cell(c).front());
        const double fine = hm[c].in_event / hm[c].total;
        const double coarse = gm[d].in_event / gm[d].total;
        if (std::abs(fine - coarse) > tol) {
            return false;
        }
    }
    return true;
}

FiniteMeasure reweight(const FiniteMeasure& p, const Reweighting& h) {
    require_same_space(p.space(), h.partition().space(), "reweight");
    const auto& part = h.partition();
    double expectation = 0.0;
    for (std::size_t c = 0; c < part.size(); ++c) {
        expectation += h.density()[c] * p.prob(part.cell(c));
    }
    if (std::abs(expectation - 1.0) > kMassTol) {
        throw PreconditionError("reweight: E_P[h] differs from one");
    }
    std::vector<double> mass(p.space().size());
    for (Outcome w = 0; w < mass.size(); ++w) {
        mass[w] = h.density()[part.cell_of(w)] * p.mass(w);
    }
    return FiniteMeasure(p.space(), std::move(mass));
}

FiniteMeasure conditional_measure(const FiniteMeasure& p, const Event& c) {
    const double pc = p.prob(c);
    if (!(pc > 0.0)) {
        throw PreconditionError("conditional_measure: conditioning event has probability zero");
    }
    std::vector<double> mass(p.space().size(), 0.0);
    for (Outcome w = 0; w < mass.size(); ++w) {
        if (c.contains(w)) {
            mass[w] = p.mass(w) / pc;
        }
    }
    return FiniteMeasure(p.space(), std::move(mass));
}

Theorem1Verdict verify_theorem1(const FiniteMeasure& p, const Event& a, const Partition& g,
                                const Partition& h, std::size_t n_random, std::uint64_t seed,
                                double tol) {
    require_same_space(p.space(), a.space(), "verify_theorem1");
    require_same_space(p.space(), g.space(), "verify_theorem1");
    require_same_space(p.space(), h.space(), "verify_theorem1");
    if (!g.coarsens(h)) {
        throw StructuralError("verify_theorem1: G is not a coarsening of H");
    }
    const double pa = p.prob(a);
    if (!(pa > 0.0 && pa < 1.0)) {
        throw PreconditionError("verify_theorem1: P[A] must lie in (0,1)");
    }

    Theorem1Verdict verdict;
    verdict.event_measurable = h.measures(a);
    verdict.sufficient = is_sufficient(p, a, g, h, tol);
    verdict.inherited = true;

    auto check = [&](FiniteMeasure q) {
        if (!is_covariate_shift(p, q, a, g, tol)) {
            verdict.inherited = false;
            verdict.witness = std::move(q);
            return false;
        }
        return true;
    };

    // P conditioned on each H-cell: these alone refute inheritance whenever
    // sufficiency fails.
    for (std::size_t c = 0; c < h.size(); ++c) {
        const Event cell = cell_event(h, c);
        if (p.prob(cell) > 0.0 && !check(conditional_measure(p, cell))) {
            return verdict;
        }
    }
    std::mt19937_64 rng(seed);
    for (std::size_t k = 0; k < n_random; ++k) {
        if (!check(reweight(p, Reweighting::random(p, h, rng)))) {
            return verdict;
        }
    }
    return verdict;
}

FiniteMeasure drift_target(const FiniteMeasure& p, const Event& a, const Partition& h,
                           const DriftFunction& f, const Reweighting& density) {
    require_same_space(p.space(), a.space(), "drift_target");
    require_same_space(p.space(), h.space(), "drift_target");
    if (!density.partition().coarsens(h)) {
        throw PreconditionError("drift_target: density is not measurable with respect to H");
    }
    const FiniteMeasure base = reweight(p, density);
    const auto pm = cell_masses(p, a, h);
    std::vector<double> mass(p.space().size(), 0.0);
    for (std::size_t c = 0; c < h.size(); ++c) {
        const double qc = base.prob(h.cell(c));
        if (qc == 0.0) {
            continue;
        }
        const double pos = pm[c].in_event;
        const double neg = pm[c].total - pm[c].in_event;
        const double target_post = f(pos / pm[c].total);
        if ((target_post > 0.0 && pos == 0.0) || (target_post < 1.0 && neg == 0.0)) {
            throw PreconditionError("drift_target: drifted posterior needs mass where P has none");
        }
        for (Outcome w : h.cell(c)) {
            if (a.contains(w)) {
                mass[w] = pos > 0.0 ? qc * target_post * p.mass(w) / pos : 0.0;
            } else {
                mass[w] = neg > 0.0 ? qc * (1.0 - target_post) * p.mass(w) / neg : 0.0;
            }
        }
    }
    return FiniteMeasure(p.space(), std::move(mass));
}

bool verify_proposition1(const FiniteMeasure& p, const Event& a, const Partition& g,
                         const Partition& h, const DriftFunction& f, const Reweighting& density) {
    if (!is_sufficient(p, a, g, h)) {
        throw PreconditionError("verify_proposition1: G is not sufficient for H");
    }
    const FiniteMeasure q = drift_target(p, a, h, f, density);
    const auto pm = cell_masses(p, a, g);
    const auto qm = cell_masses(q, a, g);
    for (std::size_t d = 0; d < g.size(); ++d) {
        if (qm[d].total == 0.0) {
            continue;
        }
        const double expected = f(pm[d].in_event / pm[d].total);
        if (std::abs(qm[d].in_event / qm[d].total - expected) > 1e-9) {
            return false;
        }
    }
    return true;
}

bool he_implication_check(const FiniteMeasure& p, const FiniteMeasure& q, const Event& a,
                          const Partition& t, const Partition& h, double tol) {
    require_same_space(p.space(), q.space(), "he_implication_check");
    if (!t.coarsens(h)) {
        throw StructuralError("he_implication_check: T is not a coarsening of H");
    }
    if (!is_sufficient(p, a, t, h, tol)) {
        throw PreconditionError("he_implication_check: premise P[A|T] = P[A|H] fails");
    }
    if (!is_sufficient(q, a, t, h, tol)) {
        throw PreconditionError("he_implication_check: premise Q[A|T] = Q[A|H] fails");
    }
    const auto pm = cell_masses(p, a, t);
    const auto qm = cell_masses(q, a, t);
    for (std::size_t m = 0; m < t.size(); ++m) {
        const double p_neg = pm[m].total - pm[m].in_event;
        const double q_neg = qm[m].total - qm[m].in_event;
        if (std::abs(pm[m].in_event - qm[m].in_event) > tol || std::abs(p_neg - q_neg) > tol) {
            throw PreconditionError(
                "he_implication_check: premise P[A_i ∩ {T in M}] = Q[A_i ∩ {T in M}] fails");
        }
    }
    return is_covariate_shift(p, q, a, h, tol);
}

Example3 example3_space(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> u(0.0, 1.0);
    const double pf = 0.2 + 0.6 * u(rng);
    const double py_f0 = 0.1 + 0.3 * u(rng);
    const double py_f1 = 0.6 + 0.3 * u(rng);
    const double pg = 0.2 + 0.6 * u(rng);

    std::vector<std::string> ids;
    std::vector<double> mass;
    std::vector<std::size_t> f_label;
    std::vector<std::size_t> g_label;
    std::vector<Outcome> positives;
    for (int y = 0; y < 2; ++y) {
        for (int f = 0; f < 2; ++f) {
            for (int g = 0; g < 2; ++g) {
                ids.push_back("y" + std::to_string(y) + "f" + std::to_string(f) + "g" +
                              std::to_string(g));
                const double p_f = f == 1 ? pf : 1.0 - pf;
                const double p_y1 = f == 1 ? py_f1 : py_f0;
                const double p_y = y == 1 ? p_y1 : 1.0 - p_y1;
                const double p_g = g == 1 ? pg : 1.0 - pg;
                mass.push_back(p_f * p_y * p_g);
                f_label.push_back(static_cast<std::size_t>(f));
                g_label.push_back(static_cast<std::size_t>(g));
                if (y == 1) {
                    positives.push_back(ids.size() - 1);
                }
            }
        }
    }
    // Products of three factors can drift a few ulps away from total mass one.
    const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
    for (double& m : mass) {
        m /= total;
    }
    FiniteSpace space(std::move(ids));
    Partition f = Partition::from_labels(space, f_label);
    Partition g = Partition::from_labels(space, g_label);
    Partition h = join(f, g);
    return Example3{FiniteMeasure(space, std::move(mass)), Event(space, std::move(positives)),
                    std::move(f), std::move(g), std::move(h)};
}

} // namespace covshift::finite
