#pragma once

// Finite probability spaces: measures, events and partitions (the finite
// stand-in for sub-sigma-algebras), conditional probabilities given a
// partition, and predicates for covariate shift, prior probability shift and
// sufficiency.
//
// Every sub-sigma-algebra of a finite power set is generated by a unique
// partition, so "information sets" are represented by Partition throughout.
// Conditional probabilities on cells of measure zero are reported as
// UNDEFINED (an empty optional), never as 0 or NaN; all almost-sure
// comparisons skip such cells.

#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <optional>
#include <random>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace covshift::finite {

using Outcome = std::size_t;

/// Default absolute tolerance of every predicate comparison.
inline constexpr double kDefaultTol = 1e-9;

/// Tolerance on the total mass of a FiniteMeasure and on E_P[h] = 1.
inline constexpr double kMassTol = 1e-12;

/// Ordered set of at least two distinct outcome identifiers. Copies share the
/// identifier storage, so passing spaces by value is cheap.
class FiniteSpace {
public:
    explicit FiniteSpace(std::vector<std::string> ids);

    /// Outcomes named "0", "1", ..., "n-1".
    static FiniteSpace of_size(std::size_t n);

    std::size_t size() const noexcept { return ids_->size(); }
    const std::string& id(Outcome i) const { return ids_->at(i); }
    const std::vector<std::string>& ids() const noexcept { return *ids_; }
    std::optional<Outcome> index_of(std::string_view id) const;

    friend bool operator==(const FiniteSpace& a, const FiniteSpace& b);

private:
    std::shared_ptr<const std::vector<std::string>> ids_;
};

/// Subset of the outcomes of a space.
class Event {
public:
    Event(FiniteSpace space, std::vector<Outcome> members);
    static Event from_ids(FiniteSpace space, const std::vector<std::string>& ids);
    static Event empty(FiniteSpace space);
    static Event all(FiniteSpace space);

    const FiniteSpace& space() const noexcept { return space_; }
    bool contains(Outcome i) const { return members_.at(i) != 0; }
    std::vector<Outcome> members() const;
    std::size_t count() const;
    Event complement() const;

    friend bool operator==(const Event& a, const Event& b) = default;

private:
    FiniteSpace space_;
    std::vector<char> members_;
};

/// Probability vector over a space: non-negative masses summing to one.
class FiniteMeasure {
public:
    FiniteMeasure(FiniteSpace space, std::vector<double> mass);
    static FiniteMeasure uniform(FiniteSpace space);

    const FiniteSpace& space() const noexcept { return space_; }
    const std::vector<double>& mass() const noexcept { return mass_; }
    double mass(Outcome i) const { return mass_.at(i); }

    double prob(const Event& e) const;
    double prob(std::span<const Outcome> outcomes) const;

private:
    FiniteSpace space_;
    std::vector<double> mass_;
};

/// Partition of a space into disjoint nonempty cells. Cells are stored in
/// canonical order: outcomes ascending within a cell, cells ordered by their
/// smallest outcome.
class Partition {
public:
    Partition(FiniteSpace space, std::vector<std::vector<Outcome>> cells);

    /// Cell labels per outcome; equal labels share a cell.
    static Partition from_labels(FiniteSpace space, std::span<const std::size_t> labels);
    static Partition from_ids(FiniteSpace space,
                              const std::vector<std::vector<std::string>>& cells);
    static Partition singletons(FiniteSpace space);
    static Partition trivial(FiniteSpace space);
    /// {A, complement of A}, or the trivial partition when A is empty or full.
    static Partition generated_by(const Event& a);

    const FiniteSpace& space() const noexcept { return space_; }
    std::size_t size() const noexcept { return cells_.size(); }
    const std::vector<Outcome>& cell(std::size_t c) const { return cells_.at(c); }
    const std::vector<std::vector<Outcome>>& cells() const noexcept { return cells_; }
    std::size_t cell_of(Outcome i) const { return cell_of_.at(i); }

    /// True if every cell of `finer` lies inside one cell of *this.
    bool coarsens(const Partition& finer) const;
    /// True if `e` is a union of cells.
    bool measures(const Event& e) const;

    friend bool operator==(const Partition& a, const Partition& b);

private:
    FiniteSpace space_;
    std::vector<std::vector<Outcome>> cells_;
    std::vector<std::size_t> cell_of_;
};

/// Common refinement; the partition generating the join of two sigma-algebras.
Partition join(const Partition& a, const Partition& b);

/// One value per cell of a partition; std::nullopt marks UNDEFINED (a cell of
/// measure zero under the governing measure).
class CellFunction {
public:
    CellFunction(Partition partition, std::vector<std::optional<double>> values);

    const Partition& partition() const noexcept { return partition_; }
    const std::vector<std::optional<double>>& values() const noexcept { return values_; }
    const std::optional<double>& value(std::size_t cell) const { return values_.at(cell); }
    const std::optional<double>& at(Outcome i) const {
        return values_.at(partition_.cell_of(i));
    }

private:
    Partition partition_;
    std::vector<std::optional<double>> values_;
};

/// Cellwise-constant density h with respect to a base measure, normalized so
/// that E_base[h] = 1.
class Reweighting {
public:
    Reweighting(FiniteMeasure base, Partition partition, std::vector<double> density);

    /// Scales arbitrary non-negative cell weights to E_base[h] = 1.
    static Reweighting normalized(FiniteMeasure base, Partition partition,
                                  std::vector<double> weights);

    /// Weights drawn log-uniformly from [e^-2, e^2], then normalized.
    static Reweighting random(FiniteMeasure base, Partition partition, std::mt19937_64& rng);

    const FiniteMeasure& base() const noexcept { return base_; }
    const Partition& partition() const noexcept { return partition_; }
    const std::vector<double>& density() const noexcept { return density_; }

private:
    FiniteMeasure base_;
    Partition partition_;
    std::vector<double> density_;
};

/// Increasing map [0,1] -> [0,1], the posterior drift f in Q[A|H] = f(P[A|H]).
class DriftFunction {
public:
    DriftFunction(std::string name, std::function<double(double)> fn);

    static DriftFunction identity();
    static DriftFunction square();
    /// clamp(slope * x + intercept, 0, 1).
    static DriftFunction clipped_affine(double slope, double intercept);

    double operator()(double x) const { return fn_(x); }
    const std::string& name() const noexcept { return name_; }

private:
    std::string name_;
    std::function<double(double)> fn_;
};

CellFunction conditional_prob(const FiniteMeasure& p, const Event& a, const Partition& h);

bool is_absolutely_continuous(const FiniteMeasure& p, const FiniteMeasure& q, const Partition& h);

/// P[A|H] = Q[A|H] Q-almost surely. Throws IndeterminateError when a cell
/// carries Q-mass but no P-mass.
bool is_covariate_shift(const FiniteMeasure& p, const FiniteMeasure& q, const Event& a,
                        const Partition& h, double tol = kDefaultTol);

/// P[C|A_i] = Q[C|A_i] for every cell C and both classes. Requires
/// 0 < P[A] < 1 and 0 < Q[A] < 1.
bool is_prior_probability_shift(const FiniteMeasure& p, const FiniteMeasure& q, const Event& a,
                                const Partition& h, double tol = kDefaultTol);

/// P[A|G] = P[A|H] P-almost surely, for G a coarsening of H.
bool is_sufficient(const FiniteMeasure& p, const Event& a, const Partition& g, const Partition& h,
                   double tol = kDefaultTol);

/// Q[{w}] = h(cell(w)) * P[{w}].
FiniteMeasure reweight(const FiniteMeasure& p, const Reweighting& h);

/// P( . | C). Requires P[C] > 0.
FiniteMeasure conditional_measure(const FiniteMeasure& p, const Event& c);

struct Theorem1Verdict {
    bool sufficient = false;
    bool inherited = false;
    /// A probe in C*_A(P,H) that is not in C*_A(P,G), when inherited is false.
    std::optional<FiniteMeasure> witness;
    /// A is a union of H-cells (the degenerate case excluded by the standing
    /// assumption A not in H). Both sides are still evaluated.
    bool event_measurable = false;
};

/// Checks sufficiency of G for H against inheritance of covariate shift from
/// H to G. The probe set is every conditional measure P( . | C) over P-positive
/// H-cells C plus `n_random` random H-measurable reweightings of P.
Theorem1Verdict verify_theorem1(const FiniteMeasure& p, const Event& a, const Partition& g,
                                const Partition& h, std::size_t n_random, std::uint64_t seed,
                                double tol = kDefaultTol);

/// Target built from P: cell masses Q[C] = h(C) P[C], cell posteriors
/// Q[A|C] = f(P[A|C]), mass spread within A∩C and A^c∩C proportionally to P.
FiniteMeasure drift_target(const FiniteMeasure& p, const Event& a, const Partition& h,
                           const DriftFunction& f, const Reweighting& density);

/// With G sufficient for H, builds drift_target and checks
/// Q[A|D] = f(P[A|D]) on every Q-positive G-cell D within 1e-9.
bool verify_proposition1(const FiniteMeasure& p, const Event& a, const Partition& g,
                         const Partition& h, const DriftFunction& f, const Reweighting& density);

/// Given P[A|T] = P[A|H], Q[A|T] = Q[A|H] and P[A_i ∩ M] = Q[A_i ∩ M] for every
/// T-cell M, returns whether P and Q are related by covariate shift on H.
/// Throws PreconditionError naming the first premise that fails.
bool he_implication_check(const FiniteMeasure& p, const FiniteMeasure& q, const Event& a,
                          const Partition& t, const Partition& h, double tol = kDefaultTol);

/// Three binary coordinates (y, f, g) with A = {y = 1} dependent on f and the
/// g-coordinate independent of (y, f) under P.
struct Example3 {
    FiniteMeasure p;
    Event a;
    Partition f;
    Partition g;
    Partition h;
};

Example3 example3_space(std::uint64_t seed);

} // namespace covshift::finite
