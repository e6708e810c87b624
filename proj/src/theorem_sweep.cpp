#include "covshift/theorem_sweep.hpp"

#include "covshift/errors.hpp"

#include <algorithm>
#include <array>
#include <numeric>

namespace covshift::finite {

namespace {

// Calls visit(labels) for every restricted growth string of length n.
template <typename Visit>
void for_each_rgs(std::size_t n, Visit&& visit) {
    std::vector<std::size_t> labels(n, 0);
    std::vector<std::size_t> prefix_max(n, 0);
    while (true) {
        visit(labels);
        // Rightmost position that can still be incremented.
        std::size_t i = n;
        bool found = false;
        while (i-- > 1) {
            if (labels[i] <= prefix_max[i - 1]) {
                found = true;
                break;
            }
        }
        if (!found) {
            return;
        }
        ++labels[i];
        prefix_max[i] = std::max(prefix_max[i - 1], labels[i]);
        for (std::size_t j = i + 1; j < n; ++j) {
            labels[j] = 0;
            prefix_max[j] = prefix_max[j - 1];
        }
    }
}

std::vector<double> exponential_weights(std::size_t k, std::mt19937_64& rng) {
    std::exponential_distribution<double> exp1(1.0);
    std::vector<double> w(k);
    for (double& x : w) {
        x = exp1(rng);
    }
    return w;
}

// Spreads `total` over `outcomes` with random exponential proportions.
void spread(std::vector<double>& mass, const std::vector<Outcome>& outcomes, double total,
            std::mt19937_64& rng) {
    if (outcomes.empty()) {
        return;
    }
    auto w = exponential_weights(outcomes.size(), rng);
    const double sum = std::accumulate(w.begin(), w.end(), 0.0);
    for (std::size_t k = 0; k < outcomes.size(); ++k) {
        mass[outcomes[k]] = total * w[k] / sum;
    }
}

} // namespace

std::vector<Partition> all_partitions(const FiniteSpace& space) {
    std::vector<Partition> out;
    for_each_rgs(space.size(), [&](const std::vector<std::size_t>& labels) {
        out.push_back(Partition::from_labels(space, labels));
    });
    return out;
}

std::vector<Partition> all_coarsenings(const Partition& h) {
    std::vector<Partition> out;
    const std::size_t k = h.size();
    if (k == 1) {
        out.push_back(h);
        return out;
    }
    std::vector<std::size_t> outcome_labels(h.space().size());
    for_each_rgs(k, [&](const std::vector<std::size_t>& cell_labels) {
        for (Outcome w = 0; w < outcome_labels.size(); ++w) {
            outcome_labels[w] = cell_labels[h.cell_of(w)];
        }
        out.push_back(Partition::from_labels(h.space(), outcome_labels));
    });
    return out;
}

Partition random_partition(const FiniteSpace& space, std::mt19937_64& rng) {
    std::vector<std::size_t> labels(space.size(), 0);
    std::size_t blocks = 1;
    for (std::size_t i = 1; i < labels.size(); ++i) {
        std::uniform_int_distribution<std::size_t> pick(0, blocks);
        labels[i] = pick(rng);
        if (labels[i] == blocks) {
            ++blocks;
        }
    }
    return Partition::from_labels(space, labels);
}

MeasuredEvent random_measure_and_event(const Partition& h, std::mt19937_64& rng) {
    const FiniteSpace& space = h.space();
    const std::size_t n = space.size();
    std::bernoulli_distribution coin(0.5);
    std::bernoulli_distribution rare(0.1);
    constexpr std::array<double, 3> palette{0.25, 0.5, 0.75};
    std::uniform_int_distribution<std::size_t> pick_palette(0, palette.size() - 1);

    for (int attempt = 0; attempt < 1000; ++attempt) {
        std::vector<Outcome> members;
        for (Outcome w = 0; w < n; ++w) {
            if (coin(rng)) {
                members.push_back(w);
            }
        }
        if (members.empty() || members.size() == n) {
            continue;
        }
        Event a(space, members);

        std::vector<double> mass(n, 0.0);
        if (coin(rng)) {
            mass = exponential_weights(n, rng);
            for (double& m : mass) {
                if (rare(rng)) {
                    m = 0.0;
                }
            }
        } else {
            std::exponential_distribution<double> exp1(1.0);
            for (const auto& cell : h.cells()) {
                const double cell_mass = rare(rng) ? 0.0 : exp1(rng);
                std::vector<Outcome> in;
                std::vector<Outcome> out;
                for (Outcome w : cell) {
                    (a.contains(w) ? in : out).push_back(w);
                }
                double posterior = in.empty() ? 0.0 : 1.0;
                if (!in.empty() && !out.empty()) {
                    posterior = palette[pick_palette(rng)];
                }
                spread(mass, in, cell_mass * posterior, rng);
                spread(mass, out, cell_mass * (1.0 - posterior), rng);
            }
        }
        const double total = std::accumulate(mass.begin(), mass.end(), 0.0);
        if (!(total > 0.0)) {
            continue;
        }
        for (double& m : mass) {
            m /= total;
        }
        FiniteMeasure p(space, std::move(mass));
        const double pa = p.prob(a);
        if (pa > 0.0 && pa < 1.0) {
            return {std::move(p), std::move(a)};
        }
    }
    throw PreconditionError("random_measure_and_event: could not draw P with 0 < P[A] < 1");
}

SweepReport run_theorem_sweep(const SweepConfig& config) {
    if (config.min_size < 2 || config.max_size < config.min_size) {
        throw PreconditionError("run_theorem_sweep: need 2 <= min_size <= max_size");
    }
    SweepReport report;
    std::mt19937_64 rng(config.seed);
    auto record = [&](SweepCase c) {
        report.disagreements += c.agree() ? 0 : 1;
        report.sufficient_cases += c.sufficient ? 1 : 0;
        report.cases.push_back(c);
    };

    for (std::size_t n = config.min_size; n <= config.max_size; ++n) {
        const FiniteSpace space = FiniteSpace::of_size(n);
        for (const Partition& h : all_partitions(space)) {
            for (const Partition& g : all_coarsenings(h)) {
                ++report.structures;
                for (std::size_t draw = 0; draw < config.draws_per_structure; ++draw) {
                    const auto [p, a] = random_measure_and_event(h, rng);
                    const auto verdict =
                        verify_theorem1(p, a, g, h, config.random_densities, rng(), config.tol);
                    record({n, verdict.sufficient, verdict.inherited, g == h, false});
                }
            }
        }
    }

    const Example3 ex = example3_space(rng());
    const auto verdict =
        verify_theorem1(ex.p, ex.a, ex.g, ex.h, config.random_densities, rng(), config.tol);
    record({ex.p.space().size(), verdict.sufficient, verdict.inherited, false, true});
    return report;
}

} // namespace covshift::finite
