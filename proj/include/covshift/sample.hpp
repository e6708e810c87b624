#pragma once

// Source (labeled) and target (covariates only) samples, and the plain-text
// sample file format: one covariate per line, optionally followed by a 0/1
// label separated by whitespace or a comma. Blank lines and '#' comments are
// skipped.

#include <cstdint>
#include <filesystem>
#include <vector>

namespace covshift {

class UnlabeledSample {
public:
    explicit UnlabeledSample(std::vector<double> x, std::uint64_t seed = 0);

    const std::vector<double>& x() const noexcept { return x_; }
    std::size_t size() const noexcept { return x_.size(); }
    std::uint64_t seed() const noexcept { return seed_; }

private:
    std::vector<double> x_;
    std::uint64_t seed_;
};

class LabeledSample {
public:
    LabeledSample(std::vector<double> x, std::vector<std::uint8_t> y, std::uint64_t seed = 0);

    const std::vector<double>& x() const noexcept { return x_; }
    const std::vector<std::uint8_t>& y() const noexcept { return y_; }
    std::size_t size() const noexcept { return x_.size(); }
    std::size_t positives() const noexcept { return positives_; }
    std::uint64_t seed() const noexcept { return seed_; }

    /// The covariates alone, e.g. to use the source as a target.
    UnlabeledSample covariates() const { return UnlabeledSample(x_, seed_); }

private:
    std::vector<double> x_;
    std::vector<std::uint8_t> y_;
    std::size_t positives_ = 0;
    std::uint64_t seed_;
};

/// Reads the first column; a second column, if present, is ignored.
UnlabeledSample read_unlabeled_sample(const std::filesystem::path& path);
/// Requires two columns on every line.
LabeledSample read_labeled_sample(const std::filesystem::path& path);

void write_sample(const std::filesystem::path& path, const UnlabeledSample& sample);
void write_sample(const std::filesystem::path& path, const LabeledSample& sample);

} // namespace covshift
