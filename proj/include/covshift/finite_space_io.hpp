#pragma once

// Line-oriented text format for spaces, measures and partitions:
//
//   outcomes: a,b,c,d
//   mass: 0.25,0.25,0.5,0
//   cell: a,b
//   cell: c,d
//
// `outcomes` comes first; `mass` appears at most once; `cell` lines, when
// present, must form a partition. Blank lines and lines starting with '#' are
// ignored. Theorem verdicts use the same `key: value` layout with the keys
// `sufficient`, `inherited` and `witness_mass` (`none` when absent).

#include "covshift/finite_space.hpp"

#include <optional>
#include <string>
#include <string_view>

namespace covshift::finite {

struct FiniteDocument {
    FiniteSpace space;
    std::optional<FiniteMeasure> measure;
    std::optional<Partition> partition;
};

std::string to_text(const FiniteSpace& space);
std::string to_text(const FiniteMeasure& measure);
std::string to_text(const Partition& partition);
std::string to_text(const FiniteMeasure& measure, const Partition& partition);

FiniteDocument parse_finite_document(std::string_view text);

std::string to_text(const Theorem1Verdict& verdict);
Theorem1Verdict parse_verdict(std::string_view text, const FiniteSpace& space);

} // namespace covshift::finite
