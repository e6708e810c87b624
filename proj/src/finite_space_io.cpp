#include "covshift/finite_space_io.hpp"

#include "covshift/errors.hpp"

#include <charconv>
#include <cstdio>
#include <sstream>
#include <vector>

namespace covshift::finite {

namespace {

std::string_view trim(std::string_view s) {
    const auto first = s.find_first_not_of(" \t\r");
    if (first == std::string_view::npos) {
        return {};
    }
    const auto last = s.find_last_not_of(" \t\r");
    return s.substr(first, last - first + 1);
}

std::vector<std::string> split_list(std::string_view s) {
    std::vector<std::string> out;
    std::size_t start = 0;
    while (true) {
        const auto comma = s.find(',', start);
        out.emplace_back(trim(s.substr(start, comma == std::string_view::npos ? s.npos : comma - start)));
        if (comma == std::string_view::npos) {
            break;
        }
        start = comma + 1;
    }
    return out;
}

double parse_real(const std::string& s) {
    double value = 0.0;
    const auto* end = s.data() + s.size();
    auto [ptr, ec] = std::from_chars(s.data(), end, value);
    if (ec != std::errc() || ptr != end) {
        throw StructuralError("cannot parse real number '" + s + "'");
    }
    return value;
}

std::string format_real(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string join_reals(const std::vector<double>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += format_real(xs[i]);
    }
    return out;
}

struct Line {
    std::string key;
    std::string value;
};

std::vector<Line> key_value_lines(std::string_view text) {
    std::vector<Line> out;
    std::size_t start = 0;
    while (start <= text.size()) {
        auto nl = text.find('\n', start);
        if (nl == std::string_view::npos) {
            nl = text.size();
        }
        const auto line = trim(text.substr(start, nl - start));
        start = nl + 1;
        if (line.empty() || line.front() == '#') {
            continue;
        }
        const auto colon = line.find(':');
        if (colon == std::string_view::npos) {
            throw StructuralError("malformed line '" + std::string(line) + "'");
        }
        out.push_back({std::string(trim(line.substr(0, colon))),
                       std::string(trim(line.substr(colon + 1)))});
    }
    return out;
}

void append_cells(std::string& out, const Partition& partition) {
    const auto& space = partition.space();
    for (const auto& cell : partition.cells()) {
        out += "cell: ";
        for (std::size_t k = 0; k < cell.size(); ++k) {
            if (k > 0) {
                out += ',';
            }
            out += space.id(cell[k]);
        }
        out += '\n';
    }
}

} // namespace

std::string to_text(const FiniteSpace& space) {
    std::string out = "outcomes: ";
    for (std::size_t i = 0; i < space.size(); ++i) {
        if (i > 0) {
            out += ',';
        }
        out += space.id(i);
    }
    out += '\n';
    return out;
}

std::string to_text(const FiniteMeasure& measure) {
    return to_text(measure.space()) + "mass: " + join_reals(measure.mass()) + "\n";
}

std::string to_text(const Partition& partition) {
    std::string out = to_text(partition.space());
    append_cells(out, partition);
    return out;
}

std::string to_text(const FiniteMeasure& measure, const Partition& partition) {
    if (!(measure.space() == partition.space())) {
        throw StructuralError("to_text: measure and partition live on different spaces");
    }
    std::string out = to_text(measure);
    append_cells(out, partition);
    return out;
}

FiniteDocument parse_finite_document(std::string_view text) {
    const auto lines = key_value_lines(text);
    if (lines.empty() || lines.front().key != "outcomes") {
        throw StructuralError("document must start with an 'outcomes:' line");
    }
    FiniteDocument doc{FiniteSpace(split_list(lines.front().value)), std::nullopt, std::nullopt};
    std::vector<std::vector<std::string>> cells;
    for (std::size_t k = 1; k < lines.size(); ++k) {
        const auto& [key, value] = lines[k];
        if (key == "mass") {
            if (doc.measure) {
                throw StructuralError("duplicate 'mass:' line");
            }
            std::vector<double> mass;
            for (const auto& item : split_list(value)) {
                mass.push_back(parse_real(item));
            }
            doc.measure.emplace(doc.space, std::move(mass));
        } else if (key == "cell") {
            cells.push_back(split_list(value));
        } else {
            throw StructuralError("unknown key '" + key + "'");
        }
    }
    if (!cells.empty()) {
        doc.partition = Partition::from_ids(doc.space, cells);
    }
    return doc;
}

std::string to_text(const Theorem1Verdict& verdict) {
    std::ostringstream out;
    out << "sufficient: " << (verdict.sufficient ? "true" : "false") << '\n';
    out << "inherited: " << (verdict.inherited ? "true" : "false") << '\n';
    out << "witness_mass: " << (verdict.witness ? join_reals(verdict.witness->mass()) : "none")
        << '\n';
    return out.str();
}

Theorem1Verdict parse_verdict(std::string_view text, const FiniteSpace& space) {
    auto parse_bool = [](const std::string& v) {
        if (v == "true") {
            return true;
        }
        if (v == "false") {
            return false;
        }
        throw StructuralError("expected 'true' or 'false', got '" + v + "'");
    };
    Theorem1Verdict verdict;
    bool seen_sufficient = false;
    bool seen_inherited = false;
    for (const auto& [key, value] : key_value_lines(text)) {
        if (key == "sufficient") {
            verdict.sufficient = parse_bool(value);
            seen_sufficient = true;
        } else if (key == "inherited") {
            verdict.inherited = parse_bool(value);
            seen_inherited = true;
        } else if (key == "witness_mass") {
            if (value != "none") {
                std::vector<double> mass;
                for (const auto& item : split_list(value)) {
                    mass.push_back(parse_real(item));
                }
                verdict.witness.emplace(space, std::move(mass));
            }
        } else {
            throw StructuralError("unknown verdict key '" + key + "'");
        }
    }
    if (!seen_sufficient || !seen_inherited) {
        throw StructuralError("verdict must carry 'sufficient' and 'inherited'");
    }
    return verdict;
}

} // namespace covshift::finite
