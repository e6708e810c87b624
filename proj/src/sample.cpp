#include "covshift/sample.hpp"

#include "covshift/errors.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <sstream>
#include <string>

namespace covshift {

namespace {

std::vector<std::string> tokens(const std::string& line) {
    std::string cleaned = line;
    for (char& c : cleaned) {
        if (c == ',') {
            c = ' ';
        }
    }
    std::istringstream in(cleaned);
    std::vector<std::string> out;
    std::string tok;
    while (in >> tok) {
        out.push_back(tok);
    }
    return out;
}

double parse_covariate(const std::string& tok, const std::filesystem::path& path, int line_no) {
    std::size_t used = 0;
    double value = 0.0;
    try {
        value = std::stod(tok, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used != tok.size() || !std::isfinite(value)) {
        throw StructuralError(path.string() + ":" + std::to_string(line_no) +
                              ": bad covariate '" + tok + "'");
    }
    return value;
}

template <typename OnRow>
void read_rows(const std::filesystem::path& path, OnRow&& on_row) {
    std::ifstream in(path);
    if (!in) {
        throw StructuralError("cannot open sample file " + path.string());
    }
    std::string line;
    int line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        const auto first = line.find_first_not_of(" \t\r");
        if (first == std::string::npos || line[first] == '#') {
            continue;
        }
        on_row(tokens(line), line_no);
    }
}

std::string format_covariate(double x) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

} // namespace

UnlabeledSample::UnlabeledSample(std::vector<double> x, std::uint64_t seed)
    : x_(std::move(x)), seed_(seed) {
    if (x_.empty()) {
        throw PreconditionError("UnlabeledSample: sample must be nonempty");
    }
}

LabeledSample::LabeledSample(std::vector<double> x, std::vector<std::uint8_t> y, std::uint64_t seed)
    : x_(std::move(x)), y_(std::move(y)), seed_(seed) {
    if (x_.empty()) {
        throw PreconditionError("LabeledSample: sample must be nonempty");
    }
    if (x_.size() != y_.size()) {
        throw StructuralError("LabeledSample: one label per covariate is required");
    }
    for (auto label : y_) {
        if (label > 1) {
            throw PreconditionError("LabeledSample: labels must be 0 or 1");
        }
        positives_ += label;
    }
}

UnlabeledSample read_unlabeled_sample(const std::filesystem::path& path) {
    std::vector<double> x;
    read_rows(path, [&](const std::vector<std::string>& row, int line_no) {
        if (row.size() > 2) {
            throw StructuralError(path.string() + ":" + std::to_string(line_no) +
                                  ": expected one or two columns");
        }
        x.push_back(parse_covariate(row[0], path, line_no));
    });
    return UnlabeledSample(std::move(x));
}

LabeledSample read_labeled_sample(const std::filesystem::path& path) {
    std::vector<double> x;
    std::vector<std::uint8_t> y;
    read_rows(path, [&](const std::vector<std::string>& row, int line_no) {
        if (row.size() != 2 || (row[1] != "0" && row[1] != "1")) {
            throw StructuralError(path.string() + ":" + std::to_string(line_no) +
                                  ": expected '<covariate> <0|1>'");
        }
        x.push_back(parse_covariate(row[0], path, line_no));
        y.push_back(row[1] == "1" ? 1 : 0);
    });
    return LabeledSample(std::move(x), std::move(y));
}

void write_sample(const std::filesystem::path& path, const UnlabeledSample& sample) {
    std::ofstream out(path);
    for (double x : sample.x()) {
        out << format_covariate(x) << '\n';
    }
    if (!out) {
        throw std::runtime_error("cannot write sample file " + path.string());
    }
}

void write_sample(const std::filesystem::path& path, const LabeledSample& sample) {
    std::ofstream out(path);
    for (std::size_t i = 0; i < sample.size(); ++i) {
        out << format_covariate(sample.x()[i]) << ' ' << int{sample.y()[i]} << '\n';
    }
    if (!out) {
        throw std::runtime_error("cannot write sample file " + path.string());
    }
}

} // namespace covshift
