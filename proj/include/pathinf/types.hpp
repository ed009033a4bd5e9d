#pragma once

#include <bit>
#include <compare>
#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

#include "pathinf/errors.hpp"

namespace pathinf {

// One cell of an observation row. Missing means the true binary value was
// not recorded.
enum class Cell : std::uint8_t { Negative = 0, Positive = 1, Missing = 2 };

// A complete binary assignment to all n_vars variables. Bit k corresponds to
// variable k (the k-th column label), so the string form reads left to right
// in label order.
struct State {
    std::uint64_t bits = 0;
    int n_vars = 0;

    bool bit(int i) const { return (bits >> i) & 1u; }

    int positive_count() const { return std::popcount(bits); }

    std::vector<int> positives() const {
        std::vector<int> out;
        out.reserve(static_cast<std::size_t>(positive_count()));
        for (int i = 0; i < n_vars; ++i) {
            if (bit(i)) out.push_back(i);
        }
        return out;
    }

    std::string to_string() const {
        std::string s(static_cast<std::size_t>(n_vars), '0');
        for (int i = 0; i < n_vars; ++i) {
            if (bit(i)) s[static_cast<std::size_t>(i)] = '1';
        }
        return s;
    }

    static State from_string(const std::string& s) {
        if (s.empty() || s.size() > 63) {
            throw ParseError("state string must have 1..63 characters, got \"" + s + "\"");
        }
        State st{0, static_cast<int>(s.size())};
        for (std::size_t i = 0; i < s.size(); ++i) {
            if (s[i] == '1') {
                st.bits |= std::uint64_t{1} << i;
            } else if (s[i] != '0') {
                throw ParseError("invalid character '" + std::string(1, s[i]) +
                                 "' in state string \"" + s + "\"");
            }
        }
        return st;
    }

    auto operator<=>(const State&) const = default;
};

// m samples over n binary variables with missing values.
struct ObservationMatrix {
    std::vector<std::string> labels;
    std::vector<std::vector<Cell>> rows;

    std::size_t n_vars() const { return labels.size(); }
    std::size_t n_rows() const { return rows.size(); }

    // Checks the structural invariants; throws ConfigError on violation.
    void validate() const;
};

// Priors on the missing-value mechanism. p_miss_pos is the probability that
// a truly positive value was not recorded; negatives are missed with
// probability p_miss_neg, fixed at 0.5 unless overridden.
struct MissingnessPrior {
    double p_miss_pos = 0.25;
    double p_miss_neg = 0.5;

    void validate() const;
};

}  // namespace pathinf
