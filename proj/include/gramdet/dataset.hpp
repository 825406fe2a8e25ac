#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "gramdet/mat.hpp"

namespace gramdet {

/// A sequence of label ids in 1..d.
struct Labels {
    std::vector<int> values;
    int d = 0;

    Labels() = default;
    Labels(std::vector<int> vals, int label_count);

    int n() const { return static_cast<int>(values.size()); }
};

/// Exact joint counts of (true label, reported label) pairs. Counts stay
/// integral so traces, marginals and Hamming distances are exact.
struct MisreportCounts {
    int d = 0;
    int64_t n_total = 0;
    std::vector<int64_t> counts;  // d*d row-major; counts[i][j] = #{n : x_n=i+1, xhat_n=j+1}

    int64_t at(int i, int j) const { return counts[static_cast<size_t>(i) * d + j]; }
    int64_t& at(int i, int j) { return counts[static_cast<size_t>(i) * d + j]; }
    int64_t trace_counts() const;

    /// The joint frequency matrix Q = counts / n_total.
    Mat frequencies() const;
};

struct FrequencyDecomposition {
    std::vector<double> q_x;     // true-label marginal
    std::vector<double> q_xhat;  // reported-label marginal
    Mat q_xhat_given_x;          // column-stochastic; column j conditions on true label j
    Mat q_x_given_xhat;          // column-stochastic; column j conditions on reported label j
};

struct MatrixClass {
    enum class Kind { NonPerm, Reg, Dom, Balanced, BalancedDelta };
    Kind kind;
    int balance = 1;     // L
    double delta = 1.0;  // Hamming-fraction bound for BalancedDelta

    static MatrixClass nonperm() { return {Kind::NonPerm, 1, 1.0}; }
    static MatrixClass reg() { return {Kind::Reg, 1, 1.0}; }
    static MatrixClass dom() { return {Kind::Dom, 1, 1.0}; }
    static MatrixClass balanced(int L) { return {Kind::Balanced, L, 1.0}; }
    static MatrixClass balanced_delta(int L, double delta) { return {Kind::BalancedDelta, L, delta}; }
};

struct OrderingSpec {
    enum class Kind { Exact, Blackwell, Hamming, Dist };
    Kind kind = Kind::Exact;
    double alpha = 1.0;     // margin factor for Hamming/Dist
    std::optional<Mat> dist_table;

    static OrderingSpec exact() { return {Kind::Exact, 1.0, std::nullopt}; }
    static OrderingSpec blackwell() { return {Kind::Blackwell, 1.0, std::nullopt}; }
    static OrderingSpec hamming(double alpha = 1.0);  // alpha in (0, 1]
    static OrderingSpec dist(Mat table, double alpha = 1.0);
};

/// The garbling T mapping one conditional misreport matrix onto another.
struct BlackwellWitness {
    Mat t;
    bool is_witness = false;
};

struct OrderingOutcome {
    bool holds = false;
    std::optional<BlackwellWitness> witness;  // present for Blackwell queries
};

MisreportCounts misreport_matrix(const Labels& truth, const Labels& report);

/// Marginals and conditionals of Q. Conditional columns whose marginal is zero
/// are filled with the uniform distribution 1/d.
FrequencyDecomposition decompose(const MisreportCounts& q);

bool class_member(const MisreportCounts& q, const MatrixClass& c);

OrderingOutcome ordering_holds(const Labels& truth, const Labels& a, const Labels& b,
                               const OrderingSpec& spec);

int64_t hamming_distance(const Labels& a, const Labels& b);

double dist_sum(const Labels& a, const Labels& b, const Mat& table);

} // namespace gramdet
