#pragma once

#include <span>
#include <vector>

#include "gramdet/mat.hpp"

namespace gramdet {

struct KernelSpec {
    enum class Kind { Delta, Linear, Rbf, PseudoPosterior };
    Kind kind = Kind::Delta;
    double sigma = 0.0;  // rbf bandwidth; <= 0 means "resolve by median heuristic"

    static KernelSpec delta() { return {Kind::Delta, 0.0}; }
    static KernelSpec linear() { return {Kind::Linear, 0.0}; }
    static KernelSpec rbf(double sigma = 0.0) { return {Kind::Rbf, sigma}; }
    static KernelSpec pseudo_posterior() { return {Kind::PseudoPosterior, 0.0}; }
};

/// View of a single observation: a categorical id or an embedding vector.
struct Observation {
    bool categorical = false;
    int id = 0;
    std::span<const double> vec;
};

/// Uniform collection of observations, all categorical or all embeddings of
/// one width.
class ObservationSet {
public:
    ObservationSet() = default;

    static ObservationSet categorical(std::vector<int> ids, int alphabet);
    static ObservationSet embeddings(std::vector<double> values, int width);

    bool is_categorical() const { return categorical_; }
    int size() const;
    int alphabet() const { return alphabet_; }
    int width() const { return width_; }

    int id(int n) const { return ids_[n]; }
    std::span<const double> vec(int n) const {
        return {values_.data() + static_cast<size_t>(n) * width_, static_cast<size_t>(width_)};
    }
    Observation at(int n) const;

private:
    bool categorical_ = true;
    int alphabet_ = 0;
    int width_ = 0;
    std::vector<int> ids_;
    std::vector<double> values_;
};

double kernel_eval(const KernelSpec& spec, const Observation& y, const Observation& y2);

/// Gram matrix of labels G_K = P^T * kmat * P for a column-stochastic
/// experiment P over a finite observation space. The delta kernel needs no
/// kmat (it is the identity); other kernels require an explicit k x k matrix
/// of kernel values.
Mat label_gram(const Mat& experiment, const KernelSpec& spec, const Mat* kmat = nullptr);

/// Median pairwise distance over the first (up to) 256 embeddings; 1.0 when
/// the subsample is degenerate. Used as the default rbf bandwidth.
double median_heuristic_sigma(const ObservationSet& obs);

/// Copy of spec with an unset rbf sigma filled in from the observations.
KernelSpec resolved_kernel(KernelSpec spec, const ObservationSet& obs);

} // namespace gramdet
