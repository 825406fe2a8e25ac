#include "gramdet/kernels.hpp"

#include <algorithm>
#include <cmath>

#include "gramdet/errors.hpp"

namespace gramdet {

ObservationSet ObservationSet::categorical(std::vector<int> ids, int alphabet) {
    if (alphabet < 1) throw DimensionError("observation alphabet must have k >= 1");
    for (int v : ids)
        if (v < 1 || v > alphabet) throw DimensionError("categorical observation out of range 1..k");
    ObservationSet s;
    s.categorical_ = true;
    s.alphabet_ = alphabet;
    s.ids_ = std::move(ids);
    return s;
}

ObservationSet ObservationSet::embeddings(std::vector<double> values, int width) {
    if (width < 1) throw DimensionError("embedding width must be >= 1");
    if (values.size() % static_cast<size_t>(width) != 0)
        throw DimensionError("embedding buffer size not a multiple of width");
    for (double v : values)
        if (!std::isfinite(v)) throw Error("embedding entries must be finite");
    ObservationSet s;
    s.categorical_ = false;
    s.width_ = width;
    s.values_ = std::move(values);
    return s;
}

int ObservationSet::size() const {
    return categorical_ ? static_cast<int>(ids_.size())
                        : static_cast<int>(values_.size() / static_cast<size_t>(width_));
}

Observation ObservationSet::at(int n) const {
    if (categorical_) return {true, ids_[n], {}};
    return {false, 0, vec(n)};
}

double kernel_eval(const KernelSpec& spec, const Observation& y, const Observation& y2) {
    if (y.categorical != y2.categorical)
        throw KernelDomainError("kernel_eval: mixed observation variants");
    switch (spec.kind) {
        case KernelSpec::Kind::Delta:
            if (!y.categorical) throw KernelDomainError("delta kernel requires categorical observations");
            return y.id == y2.id ? 1.0 : 0.0;
        case KernelSpec::Kind::Linear:
        case KernelSpec::Kind::PseudoPosterior: {
            if (y.categorical)
                throw KernelDomainError("feature kernels require embedding observations");
            if (y.vec.size() != y2.vec.size())
                throw KernelDomainError("kernel_eval: embedding width mismatch");
            double dot = 0.0;
            for (size_t i = 0; i < y.vec.size(); ++i) dot += y.vec[i] * y2.vec[i];
            return dot;
        }
        case KernelSpec::Kind::Rbf: {
            if (y.categorical) throw KernelDomainError("rbf kernel requires embedding observations");
            if (y.vec.size() != y2.vec.size())
                throw KernelDomainError("kernel_eval: embedding width mismatch");
            if (spec.sigma <= 0.0) throw ConfigError("rbf kernel used with unresolved sigma");
            double sq = 0.0;
            for (size_t i = 0; i < y.vec.size(); ++i) {
                const double diff = y.vec[i] - y2.vec[i];
                sq += diff * diff;
            }
            return std::exp(-sq / (spec.sigma * spec.sigma));
        }
    }
    throw ConfigError("unknown kernel kind");
}

Mat label_gram(const Mat& experiment, const KernelSpec& spec, const Mat* kmat) {
    if (!matches(experiment, {StructuralPredicate::Kind::ColumnStochastic, 1e-9}))
        throw DimensionError("label_gram: experiment matrix must be column-stochastic");
    const int k = experiment.rows();
    if (spec.kind == KernelSpec::Kind::Delta && kmat == nullptr)
        return experiment.transposed() * experiment;
    if (kmat == nullptr)
        throw KernelDomainError("label_gram: this kernel needs an explicit k x k kernel matrix");
    if (kmat->rows() != k || kmat->cols() != k)
        throw DimensionError("label_gram: kernel matrix shape does not match observation space");
    return experiment.transposed() * (*kmat) * experiment;
}

double median_heuristic_sigma(const ObservationSet& obs) {
    if (obs.is_categorical())
        throw KernelDomainError("median heuristic applies to embedding observations");
    const int n = std::min(obs.size(), 256);
    std::vector<double> dists;
    dists.reserve(static_cast<size_t>(n) * (n - 1) / 2);
    for (int a = 0; a < n; ++a) {
        const auto va = obs.vec(a);
        for (int b = a + 1; b < n; ++b) {
            const auto vb = obs.vec(b);
            double sq = 0.0;
            for (size_t i = 0; i < va.size(); ++i) {
                const double diff = va[i] - vb[i];
                sq += diff * diff;
            }
            dists.push_back(std::sqrt(sq));
        }
    }
    if (dists.empty()) return 1.0;
    const size_t mid = dists.size() / 2;
    std::nth_element(dists.begin(), dists.begin() + mid, dists.end());
    const double med = dists[mid];
    return med > 0.0 ? med : 1.0;
}

KernelSpec resolved_kernel(KernelSpec spec, const ObservationSet& obs) {
    if (spec.kind == KernelSpec::Kind::Rbf && spec.sigma <= 0.0)
        spec.sigma = median_heuristic_sigma(obs);
    return spec;
}

} // namespace gramdet
