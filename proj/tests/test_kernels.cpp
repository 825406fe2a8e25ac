#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>

#include "gramdet/errors.hpp"
#include "gramdet/kernels.hpp"
#include "gramdet/rng.hpp"
#include "support/generators.hpp"

using namespace gramdet;

namespace {

Mat kernel_matrix_over_points(const KernelSpec& spec, const std::vector<std::vector<double>>& pts) {
    const int k = static_cast<int>(pts.size());
    const int width = static_cast<int>(pts[0].size());
    std::vector<double> flat;
    for (const auto& p : pts) flat.insert(flat.end(), p.begin(), p.end());
    const ObservationSet set = ObservationSet::embeddings(flat, width);
    Mat km(k, k);
    for (int a = 0; a < k; ++a)
        for (int b = 0; b < k; ++b) km(a, b) = kernel_eval(spec, set.at(a), set.at(b));
    return km;
}

bool looks_psd(const Mat& g, Rng& rng, int probes = 64) {
    const double scale = std::max(g.max_abs(), 1.0);
    for (int t = 0; t < probes; ++t) {
        std::vector<double> v(g.rows());
        for (double& x : v) x = 2.0 * rng.uniform01() - 1.0;
        double quad = 0.0;
        for (int i = 0; i < g.rows(); ++i)
            for (int j = 0; j < g.cols(); ++j) quad += v[i] * g(i, j) * v[j];
        if (quad < -1e-9 * scale) return false;
    }
    return true;
}

} // namespace

TEST_CASE("kernel_eval on the four kernels") {
    const ObservationSet cat = ObservationSet::categorical({1, 2, 1}, 3);
    CHECK(kernel_eval(KernelSpec::delta(), cat.at(0), cat.at(2)) == 1.0);
    CHECK(kernel_eval(KernelSpec::delta(), cat.at(0), cat.at(1)) == 0.0);

    const ObservationSet emb = ObservationSet::embeddings({0.0, 1.0, 1.0, 0.0, 0.0, 1.0}, 2);
    CHECK(kernel_eval(KernelSpec::linear(), emb.at(0), emb.at(1)) == 0.0);
    CHECK(kernel_eval(KernelSpec::linear(), emb.at(0), emb.at(2)) == 1.0);
    CHECK(kernel_eval(KernelSpec::pseudo_posterior(), emb.at(0), emb.at(2)) == 1.0);

    const ObservationSet line = ObservationSet::embeddings({0.0, 1.0}, 1);
    CHECK(kernel_eval(KernelSpec::rbf(1.0), line.at(0), line.at(1)) ==
          doctest::Approx(std::exp(-1.0)).epsilon(1e-14));
    CHECK(kernel_eval(KernelSpec::rbf(1.0), line.at(0), line.at(0)) == 1.0);

    CHECK_THROWS_AS(kernel_eval(KernelSpec::delta(), emb.at(0), emb.at(1)), KernelDomainError);
    CHECK_THROWS_AS(kernel_eval(KernelSpec::linear(), cat.at(0), cat.at(1)), KernelDomainError);
    CHECK_THROWS_AS(kernel_eval(KernelSpec::delta(), cat.at(0), emb.at(0)), KernelDomainError);
}

TEST_CASE("label gram under the delta kernel") {
    CHECK(label_gram(Mat::identity(3), KernelSpec::delta()).max_abs_diff(Mat::identity(3)) == 0.0);

    // duplicate experiment columns give a singular gram
    const Mat dup{{0.3, 0.3}, {0.7, 0.7}};
    CHECK(det(label_gram(dup, KernelSpec::delta())) == 0.0);

    // pairwise dot products of the 3x3 experiment's columns
    const Mat p{{0.1, 0.1, 0.7}, {0.9, 0.1, 0.2}, {0.0, 0.8, 0.1}};
    const Mat expect{{0.82, 0.10, 0.25}, {0.10, 0.66, 0.17}, {0.25, 0.17, 0.54}};
    CHECK(label_gram(p, KernelSpec::delta()).max_abs_diff(expect) <= 1e-15);
}

TEST_CASE("label gram input validation") {
    CHECK_THROWS_AS(label_gram(Mat{{0.5, 0.2}, {0.2, 0.2}}, KernelSpec::delta()), DimensionError);
    const Mat p = Mat::identity(2);
    CHECK_THROWS_AS(label_gram(p, KernelSpec::rbf(1.0)), KernelDomainError);  // kmat required
    const Mat bad_km = Mat::identity(3);
    CHECK_THROWS_AS(label_gram(p, KernelSpec::rbf(1.0), &bad_km), DimensionError);
}

TEST_CASE("median heuristic") {
    const ObservationSet emb = ObservationSet::embeddings({0.0, 1.0, 2.0, 10.0}, 1);
    // pairwise distances 1, 2, 10, 1, 9, 8 -> sorted 1 1 2 8 9 10, upper median 8
    CHECK(median_heuristic_sigma(emb) == doctest::Approx(8.0).epsilon(1e-12));
    const ObservationSet constant = ObservationSet::embeddings({3.0, 3.0, 3.0}, 1);
    CHECK(median_heuristic_sigma(constant) == 1.0);

    KernelSpec resolved = resolved_kernel(KernelSpec::rbf(), emb);
    CHECK(resolved.sigma == doctest::Approx(8.0));
    CHECK(resolved_kernel(KernelSpec::rbf(2.0), emb).sigma == 2.0);
}

TEST_CASE("property: label grams are symmetric PSD for the supported kernels") {
    Rng rng(301);
    for (int trial = 0; trial < 150; ++trial) {
        const int d = 2 + rng.uniform_int(4);
        const int k = d + rng.uniform_int(4);
        const Mat p = gen::random_column_stochastic(k, d, rng);

        std::vector<std::vector<double>> pts(k);
        for (auto& pt : pts) {
            pt.resize(k);
            for (double& v : pt) v = 2.0 * rng.uniform01() - 1.0;
        }
        const Mat km_linear = kernel_matrix_over_points(KernelSpec::linear(), pts);
        const Mat km_rbf = kernel_matrix_over_points(KernelSpec::rbf(1.5), pts);

        for (const Mat& g : {label_gram(p, KernelSpec::delta()),
                             label_gram(p, KernelSpec::linear(), &km_linear),
                             label_gram(p, KernelSpec::rbf(1.5), &km_rbf)}) {
            CHECK(g.max_abs_diff(g.transposed()) <= 1e-12);
            CHECK(looks_psd(g, rng));
        }
    }
}

TEST_CASE("property: independent experiments give positive gram determinants") {
    Rng rng(302);
    for (int trial = 0; trial < 150; ++trial) {
        const int d = 2 + rng.uniform_int(3);
        const int k = d + 1 + rng.uniform_int(3);
        const Mat p = gen::random_independent_experiment(d, k, rng);

        // delta kernel
        CHECK(det(label_gram(p, KernelSpec::delta())) > 0.0);

        // rbf kernel over distinct points on the line
        std::vector<std::vector<double>> pts(k);
        for (int i = 0; i < k; ++i) pts[i] = {static_cast<double>(i) + 0.3 * rng.uniform01()};
        const Mat km_rbf = kernel_matrix_over_points(KernelSpec::rbf(1.0), pts);
        CHECK(det(label_gram(p, KernelSpec::rbf(1.0), &km_rbf)) > 0.0);

        // injective linear feature map (k independent random features)
        std::vector<std::vector<double>> feats(k);
        for (auto& f : feats) {
            f.resize(k);
            for (double& v : f) v = rng.normal();
        }
        const Mat km_lin = kernel_matrix_over_points(KernelSpec::linear(), feats);
        CHECK(det(label_gram(p, KernelSpec::linear(), &km_lin)) > 0.0);

        // pseudo-posterior kernel under a full-support prior
        Mat km_pp(k, k);
        {
            std::vector<std::vector<double>> post(k, std::vector<double>(d, 0.0));
            const auto prior = gen::random_simplex(d, rng);
            for (int y = 0; y < k; ++y) {
                double w = 0.0;
                for (int x = 0; x < d; ++x) w += p(y, x) * prior[x];
                for (int x = 0; x < d; ++x) post[y][x] = w > 0.0 ? p(y, x) * prior[x] / w : 0.0;
            }
            for (int a = 0; a < k; ++a)
                for (int b = 0; b < k; ++b) {
                    double dot = 0.0;
                    for (int x = 0; x < d; ++x) dot += post[a][x] * post[b][x];
                    km_pp(a, b) = dot;
                }
        }
        CHECK(det(label_gram(p, KernelSpec::pseudo_posterior(), &km_pp)) > 0.0);
    }
}

TEST_CASE("property: delta-kernel gram entries are match probabilities") {
    Rng rng(303);
    for (int trial = 0; trial < 200; ++trial) {
        const int d = 2 + rng.uniform_int(3);
        const int k = 2 + rng.uniform_int(4);
        const Mat p = gen::random_column_stochastic(k, d, rng);
        const Mat g = label_gram(p, KernelSpec::delta());
        for (int a = 0; a < d; ++a)
            for (int b = 0; b < d; ++b) {
                double match = 0.0;
                for (int y = 0; y < k; ++y) match += p(y, a) * p(y, b);
                CHECK(g(a, b) == doctest::Approx(match).epsilon(1e-12));
            }
    }
}
