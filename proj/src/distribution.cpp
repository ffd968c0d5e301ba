#include <stdexcept>

#include "gdtw/distribution.hpp"

namespace gdtw {

GroundCost parse_ground_cost(const std::string& name) {
    if (name == "dtw") return GroundCost::Dtw;
    if (name == "soft-dtw") return GroundCost::SoftDtw;
    if (name == "gdtw") return GroundCost::Gdtw;
    if (name == "soft-gdtw") return GroundCost::SoftGdtw;
    throw std::invalid_argument("unknown ground cost '" + name + "'");
}

namespace {

double ground_distance(const TimeSeries& a, const TimeSeries& b, GroundCost ground,
                       double gamma, const FwOptions& opts) {
    switch (ground) {
        case GroundCost::Dtw:
            return dtw_value(cross_distances(a, b));
        case GroundCost::SoftDtw:
            return soft_dtw(cross_distances(a, b), gamma);
        case GroundCost::Gdtw: {
            FwOptions o = opts;
            o.gamma = 0.0;
            return gdtw(a, b, o).value;
        }
        case GroundCost::SoftGdtw: {
            FwOptions o = opts;
            o.gamma = gamma;
            return soft_gdtw(a, b, o).value;
        }
    }
    throw std::logic_error("unreachable ground cost");
}

}  // namespace

Mat pairwise_ground_costs(const std::vector<TimeSeries>& set_a,
                          const std::vector<TimeSeries>& set_b, GroundCost ground,
                          double gamma, const FwOptions& opts) {
    if (set_a.empty() || set_b.empty())
        throw std::invalid_argument("pairwise_ground_costs: empty set");
    Mat c(static_cast<int>(set_a.size()), static_cast<int>(set_b.size()));
    for (size_t i = 0; i < set_a.size(); ++i)
        for (size_t j = 0; j < set_b.size(); ++j)
            c(static_cast<int>(i), static_cast<int>(j)) =
                ground_distance(set_a[i], set_b[j], ground, gamma, opts);
    return c;
}

namespace {

double mean_entry(const Mat& c) {
    double s = 0.0;
    for (double v : c.data) s += v;
    return c.data.empty() ? 0.0 : s / static_cast<double>(c.data.size());
}

SinkhornResult uniform_sinkhorn(const Mat& c, double epsilon, int max_iters, double tol) {
    std::vector<double> p(c.rows, 1.0 / c.rows), q(c.cols, 1.0 / c.cols);
    return sinkhorn(c, p, q, epsilon, max_iters, tol);
}

}  // namespace

DatasetDistanceResult dataset_distance(const std::vector<TimeSeries>& set_a,
                                       const std::vector<TimeSeries>& set_b,
                                       double epsilon, GroundCost ground, double gamma,
                                       const FwOptions& opts, bool debiased,
                                       int max_iters, double tol) {
    Mat c = pairwise_ground_costs(set_a, set_b, ground, gamma, opts);
    if (epsilon <= 0.0) epsilon = std::max(0.1 * mean_entry(c), 1e-12);

    DatasetDistanceResult res;
    res.sinkhorn = uniform_sinkhorn(c, epsilon, max_iters, tol);
    res.transport = res.sinkhorn.transport;
    res.value = res.sinkhorn.value;
    if (debiased) {
        Mat caa = pairwise_ground_costs(set_a, set_a, ground, gamma, opts);
        Mat cbb = pairwise_ground_costs(set_b, set_b, ground, gamma, opts);
        res.value -= 0.5 * uniform_sinkhorn(caa, epsilon, max_iters, tol).value;
        res.value -= 0.5 * uniform_sinkhorn(cbb, epsilon, max_iters, tol).value;
    }
    return res;
}

}  // namespace gdtw
