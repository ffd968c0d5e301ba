#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>
#include <stdexcept>

#include <json.hpp>

#include "gdtw/kernels.hpp"
#include "gdtw/linalg.hpp"
#include "gdtw/rng.hpp"
#include "gdtw/series.hpp"
#include "gdtw/sinkhorn.hpp"

namespace gdtw {

using json = nlohmann::json;

void TimeSeries::validate() const {
    if (points.empty()) throw std::invalid_argument("TimeSeries: length must be >= 1");
    const size_t d = points[0].size();
    if (d == 0) throw std::invalid_argument("TimeSeries: points must be nonempty");
    if (is_grid() && static_cast<size_t>(grid_h) * grid_w != d)
        throw std::invalid_argument("TimeSeries: grid shape does not match point size");
    for (const auto& p : points) {
        if (p.size() != d) throw std::invalid_argument("TimeSeries: ragged point dimensions");
        for (double v : p)
            if (!std::isfinite(v)) throw std::invalid_argument("TimeSeries: non-finite value");
    }
    if (is_grid()) {
        for (const auto& p : points) {
            double s = 0.0;
            for (double v : p) {
                if (v < 0.0) throw std::invalid_argument("TimeSeries: negative grid density");
                s += v;
            }
            if (std::abs(s - 1.0) > 1e-9)
                throw std::invalid_argument("TimeSeries: grid density must sum to 1");
        }
    }
    if (metric.kind == Metric::Kind::WassersteinGrid) {
        if (!is_grid())
            throw std::invalid_argument("TimeSeries: WassersteinGrid metric needs grid points");
        if (metric.epsilon < 0.0)
            throw std::invalid_argument("TimeSeries: WassersteinGrid epsilon must be positive");
    } else if (is_grid()) {
        throw std::invalid_argument("TimeSeries: grid points need the WassersteinGrid metric");
    }
}

namespace {

double grid_epsilon(const TimeSeries& ts) {
    if (ts.metric.epsilon > 0.0) return ts.metric.epsilon;
    double dh = ts.grid_h - 1, dw = ts.grid_w - 1;
    return 0.01 * (dh * dh + dw * dw);
}

double point_distance(const TimeSeries& space, const std::vector<double>& a,
                      const std::vector<double>& b) {
    switch (space.metric.kind) {
        case Metric::Kind::Euclidean:
            return std::sqrt(kernels::sum_sq_diff(a.data(), b.data(), a.size()));
        case Metric::Kind::SquaredEuclidean:
            return kernels::sum_sq_diff(a.data(), b.data(), a.size());
        case Metric::Kind::WassersteinGrid:
            return grid_wasserstein2(a, b, space.grid_h, space.grid_w, grid_epsilon(space),
                                     space.metric.iters);
    }
    throw std::logic_error("unreachable metric kind");
}

}  // namespace

DistanceMatrix pairwise_distances(const TimeSeries& ts) {
    ts.validate();
    const int t = ts.length();
    DistanceMatrix out;
    out.m = Mat(t, t);
    for (int i = 0; i < t; ++i)
        for (int k = i + 1; k < t; ++k) {
            double d = point_distance(ts, ts.points[i], ts.points[k]);
            out.m(i, k) = d;
            out.m(k, i) = d;
        }
    return out;
}

CostMatrix cross_distances(const TimeSeries& x, const TimeSeries& y) {
    x.validate();
    y.validate();
    const bool compatible = x.is_grid() == y.is_grid() && x.dim() == y.dim() &&
                            x.grid_h == y.grid_h && x.grid_w == y.grid_w &&
                            x.metric.kind == y.metric.kind;
    if (!compatible)
        throw std::invalid_argument(
            "cross_distances: the two series live on incomparable spaces, so no cross cost "
            "exists; use GDTW, which compares intra-space distance matrices instead");
    CostMatrix d(x.length(), y.length());
    for (int i = 0; i < x.length(); ++i)
        for (int j = 0; j < y.length(); ++j)
            d(i, j) = point_distance(x, x.points[i], y.points[j]);
    return d;
}

DistanceMatrix normalize(const DistanceMatrix& d) {
    DistanceMatrix out = d;
    double mx = out.m.max_abs();
    if (mx > 0.0)
        for (double& v : out.m.data) v /= mx;
    out.normalized = true;
    return out;
}

TimeSeries apply_isometry(const TimeSeries& ts, const Mat& rotation,
                          const std::vector<double>& translation) {
    ts.validate();
    if (ts.is_grid()) throw std::invalid_argument("apply_isometry: Euclidean points required");
    const int d = ts.dim();
    if (rotation.rows != d || rotation.cols != d ||
        static_cast<int>(translation.size()) != d)
        throw std::invalid_argument("apply_isometry: shape mismatch");
    if (!linalg::is_orthogonal(rotation, 1e-10))
        throw std::invalid_argument("apply_isometry: rotation matrix is not orthogonal");

    TimeSeries out = ts;
    for (auto& p : out.points) {
        std::vector<double> q(d, 0.0);
        for (int i = 0; i < d; ++i) {
            double s = translation[i];
            for (int j = 0; j < d; ++j) s += rotation(i, j) * p[j];
            q[i] = s;
        }
        p = std::move(q);
    }
    return out;
}

// ---------------------------------------------------------------------------
// I/O

namespace {

std::string format_double(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(std::string_view sv, const std::string& context) {
    double v = 0.0;
    auto res = std::from_chars(sv.data(), sv.data() + sv.size(), v);
    if (res.ec != std::errc{} || res.ptr != sv.data() + sv.size())
        throw std::invalid_argument("malformed number '" + std::string(sv) + "' in " + context);
    return v;
}

const char* metric_name(Metric::Kind k) {
    switch (k) {
        case Metric::Kind::Euclidean: return "euclidean";
        case Metric::Kind::SquaredEuclidean: return "squared_euclidean";
        case Metric::Kind::WassersteinGrid: return "wasserstein_grid";
    }
    return "euclidean";
}

Metric::Kind parse_metric_name(const std::string& s) {
    if (s == "euclidean") return Metric::Kind::Euclidean;
    if (s == "squared_euclidean") return Metric::Kind::SquaredEuclidean;
    if (s == "wasserstein_grid") return Metric::Kind::WassersteinGrid;
    throw std::invalid_argument("unknown metric kind '" + s + "'");
}

std::vector<TimeSeries> load_csv(const std::string& path, bool header) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    TimeSeries ts;
    std::string line;
    int lineno = 0;
    while (std::getline(in, line)) {
        ++lineno;
        if (header && lineno == 1) continue;
        if (line.empty()) continue;
        std::vector<double> row;
        size_t start = 0;
        while (start <= line.size()) {
            size_t comma = line.find(',', start);
            size_t end = comma == std::string::npos ? line.size() : comma;
            std::string_view field(line.data() + start, end - start);
            row.push_back(parse_double(field, path + ":" + std::to_string(lineno)));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        if (!ts.points.empty() && row.size() != ts.points[0].size())
            throw std::invalid_argument(path + ":" + std::to_string(lineno) +
                                        ": ragged row dimensions");
        ts.points.push_back(std::move(row));
    }
    if (ts.points.empty()) throw std::invalid_argument(path + ": empty series file");
    ts.validate();
    return {ts};
}

void save_csv(const std::string& path, const std::vector<TimeSeries>& series) {
    if (series.size() != 1)
        throw std::invalid_argument("CSV holds exactly one series; use JSON for several");
    const TimeSeries& ts = series[0];
    ts.validate();
    if (ts.is_grid())
        throw std::invalid_argument("CSV holds Euclidean series only; use JSON for grids");
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    for (const auto& p : ts.points) {
        for (size_t i = 0; i < p.size(); ++i) {
            if (i) out << ',';
            out << format_double(p[i]);
        }
        out << '\n';
    }
}

json metric_to_json(const Metric& m) {
    json j{{"kind", metric_name(m.kind)}};
    if (m.kind == Metric::Kind::WassersteinGrid) {
        j["epsilon"] = m.epsilon;
        j["iters"] = m.iters;
    }
    return j;
}

std::vector<TimeSeries> load_json(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    json doc;
    in >> doc;
    if (!doc.contains("series") || !doc["series"].is_array() || doc["series"].empty())
        throw std::invalid_argument(path + ": expected a nonempty 'series' array");
    std::vector<TimeSeries> out;
    for (const auto& js : doc["series"]) {
        TimeSeries ts;
        if (js.contains("metric")) {
            const auto& jm = js["metric"];
            ts.metric.kind = parse_metric_name(jm.at("kind").get<std::string>());
            if (jm.contains("epsilon")) ts.metric.epsilon = jm["epsilon"].get<double>();
            if (jm.contains("iters")) ts.metric.iters = jm["iters"].get<int>();
        }
        if (js.contains("grid_shape")) {
            ts.grid_h = js["grid_shape"].at(0).get<int>();
            ts.grid_w = js["grid_shape"].at(1).get<int>();
        }
        for (const auto& jp : js.at("points"))
            ts.points.push_back(jp.get<std::vector<double>>());
        ts.validate();
        out.push_back(std::move(ts));
    }
    return out;
}

void save_json(const std::string& path, const std::vector<TimeSeries>& series) {
    json arr = json::array();
    for (const auto& ts : series) {
        ts.validate();
        json js{{"metric", metric_to_json(ts.metric)}, {"points", ts.points}};
        if (ts.is_grid()) js["grid_shape"] = {ts.grid_h, ts.grid_w};
        arr.push_back(std::move(js));
    }
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << json{{"series", std::move(arr)}}.dump(2) << '\n';
}

}  // namespace

std::vector<TimeSeries> load_series(const std::string& path, SeriesFormat format,
                                    bool csv_header) {
    return format == SeriesFormat::Csv ? load_csv(path, csv_header) : load_json(path);
}

void save_series(const std::string& path, const std::vector<TimeSeries>& series,
                 SeriesFormat format) {
    if (format == SeriesFormat::Csv)
        save_csv(path, series);
    else
        save_json(path, series);
}

// ---------------------------------------------------------------------------
// Fixtures

FixtureKind parse_fixture_kind(const std::string& name) {
    if (name == "spiral") return FixtureKind::Spiral;
    if (name == "circle") return FixtureKind::Circle;
    if (name == "folium") return FixtureKind::Folium;
    if (name == "noisy-copy") return FixtureKind::NoisyCopy;
    throw std::invalid_argument("unknown fixture kind '" + name + "'");
}

TimeSeries gen_fixture(FixtureKind kind, int t, uint64_t seed) {
    if (t < 2) throw std::invalid_argument("gen_fixture: T must be >= 2");
    TimeSeries ts;
    ts.points.reserve(t);
    switch (kind) {
        case FixtureKind::Circle:
            for (int i = 0; i < t; ++i) {
                double a = 2.0 * M_PI * i / t;
                ts.points.push_back({std::cos(a), std::sin(a)});
            }
            break;
        case FixtureKind::Spiral:
            for (int i = 0; i < t; ++i) {
                double s = static_cast<double>(i) / (t - 1);
                double a = 4.0 * M_PI * s;
                double r = 0.1 + 0.9 * s;
                ts.points.push_back({r * std::cos(a), r * std::sin(a)});
            }
            break;
        case FixtureKind::Folium:
            // loop of the folium of Descartes, kept away from the asymptote
            for (int i = 0; i < t; ++i) {
                double a = 0.15 + (M_PI / 2.0 - 0.3) * i / (t - 1);
                double sa = std::sin(a), ca = std::cos(a);
                double r = 3.0 * sa * ca / (sa * sa * sa + ca * ca * ca);
                ts.points.push_back({r * ca, r * sa});
            }
            break;
        case FixtureKind::NoisyCopy: {
            TimeSeries base = gen_fixture(FixtureKind::Spiral, t, seed);
            SplitMix64 rng(seed);
            for (auto& p : base.points)
                for (double& v : p) v += 0.05 * rng.normal();
            return base;
        }
    }
    return ts;
}

TimeSeries render_grid_video(const TimeSeries& curve, int h, int w, double sigma) {
    curve.validate();
    if (curve.is_grid() || curve.dim() != 2)
        throw std::invalid_argument("render_grid_video: expects a 2-D Euclidean curve");
    if (h < 2 || w < 2 || sigma <= 0.0)
        throw std::invalid_argument("render_grid_video: bad grid parameters");

    double xmin = curve.points[0][0], xmax = xmin;
    double ymin = curve.points[0][1], ymax = ymin;
    for (const auto& p : curve.points) {
        xmin = std::min(xmin, p[0]);
        xmax = std::max(xmax, p[0]);
        ymin = std::min(ymin, p[1]);
        ymax = std::max(ymax, p[1]);
    }
    double spanx = std::max(xmax - xmin, 1e-12);
    double spany = std::max(ymax - ymin, 1e-12);
    double margin = 1.0;

    TimeSeries out;
    out.grid_h = h;
    out.grid_w = w;
    out.metric.kind = Metric::Kind::WassersteinGrid;
    for (const auto& p : curve.points) {
        double pc = margin + (p[0] - xmin) / spanx * (w - 1 - 2 * margin);
        double pr = margin + (p[1] - ymin) / spany * (h - 1 - 2 * margin);
        std::vector<double> g(static_cast<size_t>(h) * w);
        double sum = 0.0;
        for (int r = 0; r < h; ++r)
            for (int c = 0; c < w; ++c) {
                double d2 = (r - pr) * (r - pr) + (c - pc) * (c - pc);
                double v = std::exp(-d2 / (2.0 * sigma * sigma));
                g[static_cast<size_t>(r) * w + c] = v;
                sum += v;
            }
        for (double& v : g) v /= sum;
        out.points.push_back(std::move(g));
    }
    out.validate();
    return out;
}

}  // namespace gdtw
