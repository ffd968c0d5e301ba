// Command-line front end: alignment, distances, barycenters, imitation,
// fixtures, and plot-data extraction over the library.

#include <charconv>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "gdtw/barycenter.hpp"
#include "gdtw/baselines.hpp"
#include "gdtw/distribution.hpp"
#include "gdtw/dtw.hpp"
#include "gdtw/gdtw.hpp"
#include "gdtw/imitate.hpp"
#include "gdtw/series.hpp"

using json = nlohmann::json;
using namespace gdtw;

namespace {

std::string fmt(double v) {
    char buf[64];
    auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

class Timer {
  public:
    Timer() : start_(std::chrono::steady_clock::now()) {}
    long long ms() const {
        return std::chrono::duration_cast<std::chrono::milliseconds>(
                   std::chrono::steady_clock::now() - start_)
            .count();
    }

  private:
    std::chrono::steady_clock::time_point start_;
};

void write_text(const std::string& path, const std::string& body) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path);
    out << body;
}

void write_report(const std::string& path, const std::string& command, json parameters,
                  uint64_t seed, const Timer& timer, std::vector<std::string> outputs,
                  json extra = json::object()) {
    json rep{{"command", command},
             {"parameters", std::move(parameters)},
             {"seed", seed},
             {"wall_time_ms", timer.ms()},
             {"outputs", std::move(outputs)},
             {"status", "ok"}};
    rep.update(extra);
    write_text(path, rep.dump(2) + "\n");
}

std::vector<TimeSeries> load_any(const std::string& path, bool header) {
    bool is_json = path.size() >= 5 && path.substr(path.size() - 5) == ".json";
    return load_series(path, is_json ? SeriesFormat::Json : SeriesFormat::Csv, header);
}

TimeSeries load_one(const std::string& path, bool header) {
    auto all = load_any(path, header);
    if (all.size() != 1)
        throw std::invalid_argument(path + ": expected exactly one series");
    return all[0];
}

std::string alignment_csv(const std::vector<std::tuple<int, int, double>>& triples) {
    std::ostringstream os;
    for (const auto& [i, j, w] : triples)
        os << i << ',' << j << ',' << fmt(w) << '\n';
    return os.str();
}

std::vector<std::tuple<int, int, double>> path_triples(const AlignmentPath& p) {
    std::vector<std::tuple<int, int, double>> t;
    for (auto [i, j] : p.steps) t.emplace_back(i, j, 1.0);
    return t;
}

std::vector<std::tuple<int, int, double>> soft_triples(const SoftAlignment& s) {
    std::vector<std::tuple<int, int, double>> t;
    for (int i = 0; i < s.weights.rows; ++i)
        for (int j = 0; j < s.weights.cols; ++j)
            if (s.weights(i, j) > 1e-12) t.emplace_back(i, j, s.weights(i, j));
    return t;
}

std::string series_csv(const TimeSeries& ts) {
    std::ostringstream os;
    for (const auto& p : ts.points) {
        for (size_t i = 0; i < p.size(); ++i) {
            if (i) os << ',';
            os << fmt(p[i]);
        }
        os << '\n';
    }
    return os.str();
}

struct AlignArgs {
    std::string x_path, y_path, method = "gdtw", out = "align";
    double gamma = 1.0;
    bool normalize = true, header = false;
    uint64_t seed = 0;
    int restarts = 5, max_iter = 25;
    double tol = 1e-6;
    std::string invariance = "rotation-translation";
};

int run_align(const AlignArgs& a) {
    Timer timer;
    TimeSeries x = load_one(a.x_path, a.header);
    TimeSeries y = load_one(a.y_path, a.header);

    FwOptions opts;
    opts.seed = a.seed;
    opts.restarts = a.restarts;
    opts.max_iter = a.max_iter;
    opts.tol = a.tol;
    opts.normalize_inputs = a.normalize;

    double value = 0.0;
    std::vector<std::tuple<int, int, double>> triples;
    json extra;
    if (a.method == "dtw") {
        CostMatrix c = cross_distances(x, y);
        DtwResult r = dtw(c);
        value = r.value;
        triples = path_triples(r.path);
    } else if (a.method == "soft-dtw") {
        CostMatrix c = cross_distances(x, y);
        value = soft_dtw(c, a.gamma);
        triples = soft_triples(soft_argmin(c, a.gamma));
    } else if (a.method == "gdtw") {
        GdtwResult r = gdtw::gdtw(x, y, opts);
        value = r.value;
        triples = path_triples(r.alignment);
        extra["objective_trace"] = r.objective_trace;
    } else if (a.method == "soft-gdtw") {
        opts.gamma = a.gamma;
        GdtwResult r = soft_gdtw(x, y, opts);
        value = r.value;
        triples = soft_triples(r.soft_alignment);
        extra["objective_trace"] = r.objective_trace;
    } else if (a.method == "dtw-gi") {
        GiInvariance inv = a.invariance == "rotation" ? GiInvariance::Rotation
                                                      : GiInvariance::RotationTranslation;
        GiResult r = dtw_gi(x, y, inv, a.max_iter);
        value = r.value;
        triples = path_triples(r.path);
        extra["objective_trace"] = r.trace;
    } else {
        throw std::invalid_argument("unknown method '" + a.method + "'");
    }
    extra["value"] = value;

    std::string csv_path = a.out + ".csv";
    write_text(csv_path, alignment_csv(triples));
    write_report(a.out + ".report.json", "align",
                 json{{"x", a.x_path},
                      {"y", a.y_path},
                      {"method", a.method},
                      {"gamma", a.gamma},
                      {"normalize", a.normalize},
                      {"restarts", a.restarts},
                      {"max_iter", a.max_iter}},
                 a.seed, timer, {csv_path}, extra);
    std::cout << fmt(value) << "\n";
    return 0;
}

struct DistArgs {
    std::string x_path, y_path, method = "gdtw", out = "dist";
    double gamma = 1.0;
    bool normalize = true, header = false;
    uint64_t seed = 0;
    int restarts = 5, max_iter = 25;
};

int run_dist(const DistArgs& a) {
    Timer timer;
    TimeSeries x = load_one(a.x_path, a.header);
    TimeSeries y = load_one(a.y_path, a.header);
    FwOptions opts;
    opts.seed = a.seed;
    opts.restarts = a.restarts;
    opts.max_iter = a.max_iter;
    opts.normalize_inputs = a.normalize;

    double value = 0.0;
    if (a.method == "dtw") {
        value = dtw_value(cross_distances(x, y));
    } else if (a.method == "soft-dtw") {
        value = soft_dtw(cross_distances(x, y), a.gamma);
    } else if (a.method == "gdtw") {
        value = gdtw::gdtw(x, y, opts).value;
    } else if (a.method == "soft-gdtw") {
        opts.gamma = a.gamma;
        value = soft_gdtw(x, y, opts).value;
    } else if (a.method == "dtw-gi") {
        value = dtw_gi(x, y, GiInvariance::RotationTranslation, a.max_iter).value;
    } else {
        throw std::invalid_argument("unknown method '" + a.method + "'");
    }
    write_report(a.out + ".report.json", "dist",
                 json{{"x", a.x_path}, {"y", a.y_path}, {"method", a.method},
                      {"gamma", a.gamma}, {"normalize", a.normalize}},
                 a.seed, timer, {}, json{{"value", value}});
    std::cout << fmt(value) << "\n";
    return 0;
}

struct DatasetArgs {
    std::string a_path, b_path, ground = "gdtw", out = "dataset_dist";
    double gamma = 1.0, epsilon = 0.0;
    bool debiased = false, normalize = true;
    uint64_t seed = 0;
};

int run_dataset_dist(const DatasetArgs& a) {
    Timer timer;
    auto set_a = load_any(a.a_path, false);
    auto set_b = load_any(a.b_path, false);
    FwOptions opts;
    opts.seed = a.seed;
    opts.normalize_inputs = a.normalize;
    DatasetDistanceResult r =
        dataset_distance(set_a, set_b, a.epsilon, parse_ground_cost(a.ground), a.gamma,
                         opts, a.debiased);
    write_report(a.out + ".report.json", "dataset-dist",
                 json{{"a", a.a_path}, {"b", a.b_path}, {"ground", a.ground},
                      {"gamma", a.gamma}, {"epsilon", a.epsilon}, {"debiased", a.debiased}},
                 a.seed, timer, {},
                 json{{"value", r.value},
                      {"transport", r.transport},
                      {"sinkhorn_converged", r.sinkhorn.converged}});
    std::cout << fmt(r.value) << "\n";
    return 0;
}

struct BaryArgs {
    std::string in_path, out = "barycenter";
    int length = 40, outer_iters = 30, embed_dim = 2, max_iter = 25, restarts = 2;
    double gamma = 0.0;
    uint64_t seed = 0;
    bool normalize = true;
};

int run_barycenter(const BaryArgs& a) {
    Timer timer;
    auto series = load_any(a.in_path, false);
    std::vector<double> alpha(series.size(), 1.0 / static_cast<double>(series.size()));

    BarycenterOptions opts;
    opts.fw.gamma = a.gamma;
    opts.fw.seed = a.seed;
    opts.fw.max_iter = a.max_iter;
    opts.fw.restarts = a.restarts;
    opts.fw.normalize_inputs = a.normalize;
    opts.outer_iters = a.outer_iters;
    opts.embed_dim = a.embed_dim;

    BarycenterResult r = gdtw_barycenter(series, alpha, a.length, opts);

    std::ostringstream dm;
    for (int i = 0; i < r.distance_matrix.m.rows; ++i) {
        for (int j = 0; j < r.distance_matrix.m.cols; ++j) {
            if (j) dm << ',';
            dm << fmt(r.distance_matrix.m(i, j));
        }
        dm << '\n';
    }
    std::string dm_path = a.out + ".dmatrix.csv";
    std::string embed_path = a.out + ".embed.csv";
    write_text(dm_path, dm.str());
    std::vector<std::string> outputs{dm_path};
    if (r.has_embedding) {
        write_text(embed_path, series_csv(r.embedded));
        outputs.push_back(embed_path);
    }
    write_report(a.out + ".report.json", "barycenter",
                 json{{"in", a.in_path}, {"length", a.length}, {"outer_iters", a.outer_iters},
                      {"gamma", a.gamma}, {"embed_dim", a.embed_dim}},
                 a.seed, timer, outputs,
                 json{{"objective_trace", r.objective_trace},
                      {"value", r.objective_trace.empty() ? 0.0 : r.objective_trace.back()}});
    return 0;
}

struct ImitateArgs {
    std::string expert_path, out = "imitate";
    int horizon = 40, steps = 500;
    double gamma = 0.1, learn_rate = 5e-2, action_bound = 0.2;
    uint64_t seed = 0;
    bool header = false;
};

int run_imitate(const ImitateArgs& a) {
    Timer timer;
    ImitationProblem prob;
    prob.expert = load_one(a.expert_path, a.header);
    prob.horizon = a.horizon;
    prob.steps = a.steps;
    prob.gamma = a.gamma;
    prob.learn_rate = a.learn_rate;
    prob.action_bound = a.action_bound;
    prob.seed = a.seed;

    ImitationResult r = imitate(prob);

    std::ostringstream loss;
    for (size_t i = 0; i < r.loss_history.size(); ++i)
        loss << i << ',' << fmt(r.loss_history[i]) << '\n';
    std::string loss_path = a.out + ".loss.csv";
    std::string traj_path = a.out + ".trajectory.csv";
    write_text(loss_path, loss.str());
    write_text(traj_path, series_csv(r.trajectory));
    write_report(a.out + ".report.json", "imitate",
                 json{{"expert", a.expert_path}, {"horizon", a.horizon}, {"steps", a.steps},
                      {"gamma", a.gamma}, {"learn_rate", a.learn_rate}},
                 a.seed, timer, {loss_path, traj_path},
                 json{{"initial_loss", r.loss_history.front()},
                      {"final_loss", r.loss_history.back()}});
    return 0;
}

struct FixtureArgs {
    std::string kind = "spiral", out = "fixture.csv";
    int length = 40;
    uint64_t seed = 0;
    int grid_h = 0, grid_w = 0;
    double sigma = 1.0;
};

int run_fixture(const FixtureArgs& a) {
    Timer timer;
    TimeSeries ts = gen_fixture(parse_fixture_kind(a.kind), a.length, a.seed);
    if (a.grid_h > 0 && a.grid_w > 0) {
        TimeSeries video = render_grid_video(ts, a.grid_h, a.grid_w, a.sigma);
        save_series(a.out, {video}, SeriesFormat::Json);
    } else {
        bool is_json = a.out.size() >= 5 && a.out.substr(a.out.size() - 5) == ".json";
        save_series(a.out, {ts}, is_json ? SeriesFormat::Json : SeriesFormat::Csv);
    }
    write_report(a.out + ".report.json", "fixture",
                 json{{"kind", a.kind}, {"length", a.length},
                      {"grid_h", a.grid_h}, {"grid_w", a.grid_w}},
                 a.seed, timer, {a.out});
    return 0;
}

struct PlotArgs {
    std::string kind = "alignment", in_path, out, svg;
};

std::vector<std::vector<double>> read_csv_rows(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open " + path);
    std::vector<std::vector<double>> rows;
    std::string line;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        std::vector<double> row;
        std::istringstream ls(line);
        std::string field;
        while (std::getline(ls, field, ',')) row.push_back(std::stod(field));
        rows.push_back(std::move(row));
    }
    return rows;
}

std::string svg_polyline(const std::vector<std::vector<double>>& pts, int xi, int yi) {
    double xmin = 1e300, xmax = -1e300, ymin = 1e300, ymax = -1e300;
    for (const auto& p : pts) {
        xmin = std::min(xmin, p[xi]);
        xmax = std::max(xmax, p[xi]);
        ymin = std::min(ymin, p[yi]);
        ymax = std::max(ymax, p[yi]);
    }
    double sx = xmax > xmin ? 360.0 / (xmax - xmin) : 1.0;
    double sy = ymax > ymin ? 360.0 / (ymax - ymin) : 1.0;
    std::ostringstream os;
    os << "<?xml version=\"1.0\" encoding=\"UTF-8\"?>\n"
       << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"400\" height=\"400\" "
          "viewBox=\"0 0 400 400\">\n<polyline fill=\"none\" stroke=\"black\" points=\"";
    for (size_t k = 0; k < pts.size(); ++k) {
        if (k) os << ' ';
        os << fmt(20.0 + (pts[k][xi] - xmin) * sx) << ','
           << fmt(380.0 - (pts[k][yi] - ymin) * sy);
    }
    os << "\"/>\n</svg>\n";
    return os.str();
}

int run_plotdata(const PlotArgs& a) {
    Timer timer;
    std::ostringstream os;
    std::vector<std::vector<double>> rows;
    if (a.kind == "alignment") {
        rows = read_csv_rows(a.in_path);
        os << "t_x,t_y,weight\n";
        for (const auto& r : rows)
            os << static_cast<int>(r.at(0)) << ',' << static_cast<int>(r.at(1)) << ','
               << fmt(r.at(2)) << '\n';
    } else if (a.kind == "trace") {
        std::ifstream in(a.in_path);
        if (!in) throw std::runtime_error("cannot open " + a.in_path);
        json rep;
        in >> rep;
        os << "iteration,objective\n";
        const auto& tr = rep.at("objective_trace");
        for (size_t i = 0; i < tr.size(); ++i) {
            os << i << ',' << fmt(tr[i].get<double>()) << '\n';
            rows.push_back({static_cast<double>(i), tr[i].get<double>()});
        }
    } else if (a.kind == "trajectory") {
        rows = read_csv_rows(a.in_path);
        os << "t,x,y\n";
        for (size_t i = 0; i < rows.size(); ++i)
            os << i << ',' << fmt(rows[i].at(0)) << ',' << fmt(rows[i].at(1)) << '\n';
    } else {
        throw std::invalid_argument("unknown plot kind '" + a.kind + "'");
    }
    write_text(a.out, os.str());
    std::vector<std::string> outputs{a.out};
    if (!a.svg.empty()) {
        int xi = a.kind == "trajectory" ? 0 : 0;
        int yi = a.kind == "trajectory" ? 1 : 1;
        write_text(a.svg, svg_polyline(rows, xi, yi));
        outputs.push_back(a.svg);
    }
    write_report(a.out + ".report.json", "plotdata",
                 json{{"kind", a.kind}, {"in", a.in_path}}, 0, timer, outputs);
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Gromov dynamic time warping toolkit"};
    app.require_subcommand(1);
    int threads = 0;
    app.add_option("--threads", threads, "thread cap (GDTW_THREADS mirrors this)");

    AlignArgs al;
    auto* align = app.add_subcommand("align", "align two series and write (i,j,weight) triples");
    align->add_option("x", al.x_path)->required();
    align->add_option("y", al.y_path)->required();
    align->add_option("--method", al.method);
    align->add_option("--gamma", al.gamma);
    align->add_flag("--normalize,!--no-normalize", al.normalize);
    align->add_flag("--header", al.header);
    align->add_option("--seed", al.seed);
    align->add_option("--restarts", al.restarts);
    align->add_option("--max-iter", al.max_iter);
    align->add_option("--tol", al.tol);
    align->add_option("--invariance", al.invariance);
    align->add_option("--out", al.out);

    DistArgs di;
    auto* dist = app.add_subcommand("dist", "distance between two series");
    dist->add_option("x", di.x_path)->required();
    dist->add_option("y", di.y_path)->required();
    dist->add_option("--method", di.method);
    dist->add_option("--gamma", di.gamma);
    dist->add_flag("--normalize,!--no-normalize", di.normalize);
    dist->add_flag("--header", di.header);
    dist->add_option("--seed", di.seed);
    dist->add_option("--restarts", di.restarts);
    dist->add_option("--max-iter", di.max_iter);
    dist->add_option("--out", di.out);

    DatasetArgs ds;
    auto* dsd = app.add_subcommand("dataset-dist", "entropic OT distance between two datasets");
    dsd->add_option("a", ds.a_path)->required();
    dsd->add_option("b", ds.b_path)->required();
    dsd->add_option("--ground", ds.ground);
    dsd->add_option("--gamma", ds.gamma);
    dsd->add_option("--epsilon", ds.epsilon);
    dsd->add_flag("--debiased", ds.debiased);
    dsd->add_flag("--normalize,!--no-normalize", ds.normalize);
    dsd->add_option("--seed", ds.seed);
    dsd->add_option("--out", ds.out);

    BaryArgs ba;
    auto* bary = app.add_subcommand("barycenter", "barycentric average of a dataset");
    bary->add_option("in", ba.in_path)->required();
    bary->add_option("--length,-T", ba.length);
    bary->add_option("--outer-iters", ba.outer_iters);
    bary->add_option("--embed-dim", ba.embed_dim);
    bary->add_option("--gamma", ba.gamma);
    bary->add_option("--max-iter", ba.max_iter);
    bary->add_option("--restarts", ba.restarts);
    bary->add_option("--seed", ba.seed);
    bary->add_flag("--normalize,!--no-normalize", ba.normalize);
    bary->add_option("--out", ba.out);

    ImitateArgs im;
    auto* imit = app.add_subcommand("imitate", "open-loop imitation against an expert series");
    imit->add_option("expert", im.expert_path)->required();
    imit->add_option("--horizon", im.horizon);
    imit->add_option("--steps", im.steps);
    imit->add_option("--gamma", im.gamma);
    imit->add_option("--learn-rate", im.learn_rate);
    imit->add_option("--action-bound", im.action_bound);
    imit->add_option("--seed", im.seed);
    imit->add_flag("--header", im.header);
    imit->add_option("--out", im.out);

    FixtureArgs fx;
    auto* fixture = app.add_subcommand("fixture", "generate synthetic curves and grid videos");
    fixture->add_option("--kind", fx.kind);
    fixture->add_option("--length,-T", fx.length);
    fixture->add_option("--seed", fx.seed);
    fixture->add_option("--grid-h", fx.grid_h);
    fixture->add_option("--grid-w", fx.grid_w);
    fixture->add_option("--sigma", fx.sigma);
    fixture->add_option("--out", fx.out);

    PlotArgs pl;
    auto* plot = app.add_subcommand("plotdata", "extract plot-ready CSV (and optional SVG)");
    plot->add_option("--kind", pl.kind);
    plot->add_option("--in", pl.in_path)->required();
    plot->add_option("--out", pl.out)->required();
    plot->add_option("--svg", pl.svg);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        return app.exit(e) == 0 ? 0 : 2;
    }

    try {
        if (*align) return run_align(al);
        if (*dist) return run_dist(di);
        if (*dsd) return run_dataset_dist(ds);
        if (*bary) return run_barycenter(ba);
        if (*imit) return run_imitate(im);
        if (*fixture) return run_fixture(fx);
        if (*plot) return run_plotdata(pl);
    } catch (const std::invalid_argument& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::runtime_error& e) {
        std::string msg = e.what();
        std::cerr << "error: " << msg << "\n";
        return msg.rfind("cannot", 0) == 0 ? 4 : 3;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 3;
    }
    return 2;
}
