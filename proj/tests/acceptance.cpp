// End-to-end acceptance checks. Each numbered check prints one PASS/FAIL line;
// the exit status is the number of failures. argv[1] is the path to the gdtw
// binary (used by the CLI determinism check).

#include <sys/wait.h>

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <functional>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "gdtw/barycenter.hpp"
#include "gdtw/baselines.hpp"
#include "gdtw/dtw.hpp"
#include "gdtw/gdtw.hpp"
#include "gdtw/imitate.hpp"
#include "gdtw/rng.hpp"
#include "gdtw/series.hpp"
#include "gdtw/sinkhorn.hpp"

namespace fs = std::filesystem;
using json = nlohmann::json;
using namespace gdtw;

namespace {

double now_s() {
    return std::chrono::duration<double>(
               std::chrono::steady_clock::now().time_since_epoch())
        .count();
}

Mat rot2(double a, bool reflect = false) {
    Mat r(2, 2);
    r(0, 0) = std::cos(a);
    r(0, 1) = -std::sin(a);
    r(1, 0) = std::sin(a);
    r(1, 1) = std::cos(a);
    if (reflect) {
        r(0, 1) = -r(0, 1);
        r(1, 1) = -r(1, 1);
    }
    return r;
}

TimeSeries random_series(SplitMix64& rng, int t) {
    TimeSeries ts;
    for (int i = 0; i < t; ++i) ts.points.push_back({rng.normal(), rng.normal()});
    return ts;
}

double path_cost(const Mat& d, const AlignmentPath& p) {
    double s = 0.0;
    for (auto [i, j] : p.steps) s += d(i, j);
    return s;
}

// 1. DP value equals the enumerated minimum on every small instance.
bool check_dtw_bruteforce() {
    double t0 = now_s();
    SplitMix64 rng(101);
    for (int rep = 0; rep < 200; ++rep) {
        int m = 2 + static_cast<int>(rng.next() % 4);
        int n = 2 + static_cast<int>(rng.next() % 4);
        Mat c(m, n);
        for (double& v : c.data) v = rng.uniform();
        double best = 1e300;
        for (const auto& p : enumerate_alignments(m, n))
            best = std::min(best, path_cost(c, p));
        if (std::abs(dtw(c).value - best) > 1e-12) return false;
        if (std::abs(dtw_value(c) - best) > 1e-12) return false;
    }
    return now_s() - t0 < 5.0;
}

// 2. Smoothed value, expected alignment, and its finite-difference identity
//    against full path enumeration.
bool check_soft_dtw_oracle() {
    SplitMix64 rng(102);
    const double gamma = 1.0;
    for (int rep = 0; rep < 100; ++rep) {
        int m = 3, n = rep % 2 ? 4 : 3;
        Mat c(m, n);
        for (double& v : c.data) v = rng.uniform(0.0, 2.0);

        auto paths = enumerate_alignments(m, n);
        double mx = -1e300;
        for (const auto& p : paths) mx = std::max(mx, -path_cost(c, p) / gamma);
        double z = 0.0;
        Mat expect(m, n);
        for (const auto& p : paths) {
            double w = std::exp(-path_cost(c, p) / gamma - mx);
            z += w;
            for (auto [i, j] : p.steps) expect(i, j) += w;
        }
        double oracle = -gamma * (std::log(z) + mx);
        for (double& v : expect.data) v /= z;

        double got = soft_dtw(c, gamma);
        if (std::abs(got - oracle) > 1e-10 * std::max(1.0, std::abs(oracle))) return false;

        SoftAlignment soft = soft_argmin(c, gamma);
        for (size_t i = 0; i < expect.data.size(); ++i)
            if (std::abs(soft.weights.data[i] - expect.data[i]) > 1e-8) return false;

        const double h = 1e-6;
        for (int i = 0; i < m; ++i)
            for (int j = 0; j < n; ++j) {
                Mat cp = c, cm = c;
                cp(i, j) += h;
                cm(i, j) -= h;
                double fd = (soft_dtw(cp, gamma) - soft_dtw(cm, gamma)) / (2 * h);
                if (std::abs(fd - soft.weights(i, j)) > 1e-5 * std::max(1.0, std::abs(fd)))
                    return false;
            }
    }
    return true;
}

// 3. Isometry invariance at T=30: zero loss from the diagonal start in at
//    least 95% of draws, and always with five random restarts.
bool check_isometry_invariance() {
    double t0 = now_s();
    SplitMix64 rng(103);
    int ok_diag = 0, ok_restart = 0;
    for (int rep = 0; rep < 50; ++rep) {
        TimeSeries x = random_series(rng, 30);
        auto y = apply_isometry(x, rot2(rng.uniform(0.0, 2 * M_PI), rng.uniform() < 0.5),
                                {rng.normal(), rng.normal()});
        FwOptions diag;
        diag.restarts = 0;
        if (gdtw::gdtw(x, y, diag).value <= 1e-8) ++ok_diag;
        FwOptions multi;
        multi.restarts = 5;
        multi.seed = rep;
        if (gdtw::gdtw(x, y, multi).value <= 1e-8) ++ok_restart;
    }
    return ok_diag >= 48 && ok_restart == 50 && now_s() - t0 < 30.0;
}

// 4. Tiny instances: the solver never beats the enumerated minimum, and with
//    ten restarts it attains it in at least 95/100 draws (measured 98/100;
//    pinned above the 80% floor as a regression bound).
bool check_fw_vs_exhaustive() {
    SplitMix64 rng(104);
    int global = 0;
    for (int rep = 0; rep < 100; ++rep) {
        int m = 2 + static_cast<int>(rng.next() % 3);
        int n = 2 + static_cast<int>(rng.next() % 3);
        TimeSeries x = random_series(rng, m), y = random_series(rng, n);
        Mat dxn = pairwise_distances(x).m, dyn = pairwise_distances(y).m;
        double cx = dxn.max_abs(), cy = dyn.max_abs();
        for (double& v : dxn.data) v /= cx;
        for (double& v : dyn.data) v /= cy;
        double best = 1e300;
        for (const auto& p : enumerate_alignments(m, n))
            best = std::min(best, gdtw_objective(dxn, dyn, p));
        FwOptions opts;
        opts.restarts = 10;
        opts.seed = rep;
        double got = gdtw::gdtw(x, y, opts).value;
        if (got < best - 1e-12) return false;
        if (got <= best + 1e-9) ++global;
    }
    return global >= 95;
}

// 5. Analytic coordinate gradients against central differences with the
//    alignment and normalization constants held fixed.
bool check_gradients() {
    SplitMix64 rng(105);
    for (int rep = 0; rep < 20; ++rep) {
        TimeSeries x = random_series(rng, 5), y = random_series(rng, 6);
        Mat dy_raw = pairwise_distances(y).m;
        FwOptions opts;
        auto solved = gdtw::gdtw(x, y, opts);
        Mat a = solved.alignment.indicator();
        auto grad = gdtw_grad(x, y, solved.alignment, true);

        const double cx = pairwise_distances(x).m.max_abs();
        const double cy = dy_raw.max_abs();
        auto objective = [&](const TimeSeries& xx) {
            Mat dxn = pairwise_distances(xx).m;
            Mat dyn = dy_raw;
            for (double& v : dxn.data) v /= cx;
            for (double& v : dyn.data) v /= cy;
            return gdtw_objective(dxn, dyn, a);
        };
        const double h = 1e-5;
        double s0 = 0.0, s1 = 0.0;
        for (int i = 0; i < x.length(); ++i) {
            for (int c = 0; c < 2; ++c) {
                TimeSeries xp = x, xm = x;
                xp.points[i][c] += h;
                xm.points[i][c] -= h;
                double fd = (objective(xp) - objective(xm)) / (2 * h);
                if (std::abs(fd - grad[i][c]) > 1e-4 * std::max(1.0, std::abs(fd)))
                    return false;
            }
            s0 += grad[i][0];
            s1 += grad[i][1];
        }
        if (std::abs(s0) > 1e-10 || std::abs(s1) > 1e-10) return false;
    }
    return true;
}

double slow_barycenter_objective(const Mat& d, const std::vector<Mat>& d_list,
                                 const std::vector<AlignmentPath>& a_list,
                                 const std::vector<double>& alpha) {
    double total = 0.0;
    for (size_t j = 0; j < d_list.size(); ++j) {
        Mat a = a_list[j].indicator();
        double s = 0.0;
        for (int i = 0; i < a.rows; ++i)
            for (int jj = 0; jj < a.cols; ++jj) {
                if (a(i, jj) == 0.0) continue;
                for (int k = 0; k < a.rows; ++k)
                    for (int l = 0; l < a.cols; ++l) {
                        double t = d(i, k) - d_list[j](jj, l);
                        s += t * t * a(k, l);
                    }
            }
        total += alpha[j] * s;
    }
    return total;
}

Mat numeric_barycenter(const std::vector<Mat>& d_list,
                       const std::vector<AlignmentPath>& a_list,
                       const std::vector<double>& alpha, int t) {
    Mat d(t, t, 0.5);
    for (int i = 0; i < t; ++i) d(i, i) = 0.0;
    const double lr = 0.05, h = 1e-6;
    for (int step = 0; step < 4000; ++step) {
        double base = slow_barycenter_objective(d, d_list, a_list, alpha);
        Mat grad(t, t);
        double gmax = 0.0;
        for (int p = 0; p < t; ++p)
            for (int q = p + 1; q < t; ++q) {
                Mat dp = d;
                dp(p, q) += h;
                dp(q, p) += h;
                double g = (slow_barycenter_objective(dp, d_list, a_list, alpha) - base) / h;
                grad(p, q) = g;
                gmax = std::max(gmax, std::abs(g));
            }
        if (gmax < 1e-10) break;
        for (int p = 0; p < t; ++p)
            for (int q = p + 1; q < t; ++q) {
                d(p, q) -= lr * grad(p, q);
                d(q, p) = d(p, q);
            }
    }
    return d;
}

// 6. The closed-form distance-matrix update is the true minimizer at fixed
//    alignments, never increases the objective, and the outer trace is
//    monotone.
bool check_closed_form_update() {
    SplitMix64 rng(106);
    for (int rep = 0; rep < 20; ++rep) {
        const int t = 3;
        int t1 = 3 + static_cast<int>(rng.next() % 2);
        int t2 = 3 + static_cast<int>(rng.next() % 2);
        std::vector<Mat> ds;
        for (int tt : {t1, t2}) {
            Mat d(tt, tt);
            for (int i = 0; i < tt; ++i)
                for (int k = i + 1; k < tt; ++k) d(i, k) = d(k, i) = rng.uniform(0.1, 1.0);
            ds.push_back(d);
        }
        std::vector<AlignmentPath> as{random_monotone_path(t, t1, rng.next()),
                                      random_monotone_path(t, t2, rng.next())};
        std::vector<double> alpha{0.4, 0.6};

        Mat closed = barycenter_update(ds, as, alpha);
        Mat numeric = numeric_barycenter(ds, as, alpha, t);
        for (int p = 0; p < t; ++p)
            for (int q = 0; q < t; ++q)
                if (std::abs(closed(p, q) - numeric(p, q)) > 1e-6) return false;

        // no increase from an arbitrary starting matrix
        Mat start(t, t);
        for (int i = 0; i < t; ++i)
            for (int k = i + 1; k < t; ++k) start(i, k) = start(k, i) = rng.uniform(0.1, 1.0);
        if (slow_barycenter_objective(closed, ds, as, alpha) >
            slow_barycenter_objective(start, ds, as, alpha) + 1e-12)
            return false;
    }

    BarycenterOptions opts;
    auto r = gdtw_barycenter({gen_fixture(FixtureKind::Circle, 10, 1),
                              gen_fixture(FixtureKind::Folium, 7, 2)},
                             {0.5, 0.5}, 9, opts);
    for (size_t i = 1; i < r.objective_trace.size(); ++i)
        if (r.objective_trace[i] > r.objective_trace[i - 1] + 1e-9) return false;
    return true;
}

// 7. Averaging ten rotated/translated copies of one curve collapses the
//    objective to zero.
bool check_barycenter_isometric_copies() {
    double t0 = now_s();
    SplitMix64 rng(107);
    TimeSeries base = gen_fixture(FixtureKind::Spiral, 12, 3);
    std::vector<TimeSeries> copies;
    for (int j = 0; j < 10; ++j)
        copies.push_back(apply_isometry(base, rot2(rng.uniform(0.0, 2 * M_PI)),
                                        {rng.normal(), rng.normal()}));
    BarycenterOptions opts;
    opts.fw.restarts = 2;
    auto r = gdtw_barycenter(copies, std::vector<double>(10, 0.1), 12, opts);
    return !r.objective_trace.empty() && r.objective_trace.back() <= 1e-6 &&
           now_s() - t0 < 60.0;
}

// 8. Embedding a Euclidean-embeddable distance matrix reproduces it.
bool check_mds_round_trip() {
    SplitMix64 rng(108);
    for (int dim : {2, 3}) {
        TimeSeries pts;
        for (int i = 0; i < 8; ++i) {
            std::vector<double> p;
            for (int c = 0; c < dim; ++c) p.push_back(rng.normal());
            pts.points.push_back(p);
        }
        auto d = pairwise_distances(pts);
        auto back = pairwise_distances(mds_embed(d, dim));
        for (size_t i = 0; i < d.m.data.size(); ++i)
            if (std::abs(back.m.data[i] - d.m.data[i]) > 1e-6) return false;
    }
    return true;
}

// 9. Transport plans satisfy their marginals, match a dense one-parameter scan
//    in 2x2, and collapse to the product coupling when entropy dominates.
bool check_sinkhorn() {
    SplitMix64 rng(109);
    for (int rep = 0; rep < 5; ++rep) {
        int m = 2 + static_cast<int>(rng.next() % 6);
        int n = 2 + static_cast<int>(rng.next() % 6);
        Mat c(m, n);
        for (double& v : c.data) v = rng.uniform(0.0, 2.0);
        std::vector<double> p(m, 1.0 / m), q(n, 1.0 / n);
        auto r = sinkhorn(c, p, q, 0.05, 100000, 1e-8);
        for (int i = 0; i < m; ++i) {
            double s = 0.0;
            for (int j = 0; j < n; ++j) s += r.coupling.matrix(i, j);
            if (std::abs(s - p[i]) > 1e-6) return false;
        }
        for (int j = 0; j < n; ++j) {
            double s = 0.0;
            for (int i = 0; i < m; ++i) s += r.coupling.matrix(i, j);
            if (std::abs(s - q[j]) > 1e-6) return false;
        }
    }

    auto entropy = [](const Mat& pi) {
        double h = 0.0;
        for (double v : pi.data)
            if (v > 0.0) h -= v * (std::log(v) - 1.0);
        return h;
    };
    for (int rep = 0; rep < 3; ++rep) {
        Mat c(2, 2);
        for (double& v : c.data) v = rng.uniform();
        const double eps = 1e-3;
        auto r = sinkhorn(c, {0.5, 0.5}, {0.5, 0.5}, eps, 20000, 1e-10);
        double best = 1e300;
        for (int k = 0; k <= 100000; ++k) {
            double s = 0.5 * k / 100000;
            Mat pi(2, 2);
            pi(0, 0) = pi(1, 1) = s;
            pi(0, 1) = pi(1, 0) = 0.5 - s;
            double v = 0.0;
            for (int i = 0; i < 4; ++i) v += c.data[i] * pi.data[i];
            best = std::min(best, v - eps * entropy(pi));
        }
        if (std::abs(r.value - best) > 1e-2) return false;
    }

    Mat c(3, 4);
    for (double& v : c.data) v = rng.uniform(0.0, 5.0);
    std::vector<double> p{0.2, 0.5, 0.3}, q{0.1, 0.4, 0.25, 0.25};
    auto lim = sinkhorn(c, p, q, 1e6);
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 4; ++j)
            if (std::abs(lim.coupling.matrix(i, j) - p[i] * q[j]) > 1e-4) return false;
    return true;
}

// 10. Under a growing half-series distortion the smoothed objective moves
//     continuously while the hard objective jumps.
bool check_smoothness_sweep() {
    const int t = 20;
    TimeSeries x = gen_fixture(FixtureKind::Circle, t, 0);
    auto value_at = [&](double lambda, double gamma) {
        TimeSeries xl = x;
        for (int i = 0; i < t / 2; ++i) xl.points[i][1] += lambda;
        if (gamma > 0.0) {
            FwOptions o;
            o.gamma = gamma;
            return soft_gdtw(x, xl, o).value;
        }
        return gdtw::gdtw(x, xl).value;
    };
    double jump_hard = 0.0, jump_soft = 0.0;
    double prev_h = value_at(0.0, 0.0), prev_s = value_at(0.0, 1.0);
    for (int k = 1; k <= 100; ++k) {
        double lam = 0.01 * k;
        double h = value_at(lam, 0.0), s = value_at(lam, 1.0);
        jump_hard = std::max(jump_hard, std::abs(h - prev_h));
        jump_soft = std::max(jump_soft, std::abs(s - prev_s));
        prev_h = h;
        prev_s = s;
    }
    return jump_soft < jump_hard;
}

// 11. Gradient descent on the action sequence drives the loss down against a
//     planar expert (to 1%) and a pixel-grid video expert (to 10%).
bool check_imitation() {
    double t0 = now_s();
    ImitationProblem spiral;
    spiral.expert = gen_fixture(FixtureKind::Spiral, 40, 7);
    spiral.horizon = 40;
    spiral.steps = 500;
    spiral.gamma = 0.01;
    spiral.learn_rate = 7e-4;
    spiral.seed = 1;
    auto rs = imitate(spiral);
    bool spiral_ok = rs.loss_history.back() <= 0.01 * rs.loss_history.front() &&
                     now_s() - t0 < 60.0;

    double t1 = now_s();
    ImitationProblem grid;
    grid.expert = render_grid_video(gen_fixture(FixtureKind::Spiral, 36, 7), 16, 16, 1.0);
    grid.horizon = 36;
    grid.steps = 300;
    grid.gamma = 0.01;
    grid.learn_rate = 7e-4;
    grid.seed = 2;
    auto rg = imitate(grid);
    bool grid_ok = rg.loss_history.back() <= 0.1 * rg.loss_history.front() &&
                   now_s() - t1 < 600.0;
    return spiral_ok && grid_ok;
}

// 12. The transform-alternating baseline absorbs rotations in rotation mode,
//     cannot absorb translations there, and absorbs both with translation on.
bool check_dtw_gi() {
    SplitMix64 rng(112);
    TimeSeries x = gen_fixture(FixtureKind::Folium, 20, 0);
    for (int rep = 0; rep < 5; ++rep) {
        auto y = apply_isometry(x, rot2(rng.uniform(0.0, 2 * M_PI)), {0.0, 0.0});
        if (dtw_gi(x, y, GiInvariance::Rotation).value > 1e-8) return false;
        if (dtw_gi(x, y, GiInvariance::RotationTranslation).value > 1e-6) return false;
    }
    auto shifted = apply_isometry(x, rot2(0.0), {1.0, 0.0});
    if (dtw_gi(x, shifted, GiInvariance::Rotation).value < 0.1) return false;
    if (dtw_gi(x, shifted, GiInvariance::RotationTranslation).value > 1e-6) return false;
    return true;
}

std::string slurp(const fs::path& p) {
    std::ifstream in(p, std::ios::binary);
    std::stringstream ss;
    ss << in.rdbuf();
    return ss.str();
}

// 13. Every subcommand with a fixed seed writes byte-identical outputs across
//     two runs (reports compared with the timing field removed).
bool check_cli_determinism(const std::string& bin) {
    char tmpl[] = "/tmp/gdtw_acc_XXXXXX";
    if (!mkdtemp(tmpl)) return false;
    fs::path root = tmpl;
    bool ok = true;

    struct Case {
        std::string name, args;
        std::vector<std::string> files;
    };
    std::vector<Case> cases{
        {"fixture", "fixture --kind spiral -T 10 --seed 4 --out f.csv",
         {"f.csv", "f.csv.report.json"}},
        {"align", "align x.csv y.csv --method gdtw --seed 11 --restarts 3 --out a",
         {"a.csv", "a.report.json", "cli_stdout.txt"}},
        {"dist", "dist x.csv y.csv --method soft-gdtw --gamma 0.5 --seed 6 --out d",
         {"d.report.json", "cli_stdout.txt"}},
        {"dataset-dist", "dataset-dist set.json set.json --epsilon 0.05 --seed 2 --out dd",
         {"dd.report.json", "cli_stdout.txt"}},
        {"barycenter", "barycenter set.json -T 6 --seed 5 --out b",
         {"b.dmatrix.csv", "b.embed.csv", "b.report.json"}},
        {"imitate", "imitate x.csv --horizon 8 --steps 10 --gamma 0.01 --seed 9 --out im",
         {"im.loss.csv", "im.trajectory.csv", "im.report.json"}},
        {"plotdata", "plotdata --kind trajectory --in x.csv --out p.csv --svg p.svg",
         {"p.csv", "p.svg", "p.csv.report.json"}},
    };
    for (const auto& c : cases) {
        std::vector<std::string> bodies[2];
        for (int rep = 0; rep < 2 && ok; ++rep) {
            fs::path dir = root / (c.name + std::to_string(rep));
            fs::create_directories(dir);
            save_series((dir / "x.csv").string(),
                        {gen_fixture(FixtureKind::Spiral, 8, 1)}, SeriesFormat::Csv);
            save_series((dir / "y.csv").string(),
                        {gen_fixture(FixtureKind::Circle, 7, 2)}, SeriesFormat::Csv);
            save_series((dir / "set.json").string(),
                        {gen_fixture(FixtureKind::Spiral, 6, 0),
                         gen_fixture(FixtureKind::Folium, 5, 3)},
                        SeriesFormat::Json);
            std::string cmd = "cd '" + dir.string() + "' && '" + bin + "' " + c.args +
                              " > cli_stdout.txt 2> cli_stderr.txt";
            int raw = std::system(cmd.c_str());
            if (!WIFEXITED(raw) || WEXITSTATUS(raw) != 0) {
                ok = false;
                break;
            }
            for (const auto& f : c.files) {
                std::string body = slurp(dir / f);
                if (f.size() > 5 && f.substr(f.size() - 5) == ".json") {
                    json rep_json = json::parse(body);
                    rep_json.erase("wall_time_ms");  // the only timing field
                    body = rep_json.dump();
                }
                bodies[rep].push_back(body);
            }
        }
        if (!ok || bodies[0] != bodies[1]) {
            std::fprintf(stderr, "determinism mismatch in subcommand %s\n", c.name.c_str());
            ok = false;
            break;
        }
    }
    fs::remove_all(root);
    return ok;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc < 2) {
        std::fprintf(stderr, "usage: acceptance <path-to-gdtw-binary>\n");
        return 64;
    }
    std::string bin = fs::absolute(argv[1]).string();

    std::vector<std::pair<const char*, std::function<bool()>>> checks{
        {"dtw matches brute-force enumeration", check_dtw_bruteforce},
        {"soft-dtw value/argmin/gradient oracle", check_soft_dtw_oracle},
        {"gdtw isometry invariance at T=30", check_isometry_invariance},
        {"fw solver vs exhaustive minimum on tiny pairs", check_fw_vs_exhaustive},
        {"coordinate gradients vs finite differences", check_gradients},
        {"closed-form barycenter update optimality", check_closed_form_update},
        {"barycenter of 10 isometric copies", check_barycenter_isometric_copies},
        {"mds round trip", check_mds_round_trip},
        {"sinkhorn marginals, scan oracle, product limit", check_sinkhorn},
        {"soft objective smoother than hard under distortion", check_smoothness_sweep},
        {"imitation: spiral to 1%, grid video to 10%", check_imitation},
        {"dtw-gi rotation vs rotation+translation modes", check_dtw_gi},
        {"cli determinism across reruns", [&] { return check_cli_determinism(bin); }},
    };

    int failures = 0;
    for (size_t i = 0; i < checks.size(); ++i) {
        bool ok = checks[i].second();
        std::printf("%s %2zu: %s\n", ok ? "PASS" : "FAIL", i + 1, checks[i].first);
        std::fflush(stdout);
        if (!ok) ++failures;
    }
    return failures;
}
