#include "graphonlab/experiments.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "graphonlab/meanfield.hpp"
#include "graphonlab/numeric.hpp"
#include "graphonlab/philox.hpp"
#include "graphonlab/sde.hpp"
#include "graphonlab/transport.hpp"

namespace graphonlab {

double rate_m_n(int n, const RateParams& params) {
    if (n < 1) throw std::invalid_argument("rate: n must be positive");
    if (params.d < 1) throw std::invalid_argument("rate: d must be positive");
    if (!(params.eps > 0.0)) throw std::invalid_argument("rate: eps must be positive");
    if (params.d <= 4 && params.eps == 2.0) {
        throw std::invalid_argument("rate: excluded case eps = 2 for d <= 4");
    }
    if (params.d > 4 && params.eps == (4.0 - params.d) / (params.d - 2.0)) {
        throw std::invalid_argument("rate: excluded case eps = (4-d)/(d-2) for d > 4");
    }
    const double x = static_cast<double>(n);
    const double tail = std::pow(x, -params.eps / (2.0 + params.eps));
    if (params.d < 4) return std::pow(x, -0.5) + tail;
    if (params.d == 4) return std::pow(x, -0.5) * std::log1p(x) + tail;
    return std::pow(x, -2.0 / params.d) + tail;
}

SlopeFit fit_loglog_slope(std::span<const int> ns, std::span<const double> estimates) {
    if (ns.size() != estimates.size() || ns.size() < 3) {
        throw std::invalid_argument("slope fit needs at least 3 points");
    }
    const std::size_t k = ns.size();
    std::vector<double> xs(k), ys(k);
    for (std::size_t i = 0; i < k; ++i) {
        if (ns[i] < 1) throw std::invalid_argument("slope fit: n must be positive");
        if (!(estimates[i] > 0.0)) {
            throw std::invalid_argument("slope fit: estimates must be positive");
        }
        xs[i] = std::log(static_cast<double>(ns[i]));
        ys[i] = std::log(estimates[i]);
    }
    const double xbar = pairwise_mean(xs);
    const double ybar = pairwise_mean(ys);
    double sxx = 0.0, sxy = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        sxx += (xs[i] - xbar) * (xs[i] - xbar);
        sxy += (xs[i] - xbar) * (ys[i] - ybar);
    }
    if (sxx == 0.0) throw std::invalid_argument("slope fit: degenerate n values");
    SlopeFit fit;
    fit.slope = sxy / sxx;
    double ss_res = 0.0;
    for (std::size_t i = 0; i < k; ++i) {
        const double r = ys[i] - (ybar + fit.slope * (xs[i] - xbar));
        ss_res += r * r;
    }
    if (k > 2) fit.stderr_ = std::sqrt(ss_res / (static_cast<double>(k) - 2.0) / sxx);
    return fit;
}

const QuantitySeries& ExperimentReport::find(const std::string& quantity) const {
    for (const auto& s : series) {
        if (s.quantity == quantity) return s;
    }
    throw std::invalid_argument("no such quantity in report: " + quantity);
}

namespace {

DiscretizedGraphon discretize(const Graphon& g, int n, const std::string& mode) {
    if (mode == "sample") return discretize_sample(g, n);
    if (mode == "average") return discretize_average(g, n);
    throw std::invalid_argument("unknown discretization mode '" + mode + "'");
}

void check_sweep(const SweepOptions& opt) {
    if (opt.n_list.empty()) throw std::invalid_argument("sweep: empty n list");
    for (int n : opt.n_list) {
        if (n < 1 || n > opt.n_ref || opt.n_ref % n != 0) {
            throw std::invalid_argument(
                "sweep: every n must divide n_ref so labels {i/n} live on the reference grid");
        }
    }
    if (opt.reps < 1) throw std::invalid_argument("sweep: reps must be positive");
}

// indices of the reference particles carrying labels {i/n}, i = 1..n
std::vector<std::size_t> sublabel_indices(const TrajectoryEnsemble& ref, int n) {
    std::vector<std::size_t> idx(static_cast<std::size_t>(n));
    for (int i = 1; i <= n; ++i) {
        idx[static_cast<std::size_t>(i - 1)] = ref.index_of_label(static_cast<double>(i) / n);
    }
    return idx;
}

// mean/stderr rows from a reps x sweep value table, plus the paired
// n_ref-doubling delta over the delta replications
QuantitySeries make_series(const std::string& name, const std::vector<int>& sweep, int reps,
                           int delta_reps, const std::vector<std::vector<double>>& values,
                           const std::vector<std::vector<double>>& doubled, bool fit_slope) {
    QuantitySeries series;
    series.quantity = name;
    std::vector<double> means;
    for (std::size_t ni = 0; ni < sweep.size(); ++ni) {
        std::vector<double> vs(static_cast<std::size_t>(reps));
        for (int r = 0; r < reps; ++r) {
            vs[static_cast<std::size_t>(r)] = values[static_cast<std::size_t>(r)][ni];
        }
        EstimateRow row;
        row.n = sweep[ni];
        row.mean = pairwise_mean(vs);
        row.stderr_ = stderr_of_mean(vs);
        if (delta_reps > 0) {
            std::vector<double> diff(static_cast<std::size_t>(delta_reps));
            for (int r = 0; r < delta_reps; ++r) {
                diff[static_cast<std::size_t>(r)] = doubled[static_cast<std::size_t>(r)][ni] -
                                                    values[static_cast<std::size_t>(r)][ni];
            }
            row.nref_delta = std::abs(pairwise_mean(diff));
        }
        series.rows.push_back(row);
        means.push_back(row.mean);
    }
    if (fit_slope && sweep.size() >= 3) {
        bool positive = true;
        for (double m : means) positive = positive && m > 0.0;
        if (positive) {
            series.slope = fit_loglog_slope(sweep, means);
            series.has_slope = true;
        }
    }
    return series;
}

}  // namespace

ExperimentReport estimate_empirical_lln(const SystemConfig& cfg, const SweepOptions& opt,
                                        std::uint64_t seed) {
    cfg.check();
    check_sweep(opt);
    const int delta_reps = std::min(opt.delta_reps, opt.reps);
    const std::size_t n_count = opt.n_list.size();

    std::vector<std::vector<double>> fin_base(static_cast<std::size_t>(opt.reps),
                                              std::vector<double>(n_count, 0.0));
    auto fin_doubled = fin_base;
    auto bar_base = fin_base;
    auto bar_doubled = fin_base;

    std::vector<DiscretizedGraphon> gns;
    gns.reserve(n_count);
    for (int n : opt.n_list) gns.push_back(discretize(cfg.graphon, n, opt.gn_mode));

    parallel_for(static_cast<std::size_t>(opt.reps), opt.threads, [&](std::size_t r) {
        const std::uint64_t seed_r = derive_seed(seed, r);
        const bool with_delta = static_cast<int>(r) < delta_reps;
        for (int pass = 0; pass < (with_delta ? 2 : 1); ++pass) {
            const int n_ref = pass == 0 ? opt.n_ref : 2 * opt.n_ref;
            const auto ref = simulate_reference(cfg, cfg.graphon, n_ref, 1, seed_r, 1);
            const auto ref_bar = ref.averaged_law_paths();
            for (std::size_t ni = 0; ni < n_count; ++ni) {
                const int n = opt.n_list[ni];
                const auto fin = simulate_finite(cfg, gns[ni], seed_r, 1);
                const double v_fin = w2_exact(fin.uniform_path_measure(), ref_bar).plan.cost;
                const auto subset = sublabel_indices(ref.ensemble(), n);
                const double v_bar =
                    w2_exact(ref.ensemble().subset_uniform_path_measure(subset), ref_bar).plan.cost;
                (pass == 0 ? fin_base : fin_doubled)[r][ni] = v_fin;
                (pass == 0 ? bar_base : bar_doubled)[r][ni] = v_bar;
            }
        }
    });

    ExperimentReport report;
    report.config_hash = config_hash(cfg);
    report.seed = seed;
    report.gn_mode = opt.gn_mode;
    report.n_ref = opt.n_ref;
    report.reps = opt.reps;
    report.series.push_back(make_series("lln_w2sq_finite_vs_ref", opt.n_list, opt.reps, delta_reps,
                                        fin_base, fin_doubled, true));
    report.series.push_back(make_series("lln_w2sq_graphon_empirical_vs_ref", opt.n_list, opt.reps,
                                        delta_reps, bar_base, bar_doubled, true));
    return report;
}

ExperimentReport estimate_weighted_lln(const SystemConfig& cfg, const SweepOptions& opt,
                                       std::uint64_t seed) {
    cfg.check();
    check_sweep(opt);
    const int delta_reps = std::min(opt.delta_reps, opt.reps);
    const std::size_t n_count = opt.n_list.size();
    const auto x0 = ReferencePoint::zero(cfg.d);

    std::vector<std::vector<double>> ref_base(static_cast<std::size_t>(opt.reps),
                                              std::vector<double>(n_count, 0.0));
    auto ref_doubled = ref_base;
    auto fin_base = ref_base;
    auto fin_doubled = ref_base;

    std::vector<DiscretizedGraphon> gns;
    gns.reserve(n_count);
    for (int n : opt.n_list) gns.push_back(discretize(cfg.graphon, n, opt.gn_mode));

    parallel_for(static_cast<std::size_t>(opt.reps), opt.threads, [&](std::size_t r) {
        const std::uint64_t seed_r = derive_seed(seed, r);
        const bool with_delta = static_cast<int>(r) < delta_reps;
        for (int pass = 0; pass < (with_delta ? 2 : 1); ++pass) {
            const int n_ref = pass == 0 ? opt.n_ref : 2 * opt.n_ref;
            const auto ref = simulate_reference(cfg, cfg.graphon, n_ref, 1, seed_r, 1);
            for (std::size_t ni = 0; ni < n_count; ++ni) {
                const int n = opt.n_list[ni];
                const auto& gn = gns[ni];
                const auto fin = simulate_finite(cfg, gn, seed_r, 1);
                const auto fin_paths = fin.uniform_path_measure();
                const auto subset = sublabel_indices(ref.ensemble(), n);
                const auto sub_paths = ref.ensemble().subset_uniform_path_measure(subset);

                std::vector<double> per_i_ref(static_cast<std::size_t>(n));
                std::vector<double> per_i_fin(static_cast<std::size_t>(n));
                std::vector<double> row(static_cast<std::size_t>(n));
                for (int i = 0; i < n; ++i) {
                    for (int j = 0; j < n; ++j) row[static_cast<std::size_t>(j)] = gn.at(i, j);
                    const double u = static_cast<double>(i + 1) / n;
                    const auto field = ref.interaction_measure_paths(cfg.graphon, u);
                    const auto weighted_ref = graphon_weighted_empirical(
                        cfg.d, sub_paths.time_grid(), sub_paths.coords(), row);
                    const auto r_ref = wop2(weighted_ref, field, x0);
                    per_i_ref[static_cast<std::size_t>(i)] =
                        r_ref.mass_gap * r_ref.mass_gap + r_ref.plan.cost;
                    const auto weighted_fin = graphon_weighted_empirical(
                        cfg.d, fin_paths.time_grid(), fin_paths.coords(), row);
                    const auto r_fin = wop2(weighted_fin, field, x0);
                    per_i_fin[static_cast<std::size_t>(i)] =
                        r_fin.mass_gap * r_fin.mass_gap + r_fin.plan.cost;
                }
                (pass == 0 ? ref_base : ref_doubled)[r][ni] = pairwise_mean(per_i_ref);
                (pass == 0 ? fin_base : fin_doubled)[r][ni] = pairwise_mean(per_i_fin);
            }
        }
    });

    ExperimentReport report;
    report.config_hash = config_hash(cfg);
    report.seed = seed;
    report.gn_mode = opt.gn_mode;
    report.n_ref = opt.n_ref;
    report.reps = opt.reps;
    report.series.push_back(make_series("wlln_wop2sq_ref_particles", opt.n_list, opt.reps,
                                        delta_reps, ref_base, ref_doubled, true));
    report.series.push_back(make_series("wlln_wop2sq_finite_particles", opt.n_list, opt.reps,
                                        delta_reps, fin_base, fin_doubled, true));
    return report;
}

ExperimentReport estimate_coupling_error(const SystemConfig& cfg, const SweepOptions& opt,
                                         std::uint64_t seed) {
    cfg.check();
    check_sweep(opt);
    if (opt.gn_mode != "sample") {
        throw std::invalid_argument("coupling error requires the sampled discretization");
    }
    const int delta_reps = std::min(opt.delta_reps, opt.reps);
    const std::size_t n_count = opt.n_list.size();

    std::vector<std::vector<std::vector<double>>> per_i(static_cast<std::size_t>(opt.reps));
    auto per_i_doubled = per_i;
    for (int r = 0; r < opt.reps; ++r) {
        per_i[static_cast<std::size_t>(r)].resize(n_count);
        per_i_doubled[static_cast<std::size_t>(r)].resize(n_count);
    }

    std::vector<DiscretizedGraphon> gns;
    gns.reserve(n_count);
    for (int n : opt.n_list) gns.push_back(discretize_sample(cfg.graphon, n));

    parallel_for(static_cast<std::size_t>(opt.reps), opt.threads, [&](std::size_t r) {
        const std::uint64_t seed_r = derive_seed(seed, r);
        const bool with_delta = static_cast<int>(r) < delta_reps;
        for (int pass = 0; pass < (with_delta ? 2 : 1); ++pass) {
            const int n_ref = pass == 0 ? opt.n_ref : 2 * opt.n_ref;
            const auto ref = simulate_reference(cfg, cfg.graphon, n_ref, 1, seed_r, 1);
            for (std::size_t ni = 0; ni < n_count; ++ni) {
                const int n = opt.n_list[ni];
                const auto fin = simulate_finite(cfg, gns[ni], seed_r, 1);
                std::vector<double> sup_sq(static_cast<std::size_t>(n));
                for (int i = 0; i < n; ++i) {
                    const double label = static_cast<double>(i + 1) / n;
                    const std::size_t pf = fin.index_of_label(label);
                    const std::size_t pr = ref.ensemble().index_of_label(label);
                    double sup = 0.0;
                    for (std::size_t k = 0; k < fin.time_grid.size(); ++k) {
                        sup = std::max(
                            sup, state_dist2(fin.state(pf, k), ref.ensemble().state(pr, k)));
                    }
                    sup_sq[static_cast<std::size_t>(i)] = sup;
                }
                (pass == 0 ? per_i : per_i_doubled)[r][ni] = std::move(sup_sq);
            }
        }
    });

    // mean over i per replication; for the sup_i form, pick the label whose
    // mean over the replications is largest, then report that label's values
    auto reduce = [&](const std::vector<std::vector<std::vector<double>>>& table, int reps_used) {
        std::vector<std::vector<double>> mean_form(static_cast<std::size_t>(reps_used),
                                                   std::vector<double>(n_count, 0.0));
        auto sup_form = mean_form;
        for (std::size_t ni = 0; ni < n_count; ++ni) {
            const int n = opt.n_list[ni];
            std::vector<double> e_i(static_cast<std::size_t>(n), 0.0);
            for (int i = 0; i < n; ++i) {
                std::vector<double> vals(static_cast<std::size_t>(reps_used));
                for (int r = 0; r < reps_used; ++r) {
                    vals[static_cast<std::size_t>(r)] =
                        table[static_cast<std::size_t>(r)][ni][static_cast<std::size_t>(i)];
                }
                e_i[static_cast<std::size_t>(i)] = pairwise_mean(vals);
            }
            const std::size_t argmax =
                static_cast<std::size_t>(std::max_element(e_i.begin(), e_i.end()) - e_i.begin());
            for (int r = 0; r < reps_used; ++r) {
                mean_form[static_cast<std::size_t>(r)][ni] =
                    pairwise_mean(table[static_cast<std::size_t>(r)][ni]);
                sup_form[static_cast<std::size_t>(r)][ni] =
                    table[static_cast<std::size_t>(r)][ni][argmax];
            }
        }
        return std::pair{mean_form, sup_form};
    };

    const auto [mean_base, sup_base] = reduce(per_i, opt.reps);
    std::vector<std::vector<double>> mean_doubled, sup_doubled;
    if (delta_reps > 0) {
        auto [md, sd] = reduce(per_i_doubled, delta_reps);
        mean_doubled = std::move(md);
        sup_doubled = std::move(sd);
    }

    ExperimentReport report;
    report.config_hash = config_hash(cfg);
    report.seed = seed;
    report.gn_mode = "sample";
    report.n_ref = opt.n_ref;
    report.reps = opt.reps;
    report.series.push_back(make_series("coupling_mean_supsq", opt.n_list, opt.reps, delta_reps,
                                        mean_base, mean_doubled, true));
    report.series.push_back(make_series("coupling_max_supsq", opt.n_list, opt.reps, delta_reps,
                                        sup_base, sup_doubled, true));
    return report;
}

ExperimentReport estimate_spatial_continuity(const SystemConfig& cfg, const SpatialOptions& opt,
                                             std::uint64_t seed) {
    cfg.check();
    if (opt.cloud < 8) throw std::invalid_argument("spatial continuity needs cloud size M >= 8");
    if (opt.gaps.empty()) throw std::invalid_argument("spatial: no gaps requested");
    if (opt.reps < 1) throw std::invalid_argument("spatial: reps must be positive");
    for (double gap : opt.gaps) {
        const double u2 = opt.base_u + gap;
        const double scaled1 = opt.base_u * opt.n_ref;
        const double scaled2 = u2 * opt.n_ref;
        if (scaled1 != std::round(scaled1) || scaled2 != std::round(scaled2) || u2 > 1.0 ||
            opt.base_u <= 0.0) {
            throw std::invalid_argument("spatial: labels must land on the reference grid");
        }
    }
    const int delta_reps = std::min(opt.delta_reps, opt.reps);
    const std::size_t g_count = opt.gaps.size();

    std::vector<std::vector<double>> base(static_cast<std::size_t>(opt.reps),
                                          std::vector<double>(g_count, 0.0));
    auto doubled = base;

    parallel_for(static_cast<std::size_t>(opt.reps), opt.threads, [&](std::size_t r) {
        const std::uint64_t seed_r = derive_seed(seed, r);
        const bool with_delta = static_cast<int>(r) < delta_reps;
        for (int pass = 0; pass < (with_delta ? 2 : 1); ++pass) {
            const int n_ref = pass == 0 ? opt.n_ref : 2 * opt.n_ref;
            const auto ref = simulate_reference(cfg, cfg.graphon, n_ref, opt.cloud, seed_r, 1);
            for (std::size_t gi = 0; gi < g_count; ++gi) {
                const auto law1 = ref.conditional_law_paths(opt.base_u);
                const auto law2 = ref.conditional_law_paths(opt.base_u + opt.gaps[gi]);
                (pass == 0 ? base : doubled)[r][gi] = w2_exact(law1, law2).plan.cost;
            }
        }
    });

    std::vector<int> inv_gaps(g_count);
    for (std::size_t gi = 0; gi < g_count; ++gi) {
        inv_gaps[gi] = static_cast<int>(std::lround(1.0 / opt.gaps[gi]));
    }

    ExperimentReport report;
    report.config_hash = config_hash(cfg);
    report.seed = seed;
    report.gn_mode = "n/a";
    report.n_ref = opt.n_ref;
    report.cloud = opt.cloud;
    report.reps = opt.reps;
    report.series.push_back(make_series("spatial_w2sq_vs_inverse_gap", inv_gaps, opt.reps,
                                        delta_reps, base, doubled, false));
    return report;
}

}  // namespace graphonlab
