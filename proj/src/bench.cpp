#include "gpmpc/bench.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>

#include "gpmpc/errors.hpp"

namespace gpmpc {

std::vector<int> parse_n_grid(const std::string& text) {
    std::vector<int> grid;
    try {
        if (text.find(':') != std::string::npos) {
            std::vector<int> parts;
            std::stringstream ss(text);
            std::string item;
            while (std::getline(ss, item, ':')) {
                parts.push_back(std::stoi(item));
            }
            if (parts.size() != 3 || parts[2] <= 0 || parts[0] > parts[1]) {
                throw ContractError("grid must be start:stop:step with step > 0 and start <= stop");
            }
            for (int n = parts[0]; n <= parts[1]; n += parts[2]) {
                grid.push_back(n);
            }
        } else {
            std::stringstream ss(text);
            std::string item;
            while (std::getline(ss, item, ',')) {
                grid.push_back(std::stoi(item));
            }
        }
    } catch (const std::logic_error& e) {
        if (dynamic_cast<const ContractError*>(&e) != nullptr) {
            throw;
        }
        throw ContractError("cannot parse N grid '" + text + "'");
    }
    if (grid.empty() || *std::min_element(grid.begin(), grid.end()) < 1) {
        throw ContractError("N grid must hold positive sizes");
    }
    return grid;
}

BenchResult benchmark(const BenchConfig& config, const std::function<void(const std::string&)>& progress) {
    if (config.n_grid.empty() || config.steps < 0) {
        throw ContractError("benchmark needs a non-empty N grid and a non-negative step count");
    }
    BenchResult result;
    ClosedLoopConfig loop = config.loop;
    loop.steps = config.steps;
    loop.seed = config.seed;
    for (int n : config.n_grid) {
        std::optional<GpModel> model;
        try {
            const TrainingData data = generate_training_data(n, config.seed);
            FitConfig fit_cfg;
            fit_cfg.seed = config.seed;
            fit_cfg.n_starts = config.fit_starts;
            fit_cfg.max_fit_points = config.fit_points;
            model.emplace(fit(data.inputs, data.targets, fit_cfg));
        } catch (const std::runtime_error& e) {
            result.failed_n.push_back(n);
            if (progress) {
                progress("N=" + std::to_string(n) + " training failed: " + e.what());
            }
            continue;
        }
        if (progress) {
            progress("N=" + std::to_string(n) + " trained");
        }
        ClosedLoopResult run = run_closed_loop(*model, config.spec, config.scp, loop);
        for (const auto& s : run.steps) {
            BenchRow row;
            row.n = n;
            row.step = s.step;
            row.total_time = s.total_time;
            row.subproblem_time = s.subproblem_time;
            row.iterations = s.iterations;
            row.converged = s.converged;
            row.tracking_error = std::abs(s.y_pred - s.reference);
            row.margin_lo = (s.y_pred - config.spec.kappa * s.sigma) - config.spec.y_lo;
            row.margin_hi = config.spec.y_hi - (s.y_pred + config.spec.kappa * s.sigma);
            result.rows.push_back(row);
        }
        result.runs.push_back(std::move(run));
        if (progress) {
            progress("N=" + std::to_string(n) + " closed loop done");
        }
    }
    return result;
}

void write_bench_csv(const std::string& path, const BenchResult& result) {
    std::ofstream out(path);
    if (!out) {
        throw ContractError("cannot open " + path + " for writing");
    }
    out << std::setprecision(12);
    out << "n,step,total_time,subproblem_time,iterations,converged,tracking_error,margin_lo,margin_hi\n";
    for (const auto& r : result.rows) {
        out << r.n << ',' << r.step << ',' << r.total_time << ',' << r.subproblem_time << ',' << r.iterations << ','
            << (r.converged ? 1 : 0) << ',' << r.tracking_error << ',' << r.margin_lo << ',' << r.margin_hi << '\n';
    }
}

double median(std::vector<double> values) {
    if (values.empty()) {
        throw ContractError("median of an empty sample");
    }
    const std::size_t mid = values.size() / 2;
    std::nth_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid), values.end());
    const double hi = values[mid];
    if (values.size() % 2 == 1) {
        return hi;
    }
    const double lo = *std::max_element(values.begin(), values.begin() + static_cast<std::ptrdiff_t>(mid));
    return 0.5 * (lo + hi);
}

double coefficient_of_variation(const std::vector<double>& values) {
    if (values.empty()) {
        throw ContractError("coefficient of variation of an empty sample");
    }
    const double mean = std::accumulate(values.begin(), values.end(), 0.0) / static_cast<double>(values.size());
    double ss = 0.0;
    for (double v : values) {
        ss += (v - mean) * (v - mean);
    }
    return std::sqrt(ss / static_cast<double>(values.size())) / mean;
}

std::vector<BenchSummary> summarize(const BenchResult& result) {
    std::vector<BenchSummary> out;
    std::map<int, std::vector<const BenchRow*>> by_n;
    std::vector<int> order;
    for (const auto& r : result.rows) {
        if (by_n.find(r.n) == by_n.end()) {
            order.push_back(r.n);
        }
        by_n[r.n].push_back(&r);
    }
    std::size_t run_index = 0;
    for (int n : order) {
        std::vector<double> totals;
        std::vector<double> iters;
        for (const BenchRow* r : by_n[n]) {
            if (r->step == 0) {
                continue;
            }
            totals.push_back(r->total_time);
            iters.push_back(r->iterations);
        }
        std::vector<double> sub_times;
        if (run_index < result.runs.size()) {
            const ClosedLoopResult& run = result.runs[run_index];
            std::size_t rep = 0;
            for (const auto& s : run.steps) {
                if (!s.solved) {
                    continue;
                }
                const ScpReport& report = run.reports.at(rep++);
                if (s.step == 0) {
                    continue;
                }
                for (const auto& rec : report.iterations) {
                    sub_times.push_back(rec.subproblem_time);
                }
            }
        }
        ++run_index;
        if (totals.empty()) {
            continue;
        }
        BenchSummary s;
        s.n = n;
        s.median_total_time = median(totals);
        s.mean_total_time = std::accumulate(totals.begin(), totals.end(), 0.0) / static_cast<double>(totals.size());
        double ss = 0.0;
        for (double t : totals) {
            ss += (t - s.mean_total_time) * (t - s.mean_total_time);
        }
        s.std_total_time = std::sqrt(ss / static_cast<double>(totals.size()));
        s.median_subproblem_time = sub_times.empty() ? 0.0 : median(sub_times);
        s.mean_iterations = std::accumulate(iters.begin(), iters.end(), 0.0) / static_cast<double>(iters.size());
        out.push_back(s);
    }
    return out;
}

}  // namespace gpmpc
