#pragma once

// Bookkeeping laws every SCP trace must obey, checked independently of the
// solver loop. Returns one message per violation.

#include <cmath>
#include <sstream>
#include <string>
#include <vector>

#include "gpmpc/scp.hpp"

namespace trace_laws {

inline bool same(double a, double b) { return std::abs(a - b) <= 1e-12 * std::max(std::abs(a), std::abs(b)); }

inline std::vector<std::string> check(const gpmpc::ScpReport& report, const gpmpc::ScpConfig& cfg) {
    std::vector<std::string> bad;
    auto fail = [&](const gpmpc::IterationRecord& r, const std::string& what) {
        std::ostringstream os;
        os << "pass " << r.pass << " iteration " << r.iteration << ": " << what;
        bad.push_back(os.str());
    };
    const auto& it = report.iterations;
    if (it.empty()) {
        bad.emplace_back("empty trace");
        return bad;
    }
    for (std::size_t i = 0; i < it.size(); ++i) {
        const gpmpc::IterationRecord& r = it[i];
        const bool first_of_pass = i == 0 || it[i - 1].pass != r.pass;
        const bool last_of_pass = i + 1 == it.size() || it[i + 1].pass != r.pass;

        if (first_of_pass) {
            if (r.iteration != 0) {
                fail(r, "pass does not start at iteration 0");
            }
            if (!same(r.rho, cfg.rho0)) {
                fail(r, "pass does not start from rho0");
            }
            if (i > 0 && !same(r.lambda, std::min(it[i - 1].lambda * cfg.lambda_growth, cfg.lambda_max))) {
                fail(r, "penalty weight did not grow by the configured factor");
            }
        } else {
            const gpmpc::IterationRecord& p = it[i - 1];
            if (r.iteration != p.iteration + 1) {
                fail(r, "iteration counter skipped");
            }
            if (r.rho != p.rho_next) {
                fail(r, "trust region does not continue from the previous update");
            }
            const double expected_phi = p.accepted ? p.phi_candidate : p.phi;
            if (r.phi != expected_phi) {
                fail(r, "current cost does not follow the accept/reject decision");
            }
            if (r.phi > p.phi) {
                fail(r, "accepted cost increased");
            }
        }

        if (!(r.delta_predicted >= 0.0)) {
            fail(r, "negative predicted reduction");
        }

        if (r.terminal) {
            if (!(std::abs(r.delta_predicted) <= cfg.epsilon)) {
                fail(r, "stop flagged with predicted reduction above epsilon");
            }
            if (!last_of_pass) {
                fail(r, "iterations continue after the stop test fired");
            }
            if (r.accepted || r.rho_next != r.rho) {
                fail(r, "stopping iteration changed the iterate or the trust region");
            }
            continue;
        }
        if (std::abs(r.delta_predicted) <= cfg.epsilon) {
            fail(r, "stop test should have fired");
        }

        const bool reject = r.ratio < cfg.r0;
        if (r.accepted == reject) {
            fail(r, "acceptance does not match the ratio test");
        }
        if (r.accepted && !(r.phi_candidate <= r.phi)) {
            fail(r, "accepted candidate does not reduce the cost");
        }
        const double factor = r.rho_next / r.rho;
        double expected = 1.0;
        if (r.ratio < cfg.r1) {
            expected = cfg.beta_fail;
        } else if (r.ratio >= cfg.r2) {
            expected = cfg.beta_succ;
        }
        if (!same(factor, expected)) {
            std::ostringstream os;
            os << "trust-region factor " << factor << " for ratio " << r.ratio;
            fail(r, os.str());
        }
        if (!same(factor, cfg.beta_fail) && !same(factor, 1.0) && !same(factor, cfg.beta_succ)) {
            fail(r, "trust-region factor outside {beta_fail, 1, beta_succ}");
        }

        if (last_of_pass) {
            const bool cap = r.iteration + 1 == cfg.j_max;
            const bool floor = r.rho_next < cfg.rho_min;
            if (!cap && !floor) {
                fail(r, "pass ended without a stopping condition");
            }
        }
    }
    return bad;
}

/// How a report terminated, for summaries.
struct Termination {
    int by_epsilon = 0;
    int by_cap = 0;
    int by_floor = 0;
};

inline void tally(const gpmpc::ScpReport& report, Termination& t) {
    switch (report.stop) {
        case gpmpc::ScpStop::kConverged:
            ++t.by_epsilon;
            break;
        case gpmpc::ScpStop::kMaxIterations:
            ++t.by_cap;
            break;
        case gpmpc::ScpStop::kTrustRegionFloor:
            ++t.by_floor;
            break;
    }
}

}  // namespace trace_laws
