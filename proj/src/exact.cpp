#include "fixsim/exact.hpp"

#include <cmath>
#include <limits>
#include <string>

#include <Eigen/Dense>

namespace fixsim {

FixationVector solve_fixation(const ChainKernel& kernel, int cap) {
    const int N = kernel.N();
    if (N > cap) {
        throw CapExceeded("N=" + std::to_string(N) + " exceeds solver cap " +
                          std::to_string(cap));
    }
    const int n = N - 1;  // interior states 1..N-1

    Eigen::MatrixXd A = Eigen::MatrixXd::Zero(n, n);
    Eigen::VectorXd r = Eigen::VectorXd::Zero(n);
    for (int i = 1; i < N; ++i) {
        const std::vector<double> row = kernel.row(i);
        for (int j = 1; j < N; ++j) {
            A(i - 1, j - 1) = -row[static_cast<std::size_t>(j)];
        }
        A(i - 1, i - 1) += 1.0;
        r(i - 1) = row[static_cast<std::size_t>(N)];
    }

    Eigen::PartialPivLU<Eigen::MatrixXd> lu(A);
    Eigen::VectorXd p = lu.solve(r);

    const double residual = (A * p - r).lpNorm<Eigen::Infinity>();
    if (!std::isfinite(residual) || residual > 1e-10) {
        throw SingularSystem("fixation system residual " +
                             std::to_string(residual) +
                             " exceeds 1e-10; kernel is malformed");
    }

    FixationVector out;
    out.N = N;
    out.p.assign(static_cast<std::size_t>(N) + 1, 0.0);
    for (int i = 1; i < N; ++i) {
        out.p[static_cast<std::size_t>(i)] = p(i - 1);
    }
    out.p[static_cast<std::size_t>(N)] = 1.0;
    return out;
}

double moran_closed_form(const GameSpec& spec, int N, int i) {
    PopulationPoint check(N, i);  // validates ranges
    (void)check;
    if (i == 0) return 0.0;
    if (i == N) return 1.0;

    // The running log-product log prod_{k<=j} g_k/f_k for j = 1..N-1,
    // summed with the max factored out to avoid under/overflow.
    std::vector<double> log_terms;
    log_terms.reserve(static_cast<std::size_t>(N));
    log_terms.push_back(0.0);  // j = 0 empty product
    double log_prod = 0.0;
    double max_term = 0.0;
    for (int j = 1; j < N; ++j) {
        const Fitness fg = fitness(spec, PopulationPoint(N, j));
        log_prod += std::log(fg.g) - std::log(fg.f);
        log_terms.push_back(log_prod);
        if (log_prod > max_term) max_term = log_prod;
    }
    double denom = 0.0;
    for (double t : log_terms) denom += std::exp(t - max_term);
    double numer = 0.0;
    for (int j = 0; j < i; ++j) {
        numer += std::exp(log_terms[static_cast<std::size_t>(j)] - max_term);
    }
    return numer / denom;
}

MartingaleReport check_one_step_martingale(const ChainKernel& kernel,
                                           double base,
                                           MartingaleDirection direction) {
    if (!(base > 0.0 && base < 1.0)) {
        throw std::invalid_argument("martingale base must lie in (0,1)");
    }
    const int N = kernel.N();
    const double log_base = std::log(base);
    MartingaleReport report;
    report.max_violation = -std::numeric_limits<double>::infinity();

    for (int i = 1; i < N; ++i) {
        const double x = kernel.xi(i);
        // log E(base^{X'} | i) computed stably per kernel.
        double log_ev;
        if (kernel.kind() == KernelKind::WrightFisher) {
            log_ev = N * std::log1p(x * (base - 1.0));
        } else {
            const std::vector<double> row = kernel.row(i);
            const double down = row[static_cast<std::size_t>(i - 1)];
            const double up = row[static_cast<std::size_t>(i + 1)];
            const double stay = row[static_cast<std::size_t>(i)];
            // E(base^{X'}) / base^i = down/base + stay + up*base; fold the
            // base^i factor in afterwards for a uniform comparison.
            log_ev = std::log(down / base + stay + up * base) + i * log_base;
        }
        const double log_target = i * log_base;
        // Relative violation of the required inequality, via expm1 of the
        // log gap so slack 1e-12 is meaningful even when both sides are
        // astronomically small.
        const double gap = direction == MartingaleDirection::Sub
                               ? log_ev - log_target
                               : log_target - log_ev;
        const double violation = std::expm1(gap);
        if (violation > report.max_violation) {
            report.max_violation = violation;
            report.argmax_i = i;
        }
    }
    return report;
}

const char* game_param_name(GameParam param) {
    switch (param) {
        case GameParam::A: return "a";
        case GameParam::B: return "b";
        case GameParam::C: return "c";
        case GameParam::D: return "d";
        case GameParam::W: return "w";
    }
    return "?";
}

namespace {

double& param_ref(GameSpec& spec, GameParam param) {
    switch (param) {
        case GameParam::A: return spec.a;
        case GameParam::B: return spec.b;
        case GameParam::C: return spec.c;
        case GameParam::D: return spec.d;
        case GameParam::W: return spec.w;
    }
    return spec.a;
}

// Domain of the monotonicity statement: w in (0,1), a > c > 0, b > d > 0.
bool inside_sensitivity_domain(const GameSpec& spec) {
    return spec.w > 0.0 && spec.w < 1.0 && spec.a > spec.c && spec.c > 0.0 &&
           spec.b > spec.d && spec.d > 0.0;
}

}  // namespace

double parameter_sensitivity(const GameSpec& spec, int N, int i,
                             GameParam param, double h) {
    GameSpec plus = spec;
    GameSpec minus = spec;
    double& vp = param_ref(plus, param);
    double& vm = param_ref(minus, param);
    if (h <= 0.0) {
        h = 1e-5 * std::max(1.0, std::fabs(vp));
    }
    vp += h;
    vm -= h;
    if (!inside_sensitivity_domain(spec) || !inside_sensitivity_domain(plus) ||
        !inside_sensitivity_domain(minus)) {
        throw DomainExit("perturbing " + std::string(game_param_name(param)) +
                         " by " + std::to_string(h) +
                         " leaves the domain w in (0,1), a > c > 0, b > d > 0");
    }
    const FixationVector fp = solve_fixation(ChainKernel::wright_fisher(plus, N));
    const FixationVector fm = solve_fixation(ChainKernel::wright_fisher(minus, N));
    return (fp.p[static_cast<std::size_t>(i)] - fm.p[static_cast<std::size_t>(i)]) /
           (2.0 * h);
}

}  // namespace fixsim
