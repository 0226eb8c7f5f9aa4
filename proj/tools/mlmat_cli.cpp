// mlmat: command line front end.
//
//   mlmat eval    --alpha A --beta B --z Z [--k K] [--tau T]
//   mlmat deriv   --alpha A --beta B --z Z --k K [--method M]
//   mlmat matfun  --alpha A --beta B --input FILE [--output FILE] [--reference FILE --paper-metric]
//   mlmat cond    --alpha A --beta B --input FILE [--probes P] [--norm one|fro]
//   mlmat fde     --problem FILE --t GRID [--method closed|pi] [--h H]
//   mlmat gramian --input FILE --bc FILE --alpha A --t T [--kind ctrl|obs] [--nodes N]
//
// Exit codes: 0 success, 1 usage or input error, 2 result computed with
// degraded accuracy.

#include "io.hpp"

#include "mlmat/conditioning.hpp"
#include "mlmat/errors.hpp"
#include "mlmat/fde.hpp"
#include "mlmat/matrix_ml.hpp"
#include "mlmat/ml_scalar.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <fstream>
#include <iostream>
#include <optional>

using namespace mlmat;
using nlohmann::ordered_json;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitDegraded = 2;

double default_tau() {
    if (const char* env = std::getenv("ML_TAU")) {
        char* end = nullptr;
        const double v = std::strtod(env, &end);
        if (end != env && *end == '\0' && v > kMachineEps) return v;
        throw Error(ErrorCode::ParseError, std::string("ML_TAU is not a valid tolerance: '") + env + "'");
    }
    return kDefaultTau;
}

// JSON numbers are emitted as strings in the fixed 17-digit format so the
// output is byte-identical across platforms.
std::string num(double x) { return io::format_real(x); }

void print(const ordered_json& j) { std::cout << j.dump(2) << "\n"; }

struct ScalarArgs {
    double alpha = 1.0, beta = 1.0;
    std::string z = "0";
    int k = 0;
    std::optional<double> tau;
    std::string method = "auto";
};

int run_scalar(const ScalarArgs& a) {
    const double tau = a.tau ? *a.tau : default_tau();
    const cplx z = io::parse_complex(a.z);
    const MLParams p{a.alpha, a.beta};
    auto inner = [&](cplx zz, int q, const MLParams& pp) {
        return (zz == cplx{}) ? ml_derivative(zz, q, pp, tau) : lt_derivative(zz, q, pp, tau);
    };
    DerivEval e;
    if (a.method == "auto") e = ml_derivative(z, a.k, p, tau);
    else if (a.method == "series") e = ml_series(z, a.k, p, tau).eval;
    else if (a.method == "lt") e = lt_derivative(z, a.k, p, tau);
    else if (a.method == "prabhakar")
        e = sf_prabhakar(z, a.k, p, [&](cplx zz, const MLParams& pp) { return inner(zz, 0, pp); });
    else if (a.method == "djrbashian")
        e = sf_djrbashian(z, a.k, p, [&](cplx zz, const MLParams& pp) { return inner(zz, 0, pp); });
    else if (a.method == "balanced")
        e = balanced_derivative(z, a.k, std::min(a.k, 1), p, inner);
    else throw CLI::ValidationError("--method", "unknown method '" + a.method + "'");

    ordered_json j;
    j["value_re"] = num(e.value.real());
    j["value_im"] = num(e.value.imag());
    j["method"] = std::string(to_string(e.method));
    j["err_estimate"] = num(e.err_estimate);
    j["k"] = e.k;
    j["terms_or_nodes"] = e.terms_or_nodes;
    j["degraded"] = e.degraded;
    print(j);
    return e.degraded ? kExitDegraded : kExitOk;
}

struct MatfunArgs {
    double alpha = 1.0, beta = 1.0;
    std::string input, output, reference;
    std::optional<double> tau;
    double delta = kDefaultDelta;
    bool paper_metric = false;
    bool no_hermitian = false;
};

int run_matfun(const MatfunArgs& a) {
    const double tau = a.tau ? *a.tau : default_tau();
    const CMatrix A = io::read_matrix_file(a.input);
    if (A.rows() != A.cols()) throw Error(ErrorCode::DimensionError, "input matrix is not square");
    FunmOptions opts;
    opts.hermitian_fast_path = !a.no_hermitian;
    const MatrixMLResult r = ml_matrix({A, {a.alpha, a.beta}, tau, a.delta}, opts);

    ordered_json d;
    d["n"] = A.rows();
    d["max_derivative_order"] = r.diag.max_derivative_order;
    d["max_taylor_terms"] = r.diag.max_taylor_terms;
    d["block_sizes"] = r.diag.block_sizes;
    d["hermitian_path"] = r.diag.hermitian_path;
    d["diagonal_path"] = r.diag.diagonal_path;
    d["real_input"] = r.diag.real_input;
    d["discarded_imag"] = num(r.diag.discarded_imag);
    d["max_err_estimate"] = num(r.diag.max_err_estimate);
    d["degraded"] = r.diag.degraded;
    if (a.paper_metric) {
        if (a.reference.empty()) throw CLI::ValidationError("--paper-metric", "requires --reference");
        const CMatrix ref = io::read_matrix_file(a.reference);
        if (ref.rows() != A.rows() || ref.cols() != A.cols())
            throw Error(ErrorCode::DimensionError, "reference matrix has the wrong shape");
        d["paper_metric"] = num((ref - r.value).norm() / (1.0 + ref.norm()));
    }

    if (!a.output.empty()) {
        std::ofstream out(a.output);
        if (!out) throw Error(ErrorCode::ParseError, "cannot write '" + a.output + "'");
        io::write_matrix(out, r.value);
        print(d);
    } else {
        io::write_matrix(std::cout, r.value);
        std::cerr << d.dump(2) << "\n";
    }
    return r.diag.degraded ? kExitDegraded : kExitOk;
}

struct CondArgs {
    double alpha = 1.0, beta = 1.0;
    std::string input, norm = "fro";
    int probes = 5;
    std::optional<double> tau;
};

int run_cond(const CondArgs& a) {
    const double tau = a.tau ? *a.tau : default_tau();
    const CMatrix A = io::read_matrix_file(a.input);
    const NormKind nk = a.norm == "one" ? NormKind::One : NormKind::Frobenius;
    const CondReport c = cond_estimate(A, MLParams{a.alpha, a.beta}, a.probes, nk, tau);
    ordered_json j;
    j["kappa_abs"] = num(c.kappa_abs);
    j["kappa_rel"] = num(c.kappa_rel);
    j["norm"] = a.norm;
    j["probes"] = c.probes;
    j["evaluations"] = c.evaluations;
    j["lower_bound"] = true;
    print(j);
    return kExitOk;
}

struct FdeArgs {
    std::string problem, t = "0:0.05:6", method = "closed", output;
    double h = 0.01;
    std::optional<double> tau;
};

int run_fde(const FdeArgs& a) {
    const double tau = a.tau ? *a.tau : default_tau();
    const io::FdeProblem pr = io::read_problem_file(a.problem);
    const std::vector<double> ts = io::parse_time_grid(a.t);
    for (double t : ts)
        if (t < 0.0) throw Error(ErrorCode::ParseError, "times must be nonnegative");

    std::ofstream file;
    if (!a.output.empty()) {
        file.open(a.output);
        if (!file) throw Error(ErrorCode::ParseError, "cannot write '" + a.output + "'");
    }
    std::ostream& out = a.output.empty() ? std::cout : file;

    if (a.method == "pi") {
        if (pr.type != io::FdeProblem::Type::Multiterm)
            throw CLI::ValidationError("--method", "pi is available for multiterm problems only");
        const double T = ts.back();
        const Trajectory tr = trapezoidal_pi(pr.multiterm, a.h, T);
        out << "t,y,h\n";
        for (double t : ts) {
            const long j = std::lround(t / a.h);
            if (std::abs(j * a.h - t) > 1e-9 * std::max(1.0, t))
                throw Error(ErrorCode::ParseError, "time " + num(t) + " is not on the PI grid");
            out << num(t) << "," << num(tr.y[j]) << "," << num(a.h) << "\n";
        }
        return kExitOk;
    }
    if (a.method != "closed") throw CLI::ValidationError("--method", "expected closed or pi");

    if (pr.type == io::FdeProblem::Type::Multiterm) {
        const CompanionSystem cs = companion_from_multiterm(pr.multiterm);
        const auto Y = solve_poly_source(cs.system, {pr.poly, cs.e_N}, ts, tau);
        out << "t,y\n";
        for (size_t i = 0; i < ts.size(); ++i) out << num(ts[i]) << "," << num(Y[i](cs.readout)) << "\n";
    } else {
        const Eigen::Index n = pr.system.A.rows();
        const RVector dir = pr.poly.empty() ? RVector::Zero(n) : pr.direction;
        const auto Y = solve_poly_source(pr.system, {pr.poly, dir}, ts, tau);
        out << "t";
        for (Eigen::Index c = 0; c < n; ++c) out << ",y" << c + 1;
        out << "\n";
        for (size_t i = 0; i < ts.size(); ++i) {
            out << num(ts[i]);
            for (Eigen::Index c = 0; c < n; ++c) out << "," << num(Y[i](c));
            out << "\n";
        }
    }
    return kExitOk;
}

struct GramianArgs {
    std::string input, bc, kind = "ctrl";
    double alpha = 1.0, t = 1.0;
    int nodes = 64;
    std::optional<double> tau;
};

int run_gramian(const GramianArgs& a) {
    const double tau = a.tau ? *a.tau : default_tau();
    const CMatrix A = io::read_matrix_file(a.input);
    const CMatrix BC = io::read_matrix_file(a.bc);
    if (!A.imag().isZero(0.0) || !BC.imag().isZero(0.0))
        throw Error(ErrorCode::ParseError, "gramian expects real matrices");
    const GramianKind kind = a.kind == "obs" ? GramianKind::Observability : GramianKind::Controllability;
    const GramianResult g = gramian(kind, A.real(), BC.real(), a.alpha, a.t, a.nodes, tau);
    ordered_json j;
    std::vector<std::vector<std::string>> rows;
    for (Eigen::Index r = 0; r < g.G.rows(); ++r) {
        rows.emplace_back();
        for (Eigen::Index c = 0; c < g.G.cols(); ++c) rows.back().push_back(num(g.G(r, c)));
    }
    j["gramian"] = rows;
    j["min_eigenvalue"] = num(g.min_eigenvalue);
    j["positive_semidefinite"] = g.positive_semidefinite;
    j["positive_definite"] = g.positive_definite;
    j["richardson_delta"] = num(g.richardson_delta);
    print(j);
    return kExitOk;
}

void add_tau(CLI::App* app, std::optional<double>& tau) {
    app->add_option("--tau", tau, "target accuracy (default 1e-15 or $ML_TAU)")->check(CLI::PositiveNumber);
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Mittag-Leffler functions of scalar and matrix arguments"};
    app.require_subcommand(1);

    ScalarArgs ev;
    auto* eval = app.add_subcommand("eval", "k-th derivative of E_{alpha,beta}(z), default k = 0");
    eval->add_option("--alpha", ev.alpha)->required();
    eval->add_option("--beta", ev.beta)->required();
    eval->add_option("--z", ev.z, "complex argument, e.g. -2.35+1.71i")->required();
    eval->add_option("--k", ev.k)->check(CLI::NonNegativeNumber);
    add_tau(eval, ev.tau);

    ScalarArgs dv;
    auto* deriv = app.add_subcommand("deriv", "k-th derivative with a selectable method");
    deriv->add_option("--alpha", dv.alpha)->required();
    deriv->add_option("--beta", dv.beta)->required();
    deriv->add_option("--z", dv.z)->required();
    deriv->add_option("--k", dv.k)->required()->check(CLI::NonNegativeNumber);
    deriv->add_option("--method", dv.method, "auto|series|lt|prabhakar|djrbashian|balanced");
    add_tau(deriv, dv.tau);

    MatfunArgs mf;
    auto* matfun = app.add_subcommand("matfun", "E_{alpha,beta}(A) for a matrix file");
    matfun->add_option("--alpha", mf.alpha)->required();
    matfun->add_option("--beta", mf.beta)->required();
    matfun->add_option("--input", mf.input, "CSV or Matrix Market array file")->required();
    matfun->add_option("--output", mf.output, "CSV output (default stdout)");
    matfun->add_option("--delta", mf.delta, "eigenvalue clustering tolerance")->check(CLI::PositiveNumber);
    matfun->add_option("--reference", mf.reference, "reference matrix for --paper-metric");
    matfun->add_flag("--paper-metric", mf.paper_metric, "report ||E-F||_F / (1 + ||E||_F)");
    matfun->add_flag("--no-hermitian", mf.no_hermitian, "disable the Hermitian shortcut");
    add_tau(matfun, mf.tau);

    CondArgs cd;
    auto* cond = app.add_subcommand("cond", "condition number estimate of E_{alpha,beta} at A");
    cond->add_option("--alpha", cd.alpha)->required();
    cond->add_option("--beta", cd.beta)->required();
    cond->add_option("--input", cd.input)->required();
    cond->add_option("--probes", cd.probes)->check(CLI::PositiveNumber);
    cond->add_option("--norm", cd.norm)->check(CLI::IsMember({"one", "fro"}));
    add_tau(cond, cd.tau);

    FdeArgs fd;
    auto* fde = app.add_subcommand("fde", "solve a linear or multiterm FDE from a JSON problem file");
    fde->set_help_flag("--help", "Print this help message and exit");
    fde->add_option("--problem", fd.problem)->required();
    fde->add_option("--t", fd.t, "start:step:end or a comma separated list");
    fde->add_option("--method", fd.method)->check(CLI::IsMember({"closed", "pi"}));
    fde->add_option("--h", fd.h, "PI step size")->check(CLI::PositiveNumber);
    fde->add_option("--output", fd.output, "CSV output (default stdout)");
    add_tau(fde, fd.tau);

    GramianArgs gr;
    auto* gram = app.add_subcommand("gramian", "controllability or observability Gramian");
    gram->add_option("--input", gr.input, "system matrix A")->required();
    gram->add_option("--bc", gr.bc, "input matrix B or output matrix C")->required();
    gram->add_option("--alpha", gr.alpha)->required()->check(CLI::PositiveNumber);
    gram->add_option("--t", gr.t)->required()->check(CLI::PositiveNumber);
    gram->add_option("--kind", gr.kind)->check(CLI::IsMember({"ctrl", "obs"}));
    gram->add_option("--nodes", gr.nodes)->check(CLI::Range(2, 100000));
    add_tau(gram, gr.tau);

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? kExitOk : kExitUsage;
    }

    try {
        if (*eval) return run_scalar(ev);
        if (*deriv) return run_scalar(dv);
        if (*matfun) return run_matfun(mf);
        if (*cond) return run_cond(cd);
        if (*fde) return run_fde(fd);
        if (*gram) return run_gramian(gr);
    } catch (const CLI::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    } catch (const Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return kExitUsage;
    }
    return kExitUsage;
}
