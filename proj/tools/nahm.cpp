// Command-line front end: info | solve | verify | ratmap | boundary.
//
// Exit codes: 0 success, 2 validation error, 3 no convergence, 4 I/O error.
// Diagnostics go to stderr as single-line JSON records.

#include <algorithm>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <iostream>
#include <random>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "nahm/ratmap.hpp"
#include "nahm/serialize.hpp"
#include "nahm/solver.hpp"

using nlohmann::json;

namespace {

void diagnostic(const std::string& kind, const std::string& message) {
    std::cerr << json{{"error", kind}, {"message", message}}.dump() << "\n";
}

nahm::MonopoleType load_type(const std::string& arg) {
    if (!arg.empty() && arg.front() == '{')
        return nahm::type_from_json(json::parse(arg));
    return nahm::read_type(arg);
}

void emit(const json& doc, const std::string& out_path) {
    if (out_path.empty()) {
        std::cout << doc.dump(2) << "\n";
        return;
    }
    std::ofstream out(out_path);
    if (!out) throw nahm::IoError("cannot open " + out_path + " for writing");
    out << doc.dump(2) << "\n";
    if (!out) throw nahm::IoError("write to " + out_path + " failed");
}

json info_doc(const nahm::MonopoleType& t) {
    json doc;
    doc["N"] = t.n();
    doc["kappa"] = t.kappa();
    doc["c2"] = t.c2();
    const nahm::WeightProfile prof = weight_profile(t);
    doc["chi"] = json::object();
    for (std::size_t i = 0; i < prof.chi.size(); ++i)
        doc["chi"][std::to_string(prof.lo2 + 2 * static_cast<long>(i))] = prof.chi[i];
    const nahm::SiteLayout lay = site_dims(t);
    json beta = json::object(), gamma = json::object();
    for (const auto& [site, sh] : lay.beta)
        beta[std::to_string(site)] = {sh.first, sh.second};
    for (const auto& [site, sh] : lay.gamma)
        gamma[std::to_string(site)] = {sh.first, sh.second};
    doc["site_dims"] = {{"beta", beta}, {"gamma", gamma}};
    doc["kfrak"] = json::object();
    for (int i = 1; i <= t.n() - 1; ++i)
        doc["kfrak"][std::to_string(i)] = nahm::kfrak(t, i);
    return doc;
}

json stability_doc(const nahm::StabilityReport& st) {
    json doc;
    doc["ok"] = st.ok;
    doc["failure"] = st.failure;
    doc["gamma_min_singular"] = json::object();
    for (const auto& [site, v] : st.gamma_min_singular)
        doc["gamma_min_singular"][std::to_string(site)] = v;
    doc["krylov_rank"] = json::object();
    for (const auto& [i, r] : st.krylov_rank)
        doc["krylov_rank"][std::to_string(i)] =
            json{{"rank", r}, {"required", st.krylov_required.at(i)}};
    return doc;
}

json verify_doc(const nahm::NahmSolution& s, unsigned long seed) {
    json doc;
    doc["total_residual"] = total_residual(s);
    json cres = json::object(), rres = json::object();
    for (const auto& [site, m] : complex_residual(s)) cres[std::to_string(site)] = m.norm();
    for (const auto& [site, m] : real_residual(s)) rres[std::to_string(site)] = m.norm();
    doc["complex_residual_norms"] = cres;
    doc["real_residual_norms"] = rres;

    const nahm::ADHMData d = assemble(s);
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    double worst_equiv = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        const nahm::Complex c(gauss(rng), gauss(rng));
        const nahm::EquivarianceReport rep = equivariance_check(d, c);
        for (double dev : rep.deviation) worst_equiv = std::max(worst_equiv, dev);
    }
    doc["equivariance_deviation"] = worst_equiv;

    double worst_monad = 0.0;
    for (int trial = 0; trial < 10; ++trial) {
        nahm::ProjPoint x;
        for (auto& c : x) c = nahm::Complex(gauss(rng), gauss(rng));
        const nahm::MonadCheck chk = monad_check(d, x);
        worst_monad = std::max(worst_monad, chk.BA_norm / (chk.A_norm * chk.B_norm));
    }
    doc["monad_relative_BA_norm"] = worst_monad;
    doc["stability"] = stability_doc(nahm::check_stability(s));
    return doc;
}

int dispatch(const std::string& cmd, const std::string& type_arg, const std::string& in_path,
             const std::string& out_path, unsigned long seed, double tol, int restarts,
             double h_re, double h_im, int grid, int samples) {
    if (cmd == "info") {
        emit(info_doc(load_type(type_arg)), out_path);
        return 0;
    }
    if (cmd == "solve") {
        const nahm::MonopoleType t = load_type(type_arg);
        nahm::SolverOptions opts;
        opts.seed = seed;
        opts.tolerance = tol;
        opts.restarts = restarts;
        const auto [s, rep] = nahm::solve(t, opts);
        if (!out_path.empty()) nahm::write_solution(out_path, s);
        json doc{{"converged", rep.converged},
                 {"final_residual", rep.final_residual},
                 {"iterations", rep.iterations},
                 {"restart_index", rep.restart_index},
                 {"stability", stability_doc(rep.stability)}};
        std::cout << doc.dump(2) << "\n";
        if (!rep.converged) {
            diagnostic("NoConvergence", "best residual " + std::to_string(rep.final_residual));
            return 3;
        }
        return 0;
    }
    if (cmd == "verify") {
        const nahm::NahmSolution s = nahm::read_solution(in_path);
        emit(verify_doc(s, seed), out_path);
        return 0;
    }
    if (cmd == "ratmap") {
        const nahm::NahmSolution s = nahm::read_solution(in_path);
        const nahm::NormalizedSolution ns = normalize(s);
        const nahm::Complex h(h_re, h_im);
        std::ostringstream csv;
        csv.precision(17);
        std::mt19937_64 rng(seed);
        std::normal_distribution<double> gauss(0.0, 1.0);
        for (int k = 0; k < samples; ++k) {
            nahm::Complex x;
            nahm::FlagPoint f;
            for (int tries = 0;; ++tries) {
                x = nahm::Complex(gauss(rng), gauss(rng));
                try {
                    f = flag_at(ns, h, x);
                    break;
                } catch (const nahm::PoleAtX&) {
                    if (tries >= 100) throw;
                }
            }
            csv << x.real() << "," << x.imag();
            for (const nahm::Matrix& v : f.subspaces) {
                const Eigen::VectorXcd p = nahm::plucker(v);
                for (long r = 0; r < p.size(); ++r)
                    csv << "," << p(r).real() << "," << p(r).imag();
            }
            csv << "\n";
        }
        if (out_path.empty()) {
            std::cout << csv.str();
        } else {
            std::ofstream out(out_path);
            if (!out) throw nahm::IoError("cannot open " + out_path + " for writing");
            out << csv.str();
            if (!out) throw nahm::IoError("write to " + out_path + " failed");
        }
        return 0;
    }
    if (cmd == "boundary") {
        const nahm::NahmSolution s = nahm::read_solution(in_path);
        json doc;
        doc["chern"] = json::object();
        doc["curvature_sample"] = json::object();
        for (int i = 1; i <= s.type.n() - 1; ++i) {
            doc["chern"][std::to_string(i)] = nahm::chern_integral(s, i, grid);
            doc["curvature_sample"][std::to_string(i)] =
                nahm::curvature_density(s, i, nahm::Complex(0.3, 0.1), 1e-4);
        }
        emit(doc, out_path);
        return 0;
    }
    diagnostic("UsageError", "unknown command " + cmd);
    return 2;
}

} // namespace

int main(int argc, char** argv) {
    if (const char* env = std::getenv("NAHM_THREADS")) {
        const int n = std::atoi(env);
        if (n > 0) Eigen::setNbThreads(n);
    }

    CLI::App app{"Discrete Nahm equation toolkit for SU(N) hyperbolic monopoles"};
    app.require_subcommand(1);

    std::string type_arg, in_path, out_path;
    unsigned long seed = 1;
    double tol = 1e-20;
    int restarts = 5;
    double h_re = 1.0, h_im = 0.0;
    int grid = 48;
    int samples = 20;

    for (const char* name : {"info", "solve", "verify", "ratmap", "boundary"}) {
        CLI::App* sub = app.add_subcommand(name);
        sub->add_option("--type", type_arg, "type JSON file or inline JSON");
        sub->add_option("--in", in_path, "input solution file");
        sub->add_option("--out", out_path, "output file (default stdout)");
        sub->add_option("--seed", seed, "deterministic seed");
        sub->add_option("--tol", tol, "squared-residual tolerance");
        sub->add_option("--restarts", restarts, "solver restarts");
        sub->add_option("--h-re", h_re, "horosphere parameter, real part");
        sub->add_option("--h-im", h_im, "horosphere parameter, imaginary part");
        sub->add_option("--grid", grid, "curvature integration grid per chart");
        sub->add_option("--samples", samples, "number of x samples");
    }

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int rc = app.exit(e);
        return rc == 0 ? 0 : 2;
    }

    const std::string cmd = app.get_subcommands().front()->get_name();
    try {
        return dispatch(cmd, type_arg, in_path, out_path, seed, tol, restarts, h_re, h_im,
                        grid, samples);
    } catch (const nahm::IoError& e) {
        diagnostic("IoError", e.what());
        return 4;
    } catch (const nahm::ParseError& e) {
        diagnostic("ParseError", e.what());
        return 4;
    } catch (const nahm::NahmError& e) {
        diagnostic("ValidationError", e.what());
        return 2;
    } catch (const std::exception& e) {
        diagnostic("InternalError", e.what());
        return 2;
    }
}
