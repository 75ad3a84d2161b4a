// pnf — exact normal forms of singular Poisson structures with semi-direct
// linear part. Subcommands: analyze, normalize, check.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>

#include "CLI11.hpp"
#include "pnf/io.hpp"

namespace fs = std::filesystem;
using namespace pnf;

namespace {

struct CommonOpts {
    int order = 0;  // 0: fall back to PNF_ORDER, then the file, then 6
    std::string out;
    bool timings = false;
};

int env_order() {
    const char* e = std::getenv("PNF_ORDER");
    if (!e || !*e) return 0;
    try {
        int v = std::stoi(e);
        return v > 0 ? v : 0;
    } catch (...) {
        return 0;
    }
}

int effective_order(const CommonOpts& c) { return c.order > 0 ? c.order : env_order(); }

void emit(const Json& report, const std::string& out) {
    std::string text = report.dump(2) + "\n";
    if (out.empty()) {
        std::cout << text;
    } else {
        std::ofstream f(out);
        if (!f) fail(ErrorKind::parse, "cannot write '" + out + "'");
        f << text;
    }
}

Json input_section(const ProblemFile& pf, const std::string& path) {
    Json j;
    j["path"] = path;
    j["digest"] = digest(serialize_problem(pf));
    j["n"] = pf.n;
    j["p"] = pf.p;
    j["order"] = pf.order;
    return j;
}

using Clock = std::chrono::steady_clock;

double ms_since(Clock::time_point t0) {
    return std::chrono::duration<double, std::milli>(Clock::now() - t0).count();
}

Json run_analyze(const std::string& path, int order, int kmax, int degree_bound) {
    ProblemFile pf = load_problem(path, order);
    PoissonJet p = pf.to_poisson();  // constructor checks: H5, linear part, Jacobi
    int bound = degree_bound > 0 ? degree_bound : pf.order;

    Json rep;
    rep["command"] = "analyze";
    rep["input"] = input_section(pf, path);
    rep["hypotheses"] = hypotheses_to_json(hypotheses_report(pf.family, bound));
    Json res;
    res["function"] =
        resonance_report_to_json(resonant_monomials(pf.family, ResonanceKind::function, bound));
    res["vector"] =
        resonance_report_to_json(resonant_monomials(pf.family, ResonanceKind::vector, bound));
    res["bivector"] =
        resonance_report_to_json(resonant_monomials(pf.family, ResonanceKind::bivector, bound));
    rep["resonant_monomials"] = std::move(res);
    rep["invariant_ring"] = invariant_ring_to_json(invariant_generators(pf.family, bound));
    if (omega_enumeration_size(pf.n, kmax) > 2e8)
        std::cerr << "pnf: warning: omega scan visits ~" << omega_enumeration_size(pf.n, kmax)
                  << " monomials\n";
    rep["omega"] = omega_to_json(omega_sequence(pf.family, kmax));
    return rep;
}

Json run_normalize(const std::string& path, int order, int theorem, bool force,
                   bool timings) {
    auto t0 = Clock::now();
    ProblemFile pf = load_problem(path, order);
    PoissonJet p = pf.to_poisson();

    Json rep;
    rep["command"] = "normalize";
    rep["theorem"] = theorem;
    rep["input"] = input_section(pf, path);

    PipelineOptions opt;
    opt.force = force;

    ReduceResult red = reduce_poisson(p);
    rep["reduce"] = Json{{"translation_field", red.translation_field + 1},
                         {"diffeo", diffeo_to_json(red.diffeo)},
                         {"checks", stage_checks_to_json(red.checks)}};

    Theorem1Result t1 = normalize_poisson_theorem1(red.out, opt);
    rep["hypotheses"] = hypotheses_to_json(t1.hypotheses);
    rep["nf_hypothesis"] =
        Json{{"pass", t1.nf_hypothesis.ok}, {"reason", t1.nf_hypothesis.reason}};
    rep["stages"] = stage_records_to_json(t1.stages);
    rep["theorem1_checks"] = stage_checks_to_json(t1.final_checks);
    if (!t1.a.empty()) rep["a_matrix"] = jet_matrix_to_json(t1.a);

    DiffeoJet total = compose(t1.diffeo, red.diffeo);
    PoissonJet out = t1.out;

    if (theorem == 2) {
        Theorem2Result t2 = normalize_rank2p_theorem2(t1.out, opt);
        rep["theorem2_stages"] = stage_records_to_json(t2.stages);
        rep["theorem2_checks"] = stage_checks_to_json(t2.final_checks);
        rep["invariant_ring"] = invariant_ring_to_json(t2.invariants);
        rep["b_matrix"] = jet_matrix_to_json(t2.b);
        total = compose(t2.diffeo, total);
        out = t2.out;
    }

    // End-to-end conjugacy across reduce + pipelines, re-verified.
    PolyVector replay = pushforward(total, p.bivector());
    bool conj = replay.equals_to_order(out.bivector().with_order(replay.order()),
                                       replay.order());
    rep["composite_diffeo"] = diffeo_to_json(total);
    rep["output"] = poisson_to_json(out);
    rep["end_to_end_conjugacy"] = conj;
    rep["verdict"] = conj ? "ok" : "failed";
    if (!conj) fail(ErrorKind::stage, "composite diffeo does not replay the input", "cli");
    if (timings) rep["timings_ms"] = Json{{"total", ms_since(t0)}};
    return rep;
}

Json run_check(const std::string& path_a, const std::string& path_b, int order,
               const std::string& diffeo_path) {
    ProblemFile a = load_problem(path_a, order);
    ProblemFile b = load_problem(path_b, order);
    if (a.n != b.n || a.p != b.p)
        fail(ErrorKind::parse, "the two problems have different (n, p)");
    if (a.order != b.order)
        std::cerr << "pnf: warning: order mismatch (" << a.order << " vs " << b.order
                  << "); comparing at the smaller\n";
    PoissonJet pa = a.to_poisson();
    PoissonJet pb = b.to_poisson();

    JetRing ring = pa.ring();
    DiffeoJet phi = DiffeoJet::identity(ring);
    if (!diffeo_path.empty()) {
        std::ifstream f(diffeo_path);
        if (!f) fail(ErrorKind::parse, "cannot open '" + diffeo_path + "'");
        std::stringstream ss;
        ss << f.rdbuf();
        phi = diffeo_from_json(Json::parse(ss.str(), nullptr, false), ring);
    }

    PolyVector moved = pushforward(phi, pa.bivector());
    int cmp_order = std::min(moved.order(), pb.order());

    Json rep;
    rep["command"] = "check";
    rep["input_a"] = input_section(a, path_a);
    rep["input_b"] = input_section(b, path_b);
    rep["compare_order"] = cmp_order;

    Json diff = nullptr;
    const int nv = ring.nvars();
    for (int i = 0; i < nv && diff.is_null(); ++i)
        for (int j = i + 1; j < nv && diff.is_null(); ++j) {
            Jet ca = moved.coefficient({i, j});
            Jet cb = pb.bivector().coefficient({i, j});
            if (ca.equals_to_order(cb, cmp_order)) continue;
            for_each_monomial_up_to(nv, 0, cmp_order, [&](const MultiIndex& q) {
                if (!diff.is_null()) return;
                Scalar va = ca.coeff(q), vb = cb.coeff(q);
                if (va != vb)
                    diff = Json{{"slot", {i + 1, j + 1}},
                                {"monomial", q.exponents()},
                                {"lhs", va.str()},
                                {"rhs", vb.str()}};
            });
        }
    rep["pass"] = diff.is_null();
    rep["first_difference"] = diff;
    return rep;
}

std::vector<std::string> batch_files(const std::string& dir) {
    std::vector<std::string> files;
    for (const auto& e : fs::directory_iterator(dir))
        if (e.is_regular_file() && e.path().extension() == ".json")
            files.push_back(e.path().string());
    std::sort(files.begin(), files.end());
    return files;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"exact normal forms of singular Poisson structures"};
    app.require_subcommand(1);

    CommonOpts copt;
    std::string file, file_b, diffeo_path, batch_dir, out_dir;
    int kmax = 3, degree_bound = 0, theorem = 1;
    bool force = false;

    CLI::App* an = app.add_subcommand("analyze", "resonances, hypotheses, invariants, omega");
    an->add_option("file", file, "problem file");
    an->add_option("--order", copt.order, "truncation order override");
    an->add_option("--kmax", kmax, "omega_k depth");
    an->add_option("--degree-bound", degree_bound, "resonance search bound (default: order)");
    an->add_option("--out", copt.out, "write the report here");
    an->add_option("--batch", batch_dir, "process every .json in a directory");
    an->add_option("--out-dir", out_dir, "per-file reports for batch mode");
    an->add_flag("--timings", copt.timings, "include timings (breaks byte-reproducibility)");

    CLI::App* no = app.add_subcommand("normalize", "run the normalization pipelines");
    no->add_option("file", file, "problem file");
    no->add_option("--order", copt.order, "truncation order override");
    no->add_option("--theorem", theorem, "1: resonant form; 2: rank-2p form")
        ->check(CLI::IsMember({1, 2}));
    no->add_flag("--force", force, "continue despite failed hypotheses");
    no->add_option("--out", copt.out, "write the report here");
    no->add_option("--batch", batch_dir, "process every .json in a directory");
    no->add_option("--out-dir", out_dir, "per-file reports for batch mode");
    no->add_flag("--timings", copt.timings, "include timings (breaks byte-reproducibility)");

    CLI::App* ch = app.add_subcommand("check", "verify a (claimed) conjugacy between two files");
    ch->add_option("file_a", file, "first problem")->required();
    ch->add_option("file_b", file_b, "second problem")->required();
    ch->add_option("--order", copt.order, "truncation order override");
    ch->add_option("--diffeo", diffeo_path, "serialized coordinate change to apply to A");
    ch->add_option("--out", copt.out, "write the report here");

    CLI11_PARSE(app, argc, argv);

    try {
        int order = effective_order(copt);
        if (an->parsed()) {
            if (!batch_dir.empty()) {
                if (out_dir.empty())
                    fail(ErrorKind::parse, "--batch requires --out-dir");
                fs::create_directories(out_dir);
                auto files = batch_files(batch_dir);
                int failures = 0;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
                for (std::size_t k = 0; k < files.size(); ++k) {
                    try {
                        Json rep = run_analyze(files[k], order, kmax, degree_bound);
                        emit(rep, (fs::path(out_dir) /
                                   fs::path(files[k]).filename().replace_extension(
                                       ".report.json"))
                                      .string());
                    } catch (const Error& e) {
#ifdef _OPENMP
#pragma omp critical
#endif
                        {
                            std::cerr << "pnf: " << files[k] << ": " << e.what() << "\n";
                            ++failures;
                        }
                    }
                }
                return failures ? 5 : 0;
            }
            if (file.empty()) fail(ErrorKind::parse, "missing problem file");
            auto t0 = Clock::now();
            Json rep = run_analyze(file, order, kmax, degree_bound);
            if (copt.timings) rep["timings_ms"] = Json{{"total", ms_since(t0)}};
            emit(rep, copt.out);
        } else if (no->parsed()) {
            if (!batch_dir.empty()) {
                if (out_dir.empty())
                    fail(ErrorKind::parse, "--batch requires --out-dir");
                fs::create_directories(out_dir);
                auto files = batch_files(batch_dir);
                int failures = 0;
#ifdef _OPENMP
#pragma omp parallel for schedule(dynamic)
#endif
                for (std::size_t k = 0; k < files.size(); ++k) {
                    try {
                        Json rep =
                            run_normalize(files[k], order, theorem, force, copt.timings);
                        emit(rep, (fs::path(out_dir) /
                                   fs::path(files[k]).filename().replace_extension(
                                       ".report.json"))
                                      .string());
                    } catch (const Error& e) {
#ifdef _OPENMP
#pragma omp critical
#endif
                        {
                            std::cerr << "pnf: " << files[k] << ": " << e.what() << "\n";
                            ++failures;
                        }
                    }
                }
                return failures ? 5 : 0;
            }
            if (file.empty()) fail(ErrorKind::parse, "missing problem file");
            emit(run_normalize(file, order, theorem, force, copt.timings), copt.out);
        } else if (ch->parsed()) {
            Json rep = run_check(file, file_b, order, diffeo_path);
            emit(rep, copt.out);
            if (!rep["pass"].get<bool>()) return 1;
        }
    } catch (const Error& e) {
        std::cerr << "pnf: error: " << e.what() << "\n";
        return e.exit_code();
    } catch (const std::exception& e) {
        std::cerr << "pnf: unexpected error: " << e.what() << "\n";
        return 70;
    }
    return 0;
}
