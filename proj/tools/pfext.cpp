// Command-line front end: singularity analysis, monodromy, extension classes,
// report comparison, and corpus runs over problem files.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include <pfext/pfext.hpp>

namespace fs = std::filesystem;
using pfext::json;

namespace {

struct Options {
    pfext::NumericsConfig cfg;
    std::string out;
};

void add_common_flags(CLI::App* app, Options& opt) {
    app->add_option("--out", opt.out, "write the JSON report to this path (default: stdout)");
    app->add_option("--precision-target", opt.cfg.tail_target, "relative per-step series cutoff");
    app->add_option("--theta", opt.cfg.theta, "step radius as a fraction of the distance to the nearest pole");
    app->add_option("--taylor-order", opt.cfg.taylor_order_max, "maximum Taylor order per step");
    app->add_option("--clearance", opt.cfg.clearance, "absolute path clearance around singular points");
    app->add_option("--tol-class", opt.cfg.tol_class, "relative residual threshold for class verdicts");
    app->add_option("--seed", opt.cfg.seed, "seed recorded in reports (for randomized cross-checks)");
}

// Reports go to --out when given (human summary on stdout), otherwise the
// report itself is stdout and the summary moves to stderr.
void emit(const Options& opt, const json& report, const std::vector<std::string>& summary) {
    if (opt.out.empty()) {
        for (const auto& line : summary) std::cerr << line << "\n";
        std::cout << report.dump(2) << std::endl;
    } else {
        std::ofstream f(opt.out);
        if (!f) throw pfext::Error("cannot write report to " + opt.out);
        f << report.dump(2) << std::endl;
        for (const auto& line : summary) std::cout << line << "\n";
    }
}

std::string fmt(double x) {
    std::ostringstream os;
    os.precision(3);
    os << std::scientific << x;
    return os.str();
}

json with_timing(json report, std::chrono::steady_clock::time_point start) {
    const auto ms =
        std::chrono::duration_cast<std::chrono::microseconds>(std::chrono::steady_clock::now() - start).count() /
        1000.0;
    report["timings_ms"] = json{{"total", ms}};
    return report;
}

int cmd_analyze(const std::string& file, Options& opt) {
    const auto start = std::chrono::steady_clock::now();
    pfext::ProblemFile p = pfext::load_problem(file);
    pfext::NumericsConfig cfg = pfext::effective_config(p, opt.cfg);
    pfext::AnalyzeOutcome out = pfext::run_analyze(p, cfg);
    std::vector<std::string> summary;
    summary.push_back("problem: " + p.name + "  order " + std::to_string(out.op.order()));
    summary.push_back(std::string("fuchsian: ") + (out.profile.fuchsian ? "yes" : "no"));
    for (const auto& sp : out.profile.points) {
        std::string line = sp.at_infinity ? "  infinity" : "  " + pfext::format_complex(sp.location);
        line += sp.is_regular ? "  regular" : "  IRREGULAR";
        if (!sp.is_singular) line += " (ordinary)";
        line += ", exponents:";
        for (const auto& e : sp.exponents) line += " " + pfext::format_complex(e);
        summary.push_back(line);
    }
    emit(opt, with_timing(pfext::report_analyze(p, cfg, out), start), summary);
    return 0;
}

int cmd_monodromy(const std::string& file, Options& opt) {
    const auto start = std::chrono::steady_clock::now();
    pfext::ProblemFile p = pfext::load_problem(file);
    pfext::NumericsConfig cfg = pfext::effective_config(p, opt.cfg);
    pfext::MonodromyOutcome out = pfext::run_monodromy(p, cfg);
    std::vector<std::string> summary;
    summary.push_back("problem: " + p.name + "  dim " + std::to_string(out.rep.dim) + ", " +
                      std::to_string(out.rep.matrices.size()) + " generator loops, base " +
                      pfext::format_complex(out.plan.base_point));
    summary.push_back("product relation residual: " + fmt(out.relation.residual));
    bool consistent = true;
    for (const auto& e : out.consistency) consistent = consistent && e.pass;
    summary.push_back(std::string("local eigenvalue consistency: ") + (consistent ? "pass" : "FAIL"));
    summary.push_back(std::string("admissible: ") + (out.admissibility.admissible ? "yes" : "no"));
    emit(opt, with_timing(pfext::report_monodromy(p, cfg, out), start), summary);
    return 0;
}

int cmd_extension(const std::string& file, Options& opt) {
    const auto start = std::chrono::steady_clock::now();
    pfext::ProblemFile p = pfext::load_problem(file);
    pfext::NumericsConfig cfg = pfext::effective_config(p, opt.cfg);
    pfext::ExtensionOutcome out = pfext::run_extension(p, cfg);
    std::vector<std::string> summary;
    summary.push_back("problem: " + p.name + "  dim " + std::to_string(out.rep.dim) + ", " +
                      std::to_string(out.rep.matrices.size()) + " generator loops, base " +
                      pfext::format_complex(out.plan.base_point));
    if (out.zero_inhomogeneity) summary.push_back("inhomogeneity is zero; the extension splits");
    const char* classes = out.class_comparison.equal == pfext::ClassVerdict::Trivial
                              ? "classes equal"
                              : out.class_comparison.equal == pfext::ClassVerdict::Nontrivial
                                    ? "classes differ"
                                    : "classes inconclusive";
    summary.push_back(std::string("route agreement: ") + (out.vectorwise_pass ? "pass" : "FAIL") + " (" +
                      classes + ")");
    summary.push_back(std::string("extension class: ") + pfext::to_string(out.cls.triviality.verdict) +
                      "  (relative residual " + fmt(out.cls.triviality.residual_rel) + ")");
    emit(opt, with_timing(pfext::report_extension(p, cfg, out), start), summary);
    return out.cls.triviality.verdict == pfext::ClassVerdict::Inconclusive ||
                   out.class_comparison.equal == pfext::ClassVerdict::Inconclusive
               ? 5
               : 0;
}

int cmd_compare(const std::string& file_a, const std::string& file_b, Options& opt) {
    auto read = [](const std::string& path) {
        std::ifstream in(path);
        if (!in) throw pfext::ParseError("cannot open report: " + path);
        json j;
        try {
            in >> j;
        } catch (const std::exception& e) {
            throw pfext::ParseError("invalid JSON in " + path + ": " + e.what());
        }
        return j;
    };
    const auto start = std::chrono::steady_clock::now();
    pfext::CompareOutcome out = pfext::compare_reports(read(file_a), read(file_b), opt.cfg);
    std::vector<std::string> summary;
    summary.push_back(std::string("extension classes: ") +
                      (out.equal == pfext::ClassVerdict::Trivial
                           ? "equal"
                           : out.equal == pfext::ClassVerdict::Nontrivial ? "different" : "inconclusive"));
    emit(opt, with_timing(pfext::report_compare(opt.cfg, out, file_a, file_b), start), summary);
    if (out.equal == pfext::ClassVerdict::Trivial) return 0;
    if (out.equal == pfext::ClassVerdict::Nontrivial) return 1;
    return 5;
}

int cmd_corpus_run(const std::string& dir, Options& opt) {
    std::vector<fs::path> files;
    for (const auto& entry : fs::directory_iterator(dir))
        if (entry.path().extension() == ".json") files.push_back(entry.path());
    std::sort(files.begin(), files.end());
    if (files.empty()) throw pfext::ParseError("no problem files in " + dir);

    json summary_json = json::array();
    bool all_ok = true;
    for (const auto& file : files) {
        const auto start = std::chrono::steady_clock::now();
        pfext::ProblemFile p = pfext::load_problem(file.string());
        pfext::NumericsConfig cfg = pfext::effective_config(p, opt.cfg);
        std::string status = "ok";
        std::string detail;
        json report;
        try {
            pfext::AnalyzeOutcome an = pfext::run_analyze(p, cfg);
            if (p.expect == "non-fuchsian") {
                report = pfext::report_analyze(p, cfg, an);
                if (an.profile.fuchsian) {
                    status = "unexpected-fuchsian";
                    all_ok = false;
                } else {
                    status = "rejected-non-fuchsian (expected)";
                }
            } else if (p.inhomogeneity_text) {
                pfext::ExtensionOutcome out = pfext::run_extension(p, cfg);
                report = pfext::report_extension(p, cfg, out);
                detail = std::string("class ") + pfext::to_string(out.cls.triviality.verdict) + ", routes " +
                         (out.vectorwise_pass ? "agree" : "DISAGREE");
                if (!out.vectorwise_pass || out.class_comparison.equal != pfext::ClassVerdict::Trivial) {
                    status = "route-disagreement";
                    all_ok = false;
                } else if (p.expect_class &&
                           *p.expect_class != pfext::to_string(out.cls.triviality.verdict)) {
                    status = "unexpected-class";
                    all_ok = false;
                }
            } else {
                pfext::MonodromyOutcome out = pfext::run_monodromy(p, cfg);
                report = pfext::report_monodromy(p, cfg, out);
                bool consistent = true;
                for (const auto& e : out.consistency) consistent = consistent && e.pass;
                detail = "relation residual " + fmt(out.relation.residual);
                if (!consistent || out.relation.residual > 1e-6) {
                    status = "consistency-failure";
                    all_ok = false;
                }
            }
        } catch (const pfext::NonFuchsianInput& e) {
            status = std::string("rejected-non-fuchsian");
            detail = e.what();
            if (p.expect != "non-fuchsian") all_ok = false;
        } catch (const pfext::NumericError& e) {
            status = "numerical-failure";
            detail = e.what();
            all_ok = false;
        }
        report = with_timing(std::move(report), start);

        if (!opt.out.empty()) {
            fs::create_directories(opt.out);
            std::ofstream f(fs::path(opt.out) / (file.stem().string() + ".report.json"));
            f << report.dump(2) << std::endl;
        }
        std::cout << file.stem().string() << ": " << status << (detail.empty() ? "" : "  [" + detail + "]")
                  << "\n";
        summary_json.push_back(json{{"problem", file.stem().string()}, {"status", status}, {"detail", detail}});
    }
    if (!opt.out.empty()) {
        std::ofstream f(fs::path(opt.out) / "summary.json");
        f << json{{"engine", json{{"name", pfext::kEngineName}, {"version", pfext::kEngineVersion}}},
                  {"results", summary_json}}
                 .dump(2)
          << std::endl;
    }
    std::cout << (all_ok ? "corpus: all problems behaved as expected" : "corpus: FAILURES above") << "\n";
    return all_ok ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Fuchsian operators: monodromy and extension classes of inhomogeneous equations"};
    app.require_subcommand(1);
    Options opt;

    std::string file, file_b, corpus_dir = "corpus";

    CLI::App* analyze = app.add_subcommand("analyze", "singular points, exponents, Fuchsian check");
    analyze->add_option("file", file, "problem file (JSON)")->required();
    add_common_flags(analyze, opt);

    CLI::App* monodromy = app.add_subcommand("monodromy", "generator loops and monodromy matrices");
    monodromy->add_option("file", file, "problem file (JSON)")->required();
    add_common_flags(monodromy, opt);

    CLI::App* extension = app.add_subcommand("extension", "extension cocycle by two routes, with verdicts");
    extension->add_option("file", file, "problem file (JSON)")->required();
    add_common_flags(extension, opt);

    CLI::App* compare = app.add_subcommand("compare", "compare the extension classes of two reports");
    compare->add_option("report_a", file, "first report")->required();
    compare->add_option("report_b", file_b, "second report")->required();
    add_common_flags(compare, opt);

    CLI::App* corpus = app.add_subcommand("corpus", "operations on a directory of problem files");
    CLI::App* corpus_run = corpus->add_subcommand("run", "run every problem and check expectations");
    corpus_run->add_option("dir", corpus_dir, "directory of problem files (default: corpus)");
    add_common_flags(corpus_run, opt);
    corpus->require_subcommand(1);

    CLI11_PARSE(app, argc, argv);

    try {
        if (*analyze) return cmd_analyze(file, opt);
        if (*monodromy) return cmd_monodromy(file, opt);
        if (*extension) return cmd_extension(file, opt);
        if (*compare) return cmd_compare(file, file_b, opt);
        if (*corpus_run) return cmd_corpus_run(corpus_dir, opt);
    } catch (const pfext::ParseError& e) {
        std::cerr << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const pfext::NonFuchsianInput& e) {
        std::cerr << "refused: " << e.what() << "\n";
        return 3;
    } catch (const pfext::NumericError& e) {
        std::cerr << "numerical failure: " << e.what() << "\n";
        return 4;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 4;
    }
    return 0;
}
