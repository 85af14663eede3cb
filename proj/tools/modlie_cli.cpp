// Command-line front end. Talks to the library only through the C interface.
#include <cstdio>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "modlie/modlie.h"

namespace {

enum Exit { kOk = 0, kUsage = 1, kValidation = 2, kResource = 3, kReproduceFail = 4, kIo = 5 };

int exit_code(modlie_status s) {
    switch (s) {
        case MODLIE_OK: return kOk;
        case MODLIE_ERR_VALIDATION: return kValidation;
        case MODLIE_ERR_RESOURCE_LIMIT: return kResource;
        case MODLIE_ERR_PARSE:
        case MODLIE_ERR_IO: return kIo;
        default: return kUsage;
    }
}

int report_error(modlie_status s, const std::string& context) {
    std::cerr << "modlie " << context << ": " << modlie_last_error() << '\n';
    return exit_code(s);
}

struct AlgebraDeleter {
    void operator()(modlie_algebra* a) const { modlie_algebra_free(a); }
};
struct ReportDeleter {
    void operator()(modlie_report* r) const { modlie_report_free(r); }
};
using AlgebraPtr = std::unique_ptr<modlie_algebra, AlgebraDeleter>;
using ReportPtr = std::unique_ptr<modlie_report, ReportDeleter>;

std::string take(char* s) {
    std::string out = s ? s : "";
    modlie_string_free(s);
    return out;
}

struct FamilyArgs {
    std::string family;
    unsigned p = 3;
    unsigned r = 1;
    unsigned m = 1;
    std::string n;
    std::string model = "sl2_semi_v2";
    std::string action = "id";
    unsigned k = 0;
    unsigned ideal_dim = 1;
    bool closed_form = false;
};

struct AnalysisArgs {
    std::string format;  // empty: json for analyze, text for reproduce
    std::uint64_t seed = 0;
    std::size_t trials = 0;
    unsigned threads = 0;
    std::uint64_t mem_limit = 0;
    double time_limit = 0;
    std::string cache_dir;
    bool no_telemetry = false;
};

void add_family_options(CLI::App* cmd, FamilyArgs& f) {
    cmd->add_option("--family", f.family, "W, H2, sl, psl, br8 or model")->envname("MODLIE_FAMILY");
    cmd->add_option("--p", f.p, "field characteristic, a prime in [2, 251]")->envname("MODLIE_P");
    cmd->add_option("--r", f.r, "H2: half the number of variables")->envname("MODLIE_R");
    cmd->add_option("--m", f.m, "W: number of variables")->envname("MODLIE_M");
    cmd->add_option("--n", f.n, "comma list of heights (W, H2) or the matrix size (sl, psl)")->envname("MODLIE_N");
    cmd->add_option("--model", f.model, "model: sl2_semi_v2, h3_rtimes_line or almost_abelian")->envname("MODLIE_MODEL");
    cmd->add_option("--action", f.action, "model almost_abelian: id or flip")->envname("MODLIE_ACTION");
    cmd->add_option("--k", f.k, "model: number of extra abelian summands")->envname("MODLIE_K");
    cmd->add_option("--ideal-dim", f.ideal_dim, "model almost_abelian: dimension of the abelian ideal")
        ->envname("MODLIE_IDEAL_DIM");
    cmd->add_flag("--closed-form", f.closed_form, "H2 with r=1: closed-form structure constants");
}

void add_resource_options(CLI::App* cmd, AnalysisArgs& a) {
    cmd->add_option("--threads", a.threads, "worker threads (0: all cores)")->envname("MODLIE_THREADS");
    cmd->add_option("--mem-limit", a.mem_limit, "memory ceiling, e.g. 8GB (default 8 GiB)")
        ->transform(CLI::AsSizeValue(false))
        ->envname("MODLIE_MEM_LIMIT");
    cmd->add_option("--time-limit", a.time_limit, "wall-clock ceiling in seconds (0: none)")->envname("MODLIE_TIME_LIMIT");
    cmd->add_option("--format", a.format, "json, csv or text")->envname("MODLIE_FORMAT");
    cmd->add_option("--seed", a.seed, "seed of the simplicity probe")->envname("MODLIE_SEED");
    cmd->add_option("--trials", a.trials, "random spin-ups of the simplicity probe")->envname("MODLIE_TRIALS");
    cmd->add_flag("--no-telemetry", a.no_telemetry, "omit timing and memory fields");
}

std::vector<unsigned> parse_list(const std::string& s) {
    std::vector<unsigned> out;
    std::stringstream ss(s);
    std::string tok;
    while (std::getline(ss, tok, ',')) {
        std::size_t used = 0;
        const unsigned long v = std::stoul(tok, &used);
        if (used != tok.size()) throw std::invalid_argument(tok);
        out.push_back(unsigned(v));
    }
    return out;
}

modlie_status build_algebra(const FamilyArgs& f, AlgebraPtr& out) {
    modlie_family_spec spec;
    modlie_family_spec_init(&spec);
    spec.family = f.family.c_str();
    spec.p = f.p;
    spec.r = f.r;
    spec.m = f.m;
    spec.model = f.model.c_str();
    spec.action = f.action.c_str();
    spec.k = f.k;
    spec.ideal_dim = f.ideal_dim;
    spec.closed_form = f.closed_form;
    std::vector<unsigned> n;
    if (!f.n.empty()) {
        try {
            n = parse_list(f.n);
        } catch (const std::exception&) {
            std::cerr << "modlie: --n expects a comma list of positive integers, got '" << f.n << "'\n";
            return MODLIE_ERR_INVALID_ARGUMENT;
        }
    }
    if (f.family == "sl" || f.family == "psl") {
        if (n.size() != 1) {
            std::cerr << "modlie: sl/psl need --n <size> with size >= 2\n";
            return MODLIE_ERR_INVALID_ARGUMENT;
        }
        spec.size = n[0];
    } else {
        spec.n = n.data();
        spec.n_len = n.size();
    }
    modlie_algebra* a = nullptr;
    const modlie_status s = modlie_algebra_build(&spec, &a);
    out.reset(a);
    if (s != MODLIE_OK) std::cerr << "modlie build: " << modlie_last_error() << '\n';
    if (const char* w = out ? modlie_algebra_warning(out.get()) : nullptr) std::cerr << "warning: " << w << '\n';
    return s;
}

modlie_analysis_options analysis_options(const AnalysisArgs& a) {
    modlie_analysis_options o;
    modlie_analysis_options_init(&o);
    o.threads = a.threads;
    o.mem_limit_bytes = a.mem_limit;
    o.time_limit_seconds = a.time_limit;
    o.cache_dir = a.cache_dir.empty() ? nullptr : a.cache_dir.c_str();
    if (a.seed) o.seed = a.seed;
    if (a.trials) o.trials = a.trials;
    return o;
}

int write_output(const std::string& text, const std::string& path) {
    if (path.empty() || path == "-") {
        std::cout << text;
        return kOk;
    }
    std::FILE* f = std::fopen(path.c_str(), "wb");
    if (!f || std::fwrite(text.data(), 1, text.size(), f) != text.size() || std::fclose(f) != 0) {
        std::cerr << "modlie: cannot write " << path << '\n';
        return kIo;
    }
    return kOk;
}

int cmd_build(const FamilyArgs& f, const std::string& output) {
    if (f.family.empty()) {
        std::cerr << "modlie build: --family is required\n";
        return kUsage;
    }
    AlgebraPtr a;
    if (const auto s = build_algebra(f, a); s != MODLIE_OK) return exit_code(s);
    size_t violations = 0;
    const auto v = modlie_algebra_validate(a.get(), &violations);
    if (output.empty() || output == "-") {
        char* text = nullptr;
        if (const auto s = modlie_algebra_to_text(a.get(), &text); s != MODLIE_OK) return report_error(s, "build");
        std::cout << take(text);
    } else if (const auto s = modlie_algebra_save(a.get(), output.c_str()); s != MODLIE_OK) {
        return report_error(s, "build");
    }
    auto& status = (output.empty() || output == "-") ? std::cerr : std::cout;
    status << "dim " << modlie_algebra_dim(a.get()) << ", p " << modlie_algebra_prime(a.get()) << ", Jacobi "
           << (v == MODLIE_OK ? "ok" : "FAILED") << '\n';
    if (v != MODLIE_OK) return report_error(v, "build");
    return kOk;
}

int cmd_analyze(const FamilyArgs& f, const AnalysisArgs& args, const std::string& input, const std::string& output) {
    modlie_format fmt;
    if (const auto s = modlie_parse_format(args.format.empty() ? "json" : args.format.c_str(), &fmt); s != MODLIE_OK)
        return report_error(s, "analyze");
    AlgebraPtr a;
    if (!input.empty()) {
        modlie_algebra* raw = nullptr;
        const auto s = modlie_algebra_load(input.c_str(), &raw);
        a.reset(raw);
        if (s != MODLIE_OK) return report_error(s, "analyze");
    } else if (!f.family.empty()) {
        if (const auto s = build_algebra(f, a); s != MODLIE_OK) return exit_code(s);
    } else {
        std::cerr << "modlie analyze: give --input FILE or --family with its parameters\n";
        return kUsage;
    }
    const modlie_analysis_options o = analysis_options(args);
    modlie_report* raw = nullptr;
    const auto s = modlie_analyze(a.get(), &o, &raw);
    ReportPtr rep(raw);
    if (s != MODLIE_OK) return report_error(s, "analyze");
    char* text = nullptr;
    if (const auto rs = modlie_report_render(rep.get(), fmt, !args.no_telemetry, &text); rs != MODLIE_OK)
        return report_error(rs, "analyze");
    if (const int w = write_output(take(text), output); w != kOk) return w;
    if (!modlie_report_complete(rep.get())) {
        std::cerr << "modlie analyze: resource ceiling reached, report is partial: " << modlie_report_incomplete_reason(rep.get()) << '\n';
        return kResource;
    }
    return kOk;
}

int cmd_reproduce(const std::string& table, const AnalysisArgs& args, bool include_large, const std::string& output) {
    modlie_format fmt;
    if (const auto s = modlie_parse_format(args.format.empty() ? "text" : args.format.c_str(), &fmt); s != MODLIE_OK)
        return report_error(s, "reproduce");
    modlie_reproduce_options o;
    modlie_reproduce_options_init(&o);
    o.analysis = analysis_options(args);
    o.include_large = include_large;
    o.include_telemetry = !args.no_telemetry;
    char* text = nullptr;
    int any_fail = 0;
    if (const auto s = modlie_reproduce(table.c_str(), &o, fmt, &text, &any_fail); s != MODLIE_OK)
        return report_error(s, "reproduce");
    if (const int w = write_output(take(text), output); w != kOk) return w;
    return any_fail ? kReproduceFail : kOk;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"modlie: derivations and outer derivations of modular Lie algebras"};
    app.set_version_flag("--version", std::string(modlie_version()));
    app.require_subcommand(1);

    FamilyArgs fam;
    AnalysisArgs ana;
    std::string output, input, table;
    bool include_large = false;

    auto* build = app.add_subcommand("build", "construct an algebra and write it in the text format");
    add_family_options(build, fam);
    build->add_option("-o,--output", output, "output file (default: stdout)");

    auto* analyze = app.add_subcommand("analyze", "compute Der, Inn and Out and report on Out");
    add_family_options(analyze, fam);
    add_resource_options(analyze, ana);
    analyze->add_option("--input", input, "algebra file in the text format");
    analyze->add_option("--cache-dir", ana.cache_dir, "directory for cached derivation bases")->envname("MODLIE_CACHE_DIR");
    analyze->add_option("-o,--output", output, "output file (default: stdout)");

    auto* repro = app.add_subcommand("reproduce", "recompute a reference table and compare cell by cell");
    repro->add_option("table", table, "cartan_survey, gap_series or newtype_survey")->required();
    add_resource_options(repro, ana);
    repro->add_flag("--include-large", include_large, "add the 241-dimensional row to gap_series")
        ->envname("MODLIE_INCLUDE_LARGE");
    repro->add_option("-o,--output", output, "output file (default: stdout)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kUsage;
    }
    if (build->parsed()) return cmd_build(fam, output);
    if (analyze->parsed()) return cmd_analyze(fam, ana, input, output);
    return cmd_reproduce(table, ana, include_large, output);
}
