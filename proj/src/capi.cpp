#include "modlie/modlie.h"

#include <cstring>
#include <fstream>
#include <map>
#include <memory>
#include <optional>
#include <sstream>
#include <string>

#include "modlie/catalog.hpp"
#include "modlie/divided_power.hpp"
#include "modlie/hamiltonian.hpp"
#include "modlie/report.hpp"
#include "modlie/tables.hpp"

struct modlie_algebra {
    std::optional<modlie::LieAlgebra> plain;
    std::shared_ptr<modlie::HamiltonianAlgebra> ham;
    std::map<std::string, std::string> meta;
    std::string warning;

    const modlie::LieAlgebra& algebra() const { return ham ? ham->algebra() : *plain; }
};

struct modlie_report {
    modlie::OutReport report;
};

namespace {

thread_local std::string g_last_error;

modlie_status status_of(modlie::ErrorCode c) {
    using modlie::ErrorCode;
    switch (c) {
        case ErrorCode::Validation: return MODLIE_ERR_VALIDATION;
        case ErrorCode::ResourceLimit: return MODLIE_ERR_RESOURCE_LIMIT;
        case ErrorCode::Parse: return MODLIE_ERR_PARSE;
        case ErrorCode::Io: return MODLIE_ERR_IO;
        case ErrorCode::DegenerateAlgebra: return MODLIE_ERR_DEGENERATE;
        default: return MODLIE_ERR_INVALID_ARGUMENT;
    }
}

template <class F>
modlie_status guarded(F&& f) {
    try {
        g_last_error.clear();
        return f();
    } catch (const modlie::Error& e) {
        g_last_error = e.what();
        return status_of(e.code());
    } catch (const std::bad_alloc&) {
        g_last_error = "out of memory";
        return MODLIE_ERR_RESOURCE_LIMIT;
    } catch (const std::exception& e) {
        g_last_error = e.what();
        return MODLIE_ERR_INTERNAL;
    }
}

modlie_status fail(modlie_status s, std::string msg) {
    g_last_error = std::move(msg);
    return s;
}

char* dup_string(const std::string& s) {
    char* out = new char[s.size() + 1];
    std::memcpy(out, s.c_str(), s.size() + 1);
    return out;
}

std::string n_text(const std::vector<int>& n) {
    std::string s;
    for (std::size_t i = 0; i < n.size(); ++i) s += (i ? "," : "") + std::to_string(n[i]);
    return s;
}

std::vector<int> parse_n(const std::string& s) {
    std::vector<int> n;
    std::istringstream is(s);
    std::string tok;
    while (std::getline(is, tok, ',')) {
        try {
            n.push_back(std::stoi(tok));
        } catch (const std::exception&) {
            throw modlie::ParseError("bad exponent list '" + s + "'");
        }
    }
    return n;
}

std::unique_ptr<modlie_algebra> build(const modlie_family_spec& s) {
    using namespace modlie;
    if (!s.family) throw InvalidArgument("family is required (W, H2, sl, psl, br8 or model)");
    const std::string fam = s.family;
    std::vector<int> n(s.n, s.n + (s.n ? s.n_len : 0));
    auto a = std::make_unique<modlie_algebra>();
    a->meta["family"] = fam;
    if (fam == "W") {
        if (s.m < 1) throw InvalidArgument("W needs m >= 1");
        if (n.size() != s.m) throw InvalidArgument("W needs n with exactly m = " + std::to_string(s.m) + " entries");
        a->plain = witt_algebra(s.m, n, s.p);
        a->meta["m"] = std::to_string(s.m);
        a->meta["n"] = n_text(n);
    } else if (fam == "H2") {
        if (s.r < 1) throw InvalidArgument("H2 needs r >= 1");
        if (n.size() != 2 * s.r) throw InvalidArgument("H2 needs n with exactly 2r = " + std::to_string(2 * s.r) + " entries");
        a->ham = std::make_shared<HamiltonianAlgebra>(
            s.r, n, s.p, s.closed_form ? HamiltonianAlgebra::Method::ClosedForm : HamiltonianAlgebra::Method::Oracle);
        a->meta["r"] = std::to_string(s.r);
        a->meta["n"] = n_text(n);
    } else if (fam == "sl" || fam == "psl") {
        SlPsl built = sl_psl(s.size, s.p, fam == "psl");
        a->plain = std::move(built.algebra);
        if (built.warning) a->warning = *built.warning;
        a->meta["size"] = std::to_string(s.size);
    } else if (fam == "br8") {
        if (s.p != 3) throw InvalidArgument("br8 is defined over GF(3) only");
        a->plain = brown8();
    } else if (fam == "model") {
        if (s.p != 3) throw InvalidArgument("model algebras are defined over GF(3) only");
        ModelSpec spec{parse_model_kind(s.model ? s.model : ""), s.k, s.ideal_dim,
                       parse_model_action(s.action ? s.action : "id")};
        a->plain = model_out_algebra(spec);
        a->meta["model"] = to_string(spec.kind);
        a->meta["k"] = std::to_string(s.k);
        if (spec.kind == ModelKind::AlmostAbelian) {
            a->meta["ideal_dim"] = std::to_string(s.ideal_dim);
            a->meta["action"] = s.action ? s.action : "id";
        }
    } else {
        throw InvalidArgument("unknown family '" + fam + "' (expected W, H2, sl, psl, br8 or model)");
    }
    a->meta["p"] = std::to_string(s.p);
    return a;
}

std::unique_ptr<modlie_algebra> from_document(modlie::AlgebraDocument doc) {
    auto a = std::make_unique<modlie_algebra>();
    a->meta = std::move(doc.meta);
    // a saved Hamiltonian algebra regains its named derivations when the table is unchanged
    const auto fam = a->meta.find("family");
    if (fam != a->meta.end() && fam->second == "H2" && a->meta.count("r") && a->meta.count("n")) {
        try {
            auto h = std::make_shared<modlie::HamiltonianAlgebra>(std::stoul(a->meta["r"]), parse_n(a->meta["n"]),
                                                                 doc.algebra.prime());
            if (h->algebra().same_structure(doc.algebra)) a->ham = std::move(h);
        } catch (const std::exception&) {
            // metadata that does not describe a valid family is just ignored
        }
    }
    if (!a->ham) a->plain = std::move(doc.algebra);
    return a;
}

modlie::ReportOptions report_options(const modlie_algebra& a, const modlie_analysis_options& o) {
    modlie::ReportOptions ro;
    ro.der.threads = o.threads;
    if (o.mem_limit_bytes) ro.limits.memory_bytes = o.mem_limit_bytes;
    ro.limits.seconds = o.time_limit_seconds;
    ro.trials = o.trials;
    ro.seed = o.seed;
    ro.probe = o.probe != 0;
    ro.validate = o.validate != 0;
    const auto fam = a.meta.find("family");
    ro.family = fam == a.meta.end() ? "custom" : fam->second;
    for (const auto& [k, v] : a.meta)
        if (k != "family") ro.params.emplace_back(k, v);
    if (o.cache_dir && *o.cache_dir) {
        ro.der.cache_dir = std::filesystem::path(o.cache_dir);
        std::string key = ro.family;
        for (const auto& [k, v] : ro.params) key += ";" + k + "=" + v;
        if (ro.family == "custom") key += ";hash=" + std::to_string(modlie::structure_hash(a.algebra()));
        ro.der.cache_key = key;
    }
    ro.hamiltonian = a.ham.get();
    return ro;
}

}  // namespace

extern "C" {

void modlie_family_spec_init(modlie_family_spec* spec) {
    if (!spec) return;
    *spec = modlie_family_spec{};
    spec->p = 3;
    spec->r = 1;
    spec->m = 1;
    spec->size = 3;
    spec->model = "sl2_semi_v2";
    spec->action = "id";
    spec->ideal_dim = 1;
}

modlie_status modlie_algebra_build(const modlie_family_spec* spec, modlie_algebra** out) {
    if (!spec || !out) return fail(MODLIE_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out = build(*spec).release();
        return MODLIE_OK;
    });
}

modlie_status modlie_algebra_parse(const char* text, modlie_algebra** out) {
    if (!text || !out) return fail(MODLIE_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out = from_document(modlie::from_text(text)).release();
        return MODLIE_OK;
    });
}

modlie_status modlie_algebra_load(const char* path, modlie_algebra** out) {
    if (!path || !out) return fail(MODLIE_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        std::ifstream in(path);
        if (!in) throw modlie::IoError(std::string("cannot open ") + path);
        *out = from_document(modlie::read_algebra(in)).release();
        return MODLIE_OK;
    });
}

modlie_status modlie_algebra_save(const modlie_algebra* a, const char* path) {
    if (!a || !path) return fail(MODLIE_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        std::ofstream os(path, std::ios::trunc);
        if (!os) throw modlie::IoError(std::string("cannot write ") + path);
        modlie::write_algebra(os, a->algebra(), a->meta);
        os.flush();
        if (!os) throw modlie::IoError(std::string("write failed for ") + path);
        return MODLIE_OK;
    });
}

modlie_status modlie_algebra_to_text(const modlie_algebra* a, char** out) {
    if (!a || !out) return fail(MODLIE_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out = dup_string(modlie::to_text(a->algebra(), a->meta));
        return MODLIE_OK;
    });
}

size_t modlie_algebra_dim(const modlie_algebra* a) { return a ? a->algebra().dim() : 0; }

unsigned modlie_algebra_prime(const modlie_algebra* a) { return a ? a->algebra().prime() : 0; }

const char* modlie_algebra_warning(const modlie_algebra* a) {
    return a && !a->warning.empty() ? a->warning.c_str() : nullptr;
}

modlie_status modlie_algebra_validate(const modlie_algebra* a, size_t* violations) {
    if (!a) return fail(MODLIE_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        const auto& l = a->algebra();
        const auto bad = modlie::validate_lie(l);
        if (violations) *violations = bad.size();
        if (bad.empty()) return MODLIE_OK;
        const auto& v = bad.front();
        return fail(MODLIE_ERR_VALIDATION, "Jacobi identity fails on (" + l.label(v.i) + ", " + l.label(v.j) + ", " +
                                               l.label(v.k) + "); " + std::to_string(bad.size()) + " violating triple(s)");
    });
}

void modlie_algebra_free(modlie_algebra* a) { delete a; }

void modlie_analysis_options_init(modlie_analysis_options* opts) {
    if (!opts) return;
    *opts = modlie_analysis_options{};
    opts->seed = modlie::kDefaultProbeSeed;
    opts->trials = modlie::kDefaultProbeTrials;
    opts->probe = 1;
    opts->validate = 1;
}

modlie_status modlie_analyze(const modlie_algebra* a, const modlie_analysis_options* opts, modlie_report** out) {
    if (!a || !out) return fail(MODLIE_ERR_INVALID_ARGUMENT, "null argument");
    modlie_analysis_options defaults;
    modlie_analysis_options_init(&defaults);
    const modlie_analysis_options& o = opts ? *opts : defaults;
    return guarded([&] {
        auto r = std::make_unique<modlie_report>();
        r->report = modlie::zassenhaus_report(a->algebra(), report_options(*a, o));
        if (!r->report.complete) g_last_error = r->report.incomplete_reason;
        *out = r.release();
        return MODLIE_OK;
    });
}

int modlie_report_complete(const modlie_report* r) { return r && r->report.complete; }

const char* modlie_report_incomplete_reason(const modlie_report* r) {
    return r ? r->report.incomplete_reason.c_str() : "";
}

int modlie_report_checks_passed(const modlie_report* r) { return r && r->report.checks_passed(); }

int modlie_report_solvable(const modlie_report* r) { return r && r->report.solvable; }

void modlie_report_dims(const modlie_report* r, size_t* g, size_t* der, size_t* inn, size_t* out) {
    if (!r) return;
    if (g) *g = r->report.dim_g;
    if (der) *der = r->report.dim_der;
    if (inn) *inn = r->report.dim_inn;
    if (out) *out = r->report.dim_out;
}

modlie_status modlie_report_render(const modlie_report* r, modlie_format fmt, int include_telemetry, char** out) {
    if (!r || !out) return fail(MODLIE_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out = dup_string(modlie::render(r->report, modlie::Format(fmt), include_telemetry != 0));
        return MODLIE_OK;
    });
}

void modlie_report_free(modlie_report* r) { delete r; }

void modlie_reproduce_options_init(modlie_reproduce_options* opts) {
    if (!opts) return;
    *opts = modlie_reproduce_options{};
    modlie_analysis_options_init(&opts->analysis);
    opts->include_telemetry = 1;
}

modlie_status modlie_reproduce(const char* table, const modlie_reproduce_options* opts, modlie_format fmt, char** out,
                               int* any_fail) {
    if (!table || !out) return fail(MODLIE_ERR_INVALID_ARGUMENT, "null argument");
    modlie_reproduce_options defaults;
    modlie_reproduce_options_init(&defaults);
    const modlie_reproduce_options& o = opts ? *opts : defaults;
    return guarded([&] {
        modlie::ReproduceOptions ro;
        ro.include_large = o.include_large != 0;
        ro.der.threads = o.analysis.threads;
        if (o.analysis.mem_limit_bytes) ro.limits.memory_bytes = o.analysis.mem_limit_bytes;
        ro.limits.seconds = o.analysis.time_limit_seconds;
        ro.trials = o.analysis.trials;
        ro.seed = o.analysis.seed;
        const auto result = modlie::reproduce(modlie::parse_table(table), ro);
        if (any_fail) *any_fail = result.any_fail();
        *out = dup_string(modlie::render(result, modlie::Format(fmt), o.include_telemetry != 0));
        return MODLIE_OK;
    });
}

modlie_status modlie_parse_format(const char* name, modlie_format* out) {
    if (!name || !out) return fail(MODLIE_ERR_INVALID_ARGUMENT, "null argument");
    return guarded([&] {
        *out = modlie_format(modlie::parse_format(name));
        return MODLIE_OK;
    });
}

void modlie_string_free(char* s) { delete[] s; }

const char* modlie_version(void) { return modlie::kCodeVersion; }

const char* modlie_last_error(void) { return g_last_error.c_str(); }

}  // extern "C"
