#include "modlie/report.hpp"

#include <algorithm>
#include <chrono>
#include <numeric>
#include <sstream>

#include "json.hpp"
#include "modlie/catalog.hpp"

namespace modlie {

using ojson = nlohmann::ordered_json;

bool OutReport::checks_passed() const {
    return std::all_of(generator_checks.begin(), generator_checks.end(), [](const GeneratorCheck& c) { return c.passed; });
}

// ---------------------------------------------------------------- named derivations

namespace {

int ipow(int b, int e) {
    int r = 1;
    while (e-- > 0) r *= b;
    return r;
}

class CheckList {
  public:
    CheckList(const HamiltonianAlgebra& g, const OutAlgebra& out) : g_(g), out_(out), f_(g.field()) {}

    void add(std::string name, bool ok, std::string detail = {}) {
        checks_.push_back({std::move(name), ok, std::move(detail)});
    }
    void equal(std::string name, const FpMatrix& a, const FpMatrix& b) {
        add(std::move(name), a == b, a == b ? "" : "matrices differ");
    }
    void derivation(const NamedMap& m) {
        const auto defect = leibniz_defect(g_.algebra(), m.map);
        add(m.name + " is a derivation", !defect,
            defect ? "fails on pair (" + g_.algebra().label(defect->i) + ", " + g_.algebra().label(defect->j) + ")" : "");
    }
    /// ad D_H(x^c) restricted from the enlarged algebra equals `m`.
    void restriction(const NamedMap& m, const std::vector<int>& c) {
        try {
            const FpMatrix ad = g_.restricted_adjoint(c);
            add(m.name + " = restricted ad D_H(" + monomial_label(c) + ")", ad == m.map, ad == m.map ? "" : "matrices differ");
        } catch (const Error& e) {
            add(m.name + " = restricted ad D_H(" + monomial_label(c) + ")", false, e.what());
        }
    }
    FpMatrix ad(const std::vector<int>& e) const { return g_.algebra().adjoint(g_.element(e)); }
    FpMatrix br(const FpMatrix& a, const FpMatrix& b) const { return commutator(f_, a, b); }
    FpMatrix mul(int s, const FpMatrix& a) const { return scaled(f_, a, f_.reduce(s)); }

    /// The classes of `maps` in Out are independent, i.e. their span meets Inn in 0.
    void independent_mod_inn(std::string name, const std::vector<NamedMap>& maps) {
        Echelon e(f_, out_.dim());
        try {
            for (const auto& m : maps) e.insert(to_sparse(out_.project(m.map)));
            add(std::move(name), e.rank() == maps.size(), "rank " + std::to_string(e.rank()) + " of " + std::to_string(maps.size()));
        } catch (const Error& ex) {
            add(std::move(name), false, ex.what());
        }
    }
    void matches_model(std::string name, const std::vector<NamedMap>& gens, const ModelSpec& spec) {
        try {
            const LieAlgebra s = out_in_generators(out_, gens);
            const bool ok = s.same_structure(model_out_algebra(spec));
            add(std::move(name), ok, ok ? "" : "structure constants differ");
        } catch (const Error& ex) {
            add(std::move(name), false, ex.what());
        }
    }
    /// [m, x] is inner for every x in `others`.
    void central_mod_inn(const NamedMap& m, const std::vector<NamedMap>& others) {
        std::string bad;
        try {
            for (const auto& x : others)
                if (!out_.is_inner(br(m.map, x.map))) bad += (bad.empty() ? "" : ", ") + x.name;
        } catch (const Error& ex) {
            bad = ex.what();
        }
        add(m.name + " is central in Out", bad.empty(), bad.empty() ? "" : "not inner against " + bad);
    }
    void count(std::string name, std::size_t got, std::size_t want) {
        add(std::move(name), got == want, "computed " + std::to_string(got) + ", expected " + std::to_string(want));
    }

    std::vector<GeneratorCheck> take() { return std::move(checks_); }

  private:
    const HamiltonianAlgebra& g_;
    const OutAlgebra& out_;
    const Field& f_;
    std::vector<GeneratorCheck> checks_;
};

void check_sl2_family(CheckList& c, const HamiltonianAlgebra& g, const DerivationAlgebra& der) {
    const int n = g.n()[1];
    const Sl2Triple t = sl2_triple(g);
    const NamedMap e{"E", t.e}, f{"F", t.f}, h{"H", t.h};
    for (const auto* m : {&e, &f, &h}) c.derivation(*m);
    c.restriction(f, {3, 0});
    c.equal("[E,F] = H", c.br(t.e, t.f), t.h);
    c.equal("[E,H] = E", c.br(t.e, t.h), t.e);
    c.equal("[F,H] = -F", c.br(t.f, t.h), c.mul(-1, t.f));
    c.independent_mod_inn("span(E,F,H) meets Inn in 0", {e, f, h});
    if (n < 2) return;

    const int top = ipow(3, n);
    const TranslationPair tp = translation_pair(g);
    const NamedMap v{"V", tp.v}, w{"W", tp.w};
    c.derivation(v);
    c.derivation(w);
    c.restriction(v, {0, top});
    c.restriction(w, {2, top - 1});
    c.equal("[E,W] = V", c.br(t.e, tp.w), tp.v);
    c.equal("[F,V] = W", c.br(t.f, tp.v), tp.w);
    c.equal("[H,V] = V", c.br(t.h, tp.v), tp.v);
    c.equal("[H,W] = 2W", c.br(t.h, tp.w), c.mul(2, tp.w));
    c.independent_mod_inn("span(E,F,H,V,W) meets Inn in 0", {e, f, h, v, w});
    c.count("dim Der = 3^(n+1)+n+2", der.dim(), std::size_t(ipow(3, n + 1) + n + 2));
    c.count("dim Out = n+4", der.dim() - der.inn().dim(), std::size_t(n + 4));

    std::vector<NamedMap> gens{e, f, h, v, w};
    for (int i = 1; i < n; ++i) {
        const int step = ipow(3, i);
        const NamedMap d{"d2^" + std::to_string(step), partial_power_map(g, 1, i)};
        c.derivation(d);
        c.equal("[" + d.name + ",V] = ad D_H(" + monomial_label({0, top - step}) + ")", c.br(d.map, tp.v),
                c.ad({0, top - step}));
        c.equal("[" + d.name + ",W] = ad D_H(" + monomial_label({2, top - step - 1}) + ")", c.br(d.map, tp.w),
                c.ad({2, top - step - 1}));
        gens.push_back(d);
    }
    for (std::size_t i = 5; i < gens.size(); ++i) c.central_mod_inn(gens[i], gens);
    c.matches_model("Out = sl2 ⋉ V(2) + F^" + std::to_string(n - 1) + " on (E,F,H,V,W,d2-powers)", gens,
                    {ModelKind::Sl2SemiV2, std::size_t(n - 1)});
}

void check_abcd_family(CheckList& c, const HamiltonianAlgebra& g, const DerivationAlgebra& der, const OutAlgebra& out) {
    const std::size_t r = g.r();
    const auto& tau = g.tau();
    const OutFamily fam = general_out_family(g);
    for (const auto& m : fam.all()) c.derivation(m);
    for (std::size_t i = 0; i < 2 * r; ++i) {
        std::vector<int> e(2 * r, 0);
        e[i] = tau[i] + 1;
        c.restriction(fam.a[i], e);
    }
    c.restriction(fam.b, tau);
    for (const auto& a : fam.a) c.equal("[" + a.name + ",C] = -" + a.name, c.br(a.map, fam.c.map), c.mul(-1, a.map));
    c.equal("[B,C] = " + std::to_string(2 * r - 1) + "B", c.br(fam.b.map, fam.c.map), c.mul(int(2 * r - 1), fam.b.map));
    const SigmaPrime sp{r};
    for (std::size_t i = 0; i < r; ++i) {
        const auto& ai = fam.a[i];
        const auto& aj = fam.a[sp.prime(i)];
        if (r == 1) {
            c.equal("[A1,A2] = B", c.br(ai.map, aj.map), fam.b.map);
        } else {
            std::vector<int> e(2 * r, 0);
            e[i] = tau[i];
            e[sp.prime(i)] = tau[sp.prime(i)];
            c.equal("[" + ai.name + "," + aj.name + "] = ad D_H(" + monomial_label(e) + ")", c.br(ai.map, aj.map), c.ad(e));
        }
    }
    for (std::size_t t = 0; t < fam.d.size(); ++t) {
        const auto [i, j] = fam.d_index[t];
        const int step = ipow(3, j);
        std::vector<int> ea(2 * r, 0);
        ea[i] = tau[i] - step + 1;
        std::vector<int> eb = tau;
        eb[i] -= step;
        const auto& d = fam.d[t];
        c.equal("[" + fam.a[i].name + "," + d.name + "] = -ad D_H(" + monomial_label(ea) + ")", c.br(fam.a[i].map, d.map),
                c.mul(-1, c.ad(ea)));
        c.equal("[B," + d.name + "] = -ad D_H(" + monomial_label(eb) + ")", c.br(fam.b.map, d.map), c.mul(-1, c.ad(eb)));
    }
    const int total = std::accumulate(g.n().begin(), g.n().end(), 0);
    c.count("dim Out = |n|+2", der.dim() - der.inn().dim(), std::size_t(total + 2));

    std::vector<NamedMap> gens = fam.a;
    ModelSpec spec;
    if (r == 1) {
        gens.push_back(fam.b);
        gens.push_back(fam.c);
        spec = {ModelKind::H3RtimesLine, std::size_t(total - 2)};
    } else if (r % 3 == 2) {
        // (2r-1) = 0 mod 3 makes B central
        gens.push_back(fam.c);
        gens.push_back(fam.b);
        spec = {ModelKind::AlmostAbelian, std::size_t(total) - 2 * r + 1, 2 * r, ModelAction::Identity};
    } else {
        gens.push_back(fam.b);
        gens.push_back(fam.c);
        spec = {ModelKind::AlmostAbelian, std::size_t(total) - 2 * r, 2 * r + 1,
                r % 3 == 0 ? ModelAction::Identity : ModelAction::FlipLast};
    }
    gens.insert(gens.end(), fam.d.begin(), fam.d.end());
    c.matches_model(std::string("Out matches ") + to_string(spec.kind) + " on (A,B,C,D)", gens, spec);

    if (out.lie()) {
        const auto len = derived_length(series_dims(derived_series(*out.lie())));
        const std::size_t want = r == 1 ? 3 : 2;
        c.add("Out derived length = " + std::to_string(want), len && *len == want,
              len ? "computed " + std::to_string(*len) : "Out is not solvable");
    }
}

}  // namespace

std::vector<GeneratorCheck> hamiltonian_generator_checks(const HamiltonianAlgebra& g, const DerivationAlgebra& der,
                                                         const OutAlgebra& out) {
    if (g.prime() != 3) return {};
    CheckList c(g, out);
    const auto& n = g.n();
    if (g.r() == 1 && n[0] == 1) check_sl2_family(c, g, der);
    if (g.r() > 1 || (g.r() == 1 && 1 < n[0] && n[0] <= n[1])) check_abcd_family(c, g, der, out);
    return c.take();
}

// ---------------------------------------------------------------- report

OutReport zassenhaus_report(const LieAlgebra& l, const ReportOptions& opts) {
    const auto t0 = std::chrono::steady_clock::now();
    OutReport r;
    r.family = opts.family;
    r.params = opts.params;
    r.p = l.prime();
    r.dim_g = l.dim();
    r.probe_trials = opts.trials;
    r.seed = opts.seed;

    if (opts.validate) {
        const auto bad = validate_lie(l);
        if (!bad.empty()) {
            const auto& v = bad.front();
            throw ValidationError("Jacobi identity fails on (" + l.label(v.i) + ", " + l.label(v.j) + ", " + l.label(v.k) +
                                  "); " + std::to_string(bad.size()) + " violating triple(s)");
        }
    }

    r.g_derived_series = series_dims(derived_series(l));
    ResourceGuard own(opts.limits);
    DerivationOptions dopts = opts.der;
    if (!dopts.guard) dopts.guard = &own;
    try {
        const DerivationAlgebra der = derivation_algebra(l, dopts);
        r.telemetry.threads = der.stats.threads;
        r.telemetry.blocks = der.stats.blocks;
        r.telemetry.equations = der.stats.equations;
        r.telemetry.cache_hit = der.stats.cache_hit;
        dopts.guard->check();
        const OutAlgebra out(der);
        r.dim_der = der.dim();
        r.dim_inn = der.inn().dim();
        r.dim_out = out.dim();
        r.out_derived_series = out.lie() ? series_dims(derived_series(*out.lie())) : std::vector<std::size_t>{0};
        r.solvable = is_solvable_series(r.out_derived_series);
        r.derived_length = derived_length(r.out_derived_series);
        if (opts.probe && out.lie()) r.simplicity = simplicity_probe(*out.lie(), opts.trials, opts.seed).verdict;
        if (opts.hamiltonian && opts.hamiltonian->algebra().same_structure(l))
            r.generator_checks = hamiltonian_generator_checks(*opts.hamiltonian, der, out);
    } catch (const ResourceLimitExceeded& e) {
        r.complete = false;
        r.incomplete_reason = e.what();
    }
    r.telemetry.seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    r.telemetry.peak_bytes = peak_rss_bytes();
    return r;
}

// ---------------------------------------------------------------- rendering

Format parse_format(const std::string& s) {
    if (s == "json") return Format::Json;
    if (s == "csv") return Format::Csv;
    if (s == "text") return Format::Text;
    throw InvalidArgument("unknown format '" + s + "' (expected json, csv or text)");
}

namespace {

ojson to_json(const OutReport& r, bool telemetry) {
    ojson j;
    j["schema_version"] = r.schema_version;
    j["family"] = r.family;
    ojson params = ojson::object();
    for (const auto& [k, v] : r.params) params[k] = v;
    j["params"] = params;
    j["p"] = r.p;
    j["dims"] = {{"g", r.dim_g}, {"der", r.dim_der}, {"inn", r.dim_inn}, {"out", r.dim_out}};
    j["g_derived_series"] = r.g_derived_series;
    j["out_derived_series"] = r.out_derived_series;
    j["solvable"] = r.solvable;
    j["derived_length"] = r.derived_length ? ojson(*r.derived_length) : ojson(nullptr);
    j["simplicity"] = to_string(r.simplicity);
    j["simplicity_scope"] = r.simplicity_scope;
    j["probe_trials"] = r.probe_trials;
    j["seed"] = r.seed;
    ojson checks = ojson::array();
    for (const auto& c : r.generator_checks) checks.push_back({{"name", c.name}, {"passed", c.passed}, {"detail", c.detail}});
    j["generator_checks"] = checks;
    j["complete"] = r.complete;
    j["incomplete_reason"] = r.incomplete_reason;
    j["code_version"] = r.code_version;
    j["complement_rule"] = r.complement_rule;
    if (telemetry)
        j["telemetry"] = {{"seconds", r.telemetry.seconds},   {"peak_bytes", r.telemetry.peak_bytes},
                          {"threads", r.telemetry.threads},   {"blocks", r.telemetry.blocks},
                          {"equations", r.telemetry.equations}, {"cache_hit", r.telemetry.cache_hit}};
    return j;
}

std::string join(const std::vector<std::size_t>& v, const char* sep) {
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i) s += (i ? sep : "") + std::to_string(v[i]);
    return s;
}

std::string params_string(const OutReport& r, const char* sep) {
    std::string s;
    for (const auto& [k, v] : r.params) s += (s.empty() ? "" : sep) + k + "=" + v;
    return s;
}

std::string csv_quote(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string q = "\"";
    for (char c : s) q += c == '"' ? std::string("\"\"") : std::string(1, c);
    return q + "\"";
}

Simplicity parse_simplicity(const std::string& s) {
    for (auto v : {Simplicity::NotSimple, Simplicity::ProbablySimple, Simplicity::Abelian, Simplicity::Skipped})
        if (s == to_string(v)) return v;
    throw ParseError("unknown simplicity verdict '" + s + "'");
}

}  // namespace

std::string csv_header() {
    return "schema_version,family,params,p,dim_g,dim_der,dim_inn,dim_out,g_derived_series,out_derived_series,solvable,derived_length,"
           "simplicity,checks_passed,checks_total,complete,seed,code_version";
}

std::string render(const OutReport& r, Format f, bool include_telemetry) {
    std::ostringstream os;
    switch (f) {
        case Format::Json: os << to_json(r, include_telemetry).dump(2) << '\n'; break;
        case Format::Csv: {
            os << csv_header();
            if (include_telemetry) os << ",seconds,peak_bytes,threads";
            os << '\n';
            const auto passed = std::count_if(r.generator_checks.begin(), r.generator_checks.end(),
                                              [](const GeneratorCheck& c) { return c.passed; });
            os << r.schema_version << ',' << csv_quote(r.family) << ',' << csv_quote(params_string(r, ";")) << ','
               << r.p << ',' << r.dim_g << ',' << r.dim_der << ',' << r.dim_inn << ',' << r.dim_out << ','
               << join(r.g_derived_series, ";") << ',' << join(r.out_derived_series, ";") << ',' << (r.solvable ? "true" : "false") << ','
               << (r.derived_length ? std::to_string(*r.derived_length) : "") << ',' << to_string(r.simplicity) << ','
               << passed << ',' << r.generator_checks.size() << ',' << (r.complete ? "true" : "false") << ',' << r.seed
               << ',' << r.code_version;
            if (include_telemetry) os << ',' << r.telemetry.seconds << ',' << r.telemetry.peak_bytes << ',' << r.telemetry.threads;
            os << '\n';
            break;
        }
        case Format::Text: {
            os << "algebra        " << r.family;
            if (!r.params.empty()) os << " (" << params_string(r, ", ") << ")";
            os << " over GF(" << r.p << ")\n";
            if (!r.complete) os << "INCOMPLETE     " << r.incomplete_reason << '\n';
            os << "dim g          " << r.dim_g << '\n'
               << "g series       (" << join(r.g_derived_series, ", ") << ")\n"
               << "dim Der        " << r.dim_der << '\n'
               << "dim Inn        " << r.dim_inn << '\n'
               << "dim Out        " << r.dim_out << '\n'
               << "Out series     (" << join(r.out_derived_series, ", ") << ")\n"
               << "Out solvable   " << (r.solvable ? "yes" : "no");
            if (r.derived_length) os << ", derived length " << *r.derived_length;
            os << '\n' << "Out simplicity " << to_string(r.simplicity) << " (" << r.simplicity_scope << ", " << r.probe_trials
               << " trials, seed " << r.seed << ")\n";
            if (!r.generator_checks.empty()) {
                os << "checks\n";
                for (const auto& c : r.generator_checks) {
                    os << "  " << (c.passed ? "PASS " : "FAIL ") << c.name;
                    if (!c.passed && !c.detail.empty()) os << "  [" << c.detail << "]";
                    os << '\n';
                }
            }
            if (include_telemetry)
                os << "time           " << r.telemetry.seconds << " s, peak " << r.telemetry.peak_bytes / (1 << 20)
                   << " MiB, " << r.telemetry.threads << " thread(s)" << (r.telemetry.cache_hit ? ", cache hit" : "") << '\n';
            break;
        }
    }
    return os.str();
}

OutReport report_from_json(const std::string& text) {
    try {
        const ojson j = ojson::parse(text);
        OutReport r;
        r.schema_version = j.at("schema_version").get<int>();
        if (r.schema_version != kReportSchemaVersion)
            throw ParseError("unsupported report schema version " + std::to_string(r.schema_version));
        r.family = j.at("family").get<std::string>();
        for (const auto& [k, v] : j.at("params").items()) r.params.emplace_back(k, v.get<std::string>());
        r.p = j.at("p").get<unsigned>();
        const auto& d = j.at("dims");
        r.dim_g = d.at("g").get<std::size_t>();
        r.dim_der = d.at("der").get<std::size_t>();
        r.dim_inn = d.at("inn").get<std::size_t>();
        r.dim_out = d.at("out").get<std::size_t>();
        r.g_derived_series = j.at("g_derived_series").get<std::vector<std::size_t>>();
        r.out_derived_series = j.at("out_derived_series").get<std::vector<std::size_t>>();
        r.solvable = j.at("solvable").get<bool>();
        if (!j.at("derived_length").is_null()) r.derived_length = j.at("derived_length").get<std::size_t>();
        r.simplicity = parse_simplicity(j.at("simplicity").get<std::string>());
        r.simplicity_scope = j.at("simplicity_scope").get<std::string>();
        r.probe_trials = j.at("probe_trials").get<std::size_t>();
        r.seed = j.at("seed").get<std::uint64_t>();
        for (const auto& c : j.at("generator_checks"))
            r.generator_checks.push_back(
                {c.at("name").get<std::string>(), c.at("passed").get<bool>(), c.at("detail").get<std::string>()});
        r.complete = j.at("complete").get<bool>();
        r.incomplete_reason = j.at("incomplete_reason").get<std::string>();
        r.code_version = j.at("code_version").get<std::string>();
        r.complement_rule = j.at("complement_rule").get<std::string>();
        if (j.contains("telemetry")) {
            const auto& t = j.at("telemetry");
            r.telemetry = {t.at("seconds").get<double>(),     t.at("peak_bytes").get<std::uint64_t>(),
                           t.at("threads").get<unsigned>(),   t.at("blocks").get<std::size_t>(),
                           t.at("equations").get<std::uint64_t>(), t.at("cache_hit").get<bool>()};
        }
        return r;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("malformed report: ") + e.what());
    }
}

}  // namespace modlie
