#pragma once

#include "cli/config.hpp"

#include "nilseq/mobius.hpp"
#include "nilseq/sequences.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <optional>
#include <sstream>

namespace nilseq::cli {

struct Overrides {
    std::optional<unsigned> threads;
    std::optional<Precision> precision;
    std::string cache_dir;
};

struct Artifact {
    std::string name;
    std::string content;
};

struct RunOutput {
    json report;
    std::vector<Artifact> files;
    json timings;
};

/// A validated experiment, ready to compute.
struct Plan {
    std::string kind;
    std::function<void(RunOutput&)> compute;
};

inline const std::set<std::string>& experiment_kinds()
{
    static const std::set<std::string> k = {"classify", "torus-orbit", "torus-seq", "nc-seq", "decompose", "correlate", "weyl"};
    return k;
}

namespace detail {

inline std::string fmt(double x)
{
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x == 0.0 ? 0.0 : x);
    return buf;
}

inline std::string high_str(const HighPrec& x) { return x.str(30); }

inline json complex_json(std::complex<double> z) { return json{{"re", z.real()}, {"im", z.imag()}, {"abs", std::abs(z)}}; }

inline std::string csv_of(const std::function<void(std::ostream&)>& w)
{
    std::ostringstream os;
    w(os);
    return os.str();
}

struct Common {
    GeneratorTable generators;
    unsigned threads = 1;
    Precision precision = Precision::exact;
    SumMethod method = SumMethod::pairwise;
    std::vector<std::uint64_t> checkpoints;
    bool has_checkpoints = false;
    std::optional<std::uint64_t> limit;
    std::int64_t lo = -10, hi = 10;

    ReduceOptions reduce() const
    {
        ReduceOptions r;
        r.method = method;
        r.threads = threads;
        return r;
    }

    std::vector<std::uint64_t> resolved_checkpoints(std::uint64_t fallback_limit) const
    {
        if (has_checkpoints)
            return normalize_checkpoints(checkpoints);
        return default_checkpoints(limit.value_or(fallback_limit));
    }
};

inline const std::set<std::string> common_keys = {"generators", "threads", "precision", "method", "checkpoints", "limit", "range", "note"};

inline Common parse_common(const json& c, const Overrides& ov)
{
    Common k;
    if (c.contains("generators"))
        k.generators = to_generators(c.at("generators"), "generators");
    if (c.contains("threads")) {
        long long t = to_ll(c.at("threads"), "threads");
        if (t < 1 || t > 256)
            invalid("threads", "expected 1..256");
        k.threads = static_cast<unsigned>(t);
    }
    if (ov.threads)
        k.threads = *ov.threads;
    if (c.contains("precision")) {
        auto p = to_str(c.at("precision"), "precision");
        if (p != "exact" && p != "fast")
            invalid("precision", "expected 'exact' or 'fast'");
        k.precision = p == "fast" ? Precision::fast : Precision::exact;
    }
    if (ov.precision)
        k.precision = *ov.precision;
    if (c.contains("method")) {
        auto m = to_str(c.at("method"), "method");
        if (m != "pairwise" && m != "compensated")
            invalid("method", "expected 'pairwise' or 'compensated'");
        k.method = m == "compensated" ? SumMethod::compensated : SumMethod::pairwise;
    }
    if (c.contains("checkpoints")) {
        const json& a = array_at(c, "checkpoints", "");
        for (std::size_t i = 0; i < a.size(); ++i) {
            auto n = to_u64(a[i], "checkpoints[" + std::to_string(i) + "]");
            if (n == 0)
                invalid("checkpoints[" + std::to_string(i) + "]", "checkpoints must be positive");
            k.checkpoints.push_back(n);
        }
        k.has_checkpoints = true;
    }
    if (c.contains("limit")) {
        k.limit = to_u64(c.at("limit"), "limit");
        if (*k.limit == 0)
            invalid("limit", "must be positive");
    }
    if (c.contains("range")) {
        const json& r = c.at("range");
        if (!r.is_array() || r.size() != 2)
            invalid("range", "expected [lo, hi]");
        k.lo = to_ll(r[0], "range[0]");
        k.hi = to_ll(r[1], "range[1]");
        if (k.lo > k.hi)
            invalid("range", "lo > hi");
        if (k.hi - k.lo > 10'000'000)
            invalid("range", "at most 10^7 terms");
    }
    if (c.contains("note"))
        to_str(c.at("note"), "note");
    return k;
}

inline std::set<std::string> with_common(std::set<std::string> s)
{
    s.insert(common_keys.begin(), common_keys.end());
    s.insert("experiment");
    return s;
}

inline const std::map<std::string, std::pair<std::set<std::string>, std::set<std::string>>>& sequence_keys()
{
    static const std::map<std::string, std::pair<std::set<std::string>, std::set<std::string>>> k = {
        {"constant", {{}, {"re", "im"}}},
        {"poly-exp", {{"poly"}, {}}},
        {"heisenberg", {{"alpha", "beta"}, {}}},
        {"torus-seq", {{"A", "x", "v"}, {}}},
        {"nc-seq", {{"theta", "S", "state_vector"}, {"word", "element"}}},
    };
    return k;
}

struct BuiltSequence {
    SequenceStream stream;
    json info;
};

/// Validates the payload of one sequence kind; the stream itself is built lazily.
inline std::function<BuiltSequence()> sequence_builder(const std::string& kind, const json& j, const GeneratorTable& g,
                                                       const std::string& path)
{
    if (kind == "constant") {
        const auto c = to_complex(j, path);
        return [c] { return BuiltSequence{constant_seq(c), json{{"tag", "Nil(0)"}}}; };
    }
    if (kind == "poly-exp") {
        auto p = to_phase_poly(j.at("poly"), g, path + ".poly");
        return [p] {
            auto s = poly_exp(p);
            return BuiltSequence{s, json{{"tag", s.tag().str()}, {"poly", p.str()}}};
        };
    }
    if (kind == "heisenberg") {
        auto a = to_phase(j.at("alpha"), g, path + ".alpha");
        auto b = to_phase(j.at("beta"), g, path + ".beta");
        return [a, b] {
            auto s = heisenberg_seq(a.to_high(), b.to_high());
            return BuiltSequence{s, json{{"tag", s.tag().str()}, {"alpha", a.str()}, {"beta", b.str()}}};
        };
    }
    if (kind == "torus-seq") {
        IntMatrix a = to_matrix(j.at("A"), path + ".A");
        auto x = to_phases(j.at("x"), g, path + ".x");
        auto v = to_ints(j.at("v"), path + ".v");
        if (x.size() != a.dim() || v.size() != a.dim())
            invalid(path, "A, x and v dimensions differ");
        if (!a.in_gl())
            invalid(path + ".A", "determinant must be +-1");
        return [a, x, v] {
            auto cs = character_seq(a, TorusPoint(x), v);
            json info{{"tag", cs.stream.tag().str()}, {"zero_entropy", cs.entropy->zero_entropy()}};
            if (cs.m) {
                info["m"] = cs.m;
                json polys = json::array();
                for (const auto& f : cs.residue_polys)
                    polys.push_back(f.str("t"));
                info["residue_polys"] = polys;
            }
            return BuiltSequence{cs.stream, info};
        };
    }
    // nc-seq
    ThetaMatrix theta = to_theta(j.at("theta"), g, path + ".theta");
    IntMatrix s = to_matrix(j.at("S"), path + ".S");
    const std::size_t d = theta.dim();
    if (s.dim() != d)
        invalid(path + ".S", "dimension differs from theta");
    if (j.contains("word") == j.contains("element"))
        invalid(path, "give exactly one of 'word' or 'element'");
    WeylElement u(d);
    if (j.contains("word")) {
        u.add(to_word(j.at("word"), g, d, path + ".word"));
    } else {
        const json& el = array_at(j, "element", path);
        for (std::size_t i = 0; i < el.size(); ++i) {
            const std::string p = path + ".element[" + std::to_string(i) + "]";
            check_keys(el[i], p, {"exponents"}, {"phase", "re", "im"});
            json w{{"exponents", el[i].at("exponents")}};
            if (el[i].contains("phase"))
                w["phase"] = el[i].at("phase");
            std::complex<double> c = (el[i].contains("re") || el[i].contains("im")) ? to_complex(el[i], p) : 1.0;
            u.add(to_word(w, g, d, p), c);
        }
    }
    SparseVector w = to_state_vector(j.at("state_vector"), d, path + ".state_vector");
    if (std::abs(w.norm() - 1.0) > 1e-12)
        invalid(path + ".state_vector", "state vector must have norm 1 (got " + fmt(w.norm()) + ")");
    std::optional<NcAutomorphism> alpha;
    try {
        alpha.emplace(s, theta);
    } catch (const error& e) {
        invalid(path, std::string(to_string(e.code())) + ": " + e.what());
    }
    return [alpha = *alpha, u, w] {
        auto ss = state_seq(alpha, u, w);
        json polys = json::array();
        for (const auto& rep : ss.reports) {
            json words = json::array();
            for (const auto& r : rep.residues) {
                json ex = json::array();
                for (const auto& p : r.exponents)
                    ex.push_back(p.str("t"));
                words.push_back(json{{"exponents", ex}, {"phase", r.phase.str("t")}});
            }
            polys.push_back(json{{"start", rep.start.str()}, {"residues", words}});
        }
        return BuiltSequence{ss.stream, json{{"tag", ss.stream.tag().str()}, {"m", ss.m}, {"phase_polys", polys}}};
    };
}

inline json entropy_json(const EntropyReport& r)
{
    json j{{"verdict", r.zero_entropy() ? "ZeroEntropy" : "PositiveEntropy"}, {"characteristic", r.characteristic.str("x")}};
    json cyc = json::array();
    for (const auto& [k, m] : r.cyclotomic_factors)
        cyc.push_back(json{{"k", k}, {"multiplicity", m}});
    j["cyclotomic_factors"] = cyc;
    j["residual"] = r.residual.str("x");
    if (r.unipotence_order)
        j["unipotence_order"] = *r.unipotence_order;
    if (r.entropy) {
        j["entropy"] = high_str(*r.entropy);
        j["nc_lower_bound"] = high_str(*r.nc_lower_bound);
        j["entropy_error_bound"] = high_str(r.entropy_error_bound);
    }
    return j;
}

} // namespace detail

/// Schema check and object construction; throws ValidationError.
inline Plan validate(const json& config, const Overrides& ov = {})
{
    using namespace detail;
    if (!config.is_object())
        invalid("config", "expected a JSON object");
    if (!config.contains("experiment"))
        invalid("config", "missing key 'experiment'");
    const std::string kind = to_str(config.at("experiment"), "experiment");
    if (!experiment_kinds().count(kind))
        invalid("experiment", "unknown experiment kind '" + kind + "'");

    std::set<std::string> required, optional;
    if (kind == "classify") {
        required = {"S"};
    } else if (kind == "torus-orbit") {
        required = {"A", "x"};
    } else if (kind == "torus-seq" || kind == "nc-seq") {
        required = sequence_keys().at(kind).first;
        optional = sequence_keys().at(kind).second;
    } else if (kind == "correlate") {
        required = {"sequence"};
        optional = {"cesaro"};
    } else if (kind == "weyl") {
        required = {"poly", "harmonics"};
    } else if (kind == "decompose") {
        required = {"dim", "operators", "exponents", "u", "v"};
        optional = {"verify_window"};
    }
    check_keys(config, "config", required, with_common(optional));
    auto common = std::make_shared<const Common>(parse_common(config, ov));
    const GeneratorTable& g = common->generators;

    Plan plan{kind, {}};
    if (kind == "classify") {
        IntMatrix s = to_matrix(config.at("S"), "S");
        if (!s.in_gl())
            invalid("S", "determinant must be +-1");
        plan.compute = [s](RunOutput& out) { out.report["results"] = entropy_json(classify_entropy(s)); };
    } else if (kind == "torus-orbit") {
        IntMatrix a = to_matrix(config.at("A"), "A");
        auto x = to_phases(config.at("x"), g, "x");
        if (x.size() != a.dim())
            invalid("x", "dimension differs from A");
        if (!a.in_gl())
            invalid("A", "determinant must be +-1");
        plan.compute = [a, x, common](RunOutput& out) {
            std::ostringstream os;
            os << "n";
            for (std::size_t i = 0; i < x.size(); ++i)
                os << ",x" << i + 1;
            os << "\n";
            TorusPoint p = orbit_point(a, TorusPoint(x), common->lo);
            for (std::int64_t n = common->lo; n <= common->hi; ++n) {
                os << n;
                for (const auto& c : p.coords())
                    os << "," << fmt(c.frac_double());
                os << "\n";
                p = orbit_point(a, p, 1);
            }
            out.files.push_back({"orbit.csv", os.str()});
            out.report["results"] = json{{"range", {common->lo, common->hi}}, {"start", TorusPoint(x).str()}};
        };
    } else if (kind == "torus-seq" || kind == "nc-seq") {
        auto build = sequence_builder(kind, config, g, "config");
        plan.compute = [build, common](RunOutput& out) {
            auto seq = build();
            out.files.push_back({"sequence.csv", csv_of([&](std::ostream& os) { write_sequence_csv(os, seq.stream, common->lo, common->hi); })});
            seq.info["range"] = {common->lo, common->hi};
            out.report["results"] = seq.info;
        };
    } else if (kind == "correlate") {
        const json& sj = config.at("sequence");
        if (!sj.is_object() || !sj.contains("kind"))
            invalid("sequence", "expected an object with 'kind'");
        const std::string sk = to_str(sj.at("kind"), "sequence.kind");
        if (!sequence_keys().count(sk))
            invalid("sequence.kind", "unknown sequence kind '" + sk + "'");
        auto keys = sequence_keys().at(sk);
        keys.second.insert("kind");
        check_keys(sj, "sequence", keys.first, keys.second);
        auto build = sequence_builder(sk, sj, g, "sequence");
        if (!common->limit && !common->has_checkpoints)
            invalid("config", "correlate needs 'limit' or 'checkpoints'");
        const auto cps = common->resolved_checkpoints(0);
        if (!cps.empty() && cps.back() > 1'000'000'000)
            invalid("checkpoints", "Mobius table limited to 10^9");
        const bool cesaro = config.contains("cesaro") && to_bool(config.at("cesaro"), "cesaro");
        const std::string cache = ov.cache_dir;
        plan.compute = [build, common, cps, cesaro, cache](RunOutput& out) {
            auto seq = build();
            const std::uint64_t top = cps.empty() ? 1 : cps.back();
            SieveOptions so;
            so.threads = common->threads;
            MobiusTable mu = cache.empty() ? sieve_mobius(top, so) : load_or_sieve(top, cache, so);
            auto rep = correlate(seq.stream, mu, cps, common->reduce());
            out.files.push_back({"correlation.csv", csv_of([&](std::ostream& os) { write_correlation_csv(os, rep); })});
            json rows = json::array();
            auto ms = mertens(mu, cps);
            for (std::size_t i = 0; i < cps.size(); ++i) {
                json r = complex_json(rep.averages[i]);
                r["N"] = cps[i];
                r["mertens"] = ms[i];
                rows.push_back(r);
            }
            seq.info["correlation"] = rows;
            seq.info["method"] = to_string(rep.method);
            if (cesaro) {
                auto cr = cesaro_stats(seq.stream, cps, common->reduce());
                out.files.push_back({"cesaro.csv", csv_of([&](std::ostream& os) { write_cesaro_csv(os, cr); })});
                seq.info["cesaro_quadratic_norm"] = cr.quadratic_norm;
            }
            out.report["results"] = seq.info;
        };
    } else if (kind == "weyl") {
        auto p = to_phase_poly(config.at("poly"), g, "poly");
        const json& h = array_at(config, "harmonics", "config");
        std::vector<long long> ks;
        for (std::size_t i = 0; i < h.size(); ++i) {
            ks.push_back(to_ll(h[i], "harmonics[" + std::to_string(i) + "]"));
            if (ks.back() == 0)
                invalid("harmonics[" + std::to_string(i) + "]", "harmonic must be nonzero");
        }
        if (!common->limit && !common->has_checkpoints)
            invalid("config", "weyl needs 'limit' or 'checkpoints'");
        plan.compute = [p, ks, common](RunOutput& out) {
            WeylOptions wo;
            wo.precision = common->precision;
            wo.reduce = common->reduce();
            auto rep = weyl_test(p, ks, common->resolved_checkpoints(0), wo);
            out.files.push_back({"weyl.csv", csv_of([&](std::ostream& os) { write_weyl_csv(os, rep); })});
            json hs = json::array();
            for (const auto& hm : rep.harmonics) {
                json r{{"k", hm.k}, {"expect_zero", hm.expect_zero}};
                if (hm.period)
                    r["period"] = *hm.period;
                if (hm.period_mean)
                    r["period_mean"] = complex_json(*hm.period_mean);
                json av = json::array();
                for (std::size_t i = 0; i < rep.checkpoints.size(); ++i) {
                    json a = complex_json(hm.averages[i]);
                    a["N"] = rep.checkpoints[i];
                    av.push_back(a);
                }
                r["averages"] = av;
                hs.push_back(r);
            }
            out.report["results"] = json{{"poly", p.str()}, {"precision", common->precision == Precision::fast ? "fast" : "exact"},
                                         {"harmonics", hs}};
        };
    } else if (kind == "decompose") {
        const long long dim = to_ll(config.at("dim"), "dim");
        if (dim < 1 || dim > 16)
            invalid("dim", "expected 1..16");
        const auto d = static_cast<std::size_t>(dim);
        GPolynomial gp;
        const json& ops = array_at(config, "operators", "config");
        for (std::size_t i = 0; i < ops.size(); ++i)
            gp.generators.push_back(to_operator(ops[i], g, d, "operators[" + std::to_string(i) + "]"));
        const json& ex = array_at(config, "exponents", "config");
        for (std::size_t i = 0; i < ex.size(); ++i)
            gp.exponents.push_back(to_integral_poly(ex[i], "exponents[" + std::to_string(i) + "]"));
        if (gp.generators.size() != gp.exponents.size())
            invalid("exponents", "need one exponent polynomial per operator");
        SparseVector u = to_sparse_vector(config.at("u"), d, gp.generators.size(), g, "u");
        SparseVector v = to_sparse_vector(config.at("v"), d, gp.generators.size(), g, "v");
        const long long window = config.contains("verify_window") ? to_ll(config.at("verify_window"), "verify_window") : 1000;
        if (window < 0 || window > 100000)
            invalid("verify_window", "expected 0..100000");
        plan.compute = [gp, u, v, window, common](RunOutput& out) {
            auto res = decompose(gp, u, v);
            json terms = json::array();
            for (const auto& t : res.nil_terms)
                terms.push_back(json{{"coeff", complex_json(t.coeff)}, {"phase", t.phase.str()}, {"origin", t.origin}});
            json egen = json::array();
            for (const auto& e : res.e_generators)
                egen.push_back(e.str());
            json hits = json::array();
            for (std::size_t i = 0; i < res.certificate.hits.size(); ++i) {
                json h = complex_json(res.certificate.values[i]);
                h["n"] = res.certificate.hits[i];
                hits.push_back(h);
            }
            json cf{{"phase", res.closed.phase.str()}};
            json sh = json::array(), fm = json::array();
            for (std::size_t i = 0; i < res.closed.shift.size(); ++i) {
                sh.push_back(res.closed.shift[i].str("n"));
                fm.push_back(res.closed.form[i].str());
            }
            cf["shift"] = sh;
            cf["form"] = fm;
            json doc{{"closed_form", cf},
                     {"g0", res.g0.str()},
                     {"e_generators", egen},
                     {"sector", {{"atomic_compact", res.sector.atomic_compact}, {"sparse_compact", res.sector.sparse_compact}, {"reason", res.sector.reason}}},
                     {"b_terms", terms},
                     {"hits", hits},
                     {"per_hit_bound", res.certificate.per_hit_bound}};
            out.files.push_back({"decomposition.json", doc.dump(2) + "\n"});

            std::ostringstream rc;
            rc << "n,re_c,im_c,abs_c\n";
            for (std::size_t i = 0; i < res.certificate.hits.size(); ++i) {
                const auto z = res.certificate.values[i];
                rc << res.certificate.hits[i] << "," << fmt(z.real()) << "," << fmt(z.imag()) << "," << fmt(std::abs(z)) << "\n";
            }
            out.files.push_back({"residual.csv", rc.str()});

            const auto cps = common->resolved_checkpoints(1000);
            std::ostringstream cc;
            cc << "N,hits,cesaro_abs,cesaro_bound\n";
            json cert = json::array();
            for (auto N : cps) {
                cc << N << "," << res.certificate.count_within(N) << "," << fmt(res.certificate.cesaro_abs(N)) << ","
                   << fmt(res.certificate.cesaro_bound(N)) << "\n";
                cert.push_back(json{{"N", N}, {"hits", res.certificate.count_within(N)}, {"cesaro_abs", res.certificate.cesaro_abs(N)},
                                    {"cesaro_bound", res.certificate.cesaro_bound(N)}});
            }
            out.files.push_back({"certificate.csv", cc.str()});

            double max_err = 0.0;
            for (long long n = -window; n <= window; ++n)
                max_err = std::max(max_err, std::abs(res.b(n) + res.c(n) - direct_value(gp, u, v, n)));
            out.report["results"] = json{{"nil_terms", res.nil_terms.size()},
                                         {"hit_count", res.certificate.hits.size()},
                                         {"sparse_compact", res.sector.sparse_compact},
                                         {"certificate", cert},
                                         {"verify_window", window},
                                         {"max_split_error", max_err}};
        };
    }
    return plan;
}

/// Validates, computes and collects every artifact in memory. Validation
/// errors propagate as ValidationError; computation errors are recorded in
/// the report and rethrown.
inline RunOutput run(const json& config, const Overrides& ov = {})
{
    using clock = std::chrono::steady_clock;
    RunOutput out;
    auto t0 = clock::now();
    Plan plan = validate(config, ov);
    auto t1 = clock::now();
    out.report = json{{"experiment", plan.kind}, {"config", config}, {"status", "ok"}};
    plan.compute(out);
    auto t2 = clock::now();
    std::vector<std::string> names;
    for (const auto& f : out.files)
        names.push_back(f.name);
    out.report["artifacts"] = names;
    out.timings = json{{"validate_seconds", std::chrono::duration<double>(t1 - t0).count()},
                       {"compute_seconds", std::chrono::duration<double>(t2 - t1).count()}};
    return out;
}

inline void write_file(const std::filesystem::path& p, const std::string& content)
{
    std::ofstream os(p, std::ios::binary);
    if (!os)
        throw error(errc::io_error, "cannot open " + p.string() + " for writing");
    os << content;
    if (!os)
        throw error(errc::io_error, "write to " + p.string() + " failed");
}

/// report.json, timings.json and every artifact, written only after the run finished.
inline void write_outputs(const RunOutput& out, const std::filesystem::path& dir)
{
    std::error_code ec;
    std::filesystem::create_directories(dir, ec);
    if (ec)
        throw error(errc::io_error, "cannot create " + dir.string() + ": " + ec.message());
    for (const auto& f : out.files)
        write_file(dir / f.name, f.content);
    write_file(dir / "report.json", out.report.dump(2) + "\n");
    write_file(dir / "timings.json", out.timings.dump(2) + "\n");
}

inline json error_json(std::string_view stage, std::string_view code, std::string_view message)
{
    return json{{"error", {{"stage", stage}, {"code", code}, {"message", message}}}};
}

} // namespace nilseq::cli
