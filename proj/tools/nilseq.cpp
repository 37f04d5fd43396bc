#include "cli/run.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

namespace {

using nilseq::cli::json;

struct Options {
    std::string config;
    std::string out;
    unsigned threads = 0;
    std::string precision;
};

void add_run_options(CLI::App* sub, Options& o)
{
    sub->add_option("--config", o.config, "experiment config (JSON)")->required()->check(CLI::ExistingFile);
    sub->add_option("--out", o.out, "output directory")->required();
    sub->add_option("--threads", o.threads, "worker threads")->check(CLI::Range(1u, 256u));
    sub->add_option("--precision", o.precision, "float precision")->check(CLI::IsMember({"exact", "fast"}));
}

int fail(int code, std::string_view stage, std::string_view errc, std::string_view msg)
{
    std::cerr << nilseq::cli::error_json(stage, errc, msg).dump() << "\n";
    return code;
}

/// kinds: experiment kinds the subcommand accepts; empty means any.
int run_subcommand(const Options& o, const std::set<std::string>& kinds)
{
    json config;
    {
        std::ifstream is(o.config);
        try {
            config = json::parse(is);
        } catch (const json::exception& e) {
            return fail(2, "validate", "parse_error", e.what());
        }
    }
    nilseq::cli::Overrides ov;
    if (o.threads)
        ov.threads = o.threads;
    if (!o.precision.empty())
        ov.precision = o.precision == "fast" ? nilseq::Precision::fast : nilseq::Precision::exact;
    if (const char* c = std::getenv("NILSEQ_CACHE_DIR"))
        ov.cache_dir = c;

    nilseq::cli::RunOutput out;
    try {
        if (!kinds.empty() && config.is_object() && config.contains("experiment") && config.at("experiment").is_string() &&
            !kinds.count(config.at("experiment").get<std::string>()))
            throw nilseq::cli::ValidationError("experiment: '" + config.at("experiment").get<std::string>() +
                                               "' does not belong to this subcommand");
        out = nilseq::cli::run(config, ov);
    } catch (const nilseq::cli::ValidationError& e) {
        return fail(2, "validate", "validation_error", e.what());
    } catch (const nilseq::error& e) {
        out.report = json{{"experiment", config.value("experiment", "")}, {"config", config}, {"status", "error"}};
        out.report.update(nilseq::cli::error_json("compute", nilseq::to_string(e.code()), e.what()));
        out.files.clear();
        try {
            nilseq::cli::write_outputs(out, o.out);
        } catch (const nilseq::error& io) {
            return fail(3, "write", nilseq::to_string(io.code()), io.what());
        }
        return fail(3, "compute", nilseq::to_string(e.code()), e.what());
    } catch (const json::exception& e) {
        return fail(2, "validate", "validation_error", e.what());
    }
    try {
        nilseq::cli::write_outputs(out, o.out);
    } catch (const nilseq::error& e) {
        return fail(3, "write", nilseq::to_string(e.code()), e.what());
    }
    return 0;
}

void print_summary(const json& r, std::ostream& os)
{
    os << "experiment: " << r.value("experiment", "?") << "\n";
    os << "status: " << r.value("status", "?") << "\n";
    if (r.contains("error"))
        os << "error: [" << r["error"].value("stage", "") << "] " << r["error"].value("code", "") << ": "
           << r["error"].value("message", "") << "\n";
    if (r.contains("results") && r["results"].is_object())
        for (const auto& [k, v] : r["results"].items())
            if (!v.is_array() && !v.is_object())
                os << k << ": " << (v.is_string() ? v.get<std::string>() : v.dump()) << "\n";
    if (r.contains("artifacts"))
        for (const auto& a : r["artifacts"])
            os << "artifact: " << a.get<std::string>() << "\n";
}

int report_subcommand(const std::string& dir)
{
    std::ifstream is(std::filesystem::path(dir) / "report.json");
    if (!is)
        return fail(3, "report", "io_error", "no report.json in " + dir);
    try {
        print_summary(json::parse(is), std::cout);
    } catch (const json::exception& e) {
        return fail(3, "report", "parse_error", e.what());
    }
    return 0;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"nilseq experiment runner"};
    app.require_subcommand(1);

    Options o;
    std::string report_dir;
    struct Entry {
        CLI::App* sub;
        std::set<std::string> kinds;
    };
    std::vector<Entry> entries;
    auto add = [&](CLI::App* parent, const std::string& name, const std::string& help, std::set<std::string> kinds) {
        CLI::App* s = parent->add_subcommand(name, help);
        add_run_options(s, o);
        entries.push_back({s, std::move(kinds)});
    };
    add(&app, "classify", "entropy classification of an integer matrix", {"classify"});
    add(&app, "seq", "dump a torus or nc-torus sequence", {"torus-seq", "nc-seq"});
    add(&app, "decompose", "nilsequence plus zero-density split", {"decompose"});
    add(&app, "correlate", "Mobius correlation averages", {"correlate"});
    add(&app, "weyl", "Weyl sum averages", {"weyl"});
    add(&app, "run", "any experiment kind", {});
    CLI::App* torus = app.add_subcommand("torus", "commutative torus experiments");
    torus->require_subcommand(1);
    add(torus, "orbit", "orbit of a toral automorphism", {"torus-orbit"});
    add(torus, "charseq", "character sequence", {"torus-seq"});
    add(torus, "weyl", "Weyl sum averages", {"weyl"});
    CLI::App* report = app.add_subcommand("report", "summarize a finished run");
    report->add_option("--out", report_dir, "output directory of a run")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail(2, "arguments", "usage_error", e.what());
    }

    if (report->parsed())
        return report_subcommand(report_dir);
    for (const auto& en : entries)
        if (en.sub->parsed())
            return run_subcommand(o, en.kinds);
    return fail(2, "arguments", "usage_error", "no subcommand");
}
