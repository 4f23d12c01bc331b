#pragma once

// Command-line front end: classify, search, table.  Kept in a header so the
// test suite can drive it in-process.
//
// Exit codes: 0 success, 1 internal inconsistency, 2 validation error,
// 3 resource bound exceeded.

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include "CLI11.hpp"

#include "dhyper/curves.hpp"
#include "dhyper/error.hpp"
#include "dhyper/fields.hpp"
#include "dhyper/report.hpp"
#include "dhyper/shimura.hpp"

namespace dhyper::cli {

enum ExitCode : int
{
    kSuccess = 0,
    kInconsistency = 1,
    kValidation = 2,
    kResource = 3,
};

struct RunConfig
{
    std::string command;
    std::uint64_t p = 0;
    unsigned e = 1;
    std::string places;
    std::string degrees;
    int max_degree = 0;
    std::string format = "text";
    std::string cache_path;
    std::string kappa;
    unsigned threads = std::max(1u, std::thread::hardware_concurrency());
};

namespace detail {

inline std::vector<std::string> split(std::string const & s, char sep)
{
    std::vector<std::string> out;
    std::string cur;
    std::istringstream in(s);
    while (std::getline(in, cur, sep))
        out.push_back(cur);
    return out;
}

inline gf::FieldPtr field_of(RunConfig const & cfg)
{
    if (!gf::is_prime(cfg.p))
        throw ValidationError("p = " + std::to_string(cfg.p) +
                              " is not prime: p must be prime; extension fields via `--p 3 --e 2`");
    return gf::make_field(cfg.p, cfg.e);
}

inline void require_odd(gf::Field const & F)
{
    if (!F.odd_characteristic())
        throw ValidationError("odd characteristic required");
}

inline shimura::ClassifyOptions options_of(RunConfig const & cfg, gf::FieldPtr const & F,
                                           curves::ClassNumberCache * cache)
{
    shimura::ClassifyOptions opts;
    if (!cfg.kappa.empty())
        opts.kappa = gf::parse_element(F, cfg.kappa);
    opts.kappa = shimura::resolve_kappa(*F, opts);
    opts.cache = cache;
    opts.threads = std::max(1u, cfg.threads);
    return opts;
}

inline poly::Place parse_place(gf::FieldPtr const & F, std::string const & text)
{
    try {
        return poly::Place(poly::parse(F, text));
    } catch (ValidationError const & e) {
        throw ValidationError("place \"" + text + "\": " + e.what());
    }
}

inline shimura::DegreePair parse_degrees(std::string const & text)
{
    auto parts = split(text, ',');
    if (parts.size() != 2)
        throw ValidationError("--degrees expects two comma-separated degrees, e.g. 1,2");
    int d[2];
    for (int i = 0; i < 2; ++i) {
        try {
            std::size_t used = 0;
            d[i] = std::stoi(parts[static_cast<std::size_t>(i)], &used);
            if (used != parts[static_cast<std::size_t>(i)].size())
                throw std::invalid_argument("trailing characters");
        } catch (std::exception const &) {
            throw ValidationError("invalid degree \"" + parts[static_cast<std::size_t>(i)] + "\"");
        }
        if (d[i] < 1)
            throw ValidationError("degrees must be positive");
    }
    return {std::min(d[0], d[1]), std::max(d[0], d[1])};
}

struct Counts
{
    std::size_t hyperelliptic = 0, not_hyperelliptic = 0, undetermined = 0;
};

inline Counts count(std::vector<shimura::ClassificationReport> const & reports)
{
    Counts c;
    for (auto const & r : reports) {
        switch (r.verdict) {
        case shimura::Verdict::hyperelliptic:
            ++c.hyperelliptic;
            break;
        case shimura::Verdict::not_hyperelliptic:
            ++c.not_hyperelliptic;
            break;
        case shimura::Verdict::undetermined:
            ++c.undetermined;
            break;
        }
    }
    return c;
}

inline void emit_reports(std::ostream & out, std::string const & format,
                         std::vector<shimura::ClassificationReport> const & reports)
{
    if (format == "csv") {
        report::write_csv_header(out);
        for (auto const & r : reports)
            report::write_csv_row(out, r);
    } else if (format == "json") {
        report::json arr = report::json::array();
        for (auto const & r : reports)
            arr.push_back(report::to_json(r));
        out << arr.dump(2) << '\n';
    } else {
        auto const & cols = report::csv_columns();
        std::vector<int> widths{4, 16, 16, 5, 7, 7, 8, 0};
        for (std::size_t i = 0; i < cols.size(); ++i)
            out << std::left << std::setw(widths[i]) << cols[i];
        out << '\n';
        for (auto const & r : reports) {
            auto const & R = r.ramification;
            out << std::left << std::setw(widths[0]) << r.field().size() << std::setw(widths[1])
                << poly::format(R[0].generator()) << std::setw(widths[2]) << poly::format(R[1].generator())
                << std::setw(widths[3]) << r.genus << std::setw(widths[4]) << r.fix(1) << std::setw(widths[5])
                << r.fix(2) << std::setw(widths[6]) << r.fix(3) << shimura::to_string(r.verdict) << '\n';
        }
    }
}

inline int cmd_classify(RunConfig const & cfg, std::ostream & out, curves::ClassNumberCache & cache)
{
    auto F = field_of(cfg);
    require_odd(*F);
    std::vector<poly::Place> places;
    for (auto const & text : split(cfg.places, ','))
        places.push_back(parse_place(F, text));
    shimura::RamSet R(std::move(places));
    auto rep = shimura::classify(R, options_of(cfg, F, &cache));
    if (cfg.format == "json") {
        out << report::to_json(rep).dump(2) << '\n';
    } else if (cfg.format == "csv") {
        report::write_csv_header(out);
        report::write_csv_row(out, rep);
    } else {
        report::write_text(out, rep);
    }
    return kSuccess;
}

inline int cmd_search(RunConfig const & cfg, std::ostream & out, curves::ClassNumberCache & cache)
{
    auto F = field_of(cfg);
    if (cfg.max_degree < 1)
        throw ValidationError("--max-degree must be positive");

    if (!F->odd_characteristic()) {
        auto sweep = shimura::finiteness_sweep(F, cfg.max_degree);
        if (cfg.format == "json") {
            auto j = report::finiteness_json(sweep, *F);
            j["max_degree"] = cfg.max_degree;
            out << j.dump(2) << '\n';
        } else if (cfg.format == "csv") {
            out << "q,f_x,f_y,deg_x,deg_y,o,lhs,rhs,verdict\n";
            for (auto const & [R, c] : sweep.passing)
                out << F->size() << ',' << poly::format(R[0].generator()) << ',' << poly::format(R[1].generator())
                    << ',' << R[0].degree() << ',' << R[1].degree() << ',' << poly::format(c.o.generator()) << ','
                    << c.lhs << ',' << c.rhs << ",not classified (even characteristic)\n";
        } else {
            out << "finiteness bound over " << F->describe() << ", degrees <= " << cfg.max_degree
                << " (even characteristic: not classified)\n";
            out << "passing degree pairs:";
            for (auto dp : sweep.passing_multisets)
                out << ' ' << report::degree_pair_text(dp);
            out << '\n';
            for (auto const & [R, c] : sweep.passing)
                out << "  {" << poly::format(R[0].generator()) << ", " << poly::format(R[1].generator())
                    << "}  o=" << poly::format(c.o.generator()) << "  " << c.lhs << " <= " << c.rhs << '\n';
            out << "examined " << sweep.examined << " sets, " << sweep.passing.size() << " pass\n";
        }
        return kSuccess;
    }

    auto candidates = shimura::candidate_degree_multisets(*F);
    auto reports = shimura::classify_all(F, cfg.max_degree, options_of(cfg, F, &cache));
    auto c = count(reports);
    if (cfg.format == "json") {
        report::json j;
        j["field"] = report::field_json(*F);
        j["max_degree"] = cfg.max_degree;
        report::json cand = report::json::array();
        for (auto dp : candidates)
            cand.push_back({dp.low, dp.high});
        j["candidates"] = cand;
        report::json arr = report::json::array();
        for (auto const & r : reports)
            arr.push_back(report::to_json(r));
        j["reports"] = arr;
        j["counts"] = {{"instances", reports.size()},
                       {"hyperelliptic", c.hyperelliptic},
                       {"not_hyperelliptic", c.not_hyperelliptic},
                       {"undetermined", c.undetermined}};
        out << j.dump(2) << '\n';
    } else if (cfg.format == "csv") {
        emit_reports(out, "csv", reports);
    } else {
        out << "search over " << F->describe() << ", degrees <= " << cfg.max_degree << '\n';
        out << "candidate degree pairs:";
        for (auto dp : candidates)
            out << ' ' << report::degree_pair_text(dp);
        out << '\n';
        for (auto const & r : reports)
            out << "  " << report::summary_line(r) << '\n';
        out << "instances " << reports.size() << ": hyperelliptic " << c.hyperelliptic << ", not hyperelliptic "
            << c.not_hyperelliptic << ", undetermined " << c.undetermined << '\n';
    }
    return kSuccess;
}

inline int cmd_table(RunConfig const & cfg, std::ostream & out, curves::ClassNumberCache & cache)
{
    auto F = field_of(cfg);
    require_odd(*F);
    std::vector<shimura::DegreePair> pairs;
    if (!cfg.degrees.empty()) {
        pairs.push_back(parse_degrees(cfg.degrees));
    } else {
        int top = cfg.max_degree > 0 ? cfg.max_degree : 3;
        for (auto dp : shimura::candidate_degree_multisets(*F))
            if (dp.high <= top)
                pairs.push_back(dp);
    }
    int top = 0;
    for (auto dp : pairs)
        top = std::max(top, dp.high);
    auto places = shimura::places_by_degree(F, top);
    std::vector<shimura::RamSet> instances;
    for (auto dp : pairs)
        for (auto & R : shimura::ramification_sets(places, dp))
            instances.push_back(std::move(R));
    auto reports = shimura::classify_many(instances, options_of(cfg, F, &cache));
    emit_reports(out, cfg.format, reports);
    return kSuccess;
}

inline void load_cache(std::string const & path, curves::ClassNumberCache & cache)
{
    if (path.empty() || !std::filesystem::exists(path))
        return;
    std::ifstream in(path);
    if (!in)
        throw ValidationError("cannot read cache file " + path);
    cache.load(in);
}

inline void save_cache(std::string const & path, curves::ClassNumberCache const & cache)
{
    if (path.empty())
        return;
    std::ofstream out(path, std::ios::trunc);
    if (!out)
        throw ValidationError("cannot write cache file " + path);
    cache.save(out);
}

} // namespace detail

/// Runs one command; `args` excludes the program name.
inline int run(std::vector<std::string> args, std::ostream & out, std::ostream & err)
{
    CLI::App app{"Genus, Atkin-Lehner fixed points and hyperellipticity of modular curves X^R over F_q(T)",
                 "dhyper"};
    app.require_subcommand(1);
    RunConfig cfg;

    auto common = [&](CLI::App * sub) {
        sub->add_option("--p", cfg.p, "characteristic (a prime)")->required();
        sub->add_option("--e", cfg.e, "extension degree; q = p^e")->check(CLI::PositiveNumber);
        sub->add_option("--format", cfg.format, "output format")->check(CLI::IsMember({"text", "json", "csv"}));
        sub->add_option("--cache", cfg.cache_path, "class number cache file (lines: p e a h)");
        sub->add_option("--kappa", cfg.kappa, "non-square of F_q to use instead of the canonical one");
        sub->add_option("--threads", cfg.threads, "worker threads")->check(CLI::PositiveNumber);
    };

    auto * classify = app.add_subcommand("classify", "classify one ramification set");
    common(classify);
    classify->add_option("--places", cfg.places, "comma-separated monic irreducible generators, e.g. \"T,T^2+1\"")
        ->required();

    auto * search = app.add_subcommand("search", "candidate filter plus classification of every instance");
    common(search);
    search->add_option("--max-degree", cfg.max_degree, "largest place degree")->required();

    auto * table = app.add_subcommand("table", "genus and fixed-point table for two-place ramification sets");
    common(table);
    table->add_option("--degrees", cfg.degrees, "degree pair, e.g. 1,2 (default: all candidate pairs)");
    table->add_option("--max-degree", cfg.max_degree, "largest degree when --degrees is absent (default 3)");

    try {
        std::reverse(args.begin(), args.end());
        app.parse(args);
    } catch (CLI::ParseError const & e) {
        int code = app.exit(e, out, err);
        return code == 0 ? kSuccess : kValidation;
    }

    curves::ClassNumberCache cache;
    try {
        detail::load_cache(cfg.cache_path, cache);
        int rc = kSuccess;
        if (*classify)
            rc = detail::cmd_classify(cfg, out, cache);
        else if (*search)
            rc = detail::cmd_search(cfg, out, cache);
        else if (*table)
            rc = detail::cmd_table(cfg, out, cache);
        detail::save_cache(cfg.cache_path, cache);
        return rc;
    } catch (ValidationError const & e) {
        err << "error: " << e.what() << '\n';
        return kValidation;
    } catch (ResourceError const & e) {
        err << "error: " << e.what() << '\n';
        return kResource;
    } catch (std::exception const & e) {
        err << "internal error: " << e.what() << '\n';
        return kInconsistency;
    }
}

} // namespace dhyper::cli
