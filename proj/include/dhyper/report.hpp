#pragma once

// Serialization of classification results: JSON (canonical key order, no
// floating point), CSV with a fixed column set, and aligned text.

#include <iomanip>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "json.hpp"

#include "dhyper/shimura.hpp"

namespace dhyper::report {

using nlohmann::json;
using shimura::ClassificationReport;

/// "num/den", always with a denominator.
inline std::string rational_text(shimura::cpp_rational const & r)
{
    return numerator(r).str() + "/" + denominator(r).str();
}

inline json field_json(gf::Field const & F)
{
    json j;
    j["p"] = F.characteristic();
    j["e"] = F.degree();
    j["q"] = F.size();
    j["modulus"] = F.is_prime_field() ? json(nullptr) : json(F.modulus_text());
    return j;
}

inline std::string degree_pair_text(shimura::DegreePair dp)
{
    return "{" + std::to_string(dp.low) + "," + std::to_string(dp.high) + "}";
}

inline json to_json(ClassificationReport const & r)
{
    auto const & R = r.ramification;
    json j;
    j["field"] = field_json(r.field());
    json places = json::array();
    for (auto const & x : R.places())
        places.push_back({{"generator", poly::format(x.generator())}, {"degree", x.degree()}});
    j["places"] = places;
    j["kappa"] = r.field().format(r.kappa);
    j["genus"] = r.genus;
    j["aut_equals_W"] = r.aut_equals_w;
    json fix = json::array();
    for (auto const & e : r.fixed_points) {
        json members = json::array();
        for (std::size_t i = 0; i < R.size(); ++i)
            if (e.key.contains(i))
                members.push_back(i);
        fix.push_back({{"key", e.key.label(R.size())},
                       {"places", members},
                       {"generator", poly::format(e.key.generator(R))},
                       {"count", e.count}});
    }
    j["fixed_points"] = fix;
    j["verdict"] = shimura::to_string(r.verdict);
    j["reason"] = r.reason == shimura::Reason::none ? json(nullptr) : json(shimura::to_string(r.reason));
    j["canonical"] = r.canonical ? json(r.canonical->label(R.size())) : json(nullptr);
    j["ss_bound"] = {{"o", poly::format(r.auxiliary.generator())}, {"value", rational_text(r.ss_bound)}};
    return j;
}

inline std::string verdict_text(ClassificationReport const & r)
{
    std::string v = shimura::to_string(r.verdict);
    if (r.canonical)
        return v + " (canonical involution w_" + r.canonical->label(r.ramification.size()) + ")";
    if (r.reason != shimura::Reason::none)
        return v + " (" + shimura::to_string(r.reason) + ")";
    return v;
}

inline void write_text(std::ostream & out, ClassificationReport const & r)
{
    auto const & R = r.ramification;
    auto const & F = r.field();
    auto row = [&](std::string const & k, std::string const & v) { out << "  " << std::left << std::setw(14) << k << v << '\n'; };
    out << "X^R over " << F.describe() << '\n';
    for (std::size_t i = 0; i < R.size(); ++i) {
        std::string name = shimura::InvolutionKey(std::uint32_t{1} << i, R).label(R.size());
        row(name, poly::format(R[i].generator()) + "  (degree " + std::to_string(R[i].degree()) + ")");
    }
    row("kappa", F.format(r.kappa));
    row("genus", std::to_string(r.genus));
    row("Aut = W", r.aut_equals_w ? "yes" : "not known");
    row("ss bound", rational_text(r.ss_bound) + " at o = " + poly::format(r.auxiliary.generator()));
    out << "  fixed points\n";
    for (auto const & e : r.fixed_points)
        out << "    " << std::left << std::setw(12) << ("w_" + e.key.label(R.size())) << e.count << '\n';
    row("verdict", verdict_text(r));
}

inline std::vector<std::string> const & csv_columns()
{
    static std::vector<std::string> const cols{"q", "f_x", "f_y", "g", "fix_x", "fix_y", "fix_xy", "verdict"};
    return cols;
}

inline std::string csv_quote(std::string const & s)
{
    if (s.find_first_of(",\"") == std::string::npos)
        return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"')
            out += '"';
        out += c;
    }
    return out + "\"";
}

inline void write_csv_header(std::ostream & out)
{
    auto const & cols = csv_columns();
    for (std::size_t i = 0; i < cols.size(); ++i)
        out << (i ? "," : "") << cols[i];
    out << '\n';
}

/// One row for a two-place report.
inline void write_csv_row(std::ostream & out, ClassificationReport const & r)
{
    auto const & R = r.ramification;
    if (R.size() != 2)
        throw ValidationError("CSV rows describe two-place ramification sets only");
    out << r.field().size() << ',' << csv_quote(poly::format(R[0].generator())) << ','
        << csv_quote(poly::format(R[1].generator())) << ',' << r.genus << ',' << r.fix(1) << ',' << r.fix(2) << ','
        << r.fix(3) << ',' << shimura::to_string(r.verdict) << '\n';
}

/// Compact one-line summary used in sweep listings.
inline std::string summary_line(ClassificationReport const & r)
{
    auto const & R = r.ramification;
    std::ostringstream s;
    std::string places;
    for (std::size_t i = 0; i < R.size(); ++i)
        places += (i ? ", " : "") + poly::format(R[i].generator());
    s << std::left << std::setw(30) << ("{" + places + "}") << " g=" << std::setw(4) << r.genus << " fix=(";
    for (std::size_t i = 0; i < r.fixed_points.size(); ++i)
        s << (i ? "," : "") << r.fixed_points[i].count;
    s << ")  " << verdict_text(r);
    return s.str();
}

inline json finiteness_json(shimura::FinitenessSweep const & sweep, gf::Field const & F)
{
    json j;
    j["field"] = field_json(F);
    j["examined"] = sweep.examined;
    json ms = json::array();
    for (auto dp : sweep.passing_multisets)
        ms.push_back({dp.low, dp.high});
    j["passing_multisets"] = ms;
    json rows = json::array();
    for (auto const & [R, c] : sweep.passing) {
        json places = json::array();
        for (auto const & x : R.places())
            places.push_back({{"generator", poly::format(x.generator())}, {"degree", x.degree()}});
        json row = {{"places", places}, {"o", poly::format(c.o.generator())}, {"lhs", c.lhs.str()}, {"rhs", c.rhs.str()}};
        if (!F.odd_characteristic())
            row["verdict"] = "not classified (even characteristic)";
        rows.push_back(row);
    }
    j["passing"] = rows;
    return j;
}

} // namespace dhyper::report
