#pragma once

// Canonical report emission: one JSON document and one CSV summary per
// scenario run, byte-identical across reruns of the same configuration.
//
// Canonical form: object keys sorted (nlohmann's default std::map backing),
// rationals rendered "n/d", integers as strings when they may exceed 64
// bits, LF line endings, no timestamps, no floats.

#include <nlohmann/json.hpp>

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <limits>
#include <string>
#include <vector>

#include "algebra.hpp"
#include "counterexample.hpp"
#include "exact.hpp"
#include "lifting.hpp"
#include "monoid.hpp"

namespace puilift::report {

using json = nlohmann::json;

inline json rat_json(const Rat& x) { return rat_to_string(x); }

/// Integers land as JSON numbers when they fit in 64 bits, else as decimal
/// strings; report readers must accept both.
inline json int_json(const Int& n) {
    if (n >= std::numeric_limits<std::int64_t>::min() &&
        n <= std::numeric_limits<std::int64_t>::max())
        return n.convert_to<std::int64_t>();
    return int_to_string(n);
}

inline json cert_json(const Cert& c) {
    json o = json::object();
    for (const auto& [idx, mult] : c) o[std::to_string(idx)] = int_json(mult);
    return o;
}

inline json a_coeff_json(const std::map<long, Int>& coeff) {
    json o = json::object();
    for (const auto& [k, m] : coeff) o[std::to_string(k)] = int_json(m);
    return o;
}

inline json decomposition_json(const CanonicalDecomposition& d) {
    json parts = json::object();
    for (const auto& [idx, x_s] : d.parts) parts[std::to_string(idx)] = rat_json(x_s);
    json part_n = json::object();
    for (const auto& [idx, n] : d.part_n) part_n[std::to_string(idx)] = int_json(n);
    return json{{"part_n", part_n},
                {"parts", parts},
                {"value", rat_json(d.value)},
                {"x0", rat_json(d.x0)},
                {"x0_cert", cert_json(d.x0_cert)}};
}

/// Terms ascending by exponent; prime-field coefficients are canonical
/// residues and serialize as integers, rational ones as "n/d".
inline json polynomial_json(const MonoidPolynomial& f) {
    json rows = json::array();
    for (const Term& t : f.terms()) {
        json o = json::object();
        o["exp"] = rat_json(t.exp);
        o["coef"] = f.field().is_prime_field() ? int_json(num(t.coef)) : rat_json(t.coef);
        rows.push_back(std::move(o));
    }
    return rows;
}

inline json membership_m_json(const CounterexampleParams& P, const MembershipM& m) {
    json o = json::object();
    o["a_coeff"] = a_coeff_json(m.a_coeff);
    o["value"] = rat_json(m_cert_value(P, m));
    if (m.bc) o["bc"] = std::string(1, m.bc->first) + "_" + std::to_string(m.bc->second);
    if (!m.reason.empty()) o["reason"] = m.reason;
    return o;
}

// ---------------------------------------------------------------------------
// checks and the report document

struct Check {
    std::string id;      // unique within the run, filesystem-safe
    std::string anchor;  // the law the check instantiates
    std::string status;  // pass | fail | inconclusive
    std::string note;
    json witness;  // written to witnesses/<id>.json when non-null
};

struct Report {
    std::string scenario;
    long depth = 0;
    std::string field;
    unsigned long long seed = 0;
    std::vector<Check> checks;

    void add(Check c) { checks.push_back(std::move(c)); }

    long count(const std::string& status) const {
        long n = 0;
        for (const auto& c : checks) n += (c.status == status) ? 1 : 0;
        return n;
    }

    /// Inconclusive rows are listed but never fail a run.
    bool all_pass() const { return count("fail") == 0; }
    int exit_code() const { return all_pass() ? 0 : 1; }

    json to_json() const {
        json rows = json::array();
        for (const auto& c : checks) {
            json o = json::object();
            o["anchor"] = c.anchor;
            o["id"] = c.id;
            o["note"] = c.note;
            o["status"] = c.status;
            o["witness"] = c.witness.is_null() ? json() : c.witness;
            rows.push_back(std::move(o));
        }
        return json{{"checks", rows},
                    {"counts", json{{"fail", count("fail")},
                                    {"inconclusive", count("inconclusive")},
                                    {"pass", count("pass")}}},
                    {"depth", depth},
                    {"field", field},
                    {"scenario", scenario},
                    {"schema", "puilift-report-1"},
                    {"seed", seed}};
    }

    std::string to_csv() const {
        std::string out = "id,anchor,status,witness\n";
        for (const auto& c : checks) {
            for (char ch : c.id + c.anchor + c.status)
                if (ch == ',' || ch == '\n') throw DomainError("csv field contains a separator");
            out += c.id + "," + c.anchor + "," + c.status + ",";
            if (!c.witness.is_null()) out += "witnesses/" + c.id + ".json";
            out += "\n";
        }
        return out;
    }
};

inline std::string render_json(const json& j) { return j.dump(2) + "\n"; }

inline void write_text(const std::filesystem::path& path, const std::string& content) {
    std::ofstream out(path, std::ios::binary);  // binary keeps LF on every platform
    if (!out) throw std::runtime_error("cannot open for writing: " + path.string());
    out << content;
    if (!out) throw std::runtime_error("write failed: " + path.string());
}

struct EmittedFiles {
    std::filesystem::path json_path;
    std::filesystem::path csv_path;
    std::vector<std::filesystem::path> witness_paths;
};

/// report.json + report.csv + witnesses/<id>.json, all canonical.
inline EmittedFiles emit_report(const Report& rep, const std::filesystem::path& out_dir) {
    std::filesystem::create_directories(out_dir);
    EmittedFiles files;
    files.json_path = out_dir / "report.json";
    write_text(files.json_path, render_json(rep.to_json()));
    files.csv_path = out_dir / "report.csv";
    write_text(files.csv_path, rep.to_csv());
    bool any = false;
    for (const auto& c : rep.checks) any = any || !c.witness.is_null();
    if (any) std::filesystem::create_directories(out_dir / "witnesses");
    for (const auto& c : rep.checks) {
        if (c.witness.is_null()) continue;
        auto p = out_dir / "witnesses" / (c.id + ".json");
        write_text(p, render_json(c.witness));
        files.witness_paths.push_back(std::move(p));
    }
    return files;
}

}  // namespace puilift::report
