#pragma once

/**
 * @file report.hpp
 * @brief Report tables (CSV and JSON), character export, and the frozen
 * constant fixtures used for regression checks of measured constants.
 */

#include <charconv>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "primeavg/characters.hpp"
#include "primeavg/maximal.hpp"

namespace primeavg {

/// Shortest round-trip text is not enough for diffing reports; always 17
/// significant digits, '.' decimal regardless of locale.
inline std::string format_number(double v)
{
    if (std::isnan(v)) return "nan";
    if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
    char buf[40];
    const auto res = std::to_chars(buf, buf + sizeof buf, v, std::chars_format::general, 17);
    return std::string(buf, res.ptr);
}

using Cell = std::variant<std::string, std::int64_t, double>;

struct ReportMeta {
    std::uint64_t seed = 0;
    unsigned n_max = 0;
    std::uint64_t grid = 0;
};

/// Column-ordered table. Doubles go out as 17-digit strings in JSON too, so
/// a CSV and a JSON report of the same run carry identical digits.
class Report {
public:
    explicit Report(std::vector<std::string> columns) : columns_(std::move(columns)) {}

    void add_row(std::vector<Cell> row)
    {
        if (row.size() != columns_.size()) throw std::invalid_argument("report row width mismatch");
        rows_.push_back(std::move(row));
    }

    const std::vector<std::string>& columns() const { return columns_; }
    const std::vector<std::vector<Cell>>& rows() const { return rows_; }

    static std::string text(const Cell& c)
    {
        if (const auto* s = std::get_if<std::string>(&c)) return *s;
        if (const auto* i = std::get_if<std::int64_t>(&c)) return std::to_string(*i);
        return format_number(std::get<double>(c));
    }

    std::string csv() const
    {
        std::ostringstream os;
        auto field = [&](const std::string& s) {
            if (s.find_first_of(",\"\n") == std::string::npos) {
                os << s;
                return;
            }
            os << '"';
            for (char ch : s) os << (ch == '"' ? "\"\"" : std::string(1, ch));
            os << '"';
        };
        for (std::size_t i = 0; i < columns_.size(); ++i) {
            if (i) os << ',';
            field(columns_[i]);
        }
        os << '\n';
        for (const auto& r : rows_) {
            for (std::size_t i = 0; i < r.size(); ++i) {
                if (i) os << ',';
                field(text(r[i]));
            }
            os << '\n';
        }
        return os.str();
    }

    nlohmann::ordered_json json(const ReportMeta& meta) const
    {
        nlohmann::ordered_json out;
        out["meta"] = {{"seed", meta.seed}, {"n_max", meta.n_max}, {"grid", meta.grid}};
        out["rows"] = nlohmann::ordered_json::array();
        for (const auto& r : rows_) {
            nlohmann::ordered_json row;
            for (std::size_t i = 0; i < r.size(); ++i) {
                if (const auto* v = std::get_if<std::int64_t>(&r[i]))
                    row[columns_[i]] = *v;
                else
                    row[columns_[i]] = text(r[i]);
            }
            out["rows"].push_back(std::move(row));
        }
        return out;
    }

private:
    std::vector<std::string> columns_;
    std::vector<std::vector<Cell>> rows_;
};

/// {modulus, conductor, kind, values: [[re, im], ...]} indexed by residue.
inline nlohmann::ordered_json character_to_json(const DirichletCharacter& chi)
{
    nlohmann::ordered_json j;
    j["modulus"] = chi.modulus();
    j["conductor"] = conductor(chi).conductor;
    j["kind"] = to_string(chi.kind());
    auto vals = nlohmann::ordered_json::array();
    for (const auto& v : chi.values()) vals.push_back({v.real(), v.imag()});
    j["values"] = std::move(vals);
    return j;
}

// ---------------------------------------------------------------------------
// Frozen constants
// ---------------------------------------------------------------------------

struct FrozenConstants {
    double drift_tolerance = 0.25;
    std::map<std::string, double> values;

    bool contains(const std::string& key) const { return values.count(key) != 0; }
    double at(const std::string& key) const
    {
        const auto it = values.find(key);
        if (it == values.end()) throw std::out_of_range("no frozen constant named " + key);
        return it->second;
    }
};

inline FrozenConstants load_frozen_constants(const std::filesystem::path& path)
{
    std::ifstream is(path);
    if (!is) throw std::runtime_error("cannot read fixture " + path.string());
    const auto j = nlohmann::json::parse(is);
    FrozenConstants fc;
    fc.drift_tolerance = j.at("drift_tolerance").get<double>();
    for (const auto& [k, v] : j.at("constants").items()) fc.values[k] = std::stod(v.get<std::string>());
    return fc;
}

inline void save_frozen_constants(const std::filesystem::path& path, const FrozenConstants& fc)
{
    nlohmann::ordered_json j;
    j["drift_tolerance"] = fc.drift_tolerance;
    j["regenerate_with"] = "primeavg weak-type-sweep --refreeze --fixture <this file>";
    nlohmann::ordered_json c = nlohmann::ordered_json::object();
    for (const auto& [k, v] : fc.values) c[k] = format_number(v);
    j["constants"] = std::move(c);
    std::ofstream os(path);
    if (!os) throw std::runtime_error("cannot write fixture " + path.string());
    os << j.dump(2) << '\n';
}

/// |measured / frozen - 1| <= tol; a zero frozen value only matches zero.
inline bool within_drift(double measured, double frozen, double tol)
{
    if (frozen == 0.0) return measured == 0.0;
    return std::isfinite(measured) && std::abs(measured / frozen - 1.0) <= tol;
}

// ---------------------------------------------------------------------------
// Weak-type regression cases
// ---------------------------------------------------------------------------

struct WeakTypeCase {
    SetFamily family;
    std::size_t size;
};

inline constexpr unsigned weak_type_n_max = 20;
inline constexpr unsigned weak_type_lambda_count = 10;
inline constexpr std::uint64_t weak_type_seed = 1;

/// Each pair is (F, F with twice the points). The primes case starts from
/// the 564 primes below 2^12.
inline std::vector<std::pair<WeakTypeCase, WeakTypeCase>> weak_type_doubling_pairs()
{
    return {{{SetFamily::interval, 1024}, {SetFamily::interval, 2048}},
            {{SetFamily::random, 1024}, {SetFamily::random, 2048}},
            {{SetFamily::primes, 564}, {SetFamily::primes, 1128}}};
}

inline std::string weak_type_key(const WeakTypeCase& c)
{
    return "weak_type_max_normalized/" + to_string(c.family) + "/" + std::to_string(c.size);
}

inline WeakTypeReport run_weak_type_case(const WeakTypeCase& c, unsigned n_max = weak_type_n_max,
                                         std::uint64_t seed = weak_type_seed)
{
    const auto F = make_test_set(c.family, c.size, seed);
    return weak_type_sweep(F, geometric_lambda_grid(weak_type_lambda_count), n_max,
                           to_string(c.family) + ":" + std::to_string(c.size));
}

}  // namespace primeavg
