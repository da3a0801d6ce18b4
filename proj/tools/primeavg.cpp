#include <CLI11.hpp>

#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "primeavg/ergodic.hpp"
#include "primeavg/gauss.hpp"
#include "primeavg/maximal.hpp"
#include "primeavg/multipliers.hpp"
#include "primeavg/orlicz.hpp"
#include "primeavg/parallel.hpp"
#include "primeavg/report.hpp"

using namespace primeavg;

namespace {

enum Exit { ok = 0, usage = 1, drift = 2 };

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct Common {
    unsigned threads = 1;
    std::string format = "csv";
    std::string out;
    std::string fixture;
    bool refreeze = false;
    std::uint64_t seed = 1;
};

void add_common(CLI::App* sub, Common& c)
{
    sub->add_option("--threads", c.threads, "worker threads")->check(CLI::Range(1u, 256u));
    sub->add_option("--format", c.format, "report format")->check(CLI::IsMember({"csv", "json"}));
    sub->add_option("--out", c.out, "report path (default stdout)");
    sub->add_option("--seed", c.seed, "seed for randomized inputs");
}

void emit(const Common& c, const Report& r, const ReportMeta& meta)
{
    std::string text = c.format == "json" ? r.json(meta).dump(2) + "\n" : r.csv();
    if (c.out.empty()) {
        std::cout << text;
        return;
    }
    std::ofstream os(c.out);
    if (!os) throw UsageError("cannot write " + c.out);
    os << text;
}

std::vector<double> parse_doubles(const std::string& list)
{
    std::vector<double> out;
    std::stringstream ss(list);
    std::string item;
    while (std::getline(ss, item, ',')) {
        try {
            std::size_t used = 0;
            out.push_back(std::stod(item, &used));
            if (used != item.size()) throw std::invalid_argument(item);
        } catch (const std::exception&) {
            throw UsageError("not a number list: '" + list + "'");
        }
    }
    if (out.empty()) throw UsageError("empty number list");
    return out;
}

// ---------------------------------------------------------------------------

int run_gauss_verify(const Common& c, std::uint64_t q_max)
{
    if (q_max < 1) throw UsageError("--q-max must be positive");
    std::vector<Report> parts(q_max, Report({}));
    std::vector<std::uint64_t> fails(q_max, 0);
    const std::vector<std::string> cols{"q", "q0", "character", "sum", "a_or_x", "abs_error", "pass"};
    parallel_for(q_max, c.threads, [&](std::size_t i) {
        const std::uint64_t q = i + 1;
        Report part(cols);
        auto chars = enumerate_quadratic_characters(q);
        chars.push_back(principal_character(q));
        const auto roots = roots_of_unity(q);
        const double tol = 1e-9 * static_cast<double>(q);
        for (std::size_t k = 0; k < chars.size(); ++k) {
            const auto& chi = chars[k];
            const auto dec = conductor(chi);
            const auto tw = twisted_character_sums_bruteforce(chi);
            const auto ex = gauss_exponential_sums_bruteforce(chi);
            const std::string label = chi.is_principal() ? "principal" : "quadratic_" + std::to_string(k);
            auto row = [&](const char* which, std::uint64_t v, double err) {
                const bool pass = err <= tol;
                fails[i] += !pass;
                part.add_row({std::int64_t(q), std::int64_t(dec.conductor), label, std::string(which), std::int64_t(v),
                              err, std::string(pass ? "pass" : "fail")});
            };
            for (std::uint64_t x = 0; x < q; ++x) {
                const auto xs = static_cast<std::int64_t>(x);
                if (std::gcd(x, q) == 1 || q == 1)
                    row("gauss_sum", x, std::abs(gauss_sum_closed(chi, dec, xs) - gauss_sum_bruteforce(chi, xs, roots)));
                row("twisted_character_sum", x, std::abs(twisted_character_sum_closed(chi, dec, xs) - tw[x]));
                row("gauss_exponential_sum", x, std::abs(gauss_exponential_sum(chi, dec, xs) - ex[x]));
            }
        }
        parts[i] = std::move(part);
    });
    Report all(cols);
    std::uint64_t total_fail = 0;
    for (std::size_t i = 0; i < q_max; ++i) {
        for (const auto& r : parts[i].rows()) all.add_row(r);
        total_fail += fails[i];
    }
    emit(c, all, {c.seed, 0, q_max});
    if (total_fail) std::cerr << total_fail << " closed-form mismatches\n";
    return total_fail ? drift : ok;
}

int run_multiplier_error(const Common& c, unsigned n_min, unsigned n_max, unsigned n_step, std::size_t grid,
                         unsigned s_max, double inject_beta, std::uint64_t inject_q)
{
    if (n_min < 1 || n_min > n_max || n_step < 1) throw UsageError("need 1 <= --n-min <= --n-max and --n-step >= 1");
    ExceptionalTerms ex;
    if (inject_beta > 0) ex = inject_exceptional(inject_q, inject_beta);
    std::vector<unsigned> ns;
    for (unsigned n = n_min; n <= n_max; n += n_step) ns.push_back(n);
    std::vector<double> err(ns.size());
    parallel_for(ns.size(), c.threads, [&](std::size_t i) { err[i] = approximation_error(ns[i], grid, s_max, ex); });
    Report r({"n", "grid", "s_max", "inject_beta", "sup_error"});
    for (std::size_t i = 0; i < ns.size(); ++i)
        r.add_row({std::int64_t(ns[i]), std::int64_t(grid), std::int64_t(s_max), inject_beta, err[i]});
    emit(c, r, {c.seed, n_max, grid});
    return ok;
}

FrozenConstants refreeze_weak_type()
{
    FrozenConstants fc;
    for (const auto& [small, big] : weak_type_doubling_pairs())
        for (const auto& cs : {small, big}) fc.values[weak_type_key(cs)] = run_weak_type_case(cs).max_normalized();
    return fc;
}

int run_weak_type(const Common& c, const std::string& family, std::size_t size, unsigned n_max, unsigned lambdas)
{
    const WeakTypeCase cs{parse_set_family(family), size};
    if (c.refreeze) {
        if (c.fixture.empty()) throw UsageError("--refreeze needs --fixture");
        save_frozen_constants(c.fixture, refreeze_weak_type());
        std::cerr << "wrote " << c.fixture << "\n";
    }
    const auto F = make_test_set(cs.family, size, c.seed);
    const auto rep = weak_type_sweep(F, geometric_lambda_grid(lambdas), n_max, family);
    Report r({"family", "size", "n_max", "lambda", "count", "normalized"});
    for (std::size_t i = 0; i < rep.lambda_grid.size(); ++i)
        r.add_row({family, std::int64_t(rep.set_size), std::int64_t(n_max), rep.lambda_grid[i],
                   std::int64_t(rep.counts[i]), rep.normalized[i]});
    emit(c, r, {c.seed, n_max, next_power_of_two(static_cast<std::size_t>(F.back() - F.front() + 1) +
                                                  (std::size_t{1} << n_max))});

    if (!c.fixture.empty() && !c.refreeze) {
        const auto fc = load_frozen_constants(c.fixture);
        const auto key = weak_type_key(cs);
        const bool comparable = n_max == weak_type_n_max && lambdas == weak_type_lambda_count && c.seed == weak_type_seed;
        if (!comparable || !fc.contains(key)) {
            std::cerr << "no frozen constant for this configuration (" << key << ")\n";
        } else if (!within_drift(rep.max_normalized(), fc.at(key), fc.drift_tolerance)) {
            std::cerr << "drift: " << key << " = " << format_number(rep.max_normalized()) << ", frozen "
                      << format_number(fc.at(key)) << "\n";
            return drift;
        }
    }
    return ok;
}

int run_lp_sweep(const Common& c, const std::string& family, std::size_t size, unsigned n_max,
                 const std::string& p_list)
{
    const auto ps = parse_doubles(p_list);
    const auto f = Signal::indicator(make_test_set(parse_set_family(family), size, c.seed));
    std::vector<double> ratio(ps.size());
    parallel_for(ps.size(), c.threads, [&](std::size_t i) { ratio[i] = lp_maximal_ratio(f, ps[i], n_max); });
    Report r({"family", "size", "n_max", "p", "ratio"});
    for (std::size_t i = 0; i < ps.size(); ++i)
        r.add_row({family, std::int64_t(size), std::int64_t(n_max), ps[i], ratio[i]});
    emit(c, r, {c.seed, n_max, 0});
    return ok;
}

int run_residue(const Common& c, const std::string& family, std::size_t size, unsigned s, double beta,
                unsigned n_max, const std::string& q_list)
{
    std::vector<std::uint64_t> Qs;
    for (double q : parse_doubles(q_list)) {
        if (q < 1 || q != std::floor(q)) throw UsageError("moduli must be positive integers");
        Qs.push_back(static_cast<std::uint64_t>(q));
    }
    const auto f = Signal::indicator(make_test_set(parse_set_family(family), size, c.seed));
    const auto sm = smoothed_maximal(f, s, beta, n_max);
    std::vector<std::pair<std::uint64_t, std::uint64_t>> cells;
    for (auto Q : Qs)
        for (std::uint64_t r = 1; r <= Q; ++r) cells.emplace_back(Q, r);
    std::vector<ResidueMeasurement> out(cells.size());
    parallel_for(cells.size(), c.threads,
                 [&](std::size_t i) { out[i] = residue_equidistribution(sm, cells[i].first, cells[i].second, s); });
    Report r({"Q", "r", "weak_norm", "l1_norm", "ratio"});
    for (const auto& m : out)
        r.add_row({std::int64_t(m.Q), std::int64_t(m.r), m.weak_norm, m.l1_norm, m.ratio()});
    emit(c, r, {c.seed, n_max, sm.maximal.size()});
    return ok;
}

int run_ergodic(const Common& c, const std::string& system, unsigned cf_depth, const std::string& alpha,
                std::uint64_t modulus, const std::string& set, double x0, unsigned n_max, unsigned seeds)
{
    const auto ab = parse_doubles(set);
    if (ab.size() != 2) throw UsageError("--set takes \"a,b\"");
    std::vector<double> starts;
    if (seeds == 0) {
        starts.push_back(x0);
    } else {
        std::mt19937_64 rng(c.seed);
        std::uniform_real_distribution<double> u(0.0, 1.0);
        for (unsigned i = 0; i < seeds; ++i) starts.push_back(u(rng));
    }
    Report r({"start", "x0", "n", "N", "average", "successive_difference", "distance_to_measure"});
    std::vector<OrbitAverageTrace<double>> traces(starts.size());
    if (system == "rotation") {
        CircleRotation rot = CircleRotation::identity();
        if (alpha == "golden")
            rot = CircleRotation::golden(cf_depth);
        else if (alpha == "sqrt2")
            rot = CircleRotation::sqrt2_minus_1(cf_depth);
        else
            rot = CircleRotation::from_real(parse_doubles(alpha).at(0), cf_depth);
        const auto in = circle_arc(ab[0], ab[1]);
        const double measure = ab[0] <= ab[1] ? ab[1] - ab[0] : 1.0 - ab[0] + ab[1];
        parallel_for(starts.size(), c.threads, [&](std::size_t i) {
            traces[i] = convergence_diagnostic(rot, [&](double x) { return in(x) ? 1.0 : 0.0; }, starts[i], n_max,
                                               measure);
        });
    } else if (system == "shift") {
        if (modulus < 1) throw UsageError("--modulus must be positive");
        const CyclicShift sh(modulus);
        const auto lo = static_cast<std::uint64_t>(ab[0]), hi = static_cast<std::uint64_t>(ab[1]);
        if (lo > hi || hi > modulus) throw UsageError("shift --set needs 0 <= a <= b <= modulus");
        const double measure = static_cast<double>(hi - lo) / static_cast<double>(modulus);
        for (auto& s : starts) s = std::floor(s * static_cast<double>(modulus));
        parallel_for(starts.size(), c.threads, [&](std::size_t i) {
            traces[i] = convergence_diagnostic(
                sh, [&](std::uint64_t x) { return x >= lo && x < hi ? 1.0 : 0.0; },
                static_cast<std::uint64_t>(starts[i]), n_max, measure);
        });
    } else {
        throw UsageError("--system must be rotation or shift");
    }
    for (std::size_t i = 0; i < traces.size(); ++i)
        for (std::size_t k = 0; k < traces[i].values.size(); ++k)
            r.add_row({std::int64_t(i), starts[i], std::int64_t(k + 1), std::int64_t(traces[i].scales[k]),
                       traces[i].values[k], traces[i].successive_difference[k], traces[i].distance_to_reference[k]});
    emit(c, r, {c.seed, n_max, 0});
    return ok;
}

int run_orlicz(const Common& c, const std::string& input, unsigned j_max)
{
    std::ifstream is(input);
    if (!is) throw UsageError("cannot read " + input);
    std::vector<std::pair<double, double>> parts;
    std::string line;
    while (std::getline(is, line)) {
        if (line.empty() || line[0] == '#') continue;
        const auto comma = line.find(',');
        if (comma == std::string::npos) throw UsageError("expected value,measure: '" + line + "'");
        try {
            parts.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
        } catch (const std::invalid_argument&) {
            if (parts.empty()) continue;  // header row
            throw UsageError("expected value,measure: '" + line + "'");
        }
    }
    const auto rr = decreasing_rearrangement(parts);
    const auto layers = dyadic_layers(rr, j_max);
    Report r({"row", "j", "value", "measure"});
    r.add_row({std::string("norm"), std::int64_t(0), orlicz_norm(rr), rr.total_measure()});
    r.add_row({std::string("layer_lower_bound"), std::int64_t(0), layer_lower_bound(layers), 0.0});
    for (const auto& L : layers) r.add_row({std::string("layer"), std::int64_t(L.j), L.value, L.measure});
    emit(c, r, {c.seed, j_max, 0});
    return ok;
}

int run_bound_ratios(const Common& c, std::size_t grid, std::uint64_t gauss_q_max)
{
    BoundRatioConfig cfg;
    cfg.grid = grid;
    cfg.gauss_q_max = gauss_q_max;
    Report r({"name", "description", "sup_ratio", "argmax"});
    for (const auto& b : bound_ratio_checks(cfg)) r.add_row({b.name, b.description, b.sup_ratio, b.argmax});
    emit(c, r, {c.seed, 0, grid});
    return ok;
}

int run_characters(const Common& c, std::uint64_t q, bool all)
{
    auto chars = all ? enumerate_characters(q) : enumerate_quadratic_characters(q);
    if (!all) chars.insert(chars.begin(), principal_character(q));
    auto arr = nlohmann::ordered_json::array();
    for (const auto& chi : chars) arr.push_back(character_to_json(chi));
    const std::string text = arr.dump(2) + "\n";
    if (c.out.empty()) {
        std::cout << text;
    } else {
        std::ofstream os(c.out);
        if (!os) throw UsageError("cannot write " + c.out);
        os << text;
    }
    return ok;
}

}  // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Prime-average maximal function experiments"};
    app.require_subcommand(0, 1);
    Common c;

    auto* gv = app.add_subcommand("gauss-verify", "closed Gauss-sum forms against brute force");
    std::uint64_t q_max = 200;
    gv->add_option("--q-max", q_max, "largest modulus");

    auto* me = app.add_subcommand("multiplier-error", "sup-grid error between m_{2^n} and nu_n");
    unsigned me_lo = 8, me_hi = 20, me_step = 4, s_max = 6;
    std::size_t grid = std::size_t{1} << 14;
    double inject_beta = 0;
    std::uint64_t inject_q = 5;
    me->add_option("--n-min", me_lo);
    me->add_option("--n-max", me_hi);
    me->add_option("--n-step", me_step);
    me->add_option("--grid", grid, "power-of-two grid size");
    me->add_option("--s-max", s_max);
    me->add_option("--inject-beta", inject_beta, "synthetic exceptional zero (0 = none)");
    me->add_option("--inject-q", inject_q, "modulus for --inject-beta");

    auto* wt = app.add_subcommand("weak-type-sweep", "superlevel counts of the dyadic prime maximal function on 1_F");
    std::string family = "interval";
    std::size_t size = 1024;
    unsigned n_max = 20, lambda_grid = 10;
    wt->add_option("--family", family)->check(CLI::IsMember({"interval", "random", "primes", "ap"}));
    wt->add_option("--size", size);
    wt->add_option("--n-max", n_max);
    wt->add_option("--lambda-grid", lambda_grid, "number of levels 2^-j");
    wt->add_option("--fixture", c.fixture, "frozen-constant file to compare against");
    wt->add_flag("--refreeze", c.refreeze, "regenerate the fixture");

    auto* lp = app.add_subcommand("lp-sweep", "l^p maximal ratio on 1_F");
    std::string lp_family = "interval", p_list = "1.1,1.25,1.5,1.75,2";
    std::size_t lp_size = 256;
    unsigned lp_n = 12;
    lp->add_option("--family", lp_family)->check(CLI::IsMember({"interval", "random", "primes", "ap"}));
    lp->add_option("--size", lp_size);
    lp->add_option("--n-max", lp_n);
    lp->add_option("--p", p_list, "comma-separated exponents in (1, 2]");

    auto* re = app.add_subcommand("residue-equidist", "weak-type ratios along residue classes");
    std::string re_family = "interval", q_list = "1,2,4";
    std::size_t re_size = 256;
    unsigned re_s = 1, re_n = 12;
    double re_beta = 1.0;
    re->add_option("--family", re_family)->check(CLI::IsMember({"interval", "random", "primes", "ap"}));
    re->add_option("--size", re_size);
    re->add_option("--s", re_s);
    re->add_option("--beta", re_beta);
    re->add_option("--n-max", re_n);
    re->add_option("--moduli", q_list, "comma-separated Q <= 2^{2s}");

    auto* ed = app.add_subcommand("ergodic-demo", "prime orbit average traces");
    std::string system = "rotation", alpha = "golden", set = "0,0.5";
    unsigned cf_depth = 200, ed_n = 20, seeds = 0;
    std::uint64_t modulus = 97;
    double x0 = 0.0;
    ed->add_option("--system", system)->check(CLI::IsMember({"rotation", "shift"}));
    ed->add_option("--alpha", alpha, "golden, sqrt2, or a number in [0, 1)");
    ed->add_option("--alpha-cf-depth", cf_depth);
    ed->add_option("--modulus", modulus, "shift modulus");
    ed->add_option("--set", set, "\"a,b\": arc [a, b) or residues a <= x < b");
    ed->add_option("--x0", x0);
    ed->add_option("--n-max", ed_n);
    ed->add_option("--seeds", seeds, "random starting points (0 = use --x0)");

    auto* on = app.add_subcommand("orlicz-norm", "norm and dyadic layers of a step function");
    std::string input;
    unsigned j_max = 20;
    on->add_option("input", input, "CSV of value,measure rows")->required();
    on->add_option("--j-max", j_max);

    auto* br = app.add_subcommand("bound-ratios", "measured LHS/RHS of kernel and Gauss-sum bounds");
    std::size_t br_grid = std::size_t{1} << 14;
    std::uint64_t br_q = 200;
    br->add_option("--grid", br_grid);
    br->add_option("--gauss-q-max", br_q);

    auto* ch = app.add_subcommand("characters", "character tables mod q as JSON");
    std::uint64_t ch_q = 8;
    bool ch_all = false;
    ch->add_option("--q", ch_q);
    ch->add_flag("--all", ch_all, "every character, not only the real ones");

    for (auto* sub : {gv, me, wt, lp, re, ed, on, br, ch}) add_common(sub, c);

    if (argc < 2) {
        std::cout << app.help();
        return usage;
    }
    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? ok : usage;
    }
    if (app.get_subcommands().empty()) {
        std::cout << app.help();
        return usage;
    }
    if (const char* dir = std::getenv("PRIMEAVG_CACHE_DIR"); dir && *dir) set_prime_cache_dir(dir);

    try {
        if (*gv) return run_gauss_verify(c, q_max);
        if (*me) return run_multiplier_error(c, me_lo, me_hi, me_step, grid, s_max, inject_beta, inject_q);
        if (*wt) return run_weak_type(c, family, size, n_max, lambda_grid);
        if (*lp) return run_lp_sweep(c, lp_family, lp_size, lp_n, p_list);
        if (*re) return run_residue(c, re_family, re_size, re_s, re_beta, re_n, q_list);
        if (*ed) return run_ergodic(c, system, cf_depth, alpha, modulus, set, x0, ed_n, seeds);
        if (*on) return run_orlicz(c, input, j_max);
        if (*br) return run_bound_ratios(c, br_grid, br_q);
        if (*ch) return run_characters(c, ch_q, ch_all);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    } catch (const std::domain_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    } catch (const std::length_error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return usage;
    }
    return ok;
}
