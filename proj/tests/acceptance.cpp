// Runs the seven acceptance criteria and prints one verdict line per criterion.
// Usage: acceptance <path to saito executable>

#include "saito/cli.hpp"

#include "checks.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <iostream>
#include <map>

using namespace saito;

namespace {

// Pinned budgets, in seconds.
constexpr double milnor_budget = 1.0;
constexpr double clause_budget = 60.0;
constexpr int min_random_cases = 200;
constexpr std::size_t oracle_mu_cap = 12;

using Clock = std::chrono::steady_clock;

double since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

struct Verdict {
    bool pass = true;
    std::string detail;
};

void report(int n, const Verdict& v) {
    std::cout << "criterion " << n << ": " << (v.pass ? "PASS" : "FAIL") << "  " << v.detail << std::endl;
}

std::size_t ade_mu(int family, int k) {
    switch (family) {
        case 1: return static_cast<std::size_t>(k);
        case 2: return static_cast<std::size_t>(2 * k - 1);
        case 3: return static_cast<std::size_t>(4 * k - 1);
        case 4: return static_cast<std::size_t>(k);
        default: return static_cast<std::size_t>(4 * k + 1);
    }
}

Verdict milnor_numbers() {
    Verdict v;
    double worst = 0;
    int cells = 0;
    for (auto [f, k] : checks::milnor_grid()) {
        const auto& F = checks::family(f, k);
        auto t0 = Clock::now();
        auto jac = jacobian_algebra(F.jac_f->sing);
        double secs = since(t0);
        worst = std::max(worst, secs);
        ++cells;
        bool ok = jac.mu == ade_mu(f, k) && qh_milnor(F.f_weights) == Rational(static_cast<long>(jac.mu)) &&
                  secs < milnor_budget;
        if (!ok && v.pass) {
            v.pass = false;
            v.detail = checks::cell(f, k) + ": mu = " + std::to_string(jac.mu) + ", expected " +
                       std::to_string(ade_mu(f, k)) + ", " + std::to_string(secs) + " s; ";
        }
    }
    v.detail += std::to_string(cells) + " cells, slowest " + std::to_string(worst) + " s";
    return v;
}

Verdict normalization() {
    Verdict v;
    int cells = 0;
    auto fail = [&](const std::string& why) {
        if (v.pass) v.detail = why + "; ";
        v.pass = false;
    };
    for (auto [f, k] : checks::milnor_grid()) {
        const auto& F = checks::family(f, k);
        const auto& jf = *F.jac_f;
        const auto& jg = *F.jac_fg;
        ++cells;
        Poly lhs = jf.nf(hessian(jg.sing) * F.hg.H) * (Rational(1) / static_cast<long>(jg.mu));
        Poly rhs = jf.nf(hessian(jf.sing)) * (Rational(1) / static_cast<long>(jf.mu));
        if (lhs != rhs || rhs.is_zero()) fail(checks::cell(f, k) + ": hessian ratio");
        // Same equation through the dense oracle, which shares no code with nf.
        testing::DenseJacobianOracle oracle(jf.sing);
        if (oracle.normal_form(hessian(jg.sing) * F.hg.H, jf.basis) * (Rational(1) / static_cast<long>(jg.mu)) !=
            oracle.normal_form(hessian(jf.sing), jf.basis) * (Rational(1) / static_cast<long>(jf.mu)))
            fail(checks::cell(f, k) + ": oracle hessian ratio");
        if (f == 2 && F.hg.m != Rational(1, 2 * k - 1)) fail(checks::cell(f, k) + ": m = " + F.hg.m.get_str());
        if (f == 1 && F.HgF * F.cg != Poly::constant(F.orb_table, -1))
            fail(checks::cell(f, k) + ": c_g H_g^F = " + format_poly(F.HgF * F.cg));
    }
    v.detail += std::to_string(cells) + " cells";
    return v;
}

struct GridRun {
    std::vector<ReportEntry> entries;
    double seconds = 0;
};

GridRun verify_grid() {
    std::map<int, std::pair<int, int>> ranges;
    for (auto [f, k] : checks::verification_grid()) {
        auto [it, fresh] = ranges.try_emplace(f, k, k);
        it->second.first = std::min(it->second.first, k);
        it->second.second = std::max(it->second.second, k);
    }
    GridRun out;
    auto t0 = Clock::now();
    for (auto [f, range] : ranges) {
        RunConfig c;
        c.families = {f};
        c.k = range.first;
        c.k_max = range.second;
        c.jobs = 1;
        auto r = run_verify(c);
        out.entries.insert(out.entries.end(), r.entries.begin(), r.entries.end());
    }
    out.seconds = since(t0);
    return out;
}

Verdict clause_verdict(const GridRun& run, const std::string& prefix, bool with_budget) {
    Verdict v;
    std::size_t total = 0, failed = 0;
    std::string examples;
    std::map<std::pair<int, int>, int> failing_cells;
    for (const auto& e : run.entries) {
        if (e.clause.rfind(prefix, 0) != 0 || e.kind != "displayed") continue;
        ++total;
        if (e.equal) continue;
        ++failed;
        ++failing_cells[{e.family, e.k}];
        if (failed <= 3) examples += " " + checks::cell(e.family, e.k) + " " + e.clause + ";";
    }
    v.pass = failed == 0 && total > 0 && (!with_budget || run.seconds < clause_budget);
    v.detail = std::to_string(total) + " identities, " + std::to_string(failed) + " failed in " +
               std::to_string(failing_cells.size()) + " cells";
    if (with_budget) v.detail += ", " + std::to_string(run.seconds) + " s";
    if (failed) v.detail += "; e.g." + examples;
    return v;
}

Verdict property_suites() {
    Verdict v;
    auto grid = checks::verification_grid();
    std::vector<std::pair<std::string, checks::Tally>> suites{
        {"certificates", checks::certificates(grid, 5, 101)},
        {"exact", checks::exact_forms(grid, 5, 102)},
        {"flatness", checks::flatness(grid)},
        {"residues", checks::residues(grid, 16, 103)},
    };
    for (const auto& [name, t] : suites) {
        bool enough = name == "flatness" || t.cases >= min_random_cases;
        if (t.failures || !enough) {
            if (v.pass) v.detail = name + ": " + (t.failures ? t.first_failure : "too few cases") + "; ";
            v.pass = false;
        }
    }
    for (std::size_t i = 0; i < suites.size(); ++i)
        v.detail += (i ? ", " : "") + suites[i].first + " " + std::to_string(suites[i].second.cases);
    return v;
}

Verdict oracle_equivalence() {
    Verdict v;
    auto t = checks::oracle_normal_forms(checks::milnor_grid(), 10, 104);
    v.pass = t.failures == 0 && t.cases >= min_random_cases;
    v.detail = std::to_string(t.cases) + " normal forms (mu <= " + std::to_string(oracle_mu_cap) + "), " +
               std::to_string(t.failures) + " disagreements";
    if (t.failures) v.detail += "; first: " + t.first_failure;
    return v;
}

std::optional<std::string> capture(const std::string& cmd) {
    FILE* pipe = popen(cmd.c_str(), "r");
    if (!pipe) return std::nullopt;
    std::string out;
    char buf[4096];
    std::size_t n;
    while ((n = fread(buf, 1, sizeof buf, pipe)) > 0) out.append(buf, n);
    pclose(pipe);
    return out;
}

Verdict determinism(const std::string& exe) {
    Verdict v;
    // Reports must reach stdout rather than a file.
    unsetenv("SAITO_OUTPUT_DIR");
    std::string cmd = "'" + exe + "' verify --family all --k-max 3 --stable --format json --jobs 4";
    auto a = capture(cmd), b = capture(cmd);
    bool parsed = false;
    if (a) {
        try {
            parsed = nlohmann::json::parse(*a).contains("entries");
        } catch (const nlohmann::json::exception&) {
        }
    }
    v.pass = a && b && parsed && *a == *b;
    v.detail = a ? std::to_string(a->size()) + " bytes, " + (v.pass ? "identical" : "differ or unparsable")
                 : "could not run " + exe;
    return v;
}

}  // namespace

int main(int argc, char** argv) {
    if (argc != 2) {
        std::cerr << "usage: acceptance <saito executable>\n";
        return 2;
    }
    std::vector<Verdict> verdicts;
    verdicts.push_back(milnor_numbers());
    report(1, verdicts.back());
    verdicts.push_back(normalization());
    report(2, verdicts.back());
    GridRun grid = verify_grid();
    verdicts.push_back(clause_verdict(grid, "explicit.", true));
    report(3, verdicts.back());
    verdicts.push_back(clause_verdict(grid, "structure.", false));
    report(4, verdicts.back());
    verdicts.push_back(property_suites());
    report(5, verdicts.back());
    verdicts.push_back(oracle_equivalence());
    report(6, verdicts.back());
    verdicts.push_back(determinism(argv[1]));
    report(7, verdicts.back());
    bool all = std::all_of(verdicts.begin(), verdicts.end(), [](const Verdict& v) { return v.pass; });
    return all ? 0 : 1;
}
