#include "saito/cli.hpp"

#include <CLI11.hpp>

#include <atomic>
#include <chrono>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>
#include <thread>

namespace saito {

using json = nlohmann::ordered_json;

std::vector<std::pair<int, int>> grid(const RunConfig& c) {
    std::vector<int> fams = c.families;
    if (fams.empty()) fams = {1, 2, 3, 4, 5};
    if (c.round_cap < 1) throw ConfigError("--round-cap must be positive");
    std::vector<std::pair<int, int>> out;
    for (int f : fams) {
        if (f < 1 || f > 5) throw ConfigError("--family must be 1..5 or all");
        int lo = family_bounds(f).min_k;
        if (c.k) {
            if (*c.k < lo) throw ConfigError("k = " + std::to_string(*c.k) + " below the minimum " + std::to_string(lo) +
                                             " for family " + std::to_string(f));
            if (c.k_max && *c.k_max < *c.k) throw ConfigError("--k-max below --k");
            int hi = c.k_max ? *c.k_max : *c.k;
            for (int k = *c.k; k <= hi; ++k) out.emplace_back(f, k);
        } else if (c.k_max) {
            // Families whose minimum exceeds the cap are skipped.
            for (int k = lo; k <= *c.k_max; ++k) out.emplace_back(f, k);
        } else {
            out.emplace_back(f, lo);
        }
    }
    if (out.empty()) throw ConfigError("empty family/k selection");
    return out;
}

VerifyResult run_verify(const RunConfig& c) {
    auto cells = grid(c);
    std::vector<std::vector<ReportEntry>> parts(cells.size());
    std::vector<double> secs(cells.size(), 0);
    std::vector<std::exception_ptr> errors(cells.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t i = next++; i < cells.size(); i = next++) {
            try {
                auto t0 = std::chrono::steady_clock::now();
                FamilySpec F = build_family(cells[i].first, cells[i].second, c.round_cap);
                parts[i] = verify_family(F);
                secs[i] = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
            } catch (...) {
                errors[i] = std::current_exception();
            }
        }
    };
    unsigned n = std::max(1u, std::min<unsigned>(c.jobs, static_cast<unsigned>(cells.size())));
    std::vector<std::thread> pool;
    for (unsigned t = 1; t < n; ++t) pool.emplace_back(worker);
    worker();
    for (auto& t : pool) t.join();
    VerifyResult r;
    for (std::size_t i = 0; i < cells.size(); ++i) {
        if (errors[i]) std::rethrow_exception(errors[i]);
        for (auto& e : parts[i]) r.entries.push_back(std::move(e));
        r.seconds.push_back({cells[i], secs[i]});
    }
    return r;
}

json entry_json(const ReportEntry& e) {
    json j;
    j["family"] = e.family;
    j["k"] = e.k;
    j["clause"] = e.clause;
    j["kind"] = e.kind;
    j["lhs"] = e.lhs;
    j["rhs"] = e.rhs;
    j["equal"] = e.equal;
    if (!e.equal) j["residual"] = e.residual;
    if (e.theta) j["theta"] = format_rational(*e.theta);
    j["cg"] = format_rational(e.cg);
    j["cg_formula"] = format_rational(e.cg_formula);
    j["mg"] = format_rational(e.mg);
    return j;
}

json report_json(const RunConfig& c, const VerifyResult& r) {
    json cfg;
    json fams = json::array();
    for (int f : c.families) fams.push_back(f);
    cfg["families"] = c.families.empty() ? json("all") : fams;
    cfg["k"] = c.k ? json(*c.k) : json(nullptr);
    cfg["k_max"] = c.k_max ? json(*c.k_max) : json(nullptr);
    cfg["round_cap"] = c.round_cap;
    cfg["stable"] = c.stable;
    json entries = json::array();
    for (const auto& e : r.entries) entries.push_back(entry_json(e));
    json out;
    out["version"] = version;
    out["config"] = cfg;
    out["entries"] = entries;
    if (!c.stable) {
        json t = json::array();
        for (const auto& [cell, s] : r.seconds) t.push_back({{"family", cell.first}, {"k", cell.second}, {"seconds", s}});
        out["timing"] = t;
    }
    return out;
}

bool all_pass(const std::vector<ReportEntry>& entries) {
    return std::all_of(entries.begin(), entries.end(), [](const ReportEntry& e) { return e.equal; });
}

std::string report_text(const VerifyResult& r) {
    std::ostringstream os;
    std::size_t failed = 0;
    for (const auto& e : r.entries) {
        os << (e.equal ? "PASS" : "FAIL") << "  family " << e.family << " k " << e.k << "  " << e.clause;
        if (e.kind != "displayed") os << "  (" << e.kind << ")";
        if (e.theta) os << "  theta = " << format_rational(*e.theta);
        os << "\n";
        if (!e.equal) {
            ++failed;
            os << "    lhs: " << e.lhs << "\n    rhs: " << e.rhs << "\n";
            if (!e.residual.empty()) os << "    lhs - rhs: " << e.residual << "\n";
        }
    }
    os << r.entries.size() << " entries, " << failed << " failed\n";
    return os.str();
}

namespace {

struct Options {
    std::string family = "all";
    std::optional<int> k;
    std::optional<int> k_max;
    std::string format = "text";
    bool stable = false;
    int round_cap = default_round_cap;
    unsigned jobs = 1;
    std::string out;
    std::string dir;
    std::string elem;
};

RunConfig to_config(const Options& o) {
    RunConfig c;
    if (o.family != "all") {
        try {
            std::size_t used = 0;
            int f = std::stoi(o.family, &used);
            if (used != o.family.size()) throw std::invalid_argument(o.family);
            c.families = {f};
        } catch (const std::logic_error&) {
            throw ConfigError("--family must be 1..5 or all");
        }
    }
    c.k = o.k;
    c.k_max = o.k_max;
    c.format = o.format;
    c.stable = o.stable;
    c.round_cap = o.round_cap;
    c.jobs = o.jobs;
    return c;
}

FamilySpec single_family(const Options& o) {
    RunConfig c = to_config(o);
    if (c.families.size() != 1) throw ConfigError("this command needs a single --family");
    if (c.k_max) throw ConfigError("--k-max applies to verify only");
    auto cells = grid(c);
    return build_family(cells[0].first, cells[0].second, c.round_cap);
}

json monomials_json(const TablePtr& t, const std::vector<Monomial>& ms) {
    json a = json::array();
    for (const auto& m : ms) a.push_back(format_poly(Poly::monomial(t, m)));
    return a;
}

json info_json(const FamilySpec& F) {
    json j;
    j["family"] = F.family;
    j["k"] = F.k;
    j["f"] = format_poly(F.f);
    json group = json::array();
    for (const auto& h : F.G.elements()) group.push_back(h.str());
    j["group"] = group;
    j["g"] = F.g.str();
    j["age_g"] = format_rational(F.g.age());
    j["f_g"] = format_poly(F.jac_fg->sing.poly);
    j["fbar"] = format_poly(F.fbar);
    j["Fbar"] = format_poly(F.Fbar->F);
    j["FG"] = format_poly(F.FG->F);
    j["mu_f"] = F.jac_f->mu;
    j["mu_fg"] = F.jac_fg->mu;
    j["mu_fbar"] = F.jac_fbar->mu;
    j["B_id"] = monomials_json(F.orb_table, F.B_id);
    j["B_g"] = monomials_json(F.orb_table, F.B_g);
    j["H_g"] = format_poly(F.hg.H);
    j["H_g_F"] = format_poly(F.HgF);
    j["mg"] = format_rational(F.hg.m);
    j["cg"] = format_rational(F.cg);
    j["cg_formula"] = format_rational(F.cg_formula);
    j["involution"] = F.p.has_value();
    return j;
}

void print_kv(std::ostream& out, const json& j) {
    for (const auto& [key, v] : j.items()) {
        out << key << ": ";
        if (v.is_string()) out << v.get<std::string>();
        else if (v.is_array()) {
            std::string s;
            for (const auto& x : v) s += (s.empty() ? "" : ", ") + (x.is_string() ? x.get<std::string>() : x.dump());
            out << s;
        } else out << v.dump();
        out << "\n";
    }
}

void emit(std::ostream& out, const Options& o, const json& j) {
    if (o.format == "json") out << j.dump(2) << "\n";
    else print_kv(out, j);
}

json jacobian_json(const JacobianAlgebra& A) {
    json j;
    j["poly"] = format_poly(A.sing.poly);
    j["mu"] = A.mu;
    j["mu_weights"] = A.sing.weights ? json(format_rational(qh_milnor(*A.sing.weights))) : json(nullptr);
    json gb = json::array();
    for (const auto& g : A.gb.basis) gb.push_back(format_poly(g));
    j["groebner"] = gb;
    j["basis"] = monomials_json(A.sing.poly.table(), A.basis);
    j["hessian_class"] = A.sing.vars.empty() ? std::string("1") : format_poly(A.nf(hessian(A.sing)));
    return j;
}

std::filesystem::path output_path(const std::string& requested, const std::string& fallback_name) {
    const char* dir = std::getenv("SAITO_OUTPUT_DIR");
    if (requested.empty()) {
        if (!dir || !*dir) return {};
        return std::filesystem::path(dir) / fallback_name;
    }
    std::filesystem::path p(requested);
    if (p.is_relative() && dir && *dir) p = std::filesystem::path(dir) / p;
    return p;
}

void write_file(const std::filesystem::path& p, const std::string& body) {
    if (p.has_parent_path()) std::filesystem::create_directories(p.parent_path());
    std::ofstream f(p, std::ios::binary);
    if (!f) throw std::runtime_error("cannot write " + p.string());
    f << body;
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
    CLI::App app{"Exact Gauss-Manin connections of Landau-Ginzburg orbifolds", "saito"};
    app.require_subcommand(1);
    app.set_version_flag("--version", version);
    Options o;

    auto common = [&](CLI::App* s) {
        s->add_option("--family", o.family, "Family 1..5 (verify also accepts all)");
        s->add_option("--k", o.k, "Series parameter");
        s->add_option("--format", o.format, "Output format")->check(CLI::IsMember({"text", "json"}));
        s->add_option("--round-cap", o.round_cap, "Reduction round cap");
    };
    auto* info = app.add_subcommand("info", "Family data: f, G, resolution, unfoldings, bases, H_g, constants");
    common(info);
    auto* jac = app.add_subcommand("jacobian", "Jacobian algebras of f, f^g and the resolution polynomial");
    common(jac);
    jac->add_option("--elem", o.elem, "Polynomial in x to put in normal form modulo the Jacobian ideal of f");
    auto* hg = app.add_subcommand("hg", "Hessian minor, normalization constant and twisted product data");
    common(hg);
    auto* red = app.add_subcommand("reduce", "Reduce a representative in the Brieskorn lattice of F^G");
    common(red);
    red->add_option("--elem", o.elem, "Polynomial in x, v_id and z")->required();
    auto* con = app.add_subcommand("connection", "Orbifold Gauss-Manin connection on a sector element");
    common(con);
    con->add_option("--dir", o.dir, "Direction such as v_id0 or v_g^0")->required();
    con->add_option("--elem", o.elem, "Element such as x1^2*xi_id + xi_g")->required();
    auto* prod = app.add_subcommand("product-table", "Orbifold product table of the sector bases");
    common(prod);
    auto* ver = app.add_subcommand("verify", "Verify every clause for the selected families");
    common(ver);
    ver->add_option("--k-max", o.k_max, "Largest k (from each family's minimum, or from --k)");
    ver->add_flag("--stable", o.stable, "Omit timing so output is byte-identical across runs");
    ver->add_option("--jobs", o.jobs, "Worker threads")->check(CLI::PositiveNumber);
    ver->add_option("--out", o.out, "Report file (relative paths resolve under SAITO_OUTPUT_DIR)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e, out, err);
        return code == 0 ? 0 : 2;
    }

    try {
        if (*info) {
            emit(out, o, info_json(single_family(o)));
        } else if (*jac) {
            FamilySpec F = single_family(o);
            json j;
            j["f"] = jacobian_json(*F.jac_f);
            j["f_g"] = jacobian_json(*F.jac_fg);
            j["fbar"] = jacobian_json(*F.jac_fbar);
            if (!o.elem.empty()) j["normal_form"] = format_poly(F.jac_f->nf(parse_poly(o.elem, F.orb_table)));
            if (o.format == "json") {
                out << j.dump(2) << "\n";
            } else {
                for (const char* key : {"f", "f_g", "fbar"}) {
                    out << "[" << key << "]\n";
                    print_kv(out, j[key]);
                }
                if (j.contains("normal_form")) out << "normal_form: " << j["normal_form"].get<std::string>() << "\n";
            }
        } else if (*hg) {
            FamilySpec F = single_family(o);
            json j;
            j["minor"] = format_poly(F.hg.minor);
            j["mg"] = format_rational(F.hg.m);
            j["H_g"] = format_poly(F.hg.H);
            j["H_g_F"] = format_poly(F.HgF);
            j["cg"] = format_rational(F.cg);
            j["cg_formula"] = format_rational(F.cg_formula);
            j["cg_H_g_F"] = format_poly(F.HgF * F.cg);
            j["cg_H_g_F_class"] = format_class(F, lift_id(F, F.HgF * F.cg));
            emit(out, o, j);
        } else if (*red) {
            FamilySpec F = single_family(o);
            Poly rep = parse_poly(o.elem, F.orb_table);
            Reduction r = reduce_to_basis(*F.FG, rep, o.round_cap);
            json j;
            json coords = json::object();
            for (std::size_t a = 0; a < r.coords.size(); ++a)
                if (!r.coords[a].is_zero()) coords[format_poly(F.FG->lattice[a])] = format_poly(r.coords[a]);
            j["input"] = format_poly(rep);
            j["coordinates"] = coords;
            j["rounds"] = r.rounds;
            j["certificate"] = check_certificate(*F.FG, rep, r);
            std::string cls;
            try {
                cls = format_class(F, lift_id(F, rep));
            } catch (const ReductionFailure&) {
                cls = "not G-invariant";
            }
            j["class"] = cls;
            if (o.format == "json") {
                out << j.dump(2) << "\n";
            } else {
                out << "input: " << j["input"].get<std::string>() << "\n";
                for (const auto& [m, c] : coords.items()) out << "  [" << m << "]: " << c.get<std::string>() << "\n";
                out << "class: " << cls << "\nrounds: " << r.rounds << "\ncertificate: " << (j["certificate"].get<bool>() ? "ok" : "FAILED")
                    << "\n";
            }
        } else if (*con) {
            FamilySpec F = single_family(o);
            Direction d;
            try {
                d = parse_direction(o.dir);
                bar_param_index(F, d);
            } catch (const std::logic_error& e) {
                throw ConfigError(e.what());
            }
            OrbifoldClass e = parse_class(F, o.elem);
            OrbifoldClass r = orbifold_gm(F, d, e);
            if (o.format == "json") {
                json j;
                j["direction"] = direction_name(d);
                j["element"] = format_class(F, e);
                j["result"] = format_class(F, r);
                j["grading"] = grading_of(F, r);
                out << j.dump(2) << "\n";
            } else {
                out << format_class(F, r) << "\n";
            }
        } else if (*prod) {
            FamilySpec F = single_family(o);
            OrbifoldAlgebra A = F.algebra();
            std::vector<std::pair<std::string, SectorElement>> basis;
            GroupElement id = GroupElement::identity(3);
            for (std::size_t a = 0; a < F.k_id; ++a)
                basis.push_back({format_class(F, F.unit(Sector::id, a)), {id, F.basis_poly(Sector::id, a)}});
            for (std::size_t b = 0; b < F.k_g; ++b)
                basis.push_back({format_class(F, F.unit(Sector::g, b)), {F.g, F.basis_poly(Sector::g, b)}});
            json rows = json::array();
            for (const auto& [na, ea] : basis)
                for (const auto& [nb, eb] : basis) {
                    std::string v = format_class(F, class_of(F, A.product(ea, eb)));
                    rows.push_back({{"a", na}, {"b", nb}, {"product", v}});
                    if (o.format != "json") out << "(" << na << ") . (" << nb << ") = " << v << "\n";
                }
            if (o.format == "json") out << rows.dump(2) << "\n";
        } else if (*ver) {
            RunConfig c = to_config(o);
            VerifyResult r = run_verify(c);
            std::string body = c.format == "json" ? report_json(c, r).dump(2) + "\n" : report_text(r);
            auto path = output_path(o.out, c.format == "json" ? "verify.json" : "verify.txt");
            if (path.empty()) out << body;
            else {
                write_file(path, body);
                std::size_t failed = 0;
                for (const auto& e : r.entries) failed += !e.equal;
                out << "wrote " << path.string() << ": " << r.entries.size() << " entries, " << failed << " failed\n";
            }
            return all_pass(r.entries) ? 0 : 1;
        }
    } catch (const ConfigError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const FamilyError& e) {
        err << "error: " << e.what() << "\n";
        return 2;
    } catch (const ParseError& e) {
        err << "parse error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        err << "error: " << e.what() << "\n";
        return 3;
    }
    return 0;
}

}  // namespace saito
