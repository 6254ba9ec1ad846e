// voa_lab: scriptable verification checks for lattice vertex algebras.

#include "voalab/checks.hpp"

#include <CLI11.hpp>

#include <filesystem>
#include <fstream>
#include <iostream>

namespace {

using namespace voalab;

struct LatticeFlags {
    std::string gram_file;
    long neg_rank1 = 0;

    void attach(CLI::App* cmd)
    {
        auto* g = cmd->add_option("--gram", gram_file, "JSON file {\"gram\": [[...]]}");
        auto* n = cmd->add_option("--neg-rank1", neg_rank1, "shorthand for the Gram matrix [[-2K]]");
        g->excludes(n);
    }
    bool given() const { return !gram_file.empty() || neg_rank1 != 0; }
    Lattice resolve() const
    {
        if (!gram_file.empty()) return Lattice::from_file(gram_file);
        if (neg_rank1 != 0) return Lattice::negative_rank1(neg_rank1);
        throw CLI::ValidationError("lattice", "one of --gram or --neg-rank1 is required");
    }
};

void print_human(const CheckReport& r)
{
    std::cout << r.name << ": " << to_string(r.verdict) << "\n";
    for (const auto& [key, value] : r.payload.items()) {
        std::string text = value.dump();
        if (text.size() > 160) text = text.substr(0, 157) + "...";
        std::cout << "  " << key << ": " << text << "\n";
    }
}

int emit(const CheckReport& r, bool json, bool timing, bool allow_open)
{
    if (json)
        std::cout << r.to_json(timing).dump(2) << "\n";
    else
        print_human(r);
    if (r.verdict == Verdict::Pass) return 0;
    if (r.verdict == Verdict::NotFound && allow_open) return 0;
    return 1;
}

std::vector<long> range(long lo, long hi)
{
    std::vector<long> out;
    for (long x = lo; x <= hi; ++x) out.push_back(x);
    return out;
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Exact checks for lattice vertex algebras V_L and V_L^+"};
    app.require_subcommand(1);
    app.fallthrough();
    bool json = false, timing = false, allow_open = false;
    app.add_flag("--json", json, "machine-readable report");
    app.add_flag("--timing", timing, "include elapsed seconds in JSON output");
    app.add_flag("--allow-open", allow_open, "treat not-found-within-bounds as success");

    // axioms
    auto* axioms = app.add_subcommand("axioms", "vertex algebra property suite on seeded samples");
    LatticeFlags ax_lat;
    ax_lat.attach(axioms);
    AxiomOptions ax;
    axioms->add_option("--samples", ax.samples, "samples per identity family")->check(CLI::PositiveNumber);
    axioms->add_option("--max-degree", ax.max_degree, "max Fock degree of sampled vectors")->check(CLI::Range(0, 8));
    axioms->add_option("--seed", ax.seed, "64-bit seed");
    axioms->add_flag("--inject-fault", ax.inject_fault, "corrupt the engine (negative control)")->group("");

    // table1
    auto* table1 = app.add_subcommand("table1", "weight-six matrix and determinant");
    long t_m = 1, t_k = 1;
    std::string golden;
    table1->add_option("--m", t_m)->check(CLI::PositiveNumber);
    table1->add_option("--k", t_k)->check(CLI::PositiveNumber);
    table1->add_option("--golden", golden, "expected {\"m\",\"k\",\"matrix\"} JSON");

    // det-scan
    auto* det = app.add_subcommand("det-scan", "interpolate det over an m x k grid");
    long m_max = 6, k_max = 4;
    det->add_option("--m-max", m_max, "scan m = 1..M (M >= 6)")->check(CLI::Range(6L, 40L));
    det->add_option("--k-max", k_max, "scan k = 1..K (K >= 4)")->check(CLI::Range(4L, 40L));

    // witnesses
    auto* wit = app.add_subcommand("witnesses", "lowering and vacuum identities");
    long w_k = 1, n_max = 4;
    wit->add_option("--k", w_k)->check(CLI::PositiveNumber);
    wit->add_option("--n-max", n_max)->check(CLI::PositiveNumber);

    // span
    auto* span = app.add_subcommand("span", "rank of L/J words against the partition count");
    long s_k = 1;
    int cap = 6, guard = kSpanWeightGuard;
    span->add_option("--k", s_k)->check(CLI::PositiveNumber);
    span->add_option("--weight-cap", cap)->check(CLI::NonNegativeNumber);
    span->add_option("--guard", guard, "largest accepted weight cap")->group("");

    // c2-search
    auto* c2 = app.add_subcommand("c2-search", "search for a C2 certificate");
    LatticeFlags c2_lat;
    c2_lat.attach(c2);
    std::string target;
    long c_m = 1, c_k = 1;
    C2Bounds bounds;
    c2->add_option("--target", target, "g1..g11, f1..f7, h1..h3, E, F, J, omega, vacuum, or a Vec JSON file")->required();
    c2->add_option("--m", c_m)->check(CLI::PositiveNumber);
    c2->add_option("--k", c_k)->check(CLI::PositiveNumber);
    c2->add_option("--max-point", bounds.max_point, "max |coordinate| of lattice points")->check(CLI::NonNegativeNumber);
    c2->add_option("--bound-degree", bounds.max_degree, "max Fock degree of factors")->check(CLI::NonNegativeNumber);
    c2->add_option("--max-pairs", bounds.max_pairs, "cap on products examined")->check(CLI::PositiveNumber);
    bool no_route = false;
    c2->add_flag("--no-route", no_route, "bounded search only (vacuum and E otherwise fall back to the reduction route)");

    CLI11_PARSE(app, argc, argv);

    try {
        if (*axioms) return emit(cmd_axioms(ax_lat.resolve(), ax), json, timing, allow_open);
        if (*table1)
            return emit(cmd_table1(t_m, t_k, golden.empty() ? std::nullopt : std::optional<std::string>(golden)),
                        json, timing, allow_open);
        if (*det) return emit(cmd_det_scan(range(1, m_max), range(1, k_max)), json, timing, allow_open);
        if (*wit) return emit(cmd_witnesses(w_k, n_max), json, timing, allow_open);
        if (*span) return emit(cmd_span(s_k, cap, guard), json, timing, allow_open);
        if (*c2) {
            StandardVectors sv(c_k, c_m);
            Lattice lat = c2_lat.given() ? c2_lat.resolve() : sv.lattice();
            Vec vec = Vec::vacuum(lat);
            CertificateRoute route;
            if (std::filesystem::is_regular_file(target)) {
                std::ifstream in(target);
                vec = vec_from_json(lat, nlohmann::json::parse(in));
            } else {
                if (c2_lat.given()) throw std::invalid_argument("named targets live on the rank-one lattice; drop --gram/--neg-rank1");
                vec = sv.by_name(target);
                if (target == "vacuum" || target == "1") route = [&] { return reduction_certificate(c_k, 0); };
                if (target == "E") route = [&] { return reduction_certificate(c_k, c_m + 1); };
            }
            if (no_route) route = nullptr;
            return emit(cmd_c2_search(lat, vec, target, bounds, route), json, timing, allow_open);
        }
    } catch (const std::exception& e) {
        std::cerr << "voa_lab: " << e.what() << "\n";
        return 2;
    }
    return 2;
}
