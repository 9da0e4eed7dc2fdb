// spinonsim command-line driver: experiment configuration, sweeps, and
// figure-data regeneration. Subcommands: gs-prep, fidelity, spinon,
// parity-study, counts, selftest.

#include <filesystem>
#include <fstream>
#include <future>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "spinonsim/errors.hpp"
#include "spinonsim/groundprep.hpp"
#include "spinonsim/hadamard.hpp"
#include "spinonsim/lcu.hpp"
#include "spinonsim/models.hpp"
#include "spinonsim/selftest.hpp"
#include "spinonsim/spinon.hpp"

using json = nlohmann::ordered_json;
using namespace spinonsim;

namespace {

#ifndef SPINONSIM_BUILD_ID
#define SPINONSIM_BUILD_ID "unknown"
#endif

constexpr const char* kBuildId = SPINONSIM_BUILD_ID;

std::string fmt(double v) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.12g", v);
    return buf;
}

// "4..16" (step 2 when both ends are even), "4..16:4", or "4,6,8"
std::vector<int> parse_sites(const std::string& text) {
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ',')) {
        const auto dots = item.find("..");
        if (dots == std::string::npos) {
            out.push_back(std::stoi(item));
            continue;
        }
        const int lo = std::stoi(item.substr(0, dots));
        std::string rest = item.substr(dots + 2);
        int step = 0;
        if (const auto colon = rest.find(':'); colon != std::string::npos) {
            step = std::stoi(rest.substr(colon + 1));
            rest = rest.substr(0, colon);
        }
        const int hi = std::stoi(rest);
        if (step == 0) step = (lo % 2 == 0 && hi % 2 == 0) ? 2 : 1;
        if (step <= 0 || hi < lo) throw ConfigError("bad site range: " + item);
        for (int v = lo; v <= hi; v += step) out.push_back(v);
    }
    if (out.empty()) throw ConfigError("empty site list");
    return out;
}

int parse_layers(const std::string& text) {
    if (text == "L/2" || text == "auto" || text == "-1") return -1;
    return std::stoi(text);
}

std::ofstream open_out(const std::filesystem::path& dir, const std::string& name) {
    std::filesystem::create_directories(dir);
    std::ofstream f(dir / name);
    if (!f) throw ConfigError("cannot open output file: " + (dir / name).string());
    return f;
}

json json_complex(cplx v) { return json::array({v.real(), v.imag()}); }

json prep_to_json(const PrepResult& r) {
    json j;
    j["route"] = r.route;
    j["L"] = r.L;
    j["energy"] = r.energy;
    j["infidelity"] = r.infidelity;
    j["rel_energy_error"] = r.rel_energy_error;
    j["success_probability"] = r.success_probability;
    j["params"] = r.params;
    j["seed"] = r.seed;
    j["converged"] = r.converged;
    j["build"] = kBuildId;
    return j;
}

struct SharedOptions {
    std::string out = "out";
    std::uint64_t seed = 1;
    int jobs = 1;
};

StateVector prepare_ground_state(const SpinModel& model, const std::string& route, int layers,
                                 int restarts, std::uint64_t seed, double* infidelity_out) {
    if (infidelity_out) *infidelity_out = 0.0;
    if (route == "ed") return ground_state_ed(model).ground_state;
    if (route == "vbc") return vbc_state(model.L);
    if (route == "xy") return xy_ground_state(model.L, false).state;
    if (route == "vqe") {
        VqeConfig cfg;
        cfg.layers = layers;
        cfg.restarts = restarts;
        cfg.seed = seed;
        const PrepResult r = vqe_optimize(model, cfg, WarmStart::XY);
        if (infidelity_out) *infidelity_out = r.infidelity;
        return r.state;
    }
    if (route == "gutzwiller") {
        if (model.kind != ModelKind::HaldaneShastry)
            throw ConfigError("gutzwiller preparation requires --model hs");
        const PrepResult r = gutzwiller_ground_state(model.L);
        if (infidelity_out) *infidelity_out = r.infidelity;
        return r.state;
    }
    throw ConfigError("unknown ground-state route: " + route);
}

void write_spinon_csv(std::ofstream& f, const std::vector<SpinonResult>& rows, bool folded) {
    f << "L,q,q_raw,norm,norm_sigma,h_expect,h_sigma,epsilon,epsilon_sigma,"
         "e0_source,method,shots,seed,build\n";
    for (const auto& r : rows) {
        const double q_rep = folded ? MomentumGrid::fold(r.q) : r.q;
        f << r.L << ',' << fmt(q_rep) << ',' << fmt(r.q) << ',' << fmt(r.norm) << ','
          << fmt(r.norm_sigma) << ',';
        if (r.h_defined)
            f << fmt(r.h_expect) << ',' << fmt(r.h_sigma) << ',';
        else
            f << ",,";
        if (r.epsilon_defined)
            f << fmt(r.epsilon) << ',' << fmt(r.epsilon_sigma) << ',';
        else
            f << ",,";
        f << to_string(r.e0_source) << ',' << to_string(r.method) << ',' << r.shots << ','
          << r.seed << ',' << kBuildId << '\n';
    }
}

// --- gs-prep -----------------------------------------------------------------

int cmd_gs_prep(const SharedOptions& shared, const std::string& model_name,
                const std::string& route, const std::string& sites, const std::string& layers,
                int restarts) {
    const ModelKind kind = model_kind_from_string(model_name);
    const bool known = route == "vqe" || route == "gutzwiller" || route == "xy" ||
                       route == "xy-circuit" || route == "vbc";
    if (!known) throw ConfigError("unknown route: " + route);
    if (route == "gutzwiller" && kind != ModelKind::HaldaneShastry)
        throw ConfigError("gutzwiller preparation requires --model hs");
    auto csv = open_out(shared.out, "gs_" + route + "_" + model_name + ".csv");
    csv << "L,route,energy,infidelity,rel_energy_error,success_probability,converged,seed,build\n";
    for (int L : parse_sites(sites)) {
        SpinModel model{kind, 1.0, 1.0, L, true};
        PrepResult r;
        if (route == "vqe") {
            VqeConfig cfg;
            cfg.layers = parse_layers(layers);
            cfg.restarts = restarts;
            cfg.seed = derive_seed(shared.seed, static_cast<std::uint64_t>(L));
            cfg.jobs = shared.jobs;
            r = vqe_optimize(model, cfg, WarmStart::XY);
        } else if (route == "gutzwiller") {
            r = gutzwiller_ground_state(L);
        } else if (route == "xy") {
            r = xy_ground_state(L, false);
        } else if (route == "xy-circuit") {
            r = xy_ground_state(L, true);
        } else {
            r.state = vbc_state(L);
            r.L = L;
            r.route = "vbc";
            const Spectrum ed = ground_state_ed(model);
            r.energy = expectation(r.state, build_hamiltonian(model));
            r.infidelity = 1.0 - fidelity(r.state, ed.ground_state);
            r.rel_energy_error = std::abs((r.energy - ed.ground_energy) / ed.ground_energy);
        }
        csv << L << ',' << r.route << ',' << fmt(r.energy) << ',' << fmt(r.infidelity) << ','
            << fmt(r.rel_energy_error) << ',' << fmt(r.success_probability) << ','
            << (r.converged ? 1 : 0) << ',' << r.seed << ',' << kBuildId << '\n';
        auto jf = open_out(shared.out,
                           "gs_" + route + "_" + model_name + "_L" + std::to_string(L) + ".json");
        jf << prep_to_json(r).dump(2) << '\n';
        std::cout << "gs-prep " << model_name << " " << route << " L=" << L
                  << " infidelity=" << fmt(r.infidelity) << "\n";
    }
    return 0;
}

// --- fidelity ------------------------------------------------------------------

int cmd_fidelity(const SharedOptions& shared, const std::string& pairs, const std::string& sites) {
    auto csv = open_out(shared.out, "fidelity.csv");
    csv << "L,start,model,fidelity,build\n";
    std::stringstream ss(pairs);
    std::string pair;
    std::vector<std::pair<std::string, std::string>> parsed;
    while (std::getline(ss, pair, ',')) {
        const auto colon = pair.find(':');
        if (colon == std::string::npos) throw ConfigError("pair must look like xy:heisenberg");
        parsed.push_back({pair.substr(0, colon), pair.substr(colon + 1)});
    }
    for (int L : parse_sites(sites)) {
        for (const auto& [start, model_name] : parsed) {
            SpinModel model{model_kind_from_string(model_name), 1.0, 1.0, L, true};
            const StateVector gs = ground_state_ed(model).ground_state;
            StateVector init;
            if (start == "xy")
                init = xy_ground_state(L, false).state;
            else if (start == "vbc")
                init = vbc_state(L);
            else
                throw ConfigError("unknown warm start: " + start);
            const double f = fidelity(init, gs);
            csv << L << ',' << start << ',' << model_name << ',' << fmt(f) << ',' << kBuildId
                << '\n';
            std::cout << "fidelity " << start << ":" << model_name << " L=" << L << " F=" << fmt(f)
                      << "\n";
        }
    }
    return 0;
}

// --- spinon --------------------------------------------------------------------

struct SpinonArgs {
    std::string method = "exact";
    std::string model_name = "heisenberg";
    std::string sites = "8";
    std::string gs_route = "ed";
    std::string e0 = "auto";
    std::string q_grid = "folded";
    std::string insertion = "end";
    std::string format = "csv";
    std::string layers = "L/2";
    long shots = 100000;
    int restarts = 10;
    int truncate_histogram = 0;
};

json spinon_rows_json(const std::vector<SpinonResult>& rows, bool folded) {
    json arr = json::array();
    for (const auto& r : rows) {
        json row;
        row["L"] = r.L;
        row["q"] = folded ? MomentumGrid::fold(r.q) : r.q;
        row["q_raw"] = r.q;
        row["norm"] = r.norm;
        row["norm_sigma"] = r.norm_sigma;
        if (r.h_defined) {
            row["h_expect"] = r.h_expect;
            row["h_sigma"] = r.h_sigma;
        }
        if (r.epsilon_defined) {
            row["epsilon"] = r.epsilon;
            row["epsilon_sigma"] = r.epsilon_sigma;
        } else {
            row["epsilon"] = nullptr;
        }
        row["e0_source"] = to_string(r.e0_source);
        row["method"] = to_string(r.method);
        row["shots"] = r.shots;
        row["seed"] = r.seed;
        row["build"] = kBuildId;
        arr.push_back(row);
    }
    return arr;
}

int cmd_spinon(const SharedOptions& shared, const SpinonArgs& a) {
    const ModelKind kind = model_kind_from_string(a.model_name);
    Method method;
    if (a.method == "exact")
        method = Method::Exact;
    else if (a.method == "lcu")
        method = Method::Lcu;
    else if (a.method == "hadamard")
        method = Method::Hadamard;
    else
        throw ConfigError("unknown method: " + a.method);
    const bool folded = a.q_grid != "full";
    const Insertion insertion = a.insertion == "middle" ? Insertion::Middle : Insertion::End;

    struct FitPoint {
        int L;
        double eps0;
        bool defined;
    };
    std::vector<FitPoint> fit_points;

    for (int L : parse_sites(a.sites)) {
        SpinModel model{kind, 1.0, 1.0, L, true};
        if (method == Method::Lcu && 2 * L + 1 > kMaxQubits)
            throw CapacityError("LCU needs 2L+1 qubits; reduce L");
        const std::uint64_t l_seed = derive_seed(shared.seed, static_cast<std::uint64_t>(L));
        double prep_infid = 0.0;
        const StateVector gs = prepare_ground_state(model, a.gs_route, parse_layers(a.layers),
                                                    a.restarts, l_seed, &prep_infid);
        const MomentumGrid grid(L);
        std::vector<SpinonResult> rows(static_cast<std::size_t>(grid.size()));

        const E0Source source = a.e0 == "ed"      ? E0Source::ED
                                : a.e0 == "bethe" ? E0Source::Bethe
                                                  : default_e0_source(model);

        if (method == Method::Exact) {
            const DispersionContext ctx = make_dispersion_context(model, source);
            auto task = [&](int n) { rows[n] = dispersion_exact(gs, ctx, grid.point(n)); };
            if (shared.jobs > 1) {
                std::vector<std::future<void>> futs;
                for (int n = 0; n < grid.size(); ++n)
                    futs.push_back(std::async(std::launch::async, task, n));
                for (auto& f : futs) f.get();
            } else {
                for (int n = 0; n < grid.size(); ++n) task(n);
            }
            fit_points.push_back({L, rows[0].epsilon, rows[0].epsilon_defined});
        } else if (method == Method::Lcu) {
            json hist;
            hist["model"] = a.model_name;
            hist["L"] = L;
            hist["insertion"] = a.insertion;
            hist["gs_route"] = a.gs_route;
            hist["gs_infidelity"] = prep_infid;
            hist["build"] = kBuildId;
            hist["points"] = json::array();
            for (int n = 0; n < grid.size(); ++n) {
                LcuMode mode{true, a.shots, derive_seed(l_seed, static_cast<std::uint64_t>(n))};
                const LcuRun run = run_lcu(gs, grid.point(n), mode, insertion);
                rows[n] = run.result;
                json point;
                point["q"] = grid.point(n);
                point["n_shots"] = a.shots;
                point["seed"] = mode.seed;
                point["N_hat"] = run.result.norm;
                point["sigma"] = run.result.norm_sigma;
                point["exact_success_probability"] = run.p_all_zero;
                json counts = json::object();
                int kept = 0;
                for (const auto& [bits, cnt] : run.histogram) {
                    if (a.truncate_histogram > 0 && kept >= a.truncate_histogram) break;
                    counts[bits] = cnt;
                    ++kept;
                }
                point["counts"] = counts;
                hist["points"].push_back(point);
            }
            auto jf =
                open_out(shared.out, "lcu_" + a.model_name + "_L" + std::to_string(L) + ".json");
            jf << hist.dump(2) << '\n';
        } else {
            const DispersionContext dctx = make_dispersion_context(model, source);
            const HadamardContext hctx = make_hadamard_context(model);
            HadamardMode mode{a.shots > 0, a.shots, l_seed, shared.jobs};
            const OverlapMatrix m = measure_matrices(gs, hctx, mode, true);
            for (int n = 0; n < grid.size(); ++n) {
                rows[n] = reconstruct_energy(m, grid.point(n), dctx);
                rows[n].shots = a.shots;
                rows[n].seed = l_seed;
            }
            json dump;
            dump["model"] = a.model_name;
            dump["L"] = L;
            dump["n_shots"] = a.shots;
            dump["seed"] = l_seed;
            dump["build"] = kBuildId;
            json s = json::array(), t = json::array();
            for (int r = 0; r <= L; ++r) {
                json srow = json::array(), trow = json::array();
                for (int c = 0; c <= L; ++c) {
                    srow.push_back(json_complex(m.s[r][c].value));
                    trow.push_back(json_complex(m.t[r][c].value));
                }
                s.push_back(srow);
                t.push_back(trow);
            }
            dump["s"] = s;
            dump["t"] = t;
            auto jf = open_out(shared.out,
                               "overlap_" + a.model_name + "_L" + std::to_string(L) + ".json");
            jf << dump.dump(2) << '\n';
        }

        const std::string stem = "spinon_" + a.method + "_" + a.model_name + "_L" +
                                 std::to_string(L);
        if (a.format == "json") {
            auto jf = open_out(shared.out, stem + ".json");
            jf << spinon_rows_json(rows, folded).dump(2) << '\n';
        } else {
            auto csv = open_out(shared.out, stem + ".csv");
            write_spinon_csv(csv, rows, folded);
        }
        std::cout << "spinon " << a.method << " " << a.model_name << " L=" << L << " done\n";
    }

    if (method == Method::Exact && fit_points.size() >= 3) {
        std::vector<double> x, y;
        for (const auto& p : fit_points) {
            if (!p.defined) continue;
            x.push_back(1.0 / p.L);
            y.push_back(p.eps0);
        }
        if (x.size() >= 3) {
            const auto coeffs = polyfit(x, y, 2);
            json fit;
            fit["model"] = a.model_name;
            fit["quantity"] = "epsilon(q=0) vs 1/L, second-order polynomial";
            fit["L"] = json::array();
            for (const auto& p : fit_points) fit["L"].push_back(p.L);
            fit["coefficients"] = coeffs; // c0 + c1/L + c2/L^2
            fit["extrapolated_eps0"] = coeffs[0];
            fit["build"] = kBuildId;
            auto jf = open_out(shared.out, "eps0_fit_" + a.model_name + ".json");
            jf << fit.dump(2) << '\n';
            std::cout << "eps0 extrapolation (" << a.model_name << "): " << fmt(coeffs[0]) << "\n";
        }
    }
    return 0;
}

// --- parity-study -----------------------------------------------------------------

int cmd_parity_study(const SharedOptions& shared, const std::string& models,
                     const std::string& sites) {
    auto csv = open_out(shared.out, "parity_norms.csv");
    csv << "model,L,half_parity,q,norm,build\n";
    std::stringstream ss(models);
    std::string name;
    while (std::getline(ss, name, ',')) {
        const ModelKind kind = model_kind_from_string(name);
        for (int L : parse_sites(sites)) {
            if (L % 2 != 0) throw ConfigError("parity study needs even L");
            SpinModel model{kind, 1.0, 1.0, L, true};
            const StateVector gs = ground_state_ed(model).ground_state;
            const MomentumGrid grid(L);
            const char* parity = (L / 2) % 2 == 0 ? "even" : "odd";
            for (double q : grid.points())
                csv << name << ',' << L << ',' << parity << ',' << fmt(q) << ','
                    << fmt(norm_exact(gs, q)) << ',' << kBuildId << '\n';
            std::cout << "parity-study " << name << " L=" << L << " done\n";
        }
    }
    return 0;
}

// --- counts --------------------------------------------------------------------

int cmd_counts(const std::string& model_name, int L, bool dump_hamiltonian, std::ostream& os) {
    const ModelKind kind = model_kind_from_string(model_name);
    SpinModel ext{kind, 1.0, 1.0, L + 1, true};
    const int n_groups = static_cast<int>(commuting_groups(build_hamiltonian(ext)).size());
    const CircuitCounts c = circuit_counts(L, n_groups);
    json j;
    j["model"] = model_name;
    j["L"] = L;
    j["n_groups"] = n_groups;
    j["norm_circuits"] = c.norm_circuits;
    j["energy_circuits"] = c.energy_circuits;
    j["fredkin_per_lcu_end"] = c.fredkin_end;
    j["fredkin_per_lcu_middle"] = c.fredkin_middle;
    j["v_controlled_ops"] = L >= 2 ? 2 * L - 3 : 0;
    if (dump_hamiltonian)
        j["hamiltonian_ext"] = json::parse(hamiltonian_to_json(build_hamiltonian(ext)));
    j["build"] = kBuildId;
    os << j.dump(2) << '\n';
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"single-spinon toolkit: statevector simulation of spin chains"};
    app.require_subcommand(1);
    app.fallthrough(); // global options may follow the subcommand

    SharedOptions shared;
    app.add_option("--out", shared.out, "output directory")->capture_default_str();
    app.add_option("--seed", shared.seed, "base RNG seed")->capture_default_str();
    app.add_option("--jobs", shared.jobs, "worker threads for sweeps")->capture_default_str();

    auto* gs = app.add_subcommand("gs-prep", "prepare ground states, write PrepResult files");
    std::string gs_model = "heisenberg", gs_route = "vqe", gs_sites = "4..8";
    std::string gs_layers = "L/2";
    int gs_restarts = 10;
    gs->add_option("--model", gs_model, "heisenberg|hs|xy");
    gs->add_option("--route", gs_route, "vqe|gutzwiller|xy|xy-circuit|vbc");
    gs->add_option("--L", gs_sites, "site list, e.g. 4..16 or 4,8");
    gs->add_option("--layers", gs_layers, "variational layers (default L/2)");
    gs->add_option("--restarts", gs_restarts, "optimizer restarts");

    auto* fid = app.add_subcommand("fidelity", "warm-start fidelities against exact ground states");
    std::string fid_pairs = "xy:heisenberg,vbc:heisenberg,xy:hs";
    std::string fid_sites = "4..12";
    fid->add_option("--pairs", fid_pairs, "comma list of start:model");
    fid->add_option("--L", fid_sites, "site list");

    auto* sp = app.add_subcommand("spinon", "norm and dispersion sweeps");
    SpinonArgs sa;
    sp->add_option("--method", sa.method, "exact|lcu|hadamard");
    sp->add_option("--model", sa.model_name, "heisenberg|hs");
    sp->add_option("--L", sa.sites, "site list");
    sp->add_option("--gs-route", sa.gs_route, "ed|vbc|xy|vqe|gutzwiller");
    sp->add_option("--shots", sa.shots, "shots per circuit (sampled methods)");
    sp->add_option("--layers", sa.layers, "VQE layers (default L/2)");
    sp->add_option("--restarts", sa.restarts, "VQE restarts");
    sp->add_option("--e0", sa.e0, "auto|ed|bethe");
    sp->add_option("--q-grid", sa.q_grid, "folded|full");
    sp->add_option("--format", sa.format, "csv|json (sweep rows)");
    sp->add_option("--insertion", sa.insertion, "end|middle (LCU)");
    sp->add_option("--truncate-histogram", sa.truncate_histogram,
                   "keep only the first N ancilla basis states");

    auto* par = app.add_subcommand("parity-study", "norm curves split by the parity of L/2");
    std::string par_models = "heisenberg,hs", par_sites = "4..16";
    par->add_option("--models", par_models, "comma list of models");
    par->add_option("--L", par_sites, "site list");

    auto* cnt = app.add_subcommand("counts", "circuit-cost arithmetic");
    std::string cnt_model = "heisenberg";
    int cnt_L = 8;
    cnt->add_option("--model", cnt_model, "heisenberg|hs");
    cnt->add_option("--L", cnt_L, "chain length");
    bool cnt_dump = false;
    cnt->add_flag("--dump-hamiltonian", cnt_dump, "include the extended-chain term list");

    auto* st = app.add_subcommand("selftest", "run the seeded property suites");
    int st_seeds = 100;
    st->add_option("--seeds", st_seeds, "instances per property");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (gs->parsed())
            return cmd_gs_prep(shared, gs_model, gs_route, gs_sites, gs_layers, gs_restarts);
        if (fid->parsed()) return cmd_fidelity(shared, fid_pairs, fid_sites);
        if (sp->parsed()) return cmd_spinon(shared, sa);
        if (par->parsed()) return cmd_parity_study(shared, par_models, par_sites);
        if (cnt->parsed()) return cmd_counts(cnt_model, cnt_L, cnt_dump, std::cout);
        if (st->parsed()) {
            const int failures = run_selftest(shared.seed, st_seeds, std::cout);
            if (failures > 0) {
                std::cerr << failures << " property instances failed\n";
                return 4;
            }
            return 0;
        }
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << '\n';
        return 2;
    } catch (const CapacityError& e) {
        std::cerr << "capacity error: " << e.what() << '\n';
        return 3;
    } catch (const NumericError& e) {
        std::cerr << "numerical failure: " << e.what() << '\n';
        return 4;
    }
    return 0;
}
