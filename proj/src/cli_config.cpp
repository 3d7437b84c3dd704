#include "bhvar/cli_config.hpp"

#include "bhvar/catstates.hpp"

#include <chrono>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <set>
#include <sstream>

namespace bhvar {

namespace {

void check_keys(const json& obj, const std::string& path, const std::set<std::string>& allowed) {
    if (!obj.is_object()) {
        throw std::invalid_argument("config: " + path + " must be an object");
    }
    for (const auto& item : obj.items()) {
        if (!allowed.count(item.key())) {
            throw std::invalid_argument("config: unknown key \"" + path + "/" + item.key() + "\"");
        }
    }
}

double require_number(const json& obj, const std::string& path, const std::string& key) {
    if (!obj.contains(key) || !obj.at(key).is_number()) {
        throw std::invalid_argument("config: missing or non-numeric key \"" + path + "/" + key +
                                    "\"");
    }
    return obj.at(key).get<double>();
}

int require_int(const json& obj, const std::string& path, const std::string& key) {
    if (!obj.contains(key) || !obj.at(key).is_number_integer()) {
        throw std::invalid_argument("config: missing or non-integer key \"" + path + "/" + key +
                                    "\"");
    }
    return obj.at(key).get<int>();
}

BHParams parse_model(const json& doc) {
    if (!doc.contains("model")) {
        throw std::invalid_argument("config: missing key \"/model\"");
    }
    const json& m = doc.at("model");
    check_keys(m, "model", {"M", "U", "T", "periodic", "hopping"});
    BHParams params;
    params.M = require_int(m, "model", "M");
    params.U = require_number(m, "model", "U");
    if (m.contains("hopping")) {
        if (m.contains("T") || m.contains("periodic")) {
            throw std::invalid_argument(
                "config: \"model/hopping\" excludes \"model/T\" and \"model/periodic\"");
        }
        const json& rows = m.at("hopping");
        if (!rows.is_array() || static_cast<int>(rows.size()) != params.M) {
            throw std::invalid_argument("config: \"model/hopping\" must be an MxM array");
        }
        params.hopping.entries = Eigen::MatrixXd(params.M, params.M);
        for (int j = 0; j < params.M; ++j) {
            const json& row = rows[j];
            if (!row.is_array() || static_cast<int>(row.size()) != params.M) {
                throw std::invalid_argument("config: \"model/hopping\" must be an MxM array");
            }
            for (int l = 0; l < params.M; ++l) {
                params.hopping.entries(j, l) = row[l].get<double>();
            }
        }
    } else {
        const double T = require_number(m, "model", "T");
        const bool periodic = m.value("periodic", true);
        params.hopping = build_ring_hopping(params.M, T, periodic);
    }
    if (auto issue = validate(params)) {
        throw std::invalid_argument("config: model invalid: " + *issue);
    }
    return params;
}

Scheme parse_scheme(const json& doc) {
    if (!doc.contains("scheme") || !doc.at("scheme").is_string()) {
        throw std::invalid_argument("config: missing key \"/scheme\"");
    }
    const std::string s = doc.at("scheme").get<std::string>();
    if (s == "gutzwiller") return Scheme::Gutzwiller;
    if (s == "dnls") return Scheme::Dnls;
    if (s == "sum") return Scheme::Sum;
    if (s == "exact") return Scheme::Exact;
    throw std::invalid_argument("config: \"/scheme\" must be gutzwiller|dnls|sum|exact, got \"" +
                                s + "\"");
}

// The coherent-parameter initial state of a dnls/gutzwiller run.
GlauberState parse_initial_coherent(const json& init, const RunConfig& config) {
    const std::string type = init.at("type").get<std::string>();
    if (type == "coherent") {
        check_keys(init, "initial", {"type", "z"});
        return make_glauber_state(vector_from_json(init.at("z"), "initial/z"));
    }
    if (type == "plane_wave") {
        check_keys(init, "initial", {"type", "k", "amplitude"});
        const int k = require_int(init, "initial", "k");
        cx A{1.0, 0.0};
        if (init.contains("amplitude")) A = complex_from_json(init.at("amplitude"), "initial/amplitude");
        return make_glauber_state(
            plane_wave(config.model.M, k, A, config.model, PlaneWaveScheme::Dnls).state);
    }
    if (type == "localized") {
        check_keys(init, "initial", {"type", "site", "N"});
        const int site = require_int(init, "initial", "site");
        const int N = require_int(init, "initial", "N");
        if (site < 1 || site > config.model.M) {
            throw std::invalid_argument("config: \"initial/site\" out of range");
        }
        Vec z = Vec::Zero(config.model.M);
        z(site - 1) = std::sqrt(static_cast<double>(N));
        return make_glauber_state(std::move(z));
    }
    throw std::invalid_argument("config: \"initial/type\" = \"" + type +
                                "\" is not valid for this scheme");
}

// The fixed-N initial state of a sum/exact run.
SuMState parse_initial_sum(const json& init, const RunConfig& config) {
    const std::string type = init.at("type").get<std::string>();
    if (type == "suM") {
        check_keys(init, "initial", {"type", "N", "xi"});
        if (!init.contains("N")) {
            throw std::invalid_argument("config: missing key \"initial/N\"");
        }
        return make_sum_state(require_int(init, "initial", "N"),
                              vector_from_json(init.at("xi"), "initial/xi"));
    }
    if (type == "plane_wave") {
        check_keys(init, "initial", {"type", "k", "N"});
        const int k = require_int(init, "initial", "k");
        if (!init.contains("N")) {
            throw std::invalid_argument("config: missing key \"initial/N\"");
        }
        const int N = require_int(init, "initial", "N");
        const cx A = std::sqrt(static_cast<double>(N) / config.model.M);
        const PlaneWave pw = plane_wave(config.model.M, k, A, config.model, PlaneWaveScheme::Sum, N);
        return make_sum_state(N, Vec(pw.state / std::sqrt(static_cast<double>(N))));
    }
    if (type == "localized") {
        check_keys(init, "initial", {"type", "site", "N"});
        const int site = require_int(init, "initial", "site");
        const int N = require_int(init, "initial", "N");
        if (site < 1 || site > config.model.M) {
            throw std::invalid_argument("config: \"initial/site\" out of range");
        }
        Vec xi = Vec::Zero(config.model.M);
        xi(site - 1) = 1.0;
        return make_sum_state(N, std::move(xi));
    }
    throw std::invalid_argument("config: \"initial/type\" = \"" + type +
                                "\" is not valid for this scheme");
}

}  // namespace

int dim_cap_from_env() {
    if (const char* env = std::getenv("BHVAR_DIM_CAP")) {
        char* end = nullptr;
        const long cap = std::strtol(env, &end, 10);
        if (end == env || *end != '\0' || cap < 1) {
            throw std::invalid_argument("BHVAR_DIM_CAP must be a positive integer");
        }
        return static_cast<int>(cap);
    }
    return kDefaultDimCap;
}

RunConfig parse_config(const json& doc, int dim_cap) {
    check_keys(doc, "", {"model", "scheme", "initial", "n_max", "integrator", "output"});
    RunConfig config;
    config.dim_cap = dim_cap;
    config.model = parse_model(doc);
    config.scheme = parse_scheme(doc);
    config.integrator.t_end = 10.0;

    if (doc.contains("integrator")) {
        const json& integ = doc.at("integrator");
        check_keys(integ, "integrator", {"method", "dt", "t_end", "record_every"});
        if (integ.contains("method")) {
            const std::string method = integ.at("method").get<std::string>();
            if (method == "rk4") {
                config.integrator.method = StepMethod::Rk4;
            } else if (method == "midpoint") {
                config.integrator.method = StepMethod::Midpoint;
            } else {
                throw std::invalid_argument("config: \"integrator/method\" must be rk4|midpoint");
            }
        }
        if (integ.contains("dt")) config.integrator.dt = integ.at("dt").get<double>();
        if (integ.contains("t_end")) config.integrator.t_end = integ.at("t_end").get<double>();
        if (integ.contains("record_every")) {
            config.integrator.record_every = integ.at("record_every").get<int>();
        }
    }
    validate(config.integrator);

    if (!doc.contains("initial")) {
        throw std::invalid_argument("config: missing key \"/initial\"");
    }
    const json& init = doc.at("initial");
    if (!init.is_object() || !init.contains("type") || !init.at("type").is_string()) {
        throw std::invalid_argument("config: \"initial/type\" is required");
    }

    switch (config.scheme) {
        case Scheme::Dnls:
            config.initial_coherent = parse_initial_coherent(init, config);
            break;
        case Scheme::Sum:
        case Scheme::Exact:
            config.initial_sum = parse_initial_sum(init, config);
            break;
        case Scheme::Gutzwiller: {
            const std::string type = init.at("type").get<std::string>();
            if (type == "gutzwiller") {
                check_keys(init, "initial", {"type", "M", "n_max", "f"});
                config.initial_table = gutzwiller_state_from_json(init);
                config.n_max = config.initial_table->n_max;
                if (config.initial_table->M != config.model.M) {
                    throw std::invalid_argument(
                        "config: \"initial/f\" has a different site count than the model");
                }
            } else {
                config.initial_coherent = parse_initial_coherent(init, config);
            }
            break;
        }
    }

    if (doc.contains("n_max")) {
        if (config.scheme != Scheme::Gutzwiller) {
            throw std::invalid_argument("config: \"/n_max\" applies only to scheme gutzwiller");
        }
        if (config.initial_table) {
            throw std::invalid_argument(
                "config: \"/n_max\" conflicts with an explicit coefficient table");
        }
        config.n_max = doc.at("n_max").get<int>();
    } else if (config.scheme == Scheme::Gutzwiller && config.initial_coherent) {
        config.n_max = default_n_max(config.initial_coherent->mean_total(), config.model.M);
    }

    if (doc.contains("output")) {
        const json& outp = doc.at("output");
        check_keys(outp, "output", {"csv", "summary", "snapshots"});
        if (outp.contains("csv")) config.csv_path = outp.at("csv").get<std::string>();
        if (outp.contains("summary")) config.summary_path = outp.at("summary").get<std::string>();
        if (outp.contains("snapshots")) {
            config.snapshots_path = outp.at("snapshots").get<std::string>();
        }
    }

    // Capacity is a parse-time failure for the exact scheme.
    if (config.scheme == Scheme::Exact) {
        const long long dim = sector_dimension(config.model.M, config.initial_sum->N);
        if (dim > config.dim_cap) {
            std::ostringstream os;
            os << "config: exact sector dimension " << dim << " exceeds cap " << config.dim_cap;
            throw CapacityError(os.str());
        }
    }
    return config;
}

RunConfig load_config(const std::string& path, int dim_cap) {
    std::ifstream in(path);
    if (!in) {
        throw std::runtime_error("load_config: cannot open \"" + path + "\"");
    }
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& err) {
        throw std::invalid_argument("load_config: " + std::string(err.what()));
    }
    return parse_config(doc, dim_cap);
}

std::string format_csv_double(double value) {
    char buf[64];
    std::snprintf(buf, sizeof(buf), "%.17g", value);
    return buf;
}

namespace {

struct EvolutionProblem {
    Vec initial;
    RhsFn rhs;
    std::vector<Monitor> monitors;  // energy, N_bar, site_1..site_M
    std::function<json(const Vec&)> extra_drifts;
};

EvolutionProblem make_problem(const RunConfig& config) {
    EvolutionProblem prob;
    const BHParams& model = config.model;
    switch (config.scheme) {
        case Scheme::Dnls: {
            prob.initial = config.initial_coherent->z;
            prob.rhs = [model](const Vec& y) { return rhs_dnls(DnlsState{y}, model); };
            prob.monitors.push_back(
                {"energy", [model](const Vec& y) { return energy_dnls(DnlsState{y}, model).value; }});
            prob.monitors.push_back({"N_bar", [](const Vec& y) { return y.squaredNorm(); }});
            for (int i = 0; i < model.M; ++i) {
                prob.monitors.push_back({"site_" + std::to_string(i + 1),
                                         [i](const Vec& y) { return std::norm(y(i)); }});
            }
            prob.extra_drifts = [](const Vec&) { return json::object(); };
            break;
        }
        case Scheme::Sum: {
            const int N = config.initial_sum->N;
            prob.initial = std::sqrt(static_cast<double>(N)) * config.initial_sum->xi;
            prob.rhs = [model, N](const Vec& y) { return rhs_sum(PsiState{N, y}, model); };
            prob.monitors.push_back({"energy", [model, N](const Vec& y) {
                                         return energy_sum(PsiState{N, y}, model).value;
                                     }});
            prob.monitors.push_back({"N_bar", [](const Vec& y) { return y.squaredNorm(); }});
            for (int i = 0; i < model.M; ++i) {
                prob.monitors.push_back({"site_" + std::to_string(i + 1),
                                         [i](const Vec& y) { return std::norm(y(i)); }});
            }
            prob.extra_drifts = [](const Vec&) { return json::object(); };
            break;
        }
        case Scheme::Gutzwiller: {
            GutzwillerState start = config.initial_table
                                        ? *config.initial_table
                                        : coherent_embed(*config.initial_coherent, config.n_max);
            const int M = start.M;
            const int cols = start.n_max + 1;
            auto unpack = [M, cols, start](const Vec& y) {
                GutzwillerState s = start;
                for (int i = 0; i < M; ++i) s.f.row(i) = y.segment(i * cols, cols).transpose();
                return s;
            };
            Vec y0(M * cols);
            for (int i = 0; i < M; ++i) y0.segment(i * cols, cols) = start.f.row(i).transpose();
            prob.initial = std::move(y0);
            prob.rhs = [model, unpack, M, cols](const Vec& y) {
                const Eigen::MatrixXcd fdot = rhs_gutzwiller(unpack(y), model);
                Vec out(M * cols);
                for (int i = 0; i < M; ++i) out.segment(i * cols, cols) = fdot.row(i).transpose();
                return out;
            };
            prob.monitors.push_back({"energy", [model, unpack](const Vec& y) {
                                         return energy_F(unpack(y), model).value;
                                     }});
            prob.monitors.push_back(
                {"N_bar", [unpack](const Vec& y) { return invariants_F(unpack(y)).N_bar; }});
            for (int i = 1; i <= M; ++i) {
                prob.monitors.push_back({"site_" + std::to_string(i), [unpack, i](const Vec& y) {
                                             return site_number(unpack(y), i);
                                         }});
            }
            prob.extra_drifts = [unpack](const Vec& y) {
                const GutzwillerInvariants inv = invariants_F(unpack(y));
                json extra;
                extra["I_max_deviation"] = (inv.I.array() - 1.0).abs().maxCoeff();
                return extra;
            };
            break;
        }
        case Scheme::Exact:
            throw std::logic_error("make_problem: exact scheme is handled separately");
    }
    return prob;
}

void write_csv(const std::string& path, const std::vector<double>& times,
               const std::vector<std::string>& names,
               const std::vector<std::vector<double>>& series) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("run_evolution: cannot write \"" + path + "\"");
    out << "time";
    for (const std::string& n : names) out << "," << n;
    out << "\n";
    for (size_t row = 0; row < times.size(); ++row) {
        out << format_csv_double(times[row]);
        for (const auto& s : series) out << "," << format_csv_double(s[row]);
        out << "\n";
    }
}

void write_snapshots(const std::string& path, const std::vector<double>& times,
                     const std::vector<Vec>& snapshots) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("run_evolution: cannot write \"" + path + "\"");
    for (size_t i = 0; i < snapshots.size(); ++i) {
        json line;
        line["t"] = times[i];
        line["state"] = vector_to_json(snapshots[i]);
        out << line.dump() << "\n";
    }
}

EvolveSummary run_exact_evolution(const RunConfig& config) {
    const auto start_wall = std::chrono::steady_clock::now();
    const SuMState& init = *config.initial_sum;
    BasisPtr basis = enumerate_sector(config.model.M, init.N, config.dim_cap);
    const SectorVector psi0 = sum_fock_amplitudes(init, basis);
    const Mat H = build_bh_matrix(config.model, *basis);

    std::vector<double> grid;
    const double stride = config.integrator.dt * config.integrator.record_every;
    double t = 0.0;
    while (t < config.integrator.t_end - 1e-12 * std::max(1.0, config.integrator.t_end)) {
        grid.push_back(t);
        t += stride;
    }
    grid.push_back(config.integrator.t_end);

    const auto states = evolve_exact(psi0, config.model, grid);

    std::vector<std::string> names{"energy", "N_bar"};
    for (int i = 1; i <= config.model.M; ++i) names.push_back("site_" + std::to_string(i));
    std::vector<std::vector<double>> series(names.size());
    std::vector<Vec> snapshots;
    for (const SectorVector& s : states) {
        series[0].push_back((s.amps.adjoint() * (H * s.amps))(0).real());
        series[1].push_back(static_cast<double>(init.N) * s.amps.squaredNorm());
        for (int i = 1; i <= config.model.M; ++i) {
            double ni = 0.0;
            for (int idx = 0; idx < basis->dim(); ++idx) {
                ni += std::norm(s.amps(idx)) * basis->state(idx).occ[i - 1];
            }
            series[1 + i].push_back(ni);
        }
        if (config.snapshots_path) snapshots.push_back(s.amps);
    }
    write_csv(config.csv_path, grid, names, series);
    if (config.snapshots_path) write_snapshots(*config.snapshots_path, grid, snapshots);

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_wall).count();
    EvolveSummary out;
    out.summary["scheme"] = "exact";
    out.summary["final_time"] = grid.back();
    out.summary["completed"] = true;
    out.summary["wall_time_seconds"] = wall;
    out.summary["drifts"]["energy"] = std::abs(series[0].back() - series[0].front());
    out.summary["drifts"]["norm"] = std::abs(states.back().norm() - 1.0);
    std::ofstream sum_out(config.summary_path);
    if (!sum_out) {
        throw std::runtime_error("run_evolution: cannot write \"" + config.summary_path + "\"");
    }
    sum_out << out.summary.dump(2) << "\n";
    return out;
}

}  // namespace

EvolveSummary run_evolution(const RunConfig& config) {
    if (config.scheme == Scheme::Exact) return run_exact_evolution(config);

    const auto start_wall = std::chrono::steady_clock::now();
    EvolutionProblem prob = make_problem(config);
    IntegratorConfig integ = config.integrator;
    integ.keep_snapshots = config.snapshots_path.has_value();
    const Trajectory traj = integrate(prob.rhs, prob.initial, integ, prob.monitors);

    write_csv(config.csv_path, traj.times, traj.monitor_names, traj.monitor_series);
    if (config.snapshots_path) write_snapshots(*config.snapshots_path, traj.times, traj.snapshots);

    const double wall =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start_wall).count();

    EvolveSummary out;
    out.ok = traj.completed;
    switch (config.scheme) {
        case Scheme::Dnls: out.summary["scheme"] = "dnls"; break;
        case Scheme::Sum: out.summary["scheme"] = "sum"; break;
        case Scheme::Gutzwiller: out.summary["scheme"] = "gutzwiller"; break;
        case Scheme::Exact: break;
    }
    out.summary["final_time"] = traj.t_reached;
    out.summary["completed"] = traj.completed;
    if (!traj.completed) {
        out.summary["aborted_at"] = traj.t_reached;
    }
    out.summary["wall_time_seconds"] = wall;
    json drifts;
    drifts["energy"] = std::abs(traj.monitor_series[0].back() - traj.monitor_series[0].front());
    drifts["N_bar"] = std::abs(traj.monitor_series[1].back() - traj.monitor_series[1].front());
    const json extra = prob.extra_drifts(traj.final_state);
    for (const auto& item : extra.items()) drifts[item.key()] = item.value();
    out.summary["drifts"] = drifts;
    std::ofstream sum_out(config.summary_path);
    if (!sum_out) {
        throw std::runtime_error("run_evolution: cannot write \"" + config.summary_path + "\"");
    }
    sum_out << out.summary.dump(2) << "\n";
    return out;
}

json run_weights(const json& doc, int dim_cap) {
    check_keys(doc, "", {"weights", "output"});
    if (!doc.contains("weights")) throw std::invalid_argument("config: missing key \"/weights\"");
    const json& w = doc.at("weights");
    check_keys(w, "weights", {"z", "direction", "L_max"});
    const GlauberState z = make_glauber_state(vector_from_json(w.at("z"), "weights/z"));
    const double nbar = z.mean_total();

    Vec direction;
    if (w.contains("direction")) {
        direction = vector_from_json(w.at("direction"), "weights/direction");
        if (std::abs(direction.norm() - 1.0) > 1e-10) {
            throw std::invalid_argument("config: \"weights/direction\" must be normalized");
        }
    } else if (nbar > 0.0) {
        direction = z.z / std::sqrt(nbar);
    } else {
        direction = Vec::Zero(z.z.size());
    }

    const int L_max = w.contains("L_max") ? w.at("L_max").get<int>()
                                          : sector_cutoff(nbar, 1e-12);
    if (L_max < 0) throw std::invalid_argument("config: \"weights/L_max\" must be >= 0");
    (void)dim_cap;

    json report;
    report["mean_total"] = nbar;
    report["degenerate_zero_state"] = nbar == 0.0;
    report["L_max"] = L_max;
    json rows = json::array();
    double total = 0.0;
    for (int L = 0; L <= L_max; ++L) {
        const cx weight = glauber_sector_weight(z, direction, L);
        total += std::norm(weight);
        json row;
        row["L"] = L;
        row["weight"] = complex_to_json(weight);
        row["probability"] = std::norm(weight);
        row["cumulative"] = total;
        rows.push_back(std::move(row));
    }
    report["weights"] = std::move(rows);
    report["total_probability"] = total;
    return report;
}

json run_dual(const json& doc, int dim_cap) {
    check_keys(doc, "", {"dual", "output"});
    if (!doc.contains("dual")) throw std::invalid_argument("config: missing key \"/dual\"");
    const json& d = doc.at("dual");
    check_keys(d, "dual", {"state"});
    if (!d.contains("state")) throw std::invalid_argument("config: missing key \"/dual/state\"");
    const json& state = d.at("state");
    const std::string type = state.at("type").get<std::string>();

    json report;
    if (type == "suM") {
        const SuMState xi = sum_state_from_json(state);
        const int M = static_cast<int>(xi.xi.size());
        const Vec alpha = mode_fourier(xi.xi, FourierDirection::SiteToMomentum);
        BasisPtr basis = enumerate_sector(M, xi.N, dim_cap);
        const Mat W = momentum_basis_unitary(*basis, dim_cap);
        const Vec site = sum_fock_amplitudes(xi, basis).amps;
        const Vec momentum = sum_fock_amplitudes(make_sum_state(xi.N, alpha), basis).amps;
        report["type"] = "suM";
        report["alpha"] = vector_to_json(alpha);
        report["residual"] = (W.adjoint() * site - momentum).cwiseAbs().maxCoeff();
        json density = json::array();
        for (int k = 0; k < M; ++k) density.push_back(xi.N * std::norm(alpha(k)));
        report["mode_density"] = std::move(density);
    } else if (type == "glauber") {
        const GlauberState z = glauber_state_from_json(state);
        const Vec v = mode_fourier(z.z, FourierDirection::SiteToMomentum);
        const int S_max = sector_cutoff(z.mean_total(), 1e-12);
        const auto site_secs = glauber_fock_amplitudes(z, S_max, dim_cap);
        const auto mom_secs = glauber_fock_amplitudes(make_glauber_state(v), S_max, dim_cap);
        double worst = 0.0;
        for (int S = 0; S <= S_max; ++S) {
            const Mat W = momentum_basis_unitary(*site_secs[S].basis, dim_cap);
            worst = std::max(
                worst, (W.adjoint() * site_secs[S].amps - mom_secs[S].amps).cwiseAbs().maxCoeff());
        }
        report["type"] = "glauber";
        report["v"] = vector_to_json(v);
        report["S_max"] = S_max;
        report["residual"] = worst;
        json density = json::array();
        for (Eigen::Index k = 0; k < v.size(); ++k) density.push_back(std::norm(v(k)));
        report["mode_density"] = std::move(density);
    } else {
        throw std::invalid_argument("config: \"/dual/state/type\" must be suM|glauber");
    }
    return report;
}

json run_cat(const json& doc, int dim_cap) {
    check_keys(doc, "", {"cat", "output"});
    if (!doc.contains("cat")) throw std::invalid_argument("config: missing key \"/cat\"");
    const json& c = doc.at("cat");
    check_keys(c, "cat", {"M", "N", "epsilon", "seed", "k"});
    const int M = require_int(c, "cat", "M");
    const int N = require_int(c, "cat", "N");
    const double epsilon = c.value("epsilon", 0.0);
    const std::uint64_t seed = c.value("seed", 1u);

    const LocalizedFamily family = build_localized_family(M, N, epsilon, seed);
    BasisPtr basis = enumerate_sector(M, N, dim_cap);

    json report;
    report["M"] = M;
    report["N"] = N;
    report["epsilon"] = epsilon;
    report["seed"] = seed;
    report["gram_residual"] = family_gram_residual(family);
    json family_json = json::array();
    for (int l = 0; l < M; ++l) family_json.push_back(vector_to_json(family.xis.col(l)));
    report["family"] = std::move(family_json);

    std::vector<int> ks;
    if (c.contains("k")) {
        ks.push_back(require_int(c, "cat", "k"));
    } else {
        for (int k = 1; k <= M; ++k) ks.push_back(k);
    }

    json cats = json::array();
    for (int k : ks) {
        const CatState cat = build_cat(family, k);
        const CatObservables obs = cat_observables(cat, basis);
        const auto amps = cat_momentum_amplitudes(cat, basis);
        const auto weights = momentum_class_weights(amps, M);
        json entry;
        entry["k"] = k;
        entry["norm"] = obs.norm;
        json density = json::array();
        for (int i = 0; i < M; ++i) density.push_back(obs.site_density(i));
        entry["site_density"] = std::move(density);
        json wjson = json::array();
        for (double wgt : weights) wjson.push_back(wgt);
        entry["class_weights"] = std::move(wjson);
        double out_of_class = 0.0;
        for (const MomentumAmplitude& a : amps) {
            if (a.lambda != k % M) out_of_class = std::max(out_of_class, std::abs(a.amp));
        }
        entry["out_of_class_amplitude"] = out_of_class;
        cats.push_back(std::move(entry));
    }
    report["cats"] = std::move(cats);

    // cross-orthonormality of all M superpositions
    double ortho = 0.0;
    std::vector<Vec> all;
    for (int k = 1; k <= M; ++k) {
        all.push_back(cat_site_amplitudes(build_cat(family, k), basis).amps);
    }
    for (int q = 0; q < M; ++q) {
        for (int k = 0; k < M; ++k) {
            ortho = std::max(ortho, std::abs(all[q].dot(all[k]) - (q == k ? 1.0 : 0.0)));
        }
    }
    report["orthonormality_residual"] = ortho;
    return report;
}

json report_to_json(const std::vector<CheckResult>& results) {
    json checks = json::array();
    for (const CheckResult& r : results) {
        json entry;
        entry["name"] = r.name;
        entry["anchor"] = r.anchor;
        entry["residual"] = r.residual;
        entry["tolerance"] = r.tolerance;
        entry["pass"] = r.pass;
        checks.push_back(std::move(entry));
    }
    json report;
    report["checks"] = std::move(checks);
    report["all_passed"] = all_passed(results);
    return report;
}

}  // namespace bhvar
