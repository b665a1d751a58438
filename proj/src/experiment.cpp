#include "rkf/experiment.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <limits>
#include <map>
#include <mutex>
#include <random>
#include <sstream>
#include <thread>

namespace rkf {

namespace {

using Section = std::map<std::string, std::string>;
using IniData = std::map<std::string, Section>;

std::string trim(const std::string& s) {
    const auto begin = s.find_first_not_of(" \t\r");
    if (begin == std::string::npos) return {};
    const auto end = s.find_last_not_of(" \t\r");
    return s.substr(begin, end - begin + 1);
}

IniData parse_ini(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    IniData data;
    std::string line, section;
    while (std::getline(in, line)) {
        const auto hash = line.find('#');
        if (hash != std::string::npos) line.erase(hash);
        line = trim(line);
        if (line.empty()) continue;
        if (line.front() == '[' && line.back() == ']') {
            section = trim(line.substr(1, line.size() - 2));
            data[section];
            continue;
        }
        const auto eq = line.find('=');
        if (eq == std::string::npos)
            throw ConfigError("malformed line (expected key = value): " + line);
        if (section.empty()) throw ConfigError("key outside any section: " + line);
        data[section][trim(line.substr(0, eq))] = trim(line.substr(eq + 1));
    }
    return data;
}

const std::string* find_key(const IniData& data, const std::string& section,
                            const std::string& key) {
    auto sit = data.find(section);
    if (sit == data.end()) return nullptr;
    auto kit = sit->second.find(key);
    if (kit == sit->second.end()) return nullptr;
    return &kit->second;
}

double parse_real(const std::string& text, const std::string& field) {
    std::size_t pos = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &pos);
    } catch (const std::exception&) {
        throw ConfigError("field '" + field + "' is not a real number: " + text);
    }
    if (pos != text.size())
        throw ConfigError("field '" + field + "' has trailing characters: " + text);
    return v;
}

long parse_count(const std::string& text, const std::string& field) {
    std::size_t pos = 0;
    long v = 0;
    try {
        v = std::stol(text, &pos);
    } catch (const std::exception&) {
        throw ConfigError("field '" + field + "' is not an integer: " + text);
    }
    if (pos != text.size())
        throw ConfigError("field '" + field + "' has trailing characters: " + text);
    return v;
}

Matrix parse_matrix(const std::string& text, int rows, int cols, const std::string& field) {
    std::istringstream in(text);
    Matrix m(rows, cols);
    for (int i = 0; i < rows; ++i)
        for (int j = 0; j < cols; ++j)
            if (!(in >> m(i, j)))
                throw ConfigError("field '" + field + "' needs " +
                                  std::to_string(rows * cols) + " entries");
    double extra;
    if (in >> extra)
        throw ConfigError("field '" + field + "' has too many entries");
    return m;
}

std::string fmt_real(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string fmt_matrix(const Matrix& m) {
    std::string out;
    for (Eigen::Index i = 0; i < m.rows(); ++i)
        for (Eigen::Index j = 0; j < m.cols(); ++j) {
            if (!out.empty()) out += ' ';
            out += fmt_real(m(i, j));
        }
    return out;
}

SystemModel parse_system_section(const IniData& data, int n, int p) {
    const std::string* a = find_key(data, "system", "a");
    const std::string* c = find_key(data, "system", "c");
    if (!a || !c) throw ConfigError("inline system requires both 'a' and 'c'");
    Matrix q = 0.5 * Matrix::Identity(n, n);
    Matrix v = Matrix::Identity(p, p);
    if (const std::string* s = find_key(data, "system", "q")) q = parse_matrix(*s, n, n, "q");
    if (const std::string* s = find_key(data, "system", "v")) v = parse_matrix(*s, p, p, "v");
    try {
        return make_system(parse_matrix(*a, n, n, "a"), parse_matrix(*c, p, n, "c"),
                           std::move(q), std::move(v));
    } catch (const std::invalid_argument& e) {
        throw ConfigError(std::string("invalid system: ") + e.what());
    }
}

}  // namespace

ExperimentConfig load_config(const std::string& path) {
    const IniData data = parse_ini(path);
    ExperimentConfig cfg;

    const std::string* n_str = find_key(data, "system", "n");
    const std::string* p_str = find_key(data, "system", "p");
    if (!n_str || !p_str) throw ConfigError("missing field 'n' or 'p' in [system]");
    cfg.n = static_cast<int>(parse_count(*n_str, "n"));
    cfg.p = static_cast<int>(parse_count(*p_str, "p"));
    if (cfg.n < 1 || cfg.p < 1) throw ConfigError("fields 'n' and 'p' must be >= 1");

    if (find_key(data, "system", "a")) {
        cfg.system = parse_system_section(data, cfg.n, cfg.p);
    } else if (const std::string* s = find_key(data, "system", "system_seed")) {
        cfg.system_seed = static_cast<std::uint64_t>(parse_count(*s, "system_seed"));
    }

    if (const std::string* s = find_key(data, "drift", "regime")) {
        if (*s == "linear") cfg.drift.regime = DriftRegime::linear;
        else if (*s == "sublinear") cfg.drift.regime = DriftRegime::sublinear;
        else throw ConfigError("field 'regime' must be linear or sublinear: " + *s);
    } else {
        throw ConfigError("missing field 'regime' in [drift]");
    }
    if (const std::string* s = find_key(data, "drift", "delta"))
        cfg.drift.delta = parse_real(*s, "delta");
    if (const std::string* s = find_key(data, "drift", "beta"))
        cfg.drift.beta = parse_real(*s, "beta");
    if (const std::string* s = find_key(data, "drift", "noise_v")) {
        if (*s == "unit_gaussian") cfg.drift.noise_v = NoiseKind::unit_gaussian;
        else if (*s == "none") cfg.drift.noise_v = NoiseKind::none;
        else throw ConfigError("field 'noise_v' must be unit_gaussian or none: " + *s);
    }
    if (const std::string* s = find_key(data, "drift", "seed"))
        cfg.drift.seed = static_cast<std::uint64_t>(parse_count(*s, "seed"));

    const std::string* t_str = find_key(data, "run", "t_rounds");
    if (!t_str) throw ConfigError("missing field 't_rounds' in [run]");
    cfg.t_rounds = parse_count(*t_str, "t_rounds");
    if (cfg.t_rounds < 1) throw ConfigError("field 't_rounds' must be >= 1");
    if (const std::string* s = find_key(data, "run", "output_path")) cfg.output_path = *s;
    if (const std::string* s = find_key(data, "run", "tol_dare")) {
        cfg.tol_dare = parse_real(*s, "tol_dare");
        if (cfg.tol_dare <= 0.0) throw ConfigError("field 'tol_dare' must be positive");
    }
    if (const std::string* s = find_key(data, "run", "emit_every")) {
        cfg.emit_every = parse_count(*s, "emit_every");
        if (cfg.emit_every < 1) throw ConfigError("field 'emit_every' must be >= 1");
    }
    return cfg;
}

void save_model(const SystemModel& model, const std::string& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write model file: " + path);
    out << "[system]\n";
    out << "n = " << model.n << "\n";
    out << "p = " << model.p << "\n";
    out << "a = " << fmt_matrix(model.a) << "\n";
    out << "c = " << fmt_matrix(model.c) << "\n";
    out << "q = " << fmt_matrix(model.q) << "\n";
    out << "v = " << fmt_matrix(model.v) << "\n";
    if (!out) throw std::runtime_error("failed writing model file: " + path);
}

SystemModel load_model(const std::string& path) {
    const IniData data = parse_ini(path);
    const std::string* n_str = find_key(data, "system", "n");
    const std::string* p_str = find_key(data, "system", "p");
    if (!n_str || !p_str) throw ConfigError("model file missing 'n' or 'p'");
    const int n = static_cast<int>(parse_count(*n_str, "n"));
    const int p = static_cast<int>(parse_count(*p_str, "p"));
    return parse_system_section(data, n, p);
}

SystemModel build_model(const ExperimentConfig& config) {
    if (config.system) return *config.system;
    return random_stable_system(config.n, config.p, config.system_seed);
}

std::vector<SummaryRow> run_experiment(const ExperimentConfig& config) {
    const SystemModel model = build_model(config);
    const SteadySummary ss = solve_dare(model, config.tol_dare);
    const BoundConstants k = constants(model, ss);
    const GeneratedRun run = generate(model, config.drift, config.t_rounds);

    Filter filter(model);
    Eigen::LLT<Matrix> v_llt(model.v);
    FilterState state = filter.init();
    const double x0sq = run.xbar.front().squaredNorm();
    double v_cum = 0.0;
    double w_cum = 0.0;

    std::vector<SummaryRow> rows;
    for (long t = 0; t < config.t_rounds; ++t) {
        auto [next, rec] = filter.step(state, run.observations[t]);
        state = std::move(next);
        const Vector residual = run.observations[t] - model.c * run.xbar[t];
        v_cum += residual.dot(v_llt.solve(residual));
        w_cum += run.w[t].squaredNorm();

        // Each prefix is a valid horizon of the bounds, as plotted per round.
        SummaryRow row;
        row.t = t + 1;
        row.l_t = state.cum_loss;
        row.v_t = v_cum;
        row.w_t = w_cum;
        row.applicable_b1 = k.b1_applicable();
        row.b1 = row.applicable_b1 ? bound_b1(k, v_cum, w_cum, x0sq).value
                                   : std::numeric_limits<double>::quiet_NaN();
        row.b3 = bound_b3(k, v_cum, w_cum, x0sq).value;
        row.avg_loss_gap = (row.l_t - row.v_t) / static_cast<double>(row.t);
        if (row.t % config.emit_every == 0 || row.t == config.t_rounds)
            rows.push_back(std::move(row));
    }
    return rows;
}

void emit_csv(const std::vector<SummaryRow>& rows, const std::string& path) {
    std::ofstream out(path, std::ios::binary);  // unix newlines everywhere
    if (!out) throw std::runtime_error("cannot write csv: " + path);
    out << "t,L,V,W,B1,B3,avg_gap\n";
    for (const SummaryRow& r : rows) {
        out << r.t << ',' << fmt_real(r.l_t) << ',' << fmt_real(r.v_t) << ','
            << fmt_real(r.w_t) << ',' << fmt_real(r.b1) << ',' << fmt_real(r.b3)
            << ',' << fmt_real(r.avg_loss_gap) << '\n';
    }
    if (!out) throw std::runtime_error("failed writing csv: " + path);
}

std::vector<SummaryRow> parse_csv(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot read csv: " + path);
    std::string line;
    if (!std::getline(in, line) || line != "t,L,V,W,B1,B3,avg_gap")
        throw std::runtime_error("unexpected csv header in " + path);
    std::vector<SummaryRow> rows;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        SummaryRow r;
        std::istringstream fields(line);
        char comma;
        fields >> r.t >> comma >> r.l_t >> comma >> r.v_t >> comma >> r.w_t >>
            comma >> r.b1 >> comma >> r.b3 >> comma >> r.avg_loss_gap;
        if (!fields) throw std::runtime_error("malformed csv row: " + line);
        r.applicable_b1 = !std::isnan(r.b1);
        rows.push_back(r);
    }
    return rows;
}

std::vector<SweepResult> run_sweep(const ExperimentConfig& base,
                                   const std::vector<std::uint64_t>& seeds,
                                   const std::string& out_dir) {
    std::filesystem::create_directories(out_dir);

    long threads = std::max(1L, static_cast<long>(std::thread::hardware_concurrency()));
    if (const char* env = std::getenv("RKF_THREADS")) {
        threads = std::max(1L, std::atol(env));
    }
    threads = std::min<long>(threads, static_cast<long>(seeds.size()));

    std::vector<SweepResult> results(seeds.size());
    std::atomic<std::size_t> cursor{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;

    auto worker = [&] {
        for (;;) {
            const std::size_t i = cursor.fetch_add(1);
            if (i >= seeds.size()) return;
            try {
                ExperimentConfig cfg = base;
                cfg.drift.seed = seeds[i];
                cfg.output_path = out_dir + "/seed_" + std::to_string(seeds[i]) + ".csv";
                const auto rows = run_experiment(cfg);
                emit_csv(rows, cfg.output_path);
                results[i] = SweepResult{seeds[i], rows.back(), cfg.output_path};
            } catch (...) {
                std::lock_guard<std::mutex> lock(failure_mutex);
                if (!failure) failure = std::current_exception();
                return;
            }
        }
    };

    if (threads <= 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (long i = 0; i < threads; ++i) pool.emplace_back(worker);
        for (auto& th : pool) th.join();
    }
    if (failure) std::rethrow_exception(failure);

    std::ofstream agg(out_dir + "/aggregate.csv", std::ios::binary);
    if (!agg) throw std::runtime_error("cannot write aggregate csv in " + out_dir);
    agg << "seed,t,L,V,W,B1,B3,avg_gap\n";
    for (const SweepResult& r : results) {
        agg << r.seed << ',' << r.final_row.t << ',' << fmt_real(r.final_row.l_t)
            << ',' << fmt_real(r.final_row.v_t) << ',' << fmt_real(r.final_row.w_t)
            << ',' << fmt_real(r.final_row.b1) << ',' << fmt_real(r.final_row.b3)
            << ',' << fmt_real(r.final_row.avg_loss_gap) << '\n';
    }
    return results;
}

namespace {

bool report(const char* name, bool ok, const std::string& detail = {}) {
    if (ok) {
        std::printf("[ok]   %s\n", name);
    } else {
        std::printf("[FAIL] %s%s%s\n", name, detail.empty() ? "" : ": ",
                    detail.c_str());
    }
    return ok;
}

bool check_scalar_dare(double perturbation) {
    SystemModel m = make_system(Matrix::Constant(1, 1, 0.5), Matrix::Constant(1, 1, 1.0),
                                Matrix::Constant(1, 1, 0.5), Matrix::Constant(1, 1, 1.0));
    const SteadySummary ss = solve_dare(m);
    // Positive root of sigma^2 + 0.25 sigma - 0.5 = 0.
    const double sigma = 0.5930703308172536 + perturbation;
    const double kbar = 0.5 * sigma / (1.0 + sigma);
    return std::abs(ss.sigma_ss(0, 0) - sigma) <= 1e-10 &&
           std::abs(ss.k_ss(0, 0) - kbar) <= 1e-10 &&
           std::abs(ss.h(0, 0) - (0.5 - kbar)) <= 1e-10;
}

bool check_lemma5() {
    std::mt19937_64 rng(11);
    std::normal_distribution<double> normal(0.0, 1.0);
    std::uniform_real_distribution<double> alpha_dist(0.05, 10.0);
    for (int trial = 0; trial < 100; ++trial) {
        const int dim = 4;
        Vector a(dim), b(dim);
        Matrix g(dim, dim);
        for (int i = 0; i < dim; ++i) {
            a(i) = normal(rng);
            b(i) = normal(rng);
            for (int j = 0; j < dim; ++j) g(i, j) = normal(rng);
        }
        const Matrix m = symmetrize(g.transpose() * g) + 0.1 * Matrix::Identity(dim, dim);
        const double alpha = alpha_dist(rng);
        const double lhs = weighted_norm_sq(a + b, m);
        if (lhs > lemma5_rhs(a, b, m, alpha) + 1e-9) return false;
    }
    return true;
}

bool check_lemma6() {
    const SystemModel model = random_stable_system(3, 2, 5);
    if (!validate(model).a_nonsingular) return false;
    const Matrix a_inv = model.a.partialPivLu().solve(Matrix::Identity(3, 3));
    Filter filter(model);
    const GeneratedRun run = generate(model, DriftSpec{DriftRegime::linear, 1.0, 0.5,
                                                       NoiseKind::unit_gaussian, 5}, 30);
    FilterState state = filter.init();
    for (const Vector& y : run.observations) {
        auto [next, rec] = filter.step(state, y);
        const Matrix lhs = symmetrize(Eigen::LLT<Matrix>(next.sigma)
                                          .solve(Matrix::Identity(3, 3)));
        const Matrix inner = symmetrize(Eigen::LLT<Matrix>(state.sigma)
                                            .solve(Matrix::Identity(3, 3))) +
                             filter.ct_vinv_c();
        const Matrix rhs = symmetrize(a_inv.transpose() * inner * a_inv);
        if (!psd_leq(lhs, rhs, 1e-8)) return false;
        state = std::move(next);
    }
    return true;
}

bool check_prop1() {
    const Infimum inf = prop1_infimum(2.0, 0.5);
    if (std::abs(inf.value - 2.0) > 1e-12 || std::abs(inf.xi_star - 2.0) > 1e-12)
        return false;
    for (int i = 1; i <= 200; ++i) {
        const double xi = inf.xi_star * std::pow(10.0, -2.0 + 4.0 * i / 200.0);
        if (2.0 / xi + xi * 0.5 < inf.value - 1e-9) return false;
    }
    return true;
}

bool check_mini_e2e() {
    for (std::uint64_t seed = 1; seed <= 20; ++seed) {
        const SystemModel model = random_stable_system(3, 2, seed);
        const SteadySummary ss = solve_dare(model);
        const BoundConstants k = constants(model, ss);
        const GeneratedRun run = generate(
            model, DriftSpec{DriftRegime::sublinear, 1.0, 0.5, NoiseKind::unit_gaussian, seed},
            50);
        Filter filter(model);
        auto [state, records] = filter.run(run.observations);
        const ComparatorTrace trace = accumulate_comparator(model, run.xbar, run.observations);
        const double slack = 1e-8 * std::max(1.0, state.cum_loss);
        if (bound_b3(k, trace).value < state.cum_loss - slack) return false;
        if (!k.b1_applicable()) continue;  // want at least one applicable seed
        return bound_b1(k, trace).value >= state.cum_loss - slack;
    }
    return false;
}

}  // namespace

int selftest(double dare_perturbation) {
    bool ok = true;
    ok &= report("scalar-dare", check_scalar_dare(dare_perturbation));
    ok &= report("lemma5", check_lemma5());
    ok &= report("lemma6", check_lemma6());
    ok &= report("prop1", check_prop1());
    ok &= report("mini-e2e", check_mini_e2e());
    return ok ? 0 : 3;
}

}  // namespace rkf
