#include "calband/harness.hpp"

#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <mutex>
#include <sstream>
#include <thread>

#include <json.hpp>

#include "calband/error.hpp"

namespace calband {

namespace fs = std::filesystem;

LogLevel log_level() {
    static const LogLevel level = [] {
        const char* v = std::getenv("CALBAND_LOG");
        if (!v) return LogLevel::Info;
        const std::string s = v;
        if (s == "quiet") return LogLevel::Quiet;
        if (s == "debug") return LogLevel::Debug;
        return LogLevel::Info;
    }();
    return level;
}

void log(LogLevel level, const std::string& message) {
    static std::mutex mu;
    if (level == LogLevel::Quiet || static_cast<int>(level) > static_cast<int>(log_level())) return;
    std::lock_guard<std::mutex> lock(mu);
    std::cerr << "[calband] " << message << '\n';
}

namespace {

std::string num(double x) {
    char buf[40];
    std::snprintf(buf, sizeof buf, "%.17g", x);
    return buf;
}

std::string sparse_point(const LatticePoint& p) {
    std::string s;
    for (std::size_t i = 0; i < p.size(); ++i) {
        if (p[i] == 0) continue;
        if (!s.empty()) s += ';';
        s += std::to_string(i) + ':' + std::to_string(p[i]);
    }
    return s;
}

LatticePoint parse_sparse_point(const std::string& s, std::size_t dim) {
    LatticePoint p(dim, 0);
    std::stringstream in(s);
    std::string item;
    while (std::getline(in, item, ';')) {
        const auto colon = item.find(':');
        if (colon == std::string::npos) throw Error(ErrorCode::IoError, "bad forecast point '" + s + "'");
        const std::size_t i = std::stoul(item.substr(0, colon));
        if (i >= dim) throw Error(ErrorCode::IoError, "forecast point index out of range in '" + s + "'");
        p[i] = static_cast<std::uint32_t>(std::stoul(item.substr(colon + 1)));
    }
    return p;
}

std::string profile_text(std::size_t joint, std::size_t K, std::size_t M) {
    const JointProfile p = decode_joint(joint, K, M);
    std::string s;
    for (std::size_t k = 0; k < K; ++k) s += (k ? "-" : "") + std::to_string(p[k]);
    return s;
}

void write_file(const fs::path& path, const std::string& text) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw Error(ErrorCode::IoError, "cannot write '" + path.string() + "'");
    out << text;
    if (!out) throw Error(ErrorCode::IoError, "write failed for '" + path.string() + "'");
}

template <class F>
std::string render(F&& f) {
    std::ostringstream out;
    f(out);
    return out.str();
}

std::vector<std::pair<std::size_t, PeriodTelemetry>> telemetry_rows(const RunTrace& trace) {
    std::vector<std::pair<std::size_t, PeriodTelemetry>> rows;
    for (std::size_t k = 0; k < trace.players; ++k)
        for (const auto& t : trace.player[k].telemetry) rows.emplace_back(k, t);
    return rows;
}

// Writes the five metric files plus summary.json; returns the summary.
RunSummary write_game_metrics(const RunConfig& cfg, const RunTrace& trace, const OracleTable& oracle,
                              const fs::path& dir, const std::string& trace_sha, std::vector<std::string> files) {
    const MetricsBundle m = compute_metrics(trace, oracle, cfg.effective_checkpoints());
    const std::pair<const char*, std::string> outputs[] = {
        {"consistency.csv", render([&](std::ostream& o) { write_consistency_csv(o, m, trace); })},
        {"joint_frequencies.csv", render([&](std::ostream& o) { write_joint_frequencies_csv(o, m, trace); })},
        {"ce_distance.csv", render([&](std::ostream& o) { write_ce_distance_csv(o, m); })},
        {"calibration.csv", render([&](std::ostream& o) { write_calibration_csv(o, m.calibration); })},
        {"throughput.csv", render([&](std::ostream& o) { write_throughput_csv(o, m, trace); })},
    };
    for (const auto& [name, text] : outputs) {
        write_file(dir / name, text);
        files.push_back(name);
    }

    RunSummary s;
    s.directory = dir.string();
    s.trace_sha256 = trace_sha;
    s.checkpoints = m.checkpoints;
    s.throughput = m.aggregate_throughput;
    if (!m.consistency.empty()) s.final_S = m.consistency.back().S;
    if (!m.ce_distance.empty()) s.final_ce_distance = m.ce_distance.back();
    if (!m.aggregate_throughput.empty()) s.final_throughput = m.aggregate_throughput.back();

    nlohmann::json j;
    j["schema_version"] = kSchemaVersion;
    j["code_version"] = kCodeVersion;
    j["config_hash"] = config_hash(cfg);
    j["name"] = cfg.name;
    j["mode"] = "game";
    j["seed"] = cfg.seed();
    j["trials"] = trace.trials();
    j["strategies"] = strategy_label(cfg.game.strategies);
    j["trace_sha256"] = trace_sha;
    j["rewards_clipped"] = trace.clipped;
    j["final"] = {{"horizon", m.checkpoints.empty() ? 0 : m.checkpoints.back()},
                  {"S", s.final_S},
                  {"regret", m.consistency.empty() ? std::vector<double>{} : m.consistency.back().regret},
                  {"ce_distance", s.final_ce_distance},
                  {"aggregate_throughput", s.final_throughput}};
    files.push_back("summary.json");
    j["files"] = files;
    write_file(dir / "summary.json", j.dump(2) + "\n");
    s.files = std::move(files);
    return s;
}

}  // namespace

ForecasterTrace run_forecaster_study(const ForecasterStudy& study, const ForecasterOptions& options,
                                     std::uint64_t seed) {
    ForecasterTrace out;
    out.outcomes = study.law.size();
    Forecaster f(out.outcomes, options);
    Rng env = make_stream(seed, Stream::Environment);
    Rng fc = make_stream(seed, Stream::Forecaster);
    std::discrete_distribution<std::size_t> law(study.law.begin(), study.law.end());
    for (std::size_t t = 0; t < study.horizon; ++t) {
        const Forecast q = f.emit(fc);
        out.sequence.push_back(f.period_sequence());
        out.r.push_back(f.period());
        out.index.push_back(q.grid_index);
        out.point.push_back(q.point);
        const std::size_t d = law(env);
        out.outcome.push_back(d);
        f.observe(d);
    }
    out.telemetry = f.telemetry();
    return out;
}

MetricsBundle compute_metrics(const RunTrace& trace, const OracleTable& oracle,
                              const std::vector<std::size_t>& checkpoints) {
    MetricsBundle m;
    for (std::size_t c : checkpoints)
        if (c >= 1 && c <= trace.trials()) m.checkpoints.push_back(c);
    m.consistency = consistency_series(trace, oracle, m.checkpoints);
    for (std::size_t c : m.checkpoints) {
        m.joint_frequencies.push_back(empirical_frequencies(trace, 0, c));
        m.ce_distance.push_back(ce_distance(m.joint_frequencies.back(), oracle));
    }
    for (std::size_t k = 0; k < trace.players; ++k) {
        for (const auto& row : calibration_scores(trace, k)) m.calibration.emplace_back(k, row);
    }
    m.aggregate_throughput = aggregate_throughput(trace, m.checkpoints);
    for (std::size_t c : m.checkpoints) {
        std::vector<double> per;
        for (const auto& p : trace.player) {
            double s = 0.0;
            for (std::size_t t = 0; t < c; ++t) s += p.reward[t];
            per.push_back(s / static_cast<double>(c));
        }
        m.player_throughput.push_back(per);
    }
    return m;
}

void write_trace_csv(std::ostream& out, const RunTrace& trace) {
    out << "t,r,player,strategy,phase,arm,opponents,joint,reward,availability,fc_sequence,fc_period,fc_index,"
           "fc_point\n";
    std::string bits(trace.arms, '0');
    for (std::size_t t = 0; t < trace.trials(); ++t) {
        for (std::size_t m = 0; m < trace.arms; ++m) bits[m] = trace.available(t, m) ? '1' : '0';
        for (std::size_t k = 0; k < trace.players; ++k) {
            const PlayerTrace& p = trace.player[k];
            out << t << ',' << trace.schedule_r[t] << ',' << k << ',' << to_string(trace.strategies[k]) << ','
                << to_string(p.phase[t]) << ',' << p.arm[t] << ',' << p.opponents[t] << ',' << trace.joint[t] << ','
                << num(p.reward[t]) << ',' << bits << ',';
            if (p.fc_r[t] == 0) {
                out << ",,,\n";
            } else {
                out << p.fc_sequence[t] << ',' << p.fc_r[t] << ',' << p.fc_index[t] << ','
                    << sparse_point(p.fc_point[t]) << '\n';
            }
        }
    }
}

void write_forecaster_trace_csv(std::ostream& out, const ForecasterTrace& trace) {
    out << "t,r,sequence,outcome,fc_index,fc_point\n";
    for (std::size_t t = 0; t < trace.trials(); ++t) {
        out << t << ',' << trace.r[t] << ',' << trace.sequence[t] << ',' << trace.outcome[t] << ','
            << trace.index[t] << ',' << sparse_point(trace.point[t]) << '\n';
    }
}

void write_telemetry_csv(std::ostream& out, const std::vector<std::pair<std::size_t, PeriodTelemetry>>& rows) {
    out << "player,sequence,r,eps,length,regret_norm,reset,max_slack,lp_solves,grid_size,columns\n";
    for (const auto& [k, t] : rows) {
        out << k << ',' << t.sequence << ',' << t.r << ',' << num(t.eps) << ',' << t.length << ','
            << num(t.regret_norm) << ',' << (t.reset ? 1 : 0) << ',' << num(t.max_slack) << ',' << t.lp_solves << ','
            << num(t.grid_size) << ',' << t.columns << '\n';
    }
}

void write_consistency_csv(std::ostream& out, const MetricsBundle& m, const RunTrace& trace) {
    out << "horizon,player,strategy,S,regret,numerator,denominator\n";
    for (const auto& c : m.consistency) {
        for (std::size_t k = 0; k < trace.players; ++k) {
            out << c.horizon << ',' << k << ',' << to_string(trace.strategies[k]) << ',' << num(c.S[k]) << ','
                << num(c.regret[k]) << ',' << num(c.numerator[k]) << ',' << num(c.denominator[k]) << '\n';
        }
    }
}

void write_joint_frequencies_csv(std::ostream& out, const MetricsBundle& m, const RunTrace& trace) {
    out << "horizon,profile,arms,frequency\n";
    for (std::size_t i = 0; i < m.checkpoints.size(); ++i) {
        const Vector& pi = m.joint_frequencies[i];
        for (std::size_t j = 0; j < pi.size(); ++j) {
            out << m.checkpoints[i] << ',' << j << ',' << profile_text(j, trace.players, trace.arms) << ','
                << num(pi[j]) << '\n';
        }
    }
}

void write_ce_distance_csv(std::ostream& out, const MetricsBundle& m) {
    out << "horizon,ce_distance\n";
    for (std::size_t i = 0; i < m.checkpoints.size(); ++i) out << m.checkpoints[i] << ',' << num(m.ce_distance[i]) << '\n';
}

void write_calibration_csv(std::ostream& out, const std::vector<std::pair<std::size_t, CalibrationRow>>& rows) {
    out << "player,sequence,r,eps,length,score\n";
    for (const auto& [k, row] : rows) {
        out << k << ',' << row.sequence << ',' << row.r << ',' << num(row.eps) << ',' << row.length << ','
            << num(row.score) << '\n';
    }
}

void write_throughput_csv(std::ostream& out, const MetricsBundle& m, const RunTrace& trace) {
    out << "horizon,aggregate_throughput";
    for (std::size_t k = 0; k < trace.players; ++k) out << ",player_" << k;
    out << '\n';
    for (std::size_t i = 0; i < m.checkpoints.size(); ++i) {
        out << m.checkpoints[i] << ',' << num(m.aggregate_throughput[i]);
        for (double x : m.player_throughput[i]) out << ',' << num(x);
        out << '\n';
    }
}

RunTrace read_trace_csv(std::istream& in, const GameConfig& cfg) {
    const std::size_t K = cfg.radio.players, M = cfg.radio.channels;
    const std::string expected =
        "t,r,player,strategy,phase,arm,opponents,joint,reward,availability,fc_sequence,fc_period,fc_index,fc_point";
    std::string line;
    if (!std::getline(in, line) || line != expected) throw Error(ErrorCode::IoError, "trace header mismatch");

    RunTrace trace;
    trace.players = K;
    trace.arms = M;
    trace.outcomes = opponent_profile_count(K, M);
    trace.seed = cfg.seed;
    trace.player.resize(K);
    std::size_t row = 0;
    std::vector<std::string> f;
    while (std::getline(in, line)) {
        if (line.empty()) continue;
        f.clear();
        std::size_t start = 0;
        for (;;) {
            const auto comma = line.find(',', start);
            f.push_back(line.substr(start, comma - start));
            if (comma == std::string::npos) break;
            start = comma + 1;
        }
        auto bad = [&](const std::string& why) {
            return Error(ErrorCode::IoError, "trace row " + std::to_string(row + 1) + ": " + why);
        };
        if (f.size() != 14) throw bad("expected 14 fields");
        const std::size_t t = row / K, k = row % K;
        try {
            if (std::stoul(f[0]) != t || std::stoul(f[2]) != k) throw bad("rows out of order");
            if (k == 0) {
                trace.schedule_r.push_back(static_cast<unsigned>(std::stoul(f[1])));
                trace.joint.push_back(std::stoul(f[7]));
                if (f[9].size() != M) throw bad("availability has the wrong width");
                for (char c : f[9]) trace.availability.push_back(c == '1' ? 1 : 0);
            }
            if (t == 0) trace.strategies.push_back(strategy_from_string(f[3]));
            PlayerTrace& p = trace.player[k];
            Phase phase = Phase::Baseline;
            for (Phase q : {Phase::ExploreRandom, Phase::ExploreBest, Phase::Exploit, Phase::Baseline})
                if (f[4] == to_string(q)) phase = q;
            p.phase.push_back(phase);
            p.arm.push_back(static_cast<Arm>(std::stoul(f[5])));
            p.opponents.push_back(std::stoul(f[6]));
            p.reward.push_back(std::stod(f[8]));
            if (f[11].empty()) {
                p.fc_sequence.push_back(0);
                p.fc_r.push_back(0);
                p.fc_index.push_back(0);
                p.fc_point.emplace_back();
            } else {
                p.fc_sequence.push_back(std::stoul(f[10]));
                p.fc_r.push_back(static_cast<unsigned>(std::stoul(f[11])));
                p.fc_index.push_back(std::stoul(f[12]));
                p.fc_point.push_back(parse_sparse_point(f[13], trace.outcomes));
            }
        } catch (const std::logic_error&) {
            throw bad("unparsable number");
        }
        ++row;
    }
    if (row % K != 0) throw Error(ErrorCode::IoError, "trace ends mid-trial");
    if (trace.strategies.size() != K) throw Error(ErrorCode::IoError, "trace has no rows");
    return trace;
}

RunSummary run_to_directory(const RunConfig& cfg, const std::string& out_dir, const OracleTable* oracle) {
    cfg.validate();
    const fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create '" + out_dir + "': " + ec.message());

    if (cfg.mode == RunMode::Forecaster) {
        log(LogLevel::Info, "forecaster study D=" + std::to_string(cfg.study.law.size()) + " T=" +
                                std::to_string(cfg.study.horizon) + " -> " + out_dir);
        const ForecasterTrace trace = run_forecaster_study(cfg.study, cfg.game.forecaster, cfg.seed());
        const std::string text = render([&](std::ostream& o) { write_forecaster_trace_csv(o, trace); });
        write_file(dir / "trace.csv", text);
        std::vector<std::pair<std::size_t, PeriodTelemetry>> tel;
        for (const auto& t : trace.telemetry) tel.emplace_back(0, t);
        write_file(dir / "telemetry.csv", render([&](std::ostream& o) { write_telemetry_csv(o, tel); }));
        CalibrationAccumulator acc(trace.outcomes);
        for (std::size_t t = 0; t < trace.trials(); ++t)
            acc.add(trace.sequence[t], trace.r[t], trace.point[t], trace.outcome[t]);
        std::vector<std::pair<std::size_t, CalibrationRow>> rows;
        for (const auto& r : acc.rows) rows.emplace_back(0, r);
        write_file(dir / "calibration.csv", render([&](std::ostream& o) { write_calibration_csv(o, rows); }));

        RunSummary s;
        s.directory = dir.string();
        s.trace_sha256 = sha256_hex(text);
        s.files = {"trace.csv", "telemetry.csv", "calibration.csv", "summary.json"};
        nlohmann::json j;
        j["schema_version"] = kSchemaVersion;
        j["code_version"] = kCodeVersion;
        j["config_hash"] = config_hash(cfg);
        j["name"] = cfg.name;
        j["mode"] = "forecaster";
        j["seed"] = cfg.seed();
        j["trials"] = trace.trials();
        j["trace_sha256"] = s.trace_sha256;
        std::size_t resets = 0;
        for (const auto& t : trace.telemetry) resets += t.reset;
        j["periods"] = trace.telemetry.size();
        j["resets"] = resets;
        j["files"] = s.files;
        write_file(dir / "summary.json", j.dump(2) + "\n");
        return s;
    }

    std::optional<OracleTable> own;
    if (!oracle) {
        log(LogLevel::Debug, "computing oracle table with " + std::to_string(cfg.game.oracle_samples) + " samples");
        own = compute_oracle_table(cfg.game.radio, cfg.game.oracle_samples, cfg.seed());
        oracle = &*own;
    }
    log(LogLevel::Info, "run " + cfg.name + " [" + strategy_label(cfg.game.strategies) + "] seed " +
                            std::to_string(cfg.seed()) + " T=" + std::to_string(cfg.game.horizon) + " -> " + out_dir);
    const RunTrace trace = run_game(cfg.game, oracle);
    const std::string text = render([&](std::ostream& o) { write_trace_csv(o, trace); });
    write_file(dir / "trace.csv", text);
    write_file(dir / "telemetry.csv", render([&](std::ostream& o) { write_telemetry_csv(o, telemetry_rows(trace)); }));
    return write_game_metrics(cfg, trace, *oracle, dir, sha256_hex(text), {"trace.csv", "telemetry.csv"});
}

RunSummary export_metrics(const RunConfig& cfg, const std::string& trace_path, const std::string& out_dir) {
    cfg.validate();
    if (cfg.mode != RunMode::Game) throw Error(ErrorCode::ConfigInvalid, "mode: export needs a game config");
    std::ifstream in(trace_path, std::ios::binary);
    if (!in) throw Error(ErrorCode::IoError, "cannot open trace '" + trace_path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    const std::string text = buf.str();
    std::istringstream parse(text);
    const RunTrace trace = read_trace_csv(parse, cfg.game);
    const fs::path dir(out_dir);
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create '" + out_dir + "': " + ec.message());
    const OracleTable oracle = compute_oracle_table(cfg.game.radio, cfg.game.oracle_samples, cfg.seed());
    return write_game_metrics(cfg, trace, oracle, dir, sha256_hex(text), {});
}

std::string strategy_label(const std::vector<PlayerSpec>& strategies) {
    std::string label;
    bool same = true;
    for (std::size_t k = 0; k < strategies.size(); ++k) {
        same = same && strategies[k].kind == strategies[0].kind;
        label += (k ? "+" : "") + std::string(to_string(strategies[k].kind));
    }
    return same && !strategies.empty() ? to_string(strategies[0].kind) : label;
}

SweepResult run_sweep(const RunConfig& cfg, const std::vector<std::uint64_t>& seeds,
                      const std::vector<std::string>& strategies, const std::string& out_dir, unsigned threads) {
    cfg.validate();
    if (seeds.empty()) throw Error(ErrorCode::ConfigInvalid, "seeds: at least one seed is required");
    if (cfg.mode != RunMode::Game) throw Error(ErrorCode::ConfigInvalid, "mode: sweep needs a game config");

    struct Job {
        RunConfig cfg;
        std::string label;
        std::size_t seed_index;
    };
    std::vector<Job> jobs;
    std::vector<std::string> labels;
    if (strategies.empty()) {
        labels.push_back(strategy_label(cfg.game.strategies));
    } else {
        labels = strategies;
    }
    for (const std::string& label : labels) {
        for (std::size_t i = 0; i < seeds.size(); ++i) {
            RunConfig c = cfg;
            c.game.seed = seeds[i];
            if (!strategies.empty()) {
                const StrategyKind kind = strategy_from_string(label);
                for (auto& p : c.game.strategies) p.kind = kind;
            }
            jobs.push_back({c, label, i});
        }
    }

    // One oracle per seed, shared read-only by every strategy.
    std::vector<std::optional<OracleTable>> oracles(seeds.size());
    std::vector<std::string> oracle_errors(seeds.size());
    for (std::size_t i = 0; i < seeds.size(); ++i) {
        try {
            oracles[i] = compute_oracle_table(cfg.game.radio, cfg.game.oracle_samples, seeds[i]);
        } catch (const std::exception& e) {
            oracle_errors[i] = e.what();
        }
    }

    std::vector<std::optional<RunSummary>> results(jobs.size());
    std::vector<std::string> errors(jobs.size());
    std::atomic<std::size_t> next{0};
    auto worker = [&] {
        for (std::size_t j; (j = next.fetch_add(1)) < jobs.size();) {
            const Job& job = jobs[j];
            if (!oracles[job.seed_index]) {
                errors[j] = oracle_errors[job.seed_index];
                continue;
            }
            const fs::path dir = fs::path(out_dir) / job.label / ("seed_" + std::to_string(job.cfg.seed()));
            try {
                results[j] = run_to_directory(job.cfg, dir.string(), &*oracles[job.seed_index]);
            } catch (const std::exception& e) {
                errors[j] = e.what();
            }
        }
    };
    if (threads == 0) threads = std::max(1u, std::thread::hardware_concurrency());
    threads = static_cast<unsigned>(std::min<std::size_t>(threads, jobs.size()));
    std::vector<std::thread> pool;
    for (unsigned i = 0; i < threads; ++i) pool.emplace_back(worker);
    for (auto& t : pool) t.join();

    SweepResult out;
    for (const std::string& label : labels) {
        std::map<std::size_t, std::vector<double>> by_horizon;
        for (std::size_t j = 0; j < jobs.size(); ++j) {
            if (jobs[j].label != label) continue;
            if (!results[j]) {
                out.failures.push_back({label, jobs[j].cfg.seed(), errors[j]});
                log(LogLevel::Info, "sweep: " + label + " seed " + std::to_string(jobs[j].cfg.seed()) +
                                        " failed: " + errors[j]);
                continue;
            }
            const RunSummary& s = *results[j];
            out.finals.emplace_back(label, jobs[j].cfg.seed(), s.final_throughput);
            for (std::size_t i = 0; i < s.checkpoints.size(); ++i) by_horizon[s.checkpoints[i]].push_back(s.throughput[i]);
        }
        for (const auto& [h, values] : by_horizon) {
            SweepRow row;
            row.strategy = label;
            row.horizon = h;
            row.runs = values.size();
            for (double v : values) row.mean += v;
            row.mean /= static_cast<double>(values.size());
            if (values.size() > 1) {
                double ss = 0.0;
                for (double v : values) ss += (v - row.mean) * (v - row.mean);
                row.sd = std::sqrt(ss / static_cast<double>(values.size() - 1));
            }
            out.rows.push_back(row);
        }
    }

    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw Error(ErrorCode::IoError, "cannot create '" + out_dir + "': " + ec.message());
    write_file(fs::path(out_dir) / "sweep_throughput.csv", render([&](std::ostream& o) {
                   o << "strategy,horizon,runs,mean_aggregate_throughput,sd_aggregate_throughput\n";
                   for (const auto& r : out.rows)
                       o << r.strategy << ',' << r.horizon << ',' << r.runs << ',' << num(r.mean) << ',' << num(r.sd)
                         << '\n';
               }));
    write_file(fs::path(out_dir) / "sweep_failures.csv", render([&](std::ostream& o) {
                   o << "strategy,seed,error\n";
                   for (const auto& f : out.failures) {
                       std::string msg = f.error;
                       for (char& c : msg)
                           if (c == ',' || c == '\n') c = ';';
                       o << f.strategy << ',' << f.seed << ',' << msg << '\n';
                   }
               }));
    return out;
}

namespace {

unsigned periods_covering(std::size_t horizon) {
    unsigned R = 0;
    std::size_t covered = 0;
    while (covered < horizon) covered += schedule_period_length(++R);
    return R;
}

std::size_t outcome_count(const RunConfig& cfg) {
    return cfg.mode == RunMode::Game ? opponent_profile_count(cfg.game.radio.players, cfg.game.radio.channels)
                                     : cfg.study.law.size();
}

}  // namespace

ValidationReport validate_report(const RunConfig& cfg) {
    cfg.validate();
    ValidationReport rep;
    std::ostringstream out;
    char buf[256];
    const std::size_t D = outcome_count(cfg);
    out << "config " << cfg.name << " (sha256 " << config_hash(cfg).substr(0, 16) << ")\n";
    if (cfg.mode == RunMode::Game) {
        const std::size_t K = cfg.game.radio.players, M = cfg.game.radio.channels;
        const double profiles = std::pow(static_cast<double>(M), static_cast<double>(K));
        std::snprintf(buf, sizeof buf, "K = %zu, M = %zu, D = M^(K-1) = %zu, M^K = %.0f\n", K, M, D, profiles);
        out << buf;
        std::snprintf(buf, sizeof buf, "reward bound A = %.6g bit/s/Hz\n", reward_bound(cfg.game.radio));
        out << buf;
        if (profiles > static_cast<double>(kDeskProfileCap)) {
            rep.warnings.push_back("M^K = " + num(profiles) + " exceeds the desk cap " +
                                   std::to_string(kDeskProfileCap) + " (SC and the CE metric enumerate profiles)");
        }
    } else {
        std::snprintf(buf, sizeof buf, "forecaster study, D = %zu\n", D);
        out << buf;
    }
    if (D > kDeskOutcomeCap) {
        rep.warnings.push_back("D = " + std::to_string(D) + " exceeds the desk cap " + std::to_string(kDeskOutcomeCap) +
                               " (estimator and forecaster state grow with D)");
    }
    const unsigned R = std::max(20u, periods_covering(cfg.horizon()));
    out << "   r        T'_r  explore  cum_explore_frac        eps_r         N_eps  lattice\n";
    for (unsigned r = 1; r <= R; ++r) {
        const double eps = D >= 2 ? Forecaster::period_eps(r, D) : 0.0;
        const double n_eps = D >= 2 ? lattice_size(D, lattice_resolution(D, eps)) : 1.0;
        const bool explicit_lattice = cfg.game.forecaster.mode == LatticeMode::Explicit ||
                                      (cfg.game.forecaster.mode == LatticeMode::Auto &&
                                       n_eps <= static_cast<double>(cfg.game.forecaster.explicit_cap));
        std::snprintf(buf, sizeof buf, "%4u %11zu %8zu %17.3e %12.6f %13.6g  %s\n", r, schedule_period_length(r),
                      exploration_count(r), cumulative_exploration_fraction(r), eps, n_eps,
                      D < 2 ? "-" : explicit_lattice ? "explicit" : "implicit");
        out << buf;
    }
    if (D >= 2) {
        const double eps1 = Forecaster::period_eps(1, D);
        const double n1 = lattice_size(D, lattice_resolution(D, eps1));
        std::snprintf(buf, sizeof buf, "explicit lattice at r = 1: %.6g points, ~%.3g MB\n", n1,
                      n1 * static_cast<double>(D) * 4.0 / 1e6);
        out << buf;
    }
    for (const auto& w : rep.warnings) out << "warning: " << w << '\n';
    if (rep.warnings.empty()) out << "no warnings\n";
    rep.text = out.str();
    return rep;
}

void write_rate_curves_csv(std::ostream& out, const RunConfig& cfg, double smoothness, double dimension) {
    const std::size_t D = outcome_count(cfg);
    out << "T,periods,forecaster_bound,regression_rate,expected_profile_samples\n";
    std::vector<std::size_t> grid;
    for (std::size_t T = 4; T < cfg.horizon(); T <<= 1) grid.push_back(T);
    grid.push_back(std::max<std::size_t>(cfg.horizon(), 4));
    for (std::size_t T : grid) {
        unsigned R = 0;
        std::size_t covered = 0;
        while (covered + schedule_period_length(R + 1) <= T) covered += schedule_period_length(++R);
        const double Td = static_cast<double>(T);
        out << T << ',' << R << ',' << (D >= 2 ? num(forecaster_rate_bound(D, Td)) : "") << ','
            << num(regression_rate(Td, smoothness, dimension)) << ',';
        if (cfg.mode == RunMode::Game) {
            out << num(expected_profile_samples(R, cfg.game.schedule.gamma, cfg.game.radio.channels,
                                                cfg.game.radio.players));
        }
        out << '\n';
    }
}

}  // namespace calband
