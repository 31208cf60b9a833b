#include <CLI11.hpp>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "loadcast/loadcast.hpp"

// loadcast CLI: synth | ingest | train | forecast | scan | report.
// Exit codes: 0 ok, 2 usage, 3 data problem, 4 numeric failure.

namespace fs = std::filesystem;
using namespace loadcast;

namespace {

void print_config_line(const std::string& key, const std::string& value) {
    std::cout << "[config] " << key << "=" << value << "\n";
}

void print_config_line(const std::string& key, double value) {
    print_config_line(key, fmt_double(value));
}

void print_config_line(const std::string& key, std::int64_t value) {
    print_config_line(key, std::to_string(value));
}

LoadSeries read_series_file(const std::string& path, int step_minutes = 15,
                            GapPolicy policy = GapPolicy::error) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(Errc::io_error, "cannot open '" + path + "'");
    LoadSeries s = read_series_csv(in, step_minutes, policy);
    return s;
}

void write_series_file(const std::string& path, const LoadSeries& s) {
    std::ostringstream os;
    write_simple_csv(os, s);
    write_text_file(path, os.str());
}

struct SynthArgs {
    std::string out_dir;
    SynthConfig cfg;
};

int cmd_synth(const SynthArgs& a) {
    a.cfg.validate();
    print_config_line("command", "synth");
    print_config_line("out", a.out_dir);
    print_config_line("households", static_cast<std::int64_t>(a.cfg.n_households));
    print_config_line("days", static_cast<std::int64_t>(a.cfg.days));
    print_config_line("seed", static_cast<std::int64_t>(a.cfg.seed));
    print_config_line("base_kw", a.cfg.base_kw);
    print_config_line("morning_peak_kw", a.cfg.morning_peak_kw);
    print_config_line("evening_peak_kw", a.cfg.evening_peak_kw);
    print_config_line("spike_rate_per_day", a.cfg.spike_rate_per_day);
    print_config_line("spike_kw", a.cfg.spike_kw);
    print_config_line("noise_sd_kw", a.cfg.noise_sd_kw);
    print_config_line("weekend_scale", a.cfg.weekend_scale);
    print_config_line("day_level_sd", a.cfg.day_level_sd);
    print_config_line("day_level_rho", a.cfg.day_level_rho);

    std::error_code ec;
    fs::create_directories(a.out_dir, ec);
    if (ec) throw Error(Errc::io_error, "cannot create '" + a.out_dir + "': " + ec.message());

    const std::vector<LoadSeries> fleet = generate_fleet(a.cfg);
    for (int i = 0; i < a.cfg.n_households; ++i) {
        char name[48];
        std::snprintf(name, sizeof(name), "household_%03d.csv", i);
        write_series_file((fs::path(a.out_dir) / name).string(), fleet[static_cast<std::size_t>(i)]);
    }
    write_series_file((fs::path(a.out_dir) / "aggregate.csv").string(), aggregate(fleet));
    std::cout << "wrote " << a.cfg.n_households << " household files and aggregate.csv to "
              << a.out_dir << "\n";
    return 0;
}

struct IngestArgs {
    std::vector<std::string> inputs;
    std::string format = "simple";
    std::string epoch = "2009-01-01";
    int step_minutes = 0; // 0 = by format
    std::string gap_policy = "linear";
    std::int64_t select_n = 0; // 0 = all
    std::uint64_t seed = 1;
    std::string out_file;
};

int cmd_ingest(const IngestArgs& a) {
    ParseOptions opt;
    opt.format = a.format == "code" ? CsvFormat::code : CsvFormat::simple;
    opt.code_epoch_utc = parse_date_utc(a.epoch);
    const int step = a.step_minutes != 0 ? a.step_minutes
                                         : (opt.format == CsvFormat::code ? 30 : 15);
    if (step != 15 && step != 30)
        throw Error(Errc::unsupported_step, "step must be 15 or 30");
    const GapPolicy policy = a.gap_policy == "error" ? GapPolicy::error : GapPolicy::linear_fill;

    print_config_line("command", "ingest");
    for (const auto& f : a.inputs) print_config_line("input", f);
    print_config_line("format", a.format);
    print_config_line("epoch", a.epoch);
    print_config_line("step_minutes", static_cast<std::int64_t>(step));
    print_config_line("gap_policy", a.gap_policy);
    print_config_line("select", a.select_n);
    print_config_line("seed", static_cast<std::int64_t>(a.seed));
    print_config_line("out", a.out_file);

    std::vector<MeterReading> readings;
    for (const auto& path : a.inputs) {
        std::ifstream in(path, std::ios::binary);
        if (!in) throw Error(Errc::io_error, "cannot open '" + path + "'");
        auto part = parse_readings(in, opt);
        readings.insert(readings.end(), part.begin(), part.end());
    }

    std::set<std::string> ids;
    for (const auto& r : readings) ids.insert(r.meter_id);
    if (ids.empty()) throw Error(Errc::insufficient_data, "no readings in input");

    std::vector<std::string> pool(ids.begin(), ids.end());
    std::vector<std::string> chosen = pool;
    if (a.select_n > 0) {
        const auto sel = select_households(pool, static_cast<std::size_t>(a.select_n), a.seed);
        chosen = sel.chosen;
        for (const auto& id : chosen) print_config_line("chosen", id);
    }

    std::vector<LoadSeries> series_list;
    series_list.reserve(chosen.size());
    for (const auto& id : chosen)
        series_list.push_back(resample_to_15min(assemble_series(readings, id, step, policy)));

    LoadSeries sum = aggregate(series_list);
    write_series_file(a.out_file, sum);
    std::cout << "aggregated " << chosen.size() << " meters, " << sum.values.size()
              << " slots -> " << a.out_file << "\n";
    return 0;
}

struct NetFlags {
    int window = 672;
    int kernel = 9;
    int filters = 16;
    int dense = 6;
    int horizon = 144;
    std::string mode = "direct";

    NetworkConfig to_config() const {
        NetworkConfig cfg;
        cfg.input_len = window;
        cfg.kernel_size = kernel;
        cfg.n_filters = filters;
        cfg.dense_size = dense;
        cfg.horizon = mode == "iterative" ? 1 : horizon;
        return cfg;
    }
};

/// key=value training config; CLI flags override file values.
TrainingConfig load_training_config(const std::string& path, const CLI::App* cmd,
                                    std::int64_t epochs_flag, std::int64_t batch_flag,
                                    std::uint64_t seed_flag, double lr_flag) {
    TrainingConfig tcfg;
    if (!path.empty()) {
        const KvMap kv = read_kv_file(path);
        validate_keys(kv, {"batch_size", "epochs", "seed", "lr", "beta1", "beta2", "eps",
                           "schedule_decay"},
                      "training config");
        tcfg.batch_size = static_cast<int>(kv_int(kv, "batch_size", tcfg.batch_size));
        tcfg.epochs = static_cast<int>(kv_int(kv, "epochs", tcfg.epochs));
        tcfg.seed = static_cast<std::uint64_t>(kv_int(kv, "seed", static_cast<std::int64_t>(tcfg.seed)));
        tcfg.nadam.lr = kv_double(kv, "lr", tcfg.nadam.lr);
        tcfg.nadam.beta1 = kv_double(kv, "beta1", tcfg.nadam.beta1);
        tcfg.nadam.beta2 = kv_double(kv, "beta2", tcfg.nadam.beta2);
        tcfg.nadam.eps = kv_double(kv, "eps", tcfg.nadam.eps);
        tcfg.nadam.schedule_decay = kv_double(kv, "schedule_decay", tcfg.nadam.schedule_decay);
    }
    if (cmd->count("--epochs") > 0) tcfg.epochs = static_cast<int>(epochs_flag);
    if (cmd->count("--batch-size") > 0) tcfg.batch_size = static_cast<int>(batch_flag);
    if (cmd->count("--seed") > 0) tcfg.seed = seed_flag;
    if (cmd->count("--lr") > 0) tcfg.nadam.lr = lr_flag;
    return tcfg;
}

void print_training_config(const TrainingConfig& tcfg) {
    print_config_line("batch_size", static_cast<std::int64_t>(tcfg.batch_size));
    print_config_line("epochs", static_cast<std::int64_t>(tcfg.epochs));
    print_config_line("seed", static_cast<std::int64_t>(tcfg.seed));
    print_config_line("lr", tcfg.nadam.lr);
    print_config_line("beta1", tcfg.nadam.beta1);
    print_config_line("beta2", tcfg.nadam.beta2);
    print_config_line("eps", tcfg.nadam.eps);
    print_config_line("schedule_decay", tcfg.nadam.schedule_decay);
}

void print_net_flags(const NetFlags& nf) {
    print_config_line("mode", nf.mode);
    print_config_line("window", static_cast<std::int64_t>(nf.window));
    print_config_line("kernel", static_cast<std::int64_t>(nf.kernel));
    print_config_line("filters", static_cast<std::int64_t>(nf.filters));
    print_config_line("dense", static_cast<std::int64_t>(nf.dense));
    print_config_line("horizon", static_cast<std::int64_t>(nf.to_config().horizon));
}

struct TrainArgs {
    std::string data_file;
    std::string out_model;
    std::string report_file;
    std::string config_file;
    NetFlags net;
    double val_fraction = 0.2;
    TrainingConfig tcfg;
};

void write_stats_sidecar(const std::string& model_path, const NormStats& stats) {
    std::ostringstream os;
    os << "mean=" << fmt_double(stats.mean) << "\n" << "sd=" << fmt_double(stats.sd) << "\n";
    write_text_file(model_path + ".stats", os.str());
}

NormStats read_stats_sidecar(const std::string& model_path) {
    const KvMap kv = read_kv_file(model_path + ".stats");
    validate_keys(kv, {"mean", "sd"}, "stats sidecar");
    NormStats st;
    st.mean = kv_double(kv, "mean", 0.0);
    st.sd = kv_double(kv, "sd", 1.0);
    if (!(st.sd > 0)) throw Error(Errc::invalid_config, "stats sidecar: sd must be positive");
    return st;
}

int cmd_train(const TrainArgs& a) {
    print_config_line("command", "train");
    print_config_line("data", a.data_file);
    print_config_line("out", a.out_model);
    print_net_flags(a.net);
    print_config_line("val_fraction", a.val_fraction);
    print_training_config(a.tcfg);

    const LoadSeries series = read_series_file(a.data_file);
    const NetworkConfig cfg = a.net.to_config();
    const PreparedData data = prepare_dataset(series, cfg.input_len, cfg.horizon,
                                              SplitSpec{a.val_fraction});
    const auto [net, report] = train(cfg, a.tcfg, data.train, data.val);

    std::ostringstream model_text;
    save_network(model_text, net);
    write_text_file(a.out_model, model_text.str());
    write_stats_sidecar(a.out_model, data.stats);

    if (!a.report_file.empty()) {
        std::ostringstream os;
        os << "epoch,train_loss_norm,val_mse_norm,val_mse_phys\n";
        const double sd2 = data.stats.sd * data.stats.sd;
        for (std::size_t e = 0; e < report.train_loss.size(); ++e)
            os << (e + 1) << ',' << fmt_double(report.train_loss[e]) << ','
               << fmt_double(report.val_mse_norm[e]) << ','
               << fmt_double(report.val_mse_norm[e] * sd2) << '\n';
        write_text_file(a.report_file, os.str());
    }

    std::cout << "train windows: " << data.train.size() << ", val windows: " << data.val.size()
              << "\n";
    std::cout << "final train loss (norm): " << fmt_double(report.train_loss.back()) << "\n";
    std::cout << "final val MSE (norm): " << fmt_double(report.final_val_mse_norm) << "\n";
    std::cout << "final val MSE (kWh^2): " << fmt_double(report.final_val_mse_phys) << "\n";
    std::cout << "model written to " << a.out_model << " (+.stats)\n";
    return 0;
}

struct ForecastArgs {
    std::string model_file;
    std::string data_file;
    std::string out_file;
    std::string mode = "direct";
    int steps = 144;
};

int cmd_forecast(const ForecastArgs& a) {
    print_config_line("command", "forecast");
    print_config_line("model", a.model_file);
    print_config_line("data", a.data_file);
    print_config_line("mode", a.mode);
    print_config_line("steps", static_cast<std::int64_t>(a.steps));
    print_config_line("out", a.out_file);

    std::ifstream model_in(a.model_file, std::ios::binary);
    if (!model_in) throw Error(Errc::io_error, "cannot open '" + a.model_file + "'");
    const Network net = load_network(model_in);
    const NormStats stats = read_stats_sidecar(a.model_file);

    const LoadSeries series = read_series_file(a.data_file);
    if (series.values.size() < static_cast<std::size_t>(net.cfg.input_len))
        throw Error(Errc::series_too_short, "need " + std::to_string(net.cfg.input_len) +
                                                " slots, have " +
                                                std::to_string(series.values.size()));
    const std::span<const double> window(series.values.data() + series.values.size() -
                                             static_cast<std::size_t>(net.cfg.input_len),
                                         static_cast<std::size_t>(net.cfg.input_len));
    const std::int64_t origin = series.end();

    ForecastResult result;
    if (a.mode == "direct") {
        if (a.steps != 144)
            throw Error(Errc::mode_mismatch, "direct mode forecasts exactly 144 steps");
        result = predict_direct(net, window, stats, origin);
    } else {
        result = predict_iterative(net, window, stats, a.steps, origin);
    }

    std::ostringstream os;
    os << "timestamp,forecast_kwh\n";
    for (std::size_t i = 0; i < result.values_kwh.size(); ++i)
        os << format_iso8601_utc(result.origin_utc + static_cast<std::int64_t>(i + 1) * 900) << ','
           << fmt_double(result.values_kwh[i]) << '\n';
    write_text_file(a.out_file, os.str());
    std::cout << "wrote " << result.values_kwh.size() << " forecast rows to " << a.out_file << "\n";
    return 0;
}

struct ScanArgs {
    std::string data_file;
    std::string grid_file;
    std::string out_dir;
    std::string config_file;
    NetFlags net;
    double val_fraction = 0.2;
    int workers = 1;
    bool timing = false;
    TrainingConfig tcfg;
};

ScanGrid load_grid(const std::string& path) {
    ScanGrid grid;
    if (path.empty()) return grid;
    const KvMap kv = read_kv_file(path);
    validate_keys(kv, {"kernel_sizes", "filter_counts", "dense_sizes", "seeds"}, "grid config");
    const auto to_ints = [](const std::vector<std::int64_t>& xs) {
        std::vector<int> out;
        for (auto x : xs) out.push_back(static_cast<int>(x));
        return out;
    };
    grid.kernel_sizes = to_ints(kv_int_list(kv, "kernel_sizes", {3, 5, 9, 15, 25}));
    grid.filter_counts = to_ints(kv_int_list(kv, "filter_counts", {2, 4, 8, 16, 32}));
    grid.dense_sizes = to_ints(kv_int_list(kv, "dense_sizes", {1, 2, 4, 6, 8, 16}));
    const auto seeds = kv_int_list(kv, "seeds", {1});
    grid.seeds.clear();
    for (auto s : seeds) grid.seeds.push_back(static_cast<std::uint64_t>(s));
    return grid;
}

std::string join_ints(const std::vector<int>& xs) {
    std::string out;
    for (std::size_t i = 0; i < xs.size(); ++i) out += (i ? "," : "") + std::to_string(xs[i]);
    return out;
}

int cmd_scan(const ScanArgs& a) {
    const ScanGrid grid = load_grid(a.grid_file);
    print_config_line("command", "scan");
    print_config_line("data", a.data_file);
    print_config_line("out", a.out_dir);
    print_config_line("kernel_sizes", join_ints(grid.kernel_sizes));
    print_config_line("filter_counts", join_ints(grid.filter_counts));
    print_config_line("dense_sizes", join_ints(grid.dense_sizes));
    {
        std::string s;
        for (std::size_t i = 0; i < grid.seeds.size(); ++i)
            s += (i ? "," : "") + std::to_string(grid.seeds[i]);
        print_config_line("grid_seeds", s);
    }
    print_net_flags(a.net);
    print_config_line("val_fraction", a.val_fraction);
    print_config_line("workers", static_cast<std::int64_t>(a.workers));
    print_config_line("timing", a.timing ? "on" : "off");
    print_training_config(a.tcfg);

    const LoadSeries series = read_series_file(a.data_file);
    const NetworkConfig base = a.net.to_config();
    const PreparedData data = prepare_dataset(series, base.input_len, base.horizon,
                                              SplitSpec{a.val_fraction});

    const ScanResult result = run_scan(grid, base, a.tcfg, data.train, data.val, a.workers);
    render_report(result, a.out_dir, a.timing);

    std::size_t failed = 0;
    for (const auto& c : result.cells)
        if (c.failed) ++failed;
    std::cout << "scan of " << result.cells.size() << " cells complete, " << failed
              << " failed; report in " << a.out_dir << "\n";
    return 0;
}

struct ReportArgs {
    std::string cells_file;
    std::string out_dir;
};

int cmd_report(const ReportArgs& a) {
    print_config_line("command", "report");
    print_config_line("cells", a.cells_file);
    print_config_line("out", a.out_dir);

    const ScanResult result = read_cells_csv(a.cells_file);
    std::error_code ec;
    fs::create_directories(a.out_dir, ec);
    if (ec) throw Error(Errc::io_error, "cannot create '" + a.out_dir + "': " + ec.message());
    render_derived_report(result, a.out_dir);
    std::cout << "regenerated heatmaps and curves from " << a.cells_file << " in " << a.out_dir
              << "\n";
    return 0;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"1D-CNN electricity load forecasting toolkit"};
    app.require_subcommand(1);

    // synth
    SynthArgs synth_args;
    synth_args.cfg.days = 28;
    auto* synth_cmd = app.add_subcommand("synth", "generate synthetic household load CSVs");
    synth_cmd->add_option("--out", synth_args.out_dir, "output directory")->required();
    synth_cmd->add_option("--households", synth_args.cfg.n_households, "number of households");
    synth_cmd->add_option("--days", synth_args.cfg.days, "days to simulate");
    synth_cmd->add_option("--seed", synth_args.cfg.seed, "generator seed");
    synth_cmd->add_option("--base-kw", synth_args.cfg.base_kw, "standby load in kW");
    synth_cmd->add_option("--morning-peak-kw", synth_args.cfg.morning_peak_kw, "morning bump peak");
    synth_cmd->add_option("--evening-peak-kw", synth_args.cfg.evening_peak_kw, "evening bump peak");
    synth_cmd->add_option("--spike-rate", synth_args.cfg.spike_rate_per_day, "spikes per day");
    synth_cmd->add_option("--spike-kw", synth_args.cfg.spike_kw, "spike amplitude");
    synth_cmd->add_option("--noise-sd-kw", synth_args.cfg.noise_sd_kw, "noise sd in kW");
    synth_cmd->add_option("--weekend-scale", synth_args.cfg.weekend_scale, "weekend bump factor");
    synth_cmd->add_option("--day-level-sd", synth_args.cfg.day_level_sd, "day level factor sd");
    synth_cmd->add_option("--day-level-rho", synth_args.cfg.day_level_rho,
                          "day level lag-1 correlation");

    // ingest
    IngestArgs ingest_args;
    auto* ingest_cmd = app.add_subcommand("ingest", "parse meter CSVs into a sum-load series");
    ingest_cmd->add_option("--input", ingest_args.inputs, "input CSV file(s)")->required();
    ingest_cmd->add_option("--format", ingest_args.format, "input format")
        ->check(CLI::IsMember({"simple", "code"}));
    ingest_cmd->add_option("--epoch", ingest_args.epoch, "day-code epoch (YYYY-MM-DD)");
    ingest_cmd->add_option("--step", ingest_args.step_minutes, "source grid step (15 or 30)")
        ->check(CLI::IsMember({0, 15, 30}));
    ingest_cmd->add_option("--gap-policy", ingest_args.gap_policy, "gap handling")
        ->check(CLI::IsMember({"error", "linear"}));
    ingest_cmd->add_option("--select", ingest_args.select_n, "randomly select N households (0=all)");
    ingest_cmd->add_option("--seed", ingest_args.seed, "selection seed");
    ingest_cmd->add_option("--out", ingest_args.out_file, "output aggregate CSV")->required();

    // train
    TrainArgs train_args;
    std::int64_t epochs_flag = 40, batch_flag = 128;
    std::uint64_t seed_flag = 1;
    double lr_flag = 0.002;
    auto* train_cmd = app.add_subcommand("train", "train a forecasting network");
    train_cmd->add_option("--data", train_args.data_file, "15-min SIMPLE_CSV series")->required();
    train_cmd->add_option("--out", train_args.out_model, "model output path")->required();
    train_cmd->add_option("--report", train_args.report_file, "per-epoch report CSV");
    train_cmd->add_option("--config", train_args.config_file, "key=value training config");
    train_cmd->add_option("--mode", train_args.net.mode, "direct or iterative")
        ->check(CLI::IsMember({"direct", "iterative"}));
    train_cmd->add_option("--window,-W", train_args.net.window, "input window length");
    train_cmd->add_option("--kernel,-k", train_args.net.kernel, "conv kernel size");
    train_cmd->add_option("--filters,-F", train_args.net.filters, "number of filters");
    train_cmd->add_option("--dense,-D", train_args.net.dense, "hidden dense width");
    train_cmd->add_option("--horizon", train_args.net.horizon, "forecast horizon (direct mode)");
    train_cmd->add_option("--val-fraction", train_args.val_fraction, "validation fraction");
    train_cmd->add_option("--epochs", epochs_flag, "training epochs");
    train_cmd->add_option("--batch-size", batch_flag, "mini-batch size");
    train_cmd->add_option("--seed", seed_flag, "training seed");
    train_cmd->add_option("--lr", lr_flag, "learning rate");

    // forecast
    ForecastArgs fc_args;
    auto* fc_cmd = app.add_subcommand("forecast", "forecast from a trained model");
    fc_cmd->add_option("--model", fc_args.model_file, "model file from train")->required();
    fc_cmd->add_option("--data", fc_args.data_file, "15-min SIMPLE_CSV series")->required();
    fc_cmd->add_option("--mode", fc_args.mode, "direct or iterative")
        ->check(CLI::IsMember({"direct", "iterative"}));
    fc_cmd->add_option("--steps", fc_args.steps, "steps to forecast (iterative)");
    fc_cmd->add_option("--out", fc_args.out_file, "forecast CSV output")->required();

    // scan
    ScanArgs scan_args;
    std::int64_t s_epochs_flag = 40, s_batch_flag = 128;
    std::uint64_t s_seed_flag = 1;
    double s_lr_flag = 0.002;
    auto* scan_cmd = app.add_subcommand("scan", "hyperparameter scan with heatmap reports");
    scan_cmd->add_option("--data", scan_args.data_file, "15-min SIMPLE_CSV series")->required();
    scan_cmd->add_option("--grid", scan_args.grid_file, "key=value grid config");
    scan_cmd->add_option("--out", scan_args.out_dir, "report directory")->required();
    scan_cmd->add_option("--config", scan_args.config_file, "key=value training config");
    scan_cmd->add_option("--mode", scan_args.net.mode, "direct or iterative")
        ->check(CLI::IsMember({"direct", "iterative"}));
    scan_cmd->add_option("--window,-W", scan_args.net.window, "input window length");
    scan_cmd->add_option("--horizon", scan_args.net.horizon, "forecast horizon (direct mode)");
    scan_cmd->add_option("--val-fraction", scan_args.val_fraction, "validation fraction");
    scan_cmd->add_option("--workers", scan_args.workers, "parallel training workers");
    scan_cmd->add_flag("--timing", scan_args.timing,
                       "embed measured wall times in cells.csv (breaks byte determinism)");
    scan_cmd->add_option("--epochs", s_epochs_flag, "training epochs");
    scan_cmd->add_option("--batch-size", s_batch_flag, "mini-batch size");
    scan_cmd->add_option("--seed", s_seed_flag, "base scan seed");
    scan_cmd->add_option("--lr", s_lr_flag, "learning rate");

    // report
    ReportArgs report_args;
    auto* report_cmd = app.add_subcommand("report", "regenerate heatmaps/curves from cells.csv");
    report_cmd->add_option("--cells", report_args.cells_file, "cells.csv from a scan")->required();
    report_cmd->add_option("--out", report_args.out_dir, "output directory")->required();

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    try {
        if (synth_cmd->parsed()) return cmd_synth(synth_args);
        if (ingest_cmd->parsed()) return cmd_ingest(ingest_args);
        if (train_cmd->parsed()) {
            train_args.tcfg = load_training_config(train_args.config_file, train_cmd, epochs_flag,
                                                   batch_flag, seed_flag, lr_flag);
            return cmd_train(train_args);
        }
        if (fc_cmd->parsed()) return cmd_forecast(fc_args);
        if (scan_cmd->parsed()) {
            scan_args.tcfg = load_training_config(scan_args.config_file, scan_cmd, s_epochs_flag,
                                                  s_batch_flag, s_seed_flag, s_lr_flag);
            return cmd_scan(scan_args);
        }
        if (report_cmd->parsed()) return cmd_report(report_args);
        std::cerr << "error: code=invalid_config msg=\"no subcommand\"\n";
        return 2;
    } catch (const Error& e) {
        std::cerr << "error: code=" << errc_name(e.code()) << " msg=\"" << e.what() << "\"\n";
        return is_numeric_error(e.code()) ? 4 : 3;
    } catch (const std::exception& e) {
        std::cerr << "error: code=internal msg=\"" << e.what() << "\"\n";
        return 3;
    }
}
