#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <limits>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <json.hpp>

#include "pointproc/experiments.hpp"
#include "pointproc/predictor.hpp"

using nlohmann::json;
using namespace pointproc;

namespace {

std::ofstream open_out(const std::string& path) {
  std::ofstream out(path);
  if (!out) throw ValidationError("cannot open " + path + " for writing");
  out << std::setprecision(std::numeric_limits<double>::max_digits10);
  return out;
}

ThinningVariant variant_from_string(const std::string& name) {
  if (name == "aggregate") return ThinningVariant::aggregate;
  if (name == "per-type") return ThinningVariant::per_type;
  throw ValidationError("unknown thinning variant: " + name);
}

struct CommonTrainFlags {
  double lr = 1e-3;
  int max_epochs = 50;
  int patience = 5;
  int eval_mult = 10;
  int batch = 1;

  void attach(CLI::App* cmd) {
    cmd->add_option("--lr", lr, "Adam learning rate");
    cmd->add_option("--max-epochs", max_epochs, "epoch cap");
    cmd->add_option("--patience", patience,
                    "epochs without dev improvement before stopping");
    cmd->add_option("--eval-mult", eval_mult,
                    "Monte-Carlo draws per event for dev/test evaluation");
    cmd->add_option("--batch", batch, "streams per gradient step");
  }

  [[nodiscard]] TrainConfig to_config(std::uint64_t seed, int threads) const {
    TrainConfig tc;
    tc.adam.lr = lr;
    tc.max_epochs = max_epochs;
    tc.patience = patience;
    tc.eval_mult = eval_mult;
    tc.batch = batch;
    tc.seed = seed;
    tc.threads = threads;
    return tc;
  }

  void describe(json& j) const {
    j["lr"] = lr;
    j["max_epochs"] = max_epochs;
    j["patience"] = patience;
    j["eval_mult"] = eval_mult;
    j["batch"] = batch;
  }
};

void setup_paramcount(CLI::App& app) {
  auto* cmd = app.add_subcommand("paramcount",
                                 "print the trainable parameter count");
  auto kind_name = std::make_shared<std::string>();
  auto K = std::make_shared<int>(0);
  auto D = std::make_shared<int>(0);
  cmd->add_option("--kind", *kind_name, "sempp | dsmpp | nsmmpp")->required();
  cmd->add_option("--K", *K, "number of event types")->required();
  cmd->add_option("--D", *D, "hidden size (nsmmpp only)");
  cmd->callback([kind_name, K, D] {
    const ModelKind kind = kind_from_string(*kind_name);
    std::int64_t count = 0;
    switch (kind) {
      case ModelKind::sempp: count = sempp_param_count(*K); break;
      case ModelKind::dsmpp: count = dsmpp_param_count(*K); break;
      case ModelKind::nsmmpp:
        if (*D < 1) throw ValidationError("nsmmpp needs --D >= 1");
        count = ctlstm_param_count(*K, *D);
        break;
    }
    std::cout << count << "\n";
  });
}

void setup_gradcheck(CLI::App& app, int& exit_code) {
  auto* cmd = app.add_subcommand(
      "gradcheck", "finite-difference check on a random instance");
  struct Opts {
    std::string kind_name;
    int K = 2, D = 4, events = 10;
    std::uint64_t seed = 0;
    double step = 1e-5, tol = 1e-4;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--kind", o->kind_name, "sempp | dsmpp | nsmmpp")->required();
  cmd->add_option("--K", o->K, "number of event types");
  cmd->add_option("--D", o->D, "hidden size (nsmmpp only)");
  cmd->add_option("--seed", o->seed, "base seed")->required();
  cmd->add_option("--step", o->step, "central-difference step");
  cmd->add_option("--events", o->events, "stream length");
  cmd->add_option("--tol", o->tol, "max relative error allowed");
  cmd->callback([o, &exit_code] {
    const ModelKind kind = kind_from_string(o->kind_name);
    const AnyModel m = random_test_model(kind, o->K, o->D, o->seed);
    const EventStream stream =
        random_test_stream(m, o->events, derive_seed(o->seed, 0x67637374ULL));
    McConfig mc;
    mc.n_samples = std::max(1, stream.size());
    mc.seed = derive_seed(o->seed, 0x67636d63ULL);
    const double err = finite_diff_check(m, stream, o->step, mc);
    std::cout << std::setprecision(17) << "max_rel_err=" << err << "\n"
              << (err <= o->tol ? "PASS" : "FAIL") << "\n";
    if (!(err <= o->tol)) exit_code = 2;
  });
}

void setup_sample(CLI::App& app) {
  auto* cmd = app.add_subcommand("sample", "draw streams by thinning");
  struct Opts {
    std::string model_path, out_path, variant = "aggregate";
    std::uint64_t seed = 0;
    double horizon = 0.0;
    int max_events = 0, n = 1;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--model", o->model_path, "model JSON file")->required();
  cmd->add_option("--out", o->out_path, "output JSONL path")->required();
  cmd->add_option("--seed", o->seed, "base seed")->required();
  auto* topt = cmd->add_option("--T", o->horizon, "observation horizon");
  auto* eopt =
      cmd->add_option("--max-events", o->max_events, "stop after this many");
  cmd->add_option("--n", o->n, "number of streams");
  cmd->add_option("--variant", o->variant, "aggregate | per-type");
  cmd->callback([o, topt, eopt] {
    const AnyModel m = load_model(o->model_path);
    SampleConfig sc;
    if (topt->count() > 0) sc.horizon = o->horizon;
    if (eopt->count() > 0) sc.max_events = o->max_events;
    sc.seed = o->seed;
    sc.variant = variant_from_string(o->variant);
    const Dataset data = sample_dataset(m, sc, o->n);

    json header;
    header["cmd"] = "sample";
    header["model"] = o->model_path;
    header["seed"] = o->seed;
    if (sc.horizon) header["T"] = *sc.horizon;
    if (sc.max_events) header["max_events"] = *sc.max_events;
    header["n"] = o->n;
    header["variant"] = o->variant;
    save_dataset(o->out_path, data, header.dump());
    std::cout << "wrote " << data.size() << " streams ("
              << data.total_events() << " events) to " << o->out_path << "\n";
  });
}

void setup_train(CLI::App& app) {
  auto* cmd = app.add_subcommand("train", "fit a model by stochastic MLE");
  struct Opts {
    std::string kind_name, train_path, dev_path, out_path, epoch_log;
    std::uint64_t seed = 0;
    int D = 8, threads = 1;
    CommonTrainFlags flags;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--kind", o->kind_name, "sempp | dsmpp | nsmmpp")->required();
  cmd->add_option("--train", o->train_path, "training JSONL")->required();
  cmd->add_option("--dev", o->dev_path, "dev JSONL for early stopping")
      ->required();
  cmd->add_option("--out", o->out_path, "output model JSON")->required();
  cmd->add_option("--seed", o->seed, "base seed")->required();
  cmd->add_option("--D", o->D, "hidden size (nsmmpp only)");
  cmd->add_option("--threads", o->threads, "worker threads");
  o->flags.attach(cmd);
  cmd->callback([o] {
    const ModelKind kind = kind_from_string(o->kind_name);
    const Dataset train_data = load_dataset(o->train_path);
    const Dataset dev_data = load_dataset(o->dev_path);
    AnyModel m = init_params(kind, train_data.num_types, o->D, o->seed);
    const TrainConfig tc = o->flags.to_config(o->seed, o->threads);
    const FitReport report = train(m, train_data, dev_data, tc);
    save_model(o->out_path, m);

    json config;
    config["cmd"] = "train";
    config["kind"] = o->kind_name;
    config["train"] = o->train_path;
    config["dev"] = o->dev_path;
    config["seed"] = o->seed;
    config["D"] = o->D;
    config["threads"] = o->threads;
    o->flags.describe(config);
    std::cout << "# " << config.dump() << "\n";
    std::cout << std::setprecision(17) << "stopped_epoch="
              << report.stopped_epoch << " best_epoch=" << report.best_epoch
              << " best_dev_ll_per_event=" << report.best_dev_ll_per_event
              << "\n";
    if (!o->epoch_log.empty()) {
      std::ofstream csv = open_out(o->epoch_log);
      csv << "# " << config.dump() << "\n";
      csv << "epoch,train_ll_per_event,dev_ll_per_event\n";
      for (const EpochRow& row : report.epoch_log) {
        csv << row.epoch << "," << row.train_ll_per_event << ","
            << row.dev_ll_per_event << "\n";
      }
    }
  });
  cmd->add_option("--epoch-log", o->epoch_log, "per-epoch CSV path");
}

void setup_eval(CLI::App& app) {
  auto* cmd =
      app.add_subcommand("eval", "held-out log-likelihood of a saved model");
  struct Opts {
    std::string model_path, data_path, out_path;
    std::uint64_t seed = 0;
    int eval_mult = 10, threads = 1;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--model", o->model_path, "model JSON file")->required();
  cmd->add_option("--data", o->data_path, "JSONL streams")->required();
  cmd->add_option("--seed", o->seed, "base seed")->required();
  cmd->add_option("--eval-mult", o->eval_mult, "MC draws per event");
  cmd->add_option("--threads", o->threads, "worker threads");
  cmd->add_option("--out", o->out_path, "JSON report path (default stdout)");
  cmd->callback([o] {
    const AnyModel m = load_model(o->model_path);
    const Dataset data = load_dataset(o->data_path);
    const DatasetLoglik r = dataset_log_likelihood(m, data, o->seed,
                                                   o->eval_mult, o->threads);
    json j;
    j["config"] = {{"cmd", "eval"},       {"model", o->model_path},
                   {"data", o->data_path}, {"seed", o->seed},
                   {"eval_mult", o->eval_mult}, {"threads", o->threads}};
    j["total"] = r.total;
    j["n_events"] = r.n_events;
    j["ll_per_event"] = r.per_event;
    double type_term = 0.0, time_term = 0.0;
    json per_stream = json::array();
    for (const LogLikReport& rep : r.reports) {
      type_term += rep.type_term;
      time_term += rep.time_term;
      per_stream.push_back({{"total", rep.total},
                            {"type_term", rep.type_term},
                            {"time_term", rep.time_term}});
    }
    j["type_term"] = type_term;
    j["time_term"] = time_term;
    j["per_stream"] = per_stream;
    if (o->out_path.empty()) {
      std::cout << j.dump(2) << "\n";
    } else {
      open_out(o->out_path) << j.dump(2) << "\n";
      std::cout << std::setprecision(17) << "ll_per_event=" << r.per_event
                << " (" << r.n_events << " events)\n";
    }
  });
}

void setup_predict(CLI::App& app) {
  auto* cmd = app.add_subcommand(
      "predict", "minimum-Bayes-risk next-event prediction over a dataset");
  struct Opts {
    std::string model_path, data_path, out_path, per_event_path;
    std::uint64_t seed = 0;
    int draws = 1000, threads = 1;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--model", o->model_path, "model JSON file")->required();
  cmd->add_option("--data", o->data_path, "JSONL streams")->required();
  cmd->add_option("--seed", o->seed, "base seed")->required();
  cmd->add_option("--draws", o->draws, "MC draws per prediction");
  cmd->add_option("--threads", o->threads, "worker threads");
  cmd->add_option("--out", o->out_path, "metrics JSON path (default stdout)");
  cmd->add_option("--per-event", o->per_event_path, "per-prediction CSV path");
  cmd->callback([o] {
    const AnyModel m = load_model(o->model_path);
    const Dataset data = load_dataset(o->data_path);
    std::vector<PredictionRow> rows;
    const bool want_rows = !o->per_event_path.empty();
    const PredictionMetrics metrics = evaluate_predictions(
        m, data, o->draws, o->seed, o->threads, want_rows ? &rows : nullptr);

    json config = {{"cmd", "predict"},   {"model", o->model_path},
                   {"data", o->data_path}, {"seed", o->seed},
                   {"draws", o->draws},  {"threads", o->threads}};
    json j;
    j["config"] = config;
    j["rmse"] = metrics.rmse;
    j["error_rate"] = metrics.error_rate;
    j["n_predictions"] = metrics.n_predictions;
    if (o->out_path.empty()) {
      std::cout << j.dump(2) << "\n";
    } else {
      open_out(o->out_path) << j.dump(2) << "\n";
      std::cout << std::setprecision(17) << "rmse=" << metrics.rmse
                << " error_rate=" << metrics.error_rate << "\n";
    }
    if (want_rows) {
      std::ofstream csv = open_out(o->per_event_path);
      csv << "# " << config.dump() << "\n";
      csv << "stream,index,true_time,predicted_time,true_type,"
             "predicted_type\n";
      for (const PredictionRow& row : rows) {
        csv << row.stream << "," << row.index << "," << row.true_time << ","
            << row.predicted_time << "," << row.true_type << ","
            << row.predicted_type << "\n";
      }
    }
  });
}

void setup_experiment(CLI::App& app) {
  auto* cmd = app.add_subcommand("experiment", "synthetic studies");
  struct Opts {
    std::string mode, out_dir;
    std::uint64_t seed = 0;
    int threads = 1, n_patterns = 5;
    int gen_hidden = 32, fit_hidden = 8;
    bool full_scale = false, all_patterns = false;
    CommonTrainFlags flags;
  };
  auto o = std::make_shared<Opts>();
  cmd->add_option("--mode", o->mode, "pilot | missing | superposition")
      ->required();
  cmd->add_option("--seed", o->seed, "base seed")->required();
  cmd->add_option("--out-dir", o->out_dir, "report directory")->required();
  cmd->add_option("--threads", o->threads, "worker threads");
  cmd->add_flag("--full-scale", o->full_scale,
                "8000/1000/1000 streams instead of 800/100/100");
  cmd->add_flag("--all-patterns", o->all_patterns,
                "missing mode: run every censoring pattern");
  cmd->add_option("--n-patterns", o->n_patterns,
                  "missing mode: sampled pattern count");
  cmd->add_option("--gen-D", o->gen_hidden,
                  "pilot mode: hidden size of the neural ground truth");
  cmd->add_option("--fit-D", o->fit_hidden,
                  "pilot mode: hidden size of the fitted neural model");
  o->flags.attach(cmd);
  cmd->callback([o] {
    std::filesystem::create_directories(o->out_dir);
    json config;
    config["cmd"] = "experiment";
    config["mode"] = o->mode;
    config["seed"] = o->seed;
    config["threads"] = o->threads;
    o->flags.describe(config);

    if (o->mode == "pilot") {
      config["full_scale"] = o->full_scale;
      config["gen_D"] = o->gen_hidden;
      config["fit_D"] = o->fit_hidden;
      PilotConfig pc;
      pc.seed = o->seed;
      pc.full_scale = o->full_scale;
      pc.threads = o->threads;
      pc.gen_hidden = o->gen_hidden;
      pc.fit_hidden = o->fit_hidden;
      pc.train = o->flags.to_config(o->seed, o->threads);
      const PilotReport report = pilot_experiment(pc);
      write_pilot_report(report, o->out_dir + "/pilot.json",
                         o->out_dir + "/pilot.csv", config.dump());
      std::cout << "wrote " << o->out_dir << "/pilot.json and pilot.csv\n";
    } else if (o->mode == "missing") {
      config["all_patterns"] = o->all_patterns;
      config["n_patterns"] = o->n_patterns;
      MissingDataConfig mc;
      mc.seed = o->seed;
      mc.all_patterns = o->all_patterns;
      mc.n_patterns = o->n_patterns;
      mc.threads = o->threads;
      mc.train = o->flags.to_config(o->seed, o->threads);
      const MissingDataReport report = missing_data_experiment(mc);
      write_missing_report(report, o->out_dir + "/missing.json",
                           o->out_dir + "/missing.csv", config.dump());
      std::cout << "wrote " << o->out_dir << "/missing.json and missing.csv\n";
    } else if (o->mode == "superposition") {
      const SuperpositionReport report = superposition_check(o->seed);
      write_superposition_report(report, o->out_dir + "/superposition.json",
                                 config.dump());
      std::cout << "wrote " << o->out_dir << "/superposition.json\n";
    } else {
      throw ValidationError("unknown experiment mode: " + o->mode);
    }
  });
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"generative models of typed event streams in continuous time"};
  app.require_subcommand(1);
  int exit_code = 0;

  setup_paramcount(app);
  setup_gradcheck(app, exit_code);
  setup_sample(app);
  setup_train(app);
  setup_eval(app);
  setup_predict(app);
  setup_experiment(app);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ValidationError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const NumericalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return exit_code;
}
