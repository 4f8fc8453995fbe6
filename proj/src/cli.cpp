// Copyright 2026 The fcfnn Authors
// SPDX-License-Identifier: Apache-2.0

#include "fcfnn/cli.hpp"

#include <cstdlib>
#include <iostream>
#include <optional>
#include <sstream>

#include "CLI11.hpp"
#include "fcfnn/data.hpp"
#include "fcfnn/error.hpp"
#include "fcfnn/model_io.hpp"
#include "fcfnn/nn.hpp"
#include "fcfnn/schema.hpp"
#include "fcfnn/synth.hpp"
#include "fcfnn/train.hpp"

namespace fcfnn::cli {
namespace {

std::string one_line(std::string text) {
  for (char& c : text) {
    if (c == '\n' || c == '\r') c = ' ';
    if (c == '"') c = '\'';
  }
  return text;
}

void report_error(std::ostream& err, std::string_view kind, const std::string& message) {
  err << "error kind=" << kind << " message=\"" << one_line(message) << "\"\n";
}

SchemaSpec resolve_schema(const std::string& flag) {
  if (!flag.empty()) return load_schema(flag);
  if (const char* env = std::getenv(std::string(kSchemaEnv).c_str()); env && *env) {
    return load_schema(env);
  }
  return SchemaSpec::paper_default();
}

struct GenerateArgs {
  std::string config;
  std::optional<std::size_t> rows, classes, features, base_rows, augment;
  std::optional<double> noise_sd;
  std::uint64_t seed = 0;
  std::string out, schema, schema_out;
  bool indicators = false;
};

struct TrainArgs {
  std::string data, schema, out, history, resume;
  std::string arch = "paper-default";
  std::string init = "he";
  std::string optimizer = "adam";
  std::string preset{kReluSoftmaxPreset};
  double vs = 0.1;
  std::size_t bs = 20;
  std::size_t epochs = 1000;
  double lr = 1e-3;
  std::uint64_t seed = 0;
  bool no_bias = false;
  bool quiet = false;
};

struct EvaluateArgs {
  std::string model, data;
};

struct PredictArgs {
  std::string model, data, out;
  std::size_t top_k = kDefaultTopK;
  bool report = false;
  double threshold = 1e-3;
};

struct InspectArgs {
  std::string model, probe;
};

int do_generate(const GenerateArgs& a, std::ostream& out) {
  GeneratorConfig cfg = a.config.empty() ? GeneratorConfig{} : load_generator_config(a.config);
  cfg.seed = a.seed;
  if (a.rows) cfg.n_rows = *a.rows;
  if (a.classes) cfg.n_classes = *a.classes;
  if (a.features) cfg.n_features = *a.features;
  if (a.base_rows) cfg.base_rows_per_class = *a.base_rows;
  if (a.augment) cfg.augmentation_factor = *a.augment;
  if (a.noise_sd) cfg.noise_sd = *a.noise_sd;
  if (a.indicators) cfg.emit_indicators = true;

  const SyntheticData data =
      a.schema.empty() ? generate(cfg) : generate(cfg, load_schema(a.schema));
  data.save_csv(a.out);
  if (!a.schema_out.empty()) save_schema(data.schema, a.schema_out);
  out << "wrote " << data.records.size() << " rows to " << a.out << "\n";
  return kExitOk;
}

int do_train(const TrainArgs& a, std::ostream& out) {
  TrainingConfig cfg;
  cfg.vs = a.vs;
  cfg.bs = a.bs;
  cfg.epochs = a.epochs;
  cfg.seed = a.seed;
  cfg.activation_preset = a.preset;
  const auto opt = parse_optimizer(a.optimizer);
  if (!opt) throw ConfigError("unknown optimizer '" + a.optimizer + "' (sgd, adam)");
  cfg.optimizer.kind = *opt;
  cfg.optimizer.learning_rate = a.lr;
  cfg.validate();

  Model model;
  if (!a.resume.empty()) {
    model = load_model(a.resume);
    if (!a.schema.empty() && load_schema(a.schema) != model.schema) {
      throw DataError("--schema differs from the schema stored in " + a.resume);
    }
    cfg.first_epoch = model.metadata.epochs_trained + 1;
  } else {
    model.schema = resolve_schema(a.schema);
    const auto scheme = parse_init_scheme(a.init);
    if (!scheme) throw ConfigError("unknown init scheme '" + a.init + "' (he, uniform)");
    const NetworkSpec spec = parse_architecture(a.arch, model.schema.feature_count(),
                                                model.schema.label_count(), !a.no_bias);
    model.network = init_weights(spec, *scheme, a.seed);
  }

  const Dataset ds = load_dataset(a.data, model.schema);
  TrainResult result = train(std::move(model.network), ds, cfg,
                             [&](const EpochMetrics& m) {
                               if (!a.quiet) out << progress_line(m) << "\n";
                             });
  model.network = std::move(result.network);
  model.metadata.epochs_trained = cfg.first_epoch - 1 + cfg.epochs;
  model.metadata.training_config = cfg.to_json_text();
  model.metadata.training_fingerprint = cfg.fingerprint();
  save_model(model, a.out);
  if (!a.history.empty()) export_history(result.history, a.history, !a.resume.empty());

  const EpochMetrics& last = result.history.epochs.back();
  out << "saved " << a.out << " after epoch " << last.epoch
      << " val_acc=" << format_double(last.val_accuracy) << "\n";
  return kExitOk;
}

int do_evaluate(const EvaluateArgs& a, std::ostream& out) {
  const Model model = load_model(a.model);
  const Dataset ds = load_dataset(a.data, model.schema);
  const Evaluation e = evaluate(model.network, ds);
  out << "rows=" << ds.size() << " accuracy=" << format_double(e.accuracy)
      << " loss=" << format_double(e.loss) << "\n";
  return kExitOk;
}

int do_predict(const PredictArgs& a, std::ostream& out) {
  const Model model = load_model(a.model);
  const auto profiles = classify_csv(model, a.data, a.out, a.top_k);
  if (a.report) {
    for (const RankedProfile& p : profiles) {
      out << p.respondent << ": " << format_report(p, a.threshold, a.top_k) << "\n";
    }
  }
  out << "wrote " << profiles.size() << " rows to " << a.out << "\n";
  return kExitOk;
}

int do_inspect(const InspectArgs& a, std::ostream& out) {
  const Model model = load_model(a.model);
  const Network& net = model.network;
  out << "input " << net.input_width() << "\n";
  for (std::size_t k = 0; k < net.layers().size(); ++k) {
    const DenseLayer& l = net.layer(k);
    out << "layer " << k << ": " << l.fan_in() << " -> " << l.fan_out() << " "
        << to_string(l.activation) << " dropout=" << format_double(l.dropout_rate) << "\n";
  }
  out << "use_bias " << (net.use_bias() ? "true" : "false") << "\n";
  out << "parameters " << net.parameter_count() << "\n";
  out << "epochs_trained " << model.metadata.epochs_trained << "\n";
  if (!model.metadata.training_fingerprint.empty()) {
    out << "training_fingerprint " << model.metadata.training_fingerprint << "\n";
  }
  if (!a.probe.empty()) {
    const RawTable table = load_csv(a.probe, model.schema, LabelPolicy::kOptional);
    Dataset probe{model.schema, {}};
    for (const RawRecord& r : table.records) {
      probe.rows.push_back({normalize(r.features, model.schema), r.label.value_or(0)});
    }
    const DeadNeuronReport rep = detect_dead_relu(net, probe);
    for (const LayerDeadCount& c : rep.layers) {
      out << "dead layer " << c.layer << ": " << c.dead << "/" << c.width << "\n";
    }
    out << "dead total " << rep.total_dead << "/" << rep.total_neurons
        << " fraction=" << format_double(rep.fraction()) << "\n";
  }
  return kExitOk;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Fully connected feed-forward classifier: generate, train, evaluate, predict",
               "fcfnn"};
  app.require_subcommand(1);

  GenerateArgs g;
  auto* gen = app.add_subcommand("generate", "Write a synthetic labeled survey CSV");
  gen->add_option("--config", g.config, "Generator config JSON (flags override it)");
  gen->add_option("--seed", g.seed, "Random seed")->required();
  gen->add_option("--out", g.out, "Output CSV path")->required();
  gen->add_option("--rows", g.rows, "Row count (default 936)");
  gen->add_option("--classes", g.classes, "Class count (default 29)");
  gen->add_option("--features", g.features, "Feature count (default 35)");
  gen->add_option("--base-rows", g.base_rows, "Source rows per class (default: auto)");
  gen->add_option("--augment", g.augment, "Augmentation factor (default 2)");
  gen->add_option("--noise-sd", g.noise_sd, "Per-feature noise sd (default 0.05)");
  gen->add_option("--schema", g.schema, "Schema JSON for the emitted columns");
  gen->add_option("--schema-out", g.schema_out, "Also write the schema used");
  gen->add_flag("--indicators", g.indicators, "Emit one indicator column per class");

  TrainArgs t;
  auto* tr = app.add_subcommand("train", "Train a network and write model + history");
  tr->add_option("--data", t.data, "Labeled training CSV")->required();
  tr->add_option("--schema", t.schema, "Schema JSON (default: $FCFNN_SCHEMA or built-in)");
  tr->add_option("--vs", t.vs, "Validation fraction")->capture_default_str();
  tr->add_option("--bs", t.bs, "Batch size")->capture_default_str();
  tr->add_option("--epochs", t.epochs, "Epochs in this run")->capture_default_str();
  tr->add_option("--seed", t.seed, "Random seed")->required();
  tr->add_option("--optimizer", t.optimizer, "sgd | adam")->capture_default_str();
  tr->add_option("--lr", t.lr, "Learning rate")->capture_default_str();
  tr->add_option("--activation-preset", t.preset, "Activation preset")->capture_default_str();
  tr->add_option("--arch", t.arch, "paper-default or W[:D],W[:D],... hidden layers")
      ->capture_default_str();
  tr->add_option("--init", t.init, "he | uniform")->capture_default_str();
  tr->add_flag("--no-bias", t.no_bias, "Build layers without bias terms");
  tr->add_option("--resume", t.resume, "Continue training this model file");
  tr->add_option("--out", t.out, "Output model path")->required();
  tr->add_option("--history", t.history, "History CSV (appended on --resume)");
  tr->add_flag("--quiet", t.quiet, "No per-epoch progress lines");

  EvaluateArgs e;
  auto* ev = app.add_subcommand("evaluate", "Accuracy and loss of a model on a labeled CSV");
  ev->add_option("--model", e.model, "Model file")->required();
  ev->add_option("--data", e.data, "Labeled CSV")->required();

  PredictArgs p;
  auto* pr = app.add_subcommand("predict", "Append ranked predictions to a CSV");
  pr->add_option("--model", p.model, "Model file")->required();
  pr->add_option("--data", p.data, "Input CSV")->required();
  pr->add_option("--out", p.out, "Augmented output CSV")->required();
  pr->add_option("--top-k", p.top_k, "Ranks appended per row")->capture_default_str();
  pr->add_flag("--report", p.report, "Print a ranked profile per row");
  pr->add_option("--threshold", p.threshold,
                 "Probabilities below this print in scientific notation")
      ->capture_default_str();

  InspectArgs i;
  auto* in = app.add_subcommand("inspect", "Print architecture and dead-neuron report");
  in->add_option("--model", i.model, "Model file")->required();
  in->add_option("--probe", i.probe, "Probe CSV for the dead-ReLU report");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitOk;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitOk;
  } catch (const CLI::ParseError& ex) {
    report_error(err, "usage", ex.what());
    const CLI::App* sub = app.get_subcommands().empty() ? &app : app.get_subcommands()[0];
    err << sub->help();
    return kExitUsage;
  }

  try {
    if (*gen) return do_generate(g, out);
    if (*tr) return do_train(t, out);
    if (*ev) return do_evaluate(e, out);
    if (*pr) return do_predict(p, out);
    return do_inspect(i, out);
  } catch (const ConfigError& ex) {
    report_error(err, "config", ex.what());
    return kExitUsage;
  } catch (const DataError& ex) {
    report_error(err, "data", ex.what());
  } catch (const ModelError& ex) {
    report_error(err, "model", ex.what());
  } catch (const IoError& ex) {
    report_error(err, "io", ex.what());
  } catch (const DimensionError& ex) {
    report_error(err, "dimension", ex.what());
  } catch (const NumericError& ex) {
    report_error(err, "numeric", ex.what());
  } catch (const std::exception& ex) {
    report_error(err, "internal", ex.what());
  }
  return kExitFailure;
}

int run(int argc, char** argv) {
  std::vector<std::string> args;
  for (int k = 1; k < argc; ++k) args.emplace_back(argv[k]);
  return run(args, std::cout, std::cerr);
}

}  // namespace fcfnn::cli
