#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <map>
#include <memory>
#include <set>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "dmbgn/baselines.hpp"
#include "dmbgn/checkpoint.hpp"
#include "dmbgn/common.hpp"
#include "dmbgn/config.hpp"
#include "dmbgn/csv.hpp"
#include "dmbgn/data.hpp"
#include "dmbgn/embeddings.hpp"
#include "dmbgn/metrics.hpp"
#include "dmbgn/model.hpp"
#include "dmbgn/pretrain.hpp"
#include "dmbgn/syngen.hpp"
#include "dmbgn/train.hpp"

namespace fs = std::filesystem;
using dmbgn::Config;
using dmbgn::DataError;
using dmbgn::Dataset;
using dmbgn::NumericError;
using dmbgn::TensorStore;

namespace {

struct CommonOpts {
  std::string config_path;
  std::vector<std::string> sets;
};

void add_common(CLI::App* cmd, CommonOpts& opts) {
  cmd->add_option("--config", opts.config_path, "flat key=value config file");
  cmd->add_option("--set", opts.sets, "override, e.g. --set epochs=3")
      ->take_all()
      ->expected(-1);
}

Config effective_config(const CommonOpts& opts) {
  Config cfg;
  if (!opts.config_path.empty()) cfg = Config::from_file(opts.config_path);
  for (const auto& s : opts.sets) cfg.apply_override(s);
  return cfg;
}

void echo_config(const Config& cfg) {
  std::cout << "-- effective config --\n" << cfg.dump() << "-- end config --\n";
}

dmbgn::BehaviorCaps caps_from(const Config& cfg) {
  dmbgn::BehaviorCaps caps;
  caps.atc = static_cast<std::size_t>(
      cfg.get_int("cap_atc", static_cast<std::int64_t>(caps.atc)));
  caps.ord = static_cast<std::size_t>(
      cfg.get_int("cap_ord", static_cast<std::int64_t>(caps.ord)));
  return caps;
}

Dataset load_data(const std::string& dir, const Config& cfg) {
  fs::path d(dir);
  return dmbgn::ingest((d / "events.csv").string(), (d / "vouchers.csv").string(),
                       (d / "sessions.csv").string(), (d / "profiles.csv").string(),
                       caps_from(cfg));
}

dmbgn::TrainLoopConfig loop_from(const Config& cfg, std::uint64_t seed) {
  dmbgn::TrainLoopConfig l;
  l.epochs = static_cast<int>(cfg.get_int("epochs", l.epochs));
  l.batch_size = static_cast<std::size_t>(
      cfg.get_int("batch_size", static_cast<std::int64_t>(l.batch_size)));
  l.lr = cfg.get_double("lr", l.lr);
  l.l2 = cfg.get_double("l2", l.l2);
  l.alpha = cfg.get_double("alpha", l.alpha);
  l.test_frac = cfg.get_double("test_frac", l.test_frac);
  l.seed = seed;
  return l;
}

void echo_loop(Config& cfg, const dmbgn::TrainLoopConfig& l) {
  cfg.set_int("epochs", l.epochs);
  cfg.set_int("batch_size", static_cast<std::int64_t>(l.batch_size));
  cfg.set_double("lr", l.lr);
  cfg.set_double("l2", l.l2);
  cfg.set_double("alpha", l.alpha);
  cfg.set_double("test_frac", l.test_frac);
}

void echo_caps(Config& cfg, const dmbgn::BehaviorCaps& caps) {
  cfg.set_int("cap_atc", static_cast<std::int64_t>(caps.atc));
  cfg.set_int("cap_ord", static_cast<std::int64_t>(caps.ord));
}

void write_file(const fs::path& path, const std::string& content) {
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  f << content;
  if (!f) throw DataError("cannot write " + path.string());
}

const std::set<std::string> kModelNames = {"dmbgn", "dmbgn-avgpool",
                                           "dmbgn-pretrained", "lr", "dnn", "din"};

int cmd_gen(const CommonOpts& common, const std::string& out_dir) {
  Config cfg = effective_config(common);
  echo_config(cfg);
  auto summary = dmbgn::generate_dataset(dmbgn::SyntheticConfig::from_config(cfg),
                                         out_dir);
  nlohmann::ordered_json j{{"users", summary.users},
                           {"sessions", summary.sessions},
                           {"events", summary.events},
                           {"empirical_rate", summary.empirical_rate},
                           {"best_auc", summary.best_auc}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_stats(const CommonOpts& common, const std::string& data_dir,
              const std::string& out_path) {
  Config cfg = effective_config(common);
  Dataset ds = load_data(data_dir, cfg);
  const std::string json = dmbgn::stats_json(dmbgn::dataset_stats(ds.sessions));
  std::cout << json << "\n";
  if (!out_path.empty()) write_file(out_path, json + "\n");
  return 0;
}

int cmd_pretrain_items(const CommonOpts& common, const std::string& data_dir,
                       const std::string& out_path) {
  Config cfg = effective_config(common);
  echo_config(cfg);
  Dataset ds = load_data(data_dir, cfg);
  auto fspace = dmbgn::build_feature_space(ds);
  auto tables =
      dmbgn::train_item_embeddings(ds, fspace, dmbgn::SgnsConfig::from_config(cfg));
  TensorStore store;
  dmbgn::save_item_checkpoint(store, tables, fspace);
  store.save(out_path);
  std::cout << "items " << fspace.items.size() << " dim "
            << tables.item_atc->cols() << " -> " << out_path << "\n";
  return 0;
}

int cmd_pretrain_vouchers(const CommonOpts& common, const std::string& data_dir,
                          const std::string& items_path, const std::string& out_path,
                          const std::string& log_path) {
  Config cfg = effective_config(common);
  echo_config(cfg);
  Dataset ds = load_data(data_dir, cfg);
  auto fspace = dmbgn::build_feature_space(ds);
  auto mc = dmbgn::ModelConfig::from_config(cfg);
  const std::uint64_t seed = static_cast<std::uint64_t>(cfg.get_int("seed", 0));
  dmbgn::VoucherPretrainModel model(ds, fspace, mc, TensorStore::load(items_path),
                                    seed);
  auto result = dmbgn::train_model(model, loop_from(cfg, seed), log_path);
  TensorStore store;
  model.save(store);
  store.save(out_path);
  nlohmann::ordered_json j{{"auc", result.test_auc},
                           {"logloss", result.test_logloss},
                           {"split_hash", result.split_hash}};
  std::cout << j.dump(2) << "\n";
  return 0;
}

std::unique_ptr<dmbgn::TrainableModel> build_model(
    const std::string& name, const Dataset& ds, const dmbgn::FeatureSpace& fspace,
    dmbgn::ModelConfig mc, const std::string& ckpt_path, std::uint64_t seed) {
  const bool graph_model = name.rfind("dmbgn", 0) == 0;
  if (!graph_model) {
    if (!ckpt_path.empty())
      throw DataError("--ckpt applies to graph models only, not " + name);
    if (name == "lr") return std::make_unique<dmbgn::LrModel>(ds, fspace, seed);
    if (name == "dnn")
      return std::make_unique<dmbgn::DnnModel>(ds, fspace, mc, seed);
    return std::make_unique<dmbgn::DinModel>(ds, fspace, mc, seed);
  }
  if (name == "dmbgn") {
    mc.variant = ckpt_path.empty() ? dmbgn::DmbgnVariant::scratch
                                   : dmbgn::DmbgnVariant::finetune;
  } else if (name == "dmbgn-avgpool") {
    mc.variant = dmbgn::DmbgnVariant::avgpool;
  } else {
    mc.variant = dmbgn::DmbgnVariant::pretrained;
  }
  if (mc.variant != dmbgn::DmbgnVariant::scratch && ckpt_path.empty())
    throw DataError(name + " requires --ckpt with a pre-trained checkpoint");
  auto model = std::make_unique<dmbgn::DmbgnModel>(ds, fspace, mc, seed, name);
  if (!ckpt_path.empty()) model->load_pretrained(TensorStore::load(ckpt_path));
  return model;
}

int cmd_train(CommonOpts common, std::string model_name, std::string data_dir,
              std::string ckpt_path, std::int64_t seed_flag, bool seed_given,
              const std::string& out_dir, const std::string& from_run) {
  Config cfg;
  if (!from_run.empty()) {
    cfg = Config::from_file((fs::path(from_run) / "run_config.cfg").string());
  } else if (!common.config_path.empty()) {
    cfg = Config::from_file(common.config_path);
  }
  for (const auto& s : common.sets) cfg.apply_override(s);
  if (model_name.empty()) model_name = cfg.get_str("model", "");
  if (data_dir.empty()) data_dir = cfg.get_str("data", "");
  if (ckpt_path.empty()) ckpt_path = cfg.get_str("ckpt", "");
  const std::uint64_t seed = seed_given
                                 ? static_cast<std::uint64_t>(seed_flag)
                                 : static_cast<std::uint64_t>(cfg.get_int("seed", 0));
  if (!kModelNames.count(model_name))
    throw DataError("unknown model '" + model_name + "'");
  if (data_dir.empty()) throw DataError("train needs --data (or a run config)");

  auto mc = dmbgn::ModelConfig::from_config(cfg);
  auto loop = loop_from(cfg, seed);
  auto caps = caps_from(cfg);

  // Frozen effective config: every knob materialized so a rerun needs
  // nothing but this file.
  Config frozen = cfg;
  frozen.merge(dmbgn::model_config_echo(mc));
  echo_loop(frozen, loop);
  echo_caps(frozen, caps);
  frozen.set("model", model_name);
  frozen.set("data", data_dir);
  if (!ckpt_path.empty()) frozen.set("ckpt", ckpt_path);
  frozen.set_int("seed", static_cast<std::int64_t>(seed));
  echo_config(frozen);

  fs::create_directories(out_dir);
  write_file(fs::path(out_dir) / "run_config.cfg", frozen.dump());

  Dataset ds = load_data(data_dir, cfg);
  auto fspace = dmbgn::build_feature_space(ds);
  auto model = build_model(model_name, ds, fspace, mc, ckpt_path, seed);

  auto result = dmbgn::train_model(
      *model, loop, (fs::path(out_dir) / "train_log.jsonl").string());

  nlohmann::ordered_json j{{"model", model_name},
                           {"seed", seed},
                           {"auc", result.test_auc},
                           {"logloss", result.test_logloss},
                           {"split_hash", result.split_hash},
                           {"train_count", result.train_count},
                           {"test_count", result.test_count},
                           {"epochs", result.epochs.size()}};
  write_file(fs::path(out_dir) / "metrics.json", j.dump(2) + "\n");

  TensorStore store;
  if (auto* g = dynamic_cast<dmbgn::DmbgnModel*>(model.get())) {
    g->save(store, "dmbgn/");
  } else {
    auto* b = dynamic_cast<dmbgn::BaselineModel*>(model.get());
    b->save(store, model_name + "/");
  }
  store.save((fs::path(out_dir) / "model.ckpt").string());

  std::cout << j.dump(2) << "\n";
  return 0;
}

int cmd_eval(const std::string& runs_arg, const std::string& bases_arg,
             const std::string& out_path) {
  std::vector<std::string> run_dirs, bases;
  for (auto& list : {std::pair{&run_dirs, runs_arg}, std::pair{&bases, bases_arg}}) {
    std::string cur;
    for (char ch : list.second + ",") {
      if (ch == ',') {
        if (!cur.empty()) list.first->push_back(cur);
        cur.clear();
      } else {
        cur += ch;
      }
    }
  }
  if (run_dirs.empty()) throw DataError("eval needs at least one run directory");

  std::vector<dmbgn::metrics::ModelResult> results;
  std::map<std::string, std::size_t> by_model;
  for (const auto& dir : run_dirs) {
    const fs::path p = fs::path(dir) / "metrics.json";
    std::ifstream f(p);
    if (!f) throw DataError("cannot read " + p.string());
    nlohmann::json j = nlohmann::json::parse(f, nullptr, true);
    const std::string model = j.at("model");
    auto [it, fresh] = by_model.try_emplace(model, results.size());
    if (fresh) results.push_back({model, {}, {}, j.at("split_hash")});
    auto& r = results[it->second];
    r.aucs.push_back(j.at("auc"));
    r.loglosses.push_back(j.at("logloss"));
    if (r.split_hash != j.at("split_hash"))
      throw DataError("run " + dir + " was scored on a different split than other " +
                      model + " runs");
  }
  auto report = dmbgn::metrics::report(results, bases);
  const std::string text = report.to_text();
  write_file(out_path, report.to_json() + "\n");
  fs::path txt(out_path);
  txt.replace_extension(".txt");
  write_file(txt, text);
  std::cout << text;
  return 0;
}

int cmd_predict(const CommonOpts& common, const std::string& ckpt_path,
                const std::string& data_dir, const std::string& out_path) {
  Config cfg = effective_config(common);
  TensorStore store = TensorStore::load(ckpt_path);
  const std::string kind = store.has_text("kind") ? store.get_text("kind") : "";
  Dataset ds = load_data(data_dir, cfg);

  std::unique_ptr<dmbgn::TrainableModel> model;
  if (kind == "dmbgn") {
    auto fspace = dmbgn::feature_space_from_ckpt(store, "dmbgn/");
    auto mc = dmbgn::ModelConfig::from_config(
        Config::from_string(store.get_text("dmbgn/config")));
    auto m = std::make_unique<dmbgn::DmbgnModel>(ds, fspace, mc, 0);
    dmbgn::load_params(store, m->params(), "dmbgn/");
    model = std::move(m);
  } else if (kind == "lr" || kind == "dnn" || kind == "din") {
    auto fspace = dmbgn::feature_space_from_ckpt(store, kind + "/");
    dmbgn::ModelConfig mc;
    if (store.has_text(kind + "/config"))
      mc = dmbgn::ModelConfig::from_config(
          Config::from_string(store.get_text(kind + "/config")));
    if (kind == "lr") {
      model = std::make_unique<dmbgn::LrModel>(ds, fspace, 0);
    } else if (kind == "dnn") {
      model = std::make_unique<dmbgn::DnnModel>(ds, fspace, mc, 0);
    } else {
      model = std::make_unique<dmbgn::DinModel>(ds, fspace, mc, 0);
    }
    dmbgn::load_params(store, model->params(), kind + "/");
  } else if (kind == "voucher-pretrain") {
    auto fspace = dmbgn::feature_space_from_ckpt(store, "");
    auto mc =
        dmbgn::ModelConfig::from_config(Config::from_string(store.get_text("config")));
    auto m = std::make_unique<dmbgn::VoucherPretrainModel>(ds, fspace, mc, store, 0);
    dmbgn::load_params(store, m->params(), "");
    model = std::move(m);
  } else {
    throw DataError("checkpoint kind '" + kind + "' cannot score sessions");
  }

  std::vector<std::vector<std::string>> rows;
  rows.reserve(model->sample_count());
  for (std::size_t i = 0; i < model->sample_count(); ++i) {
    char buf[40];
    std::snprintf(buf, sizeof(buf), "%.17g", model->predict(i));
    rows.push_back({model->sample_key(i), buf, std::to_string(model->label(i))});
  }
  dmbgn::write_csv(out_path, {"session_key", "score", "label"}, rows);
  std::cout << "scored " << rows.size() << " sessions -> " << out_path << "\n";
  return 0;
}

int cmd_export_emb(const CommonOpts& common, const std::string& ckpt_path,
                   const std::string& table, const std::string& out_path,
                   const std::string& data_dir) {
  Config cfg = effective_config(common);
  TensorStore store = TensorStore::load(ckpt_path);
  auto section_for = [&](const std::string& tensor) -> std::string {
    if (store.has(tensor)) return "";
    if (store.has("dmbgn/" + tensor)) return "dmbgn/";
    throw DataError("checkpoint has no tensor '" + tensor + "'");
  };
  std::ofstream out(out_path, std::ios::binary | std::ios::trunc);
  if (!out) throw DataError("cannot write " + out_path);
  auto emit_row = [&](const std::string& tag, const dmbgn::TensorPtr& t,
                      std::size_t row) {
    out << tag;
    for (std::size_t k = 0; k < t->cols(); ++k) {
      char buf[40];
      std::snprintf(buf, sizeof(buf), "%.17g", t->at(row, k));
      out << "\t" << buf;
    }
    out << "\n";
  };

  std::size_t rows = 0;
  if (table == "item") {
    const std::string sec = section_for("item_emb/atc");
    auto fspace = dmbgn::feature_space_from_ckpt(store, sec);
    for (const char* action : {"atc", "ord"}) {
      auto t = store.get(sec + "item_emb/" + action);
      for (std::size_t r = 0; r < t->rows(); ++r, ++rows)
        emit_row(std::string(action) + ":" + fspace.items.id_at(r), t, r);
    }
  } else if (table == "voucher") {
    const std::string sec = section_for("voucher_emb");
    auto fspace = dmbgn::feature_space_from_ckpt(store, sec);
    auto t = store.get(sec + "voucher_emb");
    for (std::size_t r = 0; r < t->rows(); ++r, ++rows)
      emit_row(fspace.vouchers.id_at(r), t, r);
  } else if (table == "uvg_b") {
    if (store.get_text("kind") != "voucher-pretrain")
      throw DataError("uvg_b export needs a voucher pre-training checkpoint");
    if (data_dir.empty()) throw DataError("uvg_b export needs --data");
    auto fspace = dmbgn::feature_space_from_ckpt(store, "");
    auto mc =
        dmbgn::ModelConfig::from_config(Config::from_string(store.get_text("config")));
    Dataset ds = load_data(data_dir, cfg);
    dmbgn::VoucherPretrainModel model(ds, fspace, mc, store, 0);
    dmbgn::load_params(store, model.params(), "");
    for (std::size_t i = 0; i < model.sample_count(); ++i, ++rows) {
      auto e = model.behavior_embedding(i);
      out << model.sample_key(i);
      for (double v : e) {
        char buf[40];
        std::snprintf(buf, sizeof(buf), "%.17g", v);
        out << "\t" << buf;
      }
      out << "\t" << model.label(i) << "\n";
    }
  } else {
    throw DataError("table must be item, voucher, or uvg_b, got '" + table + "'");
  }
  if (!out) throw DataError("failed writing " + out_path);
  out.close();
  std::cout << "exported " << rows << " rows -> " << out_path << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"voucher redemption-rate pipeline"};
  app.require_subcommand(1);

  CommonOpts gen_c, stats_c, pi_c, pv_c, train_c, predict_c, export_c;
  std::string gen_out, stats_data, stats_out;
  std::string pi_data, pi_out, pv_data, pv_items, pv_out, pv_log;
  std::string tr_model, tr_data, tr_ckpt, tr_out, tr_from;
  std::int64_t tr_seed = 0;
  std::string ev_runs, ev_bases = "dnn,din", ev_out = "report.json";
  std::string pr_ckpt, pr_data, pr_out;
  std::string ex_ckpt, ex_table, ex_out, ex_data;

  auto* gen = app.add_subcommand("gen", "generate a synthetic dataset");
  add_common(gen, gen_c);
  gen->add_option("--out", gen_out, "output directory")->required();

  auto* stats = app.add_subcommand("stats", "dataset behavior statistics");
  add_common(stats, stats_c);
  stats->add_option("--data", stats_data, "dataset directory")->required();
  stats->add_option("--out", stats_out, "also write the JSON here");

  auto* pi = app.add_subcommand("pretrain-items", "item-sequence embedding training");
  add_common(pi, pi_c);
  pi->add_option("--data", pi_data, "dataset directory")->required();
  pi->add_option("--out", pi_out, "checkpoint path")->required();

  auto* pv = app.add_subcommand("pretrain-vouchers", "graph-stack pre-training");
  add_common(pv, pv_c);
  pv->add_option("--data", pv_data, "dataset directory")->required();
  pv->add_option("--items", pv_items, "item embedding checkpoint")->required();
  pv->add_option("--out", pv_out, "checkpoint path")->required();
  pv->add_option("--log", pv_log, "epoch log path (JSON lines)");

  auto* train = app.add_subcommand("train", "fit a model and write a run directory");
  add_common(train, train_c);
  train->add_option("--model", tr_model,
                    "dmbgn | dmbgn-avgpool | dmbgn-pretrained | lr | dnn | din");
  train->add_option("--data", tr_data, "dataset directory");
  train->add_option("--ckpt", tr_ckpt, "pre-trained checkpoint (graph models)");
  auto* seed_opt = train->add_option("--seed", tr_seed, "training seed");
  train->add_option("--out", tr_out, "run directory")->required();
  train->add_option("--from-run", tr_from, "rerun from a frozen run directory");

  auto* eval = app.add_subcommand("eval", "aggregate runs into a comparison report");
  eval->add_option("--runs", ev_runs, "comma-separated run directories")->required();
  eval->add_option("--base", ev_bases, "comma-separated base model names");
  eval->add_option("--out", ev_out, "report JSON path (text goes next to it)");

  auto* predict = app.add_subcommand("predict", "score sessions with a checkpoint");
  add_common(predict, predict_c);
  predict->add_option("--model", pr_ckpt, "model checkpoint")->required();
  predict->add_option("--data", pr_data, "dataset directory")->required();
  predict->add_option("--out", pr_out, "scores CSV path")->required();

  auto* exp = app.add_subcommand("export-emb", "dump embedding tables as TSV");
  add_common(exp, export_c);
  exp->add_option("--ckpt", ex_ckpt, "checkpoint path")->required();
  exp->add_option("--table", ex_table, "item | voucher | uvg_b")->required();
  exp->add_option("--out", ex_out, "TSV path")->required();
  exp->add_option("--data", ex_data, "dataset directory (uvg_b only)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (gen->parsed()) return cmd_gen(gen_c, gen_out);
    if (stats->parsed()) return cmd_stats(stats_c, stats_data, stats_out);
    if (pi->parsed()) return cmd_pretrain_items(pi_c, pi_data, pi_out);
    if (pv->parsed())
      return cmd_pretrain_vouchers(pv_c, pv_data, pv_items, pv_out, pv_log);
    if (train->parsed())
      return cmd_train(train_c, tr_model, tr_data, tr_ckpt, tr_seed,
                       seed_opt->count() > 0, tr_out, tr_from);
    if (eval->parsed()) return cmd_eval(ev_runs, ev_bases, ev_out);
    if (predict->parsed()) return cmd_predict(predict_c, pr_ckpt, pr_data, pr_out);
    if (exp->parsed())
      return cmd_export_emb(export_c, ex_ckpt, ex_table, ex_out, ex_data);
  } catch (const NumericError& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  } catch (const DataError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 1;
}
