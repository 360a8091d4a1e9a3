// erd: command-line front end for the Escape Room Domain.

#include <fstream>
#include <iostream>
#include <optional>

#include <CLI11.hpp>

#include "erd/errors.hpp"
#include "erd/harness/diagnostics.hpp"
#include "erd/harness/experiment.hpp"
#include "erd/instance/generator.hpp"
#include "erd/instance/serialization.hpp"
#include "erd/meta/meta_actions.hpp"
#include "erd/service/server.hpp"

namespace {

using namespace erd;

int cmd_generate(const std::string& preset, int buttons, std::uint64_t seed, double width, double depth,
                 const std::string& out_path) {
  InstanceConfig inst;
  if (preset == "baseline") {
    inst = instance::baseline_one_button();
  } else if (preset == "ordered2") {
    inst = instance::ordered_two_button();
  } else {
    SchematicParams params;
    params.num_buttons = buttons;
    params.room_width = width;
    params.room_depth = depth;
    inst = instance::generate(params, seed);
  }
  if (out_path.empty() || out_path == "-") {
    std::cout << instance::serialize(inst);
  } else {
    instance::save_instance(inst, out_path);
    std::cerr << "wrote " << out_path << " (" << agents::instance_id(inst) << ", " << inst.num_buttons
              << " buttons)\n";
  }
  return 0;
}

int cmd_validate(const std::string& path) {
  const InstanceConfig inst = instance::load_instance(path);
  const auto problems = instance::validate(inst);
  if (problems.empty()) {
    std::cout << path << ": valid (" << inst.num_buttons << " buttons, optimal route "
              << meta::optimal_route(inst).steps << " steps)\n";
    return 0;
  }
  for (const auto& p : problems) std::cout << path << ": " << p << '\n';
  return 1;
}

int cmd_train(const std::string& config_path, const std::string& mode, const std::string& meta,
              const std::string& out_dir) {
  harness::ExperimentConfig config = harness::load_experiment_config(config_path);
  if (!mode.empty() && !harness::parse_run_mode(mode, config.mode)) throw ConfigError("bad --mode " + mode);
  if (meta == "on") config.action_mode = agents::ActionMode::WithMeta;
  if (meta == "off") config.action_mode = agents::ActionMode::Primitives;
  if (!out_dir.empty()) config.output_dir = out_dir;

  const auto result = harness::run(config, &std::cerr);
  harness::write_outputs(config, result);
  for (const auto& lr : result.learners) {
    double exits = 0, normalized = 0, n = 0;
    for (const auto& trial : lr.trials)
      for (const auto& r : agents::final_complete_episodes(trial, 100)) {
        exits += r.exited;
        normalized += r.normalized;
        ++n;
      }
    std::printf("%-12s final-100 exit rate %6.2f%%  mean normalized %6.2f%%\n",
                std::string(agents::to_string(lr.learner.algorithm)).c_str(), n ? 100 * exits / n : 0.0,
                n ? normalized / n : 0.0);
  }
  std::cout << "results in " << config.output_dir.string() << '\n';
  for (const auto& f : result.failures) std::cerr << "trial failed: " << f << '\n';
  return result.complete() ? 0 : 1;
}

int cmd_serve(const std::string& address, std::uint16_t port, const std::string& static_dir) {
  service::SessionManager sessions;
  service::ServerOptions options;
  options.address = address;
  options.port = port;
  options.static_dir = static_dir;
  service::Server server(sessions, options);
  server.start();
  std::cout << "listening on http://" << address << ':' << server.port() << " (websocket at /ws)" << std::endl;
  server.wait();
  return 0;
}

int cmd_replay(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ConfigError("cannot open log " + path);
  const auto report = harness::replay(in);
  for (const auto& m : report.mismatches) std::cout << "mismatch " << m << '\n';
  std::cout << report.episodes << " episodes, " << report.steps << " steps replayed: "
            << (report.ok() ? "identical" : "MISMATCH") << '\n';
  return report.ok() ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Escape Room Domain: instances, experiments and live sessions"};
  app.require_subcommand(1);

  auto* gen = app.add_subcommand("generate", "Write a generated or canonical instance file");
  int buttons = 1;
  std::uint64_t seed = 0;
  double width = 10.0, depth = 10.0;
  std::string preset, gen_out;
  gen->add_option("--buttons", buttons, "Number of buttons")->check(CLI::Range(1, 64));
  gen->add_option("--seed", seed, "Instance seed");
  gen->add_option("--width", width, "Room width in metres");
  gen->add_option("--depth", depth, "Room depth in metres");
  gen->add_option("--preset", preset, "Canonical instance instead of a generated one")
      ->check(CLI::IsMember({"baseline", "ordered2"}));
  gen->add_option("-o,--output", gen_out, "Output file (stdout when omitted)");

  auto* val = app.add_subcommand("validate", "Check an instance file");
  std::string val_path;
  val->add_option("file", val_path)->required();

  auto* train = app.add_subcommand("train", "Run an experiment");
  std::string config_path, mode, meta, train_out;
  train->add_option("--config", config_path, "Experiment config (JSON)")->required();
  train->add_option("--mode", mode, "release or debug")->check(CLI::IsMember({"release", "debug"}));
  train->add_option("--meta-actions", meta, "on or off")->check(CLI::IsMember({"on", "off"}));
  train->add_option("-o,--output", train_out, "Output directory");

  auto* serve = app.add_subcommand("serve", "Run the session service");
  std::string address = "127.0.0.1", static_dir;
  std::uint16_t port = 8765;
  serve->add_option("--port", port, "TCP port");
  serve->add_option("--address", address, "Listen address");
  serve->add_option("--static", static_dir, "Directory of client assets");

  auto* rep = app.add_subcommand("replay", "Re-simulate a debug-mode diagnostics log");
  std::string log_path;
  rep->add_option("--log", log_path)->required();

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) return cmd_generate(preset, buttons, seed, width, depth, gen_out);
    if (*val) return cmd_validate(val_path);
    if (*train) return cmd_train(config_path, mode, meta, train_out);
    if (*serve) return cmd_serve(address, port, static_dir);
    if (*rep) return cmd_replay(log_path);
  } catch (const std::exception& e) {
    std::cerr << "erd: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
