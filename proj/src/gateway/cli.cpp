#include "frm/gateway/cli.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cstdio>
#include <iostream>

#include "frm/common/error.hpp"
#include "frm/gateway/engine.hpp"
#include "frm/gateway/http.hpp"
#include "frm/register/codec.hpp"

namespace frm::gateway {
namespace {

struct Globals {
  std::string store = "frm-store";
  std::string format = "text";
  std::string now;
  std::string actor = "cli";
  std::string config_file;
};

Clock clock_for(const Globals& g) {
  if (g.now.empty()) return system_now;
  const Timestamp fixed = parse_timestamp(g.now);
  return [fixed] { return fixed; };
}

std::string number(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

std::string text_of(const Json& v) {
  if (v.is_null()) return "-";
  if (v.is_string()) return v.get<std::string>();
  if (v.is_number()) return number(v.get<double>());
  return canonical_dump(v);
}

void print_statuses(std::ostream& out, const Json& statuses) {
  for (const auto& st : statuses) {
    out << st.at("rule_id").get<std::string>() << "  " << st.at("state").get<std::string>()
        << "  kri=" << text_of(st.value("kri_value", Json())) << "  kci="
        << text_of(st.value("kci_observed", Json()));
    if (st.contains("required_action") && !st.at("required_action").get<std::string>().empty()) {
      out << "  action: " << st.at("required_action").get<std::string>();
    }
    out << '\n';
  }
}

// Turns a response into output and an exit code.
class Printer {
 public:
  Printer(const Globals& g, std::ostream& out, std::ostream& err) : g_(g), out_(out), err_(err) {}

  template <class Text>
  int emit(const Response& res, Text&& text) {
    if (!res.ok()) {
      if (g_.format == "canonical") {
        out_ << res.text() << '\n';
      }
      err_ << "error: " << res.body.value("error", std::string("Error")) << ": "
           << res.body.value("detail", std::string()) << '\n';
      return 1;
    }
    if (g_.format == "canonical") {
      out_ << res.text() << '\n';
    } else {
      text(res.body);
    }
    return 0;
  }

  int emit(const Response& res) {
    return emit(res, [&](const Json& body) {
      if (body.contains("audit_seq")) {
        out_ << "ok (audit seq " << body.at("audit_seq").get<std::uint64_t>() << ")\n";
      } else {
        out_ << body.dump(2) << '\n';
      }
    });
  }

  std::ostream& out() { return out_; }

 private:
  const Globals& g_;
  std::ostream& out_;
  std::ostream& err_;
};

Request post(std::string path, std::string body, std::map<std::string, std::string> query = {}) {
  return Request{"POST", std::move(path), std::move(query), std::move(body)};
}

Request get(std::string path, std::map<std::string, std::string> query = {}) {
  return Request{"GET", std::move(path), std::move(query), ""};
}

Json with_actor(Json body, const Globals& g) {
  if (!body.contains("actor")) body["actor"] = g.actor;
  return body;
}

std::vector<Json> approvals_json(const std::vector<std::string>& roles) {
  std::vector<Json> out;
  for (const auto& r : roles) out.push_back(Json{{"role_id", r}, {"approve", true}});
  return out;
}

}  // namespace

int run_cli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Frontier risk management engine", "frmctl"};
  app.require_subcommand(1);
  Globals g;
  app.add_option("--store", g.store, "Store directory")->capture_default_str();
  app.add_option("--format", g.format, "Output format")
      ->check(CLI::IsMember({"text", "canonical"}))
      ->capture_default_str();
  app.add_option("--now", g.now, "Fixed evaluation time (YYYY-MM-DDTHH:MM:SSZ)");
  app.add_option("--actor", g.actor, "Actor recorded in the audit log")->capture_default_str();

  auto* init = app.add_subcommand("init", "Create a store");
  init->add_option("--config", g.config_file, "Config file")->check(CLI::ExistingFile);

  std::string import_file, measurements_file, findings_file, budget_file, entry_file;
  auto* import = app.add_subcommand("import", "Import taxonomy, models, indicators and rules");
  import->add_option("file", import_file, "Import document")->check(CLI::ExistingFile);
  import->add_option("--measurements", measurements_file, "Line-delimited measurements")
      ->check(CLI::ExistingFile);
  import->add_option("--findings", findings_file, "Line-delimited findings")->check(CLI::ExistingFile);
  import->add_option("--budget", budget_file, "Risk budget document")->check(CLI::ExistingFile);
  import->add_option("--entry", entry_file, "Register entry document")->check(CLI::ExistingFile);
  std::vector<std::string> import_approvals;
  import->add_option("--approve", import_approvals, "Approving role id");

  std::string indicator, level, timestamp, notes;
  std::optional<double> value, compute;
  int effort_tier = 1;
  bool enhanced = false;
  auto* measure = app.add_subcommand("measure", "Record a measurement");
  measure->add_option("--indicator", indicator, "KRI or KCI id")->required();
  auto* value_opt = measure->add_option("--value", value, "Measured value");
  measure->add_option("--level", level, "Measured KCI level")->excludes(value_opt);
  measure->add_option("--timestamp", timestamp, "Measurement time");
  measure->add_option("--effort-tier", effort_tier, "Elicitation effort tier")->check(CLI::Range(1, 3));
  measure->add_flag("--enhanced", enhanced, "Includes post-training enhancements");
  measure->add_option("--notes", notes, "Elicitation notes");
  measure->add_option("--compute", compute, "Effective compute of the evaluated model");

  app.add_subcommand("evaluate", "Re-evaluate every rule");

  std::string model, solve_level, document;
  double tolerance_rate = 0.0;
  std::optional<double> solve_kri;
  auto* solve = app.add_subcommand("solve", "Solve the three-way relationship");
  solve->add_option("--model", model, "Scenario chain id")->required();
  solve->add_option("--tolerance", tolerance_rate, "Tolerated rate per year")->required();
  auto* kri_opt = solve->add_option("--kri", solve_kri, "KRI value: solve for the minimal KCI level");
  auto* level_opt = solve->add_option("--level", solve_level, "KCI level: solve for the maximal KRI threshold");
  kri_opt->excludes(level_opt);
  solve->add_option("--document", document, "Use an import document instead of the store")
      ->check(CLI::ExistingFile);

  std::string forecast_kri;
  double forecast_threshold = 0.0;
  auto* forecast = app.add_subcommand("forecast", "Forecast the compute at which a KRI crosses a threshold");
  forecast->add_option("--kri", forecast_kri, "KRI id")->required();
  forecast->add_option("--threshold", forecast_threshold, "KRI threshold")->required();

  std::string gate_action, gate_target;
  std::vector<std::string> gate_approvals;
  auto* gate = app.add_subcommand("gate", "Evaluate or pass a lifecycle gate");
  gate->add_option("action", gate_action, "evaluate or transition")
      ->required()
      ->check(CLI::IsMember({"evaluate", "transition"}));
  gate->add_option("target", gate_target, "Target phase")->required();
  gate->add_option("--approve", gate_approvals, "Approving role id");

  std::string resolve_id, resolve_decision;
  std::vector<std::string> resolve_approvals;
  auto* resolve = app.add_subcommand("resolve", "Resolve an escalation");
  resolve->add_option("id", resolve_id, "Escalation id")->required();
  resolve->add_option("--decision", resolve_decision, "Decision text")->required();
  resolve->add_option("--approve", resolve_approvals, "Approving role id");

  std::string report_kind, report_from, report_to;
  auto* report = app.add_subcommand("report", "Generate a disclosure");
  report->add_option("kind", report_kind, "risk_disclosure, governance_disclosure or incident_report")
      ->required();
  report->add_option("--from", report_from, "Period start");
  report->add_option("--to", report_to, "Period end (exclusive)");

  app.add_subcommand("verify", "Verify the audit chain");

  std::string host = "127.0.0.1";
  int port = 8080;
  auto* serve_cmd = app.add_subcommand("serve", "Serve the HTTP API");
  serve_cmd->add_option("--host", host)->capture_default_str();
  serve_cmd->add_option("--port", port)->check(CLI::Range(1, 65535))->capture_default_str();

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(reversed);
  } catch (const CLI::Success&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "usage error: " << e.what() << '\n' << "run with --help for usage\n";
    return 2;
  }

  Printer printer(g, out, err);
  try {
    const Clock clock = clock_for(g);

    if (*init) {
      Config config = g.config_file.empty() ? Config{} : load_config(g.config_file);
      config.store_path = g.store;
      Store::create(g.store, config);
      if (g.format == "canonical") {
        out << canonical_dump(Json{{"store", g.store}}) << '\n';
      } else {
        out << "initialized store at " << g.store << '\n';
      }
      return 0;
    }

    if (app.got_subcommand("verify")) {
      const Store store(g.store);
      std::optional<std::uint64_t> committed;
      try {
        committed = registry::import_register(read_file(store.register_path())).audit_count;
      } catch (const Error&) {
        // A register that does not load still lets the log be checked.
      }
      const Json report_json = verify_report(read_file(store.log_path()), committed);
      const bool ok = report_json.at("ok").get<bool>();
      if (g.format == "canonical") {
        out << canonical_dump(report_json) << '\n';
      } else if (ok) {
        out << "ok: " << report_json.at("events").get<std::uint64_t>() << " events verified\n";
      } else {
        out << "audit log tampered: first bad seq " << report_json.at("first_bad_seq").get<std::uint64_t>()
            << " (" << report_json.at("reason").get<std::string>() << ")\n";
      }
      return ok ? 0 : 1;
    }

    std::optional<Engine> engine;
    if (*solve && !document.empty()) {
      Config config;
      engine.emplace(empty_snapshot(config), config, clock);
      const Response imported = engine->handle(post("/v1/import", read_file(document)));
      if (!imported.ok()) return printer.emit(imported);
    } else {
      engine.emplace(Store(g.store), clock);
    }

    if (*import) {
      if (import_file.empty() && measurements_file.empty() && findings_file.empty() &&
          budget_file.empty() && entry_file.empty()) {
        err << "usage error: import needs a file or one of --measurements, --findings, --budget, --entry\n";
        return 2;
      }
      const std::map<std::string, std::string> actor_query{{"actor", g.actor}};
      const auto document_body = [&](const std::string& file) {
        Json body = with_actor(canonical_parse(read_file(file)), g);
        if (!import_approvals.empty()) body["approvals"] = approvals_json(import_approvals);
        return canonical_dump(body);
      };
      int code = 0;
      const auto step = [&](const Request& req) {
        if (code == 0) code = printer.emit(engine->handle(req), [&](const Json& body) {
          if (body.contains("statuses")) print_statuses(out, body.at("statuses"));
          if (body.contains("escalations") && !body.at("escalations").empty()) {
            out << "escalations: " << canonical_dump(body.at("escalations")) << '\n';
          }
          out << "ok (audit seq " << body.at("audit_seq").get<std::uint64_t>() << ")\n";
        });
      };
      if (!import_file.empty()) step(post("/v1/import", document_body(import_file)));
      if (!budget_file.empty()) step(post("/v1/budget", document_body(budget_file)));
      if (!entry_file.empty()) step(post("/v1/risks", document_body(entry_file)));
      if (!measurements_file.empty()) {
        step(post("/v1/measurements/intake", read_file(measurements_file), actor_query));
      }
      if (!findings_file.empty()) step(post("/v1/findings/intake", read_file(findings_file), actor_query));
      return code;
    }

    if (*measure) {
      if (!value && level.empty()) {
        err << "usage error: measure needs --value or --level\n";
        return 2;
      }
      Json m{{"indicator_id", indicator},
             {"elicitation", Json{{"method_notes", notes},
                                  {"effort_tier", effort_tier},
                                  {"includes_posttraining_enhancements", enhanced}}}};
      if (value) m["value"] = *value;
      if (!level.empty()) m["level"] = level;
      if (!timestamp.empty()) m["timestamp"] = timestamp;
      if (compute) m["effective_compute"] = *compute;
      return printer.emit(engine->handle(post("/v1/measurements", canonical_dump(with_actor(m, g)))),
                          [&](const Json& body) {
                            print_statuses(out, body.at("statuses"));
                            for (const auto& id : body.at("escalations")) {
                              out << "escalation raised: " << id.get<std::string>() << '\n';
                            }
                            if (body.at("hold").get<bool>()) out << "development is on hold\n";
                          });
    }

    if (app.got_subcommand("evaluate")) {
      return printer.emit(engine->handle(post("/v1/rules/evaluate", canonical_dump(with_actor(Json::object(), g)))),
                          [&](const Json& body) { print_statuses(out, body.at("statuses")); });
    }

    if (*solve) {
      std::map<std::string, std::string> q{{"model", model}, {"tolerance", number(tolerance_rate)}};
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", tolerance_rate);
      q["tolerance"] = buf;
      if (solve_kri) {
        std::snprintf(buf, sizeof buf, "%.17g", *solve_kri);
        q["kri"] = buf;
        return printer.emit(engine->handle(get("/v1/solve/min-kci", q)), [&](const Json& body) {
          out << (body.at("level").is_null() ? std::string("infeasible") : body.at("level").get<std::string>())
              << '\n';
        });
      }
      if (solve_level.empty()) {
        return printer.emit(engine->handle(get("/v1/solve/min-kci", q)), [&](const Json& body) {
          out << (body.at("level").is_null() ? std::string("infeasible") : body.at("level").get<std::string>())
              << '\n';
        });
      }
      q["level"] = solve_level;
      return printer.emit(engine->handle(get("/v1/solve/max-kri", q)), [&](const Json& body) {
        out << (body.at("threshold").is_null() ? std::string("none") : number(body.at("threshold").get<double>()))
            << '\n';
      });
    }

    if (*forecast) {
      char buf[64];
      std::snprintf(buf, sizeof buf, "%.17g", forecast_threshold);
      return printer.emit(engine->handle(get("/v1/forecast", {{"kri", forecast_kri}, {"threshold", buf}})),
                          [&](const Json& body) {
                            if (body.at("already_reached").get<bool>()) {
                              out << "threshold already reached\n";
                            } else if (body.at("crossing_compute").is_null()) {
                              out << "no crossing forecast\n";
                            } else {
                              out << "crossing compute " << number(body.at("crossing_compute").get<double>())
                                  << '\n';
                            }
                          });
    }

    if (*gate) {
      Json body = with_actor(Json::object(), g);
      body["approvals"] = approvals_json(gate_approvals);
      const Response res = engine->handle(post("/v1/gates/" + gate_target + "/" + gate_action, canonical_dump(body)));
      return printer.emit(res, [&](const Json& decision) {
        for (const auto& c : decision.at("checks")) {
          out << c.at("name").get<std::string>() << "  " << (c.at("pass").get<bool>() ? "pass" : "FAIL") << "  "
              << c.at("evidence").get<std::string>() << '\n';
        }
        out << "result: " << decision.at("result").get<std::string>() << '\n';
        if (decision.contains("phase")) out << "phase: " << decision.at("phase").get<std::string>() << '\n';
      });
    }

    if (*resolve) {
      Json body = with_actor(Json{{"decision", resolve_decision}}, g);
      body["approvals"] = approvals_json(resolve_approvals);
      return printer.emit(engine->handle(post("/v1/escalations/" + resolve_id + "/resolve", canonical_dump(body))),
                          [&](const Json& e) {
                            out << e.at("id").get<std::string>() << " " << e.at("state").get<std::string>() << '\n';
                            out << "hold: " << (e.at("hold").get<bool>() ? "active" : "released") << '\n';
                          });
    }

    if (*report) {
      std::map<std::string, std::string> q;
      if (!report_from.empty()) q["from"] = report_from;
      if (!report_to.empty()) q["to"] = report_to;
      return printer.emit(engine->handle(get("/v1/disclosures/" + report_kind, q)),
                          [&](const Json& body) { out << body.dump(2) << '\n'; });
    }

    if (*serve_cmd) {
      out << "serving on http://" << host << ":" << port << "/v1\n" << std::flush;
      if (!serve(*engine, host, port)) {
        err << "error: cannot listen on " << host << ":" << port << '\n';
        return 1;
      }
      return 0;
    }
  } catch (const Error& e) {
    err << "error: " << to_string(e.code()) << ": " << e.detail() << '\n';
    return 1;
  } catch (const Json::exception& e) {
    err << "error: SchemaViolation: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace frm::gateway
