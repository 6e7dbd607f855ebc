#include <CLI11.hpp>
#include <cmath>
#include <fstream>
#include <iomanip>
#include <map>
#include <sstream>

#include <json.hpp>

#include "tiltmap/cli.hpp"
#include "tiltmap/geodata.hpp"
#include "tiltmap/morph.hpp"
#include "tiltmap/session.hpp"
#include "tiltmap/synthdata.hpp"
#include "tiltmap/taskgen.hpp"
#include "tiltmap/thematic.hpp"

namespace tiltmap {
namespace fs = std::filesystem;

namespace {

constexpr std::uint64_t kSynthSeedStream = 0;

std::map<std::string, double> read_raw_values(const fs::path& path) {
  try {
    const auto doc = nlohmann::json::parse(read_text_file(path));
    if (!doc.is_object()) throw Error(Errc::MalformedDocument, path.string() + ": expected {areaId: value}");
    std::map<std::string, double> out;
    for (const auto& [k, v] : doc.items()) {
      if (!v.is_number()) throw Error(Errc::MalformedDocument, path.string() + ": value for '" + k + "' is not a number");
      out[k] = v.get<double>();
    }
    return out;
  } catch (const nlohmann::json::exception& e) {
    throw Error(Errc::MalformedDocument, path.string() + ": " + e.what());
  }
}

GeoMap load_map(const fs::path& p) { return read_mapfile(read_text_file(p)); }
ThematicLayer load_layer(const fs::path& p) { return read_layerfile(read_text_file(p)); }

fs::path sidecar_path(const fs::path& out) {
  fs::path p = out;
  p.replace_extension();
  return p.string() + ".synth.json";
}

std::vector<AnswerRange> parse_ranges(const std::string& csv) {
  std::vector<AnswerRange> out;
  std::stringstream ss(csv);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    const auto dash = tok.find('-', 1);
    try {
      if (dash == std::string::npos) throw std::invalid_argument("no dash");
      std::size_t used = 0;
      const double lo = std::stod(tok.substr(0, dash), &used);
      const double hi = std::stod(tok.substr(dash + 1));
      if (!(lo <= hi)) throw std::invalid_argument("empty");
      out.push_back({lo, hi});
    } catch (const std::exception&) {
      throw Error(Errc::InvalidArgument, "bad answer range '" + tok + "', expected lo-hi");
    }
  }
  if (out.empty()) throw Error(Errc::InvalidArgument, "no answer ranges given");
  return out;
}

std::string frame_name(std::size_t i, std::size_t total) {
  std::ostringstream os;
  os << "scene_" << std::setw(static_cast<int>(std::to_string(total).size())) << std::setfill('0') << i << ".json";
  return os.str();
}

struct Options {
  std::string geojson, id_property = "id", name_property = "name", contiguity = "rook";
  std::string map, layer, raw, tasks, trace, answers, out, style = "tiltMap", schedule, profile, ranges, config;
  std::string transform = "squareRoot", host = "127.0.0.1";
  double tilt = 0.0, azimuth = 0.0, tolerance = 0.01, sweep = 0.0;
  std::uint64_t seed = 0;
  std::size_t max_swaps = 200000, regions = 0, comparisons = 0, attempts = 10000;
  int port = 8080;
};

PhaseSchedule schedule_from(const Options& o) {
  return o.schedule.empty() ? PhaseSchedule{} : PhaseSchedule::parse(o.schedule);
}

int cmd_ingest(const Options& o, std::ostream& out) {
  const Contiguity mode = o.contiguity == "queen" ? Contiguity::Queen : Contiguity::Rook;
  if (o.contiguity != "rook" && o.contiguity != "queen") {
    throw Error(Errc::InvalidArgument, "contiguity must be rook or queen");
  }
  const GeoMap map = project(build_adjacency(parse_boundaries(read_text_file(o.geojson), o.id_property,
                                                              o.name_property), mode));
  write_text_file(o.out, write_mapfile(map));
  out << "areas " << map.size() << ", adjacent pairs " << map.adjacency().pairs().size() << "\n";
  return 0;
}

int cmd_layer(const Options& o, std::ostream& out) {
  const GeoMap map = load_map(o.map);
  const auto raw = read_raw_values(o.raw);
  std::map<std::string, double> used;
  for (const Area& a : map.areas()) {
    const auto it = raw.find(a.id);
    if (it == raw.end()) throw Error(Errc::UnknownArea, "no value for area '" + a.id + "'");
    used.emplace(a.id, it->second);
  }
  const ThematicLayer layer = transform_and_normalize(used, parse_transform(o.transform));
  write_text_file(o.out, write_layerfile(layer));
  out << "values " << layer.values.size() << "\n";
  return 0;
}

int cmd_synth(const Options& o, std::ostream& out) {
  const GeoMap map = load_map(o.map);
  const ThematicLayer reference = load_layer(o.layer);
  SynthConfig cfg;
  cfg.target_tolerance = o.tolerance;
  cfg.max_swaps = o.max_swaps;
  cfg.rng_seed = derive_seed(o.seed, kSynthSeedStream, 0);
  const SynthResult r = synthesize(map, reference, ContiguityWeights::from_map(map), cfg);
  write_text_file(o.out, write_layerfile(r.layer));
  write_text_file(sidecar_path(o.out), write_synth_sidecar(r));
  out << "reference I " << r.reference_i << ", achieved I " << r.achieved_i << ", swaps " << r.swaps << "\n";
  return 0;
}

int cmd_tasks(const Options& o, std::ostream& out) {
  const GeoMap map = load_map(o.map);
  const ThematicLayer reference = load_layer(o.layer);
  const DatasetProfile profile = DatasetProfile::named(o.profile);
  if (o.comparisons > 0 && !profile.has_comparisons()) {
    throw Error(Errc::InvalidArgument, "profile " + profile.name + " has no comparison distance bands");
  }
  const std::vector<AnswerRange> ranges =
      o.ranges.empty() ? std::vector<AnswerRange>(std::begin(kAnswerRanges), std::end(kAnswerRanges))
                       : parse_ranges(o.ranges);
  std::vector<TaskRequest> requests;
  const std::size_t rounds = std::max(o.regions, o.comparisons);
  for (std::size_t r = 0; r < rounds; ++r) {
    for (const AnswerRange& range : ranges) {
      if (r < o.comparisons) {
        requests.push_back({TaskKind::AreaComparison, range, DistanceClass::Close});
        requests.push_back({TaskKind::AreaComparison, range, DistanceClass::Far});
      }
      if (r < o.regions) requests.push_back({TaskKind::Region, range, DistanceClass::Neither});
    }
  }
  if (requests.empty()) throw Error(Errc::InvalidArgument, "request at least one task with --regions or --comparisons");

  GenConfig cfg;
  cfg.synth.target_tolerance = o.tolerance;
  cfg.synth.max_swaps = o.max_swaps;
  cfg.attempt_budget = o.attempts;
  auto generated = generate_tasks(map, reference, profile, requests, ContiguityWeights::from_map(map), cfg, o.seed);

  const fs::path taskfile = o.out;
  const fs::path layer_dir_name = taskfile.stem().string() + "_layers";
  std::vector<TaskSpec> specs;
  for (std::size_t i = 0; i < generated.size(); ++i) {
    std::ostringstream name;
    name << "task_" << std::setw(3) << std::setfill('0') << i << ".json";
    const fs::path rel = layer_dir_name / name.str();
    write_text_file(taskfile.parent_path() / rel, write_layerfile(generated[i].layer));
    generated[i].task.layer_ref = rel.generic_string();
    specs.push_back(generated[i].task);
  }
  write_text_file(taskfile, write_taskfile(specs));
  out << "tasks " << specs.size() << "\n";
  return 0;
}

int cmd_scene(const Options& o, std::ostream& out) {
  const GeoMap map = load_map(o.map);
  const ThematicLayer layer = load_layer(o.layer);
  const Style style = parse_style(o.style);
  const PhaseSchedule schedule = schedule_from(o);
  schedule.validate();
  const MapGeometry geometry = prepare_geometry(map);

  if (o.sweep <= 0.0) {
    const TiltState state = tilt_state_at(map, o.tilt, o.azimuth, schedule);
    write_text_file(o.out, write_scenefile(scene(geometry, map, layer, style, state, schedule)));
    out << "phase " << phase_letter(phase_of(o.tilt, schedule).phase) << "\n";
    return 0;
  }

  const std::vector<double> angles = sweep_angles(o.sweep);
  TiltController controller(map, schedule);
  std::optional<MorphScene> prev;
  double worst = 0.0;
  for (std::size_t i = 0; i < angles.size(); ++i) {
    MorphScene s = scene(geometry, map, layer, style, controller.update(angles[i], o.azimuth), schedule);
    write_text_file(fs::path(o.out) / frame_name(i, angles.size() - 1), write_scenefile(s));
    if (prev) worst = std::max(worst, max_vertex_displacement(*prev, s));
    prev = std::move(s);
  }
  out << "frames " << angles.size() << ", max displacement per step " << worst << "\n";
  return 0;
}

int cmd_analyze(const Options& o, std::ostream& out) {
  SessionLog log;
  log.samples = read_tracefile(read_text_file(o.trace));
  if (!o.answers.empty()) log.answers = read_answers(read_text_file(o.answers));
  if (!o.tasks.empty()) {
    for (const TaskSpec& t : read_taskfile(read_text_file(o.tasks))) log.truths.push_back(t.answer);
  }
  const std::string report = write_report(analyze(log));
  if (o.out.empty()) {
    out << report;
  } else {
    write_text_file(o.out, report);
  }
  return 0;
}

int cmd_serve(const Options& o, std::ostream& out) {
  DataServer server(ServeConfig::load(o.config));
  const int port = server.bind(o.host, o.port);
  out << "serving on http://" << o.host << ":" << port << "\n" << std::flush;
  server.run();
  return 0;
}

}  // namespace

int exit_code_for(Errc code) noexcept {
  switch (code) {
    case Errc::TargetUnreachable:
    case Errc::GenerationExhausted:
    case Errc::ComponentTooSmall:
      return 3;
    case Errc::IoError:
    case Errc::PortInUse:
      return 4;
    default:
      return 2;
  }
}

std::string read_text_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::IoError, "cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_text_file(const fs::path& path, std::string_view text) {
  std::error_code ec;
  if (path.has_parent_path()) fs::create_directories(path.parent_path(), ec);
  std::ofstream f(path, std::ios::binary | std::ios::trunc);
  if (!f) throw Error(Errc::IoError, "cannot write " + path.string());
  f.write(text.data(), static_cast<std::streamsize>(text.size()));
  if (!f) throw Error(Errc::IoError, "write failed for " + path.string());
}

int run_cli(std::span<const std::string> args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Tilt map pipeline: ingest, synthesize, generate tasks, export scenes, analyze traces", "tiltmap"};
  app.require_subcommand(1);
  Options o;

  auto* ingest = app.add_subcommand("ingest", "GeoJSON boundaries -> projected mapfile");
  ingest->add_option("geojson", o.geojson, "GeoJSON FeatureCollection")->required();
  ingest->add_option("--id-property", o.id_property, "feature property holding the area id");
  ingest->add_option("--name-property", o.name_property, "feature property holding the area name");
  ingest->add_option("--contiguity", o.contiguity, "rook or queen");
  ingest->add_option("--out", o.out, "mapfile to write")->required();

  auto* layer = app.add_subcommand("layer", "raw {areaId: value} -> normalized layerfile");
  layer->add_option("--map", o.map)->required();
  layer->add_option("raw", o.raw, "raw values JSON")->required();
  layer->add_option("--transform", o.transform, "none, squareRoot or fourthRoot");
  layer->add_option("--out", o.out)->required();

  auto* synth = app.add_subcommand("synth", "layer with the reference's Moran's I");
  synth->add_option("--map", o.map)->required();
  synth->add_option("--layer", o.layer, "reference layerfile")->required();
  synth->add_option("--seed", o.seed);
  synth->add_option("--tolerance", o.tolerance);
  synth->add_option("--max-swaps", o.max_swaps);
  synth->add_option("--out", o.out)->required();

  auto* tasks = app.add_subcommand("tasks", "generate study tasks");
  tasks->add_option("--map", o.map)->required();
  tasks->add_option("--layer", o.layer, "reference layerfile")->required();
  tasks->add_option("--profile", o.profile, "US, UK or EU")->required();
  tasks->add_option("--regions", o.regions, "region tasks per answer range");
  tasks->add_option("--comparisons", o.comparisons, "comparison tasks per answer range and distance class");
  tasks->add_option("--ranges", o.ranges, "answer ranges, default 20-40,40-60,60-80");
  tasks->add_option("--attempts", o.attempts, "draw budget per task");
  tasks->add_option("--tolerance", o.tolerance);
  tasks->add_option("--max-swaps", o.max_swaps);
  tasks->add_option("--seed", o.seed);
  tasks->add_option("--out", o.out, "taskfile; layers go to <stem>_layers/")->required();

  auto* sc = app.add_subcommand("scene", "export morph geometry");
  sc->add_option("--map", o.map)->required();
  sc->add_option("--layer", o.layer)->required();
  sc->add_option("--tilt", o.tilt);
  sc->add_option("--azimuth", o.azimuth);
  sc->add_option("--style", o.style, "choropleth, monochromePrism, coloredPrism or tiltMap");
  sc->add_option("--schedule", o.schedule, "six breakpoints in degrees, e.g. 5,40,50,65,75,85");
  sc->add_option("--sweep", o.sweep, "export a 0..90 sweep with this step into --out as a directory");
  sc->add_option("--out", o.out)->required();

  auto* an = app.add_subcommand("analyze", "trace analytics report");
  an->add_option("--trace", o.trace, "tracefile (JSON Lines)")->required();
  an->add_option("--tasks", o.tasks);
  an->add_option("--answers", o.answers);
  an->add_option("--out", o.out, "report path, stdout when omitted");

  auto* serve = app.add_subcommand("serve", "HTTP data server for the viewer");
  serve->add_option("--config", o.config)->required();
  serve->add_option("--port", o.port);
  serve->add_option("--host", o.host);

  try {
    std::vector<std::string> reversed(args.rbegin(), args.rend());
    app.parse(std::move(reversed));
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::ParseError& e) {
    std::string msg = e.what();
    for (char& c : msg) {
      if (c == '\n') c = ' ';
    }
    err << "InvalidArgument: " << msg << "\n";
    return 2;
  }

  try {
    if (*ingest) return cmd_ingest(o, out);
    if (*layer) return cmd_layer(o, out);
    if (*synth) return cmd_synth(o, out);
    if (*tasks) return cmd_tasks(o, out);
    if (*sc) return cmd_scene(o, out);
    if (*an) return cmd_analyze(o, out);
    if (*serve) return cmd_serve(o, out);
  } catch (const Error& e) {
    std::string msg = e.what();
    for (char& c : msg) {
      if (c == '\n') c = ' ';
    }
    err << msg << "\n";
    return exit_code_for(e.code());
  } catch (const std::filesystem::filesystem_error& e) {
    err << "IoError: " << e.what() << "\n";
    return 4;
  }
  return 2;
}

}  // namespace tiltmap
