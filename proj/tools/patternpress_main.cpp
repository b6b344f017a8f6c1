// patternpress command line: generate columns, compress/decompress them with
// nested codec pipelines, and benchmark, tune and schedule decodes.

#include <algorithm>
#include <chrono>
#include <cstring>
#include <fstream>
#include <iostream>
#include <numeric>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"
#include "patternpress/column_io.hpp"
#include "patternpress/container.hpp"
#include "patternpress/datagen.hpp"
#include "patternpress/plan.hpp"
#include "patternpress/scheduler.hpp"
#include "patternpress/tuner.hpp"

namespace pp = patternpress;
using nlohmann::json;

namespace {

constexpr int kExitUsage = 2;
constexpr int kExitData = 3;
constexpr int kExitIntegrity = 4;

int exit_code_for(pp::ErrorCode c) {
  using E = pp::ErrorCode;
  switch (c) {
    case E::ParseError:
    case E::ArityError:
    case E::UnknownCodec:
    case E::InvalidArgument:
    case E::InvalidConfig:
      return kExitUsage;
    case E::TypeMismatch:
    case E::NotDecimalRepresentable:
    case E::ArithmeticOverflow:
    case E::Io:
    case E::OutOfGeometry:
      return kExitData;
    default:
      return kExitIntegrity;
  }
}

using Clock = std::chrono::steady_clock;

double seconds(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

json config_json(const pp::LaunchConfig& c) {
  return {{"pattern", pp::to_string(c.pattern)}, {"L", c.L}, {"S", c.S}, {"C", c.C}};
}

json timeline_json(const std::vector<pp::JobTimeline>& tl) {
  json out = json::array();
  for (const auto& t : tl) {
    out.push_back({{"id", t.id},
                   {"transfer_start", t.transfer_start},
                   {"transfer_end", t.transfer_end},
                   {"decompress_start", t.decompress_start},
                   {"decompress_end", t.decompress_end}});
  }
  return out;
}

pp::CompressedArtifact load_artifact(const std::string& path) {
  return pp::deserialize_artifact(pp::read_file(path));
}

// "fp:4,256,1" style; the fields a pattern derives itself are ignored.
pp::LaunchConfig parse_config(const std::string& text) {
  const auto colon = text.find(':');
  if (colon == std::string::npos) {
    throw pp::Error(pp::ErrorCode::InvalidArgument, "config '" + text + "' must look like fp:L,S,C");
  }
  pp::LaunchConfig cfg;
  cfg.pattern = pp::parse_pattern(text.substr(0, colon));
  std::stringstream ss(text.substr(colon + 1));
  std::string part;
  std::vector<std::uint64_t> v;
  while (std::getline(ss, part, ',')) {
    try {
      std::size_t used = 0;
      v.push_back(std::stoull(part, &used));
      if (used != part.size()) throw std::invalid_argument(part);
    } catch (const std::exception&) {
      throw pp::Error(pp::ErrorCode::InvalidArgument, "config '" + text + "': '" + part + "' is not a number");
    }
  }
  if (v.size() != 3) throw pp::Error(pp::ErrorCode::InvalidArgument, "config '" + text + "' needs three numbers");
  cfg.L = v[0];
  cfg.S = v[1];
  cfg.C = v[2];
  return cfg;
}

pp::VirtualDevice device_from(const std::string& name) {
  auto d = pp::VirtualDevice::profile(name);
  d.validate();
  return d;
}

void emit(const json& j) { std::cout << j.dump(2) << "\n"; }

// ---- commands ----------------------------------------------------------------

struct GenArgs {
  std::string kind;
  std::uint64_t rows = 100000;
  std::uint64_t seed = 1;
  std::string dist = "even:2";
  unsigned bits = 16;
  std::string ratios = "0.9,0.1";
  std::string out;
};

int cmd_gen(const GenArgs& a) {
  pp::TypedColumn col;
  if (a.kind == "rle") {
    col = pp::gen_rle_groups(a.rows, pp::parse_run_dist(a.dist), a.seed);
  } else if (a.kind == "uniform") {
    col = pp::gen_uniform_bits(a.rows, a.bits, a.seed);
  } else if (a.kind == "skewed") {
    std::vector<double> r;
    std::stringstream ss(a.ratios);
    std::string part;
    while (std::getline(ss, part, ',')) {
      try {
        r.push_back(std::stod(part));
      } catch (const std::exception&) {
        throw pp::Error(pp::ErrorCode::InvalidArgument, "bad ratio '" + part + "'");
      }
    }
    col = pp::gen_skewed_symbols(a.rows, r, a.seed);
  } else {
    col = pp::gen_tpch_like(pp::parse_tpch_kind(a.kind), a.rows, a.seed);
  }
  pp::write_column(a.out, col);
  emit({{"path", a.out}, {"type", pp::to_string(col.type())}, {"count", col.count()}, {"bytes", col.plain_size()}});
  return 0;
}

int cmd_compress(const std::string& in, const std::string& pipeline, const std::string& out) {
  const auto spec = pp::parse_pipeline(pipeline);
  const auto col = pp::read_column(in);
  const auto t0 = Clock::now();
  const auto artifact = pp::compile_encode(spec, col);
  const auto bytes = pp::serialize_artifact(artifact);
  const double secs = seconds(t0);
  pp::write_file(out, bytes);
  emit({{"pipeline", pp::render_pipeline(spec)},
        {"plain_bytes", col.plain_size()},
        {"compressed_bytes", bytes.size()},
        {"ratio", static_cast<double>(col.plain_size()) / static_cast<double>(std::max<std::size_t>(bytes.size(), 1))},
        {"encode_seconds", secs}});
  return 0;
}

pp::ExecutionConfig exec_from(const std::vector<std::string>& configs) {
  pp::ExecutionConfig e;
  for (const auto& c : configs) e.apply(parse_config(c));
  return e;
}

int cmd_decompress(const std::string& in, const std::string& out, const std::vector<std::string>& configs,
                   bool fused, const std::string& device) {
  const auto artifact = load_artifact(in);
  const auto dev = device_from(device);
  const auto t0 = Clock::now();
  const auto col = pp::decode_artifact(artifact, dev, exec_from(configs), fused);
  const double secs = seconds(t0);
  pp::write_column(out, col);
  emit({{"path", out}, {"count", col.count()}, {"plain_bytes", col.plain_size()}, {"decode_seconds", secs},
        {"fused", fused}});
  return 0;
}

int cmd_verify(const std::string& plain, const std::string& zdmv, const std::string& device) {
  const auto col = pp::read_column(plain);
  const auto artifact = load_artifact(zdmv);
  if (artifact.checksum != pp::column_checksum(col)) {
    std::cerr << "verify: checksum of " << plain << " differs from the one stored in " << zdmv << "\n";
    return kExitIntegrity;
  }
  const auto decoded = pp::decode_artifact(artifact, device_from(device));
  if (!(decoded == col)) {
    std::cerr << "verify: decoded column differs from " << plain << "\n";
    return kExitIntegrity;
  }
  emit({{"verified", true}, {"count", col.count()}});
  return 0;
}

// Host copy bandwidth, bytes/sec: best of a few large memcpy passes counting
// one read and one write per byte.
double measure_copy_bandwidth() {
  const std::size_t n = std::size_t{64} << 20;
  std::vector<std::uint8_t> a(n, 1), b(n);
  double best = 0;
  for (int r = 0; r < 3; ++r) {
    const auto t0 = Clock::now();
    std::memcpy(b.data(), a.data(), n);
    best = std::max(best, 2.0 * static_cast<double>(n) / seconds(t0));
  }
  if (b[n / 2] != 1) std::abort();
  return best;
}

double median_decode_seconds(const pp::CompressedArtifact& a, const pp::VirtualDevice& dev,
                             const pp::ExecutionConfig& e, bool fused, int reps) {
  std::vector<double> t;
  for (int r = 0; r < reps; ++r) {
    const auto t0 = Clock::now();
    (void)pp::decode_artifact(a, dev, e, fused);
    t.push_back(seconds(t0));
  }
  std::sort(t.begin(), t.end());
  return std::max(t[t.size() / 2], 1e-9);
}

int cmd_bench(const std::string& zdmv, int reps, double bandwidth, const std::vector<std::string>& configs,
              const std::string& device, bool as_json) {
  if (reps < 1) throw pp::Error(pp::ErrorCode::InvalidArgument, "--reps must be >= 1");
  const auto artifact = load_artifact(zdmv);
  const auto dev = device_from(device);
  const auto exec = exec_from(configs);
  const auto plain = static_cast<double>(pp::decode_artifact(artifact, dev, exec).plain_size());
  const auto compressed = static_cast<double>(pp::compressed_size(artifact));
  const double fused_s = median_decode_seconds(artifact, dev, exec, true, reps);
  const double unfused_s = median_decode_seconds(artifact, dev, exec, false, reps);
  const bool measured_bw = bandwidth <= 0;
  if (measured_bw) bandwidth = measure_copy_bandwidth();
  const auto unfused_plan = pp::compile_decode(artifact);
  const auto traffic = pp::traffic_model(unfused_plan, compressed, plain);
  json j = {{"schema", "patternpress.bench/1"},
            {"file", zdmv},
            {"pipeline", pp::render_pipeline(pp::pipeline_from_tree(artifact.root))},
            {"device", dev.name},
            {"workers", dev.worker_count},
            {"reps", reps},
            {"plain_bytes", plain},
            {"compressed_bytes", compressed},
            {"ratio", plain / compressed},
            {"fused", {{"seconds", fused_s}, {"throughput", plain / fused_s}, {"kernels", pp::fuse(unfused_plan).kernel_count()}}},
            {"unfused", {{"seconds", unfused_s}, {"throughput", plain / unfused_s}, {"kernels", unfused_plan.kernel_count()}}},
            {"bandwidth", bandwidth},
            {"bandwidth_measured", measured_bw},
            {"bound", pp::throughput_bound(bandwidth, compressed, plain)},
            {"traffic", {{"fused_bytes", traffic.fused_bytes}, {"unfused_bytes", traffic.unfused_bytes}, {"ratio", traffic.ratio}}}};
  if (as_json) {
    emit(j);
  } else {
    std::cout << "pipeline   " << j["pipeline"].get<std::string>() << "\n"
              << "ratio      " << plain / compressed << "\n"
              << "fused      " << plain / fused_s / 1e9 << " GB/s (" << j["fused"]["kernels"] << " kernels)\n"
              << "unfused    " << plain / unfused_s / 1e9 << " GB/s (" << j["unfused"]["kernels"] << " kernels)\n"
              << "bound      " << j["bound"].get<double>() / 1e9 << " GB/s at " << bandwidth / 1e9 << " GB/s memory\n"
              << "traffic    " << traffic.ratio << "x less with fusion\n";
  }
  return 0;
}

int cmd_tune(const std::string& zdmv, const std::string& pattern, const std::string& mode, int reps,
             double noise_margin, const std::string& device) {
  if (reps < 1) throw pp::Error(pp::ErrorCode::InvalidArgument, "--reps must be >= 1");
  const auto artifact = load_artifact(zdmv);
  const auto kernel = pp::make_artifact_kernel(artifact, pp::parse_pattern(pattern), device_from(device));
  const auto metric = pp::timed_metric(kernel, reps);
  pp::SearchReport r;
  if (mode == "bf") {
    r = pp::brute_force_search(kernel.space, metric);
  } else if (mode == "pruned") {
    r = pp::pruned_search(kernel.space, metric, noise_margin);
  } else {
    throw pp::Error(pp::ErrorCode::InvalidArgument, "--mode must be bf or pruned");
  }
  json trace = json::array();
  for (const auto& t : r.trace) {
    auto c = config_json(t.config);
    c["metric"] = t.metric;
    trace.push_back(c);
  }
  emit({{"schema", "patternpress.tune/1"},
        {"kernel", kernel.name},
        {"mode", mode},
        {"reps", reps},
        {"noise_margin", noise_margin},
        {"best_config", config_json(r.best_config)},
        {"best_metric", r.best_metric},
        {"evaluations", r.evaluations},
        {"space_size", pp::enumerate_space(kernel.space).size()},
        {"trace", trace}});
  return 0;
}

int cmd_schedule(const std::string& jobs_path, const std::string& mode, bool run, double link_bw,
                 const std::string& device) {
  std::ifstream in(jobs_path);
  if (!in) throw pp::Error(pp::ErrorCode::Io, "cannot open " + jobs_path);
  const auto dev = device_from(device);
  std::vector<pp::TransferJob> jobs;
  std::vector<pp::OverlapJob> payloads;
  std::string line;
  for (std::size_t lineno = 1; std::getline(in, line); ++lineno) {
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    json j;
    try {
      j = json::parse(line);
      pp::TransferJob t;
      t.id = j.at("id").get<std::string>();
      if (j.contains("path")) {
        auto bytes = pp::read_file(j.at("path").get<std::string>());
        const auto artifact = pp::deserialize_artifact(bytes);
        t = pp::estimate_job(t.id, artifact, link_bw, pp::measure_decode_rate(artifact, dev));
        payloads.push_back({t.id, std::move(bytes)});
      } else {
        t.transfer_cost = j.at("transfer").get<double>();
        t.decompress_cost = j.at("decompress").get<double>();
      }
      jobs.push_back(std::move(t));
    } catch (const json::exception& e) {
      throw pp::Error(pp::ErrorCode::InvalidArgument, jobs_path + ":" + std::to_string(lineno) + ": " + e.what());
    }
  }
  std::vector<std::size_t> order(jobs.size());
  std::iota(order.begin(), order.end(), 0);
  pp::ScheduleResult sim;
  if (mode == "johnson") {
    order = pp::johnson_order(jobs);
    sim = pp::simulate_pipeline(jobs, order);
  } else if (mode == "bruteforce") {
    sim = pp::brute_force_schedule(jobs);
    order = sim.order;
  } else if (mode == "given") {
    sim = pp::simulate_pipeline(jobs, order);
  } else {
    throw pp::Error(pp::ErrorCode::InvalidArgument, "--mode must be johnson, given or bruteforce");
  }
  json ids = json::array();
  for (auto i : order) ids.push_back(jobs[i].id);
  json j = {{"schema", "patternpress.schedule/1"},
            {"mode", mode},
            {"order", ids},
            {"simulated", {{"makespan", sim.makespan}, {"timeline", timeline_json(sim.timeline)}}}};
  if (run) {
    if (payloads.size() != jobs.size()) {
      throw pp::Error(pp::ErrorCode::InvalidArgument, "--run needs a \"path\" on every job line");
    }
    const auto r = pp::run_overlapped(payloads, order, link_bw, dev);
    j["measured"] = {{"makespan", r.makespan}, {"timeline", timeline_json(r.timeline)}};
  }
  emit(j);
  return 0;
}

void describe_tree(const pp::CodecNode& n, std::size_t& stream, const pp::CompressedArtifact& a, int depth,
                   std::ostream& os) {
  os << std::string(2 * depth, ' ') << pp::render_pipeline(pp::PipelineNode{n.codec, {}, {}, {}});
  if (n.codec == pp::CodecId::Raw) {
    const auto& s = a.streams.at(stream++);
    os << "  [" << pp::to_string(s.role) << ", " << s.bytes.size() << " bytes]";
  } else {
    os << "  params " << n.params.size() << " bytes";
  }
  os << "\n";
  for (const auto& c : n.children) describe_tree(c, stream, a, depth + 1, os);
}

int cmd_inspect(const std::string& zdmv, bool as_json) {
  const auto a = load_artifact(zdmv);
  const auto plan = pp::compile_decode(a);
  const auto fused = pp::fuse(plan);
  const auto text = pp::render_pipeline(pp::pipeline_from_tree(a.root));
  std::ostringstream tree;
  std::size_t stream = 0;
  describe_tree(a.root, stream, a, 0, tree);
  if (as_json) {
    json streams = json::array();
    for (const auto& s : a.streams) streams.push_back({{"role", pp::to_string(s.role)}, {"bytes", s.bytes.size()}});
    emit({{"schema", "patternpress.inspect/1"},
          {"pipeline", text},
          {"type", pp::to_string(a.original_type)},
          {"count", a.original_count},
          {"checksum", a.checksum},
          {"compressed_bytes", pp::compressed_size(a)},
          {"streams", streams},
          {"tree", tree.str()},
          {"plan", pp::describe_plan(fused)},
          {"kernels", {{"unfused", plan.kernel_count()}, {"fused", fused.kernel_count()}}}});
  } else {
    std::cout << "pipeline  " << text << "\n"
              << "column    " << pp::to_string(a.original_type) << " x " << a.original_count << "\n"
              << "size      " << pp::compressed_size(a) << " bytes\n\n"
              << tree.str() << "\n"
              << "decode plan (" << plan.kernel_count() << " kernels unfused, " << fused.kernel_count()
              << " fused)\n"
              << pp::describe_plan(fused);
  }
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"patternpress: pattern-based parallel column compression"};
  app.require_subcommand(1);
  std::string device = "a100";
  app.add_option("--device", device, "virtual device profile (a100, h100, mi50, mi300x)");

  GenArgs gen;
  auto* g = app.add_subcommand("gen", "generate a synthetic column");
  g->add_option("--kind", gen.kind, "rle, uniform, skewed, orderkey, date, decimal, comment or fk")->required();
  g->add_option("--rows", gen.rows, "rows (for rle: number of runs)");
  g->add_option("--seed", gen.seed);
  g->add_option("--dist", gen.dist, "run-length distribution for rle");
  g->add_option("--bits", gen.bits, "value width for uniform");
  g->add_option("--ratios", gen.ratios, "symbol weights for skewed, comma separated");
  g->add_option("-o,--out", gen.out)->required();

  std::string input, output, pipeline, zdmv, pattern = "fp", mode;
  std::vector<std::string> configs;
  bool no_fused = false, as_json = false, run = false;
  int reps = 3;
  double bandwidth = 0, link_bw = 1e9, noise_margin = 0.05;

  auto* c = app.add_subcommand("compress", "encode a column file with a pipeline");
  c->add_option("input", input)->required();
  c->add_option("--pipeline,-p", pipeline, "e.g. \"Dictionary encoding | Bit-packing\"")->required();
  c->add_option("-o,--out", output)->required();

  auto* d = app.add_subcommand("decompress", "decode a ZDMV file to a column file");
  d->add_option("input", input)->required();
  d->add_option("-o,--out", output)->required();
  d->add_option("--config", configs, "launch geometry per pattern, e.g. fp:4,256,1 gp:108,64,32 np:1,32,4");
  d->add_flag("--no-fused", no_fused, "run every codec step as its own kernel");
  d->add_flag_function("--fused", [&](std::int64_t) { no_fused = false; }, "fuse element-wise steps (default)");

  auto* v = app.add_subcommand("verify", "check a ZDMV file against a plain column");
  v->add_option("plain", input)->required();
  v->add_option("zdmv", zdmv)->required();

  auto* b = app.add_subcommand("bench", "decode throughput, fused vs unfused, against the bandwidth bound");
  b->add_option("zdmv", zdmv)->required();
  b->add_option("--reps", reps);
  b->add_option("--bandwidth", bandwidth, "memory bandwidth in bytes/sec (default: measured)");
  b->add_option("--config", configs);
  b->add_flag("--json", as_json);

  auto* t = app.add_subcommand("tune", "search launch geometry for one pattern of a ZDMV decode");
  t->add_option("zdmv", zdmv)->required();
  t->add_option("--pattern", pattern, "fp, gp or np");
  t->add_option("--mode", mode, "bf or pruned")->required();
  t->add_option("--reps", reps);
  t->add_option("--noise-margin", noise_margin, "relative drop ignored by the pruned sweeps (default 0.05)");

  auto* s = app.add_subcommand("schedule", "order column transfers and decodes");
  s->add_option("jobs", input, "JSONL: {id, transfer, decompress} or {id, path}")->required();
  s->add_option("--mode", mode, "johnson, given or bruteforce")->required();
  s->add_flag_function("--simulate", [&](std::int64_t) { run = false; }, "simulate only (default)");
  s->add_flag("--run", run, "also run the overlapped executor");
  s->add_option("--link-bandwidth", link_bw, "bytes/sec of the throttled link");

  auto* i = app.add_subcommand("inspect", "show codec tree, pipeline text and decode plan");
  i->add_option("zdmv", zdmv)->required();
  i->add_flag("--json", as_json);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kExitUsage;
  }

  try {
    if (*g) return cmd_gen(gen);
    if (*c) return cmd_compress(input, pipeline, output);
    if (*d) return cmd_decompress(input, output, configs, !no_fused, device);
    if (*v) return cmd_verify(input, zdmv, device);
    if (*b) return cmd_bench(zdmv, reps, bandwidth, configs, device, as_json);
    if (*t) return cmd_tune(zdmv, pattern, mode, reps, noise_margin, device);
    if (*s) return cmd_schedule(input, mode, run, link_bw, device);
    if (*i) return cmd_inspect(zdmv, as_json);
  } catch (const pp::Error& e) {
    std::cerr << "patternpress: " << e.what() << "\n";
    return exit_code_for(e.code());
  } catch (const std::exception& e) {
    std::cerr << "patternpress: " << e.what() << "\n";
    return kExitData;
  }
  return kExitUsage;
}
