#include <openssl/evp.h>

#include <CLI11.hpp>
#include <chrono>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include "oplm/bipartition.hpp"
#include "oplm/io.hpp"
#include "oplm/prover.hpp"
#include "oplm/states.hpp"
#include "oplm/verifier.hpp"

#ifndef OPLM_VERSION
#define OPLM_VERSION "0.0.0"
#endif

namespace {

using namespace oplm;

enum Exit { kOk = 0, kNontrivial = 1, kInvalidSet = 2, kUsage = 3, kInconclusive = 4 };

class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

class UsageError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Input {
  std::vector<int> dims;
  std::string set_path;
};

struct Output {
  std::string format;
  std::string path;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "'");
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void emit(const Output& out, const std::string& text) {
  if (out.path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream f(out.path, std::ios::binary);
  if (!f) throw IoError("cannot write '" + out.path + "'");
  f << text;
}

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw std::runtime_error("sha256 failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(md[i]);
  return os.str();
}

StateSet load(const Input& in) {
  if (!in.set_path.empty()) {
    if (!in.dims.empty()) throw UsageError("give either --dims or --set, not both");
    return parse_state_set(read_file(in.set_path));
  }
  if (in.dims.size() != 3) throw UsageError("--dims d1 d2 d3 or --set FILE is required");
  return build_for_dims({in.dims[0], in.dims[1], in.dims[2]});
}

std::vector<Bipartition> cuts(const std::string& spec) {
  if (spec == "all") return {kAllBipartitions.begin(), kAllBipartitions.end()};
  return {parse_bipartition(spec)};
}

std::vector<std::uint64_t> parse_primes(const std::string& text) {
  std::vector<std::uint64_t> out;
  std::stringstream ss(text);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    if (tok.empty()) continue;
    try {
      std::size_t used = 0;
      out.push_back(std::stoull(tok, &used));
      if (used != tok.size()) throw std::invalid_argument(tok);
    } catch (const std::exception&) {
      throw UsageError("bad prime '" + tok + "'");
    }
  }
  return out;
}

std::vector<std::uint64_t> primes_from(const std::string& flag) {
  if (!flag.empty()) return parse_primes(flag);
  if (const char* env = std::getenv("OPLM_PRIMES"); env && *env) return parse_primes(env);
  return default_primes();
}

Json input_json(const Input& in, const StateSet& s) {
  Json j;
  j["source"] = in.set_path.empty() ? Json("generated") : Json(in.set_path);
  j["dims"] = {s.dims().d1, s.dims().d2, s.dims().d3};
  j["states"] = s.size();
  j["digest"] = Json{{"algorithm", "sha256"}, {"over", "canonical state-set JSON"},
                     {"value", sha256_hex(serialize(s))}};
  return j;
}

Json report_header(const std::string& echo, const Input& in, const StateSet& s) {
  Json j;
  j["tool"] = "oplm";
  j["version"] = OPLM_VERSION;
  j["command"] = echo;
  j["input"] = input_json(in, s);
  return j;
}

std::string fmt_ms(double ms) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(1) << ms;
  return os.str();
}

int exit_for(Verdict v) {
  switch (v) {
    case Verdict::trivial: return kOk;
    case Verdict::nontrivial: return kNontrivial;
    default: return kInconclusive;
  }
}

// ---- gen

int cmd_gen(const Input& in, const Output& out) {
  const StateSet s = load(in);
  emit(out, serialize(s));
  const long long lb = lower_bound(s.dims().d1, s.dims().d2, s.dims().d3);
  std::cerr << s.size() << " states, " << (check_meets_bound(s) ? "meets" : "does not meet") << " lower bound "
            << lb << "\n";
  return kOk;
}

// ---- verify

struct VerifyArgs {
  std::string bipartition = "all";
  std::string mode = "exact";
  std::string primes;
  double tol = 1e-8;
  bool emit_kernel = false;
  bool conjugate_rows = false;
};

int cmd_verify(const std::string& echo, const Input& in, const Output& out, const VerifyArgs& a) {
  const auto t0 = std::chrono::steady_clock::now();
  const StateSet s = load(in);
  VerifyOptions opt;
  opt.mode = parse_mode(a.mode);
  opt.tol = a.tol;
  opt.system.include_conjugate_rows = a.conjugate_rows;
  if (opt.mode == NullityMode::modp) {
    opt.primes = primes_from(a.primes);
    validate_primes(opt.primes);
  }
  Json report = report_header(echo, in, s);
  Json results = Json::array();
  Json timings;
  std::vector<Verdict> verdicts;
  std::ostringstream text;
  for (auto b : cuts(a.bipartition)) {
    const ConstraintSystem cs = build_system(s, b, opt.system);
    NullityReport r;
    switch (opt.mode) {
      case NullityMode::exact: r = nullity_exact(cs); break;
      case NullityMode::modp: r = nullity_modp(cs, opt.primes); break;
      default: r = nullity_float(cs, opt.tol); break;
    }
    verdicts.push_back(r.verdict);
    Json rj = to_json(r, false);
    if (a.emit_kernel && opt.mode == NullityMode::exact) {
      Json kernel = Json::array();
      for (const auto& k : exact_kernel(cs)) {
        Json v = Json::object();
        for (std::size_t i = 0; i < k.coords.size(); ++i) {
          if (k.coords[i].sign() == 0) continue;
          const auto& u = cs.unknowns[i];
          std::string key = to_string(u.kind) + std::string(" ") + format_entry(u.row, u.col);
          v[key] = k.coords[i].str();
        }
        kernel.push_back(std::move(v));
      }
      rj["kernel"] = std::move(kernel);
    }
    results.push_back(std::move(rj));
    timings[to_string(b)] = r.elapsed_ms;
    text << std::left << std::setw(6) << to_string(b) << " " << std::setw(6) << to_string(r.mode) << " nullity "
         << r.nullity << "  rows " << r.rows << "  unknowns " << r.cols << "  identity-in-kernel "
         << (r.identity_in_kernel ? "yes" : "no") << "  " << to_string(r.verdict) << "  (" << fmt_ms(r.elapsed_ms)
         << " ms)\n";
  }
  const Verdict overall = combine(verdicts);
  report["results"] = std::move(results);
  report["overall"] = to_string(overall);
  timings["total_ms"] = std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - t0).count();
  report["timings"] = std::move(timings);
  if (out.format == "json") {
    emit(out, report.dump(2) + "\n");
  } else {
    text << "overall " << to_string(overall) << "\n";
    emit(out, text.str());
  }
  return exit_for(overall);
}

// ---- prove

int cmd_prove(const std::string& echo, const Input& in, const Output& out, const std::string& bip) {
  const StateSet s = load(in);
  Json report = report_header(echo, in, s);
  Json traces = Json::array();
  std::string text;
  bool all = true;
  for (auto b : cuts(bip)) {
    const DeductionTrace t = prove(s, b);
    all = all && t.verdict == ProofVerdict::trivial_proven;
    traces.push_back(to_json(t));
    text += render_text(t);
  }
  report["traces"] = std::move(traces);
  report["overall"] = all ? "TRIVIAL_PROVEN" : "INCONCLUSIVE";
  emit(out, out.format == "json" ? report.dump(2) + "\n" : text);
  return all ? kOk : kInconclusive;
}

// ---- classify

int cmd_classify(const std::string& echo, const Input& in, const Output& out) {
  const StateSet s = load(in);
  Json report = report_header(echo, in, s);
  Json rows = Json::array();
  std::ostringstream text;
  text << std::left << std::setw(12) << "label" << std::setw(9) << "family" << std::setw(6) << "A|BC"
       << std::setw(6) << "B|CA" << std::setw(6) << "C|AB"
       << "category\n";
  for (const auto& st : s.states()) {
    const StateClass c = classify_state(st.ket);
    Json r;
    r["label"] = st.label;
    r["family"] = st.family;
    Json ranks;
    for (auto b : kAllBipartitions) ranks[to_string(b)] = c.schmidt_rank[static_cast<int>(b)];
    r["schmidt_rank"] = std::move(ranks);
    r["category"] = to_string(c.category);
    rows.push_back(std::move(r));
    text << std::left << std::setw(12) << st.label << std::setw(9) << st.family << std::setw(6)
         << c.schmidt_rank[0] << std::setw(6) << c.schmidt_rank[1] << std::setw(6) << c.schmidt_rank[2]
         << to_string(c.category) << "\n";
  }
  report["states"] = std::move(rows);
  emit(out, out.format == "json" ? report.dump(2) + "\n" : text.str());
  return kOk;
}

// ---- bound

int cmd_bound(const Input& in, const Output& out) {
  Json j;
  long long lb = 0;
  if (!in.set_path.empty()) {
    const StateSet s = load(in);
    lb = lower_bound(s.dims().d1, s.dims().d2, s.dims().d3);
    j["dims"] = {s.dims().d1, s.dims().d2, s.dims().d3};
    j["lower_bound"] = lb;
    j["size"] = s.size();
    j["meets"] = check_meets_bound(s);
  } else {
    if (in.dims.size() != 3) throw UsageError("--dims d1 d2 d3 or --set FILE is required");
    lb = lower_bound(in.dims[0], in.dims[1], in.dims[2]);
    j["dims"] = in.dims;
    j["lower_bound"] = lb;
  }
  if (out.format == "json") {
    emit(out, j.dump(2) + "\n");
  } else {
    std::string t = std::to_string(lb) + "\n";
    if (j.contains("size"))
      t += std::to_string(j["size"].get<std::size_t>()) + " states, " +
           (j["meets"].get<bool>() ? "meets" : "does not meet") + " the bound\n";
    emit(out, t);
  }
  return kOk;
}

// ---- plane

int cmd_plane(const Input& in, const Output& out, const std::string& bip) {
  const StateSet s = load(in);
  Json planes = Json::array();
  std::string text;
  for (auto b : cuts(bip)) {
    const PlaneStructure ps = plane_structure(s, b);
    planes.push_back(to_json(ps));
    text += render_ascii(ps);
  }
  emit(out, out.format == "json" ? planes.dump(2) + "\n" : text);
  return kOk;
}

// ---- bench

int cmd_bench(const Output& out, int from, int to, const std::string& primes_flag) {
  if (from < 3 || to < from) throw UsageError("bench needs 3 <= --from <= --to");
  const auto primes = primes_from(primes_flag);
  validate_primes(primes);
  Json rows = Json::array();
  std::ostringstream text;
  text << std::left << std::setw(4) << "d" << std::setw(7) << "cut" << std::setw(12) << "exact_ms" << std::setw(12)
       << "modp_ms" << "nullity(exact/modp)\n";
  for (int d = from; d <= to; ++d) {
    const StateSet s = build_theorem1_set(d);
    for (auto b : kAllBipartitions) {
      const ConstraintSystem cs = build_system(s, b);
      const NullityReport ex = nullity_exact(cs);
      const NullityReport mp = nullity_modp(cs, primes);
      rows.push_back(Json{{"d", d},
                          {"bipartition", to_string(b)},
                          {"exact_ms", ex.elapsed_ms},
                          {"modp_ms", mp.elapsed_ms},
                          {"nullity_exact", ex.nullity},
                          {"nullity_modp", mp.nullity}});
      text << std::left << std::setw(4) << d << std::setw(7) << to_string(b) << std::setw(12) << fmt_ms(ex.elapsed_ms)
           << std::setw(12) << fmt_ms(mp.elapsed_ms) << ex.nullity << "/" << mp.nullity << "\n";
    }
  }
  emit(out, out.format == "json" ? rows.dump(2) + "\n" : text.str());
  return kOk;
}

void add_input(CLI::App* c, Input& in) {
  c->add_option("--dims", in.dims, "local dimensions d1 d2 d3")->expected(3);
  c->add_option("--set", in.set_path, "state-set JSON file");
}

void add_output(CLI::App* c, Output& out, const std::string& default_format) {
  c->add_option("--format", out.format, "output format (default " + default_format + ")")
      ->check(CLI::IsMember({"json", "text"}));
  c->add_option("--out", out.path, "write to FILE instead of stdout");
}

CLI::Option* add_bipartition(CLI::App* c, std::string& b) {
  return c->add_option("--bipartition", b, "A-BC, B-CA, C-AB or all")
      ->check(CLI::IsMember({"A-BC", "B-CA", "C-AB", "A|BC", "B|CA", "C|AB", "all"}));
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Construct tripartite strongest-nonlocal sets and certify their local measurements trivial"};
  app.set_version_flag("--version", OPLM_VERSION);
  app.require_subcommand(1);

  std::string echo;
  for (int i = 1; i < argc; ++i) echo += (i > 1 ? " " : "") + std::string(argv[i]);

  Input in;
  Output out;
  VerifyArgs va;
  std::string bip = "all";
  int bench_from = 3;
  int bench_to = 5;

  auto* gen = app.add_subcommand("gen", "write the constructed set for the given dimensions");
  add_input(gen, in);
  gen->add_option("--out", out.path, "write to FILE instead of stdout");

  auto* verify = app.add_subcommand("verify", "exact nullity of the constraint system on each cut");
  add_input(verify, in);
  add_output(verify, out, "json");
  add_bipartition(verify, va.bipartition);
  verify->add_option("--mode", va.mode, "exact, modp or float")->check(CLI::IsMember({"exact", "modp", "float"}));
  verify->add_option("--primes", va.primes, "comma-separated primes for modp (default: $OPLM_PRIMES)");
  verify->add_option("--tol", va.tol, "relative singular-value tolerance for float mode");
  verify->add_flag("--emit-kernel", va.emit_kernel, "include an exact kernel basis (exact mode)");
  verify->add_flag("--conjugate-rows", va.conjugate_rows, "also emit the conjugate orientation of every pair");

  auto* prove_cmd = app.add_subcommand("prove", "replay the observation-based deduction");
  add_input(prove_cmd, in);
  add_output(prove_cmd, out, "text");
  add_bipartition(prove_cmd, bip);

  auto* classify = app.add_subcommand("classify", "Schmidt ranks and entanglement category per state");
  add_input(classify, in);
  add_output(classify, out, "text");

  auto* bound = app.add_subcommand("bound", "cardinality lower bound max_i(d1 d2 d3 / d_i) + 1");
  add_input(bound, in);
  add_output(bound, out, "text");

  auto* plane = app.add_subcommand("plane", "plane structure grid on each cut");
  add_input(plane, in);
  add_output(plane, out, "text");
  add_bipartition(plane, bip);

  auto* bench = app.add_subcommand("bench", "time exact against modular elimination on the cube sets");
  add_output(bench, out, "text");
  bench->add_option("--from", bench_from, "smallest d");
  bench->add_option("--to", bench_to, "largest d");
  bench->add_option("--primes", va.primes, "comma-separated primes (default: $OPLM_PRIMES)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  if (out.format.empty()) out.format = *verify ? "json" : "text";

  try {
    if (*gen) return cmd_gen(in, out);
    if (*verify) return cmd_verify(echo, in, out, va);
    if (*prove_cmd) return cmd_prove(echo, in, out, bip);
    if (*classify) return cmd_classify(echo, in, out);
    if (*bound) return cmd_bound(in, out);
    if (*plane) return cmd_plane(in, out, bip);
    if (*bench) return cmd_bench(out, bench_from, bench_to, va.primes);
  } catch (const NonOrthogonalError& e) {
    std::cerr << "error: invalid set: " << e.what() << "\n";
    return kInvalidSet;
  } catch (const DimensionError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInvalidSet;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}
