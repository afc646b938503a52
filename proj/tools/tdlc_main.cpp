// Command-line front end. Exit codes: 0 pass, 1 check failure, 2 input
// error, 3 uncertified or undetermined computation.

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "tdlc/tdlc.hpp"

namespace {

using namespace tdlc;

constexpr int kPass = 0;
constexpr int kCheckFailure = 1;
constexpr int kInputError = 2;
constexpr int kUncertified = 3;

struct CommonArgs {
  std::string family;
  long long prime = 2;
  std::uint64_t seed = 20260814;
  int max_steps = 64;

  EngineOptions engine() const {
    EngineOptions opt;
    opt.max_steps = max_steps;
    return opt;
  }
};

void add_common(CLI::App* cmd, CommonArgs& args, bool family_required) {
  auto* fam = cmd->add_option("-f,--family", args.family,
                              "group family: affine, sym3, lamplighter");
  if (family_required) fam->required();
  cmd->add_option("-p,--prime", args.prime,
                  "prime for the affine family (default 2)");
  cmd->add_option("--seed", args.seed, "seed for sampled sub-checks");
  cmd->add_option("--max-steps", args.max_steps,
                  "step budget for limit subgroups (default 64)");
}

template <class Fn>
int with_family(const CommonArgs& args, Fn&& fn) {
  if (args.family == "affine") return fn(AffineFamily(args.prime));
  if (args.family == "sym3") return fn(Sym3Family{});
  if (args.family == "lamplighter") return fn(LampFamily{});
  std::cerr << "input error: unknown family \"" << args.family
            << "\" (expected affine, sym3, or lamplighter)\n";
  return kInputError;
}

template <GroupFamily F>
int cmd_scale(const F& f, const std::string& x_str, const CommonArgs& args) {
  typename F::Element x = f.parse_element(x_str);
  Rng rng(args.seed);
  ScaleOutcome<F> out = scale(f, x, rng, args.engine());
  std::cout << "family = " << f.instance_label() << "\n"
            << "x = " << f.format(x) << "\n";
  if (out.certified) {
    std::cout << "scale = " << out.cert.scale.str() << "\n"
              << "tidy V = " << f.format(out.cert.tidy_v) << "\n"
              << "V+ = " << f.format(out.cert.v_plus) << "\n"
              << "V- = " << f.format(out.cert.v_minus) << "\n";
  }
  std::cout << "candidates examined:\n";
  for (const auto& [v, idx] : out.cert.examined)
    std::cout << "  " << f.format(v) << ": displacement " << idx.str()
              << "\n";
  if (!out.certified) {
    std::cout << out.failure << "\n";
    return kUncertified;
  }
  return kPass;
}

template <GroupFamily F>
int cmd_con(const F& f, const std::string& x_str, const std::string& g_str) {
  typename F::Element x = f.parse_element(x_str);
  std::cout << "family = " << f.instance_label() << "\n"
            << "x = " << f.format(x) << "\n"
            << "con(x) = " << contraction_group_name(f.contraction_group(x))
            << "\n";
  ClosureNote note = f.contraction_closure(x);
  std::cout << "closed = " << (note.closed ? "yes" : "no") << " ("
            << note.description << ")\n";
  if (g_str.empty()) return kPass;
  typename F::Element g = f.parse_element(g_str);
  ContractionDecision d = f.in_contraction(g, x);
  std::cout << "g = " << f.format(g) << "\n"
            << "g in con(x) = " << (d.verdict ? "true" : "false") << " ["
            << ContractionDecision::kind_name(d.kind) << "] " << d.detail
            << "\n";
  return d.verdict ? kPass : kCheckFailure;
}

template <GroupFamily F>
int cmd_tidy(const F& f, const std::string& x_str, const std::string& v_str,
             const CommonArgs& args) {
  typename F::Element x = f.parse_element(x_str);
  typename F::Subgroup V = f.parse_subgroup(v_str);
  Rng rng(args.seed);
  TidyReport<F> r = is_tidy(f, x, V, rng, args.engine());
  std::cout << "family = " << f.instance_label() << "\n"
            << "x = " << f.format(x) << "\n"
            << "V = " << f.format(V) << "\n"
            << "displacement index = "
            << displacement_index(f, x, V).str() << "\n";
  if (!r.determined) {
    std::cout << "undetermined: " << r.reason << "\n";
    return kUncertified;
  }
  std::cout << "V+ = " << f.format(r.v_plus) << " (" << r.limit_method_plus
            << ")\n"
            << "V- = " << f.format(r.v_minus) << " (" << r.limit_method_minus
            << ")\n";
  if (r.tidy) {
    std::cout << "factorization: " << r.factorization_note << "\n"
              << "spot factorizations verified: " << r.spot_checked << "\n"
              << "V++ closed: " << r.closure.description << "\n"
              << "tidy = true\n";
    return kPass;
  }
  std::cout << "tidy = false (" << r.reason << ")\n";
  return kCheckFailure;
}

template <GroupFamily F, class Lattice>
int run_witness(const F& f, const Lattice& H, const std::string& x_str,
                long long n_max, const CommonArgs& args) {
  typename F::Element x = f.parse_element(x_str);
  Rng rng(args.seed);
  LatticeWitness<F> w =
      find_witness(f, H, x, n_max, 16, 20, rng, args.engine());
  std::cout << "family = " << f.instance_label() << "\n"
            << "x = " << f.format(x) << "\n"
            << "H = " << H.label() << " (" << H.describe() << ")\n";
  if (!w.scale_x.certified) {
    std::cout << "scale(x) " << w.scale_x.failure << "\n";
    return kUncertified;
  }
  std::cout << "scale(x) = " << w.scale_x.cert.scale.str() << ", tidy V = "
            << f.format(w.scale_x.cert.tidy_v) << "\n";
  if (!w.found) {
    std::cout << w.failure << "\n";
    return kUncertified;
  }
  std::cout << "n = " << w.n << "\n"
            << "h = " << f.format(w.h) << "\n"
            << "t = " << f.format(w.t) << " (" << w.conjugator.path
            << ", membership verified to k = " << w.conjugator.checked_k
            << ")\n"
            << "scale(h) = "
            << (w.scale_h.certified ? w.scale_h.cert.scale.str()
                                    : "uncertified")
            << " = scale(x)^" << w.n << "\n";
  for (const auto& [name, ok] : w.checks)
    std::cout << "  [" << (ok ? "ok" : "FAIL") << "] " << name << "\n";
  std::cout << "contraction conjugacy: " << w.conjugacy.detail << " ("
            << w.conjugacy.checked << " samples)\n";
  return w.pass() ? kPass : kCheckFailure;
}

int cmd_witness(const CommonArgs& args, const std::string& x_str,
                long long n_max, long long modulus) {
  if (args.family == "affine")
    return run_witness(AffineFamily(args.prime), AffineCovolume(modulus),
                       x_str, n_max, args);
  if (args.family == "sym3")
    return run_witness(Sym3Family{}, Sym3CovolumeLattice{}, x_str, n_max,
                       args);
  if (args.family == "lamplighter")
    return run_witness(LampFamily{}, RationalShiftLattice{}, x_str, n_max,
                       args);
  std::cerr << "input error: unknown family \"" << args.family << "\"\n";
  return kInputError;
}

int cmd_verify(const std::string& config_path, const std::string& out_dir,
               bool seed_set, std::uint64_t seed) {
  ExperimentConfig cfg = load_config(config_path);
  if (seed_set) cfg.seed = seed;
  RunReport rep = run_battery(cfg);
  std::filesystem::path out(out_dir);
  std::filesystem::create_directories(out);
  std::filesystem::path records_path = out / cfg.records_path;
  std::filesystem::path summary_path = out / cfg.summary_path;
  {
    std::ofstream rec(records_path);
    if (!rec) throw structural_error("cannot write " + records_path.string());
    rep.write_jsonl(rec);
  }
  {
    std::ofstream csv(summary_path);
    if (!csv) throw structural_error("cannot write " + summary_path.string());
    rep.write_csv(csv);
  }
  std::cout << rep.summary_text();
  if (!rep.all_passed()) {
    int shown = 0;
    for (const Record& r : rep.records) {
      if (r.verdict) continue;
      if (shown == 20) {
        std::cout << "... and " << (rep.failures() - shown)
                  << " more failing records (see " << records_path.string()
                  << ")\n";
        break;
      }
      std::cout << "failing: " << r.to_json().dump() << "\n";
      ++shown;
    }
  }
  std::cout << "records: " << records_path.string() << "\n"
            << "summary: " << summary_path.string() << "\n"
            << "wall time: " << rep.wall_ms << " ms (not serialized)\n";
  return rep.all_passed() ? kPass : kCheckFailure;
}

int cmd_report(const std::string& records_path, const std::string& csv_out) {
  RunReport rep;
  rep.records = read_jsonl_file(records_path);
  std::cout << rep.summary_text();
  if (!csv_out.empty()) {
    std::ofstream csv(csv_out);
    if (!csv) throw structural_error("cannot write " + csv_out);
    rep.write_csv(csv);
    std::cout << "summary: " << csv_out << "\n";
  }
  return rep.all_passed() ? kPass : kCheckFailure;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{
      "exact scale, tidy-subgroup, and contraction computations on three "
      "totally disconnected locally compact groups"};
  app.require_subcommand(1);

  CommonArgs scale_args, con_args, tidy_args, witness_args;
  std::string scale_x, con_x, con_g, tidy_x, tidy_v, witness_x;
  long long witness_n_max = 36, witness_modulus = 3;
  std::string verify_config, verify_out = ".";
  std::uint64_t verify_seed = 0;
  std::string report_records, report_csv;

  CLI::App* c_scale = app.add_subcommand(
      "scale", "scale of an element, certified by a tidy subgroup");
  add_common(c_scale, scale_args, true);
  c_scale->add_option("element", scale_x, "element to evaluate")->required();

  CLI::App* c_con = app.add_subcommand(
      "con", "contraction group of an element; optionally test membership");
  add_common(c_con, con_args, true);
  c_con->add_option("element", con_x, "the element x")->required();
  c_con->add_option("probe", con_g, "optional g, tested for g in con(x)");

  CLI::App* c_tidy = app.add_subcommand(
      "tidy", "tidiness of a compact open subgroup for an element");
  add_common(c_tidy, tidy_args, true);
  c_tidy->add_option("element", tidy_x, "the element x")->required();
  c_tidy->add_option("subgroup", tidy_v, "the compact open V")->required();

  CLI::App* c_witness = app.add_subcommand(
      "witness", "smallest n with H meeting V x^n V, plus h and conjugator");
  add_common(c_witness, witness_args, true);
  c_witness->add_option("element", witness_x, "the element x")->required();
  c_witness->add_option("--n-max", witness_n_max,
                        "largest exponent searched (default 36)");
  c_witness->add_option("--modulus", witness_modulus,
                        "affine H = Q_p x| mZ (default 3)");

  CLI::App* c_verify = app.add_subcommand(
      "verify", "run the full check battery from a config file");
  c_verify->add_option("config", verify_config, "config file")->required();
  c_verify->add_option("--out", verify_out,
                       "output directory (default: current)");
  CLI::Option* seed_opt =
      c_verify->add_option("--seed", verify_seed, "override the config seed");

  CLI::App* c_report = app.add_subcommand(
      "report", "summarize a records file written by verify");
  c_report->add_option("records", report_records, "records.jsonl file")
      ->required();
  c_report->add_option("--out", report_csv, "also write the CSV summary here");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kPass : kInputError;
  }

  try {
    if (*c_scale)
      return with_family(scale_args, [&](const auto& f) {
        return cmd_scale(f, scale_x, scale_args);
      });
    if (*c_con)
      return with_family(con_args,
                         [&](const auto& f) { return cmd_con(f, con_x, con_g); });
    if (*c_tidy)
      return with_family(tidy_args, [&](const auto& f) {
        return cmd_tidy(f, tidy_x, tidy_v, tidy_args);
      });
    if (*c_witness)
      return cmd_witness(witness_args, witness_x, witness_n_max,
                         witness_modulus);
    if (*c_verify)
      return cmd_verify(verify_config, verify_out,
                        seed_opt->count() > 0, verify_seed);
    if (*c_report) return cmd_report(report_records, report_csv);
  } catch (const parse_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const structural_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kInputError;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
  return kInputError;
}
