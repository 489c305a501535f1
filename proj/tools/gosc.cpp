// gosc: spectra, critical couplings and exceptional points of
// H = -1/2 d^2/dx^2 + x^2/2 - lambda exp(-x^2).

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "gosc/cli.hpp"

namespace {

using namespace gosc;
using namespace gosc::cli;

std::string join(const std::vector<std::string>& items, const char* sep) {
  std::string out;
  for (std::size_t i = 0; i < items.size(); ++i) out += (i ? sep : "") + items[i];
  return out;
}

std::string schema_note(const std::vector<std::string>& columns) {
  return "CSV columns: " + join(columns, ",");
}

// Shared output options.
struct Output {
  std::string path;  // empty = stdout
  std::string format;
};

void add_output_options(CLI::App* cmd, Output& out) {
  cmd->add_option("--out", out.path, "Output file (default: stdout)");
  cmd->add_option("--format", out.format, "csv or jsonl (default: from the --out extension, else csv)")
      ->check(CLI::IsMember({"csv", "jsonl"}));
}

int emit(const Output& out, const std::vector<std::string>& columns, const Metadata& meta,
         const std::function<bool(const Sink&)>& run) {
  std::unique_ptr<std::ofstream> file;
  std::ostream* os = &std::cout;
  if (!out.path.empty()) {
    file = std::make_unique<std::ofstream>(out.path);
    if (!*file) throw InvalidInput("cannot open output file " + out.path);
    os = file.get();
  }
  const Format format = !out.format.empty() ? (out.format == "jsonl" ? Format::jsonl : Format::csv)
                                            : format_for_path(out.path);
  Writer writer(*os, format, columns, meta);
  const bool ok = run([&](const Record& r) {
    if (!r.ok) {
      std::cerr << "gosc: record failed: "
                << (r.data.contains("message") ? r.data["message"].get<std::string>() : std::string("unknown error"))
                << '\n';
    }
    writer.write(r);
  });
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  std::vector<std::string> args(argv, argv + argc);
  std::ostringstream echo;
  for (std::size_t i = 0; i < args.size(); ++i) echo << (i ? " " : "") << args[i];

  CLI::App app{"High-precision spectra of the harmonic oscillator with a Gaussian perturbation.\n"
               "Precision: --digits, else $" + std::string(kDigitsEnv) + ", else the command default."};
  app.set_version_flag("--version", kVersion);
  app.require_subcommand(1);

  std::optional<int> digits;
  Output out;
  int jobs = 0;

  // sweep
  SweepRequest sweep;
  std::vector<std::string> sweep_methods{"RR", "PT"};
  auto* cmd_sw = app.add_subcommand("sweep", "E_n(lambda) on a uniform grid (inclusive endpoints).\n" +
                                                 schema_note(sweep_columns()) +
                                                 "\nkind=guide rows give the +-|lambda_EP| guide positions.");
  cmd_sw->add_option("--lmin", sweep.lambda_min, "Lowest lambda")->capture_default_str();
  cmd_sw->add_option("--lmax", sweep.lambda_max, "Highest lambda")->capture_default_str();
  cmd_sw->add_option("--steps", sweep.steps, "Number of grid points")->capture_default_str();
  cmd_sw->add_option("--states", sweep.states, "State indices n")->delimiter(',')->capture_default_str();
  cmd_sw->add_option("--methods", sweep_methods, "Subset of RR,RPM,PT")->delimiter(',')->capture_default_str();
  cmd_sw->add_option("--target", sweep.target_digits, "RR convergence target in digits (default digits/2)");
  cmd_sw->add_flag("!--no-guides", sweep.guides, "Skip the exceptional-point guide positions");
  cmd_sw->add_option("--digits", digits, "Working precision (default 30)");
  cmd_sw->add_option("--jobs", jobs, "Worker threads (default: all cores)");
  add_output_options(cmd_sw, out);

  // critical
  CriticalRequest critical;
  std::string critical_method = "both";
  auto* cmd_cr = app.add_subcommand("critical", "Critical coupling lambda_n^c where E_n = 0.\n" +
                                                    schema_note(critical_columns()) +
                                                    "\n--heroic extends the RPM ladder to D = 380 (many hours, "
                                                    "use --digits 110 or more).");
  cmd_cr->add_option("--n", critical.n, "State index")->capture_default_str();
  cmd_cr->add_option("--method", critical_method, "RR, RPM, both or PT")->capture_default_str();
  cmd_cr->add_flag("--heroic", critical.heroic, "Long ladder aimed at ~100 digits");
  cmd_cr->add_option("--digits", digits, "Working precision (default 50)");
  add_output_options(cmd_cr, out);

  // eps
  EpsRequest eps;
  std::string sector = "even", box = "-4,0,0,4";
  auto* cmd_ep = app.add_subcommand("eps", "Exceptional points inside a complex-lambda box.\n" +
                                               schema_note(eps_columns()) +
                                               "\nEach EP is reported once as re +- im i (conjugates merged).");
  cmd_ep->add_option("--sector", sector, "even or odd")->check(CLI::IsMember({"even", "odd"}))->capture_default_str();
  cmd_ep->add_option("--box", box, "re0,re1,im0,im1")->capture_default_str();
  cmd_ep->add_option("--seed-D", eps.seed_D, "Variational size used for the discriminant seeds")->capture_default_str();
  cmd_ep->add_option("--ladder", eps.ladder, "Hankel D ladder")->delimiter(',')->capture_default_str();
  cmd_ep->add_option("--digits", digits, "Working precision (default 50)");
  cmd_ep->add_option("--jobs", jobs, "Worker threads (default: all cores)");
  add_output_options(cmd_ep, out);

  // hft
  HftRequest hft;
  auto* cmd_hf = app.add_subcommand("hft", "Hellmann-Feynman check: finite-difference dE/dlambda vs <exp(-x^2)>.\n" +
                                               schema_note(hft_columns()));
  cmd_hf->add_option("--n", hft.n, "State index")->capture_default_str();
  cmd_hf->add_option("--lambda", hft.lambda, "Coupling")->capture_default_str();
  cmd_hf->add_option("--step", hft.h, "Finite-difference step h")->capture_default_str();
  cmd_hf->add_option("--D", hft.D, "Variational basis size")->capture_default_str();
  cmd_hf->add_option("--digits", digits, "Working precision (default 30)");
  add_output_options(cmd_hf, out);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  }

  Metadata meta{echo.str(), 0, utc_timestamp()};
  try {
    if (cmd_sw->parsed()) {
      sweep.methods.clear();
      for (const auto& m : sweep_methods) sweep.methods.push_back(parse_method(m));
      sweep.digits = meta.digits = resolve_digits(digits, kDefaultSweepDigits);
      sweep.jobs = jobs;
      return emit(out, sweep_columns(), meta, [&](const Sink& s) { return cmd_sweep(sweep, s); });
    }
    if (cmd_cr->parsed()) {
      critical.method = parse_critical_method(critical_method);
      critical.digits = meta.digits = resolve_digits(digits, kDefaultSolverDigits);
      return emit(out, critical_columns(), meta, [&](const Sink& s) { return cmd_critical(critical, s); });
    }
    if (cmd_ep->parsed()) {
      eps.digits = meta.digits = resolve_digits(digits, kDefaultSolverDigits);
      eps.sector = parse_parity(sector);
      eps.box = parse_box(box, PrecisionCtx(eps.digits));
      eps.jobs = jobs;
      return emit(out, eps_columns(), meta, [&](const Sink& s) { return cmd_eps(eps, s); });
    }
    if (cmd_hf->parsed()) {
      hft.digits = meta.digits = resolve_digits(digits, kDefaultHftDigits);
      return emit(out, hft_columns(), meta, [&](const Sink& s) { return cmd_hft(hft, s); });
    }
  } catch (const gosc::InvalidInput& e) {
    std::cerr << "gosc: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "gosc: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
