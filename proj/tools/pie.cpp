#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <sstream>

#include "pie/document.hpp"
#include "pie/error.hpp"
#include "pie/interpolation.hpp"
#include "pie/preprocess.hpp"

namespace {

constexpr int kOk = 0;
constexpr int kFailed = 1;
constexpr int kUsage = 2;

// Thrown for input problems: bad files, parse errors, bad options.
struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::string read_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw UsageError("cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

pie::Pipeline pipeline(const std::string& name) {
  if (name.empty()) return pie::Pipeline::None;
  if (name == "c6") return pie::Pipeline::C6;
  if (name == "d6") return pie::Pipeline::D6;
  throw UsageError("unknown pipeline " + name);
}

struct Common {
  std::string doc;
  int timeout_ms = 0;
  pie::LoadedDocument loaded;

  pie::Options options() const {
    pie::Options o = pie::resolve_options(pie::system_defaults(), {}, {});
    if (timeout_ms > 0) o.timeout = std::chrono::milliseconds(timeout_ms);
    return o;
  }
};

// Reads `src`, with the macros of --doc if given. Parse errors become usage errors.
pie::Formula read_input(Common& c, const std::string& src) {
  try {
    if (!c.doc.empty()) c.loaded = pie::load_document(read_file(c.doc));
    return pie::parse_with_macros(c.loaded.macros, src);
  } catch (const pie::SyntaxError& e) {
    throw UsageError(e.what());
  } catch (const pie::ArityError& e) {
    throw UsageError(e.what());
  } catch (const pie::MacroError& e) {
    throw UsageError(e.what());
  }
}

pie::Formula expanded(Common& c, const std::string& src, pie::MacroContext& mctx) {
  pie::Formula f = read_input(c, src);
  return pie::expand(c.loaded.macros, f, mctx);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"pie: second-order elimination, interpolation and literate documents"};
  app.require_subcommand(1);
  Common common;
  std::string formula;
  int status = kOk;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--doc", common.doc, "load macro definitions from a document")->check(CLI::ExistingFile);
    sub->add_option("--timeout", common.timeout_ms, "reasoner timeout in milliseconds");
  };

  std::string in_file, out_file;
  bool body_only = false;
  auto* process = app.add_subcommand("process", "process a document to LaTeX");
  process->add_option("file", in_file, "input document")->required();
  process->add_option("-o,--output", out_file, "output file (default: standard output)");
  process->add_flag("--body-only", body_only, "omit the LaTeX preamble");

  auto* expand = app.add_subcommand("expand", "expand macros in a formula");
  expand->add_option("formula", formula)->required();
  add_common(expand);

  std::string pre, simp;
  auto* elim = app.add_subcommand("elim", "eliminate second-order quantifiers");
  elim->add_option("formula", formula)->required();
  elim->add_option("--pre", pre, "preprocessing pipeline (c6 or d6)");
  elim->add_option("--simp", simp, "result simplification pipeline (c6 or d6)");
  add_common(elim);

  std::string dot_file;
  bool no_simp_sides = false;
  auto* ipol = app.add_subcommand("ipol", "compute a Craig-Lyndon interpolant of an implication");
  ipol->add_option("formula", formula)->required();
  ipol->add_option("--dot", dot_file, "write the closed tableau as DOT");
  ipol->add_flag("--no-simp-sides", no_simp_sides, "do not simplify the two sides");
  add_common(ipol);

  bool unknown_ok = false;
  auto* valid = app.add_subcommand("valid", "check validity");
  valid->add_option("formula", formula)->required();
  valid->add_flag("--unknown-ok", unknown_ok, "exit 0 when the prover gives up");
  add_common(valid);

  auto* tptp = app.add_subcommand("tptp", "print a formula as a TPTP conjecture");
  tptp->add_option("formula", formula)->required();
  add_common(tptp);

  auto* dimacs = app.add_subcommand("dimacs", "print a propositional formula as DIMACS CNF");
  dimacs->add_option("formula", formula)->required();
  add_common(dimacs);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? kOk : kUsage;
  }

  try {
    pie::MacroContext mctx;
    if (*process) {
      pie::LoadedDocument d;
      try {
        d = pie::load_document(read_file(in_file));
      } catch (const pie::Error& e) {
        throw UsageError(in_file + ":" + e.what());
      }
      std::string body = pie::process_document(d);
      std::string text = body_only ? body : pie::standalone_latex(body);
      if (out_file.empty()) {
        std::cout << text;
      } else {
        std::ofstream out(out_file, std::ios::binary);
        if (!out) throw UsageError("cannot write " + out_file);
        out << text;
      }
    } else if (*expand) {
      std::cout << pie::print_formula(expanded(common, formula, mctx)) << "\n";
    } else if (*elim) {
      pie::Formula f = expanded(common, formula, mctx);
      pie::EliminationOptions eo = common.options().elimination();
      eo.pre = pipeline(pre);
      eo.simp_result = pipeline(simp);
      auto out = pie::eliminate(f, eo);
      if (out.ok()) {
        std::cout << pie::print_formula(out.result) << "\n";
      } else {
        std::cerr << "elimination failed: " << out.reason << "\n";
        status = kFailed;
      }
    } else if (*ipol) {
      pie::Formula f = expanded(common, formula, mctx);
      try {
        auto h = pie::interpolate(f, common.options().prover(), {!no_simp_sides});
        std::cout << pie::print_formula(h.formula) << "\n";
        if (!dot_file.empty()) {
          std::ofstream out(dot_file);
          if (!out) throw UsageError("cannot write " + dot_file);
          out << pie::emit_tableau_dot(h.proof);
        }
      } catch (const pie::InterpolationError& e) {
        std::cerr << "interpolation failed: " << e.what() << "\n";
        status = kFailed;
      }
    } else if (*valid) {
      pie::Formula f = expanded(common, formula, mctx);
      auto v = pie::validate(f, common.options().prover());
      if (std::holds_alternative<pie::Valid>(v)) {
        std::cout << "valid\n";
      } else if (const auto* nv = std::get_if<pie::NotValid>(&v)) {
        std::cout << "not valid\n" << pie::print_model(nv->model);
        status = kFailed;
      } else {
        std::cout << "failed to validate: " << std::get<pie::Failed>(v).reason << "\n";
        status = unknown_ok ? kOk : kFailed;
      }
    } else if (*tptp) {
      pie::Formula f = expanded(common, formula, mctx);
      std::cout << pie::emit_tptp("goal", pie::TptpRole::Conjecture, f) << "\n";
    } else if (*dimacs) {
      pie::Formula f = expanded(common, formula, mctx);
      auto out = pie::emit_dimacs(pie::clausify(f, pie::ClausifyMode::Definitional));
      for (const auto& [name, id] : out.atoms) std::cout << "c " << id << " " << name << "\n";
      std::cout << out.text;
    }
  } catch (const UsageError& e) {
    std::cerr << "pie: " << e.what() << "\n";
    return kUsage;
  } catch (const pie::FragmentError& e) {
    std::cerr << "pie: " << e.what() << "\n";
    return kUsage;
  } catch (const pie::Error& e) {
    std::cerr << "pie: " << e.what() << "\n";
    return kFailed;
  }
  return status;
}
