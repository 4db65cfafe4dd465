#pragma once

#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "matrix_io.hpp"
#include "report.hpp"

namespace polysmith {

enum ExitCode : int {
  kExitEquivalent = 0,
  kExitNotEquivalent = 1,
  kExitUnsupported = 2,
  kExitUsage = 3,
  kExitInternal = 4,
};

inline int exit_code(Verdict v) {
  switch (v) {
    case Verdict::Equivalent: return kExitEquivalent;
    case Verdict::NotEquivalent: return kExitNotEquivalent;
    case Verdict::UndecidableShape: return kExitUnsupported;
  }
  return kExitInternal;
}

inline int exit_code(FailureKind k) {
  return k == FailureKind::UnsupportedShape ? kExitUnsupported : kExitInternal;
}

inline int exit_code(const ReductionTrace& t) {
  if (t.result) return kExitEquivalent;
  if (t.failure) return exit_code(*t.failure);
  return kExitNotEquivalent;
}

inline PolyMatrix load_matrix_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw UsageError("cannot open '" + path + "'");
  std::stringstream ss;
  ss << in.rdbuf();
  try {
    return parse_matrix(ss.str());
  } catch (const ParseError& e) {
    throw ParseError(path + ": " + e.what(), e.line(), e.column());
  }
}

inline std::vector<LinearForm> parse_hints(const std::vector<std::string>& hints, const VarSet& vs) {
  std::vector<LinearForm> out;
  for (auto& h : hints) out.push_back(LinearForm::from_polynomial(parse_polynomial(h, vs)));
  return out;
}

// argv without the program name.
inline int run_command(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Equivalence of multivariate polynomial matrices to their Smith forms", "polysmith"};
  app.require_subcommand(1);
  bool json = false;
  app.add_flag("--json", json, "Machine-readable output");

  std::string file, order = "lex", u_file, v_file, s_file;
  std::vector<std::string> hints;
  unsigned bound = 3;
  bool factored = false;

  auto* check = app.add_subcommand("check", "Decide equivalence to the Smith form");
  check->add_option("file", file, "Matrix file")->required();
  check->add_option("--g", hints, "Linear-form factor hint (repeatable)");
  check->add_option("--order", order, "Monomial order for the Groebner tests")->check(CLI::IsMember({"lex", "degrevlex"}));

  auto* form = app.add_subcommand("form", "Print the Smith form computed from determinantal divisors");
  form->add_option("file", file, "Matrix file")->required();

  auto* reduce = app.add_subcommand("reduce", "Construct unimodular witnesses U, V with U*F*V = S");
  reduce->add_option("file", file, "Matrix file")->required();
  reduce->add_option("--g", hints, "Linear-form factor hint (repeatable)");
  reduce->add_option("--degree-bound", bound, "Degree bound of the completion search")->check(CLI::Range(0u, 12u));
  reduce->add_option("--order", order, "Monomial order for the Groebner tests")->check(CLI::IsMember({"lex", "degrevlex"}));

  auto* verify = app.add_subcommand("verify", "Check U*F*V = S with U, V unimodular");
  verify->add_option("file", file, "Matrix file for F")->required();
  verify->add_option("--u", u_file, "Matrix file for U")->required();
  verify->add_option("--v", v_file, "Matrix file for V")->required();
  verify->add_option("--s", s_file, "Matrix file for S")->required();
  verify->add_flag("--factored", factored, "Check F = U*S*V instead");

  try {
    std::vector<std::string> rev(args.rbegin(), args.rend());
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp& e) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n";
    return kExitUsage;
  }

  auto emit = [&](const Json& doc) { out << (json ? doc.dump(2) + "\n" : render_human(doc)); };
  MonomialOrder ord = order == "degrevlex" ? MonomialOrder::degrevlex() : MonomialOrder::lex();

  try {
    PolyMatrix f = load_matrix_file(file);
    const VarSet& vs = f.varset();
    if (check->parsed()) {
      EquivalenceReport rep = check_equivalence(f, parse_hints(hints, vs), ord);
      emit(to_json(rep, vs));
      return exit_code(rep.verdict);
    }
    if (form->parsed()) {
      emit(to_json(theoretical_smith(f), vs));
      return kExitEquivalent;
    }
    if (reduce->parsed()) {
      EquivalenceReport rep = check_equivalence(f, parse_hints(hints, vs), ord);
      ReductionTrace tr;
      if (rep.verdict == Verdict::Equivalent) {
        tr = reduce_to_smith(f, rep.shape, bound);
      } else if (rep.verdict == Verdict::UndecidableShape) {
        tr.failure = FailureKind::UnsupportedShape;
        tr.detail = "determinant shape not covered: " + rep.shape.reason;
      } else {
        tr.detail = "matrix is not equivalent to its Smith form; no witnesses exist";
      }
      emit(to_json(tr, vs));
      return exit_code(tr);
    }
    PolyMatrix u = load_matrix_file(u_file), v = load_matrix_file(v_file), s = load_matrix_file(s_file);
    if (!(u.varset() == vs && v.varset() == vs && s.varset() == vs))
      throw UsageError("witness files must declare the same variables as the input");
    bool ok = verify_witness(f, u, v, s, factored);
    emit(verification_json(ok, vs));
    return ok ? kExitEquivalent : kExitNotEquivalent;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const UsageError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const IndependenceError& e) {
    err << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const ReductionFailure& e) {
    err << "reduction failed: " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return kExitInternal;
  }
}

}  // namespace polysmith
