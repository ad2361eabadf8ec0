#pragma once

// Command-line front end; run() is separate from main so tests can drive it
// with string streams.

#include <fstream>
#include <iostream>
#include <iterator>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "isoclass/census.hpp"
#include "isoclass/classify.hpp"
#include "isoclass/factor.hpp"
#include "isoclass/io.hpp"

namespace isoclass::cli {

using io::json;

enum ExitCode { kOk = 0, kUsage = 1, kDomain = 2 };

// A path, "-" for standard input, or inline JSON starting with '{'.
inline json load_json(const std::string& arg, std::istream& in) {
  std::string text;
  if (!arg.empty() && arg.front() == '{') {
    text = arg;
  } else if (arg == "-") {
    text.assign(std::istreambuf_iterator<char>(in), {});
  } else {
    std::ifstream f(arg);
    require(f.good(), ErrorCode::Parse, "cannot read " + arg);
    text.assign(std::istreambuf_iterator<char>(f), {});
  }
  json j = json::parse(text, nullptr, false);
  require(!j.is_discarded(), ErrorCode::Parse, "malformed JSON in " + (arg.size() > 40 ? arg.substr(0, 40) : arg));
  return j;
}

inline int emit_error(std::ostream& err, const Error& e) {
  err << io::dump(io::with_schema(io::error_json(e))) << '\n';
  return e.code() == ErrorCode::Parse ? kUsage : kDomain;
}

inline int run(int argc, const char* const* argv, std::ostream& out, std::ostream& err, std::istream& in = std::cin) {
  CLI::App app{"Conjugacy and z-class classification of isometries over odd prime fields", "isoclass"};
  app.require_subcommand(1, 1);
  std::optional<json> result;
  std::function<void()> action;

  std::string a_path, b_path;

  auto* factor_cmd = app.add_subcommand("factor", "Factor a polynomial over F_p");
  factor_cmd->add_option("poly", a_path, "Polynomial JSON {\"p\", \"poly\"}")->required();
  factor_cmd->callback([&] {
    action = [&] {
      Polynomial f = io::polynomial_from_json(load_json(a_path, in));
      result = io::factorization_json(f, factor(f));
    };
  });

  std::string mode = "conjugacy";
  bool detail = false;
  auto* inv_cmd = app.add_subcommand("invariants", "Conjugacy or z-class invariant of an isometry");
  inv_cmd->add_option("isometry", a_path, "Isometry JSON")->required();
  inv_cmd->add_option("--mode", mode, "conjugacy or zclass")->check(CLI::IsMember({"conjugacy", "zclass"}));
  inv_cmd->add_flag("--detail", detail, "Include decomposition and hermitian reports");
  inv_cmd->callback([&] {
    action = [&] {
      Analysis a = analyze(io::isometry_from_json(load_json(a_path, in)));
      json j = mode == "zclass" ? io::zclass_invariant_json(zclass_invariant(a))
                                : io::conjugacy_invariant_json(conjugacy_invariant(a));
      if (detail) {
        j["decomposition"] = io::decomposition_json(a);
        j["hermitian"] = io::hermitian_json(a);
      }
      result = j;
    };
  });

  auto pair_command = [&](const char* name, const char* help, auto body) {
    auto* cmd = app.add_subcommand(name, help);
    cmd->add_option("first", a_path, "Isometry JSON")->required();
    cmd->add_option("second", b_path, "Isometry JSON")->required();
    cmd->callback([&, body] {
      action = [&, body] {
        Isometry s = io::isometry_from_json(load_json(a_path, in));
        Isometry t = io::isometry_from_json(load_json(b_path, in));
        result = body(s, t);
      };
    });
  };
  pair_command("conjugate", "Decide conjugacy", [](const Isometry& s, const Isometry& t) {
    return json{{"conjugate", are_conjugate(s, t)}};
  });
  pair_command("witness", "Isometry C with C S C^-1 = T", [](const Isometry& s, const Isometry& t) {
    return io::isometry_json(conjugating_witness(s, t));
  });
  pair_command("zclass", "Decide z-equivalence", [](const Isometry& s, const Isometry& t) {
    return json{{"same_zclass", same_zclass(s, t)}};
  });

  auto* jordan_cmd = app.add_subcommand("jordan", "Jordan decomposition T = T_s T_u");
  jordan_cmd->add_option("isometry", a_path, "Isometry JSON")->required();
  jordan_cmd->callback([&] {
    action = [&] {
      JordanDecomposition jd = jordan_decompose(io::isometry_from_json(load_json(a_path, in)));
      result = json{{"semisimple", io::matrix_json(jd.semisimple.matrix())},
                    {"unipotent", io::matrix_json(jd.unipotent.matrix())},
                    {"semisimple_poly", io::coeffs_json(jd.semisimple_poly)},
                    {"unipotent_poly", io::coeffs_json(jd.unipotent_poly)}};
    };
  });

  auto* real_cmd = app.add_subcommand("check-real", "Is T conjugate to its inverse");
  real_cmd->add_option("isometry", a_path, "Isometry JSON")->required();
  real_cmd->callback([&] {
    action = [&] { result = json{{"real", is_real(io::isometry_from_json(load_json(a_path, in)))}}; };
  });

  std::string census_field = "fp", census_kind = "symmetric", census_what = "zclass", census_disc = "square";
  std::size_t census_n = 2;
  residue_t census_p = 3;
  std::string signature;
  int symplectic = 0;
  unsigned jobs = 1;
  std::size_t limit = SIZE_MAX;
  bool no_crosscheck = false;
  auto* census_cmd = app.add_subcommand("census", "Enumerate and count classes");
  census_cmd->add_option("--field", census_field, "fp or real")->check(CLI::IsMember({"fp", "real"}));
  census_cmd->add_option("--n", census_n, "Dimension (fp)");
  census_cmd->add_option("--p", census_p, "Prime (fp)");
  census_cmd->add_option("--kind", census_kind, "symmetric or skew")->check(CLI::IsMember({"symmetric", "skew"}));
  census_cmd->add_option("--disc", census_disc, "Gram discriminant class: square or nonsquare")
      ->check(CLI::IsMember({"square", "nonsquare"}));
  census_cmd->add_option("--what", census_what, "zclass, conjugacy or unipotent")
      ->check(CLI::IsMember({"zclass", "conjugacy", "unipotent"}));
  auto* sig_opt = census_cmd->add_option("--signature", signature, "P,Q for O(P,Q) (real)");
  census_cmd->add_option("--symplectic", symplectic, "2N for Sp(2N, R) (real)")->excludes(sig_opt);
  census_cmd->add_option("--jobs", jobs, "Threads for the brute-force cross-check")->check(CLI::PositiveNumber);
  census_cmd->add_option("--limit", limit, "Maximum number of items listed");
  census_cmd->add_flag("--no-crosscheck", no_crosscheck, "Skip the brute-force comparison");
  census_cmd->callback([&] {
    action = [&] {
      if (census_field == "real") {
        RealCensusParams r;
        if (symplectic) {
          r.symplectic = true;
          r.dim = symplectic;
        } else {
          require(!signature.empty(), ErrorCode::Parse, "real census needs --signature P,Q or --symplectic 2N");
          std::istringstream ss(signature);
          char comma = 0;
          require(static_cast<bool>(ss >> r.p >> comma >> r.q) && comma == ',' && ss.peek() == EOF, ErrorCode::Parse,
                  "signature must look like P,Q");
        }
        result = io::real_census_json(zclass_census_real(r), limit);
        return;
      }
      CensusParams c{census_n, census_p, census_kind == "skew" ? Kind::Skew : Kind::Symmetric,
                     census_disc == "nonsquare" ? DiscClass::NonSquare : DiscClass::Square};
      CensusOptions opt;
      opt.crosscheck = !no_crosscheck;
      opt.jobs = jobs;
      if (census_what == "zclass")
        result = io::census_json(zclass_census_fp(c, opt), limit);
      else if (census_what == "unipotent")
        result = io::census_json(unipotent_census_fp(c, opt), limit);
      else
        result = io::census_json(conjugacy_census_fp(c, opt), limit);
    };
  });

  bool dump_elements = false;
  auto* enum_cmd = app.add_subcommand("enumerate", "Enumerate the isometry group of a space");
  enum_cmd->add_option("space", a_path, "Space JSON")->required();
  enum_cmd->add_flag("--dump", dump_elements, "List every element");
  enum_cmd->callback([&] {
    action = [&] {
      GroupTable g = enumerate_group(io::space_from_json(load_json(a_path, in)));
      json j{{"order", g.size()}, {"generators", g.generators().size()}};
      if (dump_elements) {
        json els = json::array();
        for (const auto& m : g.elements()) els.push_back(io::matrix_json(m));
        j["elements"] = els;
      }
      result = j;
    };
  });

  std::uint64_t seed = 0;
  auto* random_cmd = app.add_subcommand("random", "Random isometry of a space (test input generator)");
  random_cmd->add_option("space", a_path, "Space JSON")->required();
  random_cmd->add_option("--seed", seed, "Generator seed");
  random_cmd->callback([&] {
    action = [&] { result = io::isometry_json(random_isometry(io::space_from_json(load_json(a_path, in)), seed)); };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) {
      out << app.help();
      return kOk;
    }
    err << io::dump(io::with_schema({{"error", "usage_error"}, {"message", e.what()}})) << '\n';
    return kUsage;
  }
  try {
    action();
  } catch (const Error& e) {
    return emit_error(err, e);
  } catch (const std::exception& e) {
    err << io::dump(io::with_schema({{"error", "internal"}, {"message", e.what()}})) << '\n';
    return kDomain;
  }
  out << io::dump(io::with_schema(*result)) << '\n';
  return kOk;
}

}  // namespace isoclass::cli
