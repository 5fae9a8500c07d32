// Command-line front end: orthogonality tests, operator norms, symmetry
// falsifiers, theorem suites, and deterministic instance generation.
//
// Exit codes: 0 completed/pass (for falsify: witness found), 1 suite failure
// or route disagreement, 2 input error, 3 inconclusive (budget exhausted).

#include <cstdint>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "bj/bj.hpp"
#include "bj/json_io.hpp"
#include "bj/verify.hpp"

namespace {

using bj::io::json;

constexpr int kExitOk = 0;
constexpr int kExitFail = 1;
constexpr int kExitInput = 2;
constexpr int kExitInconclusive = 3;

std::string report_dir(const std::string& out_flag) {
  if (const char* env = std::getenv("BJ_REPORT_DIR"); env != nullptr && *env != '\0') return env;
  return out_flag;
}

void ensure_dir(const std::string& dir) {
  std::error_code ec;
  std::filesystem::create_directories(dir, ec);
  if (ec) throw bj::input_error("cannot create output directory: " + dir);
}

void write_profile_csv(const std::string& path, double bracket,
                       const std::function<double(double)>& f) {
  std::ofstream out(path);
  if (!out) throw bj::input_error("cannot write file: " + path);
  out << "lambda,norm\n" << std::setprecision(17);
  for (int i = 0; i <= 1000; ++i) {
    const double lam = -bracket + 2.0 * bracket * static_cast<double>(i) / 1000.0;
    out << lam << "," << f(lam) << "\n";
  }
}

bj::SpaceDescriptor space_from_flag(const std::string& text) {
  // Accept either inline JSON or the compact selector syntax.
  if (!text.empty() && text.front() == '{') return bj::io::space_from_json(json::parse(text));
  return bj::io::parse_space_selector(text);
}

struct Flags {
  std::string space, x, y, method = "both", cone, op, op2, direction, out = "reports";
  std::string domain, codomain, spaces;
  std::vector<std::string> tol_overrides;
  double eps = 0.0;
  bool eps_set = false, mutual = false, profile = false;
  int budget = 500, trials = 0, rank = 0;
  std::uint64_t seed = 7;
};

bj::Tolerances tolerances_from(const std::vector<std::string>& overrides) {
  bj::Tolerances tol;
  for (const auto& o : overrides) {
    const auto eq = o.find('=');
    if (eq == std::string::npos) throw bj::input_error("tolerance override must be name=value: " + o);
    tol.set(o.substr(0, eq), std::stod(o.substr(eq + 1)));
  }
  return tol;
}

int run(int argc, char** argv) {
  CLI::App app{"Birkhoff-James orthogonality toolkit"};
  app.require_subcommand(1);
  Flags fl;

  auto* orth = app.add_subcommand("orth", "vector-level Birkhoff-James orthogonality test");
  orth->add_option("--space", fl.space)->required();
  orth->add_option("--x", fl.x)->required();
  orth->add_option("--y", fl.y)->required();
  orth->add_option("--method", fl.method)->check(CLI::IsMember({"analytic", "numeric", "both"}));
  orth->add_option("--eps", fl.eps)->check(CLI::Range(0.0, 0.9999999));
  orth->add_option("--cone", fl.cone)->check(CLI::IsMember({"plus", "minus"}));
  orth->add_flag("--profile", fl.profile, "write profile-<hash>.csv of t -> ||x + t y||");
  orth->add_option("--out", fl.out);

  auto* cone = app.add_subcommand("cone", "one-sided cone membership test");
  cone->add_option("--space", fl.space)->required();
  cone->add_option("--x", fl.x)->required();
  cone->add_option("--y", fl.y)->required();
  cone->add_option("--eps", fl.eps)->check(CLI::Range(0.0, 0.9999999));
  cone->add_option("--cone", fl.cone)->required()->check(CLI::IsMember({"plus", "minus"}));

  auto* opnorm = app.add_subcommand("opnorm", "operator norm with exactness flag");
  opnorm->add_option("--op", fl.op)->required();

  auto* oporth = app.add_subcommand("oporth", "operator-level orthogonality test");
  oporth->add_option("--op", fl.op)->required();
  oporth->add_option("--op2", fl.op2)->required();
  oporth->add_option("--method", fl.method)->check(CLI::IsMember({"numeric", "mt", "both"}));
  oporth->add_flag("--profile", fl.profile, "write profile-<hash>.csv of t -> ||T + t A||");
  oporth->add_option("--out", fl.out);

  auto* cpoint = app.add_subcommand("classify-point", "point-level symmetry witness search");
  cpoint->add_option("--space", fl.space)->required();
  cpoint->add_option("--x", fl.x)->required();
  cpoint->add_option("--direction", fl.direction)->required()->check(CLI::IsMember({"left", "right"}));
  cpoint->add_option("--budget", fl.budget);
  cpoint->add_option("--seed", fl.seed);

  auto* cop = app.add_subcommand("classify-op", "structural left-symmetry classifier");
  cop->add_option("--op", fl.op)->required();
  cop->add_option("--budget", fl.budget);
  cop->add_option("--seed", fl.seed);

  auto* falsify = app.add_subcommand("falsify", "operator symmetry falsifier");
  falsify->add_option("direction", fl.direction)->required()->check(CLI::IsMember({"left", "right"}));
  falsify->add_option("--op", fl.op)->required();
  falsify->add_option("--budget", fl.budget);
  falsify->add_option("--seed", fl.seed);
  falsify->add_option("--out", fl.out);

  auto* verify = app.add_subcommand("verify", "run a theorem verification suite");
  verify->add_option("id", fl.direction)->required();
  verify->add_option("--trials", fl.trials);
  verify->add_option("--seed", fl.seed);
  verify->add_option("--budget", fl.budget);
  verify->add_option("--spaces", fl.spaces,
                     "comma-separated selectors; use dom->cod pairs for operator families");
  verify->add_option("--out", fl.out);

  auto* generate = app.add_subcommand("generate", "deterministic instance files");
  generate->add_option("kind", fl.direction)->required()->check(CLI::IsMember({"operator", "vector-pair"}));
  generate->add_option("--domain", fl.domain);
  generate->add_option("--codomain", fl.codomain);
  generate->add_option("--space", fl.space);
  generate->add_option("--rank", fl.rank);
  generate->add_option("--seed", fl.seed);
  generate->add_flag("--mutual", fl.mutual);
  generate->add_flag("--profile", fl.profile);
  generate->add_option("--out", fl.out);

  for (auto* sub : app.get_subcommands({}))
    sub->add_option("--tol", fl.tol_overrides, "named tolerance override, name=value (repeatable)");

  CLI11_PARSE(app, argc, argv);
  if (fl.budget <= 0 || fl.trials < 0 || fl.rank < 0) {
    std::cerr << "input error: counts must be positive\n";
    return kExitInput;
  }
  const auto tol = tolerances_from(fl.tol_overrides);

  if (orth->parsed()) {
    const auto s = space_from_flag(fl.space);
    const auto x = bj::io::parse_csv_numbers(fl.x);
    const auto y = bj::io::parse_csv_numbers(fl.y);
    if (!fl.cone.empty()) {
      const auto sign = fl.cone == "plus" ? bj::ConeSign::plus : bj::ConeSign::minus;
      const bool inside = bj::in_cone(s, x, y, sign, fl.eps, tol);
      std::cout << json{{"in_cone", inside}, {"sign", fl.cone}, {"eps", fl.eps}}.dump(2) << "\n";
      return kExitOk;
    }
    const auto method = fl.method == "analytic" ? bj::OrthMethod::analytic
                        : fl.method == "numeric" ? bj::OrthMethod::numeric
                                                 : bj::OrthMethod::both;
    try {
      const auto v = bj::bj_orthogonal(s, x, y, method, tol);
      std::cout << bj::io::to_json(v).dump(2) << "\n";
    } catch (const bj::orthogonality_disagreement& e) {
      std::cerr << "inconsistency: " << e.what() << "\n";
      return kExitFail;
    }
    if (fl.profile) {
      const double nx = bj::norm(s, x), ny = bj::norm(s, y);
      if (ny > 0.0 && nx > 0.0) {
        const std::string dir = report_dir(fl.out);
        ensure_dir(dir);
        const auto path = dir + "/profile-" + bj::io::content_hash(fl.x + "|" + fl.y) + ".csv";
        write_profile_csv(path, 2.0 * nx / ny, [&](double lam) {
          return bj::norm(s, bj::detail::add_scaled(x, lam, y));
        });
        std::cerr << "profile written to " << path << "\n";
      }
    }
    return kExitOk;
  }

  if (cone->parsed()) {
    const auto s = space_from_flag(fl.space);
    const auto x = bj::io::parse_csv_numbers(fl.x);
    const auto y = bj::io::parse_csv_numbers(fl.y);
    const auto sign = fl.cone == "plus" ? bj::ConeSign::plus : bj::ConeSign::minus;
    const bool inside = bj::in_cone(s, x, y, sign, fl.eps, tol);
    std::cout << json{{"in_cone", inside}, {"sign", fl.cone}, {"eps", fl.eps}}.dump(2) << "\n";
    return kExitOk;
  }

  if (opnorm->parsed()) {
    const auto T = bj::io::operator_from_json(bj::io::read_json_file(fl.op));
    const auto n = bj::operator_norm(T, tol);
    std::cout << json{{"value", n.value}, {"exactness", bj::to_string(n.exactness)}}.dump(2) << "\n";
    return kExitOk;
  }

  if (oporth->parsed()) {
    const auto T = bj::io::operator_from_json(bj::io::read_json_file(fl.op));
    const auto A = bj::io::operator_from_json(bj::io::read_json_file(fl.op2));
    json out;
    int code = kExitOk;
    if (fl.method == "numeric") {
      out = bj::io::to_json(bj::op_bj_orthogonal_numeric(T, A, tol));
    } else if (fl.method == "mt") {
      out = bj::io::to_json(bj::op_bj_orthogonal_via_mt(T, A, tol));
    } else {
      const auto direct = bj::op_bj_orthogonal_numeric(T, A, tol);
      const auto mt = bj::op_bj_orthogonal_via_mt(T, A, tol);
      const bool agree = direct.orthogonal == mt.orthogonal;
      out = json{{"numeric", bj::io::to_json(direct)}, {"mt", bj::io::to_json(mt)}, {"agree", agree}};
      if (!agree) code = kExitFail;
    }
    std::cout << out.dump(2) << "\n";
    if (fl.profile) {
      const double nT = bj::operator_norm(T, tol).value;
      const double nA = bj::operator_norm(A, tol).value;
      if (nT > 0.0 && nA > 0.0) {
        const std::string dir = report_dir(fl.out);
        ensure_dir(dir);
        const auto path = dir + "/profile-" + bj::io::content_hash(bj::io::to_json(T).dump() + bj::io::to_json(A).dump()) + ".csv";
        bj::OperatorNormEvaluator eval(tol);
        write_profile_csv(path, 2.0 * nT / nA,
                          [&](double lam) { return eval(bj::add_scaled(T, lam, A)); });
        std::cerr << "profile written to " << path << "\n";
      }
    }
    return code;
  }

  if (cpoint->parsed()) {
    const auto s = space_from_flag(fl.space);
    const auto x = bj::io::parse_csv_numbers(fl.x);
    const auto rep = fl.direction == "left"
                         ? bj::point_left_symmetric(s, x, fl.budget, fl.seed, tol)
                         : bj::point_right_symmetric(s, x, fl.budget, fl.seed, tol);
    std::cout << bj::io::to_json(rep).dump(2) << "\n";
    return kExitOk;
  }

  if (cop->parsed()) {
    const auto T = bj::io::operator_from_json(bj::io::read_json_file(fl.op));
    bj::ClassifierVerdict verdict;
    if (T.domain.kind() == bj::SpaceKind::lp)
      verdict = bj::classify_left_symmetric_from_l1(T, fl.budget, fl.seed, tol);
    else
      verdict = bj::classify_left_symmetric_direct_sum(T, fl.budget, fl.seed, tol);
    std::cout << bj::io::to_json(verdict).dump(2) << "\n";
    return kExitOk;
  }

  if (falsify->parsed()) {
    const auto file_text = bj::io::read_json_file(fl.op).dump();
    const auto T = bj::io::operator_from_json(json::parse(file_text));
    const auto rep = fl.direction == "left"
                         ? bj::falsify_left_symmetric_op(T, fl.budget, fl.seed, tol)
                         : bj::falsify_right_symmetric_op(T, fl.budget, fl.seed, tol);
    json out = bj::io::to_json(rep);
    out["config"] = {{"budget", fl.budget}, {"seed", fl.seed}, {"direction", fl.direction}};
    out["tolerances"] = tol.as_map();
    const std::string dir = report_dir(fl.out);
    ensure_dir(dir);
    const auto path = dir + "/falsify-" + bj::io::content_hash(file_text) + ".json";
    bj::io::write_json_file(path, out);
    std::cout << out.dump(2) << "\n";
    std::cerr << "report written to " << path << "\n";
    return rep.verdict == bj::SymmetryVerdict::not_symmetric ? kExitOk : kExitInconclusive;
  }

  if (verify->parsed()) {
    bj::TheoremConfig cfg;
    cfg.seed = fl.seed;
    cfg.trials = fl.trials;
    cfg.budget = fl.budget;
    cfg.tol = tol;
    if (!fl.spaces.empty()) {
      std::stringstream ss(fl.spaces);
      std::string tok;
      while (std::getline(ss, tok, ',')) {
        const auto arrow = tok.find("->");
        if (arrow == std::string::npos) {
          cfg.vector_spaces.push_back(bj::io::parse_space_selector(tok));
        } else {
          cfg.operator_families.emplace_back(bj::io::parse_space_selector(tok.substr(0, arrow)),
                                             bj::io::parse_space_selector(tok.substr(arrow + 2)));
        }
      }
    }
    const auto rep = bj::verify_theorem(fl.direction, cfg);
    const auto out = bj::report_to_json(rep, cfg);
    const std::string dir = report_dir(fl.out);
    ensure_dir(dir);
    const auto path = dir + "/verify-" + rep.theorem + "-" + bj::io::content_hash(out.at("config").dump()) + ".json";
    bj::io::write_json_file(path, out);
    std::cout << out.dump(2) << "\n";
    std::cerr << "report written to " << path << "\n";
    if (rep.failed > 0) return kExitFail;
    if (rep.inconclusive > 0) return kExitInconclusive;
    return kExitOk;
  }

  if (generate->parsed()) {
    const std::string dir = report_dir(fl.out);
    ensure_dir(dir);
    bj::Rng rng(fl.seed);
    if (fl.direction == "operator") {
      if (fl.domain.empty() || fl.codomain.empty())
        throw bj::input_error("generate operator needs --domain and --codomain");
      const auto dom = bj::io::parse_space_selector(fl.domain);
      const auto cod = bj::io::parse_space_selector(fl.codomain);
      std::optional<bj::LinearOperator> T;
      if (fl.rank == 1) {
        auto f = rng.normal_vector(dom.dim());
        const double nf = bj::dual_norm(dom, f);
        for (auto& c : f) c /= nf;
        auto w = rng.normal_vector(cod.dim());
        const double nw = bj::norm(cod, w);
        for (auto& c : w) c /= nw;
        T = bj::rank_one(bj::Functional(dom, f), bj::VectorInSpace(cod, w));
      } else {
        std::vector<double> m(static_cast<std::size_t>(dom.dim() * cod.dim()));
        for (auto& v : m) v = rng.normal();
        T = bj::LinearOperator(dom, cod, std::move(m));
      }
      auto out = bj::io::to_json(*T);
      out["seed"] = fl.seed;
      out["rank"] = fl.rank;
      const auto path = dir + "/operator-" + bj::io::content_hash(out.dump()) + ".json";
      bj::io::write_json_file(path, out);
      std::cout << path << "\n";
      return kExitOk;
    }
    if (fl.space.empty()) throw bj::input_error("generate vector-pair needs --space");
    const auto s = space_from_flag(fl.space);
    json out{{"space", bj::io::to_json(s)}};
    std::vector<double> x, y;
    if (fl.mutual) {
      const auto [vx, vy] = bj::mutually_orthogonal_pair(s, fl.seed, tol);
      x = vx.coords;
      y = vy.coords;
      // Both relations re-checked before the pair is persisted.
      if (!bj::bj_orthogonal(s, x, y, bj::OrthMethod::both, tol).orthogonal ||
          !bj::bj_orthogonal(s, y, x, bj::OrthMethod::both, tol).orthogonal)
        throw bj::numeric_failure("generated pair failed re-verification");
      out["mutual"] = true;
    } else {
      x = rng.normal_vector(s.dim());
      y = rng.normal_vector(s.dim());
      for (auto* v : {&x, &y}) {
        const double n = bj::norm(s, *v);
        for (auto& c : *v) c /= n;
      }
      out["mutual"] = false;
    }
    out["x"] = x;
    out["y"] = y;
    out["seed"] = fl.seed;
    const auto path = dir + "/vector-pair-" + bj::io::content_hash(out.dump()) + ".json";
    bj::io::write_json_file(path, out);
    std::cout << path << "\n";
    if (fl.profile) {
      const double nx = bj::norm(s, x), ny = bj::norm(s, y);
      const auto ppath = dir + "/profile-" + bj::io::content_hash(out.dump()) + ".csv";
      write_profile_csv(ppath, 2.0 * nx / ny,
                        [&](double lam) { return bj::norm(s, bj::detail::add_scaled(x, lam, y)); });
      std::cerr << "profile written to " << ppath << "\n";
    }
    return kExitOk;
  }

  return kExitInput;
}

}  // namespace

int main(int argc, char** argv) {
  try {
    return run(argc, argv);
  } catch (const bj::input_error& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return kExitInput;
  } catch (const bj::precondition_error& e) {
    std::cerr << "precondition: " << e.what() << "\n";
    return kExitInput;
  } catch (const bj::unsupported_space_error& e) {
    std::cerr << "unsupported space: " << e.what() << "\n";
    return kExitInput;
  } catch (const bj::error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitFail;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitInput;
  }
}
