// wreathctl: build, verify and report sofic approximations of wreath products.
//
// Exit codes: 0 pass, 1 usage or malformed input, 2 certificate failure,
// 3 oracle unavailable (carrier above the expansion cap).

#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <string>
#include <variant>

#include <CLI11.hpp>
#include <json.hpp>

#include <wreath/wreath.hpp>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace wreath;

namespace {

enum ExitCode : int { kPass = 0, kUsage = 1, kCertificate = 2, kOracle = 3 };

/// Thrown to leave a subcommand with a specific exit code.
struct Exit {
  int code;
  std::string message;
};

json read_json(fs::path const& path) {
  std::ifstream in(path);
  if (!in) {
    throw FormatError("cannot open " + path.string());
  }
  try {
    return json::parse(in);
  } catch (json::parse_error const& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

void write_json(fs::path const& path, json const& j) {
  std::ofstream out(path);
  if (!out) {
    throw FormatError("cannot write " + path.string());
  }
  out << j.dump(2) << '\n';
}

json const& need(json const& j, char const* key, char const* where) {
  if (!j.is_object() || !j.contains(key)) {
    throw FormatError(std::string(where) + " is missing '" + key + "'");
  }
  return j.at(key);
}

// -- approximations from config -------------------------------------------------

template <Group G>
SoficApprox<G> approximation_from_config(G const& group, json const& spec,
                                         std::vector<element_t<G>> const& window,
                                         fs::path const& base_dir) {
  auto const kind = need(spec, "kind", "approximation").get<std::string>();
  auto result = [&]() -> SoficApprox<G> {
    if (kind == "regular") {
      if constexpr (FiniteGroup<G>) {
        return regular_rep(group);
      } else {
        throw FormatError("'regular' needs a finite group, got " + group.name());
      }
    }
    if (kind == "cyclic_quotient") {
      if constexpr (std::is_same_v<G, IntegerGroup>) {
        return cyclic_quotient(need(spec, "N", "cyclic_quotient").get<std::size_t>(), window);
      } else {
        throw FormatError("'cyclic_quotient' needs the integers, got " + group.name());
      }
    }
    if (kind == "images") {
      if constexpr (std::is_same_v<G, FreeGroup>) {
        std::vector<Permutation> images;
        for (auto const& p : need(spec, "images", "images approximation")) {
          images.push_back(permutation_from_json(p));
        }
        return quotient_by_images(group, images, window);
      } else {
        throw FormatError("'images' needs a free group, got " + group.name());
      }
    }
    if (kind == "file") {
      auto path = fs::path(need(spec, "path", "file approximation").get<std::string>());
      return sofic_from_json(group, read_json(path.is_absolute() ? path : base_dir / path));
    }
    throw FormatError("unknown approximation kind '" + kind + "'");
  }();
  if (spec.contains("perturb")) {
    auto const& p = spec.at("perturb");
    result = perturb(result, need(p, "rate", "perturb").get<double>(),
                     need(p, "seed", "perturb").get<std::uint64_t>());
  }
  return result;
}

template <Group G, Group H>
std::vector<element_t<WreathProduct<G, H>>> window_from_config(WreathProduct<G, H> const& W,
                                                               json const& config) {
  auto const& f = need(config, "F", "config");
  std::vector<element_t<WreathProduct<G, H>>> F;
  if (f.is_string() && f.get<std::string>() == "all") {
    if constexpr (FiniteGroup<G> && FiniteGroup<H>) {
      F = W.elements();
    } else {
      throw FormatError("F = \"all\" needs finite groups");
    }
  } else {
    F = wreath_elements_from_json(W, f);
  }
  if (config.contains("F_word_length")) {
    auto ball = words_up_to(W, F, config.at("F_word_length").get<std::size_t>());
    F.assign(ball.begin(), ball.end());
  }
  return F;
}

std::string summary_line(std::string const& label, std::size_t n) {
  return "  |" + label + "| = " + std::to_string(n);
}

template <Group G, Group H>
int run_build(G const& base, H const& top, json const& config, fs::path const& config_dir,
              fs::path const& out) {
  WreathProduct<G, H> W(base, top);
  auto const F = window_from_config(W, config);
  auto const eps = rational_from_json(need(config, "eps", "config"));
  if (eps <= 0) {
    throw FormatError("eps must be positive, got " + to_string(eps));
  }
  auto const ws = derive_windows(W, F);
  auto const& approx = need(config, "approximations", "config");
  auto sigma_A = approximation_from_config(base, need(approx, "G", "approximations"),
                                           certificate_domain(base, ws.E_A), config_dir);
  auto sigma_B = approximation_from_config(top, need(approx, "H", "approximations"),
                                           certificate_domain(top, ws.E_B), config_dir);

  ArtifactInfo info;
  info.seed = config.value("seed", std::uint64_t{0});
  info.expansion_cap = config.value("expansion_cap", default_expansion_cap);
  try {
    auto w = build(W, std::move(sigma_A), std::move(sigma_B), F, eps);
    write_json(out, to_json(w, info));
    auto const& b = w.budget();
    std::cout << "built " << W.name() << " approximation\n"
              << "  carrier |A|^|B| x |B| with |A| = " << w.a_size() << ", |B| = " << w.b_size()
              << "\n"
              << summary_line("F", ws.F.size()) << "\n"
              << summary_line("F0", ws.F0.size()) << "\n"
              << summary_line("E1", ws.E1.size()) << "\n"
              << summary_line("E2", ws.E2.size()) << "\n"
              << summary_line("E", ws.E.size()) << "\n"
              << summary_line("E_A", ws.E_A.size()) << "\n"
              << summary_line("E_B", ws.E_B.size()) << "\n"
              << "  B0 = " << w.block().B0.size() << "/" << w.b_size() << "\n"
              << "  eps = " << to_string(b.eps) << ", kappa = " << to_string(b.kappa)
              << ", eps' = " << to_string(b.eps_prime) << "\n"
              << "  wrote " << out.filename().string() << "\n";
  } catch (CertificateError const& e) {
    throw Exit{kCertificate, std::string("input certificate failed: ") + e.what()};
  }
  return kPass;
}

// -- verify ----------------------------------------------------------------------

template <Group G, Group H>
int run_verify(G const& base, H const& top, json const& artifact, bool oracle) {
  auto [w, info] = wreath_approx_from_json(base, top, artifact);
  auto const eps = w.budget().eps;
  auto const cert = verify_construction(w, eps, info.seed);
  auto out = to_json(cert);
  int code = cert.pass() ? kPass : kCertificate;
  std::string oracle_note;
  if (oracle) {
    try {
      auto mismatches = oracle_crosscheck(w, cert, info.expansion_cap);
      out["oracle"] = {{"checked", true},
                       {"carrier_size", *CoordAction::identity(w.a_size(), w.b_size()).carrier_size()},
                       {"mismatches", mismatches}};
      if (!mismatches.empty()) {
        code = kCertificate;
      }
    } catch (ExpansionTooLarge const& e) {
      out["oracle"] = {{"checked", false}, {"reason", e.what()}};
      oracle_note = std::string("oracle unavailable: ") + e.what() + " (cap " +
                    std::to_string(info.expansion_cap) + ")";
      code = kOracle;
    }
  }
  std::cout << out.dump(2) << '\n';
  for (auto const& v : cert.violations) {
    std::cerr << "violation: " << v << '\n';
  }
  if (!oracle_note.empty()) {
    std::cerr << oracle_note << '\n';
  }
  return code;
}

// -- report ----------------------------------------------------------------------

std::string rat(json const& r) {
  auto q = rational_from_json(r);
  std::ostringstream s;
  s << to_string(q);
  if (denominator(q) != 1) {
    s << " (" << std::setprecision(6) << to_double(q) << ")";
  }
  return s.str();
}

std::string yes_no(json const& b) { return b.get<bool>() ? "yes" : "NO"; }

void report_text(json const& c, std::ostream& os) {
  require_format(c, "sofic-certificate");
  os << "sofic certificate: " << (c.at("pass").get<bool>() ? "PASS" : "FAIL") << "\n";
  os << "eps = " << rat(c.at("eps")) << ", seed = " << c.value("seed", 0) << "\n";
  os << "|F| = " << c.at("window").size() << ", sigma(1) = id: " << yes_no(c.at("identity_ok"))
     << "\n\n";

  auto const& mult = c.at("mult_defects");
  os << "multiplicative defects (" << mult.size() << " pairs)\n";
  if (!mult.empty()) {
    json const* worst = &mult.front();
    std::size_t nonzero = 0;
    for (auto const& d : mult) {
      auto v = rational_from_json(d.at("defect"));
      nonzero += v != 0;
      if (v > rational_from_json(worst->at("defect"))) worst = &d;
    }
    os << "  worst " << rat(worst->at("defect")) << " at " << worst->at("text").get<std::string>()
       << "\n  nonzero " << nonzero << "\n";
  }
  auto const& free = c.at("free_margins");
  os << "freeness margins (" << free.size() << " elements)\n";
  if (!free.empty()) {
    json const* least = &free.front();
    for (auto const& m : free) {
      if (rational_from_json(m.at("margin")) < rational_from_json(least->at("margin"))) least = &m;
    }
    os << "  least " << rat(least->at("margin")) << " at " << least->at("text").get<std::string>()
       << "\n";
  }

  if (c.contains("steps")) {
    auto const& st = c.at("steps");
    os << "\nstep 1: almost-homomorphism hypotheses\n";
    os << "  bullet | measured | structural | budget | measured<=structural | structural<=budget\n";
    std::size_t i = 1;
    for (auto const& s : st.at("step1")) {
      os << "  " << i++ << "      | " << rat(s.at("measured")) << " | " << rat(s.at("structural"))
         << " | " << rat(s.at("budget")) << " | " << yes_no(s.at("measured_within_structural"))
         << " | " << yes_no(s.at("structural_within_budget")) << "\n";
    }
    os << "  bullet 3 exactly zero: " << yes_no(st.at("bullet3_exact")) << "\n";
    auto const& almost_hom = st.at("almost_hom");
    os << "  hypotheses at eps/6 hold: " << yes_no(almost_hom.at("hypotheses_hold"))
       << "; (F0, eps)-multiplicative: " << yes_no(almost_hom.at("conclusion").at("pass")) << " (defect "
       << rat(almost_hom.at("conclusion").at("value")) << ")\n";

    os << "\nstep 2: fixed fractions of (g, 1), g != 1\n";
    if (st.at("step2").empty()) os << "  (none)\n";
    for (auto const& s : st.at("step2")) {
      os << "  " << s.at("element_text").get<std::string>() << " x0 = " << s.at("x0").dump()
         << ": fixed " << rat(s.at("fixed_fraction")) << " <= " << rat(s.at("structural"))
         << " <= kappa + eps' = " << rat(s.at("budget")) << " : " << yes_no(s.at("pass")) << "\n";
    }
    os << "step 2: d(sigma(g,h), id) >= d(sigma_B(h), id), h != 1\n";
    if (st.at("shift_freeness").empty()) os << "  (none)\n";
    for (auto const& s : st.at("shift_freeness")) {
      os << "  " << s.at("element_text").get<std::string>() << ": " << rat(s.at("distance"))
         << " >= " << rat(s.at("sigma_B_distance")) << " : " << yes_no(s.at("pass")) << "\n";
    }
  }

  auto const& violations = c.at("violations");
  os << "\nviolations: " << violations.size() << "\n";
  for (auto const& v : violations) {
    os << "  " << v.get<std::string>() << "\n";
  }
}

// -- dispatch ----------------------------------------------------------------------

template <class Fn>
int with_groups(json const& groups, Fn&& fn) {
  auto base = group_from_descriptor(need(groups, "G", "groups"));
  auto top = group_from_descriptor(need(groups, "H", "groups"));
  return std::visit([&](auto const& g, auto const& h) { return fn(g, h); }, base, top);
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Sofic approximations of wreath products: build, verify, report"};
  app.require_subcommand(1);

  std::string config_path, out_path;
  auto* build_cmd = app.add_subcommand("build", "Build an approximation from a config file");
  build_cmd->add_option("--config", config_path, "Config JSON")->required();
  build_cmd->add_option("--out", out_path, "Artifact to write")->required();

  std::string approx_path;
  bool oracle = false;
  auto* verify_cmd = app.add_subcommand("verify", "Certify an artifact; certificate on stdout");
  verify_cmd->add_option("--approx", approx_path, "Artifact JSON")->required();
  verify_cmd->add_flag("--oracle", oracle, "Cross-check every distance on the explicit carrier");

  std::string cert_path, format = "text";
  auto* report_cmd = app.add_subcommand("report", "Render a certificate");
  report_cmd->add_option("--certificate", cert_path, "Certificate JSON")->required();
  report_cmd->add_option("--format", format, "text or json")
      ->check(CLI::IsMember({"text", "json"}));

  try {
    app.parse(argc, argv);
  } catch (CLI::ParseError const& e) {
    auto code = app.exit(e);
    return code == 0 ? kPass : kUsage;
  }

  try {
    if (*build_cmd) {
      auto config = read_json(config_path);
      if (!config.is_object() || config.value("format", 0) != 1) {
        throw FormatError("config needs \"format\": 1");
      }
      auto dir = fs::path(config_path).parent_path();
      return with_groups(need(config, "groups", "config"), [&](auto const& g, auto const& h) {
        return run_build(g, h, config, dir, out_path);
      });
    }
    if (*verify_cmd) {
      auto artifact = read_json(approx_path);
      require_format(artifact, "wreath-approx");
      return with_groups(need(artifact, "groups", "artifact"), [&](auto const& g, auto const& h) {
        return run_verify(g, h, artifact, oracle);
      });
    }
    if (*report_cmd) {
      auto cert = read_json(cert_path);
      if (format == "json") {
        require_format(cert, "sofic-certificate");
        std::cout << cert.dump(2) << '\n';
      } else {
        report_text(cert, std::cout);
      }
      return cert.value("pass", false) ? kPass : kCertificate;
    }
  } catch (Exit const& e) {
    std::cerr << e.message << '\n';
    return e.code;
  } catch (CertificateError const& e) {
    std::cerr << "certificate failure: " << e.what() << '\n';
    return kCertificate;
  } catch (wreath::Error const& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (json::exception const& e) {
    std::cerr << "error: malformed JSON field: " << e.what() << '\n';
    return kUsage;
  }
  return kUsage;
}
