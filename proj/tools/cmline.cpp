// Command-line front end: forms, class numbers, j values, class polynomials,
// collinear searches, matrix operations, the Main Lemma scan and the lemma suite.
//
// Exit status: 0 success, 1 verification failure, 2 malformed input.

#include <cmline/cmline.hpp>

#include <CLI11.hpp>
#include <json.hpp>

#include <cstdlib>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

using namespace cmline;
using nlohmann::json;

namespace {

struct BadInput : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string q = "\"";
  for (char c : s) {
    if (c == '"') q += '"';
    q += c;
  }
  return q + "\"";
}

void print_csv(const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  auto line = [](const std::vector<std::string>& r) {
    std::string s;
    for (std::size_t i = 0; i < r.size(); ++i) s += (i ? "," : "") + csv_field(r[i]);
    std::cout << s << '\n';
  };
  line(header);
  for (const auto& r : rows) line(r);
}

// Tabular output in either format; JSON is an array of objects keyed by header.
void emit_table(bool csv, const std::vector<std::string>& header, const std::vector<std::vector<std::string>>& rows) {
  if (csv) return print_csv(header, rows);
  json arr = json::array();
  for (const auto& r : rows) {
    json o;
    for (std::size_t i = 0; i < header.size(); ++i) o[header[i]] = r[i];
    arr.push_back(o);
  }
  std::cout << arr.dump(2) << '\n';
}

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, sep)) {
    if (!item.empty()) out.push_back(item);
  }
  return out;
}

mpq_class rational_arg(const std::string& s) {
  try {
    return parse_rational(s);
  } catch (const std::invalid_argument& e) {
    throw BadInput(e.what());
  }
}

RationalMatrix matrix_arg(const std::string& s) {
  const auto parts = split(s, ',');
  if (parts.size() != 4) throw BadInput("matrix must be given as a,b,c,d: " + s);
  RationalMatrix m(rational_arg(parts[0]), rational_arg(parts[1]), rational_arg(parts[2]), rational_arg(parts[3]));
  if (m.det() <= 0) throw BadInput("matrix determinant must be positive: " + s);
  return m;
}

Discriminant disc_arg(long d) {
  if (!is_discriminant(d)) throw BadInput("not a negative discriminant: " + std::to_string(d));
  return Discriminant(d);
}

PrecisionConfig precision_arg(long bits) {
  PrecisionConfig cfg;
  cfg.working_bits = bits;
  try {
    cfg.validate();
  } catch (const std::invalid_argument& e) {
    throw BadInput(e.what());
  }
  return cfg;
}

// CM_CACHE_DIR wins over --cache.
std::unique_ptr<HcpCache> cache_from(const std::string& flag) {
  if (const char* env = std::getenv("CM_CACHE_DIR"); env && *env) return std::make_unique<HcpCache>(env);
  if (!flag.empty()) return std::make_unique<HcpCache>(flag);
  return nullptr;
}

json matrix_json(const RationalMatrix& m) { return {m.a.get_str(), m.b.get_str(), m.c.get_str(), m.d.get_str()}; }

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Singular moduli, collinear CM-points and the determinant scan"};
  app.require_subcommand(1);
  app.fallthrough();
  std::string format = "json";
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "csv"}));
  int jobs = 1;
  app.add_option("--jobs", jobs, "Worker threads for the scan and the screen")->check(CLI::PositiveNumber);

  int status = 0;

  // forms
  long forms_disc = 0;
  auto* forms = app.add_subcommand("forms", "Reduced forms of a discriminant");
  forms->add_option("--disc", forms_disc, "Negative discriminant")->required()->allow_extra_args(false);
  forms->callback([&] {
    const Discriminant d = disc_arg(forms_disc);
    std::vector<std::vector<std::string>> rows;
    int i = 0;
    for (const auto& f : reduced_forms(d)) {
      rows.push_back({std::to_string(i++), std::to_string(f.a), std::to_string(f.b), std::to_string(f.c)});
    }
    emit_table(format == "csv", {"index", "a", "b", "c"}, rows);
  });

  // classnum
  long cn_max = 0;
  auto* classnum = app.add_subcommand("classnum", "Class numbers up to a bound");
  classnum->add_option("--max-disc", cn_max, "Largest |D|")->required()->check(CLI::Range(3L, 10000000L));
  classnum->callback([&] {
    std::vector<std::vector<std::string>> rows;
    for (auto [d, h] : class_numbers_up_to(cn_max)) rows.push_back({std::to_string(d), std::to_string(h)});
    emit_table(format == "csv", {"disc", "h"}, rows);
  });

  // j
  long j_disc = 0;
  int j_index = 0;
  long j_bits = 128;
  auto* jcmd = app.add_subcommand("j", "Numeric singular modulus");
  jcmd->add_option("--disc", j_disc, "Negative discriminant")->required();
  jcmd->add_option("--form-index", j_index, "Index into the sorted reduced forms")->check(CLI::NonNegativeNumber);
  jcmd->add_option("--prec-bits", j_bits, "Working precision in bits");
  jcmd->callback([&] {
    const Discriminant d = disc_arg(j_disc);
    const auto fs = reduced_forms(d);
    if (j_index >= static_cast<int>(fs.size())) throw BadInput("form index out of range");
    const auto cfg = precision_arg(j_bits);
    const ReducedForm& f = fs[static_cast<std::size_t>(j_index)];
    const Complex v = singular_modulus(d, f, cfg);
    const int digits = static_cast<int>(static_cast<double>(j_bits) * 0.30103);
    emit_table(format == "csv", {"disc", "form", "a", "b", "c", "re", "im"},
               {{std::to_string(j_disc), std::to_string(j_index), std::to_string(f.a), std::to_string(f.b),
                 std::to_string(f.c), v.re.to_string(digits), v.im.to_string(digits)}});
  });

  // hcp
  long hcp_disc = 0;
  long hcp_bits = 128;
  std::string hcp_cache;
  auto* hcp = app.add_subcommand("hcp", "Hilbert class polynomial");
  hcp->add_option("--disc", hcp_disc, "Negative discriminant")->required();
  hcp->add_option("--cache", hcp_cache, "Cache directory (CM_CACHE_DIR overrides)");
  hcp->add_option("--prec-bits", hcp_bits, "Initial working precision");
  hcp->callback([&] {
    const Discriminant d = disc_arg(hcp_disc);
    const auto cache = cache_from(hcp_cache);
    const auto P = hilbert_class_polynomial_cached(d, precision_arg(hcp_bits), cache.get());
    if (format == "csv") {
      std::vector<std::vector<std::string>> rows;
      for (std::size_t i = 0; i < P.coefficients.size(); ++i) rows.push_back({std::to_string(i), P.coefficients[i].get_str()});
      print_csv({"power", "coefficient"}, rows);
    } else {
      json c = json::array();
      for (const auto& x : P.coefficients) c.push_back(x.get_str());
      std::cout << json{{"disc", hcp_disc}, {"degree", P.degree()}, {"coefficients", c}}.dump(2) << '\n';
    }
  });

  // lines
  auto* lines = app.add_subcommand("lines", "Collinear CM-points");
  lines->require_subcommand(1);
  auto* lines_rational = lines->add_subcommand("rational", "Non-special lines through the 169 rational CM-points");
  lines_rational->callback([&] {
    const auto sets = find_collinear_triples(rational_cm_points());
    if (format == "csv") {
      std::vector<std::vector<std::string>> rows;
      for (const auto& s : sets) {
        for (const auto& p : s.points) {
          rows.push_back({s.line.A.get_str(), s.line.B.get_str(), s.line.C.get_str(), p.x.get_str(), p.y.get_str(), "true"});
        }
      }
      print_csv({"A", "B", "C", "x", "y", "exact_verified"}, rows);
    } else {
      json arr = json::array();
      for (const auto& s : sets) arr.push_back(to_json(s));
      std::cout << arr.dump(2) << '\n';
    }
  });
  long screen_max = 12, screen_bits = 256;
  std::string screen_tol = "1/1000000000000";
  auto* lines_screen = lines->add_subcommand("screen", "Numeric screen over all embedded singular moduli");
  lines_screen->add_option("--max-disc", screen_max, "Largest |D|")->check(CLI::Range(3L, 100000L));
  lines_screen->add_option("--prec-bits", screen_bits, "Working precision in bits");
  lines_screen->add_option("--tol", screen_tol, "Determinant tolerance, a rational");
  lines_screen->callback([&] {
    const auto cfg = precision_arg(screen_bits);
    const mpq_class tol = rational_arg(screen_tol);
    if (tol <= 0) throw BadInput("tolerance must be positive");
    const auto rep = numeric_screen(screen_max, cfg, tol, jobs);
    if (rep.precision_warning) std::cerr << "warning: " << rep.warning << '\n';
    if (format == "csv") {
      std::vector<std::vector<std::string>> rows;
      for (std::size_t i = 0; i < rep.candidates.size(); ++i) {
        const auto& c = rep.candidates[i];
        for (const auto& [x, y] : c.points) {
          const auto &X = rep.moduli[static_cast<std::size_t>(x)], &Y = rep.moduli[static_cast<std::size_t>(y)];
          rows.push_back({std::to_string(i), c.line ? c.line->to_string() : "", std::to_string(X.disc),
                          std::to_string(X.form_index), std::to_string(Y.disc), std::to_string(Y.form_index),
                          c.abs_det, c.exact_verified ? "true" : "false"});
        }
      }
      print_csv({"candidate", "line", "x_disc", "x_form", "y_disc", "y_form", "abs_det", "exact_verified"}, rows);
    } else {
      std::cout << rep.to_json().dump(2) << '\n';
    }
  });

  // matrix
  auto* matrix = app.add_subcommand("matrix", "Operations on 2x2 rational matrices, given as a,b,c,d");
  matrix->require_subcommand(1);
  std::string m1, m2, m3;
  auto matrix_out = [&](const json& j) {
    if (format == "csv") {
      std::vector<std::string> header, row;
      for (const auto& [k, v] : j.items()) header.push_back(k), row.push_back(v.is_string() ? v.get<std::string>() : v.dump());
      print_csv(header, {row});
    } else {
      std::cout << j.dump(2) << '\n';
    }
  };
  auto* m_nlc = matrix->add_subcommand("nlc", "Normalized left content");
  m_nlc->add_option("matrix", m1)->required();
  m_nlc->callback([&] { matrix_out({{"nlc", nlc(matrix_arg(m1)).get_str()}}); });
  auto* m_nf = matrix->add_subcommand("normal-form", "Representative [[a,b],[0,1]] of the SL2(Z) class");
  m_nf->add_option("matrix", m1)->required();
  m_nf->callback([&] {
    const auto nf = normal_form(matrix_arg(m1));
    matrix_out({{"a", nf.a.get_str()}, {"b", nf.b.get_str()}});
  });
  auto* m_sep = matrix->add_subcommand("separate", "B with nlc(A1 B) != nlc(A2 B)");
  m_sep->add_option("a1", m1)->required();
  m_sep->add_option("a2", m2)->required();
  m_sep->callback([&] {
    const auto a1 = matrix_arg(m1), a2 = matrix_arg(m2);
    if (equivalent(a1, a2)) throw BadInput("matrices are equivalent");
    const auto b = separating_matrix(a1, a2);
    matrix_out({{"B", matrix_json(b)}, {"nlc1", nlc(a1 * b).get_str()}, {"nlc2", nlc(a2 * b).get_str()}});
  });
  auto* m_dom = matrix->add_subcommand("dominate", "B making one nlc(A_k B) strictly largest");
  m_dom->add_option("a1", m1)->required();
  m_dom->add_option("a2", m2)->required();
  m_dom->add_option("a3", m3)->required();
  m_dom->callback([&] {
    const auto a1 = matrix_arg(m1), a2 = matrix_arg(m2), a3 = matrix_arg(m3);
    if (equivalent(a1, a2) || equivalent(a1, a3) || equivalent(a2, a3)) throw BadInput("matrices are not pairwise inequivalent");
    const auto b = dominant_matrix(a1, a2, a3);
    const auto v = nlc_values({a1, a2, a3}, b);
    matrix_out({{"B", matrix_json(b)}, {"nlc", {v[0].get_str(), v[1].get_str(), v[2].get_str()}}});
  });
  auto* m_audit = matrix->add_subcommand("audit-example", "Two of nlc(A_k B) coincide for the fixed triple");
  m_audit->add_option("b", m1)->required();
  m_audit->callback([&] {
    const auto b = matrix_arg(m1);
    const auto v = nlc_values(example_triple(), b);
    const bool ok = counterexample_audit(b);
    matrix_out({{"nlc", {v[0].get_str(), v[1].get_str(), v[2].get_str()}}, {"coincide", ok}});
    if (!ok) status = 1;
  });

  // scan-mainlemma
  std::string scan_levels = "1", scan_constants = "0,1728";
  int scan_twists = 2, scan_terms = 8;
  auto* scan = app.add_subcommand("scan-mainlemma", "Exhaustive determinant scan over 6-tuples of j-maps");
  scan->add_option("--levels", scan_levels, "Comma-separated positive rationals, e.g. 1,2,3/2");
  scan->add_option("--twist-orders", scan_twists, "Largest twist order")->check(CLI::Range(1, 60));
  scan->add_option("--constants", scan_constants, "Comma-separated rational singular moduli");
  scan->add_option("--terms", scan_terms, "Certified candidate exponents")->check(CLI::Range(1, 64));
  scan->callback([&] {
    ScanConfig cfg;
    for (const auto& s : split(scan_levels, ',')) {
      const mpq_class m = rational_arg(s);
      if (m <= 0) throw BadInput("levels must be positive: " + s);
      cfg.levels.push_back(m);
    }
    for (const auto& s : split(scan_constants, ',')) {
      mpz_class v;
      if (v.set_str(s, 10) != 0 || !in_table1(v)) throw BadInput("constant is not a rational singular modulus: " + s);
      cfg.constants.push_back(v);
    }
    if (cfg.levels.empty()) throw BadInput("at least one level is required");
    cfg.max_twist_order = scan_twists;
    cfg.n_terms = scan_terms;
    cfg.jobs = jobs;
    const auto rep = scan_main_lemma(cfg);
    if (format == "csv") {
      std::vector<std::vector<std::string>> rows;
      for (const auto& r : rep.records) {
        rows.push_back({r.f[0].to_string(), r.f[1].to_string(), r.f[2].to_string(), r.g[0].to_string(),
                        r.g[1].to_string(), r.g[2].to_string(), r.verdict.to_string(),
                        r.vanishing_order.get_str(), r.vanishes ? "true" : "false"});
      }
      print_csv({"f1", "f2", "f3", "g1", "g2", "g3", "verdict", "vanishing_order", "vanishes_to_order"}, rows);
    } else {
      for (const auto& r : rep.records) std::cout << r.to_json().dump() << '\n';
    }
    std::cerr << rep.stats.to_json().dump() << '\n';
    if (!rep.empty()) status = 1;
  });

  // verify
  std::vector<std::string> targets;
  std::string verify_cache;
  auto* verify = app.add_subcommand("verify", "Run the lemma suite");
  verify->add_option("targets", targets, "all | table1 | class2 | gaps | exclusions | lcute | two-roots | pluricyc | bound2079");
  verify->add_option("--cache", verify_cache, "Class polynomial cache directory (CM_CACHE_DIR overrides)");
  verify->callback([&] {
    std::vector<std::string> which;
    for (const auto& t : targets) {
      if (t == "all") {
        which.clear();
        break;
      }
      if (std::find(suite_targets().begin(), suite_targets().end(), t) == suite_targets().end()) {
        throw BadInput("unknown verification target: " + t);
      }
      which.push_back(t);
    }
    SuiteConfig cfg;
    const auto cache = cache_from(verify_cache);
    cfg.cache = cache.get();
    const auto rep = run_suite(which, cfg);
    // Timings go to stderr so stdout stays byte-identical across runs.
    for (const auto& r : rep.results) std::cerr << r.name << ": " << r.seconds << " s\n";
    if (format == "csv") {
      std::vector<std::vector<std::string>> rows;
      for (const auto& r : rep.results) rows.push_back({r.name, r.passed ? "true" : "false", r.detail});
      print_csv({"name", "passed", "detail"}, rows);
    } else {
      json j = rep.to_json();
      for (auto& r : j["results"]) r.erase("seconds");
      std::cout << j.dump(2) << '\n';
    }
    if (!rep.passed()) status = 1;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForVersion& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return 2;
  } catch (const BadInput& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::invalid_argument& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return status;
}
