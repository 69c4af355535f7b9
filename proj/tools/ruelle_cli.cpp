// Batch front-end: load a presentation + character config, run spectra,
// verification suites, and torsion reports; emit spectrum.csv, report.json,
// report.txt. All output is deterministic for a fixed (config, seed).
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "ruelle/character.hpp"
#include "ruelle/errors.hpp"
#include "ruelle/presentation.hpp"
#include "ruelle/report.hpp"
#include "ruelle/series.hpp"
#include "ruelle/spectrum.hpp"
#include "ruelle/transforms.hpp"
#include "ruelle/verification.hpp"

namespace fs = std::filesystem;
using namespace ruelle;

namespace {

std::string fmt15(double x) {
  char buf[48];
  std::snprintf(buf, sizeof buf, "%.15g", x);
  return buf;
}

std::string json_escape(const std::string& s) {
  std::string out;
  for (char ch : s) {
    switch (ch) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      default:
        if (static_cast<unsigned char>(ch) < 0x20) {
          char buf[8];
          std::snprintf(buf, sizeof buf, "\\u%04x", ch);
          out += buf;
        } else {
          out += ch;
        }
    }
  }
  return out;
}

struct RunConfig {
  std::string presentation_path;
  std::string character_text = "0";
  double max_geodesic_length = 3.0;
  int max_word_length = 8;
  double abscissa = 2.1;
  std::optional<double> vol;
  std::optional<double> c_gamma;
  std::optional<double> delta_rho;
  std::string output_dir = ".";
  std::uint64_t seed = 1;
  double dedup_tol = tol::dedup;
  bool have_presentation = false;
};

RunConfig load_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open config file: " + path);
  std::stringstream buf;
  buf << in.rdbuf();
  const std::string text = buf.str();
  nlohmann::json j;
  try {
    j = nlohmann::json::parse(text);
  } catch (const nlohmann::json::parse_error& e) {
    auto [line, col] = ruelle::detail::line_column(text, e.byte);
    throw InputError("parse error in " + path + " at line " + std::to_string(line) +
                     ", column " + std::to_string(col) + ": " + e.what());
  }
  RunConfig rc;
  try {
    if (j.contains("presentation")) {
      fs::path p = j["presentation"].get<std::string>();
      if (p.is_relative()) p = fs::path(path).parent_path() / p;
      rc.presentation_path = p.string();
      rc.have_presentation = true;
    }
    if (j.contains("character")) {
      if (j["character"].is_array()) {
        std::string joined;
        for (const auto& part : j["character"]) {
          if (!joined.empty()) joined += ",";
          joined += part.get<std::string>();
        }
        rc.character_text = joined;
      } else {
        rc.character_text = j["character"].get<std::string>();
      }
    }
    rc.max_geodesic_length = j.value("max_geodesic_length", rc.max_geodesic_length);
    rc.max_word_length = j.value("max_word_length", rc.max_word_length);
    rc.abscissa = j.value("abscissa", rc.abscissa);
    if (j.contains("vol")) rc.vol = j["vol"].get<double>();
    if (j.contains("c_rho_gamma")) rc.c_gamma = j["c_rho_gamma"].get<double>();
    if (j.contains("delta_rho")) rc.delta_rho = j["delta_rho"].get<double>();
    rc.output_dir = j.value("output_dir", rc.output_dir);
    rc.seed = j.value("seed", rc.seed);
    if (j.contains("tolerances") && j["tolerances"].contains("dedup"))
      rc.dedup_tol = j["tolerances"]["dedup"].get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw InputError("invalid config " + path + ": " + e.what());
  }
  if (rc.max_geodesic_length <= 0.0)
    throw InputError("config: max_geodesic_length must be positive");
  if (rc.max_word_length <= 0) throw InputError("config: max_word_length must be positive");
  if (rc.vol && *rc.vol <= 0.0) throw InputError("config: vol must be positive");
  if (rc.delta_rho && *rc.delta_rho <= 0.0)
    throw InputError("config: delta_rho must be positive");
  if (rc.dedup_tol <= 0.0) throw InputError("config: tolerances.dedup must be positive");
  return rc;
}

struct Problem {
  GroupPresentation p;
  Character rho;
};

Problem load_problem(const RunConfig& rc) {
  if (!rc.have_presentation)
    throw InputError("a presentation is required; pass --config with a 'presentation' entry");
  Problem pr{load_presentation(rc.presentation_path), Character::parse(rc.character_text)};
  if (static_cast<int>(pr.rho.v.size()) != pr.p.b1())
    throw InputError("character has " + std::to_string(pr.rho.v.size()) +
                     " coordinates, abelianization has rank " + std::to_string(pr.p.b1()));
  if (pr.p.extra_cusps > 0)
    std::cerr << "warning: presentation declares " << pr.p.extra_cusps
              << " additional cusp(s); cusp words cover the listed ones only\n";
  return pr;
}

SpectrumOptions spectrum_options(const RunConfig& rc) {
  SpectrumOptions opt;
  opt.max_geodesic_length = rc.max_geodesic_length;
  opt.max_word_length = rc.max_word_length;
  opt.dedup_tol = rc.dedup_tol;
  return opt;
}

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << content;
}

std::string csv_of(const SpectrumSeries& series) {
  std::string csv = "l,theta,l0,mu,rho_re,rho_im,a0_re,a0_im,a1_re,a1_im,word\n";
  for (const SpectrumRow& r : series.rows) {
    csv += fmt15(r.l) + "," + fmt15(r.theta) + "," + fmt15(r.l0) + "," +
           std::to_string(r.mu) + "," + fmt15(r.rho.real()) + "," + fmt15(r.rho.imag()) +
           "," + fmt15(r.a0.real()) + "," + fmt15(r.a0.imag()) + "," +
           fmt15(r.a1.real()) + "," + fmt15(r.a1.imag()) + "," + r.word + "\n";
  }
  return csv;
}

std::string transform_terms_text(const TransformValue& tv) {
  std::string out;
  for (const TransformTerm& t : tv.terms) {
    if (!out.empty()) out += "  +  ";
    out += "(" + fmt15(t.coeff.real()) + (t.coeff.imag() < 0 ? " - " : " + ") +
           fmt15(std::abs(t.coeff.imag())) + "i) z^" + fmt15(t.z_power.real());
    if (t.gamma_argument) out += " Gamma(" + fmt15(t.gamma_argument->real()) + ")";
  }
  return out.empty() ? "0" : out;
}

// ---- report document assembly ----------------------------------------------

struct ReportDoc {
  std::string command;
  std::string presentation;
  std::string character;
  std::vector<CheckReport> suites;
  const Spectrum* spectrum = nullptr;
  const TheoremReport* theorem = nullptr;
  const RunConfig* rc = nullptr;

  bool all_pass() const {
    for (const CheckReport& s : suites)
      if (!s.passed()) return false;
    return true;
  }
};

std::string to_json(const ReportDoc& doc) {
  std::string j = "{\n";
  j += "  \"command\": \"" + json_escape(doc.command) + "\",\n";
  j += "  \"presentation\": \"" + json_escape(doc.presentation) + "\",\n";
  j += "  \"character\": \"" + json_escape(doc.character) + "\",\n";
  j += "  \"checks\": [\n";
  bool first = true;
  for (const CheckReport& s : doc.suites) {
    for (const CheckLine& l : s.lines) {
      if (!first) j += ",\n";
      first = false;
      j += "    {\"suite\": \"" + json_escape(s.title) + "\", \"name\": \"" +
           json_escape(l.name) + "\", \"residual\": " + fmt15(l.residual) +
           ", \"bound\": " + fmt15(l.bound) + ", \"pass\": " +
           (l.pass ? "true" : "false") + "}";
    }
  }
  j += "\n  ],\n";
  j += "  \"pass\": " + std::string(doc.all_pass() ? "true" : "false");
  if (doc.spectrum) {
    const Spectrum& sp = *doc.spectrum;
    j += ",\n  \"spectrum\": {\"classes\": " + std::to_string(sp.classes.size()) +
         ", \"cutoff_length\": " + fmt15(sp.cutoff_length) +
         ", \"max_word_length\": " + std::to_string(sp.max_word_length) +
         ", \"stabilized\": " + (sp.stabilized ? "true" : "false") +
         ", \"counting_K\": " + fmt15(sp.counting_K) + "}";
  }
  if (doc.theorem) {
    const TheoremReport& t = *doc.theorem;
    j += ",\n  \"torsion\": {\n";
    j += "    \"tau_magnitude\": " + fmt15(t.tau_magnitude) + ",\n";
    j += "    \"tau_magnitude_squared\": " + fmt15(t.tau_magnitude_squared) + ",\n";
    j += "    \"removed_row\": " + std::to_string(t.removed_row) + ",\n";
    j += "    \"chain_residual\": " + fmt15(t.chain_residual) + ",\n";
    j += "    \"alexander_numerator\": \"" + json_escape(t.alexander_numerator) + "\",\n";
    j += "    \"alexander_denominator\": \"" + json_escape(t.alexander_denominator) +
         "\",\n";
    j += "    \"a_star_one\": [" + fmt15(t.a_star_one.real()) + ", " +
         fmt15(t.a_star_one.imag()) + "],\n";
    j += "    \"a_star_one_abs\": " + fmt15(t.a_star_one_abs);
    if (t.delta_supplied) {
      j += ",\n    \"delta_rho\": " + fmt15(t.delta_rho);
      j += ",\n    \"delta_identity_value\": " + fmt15(t.delta_identity_value);
    }
    if (t.has_spectrum) {
      j += ",\n    \"series_eval_re\": " + fmt15(t.eval_re);
      j += ",\n    \"rs_residual\": " + fmt15(t.rs.residual);
      j += ",\n    \"rs_bound\": " + fmt15(t.rs.bound);
      j += ",\n    \"assembly_residual_closed\": " + fmt15(t.assembly.assembly_residual_closed);
      j += ",\n    \"assembly_residual_quadrature\": " +
           fmt15(t.assembly.transform_residual_quadrature);
    }
    j += ",\n    \"continuation_note\": \"" + json_escape(t.continuation_note) + "\"\n";
    j += "  }";
  }
  j += "\n}\n";
  return j;
}

std::string to_text(const ReportDoc& doc) {
  std::ostringstream os;
  os << "command: " << doc.command << "\n";
  os << "presentation: " << doc.presentation << "\n";
  os << "character: " << doc.character << "\n";
  if (doc.rc && doc.rc->vol)
    os << "identity transform terms (vol): "
       << transform_terms_text(identity_term_transform(HeatTermKind::L_I1, *doc.rc->vol))
       << "\n";
  if (doc.rc && doc.rc->c_gamma)
    os << "unipotent transform terms (c): "
       << transform_terms_text(unipotent_term_transform(HeatTermKind::L_U1, *doc.rc->c_gamma))
       << "\n";
  if (doc.spectrum) {
    const Spectrum& sp = *doc.spectrum;
    os << "\nspectrum: " << sp.classes.size() << " classes, cutoff l <= "
       << fmt15(sp.cutoff_length) << ", max word length " << sp.max_word_length
       << ", stabilized " << (sp.stabilized ? "yes" : "no") << ", counting K "
       << fmt15(sp.counting_K) << "\n";
  }
  for (const CheckReport& s : doc.suites) {
    os << "\n[" << s.title << "]\n";
    for (const CheckLine& l : s.lines)
      os << "  " << (l.pass ? "PASS" : "FAIL") << "  residual " << fmt15(l.residual)
         << "  bound " << fmt15(l.bound) << "  " << l.name << "\n";
  }
  if (doc.theorem) {
    const TheoremReport& t = *doc.theorem;
    os << "\n[torsion]\n";
    os << "  |tau|   = " << fmt15(t.tau_magnitude) << "\n";
    os << "  |tau|^2 = " << fmt15(t.tau_magnitude_squared) << "\n";
    os << "  chain residual = " << fmt15(t.chain_residual) << " (d1 d2 = 0)\n";
    os << "  alexander numerator   = " << t.alexander_numerator << "\n";
    os << "  alexander denominator = " << t.alexander_denominator << "\n";
    os << "  A*(1) = " << fmt15(t.a_star_one.real()) << " + " << fmt15(t.a_star_one.imag())
       << "i, |A*(1)| = " << fmt15(t.a_star_one_abs) << "\n";
    if (t.delta_supplied)
      os << "  (delta |A*(1)|)^2 = " << fmt15(t.delta_identity_value)
         << " with delta = " << fmt15(t.delta_rho) << "\n";
    else
      os << "  |L(0)| equals (delta |A*(1)|)^2 for the external constant delta; "
            "supply delta_rho in the config to evaluate it\n";
    if (t.has_spectrum) {
      os << "  series residuals at Re z = " << fmt15(t.eval_re) << ": factorization "
         << fmt15(t.rs.residual) << " (bound " << fmt15(t.rs.bound) << "), assembly "
         << fmt15(t.assembly.assembly_residual_closed) << " closed / "
         << fmt15(t.assembly.transform_residual_quadrature) << " quadrature\n";
    }
    os << "  note: " << t.continuation_note << "\n";
  }
  os << "\nresult: " << (doc.all_pass() ? "PASS" : "FAIL") << "\n";
  return os.str();
}

void emit(const RunConfig& rc, const ReportDoc& doc) {
  fs::create_directories(rc.output_dir);
  write_file((fs::path(rc.output_dir) / "report.json").string(), to_json(doc));
  const std::string text = to_text(doc);
  write_file((fs::path(rc.output_dir) / "report.txt").string(), text);
  std::cout << text;
}

// ---- commands ---------------------------------------------------------------

int cmd_spectrum(const RunConfig& rc) {
  Problem pr = load_problem(rc);
  Spectrum spec = length_spectrum(pr.p, pr.rho, spectrum_options(rc));
  SpectrumSeries series = make_series(pr.p, spec);
  fs::create_directories(rc.output_dir);
  write_file((fs::path(rc.output_dir) / "spectrum.csv").string(), csv_of(series));
  int ambiguous = 0;
  for (const GeodesicClass& gc : spec.classes) ambiguous += gc.ambiguous ? 1 : 0;
  std::cout << "presentation: " << pr.p.name << "\n"
            << "classes: " << spec.classes.size() << " (l <= " << fmt15(spec.cutoff_length)
            << ", word length <= " << spec.max_word_length << ")\n"
            << "stabilized: " << (spec.stabilized ? "yes" : "no") << "\n"
            << "counting K: " << fmt15(spec.counting_K) << "\n"
            << "ambiguous merges: " << ambiguous << "\n"
            << "wrote " << (fs::path(rc.output_dir) / "spectrum.csv").string() << "\n";
  return 0;
}

int cmd_verify(const RunConfig& rc, const std::string& which) {
  ReportDoc doc;
  doc.command = "verify " + which;
  doc.rc = &rc;
  Spectrum spec;
  std::optional<Problem> pr;
  if (which == "transforms") {
    doc.suites.push_back(verify_transforms());
  } else if (which == "cancellation") {
    doc.suites.push_back(verify_cancellation(rc.seed));
  } else {
    if (rc.abscissa <= 2.0)
      throw PreconditionError(
          "BelowAbscissa: configured abscissa " + fmt15(rc.abscissa) +
          " does not exceed 2; the geodesic series do not converge there");
    pr = load_problem(rc);
    doc.presentation = pr->p.name;
    doc.character = pr->rho.str();
    spec = length_spectrum(pr->p, pr->rho, spectrum_options(rc));
    doc.spectrum = &spec;
    SpectrumSeries series = make_series(pr->p, spec);
    series.abscissa = rc.abscissa;
    doc.suites.push_back(which == "rs" ? verify_rs(series) : verify_prop31(series));
  }
  emit(rc, doc);
  return doc.all_pass() ? 0 : ResidualError::exit_code;
}

int cmd_torsion(const RunConfig& rc) {
  Problem pr = load_problem(rc);
  ReportDoc doc;
  doc.command = "torsion";
  doc.rc = &rc;
  doc.presentation = pr.p.name;
  doc.character = pr.rho.str();
  Spectrum spec;
  std::optional<SpectrumSeries> series;
  if (pr.p.hyperbolic) {
    spec = length_spectrum(pr.p, pr.rho, spectrum_options(rc));
    doc.spectrum = &spec;
    series = make_series(pr.p, spec);
    series->abscissa = rc.abscissa;
  }
  TheoremReport rep =
      theorem_report(pr.p, pr.rho, series ? &*series : nullptr, rc.delta_rho);
  doc.theorem = &rep;
  emit(rc, doc);
  return 0;
}

int cmd_report(const RunConfig& rc) {
  Problem pr = load_problem(rc);
  ReportDoc doc;
  doc.command = "report";
  doc.rc = &rc;
  doc.presentation = pr.p.name;
  doc.character = pr.rho.str();
  doc.suites.push_back(verify_transforms());
  doc.suites.push_back(verify_cancellation(rc.seed));
  Spectrum spec;
  std::optional<SpectrumSeries> series;
  if (pr.p.hyperbolic && rc.abscissa > 2.0) {
    spec = length_spectrum(pr.p, pr.rho, spectrum_options(rc));
    doc.spectrum = &spec;
    series = make_series(pr.p, spec);
    series->abscissa = rc.abscissa;
    doc.suites.push_back(verify_rs(*series));
    doc.suites.push_back(verify_prop31(*series));
  }
  TheoremReport rep =
      theorem_report(pr.p, pr.rho, series ? &*series : nullptr, rc.delta_rho);
  doc.theorem = &rep;
  emit(rc, doc);
  return doc.all_pass() ? 0 : ResidualError::exit_code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"geodesic length spectra, L-function identities, and torsion reports "
               "for PSL(2,C) matrix group presentations"};
  app.fallthrough();
  app.require_subcommand(1);

  std::string config_path, rho_text, out_dir;
  double max_length = -1.0;
  int max_word = -1;
  std::uint64_t seed = 0;
  auto* opt_config = app.add_option("--config", config_path, "config file (JSON)");
  auto* opt_rho = app.add_option("--rho", rho_text, "character as rationals, e.g. \"1/4\"");
  auto* opt_len = app.add_option("--max-length", max_length, "geodesic length cutoff");
  auto* opt_word = app.add_option("--max-word", max_word, "word length cap");
  auto* opt_out = app.add_option("--out", out_dir, "output directory");
  auto* opt_seed = app.add_option("--seed", seed, "seed for randomized checks");

  app.add_subcommand("spectrum", "enumerate the geodesic length spectrum, write spectrum.csv");
  auto* verify =
      app.add_subcommand("verify", "run a named verification suite, write report files");
  std::string which;
  verify->add_option("which", which, "one of: transforms, cancellation, rs, prop31")
      ->required()
      ->check(CLI::IsMember({"transforms", "cancellation", "rs", "prop31"}));
  app.add_subcommand("torsion", "twisted torsion report, write report files");
  app.add_subcommand("report", "full dossier: all suites plus the torsion report");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : InputError::exit_code;
  }

  try {
    RunConfig rc;
    if (opt_config->count() > 0) rc = load_config(config_path);
    if (opt_rho->count() > 0) rc.character_text = rho_text;
    if (opt_len->count() > 0) {
      if (max_length <= 0.0) throw InputError("--max-length must be positive");
      rc.max_geodesic_length = max_length;
    }
    if (opt_word->count() > 0) {
      if (max_word <= 0) throw InputError("--max-word must be positive");
      rc.max_word_length = max_word;
    }
    if (opt_out->count() > 0) rc.output_dir = out_dir;
    if (opt_seed->count() > 0) rc.seed = seed;

    if (app.got_subcommand("spectrum")) return cmd_spectrum(rc);
    if (app.got_subcommand("verify")) return cmd_verify(rc, which);
    if (app.got_subcommand("torsion")) return cmd_torsion(rc);
    return cmd_report(rc);
  } catch (const InputError& e) {
    std::cerr << "input error: " << e.what() << "\n";
    return InputError::exit_code;
  } catch (const PreconditionError& e) {
    std::cerr << "precondition violated: " << e.what() << "\n";
    return PreconditionError::exit_code;
  } catch (const HypothesisError& e) {
    std::cerr << "hypothesis violated: " << e.what() << "\n";
    return HypothesisError::exit_code;
  } catch (const ResidualError& e) {
    std::cerr << "residual failure: " << e.what() << "\n";
    return ResidualError::exit_code;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
}
