#include "autohom/cli.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <iostream>
#include <sstream>

#include "autohom/autohom.hpp"
#include "autohom/canonical.hpp"
#include "autohom/duality.hpp"
#include "autohom/homset.hpp"
#include "autohom/io.hpp"

namespace autohom {

namespace {

using json = nlohmann::ordered_json;

enum class Verdict { Positive, Negative, Unknown, Ok };

const char* verdict_name(Verdict v) {
  switch (v) {
    case Verdict::Positive: return "positive";
    case Verdict::Negative: return "negative";
    case Verdict::Unknown: return "unknown";
    case Verdict::Ok: return "ok";
  }
  return "ok";
}

int exit_code(Verdict v) {
  switch (v) {
    case Verdict::Negative: return kExitNegative;
    case Verdict::Unknown: return kExitUnknown;
    default: return kExitPositive;
  }
}

// Collects a verdict plus fields, rendered either as "key: value" lines or
// as one JSON object.
struct Report {
  Verdict verdict = Verdict::Ok;
  json fields = json::object();
  std::vector<std::string> lines;
  std::string artifact;  // printed alone in text mode when set

  void field(const std::string& key, const json& value, const std::string& text) {
    fields[key] = value;
    lines.push_back(key + ": " + text);
  }
  void field(const std::string& key, const std::string& value) { field(key, value, value); }
  void field(const std::string& key, std::size_t value) { field(key, value, std::to_string(value)); }
  void flag(const std::string& key, bool value) { field(key, value, value ? "yes" : "no"); }
  void block(const std::string& key, const std::string& body) {
    fields[key] = body;
    lines.push_back(key + ":");
    std::istringstream in(body);
    for (std::string l; std::getline(in, l);) lines.push_back("  " + l);
  }
};

struct Options {
  bool json_out = false;
};

std::string dirname(const std::string& path) {
  auto pos = path.find_last_of('/');
  if (pos == std::string::npos) return ".";
  return pos == 0 ? "/" : path.substr(0, pos);
}

template <class F>
auto with_source(const std::string& path, F f) {
  try {
    return f();
  } catch (const ParseError& e) {
    throw ArgumentError(path + ":" + e.what());
  }
}

GeneratorKind generator_kind(const std::string& s) {
  if (s == "clique" || s == "K") return GeneratorKind::Clique;
  if (s == "path" || s == "P") return GeneratorKind::Path;
  if (s == "tournament" || s == "T") return GeneratorKind::TransitiveTournament;
  if (s == "zigzag" || s == "Z") return GeneratorKind::Zigzag;
  if (s == "link" || s == "L") return GeneratorKind::Link;
  throw ArgumentError("unknown generator '" + s + "' (clique, path, tournament, zigzag, link)");
}

int parse_int(const std::string& s) {
  try {
    std::size_t used = 0;
    int v = std::stoi(s, &used);
    if (used == s.size() && v >= 0) return v;
  } catch (const std::exception&) {
  }
  throw ArgumentError("expected a nonnegative number, got '" + s + "'");
}

// FILE, "-" for stdin, or gen:KIND:N
FiniteStructure load_structure(const std::string& arg) {
  if (arg.rfind("gen:", 0) == 0) {
    auto colon = arg.find(':', 4);
    if (colon == std::string::npos) throw ArgumentError("expected gen:KIND:N, got " + arg);
    return generate(generator_kind(arg.substr(4, colon - 4)), parse_int(arg.substr(colon + 1)));
  }
  std::string text = read_input(arg);
  return with_source(arg, [&] { return parse_structure(text); });
}

bool looks_like_presentation(const std::string& text) {
  std::istringstream in(text);
  for (std::string l; std::getline(in, l);) {
    std::istringstream ls(l);
    std::string w;
    if (ls >> w && w == "alphabet") return true;
  }
  return false;
}

// FILE (presentation or finite structure), "-", builtin:NAME or gen:KIND:N
Presentation load_presentation(const std::string& arg) {
  if (arg.rfind("builtin:", 0) == 0) return builtin(arg.substr(8));
  if (arg.rfind("gen:", 0) == 0) return from_finite(load_structure(arg));
  std::string text = read_input(arg);
  if (looks_like_presentation(text))
    return with_source(arg, [&] { return parse_presentation(text, arg == "-" ? "." : dirname(arg)); });
  return from_finite(with_source(arg, [&] { return parse_structure(text); }));
}

// inline s-expression or FILE
Formula load_formula(const std::string& arg) {
  std::string text = !arg.empty() && arg[0] == '(' ? arg : read_input(arg);
  return with_source(arg[0] == '(' ? "<formula>" : arg, [&] { return parse_formula(text); });
}

std::vector<FiniteStructure> load_structures(const std::vector<std::string>& args) {
  std::vector<FiniteStructure> out;
  for (const auto& a : args) out.push_back(load_structure(a));
  return out;
}

std::string assignment_text(const FiniteStructure& a, const FiniteStructure& b, const Assignment& f, json& j) {
  std::string s;
  j = json::object();
  for (Element x = 0; x < a.size(); ++x) {
    j[a.name(x)] = b.name(f[x]);
    s += (x ? " " : "") + a.name(x) + "->" + b.name(f[x]);
  }
  return s;
}

std::string tristate(Tristate t) { return t == Tristate::Yes ? "yes" : t == Tristate::No ? "no" : "unknown"; }

std::string guess_text(const FiniteStructure& a, const FiniteStructure& b, const GuessFunction& g, json& j) {
  std::string s;
  j = json::object();
  for (Element x = 0; x < a.size(); ++x) {
    std::string set = mask_to_string(to_mask(g.image[x]), b);
    j[a.name(x)] = set;
    s += (x ? " " : "") + a.name(x) + "=" + set;
  }
  return s;
}

std::string word_tuple(const Alphabet& al, const WordTuple& t) {
  std::string s = "(";
  for (std::size_t i = 0; i < t.size(); ++i) s += (i ? "," : "") + al.format_word(t[i]);
  return s + ")";
}

// Shortest domain word per label of a classifier.
void classifier_summary(Report& r, const Classifier& c, const FiniteStructure& b) {
  json j = json::object();
  std::vector<std::string> parts;
  for (Mask l : c.labels()) {
    auto w = shortest_accepted(c.level_set(l));
    std::string word = w ? c.alphabet.format_word((*w)[0]) : "";
    j[mask_to_string(l, b)] = word;
    parts.push_back(mask_to_string(l, b) + " e.g. " + word);
  }
  std::string s;
  for (std::size_t i = 0; i < parts.size(); ++i) s += (i ? "; " : "") + parts[i];
  r.field("labels", j, s);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Homomorphism problems on finite and automatic structures"};
  app.name("autohom");
  app.require_subcommand(1);
  app.fallthrough();
  Options opt;
  app.add_flag("--json", opt.json_out, "machine-readable output");

  Report report;
  std::function<void()> action;

  std::string src, tgt, file, pres, formula_arg, coloring_arg, kind, word_s, word_t, sig_spec = "E/2";
  std::vector<std::string> duals;
  bool trace = false, show_classifier = false;
  std::uint64_t budget = 0;
  std::size_t max_size = 4, max_tuples = 0, corpus_size = 3, max_rounds = 64, rbudget = 1000, ebudget = 10000,
              rmax_size = 8, n = 0;

  auto* hom = app.add_subcommand("hom", "search for a homomorphism SRC -> TGT");
  hom->add_option("SRC", src)->required();
  hom->add_option("TGT", tgt)->required();
  hom->add_option("--budget", budget, "search node budget (0 = unlimited)");
  hom->callback([&] {
    action = [&] {
      auto a = load_structure(src), b = load_structure(tgt);
      auto h = find_hom(a, b, budget);
      report.field("nodes", std::size_t(h.nodes));
      if (h.status == HomStatus::Found) {
        report.verdict = Verdict::Positive;
        json j;
        std::string s = assignment_text(a, b, h.map, j);
        report.field("map", j, s);
      } else {
        report.verdict = h.status == HomStatus::NoHom ? Verdict::Negative : Verdict::Unknown;
      }
    };
  });

  auto* core_cmd = app.add_subcommand("core", "core of a structure");
  core_cmd->add_option("S", file)->required();
  core_cmd->callback([&] {
    action = [&] {
      auto a = load_structure(file);
      auto c = core_of(a);
      report.flag("is-core", c.core.size() == a.size());
      json j;
      std::string s = assignment_text(a, c.core, c.retraction, j);
      report.field("retraction", j, s);
      report.block("core", format_structure(c.core));
      report.artifact = format_structure(c.core);
    };
  });

  auto* fv = app.add_subcommand("feder-vardi", "the structure FV(B) on nonempty subsets");
  fv->add_option("B", file)->required();
  fv->callback([&] {
    action = [&] {
      auto s = format_structure(feder_vardi(load_structure(file)));
      report.block("structure", s);
      report.artifact = s;
    };
  });

  auto* td = app.add_subcommand("tree-duality", "decide tree duality of B");
  td->add_option("B", file)->required();
  td->callback([&] {
    action = [&] {
      auto b = load_structure(file);
      auto t = tree_duality(b);
      report.verdict = t.holds ? Verdict::Positive : Verdict::Negative;
      if (t.holds) {
        json j;
        std::string s = assignment_text(feder_vardi(b), b, t.retraction, j);
        report.field("retraction", j, s);
      }
    };
  });

  auto* fd = app.add_subcommand("finite-duality", "decide finite duality of B");
  fd->add_option("B", file)->required();
  fd->callback([&] {
    action = [&] {
      auto r = finite_duality(load_structure(file));
      report.verdict = r.verdict == Tristate::Yes  ? Verdict::Positive
                       : r.verdict == Tristate::No ? Verdict::Negative
                                                   : Verdict::Unknown;
      if (r.power_size) report.field("power-size", r.power_size);
      if (!r.note.empty()) report.field("note", r.note);
    };
  });

  auto* hc = app.add_subcommand("hc", "hyperedge consistency of SRC against TGT");
  hc->add_option("SRC", src)->required();
  hc->add_option("TGT", tgt)->required();
  hc->add_flag("--trace", trace, "print every step");
  hc->callback([&] {
    action = [&] {
      auto a = load_structure(src), b = load_structure(tgt);
      auto d = hc_decides(a, b);
      const auto& tr = d.trace;
      report.field("fixpoint-step", tr.fixpoint_step);
      auto opt_step = [&](const char* key, const std::optional<std::size_t>& s) {
        if (s) report.field(key, *s);
        else report.field(key, nullptr, "none");
      };
      opt_step("first-empty-step", tr.first_empty_step);
      opt_step("all-empty-step", tr.all_empty_step);
      report.flag("sound", d.sound);
      if (!d.all_nonempty) report.verdict = Verdict::Negative;
      else report.verdict = d.sound ? Verdict::Positive : Verdict::Unknown;
      if (trace) {
        json steps = json::array();
        for (std::size_t i = 0; i < tr.steps.size(); ++i) {
          json j;
          std::string s = guess_text(a, b, tr.steps[i], j);
          steps.push_back(j);
          report.lines.push_back("step " + std::to_string(i) + ": " + s);
        }
        report.fields["trace"] = steps;
      }
    };
  });

  auto* co = app.add_subcommand("critical-obstructions", "connected critical obstructions of B");
  co->add_option("B", file)->required();
  co->add_option("--max-size", max_size, "maximum number of elements")->capture_default_str();
  co->add_option("--max-tuples", max_tuples, "maximum number of tuples (default: max-size)");
  co->callback([&] {
    action = [&] {
      auto obs = critical_obstructions(load_structure(file), max_size, max_tuples ? max_tuples : max_size);
      report.field("count", obs.size());
      json arr = json::array();
      for (std::size_t i = 0; i < obs.size(); ++i) {
        arr.push_back(format_structure(obs[i]));
        report.lines.push_back("obstruction " + std::to_string(i + 1) + ":");
        std::istringstream in(arr.back().get<std::string>());
        for (std::string l; std::getline(in, l);) report.lines.push_back("  " + l);
      }
      report.fields["obstructions"] = arr;
    };
  });

  auto* vd = app.add_subcommand("verify-dual", "check a candidate dual of B on all small structures");
  vd->add_option("B", file)->required();
  vd->add_option("--dual", duals, "dual members")->required();
  vd->add_option("--corpus-size", corpus_size, "largest corpus structure")->capture_default_str();
  vd->callback([&] {
    action = [&] {
      auto b = load_structure(file);
      auto corpus = structure_corpus(b.signature(), corpus_size);
      auto r = verify_dual(b, load_structures(duals), corpus);
      report.field("corpus", corpus.size());
      report.verdict = r.ok ? Verdict::Positive : Verdict::Negative;
      if (!r.ok) report.block("counterexample", format_structure(corpus[*r.counterexample]));
    };
  });

  auto* mc = app.add_subcommand("mc", "model check a first-order sentence");
  mc->add_option("PRES", pres)->required();
  mc->add_option("FORMULA", formula_arg, "file, or an inline s-expression")->required();
  mc->callback([&] {
    action = [&] {
      auto p = load_presentation(pres);
      auto f = load_formula(formula_arg);
      report.field("formula", to_string(f));
      report.verdict = model_check(p, f) ? Verdict::Positive : Verdict::Negative;
    };
  });

  auto* hd = app.add_subcommand("hom-dual", "decide PRES -> B given a dual of B");
  hd->add_option("PRES", pres)->required();
  hd->add_option("--dual", duals, "dual members")->required();
  hd->callback([&] {
    action = [&] {
      auto p = load_presentation(pres);
      auto ds = load_structures(duals);
      report.verdict = Verdict::Positive;
      for (std::size_t i = 0; i < ds.size(); ++i)
        if (exists_hom_from_finite(p, ds[i])) {
          report.verdict = Verdict::Negative;
          report.field("maps-in", duals[i]);
          report.block("obstruction", format_structure(ds[i]));
          break;
        }
    };
  });

  auto* ha = app.add_subcommand("hc-auto", "hyperedge consistency on an automatic presentation");
  ha->add_option("PRES", pres)->required();
  ha->add_option("B", tgt)->required();
  ha->add_option("--max-rounds", max_rounds)->capture_default_str();
  ha->add_flag("--trace", trace, "print the classifier of every round");
  ha->add_flag("--show-classifier", show_classifier, "print the final classifier");
  ha->callback([&] {
    action = [&] {
      auto p = load_presentation(pres);
      auto b = load_structure(tgt);
      auto r = hc_auto(p, b, max_rounds, trace);
      report.field("rounds", r.rounds);
      report.field("finite-duality", tristate(r.terminates));
      switch (r.status) {
        case HcAutoStatus::NoHom:
          report.verdict = Verdict::Negative;
          report.field("outcome", "nohom");
          report.field("witness", p.alphabet.format_word(*r.witness));
          break;
        case HcAutoStatus::Fixpoint:
          report.field("outcome", "fixpoint");
          report.flag("sound", r.sound);
          report.verdict = r.sound ? Verdict::Positive : Verdict::Unknown;
          break;
        case HcAutoStatus::BudgetExhausted:
          report.field("outcome", "budget-exhausted");
          report.verdict = Verdict::Unknown;
          break;
      }
      classifier_summary(report, r.classifier, b);
      for (std::size_t i = 0; i < r.trace.size(); ++i)
        report.block("round " + std::to_string(i), format_classifier(r.trace[i], b));
      if (show_classifier) report.block("classifier", format_classifier(r.classifier, b));
    };
  });

  auto* sy = app.add_subcommand("synth-reghom", "synthesize a regular homomorphism PRES -> B");
  sy->add_option("PRES", pres)->required();
  sy->add_option("B", tgt)->required();
  sy->add_option("--max-rounds", max_rounds)->capture_default_str();
  sy->callback([&] {
    action = [&] {
      auto p = load_presentation(pres);
      auto b = load_structure(tgt);
      auto r = synth_regular_hom(p, b, max_rounds);
      report.field("rounds", r.rounds);
      if (!r.note.empty()) report.field("note", r.note);
      if (r.status == SynthStatus::Found) {
        report.verdict = Verdict::Positive;
        report.block("coloring", format_coloring(r.coloring, b));
      } else if (r.status == SynthStatus::NoHom) {
        report.verdict = Verdict::Negative;
        report.field("witness", p.alphabet.format_word(*r.witness));
      } else {
        report.verdict = Verdict::Unknown;
      }
    };
  });

  auto* ch = app.add_subcommand("check-reghom", "check a regular coloring PRES -> B");
  ch->add_option("PRES", pres)->required();
  ch->add_option("B", tgt)->required();
  ch->add_option("COLORING", coloring_arg)->required();
  ch->callback([&] {
    action = [&] {
      auto p = load_presentation(pres);
      auto b = load_structure(tgt);
      std::string text = read_input(coloring_arg);
      auto c = with_source(coloring_arg, [&] { return parse_coloring(text, b); });
      auto r = check_regular_hom(p, b, c);
      report.verdict = r.ok() ? Verdict::Positive : Verdict::Negative;
      if (!r.ok()) {
        report.field("violation", r.message);
        report.field("witness", word_tuple(p.alphabet, r.witness));
      }
    };
  });

  auto* rf = app.add_subcommand("refute", "search for a finite obstruction mapping into PRES");
  rf->add_option("PRES", pres)->required();
  rf->add_option("B", tgt)->required();
  rf->add_option("--budget", rbudget, "candidates to model check")->capture_default_str();
  rf->add_option("--max-size", rmax_size, "largest obstruction size")->capture_default_str();
  rf->callback([&] {
    action = [&] {
      auto r = refute_hom_semi(load_presentation(pres), load_structure(tgt), rbudget, rmax_size);
      report.field("tested", r.tested);
      if (r.status == SemiStatus::Found) {
        report.verdict = Verdict::Negative;
        report.block("obstruction", format_structure(r.obstruction));
      } else {
        report.verdict = Verdict::Unknown;
        report.field("note", r.note);
      }
    };
  });

  auto* en = app.add_subcommand("enum-reghom", "enumerate regular colorings PRES -> B");
  en->add_option("PRES", pres)->required();
  en->add_option("B", tgt)->required();
  en->add_option("--budget", ebudget, "candidates to check")->capture_default_str();
  en->callback([&] {
    action = [&] {
      auto p = load_presentation(pres);
      auto b = load_structure(tgt);
      auto r = enumerate_reghom_semi(p, b, ebudget);
      report.field("candidates", r.candidates);
      if (r.status == SemiStatus::Found) {
        report.verdict = Verdict::Positive;
        report.field("states", r.states);
        report.block("coloring", format_coloring(r.coloring, b));
      } else {
        report.verdict = Verdict::Unknown;
      }
    };
  });

  auto* gadget = app.add_subcommand("gadget", "reduction gadgets");
  gadget->require_subcommand(1);
  auto* gl = gadget->add_subcommand("link", "replace every edge of a graph by a 1-link");
  gl->add_option("GRAPH-PRES", pres)->required();
  gl->add_option("--signature", sig_spec, "target signature, e.g. \"E/2 R/3\"")->capture_default_str();
  gl->callback([&] {
    action = [&] {
      auto sig = parse_structure("signature " + sig_spec + "\ndomain\n").signature();
      auto s = format_presentation(link_gadget(load_presentation(pres), sig));
      report.block("presentation", s);
      report.artifact = s;
    };
  });
  auto* gu = gadget->add_subcommand("undec", "PRES x B^2 with s/t marks");
  gu->add_option("PRES", pres)->required();
  gu->add_option("B", tgt)->required();
  gu->add_option("--s", word_s, "source word")->required();
  gu->add_option("--t", word_t, "target word")->required();
  gu->callback([&] {
    action = [&] {
      auto p = load_presentation(pres);
      auto s = format_presentation(
          undec_gadget(p, load_structure(tgt), p.alphabet.parse_word(word_s), p.alphabet.parse_word(word_t)));
      report.block("presentation", s);
      report.artifact = s;
    };
  });

  auto* gen = app.add_subcommand("generate", "print a generated structure");
  gen->add_option("KIND", kind, "clique, path, tournament, zigzag or link")->required();
  gen->add_option("N", n)->required();
  gen->callback([&] {
    action = [&] {
      auto s = format_structure(generate(generator_kind(kind), int(n)));
      report.block("structure", s);
      report.artifact = s;
    };
  });

  std::vector<std::string> rev(args.rbegin(), args.rend());
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return kExitPositive;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return kExitPositive;
  } catch (const CLI::ParseError& e) {
    err << "error: " << e.what() << "\n" << app.help();
    return kExitInputError;
  }

  std::string command;
  for (auto* sc : app.get_subcommands()) {
    command = sc->get_name();
    for (auto* sub : sc->get_subcommands()) command += " " + sub->get_name();
  }
  try {
    action();
  } catch (const SizeGuardExceeded& e) {
    report.verdict = Verdict::Unknown;
    report.field("note", std::string("size guard: ") + e.what());
  } catch (const std::exception& e) {
    if (opt.json_out) {
      json j = {{"command", command}, {"verdict", "error"}, {"error", e.what()}};
      out << j.dump(2) << "\n";
    }
    err << "error: " << e.what() << "\n";
    return kExitInputError;
  }

  if (opt.json_out) {
    json j = {{"command", command}, {"verdict", verdict_name(report.verdict)}};
    for (auto& [k, v] : report.fields.items()) j[k] = v;
    out << j.dump(2) << "\n";
  } else if (!report.artifact.empty()) {
    out << report.artifact;
  } else {
    out << "verdict: " << verdict_name(report.verdict) << "\n";
    for (const auto& l : report.lines) out << l << "\n";
  }
  return exit_code(report.verdict);
}

}  // namespace autohom
