#pragma once

// The futura command line. run_cli() is the whole program; main() only
// forwards argv and the standard streams.
//
// Exit codes: 0 holds / valid / equivalent / success, 1 counterexample or
// refutation, 2 usage or input error.

#include <optional>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"

#include "futura/error.hpp"
#include "futura/formula.hpp"
#include "futura/model.hpp"
#include "futura/oracle.hpp"
#include "futura/reduction.hpp"
#include "futura/sea_battle.hpp"
#include "futura/semantics.hpp"
#include "futura/serialize.hpp"
#include "futura/syntax.hpp"

namespace futura {

namespace cli {

inline constexpr int kOk = 0;
inline constexpr int kRefuted = 1;
inline constexpr int kUsage = 2;

struct ScaleFlags {
  std::optional<std::size_t> depth;
  std::optional<std::uint32_t> branch;
  std::vector<std::string> atoms;
  std::string strategy = "window";

  void attach(CLI::App& app) {
    app.add_option("--depth", depth, "Model depth (default: largest horizon + 1)");
    app.add_option("--branch", branch, "Maximum branching (default: 2)")->check(CLI::Range(1, 8));
    app.add_option("--atoms", atoms, "Atoms labelling models, comma separated (default: the formulas' atoms, at most 2)")
        ->delimiter(',');
    app.add_option("--strategy", strategy, "window or exhaustive")->check(CLI::IsMember({"window", "exhaustive"}));
  }

  Scale resolve(const std::vector<Formula>& formulas) const {
    Scale s = Scale::defaults_for(formulas);
    if (depth)
      s.depth = *depth;
    if (branch)
      s.max_branch = *branch;
    if (!atoms.empty()) {
      for (const auto& a : atoms)
        if (!detail::is_identifier(a))
          throw ScaleError("invalid atom '" + a + "'");
      s.atoms = atoms;
    }
    s.strategy = strategy == "exhaustive" ? Strategy::Exhaustive : Strategy::Window;
    return s;
  }
};

inline std::string join(const std::vector<std::string>& items, const std::string& sep = " ") {
  std::string out;
  for (std::size_t k = 0; k < items.size(); ++k)
    out += (k ? sep : "") + items[k];
  return out;
}

/// One line per node: id {atoms} -> children.
inline std::string render(const TreeModel& m, const std::string& indent) {
  std::string out;
  for (NodeIndex n = 0; n < m.size(); ++n) {
    out += indent + m.id(n) + " {" + join(m.atoms(n), ",") + "}";
    if (!m.is_leaf(n)) {
      std::vector<std::string> kids;
      for (auto c : m.children(n))
        kids.push_back(m.id(c));
      out += " -> " + join(kids);
    }
    out += '\n';
  }
  return out;
}

inline std::string render(const Verdict& v, const std::string& indent = "") {
  std::ostringstream out;
  if (v.no_counterexample_at_scale()) {
    out << indent << "no counterexample at scale (" << to_string(v.scale) << "; " << v.models_checked
        << " models checked)\n";
    return out.str();
  }
  const auto& c = *v.counterexample;
  out << indent << "counterexample found at scale (" << to_string(v.scale) << "; " << v.models_checked
      << " models checked)\n";
  out << indent << "  timeline: " << join(c.timeline.ids(c.model)) << ", index " << c.index << '\n';
  out << indent << "  model:\n" << render(c.model, indent + "    ");
  return out.str();
}

class Runner {
public:
  Runner(std::ostream& out, std::ostream& err) : out_(out), err_(err) {}

  int run(std::vector<std::string> args) {
    CLI::App app{"Bounded model checking and reduction for a dynamic branching-time logic", "futura"};
    app.require_subcommand(1);
    app.set_help_all_flag("--help-all", "Show help for every subcommand");

    std::string format = "text";
    auto add_format = [&](CLI::App* sub) {
      sub->add_option("--format", format, "text or json")->check(CLI::IsMember({"text", "json"}));
    };

    // eval
    std::string formula_text;
    std::string model_path;
    std::vector<std::string> timeline_ids;
    std::optional<std::size_t> index;
    auto* eval = app.add_subcommand("eval", "Truth of a formula at (model, timeline, index)");
    eval->add_option("formula", formula_text, "Formula")->required();
    eval->add_option("--model", model_path, "Model file")->required();
    eval->add_option("--timeline", timeline_ids, "Node ids from the root to a leaf")->delimiter(',')->required();
    eval->add_option("--index", index, "Position on the timeline")->required();
    add_format(eval);

    // update
    std::string node_id;
    auto* upd = app.add_subcommand("update", "Shrink a model by announcing a formula at a node");
    upd->add_option("formula", formula_text, "Announced formula (no A or E)")->required();
    upd->add_option("--model", model_path, "Model file")->required();
    auto* node_opt = upd->add_option("--node", node_id, "Update point");
    auto* tl_opt = upd->add_option("--timeline", timeline_ids, "Timeline locating the update point")->delimiter(',');
    auto* idx_opt = upd->add_option("--index", index, "Position of the update point on --timeline");
    node_opt->excludes(tl_opt)->excludes(idx_opt);
    tl_opt->needs(idx_opt);
    idx_opt->needs(tl_opt);
    add_format(upd);

    // reduce
    auto* red = app.add_subcommand("reduce", "Rewrite a formula into an equivalent one without announcements");
    red->add_option("formula", formula_text, "Formula")->required();
    add_format(red);

    // checks
    ScaleFlags scale_flags;
    auto* valid = app.add_subcommand("check-valid", "Search for a counterexample to validity");
    valid->add_option("formula", formula_text, "Formula")->required();
    scale_flags.attach(*valid);
    add_format(valid);

    std::vector<std::string> formula_texts;
    auto* entails = app.add_subcommand("check-entails", "Search for a counterexample to premises |= conclusion");
    entails->add_option("formulas", formula_texts, "Premises followed by the conclusion")->required();
    scale_flags.attach(*entails);
    add_format(entails);

    auto* equiv = app.add_subcommand("check-equiv", "Search for a point where two formulas differ");
    equiv->add_option("formulas", formula_texts, "Two formulas")->required()->expected(2);
    scale_flags.attach(*equiv);
    add_format(equiv);

    // enumerate
    std::vector<std::string> atoms{"p"};
    std::uint32_t branch = 2;
    std::size_t depth = 1;
    std::size_t count = 0;
    auto* enumerate = app.add_subcommand("enumerate", "Count (and list) the models of a scale");
    enumerate->add_option("--atoms", atoms, "Atoms, comma separated")->delimiter(',');
    enumerate->add_option("--branch", branch, "Maximum branching")->check(CLI::Range(1, 8));
    enumerate->add_option("--depth", depth, "Model depth")->check(CLI::Range(0, 8));
    enumerate->add_option("--count", count, "Also list the first N models");
    add_format(enumerate);

    // fuzz
    std::uint64_t seed = 1;
    std::size_t max_size = 12;
    std::size_t fuzz_count = 100;
    std::optional<std::size_t> fuzz_depth;
    std::vector<std::string> fuzz_atoms{"p", "q"};
    auto* fuzz = app.add_subcommand("fuzz", "Reduce random formulas and check each result equivalent");
    fuzz->add_option("--count", fuzz_count, "Number of formulas");
    fuzz->add_option("--seed", seed, "Seed of the first formula");
    fuzz->add_option("--max-size", max_size, "Largest formula size")->check(CLI::Range(1, 64));
    fuzz->add_option("--depth", fuzz_depth, "Model depth; formulas keep their horizon within it (default 3)")
        ->check(CLI::Range(0, 4));
    fuzz->add_option("--branch", branch, "Maximum branching")->check(CLI::Range(1, 8));
    fuzz->add_option("--atoms", fuzz_atoms, "Atoms, comma separated")->delimiter(',');
    add_format(fuzz);

    auto* demo = app.add_subcommand("demo-seabattle", "Refute the sea-battle argument on a two-branch model");
    add_format(demo);

    try {
      std::reverse(args.begin(), args.end());
      app.parse(args);
    } catch (const CLI::CallForHelp&) {
      out_ << app.help();
      return kOk;
    } catch (const CLI::CallForAllHelp&) {
      out_ << app.help("", CLI::AppFormatMode::All);
      return kOk;
    } catch (const CLI::ParseError& e) {
      err_ << "error: " << e.what() << '\n';
      return kUsage;
    }
    json_ = format == "json";

    try {
      if (eval->parsed())
        return run_eval(formula_text, model_path, timeline_ids, *index);
      if (upd->parsed()) {
        if (node_id.empty() && timeline_ids.empty())
          throw CLI::ValidationError("update needs --node or --timeline with --index");
        return run_update(formula_text, model_path, node_id, timeline_ids, index);
      }
      if (red->parsed())
        return run_reduce(formula_text);
      if (valid->parsed())
        return run_check("valid", {formula_text}, scale_flags);
      if (entails->parsed())
        return run_check("entails", formula_texts, scale_flags);
      if (equiv->parsed())
        return run_check("equiv", formula_texts, scale_flags);
      if (enumerate->parsed())
        return run_enumerate(atoms, branch, depth, count);
      if (fuzz->parsed())
        return run_fuzz(fuzz_count, seed, max_size, fuzz_depth.value_or(3), branch, fuzz_atoms);
      if (demo->parsed())
        return run_demo();
    } catch (const CLI::ValidationError& e) {
      err_ << "error: " << e.what() << '\n';
      return kUsage;
    } catch (const Error& e) {
      err_ << "error: " << e.what() << '\n';
      return kUsage;
    } catch (const std::invalid_argument& e) {
      err_ << "error: " << e.what() << '\n';
      return kUsage;
    }
    return kUsage;
  }

private:
  int run_eval(const std::string& text, const std::string& path, const std::vector<std::string>& ids,
               std::size_t i) {
    const Formula f = parse(text);
    const TreeModel m = load_model(path);
    const Timeline t = Timeline::from_ids(m, ids);
    const bool truth = holds(m, t, i, f);
    if (json_)
      out_ << Json{{"formula", to_string(f)}, {"branch", ids}, {"index", i}, {"holds", truth}}.dump(2) << '\n';
    else
      out_ << to_string(f) << (truth ? " holds" : " does not hold") << " at index " << i << " of " << join(ids)
           << '\n';
    return truth ? kOk : kRefuted;
  }

  int run_update(const std::string& text, const std::string& path, const std::string& node_id,
                 const std::vector<std::string>& ids, std::optional<std::size_t> index) {
    const Formula f = parse(text);
    const TreeModel m = load_model(path);
    NodeIndex w;
    if (!node_id.empty()) {
      w = m.node(node_id);
    } else {
      const Timeline t = Timeline::from_ids(m, ids);
      if (*index >= t.length())
        throw HorizonExceeded("index " + std::to_string(*index) + " is past the end of the timeline");
      w = t.at(*index);
    }
    const UpdateOutcome outcome = update(m, w, f);
    if (json_) {
      Json j{{"formula", to_string(f)}, {"node", m.id(w)}, {"defined", outcome.defined()}};
      if (outcome.defined()) {
        j["removed"] = outcome.removed;
        j["model"] = to_json(*outcome.model);
      }
      out_ << j.dump(2) << '\n';
    } else if (!outcome.defined()) {
      out_ << "update with " << to_string(f) << " at " << m.id(w) << " is undefined: not achievable\n";
    } else {
      out_ << "update with " << to_string(f) << " at " << m.id(w) << '\n';
      out_ << "removed: " << (outcome.removed.empty() ? "(none)" : join(outcome.removed)) << '\n';
      out_ << "result:\n" << render(*outcome.model, "  ");
    }
    return outcome.defined() ? kOk : kRefuted;
  }

  int run_reduce(const std::string& text) {
    const Formula f = parse(text);
    const Reduction r = reduce_to_xa(f);
    if (json_) {
      out_ << to_json(r, f).dump(2) << '\n';
    } else {
      out_ << "input:  " << to_string(f) << '\n';
      out_ << "result: " << to_string(r.result) << '\n';
      out_ << "trace (" << r.trace.size() << " steps):\n";
      for (const auto& step : r.trace)
        out_ << "  " << step.rule << ": " << to_string(step.before) << " ==> " << to_string(step.after) << '\n';
    }
    return kOk;
  }

  int run_check(const std::string& query, const std::vector<std::string>& texts, const ScaleFlags& flags) {
    std::vector<Formula> fs;
    for (const auto& t : texts)
      fs.push_back(parse(t));
    const Scale scale = flags.resolve(fs);
    Verdict v;
    std::string title;
    if (query == "valid") {
      v = check_valid(fs[0], scale);
      title = "validity of " + to_string(fs[0]);
    } else if (query == "equiv") {
      v = check_equiv(fs[0], fs[1], scale);
      title = "equivalence of " + to_string(fs[0]) + " and " + to_string(fs[1]);
    } else {
      const Formula conclusion = fs.back();
      fs.pop_back();
      v = check_entails(fs, conclusion, scale);
      std::vector<std::string> shown;
      for (const auto& f : fs)
        shown.push_back(to_string(f));
      title = "entailment {" + join(shown, ", ") + "} |= " + to_string(conclusion);
    }
    if (json_)
      out_ << to_json(v, query).dump(2) << '\n';
    else
      out_ << title << '\n' << render(v);
    return v.no_counterexample_at_scale() ? kOk : kRefuted;
  }

  int run_enumerate(const std::vector<std::string>& atoms, std::uint32_t branch, std::size_t depth,
                    std::size_t count) {
    for (const auto& a : atoms)
      if (!detail::is_identifier(a))
        throw ScaleError("invalid atom '" + a + "'");
    const std::uint64_t total = model_count(atoms.size(), branch, depth);
    std::vector<TreeModel> listed;
    if (count > 0) {
      ModelEnumerator::for_each(atoms, branch, depth, [&](const TreeModel& m) {
        listed.push_back(m);
        return listed.size() < count;
      });
    }
    if (json_) {
      Json models = Json::array();
      for (const auto& m : listed)
        models.push_back(to_json(m));
      out_ << Json{{"atoms", atoms}, {"max_branch", branch}, {"depth", depth}, {"count", total}, {"models", models}}
                  .dump(2)
           << '\n';
    } else {
      out_ << total << " models (atoms {" << join(atoms, ",") << "}, branch <= " << branch << ", depth " << depth
           << ")\n";
      for (std::size_t k = 0; k < listed.size(); ++k)
        out_ << "model " << k << ":\n" << render(listed[k], "  ");
    }
    return kOk;
  }

  int run_fuzz(std::size_t count, std::uint64_t seed, std::size_t max_size, std::size_t depth, std::uint32_t branch,
               const std::vector<std::string>& atoms) {
    for (const auto& a : atoms)
      if (!detail::is_identifier(a))
        throw ScaleError("invalid atom '" + a + "'");
    if (atoms.empty())
      throw ScaleError("fuzzing needs at least one atom");
    const FormulaProfile profile{max_size, Fragment::XL, atoms, depth};
    const Scale scale{atoms, branch, depth, Strategy::Window};
    Json failures = Json::array();
    std::uint64_t models = 0;
    for (std::size_t k = 0; k < count; ++k) {
      const Formula f = random_formula(profile, seed + k);
      const Reduction r = reduce_to_xa(f);
      const Verdict v = check_equiv(f, r.result, scale);
      models += v.models_checked;
      if (!v.no_counterexample_at_scale() || r.result.contains_announce())
        failures.push_back(Json{{"seed", seed + k}, {"formula", to_string(f)}, {"reduced", to_string(r.result)}});
    }
    if (json_) {
      out_ << Json{{"count", count},         {"seed", seed},     {"max_size", max_size},
                   {"scale", to_json(scale)}, {"models_checked", models}, {"failures", failures}}
                  .dump(2)
           << '\n';
    } else {
      out_ << "fuzzed " << count << " formulas (seeds " << seed << ".." << seed + count - (count ? 1 : 0)
           << ", size <= " << max_size << ") at scale (" << to_string(scale) << ")\n";
      out_ << failures.size() << " reductions not equivalent; " << models << " models checked\n";
      for (const auto& fl : failures)
        out_ << "  seed " << fl["seed"].get<std::uint64_t>() << ": " << fl["formula"].get<std::string>()
             << " ==> " << fl["reduced"].get<std::string>() << '\n';
    }
    return failures.empty() ? kOk : kRefuted;
  }

  int run_demo() {
    const auto premises = sea_battle::premises();
    const auto conclusion = sea_battle::conclusion();
    const TreeModel m = sea_battle::model();
    std::vector<Formula> columns = premises;
    columns.push_back(conclusion);
    const auto table = sea_battle::truth_table(m, columns, 0);

    bool premises_hold = true;
    bool conclusion_fails = true;
    for (const auto& row : table) {
      for (std::size_t k = 0; k < premises.size(); ++k)
        premises_hold = premises_hold && row.values[k];
      conclusion_fails = conclusion_fails && !row.values.back();
    }

    std::vector<Formula> all = columns;
    const Scale scale = Scale::defaults_for(all);
    const Verdict argument = check_entails(premises, conclusion, scale);

    const Formula probe_premise = sea_battle::probe_premise();
    const Formula probe_conclusion = sea_battle::probe_conclusion();
    const Scale probe_scale = Scale::defaults_for({probe_premise, probe_conclusion});
    const Verdict probe = check_entails({probe_premise}, probe_conclusion, probe_scale);

    if (json_) {
      Json rows = Json::array();
      for (const auto& row : table)
        rows.push_back(Json{{"branch", row.branch}, {"index", 0}, {"values", row.values}});
      std::vector<std::string> headers;
      for (const auto& f : columns)
        headers.push_back(to_string(f));
      out_ << Json{{"model", to_json(m)},
                   {"formulas", headers},
                   {"truth_table", rows},
                   {"premises_hold", premises_hold},
                   {"conclusion_fails", conclusion_fails},
                   {"argument", to_json(argument, "entails")},
                   {"probe", to_json(probe, "entails")}}
                  .dump(2)
           << '\n';
      return kOk;
    }

    out_ << "Sea-battle argument\n";
    for (const auto& p : premises)
      out_ << "  premise:    " << to_string(p) << '\n';
    out_ << "  conclusion: " << to_string(conclusion) << "\n\n";
    out_ << "Two-branch model (s = there is a sea battle):\n" << render(m, "  ") << '\n';
    out_ << "Truth at index 0:\n";
    std::vector<std::string> headers{"timeline"};
    for (const auto& f : columns)
      headers.push_back(to_string(f));
    std::vector<std::size_t> widths;
    for (const auto& h : headers)
      widths.push_back(std::max<std::size_t>(h.size(), 9));
    auto cell = [&](std::string text, std::size_t w) {
      text.resize(w, ' ');
      return text;
    };
    std::string line = " ";
    for (std::size_t k = 0; k < headers.size(); ++k)
      line += " " + cell(headers[k], widths[k]);
    out_ << line << '\n';
    for (const auto& row : table) {
      line = " ";
      line += " " + cell(join(row.branch), widths[0]);
      for (std::size_t k = 0; k < row.values.size(); ++k)
        line += " " + cell(row.values[k] ? "true" : "false", widths[k + 1]);
      out_ << line << '\n';
    }
    out_ << (premises_hold ? "All premises hold" : "Some premise fails") << " and the conclusion "
         << (conclusion_fails ? "fails" : "does not fail") << " on every timeline.\n\n";
    out_ << "Bounded check of the argument:\n" << render(argument, "  ") << '\n';
    out_ << "Probe: {" << to_string(probe_premise) << "} |= " << to_string(probe_conclusion) << " ?\n"
         << render(probe, "  ");
    return kOk;
  }

  std::ostream& out_;
  std::ostream& err_;
  bool json_ = false;
};

} // namespace cli

/// Runs the command line on args (without the program name).
inline int run_cli(std::vector<std::string> args, std::ostream& out, std::ostream& err) {
  return cli::Runner(out, err).run(std::move(args));
}

} // namespace futura
