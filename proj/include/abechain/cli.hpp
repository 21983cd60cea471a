#pragma once

// Command-line front end. One subcommand per scenario; every option can also
// come from a key = value config file (command-line flags win). Exit codes:
// 0 all claims pass, 1 a claim failed, 2 invalid configuration, 3 internal
// error.

#include <algorithm>
#include <cstdint>
#include <iostream>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "report.hpp"
#include "verification.hpp"

namespace abechain {

namespace detail {

inline std::optional<std::size_t> parse_index(const std::string& s) {
  if (s.empty() || s.size() > 6) return std::nullopt;
  std::size_t v = 0;
  for (char c : s) {
    if (c < '0' || c > '9') return std::nullopt;
    v = v * 10 + static_cast<std::size_t>(c - '0');
  }
  return v;
}

inline std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::size_t from = 0;
  while (true) {
    const std::size_t at = s.find(sep, from);
    if (at == std::string::npos) {
      out.push_back(s.substr(from));
      return out;
    }
    out.push_back(s.substr(from, at - from));
    from = at + 1;
  }
}

// A link given either as a 1-based id, as two single-letter node labels
// ("BF"), or as a dash-separated label pair ("B-F").
inline std::size_t resolve_link_spec(const ChainConfig& cfg, const std::string& s) {
  if (auto id = parse_index(s)) {
    (void)cfg.link(*id);
    return *id;
  }
  const std::size_t dash = s.find('-');
  if (dash != std::string::npos) return link_id_for_nodes(cfg, s.substr(0, dash), s.substr(dash + 1));
  if (s.size() == 2) return link_id_for_nodes(cfg, s.substr(0, 1), s.substr(1, 1));
  throw std::invalid_argument("cannot parse link '" + s + "'");
}

// Substitutions arrive as "i,j" items on the command line but config files
// split the comma themselves, so flatten every item and re-pair in order.
inline std::vector<std::pair<std::size_t, std::size_t>> parse_substitutions(
    const std::vector<std::string>& raw) {
  std::vector<std::size_t> ids;
  for (const auto& item : raw)
    for (const auto& part : split(item, ',')) {
      const auto id = parse_index(part);
      if (!id) throw std::invalid_argument("cannot parse substitution '" + item + "' (expected i,j)");
      ids.push_back(*id);
    }
  if (ids.size() % 2 != 0)
    throw std::invalid_argument("substitutions come in link pairs i,j");
  std::vector<std::pair<std::size_t, std::size_t>> out;
  for (std::size_t k = 0; k + 1 < ids.size(); k += 2) out.emplace_back(ids[k], ids[k + 1]);
  return out;
}

}  // namespace detail

inline int exit_code_for(const CertificationReport& rep) { return rep.all_pass() ? 0 : 1; }

inline int run_cli(int argc, const char* const* argv, std::ostream& out = std::cout,
                   std::ostream& err = std::cerr) {
  CLI::App app{"simulate and certify teleportation chains built around the four-party "
               "activable bound-entangled state"};
  app.name("abechain");
  app.require_subcommand(0, 1);
  app.set_config("--config", "", "read options from a key = value file");

  const std::vector<std::string> scenario_names = {"smolin", "chain",  "fig2",    "fig3",
                                                   "activation", "relay", "remark3"};
  std::string scenario_opt;
  std::string format = "text";
  std::string order = "forward";
  std::string mode = "exhaustive";
  double tol_eq = 1e-12;
  double tol_ppt = 1e-10;
  std::size_t chain_length = 3;
  std::uint64_t seed = 0;
  std::vector<std::string> substitute_raw;
  std::vector<std::string> remove_raw;

  app.add_option("--scenario", scenario_opt, "scenario to run when no subcommand is given")
      ->check(CLI::IsMember(scenario_names));
  app.add_option("--format", format, "report format")->check(CLI::IsMember({"text", "json"}));
  app.add_option("--tolerance-eq", tol_eq, "entrywise tolerance for exact-equality claims")
      ->check(CLI::PositiveNumber);
  app.add_option("--tolerance-ppt", tol_ppt, "eigenvalue tolerance for PPT certificates")
      ->check(CLI::PositiveNumber);
  auto* order_opt = app.add_option(
      "--order", order, "measurement order: forward, reverse, all, or a comma list of node labels");
  auto* len_opt =
      app.add_option("--chain-length", chain_length, "number of links (chain scenario)")->check(CLI::Range(1, 30));
  auto* sub_opt = app.add_option("--substitute", substitute_raw,
                                 "replace singlet links i,j by a four-party state (repeatable)");
  auto* rm_opt = app.add_option("--remove-link", remove_raw, "discard a singlet link (id or node pair like BF)");
  app.add_option("--seed", seed, "seed for sampled mode");
  app.add_option("--mode", mode, "outcome handling")->check(CLI::IsMember({"exhaustive", "sampled"}));

  for (const auto& name : scenario_names) {
    CLI::App* sub = app.add_subcommand(name, "run the " + name + " scenario");
    sub->fallthrough();
  }

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp&) {
    out << app.help();
    return 0;
  } catch (const CLI::CallForAllHelp&) {
    out << app.help("", CLI::AppFormatMode::All);
    return 0;
  } catch (const CLI::ParseError& e) {
    err << "configuration error: " << e.what() << "\n";
    return 2;
  }

  std::string scenario = scenario_opt;
  for (const CLI::App* sub : app.get_subcommands()) scenario = sub->get_name();
  if (scenario.empty()) {
    err << "configuration error: no scenario selected (see --help)\n";
    return 2;
  }

  const bool is_chain = scenario == "chain";
  if (!is_chain) {
    if (len_opt->count() > 0 || sub_opt->count() > 0) {
      err << "configuration error: --chain-length and --substitute apply only to the chain scenario\n";
      return 2;
    }
    if (mode == "sampled") {
      err << "configuration error: sampled mode is only valid for the chain scenario\n";
      return 2;
    }
    if (order_opt->count() > 0 && order != "forward") {
      err << "configuration error: --order is only supported for the chain scenario\n";
      return 2;
    }
    if (rm_opt->count() > 0 && scenario != "remark3") {
      err << "configuration error: --remove-link applies only to the chain and remark3 scenarios\n";
      return 2;
    }
  }

  const Tolerances tol{tol_eq, tol_ppt};
  try {
    CertificationReport rep;
    if (scenario == "smolin") {
      rep = certify_smolin(tol);
    } else if (scenario == "fig2") {
      rep = certify_fig2(tol);
    } else if (scenario == "fig3") {
      rep = certify_fig3(tol);
    } else if (scenario == "activation") {
      rep = certify_activation(tol);
    } else if (scenario == "relay") {
      rep = certify_relay(tol);
    } else if (scenario == "remark3") {
      std::size_t removed = 0;
      if (!remove_raw.empty()) {
        if (remove_raw.size() > 1) throw std::invalid_argument("remark3 removes at most one link per run");
        Chain probe = build_chain(7, spaced_chain_labels());
        substitute_abe(probe, 1, 5);
        substitute_abe(probe, 3, 7);
        removed = detail::resolve_link_spec(probe.config, remove_raw.front());
        const auto connecting = remark3_connecting_links();
        if (std::find(connecting.begin(), connecting.end(), removed) == connecting.end())
          throw std::invalid_argument("only a connecting singlet (BF, GC, or DH) can be removed here");
      }
      rep = certify_remark3(removed, tol);
    } else {
      ChainRunOptions copt;
      copt.length = chain_length;
      copt.substitutions = detail::parse_substitutions(substitute_raw);
      Chain probe = build_chain(copt.length);
      for (const auto& [i, j] : copt.substitutions) substitute_abe(probe, i, j);
      for (const auto& r : remove_raw) {
        const std::size_t id = detail::resolve_link_spec(probe.config, r);
        remove_link(probe, id);
        copt.removed_links.push_back(id);
      }
      const std::vector<std::size_t> participants = chain_participants(probe);
      if (order == "forward") {
        // default single run
      } else if (order == "reverse") {
        std::vector<std::size_t> rev = participants;
        std::reverse(rev.begin(), rev.end());
        copt.orders.push_back(std::move(rev));
      } else if (order == "all") {
        if (chain_length > 6)
          throw std::invalid_argument("the 'all' ordering is only valid with chain length at most six");
        std::vector<std::size_t> perm = participants;
        std::sort(perm.begin(), perm.end());
        do {
          copt.orders.push_back(perm);
        } while (std::next_permutation(perm.begin(), perm.end()));
      } else {
        std::vector<std::size_t> picked;
        for (const auto& label : detail::split(order, ',')) {
          const auto& labels = probe.config.node_labels;
          const auto it = std::find(labels.begin(), labels.end(), label);
          if (it == labels.end()) throw std::invalid_argument("unknown node label '" + label + "' in --order");
          picked.push_back(static_cast<std::size_t>(it - labels.begin()));
        }
        copt.orders.push_back(std::move(picked));
      }
      copt.sampled = mode == "sampled";
      copt.seed = seed;
      if (copt.sampled && copt.orders.size() > 1)
        throw std::invalid_argument("sampled mode runs a single ordering");
      rep = certify_chain(copt, tol);
    }
    out << (format == "json" ? report_to_json_text(rep) : report_to_text(rep));
    return exit_code_for(rep);
  } catch (const std::invalid_argument& e) {
    err << "configuration error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    err << "internal error: " << e.what() << "\n";
    return 3;
  }
}

}  // namespace abechain
