#pragma once

// The capforge command line. run() is the whole program; tools/capforge.cpp
// only forwards argv. Exit codes: 0 success or verdict true, 1 verdict false,
// 2 usage or input error, 3 resource gate (TooLarge).

#include <algorithm>
#include <fstream>
#include <iostream>
#include <iterator>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <boost/multiprecision/cpp_int.hpp>

#include "capforge/auxcurve.hpp"
#include "capforge/cubic.hpp"
#include "capforge/error.hpp"
#include "capforge/field.hpp"
#include "capforge/indep.hpp"
#include "capforge/io.hpp"
#include "capforge/lift.hpp"
#include "capforge/numtheory.hpp"
#include "capforge/verify.hpp"

namespace capforge::cli {

enum Exit : int { kOk = 0, kFalse = 1, kUsage = 2, kTooLarge = 3 };

struct ScanRow {
  u64 q = 0, m = 0, m1 = 0, m2 = 0;
  bool exact = false, quartic = false;
  u64 size_bound = 0;                     // (m1 + m2)(q - 1) / (m1 m2)
  std::vector<std::pair<unsigned, std::string>> cap_bounds;  // N -> size_bound q^{(N-2)/2}, decimal
  std::optional<u64> s;                   // size of the best maximal 3-independent set found in Z_m
  std::optional<u64> arc_size;            // s (q - 1) / m
};

namespace detail {

inline std::vector<u64> parse_list(const std::string& text) {
  std::vector<u64> out;
  std::stringstream ss(text);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto dash = item.find('-', 1);
    try {
      if (dash == std::string::npos) {
        out.push_back(std::stoull(item));
      } else {
        const u64 lo = std::stoull(item.substr(0, dash)), hi = std::stoull(item.substr(dash + 1));
        if (hi < lo || hi - lo > 100000000) throw Error(Errc::MalformedInput, "bad range " + item);
        for (u64 v = lo; v <= hi; ++v) out.push_back(v);
      }
    } catch (const std::logic_error&) {
      throw Error(Errc::MalformedInput, "not a number list: " + text);
    }
  }
  return out;
}

inline Field make_field(std::optional<u64> q, std::optional<u64> p, std::optional<u64> h) {
  if (p) {
    Field f = Field::build(*p, static_cast<unsigned>(h.value_or(1)));
    if (q && *q != f.q()) throw Error(Errc::MalformedInput, "--q disagrees with --p^--h");
    return f;
  }
  if (!q) throw Error(Errc::MalformedInput, "give --q or --p [--h]");
  return Field::of_order(*q);
}

inline std::string read_input(const std::string& path) {
  if (path == "-") return {std::istreambuf_iterator<char>(std::cin), {}};
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(Errc::MalformedInput, "cannot open " + path);
  return {std::istreambuf_iterator<char>(in), {}};
}

inline void emit(const std::string& text, const std::string& path, std::ostream& out) {
  if (path.empty() || path == "-") {
    out << text;
    return;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) throw Error(Errc::MalformedInput, "cannot write " + path);
  f << text;
}

inline std::string dump(const io::json& j) { return j.dump(2) + "\n"; }

// Smallest maximal 3-independent set we can find in reasonable time.
inline std::optional<indep::IndepSet> best_indep(u64 m, u64 seed) {
  std::optional<indep::IndepSet> best;
  auto take = [&](const indep::IndepSet& s) {
    if (!best || s.members.size() < best->members.size()) best = s;
  };
  try {
    if (m <= 25) take(indep::search(m, m, indep::Strategy::Exhaustive));
    else if (m <= 2000) take(indep::search(m, m, indep::Strategy::Randomized, seed, m <= 200 ? 500 : 20));
  } catch (const Error& e) {
    if (e.code() != Errc::NotFound) throw;
  }
  for (u64 m1 = 2; m1 * m1 <= m && m <= 2000; ++m1) {
    if (m % m1 || std::gcd(m1, m / m1) != 1) continue;
    const auto c = indep::product_candidates(m1, m / m1, 1, seed, 12, 20000);
    if (!c.empty()) take(c.front());
  }
  return best;
}

inline std::string cap_bound(u64 size_bound, u64 q, unsigned N) {
  boost::multiprecision::cpp_int v = size_bound;
  for (unsigned i = 0; i < (N - 2) / 2; ++i) v *= q;
  return v.str();
}

}  // namespace detail

inline std::vector<ScanRow> scan(const std::vector<u64>& qs, const std::vector<unsigned>& Ns,
                                 std::optional<u64> only_m, u64 seed) {
  std::vector<u64> sorted = qs;
  std::sort(sorted.begin(), sorted.end());
  sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
  std::map<u64, std::optional<indep::IndepSet>> indep_cache;
  std::vector<ScanRow> rows;
  for (u64 q : sorted) {
    const auto pp = nt::prime_power(q);
    if (!pp || pp->p <= 3) continue;
    for (u64 m : nt::divisors(q - 1)) {
      if (m <= 1 || std::gcd(m, u64{6}) != 1) continue;
      if (only_m && m != *only_m) continue;
      const GateReport g = check_hypotheses(q, m);
      auto it = indep_cache.find(m);
      if (it == indep_cache.end()) it = indep_cache.emplace(m, detail::best_indep(m, seed)).first;
      for (u64 m1 : nt::divisors(m)) {
        const u64 m2 = m / m1;
        if (m1 > m2 || std::gcd(m1, m2) != 1) continue;
        ScanRow r;
        r.q = q;
        r.m = m;
        r.m1 = m1;
        r.m2 = m2;
        r.exact = g.exact;
        r.quartic = g.quartic;
        r.size_bound = static_cast<u64>(static_cast<unsigned __int128>(m1 + m2) * (q - 1) / (m1 * m2));
        for (unsigned N : Ns) r.cap_bounds.emplace_back(N, detail::cap_bound(r.size_bound, q, N));
        if (it->second) {
          r.s = it->second->members.size();
          r.arc_size = *r.s * ((q - 1) / m);
        }
        rows.push_back(std::move(r));
      }
    }
  }
  return rows;
}

inline io::json to_json(const ScanRow& r) {
  io::json caps = io::json::object();
  // beyond 2^64 the bound is kept exact as a string
  for (const auto& [N, b] : r.cap_bounds) {
    const boost::multiprecision::cpp_int v(b);
    caps[std::to_string(N)] = v <= std::numeric_limits<u64>::max() ? io::json(v.convert_to<u64>()) : io::json(b);
  }
  io::json j{{"q", r.q},       {"m", r.m},           {"m1", r.m1},
             {"m2", r.m2},     {"exact", r.exact},   {"quartic", r.quartic},
             {"size_bound", r.size_bound}, {"cap_bounds", caps}};
  j["s"] = r.s ? io::json(*r.s) : io::json(nullptr);
  j["arc_size"] = r.arc_size ? io::json(*r.arc_size) : io::json(nullptr);
  return j;
}

inline std::string to_csv(const std::vector<ScanRow>& rows, const std::vector<unsigned>& Ns) {
  std::string out = "q,m,m1,m2,exact,quartic,size_bound,s,arc_size";
  for (unsigned N : Ns) out += ",cap_bound_N" + std::to_string(N);
  out += '\n';
  auto opt = [](const std::optional<u64>& v) { return v ? std::to_string(*v) : std::string(); };
  for (const auto& r : rows) {
    out += std::to_string(r.q) + ',' + std::to_string(r.m) + ',' + std::to_string(r.m1) + ',' + std::to_string(r.m2) +
           ',' + (r.exact ? "true" : "false") + ',' + (r.quartic ? "true" : "false") + ',' +
           std::to_string(r.size_bound) + ',' + opt(r.s) + ',' + opt(r.arc_size);
    for (const auto& [N, b] : r.cap_bounds) out += ',' + b;
    out += '\n';
  }
  return out;
}

inline int run(int argc, const char* const* argv, std::ostream& out = std::cout, std::ostream& err = std::cerr) {
  CLI::App app{"capforge: bicovering arcs from the nodal cubic and the caps they lift to"};
  app.set_help_flag("--help", "print this help");  // -h would clash with --h
  app.require_subcommand(1);

  std::optional<u64> q, p, h, m, t, a, b;
  std::string M_text, out_path, input, mode = "full", format = "json", target = "quartic", strategy = "exhaustive";
  std::string q_list, N_list = "4";
  std::string search;
  u64 sample = 10000, seed = 0, max_size = 0;
  unsigned N = 4;
  bool gate = false;

  auto field_opts = [&](CLI::App* s) {
    s->add_option("--q", q, "field order");
    s->add_option("--p", p, "characteristic");
    s->add_option("--h", h, "extension degree");
  };

  auto* construct = app.add_subcommand("construct", "build a union of cosets of the cubic, or search for an arc");
  field_opts(construct);
  construct->add_option("--m", m, "subgroup index, m | q-1");
  construct->add_option("--M", M_text, "residues, e.g. 2,3, or auto");
  construct->add_flag("--gate", gate, "also require gcd(m,6) = 1 and report the gate verdicts");
  construct->add_option("--search", search, "greedy | exhaustive: look for a bicovering arc instead")
      ->check(CLI::IsMember({"greedy", "exhaustive"}));
  construct->add_option("--seed", seed);
  construct->add_option("--max-size", max_size, "largest arc the search considers (default 2q)");
  construct->add_option("--out", out_path);

  auto* verify = app.add_subcommand("verify", "check bicovering of an arc or completeness of a cap");
  verify->add_option("input", input, "arc or cap JSON, - for stdin")->required();
  verify->add_option("--mode", mode)->check(CLI::IsMember({"full", "sampled"}));
  verify->add_option("--sample", sample);
  verify->add_option("--seed", seed);
  verify->add_option("--out", out_path);

  auto* lift = app.add_subcommand("lift", "lift an arc to a cap in AG(N,q)");
  lift->add_option("input", input, "arc JSON, - for stdin")->required();
  lift->add_option("--N", N, "dimension, a multiple of 4");
  lift->add_option("--out", out_path);

  auto* scan_cmd = app.add_subcommand("scan", "tabulate admissible (q, m) with gate verdicts and size bounds");
  scan_cmd->add_option("--q", q_list, "orders: list and ranges, e.g. 31,71,90000-100000")->required();
  scan_cmd->add_option("--m", m, "only this m");
  scan_cmd->add_option("--N", N_list, "dimensions for the cap bounds, e.g. 4,8");
  scan_cmd->add_option("--seed", seed);
  scan_cmd->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
  scan_cmd->add_option("--out", out_path);

  auto* count = app.add_subcommand("count", "count affine points of the auxiliary curves");
  field_opts(count);
  count->add_option("--m", m);
  count->add_option("--a", a);
  count->add_option("--b", b);
  count->add_option("--t", t);
  count->add_option("--target", target)->check(CLI::IsMember({"f", "quartic"}));
  count->add_option("--out", out_path);

  auto* exp = app.add_subcommand("export", "parity-check matrix of a cap");
  exp->add_option("input", input, "cap JSON, - for stdin")->required();
  exp->add_option("--format", format)->check(CLI::IsMember({"json", "csv"}));
  exp->add_option("--out", out_path);

  auto* sind = app.add_subcommand("search-indep", "maximal 3-independent sets in Z_m");
  sind->add_option("--m", m)->required();
  sind->add_option("--strategy", strategy)->check(CLI::IsMember({"exhaustive", "greedy", "randomized", "product"}));
  sind->add_option("--max-size", max_size);
  sind->add_option("--seed", seed);
  sind->add_option("--out", out_path);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kOk : kUsage;
  }

  try {
    if (construct->parsed()) {
      const Field f = detail::make_field(q, p, h);
      if (!search.empty()) {
        const std::size_t limit = max_size ? max_size : 2 * f.q();
        std::optional<std::vector<Point2>> found;
        io::json info;
        if (search == "greedy") {
          const auto r = find_bicovering_arc(f, seed, 2000, limit);
          found = r.arc;
          info = {{"strategy", "greedy"}, {"attempts", r.attempts}};
        } else {
          const auto r = exhaustive_bicovering_search(f, limit);
          if (!r.found.empty()) found = r.found.front();
          info = {{"strategy", "exhaustive"}, {"nodes", r.nodes}, {"min_deficiency", r.min_deficiency}};
        }
        if (!found) {
          err << "no bicovering arc of size <= " << limit << " in AG(2," << f.q() << ") " << info.dump() << "\n";
          return kFalse;
        }
        detail::emit(detail::dump(io::to_json(ArcSet{f, 0, {}, f.primitive_root(), *found})), out_path, out);
        return kOk;
      }
      if (!m) throw Error(Errc::MalformedInput, "construct needs --m (or --search)");
      if (gate) {
        const auto g = check_hypotheses(f.q(), *m);
        err << io::to_json(g).dump() << "\n";
      }
      const NodalCubic cubic(f);
      std::vector<u64> M;
      bool strict = false;
      if (M_text.empty() || M_text == "auto") {
        const auto best = detail::best_indep(*m, seed);
        if (!best) throw Error(Errc::NotFound, "no maximal 3-independent set found in Z_m");
        M = best->members;
        strict = true;
      } else {
        M = detail::parse_list(M_text);
        // without 3-independence the union is not an arc
        if (!indep::verify(*m, M).flags.three_independent)
          throw Error(Errc::NotThreeIndependent, "M has three residues summing to 0 mod m");
      }
      const ArcSet arc = cubic.union_arc(*m, M, strict);
      detail::emit(detail::dump(io::to_json(arc)), out_path, out);
      return kOk;
    }

    if (verify->parsed()) {
      const auto j = io::parse(detail::read_input(input));
      VerifyReport rep;
      Field f = io::field_from_json(j);
      if (io::is_cap_json(j)) {
        if (mode != "full") throw Error(Errc::MalformedInput, "caps are verified in full mode only");
        const auto cap = io::cap_from_json(j);
        f = cap.field;
        rep = verify_complete_cap(f, cap.points);
      } else {
        const auto arc = io::arc_from_json(j);
        f = arc.field;
        rep = mode == "full" ? verify_bicovering_full(f, arc.points)
                             : verify_bicovering_sampled(f, arc.points, sample, seed);
      }
      detail::emit(detail::dump(io::to_json(f, rep)), out_path, out);
      return rep.verdict ? kOk : kFalse;
    }

    if (lift->parsed()) {
      const auto arc = io::arc_from_json(io::parse(detail::read_input(input)));
      detail::emit(detail::dump(io::to_json(lift_arc(arc, N))), out_path, out);
      return kOk;
    }

    if (scan_cmd->parsed()) {
      std::vector<unsigned> Ns;
      for (u64 n : detail::parse_list(N_list)) {
        if (n < 4 || n % 4) throw Error(Errc::BadDimension, "N must be a positive multiple of 4");
        Ns.push_back(static_cast<unsigned>(n));
      }
      const auto rows = scan(detail::parse_list(q_list), Ns, m, seed);
      if (format == "csv") {
        detail::emit(to_csv(rows, Ns), out_path, out);
      } else {
        io::json arr = io::json::array();
        for (const auto& r : rows) arr.push_back(to_json(r));
        detail::emit(detail::dump(arr), out_path, out);
      }
      return kOk;
    }

    if (count->parsed()) {
      const Field f = detail::make_field(q, p, h);
      if (!a || !b || !t) throw Error(Errc::MalformedInput, "count needs --a, --b and --t");
      const Element ea = f.element(*a), eb = f.element(*b), et = f.element(*t);
      u64 n = 0, genus = 1, slack = 8;
      if (target == "quartic") {
        if (et.code == 0) throw Error(Errc::PreconditionNotMet, "t must be nonzero");
        n = aux::count_quartic_points(f, ea, eb, et);
      } else {
        if (!m) throw Error(Errc::MalformedInput, "count --target f needs --m");
        const aux::CurveParams cp{ea, eb, et, *m};
        aux::validate(f, cp, true);
        n = aux::count_curve_points(f, cp);
        genus = 3 * *m * *m - 3 * *m + 1;
        slack = 8 * *m;
      }
      const u64 half = nt::isqrt(4 * genus * genus * f.q()) + slack;
      const io::json j{{"q", f.q()},
                       {"target", target},
                       {"count", n},
                       {"genus_bound", genus},
                       {"window", {f.q() + 1 > half ? f.q() + 1 - half : 0, f.q() + 1 + half}},
                       {"in_window", aux::within_hasse_weil(n, f.q(), genus, slack)}};
      detail::emit(detail::dump(j), out_path, out);
      return kOk;
    }

    if (exp->parsed()) {
      const auto cap = io::cap_from_json(io::parse(detail::read_input(input)));
      const auto H = export_parity_check(cap.field, cap.points, cap.N);
      std::optional<u64> hash;
      if (cap.arc) hash = arc_hash(cap.field, cap.arc->points);
      if (format == "csv") detail::emit(io::to_csv(H), out_path, out);
      else detail::emit(detail::dump(io::to_json(H, cap.N, hash)), out_path, out);
      return kOk;
    }

    if (sind->parsed()) {
      const std::size_t limit = max_size ? max_size : *m;
      io::json j;
      if (strategy == "product") {
        io::json arr = io::json::array();
        for (u64 m1 = 2; m1 * m1 <= *m; ++m1) {
          if (*m % m1 || std::gcd(m1, *m / m1) != 1) continue;
          for (const auto& s : indep::product_candidates(m1, *m / m1, 4, seed)) {
            if (s.members.size() > limit) continue;
            io::json e = io::to_json(s);
            e["m1"] = m1;
            e["m2"] = *m / m1;
            arr.push_back(std::move(e));
          }
        }
        if (arr.empty()) throw Error(Errc::NotFound, "no product-shaped maximal 3-independent set");
        j = arr;
      } else {
        const auto st = strategy == "exhaustive" ? indep::Strategy::Exhaustive
                        : strategy == "greedy"   ? indep::Strategy::Greedy
                                                 : indep::Strategy::Randomized;
        j = io::to_json(indep::search(*m, limit, st, seed));
      }
      detail::emit(detail::dump(j), out_path, out);
      return kOk;
    }
  } catch (const Error& e) {
    err << "error: " << e.what() << "\n";
    if (e.code() == Errc::TooLarge) return kTooLarge;
    return e.code() == Errc::NotFound ? kFalse : kUsage;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kUsage;
  }
  return kUsage;
}

}  // namespace capforge::cli
