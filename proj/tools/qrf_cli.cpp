// Command-line scenario runner: overlap distribution tables, end-to-end
// frame-change reports, classical-limit sweeps, and balanced homodyne
// detection tables. Output is CSV (default) or JSON on stdout or --out.
//
// Exit codes: 0 success, 2 configuration error, 3 numerical contract
// violation (a pipeline/oracle residual or closed-form/oracle mismatch
// beyond tolerance).

#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "qrf/qrf.hpp"

namespace {

using namespace qrf;

struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct ContractViolation : std::runtime_error {
  using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::string cur;
  for (char c : s) {
    if (c == sep) {
      out.push_back(cur);
      cur.clear();
    } else {
      cur += c;
    }
  }
  out.push_back(cur);
  return out;
}

double parse_number(const std::string& key, const std::string& s) {
  try {
    std::size_t pos = 0;
    double v = std::stod(s, &pos);
    if (pos != s.size()) throw std::invalid_argument(s);
    return v;
  } catch (const std::exception&) {
    throw ConfigError(key + ": expected a number, got '" + s + "'");
  }
}

GroupElement parse_group_element(const std::string& key, const std::string& s, Group group) {
  if (group == Group::U1) return GroupElement::u1(parse_number(key, s));
  std::string body = s;
  bool euler = false;
  if (body.rfind("euler:", 0) == 0) {
    euler = true;
    body = body.substr(6);
  } else if (body.rfind("polar:", 0) == 0) {
    body = body.substr(6);
  }
  const auto parts = split(body, ',');
  if (parts.size() != 3)
    throw ConfigError(key + ": SU(2) elements need three angles 'polar:w,t,p' or 'euler:a,b,g'");
  const double x = parse_number(key, parts[0]);
  const double y = parse_number(key, parts[1]);
  const double z = parse_number(key, parts[2]);
  return euler ? GroupElement::su2_euler(x, y, z) : GroupElement::su2_polar(x, y, z);
}

/// System presets: 'plus' / 'fock:K[@CUT]' / 'amps:re:im,...' for U(1);
/// 'spin:TWOJ[:alpha,beta,gamma]' / 'amps:...@spin:TWOJ' for SU(2).
Ket parse_system(const std::string& key, const std::string& s, Group group) {
  auto renormalize = [&](Ket k) {
    const double n = k.amp.norm();
    if (n == 0.0) throw ConfigError(key + ": zero state vector");
    if (std::abs(n - 1.0) > 1e-9) {
      std::cerr << "warning: " << key << " renormalized (norm was " << n << ")\n";
      k.amp /= n;
    }
    return k;
  };
  if (group == Group::U1) {
    if (s == "plus") {
      Eigen::VectorXcd v(2);
      v << 1.0 / std::sqrt(2.0), 1.0 / std::sqrt(2.0);
      return Ket(SpaceSpec::fock(1), v);
    }
    if (s.rfind("fock:", 0) == 0) {
      const auto parts = split(s.substr(5), '@');
      const int k = static_cast<int>(parse_number(key, parts[0]));
      const int cut = parts.size() > 1 ? static_cast<int>(parse_number(key, parts[1])) : k;
      if (k < 0 || cut < k) throw ConfigError(key + ": need 0 <= K <= cutoff");
      Eigen::VectorXcd v = Eigen::VectorXcd::Zero(cut + 1);
      v[k] = 1.0;
      return Ket(SpaceSpec::fock(cut), v);
    }
    if (s.rfind("amps:", 0) == 0) {
      const auto entries = split(s.substr(5), ',');
      Eigen::VectorXcd v(entries.size());
      for (std::size_t i = 0; i < entries.size(); ++i) {
        const auto pair = split(entries[i], ':');
        const double re = parse_number(key, pair[0]);
        const double im = pair.size() > 1 ? parse_number(key, pair[1]) : 0.0;
        v[i] = complexd(re, im);
      }
      return renormalize(Ket(SpaceSpec::fock(static_cast<int>(entries.size()) - 1), v));
    }
    throw ConfigError(key + ": unknown U(1) system '" + s + "'");
  }
  if (s.rfind("spin:", 0) == 0) {
    const auto parts = split(s.substr(5), ':');
    const int two_j = static_cast<int>(parse_number(key, parts[0]));
    if (two_j < 0) throw ConfigError(key + ": 2j must be non-negative");
    if (parts.size() == 1) return su2_coherent(two_j, 0.0, 0.0, 0.0);
    const auto ang = split(parts[1], ',');
    if (ang.size() != 3) throw ConfigError(key + ": spin coherent state needs alpha,beta,gamma");
    return su2_coherent(two_j, parse_number(key, ang[0]), parse_number(key, ang[1]),
                        parse_number(key, ang[2]));
  }
  if (s.rfind("amps:", 0) == 0) {
    const auto entries = split(s.substr(5), ',');
    Eigen::VectorXcd v(entries.size());
    for (std::size_t i = 0; i < entries.size(); ++i) {
      const auto pair = split(entries[i], ':');
      v[i] = complexd(parse_number(key, pair[0]),
                      pair.size() > 1 ? parse_number(key, pair[1]) : 0.0);
    }
    return renormalize(Ket(SpaceSpec::spin(static_cast<int>(entries.size()) - 1), v));
  }
  throw ConfigError(key + ": unknown SU(2) system '" + s + "'");
}

struct CommonOpts {
  std::string group = "u1";
  std::string family;
  double s_a = 1.0;
  double s_b = 1.0;
  std::string system;
  std::string orientation_a;
  std::string outcome;
  int outcome_grid = 64;
  int bandlimit = -1;
  std::string out_path;
  std::string format = "csv";
};

Group parse_group_tag(const std::string& g) {
  if (g == "u1") return Group::U1;
  if (g == "su2" || g == "su2-coset") return Group::SU2;
  throw ConfigError("group: must be u1, su2, or su2-coset");
}

FrameSpec resolve_family(const CommonOpts& o, double size) {
  std::string fam = o.family;
  if (fam.empty()) fam = o.group == "u1" ? "pe" : (o.group == "su2" ? "fiducial" : "coherent");
  if (o.group == "u1") {
    if (fam == "pe") return FrameSpec::phase_eigenstate(static_cast<int>(size));
    if (fam == "cs") return FrameSpec::u1_coherent(size);
    throw ConfigError("family: u1 families are pe|cs");
  }
  if (o.group == "su2") {
    if (fam == "fiducial") return FrameSpec::su2_fiducial(static_cast<int>(size));
    throw ConfigError("family: su2 family is fiducial");
  }
  if (fam == "coherent") {
    const int two_j = static_cast<int>(std::lround(2.0 * size));
    return FrameSpec::su2_coherent(two_j);
  }
  throw ConfigError("family: su2-coset family is coherent");
}

void emit(const Table& t, const CommonOpts& o) {
  std::ostringstream body;
  if (o.format == "csv")
    write_csv(body, t);
  else if (o.format == "json")
    write_json(body, t);
  else
    throw ConfigError("format: must be csv or json");
  if (o.out_path.empty()) {
    std::cout << body.str();
  } else {
    std::ofstream f(o.out_path, std::ios::binary);
    if (!f) throw ConfigError("out: cannot open '" + o.out_path + "'");
    f << body.str();
  }
}

void echo_config(Table& t, const CommonOpts& o, const std::string& subcommand) {
  t.meta("tool", std::string("qrf ") + version);
  t.meta("subcommand", subcommand);
  t.meta("group", o.group);
  if (!o.family.empty()) t.meta("family", o.family);
  t.meta("s_a", o.s_a);
  t.meta("s_b", o.s_b);
  if (!o.system.empty()) t.meta("system", o.system);
  if (!o.orientation_a.empty()) t.meta("orientation_a", o.orientation_a);
  if (!o.outcome.empty()) t.meta("outcome", o.outcome);
}

// ---------------------------------------------------------------- overlap --

int run_overlap(const CommonOpts& o, int grid_points) {
  Table t;
  echo_config(t, o, "overlap");
  t.meta("grid_points", double(grid_points));

  if (o.group == "u1") {
    const std::string fam = o.family.empty() ? "pe" : o.family;
    t.columns = {"g", "overlap", "family", "s"};
    if (fam == "pe") {
      const int s = static_cast<int>(o.s_a);
      const FrameSpec f = FrameSpec::phase_eigenstate(s);
      for (int i = 0; i < grid_points; ++i) {
        const double g = -pi + two_pi * i / (grid_points - 1);
        const double val =
            (s + 1.0) *
            std::norm(overlap_closed_form(f, GroupElement::u1(g), GroupElement::u1(0.0)));
        auto& row = t.new_row();
        row = {format_double(g), format_double(val), "pe", format_double(double(s))};
      }
    } else if (fam == "cs") {
      const Ket cs = u1_coherent(o.s_a, 0.0);
      t.meta("cs_cutoff", double(cs.space.dim() - 1));
      for (int i = 0; i < grid_points; ++i) {
        const double g = -pi + two_pi * i / (grid_points - 1);
        complexd acc = 0.0;
        for (Eigen::Index k = 0; k < cs.amp.size(); ++k)
          acc += cs.amp[k] * std::polar(1.0, -double(k) * g);
        auto& row = t.new_row();
        row = {format_double(g), format_double(std::norm(acc)), "cs", format_double(o.s_a)};
      }
    } else {
      throw ConfigError("family: u1 overlap families are pe|cs");
    }
  } else if (o.group == "su2") {
    const int s = static_cast<int>(o.s_a);
    const FrameSpec f = FrameSpec::su2_fiducial(s);
    const double d = frame_dimension_factor(f);
    t.columns = {"omega", "overlap", "family", "s"};
    for (int i = 0; i < grid_points; ++i) {
      const double w = pi * i / (grid_points - 1);
      const double val = d * std::norm(overlap_closed_form(f, GroupElement::identity(Group::SU2),
                                                           GroupElement::su2_polar(w, 0, 0)));
      auto& row = t.new_row();
      row = {format_double(w), format_double(val), "fiducial", format_double(double(s))};
    }
  } else if (o.group == "su2-coset") {
    const int two_j = static_cast<int>(std::lround(2.0 * o.s_a));
    t.columns = {"beta", "overlap", "family", "j"};
    for (int i = 0; i < grid_points; ++i) {
      const double b = pi * i / (grid_points - 1);
      const double val = std::pow(std::cos(0.5 * b), 2.0 * two_j);  // |<e|g>|^2
      auto& row = t.new_row();
      row = {format_double(b), format_double(val), "coherent", format_double(0.5 * two_j)};
    }
  } else {
    throw ConfigError("group: must be u1, su2, or su2-coset");
  }
  emit(t, o);
  return 0;
}

// ----------------------------------------------------------- change-frame --

int run_change_frame(const CommonOpts& o, bool residual_all) {
  const Group group = parse_group_tag(o.group);
  const FrameSpec frame_a = resolve_family(o, o.s_a);
  const FrameSpec frame_b = resolve_family(o, o.s_b);
  if (!uniform_twirl_family(frame_a.family) || !uniform_twirl_family(frame_b.family))
    throw ConfigError("family: the change-frame measurement needs pe, fiducial, or coherent "
                      "(su2) frames");
  const std::string system_str = o.system.empty() ? (group == Group::U1 ? "plus" : "spin:2")
                                                  : o.system;
  const Ket psi_s = parse_system("system", system_str, group);
  const DensityOperator rho_s = projector(psi_s);
  const GroupElement a = o.orientation_a.empty()
                             ? GroupElement::identity(group)
                             : parse_group_element("orientation-a", o.orientation_a, group);
  const GroupElement h = o.outcome.empty() ? GroupElement::identity(group)
                                           : parse_group_element("outcome", o.outcome, group);

  int band = procedure_bandlimit(psi_s.space, frame_a, frame_b);
  if (o.bandlimit >= 0) {
    if (o.bandlimit < band)
      throw ConfigError("bandlimit: override below the exactness requirement " +
                        std::to_string(band));
    band = o.bandlimit;
  }
  const bool half = psi_s.space.has_odd_charge();
  const HaarGrid grid = haar_grid(group, band, group == Group::SU2 && half);

  ProcedureSpec spec{rho_s, frame_a, frame_b, a, h, std::nullopt, grid};
  const DensityOperator sigma = initial_state(spec);
  const InstrumentOutcome out = instrument(sigma, frame_a, frame_b, h, grid);
  const DensityOperator prediction = predicted_final_state(spec);
  const double residual =
      out.post_state ? trace_distance(*out.post_state, prediction) : 1.0;
  const DensityOperator rho_prime = recover_encode_kernel(rho_s, frame_a, a, grid);

  Table t;
  echo_config(t, o, "change-frame");
  t.meta("bandlimit", double(band));
  t.meta("haar_nodes", double(grid.size()));
  t.meta("outcome_grid", double(o.outcome_grid));

  // outcome-density sweep
  std::vector<GroupElement> hs;
  if (group == Group::U1) {
    for (int i = 0; i < o.outcome_grid; ++i) hs.push_back(GroupElement::u1(two_pi * i / o.outcome_grid));
  } else {
    const int stride = std::max(1, grid.size() / o.outcome_grid);
    for (int i = 0; i < grid.size() && int(hs.size()) < o.outcome_grid; i += stride)
      hs.push_back(grid.nodes[i]);
  }
  t.columns = residual_all ? std::vector<std::string>{"h", "p", "residual"}
                           : std::vector<std::string>{"h", "p"};
  double p_dev = 0.0, res_max = residual;
  for (const auto& hi : hs) {
    const double p = outcome_density(sigma, frame_a, frame_b, hi, grid);
    p_dev = std::max(p_dev, std::abs(p - 1.0));
    std::string h_str;
    if (group == Group::U1) {
      h_str = format_double(hi.theta());
    } else {
      const PolarAngles pa = hi.polar();
      h_str = format_double(pa.omega) + ";" + format_double(pa.theta) + ";" + format_double(pa.phi);
    }
    auto& row = t.new_row();
    if (residual_all) {
      ProcedureSpec si = spec;
      si.outcome_h = hi;
      const InstrumentOutcome oi = instrument(sigma, frame_a, frame_b, hi, grid);
      const double ri =
          oi.post_state ? trace_distance(*oi.post_state, predicted_final_state(si)) : 1.0;
      res_max = std::max(res_max, ri);
      row = {h_str, format_double(p), format_double(ri)};
    } else {
      row = {h_str, format_double(p)};
    }
  }
  t.footer("p_h_at_outcome", out.outcome_density);
  t.footer("fidelity", fidelity(rho_s, rho_prime));
  t.footer("trace_distance", trace_distance(rho_s, rho_prime));
  t.footer("pipeline_oracle_residual", residual);
  t.footer("residual_max", res_max);
  t.footer("p_max_deviation", p_dev);
  emit(t, o);
  if (res_max > 1e-9)
    throw ContractViolation("pipeline/oracle residual " + format_double(res_max) +
                            " exceeds 1e-9");
  return 0;
}

// ------------------------------------------------------------ limit-sweep --

int run_limit_sweep(const CommonOpts& o, const std::string& sizes_str) {
  std::vector<double> sizes;
  for (const auto& s : split(sizes_str, ',')) sizes.push_back(parse_number("sizes", s));
  if (sizes.empty()) throw ConfigError("sizes: need a comma-separated list");

  Table t;
  echo_config(t, o, "limit-sweep");
  t.meta("sizes", sizes_str);

  if (o.group == "u1") {
    const Ket psi_s = parse_system("system", o.system.empty() ? "plus" : o.system, Group::U1);
    const DensityOperator rho_s = projector(psi_s);
    t.columns = {"s", "fidelity", "trace_distance"};
    double prev = -1.0;
    bool monotone = true;
    for (double sz : sizes) {
      const int s = static_cast<int>(sz);
      const FrameSpec f = FrameSpec::phase_eigenstate(s);
      const HaarGrid grid = haar_grid(Group::U1, s + psi_s.space.max_charge());
      const DensityOperator enc = encode(rho_s, projector(phase_eigenstate(s, 0.0)), grid);
      const DensityOperator rec = recover(enc, f, grid);
      const double fid = fidelity(rho_s, rec);
      monotone = monotone && fid > prev;
      prev = fid;
      auto& row = t.new_row();
      row = {format_double(double(s)), format_double(fid),
             format_double(trace_distance(rho_s, rec))};
    }
    auto& row = t.new_row();
    row = {"inf", format_double(fidelity(rho_s, rho_s)),
           format_double(trace_distance(rho_s, rho_s))};
    t.footer("monotone_fidelity", monotone ? "true" : "false");
  } else if (o.group == "su2-coset") {
    const Ket psi_s =
        parse_system("system", o.system.empty() ? "spin:2:0.7,1.1,0.3" : o.system, Group::SU2);
    const DensityOperator rho_s = projector(psi_s);
    const GroupElement a = o.orientation_a.empty()
                               ? GroupElement::identity(Group::SU2)
                               : parse_group_element("orientation-a", o.orientation_a, Group::SU2);
    t.columns = {"j", "fidelity", "jz_offdiag_norm"};
    double offdiag_max = 0.0;
    for (double sz : sizes) {
      const int two_j = static_cast<int>(std::lround(2.0 * sz));
      const FrameSpec f = FrameSpec::su2_coherent(two_j);
      const bool half = psi_s.space.has_odd_charge() || two_j % 2 != 0;
      const HaarGrid grid =
          haar_grid(Group::SU2, 2 * two_j + psi_s.space.max_charge(), half);
      const DensityOperator rho_prime = recover_encode_kernel(rho_s, f, a, grid);
      const DensityOperator dephased = dephase_z(rho_prime);
      const double offdiag = (rho_prime.mat() - dephased.mat()).norm();
      offdiag_max = std::max(offdiag_max, offdiag);
      auto& row = t.new_row();
      row = {format_double(0.5 * two_j), format_double(fidelity(rho_s, rho_prime)),
             format_double(offdiag)};
    }
    t.footer("jz_offdiag_max", offdiag_max);
    t.footer("dephasing_persists", offdiag_max <= 1e-10 ? "true" : "false");
  } else {
    throw ConfigError("group: limit-sweep supports u1 or su2-coset");
  }
  emit(t, o);
  return 0;
}

// -------------------------------------------------------------------- bhd --

int run_bhd(const CommonOpts& o, const std::string& regime, double phase_a, double phase_b,
            int max_two_j) {
  Table t;
  echo_config(t, o, "bhd");
  t.meta("regime", regime);
  t.meta("phase_a", phase_a);
  t.meta("phase_b", phase_b);
  t.meta("max_two_j", double(max_two_j));

  const double tail_mass = 1e-13;  // oracle input truncation target
  auto oracle_cutoff = [&](double s) {
    int cut = std::max(8, static_cast<int>(s * s + 12.0 * s + 12.0));
    while (detail::poisson_retained_mass(s, cut) < 1.0 - tail_mass) ++cut;
    return cut;
  };

  if (regime == "two-cs" || regime == "equal-cs") {
    const double s_a = o.s_a;
    const double s_b = regime == "equal-cs" ? o.s_a : o.s_b;
    const Eigen::VectorXcd psi_a = u1_coherent(s_a, phase_a, oracle_cutoff(s_a)).amp;
    const Eigen::VectorXcd psi_b = u1_coherent(s_b, phase_b, oracle_cutoff(s_b)).amp;
    const Eigen::MatrixXd joint = beamsplitter_joint_probabilities(psi_a, psi_b);
    t.columns = {"j", "m", "probability", "oracle", "residual"};
    double norm = 0.0, max_resid = 0.0;
    for (int tj = 0; tj <= max_two_j; ++tj)
      for (int tm = -tj; tm <= tj; tm += 2) {
        const double p = regime == "two-cs"
                             ? bhd_two_coherent(s_a, phase_a, s_b, phase_b, tj, tm)
                             : bhd_equal_coherent(s_a, phase_a, phase_b, tj, tm);
        const double orc = bhd_oracle_probability(joint, tj, tm);
        norm += p;
        max_resid = std::max(max_resid, std::abs(p - orc));
        auto& row = t.new_row();
        row = {format_double(0.5 * tj), format_double(0.5 * tm), format_double(p),
               format_double(orc), format_double(p - orc)};
      }
    t.footer("normalization", norm);
    t.footer("max_oracle_residual", max_resid);
    emit(t, o);
    if (max_resid > 1e-8)
      throw ContractViolation("bhd closed form deviates from the beamsplitter oracle by " +
                              format_double(max_resid));
    return 0;
  }

  if (regime == "large-cs" || regime == "cs-pe") {
    const double s_a = o.s_a;
    if (s_a < 5.0)
      std::cerr << "warning: large-cs approximation used outside its regime (s_a < 5)\n";
    const Ket psi_b = regime == "large-cs"
                          ? u1_coherent(o.s_b, phase_b, oracle_cutoff(o.s_b))
                          : phase_eigenstate(static_cast<int>(o.s_b), phase_b);
    const Eigen::VectorXcd psi_a = u1_coherent(s_a, phase_a, oracle_cutoff(s_a)).amp;
    const Eigen::MatrixXd joint = beamsplitter_joint_probabilities(psi_a, psi_b.amp);
    t.columns = {"j", "m", "probability", "oracle"};
    double norm = 0.0, tv = 0.0;
    for (int tj = 0; tj <= max_two_j; ++tj)
      for (int tm = -tj; tm <= tj; tm += 2) {
        const double p = bhd_large_cs_approx(s_a, phase_a, psi_b, tj, tm);
        const double orc = bhd_oracle_probability(joint, tj, tm);
        norm += p;
        tv += std::abs(p - orc);
        auto& row = t.new_row();
        row = {format_double(0.5 * tj), format_double(0.5 * tm), format_double(p),
               format_double(orc)};
      }
    t.footer("normalization", norm);
    t.footer("total_variation_vs_oracle", 0.5 * tv);
    if (regime == "cs-pe") {
      const auto [mean, var] = bhd_pe_quadrature_stats(static_cast<int>(o.s_b), phase_b - phase_a);
      t.footer("pe_mean_x", mean);
      t.footer("pe_var_x", var);
    }
    emit(t, o);
    return 0;
  }

  if (regime == "two-pe") {
    const int s_a = static_cast<int>(o.s_a);
    const int s_b = static_cast<int>(o.s_b);
    t.columns = {"j", "count", "probability"};
    long total = 0;
    for (int tj = 0; tj <= s_a + s_b; ++tj) {
      const long count = bhd_two_pe_count(s_a, s_b, tj);
      total += count;
      auto& row = t.new_row();
      row = {format_double(0.5 * tj), std::to_string(count),
             format_double(bhd_two_pe_total(s_a, s_b, tj))};
    }
    t.footer("count_total", std::to_string(total));
    t.footer("normalization_exact",
             total == long(s_a + 1) * long(s_b + 1) ? "true" : "false");
    t.footer("plateau", 1.0 / (std::max(s_a, s_b) + 1.0));
    emit(t, o);
    return 0;
  }

  throw ConfigError("regime: must be two-cs, equal-cs, large-cs, cs-pe, or two-pe");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum reference frame scenario runner"};
  app.set_config("--config", "", "flat key-value config file; flags override file values");
  app.require_subcommand(1);

  CommonOpts o;
  int grid_points = 801;
  bool residual_all = false;
  std::string sizes = "8,16,32,64";
  std::string regime = "two-cs";
  double phase_a = 0.0, phase_b = 0.0;
  int max_two_j = 60;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--group", o.group, "u1 | su2 | su2-coset");
    sub->add_option("--family", o.family, "pe|cs (u1), fiducial (su2), coherent (su2-coset)");
    sub->add_option("--s-a", o.s_a, "size parameter of frame A");
    sub->add_option("--s-b", o.s_b, "size parameter of frame B");
    sub->add_option("--system", o.system, "system preset or amplitude list");
    sub->add_option("--orientation-a", o.orientation_a, "initial orientation of frame A");
    sub->add_option("--outcome", o.outcome, "measurement outcome h");
    sub->add_option("--outcome-grid", o.outcome_grid, "number of outcome grid points");
    sub->add_option("--bandlimit", o.bandlimit, "Haar grid bandlimit override");
    sub->add_option("--out", o.out_path, "output path (default stdout)");
    sub->add_option("--format", o.format, "csv | json");
  };

  CLI::App* overlap = app.add_subcommand("overlap", "orientation-overlap distribution tables");
  add_common(overlap);
  overlap->add_option("--grid-points", grid_points, "points in the parameter sweep");

  CLI::App* change = app.add_subcommand("change-frame", "end-to-end frame change report");
  add_common(change);
  change->add_flag("--residual-all", residual_all,
                   "compute the pipeline/oracle residual at every outcome grid point");

  CLI::App* sweep = app.add_subcommand("limit-sweep", "classical-limit sweeps over frame sizes");
  add_common(sweep);
  sweep->add_option("--sizes", sizes, "comma-separated size list");

  CLI::App* bhd = app.add_subcommand("bhd", "balanced homodyne detection tables");
  add_common(bhd);
  bhd->add_option("--regime", regime, "two-cs | equal-cs | large-cs | cs-pe | two-pe");
  bhd->add_option("--phase-a", phase_a, "phase of input A");
  bhd->add_option("--phase-b", phase_b, "phase of input B");
  bhd->add_option("--max-two-j", max_two_j, "largest total photon number 2j in the table");

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }

  try {
    if (overlap->parsed()) return run_overlap(o, grid_points);
    if (change->parsed()) return run_change_frame(o, residual_all);
    if (sweep->parsed()) return run_limit_sweep(o, sizes);
    if (bhd->parsed()) return run_bhd(o, regime, phase_a, phase_b, max_two_j);
    std::cerr << "config error: no subcommand\n";
    return 2;
  } catch (const ContractViolation& e) {
    std::cerr << "numerical contract violation: " << e.what() << "\n";
    return 3;
  } catch (const ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  }
}
