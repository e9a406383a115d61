#include "penrose/pipeline.hpp"

#include <cmath>
#include <numbers>

#include "penrose/levelset.hpp"
#include "penrose/spinor.hpp"

namespace penrose::pipeline {

namespace {

constexpr double kPi = std::numbers::pi;

void say(const Progress& p, const std::string& msg) {
  if (p) p(msg);
}

Profile profile(std::string method, const levelset::CorrectionFields& f) {
  Profile p;
  p.method = std::move(method);
  p.r = f.r;
  p.Q = f.Q_mean();
  p.P = f.P_mean();
  return p;
}

// Reported without corrections when the theorem's hypotheses are not met
// or the correction fields are not available for this chart.
MassReport informational(std::string method, const flow::FlowTrajectory& traj, std::string note) {
  MassReport rep;
  rep.method = std::move(method);
  const auto& s0 = traj.states.front();
  rep.mass = s0.mass;
  rep.area = s0.area;
  rep.status = "informational";
  rep.note = std::move(note);
  rep.max_solver_residual = s0.solver_residual;
  rep.finalize();
  rep.provenance["integral_RQ"] = traj.data().is_harmonic() ? "zero: R vanishes for a harmonic factor" : "not evaluated";
  rep.provenance["integral_P"] = "not evaluated";
  return rep;
}

void annotate(MassReport& rep, const flow::FlowTrajectory& traj) {
  const bool radial = traj.radial();
  rep.provenance["mass"] = traj.data().is_tabulated() ? "fitted a + b/r tail" : "closed-form asymptotics";
  rep.provenance["area"] = radial ? "closed form on the outermost minimal sphere" : "quadrature on the axisymmetric finder curves";
  if (rep.status != "informational") {
    rep.provenance["integral_RQ"] = "radial x Gauss-Legendre quadrature over the flow trajectory";
    rep.provenance["integral_P"] = "radial x Gauss-Legendre quadrature over the flow trajectory";
  }
}

std::string component_note(const flow::FlowTrajectory& traj) {
  const int c = traj.states.front().components;
  if (c > 1) return "Sigma(0) has " + std::to_string(c) + " components; the level-set theorem needs a connected horizon";
  return "correction densities are evaluated on radial data only";
}

}  // namespace

int ReportBundle::exit_code() const noexcept {
  if (error_kind) return 3;
  for (const Gate& g : gates)
    if (!g.passed) return 2;
  return 0;
}

LsfCheck lsf_check(const flow::FlowTrajectory& traj) {
  LsfCheck c;
  if (traj.states.empty()) return c;
  c.m0 = traj.states.front().mass;
  c.m_end = traj.states.back().mass;
  for (std::size_t k = 1; k < traj.states.size(); ++k) {
    const auto& a = traj.states[k - 1];
    const auto& b = traj.states[k];
    c.integral += (b.t - a.t) * (a.mass_tilde + b.mass_tilde);
  }
  c.tail = traj.states.back().mass_tilde;
  const double scale = c.m0 != 0.0 ? std::abs(c.m0) : 1.0;
  c.residual = std::abs(c.m0 - c.m_end - c.integral) / scale;
  return c;
}

ReportBundle run_pipeline(const scenario::Scenario& s, const Progress& progress) {
  ReportBundle b;
  b.scenario = s;
  try {
    const ConformalData data = scenario::build_data(s);
    b.data_name = data.name();
    say(progress, "flow: " + b.data_name);
    const auto traj = flow::run_flow(data, s.flow);
    for (const auto& st : traj.states)
      b.steps.push_back({st.t, st.mass, st.area, st.horizon_extent(), st.components, st.mass_tilde, st.jumped});
    b.events = traj.events;
    b.lsf = lsf_check(traj);
    b.gates.push_back({"lsf", b.lsf->residual, s.lsf_tolerance, b.lsf->residual <= s.lsf_tolerance});
    const double m = std::abs(b.lsf->m0);

    if (s.mode != scenario::Mode::Spinor) {
      say(progress, "level-set corrections");
      if (traj.radial()) {
        levelset::LevelSetConfig cfg;
        cfg.p_factor_j2 = s.p_factor_j2;
        cfg.points_per_decade = s.points_per_decade;
        cfg.mu_nodes = s.mu_nodes;
        const auto slices = levelset::solve_slices(traj);
        const auto fields = levelset::accumulate_QP(traj, slices, cfg);
        b.levelset = levelset::verify_inequality_levelset(data, fields, traj);
        b.profiles.push_back(profile("levelset", fields));
      } else {
        b.levelset = informational("levelset", traj, component_note(traj));
      }
      annotate(*b.levelset, traj);
      if (b.levelset->status == "verified")
        b.gates.push_back({"levelset_inequality", b.levelset->gap, -s.inequality_tolerance * m,
                           b.levelset->gap >= -s.inequality_tolerance * m});
    }
    if (s.mode != scenario::Mode::LevelSet) {
      say(progress, "spinor corrections");
      if (traj.radial()) {
        spinor::SpinorConfig cfg;
        cfg.points_per_decade = s.points_per_decade;
        cfg.mu_nodes = 2 * s.mu_nodes;
        const auto slices = spinor::solve_spinor_slices(traj, cfg);
        const auto fields = spinor::accumulate_QP_spinor(traj, slices, cfg);
        b.spinor = spinor::verify_equality_spinor(data, fields, traj);
        b.profiles.push_back(profile("spinor", fields));
      } else {
        b.spinor = informational("spinor", traj, "spinor corrections are evaluated on radial data only");
      }
      annotate(*b.spinor, traj);
      if (b.spinor->status == "verified")
        b.gates.push_back({"spinor_equality", std::abs(b.spinor->gap), s.equality_tolerance * m,
                           std::abs(b.spinor->gap) <= s.equality_tolerance * m});
    }
  } catch (const Error& e) {
    b.error_kind = e.kind();
    b.error = e.what();
  }
  return b;
}

}  // namespace penrose::pipeline
