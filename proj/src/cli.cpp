#include "sympmarg/cli.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <numeric>
#include <optional>
#include <ostream>
#include <sstream>
#include <thread>

#include <CLI11.hpp>
#include <json.hpp>

#include "sympmarg/circuit.hpp"
#include "sympmarg/entropy.hpp"
#include "sympmarg/io.hpp"
#include "sympmarg/marginal.hpp"
#include "sympmarg/sampling.hpp"
#include "sympmarg/synthesis.hpp"

namespace sympmarg::cli {

using json = nlohmann::ordered_json;

ExitCode exit_code_for(ErrorCode code) {
  switch (code) {
    case ErrorCode::InfeasibleInput:
    case ErrorCode::InfeasiblePair:
      return kInfeasible;
    case ErrorCode::SpectralPairingFailure:
    case ErrorCode::DegenerateSubspaceFailure:
    case ErrorCode::NumericalFailure:
    case ErrorCode::ToleranceCollapse:
    case ErrorCode::InversionFailure:
    case ErrorCode::InvalidTrace:
      return kVerificationFailure;
    default:
      return kInputError;
  }
}

std::uint64_t fnv1a(std::string_view data, std::uint64_t h) {
  for (unsigned char ch : data) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return h;
}

namespace {

using Clock = std::chrono::steady_clock;

std::string hex64(std::uint64_t v) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(v));
  return buf;
}

json matrix_json(const Matrix& m) {
  json rows = json::array();
  for (Eigen::Index i = 0; i < m.rows(); ++i) {
    json row = json::array();
    for (Eigen::Index j = 0; j < m.cols(); ++j) row.push_back(m(i, j));
    rows.push_back(row);
  }
  return rows;
}

Matrix diag_pairs(const std::vector<double>& d) {
  const int n = static_cast<int>(d.size());
  Matrix g = Matrix::Zero(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) g(2 * k, 2 * k) = g(2 * k + 1, 2 * k + 1) = d[k];
  return g;
}

// Shared state of one invocation.
class Session {
 public:
  Session(std::string command, const std::vector<std::string>& args, std::ostream& out, std::ostream& err,
          Tolerances tol)
      : command_(std::move(command)), args_(args), out_(out), err_(err), tol_(tol), start_(Clock::now()) {
    for (const auto& a : args_) {
      digest_ = fnv1a(a, digest_);
      digest_ = fnv1a(std::string_view("\0", 1), digest_);
    }
  }

  const Tolerances& tol() const { return tol_; }
  std::ostream& err() { return err_; }

  MatrixFile load(const std::string& path, MatrixKind expected) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw Error(ErrorCode::ParseError, "cannot open '" + path + "'");
    std::stringstream buf;
    buf << in.rdbuf();
    digest_ = fnv1a(buf.str(), digest_);
    MatrixFile file;
    try {
      file = read_matrix(buf);
    } catch (const Error& e) {
      throw Error(ErrorCode::ParseError, path + ": " + std::string(e.what()).substr(std::string("ParseError: ").size()));
    }
    if (file.kind != expected)
      throw Error(ErrorCode::InvalidArgument, path + " has kind " + std::string(to_string(file.kind)) + ", expected " +
                                                  std::string(to_string(expected)));
    return file;
  }

  json record(const std::string& verdict) const {
    json r;
    r["command"] = command_;
    r["argv"] = args_;
    r["inputs_digest"] = hex64(digest_);
    r["verdict"] = verdict;
    return r;
  }

  int emit(json r, int code) {
    r["exit_code"] = code;
    r["tolerances"] = {{"tol_sym", tol_.sym},   {"tol_sympl", tol_.sympl}, {"tol_pos", tol_.pos},
                       {"tol_psd", tol_.psd},   {"tol_recon", tol_.recon}, {"tol_ineq", tol_.ineq},
                       {"tol_pair", tol_.pair}};
    r["elapsed_ms"] = std::chrono::duration<double, std::milli>(Clock::now() - start_).count();
    out_ << r.dump() << '\n';
    return code;
  }

  int fail(const Error& e) {
    const int code = exit_code_for(e.code());
    err_ << "error: " << e.what() << '\n';
    json r = record("error");
    r["error"] = {{"code", std::string(to_string(e.code()))}, {"message", e.what()}};
    return emit(std::move(r), code);
  }

 private:
  std::string command_;
  std::vector<std::string> args_;
  std::ostream& out_;
  std::ostream& err_;
  Tolerances tol_;
  Clock::time_point start_;
  std::uint64_t digest_ = fnv1a("sympmarg");
};

std::vector<double> vec(const std::string& s, const char* name) {
  try {
    return parse_vector(s);
  } catch (const Error& e) {
    throw Error(ErrorCode::ParseError, std::string("--") + name + ": " + std::string(e.what()).substr(std::string("ParseError: ").size()));
  }
}

json verdict_json(const FeasibilityVerdict& v) {
  json constraints = json::array();
  json violated = json::array();
  for (const auto& c : v.constraints) {
    constraints.push_back({{"id", c.label()}, {"slack", c.slack}});
    if (c.slack < -v.tolerance) violated.push_back({{"id", c.label()}, {"slack", c.slack}});
  }
  return {{"feasible", v.feasible}, {"min_slack", v.min_slack()}, {"constraints", constraints}, {"violated", violated}};
}

void verdict_table(std::ostream& err, const FeasibilityVerdict& v) {
  err << std::left << std::setw(18) << "constraint" << std::right << std::setw(16) << "slack" << "  status\n";
  for (const auto& c : v.constraints)
    err << std::left << std::setw(18) << c.label() << std::right << std::setw(16) << std::setprecision(8) << c.slack
        << "  " << (c.slack < -v.tolerance ? "VIOLATED" : "ok") << '\n';
  err << (v.feasible ? "feasible" : "infeasible") << '\n';
}

json sorted_inputs(const std::vector<double>& raw, std::vector<double>& sorted) {
  std::vector<int> order;
  sorted = sorted_copy(raw, &order);
  return {{"sorted", sorted}, {"permutation", order}};
}

// ---------------------------------------------------------------- check

struct CheckArgs {
  std::string c, d, b, t, matrix;
  bool pure = false;
};

int cmd_check(Session& s, const CheckArgs& a) {
  if (!a.matrix.empty()) {
    const MatrixFile f = s.load(a.matrix, MatrixKind::Covariance);
    const CovarianceMatrix gamma(f.body, s.tol());
    const LocalDiagonal local = local_diagonal(gamma);
    const SpectrumVector d = symplectic_eigenvalues(gamma, s.tol());
    const FeasibilityVerdict v = check_mixed(local.values.values, d.values, s.tol());
    json r = s.record(v.feasible ? "feasible" : "infeasible");
    r["mode"] = "matrix";
    r["c"] = local.values.values;
    r["c_mode_order"] = local.order;
    r["d"] = d.values;
    r["physical"] = gamma.is_physical(s.tol());
    r.update(verdict_json(v));
    verdict_table(s.err(), v);
    return s.emit(std::move(r), v.feasible ? kOk : kInfeasible);
  }
  if (a.pure || !a.b.empty() || !a.t.empty()) {
    if (!a.b.empty() == !a.t.empty()) throw Error(ErrorCode::InvalidArgument, "pure check needs exactly one of --b or --t");
    std::vector<double> b;
    json r;
    if (!a.b.empty()) {
      b = vec(a.b, "b");
    } else {
      b = temperature_to_b(vec(a.t, "t"));
    }
    const FeasibilityVerdict v = check_pure(b, s.tol());
    r = s.record(v.feasible ? "feasible" : "infeasible");
    r["mode"] = "pure";
    r["b"] = b;
    r.update(verdict_json(v));
    verdict_table(s.err(), v);
    return s.emit(std::move(r), v.feasible ? kOk : kInfeasible);
  }
  if (a.c.empty() || a.d.empty()) throw Error(ErrorCode::InvalidArgument, "give --c and --d, --b/--t with --pure, or --matrix");
  std::vector<double> c, d;
  const json cj = sorted_inputs(vec(a.c, "c"), c);
  const json dj = sorted_inputs(vec(a.d, "d"), d);
  const FeasibilityVerdict v = check_mixed(c, d, s.tol());
  json r = s.record(v.feasible ? "feasible" : "infeasible");
  r["mode"] = "mixed";
  r["c"] = cj;
  r["d"] = dj;
  r.update(verdict_json(v));
  verdict_table(s.err(), v);
  return s.emit(std::move(r), v.feasible ? kOk : kInfeasible);
}

// ---------------------------------------------------------------- synth

struct SynthArgs {
  std::string c, d, b, out;
  bool emit_trace = false;
};

json step_json(const SynthesisStep& st) {
  json j;
  switch (st.kind) {
    case SynthesisStep::Kind::DirectSum:
      j["kind"] = "direct_sum";
      j["spectrum"] = st.spectrum;
      break;
    case SynthesisStep::Kind::TwoMode:
      j["kind"] = "two_mode";
      j["modes"] = st.modes;
      j["c1"] = st.block->c1;
      j["c2"] = st.block->c2;
      j["d1"] = st.block->d1;
      j["d2"] = st.block->d2;
      j["e"] = st.block->e;
      j["f"] = st.block->f;
      break;
    case SynthesisStep::Kind::Congruence:
      j["kind"] = "congruence";
      j["modes"] = st.modes;
      j["transform"] = matrix_json(st.transform);
      break;
  }
  return j;
}

std::optional<int> infeasible_exit(Session& s, const std::vector<double>& c, const std::vector<double>& d) {
  const FeasibilityVerdict v = check_mixed(c, d, s.tol());
  if (v.feasible) return std::nullopt;
  verdict_table(s.err(), v);
  json r = s.record("infeasible");
  r.update(verdict_json(v));
  return s.emit(std::move(r), kInfeasible);
}

void read_targets(Session& s, const std::string& cs, const std::string& ds, const std::string& bs, std::vector<double>& c,
                  std::vector<double>& d, json& r) {
  if (!bs.empty()) {
    if (!cs.empty() || !ds.empty()) throw Error(ErrorCode::InvalidArgument, "--b excludes --c and --d");
    const std::vector<double> b = vec(bs, "b");
    check_pure(b, s.tol());  // validates entries
    c.clear();
    for (double x : b) c.push_back(x + 1.0);
    d.assign(b.size(), 1.0);
    r["b"] = b;
  } else {
    if (cs.empty() || ds.empty()) throw Error(ErrorCode::InvalidArgument, "give --c and --d, or --b");
    std::vector<double> raw_c = vec(cs, "c"), raw_d = vec(ds, "d");
    r["c"] = sorted_inputs(raw_c, c);
    r["d"] = sorted_inputs(raw_d, d);
  }
  check_mixed(c, d, s.tol());  // input validation only
}

int cmd_synth(Session& s, const SynthArgs& a) {
  std::vector<double> c, d;
  json inputs;
  read_targets(s, a.c, a.d, a.b, c, d, inputs);
  if (auto code = infeasible_exit(s, c, d)) return *code;
  const SynthesisTrace trace = synthesize(c, d, s.tol());
  const SynthesisDefects defects = measure_synthesis(trace, s.tol());
  const Matrix& g = trace.final_matrix.matrix();
  const double limit = s.tol().recon * std::max(1.0, max_abs(g));
  const bool ok = defects.spectrum <= limit && defects.local <= limit && defects.replay <= limit;

  json r = s.record(ok ? "feasible" : "verification_failed");
  r["inputs"] = inputs;
  r["defects"] = {{"spectrum", defects.spectrum}, {"local", defects.local}, {"replay", defects.replay}, {"limit", limit}};
  if (!a.out.empty()) {
    save_matrix(a.out, {trace.modes(), MatrixKind::Covariance, g});
    r["out"] = a.out;
  } else {
    r["matrix"] = matrix_json(g);
  }
  if (a.emit_trace) {
    json steps = json::array();
    for (const auto& st : trace.steps) steps.push_back(step_json(st));
    r["steps"] = steps;
  }
  s.err() << "synthesized " << trace.modes() << "-mode matrix, " << trace.steps.size() << " steps\n"
          << "  spectrum defect " << defects.spectrum << "\n  local defect    " << defects.local
          << "\n  replay defect   " << defects.replay << '\n';
  return s.emit(std::move(r), ok ? kOk : kVerificationFailure);
}

// ---------------------------------------------------------------- williamson / euler

int cmd_williamson(Session& s, const std::string& path, const std::string& prefix) {
  const MatrixFile f = s.load(path, MatrixKind::Covariance);
  const CovarianceMatrix gamma(f.body, s.tol());
  const WilliamsonForm w = williamson(gamma, s.tol());
  const Matrix& sm = w.transform.matrix();
  const Matrix dm = diag_pairs(w.spectrum.values);
  const double recon = max_abs(sm * gamma.matrix() * sm.transpose() - dm);
  const double sympl = symplectic_defect(sm);
  const double scale = std::max(1.0, max_abs(gamma.matrix()));
  const bool ok = recon <= s.tol().recon * scale && sympl <= s.tol().sympl * std::max(1.0, max_abs(sm) * max_abs(sm));

  json r = s.record(ok ? "ok" : "verification_failed");
  r["spectrum"] = w.spectrum.values;
  r["degenerate_blocks"] = w.degenerate_blocks;
  r["defects"] = {{"reconstruction", recon}, {"symplectic", sympl}};
  if (!prefix.empty()) {
    save_matrix(prefix + ".S.mat", {f.n, MatrixKind::Symplectic, sm});
    save_matrix(prefix + ".D.mat", {f.n, MatrixKind::Covariance, dm});
    r["outputs"] = {prefix + ".S.mat", prefix + ".D.mat"};
  } else {
    r["S"] = matrix_json(sm);
  }
  s.err() << "symplectic eigenvalues:";
  for (double v : w.spectrum.values) s.err() << ' ' << v;
  s.err() << "\n  |S g S^T - D|max " << recon << "\n  symplectic defect " << sympl << '\n';
  return s.emit(std::move(r), ok ? kOk : kVerificationFailure);
}

int cmd_euler(Session& s, const std::string& path, const std::string& prefix) {
  const MatrixFile f = s.load(path, MatrixKind::Symplectic);
  const SymplecticTransform st(f.body, s.tol());
  const EulerFactors e = euler_decompose(st, s.tol());
  const double recon = max_abs(e.reconstruct() - st.matrix());
  const double orth = std::max(orthogonality_defect(e.outer.matrix()), orthogonality_defect(e.inner.matrix()));
  const double sympl = std::max(symplectic_defect(e.outer.matrix()), symplectic_defect(e.inner.matrix()));
  const double scale = std::max(1.0, max_abs(st.matrix()));
  const bool ok = recon <= s.tol().recon * scale && orth <= 1e-9 && sympl <= 1e-9;

  json r = s.record(ok ? "ok" : "verification_failed");
  r["squeezing"] = e.squeezing;
  r["defects"] = {{"reconstruction", recon}, {"orthogonality", orth}, {"symplectic", sympl}};
  if (!prefix.empty()) {
    save_matrix(prefix + ".O.mat", {f.n, MatrixKind::Symplectic, e.outer.matrix()});
    save_matrix(prefix + ".Q.mat", {f.n, MatrixKind::Symplectic, e.squeeze_matrix()});
    save_matrix(prefix + ".V.mat", {f.n, MatrixKind::Symplectic, e.inner.matrix()});
    r["outputs"] = {prefix + ".O.mat", prefix + ".Q.mat", prefix + ".V.mat"};
  } else {
    r["O"] = matrix_json(e.outer.matrix());
    r["V"] = matrix_json(e.inner.matrix());
  }
  s.err() << "squeezing z:";
  for (double z : e.squeezing) s.err() << ' ' << z;
  s.err() << "\n  |O Q V - S|max " << recon << "\n  orthogonality defect " << orth << "\n  symplectic defect " << sympl
          << '\n';
  return s.emit(std::move(r), ok ? kOk : kVerificationFailure);
}

// ---------------------------------------------------------------- entropy

int cmd_entropy(Session& s, const std::string& cs, const std::string& path) {
  if (cs.empty() == path.empty()) throw Error(ErrorCode::InvalidArgument, "give exactly one of --c or --matrix");
  EntropyReport rep;
  json r = s.record("ok");
  if (!path.empty()) {
    const MatrixFile f = s.load(path, MatrixKind::Covariance);
    const CovarianceMatrix gamma(f.body, s.tol());
    if (!gamma.is_physical(s.tol())) throw Error(ErrorCode::NotPhysical, "matrix violates the uncertainty relation");
    rep = entropy_report(gamma, s.tol());
    r["c"] = local_diagonal(gamma).by_mode;
  } else {
    const std::vector<double> c = vec(cs, "c");
    rep = entropy_report(c, s.tol());
    r["c"] = c;
  }
  r["per_mode_entropies"] = rep.per_mode_entropies;
  r["total_local_sum"] = rep.total_local_sum;
  r["global_upper_bound"] = rep.global_upper_bound;
  if (rep.has_gaussian_entropy) {
    r["gaussian_entropy"] = rep.gaussian_entropy;
    r["purity_consistent"] = rep.purity_consistent;
  }
  s.err() << std::left << std::setw(8) << "mode" << "s(c) [bits]\n";
  for (std::size_t j = 0; j < rep.per_mode_entropies.size(); ++j)
    s.err() << std::left << std::setw(8) << j << std::setprecision(12) << rep.per_mode_entropies[j] << '\n';
  s.err() << "bound s(sum c) = " << rep.global_upper_bound << '\n';
  if (rep.has_gaussian_entropy) s.err() << "gaussian entropy sum s(d) = " << rep.gaussian_entropy << '\n';
  return s.emit(std::move(r), kOk);
}

// ---------------------------------------------------------------- prepare

struct PrepareArgs {
  std::string c, d, b, matrix, out;
};

int cmd_prepare(Session& s, const PrepareArgs& a) {
  PreparationCircuit circuit;
  Matrix target;
  json r = s.record("ok");
  if (!a.matrix.empty()) {
    if (!a.c.empty() || !a.d.empty() || !a.b.empty()) throw Error(ErrorCode::InvalidArgument, "--matrix excludes vectors");
    const MatrixFile f = s.load(a.matrix, MatrixKind::Covariance);
    const CovarianceMatrix gamma(f.body, s.tol());
    circuit = circuit_from_covariance(gamma, s.tol());
    target = gamma.matrix();
  } else {
    std::vector<double> c, d;
    json inputs;
    read_targets(s, a.c, a.d, a.b, c, d, inputs);
    if (auto code = infeasible_exit(s, c, d)) return *code;
    const SynthesisTrace trace = synthesize(c, d, s.tol());
    const bool pure = std::all_of(d.begin(), d.end(), [](double v) { return v == 1.0; });
    circuit = pure ? circuit_from_pure(trace.final_matrix, s.tol()) : circuit_from_mixed(trace, s.tol());
    target = trace.final_matrix.matrix();
    r["inputs"] = inputs;
  }
  const double defect = max_abs(circuit.replay() - target);
  const double limit = 1e-7 * std::max(1.0, max_abs(target));
  const bool ok = defect <= limit;
  if (!ok) r["verdict"] = "verification_failed";

  std::ostringstream text;
  write_circuit(text, circuit);
  if (!a.out.empty()) {
    std::ofstream f(a.out);
    if (!f) throw Error(ErrorCode::InvalidArgument, "cannot write '" + a.out + "'");
    f << text.str();
    r["out"] = a.out;
  } else {
    r["circuit"] = text.str();
  }
  int squeezers = 0;
  for (const auto& sq : circuit.squeezers) squeezers += sq.z != 1.0;
  const std::size_t passive = circuit.input_network.size() + circuit.output_network.size();
  r["source"] = circuit.source == PreparationCircuit::Source::PureOPO ? "pure_OPO" : "mixed_OQV";
  r["elements"] = {{"squeezers", squeezers},
                   {"input_passive", circuit.input_network.size()},
                   {"output_passive", circuit.output_network.size()}};
  r["replay_defect"] = defect;
  s.err() << "circuit: " << squeezers << " squeezers, " << passive << " passive elements\n"
          << "  replay defect " << defect << " (limit " << limit << ")\n";
  return s.emit(std::move(r), ok ? kOk : kVerificationFailure);
}

// ---------------------------------------------------------------- verify

struct VerifyArgs {
  int trials = 100;
  int n_max = 6;
  std::uint64_t seed = 1;
  double squeeze_bound = 5.0;
  int threads = 0;
  bool inject_sign_flip = false;
};

struct Suite {
  const char* name;
  const char* measure;  // "slack" (bad when below limit) or "defect" (bad when above)
  double limit;
};

constexpr Suite kSuites[] = {
    {"necessity", "slack", -1e-8},
    {"symplectic_trace", "slack", -1e-8},
    {"last_condition_bound", "slack", -1e-8},
    {"williamson_reconstruction", "defect", 1e-8},
    {"euler_reconstruction", "defect", 1e-8},
    {"congruence_invariance", "defect", 1e-8},
    {"synthesis_round_trip", "defect", 1e-7},
    {"circuit_replay", "defect", 1e-7},
};
constexpr int kSuiteCount = sizeof(kSuites) / sizeof(kSuites[0]);

struct TrialResult {
  double value[kSuiteCount];
  std::string failure;
};

TrialResult run_trial(const VerifyArgs& a, int trial, const Tolerances& tol) {
  TrialResult t;
  std::fill(std::begin(t.value), std::end(t.value), 0.0);
  std::seed_seq seq{static_cast<std::uint64_t>(a.seed), static_cast<std::uint64_t>(trial)};
  std::mt19937_64 rng(seq);
  const int lo = std::min(2, a.n_max);
  const int n = std::uniform_int_distribution<int>(lo, a.n_max)(rng);
  try {
    // Necessity, trace and bound inequalities, decompositions.
    const RandomState st = random_state(n, a.squeeze_bound, rng);
    const CovarianceMatrix gamma(st.gamma, tol);
    const LocalDiagonal local = local_diagonal(gamma);
    const WilliamsonForm w = williamson(gamma, tol);
    const std::vector<double>& d = w.spectrum.values;
    t.value[0] = check_mixed(local.values.values, d, tol).min_slack();
    t.value[1] = local.values.sum() - w.spectrum.sum();
    t.value[2] = last_condition_upper_bound_slack(local.values.values, d);
    const Matrix& sm = w.transform.matrix();
    t.value[3] = max_abs(sm * st.gamma * sm.transpose() - diag_pairs(d));
    const SymplecticTransform s(st.transform, tol);
    t.value[4] = max_abs(euler_decompose(s, tol).reconstruct() - st.transform);
    const Matrix s2 = random_symplectic(n, a.squeeze_bound, rng()).matrix();
    const Matrix moved = s2 * st.gamma * s2.transpose();
    const SpectrumVector d2 = symplectic_eigenvalues(CovarianceMatrix(0.5 * (moved + moved.transpose()), tol), tol);
    for (int k = 0; k < n; ++k) t.value[5] = std::max(t.value[5], std::abs(d2[k] - d[k]));

    // Synthesis round trip and circuit replay.
    const int m = std::uniform_int_distribution<int>(1, a.n_max)(rng);
    const FeasiblePair p = random_feasible_pair(m, rng);
    const SynthesisTrace trace = synthesize(p.c, p.d, tol);
    Matrix g = trace.final_matrix.matrix();
    if (a.inject_sign_flip)
      for (int i = 0; i < m; ++i)
        for (int j = 0; j < m; ++j)
          if (i != j) g(2 * i + 1, 2 * j + 1) = -g(2 * i + 1, 2 * j + 1);
    const CovarianceMatrix built(g, tol);
    const SpectrumVector bd = symplectic_eigenvalues(built, tol);
    const LocalDiagonal bc = local_diagonal(built);
    for (int k = 0; k < m; ++k)
      t.value[6] = std::max({t.value[6], std::abs(bd[k] - p.d[k]), std::abs(bc.values[k] - p.c[k])});
    const PreparationCircuit circuit = circuit_from_mixed(trace, tol);
    const Matrix& target = trace.final_matrix.matrix();
    t.value[7] = max_abs(circuit.replay() - target) / std::max(1.0, max_abs(target));
  } catch (const std::exception& e) {
    t.failure = e.what();
  }
  return t;
}

int cmd_verify(Session& s, const VerifyArgs& a) {
  if (a.trials <= 0 || a.n_max <= 0 || !(a.squeeze_bound >= 1.0))
    throw Error(ErrorCode::InvalidArgument, "--trials and --n-max must be positive, --squeeze-bound >= 1");
  std::vector<TrialResult> results(a.trials);
  const int workers = std::max(1, std::min(a.trials, a.threads > 0 ? a.threads
                                                                     : static_cast<int>(std::thread::hardware_concurrency())));
  std::atomic<int> next{0};
  std::vector<std::thread> pool;
  for (int w = 0; w < workers; ++w)
    pool.emplace_back([&] {
      for (int i; (i = next.fetch_add(1)) < a.trials;) results[i] = run_trial(a, i, s.tol());
    });
  for (auto& th : pool) th.join();

  json suites = json::array();
  int total = 0;
  std::vector<std::string> failures;
  for (const auto& r : results)
    if (!r.failure.empty()) failures.push_back(r.failure);
  s.err() << std::left << std::setw(28) << "suite" << std::right << std::setw(12) << "violations" << std::setw(16)
          << "worst" << '\n';
  for (int k = 0; k < kSuiteCount; ++k) {
    const Suite& su = kSuites[k];
    const bool slack = std::string_view(su.measure) == "slack";
    double worst = slack ? INFINITY : 0.0;
    int violations = 0;
    for (const auto& r : results) {
      if (!r.failure.empty()) continue;
      const double v = r.value[k];
      worst = slack ? std::min(worst, v) : std::max(worst, v);
      violations += slack ? (v < su.limit) : (v > su.limit);
    }
    total += violations;
    suites.push_back({{"suite", su.name}, {"measure", su.measure}, {"limit", su.limit}, {"violations", violations}, {"worst", worst}});
    s.err() << std::left << std::setw(28) << su.name << std::right << std::setw(12) << violations << std::setw(16)
            << std::setprecision(4) << worst << '\n';
  }
  total += static_cast<int>(failures.size());
  s.err() << "exceptions: " << failures.size() << "\n" << (total == 0 ? "all suites passed" : "VIOLATIONS FOUND") << '\n';

  json r = s.record(total == 0 ? "ok" : "violations");
  r["trials"] = a.trials;
  r["n_max"] = a.n_max;
  r["seed"] = a.seed;
  r["squeeze_bound"] = a.squeeze_bound;
  r["suites"] = suites;
  r["exceptions"] = failures.size();
  if (!failures.empty()) r["first_exception"] = failures.front();
  r["total_violations"] = total;
  return s.emit(std::move(r), total == 0 ? kOk : kInfeasible);
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  Tolerances tol = kDefaultTolerances;
  if (const char* env = std::getenv(kTolEnv); env && *env) {
    try {
      const std::vector<double> v = parse_vector(env);
      if (v.size() != 1 || !(v[0] >= 0.0)) throw Error(ErrorCode::ParseError, "expected one non-negative number");
      tol.ineq = v[0];
    } catch (const Error& e) {
      err << "error: " << kTolEnv << ": " << e.what() << '\n';
      return kInputError;
    }
  }

  CLI::App app{"Symplectic marginal feasibility, synthesis and preparation tools", "sympmarg"};
  app.require_subcommand(1);
  std::optional<double> tol_flag;
  app.add_option("--tol", tol_flag, "Inequality tolerance (overrides the environment)")->check(CLI::NonNegativeNumber);

  CheckArgs check;
  auto* c_check = app.add_subcommand("check", "Decide feasibility of local values c against spectrum d");
  c_check->add_option("--c", check.c, "Local values, comma separated");
  c_check->add_option("--d", check.d, "Symplectic eigenvalues, comma separated");
  c_check->add_option("--b", check.b, "Local excesses b = c - 1 of a pure state");
  c_check->add_option("--t", check.t, "Local temperatures of a pure state");
  c_check->add_flag("--pure", check.pure, "Pure-state cone test");
  c_check->add_option("--matrix", check.matrix, "Covariance matrix file");
  c_check->add_option("--tol", tol_flag, "Inequality tolerance")->check(CLI::NonNegativeNumber);

  SynthArgs synth;
  auto* c_synth = app.add_subcommand("synth", "Build a covariance matrix with local values c and spectrum d");
  c_synth->add_option("--c", synth.c, "Local values");
  c_synth->add_option("--d", synth.d, "Symplectic eigenvalues");
  c_synth->add_option("--b", synth.b, "Pure target with local excesses b");
  c_synth->add_option("--out", synth.out, "Output matrix file");
  c_synth->add_flag("--emit-trace", synth.emit_trace, "Include the construction steps in the report");
  c_synth->add_option("--tol", tol_flag, "Inequality tolerance")->check(CLI::NonNegativeNumber);

  std::string w_matrix, w_out;
  auto* c_will = app.add_subcommand("williamson", "Williamson normal form of a covariance matrix");
  c_will->add_option("--matrix", w_matrix, "Covariance matrix file")->required();
  c_will->add_option("--out", w_out, "Output prefix for <prefix>.S.mat and <prefix>.D.mat");

  std::string e_matrix, e_out;
  auto* c_euler = app.add_subcommand("euler", "Euler decomposition S = O Q V of a symplectic matrix");
  c_euler->add_option("--matrix", e_matrix, "Symplectic matrix file")->required();
  c_euler->add_option("--out", e_out, "Output prefix for <prefix>.{O,Q,V}.mat");

  std::string h_c, h_matrix;
  auto* c_entropy = app.add_subcommand("entropy", "Local entropies and the global entropy bound");
  c_entropy->add_option("--c", h_c, "Local values (>= 1)");
  c_entropy->add_option("--matrix", h_matrix, "Covariance matrix file");

  PrepareArgs prep;
  auto* c_prep = app.add_subcommand("prepare", "Emit a squeezer and passive-network preparation circuit");
  c_prep->add_option("--matrix", prep.matrix, "Target covariance matrix file");
  c_prep->add_option("--c", prep.c, "Local values");
  c_prep->add_option("--d", prep.d, "Symplectic eigenvalues");
  c_prep->add_option("--b", prep.b, "Pure target with local excesses b");
  c_prep->add_option("--out", prep.out, "Output circuit file");
  c_prep->add_option("--tol", tol_flag, "Inequality tolerance")->check(CLI::NonNegativeNumber);

  VerifyArgs ver;
  auto* c_verify = app.add_subcommand("verify", "Run the sampled property suites");
  c_verify->add_option("--trials", ver.trials, "Number of trials")->check(CLI::PositiveNumber);
  c_verify->add_option("--n-max", ver.n_max, "Largest mode count")->check(CLI::PositiveNumber);
  c_verify->add_option("--seed", ver.seed, "Random seed");
  c_verify->add_option("--squeeze-bound", ver.squeeze_bound, "Largest squeezing factor")->check(CLI::Range(1.0, 1e6));
  c_verify->add_option("--threads", ver.threads, "Worker threads (0 = all cores)");
  c_verify->add_flag("--inject-sign-flip", ver.inject_sign_flip,
                     "Flip the sign of the p-p couplings of every synthesized matrix (harness sanity check)");

  std::vector<std::string> argv_storage{"sympmarg"};
  argv_storage.insert(argv_storage.end(), args.begin(), args.end());
  std::vector<char*> argv;
  for (auto& a : argv_storage) argv.push_back(a.data());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e, out, err);
  } catch (const CLI::ParseError& e) {
    app.exit(e, out, err);
    return kInputError;
  }
  if (tol_flag) tol.ineq = *tol_flag;

  CLI::App* sub = app.get_subcommands().front();
  Session s(sub->get_name(), args, out, err, tol);
  try {
    if (sub == c_check) return cmd_check(s, check);
    if (sub == c_synth) return cmd_synth(s, synth);
    if (sub == c_will) return cmd_williamson(s, w_matrix, w_out);
    if (sub == c_euler) return cmd_euler(s, e_matrix, e_out);
    if (sub == c_entropy) return cmd_entropy(s, h_c, h_matrix);
    if (sub == c_prep) return cmd_prepare(s, prep);
    if (sub == c_verify) return cmd_verify(s, ver);
  } catch (const Error& e) {
    return s.fail(e);
  } catch (const std::exception& e) {
    return s.fail(Error(ErrorCode::NumericalFailure, e.what()));
  }
  return kInputError;
}

}  // namespace sympmarg::cli
