#include "sympmarg/circuit.hpp"

#include <cmath>
#include <complex>
#include <cstdio>
#include <istream>
#include <map>
#include <numbers>
#include <ostream>
#include <sstream>

namespace sympmarg {
namespace {

constexpr double kTrivialAngle = 1e-14;

std::string num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

Matrix squeeze_block(const std::vector<Squeezer>& squeezers) {
  const int n = static_cast<int>(squeezers.size());
  Matrix z = Matrix::Identity(2 * n, 2 * n);
  for (int k = 0; k < n; ++k) z.block<2, 2>(2 * k, 2 * k) = squeezers[k].symplectic();
  return z;
}

bool is_pure_spectrum(const SpectrumVector& d, const Tolerances& tol) {
  for (double v : d.values)
    if (std::abs(v - 1.0) > tol.psd) return false;
  return true;
}

// On a vacuum seed a quarter-turn phase right after a squeezer only swaps
// its orientation and a half-turn does nothing.
void fold_vacuum_phases(PreparationCircuit& c) {
  auto& net = c.output_network;
  std::size_t lead = 0;
  while (lead < net.size() && net[lead].kind == PassiveElement::Kind::Phase) ++lead;
  std::vector<PassiveElement> kept;
  for (std::size_t i = 0; i < lead; ++i) {
    const double turns = std::abs(net[i].phi) / (0.5 * std::numbers::pi);
    const double rounded = std::round(turns);
    if (std::abs(turns - rounded) > 1e-12) {
      kept.push_back(net[i]);
      continue;
    }
    if (static_cast<long>(rounded) % 2 == 1) {
      Squeezer& sq = c.squeezers[net[i].mode_a];
      sq.orientation = sq.orientation == Squeezer::Orientation::X ? Squeezer::Orientation::P : Squeezer::Orientation::X;
    }
  }
  kept.insert(kept.end(), net.begin() + static_cast<std::ptrdiff_t>(lead), net.end());
  net = std::move(kept);
}

PreparationCircuit from_transform(const Matrix& s, std::vector<double> seed, PreparationCircuit::Source source,
                                  const Tolerances& tol) {
  const EulerFactors euler = euler_decompose(SymplecticTransform::unchecked(s), tol);
  PreparationCircuit out;
  out.modes = static_cast<int>(seed.size());
  out.source = source;
  out.seed = std::move(seed);
  if (source == PreparationCircuit::Source::MixedOQV)
    out.input_network = passive_to_two_mode_rotations(euler.inner.matrix(), tol);
  for (double z : euler.squeezing) out.squeezers.push_back({z * z, Squeezer::Orientation::X});
  out.output_network = passive_to_two_mode_rotations(euler.outer.matrix(), tol);
  if (source == PreparationCircuit::Source::PureOPO) fold_vacuum_phases(out);
  return out;
}

}  // namespace

Matrix PassiveElement::symplectic(int modes) const {
  ComplexMatrix u = ComplexMatrix::Identity(modes, modes);
  const std::complex<double> phase = std::polar(1.0, phi);
  if (kind == Kind::Phase) {
    u(mode_a, mode_a) = phase;
  } else {
    const double c = std::cos(theta), s = std::sin(theta);
    u(mode_a, mode_a) = c;
    u(mode_a, mode_b) = -std::conj(phase) * s;
    u(mode_b, mode_a) = phase * s;
    u(mode_b, mode_b) = c;
  }
  return passive_from_unitary(u);
}

Eigen::Matrix2d Squeezer::symplectic() const {
  const double r = std::sqrt(z);
  Eigen::Matrix2d m = Eigen::Matrix2d::Zero();
  m(0, 0) = orientation == Orientation::X ? r : 1.0 / r;
  m(1, 1) = 1.0 / m(0, 0);
  return m;
}

Matrix PreparationCircuit::seed_matrix() const {
  Matrix g = Matrix::Zero(2 * modes, 2 * modes);
  for (int k = 0; k < modes; ++k) g(2 * k, 2 * k) = g(2 * k + 1, 2 * k + 1) = seed[k];
  return g;
}

Matrix PreparationCircuit::transform() const {
  return network_matrix(output_network, modes) * squeeze_block(squeezers) * network_matrix(input_network, modes);
}

Matrix PreparationCircuit::replay() const {
  const Matrix t = transform();
  return t * seed_matrix() * t.transpose();
}

Matrix network_matrix(const std::vector<PassiveElement>& elements, int modes) {
  Matrix m = Matrix::Identity(2 * modes, 2 * modes);
  for (const auto& el : elements) m = el.symplectic(modes) * m;
  return m;
}

std::vector<PassiveElement> passive_to_two_mode_rotations(const Matrix& o, const Tolerances& tol) {
  ComplexMatrix w = unitary_from_passive(o, tol);
  const int n = static_cast<int>(w.rows());
  std::vector<PassiveElement> rotations;
  for (int col = 0; col < n - 1; ++col) {
    for (int row = n - 1; row > col; --row) {
      const int a = row - 1, b = row;
      const double ra = std::abs(w(a, col)), rb = std::abs(w(b, col));
      if (rb == 0.0) continue;
      PassiveElement el;
      el.kind = PassiveElement::Kind::Rotation;
      el.mode_a = a;
      el.mode_b = b;
      el.theta = std::atan2(rb, ra);
      el.phi = std::arg(w(b, col)) - (ra == 0.0 ? 0.0 : std::arg(w(a, col)));
      el.phi = std::remainder(el.phi, 2.0 * std::numbers::pi);
      if (std::abs(el.theta) <= kTrivialAngle) continue;
      // w <- T^dagger w on rows (a, b).
      const double c = std::cos(el.theta), s = std::sin(el.theta);
      const std::complex<double> e = std::polar(1.0, el.phi);
      for (int j = 0; j < n; ++j) {
        const std::complex<double> wa = w(a, j), wb = w(b, j);
        w(a, j) = c * wa + std::conj(e) * s * wb;
        w(b, j) = -e * s * wa + c * wb;
      }
      w(b, col) = 0.0;
      rotations.push_back(el);
    }
  }
  // w is now diagonal: o = T_1 ... T_m D, so D is applied first.
  std::vector<PassiveElement> out;
  for (int k = 0; k < n; ++k) {
    const double phi = std::arg(w(k, k));
    if (std::abs(phi) > kTrivialAngle) out.push_back({PassiveElement::Kind::Phase, k, -1, 0.0, phi});
  }
  out.insert(out.end(), rotations.rbegin(), rotations.rend());
  return out;
}

PreparationCircuit circuit_from_pure(const CovarianceMatrix& gamma, const Tolerances& tol) {
  if (!gamma.is_physical(tol)) throw Error(ErrorCode::NotPhysical, "target violates the uncertainty relation");
  const WilliamsonForm w = williamson(gamma, tol);
  if (!is_pure_spectrum(w.spectrum, tol))
    throw Error(ErrorCode::NotPure, "symplectic eigenvalues differ from 1 by more than tol_psd");
  return from_transform(symplectic_inverse(w.transform.matrix()), std::vector<double>(gamma.modes(), 1.0),
                        PreparationCircuit::Source::PureOPO, tol);
}

PreparationCircuit circuit_from_mixed(const SynthesisTrace& trace, const Tolerances& tol) {
  const int n = trace.modes();
  const Matrix& s = trace.transform;
  if (n == 0 || s.rows() != 2 * n || s.cols() != 2 * n)
    throw Error(ErrorCode::InvalidTrace, "trace transform has the wrong shape");
  const double scale = std::max(1.0, max_abs(s));
  if (symplectic_defect(s) > tol.sympl * scale * scale)
    throw Error(ErrorCode::InvalidTrace, "trace transform is not symplectic");
  const Matrix& target = trace.final_matrix.matrix();
  if (max_abs(trace.replay() - target) > tol.recon * std::max(1.0, max_abs(target)))
    throw Error(ErrorCode::InvalidTrace, "trace replay does not reproduce its final matrix");
  return from_transform(s, trace.d, PreparationCircuit::Source::MixedOQV, tol);
}

PreparationCircuit circuit_from_covariance(const CovarianceMatrix& gamma, const Tolerances& tol) {
  if (!gamma.is_physical(tol)) throw Error(ErrorCode::NotPhysical, "target violates the uncertainty relation");
  const WilliamsonForm w = williamson(gamma, tol);
  if (is_pure_spectrum(w.spectrum, tol)) return circuit_from_pure(gamma, tol);
  return from_transform(symplectic_inverse(w.transform.matrix()), w.spectrum.values,
                        PreparationCircuit::Source::MixedOQV, tol);
}

void write_circuit(std::ostream& out, const PreparationCircuit& circuit) {
  auto write_network = [&](const char* stage, const std::vector<PassiveElement>& net) {
    out << "stage " << stage << '\n';
    for (const auto& el : net) {
      if (el.kind == PassiveElement::Kind::Rotation)
        out << "rotation modes=" << el.mode_a << ',' << el.mode_b << " theta=" << num(el.theta)
            << " phi=" << num(el.phi) << '\n';
      else
        out << "phase mode=" << el.mode_a << " phi=" << num(el.phi) << '\n';
    }
  };
  out << "circuit modes=" << circuit.modes << " ordering=xpxp source="
      << (circuit.source == PreparationCircuit::Source::PureOPO ? "pure_OPO" : "mixed_OQV") << '\n';
  for (int k = 0; k < circuit.modes; ++k) out << "seed mode=" << k << " d=" << num(circuit.seed[k]) << '\n';
  write_network("input", circuit.input_network);
  out << "stage squeeze\n";
  for (int k = 0; k < static_cast<int>(circuit.squeezers.size()); ++k) {
    const Squeezer& sq = circuit.squeezers[k];
    if (sq.z == 1.0) continue;
    out << "squeeze mode=" << k << " z=" << num(sq.z)
        << " orientation=" << (sq.orientation == Squeezer::Orientation::X ? 'x' : 'p') << '\n';
  }
  write_network("output", circuit.output_network);
}

PreparationCircuit read_circuit(std::istream& in) {
  PreparationCircuit c;
  std::string line, stage;
  int line_no = 0;
  bool have_header = false;
  auto fail = [&](const std::string& what) {
    throw Error(ErrorCode::ParseError, "circuit line " + std::to_string(line_no) + ": " + what);
  };
  while (std::getline(in, line)) {
    ++line_no;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.erase(hash);
    std::istringstream tokens(line);
    std::string kind;
    if (!(tokens >> kind)) continue;
    if (kind == "stage") {
      if (!(tokens >> stage) || (stage != "input" && stage != "squeeze" && stage != "output"))
        fail("stage must be input, squeeze or output");
      if (!have_header) fail("expected the 'circuit' header first");
      continue;
    }
    std::map<std::string, std::string> kv;
    for (std::string tok; tokens >> tok;) {
      const auto eq = tok.find('=');
      if (eq == std::string::npos) fail("expected key=value, got '" + tok + "'");
      kv[tok.substr(0, eq)] = tok.substr(eq + 1);
    }
    auto get = [&](const std::string& key) -> const std::string& {
      const auto it = kv.find(key);
      if (it == kv.end()) fail("missing '" + key + "'");
      return it->second;
    };
    auto real = [&](const std::string& key) {
      const std::string& s = get(key);
      std::size_t used = 0;
      double v = 0.0;
      try {
        v = std::stod(s, &used);
      } catch (const std::exception&) {
        fail("'" + key + "' is not a number");
      }
      if (used != s.size()) fail("'" + key + "' is not a number");
      return v;
    };
    auto mode = [&](const std::string& s) {
      std::size_t used = 0;
      int m = -1;
      try {
        m = std::stoi(s, &used);
      } catch (const std::exception&) {
        fail("bad mode index '" + s + "'");
      }
      if (used != s.size() || m < 0 || m >= c.modes) fail("bad mode index '" + s + "'");
      return m;
    };

    if (kind == "circuit") {
      c.modes = static_cast<int>(real("modes"));
      if (c.modes <= 0) fail("modes must be positive");
      if (kv.count("ordering") && kv["ordering"] != "xpxp") fail("unsupported ordering");
      const std::string& src = get("source");
      if (src == "pure_OPO") c.source = PreparationCircuit::Source::PureOPO;
      else if (src == "mixed_OQV") c.source = PreparationCircuit::Source::MixedOQV;
      else fail("unknown source '" + src + "'");
      c.seed.assign(c.modes, 1.0);
      c.squeezers.assign(c.modes, Squeezer{});
      have_header = true;
      continue;
    }
    if (!have_header) fail("expected the 'circuit' header first");
    if (kind == "seed") {
      c.seed[mode(get("mode"))] = real("d");
    } else if (kind == "squeeze") {
      if (stage != "squeeze") fail("squeezer outside the squeeze stage");
      Squeezer& sq = c.squeezers[mode(get("mode"))];
      sq.z = real("z");
      const std::string& o = get("orientation");
      if (o == "x") sq.orientation = Squeezer::Orientation::X;
      else if (o == "p") sq.orientation = Squeezer::Orientation::P;
      else fail("orientation must be x or p");
    } else if (kind == "rotation" || kind == "phase") {
      std::vector<PassiveElement>* net = stage == "input" ? &c.input_network
                                         : stage == "output" ? &c.output_network
                                                             : nullptr;
      if (!net) fail("passive element outside the input/output stages");
      PassiveElement el;
      el.phi = real("phi");
      if (kind == "rotation") {
        el.kind = PassiveElement::Kind::Rotation;
        const std::string& pair = get("modes");
        const auto comma = pair.find(',');
        if (comma == std::string::npos) fail("modes must be a pair a,b");
        el.mode_a = mode(pair.substr(0, comma));
        el.mode_b = mode(pair.substr(comma + 1));
        if (el.mode_a == el.mode_b) fail("rotation needs two distinct modes");
        el.theta = real("theta");
      } else {
        el.kind = PassiveElement::Kind::Phase;
        el.mode_a = mode(get("mode"));
      }
      net->push_back(el);
    } else {
      fail("unknown record '" + kind + "'");
    }
  }
  if (!have_header) throw Error(ErrorCode::ParseError, "circuit header missing");
  return c;
}

}  // namespace sympmarg
