#include "coarse/homothety.hpp"

#include <algorithm>
#include <map>
#include <random>

#include "coarse/errors.hpp"

namespace coarse {

namespace {

std::int64_t floor_div(std::int64_t a, std::int64_t b) {
  std::int64_t q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}

std::int64_t ceil_div(std::int64_t a, std::int64_t b) { return -floor_div(-a, b); }

/// Nearest multiple index with halves rounded toward minus infinity.
std::int64_t round_half_down(std::int64_t x, std::int64_t r) { return ceil_div(2 * x - r, 2 * r); }

std::int64_t far_distance(const Space& space, const Vertex& a, const Vertex& b) {
  auto d = space.distance(a, b, std::int64_t{1} << 30);
  if (!d) throw ExceedsCutoff("distance beyond search range");
  return *d;
}

std::int64_t to_int(const mpq_class& q, const char* what) {
  if (q.get_den() != 1 || !q.get_num().fits_slong_p())
    throw InvariantViolation(std::string("scaled constant is not an integer: ") + what);
  return q.get_num().get_si();
}

std::vector<Vertex> random_walk_sample(const Space& space, std::int64_t length, std::mt19937_64& rng) {
  Vertex x = space.base();
  for (std::int64_t i = 0; i < length; ++i) {
    auto nb = space.neighbors(x);
    std::uniform_int_distribution<std::size_t> pick(0, nb.size() - 1);
    x = nb[pick(rng)];
  }
  return {x};
}

/// Exhaustive ball, or nullopt when it has more than `limit` vertices.
std::optional<std::vector<Vertex>> small_ball(const Space& space, std::int64_t r, std::size_t limit) {
  try {
    return space.ball(space.base(), r, limit);
  } catch (const ResourceLimit&) {
    return std::nullopt;
  }
}

/// Inequality tracker with every quantity scaled by a common positive integer.
class Tracker {
 public:
  Tracker(std::string name, std::int64_t scale, std::size_t maxWitnesses)
      : scale_(scale), maxWitnesses_(maxWitnesses) {
    report_.name = std::move(name);
  }

  void record(std::int64_t lhs, std::int64_t mid, std::int64_t rhs, bool twoSided,
              const std::function<std::pair<Json, Json>()>& witness) {
    ++report_.checked;
    std::int64_t slack = rhs - mid;
    if (twoSided) slack = std::min(slack, mid - lhs);
    if (!worst_ || slack < *worst_) worst_ = slack;
    if (slack < 0) {
      ++report_.violationCount;
      if (report_.violations.size() < maxWitnesses_) {
        auto [x, y] = witness();
        report_.violations.push_back({x, y, mpq_class(lhs, scale_), mpq_class(mid, scale_),
                                      mpq_class(rhs, scale_)});
        auto& v = report_.violations.back();
        v.lhs.canonicalize();
        v.mid.canonicalize();
        v.rhs.canonicalize();
      }
    }
  }

  InequalityReport finish() {
    if (worst_) {
      mpq_class w(*worst_, scale_);
      w.canonicalize();
      report_.worstSlack = w;
    }
    return report_;
  }

 private:
  std::int64_t scale_;
  std::size_t maxWitnesses_;
  std::optional<std::int64_t> worst_;
  InequalityReport report_;
};

}  // namespace

std::int64_t QuasiHomothetyFamily::index_for_reach(std::int64_t r) const {
  std::int64_t j = firstJ;
  while (rho(j) < r) ++j;
  return j;
}

QuasiHomothetyFamily z2_scaling_family(std::vector<std::int64_t> rhos) {
  for (std::size_t i = 0; i < rhos.size(); ++i)
    if (rhos[i] < 1 || (i > 0 && rhos[i] <= rhos[i - 1]))
      throw MalformedInput("rho sequence must be positive and strictly increasing");
  QuasiHomothetyFamily f;
  f.name = "z2";
  f.gamma = Space::grid(2);
  f.delta = [](std::int64_t) { return Space::grid(2); };
  auto rho = [rhos](std::int64_t j) -> std::int64_t {
    if (rhos.empty()) return j;
    if (j < 1 || j > static_cast<std::int64_t>(rhos.size())) throw MalformedInput("family index out of range");
    return rhos[static_cast<std::size_t>(j - 1)];
  };
  f.rho = rho;
  f.A = 1;
  f.B = 0;
  f.iota = [rho](std::int64_t j, const Vertex& x) {
    const auto& c = std::get<GridVertex>(x).coords;
    const auto r = rho(j);
    return grid_vertex({c[0] * r, c[1] * r});
  };
  f.pi = [rho](std::int64_t j, const Vertex& x) {
    const auto& c = std::get<GridVertex>(x).coords;
    const auto r = rho(j);
    return grid_vertex({round_half_down(c[0], r), round_half_down(c[1], r)});
  };
  f.preimageSeed = f.pi;
  f.inImage = [rho](std::int64_t j, const Vertex& x) {
    const auto& c = std::get<GridVertex>(x).coords;
    const auto r = rho(j);
    return c[0] % r == 0 && c[1] % r == 0;
  };
  f.homomorphism = true;
  return f;
}

QuasiHomothetyFamily lamplighter_family(const LampGroup& L) {
  if (L.trivial()) throw MalformedInput("lamplighter family needs a nontrivial lamp group");
  QuasiHomothetyFamily f;
  f.name = "lamplighter:" + (L.name().rfind("Z/", 0) == 0 ? L.name().substr(2) : L.name());
  f.gamma = Space::lamplighter(L, 1);
  f.delta = [L](std::int64_t j) { return Space::lamplighter(L, static_cast<int>(j)); };
  f.rho = [](std::int64_t j) { return j; };
  f.A = 1;
  f.B = 2;
  f.iota = [L](std::int64_t j, const Vertex& x) {
    const LampPower power(L, static_cast<int>(j));
    const auto& v = std::get<LampVertex>(x);
    LampVertex out;
    for (const auto& [k, state] : v.lamps)
      for (int i = 0; i < j; ++i)
        if (auto c = power.component(state, i); c != 0) out.lamps.emplace_back(j * k + i, c);
    out.pos = j * v.pos;
    return Vertex(out);
  };
  f.pi = [L](std::int64_t j, const Vertex& x) {
    const LampPower power(L, static_cast<int>(j));
    const auto& v = std::get<LampVertex>(x);
    std::map<std::int64_t, std::vector<std::uint32_t>> blocks;
    for (const auto& [p, state] : v.lamps) {
      const auto k = floor_div(p, j);
      auto& block = blocks[k];
      block.resize(static_cast<std::size_t>(j), 0);
      block[static_cast<std::size_t>(p - j * k)] = state;
    }
    LampVertex out;
    for (const auto& [k, block] : blocks) out.lamps.emplace_back(k, power.compose(block));
    out.pos = floor_div(v.pos, j);
    return Vertex(out);
  };
  f.preimageSeed = f.pi;
  f.inImage = [](std::int64_t j, const Vertex& x) { return std::get<LampVertex>(x).pos % j == 0; };
  f.homomorphism = true;
  return f;
}

QuasiHomothetyFamily parse_family(const std::string& spec) {
  if (spec == "z2") return z2_scaling_family();
  const std::string prefix = "lamplighter:";
  if (spec.rfind(prefix, 0) == 0) {
    const auto rest = spec.substr(prefix.size());
    if (!rest.empty() && rest[0] == '@') return lamplighter_family(LampGroup::load(rest.substr(1)));
    std::size_t used = 0;
    long q = 0;
    try {
      q = std::stol(rest, &used);
    } catch (const std::exception&) {
      used = 0;
    }
    if (used != rest.size() || q < 2 || q > 1 << 16) throw MalformedInput("bad lamp group order in " + spec);
    return lamplighter_family(LampGroup::cyclic(static_cast<std::uint32_t>(q)));
  }
  throw MalformedInput("unknown family spec: " + spec);
}

std::function<Vertex(std::int64_t, const Vertex&)> generic_quasi_inverse(
    const QuasiHomothetyFamily& family, std::int64_t searchRadius) {
  return [family, searchRadius](std::int64_t j, const Vertex& x) {
    const auto delta = family.delta(j);
    const mpq_class bound = family.A * family.rho(j) + family.B;
    std::optional<Vertex> best;
    std::int64_t bestD = 0;
    std::string bestKey;
    for (const auto& c : delta.ball(family.preimageSeed(j, x), searchRadius)) {
      const auto d = far_distance(family.gamma, family.iota(j, c), x);
      std::string key = delta.serialize(c);
      if (!best || d < bestD || (d == bestD && key < bestKey)) {
        best = c;
        bestD = d;
        bestKey = std::move(key);
      }
    }
    if (mpq_class(bestD) > bound)
      throw InvariantViolation("quasi-inverse search exhausted: best defect " + std::to_string(bestD) +
                               " exceeds " + bound.get_str());
    return *best;
  };
}

std::uint64_t VerificationReport::violations() const {
  std::uint64_t n = 0;
  for (const auto& j : perJ)
    for (const auto& i : j.inequalities) n += i.violationCount;
  return n;
}

const InequalityReport* VerificationReport::find(std::int64_t j, const std::string& name) const {
  for (const auto& r : perJ)
    if (r.j == j)
      for (const auto& i : r.inequalities)
        if (i.name == name) return &i;
  return nullptr;
}

VerificationReport verify_family(const QuasiHomothetyFamily& family, const SampleSpec& spec) {
  VerificationReport report;
  report.family = family.name;
  report.A = family.A;
  report.B = family.B;
  const auto& G = family.gamma;
  auto pi = family.pi ? family.pi : generic_quasi_inverse(family, 2);
  std::mt19937_64 rng(spec.seed);

  for (const auto j : spec.js) {
    JReport jr;
    jr.j = j;
    jr.rho = family.rho(j);
    const auto D = family.delta(j);
    const mpq_class A = family.A, B = family.B;
    // Common scale making every coefficient an integer.
    const mpz_class scaleZ = mpz_class(jr.rho) * A.get_den() * B.get_den() * A.get_num();
    if (!scaleZ.fits_slong_p()) throw InvariantViolation("scale overflow");
    const std::int64_t Q = scaleZ.get_si();
    const mpq_class Qq(scaleZ);
    const auto qA = to_int(A * Qq, "A");
    const auto qInvA = to_int(Qq / A, "1/A");
    const auto qB = to_int(B * Qq, "B");
    const auto qInvRho = to_int(Qq / jr.rho, "1/rho");
    const auto qAB = to_int(A * B * Qq, "AB");
    const auto q2A3B = to_int((2 * A + 3 * B) * Qq, "2A+3B");
    const auto qSurj = to_int((A * jr.rho + B) * Qq, "A rho + B");

    Tracker def1("def1", Q, spec.maxWitnesses), def2("def2", Q, spec.maxWitnesses),
        lemQuasi("lem-quasi", Q, spec.maxWitnesses), lemSurj("lem-surj", Q, spec.maxWitnesses),
        lemProj("lem-proj", Q, spec.maxWitnesses), image("image", 1, spec.maxWitnesses);

    // Delta side: pairs for Def. (2), singles for the near-inverse bound.
    auto delta_pair = [&](const Vertex& x, const Vertex& ix, const Vertex& y, const Vertex& iy) {
      const auto dD = far_distance(D, x, y);
      const auto dG = far_distance(G, ix, iy);
      def2.record(qInvA * dD - qB, qInvRho * dG, qA * dD + qB, true,
                  [&] { return std::pair{D.to_json(x), D.to_json(y)}; });
    };
    auto delta_single = [&](const Vertex& x, const Vertex& ix) {
      const auto d = far_distance(D, x, pi(j, ix));
      lemProj.record(Q * d, Q * d, qAB, false, [&] { return std::pair{D.to_json(x), Json(nullptr)}; });
    };

    if (auto ball = small_ball(D, spec.radius, spec.exhaustiveLimit)) {
      jr.deltaSampling = "exhaustive pairs in B(" + std::to_string(spec.radius) + "), " +
                         std::to_string(ball->size()) + " vertices";
      std::vector<Vertex> images;
      images.reserve(ball->size());
      for (const auto& x : *ball) images.push_back(family.iota(j, x));
      for (std::size_t a = 0; a < ball->size(); ++a) {
        delta_single((*ball)[a], images[a]);
        for (std::size_t b = a + 1; b < ball->size(); ++b)
          delta_pair((*ball)[a], images[a], (*ball)[b], images[b]);
      }
    } else {
      jr.deltaSampling = std::to_string(spec.randomPairs) + " random pairs from length-" +
                         std::to_string(spec.randomRadius) + " walks";
      for (std::size_t n = 0; n < spec.randomPairs; ++n) {
        const auto x = random_walk_sample(D, spec.randomRadius, rng).front();
        const auto y = random_walk_sample(D, spec.randomRadius, rng).front();
        const auto ix = family.iota(j, x), iy = family.iota(j, y);
        delta_single(x, ix);
        delta_pair(x, ix, y, iy);
      }
      if (family.homomorphism) {
        // Left translation is an isometry of both spaces and commutes with a
        // homomorphism, so every pair at distance <= radius is a translate of
        // some (base, g) with g in B(radius).
        const auto e = D.base();
        const auto ie = family.iota(j, e);
        const auto ball = D.ball(e, spec.radius);
        jr.deltaSampling += " plus translation-exhaustive (base, g) for all " +
                            std::to_string(ball.size()) + " g in B(" + std::to_string(spec.radius) + ")";
        for (const auto& g : ball) {
          const auto ig = family.iota(j, g);
          delta_single(g, ig);
          delta_pair(e, ie, g, ig);
        }
      }
    }

    // Gamma side: surjectivity and image singles, quasi-inverse pairs.
    auto gamma_single = [&](const Vertex& x, const Vertex& px) {
      const auto back = family.iota(j, px);
      const auto d = far_distance(G, back, x);
      def1.record(Q * d, Q * d, qSurj, false, [&] { return std::pair{G.to_json(x), D.to_json(px)}; });
      lemSurj.record(Q * d, Q * d, qSurj, false, [&] { return std::pair{G.to_json(x), Json(nullptr)}; });
      if (family.inImage) {
        const bool predicted = family.inImage(j, x);
        const bool actual = back == x;
        image.record(0, 0, predicted == actual ? 0 : -1, false,
                     [&] { return std::pair{G.to_json(x), Json(predicted)}; });
      }
    };
    auto gamma_pair = [&](const Vertex& x, const Vertex& px, const Vertex& y, const Vertex& py) {
      const auto dG = far_distance(G, x, y);
      const auto dD = far_distance(D, px, py);
      lemQuasi.record(qInvA * dD - q2A3B, qInvRho * dG, qA * dD + q2A3B, true,
                      [&] { return std::pair{G.to_json(x), G.to_json(y)}; });
    };
    if (auto ball = small_ball(G, spec.radius, spec.exhaustiveLimit)) {
      jr.gammaSampling = "exhaustive pairs in B(" + std::to_string(spec.radius) + "), " +
                         std::to_string(ball->size()) + " vertices";
      std::vector<Vertex> proj;
      for (const auto& x : *ball) proj.push_back(pi(j, x));
      for (std::size_t a = 0; a < ball->size(); ++a) {
        gamma_single((*ball)[a], proj[a]);
        for (std::size_t b = a + 1; b < ball->size(); ++b)
          gamma_pair((*ball)[a], proj[a], (*ball)[b], proj[b]);
      }
    } else {
      jr.gammaSampling = std::to_string(spec.randomPairs) + " random pairs from length-" +
                         std::to_string(spec.randomRadius) + " walks";
      for (std::size_t n = 0; n < spec.randomPairs; ++n) {
        const auto x = random_walk_sample(G, spec.randomRadius, rng).front();
        const auto y = random_walk_sample(G, spec.randomRadius, rng).front();
        const auto px = pi(j, x), py = pi(j, y);
        gamma_single(x, px);
        gamma_pair(x, px, y, py);
      }
    }

    jr.inequalities = {def1.finish(), def2.finish(), lemQuasi.finish(), lemSurj.finish(), lemProj.finish()};
    if (family.inImage) jr.inequalities.push_back(image.finish());
    report.perJ.push_back(std::move(jr));
  }
  return report;
}

Json report_to_json(const VerificationReport& r) {
  Json perJ = Json::array();
  Json verified = Json::array();
  for (const auto& j : r.perJ) {
    verified.push_back(j.j);
    Json ineqs = Json::object();
    for (const auto& i : j.inequalities) {
      Json viol = Json::array();
      for (const auto& v : i.violations)
        viol.push_back(Json{{"x", v.x},
                            {"y", v.y},
                            {"lhs", v.lhs.get_str()},
                            {"mid", v.mid.get_str()},
                            {"rhs", v.rhs.get_str()}});
      ineqs[i.name] = Json{{"checked", i.checked},
                           {"worstSlack", i.worstSlack ? Json(i.worstSlack->get_str()) : Json(nullptr)},
                           {"violationCount", i.violationCount},
                           {"violations", viol}};
    }
    perJ.push_back(Json{{"j", j.j},
                        {"rho", j.rho},
                        {"sampling", Json{{"delta", j.deltaSampling}, {"gamma", j.gammaSampling}}},
                        {"inequalities", ineqs}});
  }
  return Json{{"family", r.family},
              {"A", r.A.get_str()},
              {"B", r.B.get_str()},
              {"verifiedJ", verified},
              {"violations", r.violations()},
              {"perJ", perJ}};
}

}  // namespace coarse
