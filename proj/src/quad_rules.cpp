#include "surfquad/quad_rules.hpp"

#include "surfquad/errors.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <map>
#include <mutex>

namespace surfquad {

namespace {

// Symmetric orbit in barycentric coordinates. Weights are normalised to sum
// to one over the whole rule, as in the published tables.
struct Orbit {
  enum Kind { centroid, three, six } kind;
  long double a = 0, b = 0, w = 0;
};

struct RuleTable {
  int degree;
  std::vector<Orbit> orbits;
};

// Dunavant (1985) symmetric Gaussian rules. Degrees 3, 7 and 11 of that
// family carry a negative weight or exterior points and are served by the
// next higher rule instead.
const std::vector<RuleTable>& tables() {
  static const std::vector<RuleTable> t = {
      {1, {{Orbit::centroid, 0, 0, 1.0L}}},
      {2, {{Orbit::three, 1.0L / 6.0L, 0, 1.0L / 3.0L}}},
      {4,
       {{Orbit::three, 0.44594849091596488631832925388305L, 0,
         0.22338158967801146569500700843312L},
        {Orbit::three, 0.09157621350977074345957146340220L, 0,
         0.10995174365532186763832632490021L}}},
      {5,
       {{Orbit::centroid, 0, 0, 0.225L},
        {Orbit::three, 0.47014206410511508977044120951345L, 0,
         0.13239415278850618073764938783315L},
        {Orbit::three, 0.10128650732345633880098736191512L, 0,
         0.12593918054482715259568394550018L}}},
      {6,
       {{Orbit::three, 0.24928674517091042129163855310702L, 0,
         0.11678627572637936602528961138558L},
        {Orbit::three, 0.06308901449150222834033160287082L, 0,
         0.05084490637020681692093680910686L},
        {Orbit::six, 0.31035245103378440541660773395655L,
         0.63650249912139864723014259441205L,
         0.08285107561837357519355345642044L}}},
      {8,
       {{Orbit::centroid, 0, 0, 0.14431560767778716825109111048906L},
        {Orbit::three, 0.17056930775176020662229350149146L, 0,
         0.10321737053471825028179155029212L},
        {Orbit::three, 0.05054722831703097545842355059660L, 0,
         0.03245849762319808031092592834178L},
        {Orbit::three, 0.45929258829272315602881551449417L, 0,
         0.09509163426728462479389610438858L},
        {Orbit::six, 0.26311282963463811342178578628464L,
         0.72849239295540428124100037917606L,
         0.02723031417443499426484469007390L}}},
      {9,
       {{Orbit::centroid, 0, 0, 0.09713579628279609890744676309485L},
        {Orbit::three, 0.48968251919873762778370692483619L, 0,
         0.03133470022713983234393199080984L},
        {Orbit::three, 0.43708959149293663726993036443535L, 0,
         0.07782754100477543338465495857972L},
        {Orbit::three, 0.18820353561903273024096128046733L, 0,
         0.07964773892720910288013526957424L},
        {Orbit::three, 0.04472951339445297061024247196780L, 0,
         0.02557767565869810438673914467637L},
        {Orbit::six, 0.22196298916076569567510252769319L,
         0.74119859878449802069007987352342L,
         0.04328353937728937728937728937729L}}},
      {10,
       {{Orbit::centroid, 0, 0, 0.090817990382754L},
        {Orbit::three, 0.485577633383657L, 0, 0.036725957756467L},
        {Orbit::three, 0.109481575485037L, 0, 0.045321059435528L},
        {Orbit::six, 0.141707219414880L, 0.307939838764121L, 0.072757916845420L},
        {Orbit::six, 0.025003534762686L, 0.246672560639903L, 0.028327242531057L},
        {Orbit::six, 0.009540815400299L, 0.066803251012200L, 0.009421666963733L}}},
      {12,
       {{Orbit::three, 0.488217389773805L, 0, 0.025731066440455L},
        {Orbit::three, 0.439724392294460L, 0, 0.043692544538038L},
        {Orbit::three, 0.271210385012116L, 0, 0.062858224217885L},
        {Orbit::three, 0.127576145541586L, 0, 0.034796112930709L},
        {Orbit::three, 0.021317350453210L, 0, 0.006166261051559L},
        {Orbit::six, 0.115343494534698L, 0.275713269685514L, 0.040371557766381L},
        {Orbit::six, 0.022838332222257L, 0.281325580989940L, 0.022356773202303L},
        {Orbit::six, 0.025734050548330L, 0.116251915907597L, 0.017316231108659L}}},
  };
  return t;
}

using Real = long double;
using PointL = std::array<Real, 2>;

void expand(const Orbit& o, std::vector<PointL>& pts, std::vector<Real>& w) {
  switch (o.kind) {
    case Orbit::centroid:
      pts.push_back({1.0L / 3.0L, 1.0L / 3.0L});
      w.push_back(o.w / 2);
      break;
    case Orbit::three: {
      const Real a = o.a, c = 1 - 2 * a;
      for (PointL p : {PointL{a, c}, PointL{a, a}, PointL{c, a}}) {
        pts.push_back(p);
        w.push_back(o.w / 2);
      }
      break;
    }
    case Orbit::six: {
      const Real a = o.a, b = o.b, c = 1 - a - b;
      for (PointL p : {PointL{b, c}, PointL{c, b}, PointL{a, c}, PointL{c, a},
                       PointL{a, b}, PointL{b, a}}) {
        pts.push_back(p);
        w.push_back(o.w / 2);
      }
      break;
    }
  }
}

Real monomial_integral_l(int a, int b) {
  // a! b! / (a+b+2)!
  Real num = 1;
  for (int i = 2; i <= a; ++i) num *= i;
  for (int i = 2; i <= b; ++i) num *= i;
  Real den = 1;
  for (int i = 2; i <= a + b + 2; ++i) den *= i;
  return num / den;
}

using VecL = Eigen::Matrix<Real, Eigen::Dynamic, 1>;
using MatL = Eigen::Matrix<Real, Eigen::Dynamic, Eigen::Dynamic>;

std::vector<Real*> free_parameters(std::vector<Orbit>& orbits) {
  std::vector<Real*> p;
  for (auto& o : orbits) {
    if (o.kind != Orbit::centroid) p.push_back(&o.a);
    if (o.kind == Orbit::six) p.push_back(&o.b);
    p.push_back(&o.w);
  }
  return p;
}

VecL moment_residual(const std::vector<Orbit>& orbits, int degree) {
  std::vector<PointL> pts;
  std::vector<Real> w;
  for (const auto& o : orbits) expand(o, pts, w);
  VecL r((degree + 1) * (degree + 2) / 2);
  int row = 0;
  for (int d = 0; d <= degree; ++d) {
    for (int a = d; a >= 0; --a) {
      const int b = d - a;
      Real sum = 0;
      for (std::size_t q = 0; q < pts.size(); ++q)
        sum += w[q] * std::pow(pts[q][0], a) * std::pow(pts[q][1], b);
      r[row++] = sum - monomial_integral_l(a, b);
    }
  }
  return r;
}

// Gauss-Newton on the orbit parameters; the tables are already accurate to
// ~1e-15, so two or three steps reach extended precision.
void polish(std::vector<Orbit>& orbits, int degree) {
  auto params = free_parameters(orbits);
  const Real h = 1e-9L;
  for (int iter = 0; iter < 4; ++iter) {
    const VecL r = moment_residual(orbits, degree);
    if (r.cwiseAbs().maxCoeff() < 1e-18L) break;
    MatL jac(r.size(), static_cast<Eigen::Index>(params.size()));
    for (std::size_t j = 0; j < params.size(); ++j) {
      const Real keep = *params[j];
      *params[j] = keep + h;
      const VecL rp = moment_residual(orbits, degree);
      *params[j] = keep - h;
      const VecL rm = moment_residual(orbits, degree);
      *params[j] = keep;
      jac.col(static_cast<Eigen::Index>(j)) = (rp - rm) / (2 * h);
    }
    const VecL step = jac.completeOrthogonalDecomposition().solve(-r);
    for (std::size_t j = 0; j < params.size(); ++j)
      *params[j] += step[static_cast<Eigen::Index>(j)];
  }
}

QuadratureRule materialise(const RuleTable& table) {
  std::vector<Orbit> orbits = table.orbits;
  polish(orbits, table.degree);
  std::vector<PointL> pts;
  std::vector<Real> w;
  for (const auto& o : orbits) expand(o, pts, w);
  QuadratureRule rule;
  rule.degree = table.degree;
  for (std::size_t q = 0; q < pts.size(); ++q) {
    rule.points.emplace_back(static_cast<double>(pts[q][0]),
                             static_cast<double>(pts[q][1]));
    rule.weights.push_back(static_cast<double>(w[q]));
  }
  return rule;
}

// A transcription error must never reach an integration.
void verify_or_abort(const QuadratureRule& rule) {
  double wsum = 0.0;
  bool ok = true;
  for (std::size_t q = 0; q < rule.size(); ++q) {
    wsum += rule.weights[q];
    const Vec2& p = rule.points[q];
    if (!(rule.weights[q] > 0.0) || !(p.x() > 0.0) || !(p.y() > 0.0) ||
        !(p.x() + p.y() < 1.0))
      ok = false;
  }
  const double err = max_monomial_error(rule, rule.degree);
  if (!ok || std::abs(wsum - 0.5) > 1e-14 || !(err <= 1e-13)) {
    std::fprintf(stderr,
                 "surfquad: embedded degree-%d triangle rule failed verification "
                 "(monomial error %.3e, weight sum %.17g)\n",
                 rule.degree, err, wsum);
    std::abort();
  }
}

}  // namespace

double monomial_integral(int a, int b) {
  if (a < 0 || b < 0) throw InvalidArgument("negative monomial exponent");
  return static_cast<double>(monomial_integral_l(a, b));
}

double max_monomial_error(const QuadratureRule& rule, int degree) {
  double worst = 0.0;
  for (int d = 0; d <= degree; ++d) {
    for (int a = 0; a <= d; ++a) {
      const int b = d - a;
      long double sum = 0;
      for (std::size_t q = 0; q < rule.size(); ++q)
        sum += static_cast<long double>(rule.weights[q]) *
               std::pow(static_cast<long double>(rule.points[q].x()), a) *
               std::pow(static_cast<long double>(rule.points[q].y()), b);
      worst = std::max(worst, static_cast<double>(std::abs(sum - monomial_integral_l(a, b))));
    }
  }
  return worst;
}

std::vector<int> embedded_rule_degrees() {
  std::vector<int> out;
  for (const auto& t : tables()) out.push_back(t.degree);
  return out;
}

const QuadratureRule& builtin_rule(int degree) {
  if (degree < 1 || degree > 12)
    throw UnsupportedDegree("no embedded triangle rule of degree " +
                            std::to_string(degree) + " (supported: 1..12)");
  static std::once_flag once;
  static std::map<int, QuadratureRule> rules;
  std::call_once(once, [] {
    for (const auto& t : tables()) {
      QuadratureRule r = materialise(t);
      verify_or_abort(r);
      rules.emplace(t.degree, std::move(r));
    }
  });
  return rules.lower_bound(degree)->second;
}

}  // namespace surfquad
