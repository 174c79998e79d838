#include "twave/continuation.hpp"

#include <cmath>

#include "twave/errors.hpp"

namespace twave {

void HomotopyPath::validate() const {
  if (values.empty()) throw ParameterError("continuation path has no values");
  for (double v : values)
    if (!std::isfinite(v)) throw ParameterError("continuation values must be finite");
  if (values.size() >= 2) {
    const bool up = values[1] > values[0];
    for (std::size_t i = 1; i < values.size(); ++i) {
      const bool step_up = values[i] > values[i - 1];
      if (values[i] == values[i - 1] || step_up != up)
        throw ParameterError("continuation values must be strictly monotone");
    }
  }
  if (max_bisections < 0) throw ParameterError("max_bisections must be non-negative");
  config.validate();
}

namespace {

class Driver {
 public:
  Driver(const ProblemFamily& family, const HomotopyPath& path, const FactorBuilder& factor)
      : family_(family), path_(path), factor_(factor) {}

  SolveResult run(double value, const Field& seed) {
    const ProblemPtr problem = family_(value);
    const FactorPtr s = factor_ ? factor_(problem) : nullptr;
    return solve(*problem, s.get(), seed, path_.config);
  }

  // Reaches `to` from a converged state at `from`, bisecting on failure.
  bool advance(double from, double to, const Field& seed, int depth, bool inserted,
               std::vector<StageResult>& stages) {
    SolveResult r = run(to, seed);
    if (r.converged()) {
      stages.push_back({to, inserted, std::move(r)});
      return true;
    }
    if (depth >= path_.max_bisections) {
      stages.push_back({to, inserted, std::move(r)});
      return false;
    }
    const double mid = 0.5 * (from + to);
    if (!advance(from, mid, seed, depth + 1, true, stages)) return false;
    const Field next = stages.back().result.solution;
    return advance(mid, to, next, depth + 1, inserted, stages);
  }

 private:
  const ProblemFamily& family_;
  const HomotopyPath& path_;
  const FactorBuilder& factor_;
};

}  // namespace

ContinuationResult continue_solve(const ProblemFamily& family, const HomotopyPath& path,
                                  const Field& seed, const FactorBuilder& factor) {
  path.validate();
  Driver driver(family, path, factor);
  ContinuationResult out;

  SolveResult first = driver.run(path.values.front(), seed);
  const bool ok = first.converged();
  out.stages.push_back({path.values.front(), false, std::move(first)});
  if (!ok) {
    out.message = "first stage did not converge";
    return out;
  }
  for (std::size_t i = 1; i < path.values.size(); ++i) {
    const Field start = out.stages.back().result.solution;
    if (!driver.advance(path.values[i - 1], path.values[i], start, 0, false, out.stages)) {
      out.message = "stage " + path.parameter + " = " + format_number(path.values[i]) +
                    " failed after step bisection";
      return out;
    }
  }
  out.completed = true;
  return out;
}

}  // namespace twave
