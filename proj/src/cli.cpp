// Copyright 2026 The rratio Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
//
//     http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.


#include "rratio/cli.hpp"

#include <exception>
#include <fstream>
#include <functional>
#include <ostream>

#include "rratio/simulation.hpp"

namespace rratio::cli {
namespace {

class OutputError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Runs `body` against the file at `path`, or against `fallback` when no path is given.
void with_output(const std::optional<std::filesystem::path>& path, std::ostream& fallback,
                 const std::function<void(std::ostream&)>& body) {
  if (!path) {
    body(fallback);
    return;
  }
  std::ofstream file(*path, std::ios::binary | std::ios::trunc);
  if (!file) {
    throw OutputError("cannot write " + path->string());
  }
  body(file);
  file.flush();
  if (!file) {
    throw OutputError("write failed for " + path->string());
  }
}

int guarded(std::ostream& err, const std::function<void()>& body) {
  try {
    body();
    return kExitOk;
  } catch (const ParseError& e) {
    err << "parse error: " << e.what() << '\n';
  } catch (const ValidationError& e) {
    err << "invalid input: " << e.what() << '\n';
  } catch (const ConfigError& e) {
    err << "config error: " << e.what() << '\n';
  } catch (const OutputError& e) {
    err << "output error: " << e.what() << '\n';
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitFailure;
  }
  return kExitInput;
}

void check_alpha(double alpha) {
  if (!(alpha > 0.0 && alpha < 1.0)) {
    throw ValidationError("alpha must lie in (0, 1)");
  }
}

void check_replications(const std::optional<int>& reps) {
  if (reps && *reps < 1) {
    throw ValidationError("replications must be >= 1");
  }
}

}  // namespace

int run_ci(const CiArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    check_alpha(args.alpha);
    const TwoGroupStudy study = io::read_study_file(args.study);
    MethodParams params = MethodParams::for_alpha(args.alpha);
    params.formulas = args.formulas;
    params.fieller_gamma = args.fieller_gamma;
    params.mover_restrictions = args.mover_restrictions;
    const IntervalSet results = compute_all(study, params);
    with_output(args.out, out, [&](std::ostream& os) { io::write_intervals(os, results, args.format); });
  });
}

int run_simulate(const SimulateArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    io::GridConfig config = io::read_grid_config(args.config);
    check_replications(args.replications);
    if (args.replications) {
      config.replications = *args.replications;
    }
    if (args.seed) {
      config.seed = *args.seed;
    }
    if (args.alpha) {
      check_alpha(*args.alpha);
      config.alpha = *args.alpha;
    }
    if (args.formulas) {
      config.formulas = *args.formulas;
    }
    if (args.workers < 1) {
      throw ValidationError("workers must be >= 1");
    }
    const std::vector<ScenarioSpec> specs = io::expand_grid(config);
    err << "grid: " << specs.size() << " cells x " << config.replications << " replications\n";
    const GridResult grid = run_grid(specs, args.workers, config.run_options());

    std::size_t stalled = 0;
    for (const ScenarioMetrics& cell : grid.cells) {
      stalled += cell.stalled ? 1 : 0;
    }
    if (stalled > 0) {
      err << "warning: " << stalled << " cell(s) stalled before reaching the replication target\n";
    }

    with_output(args.out, out, [&](std::ostream& os) { io::write_metrics(os, grid, args.format); });
    const io::Format summary_format = args.format == io::Format::kJson ? io::Format::kJson : io::Format::kCsv;
    if (args.medians_out) {
      with_output(args.medians_out, out,
                  [&](std::ostream& os) { io::write_medians(os, grid.medians, summary_format); });
    } else if (args.out) {
      io::write_medians(out, grid.medians, io::Format::kTable);
    } else {
      out << '\n';
      io::write_medians(out, grid.medians, summary_format);
    }
  });
}

int run_appropriateness(const AppropriatenessArgs& args, std::ostream& out, std::ostream& err) {
  return guarded(err, [&] {
    io::ParamsConfig config = io::read_params(args.params);
    check_replications(args.replications);
    if (args.replications) {
      config.replications = *args.replications;
    }
    if (args.seed) {
      config.seed = *args.seed;
    }
    if (args.alpha) {
      check_alpha(*args.alpha);
      config.params.alpha = *args.alpha;
    }
    if (args.formulas) {
      config.formulas = *args.formulas;
    }
    const AppropriatenessReport report = appropriateness_check(config.params, config.run_options());
    if (report.metrics.stalled) {
      err << "warning: stalled after " << report.metrics.good_replications << " good replications\n";
    }
    with_output(args.out, out, [&](std::ostream& os) { io::write_appropriateness(os, report, args.format); });
  });
}

}  // namespace rratio::cli
