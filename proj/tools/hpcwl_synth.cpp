// hpcwl-synth: writes a deterministic synthetic data set and a config running every analysis.

#include <iostream>

#include <CLI11.hpp>

#include "hpcwl/core/errors.hpp"
#include "hpcwl/report/synth.hpp"

#ifndef HPCWL_DATA_DIR
#define HPCWL_DATA_DIR "data"
#endif

int main(int argc, char** argv) {
  CLI::App app{"Generate the synthetic HPC workload data set"};
  std::string out = "synth";
  std::string data_dir = HPCWL_DATA_DIR;
  hpcwl::report::SynthOptions opts;
  std::string start = opts.start.to_string();
  app.add_option("-o,--out", out, "Output directory");
  app.add_option("--data-dir", data_dir, "Directory holding xsede_resources.json and appident/");
  app.add_option("--seed", opts.seed, "Random seed");
  app.add_option("--jobs", opts.n_jobs, "Number of jobs");
  app.add_option("--start", start, "First submit date (YYYY-MM-DD)");
  app.add_option("--days", opts.days, "Length of the trace in days");
  app.add_option("--archive-fraction", opts.archive_fraction, "Share of eligible jobs with node archives");
  CLI11_PARSE(app, argc, argv);

  try {
    opts.start = hpcwl::Date::parse(start);
    std::filesystem::path data(data_dir);
    hpcwl::report::SynthSources src{data / "xsede_resources.json", data / "appident" / "patterns.tsv",
                                    data / "appident" / "ignore.txt"};
    hpcwl::report::write_dataset(out, src, opts);
    std::cout << "wrote synthetic data set to " << out << "\n";
  } catch (const hpcwl::Error& e) {
    std::cerr << "hpcwl-synth: " << e.code() << ": " << e.what() << "\n";
    return e.kind() == hpcwl::ErrorKind::input ? 2 : 1;
  } catch (const std::exception& e) {
    std::cerr << "hpcwl-synth: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
