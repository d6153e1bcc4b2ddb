#include "hpcwl/report/synth.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <map>
#include <numbers>
#include <random>
#include <sstream>

#include <nlohmann/json.hpp>

#include "hpcwl/core/csv.hpp"
#include "hpcwl/core/errors.hpp"
#include "hpcwl/core/table.hpp"
#include "hpcwl/ingest/loaders.hpp"
#include "hpcwl/report/report.hpp"

namespace hpcwl::report {

using nlohmann::json;

namespace {

// Distributions are derived from raw engine output so the data set does not depend on
// the standard library's distribution implementations.
class Rng {
 public:
  explicit Rng(std::uint64_t seed) : eng_(seed) {}

  double uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }
  double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
  std::size_t index(std::size_t n) { return static_cast<std::size_t>(uniform() * static_cast<double>(n)); }
  bool chance(double p) { return uniform() < p; }
  double normal() {
    double u1 = 1.0 - uniform();
    double u2 = uniform();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
  }
  double lognormal(double median, double sigma) { return median * std::exp(sigma * normal()); }
  double exponential(double mean) { return -mean * std::log(1.0 - uniform()); }

  template <typename T>
  const T& pick(const std::vector<T>& v) {
    return v[index(v.size())];
  }

  std::size_t weighted(const std::vector<double>& w) {
    double total = 0;
    for (double x : w) total += x;
    double r = uniform() * total;
    for (std::size_t i = 0; i < w.size(); ++i) {
      if (r < w[i]) return i;
      r -= w[i];
    }
    return w.size() - 1;
  }

 private:
  std::mt19937_64 eng_;
};

struct Science {
  const char* directorate;
  const char* parent;
  const char* field;
  const char* code;
};

const std::vector<Science> kSciences = {
    {"MPS", "Physics", "Elementary Particle Physics", "PHY"},
    {"MPS", "Physics", "Nuclear Physics", "PHY"},
    {"MPS", "Chemistry", "Physical Chemistry", "CHE"},
    {"MPS", "Materials Research", "Condensed Matter Physics", "DMR"},
    {"MPS", "Astronomical Sciences", "Extragalactic Astronomy and Cosmology", "AST"},
    {"MPS", "Astronomical Sciences", "Stellar Astronomy and Astrophysics", "AST"},
    {"BIO", "Molecular Biosciences", "Biophysics", "MCB"},
    {"BIO", "Molecular Biosciences", "Molecular Biosciences", "MCB"},
    {"BIO", "Biological Sciences", "Systematic and Population Biology", "BIO"},
    {"GEO", "Atmospheric Sciences", "Climate Dynamics", "ATM"},
    {"GEO", "Earth Sciences", "Geophysics", "EAR"},
    {"ENG", "Chemical, Thermal Systems", "Fluid, Particulate, and Hydraulic Systems", "CTS"},
    {"CISE", "Advanced Scientific Computing", "Computer and Computation Research", "ASC"},
    {"SBE", "Social, Behavioral, and Economic Sciences", "Economics", "SES"},
};

struct StateInfo {
  const char* code;
  double population;
  double tech_index;  // 0 means no value shipped
  double weight;
};

const std::vector<StateInfo> kStates = {
    {"CA", 39.5e6, 79.3, 14}, {"TX", 28.7e6, 61.2, 10}, {"NY", 19.5e6, 67.0, 7},
    {"IL", 12.7e6, 62.1, 6},  {"PA", 12.8e6, 64.4, 5},  {"IN", 6.7e6, 48.3, 4},
    {"MA", 6.9e6, 85.7, 6},   {"CO", 5.7e6, 75.6, 3},   {"MI", 10.0e6, 58.5, 3},
    {"GA", 10.5e6, 55.0, 3},  {"WA", 7.5e6, 74.0, 3},   {"UT", 3.2e6, 70.8, 2},
    {"NM", 2.1e6, 52.0, 1},   {"OK", 3.9e6, 0.0, 1},    {"PR", 0.0, 0.0, 1},
};

struct App {
  const char* exe;
  double weight;
};

const std::vector<App> kApps = {
    {"/opt/apps/namd/2.12/namd2", 8},      {"/opt/apps/gromacs/2018/bin/gmx_mpi", 6},
    {"lmp_stampede", 5},                   {"/opt/apps/amber/16/bin/pmemd.MPI", 4},
    {"/work/wrf/run/wrf.exe", 4},          {"/opt/apps/espresso/6.1/bin/pw.x", 3},
    {"/opt/apps/vasp/5.4.4/bin/vasp_std", 5}, {"cp2k.popt", 2},
    {"su3_rmd", 2},                        {"enzo.exe", 1},
    {"python3.6", 3},                      {"/opt/apps/gaussian/g16/g16", 2},
    {"a.out", 4},                          {"./my_solver", 3},
};

struct ResourceChoice {
  const char* name;
  double weight;
  const char* prefix;
};

const std::vector<ResourceChoice> kResources = {
    {"TACC-STAMPEDE", 4.0, "c4"},     {"TACC-STAMPEDE2", 5.0, "c5"}, {"SDSC-COMET", 3.0, "comet"},
    {"PSC-BRIDGES", 2.0, "r"},        {"PSC-BRIDGES-LARGE", 0.3, "l"}, {"OSG", 2.0, "osg"},
    {"TACC-JETSTREAM", 0.5, "js"},
};

struct Gateway {
  const char* name;
  const char* account;
};

const std::vector<Gateway> kGateways = {{"CIPRES", "cipres"}, {"SciGaP", "scigap"}, {"nanoHUB", "nanohub"}};

const std::vector<NsfUserStatus> kStatuses = {
    NsfUserStatus::faculty,  NsfUserStatus::postdoc,  NsfUserStatus::grad_student,
    NsfUserStatus::grad_student, NsfUserStatus::univ_research_staff, NsfUserStatus::other,
    NsfUserStatus::unknown};

struct Project {
  std::string charge;
  const Science* science;
  double activity;
  double depth_mu;  // log median node count
  std::vector<std::string> home;  // preferred resources
  std::vector<std::size_t> users;
  int gateway = -1;
  AllocationType type;
};

struct User {
  std::string id;
  NsfUserStatus status;
  UnixSeconds active_from;
  std::optional<std::string> state;
};

bool active(const ResourceSpec& r, Date d) {
  if (d < r.production_start) return false;
  if (r.production_end && !(d < *r.production_end)) return false;
  return std::any_of(r.su_factors.begin(), r.su_factors.end(),
                     [&](const SuFactorWindow& w) { return w.covers(d) && w.covers(d.plus_days(60)); });
}

double submit_rate(UnixSeconds t, UnixSeconds origin) {
  double days = static_cast<double>(t - origin) / 86400.0;
  double daily = 0.55 * std::cos(2.0 * std::numbers::pi * (days - 0.6));
  double weekly = 0.35 * std::cos(2.0 * std::numbers::pi * days / 7.0);
  return 1.0 + daily + weekly;
}

std::string basename(const std::string& exe) {
  auto slash = exe.find_last_of('/');
  return slash == std::string::npos ? exe : exe.substr(slash + 1);
}

std::string dump_line(const json& j) { return j.dump(); }

void archive_job(Rng& rng, const JobRecord& job, const ResourceSpec& spec, const std::string& prefix,
                 std::size_t index, std::vector<std::string>& lines) {
  std::vector<std::string> nodes;
  for (std::int64_t k = 0; k < job.nodes; ++k)
    nodes.push_back(prefix + "-" + std::to_string(index) + "-" + std::to_string(k));
  lines.push_back(dump_line({{"type", "job_nodes"}, {"job_id", job.job_id}, {"nodes", nodes}}));

  auto cpn = spec.cores_per_node;
  double user_frac = std::clamp(rng.uniform(0.35, 1.05), 0.0, 0.99);
  double read_rate = rng.lognormal(2e6, 1.5);
  double write_rate = rng.lognormal(8e5, 1.5);
  double mpi_rate = rng.chance(0.04) ? -0.5 * (read_rate + write_rate) : rng.lognormal(5e6, 1.5);
  double open_rate = rng.lognormal(0.5, 1.5);
  double mem_frac = rng.chance(0.12) ? rng.uniform(0.6, 0.93)
                                     : std::clamp(rng.lognormal(0.15, 0.8), 0.01, 0.6);
  double node_mem = spec.mem_per_node ? static_cast<double>(*spec.mem_per_node) : 64.0 * (1ull << 30);
  bool missing_epilog = rng.chance(0.01);

  // Launch shape: processes per node and threads per process.
  std::int64_t ppn = 1;
  std::int64_t threads = 1;
  double shape = rng.uniform();
  std::int64_t job_cores_per_node = std::max<std::int64_t>(1, job.cores / job.nodes);
  if (shape < 0.55) ppn = job_cores_per_node;
  else if (shape < 0.75) threads = job_cores_per_node;
  else if (shape < 0.9) {
    ppn = std::max<std::int64_t>(1, job_cores_per_node / 4);
    threads = std::max<std::int64_t>(1, job_cores_per_node / ppn);
  }
  double runnable = static_cast<double>(ppn * threads);

  UnixSeconds wall = job.wall_seconds();
  std::vector<UnixSeconds> interior = {job.start_time + wall / 4, job.start_time + wall / 2,
                                       job.start_time + 3 * wall / 4};
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    const auto& node = nodes[k];
    double base = 1e6 * static_cast<double>(k + 1) + static_cast<double>(index);
    bool reset = rng.chance(0.01);
    auto counter = [&](UnixSeconds t, double rate) {
      double active_s = static_cast<double>(std::clamp(t, job.start_time, job.end_time) - job.start_time);
      return std::floor(base + std::max(0.0, rate) * active_s);
    };
    auto emit_counters = [&](UnixSeconds t, const char* tag, bool epilog) {
      double total_rate = static_cast<double>(cpn) * 100.0;
      std::vector<std::pair<const char*, double>> values = {
          {"cpu.total", counter(t, total_rate)},
          {"cpu.user", std::floor(0.5 * base) + std::floor(user_frac * (counter(t, total_rate) - base))},
          {"lnet.rx_bytes", counter(t, read_rate)},
          {"lnet.tx_bytes", counter(t, write_rate)},
          {"ib.rx_bytes", counter(t, read_rate + std::max(mpi_rate, -0.5 * read_rate))},
          {"ib.tx_bytes", counter(t, write_rate + std::max(mpi_rate, -0.5 * write_rate))},
          {"llite.open", counter(t, open_rate)},
      };
      for (const auto& [metric, value] : values) {
        double v = value;
        if (epilog && reset && std::string_view(metric) == "lnet.rx_bytes") v = 4096;
        lines.push_back(dump_line({{"type", "sample"}, {"node", node}, {"time", t}, {"metric", metric},
                                   {"kind", "counter"}, {"value", v}, {"tag", tag}}));
      }
    };
    emit_counters(job.start_time - 60, "job_prolog", false);
    for (std::size_t i = 0; i < interior.size(); ++i) {
      UnixSeconds t = interior[i];
      emit_counters(t, "periodic", false);
      double procs = std::max(0.0, std::round(runnable * rng.uniform(0.9, 1.1)));
      lines.push_back(dump_line({{"type", "sample"}, {"node", node}, {"time", t},
                                 {"metric", "ps.procs_running"}, {"kind", "instantaneous"},
                                 {"value", procs}, {"tag", "periodic"}}));
      auto numa_total = static_cast<std::int64_t>(node_mem / 2);
      double f = mem_frac * (0.7 + 0.1 * static_cast<double>(i + 1));
      auto used = static_cast<std::int64_t>(f * static_cast<double>(numa_total));
      auto file = numa_total / 20;
      auto slab = numa_total / 50;
      auto free = std::max<std::int64_t>(0, numa_total - used - file - slab);
      json numa = json::array();
      for (int n = 0; n < 2; ++n)
        numa.push_back({{"mem_total", numa_total}, {"mem_free", free}, {"file_pages", file}, {"slab", slab}});
      lines.push_back(dump_line({{"type", "meminfo"}, {"node", node}, {"time", t}, {"numa", numa}}));
    }
    if (!(missing_epilog && k == 0)) emit_counters(job.end_time + 60, "job_epilog", true);
  }

  double how = rng.uniform();
  std::vector<double> weights;
  for (const auto& a : kApps) weights.push_back(a.weight);
  std::string exe = kApps[rng.weighted(weights)].exe;
  std::int64_t n_processes = ppn * job.nodes;
  if (how < 0.65) {
    lines.push_back(dump_line({{"type", "launcher"}, {"job_id", job.job_id}, {"exe", exe},
                               {"n_processes", n_processes}, {"threads_per_process", threads}}));
  } else if (how < 0.9) {
    json obs = json::array();
    obs.push_back({{"name", basename(exe)}, {"pids", std::max<std::int64_t>(1, n_processes)}});
    obs.push_back({{"name", "bash"}, {"pids", 2 + static_cast<int>(rng.index(3))}});
    obs.push_back({{"name", "ibrun"}, {"pids", 1}});
    if (rng.chance(0.3)) obs.push_back({{"name", "cp"}, {"pids", 1 + static_cast<int>(rng.index(5))}});
    lines.push_back(dump_line({{"type", "procs"}, {"job_id", job.job_id}, {"observations", obs}}));
  }
}

}  // namespace

SynthData generate(const ResourceMap& resources, const SynthOptions& options) {
  Rng rng(options.seed);
  SynthData out;
  UnixSeconds origin = options.start.to_unix();
  UnixSeconds horizon = origin + static_cast<UnixSeconds>(options.days) * kSecondsPerDay;

  std::vector<ResourceChoice> choices;
  for (const auto& c : kResources)
    if (resources.contains(c.name)) choices.push_back(c);
  if (choices.empty()) throw DegenerateInput("no synthetic resources present in the resource map");

  // Users and projects.
  std::vector<User> users;
  auto new_user = [&]() {
    User u;
    u.id = "u" + std::string(4 - std::min<std::size_t>(4, std::to_string(users.size() + 1).size()), '0') +
           std::to_string(users.size() + 1);
    u.status = rng.pick(kStatuses);
    u.active_from = rng.chance(0.2) ? origin + static_cast<UnixSeconds>(rng.uniform(0.2, 0.6) *
                                                                         static_cast<double>(horizon - origin))
                                    : origin;
    std::vector<double> w;
    for (const auto& s : kStates) w.push_back(s.weight);
    if (!rng.chance(0.05)) u.state = kStates[rng.weighted(w)].code;
    users.push_back(u);
    return users.size() - 1;
  };

  const std::vector<AllocationType> kTypes = {
      AllocationType::XRAC,    AllocationType::XRAC,          AllocationType::Research,
      AllocationType::Startup, AllocationType::Startup,       AllocationType::Educational,
      AllocationType::CampusChampions, AllocationType::Discretionary};

  std::vector<Project> projects;
  for (std::size_t p = 0; p < 150; ++p) {
    Project pr;
    pr.science = &kSciences[rng.index(kSciences.size())];
    char num[16];
    std::snprintf(num, sizeof num, "%02d%04zu", 15 + static_cast<int>(rng.index(3)), p + 1);
    pr.charge = std::string("TG-") + pr.science->code + num;
    pr.activity = rng.lognormal(1.0, 1.2);
    pr.depth_mu = rng.uniform(0.0, 5.0);
    pr.type = kTypes[rng.index(kTypes.size())];
    if (p < 5) {
      pr.home = {"OSG"};
    } else if (p < 10) {
      pr.home = {"TACC-JETSTREAM"};
    } else {
      std::vector<double> w;
      for (const auto& c : choices) w.push_back(c.name == std::string("OSG") || c.name == std::string("TACC-JETSTREAM") ? 0.0 : c.weight);
      pr.home.push_back(choices[rng.weighted(w)].name);
      if (rng.chance(0.5)) pr.home.push_back(choices[rng.weighted(w)].name);
    }
    if (p >= 10 && p < 10 + kGateways.size()) {
      pr.gateway = static_cast<int>(p - 10);
      pr.activity = 6.0;
      pr.type = AllocationType::XRAC;
    }
    std::size_t n_users = 1 + rng.index(6);
    for (std::size_t u = 0; u < n_users; ++u) pr.users.push_back(new_user());
    projects.push_back(std::move(pr));
  }

  // Gateway end users: some share an email with a personal account that starts late.
  std::vector<std::vector<std::string>> gw_users(kGateways.size());
  for (std::size_t g = 0; g < kGateways.size(); ++g)
    for (int i = 0; i < 120; ++i) {
      char id[16];
      std::snprintf(id, sizeof id, "gwu%03d", i);
      gw_users[g].push_back(id);
    }
  std::map<std::string, std::string> emails;
  for (const auto& u : users) emails[u.id] = u.id + "@univ.example";
  for (std::size_t g = 0; g < kGateways.size(); ++g)
    for (const auto& gu : gw_users[g])
      emails[std::string(kGateways[g].name) + "/" + gu] = gu + "." + kGateways[g].account + "@mail.example";
  for (int i = 0; i < 40; ++i) {
    std::size_t g = rng.index(kGateways.size());
    const auto& gu = gw_users[g][rng.index(gw_users[g].size())];
    const auto& u = users[rng.index(users.size())];
    emails[std::string(kGateways[g].name) + "/" + gu] = u.id + "@univ.example";
  }

  // Submit times by thinning a daily and weekly modulated rate.
  std::vector<UnixSeconds> submits;
  while (submits.size() < options.n_jobs) {
    auto t = origin + static_cast<UnixSeconds>(rng.uniform() * static_cast<double>(horizon - origin));
    if (rng.uniform() * 2.0 < submit_rate(t, origin)) submits.push_back(t);
  }
  std::sort(submits.begin(), submits.end());

  std::vector<double> activity;
  for (const auto& p : projects) activity.push_back(p.activity);
  std::map<std::pair<std::string, std::string>, double> used;
  std::map<std::pair<std::string, std::string>, UnixSeconds> first_use;

  for (std::size_t i = 0; i < submits.size(); ++i) {
    UnixSeconds submit = submits[i];
    Date day = Date::from_unix(submit);
    std::vector<const ResourceChoice*> live;
    std::vector<double> live_w;
    for (const auto& c : choices)
      if (active(resources.at(c.name), day)) {
        live.push_back(&c);
        live_w.push_back(c.weight);
      }
    if (live.empty()) throw DegenerateInput("no synthetic resource in production on " + day.to_string());

    // Draws that land outside the model (an idle home resource, a job ending past the
    // horizon) are redrawn so the data set has exactly n_jobs rows.
    JobRecord j;
    const ResourceChoice* rc = nullptr;
    const ResourceSpec* specp = nullptr;
    for (int attempt = 0;; ++attempt) {
      if (attempt == 1000) throw DegenerateInput("cannot place synthetic job " + std::to_string(i));
      j = JobRecord{};
      rc = nullptr;

      auto& proj = projects[rng.weighted(activity)];
      for (const auto& h : proj.home)
        for (const auto* c : live)
          if (h == c->name && (rc == nullptr || rng.chance(0.5))) rc = c;
      if (rc == nullptr) {
        if (proj.home.front() == "OSG" || proj.home.front() == "TACC-JETSTREAM") continue;
        std::vector<double> w = live_w;
        for (std::size_t k = 0; k < live.size(); ++k)
          if (live[k]->name == std::string("OSG") || live[k]->name == std::string("TACC-JETSTREAM")) w[k] = 0;
        rc = live[rng.weighted(w)];
      }
      const auto& spec = resources.at(rc->name);
      std::string rname = rc->name;

      char id[32];
      std::snprintf(id, sizeof id, "%06zu", i + 1);
      j.job_id = std::string(rc->prefix) + "." + id;
      j.resource = rname;
      j.charge_number = proj.charge;
      j.project = {proj.science->directorate, proj.science->parent, proj.science->field};
      j.submit_time = submit;

      if (proj.gateway >= 0) {
        j.user = kGateways[proj.gateway].account;
        j.gateway_user = rng.pick(gw_users[proj.gateway]);
        j.nsf_user_status = NsfUserStatus::unknown;
      } else {
        std::vector<std::size_t> ready;
        for (auto u : proj.users)
          if (users[u].active_from <= submit) ready.push_back(u);
        if (ready.empty()) ready = proj.users;
        const auto& u = users[ready[rng.index(ready.size())]];
        j.user = u.id;
        j.nsf_user_status = u.status;
        j.state_of_origin = u.state;
      }

      double wall_h = std::clamp(rng.lognormal(2.0, 1.1), 120.0 / 3600.0, 48.0);
      auto cpn = spec.cores_per_node;
      if (spec.rtype == ResourceType::HTC) {
        j.nodes = 1;
        j.cores = 1;
        j.queue = "osg";
        wall_h = std::clamp(rng.lognormal(0.5, 1.0), 120.0 / 3600.0, 24.0);
      } else if (spec.rtype == ResourceType::Cloud) {
        static const std::vector<std::int64_t> kSizes = {1, 2, 4, 6, 10, 24};
        j.nodes = 1;
        j.cores = rng.pick(kSizes);
        j.queue = "cloud";
        wall_h = rng.chance(0.02) ? rng.uniform(35 * 24, 60 * 24) : std::clamp(rng.lognormal(6.0, 1.0), 0.1, 240.0);
      } else if (rname == "PSC-BRIDGES-LARGE") {
        j.nodes = 1 + static_cast<std::int64_t>(rng.index(2));
        j.cores = j.nodes * cpn;
        j.queue = "LM";
      } else {
        double shape = rng.uniform();
        if (shape < 0.04 && !spec.large_memory_queues.empty()) {
          j.nodes = 1;
          j.cores = cpn;
          j.queue = spec.large_memory_queues.front();
        } else if (shape < 0.30) {
          j.nodes = 1;
          bool shared = rname == "SDSC-COMET" || rname == "PSC-BRIDGES";
          j.cores = shared ? 1 + static_cast<std::int64_t>(rng.index(static_cast<std::size_t>(cpn))) : cpn;
          j.queue = shared ? "shared" : "normal";
        } else {
          double n = std::round(std::exp(proj.depth_mu + 1.0 * rng.normal()));
          j.nodes = static_cast<std::int64_t>(std::clamp(n, 1.0, static_cast<double>(std::min<std::int64_t>(spec.nodes, 2048))));
          j.cores = j.nodes * cpn;
          j.queue = rng.chance(0.06) ? "development" : "normal";
          if (j.queue == "development") wall_h = std::min(wall_h, 2.0);
        }
      }
      auto wall = static_cast<UnixSeconds>(std::llround(wall_h * 3600.0));
      auto wait = static_cast<UnixSeconds>(std::llround(rng.exponential(1800.0 + 72.0 * static_cast<double>(j.nodes))));
      j.start_time = j.submit_time + wait;
      j.end_time = j.start_time + wall;
      if (j.end_time >= horizon + 90 * kSecondsPerDay) continue;

      specp = &spec;
      break;
    }
    const auto& spec = *specp;
    auto wall = j.wall_seconds();
    double p_node_fail = 1.0 / (1.0 + std::exp(-(-5.0 + 0.004 * static_cast<double>(j.nodes))));
    double r = rng.uniform();
    if (r < p_node_fail) j.exit_status = ExitStatus::node_fail;
    else if (r < p_node_fail + 0.05) j.exit_status = ExitStatus::failed;
    else if (r < p_node_fail + 0.08) j.exit_status = ExitStatus::canceled;
    else if (r < p_node_fail + 0.12) j.exit_status = ExitStatus::timeout;
    else if (r < p_node_fail + 0.13) j.exit_status = ExitStatus::not_available;
    else j.exit_status = ExitStatus::completed;

    double hours = static_cast<double>(wall) / 3600.0;
    j.local_su_charged = spec.su_unit == SuUnit::node_hour ? static_cast<double>(j.nodes) * hours
                                                           : static_cast<double>(j.cores) * hours;
    j.local_su_charged = std::round(j.local_su_charged * 1000.0) / 1000.0;

    auto key = std::make_pair(j.charge_number, j.resource);
    used[key] += j.local_su_charged;
    if (!first_use.contains(key)) first_use[key] = j.submit_time;

    if (spec.rtype == ResourceType::HPC || spec.rtype == ResourceType::DIC)
      if (j.nodes <= 4 && !j.queue.empty() && rng.chance(options.archive_fraction))
        archive_job(rng, j, spec, rc->prefix, i + 1, out.archive_lines);

    out.jobs.push_back(std::move(j));
  }

  for (const auto& [key, amount] : used) {
    const auto& proj = *std::find_if(projects.begin(), projects.end(),
                                     [&](const Project& p) { return p.charge == key.first; });
    AllocationRecord a;
    a.charge_number = key.first;
    a.resource = key.second;
    a.alloc_type = proj.type;
    a.discipline = proj.science->parent;
    a.awarded_local_su = std::round(amount * rng.lognormal(1.3, 0.6));
    a.used_local_su = std::round(amount * 1000.0) / 1000.0;
    a.award_date = Date(Date::from_unix(first_use.at(key)).year(), 1, 1);
    a.is_gateway_tagged = proj.gateway >= 0;
    out.allocations.push_back(std::move(a));
  }
  // Awards that were never used, one of them a duplicate of an existing pair.
  for (int i = 0; i < 40; ++i) {
    const auto& proj = projects[rng.index(projects.size())];
    AllocationRecord a;
    a.charge_number = proj.charge;
    a.resource = proj.home.front();
    a.alloc_type = AllocationType::Startup;
    a.discipline = proj.science->parent;
    a.awarded_local_su = 50000;
    a.used_local_su = 0;
    a.award_date = Date(2017, 1, 1);
    out.allocations.push_back(std::move(a));
  }
  {
    AllocationRecord a;
    a.charge_number = "TG-ASC170099";
    a.resource = "SDSC-COMET";
    a.alloc_type = AllocationType::Discretionary;
    a.discipline = "Advanced Scientific Computing";
    a.awarded_local_su = 100000;
    a.award_date = Date(2017, 3, 1);
    a.is_gateway_tagged = true;
    out.allocations.push_back(a);
  }

  for (const auto& g : kGateways)
    out.community_lines.push_back(std::string(g.name) + "\t" + g.account);
  for (const auto& [key, email] : emails) out.email_lines.push_back(key + "\t" + email);
  for (const auto& s : kStates) {
    if (s.population > 0) out.population.emplace_back(s.code, s.population);
    if (s.tech_index > 0) out.tech_index.emplace_back(s.code, s.tech_index);
  }
  return out;
}

std::string job_to_jsonl(const JobRecord& j) {
  json o = {{"job_id", j.job_id},
            {"resource", j.resource},
            {"user", j.user},
            {"charge_number", j.charge_number},
            {"directorate", j.project.directorate},
            {"parent_science", j.project.parent_science},
            {"field_of_science", j.project.field_of_science},
            {"nsf_user_status", std::string(to_string(j.nsf_user_status))},
            {"submit_time", j.submit_time},
            {"start_time", j.start_time},
            {"end_time", j.end_time},
            {"nodes", j.nodes},
            {"cores", j.cores},
            {"queue", j.queue},
            {"exit_status", std::string(to_string(j.exit_status))},
            {"local_su_charged", j.local_su_charged}};
  if (j.gateway_user) o["gateway_user"] = *j.gateway_user;
  if (j.state_of_origin) o["state_of_origin"] = *j.state_of_origin;
  return o.dump();
}

std::string allocations_to_csv(const std::vector<AllocationRecord>& allocations) {
  std::ostringstream os;
  csv::write_row(os, {"charge_number", "resource", "alloc_type", "discipline", "awarded_local_su",
                      "used_local_su", "award_date", "is_gateway_tagged"});
  for (const auto& a : allocations)
    csv::write_row(os, {a.charge_number, a.resource, std::string(to_string(a.alloc_type)), a.discipline,
                        format_number(a.awarded_local_su), format_number(a.used_local_su),
                        a.award_date.to_string(), a.is_gateway_tagged ? "true" : "false"});
  return os.str();
}

namespace {

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IOError(path.string(), "cannot write");
  out << text;
}

void write_lines(const std::filesystem::path& path, const std::vector<std::string>& lines) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IOError(path.string(), "cannot write");
  for (const auto& l : lines) out << l << '\n';
}

void copy_into(const std::filesystem::path& from, const std::filesystem::path& to) {
  std::error_code ec;
  std::filesystem::copy_file(from, to, std::filesystem::copy_options::overwrite_existing, ec);
  if (ec) throw IOError(from.string(), ec.message());
}

std::string bundle_ini(bool patterns, bool ignore) {
  std::ostringstream os;
  os << "[inputs]\n"
        "jobs = jobs.jsonl\n"
        "allocations = allocations.csv\n"
        "resources = resources.json\n"
        "archives = archives.jsonl\n";
  if (patterns) os << "app_patterns = patterns.tsv\n";
  if (ignore) os << "ignore = ignore.txt\n";
  os << "community_users = community_users.tsv\n"
        "emails = emails.tsv\n"
        "population = population.csv\n"
        "tech_index = tech_index.csv\n\n";
  auto spec = paper_bundle_spec();
  os << "[report]\nname = " << spec.name << "\noutput_dir = " << spec.output_dir.string()
     << "\nformats = csv\n";
  for (const auto& a : spec.analyses) {
    os << "\n[analysis." << a.id << "]\nop = " << a.op << "\n";
    for (const auto& [k, v] : a.params) os << k << " = " << v << "\n";
  }
  return os.str();
}

}  // namespace

void write_dataset(const std::filesystem::path& dir, const SynthSources& sources,
                   const SynthOptions& options) {
  std::filesystem::create_directories(dir);
  copy_into(sources.resources, dir / "resources.json");
  if (sources.app_patterns) copy_into(*sources.app_patterns, dir / "patterns.tsv");
  if (sources.ignore) copy_into(*sources.ignore, dir / "ignore.txt");
  auto resources = load_resources(dir / "resources.json");

  auto data = generate(resources, options);
  std::vector<std::string> job_lines;
  job_lines.reserve(data.jobs.size());
  for (const auto& j : data.jobs) job_lines.push_back(job_to_jsonl(j));
  write_lines(dir / "jobs.jsonl", job_lines);
  write_text(dir / "allocations.csv", allocations_to_csv(data.allocations));
  write_lines(dir / "archives.jsonl", data.archive_lines);
  write_lines(dir / "community_users.tsv", data.community_lines);
  write_lines(dir / "emails.tsv", data.email_lines);
  auto state_csv = [](const std::vector<std::pair<std::string, double>>& rows) {
    std::ostringstream os;
    os << "state,value\n";
    for (const auto& [s, v] : rows) os << s << "," << format_number(v) << "\n";
    return os.str();
  };
  write_text(dir / "population.csv", state_csv(data.population));
  write_text(dir / "tech_index.csv", state_csv(data.tech_index));
  write_text(dir / "paper_bundle.ini", bundle_ini(sources.app_patterns.has_value(), sources.ignore.has_value()));
}

}  // namespace hpcwl::report
