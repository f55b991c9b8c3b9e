// abelquot: classify quotients of products of elliptic curves.

#include "abelquot/report.hpp"
#include "abelquot/scenario.hpp"
#include "abelquot/verify.hpp"

#include <CLI11.hpp>
#include <openssl/evp.h>

#include <algorithm>
#include <atomic>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <iostream>
#include <sstream>
#include <thread>

namespace fs = std::filesystem;
using namespace abelquot;
using nlohmann::ordered_json;

namespace {

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorCode::Internal, "sha256 failed");
  std::ostringstream os;
  for (unsigned int i = 0; i < len; ++i) os << std::hex << std::setw(2) << std::setfill('0') << int(digest[i]);
  return os.str();
}

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot read " + p.string());
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

struct Outcome {
  std::string report;  // rendered output on success
  std::string cls;
  std::optional<Error> error;
};

Outcome classify_text(const std::string& text, std::size_t cap, bool as_json) {
  try {
    const Scenario s = parse_scenario_text(text);
    const ClassificationResult r = classify(s.group(cap));
    Outcome out;
    out.cls = std::string(class_tag(r.cls));
    if (as_json) {
      ordered_json j = report_json(r);
      j["provenance"] = {{"input_sha256", sha256_hex(text)}, {"tool_version", std::string(kToolVersion)}};
      out.report = j.dump(2) + "\n";
    } else {
      out.report = report_text(r);
    }
    return out;
  } catch (const Error& e) {
    return {"", "", e};
  }
}

int report_error(const Error& e, bool as_json) {
  if (as_json)
    std::cerr << ordered_json{{"error", std::string(error_tag(e.code()))}, {"message", e.what()}}.dump() << "\n";
  else
    std::cerr << "error " << error_tag(e.code()) << ": " << e.what() << "\n";
  return exit_status(e.code());
}

int classify_dir(const fs::path& dir, fs::path out_dir, std::size_t cap, bool as_json, unsigned jobs) {
  if (!fs::is_directory(dir)) throw Error(ErrorCode::Io, dir.string() + " is not a directory");
  std::vector<fs::path> files;
  for (const auto& e : fs::directory_iterator(dir))
    if (e.is_regular_file() && e.path().extension() == ".json") files.push_back(e.path());
  std::sort(files.begin(), files.end());
  if (out_dir.empty()) out_dir = dir / "reports";
  fs::create_directories(out_dir);

  std::vector<Outcome> outcomes(files.size());
  std::atomic<std::size_t> next{0};
  auto worker = [&] {
    for (std::size_t i = next++; i < files.size(); i = next++) {
      try {
        outcomes[i] = classify_text(read_file(files[i]), cap, true);
      } catch (const Error& e) {
        outcomes[i].error = e;
      }
    }
  };
  if (jobs == 0) jobs = std::max(1u, std::thread::hardware_concurrency());
  std::vector<std::thread> pool;
  for (unsigned t = 0; t < std::min<std::size_t>(jobs, files.size()); ++t) pool.emplace_back(worker);
  for (auto& t : pool) t.join();

  ordered_json results = ordered_json::array();
  std::map<std::string, std::size_t> classes;
  std::size_t failed = 0;
  for (std::size_t i = 0; i < files.size(); ++i) {
    const std::string name = files[i].filename().string();
    const Outcome& o = outcomes[i];
    if (o.error) {
      ++failed;
      results.push_back({{"file", name}, {"error", std::string(error_tag(o.error->code()))}, {"message", o.error->what()}});
      continue;
    }
    ++classes[o.cls];
    std::ofstream(out_dir / (files[i].stem().string() + ".report.json")) << o.report;
    results.push_back({{"file", name}, {"class", o.cls}});
  }
  ordered_json summary{{"files", files.size()},
                       {"classified", files.size() - failed},
                       {"failed", failed},
                       {"classes", classes},
                       {"results", results}};
  std::ofstream(out_dir / "summary.json") << summary.dump(2) << "\n";
  if (as_json) {
    std::cout << summary.dump(2) << "\n";
  } else {
    for (const auto& r : results)
      std::cout << std::left << std::setw(40) << r["file"].get<std::string>()
                << (r.contains("class") ? r["class"].get<std::string>() : r["error"].get<std::string>()) << "\n";
  }
  return failed == 0 ? 0 : 1;
}

int print_rows(const std::vector<CheckRow>& rows, bool as_json, const ordered_json& extra = nullptr) {
  const bool ok = std::all_of(rows.begin(), rows.end(), [](const CheckRow& r) { return r.pass; });
  if (as_json) {
    ordered_json arr = ordered_json::array();
    for (const auto& r : rows) arr.push_back({{"suite", r.suite}, {"check", r.name}, {"pass", r.pass}, {"detail", r.detail}});
    ordered_json j{{"passed", ok}, {"rows", arr}};
    if (!extra.is_null()) j["stats"] = extra;
    std::cout << j.dump(2) << "\n";
  } else {
    std::size_t w1 = 5, w2 = 5;
    for (const auto& r : rows) {
      w1 = std::max(w1, r.suite.size());
      w2 = std::max(w2, r.name.size());
    }
    for (const auto& r : rows)
      std::cout << std::left << std::setw(int(w1 + 2)) << r.suite << std::setw(int(w2 + 2)) << r.name
                << (r.pass ? "pass  " : "FAIL  ") << r.detail << "\n";
    std::cout << (ok ? "all checks passed" : "some checks FAILED") << "\n";
  }
  return ok ? 0 : 1;
}

ordered_json corpus_stats(const CorpusReport& rep) {
  ordered_json r = ordered_json::object();
  for (const auto& [k, v] : rep.quotient_orders) r[std::to_string(k)] = v;
  return {{"seed", rep.seed},
          {"attempted", rep.attempted},
          {"valid", rep.valid},
          {"cap_exceeded", rep.cap_exceeded},
          {"normalized", rep.normalized},
          {"quotient_orders", r},
          {"smooth_nonfree_irregular", rep.smooth_nonfree_irregular},
          {"reduced", rep.reduced},
          {"residuals", rep.residuals},
          {"classes", rep.classes},
          {"special_points_compared", rep.special_points_compared},
          {"oracle_disagreements", rep.oracle_disagreements},
          {"violations", rep.violations}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Classify quotients of products of elliptic curves by finite groups"};
  app.require_subcommand(1);
  std::string format = "json";
  std::size_t cap = ActionGroup::kDefaultCap;
  app.add_option("--format", format, "Output format")->check(CLI::IsMember({"json", "text"}));
  app.add_option("--cap", cap, "Group closure element cap")->check(CLI::PositiveNumber);

  auto* cls = app.add_subcommand("classify", "Classify a scenario file, or every scenario in a directory");
  std::string file, dir, out_dir;
  unsigned jobs = 0;
  cls->add_option("file", file, "Scenario JSON file");
  cls->add_option("--dir", dir, "Directory of scenario files (batch mode)");
  cls->add_option("--out", out_dir, "Report directory for batch mode (default <dir>/reports)");
  cls->add_option("--jobs", jobs, "Worker threads for batch mode (default: all cores)");

  auto* con = app.add_subcommand("construct", "Emit the scenario of a canonical construction");
  std::string family, ring = "Z";
  int n = 1, m = 2;
  con->add_option("class", family, "P2, P1xP1, SplitBundle, Sym2, Hyperelliptic, Abelian or Kummer")->required();
  con->add_option("--n", n, "Bundle order (SplitBundle) or group order (Abelian)");
  con->add_option("--ring", ring, "Endomorphism ring of E")->check(CLI::IsMember({"Z", "Zi", "Zw"}));
  con->add_option("--m", m, "Holonomy order (Hyperelliptic)");

  auto* rt = app.add_subcommand("roundtrip", "Construct, serialize, parse and classify every construction");
  std::uint64_t rt_seed = 1;
  std::size_t rt_count = 50;
  rt->add_option("--seed", rt_seed, "Seed for the random constructions");
  rt->add_option("--count", rt_count, "Number of random constructions");

  auto* lc = app.add_subcommand("lemma-check", "Run the lemma suites and the random structural corpus");
  std::uint64_t lc_seed = 20240601;
  std::size_t lc_count = 500;
  lc->add_option("--seed", lc_seed, "Corpus seed");
  lc->add_option("--count", lc_count, "Number of valid random groups");

  CLI11_PARSE(app, argc, argv);
  const bool as_json = format == "json";

  try {
    if (*cls) {
      if (!dir.empty()) return classify_dir(dir, out_dir, cap, as_json, jobs);
      if (file.empty()) throw Error(ErrorCode::Io, "classify needs a file or --dir");
      const Outcome o = classify_text(read_file(file), cap, as_json);
      if (o.error) return report_error(*o.error, as_json);
      std::cout << o.report;
      return 0;
    }
    if (*con) {
      const Construction c = construct(family, n, parse_ring(ring), m);
      std::cout << to_json(scenario_from(c)).dump(2) << "\n";
      return 0;
    }
    if (*rt) {
      auto rows = roundtrip_suite();
      for (auto& r : random_roundtrip_suite(rt_seed, rt_count)) {
        r.suite = "roundtrip (seed " + std::to_string(rt_seed) + ")";
        rows.push_back(std::move(r));
      }
      return print_rows(rows, as_json);
    }
    if (*lc) {
      std::vector<CheckRow> rows;
      for (auto suite : {fixed_point_suite(), order_sum_suite(), unit_group_suite(), character_suite()})
        rows.insert(rows.end(), suite.begin(), suite.end());
      const CorpusReport rep = run_structural_corpus(lc_seed, lc_count, cap);
      for (auto& r : corpus_rows(rep, lc_count)) rows.push_back(std::move(r));
      return print_rows(rows, as_json, corpus_stats(rep));
    }
  } catch (const Error& e) {
    return report_error(e, as_json);
  }
  return 0;
}
