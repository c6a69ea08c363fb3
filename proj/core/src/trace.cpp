#include "bopt/trace.hpp"

#include <cstdio>
#include <fstream>
#include <sstream>
#include <stdexcept>

namespace bopt {

namespace {

constexpr const char* kMagic = "bopt-trace v1";

std::string fmt_double(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

class LineReader {
 public:
  explicit LineReader(const std::string& text) : in_(text) {}

  std::string next() {
    std::string line;
    if (!std::getline(in_, line)) {
      throw std::invalid_argument("trace: unexpected end of input");
    }
    if (!line.empty() && line.back() == '\r') line.pop_back();
    return line;
  }

 private:
  std::istringstream in_;
};

std::pair<std::string, std::string> split_kv(const std::string& line) {
  const auto tab = line.find('\t');
  if (tab == std::string::npos) {
    throw std::invalid_argument("trace: malformed line: " + line);
  }
  return {line.substr(0, tab), line.substr(tab + 1)};
}

std::string expect_key(LineReader& r, const std::string& key) {
  const auto [k, v] = split_kv(r.next());
  if (k != key) {
    throw std::invalid_argument("trace: expected key '" + key + "', got '" + k + "'");
  }
  return v;
}

}  // namespace

std::string emit_trace(const RegretTrace& trace) {
  std::ostringstream out;
  out << kMagic << '\n';
  out << "task\t" << trace.task << '\n';
  out << "method\t" << trace.method << '\n';
  out << "adaptive\t" << (trace.adaptive ? 1 : 0) << '\n';
  out << "trial_seed\t" << trace.trial_seed << '\n';
  out << "dimension\t" << trace.dimension << '\n';
  out << "n_init\t" << trace.n_init << '\n';
  out << "iterations\t" << trace.iterations << '\n';
  out << "optimum\t" << fmt_double(trace.optimum) << '\n';
  out << "subsample_cap\t" << trace.subsample_cap << '\n';
  out << "best\t" << trace.best_so_far.size() << '\n';
  for (double v : trace.best_so_far) out << fmt_double(v) << '\n';
  out << "pairs\t" << trace.selected_pairs.size() << '\n';
  for (const auto& p : trace.selected_pairs) {
    out << kernel_name(p.kernel.family) << '\t' << acquisition_name(p.acquisition.family)
        << '\n';
  }
  out << "end\n";
  return out.str();
}

RegretTrace parse_trace(const std::string& text) {
  LineReader r(text);
  if (r.next() != kMagic) {
    throw std::invalid_argument("trace: bad magic line");
  }
  RegretTrace t;
  t.task = expect_key(r, "task");
  t.method = expect_key(r, "method");
  t.adaptive = std::stoi(expect_key(r, "adaptive")) != 0;
  t.trial_seed = std::stoull(expect_key(r, "trial_seed"));
  t.dimension = std::stoi(expect_key(r, "dimension"));
  t.n_init = std::stoi(expect_key(r, "n_init"));
  t.iterations = std::stoi(expect_key(r, "iterations"));
  t.optimum = std::stod(expect_key(r, "optimum"));
  t.subsample_cap = std::stoull(expect_key(r, "subsample_cap"));

  const std::size_t nbest = std::stoull(expect_key(r, "best"));
  t.best_so_far.reserve(nbest);
  for (std::size_t i = 0; i < nbest; ++i) {
    t.best_so_far.push_back(std::stod(r.next()));
  }
  const std::size_t npairs = std::stoull(expect_key(r, "pairs"));
  t.selected_pairs.reserve(npairs);
  for (std::size_t i = 0; i < npairs; ++i) {
    const auto [kernel, acq] = split_kv(r.next());
    t.selected_pairs.push_back(
        make_pair(kernel_from_name(kernel), acquisition_from_name(acq)));
  }
  if (r.next() != "end") {
    throw std::invalid_argument("trace: missing end marker");
  }
  return t;
}

void write_trace_file(const std::string& path, const RegretTrace& trace) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("trace: cannot write " + path);
  out << emit_trace(trace);
}

RegretTrace read_trace_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("trace: cannot read " + path);
  std::ostringstream buf;
  buf << in.rdbuf();
  return parse_trace(buf.str());
}

std::string trace_filename(const RegretTrace& trace) {
  return trace.task + "__" + trace.method + "__seed" + std::to_string(trace.trial_seed) +
         ".trace";
}

bool trace_equal(const RegretTrace& a, const RegretTrace& b) {
  if (a.task != b.task || a.method != b.method || a.adaptive != b.adaptive ||
      a.trial_seed != b.trial_seed || a.dimension != b.dimension || a.n_init != b.n_init ||
      a.iterations != b.iterations || a.optimum != b.optimum ||
      a.subsample_cap != b.subsample_cap || a.best_so_far != b.best_so_far ||
      a.selected_pairs.size() != b.selected_pairs.size()) {
    return false;
  }
  for (std::size_t i = 0; i < a.selected_pairs.size(); ++i) {
    if (a.selected_pairs[i].kernel.family != b.selected_pairs[i].kernel.family ||
        a.selected_pairs[i].acquisition.family != b.selected_pairs[i].acquisition.family) {
      return false;
    }
  }
  return true;
}

}  // namespace bopt
