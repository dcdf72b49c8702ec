// Command-line front end.  Links only the public C interface; every
// subcommand maps onto one qk_* call, results go to --out or stdout, and the
// status codes double as exit codes (plus exit 1 for a verification whose
// rows exceed the defect threshold).

#include "CLI11.hpp"
#include "qknot.h"

#include <cstdio>
#include <cstring>
#include <fstream>
#include <functional>
#include <iostream>
#include <string>
#include <thread>

namespace {

struct Common {
  long prec = 192;
  int threads = 0;  // 0 = logical cores
  std::string out;
  std::string format = "csv";
};

void add_common(CLI::App* cmd, Common& c, bool with_format = true) {
  cmd->add_option("--prec", c.prec, "working precision in bits (>= 64)")
      ->capture_default_str();
  cmd->add_option("--threads", c.threads,
                  "worker threads (0 = logical cores)");
  cmd->add_option("--out", c.out, "output file (default: stdout)");
  if (with_format)
    cmd->add_option("--format", c.format, "output format")
        ->check(CLI::IsMember({"csv", "json"}))
        ->capture_default_str();
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  unsigned hw = std::thread::hardware_concurrency();
  return hw == 0 ? 1 : static_cast<int>(hw);
}

// -1 encodes "all rows" for the row-indexed verifications.
bool parse_row(const std::string& text, long& r) {
  if (text == "all") {
    r = -1;
    return true;
  }
  try {
    size_t used = 0;
    r = std::stol(text, &used);
    return used == text.size() && r >= 0;
  } catch (...) {
    return false;
  }
}

int write_output(const std::string& path, const char* text) {
  if (path.empty()) {
    std::fputs(text, stdout);
    return 0;
  }
  std::ofstream f(path, std::ios::binary);
  if (!f) return QK_EDISK;
  f << text;
  f.flush();
  return f ? 0 : QK_EDISK;
}

int fail(qk_session* s, int status) {
  std::fprintf(stderr, "error: %s\n", qk_last_error(s));
  return status;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"quantum invariants at roots of unity: evaluation, exact "
               "reciprocity checks, and statistical experiments"};
  app.require_subcommand(1);

  // One runner per leaf subcommand, bound during parse.
  std::function<int(qk_session*)> run;
  Common c;

  // eval
  std::string knot = "4_1", fraction;
  CLI::App* eval = app.add_subcommand("eval", "Kashaev invariant at e(h/k)");
  eval->add_option("--knot", knot, "preset knot name")->capture_default_str();
  eval->add_option("--q", fraction, "root of unity as a fraction h/k")
      ->required();
  add_common(eval, c, false);
  eval->callback([&]() {
    run = [&](qk_session* s) -> int {
      char* text = nullptr;
      int st = qk_eval(s, knot.c_str(), fraction.c_str(), &text);
      if (st != QK_OK) return fail(s, st);
      std::string body = std::string(text) + "\n";
      qk_string_free(text);
      return write_output(c.out, body.c_str());
    };
  });

  // verify ir|thp|th2|th4
  CLI::App* verify = app.add_subcommand("verify", "reciprocity checks");
  verify->require_subcommand(1);

  long vp = 0, vpbar = 1, vqbar = 1, vq = 1, vd = 1, vn = 1;
  std::string row = "all";
  CLI::App* ir = verify->add_subcommand(
      "ir", "first reciprocity: Pochhammer quotient against the exact "
            "Dedekind-sum / dilogarithm / kernel form");
  ir->add_option("--p", vp)->required();
  ir->add_option("--pbar", vpbar)->required();
  ir->add_option("--qbar", vqbar)->required();
  ir->add_option("--q", vq)->required();
  ir->add_option("--d", vd)->required();
  ir->add_option("--N", vn)->required();
  ir->add_option("--r", row, "row index, or 'all'")->capture_default_str();
  add_common(ir, c);
  ir->callback([&]() {
    run = [&](qk_session* s) -> int {
      long r = 0;
      if (!parse_row(row, r)) {
        std::fprintf(stderr, "error: --r takes a row index or 'all'\n");
        return QK_EINVAL;
      }
      char* text = nullptr;
      int pass = 0;
      int st = qk_verify_ir(s, vp, vpbar, vqbar, vq, vd, vn, r,
                            c.format == "json" ? 1 : 0, &text, &pass);
      if (st != QK_OK) return fail(s, st);
      std::string body(text);
      qk_string_free(text);
      int wr = write_output(c.out, body.c_str());
      if (wr != 0) return wr;
      return pass != 0 ? 0 : 1;
    };
  });

  long th = 5, tk = 7;
  CLI::App* thp = verify->add_subcommand(
      "thp", "exact finite-product decomposition of (e[-hbar/k])_r");
  thp->add_option("--h", th)->required();
  thp->add_option("--k", tk)->required();
  thp->add_option("--r", row, "row index, or 'all'")->capture_default_str();
  add_common(thp, c);
  thp->callback([&]() {
    run = [&](qk_session* s) -> int {
      long r = 0;
      if (!parse_row(row, r)) {
        std::fprintf(stderr, "error: --r takes a row index or 'all'\n");
        return QK_EINVAL;
      }
      char* text = nullptr;
      int pass = 0;
      int st = qk_verify_thp(s, th, tk, r, c.format == "json" ? 1 : 0, &text,
                             &pass);
      if (st != QK_OK) return fail(s, st);
      std::string body(text);
      qk_string_free(text);
      int wr = write_output(c.out, body.c_str());
      if (wr != 0) return wr;
      return pass != 0 ? 0 : 1;
    };
  });

  long kmax = 100;
  for (const char* name : {"th2", "th4"}) {
    bool is2 = std::strcmp(name, "th2") == 0;
    CLI::App* sub = verify->add_subcommand(
        name, is2 ? "second-reciprocity gap H against its envelope (report)"
                  : "cotangent-sum growth along negative-c0 orders (report)");
    sub->add_option("--h", th)->required();
    sub->add_option("--kmax", kmax)->required();
    add_common(sub, c);
    sub->callback([&, is2]() {
      run = [&, is2](qk_session* s) -> int {
        char* text = nullptr;
        int st = is2 ? qk_verify_th2(s, th, kmax, c.format == "json" ? 1 : 0,
                                     &text)
                     : qk_verify_th4(s, th, kmax, c.format == "json" ? 1 : 0,
                                     &text);
        if (st != QK_OK) return fail(s, st);
        std::string body(text);
        qk_string_free(text);
        return write_output(c.out, body.c_str());
      };
    });
  }

  // scan
  long n_max = 100;
  CLI::App* scan = app.add_subcommand(
      "scan", "logJ / continued-fraction / H / Hstar table over all reduced "
              "h/k with k <= N");
  scan->add_option("--knot", knot)->capture_default_str();
  scan->add_option("--N", n_max)->required();
  add_common(scan, c, false);
  scan->callback([&]() {
    run = [&](qk_session* s) -> int {
      std::fprintf(stderr, "scan: knot=%s N=%ld prec=%ld\n", knot.c_str(),
                   n_max, c.prec);
      char* text = nullptr;
      int st = qk_scan(s, knot.c_str(), n_max, &text);
      if (st != QK_OK) return fail(s, st);
      std::string body(text);
      qk_string_free(text);
      return write_output(c.out, body.c_str());
    };
  });

  // figure
  std::string lo, hi;
  CLI::App* figure = app.add_subcommand(
      "figure", "x,H,Hstar graph data for the figure-eight modular jumps");
  figure->add_option("--N", n_max)->required();
  figure->add_option("--lo", lo, "window lower endpoint (fraction)");
  figure->add_option("--hi", hi, "window upper endpoint (fraction)");
  add_common(figure, c, false);
  figure->callback([&]() {
    run = [&](qk_session* s) -> int {
      std::fprintf(stderr, "figure: N=%ld prec=%ld\n", n_max, c.prec);
      char* text = nullptr;
      int st = qk_figure(s, n_max, lo.empty() ? nullptr : lo.c_str(),
                         hi.empty() ? nullptr : hi.c_str(), &text);
      if (st != QK_OK) return fail(s, st);
      std::string body(text);
      qk_string_free(text);
      return write_output(c.out, body.c_str());
    };
  });

  // lln
  std::string family = "fib";
  CLI::App* lln = app.add_subcommand(
      "lln", "law-of-large-numbers probe along a family of fractions");
  lln->add_option("--family", family, "fib or unit")->capture_default_str();
  lln->add_option("--n-max", n_max, "family size bound")->required();
  add_common(lln, c);
  lln->callback([&]() {
    run = [&](qk_session* s) -> int {
      char* text = nullptr;
      int st = qk_lln(s, family.c_str(), n_max, c.format == "json" ? 1 : 0,
                      &text);
      if (st != QK_OK) return fail(s, st);
      std::string body(text);
      qk_string_free(text);
      return write_output(c.out, body.c_str());
    };
  });

  // hist
  long bins = 60;
  CLI::App* hist = app.add_subcommand(
      "hist", "stable-law histogram of the normalized scan statistic");
  hist->add_option("--knot", knot)->capture_default_str();
  hist->add_option("--N", n_max)->required();
  hist->add_option("--bins", bins)->capture_default_str();
  add_common(hist, c);
  hist->callback([&]() {
    run = [&](qk_session* s) -> int {
      std::fprintf(stderr, "hist: knot=%s N=%ld bins=%ld prec=%ld\n",
                   knot.c_str(), n_max, bins, c.prec);
      char* text = nullptr;
      int st = qk_hist(s, knot.c_str(), n_max, bins,
                       c.format == "json" ? 1 : 0, &text);
      if (st != QK_OK) return fail(s, st);
      std::string body(text);
      qk_string_free(text);
      int wr = write_output(c.out, body.c_str());
      if (wr != 0) return wr;
      // Keep the summary visible when the table went to a file.
      if (!c.out.empty() && c.format == "csv") {
        size_t eol = body.find('\n');
        if (eol != std::string::npos)
          std::fprintf(stdout, "%s\n", body.substr(0, eol).c_str());
      }
      return 0;
    };
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : QK_EINVAL;
  }

  qk_session* s = qk_session_new(c.prec, resolve_threads(c.threads));
  if (s == nullptr) {
    std::fprintf(stderr, "error: bad precision or thread count\n");
    return QK_EINVAL;
  }
  int code = run ? run(s) : QK_EINVAL;
  qk_session_free(s);
  return code;
}
