#pragma once

#include <cstdio>
#include <optional>
#include <string>
#include <vector>

namespace minisvm {

// One checkpoint row. dual/gap are absent for the primal-only solver,
// beta_t only set by the aggressive solver.
struct TraceRecord {
  long iter = 0;
  double epoch_equiv = 0.0;  // iter * b / n
  double primal = 0.0;
  std::optional<double> dual;
  std::optional<double> gap;
  std::optional<double> test_error;
  std::optional<double> beta_t;
  double elapsed_s = 0.0;
};

namespace detail {

inline std::string fmt17(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

inline std::string fmt_opt(const std::optional<double>& v) {
  return v ? fmt17(*v) : std::string();
}

}  // namespace detail

inline std::string trace_csv_columns() {
  return "iter,epoch_equiv,primal,dual,gap,test_error,beta_t";
}

// Deterministic body row: floating point at 17 significant digits, empty
// cells for absent fields. Wall time is reported in header comments, not
// in the body, so repeated runs with one seed produce identical bodies.
inline std::string trace_csv_row(const TraceRecord& r) {
  return std::to_string(r.iter) + "," + detail::fmt17(r.epoch_equiv) + "," +
         detail::fmt17(r.primal) + "," + detail::fmt_opt(r.dual) + "," +
         detail::fmt_opt(r.gap) + "," + detail::fmt_opt(r.test_error) + "," +
         detail::fmt_opt(r.beta_t);
}

}  // namespace minisvm
