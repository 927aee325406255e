#include "hpkm/csv.hpp"

#include <charconv>
#include <fstream>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "hpkm/error.hpp"

namespace hpkm {

namespace {

// Shortest representation that parses back to the identical double,
// locale-independent.
void append_number(std::string& out, double value) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  out.append(buf, res.ptr);
}

double parse_number(const std::string& field, int line) {
  double value = 0.0;
  const char* begin = field.data();
  const char* end = begin + field.size();
  const auto res = std::from_chars(begin, end, value);
  if (res.ec != std::errc() || res.ptr != end)
    raise(Errc::io, "bad numeric field '" + field + "' (line " +
                        std::to_string(line) + ")",
          line);
  return value;
}

std::vector<std::string> split_fields(const std::string& line) {
  std::vector<std::string> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string::npos) {
      out.push_back(line.substr(start));
      return out;
    }
    out.push_back(line.substr(start, comma - start));
    start = comma + 1;
  }
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) raise(Errc::io, "cannot open '" + path + "' for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  if (in.bad()) raise(Errc::io, "read failure on '" + path + "'");
  return buf.str();
}

void spill(const std::string& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) raise(Errc::io, "cannot open '" + path + "' for writing");
  out << text;
  out.flush();
  if (!out) raise(Errc::io, "write failure on '" + path + "'");
}

constexpr int k_plan_columns = 31;
constexpr int k_trace_columns = 33;

}  // namespace

std::string plan_csv_header() {
  return "t,alpha,beta,x,y,z,"
         "alpha_dot,beta_dot,x_dot,y_dot,z_dot,"
         "a_alpha,a_beta,a_x,a_y,a_z,"
         "theta1,theta2,rho1,rho2,rho3,"
         "theta1_dot,theta2_dot,rho1_dot,rho2_dot,rho3_dot,"
         "theta1_ddot,theta2_ddot,rho1_ddot,rho2_ddot,rho3_ddot";
}

std::string trace_csv_header() {
  return "t,theta1_des,theta2_des,rho1_des,rho2_des,rho3_des,"
         "theta1_act,theta2_act,rho1_act,rho2_act,rho3_act,"
         "theta1_dot_des,theta2_dot_des,rho1_dot_des,rho2_dot_des,rho3_dot_des,"
         "theta1_dot_est,theta2_dot_est,rho1_dot_est,rho2_dot_est,rho3_dot_est,"
         "err_theta1,err_theta2,err_rho1,err_rho2,err_rho3,"
         "u_theta1,u_theta2,u_rho1,u_rho2,u_rho3,"
         "shutdown,cycle_seconds";
}

void write_plan_csv(const Plan& plan, const std::string& path) {
  std::string text;
  text.reserve(64 + plan.samples.size() * 24 * k_plan_columns);
  for (const SegmentInfo& seg : plan.segments) {
    text += "# segment label=" + seg.label;
    text += " first_sample=" + std::to_string(seg.first_sample);
    text += " t_start=";
    append_number(text, seg.t_start);
    text += " tf_initial=";
    append_number(text, seg.tf_initial);
    text += " tf_final=";
    append_number(text, seg.tf_final);
    text += " multiplier=";
    append_number(text, seg.multiplier);
    text += '\n';
  }
  text += plan_csv_header();
  text += '\n';
  for (const TrajectorySample& s : plan.samples) {
    double row[k_plan_columns];
    row[0] = s.t;
    const Vec5 pose = s.pose.vector();
    for (int i = 0; i < 5; ++i) row[1 + i] = pose[i];
    for (int i = 0; i < 5; ++i) row[6 + i] = s.vel[i];
    for (int i = 0; i < 5; ++i) row[11 + i] = s.acc[i];
    const Vec5 q = s.q.vector();
    for (int i = 0; i < 5; ++i) row[16 + i] = q[i];
    for (int i = 0; i < 5; ++i) row[21 + i] = s.qd[i];
    for (int i = 0; i < 5; ++i) row[26 + i] = s.qdd[i];
    for (int i = 0; i < k_plan_columns; ++i) {
      if (i) text += ',';
      append_number(text, row[i]);
    }
    text += '\n';
  }
  spill(path, text);
}

Plan read_plan_csv(const std::string& path) {
  std::istringstream in(slurp(path));
  Plan plan;
  std::string line;
  int line_no = 0;
  bool header_seen = false;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (line[0] == '#') {
      std::istringstream words(line.substr(1));
      std::string word;
      words >> word;
      if (word != "segment") continue;
      SegmentInfo seg;
      while (words >> word) {
        const std::size_t eq = word.find('=');
        if (eq == std::string::npos)
          raise(Errc::io, "bad segment comment (line " +
                              std::to_string(line_no) + ")",
                line_no);
        const std::string key = word.substr(0, eq);
        const std::string value = word.substr(eq + 1);
        if (key == "label")
          seg.label = value;
        else if (key == "first_sample")
          seg.first_sample = static_cast<std::size_t>(
              parse_number(value, line_no));
        else if (key == "t_start")
          seg.t_start = parse_number(value, line_no);
        else if (key == "tf_initial")
          seg.tf_initial = parse_number(value, line_no);
        else if (key == "tf_final")
          seg.tf_final = parse_number(value, line_no);
        else if (key == "multiplier")
          seg.multiplier = parse_number(value, line_no);
        else
          raise(Errc::io, "unknown segment key '" + key + "' (line " +
                              std::to_string(line_no) + ")",
                line_no);
      }
      plan.segments.push_back(seg);
      continue;
    }
    if (!header_seen) {
      if (line != plan_csv_header())
        raise(Errc::io, "unexpected plan CSV header (line " +
                            std::to_string(line_no) + ")",
              line_no);
      header_seen = true;
      continue;
    }
    const std::vector<std::string> fields = split_fields(line);
    if (fields.size() != k_plan_columns)
      raise(Errc::io, "expected " + std::to_string(k_plan_columns) +
                          " columns, got " + std::to_string(fields.size()) +
                          " (line " + std::to_string(line_no) + ")",
            line_no);
    double row[k_plan_columns];
    for (int i = 0; i < k_plan_columns; ++i)
      row[i] = parse_number(fields[i], line_no);
    TrajectorySample s;
    s.t = row[0];
    Vec5 pose, q;
    for (int i = 0; i < 5; ++i) pose[i] = row[1 + i];
    for (int i = 0; i < 5; ++i) s.vel[i] = row[6 + i];
    for (int i = 0; i < 5; ++i) s.acc[i] = row[11 + i];
    for (int i = 0; i < 5; ++i) q[i] = row[16 + i];
    for (int i = 0; i < 5; ++i) s.qd[i] = row[21 + i];
    for (int i = 0; i < 5; ++i) s.qdd[i] = row[26 + i];
    s.pose = Pose::from_vector(pose);
    s.q = JointState::from_vector(q);
    plan.samples.push_back(s);
  }
  if (!header_seen)
    raise(Errc::io, "'" + path + "' has no plan CSV header");
  return plan;
}

void write_trace_csv(const SimTrace& trace, const std::string& path) {
  std::string text;
  text.reserve(64 + trace.steps.size() * 24 * k_trace_columns);
  if (trace.shutdown) {
    text += "# shutdown_time=";
    append_number(text, trace.shutdown_time);
    text += '\n';
  }
  text += trace_csv_header();
  text += '\n';
  for (std::size_t k = 0; k < trace.steps.size(); ++k) {
    const SimStep& s = trace.steps[k];
    const bool tripped = trace.shutdown && k + 1 == trace.steps.size();
    append_number(text, s.t);
    for (int i = 0; i < 5; ++i) {
      text += ',';
      append_number(text, s.q_des[i]);
    }
    for (int i = 0; i < 5; ++i) {
      text += ',';
      append_number(text, s.q_act[i]);
    }
    for (int i = 0; i < 5; ++i) {
      text += ',';
      append_number(text, s.qd_des[i]);
    }
    for (int i = 0; i < 5; ++i) {
      text += ',';
      append_number(text, s.qd_est[i]);
    }
    for (int i = 0; i < 5; ++i) {
      text += ',';
      append_number(text, s.error[i]);
    }
    for (int i = 0; i < 5; ++i) {
      text += ',';
      append_number(text, s.u[i]);
    }
    text += tripped ? ",1," : ",0,";
    append_number(text, s.cycle_seconds);
    text += '\n';
  }
  spill(path, text);
}

}  // namespace hpkm
